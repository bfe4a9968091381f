//! Fixed points of the reduced replicator system and their stability.
//!
//! Besides the four corners, up to three further fixed points sit on the
//! edges of the rectangle. Each is the root of a strictly increasing
//! function of one variable:
//!
//! * `phi1(x) = lambda S(alpha + x) - r R_T S(alpha)` on `[0, 1 - alpha]`
//!   gives `P+T+U` at `(alpha, x)`;
//! * `phi2(x) = f(x, 0)` on `[0, alpha]` gives `P+M+U` at `(x, 0)`;
//! * `phi3(x) = f(x, 1 - alpha)` on `[0, alpha]` gives `P+M+T` at
//!   `(x, 1 - alpha)`;
//!
//! where `S(z) = sum_{k=0}^{N-2} z^k`. All roots are found by bisection.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::params::{GameParams, PopulationState};
use crate::payoffs::{
    f_partial_xi, f_partial_xt, g_partial_xt, payoff_difference_f, payoff_difference_g,
};
use crate::poly::{geom_sum, ipow};

/// Default eigenvalue tolerance for stability verdicts.
pub const DEFAULT_STABILITY_TOL: f64 = 1e-9;

/// Resolution of the `x_t` scan used to bracket interior fixed points.
pub const INTERIOR_SCAN_STEP: f64 = 1e-4;

const MAX_BISECTIONS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
pub enum EquilibriumLabel {
    #[serde(rename = "M+U")]
    MU,
    #[serde(rename = "M+T")]
    MT,
    #[serde(rename = "P+U")]
    PU,
    #[serde(rename = "P+T")]
    PT,
    #[serde(rename = "P+T+U")]
    PTU,
    #[serde(rename = "P+M+U")]
    PMU,
    #[serde(rename = "P+M+T")]
    PMT,
    #[serde(rename = "INTERIOR")]
    Interior,
}

impl EquilibriumLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            EquilibriumLabel::MU => "M+U",
            EquilibriumLabel::MT => "M+T",
            EquilibriumLabel::PU => "P+U",
            EquilibriumLabel::PT => "P+T",
            EquilibriumLabel::PTU => "P+T+U",
            EquilibriumLabel::PMU => "P+M+U",
            EquilibriumLabel::PMT => "P+M+T",
            EquilibriumLabel::Interior => "INTERIOR",
        }
    }
}

impl fmt::Display for EquilibriumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for EquilibriumLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl FromStr for EquilibriumLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "M+U" => EquilibriumLabel::MU,
            "M+T" => EquilibriumLabel::MT,
            "P+U" => EquilibriumLabel::PU,
            "P+T" => EquilibriumLabel::PT,
            "P+T+U" => EquilibriumLabel::PTU,
            "P+M+U" => EquilibriumLabel::PMU,
            "P+M+T" => EquilibriumLabel::PMT,
            "INTERIOR" => EquilibriumLabel::Interior,
            other => return Err(format!("unknown equilibrium label {other:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Marginal => "marginal",
        })
    }
}

/// Row-major 2x2 matrix.
pub type Matrix2 = [[f64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub label: EquilibriumLabel,
    pub location: PopulationState,
    pub jacobian: Matrix2,
    #[serde(serialize_with = "serialize_eigenvalues")]
    pub eigenvalues: [Complex64; 2],
    pub stability: Stability,
}

fn serialize_eigenvalues<S: Serializer>(eig: &[Complex64; 2], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    for z in eig {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl EquilibriumReport {
    /// Evaluate the Jacobian, its eigenvalues and the stability verdict at
    /// `location`.
    pub fn evaluate(label: EquilibriumLabel, location: PopulationState, params: &GameParams, tol: f64) -> Self {
        let jacobian = jacobian(&location, params);
        let eigenvalues = eigenvalues(&jacobian);
        Self {
            label,
            location,
            jacobian,
            eigenvalues,
            stability: stability_of(&eigenvalues, tol),
        }
    }

    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues[0].re.max(self.eigenvalues[1].re)
    }
}

/// Investor-fraction threshold and the two punishment thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    pub alpha_star: f64,
    /// `r R_T (1 - alpha^(N-1)) / ((N-1)(1-alpha))`.
    pub lambda_low: f64,
    /// `r R_T`.
    pub lambda_high: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error(
        "interior fixed point ({x_i}, {x_t}) has no eigenvalue with positive real part \
         (max real part {max_re}); interior points must be unstable"
    )]
    StableInterior { x_i: f64, x_t: f64, max_re: f64 },
}

/// Bisection for a sign change of `f` on `[lo, hi]`. Runs until the
/// midpoint is no longer representable between the endpoints, an exact
/// zero is hit, or 200 halvings.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let lo_negative = f(lo) < 0.0;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `(N-1) a - (N-2) a^(N-1) - 1`; negative below `alpha_star`, positive above.
pub fn alpha_star_criterion(n: u32, alpha: f64) -> f64 {
    (n - 1) as f64 * alpha - (n - 2) as f64 * ipow(alpha, n - 1) - 1.0
}

/// Unique root of [`alpha_star_criterion`] in `(0, 1)`; exactly 1 for `N = 3`.
pub fn alpha_star(n: u32) -> f64 {
    assert!(n >= 3, "alpha_star needs N >= 3");
    if n == 3 {
        return 1.0;
    }
    // Maximiser of the criterion: (N-2) a^(N-2) = 1.
    let m = n - 2;
    let peak = bisect(|a| m as f64 * ipow(a, m) - 1.0, 0.0, 1.0);
    bisect(|a| alpha_star_criterion(n, a), 0.0, peak)
}

pub fn thresholds(params: &GameParams) -> ThresholdSet {
    let rr = params.r() * params.r_t();
    ThresholdSet {
        alpha_star: alpha_star(params.n()),
        lambda_low: rr * params.alpha_geom() / (params.n() - 1) as f64,
        lambda_high: rr,
    }
}

pub fn phi1(x: f64, params: &GameParams) -> f64 {
    params.lambda() * geom_sum(params.alpha() + x, params.n() - 2)
        - params.r() * params.r_t() * params.alpha_geom()
}

pub fn phi2(x: f64, params: &GameParams) -> f64 {
    payoff_difference_f(x, 0.0, params)
}

pub fn phi3(x: f64, params: &GameParams) -> f64 {
    payoff_difference_f(x, params.trustees(), params)
}

/// `x_t` of the `P+T+U` fixed point on the edge `x_i = alpha`.
pub fn root_phi1(params: &GameParams) -> Option<f64> {
    let hi = params.trustees();
    (phi1(0.0, params) < 0.0 && phi1(hi, params) > 0.0).then(|| bisect(|x| phi1(x, params), 0.0, hi))
}

/// `x_i` of the `P+M+U` fixed point on the edge `x_t = 0`.
pub fn root_phi2(params: &GameParams) -> Option<f64> {
    let hi = params.alpha();
    (phi2(0.0, params) < 0.0 && phi2(hi, params) > 0.0).then(|| bisect(|x| phi2(x, params), 0.0, hi))
}

/// `x_i` of the `P+M+T` fixed point on the edge `x_t = 1 - alpha`, which
/// always exists.
pub fn root_phi3(params: &GameParams) -> f64 {
    let hi = params.alpha();
    debug_assert!(phi3(0.0, params) < 0.0 && phi3(hi, params) > 0.0);
    bisect(|x| phi3(x, params), 0.0, hi)
}

/// All boundary fixed points: the corners first, then whichever edge
/// points exist.
pub fn enumerate_boundary_equilibria(params: &GameParams) -> Vec<(EquilibriumLabel, PopulationState)> {
    let a = params.alpha();
    let t = params.trustees();
    let mut out = vec![
        (EquilibriumLabel::MU, PopulationState::at(0.0, 0.0)),
        (EquilibriumLabel::MT, PopulationState::at(0.0, t)),
        (EquilibriumLabel::PU, PopulationState::at(a, 0.0)),
        (EquilibriumLabel::PT, PopulationState::at(a, t)),
    ];
    if let Some(x_t) = root_phi1(params) {
        out.push((EquilibriumLabel::PTU, PopulationState::at(a, x_t)));
    }
    if let Some(x_i) = root_phi2(params) {
        out.push((EquilibriumLabel::PMU, PopulationState::at(x_i, 0.0)));
    }
    out.push((EquilibriumLabel::PMT, PopulationState::at(root_phi3(params), t)));
    out
}

/// Analytic Jacobian of [`crate::dynamics::replicator_rhs`].
pub fn jacobian(loc: &PopulationState, params: &GameParams) -> Matrix2 {
    let PopulationState { x_i, x_t } = *loc;
    let a = params.alpha();
    let t = params.trustees();
    let t_v = params.t_v();
    let lambda = params.lambda();
    let f = payoff_difference_f(x_i, x_t, params);
    let g = payoff_difference_g(x_i, x_t, params);
    let inv = lambda * t_v / a;
    let tru = t_v / t;
    [
        [
            inv * ((a - 2.0 * x_i) * f + x_i * (a - x_i) * f_partial_xi(x_i, params)),
            inv * x_i * (a - x_i) * f_partial_xt(x_t, params),
        ],
        [
            lambda * tru * x_t * (1.0 - ipow(a + x_t, params.n() - 1)),
            tru * ((t - 2.0 * x_t) * g + x_t * (t - x_t) * g_partial_xt(x_i, x_t, params)),
        ],
    ]
}

/// Eigenvalues of a 2x2 matrix from its trace and determinant, larger real
/// part first. Triangular matrices return their diagonal exactly.
pub fn eigenvalues(m: &Matrix2) -> [Complex64; 2] {
    let [[a, b], [c, d]] = *m;
    if b == 0.0 || c == 0.0 {
        let (hi, lo) = if a >= d { (a, d) } else { (d, a) };
        return [Complex64::new(hi, 0.0), Complex64::new(lo, 0.0)];
    }
    let half_trace = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let disc = half_gap * half_gap + b * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        // Larger-magnitude root first, the other via det / root.
        let big = half_trace + s.copysign(half_trace);
        let det = a * d - b * c;
        let small = if big != 0.0 { det / big } else { half_trace - s };
        let (hi, lo) = if big >= small { (big, small) } else { (small, big) };
        [Complex64::new(hi, 0.0), Complex64::new(lo, 0.0)]
    } else {
        let w = (-disc).sqrt();
        [Complex64::new(half_trace, w), Complex64::new(half_trace, -w)]
    }
}

fn stability_of(eig: &[Complex64; 2], tol: f64) -> Stability {
    if eig.iter().all(|z| z.re < -tol) {
        Stability::Stable
    } else if eig.iter().any(|z| z.re > tol) {
        Stability::Unstable
    } else {
        Stability::Marginal
    }
}

/// Stability verdict of an evaluated fixed point under tolerance `tol`.
pub fn classify_stability(report: &EquilibriumReport, tol: f64) -> Stability {
    stability_of(&report.eigenvalues, tol)
}

/// Boundary fixed points with Jacobians and verdicts.
pub fn analyze_boundary(params: &GameParams, tol: f64) -> Vec<EquilibriumReport> {
    enumerate_boundary_equilibria(params)
        .into_iter()
        .map(|(label, loc)| EquilibriumReport::evaluate(label, loc, params, tol))
        .collect()
}

/// Labels of the boundary fixed points classified stable.
pub fn stable_labels(params: &GameParams, tol: f64) -> BTreeSet<EquilibriumLabel> {
    analyze_boundary(params, tol)
        .into_iter()
        .filter(|r| r.stability == Stability::Stable)
        .map(|r| r.label)
        .collect()
}

/// Stable boundary fixed points as `(label, location)` pairs.
pub fn stable_points(params: &GameParams, tol: f64) -> Vec<(EquilibriumLabel, PopulationState)> {
    analyze_boundary(params, tol)
        .into_iter()
        .filter(|r| r.stability == Stability::Stable)
        .map(|r| (r.label, r.location))
        .collect()
}

/// `x_i` solving `g(x_i, x_t) = 0` for given `x_t`.
fn investor_nullcline(x_t: f64, params: &GameParams) -> f64 {
    params.defection_gain() / (params.lambda() * geom_sum(params.alpha() + x_t, params.n() - 2))
}

/// Interior fixed points, located on the curve `g = 0` by scanning `x_t` at
/// [`INTERIOR_SCAN_STEP`] for sign changes of `f` and bisecting each one.
///
/// Every point found is checked to have an eigenvalue with positive real
/// part.
pub fn find_interior_fixed_points(params: &GameParams, tol: f64) -> Result<Vec<EquilibriumReport>, EquilibriumError> {
    let a = params.alpha();
    let t = params.trustees();
    let cells = (t / INTERIOR_SCAN_STEP).ceil() as u64;
    let h = t / cells as f64;
    let along = |x_t: f64| payoff_difference_f(investor_nullcline(x_t, params), x_t, params);
    let inside = |x_t: f64| {
        let x_i = investor_nullcline(x_t, params);
        x_i > 0.0 && x_i < a
    };

    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..cells {
        let x_t = k as f64 * h;
        if !inside(x_t) {
            prev = None;
            continue;
        }
        let v = along(x_t);
        if v == 0.0 {
            roots.push(x_t);
            prev = None;
            continue;
        }
        if let Some((x0, v0)) = prev {
            if (v0 < 0.0) != (v < 0.0) {
                roots.push(bisect(along, x0, x_t));
            }
        }
        prev = Some((x_t, v));
    }

    let mut out = Vec::with_capacity(roots.len());
    for x_t in roots {
        let loc = PopulationState::at(investor_nullcline(x_t, params), x_t);
        let report = EquilibriumReport::evaluate(EquilibriumLabel::Interior, loc, params, tol);
        if !(report.max_real_part() > 0.0) {
            return Err(EquilibriumError::StableInterior {
                x_i: loc.x_i,
                x_t: loc.x_t,
                max_re: report.max_real_part(),
            });
        }
        out.push(report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::replicator_rhs;

    fn fig(alpha: f64, lambda: f64, n: u32) -> GameParams {
        GameParams::with_unit_stake(n, alpha, lambda, 0.05, 2.0).unwrap()
    }

    /// Independent bracket-free bisection used as an oracle for alpha_star.
    fn alpha_star_oracle(n: u32) -> f64 {
        // Fine grid to locate the first sign change, then plain halving.
        let h = |a: f64| (n - 1) as f64 * a - (n - 2) as f64 * a.powi(n as i32 - 1) - 1.0;
        let grid = 100_000;
        let mut lo = 0.0;
        let mut hi = 1.0;
        for k in 1..grid {
            let a = k as f64 / grid as f64;
            if h(a) > 0.0 {
                hi = a;
                lo = (k - 1) as f64 / grid as f64;
                break;
            }
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if h(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn alpha_star_values() {
        assert_eq!(alpha_star(3), 1.0);
        let a20 = alpha_star(20);
        assert!((a20 - 0.052632).abs() < 1e-6);
        assert!((a20 - 1.0 / 19.0).abs() < 1e-15);
        let a10 = alpha_star(10);
        assert!(a10 > 0.111 && a10 < 0.112, "{a10}");
        for n in [4, 5, 7, 10, 20, 40] {
            assert!((alpha_star(n) - alpha_star_oracle(n)).abs() < 1e-12, "N = {n}");
        }
    }

    #[test]
    fn fig2_has_five_boundary_points() {
        let p = fig(0.1, 0.01, 10);
        assert!(thresholds(&p).lambda_low > 0.01);
        assert!((thresholds(&p).lambda_low - 0.012345679).abs() < 1e-8);
        assert_eq!(root_phi1(&p), None);
        assert_eq!(root_phi2(&p), None);
        assert_eq!(enumerate_boundary_equilibria(&p).len(), 5);
    }

    #[test]
    fn fig5_has_seven_boundary_points() {
        let p = fig(0.2, 0.05, 10);
        let x1 = root_phi1(&p).unwrap();
        let x2 = root_phi2(&p).unwrap();
        let x3 = root_phi3(&p);
        assert!(phi1(x1, &p).abs() < 1e-10);
        assert!(phi2(x2, &p).abs() < 1e-10);
        assert!(phi3(x3, &p).abs() < 1e-10);
        assert_eq!(enumerate_boundary_equilibria(&p).len(), 7);
    }

    #[test]
    fn fig3_fig4_fig6_counts() {
        let labels = |p: &GameParams| -> Vec<EquilibriumLabel> {
            enumerate_boundary_equilibria(p).into_iter().map(|(l, _)| l).collect()
        };
        use EquilibriumLabel::*;
        assert_eq!(labels(&fig(0.2, 0.01, 10)), vec![MU, MT, PU, PT, PMU, PMT]);
        assert_eq!(labels(&fig(0.1, 0.05, 10)), vec![MU, MT, PU, PT, PTU, PMT]);
        assert_eq!(labels(&fig(0.1, 0.2, 10)).len(), 5);
    }

    #[test]
    fn origin_jacobian() {
        let p = fig(0.1, 0.05, 10);
        let j = jacobian(&PopulationState::at(0.0, 0.0), &p);
        let a: f64 = 0.1;
        let j11 = 0.05 * ((1.0 - a).powi(9) + 2.0 * a.powi(9) - 2.0);
        let j22 = -a * 0.05 * 2.0 * (1.0 - a.powi(9)) / (1.0 - a);
        assert!((j[0][0] - j11).abs() < 1e-15);
        assert!((j[1][1] - j22).abs() < 1e-15);
        assert_eq!(j[0][1], 0.0);
        assert_eq!(j[1][0], 0.0);
    }

    #[test]
    fn coexistence_corner_jacobian_fig4() {
        let p = fig(0.1, 0.05, 10);
        let j = jacobian(&PopulationState::at(0.1, 0.9), &p);
        let (a, n, lam): (f64, f64, f64) = (0.1, 10.0, 0.05);
        let j11 = -lam * ((n - 1.0) * a - (n - 1.0) * a.powi(9));
        let j22 = -a * (lam * (n - 1.0) - 0.1 * (1.0 - a.powi(9)) / (1.0 - a));
        assert!((j[0][0] - j11).abs() < 1e-14, "{} vs {j11}", j[0][0]);
        assert!((j[1][1] - j22).abs() < 1e-14, "{} vs {j22}", j[1][1]);
        assert!(j11 < 0.0 && j22 < 0.0);
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let p = fig(0.2, 0.05, 10);
        let h = 1e-6;
        for &(xi, xt) in &[(0.07, 0.33), (0.15, 0.7), (0.01, 0.05)] {
            let j = jacobian(&PopulationState::at(xi, xt), &p);
            let rhs = |a: f64, b: f64| replicator_rhs(&PopulationState::at(a, b), &p);
            let dxi_p = rhs(xi + h, xt);
            let dxi_m = rhs(xi - h, xt);
            let dxt_p = rhs(xi, xt + h);
            let dxt_m = rhs(xi, xt - h);
            let fd = [
                [(dxi_p.dx_i - dxi_m.dx_i) / (2.0 * h), (dxt_p.dx_i - dxt_m.dx_i) / (2.0 * h)],
                [(dxi_p.dx_t - dxi_m.dx_t) / (2.0 * h), (dxt_p.dx_t - dxt_m.dx_t) / (2.0 * h)],
            ];
            for r in 0..2 {
                for c in 0..2 {
                    assert!((j[r][c] - fd[r][c]).abs() < 1e-6, "J[{r}][{c}] at ({xi},{xt})");
                }
            }
        }
    }

    #[test]
    fn eigenvalue_closed_form() {
        let e = eigenvalues(&[[2.0, 1.0], [1.0, 2.0]]);
        assert!((e[0].re - 3.0).abs() < 1e-15 && (e[1].re - 1.0).abs() < 1e-15);
        let e = eigenvalues(&[[0.0, -1.0], [1.0, 0.0]]);
        assert!((e[0].im.abs() - 1.0).abs() < 1e-15 && e[0].re == 0.0);
        let e = eigenvalues(&[[-1e-3, 5.0], [0.0, -0.5]]);
        assert_eq!(e[0].re, -1e-3);
        assert_eq!(e[1].re, -0.5);
    }

    #[test]
    fn corner_verdicts() {
        let f3 = fig(0.2, 0.01, 10);
        let f4 = fig(0.1, 0.05, 10);
        let verdict = |p: &GameParams, l: EquilibriumLabel| {
            analyze_boundary(p, DEFAULT_STABILITY_TOL)
                .into_iter()
                .find(|r| r.label == l)
                .unwrap()
                .stability
        };
        assert_eq!(verdict(&f3, EquilibriumLabel::PU), Stability::Stable);
        assert_eq!(verdict(&f4, EquilibriumLabel::PU), Stability::Unstable);
        assert_eq!(verdict(&f4, EquilibriumLabel::MT), Stability::Unstable);
        assert_eq!(verdict(&f4, EquilibriumLabel::MU), Stability::Stable);
    }

    #[test]
    fn marginal_is_reported() {
        let r = EquilibriumReport {
            label: EquilibriumLabel::MU,
            location: PopulationState::at(0.0, 0.0),
            jacobian: [[-1.0, 0.0], [0.0, 1e-12]],
            eigenvalues: eigenvalues(&[[-1.0, 0.0], [0.0, 1e-12]]),
            stability: Stability::Marginal,
        };
        assert_eq!(classify_stability(&r, 1e-9), Stability::Marginal);
        assert_eq!(classify_stability(&r, 1e-13), Stability::Unstable);
    }

    #[test]
    fn fig5_interior_point_is_unstable() {
        let p = fig(0.2, 0.05, 10);
        let found = find_interior_fixed_points(&p, DEFAULT_STABILITY_TOL).unwrap();
        assert_eq!(found.len(), 1);
        let r = &found[0];
        let PopulationState { x_i, x_t } = r.location;
        assert!(x_i > 0.0 && x_i < 0.2 && x_t > 0.0 && x_t < 0.8);
        assert!(payoff_difference_f(x_i, x_t, &p).abs() < 1e-10);
        assert!(payoff_difference_g(x_i, x_t, &p).abs() < 1e-10);
        assert_eq!(r.stability, Stability::Unstable);
    }

    #[test]
    fn fig2_has_no_interior_point() {
        let p = fig(0.1, 0.01, 10);
        assert!(find_interior_fixed_points(&p, DEFAULT_STABILITY_TOL).unwrap().is_empty());
    }

    #[test]
    fn label_round_trip() {
        for l in [
            EquilibriumLabel::MU,
            EquilibriumLabel::PMT,
            EquilibriumLabel::Interior,
        ] {
            assert_eq!(l.as_str().parse::<EquilibriumLabel>().unwrap(), l);
        }
    }
}
