//! Classification of parameter points into the six dynamical regimes and
//! the regime map over the `(lambda, alpha)` plane.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::equilibria::{thresholds, EquilibriumLabel, ThresholdSet};
use crate::params::{GameParams, ParamError, RawParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
    /// A threshold comparison fell within tolerance.
    Boundary,
}

impl CaseId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseId::Case1 => "Case1",
            CaseId::Case2 => "Case2",
            CaseId::Case3 => "Case3",
            CaseId::Case4 => "Case4",
            CaseId::Case5 => "Case5",
            CaseId::Case6 => "Case6",
            CaseId::Boundary => "Boundary",
        }
    }

    /// Stable boundary equilibria in this regime.
    pub fn stable_set(&self) -> BTreeSet<EquilibriumLabel> {
        use EquilibriumLabel::*;
        let labels: &[EquilibriumLabel] = match self {
            CaseId::Case1 => &[MU],
            CaseId::Case2 => &[MU, PU],
            CaseId::Case3 | CaseId::Case5 | CaseId::Case6 => &[MU, PT],
            CaseId::Case4 => &[MU, PU, PT],
            CaseId::Boundary => &[],
        };
        labels.iter().copied().collect()
    }

    /// Number of boundary fixed points in this regime.
    pub fn boundary_count(&self) -> Option<usize> {
        match self {
            CaseId::Case1 | CaseId::Case5 => Some(5),
            CaseId::Case2 | CaseId::Case3 | CaseId::Case6 => Some(6),
            CaseId::Case4 => Some(7),
            CaseId::Boundary => None,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeVerdict {
    pub case_id: CaseId,
    pub stable_set: BTreeSet<EquilibriumLabel>,
    pub thresholds: ThresholdSet,
}

/// Compare `alpha` against `alpha_star` and `lambda` against the two
/// punishment thresholds. Any comparison within `tol` yields
/// [`CaseId::Boundary`].
pub fn classify_regime(params: &GameParams, tol: f64) -> RegimeVerdict {
    let th = thresholds(params);
    let alpha = params.alpha();
    let lambda = params.lambda();
    let on_edge = (alpha - th.alpha_star).abs() <= tol
        || (lambda - th.lambda_low).abs() <= tol
        || (lambda - th.lambda_high).abs() <= tol;
    let case_id = if on_edge {
        CaseId::Boundary
    } else {
        let many_investors = alpha > th.alpha_star;
        match (lambda < th.lambda_low, lambda < th.lambda_high, many_investors) {
            (true, _, false) => CaseId::Case1,
            (true, _, true) => CaseId::Case2,
            (false, true, false) => CaseId::Case3,
            (false, true, true) => CaseId::Case4,
            (false, false, false) => CaseId::Case5,
            (false, false, true) => CaseId::Case6,
        }
    };
    RegimeVerdict {
        case_id,
        stable_set: case_id.stable_set(),
        thresholds: th,
    }
}

/// Fixed parameters of a regime map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapFixed {
    pub n: u32,
    pub r: f64,
    pub r_t: f64,
    pub t_v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeCell {
    pub alpha: f64,
    pub lambda: f64,
    pub case_id: CaseId,
}

/// Row-major grid: one row per `alpha`, one column per `lambda`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeGrid {
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub cells: Vec<RegimeCell>,
}

impl RegimeGrid {
    pub fn get(&self, alpha_idx: usize, lambda_idx: usize) -> &RegimeCell {
        &self.cells[alpha_idx * self.lambdas.len() + lambda_idx]
    }
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|k| {
                if k == count - 1 {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// Regime map over `[lambda_lo, lambda_hi] x [alpha_lo, alpha_hi]` with
/// `resolution` points per axis (endpoints included).
pub fn regime_map(
    lambda_range: (f64, f64),
    alpha_range: (f64, f64),
    resolution: (usize, usize),
    fixed: MapFixed,
    tol: f64,
) -> Result<RegimeGrid, ParamError> {
    let lambdas = linspace(lambda_range.0, lambda_range.1, resolution.0);
    let alphas = linspace(alpha_range.0, alpha_range.1, resolution.1);
    let mut cells = Vec::with_capacity(lambdas.len() * alphas.len());
    for &alpha in &alphas {
        for &lambda in &lambdas {
            let params = GameParams::new(RawParams {
                n: fixed.n,
                alpha,
                lambda,
                r: fixed.r,
                r_t: fixed.r_t,
                t_v: fixed.t_v,
            })?;
            cells.push(RegimeCell {
                alpha,
                lambda,
                case_id: classify_regime(&params, tol).case_id,
            });
        }
    }
    Ok(RegimeGrid { alphas, lambdas, cells })
}
