//! Game parameters and the reduced population state.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{geom_sum, ipow};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("N must exceed 2 (got {0})")]
    GroupTooSmall(u32),
    #[error("alpha must lie strictly between 0 and 1 (got {0})")]
    AlphaOutOfRange(f64),
    #[error("lambda must be positive (got {0})")]
    LambdaNotPositive(f64),
    #[error("r must lie strictly between 0 and 1 (got {0}); R_U = (1+r)R_T must satisfy R_T < R_U < 2R_T")]
    TemptationOutOfRange(f64),
    #[error("R_T must exceed 1 (got {0})")]
    TrustworthyFactorTooSmall(f64),
    #[error("t_v must be positive (got {0})")]
    StakeNotPositive(f64),
    #[error("state ({x_i}, {x_t}) lies outside [0, {alpha}] x [0, {trustees}]")]
    StateOutOfRange {
        x_i: f64,
        x_t: f64,
        alpha: f64,
        trustees: f64,
    },
}

/// Unvalidated parameter values, as read from a config file or a C caller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParams {
    pub n: u32,
    pub alpha: f64,
    pub lambda: f64,
    pub r: f64,
    pub r_t: f64,
    #[serde(default = "default_stake")]
    pub t_v: f64,
}

fn default_stake() -> f64 {
    1.0
}

/// Validated game parameters.
///
/// Construction goes through [`GameParams::new`], which enforces
/// `N > 2`, `0 < alpha < 1`, `lambda > 0`, `0 < r < 1`, `R_T > 1` and
/// `t_v > 0`. The untrustworthy multiplier `R_U = (1 + r) R_T` and a few
/// powers of `alpha` that every payoff evaluation needs are cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams {
    n: u32,
    alpha: f64,
    lambda: f64,
    r: f64,
    r_t: f64,
    t_v: f64,
    r_u: f64,
    alpha_pow: f64,
    alpha_geom: f64,
}

impl GameParams {
    pub fn new(raw: RawParams) -> Result<Self, ParamError> {
        let RawParams {
            n,
            alpha,
            lambda,
            r,
            r_t,
            t_v,
        } = raw;
        if n < 3 {
            return Err(ParamError::GroupTooSmall(n));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ParamError::AlphaOutOfRange(alpha));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(ParamError::LambdaNotPositive(lambda));
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(ParamError::TemptationOutOfRange(r));
        }
        if !(r_t > 1.0) || !r_t.is_finite() {
            return Err(ParamError::TrustworthyFactorTooSmall(r_t));
        }
        if !(t_v > 0.0) || !t_v.is_finite() {
            return Err(ParamError::StakeNotPositive(t_v));
        }
        Ok(Self {
            n,
            alpha,
            lambda,
            r,
            r_t,
            t_v,
            r_u: (1.0 + r) * r_t,
            alpha_pow: ipow(alpha, n - 1),
            alpha_geom: geom_sum(alpha, n - 2),
        })
    }

    /// Convenience constructor with `t_v = 1`.
    pub fn with_unit_stake(n: u32, alpha: f64, lambda: f64, r: f64, r_t: f64) -> Result<Self, ParamError> {
        Self::new(RawParams {
            n,
            alpha,
            lambda,
            r,
            r_t,
            t_v: 1.0,
        })
    }

    pub fn raw(&self) -> RawParams {
        RawParams {
            n: self.n,
            alpha: self.alpha,
            lambda: self.lambda,
            r: self.r,
            r_t: self.r_t,
            t_v: self.t_v,
        }
    }

    /// Copy with a different investor fraction.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self, ParamError> {
        Self::new(RawParams { alpha, ..self.raw() })
    }

    /// Copy with a different punishment intensity.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self, ParamError> {
        Self::new(RawParams { lambda, ..self.raw() })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn r_t(&self) -> f64 {
        self.r_t
    }
    pub fn r_u(&self) -> f64 {
        self.r_u
    }
    pub fn t_v(&self) -> f64 {
        self.t_v
    }

    /// Fraction of trustees, `1 - alpha`.
    pub fn trustees(&self) -> f64 {
        1.0 - self.alpha
    }

    /// `alpha^(N-1)`: probability that all N-1 co-players are investors.
    pub(crate) fn alpha_pow(&self) -> f64 {
        self.alpha_pow
    }

    /// `(1 - alpha^(N-1)) / (1 - alpha)` as a finite sum.
    pub(crate) fn alpha_geom(&self) -> f64 {
        self.alpha_geom
    }

    /// Expected gain `alpha r R_T (1-alpha^(N-1))/(1-alpha)` of a trustee
    /// from defecting, in units of `t_v`.
    pub(crate) fn defection_gain(&self) -> f64 {
        self.alpha * self.r * self.r_t * self.alpha_geom
    }
}

impl Serialize for GameParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GameParams", 7)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("alpha", &self.alpha)?;
        st.serialize_field("lambda", &self.lambda)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("r_t", &self.r_t)?;
        st.serialize_field("r_u", &self.r_u)?;
        st.serialize_field("t_v", &self.t_v)?;
        st.end()
    }
}

/// Reduced population state `(x_i, x_t)` on `[0, alpha] x [0, 1 - alpha]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationState {
    /// Punishing investors.
    pub x_i: f64,
    /// Trustworthy trustees.
    pub x_t: f64,
}

impl PopulationState {
    /// Checked constructor.
    pub fn new(x_i: f64, x_t: f64, params: &GameParams) -> Result<Self, ParamError> {
        let alpha = params.alpha();
        let trustees = params.trustees();
        if !(0.0..=alpha).contains(&x_i) || !(0.0..=trustees).contains(&x_t) {
            return Err(ParamError::StateOutOfRange {
                x_i,
                x_t,
                alpha,
                trustees,
            });
        }
        Ok(Self { x_i, x_t })
    }

    /// Unchecked constructor; callers guarantee the rectangle invariant.
    pub const fn at(x_i: f64, x_t: f64) -> Self {
        Self { x_i, x_t }
    }

    /// Normal investors, `alpha - x_i`.
    pub fn y_i(&self, params: &GameParams) -> f64 {
        params.alpha() - self.x_i
    }

    /// Untrustworthy trustees, `1 - alpha - x_t`.
    pub fn y_t(&self, params: &GameParams) -> f64 {
        params.trustees() - self.x_t
    }

    pub fn distance(&self, other: &PopulationState) -> f64 {
        (self.x_i - other.x_i).hypot(self.x_t - other.x_t)
    }
}
