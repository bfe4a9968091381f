//! Attraction domain of the `P+T` coexistence corner `(alpha, 1 - alpha)`.
//!
//! The domain is measured as the share of a cell-centred `G x G` grid of
//! starts in the open rectangle whose trajectories end at `P+T`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{classify_terminal, integrate_to_rest, AmbiguousTerminal, IntegrationError, IntegratorConfig};
use crate::equilibria::{stable_points, EquilibriumLabel, DEFAULT_STABILITY_TOL};
use crate::params::{GameParams, ParamError, PopulationState};

/// Distance within which a terminal state is attributed to a stable point.
pub const CLASSIFY_EPS: f64 = 1e-4;

/// Largest tolerated share of unresolved starts.
pub const MAX_UNRESOLVED_SHARE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasinError {
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Ambiguous(#[from] AmbiguousTerminal),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("grid resolution must be at least 1")]
    EmptyGrid,
    #[error("{unresolved} of {total} trajectories did not settle on a stable point; raise t_max or loosen convergence_eps")]
    TooManyUnresolved { unresolved: u64, total: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasinResult {
    /// Share of resolved starts that end at `P+T`.
    pub fraction: f64,
    /// `fraction * alpha * (1 - alpha)`.
    pub area: f64,
    pub grid_resolution: u32,
    pub attracted: u64,
    /// Starts that hit `t_max` or stopped away from every stable point.
    /// Excluded from the denominator of `fraction`.
    pub unresolved: u64,
    pub total: u64,
}

/// Integrator settings used for basin grids.
///
/// Coarser than [`IntegratorConfig::default`]: only the terminal attractor
/// matters, and the step is far inside RK4's stability region for the
/// eigenvalues of the shipped example configurations.
pub fn basin_integrator_default() -> IntegratorConfig {
    IntegratorConfig {
        step: 0.1,
        t_max: 1e5,
        convergence_eps: 1e-9,
        clamp_eps: 1e-12,
        sample_every: u64::MAX,
    }
}

/// Cell-centred start `(i, j)` of a `g x g` grid.
pub fn grid_start(params: &GameParams, g: u32, i: u32, j: u32) -> PopulationState {
    let g = g as f64;
    PopulationState::at(
        (i as f64 + 0.5) * params.alpha() / g,
        (j as f64 + 0.5) * params.trustees() / g,
    )
}

#[derive(Clone, Copy)]
enum Outcome {
    Coexistence,
    Elsewhere,
    Unresolved,
}

pub fn basin_fraction(params: &GameParams, grid_resolution: u32, cfg: &IntegratorConfig) -> Result<BasinResult, BasinError> {
    if grid_resolution == 0 {
        return Err(BasinError::EmptyGrid);
    }
    cfg.validate()?;
    let g = grid_resolution;
    let total = g as u64 * g as u64;
    let stable = stable_points(params, DEFAULT_STABILITY_TOL);
    let area_scale = params.alpha() * params.trustees();
    if !stable.iter().any(|(l, _)| *l == EquilibriumLabel::PT) {
        return Ok(BasinResult {
            fraction: 0.0,
            area: 0.0,
            grid_resolution: g,
            attracted: 0,
            unresolved: 0,
            total,
        });
    }

    let outcomes: Vec<Outcome> = (0..total)
        .into_par_iter()
        .map(|k| {
            let start = grid_start(params, g, (k / g as u64) as u32, (k % g as u64) as u32);
            let end = integrate_to_rest(&start, params, cfg)?;
            if !end.converged {
                return Ok(Outcome::Unresolved);
            }
            Ok(match classify_terminal(&end.state, &stable, CLASSIFY_EPS)? {
                Some(EquilibriumLabel::PT) => Outcome::Coexistence,
                Some(_) => Outcome::Elsewhere,
                None => Outcome::Unresolved,
            })
        })
        .collect::<Result<_, BasinError>>()?;

    let attracted = outcomes.iter().filter(|o| matches!(o, Outcome::Coexistence)).count() as u64;
    let unresolved = outcomes.iter().filter(|o| matches!(o, Outcome::Unresolved)).count() as u64;
    if unresolved as f64 > MAX_UNRESOLVED_SHARE * total as f64 {
        return Err(BasinError::TooManyUnresolved { unresolved, total });
    }
    let resolved = total - unresolved;
    let fraction = if resolved == 0 { 0.0 } else { attracted as f64 / resolved as f64 };
    Ok(BasinResult {
        fraction,
        area: fraction * area_scale,
        grid_resolution: g,
        attracted,
        unresolved,
        total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Alpha,
    Lambda,
}

impl SweepParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Lambda => "lambda",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub result: BasinResult,
}

/// [`basin_fraction`] at each axis value, in ascending order of the value.
pub fn basin_sweep(
    axis: &SweepAxis,
    base: &GameParams,
    grid_resolution: u32,
    cfg: &IntegratorConfig,
) -> Result<Vec<SweepPoint>, BasinError> {
    let mut values = axis.values.clone();
    values.sort_by(f64::total_cmp);
    values
        .into_iter()
        .map(|value| {
            let params = match axis.param {
                SweepParam::Alpha => base.with_alpha(value)?,
                SweepParam::Lambda => base.with_lambda(value)?,
            };
            Ok(SweepPoint {
                value,
                result: basin_fraction(&params, grid_resolution, cfg)?,
            })
        })
        .collect()
}
