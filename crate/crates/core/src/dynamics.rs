//! Reduced replicator dynamics on the `(x_i, x_t)` rectangle and a
//! fixed-step RK4 integrator.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibria::EquilibriumLabel;
use crate::params::{GameParams, PopulationState};
use crate::payoffs::{expected_payoffs, payoff_difference_f, payoff_difference_g};

/// Time derivative `(dx_i/dt, dx_t/dt)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorField2 {
    pub dx_i: f64,
    pub dx_t: f64,
}

impl VectorField2 {
    pub fn max_norm(&self) -> f64 {
        self.dx_i.abs().max(self.dx_t.abs())
    }
}

/// Replicator vector field in factored form:
///
/// ```text
/// dx_i/dt = (lambda t_v / alpha)     x_i (alpha - x_i)     f(x_i, x_t)
/// dx_t/dt = (t_v / (1 - alpha))      x_t (1 - alpha - x_t) g(x_i, x_t)
/// ```
///
/// The edge factors vanish exactly on the rectangle boundary.
pub fn replicator_rhs(state: &PopulationState, params: &GameParams) -> VectorField2 {
    let PopulationState { x_i, x_t } = *state;
    let alpha = params.alpha();
    let trustees = params.trustees();
    let t_v = params.t_v();
    let f = payoff_difference_f(x_i, x_t, params);
    let g = payoff_difference_g(x_i, x_t, params);
    VectorField2 {
        dx_i: params.lambda() * t_v / alpha * x_i * (alpha - x_i) * f,
        dx_t: t_v / trustees * x_t * (trustees - x_t) * g,
    }
}

/// The same vector field written as `x_i (f_P - phi_i)`, `x_t (f_T - phi_t)`
/// from the closed-form expected payoffs. Used to cross-check
/// [`replicator_rhs`].
pub fn replicator_rhs_unfactored(state: &PopulationState, params: &GameParams) -> VectorField2 {
    let e = expected_payoffs(state, params);
    VectorField2 {
        dx_i: state.x_i * (e.f_p - e.investor_average(state, params)),
        dx_t: state.x_t * (e.f_t - e.trustee_average(state, params)),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error("invalid integrator setting: {0}")]
    InvalidConfig(&'static str),
    #[error("trajectory left the state rectangle at t = {t}: ({x_i}, {x_t})")]
    LeftDomain { t: f64, x_i: f64, x_t: f64 },
}

/// Settings for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub step: f64,
    pub t_max: f64,
    /// Halt once the max-norm of the vector field drops below this.
    pub convergence_eps: f64,
    /// Overshoots of the rectangle smaller than this are clamped back.
    pub clamp_eps: f64,
    /// Record every `sample_every`-th step.
    pub sample_every: u64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            step: 0.01,
            t_max: 1e6,
            convergence_eps: 1e-10,
            clamp_eps: 1e-12,
            sample_every: 100,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), IntegrationError> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(IntegrationError::InvalidConfig("step must be positive"));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(IntegrationError::InvalidConfig("t_max must be positive"));
        }
        if !(self.convergence_eps > 0.0) {
            return Err(IntegrationError::InvalidConfig("convergence_eps must be positive"));
        }
        if !(self.clamp_eps >= 0.0) {
            return Err(IntegrationError::InvalidConfig("clamp_eps must be non-negative"));
        }
        if self.sample_every == 0 {
            return Err(IntegrationError::InvalidConfig("sample_every must be at least 1"));
        }
        Ok(())
    }

    fn max_steps(&self) -> u64 {
        (self.t_max / self.step).ceil() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: PopulationState,
}

/// Where an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Endpoint {
    pub state: PopulationState,
    pub time: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Decimated samples; the first is the start and the last the terminal.
    pub samples: Vec<TrajectorySample>,
    /// Number of integrator steps between consecutive recorded samples
    /// (except possibly the final one).
    pub sample_stride: u64,
    pub terminal: PopulationState,
    pub converged: bool,
    pub terminal_label: Option<EquilibriumLabel>,
}

impl Trajectory {
    /// Label the terminal state against known stable points.
    pub fn classify(
        &mut self,
        stable_points: &[(EquilibriumLabel, PopulationState)],
        eps: f64,
    ) -> Result<Option<EquilibriumLabel>, AmbiguousTerminal> {
        self.terminal_label = classify_terminal(&self.terminal, stable_points, eps)?;
        Ok(self.terminal_label)
    }
}

fn offset(s: &PopulationState, k: &VectorField2, h: f64) -> PopulationState {
    PopulationState::at(s.x_i + h * k.dx_i, s.x_t + h * k.dx_t)
}

fn clamp_axis(v: f64, hi: f64, eps: f64) -> Option<f64> {
    if v < 0.0 {
        (v >= -eps).then_some(0.0)
    } else if v > hi {
        (v <= hi + eps).then_some(hi)
    } else {
        Some(v)
    }
}

/// Core RK4 loop. `observe` is called with `(step_index, t, state)` after
/// every accepted step.
fn run<F>(
    start: &PopulationState,
    params: &GameParams,
    cfg: &IntegratorConfig,
    mut observe: F,
) -> Result<Endpoint, IntegrationError>
where
    F: FnMut(u64, f64, &PopulationState),
{
    cfg.validate()?;
    let h = cfg.step;
    let alpha = params.alpha();
    let trustees = params.trustees();
    let max_steps = cfg.max_steps();
    let mut y = *start;
    let mut step = 0u64;
    loop {
        let t = step as f64 * h;
        let k1 = replicator_rhs(&y, params);
        if k1.max_norm() < cfg.convergence_eps {
            return Ok(Endpoint {
                state: y,
                time: t,
                converged: true,
            });
        }
        if step >= max_steps {
            return Ok(Endpoint {
                state: y,
                time: t,
                converged: false,
            });
        }
        let k2 = replicator_rhs(&offset(&y, &k1, 0.5 * h), params);
        let k3 = replicator_rhs(&offset(&y, &k2, 0.5 * h), params);
        let k4 = replicator_rhs(&offset(&y, &k3, h), params);
        let x_i = y.x_i + h / 6.0 * (k1.dx_i + 2.0 * k2.dx_i + 2.0 * k3.dx_i + k4.dx_i);
        let x_t = y.x_t + h / 6.0 * (k1.dx_t + 2.0 * k2.dx_t + 2.0 * k3.dx_t + k4.dx_t);
        step += 1;
        let t = step as f64 * h;
        match (
            clamp_axis(x_i, alpha, cfg.clamp_eps),
            clamp_axis(x_t, trustees, cfg.clamp_eps),
        ) {
            (Some(x_i), Some(x_t)) => y = PopulationState::at(x_i, x_t),
            _ => return Err(IntegrationError::LeftDomain { t, x_i, x_t }),
        }
        observe(step, t, &y);
    }
}

/// Integrate from `start` until the vector field falls below
/// `convergence_eps` or `t_max` is reached, recording a decimated
/// trajectory.
pub fn integrate(
    start: &PopulationState,
    params: &GameParams,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, IntegrationError> {
    let mut samples = vec![TrajectorySample { t: 0.0, state: *start }];
    let stride = cfg.sample_every.max(1);
    let end = run(start, params, cfg, |step, t, s| {
        if step % stride == 0 {
            samples.push(TrajectorySample { t, state: *s });
        }
    })?;
    if end.time > samples.last().map_or(0.0, |s| s.t) {
        samples.push(TrajectorySample {
            t: end.time,
            state: end.state,
        });
    }
    Ok(Trajectory {
        samples,
        sample_stride: stride,
        terminal: end.state,
        converged: end.converged,
        terminal_label: None,
    })
}

/// Like [`integrate`] but keeps only the endpoint.
pub fn integrate_to_rest(
    start: &PopulationState,
    params: &GameParams,
    cfg: &IntegratorConfig,
) -> Result<Endpoint, IntegrationError> {
    run(start, params, cfg, |_, _, _| {})
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("state ({x_i}, {x_t}) is within eps of both {first} and {second}; eps is too large")]
pub struct AmbiguousTerminal {
    pub x_i: f64,
    pub x_t: f64,
    pub first: EquilibriumLabel,
    pub second: EquilibriumLabel,
}

/// Label of the unique stable point within Euclidean distance `eps` of
/// `state`, if any.
pub fn classify_terminal(
    state: &PopulationState,
    stable_points: &[(EquilibriumLabel, PopulationState)],
    eps: f64,
) -> Result<Option<EquilibriumLabel>, AmbiguousTerminal> {
    let mut found: Option<EquilibriumLabel> = None;
    for (label, loc) in stable_points {
        if state.distance(loc) <= eps {
            if let Some(first) = found {
                return Err(AmbiguousTerminal {
                    x_i: state.x_i,
                    x_t: state.x_t,
                    first,
                    second: *label,
                });
            }
            found = Some(*label);
        }
    }
    Ok(found)
}
