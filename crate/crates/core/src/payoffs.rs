//! Group payoffs of the N-player trust game and their population
//! expectations.
//!
//! A focal player meets `N - 1` co-players drawn from the whole population.
//! Investors pay `t_v` into a fund that is split equally among the trustees
//! of the group. Trustworthy trustees return `R_T` times their share and keep
//! the same amount; untrustworthy trustees keep `R_U` times their share.
//! Each punishing investor spends `lambda t_v` on sanctioning untrustworthy
//! trustees and another `lambda t_v` on sanctioning normal investors.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{GameParams, PopulationState};
use crate::poly::{geom_sum, geom_sum_deriv, ipow, power_diff_quotient, power_diff_quotient_deriv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    /// Punishing investor.
    P,
    /// Normal investor.
    M,
    /// Trustworthy trustee.
    T,
    /// Untrustworthy trustee.
    U,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::P, Strategy::M, Strategy::T, Strategy::U];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::P => "P",
            Strategy::M => "M",
            Strategy::T => "T",
            Strategy::U => "U",
        };
        f.write_str(s)
    }
}

/// Strategy counts among the `N - 1` co-players of a focal individual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GroupComposition {
    pub punishers: u32,
    pub normals: u32,
    pub trustworthy: u32,
    pub untrustworthy: u32,
}

impl GroupComposition {
    pub fn new(punishers: u32, normals: u32, trustworthy: u32, untrustworthy: u32) -> Self {
        Self {
            punishers,
            normals,
            trustworthy,
            untrustworthy,
        }
    }

    pub fn total(&self) -> u32 {
        self.punishers + self.normals + self.trustworthy + self.untrustworthy
    }

    fn investors(&self) -> u32 {
        self.punishers + self.normals
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("composition has {got} co-players, expected N - 1 = {expected}")]
pub struct CompositionError {
    pub got: u32,
    pub expected: u32,
}

/// Payoff of a focal player using `focal` among co-players `comp`.
pub fn group_payoff(
    focal: Strategy,
    comp: &GroupComposition,
    params: &GameParams,
) -> Result<f64, CompositionError> {
    let n = params.n();
    if comp.total() != n - 1 {
        return Err(CompositionError {
            got: comp.total(),
            expected: n - 1,
        });
    }
    let t_v = params.t_v();
    let lambda = params.lambda();
    let investors = comp.investors();
    let value = match focal {
        Strategy::P | Strategy::M => {
            if investors == n - 1 {
                // No trustee to invest in.
                return Ok(0.0);
            }
            let trustees = (n - 1 - investors) as f64;
            let share = params.r_t() * comp.trustworthy as f64 / trustees * t_v - t_v;
            if focal == Strategy::P {
                let mut fines = 0.0;
                if comp.untrustworthy != 0 {
                    fines += lambda;
                }
                if comp.normals != 0 {
                    fines += lambda;
                }
                share - fines * t_v
            } else {
                share - lambda * comp.punishers as f64 / (comp.normals + 1) as f64 * t_v
            }
        }
        Strategy::T => {
            // The focal trustee is counted in the denominator.
            params.r_t() * investors as f64 / (n - investors) as f64 * t_v
        }
        Strategy::U => {
            let fund = params.r_u() * investors as f64 / (n - investors) as f64 * t_v;
            let untrustworthy = n - investors - comp.trustworthy;
            fund - lambda * comp.punishers as f64 / untrustworthy as f64 * t_v
        }
    };
    Ok(value)
}

/// Expected payoffs of the four strategies at a population state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedPayoffs {
    pub f_p: f64,
    pub f_m: f64,
    pub f_t: f64,
    pub f_u: f64,
}

impl ExpectedPayoffs {
    pub fn get(&self, s: Strategy) -> f64 {
        match s {
            Strategy::P => self.f_p,
            Strategy::M => self.f_m,
            Strategy::T => self.f_t,
            Strategy::U => self.f_u,
        }
    }

    /// Average investor payoff `(x_i f_P + y_i f_M) / alpha`.
    pub fn investor_average(&self, state: &PopulationState, params: &GameParams) -> f64 {
        (state.x_i * self.f_p + state.y_i(params) * self.f_m) / params.alpha()
    }

    /// Average trustee payoff `(x_t f_T + y_t f_U) / (1 - alpha)`.
    pub fn trustee_average(&self, state: &PopulationState, params: &GameParams) -> f64 {
        (state.x_t * self.f_t + state.y_t(params) * self.f_u) / params.trustees()
    }
}

/// Closed-form expected payoffs.
pub fn expected_payoffs(state: &PopulationState, params: &GameParams) -> ExpectedPayoffs {
    let n1 = params.n() - 1;
    let m = n1 - 1;
    let alpha = params.alpha();
    let lambda = params.lambda();
    let t_v = params.t_v();
    let x_i = state.x_i;
    let x_t = state.x_t;
    let a_pow = params.alpha_pow();
    let a_geom = params.alpha_geom();
    // 1 - y_i and 1 - y_t.
    let not_normal = 1.0 - alpha + x_i;
    let not_untrust = alpha + x_t;

    let trust_share = x_t * params.r_t() * a_geom;
    let f_p = trust_share - (1.0 + 2.0 * lambda) * (1.0 - a_pow)
        + lambda * (ipow(not_normal, n1) - ipow(x_i, n1) + ipow(not_untrust, n1) - a_pow);
    let f_m = trust_share - (1.0 - a_pow) - lambda * x_i * geom_sum(not_normal, m)
        + lambda * x_i * power_diff_quotient(alpha, x_i, m);
    let f_t = alpha * params.r_t() * a_geom;
    let f_u = alpha * params.r_u() * a_geom - lambda * x_i * geom_sum(not_untrust, m);
    ExpectedPayoffs {
        f_p: f_p * t_v,
        f_m: f_m * t_v,
        f_t: f_t * t_v,
        f_u: f_u * t_v,
    }
}

/// Investor payoff difference, normalised so that
/// `lambda t_v f(x_i, x_t) = f_P - f_M`.
pub fn payoff_difference_f(x_i: f64, x_t: f64, params: &GameParams) -> f64 {
    let n1 = params.n() - 1;
    let alpha = params.alpha();
    f_investor_part(x_i, params) + ipow(alpha + x_t, n1) - 2.0 + params.alpha_pow()
}

/// Trustee payoff difference, normalised so that `t_v g(x_i, x_t) = f_T - f_U`.
pub fn payoff_difference_g(x_i: f64, x_t: f64, params: &GameParams) -> f64 {
    let m = params.n() - 2;
    params.lambda() * x_i * geom_sum(params.alpha() + x_t, m) - params.defection_gain()
}

/// The `x_i`-dependent part of `f`:
/// `x S(1-alpha+x) - x Q(alpha, x) + (1-alpha+x)^(N-1) - x^(N-1)`.
pub(crate) fn f_investor_part(x: f64, params: &GameParams) -> f64 {
    let n1 = params.n() - 1;
    let m = n1 - 1;
    let alpha = params.alpha();
    let z = 1.0 - alpha + x;
    x * geom_sum(z, m) - x * power_diff_quotient(alpha, x, m) + ipow(z, n1) - ipow(x, n1)
}

/// `d f / d x_i`; depends on `x_i` only.
pub fn f_partial_xi(x: f64, params: &GameParams) -> f64 {
    let n1 = params.n() - 1;
    let m = n1 - 1;
    let alpha = params.alpha();
    let z = 1.0 - alpha + x;
    let n1f = n1 as f64;
    geom_sum(z, m) + x * geom_sum_deriv(z, m)
        - power_diff_quotient(alpha, x, m)
        - x * power_diff_quotient_deriv(alpha, x, m)
        + n1f * ipow(z, m)
        - n1f * ipow(x, m)
}

/// `d f / d x_t = (N-1)(alpha + x_t)^(N-2)`.
pub fn f_partial_xt(x_t: f64, params: &GameParams) -> f64 {
    let m = params.n() - 2;
    (m + 1) as f64 * ipow(params.alpha() + x_t, m)
}

/// `d g / d x_i = lambda S(alpha + x_t)`.
pub fn g_partial_xi(x_t: f64, params: &GameParams) -> f64 {
    params.lambda() * geom_sum(params.alpha() + x_t, params.n() - 2)
}

/// `d g / d x_t = lambda x_i S'(alpha + x_t)`.
pub fn g_partial_xt(x_i: f64, x_t: f64, params: &GameParams) -> f64 {
    params.lambda() * x_i * geom_sum_deriv(params.alpha() + x_t, params.n() - 2)
}
