//! Monte-Carlo estimate of the expected payoffs by sampling groups.
//!
//! Independent of the closed forms in [`crate::payoffs::expected_payoffs`]:
//! each sample draws the `N - 1` co-players one at a time from the
//! population shares and evaluates the exact group payoff.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::params::{GameParams, PopulationState};
use crate::payoffs::{group_payoff, GroupComposition, Strategy};

/// Sample mean and standard error of one strategy's payoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Standard error of the mean; NaN for a single sample.
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McPayoffs {
    pub samples: u64,
    pub f_p: McEstimate,
    pub f_m: McEstimate,
    pub f_t: McEstimate,
    pub f_u: McEstimate,
}

impl McPayoffs {
    pub fn get(&self, s: Strategy) -> McEstimate {
        match s {
            Strategy::P => self.f_p,
            Strategy::M => self.f_m,
            Strategy::T => self.f_t,
            Strategy::U => self.f_u,
        }
    }
}

/// Draw one category index from `probs`, skipping zero-weight categories so
/// rounding in the cumulative sum can never select them.
fn draw_category<R: Rng>(rng: &mut R, probs: &[f64; 4]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last = k;
        acc += p;
        if u < acc {
            return k;
        }
    }
    last
}

/// Sample the co-player composition of a random group.
pub fn sample_composition<R: Rng>(rng: &mut R, state: &PopulationState, params: &GameParams) -> GroupComposition {
    let probs = [state.x_i, state.y_i(params), state.x_t, state.y_t(params)];
    let mut counts = [0u32; 4];
    for _ in 0..params.n() - 1 {
        counts[draw_category(rng, &probs)] += 1;
    }
    GroupComposition::new(counts[0], counts[1], counts[2], counts[3])
}

#[derive(Default, Clone, Copy)]
struct Accumulator {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    // Welford update.
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn finish(&self) -> McEstimate {
        let std_error = if self.n < 2 {
            f64::NAN
        } else {
            (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
        };
        McEstimate {
            mean: self.mean,
            std_error,
        }
    }
}

/// Monte-Carlo estimate of `f_P, f_M, f_T, f_U` from `sample_count` groups.
///
/// The same sampled co-player composition is scored for all four focal
/// strategies, so each strategy sees `sample_count` i.i.d. groups.
/// Output is a pure function of the arguments.
///
/// # Panics
///
/// Panics if `sample_count` is zero.
pub fn mc_expected_payoffs(
    state: &PopulationState,
    params: &GameParams,
    sample_count: u64,
    seed: u64,
) -> McPayoffs {
    assert!(sample_count >= 1, "sample_count must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = [Accumulator::default(); 4];
    for _ in 0..sample_count {
        let comp = sample_composition(&mut rng, state, params);
        for (slot, s) in acc.iter_mut().zip(Strategy::ALL) {
            // Composition size is N - 1 by construction.
            slot.push(group_payoff(s, &comp, params).expect("sampled composition has N - 1 players"));
        }
    }
    McPayoffs {
        samples: sample_count,
        f_p: acc[0].finish(),
        f_m: acc[1].finish(),
        f_t: acc[2].finish(),
        f_u: acc[3].finish(),
    }
}

/// `(closed - mean) / std_error`, with a zero-variance estimate counted as
/// exact agreement when the values coincide to rounding.
pub fn z_score(closed_form: f64, est: &McEstimate) -> f64 {
    let diff = est.mean - closed_form;
    if est.std_error > 0.0 {
        diff / est.std_error
    } else if diff.abs() <= 1e-12 * closed_form.abs().max(1.0) {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    }
}
