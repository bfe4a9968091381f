//! Evolutionary dynamics of the N-player trust game in a hierarchical
//! population with punishing investors.
//!
//! The population splits into a fixed share `alpha` of investors and
//! `1 - alpha` of trustees. Investors are punishing (`P`) or normal (`M`);
//! trustees are trustworthy (`T`) or untrustworthy (`U`). The state is the
//! pair `(x_i, x_t)` of punishing-investor and trustworthy-trustee shares.
//!
//! * [`payoffs`]: group payoffs, closed-form expected payoffs, and the
//!   payoff differences `f`, `g` that drive the dynamics;
//! * [`montecarlo`]: sampling estimator for the expected payoffs;
//! * [`dynamics`]: the replicator vector field and RK4 integration;
//! * [`equilibria`]: fixed points, Jacobians and stability;
//! * [`regimes`], [`basins`]: regime classification and attraction domains;
//! * [`cli`]: the `trustdyn` command-line front-end.

pub mod basins;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod equilibria;
pub mod montecarlo;
pub mod output;
pub mod params;
pub mod payoffs;
pub mod poly;
pub mod regimes;

pub use params::{GameParams, ParamError, PopulationState, RawParams};
