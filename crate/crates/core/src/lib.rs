//! Secrecy-rate analytics and Monte-Carlo simulation of the product channel
//! attack against MRT downlinks.
//!
//! An eavesdropping system user multiplies its uplink symbols and pilots by a
//! synthetic, slowly varying coefficient `θ_E` with `E{|θ_E|²} = 1`. The base
//! station then sees a product channel with a larger variance but the same
//! average SNR, underestimates the eavesdropper's capacity, and selects a
//! secrecy rate `R̄_S` above the true average secrecy capacity `C̄_S`.
//!
//! * [`specfun`]: `E_n`, `Γ(−n, x)`, `K₁` and `erfc`.
//! * [`quadrature`]: adaptive Gauss–Kronrod on `[0, ∞)`.
//! * [`channel_model`]: channel vectors, MRT gains and SNR realizations.
//! * [`secrecy_analytics`]: cCDFs, `C̄_B`, `L`, `L̂`, `C̄_S`, `R̄_S`, `D`.
//! * [`montecarlo`]: block-parallel, bit-reproducible MC estimators.
//! * [`experiments`]: sweep configuration, execution and CSV output.

pub mod channel_model;
pub mod error;
pub mod experiments;
pub mod montecarlo;
pub mod quadrature;
pub mod secrecy_analytics;
pub mod selftest;
pub mod specfun;

pub use channel_model::{
    db_to_linear, linear_to_db, AttackKind, LinkBudget, RngStream, ScenarioParams,
};
pub use error::{Error, Result};
pub use secrecy_analytics::{Method, SecrecyReport};
