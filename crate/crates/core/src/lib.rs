//! Long-run and short-run marginal costs of a two-technology, two-period
//! capacity expansion model.
//!
//! The crate pairs a small dense simplex solver ([`lp`]) with the model's
//! LPs ([`model`]), a closed-form classification of every optimum
//! ([`classify`]), price and cost-recovery accounting ([`pricing`]), the
//! short-run degeneracy pipeline ([`degeneracy`]) and checks that hold the
//! closed form against the solver ([`verify`]).
//!
//! Everything numeric is generic over [`Scalar`]: `f64` for speed,
//! [`BigRational`] when exact answers are wanted.
//!
//! ```
//! use mcost_core::{classify::classify, Params};
//!
//! let p = Params::new(60.0, 1.0, 3000.0, 82.0, 20.0, 4000.0, 200.0, 2000.0, 8000.0);
//! assert_eq!(classify(&p).unwrap().id, 6);
//! ```

pub mod classify;
pub mod degeneracy;
pub mod lp;
pub mod model;
pub mod pricing;
pub mod scalar;
pub mod scenario;
pub mod tolerance;
pub mod verify;

pub use num_rational::BigRational;
pub use scalar::Scalar;
pub use tolerance::Tolerances;

pub type Params = model::SystemParams<f64>;
pub type ExactParams = model::SystemParams<BigRational>;
pub type Lp = lp::LinearProgram<f64>;
pub type ExactLp = lp::LinearProgram<BigRational>;
pub type Decision = model::PrimalDecision<f64>;
pub type Duals = model::DualValues<f64>;
