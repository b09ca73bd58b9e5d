//! Hyperelliptic function numerics for loop solitons.
//!
//! The crate computes period matrices of hyperelliptic curves `y^2 = f(x)`,
//! evaluates Riemann theta and Kleinian sigma/zeta/wp functions, flows
//! divisors along the Jacobian, traces loop-soliton curves, and checks the
//! functional relations they satisfy.

pub mod cli;
pub mod curve;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod kleinian;
pub mod loops;
pub mod numeric;
pub mod periods;
pub mod relations;
pub mod theta;

pub use curve::{CurvePoint, Divisor, HyperellipticCurve, Sheet};
pub use error::{Error, Result};
pub use kleinian::{JacobianPoint, SigmaContext};
pub use periods::PeriodData;

/// Complex double.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
