//! Stability conditions on products of curves, computed.
//!
//! * [`derived`]: K-lattice, graded Hom dimensions and formal filtrations on `(P^1)^n`.
//! * [`p1`]: geometric and algebraic stability conditions on `P^1`.
//! * [`product`]: product-type stability conditions and their axiom checks.
//! * [`surface`]: charges on `P^1 x P^1` and on products of elliptic curves.
//! * [`mirror`]: circle and thimble periods of the mirror `z + e^a/z`.
//! * [`slag`]: special Lagrangian curves for `exp(z + c + e^a/z) dz/z`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dd;
pub mod derived;
pub mod error;
pub mod hn;
pub mod mirror;
pub mod p1;
pub mod product;
pub mod quadrature;
pub mod slag;
pub mod surface;

pub use derived::{
    hom_degrees, FactorClass, FactorSymbol, FormalObject, Generator, GradedDims, KClass, MultiIndex,
};
pub use error::{Error, Result};
pub use hn::HnFactor;
pub use mirror::{LGModel, Saddle, ThimbleResult};
pub use num_complex::Complex64;
pub use p1::StabP1;
pub use product::{AxiomReport, ProductStab, PureAlgebraic};
pub use slag::{EndKind, SLagProblem, TracedPath};
pub use surface::{SurfaceChargeData, SurfaceClass};
