//! Siegel masses of the standard lattice over totally real fields, evaluated exactly
//! where possible and as rigorous interval enclosures otherwise, together with the
//! effective bounds derived from them.

pub mod arith;
pub mod effective;
pub mod error;
pub mod fields;
pub mod genera;
pub mod groupbounds;
pub mod mass;
pub mod transforms;
pub mod wright;

pub use arith::{ExactFactored, QuadraticCharacter, RealEnclosure};
pub use error::{Error, Result};
pub use fields::{make_descriptor, make_quadratic, squarefree_range, DyadicClass, DyadicPrime, Field, FieldDescriptor, RealQuadraticField};

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 128;
/// Default ceiling for adaptive refinement.
pub const DEFAULT_PREC_CEILING: u32 = 512;
