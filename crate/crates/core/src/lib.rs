//! Explicit Cremona transformations of `P^3` that send rational surfaces of
//! degree at most four to planes, with exact and finite-field certificates.
//!
//! The crate is layered bottom-up:
//!
//! * [`field`], [`poly`], [`matrix`], [`univariate`], [`resultant`], [`gcd`]:
//!   exact arithmetic over `Q` and `F_p`.
//! * [`linsys`]: linear systems of forms cut out by base conditions.
//! * [`maps`]: rational maps, point sampling, implicitization by
//!   interpolation and injectivity certificates.
//! * [`pipeline`]: case classification and the linearizing constructions.
//! * [`threshold`]: effective thresholds on small Picard lattices.
//! * [`parse`], [`report`]: text and JSON interfaces.

pub mod error;
pub mod field;
pub mod fixtures;
pub mod gcd;
pub mod linsys;
pub mod maps;
pub mod matrix;
pub mod parse;
pub mod pipeline;
pub mod poly;
pub mod report;
pub mod resultant;
pub mod threshold;
pub mod univariate;

pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rationals, DEFAULT_PRIME};
pub use parse::parse_polynomial;
pub use poly::{FpPoly, Monomial, Polynomial, QPoly};
