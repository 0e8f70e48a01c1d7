//! Exact computer algebra for matrix factorizations of a potential W over
//! affine polynomial rings: Groebner machinery, the Z/2-graded calculus of
//! factorizations (shift, cone, totalization, tensor, Hom, duality), a
//! homotopy engine with certified null-homotopy witnesses, Ext modules, the
//! cokernel functor to the hypersurface ring, desk-scale projective-space
//! tables, and the explicit local constructions used for blow-ups.

pub mod error;
pub mod field;
pub mod groebner;
pub mod homology;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ring;

pub mod blowup;
pub mod functors;
pub mod homotopy;
pub mod mf;
pub mod projective;
pub mod singularity;

pub use error::{AlgebraError, Result};
pub use field::{FieldSpec, Scalar};
pub use matrix::FreeMatrix;
pub use poly::{MonomialOrder, Poly};
pub use ring::RingContext;
