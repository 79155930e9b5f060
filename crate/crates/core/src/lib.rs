//! Exact computations with quadratic Dirichlet L-functions over `F_q[T]`.

pub mod baselines;
pub mod charsums;
pub mod error;
pub mod field;
pub mod lfunction;
pub mod moments;
pub mod poly;
pub mod primes;
pub mod roots;
pub mod symbol;
pub mod verify;
pub mod sweep;

pub use error::{Error, Result};
pub use field::{Elem, FieldSpec};
pub use poly::{enumerate_monic, MonicIter, Poly};
