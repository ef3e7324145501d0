//! Exact arithmetic over Q.

mod gcd;
mod jacobian;
pub mod linalg;
mod monomial;
mod poly;
mod ratfunc;
mod scalar;
pub mod univariate;

pub use gcd::{poly_gcd, resultant, squarefree_part};
pub use jacobian::{jacobian_rank, jacobian_rank_exact};
pub use monomial::Monomial;
pub use poly::{Polynomial, Vars};
pub use ratfunc::{ratfunc_normalize, substitute, RationalFunction};
pub use scalar::{int, rat, Scalar};

pub(crate) use gcd::{content_in, gcd};
pub(crate) use poly::PowerCache;
