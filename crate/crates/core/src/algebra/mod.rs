//! Exact algebra kernel: rationals, multi-indices, sparse multivariate
//! polynomials, rational functions with factored denominators, and dense
//! linear algebra over the rationals.

pub mod linalg;
pub mod multiindex;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use multiindex::MultiIndex;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{format_rational, parse_rational, rat, Rational};
