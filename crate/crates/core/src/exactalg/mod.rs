//! Exact arithmetic foundation.
//!
//! Coefficients are arbitrary precision rationals. Polynomials are sparse in
//! the unbounded variable families `t_1, t_2, ...` and `y_1, y_2, ...`, with
//! weight `i` attached to both `t_i` and `y_i`.

mod det;
mod monomial;
mod polynomial;
mod rational;
mod ratfun;
mod shift;
mod var;

pub use det::{det_bareiss, det_cofactor, det_poly, Ring};
pub use monomial::Monomial;
pub use polynomial::Polynomial;
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use ratfun::RationalFunction;
pub use shift::ShiftTable;
pub use var::{Family, Var};
