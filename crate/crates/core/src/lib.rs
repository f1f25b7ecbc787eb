//! Exact construction and verification of polynomial tau-functions for the
//! KP, modified KP (MKP) and n-KdV hierarchies.
//!
//! Everything is computed over the rationals with no floating point:
//!
//! - [`exactalg`]: rationals, sparse weighted polynomials, rational functions
//!   and polynomial determinants.
//! - [`schur`]: elementary and partition Schur polynomials, shifted Schur
//!   determinants and recovery of shift constants.
//! - [`psdo`]: pseudodifferential operators in `∂ = ∂/∂t_1` with explicit
//!   truncation floors.
//! - [`tau`]: constructors for KP, MKP and n-KdV tau-functions, eigenfunctions
//!   and Wronskians.
//! - [`hirota`]: exact bilinear residue identities.
//! - [`lax`]: dressing and Lax operators and the operator-side checks.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod error;
pub mod exactalg;
pub mod hirota;
pub mod lax;
pub mod psdo;
pub mod schur;
pub mod tau;
pub mod verdict;

pub use error::{Error, Result};
pub use exactalg::{
    Family, Monomial, Polynomial, Rational, RationalFunction, ShiftTable, Var,
};
pub use psdo::PseudoDiffOp;
pub use schur::Partition;
pub use tau::{TauChain, TauFunction};
pub use verdict::Verdict;
