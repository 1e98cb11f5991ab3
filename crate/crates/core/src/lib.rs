//! Reed-Solomon deep-ball constructions over finite field towers.
//!
//! The crate builds received words `u_f` whose Hamming balls in the extended
//! Reed-Solomon code `RS_q[q, k]` are dense, counts the codewords they contain
//! through factorizations into distinct linear factors `alpha + a`, and runs
//! the index-calculus reduction that turns a maximal-likelihood decoder into a
//! discrete-logarithm solver for `F_{q^h}`.

pub mod arith;
pub mod constructions;
pub mod deep_ball;
pub mod dlog;
pub mod factor_oracle;
pub mod field;
pub mod poly;
pub mod real;
pub mod rs_code;
pub mod verify;

pub use field::{FieldCtx, FieldElem, FieldError, FieldSpec};
pub use poly::Poly;
