//! Subspace designs in V(k, q^m) = F_{q^m}^k and the objects they connect to:
//! σ-linearized polynomials, sum-rank and two-weight Hamming codes, strongly regular
//! graphs, Cameron–Liebler sets and dimension expanders.

pub mod design;
pub mod expander;
pub mod gf;
pub mod hamming;
pub mod linalg;
pub mod par;
pub mod skewpoly;
pub mod strongbridge;
pub mod subspace;
pub mod sumrank;
