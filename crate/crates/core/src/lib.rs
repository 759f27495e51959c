//! Construction and exact verification of Galois self-orthogonal
//! algebraic-geometry codes over finite fields.

pub mod codes;
pub mod constructions;
pub mod curves;
pub mod gf;
mod kernels;
pub mod matrix;
