//! Numerical and exact tools around the amplified pre-trace formula on
//! `SL(3,Z)\SL(3,R)/SO(3)`: root data and decompositions, spherical functions,
//! compactly supported test functions and their kernels, the Hecke algebra of
//! `GL(3,Z)` and the lattice point counts that control the geometric side.

pub mod counting;
pub mod error;
pub mod hecke;
pub mod lie;
pub mod quad;
pub mod spherical;
pub mod testfn;

pub use error::{Error, Result};
