//! Exact and certified computations on the quasi-classical Cayley trees of
//! free products of free orthogonal and free unitary discrete quantum
//! groups.

pub mod aunitary;
pub mod cayley;
pub mod error;
pub mod estimates;
pub mod fast;
pub mod fusion;
pub mod qctree;
pub mod scalar;

pub use error::{Error, Result};
