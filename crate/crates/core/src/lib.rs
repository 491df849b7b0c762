//! Exact tooling for quadratic Plücker inequalities on the totally
//! nonnegative Grassmannian: weak separation, exchange systems,
//! Temperley–Lieb immanant certificates and counterexample search.

pub mod combinatorics;
pub mod error;
pub mod inequality;
pub mod linalg;
pub mod render;
pub mod tl;
pub mod tnn;

pub use error::{Error, Result};
