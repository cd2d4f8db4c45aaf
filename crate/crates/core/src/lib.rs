//! Convex hulls of random walks and bridges.
//!
//! Two independent engines live here:
//!
//! * exact, distribution-free closed forms for expected face counts, face
//!   probabilities and joint absorption probabilities ([`closed_forms`], built
//!   on [`combinatorics`] and [`poly`]), together with the hyperplane
//!   arrangement machinery that explains them ([`chambers`]);
//! * a Monte Carlo engine ([`sampling`], [`geometry`], [`montecarlo`]) that
//!   samples paths and detects faces geometrically, so every exact value can
//!   be checked against simulation.

pub mod chambers;
pub mod closed_forms;
pub mod combinatorics;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod poly;
pub mod rational;
pub mod sampling;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::IntPolynomial;
