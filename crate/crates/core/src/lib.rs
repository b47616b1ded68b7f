//! Numerical toolkit for quaternionic Kähler geometry with a closed Lee form.
//!
//! Layers, bottom up: [`quatlin`] (pointwise quaternionic linear algebra),
//! [`curvalg`] (algebraic curvature operators), [`geoengine`] (metric charts
//! and differential identities), [`metriczoo`] (explicit model charts) and
//! [`verify`] (seeded verification runs producing JSON reports).

pub mod curvalg;
pub mod error;
pub mod geoengine;
pub mod hyperdual;
pub mod metriczoo;
pub mod quatlin;
pub mod verify;

pub use error::{Error, Result};
