//! Explicit self-similar solutions of the planar stationary Navier-Stokes
//! equations (Jeffery-Hamel flows) and their numerical verification.
//!
//! The library constructs every closed-form solution family:
//!
//! * radial profiles built from elliptic functions of the polar angle,
//!   classified by the root structure of the cubic h³ + 6h² + 6C₁h + C₂
//!   ([`cubic`], [`radial`]);
//! * their extension to large cones and globally periodic radial solutions
//!   ([`radial`]);
//! * non-radial solutions obtained from a Liénard equation, integrable cases
//!   solved by Weierstrass ℘ functions ([`nonradial`]).
//!
//! Every field can be checked against the PDE, the reduced angular ODEs, and
//! smoothness/periodicity conditions via [`verify`].

pub mod cubic;
pub mod elliptic;
pub mod error;
pub mod nonradial;
mod ode;
mod quad;
pub mod radial;
pub mod verify;

pub use error::{Error, Result};

/// A velocity/pressure sample (u, v, p) at a point of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub u: f64,
    pub v: f64,
    pub p: f64,
}
