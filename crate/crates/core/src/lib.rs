//! Certified constructions of polynomially convex Cantor sets on the unit sphere of C^2.

pub mod construction;
pub mod error;
pub mod families;
pub mod geometry;
pub mod interval;
pub mod io;
pub mod verify;
pub mod scalar;
pub mod separation;

pub use error::{HullError, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type ComplexPoint2 = geometry::Point2<f64>;
pub type AffineFunction = geometry::Affine<f64>;
pub type Unitary = geometry::Unitary2<f64>;
pub type Torus = geometry::SolidTorus<f64>;
pub type Line = geometry::ComplexLine<f64>;
