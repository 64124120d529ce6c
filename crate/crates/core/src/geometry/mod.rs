mod affine;
mod line;
mod point;
mod torus;
mod unitary;

pub use affine::{Affine, Axis, ChartAffine, TubeChart};
pub use line::{line_circle, line_intersection, ComplexLine, LineCircle, LineIntersection};
pub use point::Point2;
pub use torus::{
    mesh_for_resolution, mesh_spacing, torus_diameter, torus_diameter_with, torus_sample, SolidTorus,
    TorusMesh, TorusSample,
};
pub use unitary::{normalizing_unitary, Unitary2};
