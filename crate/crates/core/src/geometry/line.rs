use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::affine::Affine;
use super::point::Point2;
use crate::error::{HullError, Result};
use crate::scalar::Real;

/// A complex line `{base + zeta * direction}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexLine<T> {
    pub base: Point2<T>,
    pub direction: Point2<T>,
}

impl<T: Real> ComplexLine<T> {
    pub fn new(base: Point2<T>, direction: Point2<T>) -> Self {
        ComplexLine { base, direction }
    }

    pub fn of(f: &Affine<T>) -> Self {
        ComplexLine { base: f.foot(), direction: f.direction() }
    }

    pub fn to_affine(&self) -> Result<Affine<T>> {
        Affine::through(&self.base, &self.direction)
    }

    pub fn at(&self, zeta: Complex<T>) -> Point2<T> {
        self.base + self.direction * zeta
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LineIntersection<T> {
    Point(Point2<T>),
    Parallel,
}

/// Intersection point of `{f = 0}` and `{g = 0}`, solved by Cramer's rule.
///
/// Lines whose gradients have `|det| <= tol` are reported as parallel.
pub fn line_intersection<T: Real>(f: &Affine<T>, g: &Affine<T>, tol: T) -> LineIntersection<T> {
    let det = f.f1 * g.f2 - f.f2 * g.f1;
    if det.norm() <= tol {
        return LineIntersection::Parallel;
    }
    let z1 = (-f.f0 * g.f2 + g.f0 * f.f2) / det;
    let z2 = (-f.f1 * g.f0 + g.f1 * f.f0) / det;
    LineIntersection::Point(Point2::new(z1, z2))
}

/// Round circle `{f = 0} ∩ r S^3`: centre at the foot point, radius `sqrt(r^2 - |f0|^2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineCircle<T> {
    pub center: Point2<T>,
    pub direction: Point2<T>,
    pub radius: T,
}

impl<T: Real> LineCircle<T> {
    pub fn point_at(&self, theta: T) -> Point2<T> {
        self.center + self.direction * Complex::from_polar(self.radius, theta)
    }
}

pub fn line_circle<T: Real>(f: &Affine<T>, r: T) -> Result<LineCircle<T>> {
    let m = f.offset();
    if m >= r {
        return Err(HullError::LineMissesSphere {
            offset: m.to_f64().unwrap_or(f64::NAN),
            radius: r.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(LineCircle { center: f.foot(), direction: f.direction(), radius: (r * r - m * m).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn coordinate_axes_meet_at_origin() {
        let f = Affine::z1_minus(c(0.0, 0.0));
        let g = Affine::z2_minus(c(0.0, 0.0));
        assert_eq!(line_intersection(&f, &g, 1e-12), LineIntersection::Point(Point2::origin()));
        assert_eq!(line_intersection(&f, &f, 1e-12), LineIntersection::Parallel);
    }

    #[test]
    fn circle_radius() {
        let lc = line_circle(&Affine::z1_minus(c(0.6, 0.0)), 1.0).unwrap();
        assert!((lc.radius - 0.8).abs() < 1e-15);
        assert!(lc.center.dist(&Point2::from_reals(0.6, 0.0, 0.0, 0.0)) < 1e-15);
        assert!((lc.point_at(1.3).norm() - 1.0).abs() < 1e-15);
        assert!(line_circle(&Affine::z1_minus(c(1.2, 0.0)), 1.0).is_err());
    }
}
