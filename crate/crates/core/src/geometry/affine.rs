use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::point::Point2;
use crate::error::{HullError, Result};
use crate::scalar::Real;

/// Coordinate axis of C^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    Z1,
    Z2,
}

/// Complex affine function `f(z) = f0 + f1 z1 + f2 z2` with unit gradient.
///
/// With `|(f1, f2)| = 1` the modulus `|f(z)|` is the distance from `z` to the
/// complex line `{f = 0}`, which makes `|f|` 1-Lipschitz.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Affine<T> {
    pub f0: Complex<T>,
    pub f1: Complex<T>,
    pub f2: Complex<T>,
}

impl<T: Real> Affine<T> {
    /// Rescales `(f0, f1, f2)` so the gradient has unit norm. Same zero set.
    pub fn normalize(f0: Complex<T>, f1: Complex<T>, f2: Complex<T>) -> Result<Self> {
        let g = f1.norm().hypot(f2.norm());
        if !(g > T::zero()) || !g.is_finite() {
            return Err(HullError::ZeroGradient);
        }
        let k = T::one() / g;
        Ok(Affine { f0: f0 * k, f1: f1 * k, f2: f2 * k })
    }

    /// Builds the unit-gradient function vanishing on `{p + v zeta}`.
    pub fn through(p: &Point2<T>, v: &Point2<T>) -> Result<Self> {
        let f1 = v.z2;
        let f2 = -v.z1;
        let f0 = -(f1 * p.z1 + f2 * p.z2);
        Self::normalize(f0, f1, f2)
    }

    /// `z1 - c`.
    pub fn z1_minus(c: Complex<T>) -> Self {
        Affine { f0: -c, f1: Complex::new(T::one(), T::zero()), f2: Complex::new(T::zero(), T::zero()) }
    }

    /// `z2 - c`.
    pub fn z2_minus(c: Complex<T>) -> Self {
        Affine { f0: -c, f1: Complex::new(T::zero(), T::zero()), f2: Complex::new(T::one(), T::zero()) }
    }

    #[inline]
    pub fn eval(&self, z: &Point2<T>) -> Complex<T> {
        self.f0 + self.f1 * z.z1 + self.f2 * z.z2
    }

    /// Bilinear pairing of the gradient with a vector: `f1 v1 + f2 v2`.
    #[inline]
    pub fn linear(&self, v: &Point2<T>) -> Complex<T> {
        self.f1 * v.z1 + self.f2 * v.z2
    }

    pub fn grad_norm(&self) -> T {
        self.f1.norm().hypot(self.f2.norm())
    }

    /// Distance from the origin to `{f = 0}`.
    pub fn offset(&self) -> T {
        self.f0.norm()
    }

    /// The invariant `s = 1 - |f0|`.
    pub fn unitary_invariant_s(&self) -> Result<T> {
        let m = self.offset();
        if m >= T::one() {
            return Err(HullError::LineMissesBall(m.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(T::one() - m)
    }

    /// `f` precomposed with the inverse rotation of one coordinate by `angle`:
    /// `g(z) = f(..., z_axis * exp(-i angle), ...)`.
    pub fn rotated(&self, axis: Axis, angle: T) -> Self {
        let e = Complex::from_polar(T::one(), -angle);
        match axis {
            Axis::Z1 => Affine { f0: self.f0, f1: self.f1 * e, f2: self.f2 },
            Axis::Z2 => Affine { f0: self.f0, f1: self.f1, f2: self.f2 * e },
        }
    }

    /// Closest point of `{f = 0}` to the origin.
    pub fn foot(&self) -> Point2<T> {
        Point2::new(-self.f0 * self.f1.conj(), -self.f0 * self.f2.conj())
    }

    /// Direction of `{f = 0}` (unit length for unit gradient).
    pub fn direction(&self) -> Point2<T> {
        Point2::new(self.f2, -self.f1)
    }

    pub fn chart(&self) -> TubeChart<T> {
        TubeChart::new(*self)
    }

    pub fn to_f64(&self) -> Affine<f64> {
        let c = |z: Complex<T>| Complex::new(z.re.to_f64().unwrap(), z.im.to_f64().unwrap());
        Affine { f0: c(self.f0), f1: c(self.f1), f2: c(self.f2) }
    }
}

/// Orthonormal coordinates `(u, v)` adapted to a unit-gradient function `f`:
/// `z = (u - f0) n + v w` with `n = conj(grad f)`, `w = (f2, -f1)`.
///
/// In these coordinates `f(z) = u` and `|z|^2 = |u - f0|^2 + |v|^2`.
#[derive(Clone, Copy, Debug)]
pub struct TubeChart<T> {
    pub f: Affine<T>,
    pub n: Point2<T>,
    pub w: Point2<T>,
}

/// An affine function written in chart coordinates: `k0 + ku u + kv v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartAffine<T> {
    pub k0: Complex<T>,
    pub ku: Complex<T>,
    pub kv: Complex<T>,
}

impl<T: Real> ChartAffine<T> {
    pub fn eval(&self, u: Complex<T>, v: Complex<T>) -> Complex<T> {
        self.k0 + self.ku * u + self.kv * v
    }
}

impl<T: Real> TubeChart<T> {
    pub fn new(f: Affine<T>) -> Self {
        TubeChart { f, n: Point2::new(f.f1.conj(), f.f2.conj()), w: Point2::new(f.f2, -f.f1) }
    }

    pub fn to_point(&self, u: Complex<T>, v: Complex<T>) -> Point2<T> {
        self.n * (u - self.f.f0) + self.w * v
    }

    pub fn coords(&self, z: &Point2<T>) -> (Complex<T>, Complex<T>) {
        (self.f.eval(z), z.hermitian(&self.w))
    }

    pub fn express(&self, g: &Affine<T>) -> ChartAffine<T> {
        let ku = g.linear(&self.n);
        let kv = g.linear(&self.w);
        ChartAffine { k0: g.f0 - self.f.f0 * ku, ku, kv }
    }
}
