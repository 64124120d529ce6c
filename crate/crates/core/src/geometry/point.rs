use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A point of C^2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point2<T> {
    pub z1: Complex<T>,
    pub z2: Complex<T>,
}

impl<T: Real> Point2<T> {
    pub fn new(z1: Complex<T>, z2: Complex<T>) -> Self {
        Point2 { z1, z2 }
    }

    pub fn from_reals(x1: T, y1: T, x2: T, y2: T) -> Self {
        Point2 { z1: Complex::new(x1, y1), z2: Complex::new(x2, y2) }
    }

    pub fn origin() -> Self {
        Point2 { z1: Complex::new(T::zero(), T::zero()), z2: Complex::new(T::zero(), T::zero()) }
    }

    pub fn norm_sqr(&self) -> T {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    pub fn norm(&self) -> T {
        self.z1.norm().hypot(self.z2.norm())
    }

    pub fn dist(&self, other: &Self) -> T {
        (*self - *other).norm()
    }

    /// Hermitian product `<self, other> = z1 conj(w1) + z2 conj(w2)`.
    pub fn hermitian(&self, other: &Self) -> Complex<T> {
        self.z1 * other.z1.conj() + self.z2 * other.z2.conj()
    }

    pub fn conj(&self) -> Self {
        Point2 { z1: self.z1.conj(), z2: self.z2.conj() }
    }

    pub fn is_finite(&self) -> bool {
        self.z1.re.is_finite() && self.z1.im.is_finite() && self.z2.re.is_finite() && self.z2.im.is_finite()
    }

    pub fn to_reals(&self) -> [T; 4] {
        [self.z1.re, self.z1.im, self.z2.re, self.z2.im]
    }

    pub fn scale(&self, k: T) -> Self {
        Point2 { z1: self.z1 * k, z2: self.z2 * k }
    }
}

impl<T: Real> Add for Point2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Point2 { z1: self.z1 + o.z1, z2: self.z2 + o.z2 }
    }
}

impl<T: Real> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Point2 { z1: self.z1 - o.z1, z2: self.z2 - o.z2 }
    }
}

impl<T: Real> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Point2 { z1: -self.z1, z2: -self.z2 }
    }
}

impl<T: Real> Mul<Complex<T>> for Point2<T> {
    type Output = Self;
    fn mul(self, k: Complex<T>) -> Self {
        Point2 { z1: self.z1 * k, z2: self.z2 * k }
    }
}
