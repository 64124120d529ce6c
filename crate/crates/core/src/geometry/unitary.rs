use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::affine::Affine;
use super::point::Point2;
use crate::scalar::Real;

/// A 2x2 unitary matrix acting on column vectors `(z1, z2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Unitary2<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Unitary2<T> {
    pub fn identity() -> Self {
        let o = Complex::new(T::one(), T::zero());
        let z = Complex::new(T::zero(), T::zero());
        Unitary2 { m: [[o, z], [z, o]] }
    }

    pub fn diag(a: Complex<T>, b: Complex<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Unitary2 { m: [[a, z], [z, b]] }
    }

    /// General element `e^{i a} [[e^{i b} cos t, e^{i c} sin t], [-e^{-i c} sin t, e^{-i b} cos t]]`.
    pub fn from_angles(a: T, b: T, c: T, t: T) -> Self {
        let g = Complex::from_polar(T::one(), a);
        let (st, ct) = t.sin_cos();
        Unitary2 {
            m: [
                [g * Complex::from_polar(ct, b), g * Complex::from_polar(st, c)],
                [-g * Complex::from_polar(st, -c), g * Complex::from_polar(ct, -b)],
            ],
        }
    }

    pub fn apply(&self, z: &Point2<T>) -> Point2<T> {
        Point2::new(
            self.m[0][0] * z.z1 + self.m[0][1] * z.z2,
            self.m[1][0] * z.z1 + self.m[1][1] * z.z2,
        )
    }

    /// Conjugate transpose, which is the inverse.
    pub fn adjoint(&self) -> Self {
        Unitary2 {
            m: [
                [self.m[0][0].conj(), self.m[1][0].conj()],
                [self.m[0][1].conj(), self.m[1][1].conj()],
            ],
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut m = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.m[i][0] * other.m[0][j] + self.m[i][1] * other.m[1][j];
            }
        }
        Unitary2 { m }
    }

    /// Largest entry of `U* U - I` in modulus.
    pub fn unitarity_defect(&self) -> T {
        let p = self.adjoint().compose(self);
        let i = Self::identity();
        let mut d = T::zero();
        for a in 0..2 {
            for b in 0..2 {
                d = d.max((p.m[a][b] - i.m[a][b]).norm());
            }
        }
        d
    }

    /// The function `w -> f(U^{-1} w)`, i.e. `f` expressed in the image coordinates.
    pub fn push_forward(&self, f: &Affine<T>) -> Affine<T> {
        let g = |j: usize| f.f1 * self.m[j][0].conj() + f.f2 * self.m[j][1].conj();
        Affine { f0: f.f0, f1: g(0), f2: g(1) }
    }

    /// The function `z -> f(U z)`.
    pub fn pull_back(&self, f: &Affine<T>) -> Affine<T> {
        let g = |j: usize| f.f1 * self.m[0][j] + f.f2 * self.m[1][j];
        Affine { f0: f.f0, f1: g(0), f2: g(1) }
    }
}

/// Unitary `U` with `|f(U^{-1} w)| = |w1 - (1 - s)|` where `s = 1 - |f0|`.
///
/// Row one is `c (f1, f2)` with `c = -conj(f0)/|f0|` (`c = 1` when `f0 = 0`),
/// row two is `(-conj f2, conj f1)`. For `f = z1 - (1 - s)` this is the identity.
pub fn normalizing_unitary<T: Real>(f: &Affine<T>) -> Unitary2<T> {
    let m0 = f.f0.norm();
    let c = if m0 > T::zero() { -f.f0.conj() / m0 } else { Complex::new(T::one(), T::zero()) };
    Unitary2 { m: [[c * f.f1, c * f.f2], [-f.f2.conj(), f.f1.conj()]] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn identity_for_normal_form() {
        let u = normalizing_unitary(&Affine::z1_minus(c(0.6, 0.0)));
        assert!((u.m[0][0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(u.m[0][1].norm() < 1e-15 && u.m[1][0].norm() < 1e-15);
        assert!((u.m[1][1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn normal_form_of_push_forward() {
        let f = Affine::normalize(c(0.2, 0.3), c(0.1, -0.7), c(0.5, 0.2)).unwrap();
        let u = normalizing_unitary(&f);
        assert!(u.unitarity_defect() < 1e-14);
        let g = u.push_forward(&f);
        let s = f.unitary_invariant_s().unwrap();
        for w in [Point2::from_reals(0.1, 0.2, 0.3, 0.4), Point2::from_reals(-0.5, 0.0, 0.2, -0.1)] {
            let want = (w.z1 - c(1.0 - s, 0.0)).norm();
            assert!((g.eval(&w).norm() - want).abs() < 1e-14);
        }
    }
}
