use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::affine::Affine;
use super::point::Point2;
use super::unitary::{normalizing_unitary, Unitary2};
use crate::error::{HullError, Result};
use crate::scalar::Real;

/// `{|f| <= sigma} ∩ r S^3`, a solid torus when `|f0| + sigma < r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolidTorus<T> {
    pub f: Affine<T>,
    pub sigma: T,
    pub r: T,
    pub s: T,
    pub level: u32,
    pub parent_id: Option<u64>,
}

impl<T: Real> SolidTorus<T> {
    pub fn new(f: Affine<T>, sigma: T, r: T, level: u32, parent_id: Option<u64>) -> Result<Self> {
        let s = T::one() - f.offset();
        let t = SolidTorus { f, sigma, r, s, level, parent_id };
        t.check_shape()?;
        Ok(t)
    }

    /// The normal-form torus `{|z1 - (1 - s)| <= sigma} ∩ r S^3`.
    pub fn normal_form(s: T, sigma: T, r: T) -> Result<Self> {
        Self::new(Affine::z1_minus(Complex::new(T::one() - s, T::zero())), sigma, r, 1, None)
    }

    fn check_shape(&self) -> Result<()> {
        let bad = |m: String| Err(HullError::EmptyTorus(m));
        if !(self.sigma > T::zero()) {
            return bad(format!("sigma = {} must be positive", self.sigma));
        }
        if !(self.r > T::zero() && self.r <= T::one()) {
            return bad(format!("radius {} outside (0, 1]", self.r));
        }
        if !(self.f.offset() + self.sigma < self.r) {
            return bad(format!("|f0| + sigma = {} not below r = {}", self.f.offset() + self.sigma, self.r));
        }
        Ok(())
    }

    /// Re-checks every stored invariant; used on values read back from disk.
    pub fn validate(&self) -> Result<()> {
        let tol = T::lit(1e-12);
        if (self.f.grad_norm() - T::one()).abs() > tol {
            return Err(HullError::EmptyTorus(format!("gradient norm {} is not 1", self.f.grad_norm())));
        }
        let s = T::one() - self.f.offset();
        if (s - self.s).abs() > tol {
            return Err(HullError::EmptyTorus(format!("stored s = {} but 1 - |f0| = {}", self.s, s)));
        }
        self.check_shape()
    }

    pub fn contains(&self, z: &Point2<T>, tol: T) -> bool {
        (z.norm() - self.r).abs() <= tol && self.f.eval(z).norm() <= self.sigma + tol
    }

    pub fn normalizing_unitary(&self) -> Unitary2<T> {
        normalizing_unitary(&self.f)
    }

    /// Radius of the fibre circle over a normal-form `z1`.
    fn fibre(&self, z1: Complex<T>) -> T {
        (self.r * self.r - z1.norm_sqr()).max(T::zero()).sqrt()
    }
}

/// Mesh sizes for [`torus_sample`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusMesh {
    pub n_radial: usize,
    pub n_tube: usize,
    pub n_fiber: usize,
}

impl TorusMesh {
    pub fn new(n_radial: usize, n_tube: usize, n_fiber: usize) -> Self {
        TorusMesh { n_radial, n_tube, n_fiber }
    }

    pub fn count(&self) -> usize {
        self.n_radial * self.n_tube * self.n_fiber
    }
}

#[derive(Clone, Debug)]
pub struct TorusSample<T> {
    pub points: Vec<Point2<T>>,
    /// Every point of the torus lies within this distance of some sample.
    pub spacing: T,
}

fn radii<T: Real>(sigma: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![T::zero()];
    }
    let d = T::from_usize(n - 1).unwrap();
    (0..n).map(|i| sigma * T::from_usize(i).unwrap() / d).collect()
}

fn angle<T: Real>(j: usize, n: usize) -> T {
    T::TAU() * T::from_usize(j).unwrap() / T::from_usize(n).unwrap()
}

fn chord<T: Real>(n: usize) -> T {
    // max distance from a point of the unit circle to the nearest of n equally spaced points
    let two = T::lit(2.0);
    two * (T::PI() / (two * T::from_usize(n).unwrap())).sin()
}

/// Covering radius of the mesh, from the polar grid in `z1` and the fibre grid in `z2`.
pub fn mesh_spacing<T: Real>(t: &SolidTorus<T>, mesh: TorusMesh) -> T {
    let two = T::lit(2.0);
    let (d_rad, rho_top) = if mesh.n_radial == 1 {
        (t.sigma, T::zero())
    } else {
        (t.sigma / (two * T::from_usize(mesh.n_radial - 1).unwrap()), t.sigma)
    };
    let d1 = d_rad + rho_top * chord::<T>(mesh.n_tube);
    let c = T::one() - t.s;
    let far = c + t.sigma;
    let near = (c - t.sigma).max(T::zero());
    let h_min = (t.r * t.r - far * far).sqrt();
    let h_max = (t.r * t.r - near * near).sqrt();
    let lip = far / h_min;
    let d2 = lip * d1 + h_max * chord::<T>(mesh.n_fiber);
    d1.hypot(d2)
}

/// Smallest doubling of a base mesh whose covering radius is at most `resolution`.
pub fn mesh_for_resolution<T: Real>(t: &SolidTorus<T>, resolution: T) -> Result<TorusMesh> {
    let mut m = TorusMesh::new(2, 4, 4);
    for _ in 0..64 {
        if mesh_spacing(t, m) <= resolution {
            return Ok(m);
        }
        let base = mesh_spacing(t, TorusMesh::new(m.n_radial * 2 - 1, m.n_tube, m.n_fiber));
        let tube = mesh_spacing(t, TorusMesh::new(m.n_radial, m.n_tube * 2, m.n_fiber));
        let fib = mesh_spacing(t, TorusMesh::new(m.n_radial, m.n_tube, m.n_fiber * 2));
        if fib <= base && fib <= tube {
            m.n_fiber *= 2;
        } else if tube <= base {
            m.n_tube *= 2;
        } else {
            m.n_radial = m.n_radial * 2 - 1;
        }
    }
    Err(HullError::InvalidParameter(format!("resolution {resolution} unreachable")))
}

/// Samples `t` on a normal-form polar grid mapped back by the inverse normalizing unitary.
pub fn torus_sample<T: Real>(t: &SolidTorus<T>, mesh: TorusMesh) -> Result<TorusSample<T>> {
    if mesh.n_radial == 0 || mesh.n_tube == 0 || mesh.n_fiber == 0 {
        return Err(HullError::InvalidParameter("mesh sizes must be at least 1".into()));
    }
    t.validate()?;
    let inv = t.normalizing_unitary().adjoint();
    let c = T::one() - t.s;
    let mut points = Vec::with_capacity(mesh.count());
    for rho in radii(t.sigma, mesh.n_radial) {
        for j in 0..mesh.n_tube {
            let z1 = Complex::new(c, T::zero()) + Complex::from_polar(rho, angle::<T>(j, mesh.n_tube));
            let h = t.fibre(z1);
            for k in 0..mesh.n_fiber {
                let w = Point2::new(z1, Complex::from_polar(h, angle::<T>(k, mesh.n_fiber)));
                points.push(inv.apply(&w));
            }
        }
    }
    Ok(TorusSample { points, spacing: mesh_spacing(t, mesh) })
}

/// Sup of pairwise distances over a polar mesh of the normal-form `z1` disc.
///
/// The fibre rotation is an isometry preserving the torus, so for two base
/// points the farthest fibre points are antipodal and the distance is
/// `sqrt(|a - b|^2 + (h(a) + h(b))^2)`.
pub fn torus_diameter<T: Real>(t: &SolidTorus<T>) -> Result<T> {
    torus_diameter_with(t, 9, 96)
}

pub fn torus_diameter_with<T: Real>(t: &SolidTorus<T>, n_radial: usize, n_tube: usize) -> Result<T> {
    t.validate()?;
    let c = Complex::new(T::one() - t.s, T::zero());
    let mut base = Vec::new();
    for rho in radii(t.sigma, n_radial.max(1)) {
        for j in 0..n_tube.max(1) {
            let a = c + Complex::from_polar(rho, angle::<T>(j, n_tube.max(1)));
            base.push((a, t.fibre(a)));
        }
    }
    let mut best = T::zero();
    for (i, &(a, ha)) in base.iter().enumerate() {
        for &(b, hb) in &base[i..] {
            best = best.max((a - b).norm_sqr() + (ha + hb) * (ha + hb));
        }
    }
    Ok(best.sqrt())
}
