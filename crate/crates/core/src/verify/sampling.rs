use num_complex::Complex;

use super::certificate::{slack, CertKind, Certificate};
use super::fiber::{fiber_min_max, BnbOptions, DiscAffine, Shell};
use crate::error::{HullError, Result};
use crate::geometry::{Affine, Point2};
use crate::scalar::Real;

/// Where a minimum is taken: a shell (handled exactly by fibre reduction) or an explicit mesh.
#[derive(Clone, Debug)]
pub enum Region<T> {
    Shell(Shell<T>),
    Mesh { points: Vec<Point2<T>>, spacing: T },
}

/// Hopf-coordinate mesh of the sphere `|z| = r` with covering radius at most `spacing`.
pub fn sphere_mesh<T: Real>(r: T, spacing: T) -> Region<T> {
    let two = T::lit(2.0);
    let d = spacing / r;
    let n_chi = (T::FRAC_PI_2() / d).ceil().to_usize().unwrap().max(1) + 1;
    let d_chi = T::FRAC_PI_2() / T::from_usize(n_chi - 1).unwrap();
    let ang = d / (two * T::SQRT_2());
    let mut points = Vec::new();
    let mut worst = T::zero();
    for i in 0..n_chi {
        let chi = d_chi * T::from_usize(i).unwrap();
        let (s, c) = chi.sin_cos();
        let na = (T::PI() * c / ang).ceil().to_usize().unwrap().max(1);
        let nb = (T::PI() * s / ang).ceil().to_usize().unwrap().max(1);
        let ca = c * two * (T::PI() / (two * T::from_usize(na).unwrap())).sin();
        let cb = s * two * (T::PI() / (two * T::from_usize(nb).unwrap())).sin();
        worst = worst.max(ca.hypot(cb));
        for a in 0..na {
            let alpha = T::TAU() * T::from_usize(a).unwrap() / T::from_usize(na).unwrap();
            for b in 0..nb {
                let beta = T::TAU() * T::from_usize(b).unwrap() / T::from_usize(nb).unwrap();
                points.push(Point2::new(Complex::from_polar(r * c, alpha), Complex::from_polar(r * s, beta)));
            }
        }
    }
    Region::Mesh { points, spacing: r * (d_chi / two + worst) }
}

/// Mesh of the closed ball `|z| <= r`: concentric sphere meshes plus the origin.
pub fn ball_mesh<T: Real>(r: T, spacing: T) -> Region<T> {
    let n = (r / spacing).ceil().to_usize().unwrap().max(1);
    let step = r / T::from_usize(n).unwrap();
    let mut points = vec![Point2::origin()];
    let mut worst = T::zero();
    for k in 1..=n {
        let rk = step * T::from_usize(k).unwrap();
        if let Region::Mesh { points: p, spacing: s } = sphere_mesh(rk, step / T::lit(2.0) * rk / r) {
            worst = worst.max(s);
            points.extend(p);
        }
    }
    Region::Mesh { points, spacing: step / T::lit(2.0) + worst }
}

/// Result of a certified minimisation.
#[derive(Clone, Debug)]
pub struct LowerBound<T> {
    pub bound: T,
    pub best_value: T,
    pub witness: Option<Point2<T>>,
    pub resolution: T,
    pub samples: usize,
}

impl<T: Real> LowerBound<T> {
    pub fn certificate(&self, subject_ids: Vec<String>) -> Certificate {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        Certificate::decide(
            CertKind::LowerBound,
            subject_ids,
            f(self.bound),
            f(self.best_value),
            f(self.resolution),
            self.samples as u64,
            self.witness.map(|w| Point2::from_reals(f(w.z1.re), f(w.z1.im), f(w.z2.re), f(w.z2.im))),
        )
    }
}

/// Lower bound for `min over region of max_i |f_i|`.
///
/// On a mesh the bound is the sampled minimum less the spacing, valid because each
/// `|f_i|` is 1-Lipschitz. Shells use fibre reduction with gap at most `resolution`
/// and accept one or two functions.
pub fn certified_min<T: Real>(functions: &[Affine<T>], region: &Region<T>, resolution: T) -> Result<LowerBound<T>> {
    if functions.is_empty() {
        return Err(HullError::InvalidParameter("no functions to minimise".into()));
    }
    match region {
        Region::Mesh { points, spacing } => {
            if points.is_empty() {
                return Err(HullError::InvalidParameter("empty region".into()));
            }
            let mut best = T::infinity();
            let mut arg = points[0];
            for p in points {
                let v = functions.iter().map(|f| f.eval(p).norm()).fold(T::zero(), T::max);
                if v < best {
                    best = v;
                    arg = *p;
                }
            }
            let bound = best - *spacing;
            if bound <= T::zero() && best > T::zero() && *spacing > resolution {
                return Err(HullError::ResolutionTooCoarse { bound: bound.to_f64().unwrap_or(f64::NAN) });
            }
            Ok(LowerBound { bound, best_value: best, witness: Some(arg), resolution: *spacing, samples: points.len() })
        }
        Region::Shell(shell) => {
            let (g, wg) = match functions {
                [f] => (*f, T::zero()),
                [_, g] => (*g, T::one()),
                _ => return Err(HullError::InvalidParameter("shell minimisation takes one or two functions".into())),
            };
            let out = fiber_min_max(&functions[0], &DiscAffine::point(&g), *shell, T::one(), wg, BnbOptions::tolerance(resolution));
            if out.exhausted && out.lower <= T::zero() && out.upper > T::zero() {
                return Err(HullError::ResolutionTooCoarse { bound: out.lower.to_f64().unwrap_or(f64::NAN) });
            }
            Ok(LowerBound {
                bound: out.lower,
                best_value: out.upper,
                witness: out.witness,
                resolution: (out.upper - out.lower).max(T::zero()),
                samples: out.cells,
            })
        }
    }
}

/// Checks that every sample of `A` lies in `B` with margin at least `lipschitz * spacing`,
/// where `margin` is an `lipschitz`-Lipschitz function, positive inside `B`.
pub fn region_inclusion<T: Real>(
    subject_ids: Vec<String>,
    a_samples: &[Point2<T>],
    spacing: T,
    margin: impl Fn(&Point2<T>) -> T,
    lipschitz: T,
) -> Certificate {
    let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
    let Some(first) = a_samples.first() else {
        return Certificate::failed(CertKind::Inclusion, subject_ids, f64::NAN, Point2::origin());
    };
    let mut worst = T::infinity();
    let mut arg = *first;
    for p in a_samples {
        let m = margin(p);
        if m < worst {
            worst = m;
            arg = *p;
        }
    }
    let certified = worst - lipschitz * spacing;
    let w = Point2::from_reals(f(arg.z1.re), f(arg.z1.im), f(arg.z2.re), f(arg.z2.im));
    let passed = certified > slack(worst);
    Certificate {
        kind: CertKind::Inclusion,
        subject_ids,
        margin: f(certified),
        resolution: f(spacing),
        sample_count: a_samples.len() as u64,
        witness: Some(w),
        passed,
    }
}
