//! Projected subgradient descent for `min max(wf |f|, wg |g|)` over a closed ball.
//! The objective is convex, so any local minimum is global; several starts guard
//! against stalling at kinks.

use num_complex::Complex;

use crate::geometry::{line_intersection, Affine, LineIntersection, Point2};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug)]
pub struct DescentResult<T> {
    pub value: T,
    pub argmin: Point2<T>,
    pub iterations: usize,
}

fn project<T: Real>(z: Point2<T>, r: T) -> Point2<T> {
    let n = z.norm();
    if n > r {
        z.scale(r / n)
    } else {
        z
    }
}

struct Objective<T> {
    f: Affine<T>,
    g: Affine<T>,
    wf: T,
    wg: T,
}

impl<T: Real> Objective<T> {
    fn value(&self, z: &Point2<T>) -> T {
        (self.wf * self.f.eval(z).norm()).max(self.wg * self.g.eval(z).norm())
    }

    /// Euclidean gradient of `w |h|` at `z`, as a vector of C^2 (zero on the line).
    fn grad(h: &Affine<T>, w: T, z: &Point2<T>) -> Point2<T> {
        let v = h.eval(z);
        let m = v.norm();
        if m == T::zero() {
            return Point2::origin();
        }
        Point2::new(h.f1.conj(), h.f2.conj()) * (v * (w / m))
    }

    /// Minimum-norm element of the subdifferential restricted to near-active pieces.
    /// Minimum-norm element of the subdifferential plus the ball's normal cone.
    /// Pieces within `step * (wf + wg)` of the max count as active, and the ball
    /// constraint counts once `|z|` is within `step` of `r`.
    fn descent_dir(&self, z: &Point2<T>, step: T, r: T) -> Point2<T> {
        let a = self.wf * self.f.eval(z).norm();
        let b = self.wg * self.g.eval(z).norm();
        let band = step * (self.wf + self.wg);
        let ga = Self::grad(&self.f, self.wf, z);
        let gb = Self::grad(&self.g, self.wg, z);
        let (lo, hi) = if a > b + band {
            (T::one(), T::one())
        } else if b > a + band {
            (T::zero(), T::zero())
        } else {
            (T::zero(), T::one())
        };
        let zn = z.norm();
        let normal = if zn >= r - step && zn > T::zero() { Some(z.scale(T::one() / zn)) } else { None };
        let pick = |lam: T| {
            let w = ga.scale(lam) + gb.scale(T::one() - lam);
            match normal {
                Some(n) => {
                    let mu = (-w.hermitian(&n).re).max(T::zero());
                    w + n.scale(mu)
                }
                None => w,
            }
        };
        // the squared norm is convex in lam
        let (mut l, mut h) = (lo, hi);
        for _ in 0..80 {
            if h - l <= T::epsilon() {
                break;
            }
            let m1 = l + (h - l) / T::lit(3.0);
            let m2 = h - (h - l) / T::lit(3.0);
            if pick(m1).norm_sqr() <= pick(m2).norm_sqr() {
                h = m2;
            } else {
                l = m1;
            }
        }
        pick((l + h) / T::lit(2.0))
    }
}

fn starts<T: Real>(f: &Affine<T>, g: &Affine<T>, r: T) -> Vec<Point2<T>> {
    let mut v = vec![Point2::origin(), project(f.foot(), r), project(g.foot(), r)];
    if let LineIntersection::Point(p) = line_intersection(f, g, T::lit(1e-14)) {
        v.push(project(p, r));
    }
    let half = r / T::lit(2.0);
    let mut k = 0usize;
    while v.len() < 16 {
        // deterministic spread over the half-radius sphere
        let a = T::lit(2.399_963_229_728_653) * T::from_usize(k).unwrap();
        let b = T::lit(0.7) + T::lit(1.3) * T::from_usize(k).unwrap();
        let t = T::lit(0.1) + T::lit(1.37) * T::from_usize(k % 7).unwrap() / T::lit(7.0);
        let (st, ct) = t.sin_cos();
        v.push(Point2::new(Complex::from_polar(half * ct, a), Complex::from_polar(half * st, b)));
        k += 1;
    }
    v
}

pub fn convex_min_max_weighted<T: Real>(f: &Affine<T>, g: &Affine<T>, wf: T, wg: T, r: T) -> DescentResult<T> {
    let obj = Objective { f: *f, g: *g, wf, wg };
    let mut best = DescentResult { value: T::infinity(), argmin: Point2::origin(), iterations: 0 };
    let floor = T::epsilon() * (T::one() + r);
    for z0 in starts(f, g, r) {
        let mut z = z0;
        let mut val = obj.value(&z);
        let mut step = r / T::lit(4.0);
        let mut it = 0;
        while it < 4000 && step > floor {
            it += 1;
            let d = obj.descent_dir(&z, step, r);
            let dn = d.norm();
            if dn <= T::epsilon() {
                break;
            }
            let cand = project(z - d.scale(step / dn), r);
            let cv = obj.value(&cand);
            if cv < val {
                z = cand;
                val = cv;
                step = step * T::lit(1.5);
            } else {
                step = step / T::lit(2.0);
            }
        }
        best.iterations += it;
        if val < best.value {
            best.value = val;
            best.argmin = z;
        }
    }
    best
}

/// Global minimum of `max(|f|, |g|)` over `{|z| <= r}` and a point attaining it.
pub fn convex_min_max_moduli<T: Real>(f: &Affine<T>, g: &Affine<T>, r: T) -> DescentResult<T> {
    convex_min_max_weighted(f, g, T::one(), T::one(), r)
}
