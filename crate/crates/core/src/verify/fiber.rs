//! Lower bounds for `max(wf |f|, wg |g|)` over spherical shells via fibre reduction.
//!
//! In the chart of `f` a point is `(u, v)` with `f = u` and `|z|^2 = |u - f0|^2 + |v|^2`,
//! so for fixed `u` the shell slice is an annulus in `v` of radii `rho_lo(u) <= |v| <= rho_hi(u)`.
//! `g = G(u) + kv v` then ranges over an annulus centred at `G(u)`, whose distance to `0`
//! is explicit. A quadtree in `u` finishes the job.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;

use crate::geometry::{Affine, Point2, TubeChart};
use crate::interval::{Disc, Interval};
use crate::scalar::Real;

/// Affine function whose coefficients are only known to lie in discs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscAffine<T> {
    pub f0: Disc<T>,
    pub f1: Disc<T>,
    pub f2: Disc<T>,
}

impl<T: Real> DiscAffine<T> {
    pub fn point(f: &Affine<T>) -> Self {
        DiscAffine { f0: Disc::point(f.f0), f1: Disc::point(f.f1), f2: Disc::point(f.f2) }
    }

    pub fn center(&self) -> Affine<T> {
        Affine { f0: self.f0.c, f1: self.f1.c, f2: self.f2.c }
    }
}

/// Chart coefficients `k0 + ku u + kv v` with disc uncertainty.
#[derive(Clone, Copy, Debug)]
pub struct DiscChart<T> {
    pub k0: Disc<T>,
    pub ku: Disc<T>,
    pub kv: Disc<T>,
}

pub fn express_disc<T: Real>(chart: &TubeChart<T>, g: &DiscAffine<T>) -> DiscChart<T> {
    let n1 = Disc::point(chart.n.z1);
    let n2 = Disc::point(chart.n.z2);
    let w1 = Disc::point(chart.w.z1);
    let w2 = Disc::point(chart.w.z2);
    let ku = g.f1 * n1 + g.f2 * n2;
    let kv = g.f1 * w1 + g.f2 * w2;
    let k0 = g.f0 - ku * Disc::point(chart.f.f0);
    DiscChart { k0, ku, kv }
}

/// `{lo <= |z| <= hi}`; `lo = hi` is a sphere and `lo = 0` a ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shell<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Shell<T> {
    pub fn sphere(r: T) -> Self {
        Shell { lo: r, hi: r }
    }

    pub fn ball(r: T) -> Self {
        Shell { lo: T::zero(), hi: r }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BnbOptions<T> {
    /// Stop as soon as the lower bound reaches this value or a point below it is found.
    pub target: Option<T>,
    /// Stop when upper and lower bounds are this close.
    pub tol: T,
    /// Once the target is certified, keep refining until the gap is at most this
    /// fraction of `upper - target`, so the reported margin is meaningful.
    pub rel: T,
    pub max_cells: usize,
}

impl<T: Real> BnbOptions<T> {
    pub fn target(t: T) -> Self {
        BnbOptions { target: Some(t), tol: T::zero(), rel: T::lit(0.5), max_cells: 400_000 }
    }

    /// Stops as soon as the target is decided either way.
    pub fn decide(t: T) -> Self {
        BnbOptions { target: Some(t), tol: T::zero(), rel: T::infinity(), max_cells: 400_000 }
    }

    pub fn tolerance(tol: T) -> Self {
        BnbOptions { target: None, tol, rel: T::zero(), max_cells: 2_000_000 }
    }

    /// Search square half-side and the value beyond which cells are not explored.
    pub(crate) fn domain(&self, full: T, wf: T) -> (T, T) {
        match self.target {
            Some(t) if wf > T::zero() => {
                let cap = t * T::lit(2.0);
                (full.min(cap / wf), cap)
            }
            _ => (full, T::infinity()),
        }
    }

    pub(crate) fn done(&self, lower: T, upper: T, cap: T) -> bool {
        if let Some(t) = self.target {
            if upper < t {
                return true;
            }
            if lower >= t && (lower >= cap || upper - lower <= self.rel * (upper - t)) {
                return true;
            }
        }
        upper - lower <= self.tol
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BnbOutcome<T> {
    /// Certified lower bound of the minimum (up to rounding).
    pub lower: T,
    /// Value attained at `witness` for the centre member of the family.
    pub upper: T,
    pub witness: Option<Point2<T>>,
    pub cells: usize,
    /// Hit the cell budget before the stopping rule fired.
    pub exhausted: bool,
}

/// Heap entry ordered so that the smallest lower bound pops first.
pub(crate) struct Ranked<P> {
    pub key: f64,
    pub item: P,
}

impl<P> PartialEq for Ranked<P> {
    fn eq(&self, o: &Self) -> bool {
        self.key == o.key
    }
}
impl<P> Eq for Ranked<P> {}
impl<P> PartialOrd for Ranked<P> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<P> Ord for Ranked<P> {
    fn cmp(&self, o: &Self) -> Ordering {
        // min-heap on the lower bound
        o.key.partial_cmp(&self.key).unwrap_or(Ordering::Equal)
    }
}

/// Range of `|u - f0|^2 - |f0|^2` over the disc `|u - c| <= rad`, written without cancellation.
pub(crate) fn offset_range<T: Real>(c: Complex<T>, rad: T, f0: Complex<T>) -> Interval<T> {
    let two = T::lit(2.0);
    let base = c.norm_sqr() - two * (c * f0.conj()).re;
    let dc = (c - f0).norm();
    Interval { lo: base - two * rad * dc, hi: base + two * rad * dc + rad * rad }
}

/// `r^2 - |f0|^2` computed from `1 - |f0|^2` and `1 - r^2`.
pub(crate) fn kappa<T: Real>(r: T, f0: Complex<T>) -> T {
    let m = f0.norm();
    (T::one() - m) * (T::one() + m) - (T::one() - r) * (T::one() + r)
}

struct Problem<T> {
    f0: Complex<T>,
    g: DiscChart<T>,
    gc: (Complex<T>, Complex<T>, Complex<T>),
    chart: TubeChart<T>,
    kap_lo: T,
    kap_hi: T,
    wf: T,
    wg: T,
}

impl<T: Real> Problem<T> {
    fn rho_range(&self, kap: T, q: Interval<T>) -> Option<Interval<T>> {
        let hi = kap - q.lo;
        if hi < T::zero() {
            return None;
        }
        Some(Interval { lo: (kap - q.hi).max(T::zero()).sqrt(), hi: hi.sqrt() })
    }

    fn lower(&self, c: Complex<T>, h: T) -> Option<T> {
        let rad = h * T::SQRT_2();
        let q = offset_range(c, rad, self.f0);
        let rho_hi = self.rho_range(self.kap_hi, q)?;
        let rho_lo = self.rho_range(self.kap_lo, q).unwrap_or(Interval::point(T::zero()));
        let g = (self.g.k0 + self.g.ku * Disc::new(c, rad)).modulus();
        let k = self.g.kv.modulus();
        let fib = (g.lo - k.hi * rho_hi.hi).max(k.lo * rho_lo.lo - g.hi).max(T::zero());
        let u = (c.norm() - rad).max(T::zero());
        Some((self.wf * u).max(self.wg * fib))
    }

    /// Best point over the fibre above `c` for the centre member; `None` if `c` is off the shell.
    fn upper(&self, c: Complex<T>) -> Option<(T, Point2<T>)> {
        let q = offset_range(c, T::zero(), self.f0).lo;
        let hi2 = self.kap_hi - q;
        if hi2 < T::zero() {
            return None;
        }
        let rho_hi = hi2.sqrt();
        let rho_lo = (self.kap_lo - q).max(T::zero()).sqrt();
        let (k0, ku, kv) = self.gc;
        let big = k0 + ku * c;
        let v = if kv.norm() > T::zero() && big.norm() > T::zero() {
            let t = (big.norm() / kv.norm()).max(rho_lo).min(rho_hi);
            -(big / kv) * (t / (big / kv).norm())
        } else {
            Complex::new(rho_hi, T::zero())
        };
        let val = (self.wf * c.norm()).max(self.wg * (big + kv * v).norm());
        Some((val, self.chart.to_point(c, v)))
    }
}

/// Branch-and-bound lower bound of `min max(wf |f|, wg |g|)` over the shell, for every member of `g`.
pub fn fiber_min_max<T: Real>(
    f: &Affine<T>,
    g: &DiscAffine<T>,
    shell: Shell<T>,
    wf: T,
    wg: T,
    opts: BnbOptions<T>,
) -> BnbOutcome<T> {
    let chart = f.chart();
    let dg = express_disc(&chart, g);
    let p = Problem {
        f0: f.f0,
        g: dg,
        gc: (dg.k0.c, dg.ku.c, dg.kv.c),
        chart,
        kap_lo: kappa(shell.lo, f.f0),
        kap_hi: kappa(shell.hi, f.f0),
        wf,
        wg,
    };
    let (half, cap) = opts.domain(f.offset() + shell.hi, wf);
    let mut best = BnbOutcome { lower: T::infinity(), upper: T::infinity(), witness: None, cells: 0, exhausted: false };
    let origin = Complex::new(T::zero(), T::zero());
    let mut heap = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Ranked<(T, Complex<T>, T)>>, best: &mut BnbOutcome<T>, c: Complex<T>, h: T| {
        best.cells += 1;
        if let Some(lb) = p.lower(c, h) {
            if let Some((ub, z)) = p.upper(c) {
                if ub < best.upper {
                    best.upper = ub;
                    best.witness = Some(z);
                }
            }
            heap.push(Ranked { key: lb.to_f64().unwrap_or(f64::NAN), item: (lb, c, h) });
        }
    };
    push(&mut heap, &mut best, origin, half);
    loop {
        let Some(Ranked { item: (lower, cc, ch), .. }) = heap.pop() else {
            best.lower = cap;
            return best;
        };
        best.lower = lower.min(cap);
        if opts.done(best.lower, best.upper, cap) {
            return best;
        }
        if best.cells >= opts.max_cells {
            best.exhausted = true;
            return best;
        }
        let h = ch / T::lit(2.0);
        for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
            let c = cc + Complex::new(T::lit(dx) * h, T::lit(dy) * h);
            push(&mut heap, &mut best, c, h);
        }
    }
}
