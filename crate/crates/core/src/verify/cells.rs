//! Second, independent bound for sphere problems: branch-and-bound over cells in
//! the chart parameters `(u, theta)` with `z = chart(u, rho(u) e^{i theta})`,
//! bounding each cell by its centre value minus a Lipschitz radius.

use std::collections::BinaryHeap;

use num_complex::Complex;

use super::fiber::{express_disc, kappa, offset_range, BnbOptions, BnbOutcome, DiscAffine, Ranked};
use crate::geometry::{Affine, Point2, TubeChart};
use crate::scalar::Real;

struct Sphere<T> {
    f0: Complex<T>,
    k0: Complex<T>,
    ku: Complex<T>,
    kv: Complex<T>,
    fam: (T, T, T),
    kap: T,
    chart: TubeChart<T>,
    wf: T,
    wg: T,
}

struct Eval<T> {
    lower: T,
    upper: Option<(T, Point2<T>)>,
    split_u: bool,
}

impl<T: Real> Sphere<T> {
    fn eval(&self, c: Complex<T>, h: T, th: T, th_h: T) -> Option<Eval<T>> {
        let two = T::lit(2.0);
        let rad = h * T::SQRT_2();
        let q = offset_range(c, rad, self.f0);
        if self.kap - q.lo < T::zero() {
            return None;
        }
        let qc = offset_range(c, T::zero(), self.f0).lo;
        let rho_c = (self.kap - qc).max(T::zero()).sqrt();
        let d = (qc - q.lo).max(q.hi - qc).max(T::zero());
        let d_rho = if rho_c > T::zero() { d.sqrt().min(d / rho_c) } else { d.sqrt() };
        let rho_max = rho_c + d_rho;
        let v = Complex::from_polar(rho_c, th);
        let gv = self.k0 + self.ku * c + self.kv * v;
        let lip_u = self.ku.norm() * rad + self.kv.norm() * d_rho;
        let lip_t = self.kv.norm() * rho_max * two * (th_h / two).sin();
        let fam = self.fam.0 + self.fam.1 * (c.norm() + rad) + self.fam.2 * rho_max;
        let glb = (gv.norm() - lip_u - lip_t - fam).max(T::zero());
        let ulb = (c.norm() - rad).max(T::zero());
        let upper = if self.kap - qc >= T::zero() {
            Some(((self.wf * c.norm()).max(self.wg * gv.norm()), self.chart.to_point(c, v)))
        } else {
            None
        };
        Some(Eval { lower: (self.wf * ulb).max(self.wg * glb), upper, split_u: lip_u + rad >= lip_t })
    }
}

#[derive(Clone, Copy)]
struct Cell4<T> {
    c: Complex<T>,
    h: T,
    th: T,
    th_h: T,
    split_u: bool,
}

/// Bound of `min max(wf |f|, wg |g|)` over the sphere `|z| = r`, for every member of `g`.
pub fn sphere_cells_min_max<T: Real>(
    f: &Affine<T>,
    g: &DiscAffine<T>,
    r: T,
    wf: T,
    wg: T,
    opts: BnbOptions<T>,
) -> BnbOutcome<T> {
    let chart = f.chart();
    let dg = express_disc(&chart, g);
    let p = Sphere {
        f0: f.f0,
        k0: dg.k0.c,
        ku: dg.ku.c,
        kv: dg.kv.c,
        fam: (dg.k0.r, dg.ku.r, dg.kv.r),
        kap: kappa(r, f.f0),
        chart,
        wf,
        wg,
    };
    let (half, cap) = opts.domain(f.offset() + r, wf);
    let mut best = BnbOutcome { lower: T::infinity(), upper: T::infinity(), witness: None, cells: 0, exhausted: false };
    let mut heap: BinaryHeap<Ranked<(T, Cell4<T>)>> = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Ranked<(T, Cell4<T>)>>, best: &mut BnbOutcome<T>, c, h, th, th_h| {
        best.cells += 1;
        if let Some(e) = p.eval(c, h, th, th_h) {
            if let Some((ub, z)) = e.upper {
                if ub < best.upper {
                    best.upper = ub;
                    best.witness = Some(z);
                }
            }
            let cell = Cell4 { c, h, th, th_h, split_u: e.split_u };
            heap.push(Ranked { key: e.lower.to_f64().unwrap_or(f64::NAN), item: (e.lower, cell) });
        }
    };
    push(&mut heap, &mut best, Complex::new(T::zero(), T::zero()), half, T::PI(), T::PI());
    loop {
        let Some(Ranked { item: (lower, cell), .. }) = heap.pop() else {
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
        let Cell4 { c, h, th, th_h, split_u } = cell;
        if split_u {
            let h2 = h / T::lit(2.0);
            for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
                let cc = c + Complex::new(T::lit(dx) * h2, T::lit(dy) * h2);
                push(&mut heap, &mut best, cc, h2, th, th_h);
            }
        } else {
            let t2 = th_h / T::lit(2.0);
            push(&mut heap, &mut best, c, h, th - t2, t2);
            push(&mut heap, &mut best, c, h, th + t2, t2);
        }
    }
}
