//! Separation constants for pairs of tori and the hull regions they certify.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HullError, Result};
use crate::geometry::{line_intersection, Affine, LineIntersection, Point2};
use crate::verify::{fiber_min_max, slack, BnbOptions, CertKind, Certificate, DiscAffine, Shell};

type C64 = Complex<f64>;

/// `a` and `r'` such that `{|f| <= a}` and `{|g| <= a}` are disjoint in `{r' <= |z| <= 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationConstants {
    pub a: f64,
    pub r_prime: f64,
    /// Certified lower bound of the annulus minimum of `max(|f|, |g|)`, minus `a`.
    pub margin: f64,
    /// Gap between the certified lower bound and an attained value.
    pub resolution: f64,
}

/// A set certified to lie in the polynomial hull of a finite union of tori.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum HullRegion {
    /// `{|f g| <= bound} ∩ {|z| <= r}`.
    ProductSublevel { f: Affine<f64>, g: Affine<f64>, bound: f64, r: f64 },
    /// `{|f| <= radius, |g| <= radius} ∩ {|z| <= r}` around the point where `f = g = 0`.
    Bidisc { center: Point2<f64>, f: Affine<f64>, g: Affine<f64>, radius: f64, r: f64 },
    /// Union over `|xi - center| <= disc_radius` of `{z1 = xi, |z| <= r}`, in the coordinates of `frame`.
    CircleFamily { frame: crate::geometry::Unitary2<f64>, center: C64, disc_radius: f64, r: f64 },
    /// `{|z1| <= r1, |z2| <= r2}`.
    FullBidiscProduct { r1: f64, r2: f64 },
}

impl HullRegion {
    pub fn kind_name(&self) -> &'static str {
        match self {
            HullRegion::ProductSublevel { .. } => "product-sublevel",
            HullRegion::Bidisc { .. } => "bidisc",
            HullRegion::CircleFamily { .. } => "circle-family",
            HullRegion::FullBidiscProduct { .. } => "bidisc-product",
        }
    }

    /// Signed membership slack: non-negative iff `z` belongs to the region.
    pub fn slack_at(&self, z: &Point2<f64>) -> f64 {
        match self {
            HullRegion::ProductSublevel { f, g, bound, r } => {
                (bound - f.eval(z).norm() * g.eval(z).norm()).min(r - z.norm())
            }
            HullRegion::Bidisc { f, g, radius, r, .. } => {
                (radius - f.eval(z).norm()).min(radius - g.eval(z).norm()).min(r - z.norm())
            }
            HullRegion::CircleFamily { frame, center, disc_radius, r } => {
                let w = frame.apply(z);
                (disc_radius - (w.z1 - center).norm()).min(r - z.norm())
            }
            HullRegion::FullBidiscProduct { r1, r2 } => (r1 - z.z1.norm()).min(r2 - z.z2.norm()),
        }
    }

    pub fn contains(&self, z: &Point2<f64>) -> bool {
        self.slack_at(z) >= 0.0
    }
}

/// Circles `{f = 0} ∩ S` and `{g = 0} ∩ S` are disjoint unless the lines meet on the sphere
/// or coincide. Returns the intersection norm when the lines meet, else `None`.
pub fn circles_disjoint(f: &Affine<f64>, g: &Affine<f64>) -> Result<Option<f64>> {
    for h in [f, g] {
        if h.offset() >= 1.0 {
            return Err(HullError::LineMissesSphere { offset: h.offset(), radius: 1.0 });
        }
    }
    match line_intersection(f, g, 1e-12) {
        LineIntersection::Point(p) => {
            let n = p.norm();
            if (n - 1.0).abs() <= 1e-12 {
                return Err(HullError::CirclesIntersect(n));
            }
            Ok(Some(n))
        }
        LineIntersection::Parallel => {
            // distinct parallel lines: compare the offsets after aligning gradients
            let k = g.f1 * f.f1.conj() + g.f2 * f.f2.conj();
            if (g.f0 - f.f0 * k).norm() <= 1e-12 {
                return Err(HullError::CirclesIntersect(f.offset()));
            }
            Ok(None)
        }
    }
}

/// Certified lower bound of `min max(|f|, |g|)` over `{r' <= |z| <= 1}`, and the gap to an attained value.
pub fn annulus_min(f: &Affine<f64>, g: &Affine<f64>, r_prime: f64, tol: f64) -> (f64, f64) {
    let out = fiber_min_max(f, &DiscAffine::point(g), Shell { lo: r_prime, hi: 1.0 }, 1.0, 1.0, BnbOptions::tolerance(tol));
    (out.lower, (out.upper - out.lower).max(0.0))
}

const R_GRID: [f64; 5] = [0.01, 0.05, 0.1, 0.2, 0.3];

/// Computes `(a, r')` with `a = 0.9 M(r')`, where `M(r')` is the certified annulus minimum.
///
/// Without a hint, `r'` runs over `1 - c (1 - rho)` for `c` in a fixed grid, where `rho` is the
/// norm of the line intersection when it lies inside the ball (otherwise `0`), and the smallest
/// `r'` with `M(r') >= M_ref / 2` is kept; `M_ref` uses the first grid value.
pub fn separation_constants(f: &Affine<f64>, g: &Affine<f64>, r_prime_hint: Option<f64>) -> Result<SeparationConstants> {
    let meet = circles_disjoint(f, g)?;
    let rho = meet.filter(|&n| n < 1.0).unwrap_or(0.0);
    let tol = 1e-6;
    let (r_prime, m, gap) = match r_prime_hint {
        Some(r) => {
            if !(r > 0.0 && r < 1.0) {
                return Err(HullError::RadiusOutOfRange { r, lo: 0.0, hi: 1.0 });
            }
            let (m, gap) = annulus_min(f, g, r, tol);
            (r, m, gap)
        }
        None => {
            let radii: Vec<f64> = R_GRID.iter().map(|c| 1.0 - c * (1.0 - rho)).collect();
            let (m_ref, gap_ref) = annulus_min(f, g, radii[0], tol);
            let mut pick = (radii[0], m_ref, gap_ref);
            for &r in &radii[1..] {
                let (m, gap) = annulus_min(f, g, r, tol);
                if m >= 0.5 * m_ref {
                    pick = (r, m, gap);
                }
            }
            pick
        }
    };
    if m <= slack(1.0) {
        return Err(HullError::ResolutionTooCoarse { bound: m });
    }
    let a = 0.9 * m;
    Ok(SeparationConstants { a, r_prime, margin: m - a, resolution: gap })
}

/// Samples of the annulus biased towards both lines: uniform points plus points in the
/// `f`- and `g`-tubes of width `a`.
fn annulus_samples(f: &Affine<f64>, g: &Affine<f64>, r_prime: f64, a: f64, n: usize, seed: u64) -> Vec<Point2<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let third = n / 3;
    while out.len() < third {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-3 && nv <= 1.0 {
            let rad = (r_prime.powi(4) + rng.gen::<f64>() * (1.0 - r_prime.powi(4))).powf(0.25);
            out.push(Point2::from_reals(v[0] * rad / nv, v[1] * rad / nv, v[2] * rad / nv, v[3] * rad / nv));
        }
    }
    for (i, h) in [f, g].into_iter().enumerate() {
        let chart = h.chart();
        let goal = if i == 0 { 2 * third } else { n };
        while out.len() < goal {
            let u = Complex::from_polar(a * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            let d2 = (u - h.f0).norm_sqr();
            let rad2 = r_prime * r_prime + rng.gen::<f64>() * (1.0 - r_prime * r_prime);
            if rad2 <= d2 {
                continue;
            }
            let v = Complex::from_polar((rad2 - d2).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            out.push(chart.to_point(u, v));
        }
    }
    out
}

/// Certifies `{|f g| <= a eps} ∩ A ⊂ ({|f| <= eps} ∪ {|g| <= eps}) ∩ A` on the annulus `A`.
///
/// The proof dichotomy reduces this to `M(r') > a`, which is re-certified here; a
/// sampling pass over points concentrated near both lines then looks for violations.
pub fn check_inclusion_eq1(
    f: &Affine<f64>,
    g: &Affine<f64>,
    c: &SeparationConstants,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<Certificate> {
    if !(eps > 0.0) {
        return Err(HullError::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    let ids = vec!["annulus-inclusion".to_string()];
    if c.a <= 0.0 {
        return Ok(Certificate {
            kind: CertKind::Inclusion,
            subject_ids: ids,
            margin: eps,
            resolution: 0.0,
            sample_count: 0,
            witness: None,
            passed: true,
        });
    }
    let target = c.a + 2.0 * slack(c.a);
    let out = fiber_min_max(f, &DiscAffine::point(g), Shell { lo: c.r_prime, hi: 1.0 }, 1.0, 1.0, BnbOptions::target(target));
    let pts = annulus_samples(f, g, c.r_prime, c.a, samples, seed);
    for z in &pts {
        let (x, y) = (f.eval(z).norm(), g.eval(z).norm());
        if x * y <= c.a * eps && x > eps && y > eps {
            return Err(HullError::ViolationFound {
                witness: z.to_reals(),
                detail: format!("|f| = {x}, |g| = {y}, |fg| = {} <= a eps = {}", x * y, c.a * eps),
            });
        }
    }
    let mut cert = Certificate::decide(CertKind::Inclusion, ids, out.lower - c.a, c.a, out.upper - out.lower, pts.len() as u64, out.witness);
    cert.sample_count += out.cells as u64;
    Ok(cert)
}

/// `{|f g| <= a eps} ∩ {|z| <= r}`, in the hull of the two width-`eps` tori on `r S` for `r` in `[r', 1]`.
pub fn corollary_hull_region(f: &Affine<f64>, g: &Affine<f64>, c: &SeparationConstants, eps: f64, r: f64) -> Result<HullRegion> {
    if !(r >= c.r_prime && r <= 1.0) {
        return Err(HullError::RadiusOutOfRange { r, lo: c.r_prime, hi: 1.0 });
    }
    Ok(HullRegion::ProductSublevel { f: *f, g: *g, bound: c.a * eps, r })
}

/// The bidisc `{|f| <= sqrt(a eps), |g| <= sqrt(a eps)}` around the line intersection,
/// intersected with the closed unit ball. Corner points are checked against the product bound.
pub fn certified_bidisc(f: &Affine<f64>, g: &Affine<f64>, c: &SeparationConstants, eps: f64) -> Result<HullRegion> {
    let center = match line_intersection(f, g, 1e-12) {
        LineIntersection::Point(p) if p.norm() < 1.0 => p,
        LineIntersection::Point(p) => return Err(HullError::IntersectionOutsideBall(p.norm())),
        LineIntersection::Parallel => return Err(HullError::IntersectionOutsideBall(f64::INFINITY)),
    };
    let radius = (c.a * eps).sqrt();
    let det = f.f1 * g.f2 - f.f2 * g.f1;
    for k in 0..16 {
        let (x, y) = (Complex::from_polar(radius, 0.4 * k as f64), Complex::from_polar(radius, 1.3 * k as f64));
        // solve f = x, g = y
        let dz = Point2::new((x * g.f2 - y * f.f2) / det, (y * f.f1 - x * g.f1) / det);
        let z = center + dz;
        let prod = f.eval(&z).norm() * g.eval(&z).norm();
        if prod > c.a * eps * (1.0 + 1e-9) {
            return Err(HullError::ViolationFound { witness: z.to_reals(), detail: format!("corner product {prod}") });
        }
    }
    Ok(HullRegion::Bidisc { center, f: *f, g: *g, radius, r: 1.0 })
}

/// `sqrt(a eps) > (B + 1) eps`: neighbouring bidiscs overlap along a circle of spacing `(B + 1) eps`.
pub fn spacing_viable(a: f64, eps: f64, b: f64) -> bool {
    (a * eps).sqrt() > (b + 1.0) * eps
}
