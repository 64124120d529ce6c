use num_complex::Complex;

use crate::error::{HullError, Result};
use crate::geometry::{Affine, Axis};
use crate::interval::Disc;
use crate::verify::{fiber_min_max, slack, sphere_tori_disjoint, BnbOptions, CertKind, Certificate, DiscAffine, Shell};
use crate::Complex64;

use super::lemma2::lemma2_disjointness;
use super::lines::{chord, equidistributed_count, footprint_bound};
use super::params::{one_minus_r, radius_sq, DerivedConstants, LineSpec, ProofParameters};
use super::{lattice_member, Generator, TorusFamily};

/// Tangent family plus coordinate lattice, with the hull constants of their pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Prop3Output {
    pub tangent: TorusFamily,
    pub lattice: TorusFamily,
    pub t: f64,
    pub s_star: f64,
    pub rho: f64,
    pub r_prime: f64,
    pub alpha: f64,
    /// Main-lemma constant shared by all pairs `(f_j, g_k)`.
    pub a: f64,
    pub c_const: f64,
    pub d_const: f64,
    /// Largest norm of an intersection `l_j ∩ {z1 = 1 - xi}`, `|xi - s| <= 4 sigma / 3`.
    pub max_meet: f64,
    pub disjointness: Certificate,
    pub containment: Certificate,
    pub coverage: Certificate,
}

/// Footprint `(1-t) R2^2 sqrt(2t - t^2) / R` of `l_j ∩ S` around `z1 = 1 - s`.
fn footprint(s: f64, t: f64) -> f64 {
    let r2sq = 2.0 * s - s * s;
    (1.0 - t) * r2sq * (2.0 * t - t * t).sqrt() / radius_sq(s, t).sqrt()
}

/// The largest `t` with footprint at most `5 sigma / 3`, by bisection on the increasing branch.
pub fn solve_prop3_t(s: f64, sigma: f64) -> Result<f64> {
    let goal = 5.0 * sigma / 3.0;
    // the footprint increases on (0, t_peak); locate the peak on a coarse grid first
    let mut t_peak = 0.0;
    let mut best = 0.0;
    for i in 1..=1000 {
        let t = i as f64 / 1000.0;
        let v = footprint(s, t);
        if v > best {
            best = v;
            t_peak = t;
        }
    }
    if goal >= best {
        return Err(HullError::SigmaTooLarge { sigma, s, reason: format!("5 sigma / 3 exceeds the largest footprint {best}") });
    }
    let (mut lo, mut hi) = (0.0, t_peak);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if footprint(s, mid) <= goal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Points of `s + alpha Z + i alpha Z` within `radius` of `s`.
pub fn lattice_points(s: f64, alpha: f64, radius: f64) -> Vec<Complex64> {
    let center = Complex::new(s, 0.0);
    let n = Generator::Lattice { center, alpha, radius }.count();
    (0..n).map(|k| lattice_member(center, alpha, radius, k)).collect()
}

const R_GRID: [f64; 5] = [0.01, 0.05, 0.1, 0.2, 0.3];

/// The `eps`-independent constants of the tangent/lattice construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prop3Constants {
    pub t: f64,
    pub s_star: f64,
    pub r_prime: f64,
    /// Certified lower bound of `max(|f_0|, |g|)` on `{r' <= |z| <= 1}` over the lattice disc.
    pub bound: f64,
    pub a: f64,
    pub c_const: f64,
    pub d_const: f64,
    pub alpha: f64,
    pub max_meet: f64,
}

fn lattice_disc(s: f64, sigma: f64) -> DiscAffine<f64> {
    DiscAffine {
        f0: Disc::new(Complex::new(-(1.0 - s), 0.0), 4.0 * sigma / 3.0),
        ..DiscAffine::point(&Affine::z1_minus(Complex::new(1.0 - s, 0.0)))
    }
}

pub fn prop3_constants(s: f64, sigma: f64, b: f64) -> Result<Prop3Constants> {
    if !(s > 0.0 && s < 1.0) || !(sigma > 0.0) || !(b >= 5.0) {
        return Err(HullError::InvalidParameter(format!("s = {s}, sigma = {sigma}, B = {b}")));
    }
    if 2.0 * sigma >= s {
        return Err(HullError::SigmaTooLarge { sigma, s, reason: "2 sigma must stay below s".into() });
    }
    let t = solve_prop3_t(s, sigma)?;
    let r2 = (2.0 * s - s * s).sqrt();
    let rr = radius_sq(s, t).sqrt();
    let radius = r2 * (1.0 - t);
    // any positive count gives the same member 0
    let f0 = LineSpec::new(&ProofParameters::lines(s, t, 3, 1.0, b), false).function(0)?;
    let big = 4.0 * sigma / 3.0;
    // l_0 ∩ {z1 = 1 - xi}: |P|^2 = R^2 (1 + |s - xi|^2 / ((1-t) R2)^2)
    let max_meet = rr * (1.0 + (big / radius).powi(2)).sqrt();
    if max_meet >= 1.0 {
        return Err(HullError::SigmaTooLarge { sigma, s, reason: format!("lines meet on the sphere ({max_meet})") });
    }
    let gdisc = lattice_disc(s, sigma);
    let annulus = |r: f64| fiber_min_max(&f0, &gdisc, Shell { lo: r, hi: 1.0 }, 1.0, 1.0, BnbOptions::tolerance(1e-3 * (1.0 - max_meet)));
    let radii: Vec<f64> = R_GRID.iter().map(|c| 1.0 - c * (1.0 - max_meet)).collect();
    let m_ref = annulus(radii[0]).lower;
    let mut pick = (radii[0], m_ref);
    for &r in &radii[1..] {
        let m = annulus(r).lower;
        if m >= 0.5 * m_ref {
            pick = (r, m);
        }
    }
    let (r_prime, bound) = pick;
    if bound <= slack(bound) {
        return Err(HullError::ResolutionTooCoarse { bound });
    }
    let a = 0.9 * bound;
    // l^xi ∩ {|f_j| <= eta} is a disc of radius eta / |f_{j,2}| around the meeting point
    let d_const = 1.0 / f0.f2.norm();
    let c_const = 1.05 * 2.0 * (b + 1.0) / d_const;
    let alpha = 0.9 * a / c_const;
    Ok(Prop3Constants { t, s_star: one_minus_r(s, t), r_prime, bound, a, c_const, d_const, alpha, max_meet })
}

pub fn prop3_families(s: f64, sigma: f64, eps: f64, b: f64) -> Result<Prop3Output> {
    if !(eps > 0.0) {
        return Err(HullError::InvalidParameter(format!("eps = {eps}")));
    }
    let k = prop3_constants(s, sigma, b)?;
    let Prop3Constants { t, s_star, r_prime, bound: m_cert, a, c_const, d_const, alpha, max_meet } = k;
    if 2.0 * eps >= s_star {
        return Err(HullError::EpsTooLarge { eps, reason: format!("2 eps must stay below s* = {s_star}") });
    }
    if alpha <= 4.0 * eps {
        return Err(HullError::EpsTooLarge { eps, reason: format!("lattice spacing {alpha} must exceed 4 eps") });
    }
    let radius = (2.0 * s - s * s).sqrt() * (1.0 - t);
    let n = equidistributed_count(radius, b, eps).map_err(|e| HullError::EpsTooLarge { eps, reason: e.to_string() })?;
    let params = ProofParameters { sigma, ..ProofParameters::lines(s, t, n, eps, b) };
    let mut derived = DerivedConstants::compute(&params)?;
    derived.s_star = Some(s_star);
    let spec = LineSpec::new(&params, false);
    let f0 = spec.function(0)?;
    let mut tangent = TorusFamily::new("prop3-tangent", Generator::Rotation { base: f0, axis: Axis::Z2, count: n }, 2.0 * eps, params, derived, |j, _| {
        spec.point(j as i64)
    })?;
    tangent.certificates.push(lemma2_disjointness(&tangent, eps)?);
    let big = 4.0 * sigma / 3.0;
    let gdisc = lattice_disc(s, sigma);
    let rho = s_star;
    let lattice_params = ProofParameters { alpha, ..params };
    let mut lattice_derived = derived;
    lattice_derived.a = Some(a);
    lattice_derived.r_prime = Some(r_prime);
    lattice_derived.c_const = Some(c_const);
    lattice_derived.d_const = Some(d_const);
    lattice_derived.rho = Some(rho);
    tangent.derived = lattice_derived;
    let mut lattice = TorusFamily::new(
        "prop3-lattice",
        Generator::Lattice { center: Complex::new(s, 0.0), alpha, radius: big },
        2.0 * eps,
        lattice_params,
        lattice_derived,
        |_, f| f.foot(),
    )?;
    lattice.certificates.push(lemma2_disjointness(&lattice, eps)?);

    // tangent vs lattice tori: one check covers all pairs (the lattice is z2-rotation invariant)
    let (cross, _) = sphere_tori_disjoint(vec!["prop3-tangent".into(), "prop3-lattice".into()], &f0, 2.0 * eps, &gdisc, 2.0 * eps, 1.0);
    if !cross.passed {
        return Err(HullError::DisjointnessFailed { pair: "prop3 tangent/lattice".into(), detail: format!("margin {:e}", cross.margin) });
    }
    tangent.certificates.push(cross.clone());
    lattice.certificates.push(cross.clone());

    let foot = footprint_bound(&spec.point(0), &spec.direction(0), 2.0 * eps);
    let contain_margin = (2.0 * sigma - foot).min(2.0 * sigma - big - 2.0 * eps);
    let containment = Certificate::decide(CertKind::Inclusion, vec!["prop3".into(), "2sigma".into()], contain_margin, sigma, 0.0, 2, None);

    // coverage chain for {|z1 - (1-s)| <= sigma} ∩ (1 - rho) B̄
    let max_z2 = radius + (1.0 - s) * big / radius;
    let spacing = chord(max_z2, n);
    let parts = [
        Certificate::decide(CertKind::LowerBound, vec!["prop3".into(), "main-lemma".into()], m_cert - a, a, 0.0, 0, None),
        Certificate::decide(CertKind::Coverage, vec!["prop3".into(), "spacing".into()], 2.0 * (b + 1.0) * eps - spacing, eps, 0.0, 0, None),
        Certificate::decide(CertKind::Coverage, vec!["prop3".into(), "CD".into()], c_const * d_const - 2.0 * (b + 1.0), 1.0, 0.0, 0, None),
        Certificate::decide(CertKind::Coverage, vec!["prop3".into(), "lattice-net".into()], a / c_const - alpha / std::f64::consts::SQRT_2, alpha, 0.0, 0, None),
        Certificate::decide(CertKind::Coverage, vec!["prop3".into(), "lattice-reach".into()], big - sigma - alpha / std::f64::consts::SQRT_2, sigma, 0.0, 0, None),
        Certificate::decide(CertKind::Coverage, vec!["prop3".into(), "radius".into()], r_prime - max_meet, 1.0, 0.0, 0, None),
    ];
    let coverage = Certificate::combine(CertKind::Coverage, vec!["prop3".into(), "tangent-lattice-cover".into()], &parts);
    let disjointness = Certificate::combine(
        CertKind::Disjointness,
        vec!["prop3".into()],
        &[tangent.certificates.clone(), lattice.certificates.clone()].concat(),
    );
    Ok(Prop3Output {
        tangent,
        lattice,
        t,
        s_star,
        rho,
        r_prime,
        alpha,
        a,
        c_const,
        d_const,
        max_meet,
        disjointness,
        containment,
        coverage,
    })
}
