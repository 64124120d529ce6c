use std::f64::consts::{PI, SQRT_2};

use crate::error::{HullError, Result};
use crate::geometry::Axis;
use crate::separation::{separation_constants, SeparationConstants};
use crate::verify::{CertKind, Certificate};

use super::lemma2::lemma2_disjointness;
use super::lines::{equidistributed_count, footprint_bound};
use super::params::{one_minus_r, radius_sq, DerivedConstants, LineSpec, ProofParameters};
use super::psi::{cross_family_disjointness, lemma3_scan, PsiChoice};
use super::{Generator, TorusFamily};

/// Tangent and turned families whose tori lie in `{|z1 - (1 - s)| <= delta}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Prop2Output {
    pub tangent: TorusFamily,
    pub turned: TorusFamily,
    pub s1: f64,
    pub s2: f64,
    pub r_prime: f64,
    pub t: f64,
    pub nu: f64,
    pub psi: PsiChoice,
    pub constants: SeparationConstants,
    /// Radius of the bidiscs around `p_j` that lie in the hull.
    pub rho: f64,
    pub analytic: Certificate,
    pub direct: Certificate,
    pub containment: Certificate,
    pub coverage: Certificate,
}

/// Footprint of `l_j ∩ S` around `z1 = 1 - s`: `(1-t) R2 sqrt(1 - R^2) / R`.
fn sphere_footprint(s: f64, t: f64) -> f64 {
    let r2 = (2.0 * s - s * s).sqrt();
    let rsq = radius_sq(s, t);
    (1.0 - t) * r2 * (1.0 - rsq).max(0.0).sqrt() / rsq.sqrt()
}

/// Largest `t` on a grid refined by bisection with footprint at most `delta / 2`,
/// `s1 <= s_upper / 2` and `R^2 - q^2 >= (1 - q^2) / 2`.
fn choose_t(s: f64, delta: f64, q: f64, s_upper: f64) -> Option<f64> {
    let ok = |t: f64| {
        let rsq = radius_sq(s, t);
        sphere_footprint(s, t) <= 0.5 * delta && 1.0 - rsq.sqrt() <= 0.5 * s_upper && rsq - q * q >= 0.5 * (1.0 - q * q)
    };
    // every condition holds for small t and fails past a threshold
    let mut hi = 0.5;
    while ok(hi) {
        hi = 0.5 * (1.0 + hi);
        if hi > 1.0 - 1e-9 {
            return Some(hi);
        }
    }
    let mut lo = hi;
    while !ok(lo) {
        lo *= 0.5;
        if lo < 1e-300 {
            return None;
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

pub fn prop2_families(s: f64, delta: f64, q: f64, s_upper: f64, eps: f64, b: f64) -> Result<Prop2Output> {
    if !(s > 0.0 && s < 1.0) || !(delta > 0.0) || !(q > 0.0 && q < 1.0) || !(s_upper > 0.0) || !(eps > 0.0) || !(b >= 5.0) {
        return Err(HullError::InvalidParameter(format!("s = {s}, delta = {delta}, q = {q}, s_upper = {s_upper}, eps = {eps}, B = {b}")));
    }
    let fail = |what: String| HullError::ParameterSearchFailed(format!("s = {s}, eps = {eps}: {what}"));
    let t = choose_t(s, delta, q, s_upper).ok_or_else(|| fail("no admissible t".into()))?;
    // below this 1 - R is not resolved relative to the unit sphere in double precision
    if one_minus_r(s, t) < 1e-12 {
        return Err(fail(format!("t = {t:e} gives 1 - R = {:e}, below double-precision resolution", one_minus_r(s, t))));
    }
    if 2.0 * eps >= one_minus_r(s, t) {
        return Err(fail(format!("2 eps must stay below 1 - R = {:e}", one_minus_r(s, t))));
    }
    let r2 = (2.0 * s - s * s).sqrt();
    let radius = r2 * (1.0 - t);
    let n = equidistributed_count(radius, b, eps).map_err(|e| fail(e.to_string()))?;
    let w = 2.0 * eps;
    let base = ProofParameters { delta, q, ..ProofParameters::lines(s, t, n, eps, b) };

    // halve nu until the turned family is small enough and stays inside the delta-slab
    let mut nu = s / 10.0;
    loop {
        let p = base.with_turn(0.0, nu);
        let d = DerivedConstants::compute(&p)?;
        let turned = LineSpec::new(&p, true);
        if d.s2 <= 0.5 * s_upper && footprint_bound(&turned.point(0), &turned.direction(0), w) <= delta {
            break;
        }
        nu *= 0.5;
        if nu < s * 1e-12 {
            return Err(fail(format!("no nu keeps s2 below {}", 0.5 * s_upper)));
        }
    }
    let choice = lemma3_scan(s, t, nu, b, eps, 0, 16).map_err(|e| fail(e.to_string()))?;
    let psi = choice.psi;
    let params = ProofParameters { delta, q, ..choice.params };
    let derived = choice.derived;
    let n = params.n_count;

    let tangent_spec = LineSpec::new(&params, false);
    let turned_spec = LineSpec::new(&params, true);
    let f0 = tangent_spec.function(0)?;
    let g0 = turned_spec.function(0)?;
    let mut tangent = TorusFamily::new("prop2-tangent", Generator::Rotation { base: f0, axis: Axis::Z2, count: n }, w, params, derived, |j, _| {
        tangent_spec.point(j as i64)
    })?;
    let mut turned = TorusFamily::new("prop2-turned", Generator::Rotation { base: g0, axis: Axis::Z2, count: n }, w, params, derived, |j, _| {
        turned_spec.point(j as i64)
    })?;
    for fam in [&mut tangent, &mut turned] {
        let cert = lemma2_disjointness(fam, eps).map_err(|e| fail(e.to_string()))?;
        fam.certificates.push(cert);
    }
    let (analytic, direct) = cross_family_disjointness(&tangent, &turned, w)?;
    if !direct.passed {
        return Err(fail(format!("direct cross check failed with margin {:e} (intersection-norm margin {:e}, {})", direct.margin, analytic.margin, direct.subject_ids.join(" "))));
    }
    tangent.certificates.push(direct.clone());
    turned.certificates.push(direct.clone());

    let reach = |spec: &LineSpec| {
        let p = spec.point(0);
        (p.z1 - (1.0 - s)).norm() + footprint_bound(&p, &spec.direction(0), w)
    };
    let containment = Certificate::decide(
        CertKind::Inclusion,
        vec!["prop2".into(), "delta".into()],
        delta - reach(&tangent_spec).max(reach(&turned_spec)),
        delta,
        0.0,
        2,
        None,
    );

    // bidiscs of radius rho around p_j lie in {|f_j| |g_j| <= a eps}
    let constants = separation_constants(&f0, &g0, None).map_err(|e| fail(e.to_string()))?;
    let root = (constants.a * eps).sqrt();
    let p0 = tangent_spec.point(0);
    let spread = (f0.f1.norm() + f0.f2.norm()).max(g0.f1.norm() + g0.f2.norm());
    let rho = (root - g0.eval(&p0).norm()) / spread;
    let need = eps.max(2.0 * radius * (PI / (2 * n) as f64).sin());
    let parts = [
        Certificate::decide(CertKind::Coverage, vec!["prop2".into(), "bidisc".into()], rho - need, eps, 0.0, 0, None),
        Certificate::decide(
            CertKind::Coverage,
            vec!["prop2".into(), "inside".into()],
            constants.r_prime - (p0.norm() + SQRT_2 * rho),
            rho.abs(),
            0.0,
            0,
            None,
        ),
        Certificate::decide(
            CertKind::Coverage,
            vec!["prop2".into(), "outside-q".into()],
            (1.0 - s - eps).powi(2) + radius * radius - q * q,
            1.0,
            0.0,
            0,
            None,
        ),
    ];
    let coverage = Certificate::combine(CertKind::Coverage, vec!["prop2".into(), "bidisc-cover".into()], &parts);
    for fam in [&mut tangent, &mut turned] {
        fam.derived.a = Some(constants.a);
        fam.derived.r_prime = Some(constants.r_prime);
        fam.derived.rho = Some(rho);
    }
    Ok(Prop2Output {
        tangent,
        turned,
        s1: derived.s1,
        s2: derived.s2,
        r_prime: constants.r_prime,
        t,
        nu,
        psi,
        constants,
        rho,
        analytic,
        direct,
        containment,
        coverage,
    })
}
