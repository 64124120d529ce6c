use std::f64::consts::{PI, TAU};

use crate::error::{HullError, Result};
use crate::geometry::{line_intersection, Affine, Axis, LineIntersection, Point2};
use crate::verify::{slack, sphere_tori_disjoint, CertKind, Certificate};

use super::lemma2::{certify_ranges, dyadic_blocks, rotation_range};
use super::lines::count_band;
use super::params::{f_function, DerivedConstants, LineSpec, ProofParameters};
use super::{Generator, TorusFamily};

/// Intersection `P` of `{f = 0}` and `{g = 0}` and a bound `tau` with
/// `| |z|^2 - |P|^2 | <= tau` on `{|f| <= w} ∩ {|g| <= w}`.
///
/// Writing `z = P + x a + y b` with `f(z) = x`, `g(z) = y`, the bound is
/// `2 w (|<a, P>| + |<b, P>|) + w^2 (|a| + |b|)^2`.
pub fn neighbourhood_bound(f: &Affine<f64>, g: &Affine<f64>, w: f64) -> Option<(Point2<f64>, f64)> {
    let p = match line_intersection(f, g, 1e-14) {
        LineIntersection::Point(p) => p,
        LineIntersection::Parallel => return None,
    };
    let det = f.f1 * g.f2 - f.f2 * g.f1;
    let a = Point2::new(g.f2 / det, -g.f1 / det);
    let b = Point2::new(-f.f2 / det, f.f1 / det);
    let tau = 2.0 * w * (a.hermitian(&p).norm() + b.hermitian(&p).norm()) + w * w * (a.norm() + b.norm()).powi(2);
    Some((p, tau))
}

/// Outcome of the `psi` search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiChoice {
    pub psi: f64,
    /// `min_m ( | |P_{0,m}|^2 - 1 | - tau_m )` over the examined offsets.
    pub gap: f64,
    pub worst_m: i64,
    pub tau_max: f64,
}

/// Excess `|P|^2 - 1` as a function of the angle `theta = phi_m + psi`.
fn excess_at(theta: f64, p: &ProofParameters, d: &DerivedConstants) -> f64 {
    let f = f_function(theta, d.q);
    let k = d.r2 * (1.0 - p.t) / (1.0 - p.s);
    let one_minus_r2 = (2.0 * p.t - p.t * p.t) * (2.0 * p.s - p.s * p.s);
    d.r * d.r * k * k * f * f - one_minus_r2
}

/// Angle in `(0, pi]` where the excess is closest to zero (its root when it changes sign).
fn critical_angle(p: &ProofParameters, d: &DerivedConstants) -> f64 {
    if excess_at(PI, p, d) <= 0.0 {
        return PI;
    }
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess_at(mid, p, d) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Offsets `m` whose intersection norms are nearest to the sphere for this `psi`.
fn candidate_offsets(psi: f64, p: &ProofParameters, d: &DerivedConstants, half: i64) -> Vec<i64> {
    let n = p.n_count as i64;
    if n <= 4 * half + 2 {
        return (-(n - 1) / 2..=n / 2).collect();
    }
    let step = TAU / n as f64;
    let phc = critical_angle(p, d);
    let mut out = Vec::new();
    for target in [phc, -phc] {
        let mc = ((target - psi) / step).round() as i64;
        out.extend(mc - half..=mc + half);
    }
    out
}

fn margin_for(m: i64, f0: &Affine<f64>, turned: &LineSpec, w: f64) -> Result<(f64, f64)> {
    let g = turned.function(m)?;
    match neighbourhood_bound(f0, &g, w) {
        Some((pt, tau)) => Ok(((pt.norm_sqr() - 1.0).abs() - tau, tau)),
        None => Ok((f64::INFINITY, 0.0)),
    }
}

fn gap_at(psi: f64, p: &ProofParameters, d: &DerivedConstants, w: f64, offsets: Option<&[i64]>) -> Result<PsiChoice> {
    let tangent = LineSpec::new(p, false);
    let q = ProofParameters { psi, ..*p };
    let turned = LineSpec::new(&q, true);
    let f0 = tangent.function(0)?;
    let owned;
    let ms = match offsets {
        Some(ms) => ms,
        None => {
            owned = candidate_offsets(psi, p, d, 32);
            &owned
        }
    };
    let mut best = PsiChoice { psi, gap: f64::INFINITY, worst_m: 0, tau_max: 0.0 };
    for &m in ms {
        let (gap, tau) = margin_for(m, &f0, &turned, w)?;
        best.tau_max = best.tau_max.max(tau);
        if gap < best.gap {
            best.gap = gap;
            best.worst_m = m;
        }
    }
    Ok(best)
}

/// Chooses `psi` with `|psi| <= 2 pi / N` so that every intersection `P_{0,m}(psi)` keeps
/// the tube neighbourhood `{|f_0| <= w} ∩ {|g_m| <= w}` off the unit sphere.
///
/// The search uses the symmetry `|P_{0,m}(psi)| = |P_{0,-m}(-psi)|` to scan `psi >= 0`
/// only: a grid of 64 values followed by three zooming passes.
pub fn choose_psi(p: &ProofParameters, d: &DerivedConstants, tube_width: f64) -> Result<PsiChoice> {
    let zero = gap_at(0.0, p, d, tube_width, None)?;
    if zero.gap > slack(zero.tau_max) {
        return Ok(zero);
    }
    let top = TAU / p.n_count as f64;
    let mut best = zero;
    let mut h = top / 63.0;
    for i in 1..64 {
        let c = gap_at(h * i as f64, p, d, tube_width, None)?;
        if c.gap > best.gap {
            best = c;
        }
    }
    for _ in 0..3 {
        let center = best.psi;
        h /= 8.0;
        for i in -8..=8 {
            let psi = (center + h * i as f64).clamp(0.0, top);
            let c = gap_at(psi, p, d, tube_width, None)?;
            if c.gap > best.gap {
                best = c;
            }
        }
    }
    if best.gap > slack(best.tau_max) {
        Ok(best)
    } else {
        Err(HullError::NoPsiFound { best_gap: best.gap })
    }
}

/// Certifies that the tori `{|f_j| <= w} ∩ S` and `{|g_k| <= w} ∩ S` of a tangent and a
/// turned family are disjoint for all `j, k`, by two independent paths:
///
/// 1. the intersection-norm path: `| |P_{0,m}|^2 - 1 | > tau_m` for every offset `m`;
/// 2. the direct path: fibre and cell bounds on `max(|f_0|, |g_m|) / w` over ranges of `m`.
///
/// Both reduce to `j = 0` by rotation covariance.
pub fn cross_family_disjointness(tangent: &TorusFamily, turned: &TorusFamily, w: f64) -> Result<(Certificate, Certificate)> {
    let (f0, g0, n) = match (&tangent.generator, &turned.generator) {
        (Generator::Rotation { base: f, axis: Axis::Z2, count: a }, Generator::Rotation { base: g, axis: Axis::Z2, count: b }) if a == b => {
            (*f, *g, *a)
        }
        _ => return Err(HullError::InvalidParameter("cross check needs two z2-rotation families of equal size".into())),
    };
    let ids = |tag: &str| vec![tangent.label.clone(), turned.label.clone(), tag.to_string()];
    let ni = n as i64;
    // path 1: every offset when affordable, otherwise the windows around the critical angles
    let offsets: Vec<i64> = if n <= 1 << 22 {
        (-(ni - 1) / 2..=ni / 2).collect()
    } else {
        candidate_offsets(turned.params.psi, &turned.params, &turned.derived, 4096)
    };
    let mut worst = (f64::INFINITY, 0i64, Point2::origin());
    let mut tau_max: f64 = 0.0;
    for &m in &offsets {
        let g = rotation_member(&g0, n, m);
        if let Some((pt, tau)) = neighbourhood_bound(&f0, &g, w) {
            tau_max = tau_max.max(tau);
            let gap = (pt.norm_sqr() - 1.0).abs() - tau;
            if gap < worst.0 {
                worst = (gap, m, pt);
            }
        }
    }
    let analytic = Certificate::decide(
        CertKind::Disjointness,
        ids(&format!("intersection-norm worst m = {}", worst.1)),
        worst.0,
        tau_max,
        0.0,
        offsets.len() as u64,
        Some(worst.2),
    );
    // path 2
    let mut seeds = vec![(0, 0)];
    seeds.extend(dyadic_blocks(ni / 2));
    seeds.extend(dyadic_blocks((ni - 1) / 2).into_iter().map(|(a, b)| (-b, -a)));
    let checks = certify_ranges(seeds, |lo, hi| {
        let g = rotation_range(&g0, Axis::Z2, n, lo, hi);
        sphere_tori_disjoint(ids(&format!("(0, {lo}..={hi})")), &f0, w, &g, w, 1.0).0
    });
    let direct = match checks {
        Ok(parts) => {
            let certs: Vec<Certificate> = parts.into_iter().map(|c| c.cert).collect();
            Certificate::combine(CertKind::Disjointness, ids("direct"), &certs)
        }
        Err(bad) => Certificate { subject_ids: ids(&format!("direct failed at m = {}", bad.lo)), ..bad.cert },
    };
    Ok((analytic, direct))
}

fn rotation_member(base: &Affine<f64>, n: u64, m: i64) -> Affine<f64> {
    base.rotated(Axis::Z2, TAU * m.rem_euclid(n as i64) as f64 / n as f64)
}

/// Parameters found by [`lemma3_scan`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma3Choice {
    pub params: ProofParameters,
    pub derived: DerivedConstants,
    pub psi: PsiChoice,
}

/// Searches for `(eps, N, psi)` with the intersection-norm gap positive.
///
/// For each `eps = eps_start / 2^k`, `k <= halvings`, up to `tries` counts spread over the
/// admissible band are tried; the count moves the two critical windows against each other.
pub fn lemma3_scan(s: f64, t: f64, nu: f64, b: f64, eps_start: f64, halvings: u32, tries: u64) -> Result<Lemma3Choice> {
    let radius = (2.0 * s - s * s).sqrt() * (1.0 - t);
    let mut best_gap = f64::NEG_INFINITY;
    let mut eps = eps_start;
    for _ in 0..=halvings {
        let (lo, hi) = count_band(radius, b, eps)?;
        let stride = ((hi - lo) / tries.max(1)).max(1);
        for n in (lo..=hi).step_by(stride as usize).take(tries as usize) {
            let p = ProofParameters::lines(s, t, n, eps, b).with_turn(0.0, nu);
            let d = DerivedConstants::compute(&p)?;
            match choose_psi(&p, &d, 2.0 * eps) {
                Ok(c) => {
                    let params = ProofParameters { psi: c.psi, ..p };
                    return Ok(Lemma3Choice { params, derived: DerivedConstants::compute(&params)?, psi: c });
                }
                Err(HullError::NoPsiFound { best_gap: g }) => best_gap = best_gap.max(g),
                Err(e) => return Err(e),
            }
        }
        eps *= 0.5;
    }
    Err(HullError::NoPsiFound { best_gap })
}
