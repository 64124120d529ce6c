use std::f64::consts::TAU;

use crate::error::{HullError, Result};
use crate::geometry::{Affine, Axis};
use crate::interval::{Disc, Interval};
use crate::verify::{ball_tubes_disjoint, CertKind, Certificate, DiscAffine};

use super::{Generator, TorusFamily};

/// Disc enclosure of `base` rotated on `axis` by `2 pi m / count` for all `m` in `[lo, hi]`.
pub fn rotation_range(base: &Affine<f64>, axis: Axis, count: u64, lo: i64, hi: i64) -> DiscAffine<f64> {
    let step = TAU / count as f64;
    let rot = Disc::exp_neg_i(Interval::new(lo as f64 * step, hi as f64 * step));
    let mut g = DiscAffine::point(base);
    match axis {
        Axis::Z1 => g.f1 = g.f1 * rot,
        Axis::Z2 => g.f2 = g.f2 * rot,
    }
    g
}

/// One certified range of rotation offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeCheck {
    pub lo: i64,
    pub hi: i64,
    pub cert: Certificate,
}

/// Certifies every range in `seeds`, bisecting ranges that do not pass. A singleton that
/// fails is returned as the error of `check` on it.
pub(crate) fn certify_ranges<F>(seeds: Vec<(i64, i64)>, mut check: F) -> std::result::Result<Vec<RangeCheck>, RangeCheck>
where
    F: FnMut(i64, i64) -> Certificate,
{
    let mut stack: Vec<(i64, i64)> = seeds.into_iter().rev().collect();
    let mut done = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let cert = check(lo, hi);
        if cert.passed {
            done.push(RangeCheck { lo, hi, cert });
        } else if lo == hi {
            return Err(RangeCheck { lo, hi, cert });
        } else {
            let mid = lo + (hi - lo) / 2;
            stack.push((mid + 1, hi));
            stack.push((lo, mid));
        }
    }
    Ok(done)
}

/// Dyadic blocks `[1, 1], [2, 3], [4, 7], ...` covering `[1, top]`.
pub(crate) fn dyadic_blocks(top: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut lo = 1;
    while lo <= top {
        let hi = (2 * lo - 1).min(top);
        out.push((lo, hi));
        lo = hi + 1;
    }
    out
}

fn failure(label: &str, pair: String, cert: &Certificate) -> HullError {
    HullError::DisjointnessFailed {
        pair: format!("{label} {pair}"),
        detail: format!("margin {:e}, witness {:?}", cert.margin, cert.witness.map(|w| w.to_reals())),
    }
}

/// Certifies that the tubes `{|f_j| <= 2 eps} ∩ B̄` of a family are pairwise disjoint.
///
/// Rotation families reduce to the pairs `(0, m)`, `1 <= m <= N/2`, checked over ranges of
/// `m` with disc-valued coefficients; coordinate lattices reduce to the nearest-neighbour
/// distance; explicit families are checked pair by pair.
pub fn lemma2_disjointness(family: &TorusFamily, eps: f64) -> Result<Certificate> {
    lemma2_certificate(family, eps).map_err(|(pair, cert)| failure(&family.label, pair, &cert))
}

/// As [`lemma2_disjointness`], returning the first failing pair and its certificate instead
/// of an error.
pub fn lemma2_certificate(family: &TorusFamily, eps: f64) -> std::result::Result<Certificate, (String, Certificate)> {
    let width = 2.0 * eps;
    let label = family.label.as_str();
    match &family.generator {
        Generator::Rotation { base, axis, count } => {
            let top = (*count / 2) as i64;
            let checks = certify_ranges(dyadic_blocks(top), |lo, hi| {
                let g = rotation_range(base, *axis, *count, lo, hi);
                ball_tubes_disjoint(vec![label.to_string(), format!("(0, {lo}..={hi})")], base, &g, width, 1.0).0
            })
            .map_err(|bad| (format!("(0, {})", bad.lo), bad.cert))?;
            let parts: Vec<Certificate> = checks.into_iter().map(|c| c.cert).collect();
            Ok(Certificate::combine(CertKind::Disjointness, vec![label.to_string(), "lemma2".into()], &parts))
        }
        Generator::Lattice { alpha, .. } => {
            // parallel lines at distance alpha: min over the ball of max(|f|, |g|) is alpha / 2
            let f = family.member(0);
            let g = Affine { f0: f.f0 - *alpha, ..f };
            let (cert, _) = ball_tubes_disjoint(vec![label.to_string(), "nearest".into()], &f, &DiscAffine::point(&g), width, 1.0);
            if !cert.passed {
                return Err(("(nearest pair)".into(), cert));
            }
            Ok(Certificate { subject_ids: vec![label.to_string(), "lemma2".into()], ..cert })
        }
        Generator::Explicit(fs) => {
            let mut parts = Vec::new();
            for j in 0..fs.len() {
                for k in j + 1..fs.len() {
                    let (cert, _) =
                        ball_tubes_disjoint(vec![label.to_string(), format!("({j}, {k})")], &fs[j], &DiscAffine::point(&fs[k]), width, 1.0);
                    if !cert.passed {
                        return Err((format!("({j}, {k})"), cert));
                    }
                    parts.push(cert);
                }
            }
            Ok(Certificate::combine(CertKind::Disjointness, vec![label.to_string(), "lemma2".into()], &parts))
        }
    }
}
