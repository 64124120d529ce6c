use std::f64::consts::FRAC_PI_2;

use crate::error::{HullError, Result};
use crate::families::{prop1_families, Generator, Prop1Output, TorusFamily};
use crate::geometry::Axis;
use crate::separation::HullRegion;
use crate::verify::{CertKind, Certificate};

use super::GenerationRecord;

/// Bidisc scale factors tried in order; `q` must exceed `beta`.
const Q_GRID: [f64; 9] = [0.75, 0.8, 0.85, 0.9, 0.95, 0.975, 0.99, 0.995, 0.999];
const MAX_PIECES: usize = 256;
pub(crate) const ARC_SAMPLES: usize = 4096;

/// Lipschitz-certified minimum over the quarter arc `beta (cos phi, sin phi)` of the best
/// rectangle slack `max_i min(q R1_i - beta cos phi, q R2_i - beta sin phi)`.
///
/// The rectangles `[0, q R1] x [0, q R2]` of moduli are closed downwards, so covering the arc
/// covers the whole quarter disc, hence `beta B̄`.
pub fn cover_margin(beta: f64, cover: &[(f64, f64, f64)]) -> f64 {
    cover_margin_with(beta, cover, ARC_SAMPLES)
}

/// [`cover_margin`] on `samples` arc cells.
pub fn cover_margin_with(beta: f64, cover: &[(f64, f64, f64)], samples: usize) -> f64 {
    let samples = samples.max(1);
    let h = FRAC_PI_2 / samples as f64;
    let mut worst = f64::INFINITY;
    for k in 0..=samples {
        let (sn, cs) = (h * k as f64).sin_cos();
        let best = cover.iter().map(|&(r1, r2, q)| (q * r1 - beta * cs).min(q * r2 - beta * sn)).fold(f64::NEG_INFINITY, f64::max);
        worst = worst.min(best);
    }
    worst - beta * h / 2.0
}

/// Bidiscs `q (D̄(R1) x D̄(R2))`, `R1^2 + R2^2 = 1`, whose union contains `beta B̄`.
///
/// Scans `k = 1, 2, ...` equally spaced angles `R1 = cos theta_i` and the `q` grid, and
/// returns the first cover with positive certified margin.
pub fn bidisc_cover(beta: f64) -> Result<Vec<(f64, f64, f64)>> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(HullError::InvalidParameter(format!("beta = {beta} outside (0, 1)")));
    }
    let mut best = f64::NEG_INFINITY;
    for k in 1..=MAX_PIECES {
        for &q in Q_GRID.iter().filter(|&&q| q > beta) {
            let cover: Vec<(f64, f64, f64)> = (0..k)
                .map(|i| {
                    let th = FRAC_PI_2 * (i as f64 + 0.5) / k as f64;
                    (th.cos(), th.sin(), q)
                })
                .collect();
            let m = cover_margin(beta, &cover);
            if m > 0.0 {
                return Ok(cover);
            }
            best = best.max(m);
        }
    }
    Err(HullError::CoverSearchFailed(best))
}

/// `{|z1 - c| <= wc} ∩ S` and `{|z2 - d| <= wd} ∩ S` are disjoint when no point of the sphere
/// has `|z1|` within `wc` of `|c|` and `|z2|` within `wd` of `|d|`. Returns the signed distance
/// of `1` from the interval of `|z1|^2 + |z2|^2` over those bands.
fn coordinate_band_margin(c: f64, d: f64, wc: f64, wd: f64) -> f64 {
    let lo = (c - wc).max(0.0).powi(2) + (d - wd).max(0.0).powi(2);
    let hi = (c + wc).powi(2) + (d + wd).powi(2);
    (lo - 1.0).max(1.0 - hi)
}

/// Axis and circle radius of a coordinate rotation family `z_k - c e^{i theta_j}`.
fn coordinate_circle(fam: &TorusFamily) -> Option<(Axis, f64)> {
    match &fam.generator {
        Generator::Rotation { base, axis, .. } => {
            let on_axis = match axis {
                Axis::Z1 => base.f2.norm() == 0.0,
                Axis::Z2 => base.f1.norm() == 0.0,
            };
            on_axis.then(|| (*axis, base.f0.norm()))
        }
        _ => None,
    }
}

/// Separation margin of two distinct coordinate families with tube widths `wa`, `wb`,
/// or `None` when either is not a coordinate family.
pub(crate) fn coordinate_pair_margin(a: &TorusFamily, wa: f64, b: &TorusFamily, wb: f64) -> Option<f64> {
    let (xa, ra) = coordinate_circle(a)?;
    let (xb, rb) = coordinate_circle(b)?;
    Some(match (xa, xb) {
        (Axis::Z1, Axis::Z1) | (Axis::Z2, Axis::Z2) => (ra - rb).abs() - (wa + wb),
        (Axis::Z1, Axis::Z2) => coordinate_band_margin(ra, rb, wa, wb),
        (Axis::Z2, Axis::Z1) => coordinate_band_margin(rb, ra, wb, wa),
    })
}

pub(crate) fn cross_cover_certificates(runs: &[Prop1Output], w: f64) -> Vec<Certificate> {
    let mut out = Vec::new();
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            let (a, b) = (&runs[i], &runs[j]);
            let ra = (a.f_family.member(0).f0.norm(), a.g_family.member(0).f0.norm());
            let rb = (b.f_family.member(0).f0.norm(), b.g_family.member(0).f0.norm());
            // same-axis families are separated by their radii, mixed ones by the band test
            let margins = [
                (ra.0 - rb.0).abs() - 2.0 * w,
                (ra.1 - rb.1).abs() - 2.0 * w,
                coordinate_band_margin(ra.0, rb.1, w, w),
                coordinate_band_margin(rb.0, ra.1, w, w),
            ];
            let m = margins.iter().copied().fold(f64::INFINITY, f64::min);
            out.push(Certificate::decide(CertKind::Disjointness, vec![format!("bidisc {i}"), format!("bidisc {j}")], m, w, 0.0, 4, None));
        }
    }
    out
}

/// First generation: coordinate families of every bidisc of the cover of `beta B̄`.
pub fn build_generation_1(beta: f64, eps: f64, b: f64) -> Result<GenerationRecord> {
    let cover = bidisc_cover(beta)?;
    let mut runs = Vec::with_capacity(cover.len());
    for &(r1, r2, q) in &cover {
        runs.push(prop1_families(r1, r2, q, 1.0, eps, b)?);
    }
    let w = 2.0 * eps;
    let mut certificates = cross_cover_certificates(&runs, w);
    if let Some(bad) = certificates.iter().find(|c| !c.passed) {
        return Err(HullError::DisjointnessFailed { pair: bad.subject_ids.join(" / "), detail: format!("margin {:e}", bad.margin) });
    }
    let margin = cover_margin(beta, &cover);
    let ball = Certificate::decide(CertKind::Inclusion, vec!["beta-ball".into(), "bidisc-cover".into()], margin, beta, 0.0, ARC_SAMPLES as u64 + 1, None);
    let mut families = Vec::new();
    let mut regions = Vec::new();
    let mut s_values = Vec::new();
    let mut chain = vec![ball];
    let mut r_level: f64 = 0.0;
    for (i, run) in runs.into_iter().enumerate() {
        let (_, _, q) = cover[i];
        regions.push(HullRegion::FullBidiscProduct { r1: q * cover[i].0, r2: q * cover[i].1 });
        s_values.extend([run.s1, run.s2]);
        r_level = r_level.max(run.constants.r_prime);
        chain.push(run.coverage.clone());
        for (mut fam, side) in [(run.f_family, "f"), (run.g_family, "g")] {
            fam.label = format!("L1-b{i}-{side}");
            certificates.extend(fam.certificates.iter().cloned());
            families.push(fam);
        }
    }
    let hull = Certificate::combine(CertKind::Coverage, vec!["level 1".into(), "beta-ball".into()], &chain);
    certificates.extend(chain);
    let mut tori = Vec::new();
    for fam in &families {
        for j in 0..fam.count() {
            let mut t = fam.torus(j)?;
            t.level = 1;
            tori.push(t);
        }
    }
    Ok(GenerationRecord {
        level: 1,
        families,
        tori,
        eps_level: eps,
        r_level,
        s_values,
        certificates,
        hull,
        parent_map: Vec::new(),
        regions,
        classes: Vec::new(),
    })
}
