use num_complex::Complex;

use crate::error::{HullError, Result};
use crate::families::{lattice_member, lattice_rows, prop2_families, prop3_families, Generator, Prop2Output, Prop3Output, TorusFamily};
use crate::geometry::Axis;
use crate::verify::{CertKind, Certificate};
use crate::Complex64;

/// Two-family cover replacing the thick torus of one lattice function `z1 - (1 - zeta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubCover {
    pub class: u64,
    pub zeta: Complex64,
    /// `arg(1 - zeta)`: the cover is built for `z1 - |1 - zeta|` and rotated in `z1` by this angle.
    pub frame_angle: f64,
    pub cover: Prop2Output,
}

impl SubCover {
    /// The two families in the frame of the parent normal form.
    pub fn families(&self) -> Vec<TorusFamily> {
        [&self.cover.tangent, &self.cover.turned]
            .into_iter()
            .map(|fam| {
                let mut f = fam.clone();
                if let Generator::Rotation { base, axis, count } = fam.generator {
                    f.generator = Generator::Rotation { base: base.rotated(Axis::Z1, self.frame_angle), axis, count };
                    f.tori.clear();
                    f.lines.clear();
                    f.points.clear();
                }
                f.label = format!("{}-k{}", fam.label, self.class);
                f
            })
            .collect()
    }
}

/// Tangent family plus two-family covers of the lattice functions, in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct Prop4Output {
    pub prop3: Prop3Output,
    pub subcovers: Vec<SubCover>,
    /// Lattice functions up to complex conjugation (which preserves `|1 - zeta|`).
    pub classes_total: u64,
    pub complete: bool,
    pub s_values: Vec<f64>,
    pub rho: f64,
    pub r_prime: f64,
    pub separation: Certificate,
    pub coverage: Certificate,
}

/// Lower bound of `|z1 - p1|` over `{|f| <= w} ∩ S` for the line `p + v zeta` with `v ⊥ p`.
fn footprint_lower(p: f64, v: f64, v1: f64, w: f64) -> f64 {
    let room = ((1.0 - w) * (1.0 - w) - p * p).max(0.0);
    v1 * room.sqrt() / v - w
}

/// Index of the `k`-th lattice point with non-negative imaginary row.
fn class_member(alpha: f64, radius: f64, k: u64) -> u64 {
    let below: u64 = lattice_rows(alpha, radius).iter().filter(|r| r.0 < 0).map(|r| r.1).sum();
    below + k
}

/// Covers `{|z1 - (1 - s)| <= sigma} ∩ (1 - rho) B̄` by disjoint tori of width `2 eps`.
///
/// The lattice functions are replaced by two-family covers with `delta = alpha / 3`, `q = r'`
/// and spacing constant `2 B`; at most `max_classes` of them are built.
pub fn prop4_cover(s: f64, sigma: f64, eps: f64, b: f64, s_ceiling: f64, max_classes: u64) -> Result<Prop4Output> {
    let prop3 = prop3_families(s, sigma, eps, b)?;
    let (alpha, big) = (prop3.alpha, 4.0 * sigma / 3.0);
    let delta = alpha / 3.0;
    let center = Complex::new(s, 0.0);
    let rows = lattice_rows(alpha, big);
    let classes_total: u64 = rows.iter().filter(|r| r.0 >= 0).map(|r| r.1).sum();
    let w = 2.0 * eps;

    // tangent tori stay outside the disc of radius 4 sigma / 3 + delta around 1 - s
    let rr = 1.0 - prop3.s_star;
    let v1 = (1.0 - prop3.t) * (2.0 * s - s * s).sqrt();
    let low = footprint_lower(rr, rr, v1, w);
    let sep = low - (big + delta);
    let separation = Certificate::decide(CertKind::Disjointness, vec!["prop4".into(), "tangent/subcovers".into()], sep, sigma, 0.0, 0, None);
    if !separation.passed {
        return Err(HullError::MergeCollision(format!("tangent tori reach {low:e} < {:e}", big + delta)));
    }

    let mut subcovers = Vec::new();
    let mut s_values = vec![prop3.s_star];
    let mut r_prime = prop3.r_prime;
    let mut parts = vec![prop3.coverage.clone(), separation.clone()];
    for k in 0..classes_total.min(max_classes) {
        let zeta = lattice_member(center, alpha, big, class_member(alpha, big, k));
        let one = Complex::new(1.0, 0.0) - zeta;
        let sk = 1.0 - one.norm();
        let cover = prop2_families(sk, delta, prop3.r_prime, s_ceiling, eps, 2.0 * b)?;
        s_values.extend([cover.s1, cover.s2]);
        r_prime = r_prime.max(cover.r_prime);
        parts.extend([cover.containment.clone(), cover.coverage.clone(), cover.direct.clone()]);
        subcovers.push(SubCover { class: k, zeta, frame_angle: one.arg(), cover });
    }
    let complete = classes_total <= max_classes;
    let coverage = Certificate::combine(CertKind::Coverage, vec!["prop4".into(), "tube-cover".into()], &parts);
    Ok(Prop4Output { rho: prop3.rho, prop3, subcovers, classes_total, complete, s_values, r_prime, separation, coverage })
}
