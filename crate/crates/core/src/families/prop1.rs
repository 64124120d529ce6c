use std::f64::consts::TAU;

use num_complex::Complex;

use crate::error::{HullError, Result};
use crate::geometry::{Affine, Axis, Point2};
use crate::separation::{certified_bidisc, separation_constants, spacing_viable, HullRegion, SeparationConstants};
use crate::verify::{sphere_tori_disjoint, CertKind, Certificate, DiscAffine};

use super::lemma2::lemma2_disjointness;
use super::lines::{chord, equidistributed_count};
use super::params::{DerivedConstants, ProofParameters};
use super::{Generator, TorusFamily};

/// Families `f_j = z1 - zeta_1^j` and `g_k = z2 - zeta_2^k` covering a bidisc.
#[derive(Clone, Debug, PartialEq)]
pub struct Prop1Output {
    pub f_family: TorusFamily,
    pub g_family: TorusFamily,
    pub s1: f64,
    pub s2: f64,
    pub constants: SeparationConstants,
    /// Radius `sqrt(a eps)` of the certified bidiscs around the points `(zeta_1^j, zeta_2^k)`.
    pub bidisc_radius: f64,
    /// Bidisc around `(zeta_1^0, zeta_2^0)`; the others are its images under the coordinate rotations.
    pub bidisc: HullRegion,
    pub coverage: Certificate,
    /// Tori inside the `gamma`-neighbourhood of the torus `|z1| = R1, |z2| = R2`.
    pub gamma_containment: Certificate,
}

fn coordinate_family(label: &str, axis: Axis, radius: f64, n: u64, eps: f64, params: ProofParameters, derived: DerivedConstants) -> Result<TorusFamily> {
    let base = match axis {
        Axis::Z1 => Affine::z1_minus(Complex::new(radius, 0.0)),
        Axis::Z2 => Affine::z2_minus(Complex::new(radius, 0.0)),
    };
    TorusFamily::new(label, Generator::Rotation { base, axis, count: n }, 2.0 * eps, params, derived, |_, f| f.foot())
}

/// Largest distance from `{|z1 - c| <= w} ∩ S`, `|c| = q R1`, to `{|z1| = R1, |z2| = R2}`.
///
/// The distance depends on `|z1|` only; it is sampled on 1025 values and padded by the
/// Lipschitz constant `2` of `x -> dist` times half the step.
fn gamma_distance(q: f64, r1: f64, r2: f64, w: f64) -> f64 {
    let (lo, hi) = ((q * r1 - w).max(0.0), (q * r1 + w).min(1.0));
    let n = 1024;
    let h = (hi - lo) / n as f64;
    let mut worst: f64 = 0.0;
    for i in 0..=n {
        let x = lo + h * i as f64;
        let y = (1.0 - x * x).max(0.0).sqrt();
        worst = worst.max((x - r1).hypot(y - r2));
    }
    // |d/dx sqrt(1 - x^2)| <= x / y, bounded on the sampled range
    let ymin = (1.0 - hi * hi).max(1e-300).sqrt();
    worst + 0.5 * h * (1.0 + hi / ymin)
}

/// Largest distance from a point of the circle `radius T` to the nearest of `n`
/// equidistributed points, checked on a grid of `m` points with Lipschitz padding.
fn circle_gap(radius: f64, n: u64, m: u64) -> f64 {
    let step = TAU / n as f64;
    let h = TAU / m as f64;
    let mut worst: f64 = 0.0;
    for i in 0..m {
        let a = h * i as f64;
        let j = (a / step).round();
        let d = 2.0 * radius * ((a - j * step) / 2.0).sin().abs();
        worst = worst.max(d);
    }
    worst + radius * h / 2.0
}

pub fn prop1_families(r1: f64, r2: f64, q: f64, gamma: f64, eps: f64, b: f64) -> Result<Prop1Output> {
    if !(r1 > 0.0 && r2 > 0.0) || (r1 * r1 + r2 * r2 - 1.0).abs() > 1e-10 {
        return Err(HullError::InvalidParameter(format!("R1^2 + R2^2 = {} must equal 1", r1 * r1 + r2 * r2)));
    }
    if !(q > 0.0 && q < 1.0) || !(b >= 5.0) || !(eps > 0.0) || !(gamma > 0.0) {
        return Err(HullError::InvalidParameter(format!("q = {q}, B = {b}, eps = {eps}, gamma = {gamma}")));
    }
    let (s1, s2) = (1.0 - r1 * q, 1.0 - r2 * q);
    if 2.0 * eps >= s1.min(s2) {
        return Err(HullError::EpsTooLarge { eps, reason: format!("2 eps must stay below s = {}", s1.min(s2)) });
    }
    let too_large = |e: HullError| HullError::EpsTooLarge { eps, reason: e.to_string() };
    let n1 = equidistributed_count(q * r1, b, eps).map_err(too_large)?;
    let n2 = equidistributed_count(q * r2, b, eps).map_err(too_large)?;

    let params = ProofParameters { s: s1, t: 0.0, n_count: n1, eps, psi: 0.0, nu: 0.0, b, sigma: 0.0, alpha: 0.0, delta: 0.0, q, gamma };
    let derived = |s: f64| DerivedConstants {
        r: 1.0 - s,
        r2: (2.0 * s - s * s).sqrt(),
        q: 1.0,
        s1,
        s2,
        s_star: None,
        a: None,
        r_prime: None,
        tilt: 2.0,
        a_prime: None,
        b_prime: 5.0,
        c_q: None,
        phi_q: None,
        rho: None,
        bidisc_factor: None,
        c_const: None,
        d_const: None,
    };
    let mut f_family = coordinate_family("prop1-f", Axis::Z1, q * r1, n1, eps, params, derived(s1))?;
    let mut g_family = coordinate_family("prop1-g", Axis::Z2, q * r2, n2, eps, ProofParameters { s: s2, n_count: n2, ..params }, derived(s2))?;

    for fam in [&mut f_family, &mut g_family] {
        let cert = lemma2_disjointness(fam, eps)?;
        fam.certificates.push(cert);
    }
    // every pair (j, k) is a coordinate rotation of (0, 0)
    let (f0, g0) = (f_family.member(0), g_family.member(0));
    let (cross, _) = sphere_tori_disjoint(vec!["prop1-f".into(), "prop1-g".into(), "cross".into()], &f0, 2.0 * eps, &DiscAffine::point(&g0), 2.0 * eps, 1.0);
    if !cross.passed {
        return Err(HullError::DisjointnessFailed { pair: "prop1 (f_0, g_0)".into(), detail: format!("margin {:e}", cross.margin) });
    }
    f_family.certificates.push(cross.clone());
    g_family.certificates.push(cross);

    let constants = separation_constants(&f0, &g0, None)?;
    if !spacing_viable(constants.a, eps, b) {
        return Err(HullError::SpacingViabilityFailed { root: (constants.a * eps).sqrt(), spacing: (b + 1.0) * eps });
    }
    let bidisc = certified_bidisc(&f0, &g0, &constants, eps)?;
    let radius = (constants.a * eps).sqrt();
    f_family.derived.a = Some(constants.a);
    f_family.derived.r_prime = Some(constants.r_prime);
    g_family.derived.a = Some(constants.a);
    g_family.derived.r_prime = Some(constants.r_prime);

    // distinguished boundary grid: product of the two circle grids
    let m1 = (8 * n1).max(1024);
    let m2 = (8 * n2).max(1024);
    let gap = circle_gap(q * r1, n1, m1).max(circle_gap(q * r2, n2, m2));
    // bidiscs stay inside r' B for (4_r)
    let inside = constants.r_prime - (q + std::f64::consts::SQRT_2 * radius);
    let coverage = Certificate::decide(
        CertKind::Coverage,
        vec!["prop1".into(), "coordinate-cover".into()],
        (radius - gap).min(inside),
        radius,
        gap.max(chord(q * r1, m1)),
        m1 * m2,
        None,
    );
    let gamma_margin = gamma - gamma_distance(q, r1, r2, 2.0 * eps).max(gamma_distance(q, r2, r1, 2.0 * eps));
    let gamma_containment = Certificate::decide(
        CertKind::Inclusion,
        vec!["prop1".into(), "gamma".into()],
        gamma_margin,
        gamma,
        0.0,
        2050,
        Some(Point2::new(Complex::new(q * r1, 0.0), Complex::new((1.0 - q * q * r1 * r1).sqrt(), 0.0))),
    );
    Ok(Prop1Output { f_family, g_family, s1, s2, constants, bidisc_radius: radius, bidisc, coverage, gamma_containment })
}
