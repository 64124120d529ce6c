//! Torus families generated by complex lines: tangent and turned line families,
//! coordinate-parallel families and lattices, with their disjointness certificates.

mod lemma2;
mod lines;
mod params;
mod prop1;
mod prop2;
mod prop3;
mod psi;

pub use lemma2::{lemma2_certificate, lemma2_disjointness, rotation_range, RangeCheck};
pub use lines::{chord, count_band, footprint_bound, equidistributed_count, equidistributed_points, tangent_line_family, turned_line_family, LineTriple};
pub use params::{
    f_derivative_bounds, f_function, intersection_excess, intersection_norm_sq, intersection_zeta, one_minus_r, radius_sq,
    DerivedConstants, LineSpec, ProofParameters,
};
pub use prop1::{prop1_families, Prop1Output};
pub use prop2::{prop2_families, Prop2Output};
pub use prop3::{lattice_points, prop3_constants, prop3_families, solve_prop3_t, Prop3Constants, Prop3Output};
pub use psi::{choose_psi, cross_family_disjointness, lemma3_scan, neighbourhood_bound, Lemma3Choice, PsiChoice};

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Affine, Axis, ComplexLine, Point2, SolidTorus};
use crate::verify::Certificate;
use crate::Complex64;

/// Families above this size keep only their generator; members are produced on demand.
pub const MATERIALIZE_LIMIT: u64 = 100_000;

/// How member `j` of a family is produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Generator {
    /// Member `j` is `base` composed with the rotation of `axis` by `2 pi j / count`.
    Rotation { base: Affine<f64>, axis: Axis, count: u64 },
    /// `z1 - (1 - zeta_k)` over the lattice `center + alpha (Z + iZ)` inside the disc of `radius`.
    Lattice { center: Complex64, alpha: f64, radius: f64 },
    Explicit(Vec<Affine<f64>>),
}

impl Generator {
    pub fn count(&self) -> u64 {
        match self {
            Generator::Rotation { count, .. } => *count,
            Generator::Lattice { alpha, radius, .. } => lattice_rows(*alpha, *radius).iter().map(|r| r.1).sum(),
            Generator::Explicit(v) => v.len() as u64,
        }
    }

    pub fn member(&self, j: u64) -> Affine<f64> {
        match self {
            Generator::Rotation { base, axis, count } => {
                let a = TAU * (j % count) as f64 / *count as f64;
                let f = base.rotated(*axis, a);
                match axis {
                    // keep the `z1 - c` normalisation of coordinate families
                    Axis::Z1 => {
                        let e = Complex64::from_polar(1.0, a);
                        Affine { f0: f.f0 * e, f1: f.f1 * e, f2: f.f2 * e }
                    }
                    Axis::Z2 => f,
                }
            }
            Generator::Lattice { center, alpha, radius } => {
                let zeta = lattice_member(*center, *alpha, *radius, j);
                Affine::z1_minus(Complex64::new(1.0, 0.0) - zeta)
            }
            Generator::Explicit(v) => v[j as usize],
        }
    }
}

/// Rows `(i, count, first_k)` of the lattice disc: row `i` has imaginary offset `i alpha`.
pub(crate) fn lattice_rows(alpha: f64, radius: f64) -> Vec<(i64, u64, i64)> {
    let imax = (radius / alpha).floor() as i64;
    let mut rows = Vec::new();
    for i in -imax..=imax {
        let y = i as f64 * alpha;
        let half = (radius * radius - y * y).max(0.0).sqrt();
        let kmax = (half / alpha + 1e-12).floor() as i64;
        let mut k0 = -kmax;
        let mut k1 = kmax;
        // guard the rounding of the boundary points
        while k0 <= k1 && (k0 as f64 * alpha).hypot(y) > radius {
            k0 += 1;
        }
        while k1 >= k0 && (k1 as f64 * alpha).hypot(y) > radius {
            k1 -= 1;
        }
        if k1 >= k0 {
            rows.push((i, (k1 - k0 + 1) as u64, k0));
        }
    }
    rows
}

pub(crate) fn lattice_member(center: Complex64, alpha: f64, radius: f64, mut j: u64) -> Complex64 {
    for (i, count, k0) in lattice_rows(alpha, radius) {
        if j < count {
            return center + Complex64::new((k0 + j as i64) as f64 * alpha, i as f64 * alpha);
        }
        j -= count;
    }
    panic!("lattice index out of range");
}

/// A family of solid tori `{|f_j| <= width} ∩ S` with its parameters and certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusFamily {
    pub label: String,
    pub generator: Generator,
    /// Tube width of the stored tori (the doubled width `2 eps`).
    pub width: f64,
    pub tori: Vec<SolidTorus<f64>>,
    pub lines: Vec<ComplexLine<f64>>,
    pub points: Vec<Point2<f64>>,
    pub params: ProofParameters,
    pub derived: DerivedConstants,
    pub certificates: Vec<Certificate>,
}

impl TorusFamily {
    /// Builds the family and materializes members when there are at most [`MATERIALIZE_LIMIT`].
    pub fn new(
        label: &str,
        generator: Generator,
        width: f64,
        params: ProofParameters,
        derived: DerivedConstants,
        point_of: impl Fn(u64, &Affine<f64>) -> Point2<f64>,
    ) -> Result<Self> {
        let mut fam = TorusFamily {
            label: label.to_string(),
            generator,
            width,
            tori: Vec::new(),
            lines: Vec::new(),
            points: Vec::new(),
            params,
            derived,
            certificates: Vec::new(),
        };
        let n = fam.count();
        if n <= MATERIALIZE_LIMIT {
            for j in 0..n {
                let f = fam.generator.member(j);
                fam.tori.push(SolidTorus::new(f, width, 1.0, 0, None)?);
                fam.lines.push(ComplexLine::of(&f));
                fam.points.push(point_of(j, &f));
            }
        }
        Ok(fam)
    }

    pub fn count(&self) -> u64 {
        self.generator.count()
    }

    pub fn is_materialized(&self) -> bool {
        self.tori.len() as u64 == self.count()
    }

    pub fn member(&self, j: u64) -> Affine<f64> {
        self.generator.member(j)
    }

    pub fn torus(&self, j: u64) -> Result<SolidTorus<f64>> {
        match self.tori.get(j as usize) {
            Some(t) => Ok(*t),
            None => SolidTorus::new(self.member(j), self.width, 1.0, 0, None),
        }
    }

    pub fn all_passed(&self) -> bool {
        !self.certificates.is_empty() && self.certificates.iter().all(|c| c.passed)
    }
}
