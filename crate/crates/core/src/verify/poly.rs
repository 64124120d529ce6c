//! Polynomial falsifier: looks for `p` with `|p(z)| > max over K of |p|`.
//! A hit proves `z` lies outside the hull of the sampled set; a miss proves nothing.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::geometry::{Affine, Point2};

type C64 = Complex<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CandidateFamily {
    /// Powers of the linear functional `<w, z>` peaking in the direction of `z`.
    Linear,
    /// Products `f g` of supplied affine pairs.
    Product,
    /// Monomials `z1^i z2^j`.
    Monomial,
}

/// Polynomial as `(i, j, c)` terms meaning `c z1^i z2^j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub terms: Vec<(u32, u32, C64)>,
}

impl Polynomial {
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0 + t.1).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &Point2<f64>) -> C64 {
        self.terms.iter().map(|&(i, j, c)| c * z.z1.powu(i) * z.z2.powu(j)).sum()
    }

    pub fn affine(f: &Affine<f64>) -> Self {
        Polynomial { terms: vec![(0, 0, f.f0), (1, 0, f.f1), (0, 1, f.f2)] }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut terms: Vec<(u32, u32, C64)> = Vec::new();
        for &(i, j, c) in &self.terms {
            for &(k, l, d) in &o.terms {
                match terms.iter_mut().find(|t| t.0 == i + k && t.1 == j + l) {
                    Some(t) => t.2 += c * d,
                    None => terms.push((i + k, j + l, c * d)),
                }
            }
        }
        Polynomial { terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut p = Polynomial { terms: vec![(0, 0, C64::new(1.0, 0.0))] };
        for _ in 0..k {
            p = p.mul(self);
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub polynomial: Polynomial,
    pub family: CandidateFamily,
    /// `|p(z)| / max over K of |p|`.
    pub ratio: f64,
}

/// Returns the best witness with ratio above `1 + 1e-9`, or `None`.
pub fn polynomial_separation(
    z: &Point2<f64>,
    k_samples: &[Point2<f64>],
    degree_bound: u32,
    families: &[CandidateFamily],
    pairs: &[(Affine<f64>, Affine<f64>)],
) -> Option<SeparationWitness> {
    if k_samples.is_empty() {
        return None;
    }
    let mut cands: Vec<(Polynomial, CandidateFamily)> = Vec::new();
    for fam in families {
        match fam {
            CandidateFamily::Linear => {
                if z.norm() > 0.0 {
                    let lin = Polynomial { terms: vec![(1, 0, z.z1.conj()), (0, 1, z.z2.conj())] };
                    for k in 1..=degree_bound.max(1) {
                        cands.push((lin.pow(k), *fam));
                    }
                }
            }
            CandidateFamily::Product => {
                for (f, g) in pairs {
                    let p = Polynomial::affine(f).mul(&Polynomial::affine(g));
                    if p.degree() <= degree_bound.max(2) {
                        cands.push((p, *fam));
                    }
                }
            }
            CandidateFamily::Monomial => {
                for d in 1..=degree_bound {
                    for i in 0..=d {
                        cands.push((Polynomial { terms: vec![(i, d - i, C64::new(1.0, 0.0))] }, *fam));
                    }
                }
            }
        }
    }
    let mut best: Option<SeparationWitness> = None;
    for (p, family) in cands {
        let top = k_samples.iter().map(|w| p.eval(w).norm()).fold(0.0, f64::max);
        let at = p.eval(z).norm();
        let ratio = if top > 0.0 { at / top } else if at > 0.0 { f64::INFINITY } else { 0.0 };
        if ratio > 1.0 + 1e-9 && best.as_ref().map_or(true, |b| ratio > b.ratio) {
            best = Some(SeparationWitness { polynomial: p, family, ratio });
        }
    }
    best
}
