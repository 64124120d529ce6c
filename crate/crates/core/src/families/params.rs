use std::f64::consts::{PI, TAU};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{HullError, Result};
use crate::geometry::{Affine, Point2};
use crate::Complex64;

/// Parameters of one family construction. Fields a construction does not use are `0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofParameters {
    pub s: f64,
    pub t: f64,
    pub n_count: u64,
    pub eps: f64,
    pub psi: f64,
    pub nu: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub delta: f64,
    pub q: f64,
    pub gamma: f64,
}

impl ProofParameters {
    /// Parameters of a tangent/turned line pair with the remaining fields zero.
    pub fn lines(s: f64, t: f64, n_count: u64, eps: f64, b: f64) -> Self {
        ProofParameters { s, t, n_count, eps, psi: 0.0, nu: 0.0, b, sigma: 0.0, alpha: 0.0, delta: 0.0, q: 0.0, gamma: 0.0 }
    }

    pub fn with_turn(mut self, psi: f64, nu: f64) -> Self {
        self.psi = psi;
        self.nu = nu;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(HullError::InvalidParameter(what.to_string()));
        if !(self.s > 0.0 && self.s < 1.0) {
            return bad(&format!("s = {} outside (0, 1)", self.s));
        }
        if !(self.t > 0.0 && self.t < 1.0) {
            return bad(&format!("t = {} outside (0, 1)", self.t));
        }
        if self.n_count < 3 {
            return bad(&format!("N = {} below 3", self.n_count));
        }
        if !(self.eps > 0.0) {
            return bad(&format!("eps = {} not positive", self.eps));
        }
        if !(self.nu >= 0.0) || !self.psi.is_finite() {
            return bad("nu must be nonnegative and psi finite");
        }
        if !(self.b >= 5.0) {
            return bad(&format!("B = {} below 5", self.b));
        }
        Ok(())
    }

    /// `phi_j = 2 pi j / N`, reduced so that huge `j` keep full precision.
    pub fn phi(&self, j: i64) -> f64 {
        let n = self.n_count as i64;
        TAU * (j.rem_euclid(n) as f64) / n as f64
    }

    /// Signed angle of the residue `m mod N` in `(-pi, pi]`.
    pub fn phi_signed(&self, m: i64) -> f64 {
        let n = self.n_count as i64;
        let r = m.rem_euclid(n);
        let r = if 2 * r > n { r - n } else { r };
        TAU * r as f64 / n as f64
    }
}

/// Constants determined by a parameter set. `None` marks constants the producing
/// construction did not compute.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub s1: f64,
    pub s2: f64,
    pub s_star: Option<f64>,
    pub a: Option<f64>,
    pub r_prime: Option<f64>,
    /// Tube tilt: `{|f_j| <= w}` meets the slice `z1 = 1 - s` in a disc of radius `A w / 2`.
    #[serde(rename = "A")]
    pub tilt: f64,
    #[serde(rename = "A_prime")]
    pub a_prime: Option<f64>,
    #[serde(rename = "B_prime")]
    pub b_prime: f64,
    #[serde(rename = "C_Q")]
    pub c_q: Option<f64>,
    #[serde(rename = "Phi_Q")]
    pub phi_q: Option<f64>,
    pub rho: Option<f64>,
    #[serde(rename = "b")]
    pub bidisc_factor: Option<f64>,
    #[serde(rename = "C")]
    pub c_const: Option<f64>,
    #[serde(rename = "D")]
    pub d_const: Option<f64>,
}

/// `R^2 = 1 - (2t - t^2)(2s - s^2)`.
pub fn radius_sq(s: f64, t: f64) -> f64 {
    1.0 - (2.0 * t - t * t) * (2.0 * s - s * s)
}

/// `1 - R`, evaluated without cancellation.
pub fn one_minus_r(s: f64, t: f64) -> f64 {
    let r = radius_sq(s, t).sqrt();
    (2.0 * t - t * t) * (2.0 * s - s * s) / (1.0 + r)
}

impl DerivedConstants {
    pub fn compute(p: &ProofParameters) -> Result<Self> {
        p.validate()?;
        let (s, t, nu) = (p.s, p.t, p.nu);
        let r2 = (2.0 * s - s * s).sqrt();
        let r = radius_sq(s, t).sqrt();
        let s1 = one_minus_r(s, t);
        let q = (1.0 - s + nu) / (1.0 - s);
        let base = LineSpec::new(p, false);
        let turned = LineSpec::new(p, true);
        let f0 = base.function(0)?;
        let g0 = turned.function(0)?;
        let s2 = if nu > 0.0 { g0.unitary_invariant_s()? } else { s1 };
        let tilt = 2.0 / f0.f2.norm();
        let b_prime = 4.0 * tilt / (r2 * (1.0 - t));
        let (c_q, phi_q) = if q > 1.0 {
            let (c, ph) = f_derivative_bounds(q);
            (Some(c), Some(ph))
        } else {
            (None, None)
        };
        Ok(DerivedConstants {
            r,
            r2,
            q,
            s1,
            s2,
            s_star: None,
            a: None,
            r_prime: None,
            tilt,
            a_prime: None,
            b_prime,
            c_q,
            phi_q,
            rho: None,
            bidisc_factor: None,
            c_const: None,
            d_const: None,
        })
    }
}

/// The lines of a tangent (`turned = false`) or turned family, member by member.
#[derive(Clone, Copy, Debug)]
pub struct LineSpec {
    pub p: ProofParameters,
    pub turned: bool,
}

impl LineSpec {
    pub fn new(p: &ProofParameters, turned: bool) -> Self {
        LineSpec { p: *p, turned }
    }

    fn phase(&self, j: i64) -> f64 {
        if self.turned {
            self.p.phi(j) + self.p.psi
        } else {
            self.p.phi(j)
        }
    }

    /// `p_j`, or `p*_j` for the turned family.
    pub fn point(&self, j: i64) -> Point2<f64> {
        let (s, t) = (self.p.s, self.p.t);
        let r2 = (2.0 * s - s * s).sqrt();
        Point2::new(Complex::new(1.0 - s, 0.0), Complex::from_polar(r2 * (1.0 - t), self.phase(j)))
    }

    /// `v_j`, or `w_j` for the turned family.
    pub fn direction(&self, j: i64) -> Point2<f64> {
        let (s, t) = (self.p.s, self.p.t);
        let r2 = (2.0 * s - s * s).sqrt();
        let k = if self.turned { 1.0 - s + self.p.nu } else { 1.0 - s };
        Point2::new(Complex::new((1.0 - t) * r2, 0.0), -Complex::from_polar(k, self.phase(j)))
    }

    /// Unit-gradient annihilator of member `j`, obtained from member `0` by the
    /// rotation `z2 -> z2 e^{-i phi_j}` so that covariance holds exactly.
    pub fn function(&self, j: i64) -> Result<Affine<f64>> {
        let f0 = Affine::through(&self.point(0), &self.direction(0))?;
        Ok(f0.rotated(crate::geometry::Axis::Z2, self.p.phi(j)))
    }
}

/// `F(phi) = |(1 - e^{i phi}) / (1 - Q e^{i phi})|`.
pub fn f_function(phi: f64, q: f64) -> f64 {
    let num = 2.0 * (phi / 2.0).sin().abs();
    let den = (Complex64::new(1.0, 0.0) - Complex64::from_polar(q, phi)).norm();
    num / den
}

/// `(C_Q, Phi_Q)` with `C_Q <= |F'| <= 2 C_Q` on `(0, Phi_Q]`, estimated from
/// finite differences on a uniform grid of `10^4` points over `(0, min(pi, 20 (Q - 1))]`.
pub fn f_derivative_bounds(q: f64) -> (f64, f64) {
    const N: usize = 10_000;
    let top = PI.min(20.0 * (q - 1.0));
    let h = top / N as f64;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let mut best = (f64::NAN, f64::NAN);
    let mut prev = f_function(0.0, q);
    for i in 1..=N {
        let phi = h * i as f64;
        let cur = f_function(phi, q);
        let slope = ((cur - prev) / h).abs();
        prev = cur;
        lo = lo.min(slope);
        hi = hi.max(slope);
        if hi > 2.0 * lo {
            break;
        }
        best = (lo, phi);
    }
    best
}

/// `zeta_{j,k}(psi)`: the common line parameter of `l_j ∩ l*_k`.
pub fn intersection_zeta(j: i64, k: i64, psi: f64, p: &ProofParameters, d: &DerivedConstants) -> Complex64 {
    let theta = p.phi_signed(k - j) + psi;
    let e = Complex64::from_polar(1.0, theta);
    let one = Complex64::new(1.0, 0.0);
    // 1 - e^{i theta} = -2i sin(theta/2) e^{i theta/2}, exact near theta = 0
    let num = Complex64::new(0.0, -2.0 * (theta / 2.0).sin()) * Complex64::from_polar(1.0, theta / 2.0);
    num / (one - e * d.q) * (d.r2 * (1.0 - p.t) / (1.0 - p.s))
}

/// `|P_{0,m}(psi)|^2 = R^2 (1 + R2^2 (1-t)^2 F^2(phi_m + psi) / (1-s)^2)`.
pub fn intersection_norm_sq(m: i64, psi: f64, p: &ProofParameters, d: &DerivedConstants) -> f64 {
    let f = f_function(p.phi_signed(m) + psi, d.q);
    let k = d.r2 * (1.0 - p.t) / (1.0 - p.s);
    d.r * d.r * (1.0 + k * k * f * f)
}

/// `|P_{0,m}(psi)|^2 - 1` without cancellation near the sphere.
pub fn intersection_excess(m: i64, psi: f64, p: &ProofParameters, d: &DerivedConstants) -> f64 {
    let f = f_function(p.phi_signed(m) + psi, d.q);
    let k = d.r2 * (1.0 - p.t) / (1.0 - p.s);
    let one_minus_r2 = (2.0 * p.t - p.t * p.t) * (2.0 * p.s - p.s * p.s);
    d.r * d.r * k * k * f * f - one_minus_r2
}
