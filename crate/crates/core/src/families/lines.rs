use std::f64::consts::{PI, TAU};

use crate::error::{HullError, Result};
use crate::geometry::{Affine, Point2};
use crate::Complex64;

use super::params::{LineSpec, ProofParameters};

/// Chord between neighbours of `n` equidistributed points on a circle of radius `radius`.
pub fn chord(radius: f64, n: u64) -> f64 {
    2.0 * radius * (PI / n as f64).sin()
}

/// Smallest count `N >= 3` whose chord lies in `[B eps, (B+1) eps]`.
pub fn equidistributed_count(radius: f64, b: f64, eps: f64) -> Result<u64> {
    let (lo, hi) = (b * eps, (b + 1.0) * eps);
    let none = || HullError::NoFeasibleCount { radius, lo, hi };
    if !(radius > 0.0 && eps > 0.0) || lo >= 2.0 * radius {
        return Err(none());
    }
    let x = (hi / (2.0 * radius)).min(1.0);
    let mut n = ((PI / x.asin()).ceil() as u64).max(3);
    while chord(radius, n) > hi {
        n += 1;
    }
    if n > 3 && chord(radius, n - 1) <= hi {
        n -= 1;
    }
    if chord(radius, n) < lo {
        return Err(none());
    }
    Ok(n)
}

/// `N` points `radius e^{2 pi i j / N}` with neighbour spacing in `[B eps, (B+1) eps]`.
pub fn equidistributed_points(radius: f64, b: f64, eps: f64) -> Result<(Vec<Complex64>, u64)> {
    let n = equidistributed_count(radius, b, eps)?;
    let pts = (0..n).map(|j| Complex64::from_polar(radius, TAU * j as f64 / n as f64)).collect();
    Ok((pts, n))
}

pub type LineTriple = (Vec<Point2<f64>>, Vec<Point2<f64>>, Vec<Affine<f64>>);

fn collect(spec: LineSpec) -> Result<LineTriple> {
    let n = spec.p.n_count as i64;
    let mut pts = Vec::with_capacity(n as usize);
    let mut dirs = Vec::with_capacity(n as usize);
    let mut fs = Vec::with_capacity(n as usize);
    for j in 0..n {
        pts.push(spec.point(j));
        dirs.push(spec.direction(j));
        fs.push(spec.function(j)?);
    }
    Ok((pts, dirs, fs))
}

fn check_st(s: f64, t: f64, n: u64) -> Result<()> {
    if !(s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0 && n >= 3) {
        return Err(HullError::InvalidParameter(format!("need s, t in (0, 1) and N >= 3, got s = {s}, t = {t}, N = {n}")));
    }
    Ok(())
}

/// Points `p_j`, directions `v_j` and annihilators `f_j` of the lines tangent to `R S`.
pub fn tangent_line_family(s: f64, t: f64, n_count: u64) -> Result<LineTriple> {
    check_st(s, t, n_count)?;
    let p = ProofParameters { n_count, ..ProofParameters::lines(s, t, n_count, 1.0, 5.0) };
    collect(LineSpec::new(&p, false))
}

/// Points `p*_j`, directions `w_j` and annihilators `g_j` of the turned family.
pub fn turned_line_family(s: f64, t: f64, psi: f64, nu: f64, n_count: u64) -> Result<LineTriple> {
    check_st(s, t, n_count)?;
    if !(nu >= 0.0) || !psi.is_finite() {
        return Err(HullError::InvalidParameter(format!("nu = {nu}, psi = {psi}")));
    }
    let p = ProofParameters::lines(s, t, n_count, 1.0, 5.0).with_turn(psi, nu);
    collect(LineSpec::new(&p, true))
}

/// Bound on `|z1 - p1|` over `{|f| <= w} ∩ B̄`, where `f` is the unit-gradient annihilator of
/// `{p + v zeta}`. The projection of `z` to the line has norm at most `1 + w` and lies within
/// `w` of `z`.
pub fn footprint_bound(p: &Point2<f64>, v: &Point2<f64>, w: f64) -> f64 {
    let c = v.hermitian(p).norm();
    let vv = v.norm_sqr();
    let room = ((1.0 + w) * (1.0 + w) - p.norm_sqr()).max(0.0);
    let x = (c + (c * c + vv * room).sqrt()) / vv;
    v.z1.norm() * x + w
}

/// All counts whose chord lies in `[B eps, (B+1) eps]`, as `(smallest, largest)`.
pub fn count_band(radius: f64, b: f64, eps: f64) -> Result<(u64, u64)> {
    let lo = equidistributed_count(radius, b, eps)?;
    let x = b * eps / (2.0 * radius);
    let mut hi = ((PI / x.asin()).floor() as u64).max(lo);
    while hi > lo && chord(radius, hi) < b * eps {
        hi -= 1;
    }
    while chord(radius, hi + 1) >= b * eps {
        hi += 1;
    }
    Ok((lo, hi))
}
