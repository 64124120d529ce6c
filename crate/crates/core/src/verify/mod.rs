//! Certificate engine.

mod cells;
mod certificate;
mod convex;
mod fiber;
mod poly;
mod sampling;

pub use cells::sphere_cells_min_max;
pub use certificate::{slack, CertKind, Certificate};
pub use convex::{convex_min_max_moduli, convex_min_max_weighted, DescentResult};
pub use fiber::{express_disc, fiber_min_max, BnbOptions, BnbOutcome, DiscAffine, DiscChart, Shell};
pub use poly::{polynomial_separation, CandidateFamily, Polynomial, SeparationWitness};
pub use sampling::{ball_mesh, certified_min, region_inclusion, sphere_mesh, LowerBound, Region};

use crate::geometry::{Affine, Point2};
use crate::scalar::Real;

fn to64<T: Real>(z: &Point2<T>) -> Point2<f64> {
    let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
    Point2::from_reals(f(z.z1.re), f(z.z1.im), f(z.z2.re), f(z.z2.im))
}

/// Both routes of a two-route disjointness check, for reporting.
#[derive(Clone, Copy, Debug)]
pub struct TwoRoute<T> {
    pub primary: T,
    pub secondary: T,
    pub cells: usize,
}

/// `{|f| <= width} ∩ rB` and `{|g| <= width} ∩ rB` are disjoint for every member of `g`.
///
/// Passes only if the fibre bound and convex descent (at the centre member) both clear
/// `width` by the slack.
pub fn ball_tubes_disjoint<T: Real>(
    ids: Vec<String>,
    f: &Affine<T>,
    g: &DiscAffine<T>,
    width: T,
    r: T,
) -> (Certificate, TwoRoute<T>) {
    let sl = slack(width);
    let target = width + sl * T::lit(2.0);
    let a = fiber_min_max(f, g, Shell::ball(r), T::one(), T::one(), BnbOptions::target(target));
    let c = convex_min_max_moduli(f, &g.center(), r);
    let low = a.lower.min(c.value);
    let witness = if a.upper < c.value { a.witness.unwrap_or(c.argmin) } else { c.argmin };
    let margin = (low - width).to_f64().unwrap_or(f64::NAN);
    let passed = low - width > sl && !a.exhausted;
    let cert = Certificate {
        kind: CertKind::Disjointness,
        subject_ids: ids,
        margin,
        resolution: 0.0,
        sample_count: a.cells as u64,
        witness: if passed { None } else { Some(to64(&witness)) },
        passed,
    };
    (cert, TwoRoute { primary: a.lower, secondary: c.value, cells: a.cells })
}

/// `{|f| <= sf} ∩ rS` and `{|g| <= sg} ∩ rS` are disjoint for every member of `g`.
///
/// Uses the fibre bound and the independent `(u, theta)` cell bound; both must clear.
/// The margin is reported in distance units, `(bound - 1) * min(sf, sg)`.
pub fn sphere_tori_disjoint<T: Real>(
    ids: Vec<String>,
    f: &Affine<T>,
    sf: T,
    g: &DiscAffine<T>,
    sg: T,
    r: T,
) -> (Certificate, TwoRoute<T>) {
    let scale = sf.min(sg);
    let sl = slack(sf.max(sg)) / scale;
    let target = T::one() + sl * T::lit(2.0);
    let (wf, wg) = (T::one() / sf, T::one() / sg);
    let a = fiber_min_max(f, g, Shell::sphere(r), wf, wg, BnbOptions::target(target));
    let b = if a.lower >= target && !a.exhausted {
        sphere_cells_min_max(f, g, r, wf, wg, BnbOptions::target(target))
    } else {
        a
    };
    let low = a.lower.min(b.lower);
    let passed = low - T::one() > sl && !a.exhausted && !b.exhausted;
    let witness = a.witness.or(b.witness).unwrap_or_else(Point2::origin);
    let cert = Certificate {
        kind: CertKind::Disjointness,
        subject_ids: ids,
        margin: ((low - T::one()) * scale).to_f64().unwrap_or(f64::NAN),
        resolution: 0.0,
        sample_count: (a.cells + b.cells) as u64,
        witness: if passed { None } else { Some(to64(&witness)) },
        passed,
    };
    (cert, TwoRoute { primary: a.lower, secondary: b.lower, cells: a.cells + b.cells })
}
