use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertKind {
    Disjointness,
    Inclusion,
    Coverage,
    LowerBound,
}

/// Outcome of one elementary check, kept as a value whether it passed or not.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub subject_ids: Vec<String>,
    /// Certified quantity minus its threshold; positive when passed.
    pub margin: f64,
    pub resolution: f64,
    pub sample_count: u64,
    pub witness: Option<Point2<f64>>,
    pub passed: bool,
}

impl Certificate {
    /// Decides pass/fail from a certified `margin` against the slack for `scale`.
    pub fn decide(
        kind: CertKind,
        subject_ids: Vec<String>,
        margin: f64,
        scale: f64,
        resolution: f64,
        sample_count: u64,
        witness: Option<Point2<f64>>,
    ) -> Self {
        let passed = margin > slack(scale) && margin.is_finite();
        Certificate {
            kind,
            subject_ids,
            margin,
            resolution,
            sample_count,
            witness: if passed { witness } else { witness.or(Some(Point2::origin())) },
            passed,
        }
    }

    pub fn failed(kind: CertKind, subject_ids: Vec<String>, margin: f64, witness: Point2<f64>) -> Self {
        Certificate { kind, subject_ids, margin, resolution: 0.0, sample_count: 0, witness: Some(witness), passed: false }
    }

    /// True when the stored fields respect `passed => margin > 0` and `failed => witness`.
    pub fn is_consistent(&self) -> bool {
        if self.passed {
            self.margin > 0.0
        } else {
            self.witness.is_some()
        }
    }

    /// Folds several certificates into one with the smallest margin.
    pub fn combine(kind: CertKind, subject_ids: Vec<String>, parts: &[Certificate]) -> Self {
        let mut worst: Option<&Certificate> = None;
        for p in parts {
            let replace = match worst {
                None => true,
                Some(w) => (!p.passed && w.passed) || (p.passed == w.passed && p.margin < w.margin),
            };
            if replace {
                worst = Some(p);
            }
        }
        match worst {
            None => Certificate::failed(kind, subject_ids, f64::NAN, Point2::origin()),
            Some(w) => Certificate {
                kind,
                subject_ids,
                margin: w.margin,
                resolution: parts.iter().map(|p| p.resolution).fold(0.0, f64::max),
                sample_count: parts.iter().map(|p| p.sample_count).sum(),
                witness: w.witness,
                passed: parts.iter().all(|p| p.passed),
            },
        }
    }
}

/// Rounding slack a margin must exceed: relative `1e-9` of the threshold plus an absolute floor.
pub fn slack<T: Real>(scale: T) -> T {
    scale.abs() * T::lit(1e-9) + T::rounding_floor()
}
