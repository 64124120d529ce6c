use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

use hullforge::construction::*;
use hullforge::geometry::*;
use hullforge::HullError;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform point of the closed ball of radius `r` in C^2.
fn ball_point(rng: &mut ChaCha8Rng, r: f64) -> Point2<f64> {
    loop {
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = x.iter().map(|v| v * v).sum();
        if n2 <= 1.0 {
            return Point2::from_reals(r * x[0], r * x[1], r * x[2], r * x[3]);
        }
    }
}

#[test]
fn bidisc_cover_shapes() {
    let c = bidisc_cover(0.5).unwrap();
    assert_eq!(c.len(), 1);
    assert!((c[0].0 - FRAC_1_SQRT_2).abs() < 1e-15 && (c[0].2 - 0.75).abs() < 1e-15);
    // worst arc point is an axis point: q/sqrt(2) - beta
    assert!((cover_margin(0.5, &c) - (0.75 * FRAC_1_SQRT_2 - 0.5)).abs() < 1e-3);
    let wide = bidisc_cover(0.99).unwrap();
    assert!(wide.len() > 1);
    assert!(cover_margin(0.99, &wide) > 0.0);
    for &(r1, r2, q) in &wide {
        assert!((r1 * r1 + r2 * r2 - 1.0).abs() < 1e-14 && q > 0.99);
    }
    assert!(matches!(bidisc_cover(1.0), Err(HullError::InvalidParameter(_))));
}

#[test]
fn choose_epsilon_halving() {
    assert_eq!(choose_epsilon(1e-3, 10, |_| Ok(true)).unwrap(), 1e-3);
    let e = choose_epsilon(1e-3, 40, |e| Ok(e < 1e-5)).unwrap();
    assert_eq!(e, 1e-3 / 128.0);
    assert!(matches!(choose_epsilon(1e-3, 12, |_| Ok(false)), Err(HullError::SearchExhausted(12))));
}

#[test]
fn generation_1_invariants() {
    let g = build_generation_1(0.5, 5e-5, 10.0).unwrap();
    assert!(g.all_passed());
    assert_eq!(g.families.len(), 2);
    let n = g.families[0].count();
    assert_eq!(g.tori.len() as u64, 2 * n);
    assert_eq!(g.torus_count(), 2 * n);
    for t in &g.tori {
        t.validate().unwrap();
        let circle = line_circle(&t.f, t.r).unwrap();
        for k in 0..8 {
            let z = circle.point_at(k as f64 * 0.785);
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }
    // z1-tubes around distinct centres on one circle are disjoint iff the centres are 4 eps apart
    for fam in &g.families {
        let centres: Vec<Complex<f64>> = fam.lines.iter().map(|l| l.base.z1 + l.base.z2).collect();
        let mut closest = f64::INFINITY;
        for (i, a) in centres.iter().enumerate() {
            for b in &centres[i + 1..] {
                closest = closest.min((a - b).norm());
            }
        }
        assert!(closest > 4.0 * 5e-5, "{} {closest}", fam.label);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let z = ball_point(&mut rng, 0.5);
        assert!(g.regions.iter().any(|r| r.contains(&z)));
    }
}

#[test]
fn coverage_queries() {
    let t0 = Instant::now();
    let tree = build_cantor_tree(0.5, 1, Budget::default()).unwrap();
    assert_eq!(tree.status, TreeStatus::Complete);
    assert_eq!(tree.depth(), 1);
    assert!(tree.hull_chain[0].passed);
    assert!(t0.elapsed().as_secs() < 60);
    let origin = Point2::origin();
    assert!(matches!(point_coverage_query(&tree, &origin, 1), CoverageAnswer::Covered(_)));
    let edge = Point2::from_reals(0.5 * FRAC_1_SQRT_2, 0.0, 0.0, 0.5 * FRAC_1_SQRT_2);
    assert!(matches!(point_coverage_query(&tree, &edge, 1), CoverageAnswer::Covered(_)));
    let axis = Point2::new(Complex::new(0.0, 0.5), Complex::new(0.0, 0.0));
    assert!(matches!(point_coverage_query(&tree, &axis, 1), CoverageAnswer::Covered(_)));
    let far = Point2::from_reals(1.2, 0.0, 0.0, 0.0);
    assert_eq!(point_coverage_query(&tree, &far, 1), CoverageAnswer::NotCovered);
    assert_eq!(point_coverage_query(&tree, &origin, 2), CoverageAnswer::NotCovered);
}

#[test]
fn depth_two_reports_witness() {
    let budget = Budget { max_classes: 4, ..Budget::default() };
    let tree = build_cantor_tree(0.5, 2, budget).unwrap();
    assert_eq!(tree.depth(), 1);
    assert_eq!(tree.status, TreeStatus::PartialWithWitness);
    let w = tree.witness.as_deref().unwrap();
    assert!(w.starts_with("level 2:"), "{w}");
}

#[test]
fn prop4_separation_and_trends() {
    // footprint separation oracle: (5/3) sigma - ((4/3) sigma + alpha/3) > 0 whenever alpha < sigma
    for (sigma, alpha) in [(0.05, 7.0e-5), (0.01, 0.009), (1e-4, 9.9e-5)] {
        let m = 5.0 * sigma / 3.0 - (4.0 * sigma / 3.0 + alpha / 3.0);
        assert!(m > 0.0);
    }
    let a = hullforge::families::prop3_constants(0.3, 0.05, 10.0).unwrap();
    let b = hullforge::families::prop3_constants(0.3, 0.025, 10.0).unwrap();
    assert!(a.alpha < 0.05 && b.alpha < 0.025);
    // rho is the tangent-family invariant s*, so both trends are one check
    assert!(b.s_star < a.s_star);
    // the class budget is checked after the tangent part; a zero-class budget leaves the cover incomplete
    match prop4_cover(0.3, 0.05, 1e-5, 10.0, 0.25, 0) {
        Ok(out) => {
            assert!(!out.complete && out.subcovers.is_empty());
            assert!(out.separation.passed && out.classes_total > 1);
            assert!(out.s_values.iter().all(|&s| s < 0.25));
        }
        Err(e) => panic!("{e}"),
    }
}
