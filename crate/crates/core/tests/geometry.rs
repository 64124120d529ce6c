use hullforge::geometry::*;
use num_complex::Complex;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn cplx() -> impl Strategy<Value = Complex<f64>> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c(a, b))
}

fn point(scale: f64) -> impl Strategy<Value = Point2<f64>> {
    (cplx(), cplx()).prop_map(move |(a, b)| Point2::new(a * scale, b * scale))
}

fn affine() -> impl Strategy<Value = Affine<f64>> {
    (0.0f64..0.95, 0.0f64..6.3, cplx(), cplx())
        .prop_filter("nonzero gradient", |(_, _, a, b)| a.norm() + b.norm() > 1e-3)
        .prop_map(|(m, arg, f1, f2)| {
            let g = Affine::normalize(c(0.0, 0.0), f1, f2).unwrap();
            Affine { f0: Complex::from_polar(m, arg), ..g }
        })
}

fn unitary() -> impl Strategy<Value = Unitary2<f64>> {
    (0.0f64..6.3, 0.0f64..6.3, 0.0f64..6.3, 0.0f64..1.6).prop_map(|(a, b, g, t)| Unitary2::from_angles(a, b, g, t))
}

/// A torus point built directly from the defining inequalities, independent of the sampler.
fn member(f: &Affine<f64>, r: f64, u: Complex<f64>, phase: f64) -> Point2<f64> {
    let n = Point2::new(f.f1.conj(), f.f2.conj());
    let w = Point2::new(f.f2, -f.f1);
    let h = (r * r - (u - f.f0).norm_sqr()).sqrt();
    n * (u - f.f0) + w * Complex::from_polar(h, phase)
}

proptest! {
    #[test]
    fn unit_gradient_closure(f in affine()) {
        prop_assert!((f.f1.norm_sqr() + f.f2.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn modulus_is_lipschitz(f in affine(), z in point(2.0), w in point(2.0)) {
        prop_assert!((f.eval(&z) - f.eval(&w)).norm() <= z.dist(&w) + 1e-12);
    }

    #[test]
    fn s_is_unitarily_invariant(f in affine(), u in unitary()) {
        let g = u.pull_back(&f);
        prop_assert!((g.unitary_invariant_s().unwrap() - f.unitary_invariant_s().unwrap()).abs() < 1e-10);
        prop_assert!(u.unitarity_defect() < 1e-12);
        let det = u.m[0][0] * u.m[1][1] - u.m[0][1] * u.m[1][0];
        prop_assert!((det.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_form_roundtrip(f in affine(), frac in 0.05f64..0.95) {
        let s = f.unitary_invariant_s().unwrap();
        let t = SolidTorus::new(f, frac * s, 1.0, 1, None).unwrap();
        let u = normalizing_unitary(&f);
        for p in torus_sample(&t, TorusMesh::new(3, 5, 7)).unwrap().points {
            let w = u.apply(&p);
            prop_assert!((w.z1 - c(1.0 - s, 0.0)).norm() <= t.sigma + 1e-10);
            prop_assert!((w.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn samples_are_members(f in affine(), frac in 0.05f64..0.95, r in 0.95f64..1.0) {
        let room = r - f.offset();
        prop_assume!(room > 1e-3);
        let t = SolidTorus::new(f, frac * room, r, 1, None).unwrap();
        for p in torus_sample(&t, TorusMesh::new(4, 6, 8)).unwrap().points {
            prop_assert!(t.contains(&p, 1e-12));
        }
    }

    #[test]
    fn intersection_lies_on_both(f in affine(), g in affine()) {
        match line_intersection(&f, &g, 1e-6) {
            LineIntersection::Point(p) => {
                let scale = 1.0 + p.norm();
                prop_assert!(f.eval(&p).norm() < 1e-10 * scale);
                prop_assert!(g.eval(&p).norm() < 1e-10 * scale);
            }
            LineIntersection::Parallel => {
                let det = f.f1 * g.f2 - f.f2 * g.f1;
                prop_assert!(det.norm() <= 1e-6);
            }
        }
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn diameter_monotone(s in 0.05f64..0.9, ds in 0.0f64..0.1, sig in 0.005f64..0.04, dsig in 0.0f64..0.01) {
        let tol = |t: &SolidTorus<f64>| 2.0 * mesh_spacing(t, TorusMesh::new(9, 96, 2)).min(0.05);
        let a = SolidTorus::normal_form(s, sig, 1.0).unwrap();
        let b = SolidTorus::normal_form(s + ds, sig, 1.0).unwrap();
        let cc = SolidTorus::normal_form(s, sig + dsig, 1.0).unwrap();
        let da = torus_diameter(&a).unwrap();
        prop_assert!(torus_diameter(&b).unwrap() >= da - tol(&a));
        prop_assert!(torus_diameter(&cc).unwrap() >= da - tol(&a));
    }
}

#[test]
fn half_torus_membership() {
    let t = SolidTorus::normal_form(0.5, 0.1, 1.0).unwrap();
    let s = torus_sample(&t, TorusMesh::new(3, 8, 8)).unwrap();
    assert_eq!(s.points.len(), 192);
    let worst = s.points.iter().map(|p| (p.z1 - c(0.5, 0.0)).norm()).fold(0.0, f64::max);
    assert!(worst <= 0.1 + 1e-12);
    assert!(s.points.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
}

#[test]
fn spacing_covers_random_members() {
    let f = Affine::normalize(c(0.3, -0.2), c(0.4, 0.1), c(-0.6, 0.5)).unwrap();
    let t = SolidTorus::new(f, 0.08, 1.0, 1, None).unwrap();
    let sample = torus_sample(&t, TorusMesh::new(3, 8, 16)).unwrap();
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..2000 {
        let u = Complex::from_polar(0.08 * next().sqrt(), 6.283 * next());
        let z = member(&f, 1.0, u, 6.283 * next());
        assert!(t.contains(&z, 1e-12));
        let near = sample.points.iter().map(|p| p.dist(&z)).fold(f64::INFINITY, f64::min);
        assert!(near <= sample.spacing, "{near} > {}", sample.spacing);
    }
}

#[test]
fn resolution_mesh_meets_target() {
    let t = SolidTorus::normal_form(0.3, 0.05, 1.0).unwrap();
    for res in [0.2, 0.05, 0.01] {
        let m = mesh_for_resolution(&t, res).unwrap();
        assert!(torus_sample(&t, m).unwrap().spacing <= res);
    }
}

#[test]
fn diameter_examples() {
    let small = torus_diameter(&SolidTorus::normal_form(0.1, 0.01, 1.0).unwrap()).unwrap();
    let large = torus_diameter(&SolidTorus::normal_form(0.4, 0.01, 1.0).unwrap()).unwrap();
    assert!(small < large);
    for (s, sig) in [(0.1, 0.01), (0.4, 0.01), (0.7, 0.2)] {
        let r2 = (1.0f64 - (1.0 - s) * (1.0 - s)).sqrt();
        let d = torus_diameter(&SolidTorus::normal_form(s, sig, 1.0).unwrap()).unwrap();
        assert!(d >= 2.0 * r2 - 1e-12);
    }
}

#[test]
fn diameter_dominates_random_pairs() {
    let f = Affine::z1_minus(c(0.75, 0.0));
    let t = SolidTorus::new(f, 0.05, 1.0, 1, None).unwrap();
    let d = torus_diameter(&t).unwrap();
    let pts: Vec<_> = (0..400)
        .map(|i| {
            let k = i as f64;
            let u = Complex::from_polar(0.05 * ((k * 0.618).fract()).sqrt(), k * 2.399);
            member(&f, 1.0, u, k * 1.1)
        })
        .collect();
    let mut best: f64 = 0.0;
    for a in &pts {
        for b in &pts {
            best = best.max(a.dist(b));
        }
    }
    assert!(best <= d + 1e-3);
    assert!(d - best < 0.05);
}

#[test]
fn parallel_lines() {
    let f = Affine::z1_minus(c(0.5, 0.0));
    let g = Affine::z1_minus(c(0.3, 0.0));
    assert_eq!(line_intersection(&f, &g, 1e-12), LineIntersection::Parallel);
}

#[test]
fn line_roundtrip() {
    let f = Affine::normalize(c(0.2, 0.1), c(0.3, -0.4), c(0.5, 0.5)).unwrap();
    let l = ComplexLine::of(&f);
    assert!(f.eval(&l.base).norm() < 1e-14);
    assert!(f.linear(&l.direction).norm() < 1e-14);
    let g = l.to_affine().unwrap();
    for z in [c(0.3, 0.1), c(-1.0, 2.0)] {
        assert!(g.eval(&l.at(z)).norm() < 1e-13);
    }
}
