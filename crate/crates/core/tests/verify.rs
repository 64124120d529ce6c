use hullforge::geometry::*;
use hullforge::interval::{Disc, Interval};
use hullforge::verify::*;
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn affine_from(m: f64, arg: f64, f1: Complex<f64>, f2: Complex<f64>) -> Affine<f64> {
    let g = Affine::normalize(c(0.0, 0.0), f1, f2).unwrap();
    Affine { f0: Complex::from_polar(m, arg), ..g }
}

fn affine() -> impl Strategy<Value = Affine<f64>> {
    (0.0f64..0.95, 0.0f64..6.3, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("gradient", |t| t.2.abs() + t.3.abs() + t.4.abs() + t.5.abs() > 0.05)
        .prop_map(|(m, a, x1, y1, x2, y2)| affine_from(m, a, c(x1, y1), c(x2, y2)))
}

/// Uniform random point of the sphere of radius `r`, drawn from a Gaussian direction.
fn sphere_point(rng: &mut ChaCha8Rng, r: f64) -> Point2<f64> {
    loop {
        let v: [f64; 4] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return Point2::from_reals(v[0] * r / n, v[1] * r / n, v[2] * r / n, v[3] * r / n);
        }
    }
}

fn objective(f: &Affine<f64>, g: &Affine<f64>, z: &Point2<f64>) -> f64 {
    f.eval(z).norm().max(g.eval(z).norm())
}

#[test]
fn max_of_coordinates_on_sphere() {
    let f = Affine::z1_minus(c(0.0, 0.0));
    let g = Affine::z2_minus(c(0.0, 0.0));
    let lb = certified_min(&[f, g], &Region::Shell(Shell::sphere(1.0)), 1e-3).unwrap();
    let exact = 0.5f64.sqrt();
    assert!(lb.bound >= exact - 1e-3 && lb.bound <= exact + 1e-12, "{}", lb.bound);
    let mesh = sphere_mesh(1.0, 0.05);
    let lm = certified_min(&[f, g], &mesh, 0.05).unwrap();
    assert!(lm.bound <= exact && lm.bound >= exact - 0.05 - 0.05, "{}", lm.bound);
    assert!(lb.certificate(vec!["x".into()]).passed);
}

#[test]
fn sphere_mesh_covers_random_points() {
    let Region::Mesh { points, spacing } = sphere_mesh(0.9, 0.2) else { unreachable!() };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let z = sphere_point(&mut rng, 0.9);
        let near = points.iter().map(|p| p.dist(&z)).fold(f64::INFINITY, f64::min);
        assert!(near <= spacing);
    }
}

#[test]
fn interior_zero_gives_negative_mesh_bound() {
    let f = Affine::z1_minus(c(0.0, 0.0));
    let mesh = ball_mesh(1.0, 0.25);
    let Region::Mesh { spacing, .. } = &mesh else { unreachable!() };
    let lb = certified_min(&[f], &mesh, 0.25).unwrap();
    assert!((lb.bound + spacing).abs() < 1e-12);
    let shell = certified_min(&[f], &Region::Shell(Shell::ball(1.0)), 1e-6).unwrap();
    assert!(shell.bound <= 0.0 + 1e-12 && shell.bound >= -1e-6);
}

#[test]
fn empty_region_is_an_error() {
    let f = Affine::z1_minus(c(0.0, 0.0));
    let r = certified_min(&[f], &Region::Mesh { points: vec![], spacing: 0.1 }, 0.1);
    assert!(r.is_err());
}

#[test]
fn convex_examples() {
    let a = convex_min_max_moduli(&Affine::z1_minus(c(0.3, 0.0)), &Affine::z1_minus(c(-0.3, 0.0)), 1.0);
    assert!((a.value - 0.3).abs() < 1e-9);
    assert!(a.argmin.z1.norm() < 1e-6);
    let b = convex_min_max_moduli(&Affine::z1_minus(c(0.0, 0.0)), &Affine::z2_minus(c(0.0, 0.0)), 1.0);
    assert!(b.value < 1e-9);
}

#[test]
fn disjoint_tangent_tubes_agree() {
    // two tangent lines to the circle |z1| = 0.6 whose intersection lies outside the ball
    let p = |phi: f64| Point2::new(c(0.6, 0.0), Complex::from_polar(0.8, phi));
    let v = |phi: f64| Point2::new(c(0.8, 0.0), Complex::from_polar(-0.6, phi));
    let f = Affine::through(&p(0.0), &v(0.0)).unwrap();
    let g = Affine::through(&p(0.4), &v(0.4)).unwrap();
    let cv = convex_min_max_moduli(&f, &g, 1.0);
    let fa = fiber_min_max(&f, &DiscAffine::point(&g), Shell::ball(1.0), 1.0, 1.0, BnbOptions::tolerance(1e-7));
    assert!(cv.value > 0.01);
    assert!(fa.lower <= cv.value + 1e-9 && cv.value - fa.lower <= 1e-6, "{} {}", fa.lower, cv.value);
}

#[test]
fn lemma_style_certificate_passes_and_fails() {
    let f = Affine::z1_minus(c(0.5, 0.0));
    let g = Affine::z1_minus(c(0.3, 0.0));
    let (ok, _) = ball_tubes_disjoint(vec![], &f, &DiscAffine::point(&g), 0.09, 1.0);
    assert!(ok.passed && ok.is_consistent());
    assert!(ok.margin > 0.004 && ok.margin <= 0.01 + 1e-9, "{}", ok.margin);
    let (bad, _) = ball_tubes_disjoint(vec![], &f, &DiscAffine::point(&g), 0.11, 1.0);
    assert!(!bad.passed && bad.is_consistent());
}

#[test]
fn sphere_tori_certificate() {
    // z1 = 0.5 and z2 = 0.5 cut the sphere in disjoint circles at distance
    let f = Affine::z1_minus(c(0.5, 0.0));
    let g = Affine::z2_minus(c(0.5, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut brute = f64::INFINITY;
    for _ in 0..200_000 {
        let z = sphere_point(&mut rng, 1.0);
        brute = brute.min(objective(&f, &g, &z));
    }
    let out = fiber_min_max(&f, &DiscAffine::point(&g), Shell::sphere(1.0), 1.0, 1.0, BnbOptions::tolerance(1e-6));
    assert!(out.lower <= brute + 1e-12);
    assert!(brute - out.lower < 0.02);
    let half = out.lower / 2.0;
    let (cert, two) = sphere_tori_disjoint(vec![], &f, half, &DiscAffine::point(&g), half, 1.0);
    assert!(cert.passed, "{two:?}");
    let (cert, _) = sphere_tori_disjoint(vec![], &f, out.upper * 1.01, &DiscAffine::point(&g), out.upper * 1.01, 1.0);
    assert!(!cert.passed && cert.witness.is_some());
}

#[test]
fn polynomial_examples() {
    let k: Vec<Point2<f64>> = {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        (0..500).map(|_| sphere_point(&mut rng, 1.0)).collect()
    };
    let z = Point2::from_reals(1.2, 0.0, 0.0, 0.0);
    let w = polynomial_separation(&z, &k, 1, &[CandidateFamily::Monomial], &[]).unwrap();
    assert!(w.ratio >= 1.2 - 1e-12);
    let inside = Point2::from_reals(0.1, 0.0, 0.2, 0.0);
    let fams = [CandidateFamily::Linear, CandidateFamily::Monomial];
    assert!(polynomial_separation(&inside, &k, 4, &fams, &[]).is_none());
}

#[test]
fn inclusion_forced_failure() {
    let t = SolidTorus::normal_form(0.5, 0.05, 1.0).unwrap();
    let s = torus_sample(&t, TorusMesh::new(3, 8, 16)).unwrap();
    let wide = |z: &Point2<f64>| 0.1 - (z.z1 - c(0.5, 0.0)).norm();
    let cert = region_inclusion(vec![], &s.points, s.spacing, wide, 1.0);
    assert!(cert.passed == (0.05 > s.spacing));
    let big = SolidTorus::normal_form(0.5, 0.4, 1.0).unwrap();
    let sb = torus_sample(&big, TorusMesh::new(3, 8, 16)).unwrap();
    let cert = region_inclusion(vec![], &sb.points, sb.spacing, wide, 1.0);
    assert!(!cert.passed && cert.witness.is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn convex_agrees_with_fibre_bound(f in affine(), g in affine()) {
        let cv = convex_min_max_moduli(&f, &g, 1.0);
        let fa = fiber_min_max(&f, &DiscAffine::point(&g), Shell::ball(1.0), 1.0, 1.0, BnbOptions::tolerance(1e-6));
        prop_assert!(!fa.exhausted);
        prop_assert!(fa.lower <= cv.value + 1e-9);
        prop_assert!(cv.value - fa.lower <= 1e-6 + 1e-6, "{} {}", fa.lower, cv.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fibre_bound_is_sound_on_spheres(f in affine(), g in affine(), r in 0.9f64..1.0, seed in 0u64..1000) {
        prop_assume!(f.offset() < r && g.offset() < r);
        let out = fiber_min_max(&f, &DiscAffine::point(&g), Shell::sphere(r), 1.0, 1.0, BnbOptions::tolerance(1e-4));
        let w = out.witness.unwrap();
        prop_assert!((w.norm() - r).abs() < 1e-12);
        prop_assert!((objective(&f, &g, &w) - out.upper).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..2000 {
            let z = sphere_point(&mut rng, r);
            prop_assert!(objective(&f, &g, &z) >= out.lower - 1e-12);
        }
        let b = sphere_cells_min_max(&f, &DiscAffine::point(&g), r, 1.0, 1.0, BnbOptions::tolerance(1e-3));
        prop_assert!(b.lower <= out.upper + 1e-12 && out.lower <= b.upper + 1e-12);
    }

    #[test]
    fn disc_families_bound_every_member(f in affine(), g in affine(), a in 0.0f64..6.0, w in 0.0f64..0.3) {
        prop_assume!(f.offset() < 1.0 && g.offset() < 1.0);
        let e = Disc::exp_neg_i(Interval::new(a, a + w));
        let fam = DiscAffine { f0: Disc::point(g.f0), f1: Disc::point(g.f1), f2: Disc::point(g.f2) * e };
        let lo = fiber_min_max(&f, &fam, Shell::sphere(1.0), 1.0, 1.0, BnbOptions::tolerance(1e-3)).lower;
        let lo_b = sphere_cells_min_max(&f, &fam, 1.0, 1.0, 1.0, BnbOptions { target: None, tol: 1e-2, rel: 0.0, max_cells: 200_000 }).lower;
        for k in 0..=4 {
            let member = g.rotated(Axis::Z2, a + w * k as f64 / 4.0);
            let up = fiber_min_max(&f, &DiscAffine::point(&member), Shell::sphere(1.0), 1.0, 1.0, BnbOptions::tolerance(1e-3)).upper;
            prop_assert!(lo <= up + 1e-12);
            prop_assert!(lo_b <= up + 1e-12);
        }
    }

    #[test]
    fn mesh_bound_monotone_in_resolution(f in affine(), g in affine()) {
        let coarse = sphere_mesh(1.0, 0.4);
        let fine = sphere_mesh(1.0, 0.2);
        let Region::Mesh { spacing, .. } = &coarse else { unreachable!() };
        let a = certified_min(&[f, g], &coarse, 1.0).unwrap().bound;
        let b = certified_min(&[f, g], &fine, 1.0).unwrap().bound;
        prop_assert!(b >= a - spacing);
    }
}
