use hullforge::geometry::*;
use hullforge::separation::*;
use hullforge::HullError;
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn annulus_point(rng: &mut ChaCha8Rng, lo: f64) -> Point2<f64> {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            let r = rng.gen_range(lo..=1.0);
            return Point2::from_reals(v[0] * r / n, v[1] * r / n, v[2] * r / n, v[3] * r / n);
        }
    }
}

fn brute_annulus_min(f: &Affine<f64>, g: &Affine<f64>, lo: f64, n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| annulus_point(&mut rng, lo)).map(|z| f.eval(&z).norm().max(g.eval(&z).norm())).fold(f64::INFINITY, f64::min)
}

#[test]
fn coordinate_pair_constants() {
    let f = Affine::z1_minus(c(0.0, 0.0));
    let g = Affine::z2_minus(c(0.0, 0.0));
    let k = separation_constants(&f, &g, Some(0.9)).unwrap();
    let brute = brute_annulus_min(&f, &g, 0.9, 200_000, 11);
    assert!(k.a + k.margin <= brute + 1e-12);
    assert!(brute - (k.a + k.margin) < 5e-3);
    assert!((k.a - 0.9 * 0.9 * 0.5f64.sqrt()).abs() < 1e-5, "{}", k.a);
    assert_eq!(k.r_prime, 0.9);
}

#[test]
fn parallel_pair_constants() {
    let f = Affine::z1_minus(c(0.3, 0.0));
    let g = Affine::z1_minus(c(-0.3, 0.0));
    let k = separation_constants(&f, &g, None).unwrap();
    assert!(k.a <= 0.3 && k.a > 0.26);
}

#[test]
fn crossing_lines_inside_ball_are_fine() {
    let f = Affine::z1_minus(c(0.5, 0.0));
    let g = Affine::z2_minus(c(0.5, 0.0));
    assert_eq!(circles_disjoint(&f, &g).unwrap(), Some(0.5f64.sqrt()));
    let k = separation_constants(&f, &g, None).unwrap();
    assert!(k.a > 0.0 && k.r_prime > 0.5f64.sqrt());
    let brute = brute_annulus_min(&f, &g, k.r_prime, 100_000, 5);
    assert!(k.a < brute);
}

#[test]
fn meeting_on_sphere_is_rejected() {
    let s = 0.5f64.sqrt();
    let f = Affine::z1_minus(c(s, 0.0));
    let g = Affine::z2_minus(c(s, 0.0));
    assert!(matches!(separation_constants(&f, &g, None), Err(HullError::CirclesIntersect(_))));
}

#[test]
fn annulus_inclusion_sampling() {
    let f = Affine::z1_minus(c(0.0, 0.0));
    let g = Affine::z2_minus(c(0.0, 0.0));
    let k = SeparationConstants { a: 0.5, r_prime: 0.9, margin: 0.9 * 0.5f64.sqrt() - 0.5, resolution: 0.0 };
    let cert = check_inclusion_eq1(&f, &g, &k, 1e-3, 100_000, 1).unwrap();
    assert!(cert.passed && cert.sample_count >= 100_000);
    assert!(check_inclusion_eq1(&f, &g, &k, 0.5, 20_000, 2).unwrap().passed);
    let zero = SeparationConstants { a: 0.0, ..k };
    assert!(check_inclusion_eq1(&f, &g, &zero, 1e-3, 10, 3).unwrap().passed);
    // constants that are too large: the dichotomy fails and sampling finds a witness
    let bad = SeparationConstants { a: 5.0, ..k };
    match check_inclusion_eq1(&f, &g, &bad, 0.1, 50_000, 4) {
        Err(HullError::ViolationFound { .. }) => {}
        Ok(cert) => assert!(!cert.passed),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn regions() {
    let f = Affine::z1_minus(c(0.5, 0.0));
    let g = Affine::z2_minus(c(0.5, 0.0));
    let k = separation_constants(&f, &g, None).unwrap();
    assert!(corollary_hull_region(&f, &g, &k, 1e-3, k.r_prime).is_ok());
    assert!(matches!(corollary_hull_region(&f, &g, &k, 1e-3, k.r_prime - 0.01), Err(HullError::RadiusOutOfRange { .. })));
    let prod = corollary_hull_region(&f, &g, &k, 1e-3, 1.0).unwrap();
    let p = Point2::from_reals(0.5, 0.0, 0.5, 0.0);
    assert!(prod.contains(&p));
    let bid = certified_bidisc(&f, &g, &k, 1e-3).unwrap();
    assert!(bid.contains(&p));
    let rad = (k.a * 1e-3).sqrt();
    let corner = Point2::from_reals(0.5 + rad, 0.0, 0.5, rad);
    assert!((f.eval(&corner).norm() * g.eval(&corner).norm() - k.a * 1e-3).abs() < 1e-15);
    // every bidisc point is in the product region
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..2000 {
        let z = p + Point2::new(Complex::from_polar(rad * rng.gen::<f64>(), rng.gen_range(0.0..6.3)), Complex::from_polar(rad * rng.gen::<f64>(), rng.gen_range(0.0..6.3)));
        assert!(bid.contains(&z) && prod.contains(&z));
    }
    let far = Affine::z1_minus(c(0.9, 0.0));
    let g2 = Affine::normalize(c(-0.9, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
    let g3 = Affine { f0: g2.f0, f1: c(0.6, 0.0), f2: c(0.8, 0.0) };
    assert!(matches!(certified_bidisc(&far, &g3, &k, 1e-3), Err(HullError::IntersectionOutsideBall(_))));
}

#[test]
fn spacing_viability_arithmetic() {
    assert!(spacing_viable(0.5, 1e-3, 5.0));
    assert!(((0.5f64 * 1e-3).sqrt() - 0.022_360_679_774_997_9).abs() < 1e-15);
    assert!(!spacing_viable(0.5, 0.1, 5.0));
}

fn line_pair() -> impl Strategy<Value = (Affine<f64>, Affine<f64>)> {
    (0.1f64..0.8, 0.1f64..0.8, 0.0f64..6.3, 0.2f64..1.4).prop_map(|(m1, m2, ph, tilt)| {
        let f = Affine::z1_minus(c(m1, 0.0));
        let g = Affine { f0: Complex::from_polar(-m2, ph), f1: c(tilt.sin(), 0.0), f2: c(tilt.cos(), 0.0) };
        (f, g)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn constants_are_sound((f, g) in line_pair(), seed in 0u64..100) {
        prop_assume!(circles_disjoint(&f, &g).is_ok());
        let Ok(k) = separation_constants(&f, &g, None) else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5000 {
            let z = annulus_point(&mut rng, k.r_prime);
            prop_assert!(f.eval(&z).norm().max(g.eval(&z).norm()) >= k.a);
        }
        // nearby pairs keep the constants
        let d = k.margin / 4.0 / 2.0;
        let fp = Affine::normalize(f.f0 + c(d, 0.0), f.f1, f.f2).unwrap();
        let (m, _) = annulus_min(&fp, &g, k.r_prime, 1e-6);
        prop_assert!(m >= k.a);
    }
}
