use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::path::Path;

use hullforge::construction::{CoverageAnswer, TreeStatus};
use hullforge::geometry::{Point2, TorusMesh};
use hullforge::io::*;
use hullforge::HullError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(dir: &Path, name: &str) -> RunConfig {
    RunConfig { output: dir.join(name), ..RunConfig::default() }
}

#[test]
fn config_validation_names_lines() {
    RunConfig::default().validate().unwrap();
    let bad = RunConfig { beta: 1.5, ..RunConfig::default() };
    assert!(matches!(bad.validate(), Err(HullError::Config(m)) if m.contains("beta")));
    let text = "{\n  \"beta\": 0.5,\n  \"depth\": 0,\n  \"B\": 10.0,\n  \"resolution\": 0.001,\n  \"eps_initial\": 0.001,\n  \"seed\": 1,\n  \"output\": \"t.json\"\n}";
    match RunConfig::from_json(text) {
        Err(HullError::Config(m)) => assert!(m.starts_with("line 3:"), "{m}"),
        other => panic!("{other:?}"),
    }
    match RunConfig::from_json("{\n  \"beta\": 0.5,\n  \"depht\": 1\n}") {
        Err(HullError::Config(m)) => assert!(m.starts_with("line 3"), "{m}"),
        other => panic!("{other:?}"),
    }
    let ok = RunConfig::from_json(&text.replace("\"depth\": 0", "\"depth\": 2")).unwrap();
    assert_eq!(ok.depth, 2);
    assert_eq!(ok.budget, RunBudget::default());
}

#[test]
fn construct_verify_roundtrip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(dir.path(), "a.json");
    let first = cmd_construct(&c).unwrap();
    assert_eq!(first.exit_code, EXIT_OK);
    assert_eq!(first.archive.tree.depth(), 1);
    assert_eq!(first.archive.tree.status, TreeStatus::Complete);
    assert!(first.archive.tree.generations[0].all_passed());
    let bytes = std::fs::read(&c.output).unwrap();
    let again = cmd_construct(&c).unwrap();
    assert_eq!(bytes, std::fs::read(&c.output).unwrap());

    let loaded = TreeArchive::load(&c.output).unwrap();
    assert_eq!(loaded, again.archive);
    let report = cmd_verify(&c.output, None).unwrap();
    assert!(report.all_passed, "{}", report.render());
    assert_eq!(report.exit_code, EXIT_OK);
    let mut compared = 0;
    for e in &report.entries {
        if let Some(s) = e.stored_margin {
            assert_eq!(e.margin.to_bits(), s.to_bits(), "{}", e.name);
            compared += 1;
        }
    }
    assert!(compared >= 4);
    assert_eq!(verify_archive(&loaded, c.resolution), report);
}

#[test]
fn coarser_resolution_keeps_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(dir.path(), "r.json");
    cmd_construct(&c).unwrap();
    let fine = cmd_verify(&c.output, Some(1e-3)).unwrap();
    let coarse = cmd_verify(&c.output, Some(5e-2)).unwrap();
    assert_eq!(fine.entries.len(), coarse.entries.len());
    for (f, k) in fine.entries.iter().zip(&coarse.entries) {
        assert_eq!(f.passed, k.passed, "{}", f.name);
        assert!(k.margin <= f.margin, "{}", f.name);
    }
    let cover = |r: &VerifyReport| r.entries.iter().find(|e| e.name == "beta-ball cover").unwrap().margin;
    assert!(cover(&coarse) < cover(&fine));
}

#[test]
fn tampered_archives_fail() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(dir.path(), "t.json");
    let built = cmd_construct(&c).unwrap().archive;

    let mut one = built.clone();
    one.tree.generations[0].tori[7].sigma *= 100.0;
    let report = verify_archive(&one, c.resolution);
    assert_eq!(report.exit_code, EXIT_FAILED);
    let bad: Vec<&VerifyEntry> = report.failures().collect();
    assert!(bad.iter().any(|e| e.name.ends_with("disjointness") && e.witness.is_some()), "{}", report.render());

    let mut all = built.clone();
    for fam in &mut all.tree.generations[0].families {
        fam.width *= 100.0;
    }
    assert!(verify_archive(&all, c.resolution).failures().any(|e| e.witness.is_some()));

    let mut moved = built.clone();
    moved.tree.generations[0].families[1].tori[3].f.f0 *= 1.001;
    assert!(!verify_archive(&moved, c.resolution).all_passed);

    let path = dir.path().join("v.json");
    let text = built.to_json().unwrap().replacen("\"format_version\": 1", "\"format_version\": 99", 1);
    std::fs::write(&path, text).unwrap();
    assert!(matches!(cmd_verify(&path, None), Err(HullError::Archive(m)) if m.contains("version")));
    std::fs::write(&path, "{\"format_version\": 1, \"config\": ").unwrap();
    assert!(matches!(cmd_verify(&path, None), Err(HullError::Archive(m)) if m.contains("corrupt")));
}

#[test]
fn budget_and_validation_exits() {
    let dir = tempfile::tempdir().unwrap();
    let c = RunConfig { budget: RunBudget { max_tori_per_level: Some(0), max_seconds: None }, ..config(dir.path(), "b.json") };
    let out = cmd_construct(&c).unwrap();
    assert_eq!(out.exit_code, EXIT_PARTIAL);
    assert_eq!(out.archive.tree.status, TreeStatus::PartialWithWitness);
    assert!(out.archive.tree.witness.as_deref().unwrap().contains("torus-budget"));
    assert_eq!(cmd_verify(&c.output, None).unwrap().exit_code, EXIT_PARTIAL);
    let bad = RunConfig { beta: 1.5, ..config(dir.path(), "x.json") };
    assert!(matches!(cmd_construct(&bad), Err(HullError::Config(_))));
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn queries() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(dir.path(), "q.json");
    cmd_construct(&c).unwrap();
    let r = cmd_query(&c.output, &Point2::origin(), 1).unwrap();
    assert!(matches!(r.answer, CoverageAnswer::Covered(_)));
    assert!(r.lines.iter().any(|l| l.contains("bidisc")));
    let far = cmd_query(&c.output, &Point2::from_reals(1.2, 0.0, 0.0, 0.0), 1).unwrap();
    assert_eq!(far.answer, CoverageAnswer::NotCovered);
    // points of the sphere of radius beta, by normalizing gaussian-free uniform cube draws
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let z = Point2::from_reals(0.5 * x[0] / n, 0.5 * x[1] / n, 0.5 * x[2] / n, 0.5 * x[3] / n);
        assert!(matches!(cmd_query(&c.output, &z, 1).unwrap().answer, CoverageAnswer::Covered(_)));
    }
}

/// Circumcentre and radius of three points in R^3.
fn circle_through(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> ([f64; 3], f64) {
    let sub = |p: [f64; 3], q: [f64; 3]| [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
    let dot = |p: [f64; 3], q: [f64; 3]| p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
    let cross = |p: [f64; 3], q: [f64; 3]| [p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]];
    let (u, v) = (sub(b, a), sub(c, a));
    let w = cross(u, v);
    let k = 2.0 * dot(w, w);
    let t1 = cross(w, u).map(|x| x * dot(v, v));
    let t2 = cross(v, w).map(|x| x * dot(u, u));
    let o = [a[0] + (t1[0] + t2[0]) / k, a[1] + (t1[1] + t2[1]) / k, a[2] + (t1[2] + t2[2]) / k];
    let r = dot(sub(a, o), sub(a, o)).sqrt();
    (o, r)
}

#[test]
fn stereographic_circles_and_lines() {
    let pole = [0.0, 0.0, 0.0, 1.0];
    // great circle through the pole: span of e1 and the pole
    let line: Vec<[f64; 3]> = (1..12).map(|k| stereographic([(k as f64 * 0.5).cos(), 0.0, 0.0, (k as f64 * 0.5).sin()], pole).unwrap()).collect();
    for p in &line {
        assert!(p[1].abs() < 1e-12 && p[2].abs() < 1e-12);
    }
    assert!(stereographic(pole, pole).is_none());
    // torus core {|z1| = R1, z2 = R2} misses the pole and maps to a round circle
    let (r1, r2) = (0.6, 0.8);
    let pts: Vec<[f64; 3]> = (0..24).map(|k| {
        let a = TAU * k as f64 / 24.0;
        stereographic([r1 * a.cos(), r1 * a.sin(), r2, 0.0], pole).unwrap()
    }).collect();
    let (o, r) = circle_through(pts[0], pts[7], pts[15]);
    for p in &pts {
        let d = ((p[0] - o[0]).powi(2) + (p[1] - o[1]).powi(2) + (p[2] - o[2]).powi(2)).sqrt();
        assert!((d - r).abs() < 1e-12 * r.max(1.0));
    }
    let diag = stereographic([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0], [1.0, 0.0, 0.0, 0.0]).unwrap();
    assert!(diag.iter().all(|v| v.is_finite()));
}

fn read_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn export_rows_and_reprojection() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(dir.path(), "e.json");
    let archive = cmd_construct(&c).unwrap().archive;
    let mesh = TorusMesh::new(1, 3, 4);
    let coords = dir.path().join("coords.csv");
    let stereo = dir.path().join("stereo.csv");
    let opts = ExportOptions { projection: Projection::Coordinates, mesh, ..ExportOptions::default() };
    let s = cmd_export(&c.output, &opts, &coords).unwrap();
    let tori = archive.tree.generations[0].tori.len() as u64;
    assert_eq!(s.rows, tori * mesh.count() as u64);
    assert_eq!(s.skipped, 0);
    let st = cmd_export(&c.output, &ExportOptions { projection: Projection::Stereographic, ..opts }, &stereo).unwrap();
    assert_eq!(st.rows, s.rows);
    let raw = read_rows(&coords);
    let proj = read_rows(&stereo);
    assert_eq!(raw.len() as u64, s.rows);
    for (a, b) in raw.iter().zip(&proj) {
        assert_eq!(a[..2], b[..2]);
        let x: [f64; 4] = std::array::from_fn(|i| a[2 + i].parse().unwrap());
        assert!((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
        let y = stereographic(x, opts.pole).unwrap();
        for k in 0..3 {
            assert_eq!(y[k].to_bits(), b[2 + k].parse::<f64>().unwrap().to_bits());
        }
    }
    let header = std::fs::read_to_string(&stereo).unwrap();
    assert!(header.starts_with("level,torus_id,x,y,z\n"));
}
