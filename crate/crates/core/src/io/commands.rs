use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{
    build_cantor_tree, build_generation_1, coordinate_pair_margin, cover_margin_with, point_coverage_query, refine_generation,
    ConstructionTree, CoverageAnswer, GenerationRecord, TreeStatus,
};
use crate::error::Result;
use crate::families::{lemma2_certificate, TorusFamily};
use crate::geometry::Point2;
use crate::separation::HullRegion;
use crate::verify::{CertKind, Certificate};

use super::{RunConfig, TreeArchive};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

/// Points of `beta B̄` drawn for the sampled coverage check.
const COVERAGE_SAMPLES: usize = 1000;
/// Allowed distance between a stored member and the one its generator produces.
const MEMBER_TOLERANCE: f64 = 1e-12;

fn tree_exit_code(tree: &ConstructionTree) -> i32 {
    if tree.generations.iter().any(|g| !g.all_passed()) {
        EXIT_FAILED
    } else if tree.status == TreeStatus::PartialWithWitness {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    }
}

#[derive(Clone, Debug)]
pub struct ConstructOutcome {
    pub archive: TreeArchive,
    pub exit_code: i32,
}

/// Builds the tree described by `config` and writes the archive to `config.output`.
pub fn cmd_construct(config: &RunConfig) -> Result<ConstructOutcome> {
    config.validate()?;
    let tree = build_cantor_tree(config.beta, config.depth, config.budget())?;
    log::info!("built {} generation(s), status {:?}", tree.depth(), tree.status);
    let archive = TreeArchive::new(config.clone(), tree);
    archive.save(&config.output)?;
    Ok(ConstructOutcome { exit_code: tree_exit_code(&archive.tree), archive })
}

/// One re-run check of [`cmd_verify`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyEntry {
    pub level: u32,
    pub name: String,
    pub passed: bool,
    pub margin: f64,
    /// Margin recorded in the archive, when the check has a stored counterpart.
    pub stored_margin: Option<f64>,
    pub witness: Option<[f64; 4]>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub resolution: f64,
    pub status: TreeStatus,
    pub entries: Vec<VerifyEntry>,
    /// Indices of the entries with the smallest margins, worst first.
    pub worst: Vec<usize>,
    pub all_passed: bool,
    pub exit_code: i32,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &VerifyEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let verdict = if e.passed { "pass" } else { "FAIL" };
            out.push_str(&format!("[{verdict}] level {} {}: margin {:e}", e.level, e.name, e.margin));
            if let Some(s) = e.stored_margin {
                out.push_str(&format!(" (stored {s:e})"));
            }
            if !e.detail.is_empty() {
                out.push_str(&format!(" {}", e.detail));
            }
            if let Some(w) = e.witness {
                out.push_str(&format!(" witness {w:?}"));
            }
            out.push('\n');
        }
        out.push_str("worst margins:\n");
        for &i in &self.worst {
            let e = &self.entries[i];
            out.push_str(&format!("  level {} {}: {:e}\n", e.level, e.name, e.margin));
        }
        out.push_str(&format!("status {:?}, {}\n", self.status, if self.all_passed { "all checks passed" } else { "checks failed" }));
        out
    }
}

fn entry(level: u32, name: impl Into<String>, cert: &Certificate, stored: Option<f64>, detail: String) -> VerifyEntry {
    VerifyEntry {
        level,
        name: name.into(),
        passed: cert.passed,
        margin: cert.margin,
        stored_margin: stored,
        witness: if cert.passed { None } else { cert.witness.map(|w| w.to_reals()) },
        detail,
    }
}

/// Tube width actually stored for each family: the family width or any wider stored torus.
fn effective_widths(g: &GenerationRecord) -> Vec<f64> {
    let flat = g.tori.len() as u64 == g.torus_count();
    let mut offset = 0usize;
    g.families
        .iter()
        .map(|fam| {
            let n = fam.count() as usize;
            let mut w = fam.width;
            for t in &fam.tori {
                w = w.max(t.sigma);
            }
            if flat {
                for t in &g.tori[offset..offset + n] {
                    w = w.max(t.sigma);
                }
            }
            offset += n;
            w
        })
        .collect()
}

/// Largest deviation of stored members from the family generator.
fn member_deviation(fam: &TorusFamily) -> f64 {
    let mut worst: f64 = 0.0;
    for (j, t) in fam.tori.iter().enumerate() {
        let f = fam.member(j as u64);
        let d = (t.f.f0 - f.f0).norm() + (t.f.f1 - f.f1).norm() + (t.f.f2 - f.f2).norm();
        worst = worst.max(d);
    }
    worst
}

fn stored_lemma2(fam: &TorusFamily) -> Option<f64> {
    fam.certificates
        .iter()
        .find(|c| c.kind == CertKind::Disjointness && c.subject_ids.get(1).is_some_and(|s| s == "lemma2"))
        .map(|c| c.margin)
}

fn verify_families(g: &GenerationRecord, out: &mut Vec<VerifyEntry>) {
    let widths = effective_widths(g);
    let runs: Vec<VerifyEntry> = g
        .families
        .par_iter()
        .zip(widths.par_iter())
        .map(|(fam, &w)| {
            let name = format!("{} disjointness", fam.label);
            let dev = member_deviation(fam);
            if dev > MEMBER_TOLERANCE {
                let c = Certificate::failed(CertKind::Disjointness, vec![], -dev, fam.tori.first().map_or_else(Point2::origin, |t| t.f.foot()));
                return entry(g.level, name, &c, stored_lemma2(fam), format!("stored members deviate from the generator by {dev:e}"));
            }
            let mut probe = fam.clone();
            probe.width = w;
            let detail = if w > fam.width { format!("stored tori widen the tube to {w:e}") } else { String::new() };
            match lemma2_certificate(&probe, w / 2.0) {
                Ok(c) => entry(g.level, name, &c, stored_lemma2(fam), detail),
                Err((pair, c)) => entry(g.level, name, &c, stored_lemma2(fam), format!("pair {pair}; {detail}")),
            }
        })
        .collect();
    out.extend(runs);
    let mut cross: Option<(f64, String)> = None;
    for i in 0..g.families.len() {
        for j in i + 1..g.families.len() {
            if let Some(m) = coordinate_pair_margin(&g.families[i], widths[i], &g.families[j], widths[j]) {
                if cross.as_ref().is_none_or(|c| m < c.0) {
                    cross = Some((m, format!("{} / {}", g.families[i].label, g.families[j].label)));
                }
            }
        }
    }
    if let Some((m, pair)) = cross {
        let c = Certificate::decide(CertKind::Disjointness, vec![], m, widths.iter().copied().fold(0.0, f64::max), 0.0, 0, None);
        out.push(entry(g.level, "cross-family disjointness", &c, None, format!("closest {pair}")));
    }
}

fn verify_cover(beta: f64, g: &GenerationRecord, resolution: f64, seed: u64, out: &mut Vec<VerifyEntry>) {
    let cover: Vec<(f64, f64, f64)> = g
        .regions
        .iter()
        .filter_map(|r| match r {
            HullRegion::FullBidiscProduct { r1, r2 } => Some((*r1, *r2, 1.0)),
            _ => None,
        })
        .collect();
    // nested dyadic arc grids: a finer resolution refines the coarser one
    let samples = 2usize.pow((FRAC_PI_2 / resolution).log2().ceil().clamp(0.0, 30.0) as u32);
    let m = cover_margin_with(beta, &cover, samples);
    let c = Certificate::decide(CertKind::Inclusion, vec![], m, beta, resolution, samples as u64 + 1, None);
    out.push(entry(g.level, "beta-ball cover", &c, None, format!("{samples} arc cells")));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for _ in 0..COVERAGE_SAMPLES {
        let z = loop {
            let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
            if x.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
                break Point2::from_reals(beta * x[0], beta * x[1], beta * x[2], beta * x[3]);
            }
        };
        let best = g.regions.iter().map(|r| r.slack_at(&z)).fold(f64::NEG_INFINITY, f64::max);
        if best < worst {
            worst = best;
            witness = Some(z);
        }
    }
    let c = Certificate::decide(CertKind::Inclusion, vec![], worst, 0.0, 0.0, COVERAGE_SAMPLES as u64, witness);
    out.push(entry(g.level, "sampled coverage", &c, None, format!("{COVERAGE_SAMPLES} points of beta B")));
}

/// Rebuilds the generation from the archived parameters and compares every margin bit for bit.
fn verify_rebuild(tree: &ConstructionTree, idx: usize, out: &mut Vec<VerifyEntry>) {
    let g = &tree.generations[idx];
    let rebuilt = if idx == 0 {
        build_generation_1(tree.beta, g.eps_level, tree.budget.b)
    } else {
        refine_generation(&tree.generations[idx - 1], g.eps_level, &tree.budget)
    };
    let c = match rebuilt {
        Ok(r) => {
            let same = |a: &Certificate, b: &Certificate| a.margin.to_bits() == b.margin.to_bits() && a.passed == b.passed;
            let mismatches = g.certificates.len().abs_diff(r.certificates.len())
                + g.certificates.iter().zip(&r.certificates).filter(|(a, b)| !same(a, b)).count()
                + usize::from(!same(&g.hull, &r.hull));
            let detail = format!("{} certificates, {mismatches} mismatches", r.certificates.len());
            let mut c = r.hull.clone();
            if mismatches > 0 {
                c.passed = false;
                c.witness = c.witness.or(Some(Point2::origin()));
            }
            return out.push(entry(g.level, "rebuild", &c, Some(g.hull.margin), detail));
        }
        Err(e) => (Certificate::failed(CertKind::Coverage, vec![], f64::NEG_INFINITY, Point2::origin()), e.to_string()),
    };
    out.push(entry(g.level, "rebuild", &c.0, Some(g.hull.margin), c.1));
}

/// Re-runs every check of an archive.
pub fn verify_archive(archive: &TreeArchive, resolution: f64) -> VerifyReport {
    let tree = &archive.tree;
    let mut entries = Vec::new();
    for (idx, g) in tree.generations.iter().enumerate() {
        let bad: Vec<&Certificate> = g.certificates.iter().filter(|c| !c.passed || !c.is_consistent()).collect();
        let worst = g.certificates.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
        let c = if bad.is_empty() {
            Certificate::decide(CertKind::Coverage, vec![], worst, 0.0, 0.0, 0, None)
        } else {
            Certificate::failed(CertKind::Coverage, vec![], bad[0].margin, bad[0].witness.unwrap_or_else(Point2::origin))
        };
        entries.push(entry(g.level, "stored certificates", &c, None, format!("{} records", g.certificates.len())));
        let chain = tree.hull_chain.get(idx).map_or(false, |h| h == &g.hull);
        let c = if chain { g.hull.clone() } else { Certificate::failed(CertKind::Coverage, vec![], g.hull.margin, Point2::origin()) };
        entries.push(entry(g.level, "hull chain", &c, Some(g.hull.margin), String::new()));
        verify_families(g, &mut entries);
        if !g.regions.is_empty() {
            verify_cover(tree.beta, g, resolution, archive.config.seed, &mut entries);
        }
        verify_rebuild(tree, idx, &mut entries);
    }
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| entries[a].margin.total_cmp(&entries[b].margin));
    order.truncate(5);
    let all_passed = entries.iter().all(|e| e.passed);
    let exit_code = if !all_passed {
        EXIT_FAILED
    } else if tree.status == TreeStatus::PartialWithWitness {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    };
    VerifyReport { resolution, status: tree.status, entries, worst: order, all_passed, exit_code }
}

/// Loads an archive and re-runs its checks at `resolution`, or the archived resolution.
pub fn cmd_verify(path: &Path, resolution: Option<f64>) -> Result<VerifyReport> {
    let archive = TreeArchive::load(path)?;
    let res = resolution.unwrap_or(archive.config.resolution);
    Ok(verify_archive(&archive, res))
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryReport {
    pub answer: CoverageAnswer,
    pub lines: Vec<String>,
}

pub fn query_archive(archive: &TreeArchive, z: &Point2<f64>, level: u32) -> QueryReport {
    let tree = &archive.tree;
    let answer = point_coverage_query(tree, z, level);
    let mut lines = vec![format!("z = {:?}, |z| = {:.6}, |z1| = {:.6}, |z2| = {:.6}", z.to_reals(), z.norm(), z.z1.norm(), z.z2.norm())];
    match &answer {
        CoverageAnswer::Covered(path) => {
            let g = &tree.generations[0];
            if let Some(r) = g.regions.iter().find(|r| r.contains(z)) {
                if let HullRegion::FullBidiscProduct { r1, r2 } = r {
                    lines.push(format!("bidisc |z1| <= {r1:.6}, |z2| <= {r2:.6}: slack {:.6e}", r.slack_at(z)));
                }
            }
            lines.push(format!("circle families: {} certified, hull margin {:.6e}", g.families.len(), g.hull.margin));
            for p in path {
                lines.push(p.clone());
            }
            lines.push(format!("covered at level {level}"));
        }
        CoverageAnswer::NotCovered => lines.push(format!("not covered at level {level}")),
    }
    QueryReport { answer, lines }
}

pub fn cmd_query(path: &Path, z: &Point2<f64>, level: u32) -> Result<QueryReport> {
    Ok(query_archive(&TreeArchive::load(path)?, z, level))
}
