use std::time::Instant;

use crate::error::{HullError, Result};
use crate::families::prop3_constants;
use crate::geometry::Point2;
use crate::verify::{CertKind, Certificate};

use super::cover::{bidisc_cover, build_generation_1};
use super::prop4::prop4_cover;
use super::{Budget, ClassRecord, ConstructionTree, GenerationRecord, TreeStatus};

/// Largest `eps0 / 2^k`, `k <= max_halvings`, accepted by `gate`.
pub fn choose_epsilon(eps0: f64, max_halvings: u32, mut gate: impl FnMut(f64) -> Result<bool>) -> Result<f64> {
    let mut eps = eps0;
    for _ in 0..=max_halvings {
        if gate(eps)? {
            return Ok(eps);
        }
        eps *= 0.5;
    }
    Err(HullError::SearchExhausted(max_halvings))
}

/// Parent families grouped by their common value of `s`.
fn parent_classes(prev: &GenerationRecord) -> Vec<(f64, Vec<String>)> {
    let mut out: Vec<(f64, Vec<String>)> = Vec::new();
    for fam in &prev.families {
        let s = 1.0 - fam.member(0).f0.norm();
        match out.iter_mut().find(|c| (c.0 - s).abs() <= 1e-14) {
            Some(c) => c.1.push(fam.label.clone()),
            None => out.push((s, vec![fam.label.clone()])),
        }
    }
    out
}

fn gate(name: &str, parent: &[String], detail: String) -> HullError {
    HullError::GateFailed { gate: name.into(), parent: parent.join(","), detail }
}

/// Next generation: every parent class is covered by a tangent-lattice family with two-family sub-covers with `sigma = prev.eps`.
pub fn refine_generation(prev: &GenerationRecord, eps_next: f64, budget: &Budget) -> Result<GenerationRecord> {
    let level = prev.level + 1;
    let ceiling = 0.5f64.powi(level as i32);
    let sigma = prev.eps_level;
    let mut rec = GenerationRecord {
        level,
        families: Vec::new(),
        tori: Vec::new(),
        eps_level: eps_next,
        r_level: 0.0,
        s_values: Vec::new(),
        certificates: Vec::new(),
        hull: Certificate::decide(CertKind::Coverage, vec![], 0.0, 1.0, 0.0, 0, None),
        parent_map: Vec::new(),
        regions: Vec::new(),
        classes: Vec::new(),
    };
    let mut chain = Vec::new();
    for (ci, (s, parents)) in parent_classes(prev).into_iter().enumerate() {
        let out = prop4_cover(s, sigma, eps_next, budget.b, ceiling, budget.max_classes).map_err(|e| gate("prop4", &parents, e.to_string()))?;
        if !out.complete {
            return Err(gate("lattice-classes", &parents, format!("{} classes exceed the budget of {}", out.classes_total, budget.max_classes)));
        }
        let radius = 1.0 - out.rho - prev.r_level;
        let radius_cert = Certificate::decide(CertKind::Inclusion, vec![format!("L{level}-c{ci}"), "1-rho>r".into()], radius, 1.0, 0.0, 0, None);
        if !radius_cert.passed {
            return Err(gate("radius", &parents, format!("1 - rho = {} does not exceed r = {}", 1.0 - out.rho, prev.r_level)));
        }
        let top = out.s_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top >= ceiling {
            return Err(gate("s-ceiling", &parents, format!("max s = {top} not below {ceiling}")));
        }
        // children of the class sit in {|z1 - (1 - s)| <= 2 sigma}, the parent tube in normal form
        let sub_reach = 4.0 * sigma / 3.0 + out.prop3.alpha / 3.0;
        let nesting = Certificate::combine(
            CertKind::Inclusion,
            vec![format!("L{level}-c{ci}"), "nesting".into()],
            &[
                out.prop3.containment.clone(),
                Certificate::decide(CertKind::Inclusion, vec!["subcovers".into()], 2.0 * sigma - sub_reach, sigma, 0.0, 0, None),
            ],
        );
        let first = rec.families.len();
        let mut tangent = out.prop3.tangent.clone();
        tangent.label = format!("L{level}-c{ci}-tangent");
        rec.families.push(tangent);
        for sc in &out.subcovers {
            rec.families.extend(sc.families());
        }
        rec.classes.push(ClassRecord { s, parents, families: (first..rec.families.len()).collect(), lattice_classes: out.classes_total });
        rec.s_values.extend(out.s_values.iter().copied());
        rec.r_level = rec.r_level.max(out.r_prime);
        rec.certificates.extend([out.prop3.disjointness.clone(), out.separation.clone(), nesting.clone(), radius_cert.clone()]);
        for sc in &out.subcovers {
            rec.certificates.extend([sc.cover.analytic.clone(), sc.cover.direct.clone()]);
        }
        chain.extend([out.coverage, radius_cert, nesting]);
    }
    chain.push(prev.hull.clone());
    rec.hull = Certificate::combine(CertKind::Coverage, vec![format!("level {level}"), "beta-ball".into()], &chain);
    Ok(rec)
}

fn within_tori(g: &GenerationRecord, budget: &Budget) -> Result<()> {
    match budget.max_tori {
        Some(limit) if g.torus_count() > limit => Err(HullError::GateFailed {
            gate: "torus-budget".into(),
            parent: "-".into(),
            detail: format!("{} tori exceed the budget of {limit}", g.torus_count()),
        }),
        _ => Ok(()),
    }
}

fn partial(mut tree: ConstructionTree, level: u32, e: HullError) -> ConstructionTree {
    tree.status = TreeStatus::PartialWithWitness;
    tree.witness = Some(format!("level {level}: {e}"));
    tree
}

/// Builds generations `1..=depth`; stops with a witness at the first level that cannot be certified.
pub fn build_cantor_tree(beta: f64, depth: u32, budget: Budget) -> Result<ConstructionTree> {
    if depth < 1 {
        return Err(HullError::InvalidParameter("depth must be at least 1".into()));
    }
    bidisc_cover(beta)?;
    let start = Instant::now();
    let eps1 = choose_epsilon(budget.eps0, budget.max_halvings, |e| match build_generation_1(beta, e, budget.b) {
        Ok(g) => Ok(g.all_passed()),
        Err(HullError::InvalidParameter(m)) => Err(HullError::InvalidParameter(m)),
        Err(_) => Ok(false),
    })?;
    let first = build_generation_1(beta, eps1, budget.b)?;
    let mut tree = ConstructionTree { beta, budget, hull_chain: vec![], generations: vec![], status: TreeStatus::Complete, witness: None };
    if let Err(e) = within_tori(&first, &budget) {
        return Ok(partial(tree, 1, e));
    }
    tree.hull_chain.push(first.hull.clone());
    tree.generations.push(first);
    if tree.generations[0].max_s() >= 0.5 {
        let top = tree.generations[0].max_s();
        return Ok(partial(tree, 1, HullError::GateFailed { gate: "s-ceiling".into(), parent: "-".into(), detail: format!("max s = {top}") }));
    }
    for level in 2..=depth {
        if let Some(limit) = budget.max_seconds {
            let spent = start.elapsed().as_secs_f64();
            if spent > limit {
                let e = HullError::GateFailed { gate: "time-budget".into(), parent: "-".into(), detail: format!("{spent:.1} s spent of {limit} s") };
                return Ok(partial(tree, level, e));
            }
        }
        let prev = tree.generations.last().expect("at least one generation");
        let sigma = prev.eps_level;
        let mut limits = Vec::new();
        for (s, _) in parent_classes(prev) {
            match prop3_constants(s, sigma, budget.b) {
                Ok(k) => limits.push((k.s_star, k.alpha)),
                Err(e) => return Ok(partial(tree, level, e)),
            }
        }
        let eps = match choose_epsilon(sigma / 10.0, budget.max_halvings, |e| Ok(limits.iter().all(|&(ss, al)| 2.0 * e < ss && 4.0 * e < al))) {
            Ok(e) => e,
            Err(e) => return Ok(partial(tree, level, e)),
        };
        match refine_generation(prev, eps, &budget).and_then(|g| within_tori(&g, &budget).map(|_| g)) {
            Ok(g) => {
                tree.hull_chain.push(g.hull.clone());
                tree.generations.push(g);
            }
            Err(e) => return Ok(partial(tree, level, e)),
        }
    }
    Ok(tree)
}

/// Result of [`point_coverage_query`].
#[derive(Clone, Debug, PartialEq)]
pub enum CoverageAnswer {
    /// Certificate path from the level-1 region down to the requested level.
    Covered(Vec<String>),
    NotCovered,
}

/// Whether `z` lies in a certified hull region of the given level.
///
/// Level `N >= 2` covers the level `N - 1` regions inside `r_{N-1} B̄` when its chain is certified.
pub fn point_coverage_query(tree: &ConstructionTree, z: &Point2<f64>, level: u32) -> CoverageAnswer {
    if level == 0 || level > tree.depth() || !(z.norm() <= 1.0) {
        return CoverageAnswer::NotCovered;
    }
    let first = &tree.generations[0];
    if !first.hull.passed {
        return CoverageAnswer::NotCovered;
    }
    let Some((i, region)) = first.regions.iter().enumerate().find(|(_, r)| r.contains(z)) else {
        return CoverageAnswer::NotCovered;
    };
    let mut path = vec![format!("level 1: {} {i} ({})", region.kind_name(), first.hull.subject_ids.join(" "))];
    for g in &tree.generations[1..level as usize] {
        if !g.hull.passed {
            return CoverageAnswer::NotCovered;
        }
        path.push(format!("level {}: {} classes ({})", g.level, g.classes.len(), g.hull.subject_ids.join(" ")));
    }
    CoverageAnswer::Covered(path)
}
