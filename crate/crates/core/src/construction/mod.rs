//! Nested generations of torus families and the certificate chain showing that their
//! polynomial hulls contain a fixed ball.

mod cover;
mod prop4;
mod tree;

pub use cover::{bidisc_cover, build_generation_1, cover_margin, cover_margin_with};
pub(crate) use cover::coordinate_pair_margin;
pub use prop4::{prop4_cover, Prop4Output, SubCover};
pub use tree::{build_cantor_tree, choose_epsilon, point_coverage_query, refine_generation, CoverageAnswer};

use serde::{Deserialize, Serialize};

use crate::families::TorusFamily;
use crate::geometry::SolidTorus;
use crate::separation::HullRegion;
use crate::verify::Certificate;

/// Parents sharing one value of `s`; their children are one normal-form solve mapped by
/// each parent's normalizing unitary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub s: f64,
    /// Labels of the parent families.
    pub parents: Vec<String>,
    /// Indices into the generation's `families`, in normal form.
    pub families: Vec<usize>,
    pub lattice_classes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub level: u32,
    pub families: Vec<TorusFamily>,
    /// Materialized tori `T(2 eps)`; empty for lazily represented levels.
    pub tori: Vec<SolidTorus<f64>>,
    pub eps_level: f64,
    pub r_level: f64,
    pub s_values: Vec<f64>,
    pub certificates: Vec<Certificate>,
    /// Combined certificate that the hull of this level contains `beta B̄`.
    pub hull: Certificate,
    /// `(child, parent)` indices for materialized children.
    pub parent_map: Vec<(u64, u64)>,
    /// Certified hull regions (level 1 only).
    pub regions: Vec<HullRegion>,
    pub classes: Vec<ClassRecord>,
}

impl GenerationRecord {
    pub fn max_s(&self) -> f64 {
        self.s_values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn torus_count(&self) -> u64 {
        self.families.iter().map(|f| f.count()).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.hull.passed && self.certificates.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeStatus {
    Complete,
    PartialWithWitness,
}

/// Resource limits and fixed constants of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    #[serde(rename = "B")]
    pub b: f64,
    /// Starting value of the first-level epsilon search.
    pub eps0: f64,
    pub max_halvings: u32,
    /// Largest number of lattice classes solved per parent class.
    pub max_classes: u64,
    /// Largest number of tori in one generation.
    pub max_tori: Option<u64>,
    /// Wall-clock limit checked before each new generation.
    pub max_seconds: Option<f64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { b: 10.0, eps0: 1e-3, max_halvings: 40, max_classes: 64, max_tori: None, max_seconds: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionTree {
    pub beta: f64,
    pub budget: Budget,
    pub generations: Vec<GenerationRecord>,
    /// One `beta`-ball certificate per generation.
    pub hull_chain: Vec<Certificate>,
    pub status: TreeStatus,
    /// Why the next level could not be built, when the tree is partial.
    pub witness: Option<String>,
}

impl ConstructionTree {
    pub fn depth(&self) -> u32 {
        self.generations.len() as u32
    }
}
