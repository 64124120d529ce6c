use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{HullError, Result};
use crate::families::MATERIALIZE_LIMIT;
use crate::geometry::{torus_sample, SolidTorus, TorusMesh};

use super::archive::write_atomic;
use super::TreeArchive;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Projection {
    /// Stereographic projection of the unit 3-sphere from a pole onto its orthogonal complement.
    Stereographic,
    /// Raw `(Re z1, Im z1, Re z2, Im z2)`.
    Coordinates,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExportOptions {
    pub projection: Projection,
    pub pole: [f64; 4],
    pub mesh: TorusMesh,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions { projection: Projection::Stereographic, pole: [0.0, 0.0, 0.0, 1.0], mesh: TorusMesh::new(2, 16, 16) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExportSummary {
    pub rows: u64,
    /// Sample points too close to the pole to project.
    pub skipped: u64,
}

/// Orthonormal basis of the complement of a unit vector, by Gram-Schmidt on the standard basis.
fn complement_basis(pole: [f64; 4]) -> [[f64; 4]; 3] {
    let mut basis: Vec<[f64; 4]> = Vec::new();
    let mut order: Vec<usize> = (0..4).collect();
    // start from the axes least aligned with the pole
    order.sort_by(|&a, &b| pole[a].abs().total_cmp(&pole[b].abs()));
    for &k in &order {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        for u in std::iter::once(&pole).chain(basis.iter()) {
            let d: f64 = (0..4).map(|i| v[i] * u[i]).sum();
            for i in 0..4 {
                v[i] -= d * u[i];
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 && basis.len() < 3 {
            basis.push(v.map(|x| x / n));
        }
    }
    [basis[0], basis[1], basis[2]]
}

fn unit_pole(pole: [f64; 4]) -> Result<[f64; 4]> {
    let n = pole.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return Err(HullError::InvalidParameter(format!("pole {pole:?} has no direction")));
    }
    Ok(pole.map(|x| x / n))
}

/// Stereographic image of `x` (on the unit sphere) from `pole`, or `None` at the pole.
pub fn stereographic(x: [f64; 4], pole: [f64; 4]) -> Option<[f64; 3]> {
    let p = unit_pole(pole).ok()?;
    project_with(x, p, &complement_basis(p))
}

fn project_with(x: [f64; 4], p: [f64; 4], basis: &[[f64; 4]; 3]) -> Option<[f64; 3]> {
    let h: f64 = (0..4).map(|i| x[i] * p[i]).sum();
    let denom = 1.0 - h;
    if !(denom > 1e-12) {
        return None;
    }
    Some(basis.map(|b| (0..4).map(|i| x[i] * b[i]).sum::<f64>() / denom))
}

fn export_tori(archive: &TreeArchive) -> Result<Vec<(u32, u64, SolidTorus<f64>)>> {
    let mut out = Vec::new();
    for g in &archive.tree.generations {
        if !g.tori.is_empty() {
            out.extend(g.tori.iter().enumerate().map(|(j, t)| (g.level, j as u64, *t)));
            continue;
        }
        let mut id = 0u64;
        for fam in &g.families {
            if fam.count() <= MATERIALIZE_LIMIT {
                for j in 0..fam.count() {
                    out.push((g.level, id + j, fam.torus(j)?));
                }
            }
            id += fam.count();
        }
    }
    Ok(out)
}

/// Writes one CSV row per torus sample point.
pub fn export_archive(archive: &TreeArchive, opts: &ExportOptions, out_path: &Path) -> Result<ExportSummary> {
    let pole = unit_pole(opts.pole)?;
    let basis = complement_basis(pole);
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| HullError::Io(e.to_string());
    match opts.projection {
        Projection::Stereographic => w.write_record(["level", "torus_id", "x", "y", "z"]),
        Projection::Coordinates => w.write_record(["level", "torus_id", "re_z1", "im_z1", "re_z2", "im_z2"]),
    }
    .map_err(csv_err)?;
    let mut summary = ExportSummary { rows: 0, skipped: 0 };
    for (level, id, t) in export_tori(archive)? {
        for p in torus_sample(&t, opts.mesh)?.points {
            let x = p.to_reals();
            let mut row = vec![level.to_string(), id.to_string()];
            match opts.projection {
                Projection::Coordinates => row.extend(x.iter().map(|v| v.to_string())),
                Projection::Stereographic => match project_with(x, pole, &basis) {
                    Some(y) => row.extend(y.iter().map(|v| v.to_string())),
                    None => {
                        summary.skipped += 1;
                        continue;
                    }
                },
            }
            w.write_record(&row).map_err(csv_err)?;
            summary.rows += 1;
        }
    }
    let bytes = w.into_inner().map_err(|e| HullError::Io(e.to_string()))?;
    write_atomic(out_path, &bytes)?;
    Ok(summary)
}

pub fn cmd_export(archive_path: &Path, opts: &ExportOptions, out_path: &Path) -> Result<ExportSummary> {
    export_archive(&TreeArchive::load(archive_path)?, opts, out_path)
}
