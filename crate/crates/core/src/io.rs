//! JSON and CSV file formats.
//!
//! Floats are written in Rust's shortest round-trip form, so reading a file
//! back gives bit-identical coordinates.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::constructions::SweepRow;
use crate::dilation::{DilationReport, PairDilation};
use crate::error::{Error, Result};
use crate::experiments::TrendResult;
use crate::triangulation::{PointSet, Triangulation};

#[derive(Serialize, Deserialize)]
struct PointsFile {
    points: PointSet,
}

#[derive(Serialize, Deserialize)]
struct TrianglesFile {
    triangles: Triangulation,
}

fn format_err(what: &str, e: serde_json::Error) -> Error {
    Error::Format(format!("{what}: {e}"))
}

/// `{"points": [[x, y], ...]}`
///
/// ```
/// use delaunay_dilation::io::{points_from_json, points_to_json};
/// use delaunay_dilation::triangulation::PointSet;
/// let ps = PointSet::from_xy(&[(0.1, 0.2), (1.0 / 3.0, -0.0), (5e-300, 7.0)]).unwrap();
/// assert_eq!(points_from_json(&points_to_json(&ps)).unwrap(), ps);
/// ```
pub fn points_to_json(ps: &PointSet) -> String {
    serde_json::to_string(&PointsFile { points: ps.clone() }).expect("finite coordinates serialize")
}

pub fn points_from_json(s: &str) -> Result<PointSet> {
    serde_json::from_str::<PointsFile>(s).map(|f| f.points).map_err(|e| format_err("point set", e))
}

/// `{"triangles": [[i, j, k], ...]}`
pub fn triangulation_to_json(t: &Triangulation) -> String {
    serde_json::to_string(&TrianglesFile { triangles: t.clone() }).expect("indices serialize")
}

/// Reads a triangle list. The result is not checked against any point set;
/// use [`Triangulation::from_triangles`] or [`Triangulation::validate`].
pub fn triangulation_from_json(s: &str) -> Result<Triangulation> {
    serde_json::from_str::<TrianglesFile>(s)
        .map(|f| f.triangles)
        .map_err(|e| format_err("triangulation", e))
}

#[derive(Serialize)]
struct ReportFile<'a> {
    max_dilation: f64,
    witness: [usize; 2],
    path: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    pairs: Option<&'a [PairDilation]>,
}

/// `{"max_dilation": x, "witness": [i, j], "path": [...], "pairs": [...]}`,
/// with `pairs` present only when the report carries the table.
pub fn report_to_json(r: &DilationReport) -> String {
    let file = ReportFile {
        max_dilation: r.max_dilation,
        witness: [r.witness.0, r.witness.1],
        path: &r.witness_path,
        pairs: r.pairs.as_deref(),
    };
    serde_json::to_string_pretty(&file).expect("report serializes")
}

/// Per-pair table with columns `u,v,path_length,distance,dilation`.
pub fn pairs_to_csv(pairs: &[PairDilation]) -> String {
    let mut out = String::from("u,v,path_length,distance,dilation\n");
    for p in pairs {
        writeln!(out, "{},{},{},{},{}", p.u, p.v, p.path_length, p.distance, p.dilation).unwrap();
    }
    out
}

/// Sweep table with columns `d,ell,t`.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("d,ell,t\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.d, r.ell, r.t).unwrap();
    }
    out
}

/// Trial table with columns `n,trial,seed,max_dilation,witness_i,witness_j`.
pub fn trend_to_csv(r: &TrendResult) -> String {
    let mut out = String::from("n,trial,seed,max_dilation,witness_i,witness_j\n");
    for s in &r.samples {
        writeln!(out, "{},{},{},{},{},{}", s.n, s.trial, s.seed, s.max_dilation, s.witness.0, s.witness.1).unwrap();
    }
    out
}
