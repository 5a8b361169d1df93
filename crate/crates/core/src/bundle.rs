//! Instance bundles on disk: `<name>.gr`, `<name>.td`, `<name>.json`, plus
//! witness files. Vertex numbers in every file are 1-based.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{parse_td, DecompositionError};
use crate::graph::{parse_gr, GraphError};
use crate::reductions::{Instance, Kind, ReductionMeta, Sense, Solution};

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("io: {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid-bundle: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid-bundle: {0}")]
    Decomposition(#[from] DecompositionError),
    #[error("invalid-bundle: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid-bundle: {0}")]
    Inconsistent(String),
}

impl BundleError {
    pub fn category(&self) -> &'static str {
        match self {
            BundleError::Io { .. } => "io",
            _ => "invalid-bundle",
        }
    }
}

/// The `.json` part of a bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleHeader {
    pub kind: Kind,
    pub sense: Sense,
    pub target: Option<i64>,
    pub width_bound: usize,
    #[serde(flatten)]
    pub meta: ReductionMeta,
    #[serde(default)]
    pub experimental: bool,
    pub labels: Vec<String>,
    /// Per-vertex color lists, list coloring only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lists: Option<Vec<Vec<u32>>>,
}

impl BundleHeader {
    pub fn of(inst: &Instance) -> Self {
        BundleHeader {
            kind: inst.kind,
            sense: inst.sense,
            target: inst.target,
            width_bound: inst.claimed_width_bound,
            meta: inst.meta.clone(),
            experimental: inst.experimental,
            labels: inst.graph.labels().to_vec(),
            lists: inst.lists.clone(),
        }
    }
}

/// Paths of the three bundle files for `base` (extension ignored).
pub fn bundle_paths(base: &Path) -> [PathBuf; 3] {
    ["gr", "td", "json"].map(|ext| base.with_extension(ext))
}

fn write(path: &Path, text: &str) -> Result<(), BundleError> {
    fs::write(path, text).map_err(|source| BundleError::Io { path: path.to_path_buf(), source })
}

fn read(path: &Path) -> Result<String, BundleError> {
    fs::read_to_string(path).map_err(|source| BundleError::Io { path: path.to_path_buf(), source })
}

pub fn header_json(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&BundleHeader::of(inst)).expect("header serializes");
    s.push('\n');
    s
}

/// Writes `dir/name.{gr,td,json}` and returns the base path.
pub fn write_bundle(inst: &Instance, dir: &Path, name: &str) -> Result<PathBuf, BundleError> {
    fs::create_dir_all(dir).map_err(|source| BundleError::Io { path: dir.to_path_buf(), source })?;
    let base = dir.join(name);
    let [gr, td, json] = bundle_paths(&base);
    write(&gr, &inst.graph.to_gr())?;
    write(&td, &inst.decomposition.to_td(inst.graph.num_vertices()))?;
    write(&json, &header_json(inst))?;
    Ok(base)
}

/// Reads a bundle from any of its three paths (or the common stem) and checks
/// that the parts fit together, including decomposition validity.
pub fn read_bundle(base: &Path) -> Result<Instance, BundleError> {
    let [gr, td, json] = bundle_paths(base);
    let mut graph = parse_gr(&read(&gr)?)?;
    let decomposition = parse_td(&read(&td)?)?;
    let header: BundleHeader = serde_json::from_str(&read(&json)?)?;
    let n = graph.num_vertices();
    if header.labels.len() != n {
        return Err(BundleError::Inconsistent(format!("{} labels for {n} vertices", header.labels.len())));
    }
    if let Some(lists) = &header.lists {
        if lists.len() != n {
            return Err(BundleError::Inconsistent(format!("{} color lists for {n} vertices", lists.len())));
        }
    }
    if header.kind.default_sense() != header.sense {
        return Err(BundleError::Inconsistent(format!("sense {:?} does not fit {}", header.sense, header.kind)));
    }
    for (v, l) in header.labels.iter().enumerate() {
        graph.set_label(v, l.clone());
    }
    decomposition.validate(&graph)?;
    Ok(Instance {
        kind: header.kind,
        graph,
        target: header.target,
        sense: header.sense,
        decomposition,
        claimed_width_bound: header.width_bound,
        meta: header.meta,
        lists: header.lists,
        experimental: header.experimental,
    })
}

/// Witness file contents, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessFile {
    VertexSet(Vec<usize>),
    Sides(Vec<u8>),
    Colors(Vec<u32>),
    Triangles(Vec<[usize; 3]>),
}

impl From<&Solution> for WitnessFile {
    fn from(s: &Solution) -> Self {
        match s {
            Solution::VertexSet(vs) => WitnessFile::VertexSet(vs.iter().map(|v| v + 1).collect()),
            Solution::Sides(s) => WitnessFile::Sides(s.clone()),
            Solution::Colors(c) => WitnessFile::Colors(c.clone()),
            Solution::Triangles(ts) => WitnessFile::Triangles(ts.iter().map(|t| t.map(|v| v + 1)).collect()),
        }
    }
}

impl WitnessFile {
    pub fn to_solution(&self) -> Result<Solution, BundleError> {
        let zero = |v: usize| v.checked_sub(1).ok_or_else(|| BundleError::Inconsistent("vertex 0 in witness".into()));
        Ok(match self {
            WitnessFile::VertexSet(vs) => Solution::VertexSet(vs.iter().map(|&v| zero(v)).collect::<Result<_, _>>()?),
            WitnessFile::Sides(s) => Solution::Sides(s.clone()),
            WitnessFile::Colors(c) => Solution::Colors(c.clone()),
            WitnessFile::Triangles(ts) => Solution::Triangles(
                ts.iter()
                    .map(|t| Ok([zero(t[0])?, zero(t[1])?, zero(t[2])?]))
                    .collect::<Result<_, BundleError>>()?,
            ),
        })
    }
}

pub fn write_witness(path: &Path, sol: &Solution) -> Result<(), BundleError> {
    let mut s = serde_json::to_string(&WitnessFile::from(sol))?;
    s.push('\n');
    write(path, &s)
}

pub fn read_witness(path: &Path) -> Result<Solution, BundleError> {
    let w: WitnessFile = serde_json::from_str(&read(path)?)?;
    w.to_solution()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::CnfFormula;
    use crate::reductions::{reduce, Problem};

    #[test]
    fn header_field_names() {
        let phi = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]);
        let inst = reduce(Problem::MaxCut, &phi, 1, 3).unwrap();
        let v: serde_json::Value = serde_json::from_str(&header_json(&inst)).unwrap();
        for key in ["kind", "sense", "target", "width_bound", "n", "m", "p", "q", "t", "beta", "budget_items", "mu", "arrow_count", "W"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["kind"], "MaxCut");
        assert_eq!(v["sense"], "at_least");
    }

    #[test]
    fn witness_is_one_based() {
        let w = WitnessFile::from(&Solution::VertexSet(vec![0, 4]));
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"vertex_set":[1,5]}"#);
        assert_eq!(w.to_solution().unwrap(), Solution::VertexSet(vec![0, 4]));
        assert!(WitnessFile::VertexSet(vec![0]).to_solution().is_err());
    }
}
