use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::PathDecomposition;
use crate::formula::FormulaError;
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("degenerate-input: {0}")]
    Degenerate(String),
    #[error("size-cap: {0}")]
    SizeCap(String),
    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),
    #[error("not-satisfying: assignment does not satisfy the formula")]
    NotSatisfying,
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("experimental: {0}")]
    Experimental(String),
}

impl From<FormulaError> for ReductionError {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::TooManyCodewords { .. } => ReductionError::SizeCap(e.to_string()),
            other => ReductionError::InvalidParameter(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    IndependentSet,
    DominatingSet,
    MaxCut,
    QColoring,
    QListColoring,
    OddCycleTransversal,
    TrianglePacking,
    PartitionIntoTriangles,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::IndependentSet,
        Kind::DominatingSet,
        Kind::MaxCut,
        Kind::QColoring,
        Kind::QListColoring,
        Kind::OddCycleTransversal,
        Kind::TrianglePacking,
        Kind::PartitionIntoTriangles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::IndependentSet => "IndependentSet",
            Kind::DominatingSet => "DominatingSet",
            Kind::MaxCut => "MaxCut",
            Kind::QColoring => "QColoring",
            Kind::QListColoring => "QListColoring",
            Kind::OddCycleTransversal => "OddCycleTransversal",
            Kind::TrianglePacking => "TrianglePacking",
            Kind::PartitionIntoTriangles => "PartitionIntoTriangles",
        }
    }

    pub fn from_name(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn default_sense(self) -> Sense {
        match self {
            Kind::IndependentSet | Kind::MaxCut | Kind::TrianglePacking => Sense::AtLeast,
            Kind::DominatingSet | Kind::OddCycleTransversal => Sense::AtMost,
            Kind::QColoring | Kind::QListColoring | Kind::PartitionIntoTriangles => Sense::Feasible,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    AtLeast,
    AtMost,
    Feasible,
}

impl Sense {
    /// Does an optimum of `value` meet `target`?
    pub fn accepts(self, value: i64, target: Option<i64>) -> bool {
        match (self, target) {
            (Sense::AtLeast, Some(t)) => value >= t,
            (Sense::AtMost, Some(t)) => value <= t,
            (Sense::Feasible, _) => true,
            (_, None) => true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMeta {
    pub n: usize,
    pub m: usize,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub t: Option<usize>,
    pub beta: Option<usize>,
    pub budget_items: Option<Vec<i64>>,
    pub mu: Option<u64>,
    pub arrow_count: Option<u64>,
    #[serde(rename = "W")]
    pub w: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub kind: Kind,
    pub graph: Graph,
    pub target: Option<i64>,
    pub sense: Sense,
    pub decomposition: PathDecomposition,
    pub claimed_width_bound: usize,
    pub meta: ReductionMeta,
    /// Admissible colors (1-based) per vertex, list coloring only.
    pub lists: Option<Vec<Vec<u32>>>,
    pub experimental: bool,
}

impl Instance {
    /// Instance over an arbitrary graph with the trivial single-bag decomposition.
    pub fn from_graph(kind: Kind, graph: Graph, target: Option<i64>) -> Self {
        let n = graph.num_vertices();
        Instance {
            kind,
            target: if kind.default_sense() == Sense::Feasible { None } else { target },
            sense: kind.default_sense(),
            decomposition: PathDecomposition::trivial(n),
            claimed_width_bound: n.saturating_sub(1),
            meta: ReductionMeta::default(),
            lists: None,
            experimental: false,
            graph,
        }
    }

    pub fn num_colors(&self) -> u32 {
        self.meta.q.unwrap_or(3)
    }

    /// Color list for `v`, defaulting to all of [q].
    pub fn list(&self, v: usize) -> Vec<u32> {
        match &self.lists {
            Some(l) => l[v].clone(),
            None => (1..=self.num_colors()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    VertexSet(Vec<usize>),
    /// Side 0 or 1 per vertex.
    Sides(Vec<u8>),
    /// 1-based color per vertex.
    Colors(Vec<u32>),
    Triangles(Vec<[usize; 3]>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("solution shape does not match {0}")]
pub struct ShapeMismatch(pub Kind);

/// Objective value of a feasible solution, `None` when infeasible. Feasibility
/// kinds report 1 for a valid witness.
pub fn objective(inst: &Instance, sol: &Solution) -> Result<Option<i64>, ShapeMismatch> {
    let g = &inst.graph;
    let n = g.num_vertices();
    let mismatch = || ShapeMismatch(inst.kind);
    let as_set = |vs: &[usize]| -> Option<Vec<bool>> {
        let mut mark = vec![false; n];
        for &v in vs {
            if v >= n || mark[v] {
                return None;
            }
            mark[v] = true;
        }
        Some(mark)
    };
    Ok(match (inst.kind, sol) {
        (Kind::IndependentSet, Solution::VertexSet(vs)) => as_set(vs)
            .filter(|mark| g.edges().iter().all(|&(u, v, _)| !(mark[u] && mark[v])))
            .map(|_| vs.len() as i64),
        (Kind::DominatingSet, Solution::VertexSet(vs)) => as_set(vs)
            .filter(|mark| (0..n).all(|v| mark[v] || g.neighbors(v).iter().any(|&u| mark[u])))
            .map(|_| vs.len() as i64),
        (Kind::OddCycleTransversal, Solution::VertexSet(vs)) => {
            as_set(vs).filter(|mark| two_color(g, mark).is_some()).map(|_| vs.len() as i64)
        }
        (Kind::MaxCut, Solution::Sides(sides)) => {
            if sides.len() != n || sides.iter().any(|&s| s > 1) {
                None
            } else {
                Some(
                    g.edges()
                        .iter()
                        .filter(|&&(u, v, _)| sides[u] != sides[v])
                        .map(|&(_, _, w)| w as i64)
                        .sum(),
                )
            }
        }
        (Kind::QColoring | Kind::QListColoring, Solution::Colors(cs)) => {
            let q = inst.num_colors();
            let ok = cs.len() == n
                && cs.iter().all(|&c| c >= 1 && c <= q)
                && (0..n).all(|v| inst.lists.as_ref().is_none_or(|l| l[v].contains(&cs[v])))
                && g.edges().iter().all(|&(u, v, _)| cs[u] != cs[v]);
            ok.then_some(1)
        }
        (Kind::TrianglePacking | Kind::PartitionIntoTriangles, Solution::Triangles(ts)) => {
            let flat: Vec<usize> = ts.iter().flatten().copied().collect();
            let disjoint = as_set(&flat).is_some();
            let triangles = ts
                .iter()
                .all(|&[a, b, c]| g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c));
            let covering = inst.kind == Kind::TrianglePacking || flat.len() == n;
            let value = if inst.kind == Kind::TrianglePacking { ts.len() as i64 } else { 1 };
            (disjoint && triangles && covering).then_some(value)
        }
        _ => return Err(mismatch()),
    })
}

/// True iff `sol` is feasible and meets the instance target under its sense.
pub fn check_solution(inst: &Instance, sol: &Solution) -> Result<bool, ShapeMismatch> {
    Ok(objective(inst, sol)?.is_some_and(|v| inst.sense.accepts(v, inst.target)))
}

/// BFS 2-coloring of the graph minus `removed`; `None` if an odd cycle remains.
pub fn two_color(g: &Graph, removed: &[bool]) -> Option<Vec<u8>> {
    let n = g.num_vertices();
    let mut side = vec![u8::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if removed[s] || side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if removed[v] {
                    continue;
                }
                if side[v] == u8::MAX {
                    side[v] = 1 - side[u];
                    queue.push_back(v);
                } else if side[v] == side[u] {
                    return None;
                }
            }
        }
    }
    Some(side)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        let mut g = Graph::with_vertices(3);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(0, 2);
        g
    }

    #[test]
    fn check_examples() {
        let ds = Instance::from_graph(Kind::DominatingSet, k3(), Some(1));
        assert_eq!(check_solution(&ds, &Solution::VertexSet(vec![1])), Ok(true));
        let is = Instance::from_graph(Kind::IndependentSet, k3(), Some(1));
        assert_eq!(check_solution(&is, &Solution::VertexSet(vec![0, 1])), Ok(false));
        assert!(check_solution(&is, &Solution::Sides(vec![0, 1, 0])).is_err());
        let part = Instance::from_graph(Kind::PartitionIntoTriangles, k3(), None);
        assert_eq!(check_solution(&part, &Solution::Triangles(vec![[0, 1, 2]])), Ok(true));
        let oct = Instance::from_graph(Kind::OddCycleTransversal, k3(), Some(1));
        assert_eq!(check_solution(&oct, &Solution::VertexSet(vec![2])), Ok(true));
        assert_eq!(check_solution(&oct, &Solution::VertexSet(vec![])), Ok(false));
    }

    #[test]
    fn coloring_respects_lists() {
        let mut g = Graph::with_vertices(2);
        g.add_edge(0, 1);
        let mut inst = Instance::from_graph(Kind::QListColoring, g, None);
        inst.lists = Some(vec![vec![1], vec![1, 2]]);
        assert_eq!(check_solution(&inst, &Solution::Colors(vec![1, 2])), Ok(true));
        assert_eq!(check_solution(&inst, &Solution::Colors(vec![2, 1])), Ok(false));
    }
}
