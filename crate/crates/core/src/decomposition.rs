//! Path decompositions: validation, normalization to introduce/forget form,
//! PACE `.td` I/O, and a sweep builder the reductions use to emit bags.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("vertex {vertex} in bag {bag} is out of range")]
    VertexOutOfRange { bag: usize, vertex: usize },
    #[error("vertex {vertex} repeated in bag {bag}")]
    RepeatedVertex { bag: usize, vertex: usize },
    #[error("vertex {0} is not covered by any bag")]
    Uncovered(usize),
    #[error("edge {{{0},{1}}} uncovered")]
    EdgeUncovered(usize, usize),
    #[error("bags containing vertex {0} are not contiguous")]
    NotContiguous(usize),
    #[error("malformed .td: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathDecomposition {
    pub bags: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Vertex plus its neighbors already live at this point.
    Introduce { vertex: usize, earlier_neighbors: Vec<usize> },
    Forget(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NicePathDecomposition {
    pub steps: Vec<Step>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<Vec<usize>>) -> Self {
        PathDecomposition { bags }
    }

    pub fn trivial(n: usize) -> Self {
        PathDecomposition { bags: vec![(0..n).collect()] }
    }

    /// Max bag size minus one; an empty decomposition has width 0 by convention.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn validate(&self, g: &Graph) -> Result<usize, DecompositionError> {
        let n = g.num_vertices();
        let mut first = vec![usize::MAX; n];
        let mut last = vec![0; n];
        let mut count = vec![0usize; n];
        let mut seen_in_bag = vec![usize::MAX; n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(DecompositionError::VertexOutOfRange { bag: i, vertex: v });
                }
                if seen_in_bag[v] == i {
                    return Err(DecompositionError::RepeatedVertex { bag: i, vertex: v });
                }
                seen_in_bag[v] = i;
                first[v] = first[v].min(i);
                last[v] = i;
                count[v] += 1;
            }
        }
        for v in 0..n {
            if count[v] == 0 {
                return Err(DecompositionError::Uncovered(v));
            }
            if count[v] != last[v] - first[v] + 1 {
                return Err(DecompositionError::NotContiguous(v));
            }
        }
        for &(u, v, _) in g.edges() {
            if first[u].max(first[v]) > last[u].min(last[v]) {
                return Err(DecompositionError::EdgeUncovered(u, v));
            }
        }
        Ok(self.width())
    }

    pub fn nicify(&self, g: &Graph) -> Result<NicePathDecomposition, DecompositionError> {
        self.validate(g)?;
        let n = g.num_vertices();
        let mut live = vec![false; n];
        let mut steps = Vec::with_capacity(2 * n);
        let introduce = |v: usize, live: &mut Vec<bool>, steps: &mut Vec<Step>| {
            let earlier_neighbors = g.neighbors(v).iter().copied().filter(|&u| live[u]).collect();
            live[v] = true;
            steps.push(Step::Introduce { vertex: v, earlier_neighbors });
        };
        let sorted = |b: &[usize]| {
            let mut b = b.to_vec();
            b.sort_unstable();
            b
        };
        let mut prev: Vec<usize> = Vec::new();
        for bag in &self.bags {
            let bag = sorted(bag);
            let in_next: BTreeSet<usize> = bag.iter().copied().collect();
            for &v in &prev {
                if !in_next.contains(&v) {
                    live[v] = false;
                    steps.push(Step::Forget(v));
                }
            }
            for &v in &bag {
                if !live[v] {
                    introduce(v, &mut live, &mut steps);
                }
            }
            prev = bag;
        }
        for &v in &prev {
            steps.push(Step::Forget(v));
        }
        Ok(NicePathDecomposition { steps })
    }

    pub fn to_td(&self, num_vertices: usize) -> String {
        let mut out = format!("s td {} {} {}\n", self.bags.len(), self.width() + 1, num_vertices);
        for (i, bag) in self.bags.iter().enumerate() {
            write!(out, "b {}", i + 1).unwrap();
            for v in bag {
                write!(out, " {}", v + 1).unwrap();
            }
            out.push('\n');
        }
        for i in 1..self.bags.len() {
            writeln!(out, "{} {}", i, i + 1).unwrap();
        }
        out
    }
}

/// Parses `.td` text. The bag graph must be the path 1-2-...-k.
pub fn parse_td(text: &str) -> Result<PathDecomposition, DecompositionError> {
    let bad = |s: &str| DecompositionError::Malformed(s.to_string());
    let mut num_bags = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut tree_edges = Vec::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad(raw));
        match parts[0] {
            "s" => {
                if parts.len() != 5 || parts[1] != "td" || num_bags.is_some() {
                    return Err(bad(raw));
                }
                let k = num(parts[2])?;
                num_bags = Some(k);
                bags = vec![None; k];
            }
            "b" => {
                let i = num(parts.get(1).ok_or_else(|| bad(raw))?)?;
                if i == 0 || i > bags.len() || bags[i - 1].is_some() {
                    return Err(bad(raw));
                }
                let vs = parts[2..]
                    .iter()
                    .map(|s| num(s).and_then(|v| v.checked_sub(1).ok_or_else(|| bad(raw))))
                    .collect::<Result<Vec<_>, _>>()?;
                bags[i - 1] = Some(vs);
            }
            _ => {
                if parts.len() != 2 {
                    return Err(bad(raw));
                }
                tree_edges.push((num(parts[0])?, num(parts[1])?));
            }
        }
    }
    let k = num_bags.ok_or_else(|| bad("missing `s td` header"))?;
    let mut sorted: Vec<(usize, usize)> =
        tree_edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    sorted.sort_unstable();
    let expected: Vec<(usize, usize)> = (1..k).map(|i| (i, i + 1)).collect();
    if sorted != expected {
        return Err(bad("bag graph is not the path 1-2-...-k"));
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| DecompositionError::Malformed(format!("bag {} missing", i + 1))))
        .collect::<Result<_, _>>()?;
    Ok(PathDecomposition { bags })
}

impl NicePathDecomposition {
    /// Largest live set over the sequence.
    pub fn max_live(&self) -> usize {
        let (mut live, mut best) = (0usize, 0usize);
        for s in &self.steps {
            match s {
                Step::Introduce { .. } => {
                    live += 1;
                    best = best.max(live);
                }
                Step::Forget(_) => live -= 1,
            }
        }
        best
    }

    /// Same introduction order, but every vertex is forgotten as soon as all
    /// of its neighbors have been introduced. Live sets only shrink.
    pub fn eager_forget(&self, g: &Graph) -> NicePathDecomposition {
        let n = g.num_vertices();
        let mut pending: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let mut live = vec![false; n];
        let mut steps = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            let Step::Introduce { vertex: v, .. } = s else { continue };
            let v = *v;
            let earlier_neighbors: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| live[u]).collect();
            live[v] = true;
            steps.push(Step::Introduce { vertex: v, earlier_neighbors: earlier_neighbors.clone() });
            let mut done: Vec<usize> = earlier_neighbors;
            for &u in &done {
                pending[u] -= 1;
            }
            pending[v] -= g.neighbors(v).iter().filter(|&&u| live[u] && u != v).count();
            done.push(v);
            done.sort_unstable();
            for u in done {
                if pending[u] == 0 && live[u] {
                    live[u] = false;
                    steps.push(Step::Forget(u));
                }
            }
        }
        for v in 0..n {
            if live[v] {
                steps.push(Step::Forget(v));
            }
        }
        NicePathDecomposition { steps }
    }
}

/// Records introduce/forget events and turns them into bags: a bag is emitted
/// with the current live set whenever a forget follows at least one introduce.
#[derive(Debug, Default)]
pub struct Sweep {
    live: BTreeSet<usize>,
    bags: Vec<Vec<usize>>,
    dirty: bool,
}

impl Sweep {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intro(&mut self, v: usize) {
        assert!(self.live.insert(v), "vertex {v} introduced twice");
        self.dirty = true;
    }

    pub fn intro_all(&mut self, vs: impl IntoIterator<Item = usize>) {
        for v in vs {
            self.intro(v);
        }
    }

    pub fn forget(&mut self, v: usize) {
        if self.dirty {
            self.bags.push(self.live.iter().copied().collect());
            self.dirty = false;
        }
        assert!(self.live.remove(&v), "vertex {v} forgotten while not live");
    }

    pub fn forget_all(&mut self, vs: impl IntoIterator<Item = usize>) {
        for v in vs {
            self.forget(v);
        }
    }

    pub fn is_live(&self, v: usize) -> bool {
        self.live.contains(&v)
    }

    pub fn live_count(&self) -> usize {
        self.live.len()
    }

    /// Forgets everything still live and returns the bag sequence.
    pub fn finish(mut self) -> PathDecomposition {
        let rest: Vec<usize> = self.live.iter().copied().collect();
        self.forget_all(rest);
        PathDecomposition { bags: self.bags }
    }
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
    fn validation_examples() {
        assert_eq!(PathDecomposition::new(vec![vec![0, 1, 2]]).validate(&k3()), Ok(2));
        let mut path = Graph::with_vertices(3);
        path.add_edge(0, 1);
        path.add_edge(1, 2);
        assert_eq!(PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]).validate(&path), Ok(1));
        assert_eq!(
            PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]).validate(&k3()),
            Err(DecompositionError::EdgeUncovered(0, 2))
        );
        assert_eq!(
            PathDecomposition::new(vec![vec![0, 1], vec![2], vec![0]]).validate(&Graph::with_vertices(3)),
            Err(DecompositionError::NotContiguous(0))
        );
        assert_eq!(
            PathDecomposition::new(vec![vec![0, 1]]).validate(&Graph::with_vertices(3)),
            Err(DecompositionError::Uncovered(2))
        );
    }

    #[test]
    fn nicify_examples() {
        let mut path = Graph::with_vertices(3);
        path.add_edge(0, 1);
        path.add_edge(1, 2);
        let nice = PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]).nicify(&path).unwrap();
        let intro = |v, e: &[usize]| Step::Introduce { vertex: v, earlier_neighbors: e.to_vec() };
        assert_eq!(
            nice.steps,
            vec![intro(0, &[]), intro(1, &[0]), Step::Forget(0), intro(2, &[1]), Step::Forget(1), Step::Forget(2)]
        );
        let nice = PathDecomposition::trivial(3).nicify(&k3()).unwrap();
        assert_eq!(nice.steps.len(), 6);
        assert_eq!(nice.max_live(), 3);
    }

    #[test]
    fn td_round_trip() {
        let d = PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]);
        let text = d.to_td(3);
        assert_eq!(text, "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
        assert_eq!(parse_td(&text).unwrap(), d);
        assert!(parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n").is_err());
    }

    #[test]
    fn sweep_emits_peak_bags() {
        let mut s = Sweep::new();
        s.intro(0);
        s.intro(1);
        s.forget(0);
        s.intro(2);
        let d = s.finish();
        assert_eq!(d.bags, vec![vec![0, 1], vec![1, 2]]);
    }
}
