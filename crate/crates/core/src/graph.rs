//! Undirected labeled graphs with optional edge weights, plus PACE `.gr` I/O.

use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed .gr header: {0}")]
    MalformedHeader(String),
    #[error("bad .gr line {line}: {text}")]
    BadLine { line: usize, text: String },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge count mismatch: header declares {declared}, found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize, u64)>,
    index: FxHashMap<(usize, usize), usize>,
    labels: Vec<String>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex(String::new());
        }
        g
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.adj.push(Vec::new());
        self.labels.push(label.into());
        self.adj.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Adds `uv` with weight 1. Returns false if the edge already existed.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        self.add_weighted_edge(u, v, 1)
    }

    /// Adds a weighted edge; an existing edge is left untouched and false is returned.
    pub fn add_weighted_edge(&mut self, u: usize, v: usize, w: u64) -> bool {
        assert!(u != v, "self-loop at {u}");
        assert!(u < self.num_vertices() && v < self.num_vertices(), "edge {u}-{v} out of range");
        assert!(w >= 1, "edge weights must be positive");
        let k = key(u, v);
        if self.index.contains_key(&k) {
            return false;
        }
        self.index.insert(k, self.edges.len());
        self.edges.push((k.0, k.1, w));
        self.adj[u].push(v);
        self.adj[v].push(u);
        true
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&key(u, v))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        self.index.get(&key(u, v)).map(|&i| self.edges[i].2)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v, weight)` with `u < v`, in insertion order.
    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn is_weighted(&self) -> bool {
        self.edges.iter().any(|e| e.2 != 1)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        self.labels[v] = label.into();
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Subgraph induced by `keep` (in the given order); returns the graph and the
    /// old-to-new index map.
    pub fn induced(&self, keep: &[usize]) -> (Graph, Vec<Option<usize>>) {
        let mut map = vec![None; self.num_vertices()];
        let mut g = Graph::new();
        for &v in keep {
            map[v] = Some(g.add_vertex(self.labels[v].clone()));
        }
        for &(u, v, w) in &self.edges {
            if let (Some(a), Some(b)) = (map[u], map[v]) {
                g.add_weighted_edge(a, b, w);
            }
        }
        (g, map)
    }

    /// PACE `.gr` text (weights are not serialized). Labels go into `c label` comments.
    pub fn to_gr(&self) -> String {
        let mut out = format!("p tw {} {}\n", self.num_vertices(), self.num_edges());
        for (v, l) in self.labels.iter().enumerate() {
            if !l.is_empty() {
                writeln!(out, "c label {} {}", v + 1, l).unwrap();
            }
        }
        for &(u, v, _) in &self.edges {
            writeln!(out, "{} {}", u + 1, v + 1).unwrap();
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for (v, l) in self.labels.iter().enumerate() {
            writeln!(out, "  {} [label=\"{}\"];", v + 1, l.replace('"', "'")).unwrap();
        }
        for &(u, v, w) in &self.edges {
            if w == 1 {
                writeln!(out, "  {} -- {};", u + 1, v + 1).unwrap();
            } else {
                writeln!(out, "  {} -- {} [label=\"{}\"];", u + 1, v + 1, w).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn parse_gr(text: &str) -> Result<Graph, GraphError> {
    let mut g: Option<Graph> = None;
    let mut declared = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let bad = || GraphError::BadLine { line: idx + 1, text: raw.to_string() };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("c") {
            if let (Some(g), Some(rest)) = (g.as_mut(), rest.trim_start().strip_prefix("label ")) {
                let (v, label) = rest.split_once(' ').ok_or_else(bad)?;
                let v: usize = v.parse().map_err(|_| bad())?;
                if v == 0 || v > g.num_vertices() {
                    return Err(GraphError::VertexOutOfRange(v));
                }
                g.set_label(v - 1, label);
            }
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if g.is_some() || parts.len() != 4 || parts[1] != "tw" {
                return Err(GraphError::MalformedHeader(line.to_string()));
            }
            let n: usize = parts[2].parse().map_err(|_| GraphError::MalformedHeader(line.to_string()))?;
            declared = parts[3].parse().map_err(|_| GraphError::MalformedHeader(line.to_string()))?;
            g = Some(Graph::with_vertices(n));
            continue;
        }
        let g = g.as_mut().ok_or_else(|| GraphError::MalformedHeader("missing header".into()))?;
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        let (Some(Ok(u)), Some(Ok(v)), None) = (it.next(), it.next(), it.next()) else {
            return Err(bad());
        };
        for x in [u, v] {
            if x == 0 || x > g.num_vertices() {
                return Err(GraphError::VertexOutOfRange(x));
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !g.add_edge(u - 1, v - 1) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
    }
    let g = g.ok_or_else(|| GraphError::MalformedHeader("missing header".into()))?;
    if g.num_edges() != declared {
        return Err(GraphError::EdgeCountMismatch { declared, found: g.num_edges() });
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_deduplicated() {
        let mut g = Graph::with_vertices(3);
        assert!(g.add_edge(0, 1));
        assert!(!g.add_edge(1, 0));
        assert_eq!(g.num_edges(), 1);
        assert!(g.has_edge(1, 0));
        assert_eq!(g.neighbors(1), &[0]);
    }

    #[test]
    fn gr_round_trip() {
        let mut g = Graph::new();
        let a = g.add_vertex("IS:copy=1:path=1:pos=1");
        let b = g.add_vertex("x");
        let c = g.add_vertex("");
        g.add_edge(a, b);
        g.add_edge(c, b);
        let text = g.to_gr();
        assert!(text.starts_with("p tw 3 2\n"));
        assert!(text.contains("c label 1 IS:copy=1:path=1:pos=1\n"));
        let back = parse_gr(&text).unwrap();
        assert_eq!(back.to_gr(), text);
    }

    #[test]
    fn gr_errors() {
        assert!(matches!(parse_gr("p tw 2 1\n1 3\n"), Err(GraphError::VertexOutOfRange(3))));
        assert!(matches!(parse_gr("p tw 2 1\n1 1\n"), Err(GraphError::SelfLoop(1))));
        assert!(matches!(parse_gr("p tw 2 2\n1 2\n2 1\n"), Err(GraphError::DuplicateEdge(2, 1))));
        assert!(matches!(parse_gr("p tw 2 2\n1 2\n"), Err(GraphError::EdgeCountMismatch { .. })));
    }
}
