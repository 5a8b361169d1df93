//! Triangle Packing: one fan-shaped path per variable, one edge per clause copy
//! that closes a triangle with a fan vertex of a satisfying literal. The
//! partition variant pads fan vertices with chained 4-cliques.

use crate::decomposition::Sweep;
use crate::formula::{Assignment, CnfFormula};
use crate::graph::Graph;

use super::instance::{Instance, Kind, ReductionError, ReductionMeta, Sense, Solution};
use super::require_clauses;

#[derive(Debug, Clone)]
pub struct Layout {
    /// `paths[i]` has 2m(n+1)+1 vertices.
    pub paths: Vec<Vec<usize>>,
    /// `fans[i][l]` is adjacent to `paths[i][l]` and `paths[i][l+1]`.
    pub fans: Vec<Vec<usize>>,
    /// `clause_pairs[r][j]`, r in 0..=n.
    pub clause_pairs: Vec<Vec<[usize; 2]>>,
}

/// 0-based fan index hit by a literal in clause copy (r, j) (both 0-based).
pub fn fan_slot(m: usize, r: usize, j: usize, positive: bool) -> usize {
    let l = 2 * (m * r + j + 1);
    if positive {
        l - 1
    } else {
        l - 2
    }
}

fn build(phi: &CnfFormula) -> (Graph, Layout) {
    let (n, m) = (phi.num_vars, phi.num_clauses());
    let len = 2 * m * (n + 1) + 1;
    let mut g = Graph::new();
    let mut paths = Vec::new();
    let mut fans = Vec::new();
    for i in 1..=n {
        let path: Vec<usize> = (1..=len).map(|l| g.add_vertex(format!("TP:var={i}:p={l}"))).collect();
        let fan: Vec<usize> = (1..len).map(|l| g.add_vertex(format!("TP:var={i}:t={l}"))).collect();
        for l in 0..len - 1 {
            g.add_edge(path[l], path[l + 1]);
            g.add_edge(fan[l], path[l]);
            g.add_edge(fan[l], path[l + 1]);
        }
        paths.push(path);
        fans.push(fan);
    }
    let mut clause_pairs = Vec::new();
    for r in 0..=n {
        let mut row = Vec::new();
        for (j, clause) in phi.clauses.iter().enumerate() {
            let c = g.add_vertex(format!("TP:clause={}:copy={r}:c", j + 1));
            let d = g.add_vertex(format!("TP:clause={}:copy={r}:d", j + 1));
            g.add_edge(c, d);
            for l in &clause.literals {
                let f = fans[l.var - 1][fan_slot(m, r, j, l.positive)];
                g.add_edge(c, f);
                g.add_edge(d, f);
            }
            row.push([c, d]);
        }
        clause_pairs.push(row);
    }
    (g, Layout { paths, fans, clause_pairs })
}

/// Round l covers fans 2l, 2l+1 (0-based) of every variable. `stage(s, i, l, before)`
/// runs before and after variable i's fans are handled.
fn sweep(lay: &Layout, m: usize, mut stage: impl FnMut(&mut Sweep, usize, usize, bool)) -> Sweep {
    let n = lay.paths.len();
    let mut s = Sweep::new();
    for path in &lay.paths {
        s.intro(path[0]);
    }
    for l in 0..m * (n + 1) {
        let [c, d] = lay.clause_pairs[l / m][l % m];
        s.intro(c);
        s.intro(d);
        for i in 0..n {
            let (path, fan) = (&lay.paths[i], &lay.fans[i]);
            stage(&mut s, i, l, true);
            s.intro(fan[2 * l]);
            s.intro(path[2 * l + 1]);
            s.forget(path[2 * l]);
            s.forget(fan[2 * l]);
            s.intro(fan[2 * l + 1]);
            s.intro(path[2 * l + 2]);
            s.forget(path[2 * l + 1]);
            s.forget(fan[2 * l + 1]);
            stage(&mut s, i, l, false);
        }
        s.forget(c);
        s.forget(d);
    }
    s
}

pub fn reduce_triangle_packing(phi: &CnfFormula) -> Result<Instance, ReductionError> {
    require_clauses(phi)?;
    let (n, m) = (phi.num_vars, phi.num_clauses());
    let (graph, lay) = build(phi);
    let decomposition = sweep(&lay, m, |_, _, _, _| {}).finish();
    Ok(Instance {
        kind: Kind::TrianglePacking,
        graph,
        target: Some((m * n * (n + 1) + m * (n + 1)) as i64),
        sense: Sense::AtLeast,
        decomposition,
        claimed_width_bound: n + 10,
        meta: ReductionMeta { n, m, ..Default::default() },
        lists: None,
        experimental: false,
    })
}

/// Recovers the layout of a packing instance from its vertex labels.
fn layout_from_labels(inst: &Instance) -> Result<Layout, ReductionError> {
    let (n, m) = (inst.meta.n, inst.meta.m);
    let ids: rustc_hash::FxHashMap<&str, usize> =
        inst.graph.labels().iter().enumerate().map(|(v, l)| (l.as_str(), v)).collect();
    let get = |label: String| {
        ids.get(label.as_str())
            .copied()
            .ok_or_else(|| ReductionError::Mismatch(format!("missing vertex {label}")))
    };
    let len = 2 * m * (n + 1) + 1;
    let mut lay = Layout { paths: Vec::new(), fans: Vec::new(), clause_pairs: Vec::new() };
    for i in 1..=n {
        lay.paths.push((1..=len).map(|l| get(format!("TP:var={i}:p={l}"))).collect::<Result<_, _>>()?);
        lay.fans.push((1..len).map(|l| get(format!("TP:var={i}:t={l}"))).collect::<Result<_, _>>()?);
    }
    for r in 0..=n {
        let row = (1..=m)
            .map(|j| Ok([get(format!("TP:clause={j}:copy={r}:c"))?, get(format!("TP:clause={j}:copy={r}:d"))?]))
            .collect::<Result<_, ReductionError>>()?;
        lay.clause_pairs.push(row);
    }
    Ok(lay)
}

/// Adds the 4-cliques Q_i^l next to fans 2l-1, 2l of each variable, chained
/// between consecutive variables; the last variable's cliques lose
/// (2n+2 mod 3) vertices.
pub fn to_partition(inst: &Instance) -> Result<Instance, ReductionError> {
    if inst.kind != Kind::TrianglePacking {
        return Err(ReductionError::Mismatch(format!("expected a packing instance, got {}", inst.kind)));
    }
    let (n, m) = (inst.meta.n, inst.meta.m);
    let lay = layout_from_labels(inst)?;
    let mut g = inst.graph.clone();
    let removed = (2 * n + 2) % 3;
    let rounds = m * (n + 1);
    let mut cliques: Vec<Vec<Vec<usize>>> = Vec::new();
    for i in 0..n {
        let size = if i + 1 == n { 4 - removed } else { 4 };
        let row: Vec<Vec<usize>> = (0..rounds)
            .map(|l| {
                let q: Vec<usize> =
                    (1..=size).map(|k| g.add_vertex(format!("TP:var={}:Q={}:{k}", i + 1, l + 1))).collect();
                for a in 0..q.len() {
                    for b in a + 1..q.len() {
                        g.add_edge(q[a], q[b]);
                    }
                    g.add_edge(q[a], lay.fans[i][2 * l]);
                    g.add_edge(q[a], lay.fans[i][2 * l + 1]);
                }
                q
            })
            .collect();
        cliques.push(row);
    }
    for i in 0..n.saturating_sub(1) {
        for l in 0..rounds {
            for &a in &cliques[i][l] {
                for &b in &cliques[i + 1][l] {
                    g.add_edge(a, b);
                }
            }
        }
    }
    let decomposition = sweep(&lay, m, |s, i, l, before| {
        if before {
            if i == 0 {
                s.intro_all(cliques[0][l].iter().copied());
            }
            return;
        }
        if i + 1 < n {
            s.intro_all(cliques[i + 1][l].iter().copied());
        }
        s.forget_all(cliques[i][l].iter().copied());
    })
    .finish();
    Ok(Instance {
        kind: Kind::PartitionIntoTriangles,
        graph: g,
        target: None,
        sense: Sense::Feasible,
        decomposition,
        claimed_width_bound: n + 10,
        meta: ReductionMeta { n, m, ..Default::default() },
        lists: None,
        experimental: true,
    })
}

pub(crate) fn witness(phi: &CnfFormula, tau: &Assignment) -> Result<Solution, ReductionError> {
    let (_, lay) = build(phi);
    let m = phi.num_clauses();
    let mut tris = Vec::new();
    for (i, (path, fan)) in lay.paths.iter().zip(&lay.fans).enumerate() {
        // True: {t_{2l-1}, p_{2l-1}, p_{2l}}; false: {t_{2l}, p_{2l}, p_{2l+1}} (1-based).
        let shift = if tau.values[i] { 0 } else { 1 };
        for l in 0..fan.len() / 2 {
            let k = 2 * l + shift;
            tris.push([fan[k], path[k], path[k + 1]]);
        }
    }
    for (r, row) in lay.clause_pairs.iter().enumerate() {
        for (j, &[c, d]) in row.iter().enumerate() {
            let lit = phi.clauses[j]
                .literals
                .iter()
                .find(|l| l.is_true_under(tau.value(l.var)))
                .ok_or(ReductionError::NotSatisfying)?;
            tris.push([c, d, lay.fans[lit.var - 1][fan_slot(m, r, j, lit.positive)]]);
        }
    }
    Ok(Solution::Triangles(tris))
}
