//! Max Cut: a weighted construction with one odd cycle per clause, and the
//! expansion of weighted edges into bundles of three-edge paths.

use crate::decomposition::{PathDecomposition, Sweep};
use crate::formula::{Assignment, CnfFormula};
use crate::graph::Graph;

use super::instance::{Instance, Kind, ReductionError, ReductionMeta, Sense, Solution};
use super::require_clauses;

#[derive(Debug, Clone)]
pub struct Layout {
    pub x0: usize,
    pub vars: Vec<usize>,
    /// Clause paths P̂_j of 4|C_j| vertices.
    pub paths: Vec<Vec<usize>>,
}

/// 0-based path position of the first of the two slots used by literal `k` (0-based).
pub fn literal_slot(k: usize, positive: bool) -> usize {
    // 1-based: negative (4k-3, 4k-2), positive (4k-2, 4k-1) for 1-based k.
    if positive {
        4 * k + 1
    } else {
        4 * k
    }
}

fn build(phi: &CnfFormula) -> (Graph, Layout) {
    let n = phi.num_vars;
    let heavy = 3 * n as u64;
    let mut g = Graph::new();
    let x0 = g.add_vertex("MC:x0");
    let vars: Vec<usize> = (1..=n).map(|i| g.add_vertex(format!("MC:var={i}"))).collect();
    let mut paths = Vec::new();
    for (j, clause) in phi.clauses.iter().enumerate() {
        let len = 4 * clause.size();
        let path: Vec<usize> =
            (1..=len).map(|l| g.add_vertex(format!("MC:clause={}:pos={l}", j + 1))).collect();
        for w in path.windows(2) {
            g.add_weighted_edge(w[0], w[1], heavy);
        }
        g.add_weighted_edge(x0, path[0], heavy);
        g.add_weighted_edge(x0, path[len - 1], heavy);
        for (k, l) in clause.literals.iter().enumerate() {
            let s = literal_slot(k, l.positive);
            g.add_weighted_edge(vars[l.var - 1], path[s], 1);
            g.add_weighted_edge(vars[l.var - 1], path[s + 1], 1);
        }
        paths.push(path);
    }
    (g, Layout { x0, vars, paths })
}

pub fn reduce_max_cut_weighted(phi: &CnfFormula) -> Result<Instance, ReductionError> {
    require_clauses(phi)?;
    if phi.num_vars == 0 {
        return Err(ReductionError::Degenerate("formula has no variables".into()));
    }
    let (n, m) = (phi.num_vars, phi.num_clauses());
    let (graph, lay) = build(phi);
    let mut s = Sweep::new();
    s.intro(lay.x0);
    s.intro_all(lay.vars.iter().copied());
    for path in &lay.paths {
        s.intro(path[0]);
        for w in path.windows(2) {
            s.intro(w[1]);
            s.forget(w[0]);
        }
        s.forget(*path.last().unwrap());
    }
    let target = m as i64 + (12 * n as i64 + 1) * phi.total_literals() as i64;
    let w = graph.total_weight();
    Ok(Instance {
        kind: Kind::MaxCut,
        graph,
        target: Some(target),
        sense: Sense::AtLeast,
        decomposition: s.finish(),
        claimed_width_bound: n + 5,
        meta: ReductionMeta { n, m, w: Some(w), ..Default::default() },
        lists: None,
        experimental: false,
    })
}

/// Replaces each edge of weight w by w internally disjoint three-edge paths.
/// New paths sit in extra bags right after the first bag covering their edge.
pub fn expand_to_unweighted(inst: &Instance) -> Instance {
    let old = &inst.graph;
    let mut g = Graph::new();
    for v in 0..old.num_vertices() {
        g.add_vertex(old.label(v));
    }
    let mut inner: Vec<Vec<(usize, usize)>> = Vec::with_capacity(old.num_edges());
    for &(u, v, w) in old.edges() {
        let mut paths = Vec::new();
        for k in 1..=w {
            let a = g.add_vertex(format!("MC:edge={}-{}:path={k}:a", u + 1, v + 1));
            let b = g.add_vertex(format!("MC:edge={}-{}:path={k}:b", u + 1, v + 1));
            g.add_edge(u, a);
            g.add_edge(a, b);
            g.add_edge(b, v);
            paths.push((a, b));
        }
        inner.push(paths);
    }

    let bags = &inst.decomposition.bags;
    let mut bag_of = vec![usize::MAX; old.num_vertices()];
    let mut first_shared: Vec<Vec<usize>> = vec![Vec::new(); bags.len()];
    let mut assigned = vec![false; old.num_edges()];
    let mut edge_index = rustc_hash::FxHashMap::default();
    for (e, &(u, v, _)) in old.edges().iter().enumerate() {
        edge_index.insert((u, v), e);
    }
    for (i, bag) in bags.iter().enumerate() {
        for &v in bag {
            bag_of[v] = i;
        }
        for &u in bag {
            for &v in old.neighbors(u) {
                if u < v && bag_of[v] == i {
                    let e = edge_index[&(u, v)];
                    if !assigned[e] {
                        assigned[e] = true;
                        first_shared[i].push(e);
                    }
                }
            }
        }
    }
    let mut new_bags = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        new_bags.push(bag.clone());
        first_shared[i].sort_unstable();
        for &e in &first_shared[i] {
            for &(a, b) in &inner[e] {
                let mut nb = bag.clone();
                nb.push(a);
                nb.push(b);
                new_bags.push(nb);
            }
        }
    }
    let decomposition = PathDecomposition::new(new_bags);
    let w = old.total_weight() as i64;
    let mut meta = inst.meta.clone();
    meta.w = Some(w as u64);
    Instance {
        kind: Kind::MaxCut,
        graph: g,
        target: inst.target.map(|t| 2 * w + t),
        sense: Sense::AtLeast,
        claimed_width_bound: inst.claimed_width_bound.max(inst.decomposition.width() + 2),
        decomposition,
        meta,
        lists: None,
        experimental: false,
    }
}

/// Extends a side map of a weighted graph to its expansion: every path whose
/// ends are split crosses three times, every other path twice.
pub fn extend_sides(weighted: &Graph, sides: &[u8]) -> Vec<u8> {
    let mut out = sides.to_vec();
    for &(u, v, w) in weighted.edges() {
        for _ in 0..w {
            if sides[u] != sides[v] {
                out.push(sides[v]);
                out.push(sides[u]);
            } else {
                out.push(1 - sides[u]);
                out.push(sides[u]);
            }
        }
    }
    out
}

/// Cut of the weighted graph reaching the target exactly, for a satisfying τ.
pub fn weighted_witness(phi: &CnfFormula, tau: &Assignment) -> Result<Vec<u8>, ReductionError> {
    let (g, lay) = build(phi);
    let mut sides = vec![0u8; g.num_vertices()];
    for (i, &v) in lay.vars.iter().enumerate() {
        sides[v] = tau.values[i] as u8;
    }
    for (j, clause) in phi.clauses.iter().enumerate() {
        let k = clause
            .literals
            .iter()
            .position(|l| l.is_true_under(tau.value(l.var)))
            .ok_or(ReductionError::NotSatisfying)?;
        let uncrossed = literal_slot(k, clause.literals[k].positive);
        for (pos, &v) in lay.paths[j].iter().enumerate() {
            // Positions alternate starting on side 1; the parity flips after the
            // single uncrossed edge (uncrossed, uncrossed+1).
            let before = pos % 2 == 0;
            sides[v] = if pos <= uncrossed { before as u8 } else { (!before) as u8 };
        }
    }
    Ok(sides)
}

pub(crate) fn witness(inst: &Instance, phi: &CnfFormula, tau: &Assignment) -> Result<Solution, ReductionError> {
    let (weighted, _) = build(phi);
    let sides = weighted_witness(phi, tau)?;
    if inst.graph.num_vertices() == weighted.num_vertices() {
        Ok(Solution::Sides(sides))
    } else {
        Ok(Solution::Sides(extend_sides(&weighted, &sides)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::instance::{check_solution, objective};

    #[test]
    fn example_counts() {
        let phi = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]);
        let inst = reduce_max_cut_weighted(&phi).unwrap();
        assert_eq!(inst.graph.num_vertices(), 11);
        assert_eq!(inst.meta.w, Some(58));
        assert_eq!(inst.target, Some(51));
        assert!(inst.decomposition.validate(&inst.graph).unwrap() <= inst.claimed_width_bound);
    }

    #[test]
    fn witnesses_hit_target_exactly() {
        let phi = CnfFormula::from_dimacs_clauses(2, &[&[1, -2], &[2, 2, -1]]);
        let inst = reduce_max_cut_weighted(&phi).unwrap();
        let tau = Assignment::new(vec![true, true]);
        let sol = witness(&inst, &phi, &tau).unwrap();
        assert_eq!(objective(&inst, &sol).unwrap(), inst.target);
        let big = expand_to_unweighted(&inst);
        assert!(big.decomposition.validate(&big.graph).unwrap() <= big.claimed_width_bound);
        let sol = witness(&big, &phi, &tau).unwrap();
        assert_eq!(objective(&big, &sol).unwrap(), big.target);
        assert!(check_solution(&big, &sol).unwrap());
    }

    #[test]
    fn single_edge_expansion() {
        let mut g = Graph::with_vertices(2);
        g.add_weighted_edge(0, 1, 3);
        let inst = Instance::from_graph(Kind::MaxCut, g, Some(0));
        let big = expand_to_unweighted(&inst);
        assert_eq!(big.graph.num_vertices(), 8);
        assert_eq!(big.graph.num_edges(), 9);
        assert_eq!(big.target, Some(6));
        big.decomposition.validate(&big.graph).unwrap();
    }
}
