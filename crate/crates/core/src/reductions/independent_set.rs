//! Independent Set: n+1 chained copies of variable paths with ladder-shaped
//! clause gadgets.

use crate::decomposition::Sweep;
use crate::formula::{pad_to_even, Assignment, CnfFormula};
use crate::graph::Graph;

use super::instance::{Instance, Kind, ReductionError, ReductionMeta, Sense, Solution};
use super::require_clauses;

/// One clause gadget: two rails `cp`, `cp2` joined by rungs, a literal vertex per
/// rung adjacent to both rail vertices, and endpoints on the first/last `cp`.
#[derive(Debug, Clone)]
pub struct ClauseGadget {
    pub cp: Vec<usize>,
    pub cp2: Vec<usize>,
    pub lit: Vec<usize>,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone)]
pub struct Layout {
    /// `paths[copy][var][pos]`, all 0-based.
    pub paths: Vec<Vec<Vec<usize>>>,
    /// `gadgets[copy][clause]`.
    pub gadgets: Vec<Vec<ClauseGadget>>,
}

pub fn add_clause_gadget(g: &mut Graph, c: usize, prefix: &str) -> ClauseGadget {
    let cp: Vec<usize> = (1..=c).map(|a| g.add_vertex(format!("{prefix}:cp={a}"))).collect();
    let cp2: Vec<usize> = (1..=c).map(|a| g.add_vertex(format!("{prefix}:cp'={a}"))).collect();
    let lit: Vec<usize> = (1..=c).map(|a| g.add_vertex(format!("{prefix}:lit={a}"))).collect();
    let start = g.add_vertex(format!("{prefix}:start"));
    let end = g.add_vertex(format!("{prefix}:end"));
    for a in 0..c {
        g.add_edge(cp[a], cp2[a]);
        g.add_edge(lit[a], cp[a]);
        g.add_edge(lit[a], cp2[a]);
        if a + 1 < c {
            g.add_edge(cp[a], cp[a + 1]);
            g.add_edge(cp2[a], cp2[a + 1]);
        }
    }
    g.add_edge(start, cp[0]);
    g.add_edge(end, cp[c - 1]);
    ClauseGadget { cp, cp2, lit, start, end }
}

/// Size-(c+2) independent set of a gadget using literal `chosen` and no other literal.
pub fn gadget_independent_set(gd: &ClauseGadget, chosen: usize) -> Vec<usize> {
    let c = gd.cp.len();
    let mut set = vec![gd.start, gd.end, gd.lit[chosen]];
    for b in 0..c {
        if b == chosen {
            continue;
        }
        // Rungs alternate rails so that rung 1 and rung c avoid the endpoints' rail.
        let use_cp2 = if b < chosen { b.is_multiple_of(2) } else { (c - 1 - b).is_multiple_of(2) };
        set.push(if use_cp2 { gd.cp2[b] } else { gd.cp[b] });
    }
    set
}

fn build(phi: &CnfFormula) -> (Graph, Layout) {
    let (n, m) = (phi.num_vars, phi.num_clauses());
    let mut g = Graph::new();
    let mut paths = Vec::new();
    let mut gadgets = Vec::new();
    for k in 1..=n + 1 {
        let copy: Vec<Vec<usize>> = (1..=n)
            .map(|i| (1..=2 * m).map(|l| g.add_vertex(format!("IS:copy={k}:path={i}:pos={l}"))).collect())
            .collect();
        for path in &copy {
            for w in path.windows(2) {
                g.add_edge(w[0], w[1]);
            }
        }
        if let Some(prev) = paths.last() {
            let prev: &Vec<Vec<usize>> = prev;
            for i in 0..n {
                g.add_edge(prev[i][2 * m - 1], copy[i][0]);
            }
        }
        let mut row = Vec::new();
        for (j, clause) in phi.clauses.iter().enumerate() {
            let gd = add_clause_gadget(&mut g, clause.size(), &format!("IS:copy={k}:clause={}", j + 1));
            for (a, l) in clause.literals.iter().enumerate() {
                let pos = if l.positive { 2 * j + 1 } else { 2 * j };
                g.add_edge(gd.lit[a], copy[l.var - 1][pos]);
            }
            row.push(gd);
        }
        paths.push(copy);
        gadgets.push(row);
    }
    (g, Layout { paths, gadgets })
}

/// Variables whose positive literal precedes a negative one in `order`; each
/// such variable keeps both path vertices live for a while.
fn overlap(phi: &CnfFormula, j: usize, order: &[usize]) -> usize {
    let lits = &phi.clauses[j].literals;
    let mut seen_pos = vec![false; phi.num_vars + 1];
    let mut overlapping = vec![false; phi.num_vars + 1];
    for &a in order {
        let l = lits[a];
        if l.positive {
            seen_pos[l.var] = true;
        } else if seen_pos[l.var] {
            overlapping[l.var] = true;
        }
    }
    overlapping.iter().filter(|&&b| b).count()
}

fn sweep(phi: &CnfFormula, lay: &Layout) -> Sweep {
    let (n, m) = (phi.num_vars, phi.num_clauses());
    let mut s = Sweep::new();
    let mut prev: Vec<Option<usize>> = vec![None; n];
    for k in 0..=n {
        for j in 0..m {
            let path = |i: usize, pos: usize| lay.paths[k][i][pos];
            for i in 0..n {
                s.intro(path(i, 2 * j));
                if let Some(p) = prev[i] {
                    s.forget(p);
                }
            }
            let lits = &phi.clauses[j].literals;
            let c = lits.len();
            let forward: Vec<usize> = (0..c).collect();
            let backward: Vec<usize> = (0..c).rev().collect();
            let order = if overlap(phi, j, &backward) < overlap(phi, j, &forward) { backward } else { forward };
            let last_neg = |var: usize| order.iter().rposition(|&a| lits[a].var == var && !lits[a].positive);
            let gd = &lay.gadgets[k][j];
            let (entry, exit) = if order[0] == 0 { (gd.start, gd.end) } else { (gd.end, gd.start) };
            s.intro(gd.cp[order[0]]);
            s.intro(gd.cp2[order[0]]);
            s.intro(entry);
            s.forget(entry);
            for (step, &a) in order.iter().enumerate() {
                let l = lits[a];
                let (odd, even) = (path(l.var - 1, 2 * j), path(l.var - 1, 2 * j + 1));
                if l.positive && !s.is_live(even) {
                    s.intro(even);
                }
                s.intro(gd.lit[a]);
                s.forget(gd.lit[a]);
                if s.is_live(even) && s.is_live(odd) && last_neg(l.var).is_none_or(|p| p <= step) {
                    s.forget(odd);
                }
                if let Some(&b) = order.get(step + 1) {
                    s.intro(gd.cp[b]);
                    s.intro(gd.cp2[b]);
                    s.forget(gd.cp[a]);
                    s.forget(gd.cp2[a]);
                } else {
                    s.intro(exit);
                    s.forget(exit);
                    s.forget(gd.cp[a]);
                    s.forget(gd.cp2[a]);
                }
            }
            for i in 0..n {
                let (odd, even) = (path(i, 2 * j), path(i, 2 * j + 1));
                if !s.is_live(even) {
                    s.intro(even);
                }
                if s.is_live(odd) {
                    s.forget(odd);
                }
                prev[i] = Some(even);
            }
        }
    }
    s
}

pub fn reduce_independent_set(phi: &CnfFormula) -> Result<Instance, ReductionError> {
    require_clauses(phi)?;
    let padded = pad_to_even(phi);
    let (n, m) = (padded.num_vars, padded.num_clauses());
    let (graph, layout) = build(&padded);
    let decomposition = sweep(&padded, &layout).finish();
    let per_copy = (m * n) as i64 + padded.clauses.iter().map(|c| c.size() as i64 + 2).sum::<i64>();
    Ok(Instance {
        kind: Kind::IndependentSet,
        graph,
        target: Some((n as i64 + 1) * per_copy),
        sense: Sense::AtLeast,
        decomposition,
        claimed_width_bound: n + 4,
        meta: ReductionMeta { n, m, ..Default::default() },
        lists: None,
        experimental: false,
    })
}

pub(crate) fn witness(phi: &CnfFormula, tau: &Assignment) -> Result<Solution, ReductionError> {
    let padded = pad_to_even(phi);
    let mut values = tau.values.clone();
    values.resize(padded.num_vars, false);
    let tau = Assignment::new(values);
    let (_, lay) = build(&padded);
    let mut set = Vec::new();
    for (k, copy) in lay.paths.iter().enumerate() {
        for (i, path) in copy.iter().enumerate() {
            // True variables take 1-based odd positions, false ones the even positions.
            let offset = if tau.values[i] { 0 } else { 1 };
            set.extend(path.iter().skip(offset).step_by(2));
        }
        for (j, clause) in padded.clauses.iter().enumerate() {
            let a = clause
                .literals
                .iter()
                .position(|l| l.is_true_under(tau.value(l.var)))
                .ok_or(ReductionError::NotSatisfying)?;
            set.extend(gadget_independent_set(&lay.gadgets[k][j], a));
        }
    }
    set.sort_unstable();
    Ok(Solution::VertexSet(set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::instance::check_solution;

    #[test]
    fn example_sizes() {
        let phi = CnfFormula::from_dimacs_clauses(1, &[&[1, 1]]);
        let inst = reduce_independent_set(&phi).unwrap();
        assert_eq!(inst.graph.num_vertices(), 20);
        assert_eq!(inst.target, Some(10));
        let w = inst.decomposition.validate(&inst.graph).unwrap();
        assert!(w <= inst.claimed_width_bound);
    }

    #[test]
    fn witness_meets_target() {
        let phi = CnfFormula::from_dimacs_clauses(1, &[&[1, 1]]);
        let inst = reduce_independent_set(&phi).unwrap();
        let sol = witness(&phi, &Assignment::new(vec![true])).unwrap();
        let Solution::VertexSet(vs) = &sol else { unreachable!() };
        assert_eq!(vs.len(), 10);
        assert!(check_solution(&inst, &sol).unwrap());
    }

    #[test]
    fn tautological_clause_stays_within_bound() {
        let phi = CnfFormula::from_dimacs_clauses(2, &[&[1, -1, 2, -2], &[-1, 2]]);
        let inst = reduce_independent_set(&phi).unwrap();
        assert!(inst.decomposition.validate(&inst.graph).unwrap() <= inst.claimed_width_bound);
    }
}
