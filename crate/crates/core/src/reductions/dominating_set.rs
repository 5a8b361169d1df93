//! Dominating Set: per variable group, a chain of gadgets whose minimum
//! dominating sets encode base-3 codewords of group assignments.

use crate::decomposition::Sweep;
use crate::formula::{
    checked_pow, make_groups, satisfying_group_assignments, Assignment, CnfFormula, Rounding, VariableGrouping,
};
use crate::graph::Graph;

use super::instance::{Instance, Kind, ReductionError, ReductionMeta, Sense, Solution};
use super::{base3_digits, require_clauses};

#[derive(Debug, Clone)]
pub struct Gadget {
    /// Three-vertex paths, one per codeword digit.
    pub paths: Vec<[usize; 3]>,
    pub guards: Vec<[usize; 2]>,
    /// Indexed by codeword rank.
    pub x: Vec<usize>,
    pub x_twin: Vec<usize>,
    pub guard_x: usize,
}

#[derive(Debug, Clone)]
pub struct Layout {
    pub grouping: VariableGrouping,
    pub p: u32,
    /// `gadgets[group][copy]`.
    pub gadgets: Vec<Vec<Gadget>>,
    pub h: usize,
    pub h_twin: usize,
    /// `clause_vertices[copy][clause]`, copy in 0..2pt+1.
    pub clause_vertices: Vec<Vec<usize>>,
}

impl Layout {
    pub fn copies(&self) -> usize {
        self.gadgets[0].len()
    }
}

pub fn add_gadget(g: &mut Graph, p: u32, prefix: &str) -> Gadget {
    let p = p as usize;
    let codes = 3usize.pow(p as u32);
    let paths: Vec<[usize; 3]> = (1..=p)
        .map(|a| [1, 2, 3].map(|l| g.add_vertex(format!("{prefix}:path={a}:pos={l}"))))
        .collect();
    let mut guards = Vec::new();
    for (a, path) in paths.iter().enumerate() {
        let pair = [
            g.add_vertex(format!("{prefix}:guard={}", a + 1)),
            g.add_vertex(format!("{prefix}:guard'={}", a + 1)),
        ];
        g.add_edge(path[0], path[1]);
        g.add_edge(path[1], path[2]);
        for &gv in &pair {
            for &pv in path {
                g.add_edge(gv, pv);
            }
        }
        guards.push(pair);
    }
    let mut x = Vec::new();
    let mut x_twin = Vec::new();
    for r in 0..codes {
        let xs = g.add_vertex(format!("{prefix}:x={r}"));
        let xt = g.add_vertex(format!("{prefix}:x'={r}"));
        g.add_edge(xs, xt);
        let digits = base3_digits(r as u64, p);
        for (a, path) in paths.iter().enumerate() {
            for (l, &pv) in path.iter().enumerate() {
                if l != digits[a] {
                    g.add_edge(xs, pv);
                }
            }
        }
        x.push(xs);
        x_twin.push(xt);
    }
    for a in 0..codes {
        for b in a + 1..codes {
            g.add_edge(x_twin[a], x_twin[b]);
        }
    }
    let guard_x = g.add_vertex(format!("{prefix}:guard-x"));
    for &xt in &x_twin {
        g.add_edge(guard_x, xt);
    }
    Gadget { paths, guards, x, x_twin, guard_x }
}

fn build(phi: &CnfFormula, p: u32) -> Result<(Graph, Layout), ReductionError> {
    let codes = checked_pow(3, p).ok_or_else(|| ReductionError::SizeCap(format!("3^{p} codewords")))?;
    let grouping = make_groups(phi.num_vars, 3, p, Rounding::Floor)?;
    debug_assert!(1u64 << grouping.group_size <= codes);
    let (m, t) = (phi.num_clauses(), grouping.num_groups());
    let rounds = 2 * p as usize * t + 1;
    let copies = m * rounds;
    let mut g = Graph::new();
    let h = g.add_vertex("DS:h");
    let h_twin = g.add_vertex("DS:h'");
    g.add_edge(h, h_twin);
    let mut gadgets = Vec::new();
    for i in 0..t {
        let mut chain: Vec<Gadget> = Vec::new();
        for c in 0..copies {
            let gd = add_gadget(&mut g, p, &format!("DS:group={}:gadget={}", i + 1, c + 1));
            if let Some(prev) = chain.last() {
                for (a, path) in gd.paths.iter().enumerate() {
                    g.add_edge(prev.paths[a][2], path[0]);
                }
            }
            chain.push(gd);
        }
        for a in 0..p as usize {
            g.add_edge(h, chain[0].paths[a][0]);
            g.add_edge(h, chain[copies - 1].paths[a][2]);
        }
        gadgets.push(chain);
    }
    let sat: Vec<Vec<Vec<u64>>> = (0..t)
        .map(|i| {
            (0..m)
                .map(|j| satisfying_group_assignments(phi, &grouping, i, j).iter().map(|a| a.rank).collect())
                .collect()
        })
        .collect();
    let mut clause_vertices = Vec::new();
    for l in 0..rounds {
        let mut row = Vec::new();
        for j in 0..m {
            let cv = g.add_vertex(format!("DS:clause={}:copy={l}", j + 1));
            for i in 0..t {
                let gd = &gadgets[i][m * l + j];
                for &r in &sat[i][j] {
                    g.add_edge(cv, gd.x_twin[r as usize]);
                }
            }
            row.push(cv);
        }
        clause_vertices.push(row);
    }
    Ok((g, Layout { grouping, p, gadgets, h, h_twin, clause_vertices }))
}

fn sweep(lay: &Layout) -> Sweep {
    let m = lay.clause_vertices[0].len();
    let mut s = Sweep::new();
    s.intro(lay.h);
    s.intro(lay.h_twin);
    s.forget(lay.h_twin);
    let mut exits: Vec<Vec<usize>> = vec![Vec::new(); lay.gadgets.len()];
    for c in 0..lay.copies() {
        let cv = lay.clause_vertices[c / m][c % m];
        s.intro(cv);
        for (i, chain) in lay.gadgets.iter().enumerate() {
            let gd = &chain[c];
            for (a, path) in gd.paths.iter().enumerate() {
                s.intro_all(path.iter().copied());
                if let Some(&e) = exits[i].get(a) {
                    s.forget(e);
                }
                for &gv in &gd.guards[a] {
                    s.intro(gv);
                    s.forget(gv);
                }
            }
            for (&xs, &xt) in gd.x.iter().zip(&gd.x_twin) {
                s.intro(xt);
                s.intro(xs);
                s.forget(xs);
            }
            s.intro(gd.guard_x);
            s.forget(gd.guard_x);
            s.forget_all(gd.x_twin.iter().copied());
            for path in &gd.paths {
                s.forget(path[0]);
                s.forget(path[1]);
            }
            exits[i] = gd.paths.iter().map(|path| path[2]).collect();
        }
        s.forget(cv);
    }
    s
}

pub fn reduce_dominating_set(phi: &CnfFormula, p: u32) -> Result<Instance, ReductionError> {
    require_clauses(phi)?;
    if p < 1 {
        return Err(ReductionError::InvalidParameter("p must be at least 1".into()));
    }
    let (graph, layout) = build(phi, p)?;
    let decomposition = sweep(&layout).finish();
    let (t, pu) = (layout.grouping.num_groups(), p as usize);
    let m = phi.num_clauses();
    let target = (pu + 1) * t * m * (2 * pu * t + 1) + 1;
    Ok(Instance {
        kind: Kind::DominatingSet,
        graph,
        target: Some(target as i64),
        sense: Sense::AtMost,
        decomposition,
        claimed_width_bound: t * pu + (5 * pu + 2 * 3usize.pow(p) + 1) + 2,
        meta: ReductionMeta {
            n: phi.num_vars,
            m,
            p: Some(p),
            t: Some(t),
            beta: Some(layout.grouping.group_size),
            ..Default::default()
        },
        lists: None,
        experimental: false,
    })
}

pub(crate) fn witness(phi: &CnfFormula, p: u32, tau: &Assignment) -> Result<Solution, ReductionError> {
    let (_, lay) = build(phi, p)?;
    let mut set = vec![lay.h];
    for (i, chain) in lay.gadgets.iter().enumerate() {
        let r = lay.grouping.restrict(i, tau).rank as usize;
        let digits = base3_digits(r as u64, p as usize);
        for gd in chain {
            set.extend(gd.paths.iter().zip(&digits).map(|(path, &d)| path[d]));
            set.push(gd.x_twin[r]);
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
    fn gadget_has_twelve_vertices_for_p1() {
        let mut g = Graph::new();
        add_gadget(&mut g, 1, "t");
        assert_eq!(g.num_vertices(), 12);
    }

    #[test]
    fn example_counts() {
        let phi = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]);
        let inst = reduce_dominating_set(&phi, 1).unwrap();
        assert_eq!(inst.graph.num_vertices(), 127);
        assert_eq!(inst.target, Some(21));
        assert_eq!((inst.meta.t, inst.meta.beta), (Some(2), Some(1)));
        assert!(inst.decomposition.validate(&inst.graph).unwrap() <= inst.claimed_width_bound);
        let sol = witness(&phi, 1, &Assignment::new(vec![true, false])).unwrap();
        let Solution::VertexSet(vs) = &sol else { unreachable!() };
        assert_eq!(vs.len(), 21);
        assert!(vs.contains(&0));
        assert!(check_solution(&inst, &sol).unwrap());
    }

    #[test]
    fn p2_width_within_bound() {
        let phi = CnfFormula::from_dimacs_clauses(3, &[&[1, -2], &[3]]);
        let inst = reduce_dominating_set(&phi, 2).unwrap();
        assert!(inst.decomposition.validate(&inst.graph).unwrap() <= inst.claimed_width_bound);
        let sol = witness(&phi, 2, &Assignment::new(vec![true, false, true])).unwrap();
        assert!(check_solution(&inst, &sol).unwrap());
    }
}
