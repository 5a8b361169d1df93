//! q-List-Coloring: group vertex sets carry base-q codewords; each clause is a
//! path that needs one red vertex, and connectors only let a path vertex be red
//! when its group is colored with the matching codeword.

use crate::decomposition::{PathDecomposition, Sweep};
use crate::formula::{
    checked_pow, make_groups, satisfying_group_assignments, Assignment, CnfFormula, Rounding, VariableGrouping,
};
use crate::graph::Graph;

use super::instance::{Instance, Kind, ReductionError, ReductionMeta, Sense, Solution};
use super::require_clauses;

pub const RED: u32 = 1;
pub const WHITE: u32 = 2;
pub const BLACK: u32 = 3;

/// One branch of a connector: forbids `bad` on group vertex `digit` whenever
/// the path vertex is red.
#[derive(Debug, Clone)]
pub struct Branch {
    pub digit: usize,
    pub bad: u32,
    pub collector: usize,
    /// `(y, w_y, w'_y)`; `w'_y` is absent when `bad` is red.
    pub arms: Vec<(u32, usize, Option<usize>)>,
}

#[derive(Debug, Clone)]
pub struct PathVertex {
    pub group: usize,
    pub rank: u64,
    pub vertex: usize,
    pub branches: Vec<Branch>,
}

#[derive(Debug, Clone)]
pub struct ClausePath {
    pub start: usize,
    pub end: usize,
    pub vertices: Vec<PathVertex>,
}

#[derive(Debug, Clone)]
pub struct Layout {
    pub grouping: VariableGrouping,
    pub q: u32,
    pub p: u32,
    /// `groups[i][l]`: the p full-list vertices of group i.
    pub groups: Vec<Vec<usize>>,
    pub clauses: Vec<ClausePath>,
}

/// Colors (1-based) of the p group vertices encoding `rank` in base q.
pub fn codeword(rank: u64, q: u32, p: u32) -> Vec<u32> {
    let mut digits = vec![0; p as usize];
    let mut r = rank;
    for d in digits.iter_mut().rev() {
        *d = (r % q as u64) as u32 + 1;
        r /= q as u64;
    }
    digits
}

/// Adds the connector between path vertex `v` and group vertices `group`,
/// enforcing "v red ⇒ group colored `code`".
pub fn add_connector(
    g: &mut Graph,
    lists: &mut Vec<Vec<u32>>,
    q: u32,
    v: usize,
    group: &[usize],
    code: &[u32],
    prefix: &str,
) -> Vec<Branch> {
    let full: Vec<u32> = (1..=q).collect();
    let mut add = |g: &mut Graph, label: String, list: Vec<u32>| {
        let id = g.add_vertex(label);
        lists.push(list);
        id
    };
    let mut branches = Vec::new();
    for (l, (&gv, &good)) in group.iter().zip(code).enumerate() {
        for bad in (1..=q).filter(|&x| x != good) {
            let pre = format!("{prefix}:digit={}:bad={bad}", l + 1);
            let collector = add(g, format!("{pre}:w"), full.clone());
            g.add_edge(collector, v);
            let mut arms = Vec::new();
            for y in (1..=q).filter(|&y| y != RED) {
                if bad == RED {
                    let wy = add(g, format!("{pre}:y={y}:w"), vec![RED, y]);
                    g.add_edge(wy, gv);
                    g.add_edge(wy, collector);
                    arms.push((y, wy, None));
                } else {
                    let wy = add(g, format!("{pre}:y={y}:w"), vec![bad, RED]);
                    let wy2 = add(g, format!("{pre}:y={y}:w'"), vec![y, RED]);
                    g.add_edge(wy, gv);
                    g.add_edge(wy, wy2);
                    g.add_edge(wy2, collector);
                    arms.push((y, wy, Some(wy2)));
                }
            }
            branches.push(Branch { digit: l, bad, collector, arms });
        }
    }
    branches
}

fn build(phi: &CnfFormula, q: u32, p: u32) -> Result<(Graph, Vec<Vec<u32>>, Layout), ReductionError> {
    checked_pow(q as u64, p).ok_or_else(|| ReductionError::SizeCap(format!("{q}^{p} codewords")))?;
    let grouping = make_groups(phi.num_vars, q as u64, p, Rounding::Floor)?;
    let t = grouping.num_groups();
    let full: Vec<u32> = (1..=q).collect();
    let mut g = Graph::new();
    let mut lists = Vec::new();
    let groups: Vec<Vec<usize>> = (0..t)
        .map(|i| {
            (1..=p)
                .map(|l| {
                    lists.push(full.clone());
                    g.add_vertex(format!("COL:group={}:v={l}", i + 1))
                })
                .collect()
        })
        .collect();
    let mut clauses = Vec::new();
    for j in 0..phi.num_clauses() {
        let pre = format!("COL:clause={}", j + 1);
        let start = g.add_vertex(format!("{pre}:start"));
        lists.push(vec![WHITE]);
        let mut vertices = Vec::new();
        let mut prev = start;
        for i in 0..t {
            for a in satisfying_group_assignments(phi, &grouping, i, j) {
                let vp = format!("{pre}:group={}:assign={}", i + 1, a.rank);
                let v = g.add_vertex(vp.clone());
                lists.push(vec![RED, WHITE, BLACK]);
                g.add_edge(prev, v);
                prev = v;
                let code = codeword(a.rank, q, p);
                let branches = add_connector(&mut g, &mut lists, q, v, &groups[i], &code, &vp);
                vertices.push(PathVertex { group: i, rank: a.rank, vertex: v, branches });
            }
        }
        if vertices.is_empty() {
            return Err(ReductionError::Degenerate(format!("clause {} has no satisfying group assignment", j + 1)));
        }
        let end = g.add_vertex(format!("{pre}:end"));
        lists.push(vec![if vertices.len() % 2 == 0 { WHITE } else { BLACK }]);
        g.add_edge(prev, end);
        clauses.push(ClausePath { start, end, vertices });
    }
    Ok((g, lists, Layout { grouping, q, p, groups, clauses }))
}

fn sweep(lay: &Layout) -> Sweep {
    let mut s = Sweep::new();
    for grp in &lay.groups {
        s.intro_all(grp.iter().copied());
    }
    for cp in &lay.clauses {
        s.intro(cp.start);
        let mut prev = cp.start;
        for pv in &cp.vertices {
            s.intro(pv.vertex);
            s.forget(prev);
            prev = pv.vertex;
            for br in &pv.branches {
                s.intro(br.collector);
                for &(_, wy, wy2) in &br.arms {
                    if let Some(w2) = wy2 {
                        s.intro(w2);
                    }
                    s.intro(wy);
                    s.forget(wy);
                    if let Some(w2) = wy2 {
                        s.forget(w2);
                    }
                }
                s.forget(br.collector);
            }
        }
        s.intro(cp.end);
        s.forget(prev);
        s.forget(cp.end);
    }
    s
}

pub fn reduce_q_coloring(phi: &CnfFormula, q: u32, p: u32) -> Result<Instance, ReductionError> {
    require_clauses(phi)?;
    if q < 3 {
        return Err(ReductionError::InvalidParameter(format!("q must be at least 3, got {q}")));
    }
    if p < 1 {
        return Err(ReductionError::InvalidParameter("p must be at least 1".into()));
    }
    let (graph, lists, lay) = build(phi, q, p)?;
    let decomposition = sweep(&lay).finish();
    let t = lay.grouping.num_groups();
    Ok(Instance {
        kind: Kind::QListColoring,
        graph,
        target: None,
        sense: Sense::Feasible,
        decomposition,
        claimed_width_bound: p as usize * t + 4,
        meta: ReductionMeta {
            n: phi.num_vars,
            m: phi.num_clauses(),
            p: Some(p),
            q: Some(q),
            t: Some(t),
            beta: Some(lay.grouping.group_size),
            ..Default::default()
        },
        lists: Some(lists),
        experimental: false,
    })
}

/// Drops the lists by adding a q-clique whose i-th vertex is adjacent to every
/// vertex that may not take color i.
pub fn complete_lists_to_plain(inst: &Instance) -> Instance {
    let q = inst.num_colors();
    let mut g = inst.graph.clone();
    let n = g.num_vertices();
    let clique: Vec<usize> = (1..=q).map(|c| g.add_vertex(format!("COL:clique={c}"))).collect();
    for a in 0..clique.len() {
        for b in a + 1..clique.len() {
            g.add_edge(clique[a], clique[b]);
        }
    }
    if let Some(lists) = &inst.lists {
        for v in 0..n {
            for c in 1..=q {
                if !lists[v].contains(&c) {
                    g.add_edge(v, clique[c as usize - 1]);
                }
            }
        }
    }
    let bags = inst
        .decomposition
        .bags
        .iter()
        .map(|b| b.iter().copied().chain(clique.iter().copied()).collect())
        .collect();
    let mut meta = inst.meta.clone();
    meta.q = Some(q);
    Instance {
        kind: Kind::QColoring,
        graph: g,
        target: None,
        sense: Sense::Feasible,
        decomposition: PathDecomposition::new(bags),
        claimed_width_bound: inst.claimed_width_bound + q as usize,
        meta,
        lists: None,
        experimental: inst.experimental,
    }
}

/// Colors a connector's branch given the group vertex color and the path vertex
/// color, following the case analysis that makes connectors extendable.
fn color_branch(colors: &mut [u32], br: &Branch, group_color: u32, v_color: u32, q: u32) {
    let pick_collector = |forbidden: &[u32]| (1..=q).find(|c| !forbidden.contains(c)).unwrap();
    if br.bad == RED {
        if group_color == RED {
            // Every arm takes its y, so the collector must be red.
            for &(y, wy, _) in &br.arms {
                colors[wy] = y;
            }
            colors[br.collector] = RED;
        } else {
            for &(_, wy, _) in &br.arms {
                colors[wy] = RED;
            }
            colors[br.collector] = pick_collector(&[RED, v_color]);
        }
    } else if group_color == br.bad {
        for &(y, wy, wy2) in &br.arms {
            colors[wy] = RED;
            colors[wy2.unwrap()] = y;
        }
        colors[br.collector] = RED;
    } else {
        for &(_, wy, wy2) in &br.arms {
            colors[wy] = br.bad;
            colors[wy2.unwrap()] = RED;
        }
        colors[br.collector] = pick_collector(&[RED, v_color]);
    }
}

pub(crate) fn witness(inst: &Instance, phi: &CnfFormula, tau: &Assignment) -> Result<Solution, ReductionError> {
    let q = inst.num_colors();
    let p = inst.meta.p.unwrap_or(1);
    let (g, _, lay) = build(phi, q, p)?;
    let mut colors = vec![0u32; g.num_vertices()];
    let ranks: Vec<u64> = (0..lay.groups.len()).map(|i| lay.grouping.restrict(i, tau).rank).collect();
    for (i, grp) in lay.groups.iter().enumerate() {
        for (&v, c) in grp.iter().zip(codeword(ranks[i], q, p)) {
            colors[v] = c;
        }
    }
    for cp in &lay.clauses {
        let k = cp.vertices.len();
        let r = cp
            .vertices
            .iter()
            .position(|pv| ranks[pv.group] == pv.rank)
            .ok_or(ReductionError::NotSatisfying)?;
        colors[cp.start] = WHITE;
        colors[cp.end] = if k % 2 == 0 { WHITE } else { BLACK };
        // Before the red vertex: alternate away from the white start. After it:
        // alternate backwards from the color opposite to the end's.
        let other = |c: u32| if c == WHITE { BLACK } else { WHITE };
        let last = other(colors[cp.end]);
        for (b, pv) in cp.vertices.iter().enumerate() {
            colors[pv.vertex] = match b.cmp(&r) {
                std::cmp::Ordering::Less => {
                    if b % 2 == 0 {
                        BLACK
                    } else {
                        WHITE
                    }
                }
                std::cmp::Ordering::Equal => RED,
                std::cmp::Ordering::Greater => {
                    if (k - 1 - b) % 2 == 0 {
                        last
                    } else {
                        other(last)
                    }
                }
            };
        }
        for pv in &cp.vertices {
            for br in &pv.branches {
                let gc = colors[lay.groups[pv.group][br.digit]];
                let vc = colors[pv.vertex];
                color_branch(&mut colors, br, gc, vc, q);
            }
        }
    }
    if inst.kind == Kind::QColoring {
        colors.extend(1..=q);
    }
    Ok(Solution::Colors(colors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::instance::check_solution;

    #[test]
    fn codewords_are_base_q_digits() {
        assert_eq!(codeword(0, 3, 2), vec![1, 1]);
        assert_eq!(codeword(5, 3, 2), vec![2, 3]);
        assert_eq!(codeword(1, 4, 1), vec![2]);
    }

    #[test]
    fn example_structure() {
        let phi = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]);
        let inst = reduce_q_coloring(&phi, 3, 1).unwrap();
        assert_eq!(inst.meta.t, Some(2));
        let (_, _, lay) = build(&phi, 3, 1).unwrap();
        assert_eq!(lay.clauses[0].vertices.len(), 2);
        assert!(inst.decomposition.validate(&inst.graph).unwrap() <= inst.claimed_width_bound);
    }

    #[test]
    fn connector_sizes() {
        // Good color white: the red branch has 2 arms + collector, the black one 4 + collector.
        let mut g = Graph::new();
        let mut lists = Vec::new();
        let gv = g.add_vertex("g");
        let v = g.add_vertex("v");
        lists.extend([vec![1, 2, 3], vec![1, 2, 3]]);
        let br = add_connector(&mut g, &mut lists, 3, v, &[gv], &[WHITE], "c");
        assert_eq!(br.len(), 2);
        assert_eq!(g.num_vertices() - 2, 8);
        assert_eq!(lists.len(), g.num_vertices());
    }

    #[test]
    fn witness_is_proper_for_list_and_plain() {
        let phi = CnfFormula::from_dimacs_clauses(3, &[&[1, -2], &[2, 3], &[-1, -3]]);
        let tau = Assignment::new(vec![true, true, false]);
        for (q, p) in [(3, 1), (4, 1), (3, 2)] {
            let inst = reduce_q_coloring(&phi, q, p).unwrap();
            let sol = witness(&inst, &phi, &tau).unwrap();
            assert!(check_solution(&inst, &sol).unwrap(), "q={q} p={p}");
            let plain = complete_lists_to_plain(&inst);
            assert!(plain.decomposition.validate(&plain.graph).unwrap() <= plain.claimed_width_bound);
            let sol = witness(&plain, &phi, &tau).unwrap();
            assert!(check_solution(&plain, &sol).unwrap());
        }
    }
}
