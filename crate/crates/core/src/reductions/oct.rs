//! Odd Cycle Transversal: variable paths cut into blocks of three columns,
//! good subsets as base-3 codewords, arrows propagating "in the transversal"
//! from path vertices to X/Y cycles and on to clause cycles.

use crate::decomposition::Sweep;
use crate::formula::{
    checked_pow, make_groups, satisfying_group_assignments, Assignment, CnfFormula, Rounding, VariableGrouping,
};
use crate::graph::Graph;

use super::instance::{Instance, Kind, ReductionError, ReductionMeta, Sense, Solution};
use super::{base3_digits, require_clauses};

/// A(u, v): path u–a1–a2–a3–v plus b1..b4 closing four triangles.
#[derive(Debug, Clone, Copy)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    /// a1, a2, a3, b1, b2, b3, b4.
    pub inner: [usize; 7],
}

impl Arrow {
    pub fn passive(&self) -> [usize; 2] {
        [self.inner[0], self.inner[2]]
    }

    pub fn active(&self) -> [usize; 2] {
        [self.inner[1], self.to]
    }
}

pub fn add_arrow(g: &mut Graph, from: usize, to: usize, prefix: &str) -> Arrow {
    let names = ["a1", "a2", "a3", "b1", "b2", "b3", "b4"];
    let inner = names.map(|n| g.add_vertex(format!("{prefix}:{n}")));
    let [a1, a2, a3, b1, b2, b3, b4] = inner;
    for (x, y) in [
        (from, a1),
        (a1, a2),
        (a2, a3),
        (a3, to),
        (from, b1),
        (b1, a1),
        (a1, b2),
        (b2, a2),
        (a2, b3),
        (b3, a3),
        (a3, b4),
        (b4, to),
    ] {
        g.add_edge(x, y);
    }
    Arrow { from, to, inner }
}

#[derive(Debug, Clone)]
pub struct Block {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// `x_cycles[S]`, vertex 0 is x_S.
    pub x_cycles: Vec<Vec<usize>>,
    /// Arrows into each X cycle, from P∖S in (path, position) order.
    pub x_arrows: Vec<Vec<Arrow>>,
    pub y_cycle: Vec<usize>,
    pub y_arrows: Vec<Arrow>,
    /// `(rank, arrow)` for clause arrows leaving this block.
    pub clause_arrows: Vec<(u64, Arrow)>,
}

#[derive(Debug, Clone)]
pub struct ClauseCycle {
    /// Cycle order; `(group, rank)` for real vertices, `None` for dummies.
    pub vertices: Vec<(usize, Option<(usize, u64)>)>,
}

#[derive(Debug, Clone)]
pub struct Layout {
    pub grouping: VariableGrouping,
    pub p: usize,
    pub segments: usize,
    /// `paths[i][j][k]`.
    pub paths: Vec<Vec<Vec<usize>>>,
    /// `triangles[i][j][k] = [a, b, q]` bridging path positions k and k+1.
    pub triangles: Vec<Vec<Vec<[usize; 3]>>>,
    /// `blocks[i][l]`.
    pub blocks: Vec<Vec<Block>>,
    /// Indexed by block number l = r·m + h.
    pub clause_cycles: Vec<ClauseCycle>,
    pub budget_items: Vec<i64>,
    pub mu: u64,
    pub arrow_count: u64,
}

impl Layout {
    pub fn num_blocks(&self) -> usize {
        self.clause_cycles.len()
    }

    pub fn budget(&self) -> i64 {
        self.budget_items.iter().sum()
    }
}

/// Arrow total as the closed form in the construction's budget list states it.
/// Kept as a diagnostic: it undercounts clause arrows, which exist once per copy.
pub fn closed_form_arrow_count(p: usize, t: usize, m: usize, mu: u64) -> u64 {
    let copies = (t * p + 1) as u64;
    m as u64 * mu + (2 * p as u64 + 1) * 3u64.pow(p as u32) * t as u64 * m as u64 * copies
}

fn build(phi: &CnfFormula, p: u32, segments: usize) -> Result<(Graph, Layout), ReductionError> {
    let codes = checked_pow(3, p).ok_or_else(|| ReductionError::SizeCap(format!("3^{p} codewords")))? as usize;
    let grouping = make_groups(phi.num_vars, 3, p, Rounding::Floor)?;
    let pu = p as usize;
    let (m, t) = (phi.num_clauses(), grouping.num_groups());
    let nblocks = m * segments;
    let len = 3 * nblocks;
    let mut g = Graph::new();

    let mut paths = Vec::new();
    let mut triangles = Vec::new();
    let mut n_triangles = 0i64;
    for i in 0..t {
        let mut rows = Vec::new();
        let mut tris = Vec::new();
        for j in 0..pu {
            let pre = format!("OCT:group={}:path={}", i + 1, j + 1);
            let row: Vec<usize> = (1..=len).map(|k| g.add_vertex(format!("{pre}:pos={k}"))).collect();
            let mut tri = Vec::new();
            for k in 0..len - 1 {
                g.add_edge(row[k], row[k + 1]);
                let abq = ["a", "b", "q"].map(|n| g.add_vertex(format!("{pre}:tri={}:{n}", k + 1)));
                g.add_edge(abq[0], abq[1]);
                g.add_edge(abq[1], abq[2]);
                g.add_edge(abq[0], abq[2]);
                g.add_edge(abq[0], row[k]);
                g.add_edge(abq[1], row[k + 1]);
                tri.push(abq);
                n_triangles += 1;
            }
            rows.push(row);
            tris.push(tri);
        }
        paths.push(rows);
        triangles.push(tris);
    }

    let mut n_triples = 0i64;
    let mut n_xy_arrows = 0i64;
    let mut blocks: Vec<Vec<Block>> = Vec::new();
    for i in 0..t {
        let mut row: Vec<Block> = Vec::new();
        for l in 0..nblocks {
            let pre = format!("OCT:group={}:block={l}", i + 1);
            let left: Vec<usize> = (1..=5 * pu).map(|k| g.add_vertex(format!("{pre}:L={k}"))).collect();
            let right: Vec<usize> = (1..=5 * pu).map(|k| g.add_vertex(format!("{pre}:R={k}"))).collect();
            for &a in &left {
                for &b in &right {
                    g.add_edge(a, b);
                }
            }
            for j in 0..pu {
                n_triples += 1;
                for k in 3 * l..(3 * l + 3).min(len - 1) {
                    let [a, b, _] = triangles[i][j][k];
                    left.iter().for_each(|&x| {
                        g.add_edge(a, x);
                    });
                    right.iter().for_each(|&x| {
                        g.add_edge(b, x);
                    });
                }
            }
            if let Some(prev) = row.last() {
                g.add_edge(prev.left[0], right[0]);
            }
            let mut x_cycles = Vec::new();
            let mut x_arrows = Vec::new();
            for s in 0..codes {
                let cyc: Vec<usize> = (0..=2 * pu)
                    .map(|e| {
                        if e == 0 {
                            g.add_vertex(format!("{pre}:X={s}:x"))
                        } else {
                            g.add_vertex(format!("{pre}:X={s}:e={e}"))
                        }
                    })
                    .collect();
                add_cycle(&mut g, &cyc);
                let digits = base3_digits(s as u64, pu);
                let mut arrows = Vec::new();
                let sources = (0..pu)
                    .flat_map(|j| {
                        let dj = digits[j];
                        (0..3).filter(move |&d| d != dj).map(move |d| (j, d))
                    });
                for (e, (j, d)) in sources.enumerate() {
                    let u = paths[i][j][3 * l + d];
                    arrows.push(add_arrow(&mut g, u, cyc[e + 1], &format!("{pre}:X={s}:arrow={}", e + 1)));
                    n_xy_arrows += 1;
                }
                x_cycles.push(cyc);
                x_arrows.push(arrows);
            }
            let y_cycle: Vec<usize> = (0..codes).map(|s| g.add_vertex(format!("{pre}:Y={s}"))).collect();
            add_cycle(&mut g, &y_cycle);
            let y_arrows: Vec<Arrow> = (0..codes)
                .map(|s| add_arrow(&mut g, x_cycles[s][0], y_cycle[s], &format!("{pre}:Y={s}:arrow")))
                .collect();
            n_xy_arrows += codes as i64;
            row.push(Block { left, right, x_cycles, x_arrows, y_cycle, y_arrows, clause_arrows: Vec::new() });
        }
        blocks.push(row);
    }

    let mut clause_cycles = Vec::new();
    let mut n_clause_arrows = 0i64;
    let mut mu = 0u64;
    let sat: Vec<Vec<Vec<bool>>> = (0..m)
        .map(|h| {
            (0..t)
                .map(|i| {
                    let mut ok = vec![false; grouping.num_assignments(i) as usize];
                    for a in satisfying_group_assignments(phi, &grouping, i, h) {
                        ok[a.rank as usize] = true;
                    }
                    ok
                })
                .collect()
        })
        .collect();
    for h in 0..m {
        for i in 0..t {
            mu += sat[h][i].iter().filter(|&&b| b).count() as u64;
        }
        if sat[h].iter().all(|row| row.iter().all(|&b| !b)) {
            return Err(ReductionError::Degenerate(format!("clause {} has no satisfying group assignment", h + 1)));
        }
    }
    for r in 0..segments {
        for h in 0..m {
            let l = r * m + h;
            let pre = format!("OCT:clause={}:copy={r}", h + 1);
            let mut verts = Vec::new();
            for i in 0..t {
                for a in 0..grouping.num_assignments(i) {
                    let v = g.add_vertex(format!("{pre}:group={}:assign={a}", i + 1));
                    verts.push((v, Some((i, a))));
                }
            }
            let mut d = 0;
            while verts.len() < 3 || verts.len() % 2 == 0 {
                d += 1;
                verts.push((g.add_vertex(format!("{pre}:dummy={d}")), None));
            }
            add_cycle(&mut g, &verts.iter().map(|v| v.0).collect::<Vec<_>>());
            for &(v, tag) in &verts {
                let Some((i, a)) = tag else { continue };
                if sat[h][i][a as usize] {
                    let x = blocks[i][l].x_cycles[a as usize][0];
                    let arrow = add_arrow(&mut g, x, v, &format!("{pre}:group={}:assign={a}:arrow", i + 1));
                    blocks[i][l].clause_arrows.push((a, arrow));
                    n_clause_arrows += 1;
                }
            }
            clause_cycles.push(ClauseCycle { vertices: verts });
        }
    }
    // Clause cycles were pushed in (r, h) order, which is block order l = r·m + h.
    let n_blocks_total = (t * nblocks) as i64;
    let budget_items = vec![n_triangles, n_triples, 2 * n_xy_arrows, 2 * n_clause_arrows, n_blocks_total];
    let arrow_count = (n_xy_arrows + n_clause_arrows) as u64;
    Ok((
        g,
        Layout {
            grouping,
            p: pu,
            segments,
            paths,
            triangles,
            blocks,
            clause_cycles,
            budget_items,
            mu,
            arrow_count,
        },
    ))
}

fn add_cycle(g: &mut Graph, cyc: &[usize]) {
    for k in 0..cyc.len() {
        g.add_edge(cyc[k], cyc[(k + 1) % cyc.len()]);
    }
}

fn sweep_arrow(s: &mut Sweep, a: &Arrow) {
    let [a1, a2, a3, b1, b2, b3, b4] = a.inner;
    s.intro_all([b1, a1]);
    s.forget(b1);
    s.intro_all([b2, a2]);
    s.forget_all([a1, b2]);
    s.intro_all([b3, a3]);
    s.forget_all([a2, b3]);
    s.intro(b4);
    s.forget_all([a3, b4]);
}

fn sweep(lay: &Layout) -> Sweep {
    let t = lay.paths.len();
    let len = lay.paths[0][0].len();
    let mut s = Sweep::new();
    let mut chain_left: Vec<Option<usize>> = vec![None; t];
    for (l, cc) in lay.clause_cycles.iter().enumerate() {
        let first = cc.vertices[0].0;
        s.intro(first);
        let mut prev_cycle = first;
        let mut next_real = 1;
        for i in 0..t {
            let blk = &lay.blocks[i][l];
            for row in &lay.paths[i] {
                for k in 3 * l..3 * l + 3 {
                    if !s.is_live(row[k]) {
                        s.intro(row[k]);
                    }
                }
            }
            s.intro_all(blk.left.iter().copied());
            s.intro_all(blk.right.iter().copied());
            if let Some(prev) = chain_left[i] {
                s.forget(prev);
            }
            for (j, row) in lay.paths[i].iter().enumerate() {
                for k in 3 * l..(3 * l + 3).min(len - 1) {
                    if !s.is_live(row[k + 1]) {
                        s.intro(row[k + 1]);
                    }
                    let abq = lay.triangles[i][j][k];
                    s.intro_all(abq);
                    s.forget_all(abq);
                }
            }
            s.forget_all(blk.left[1..].iter().copied());
            s.forget_all(blk.right.iter().copied());
            let y0 = blk.y_cycle[0];
            for (sidx, cyc) in blk.x_cycles.iter().enumerate() {
                let x = cyc[0];
                s.intro(x);
                for (e, arrow) in blk.x_arrows[sidx].iter().enumerate() {
                    s.intro(cyc[e + 1]);
                    if e > 0 {
                        s.forget(cyc[e]);
                    }
                    sweep_arrow(&mut s, arrow);
                }
                s.forget(*cyc.last().unwrap());
                s.intro(blk.y_cycle[sidx]);
                if sidx > 1 {
                    s.forget(blk.y_cycle[sidx - 1]);
                }
                sweep_arrow(&mut s, &blk.y_arrows[sidx]);
                // Clause-cycle vertices of this group come in rank order, matching S order.
                if let Some(&(v, Some((gi, a)))) = cc.vertices.get(next_real) {
                    if gi == i && a == sidx as u64 {
                        s.intro(v);
                        if prev_cycle != first {
                            s.forget(prev_cycle);
                        }
                        prev_cycle = v;
                        next_real += 1;
                    }
                }
                if let Some((_, arrow)) = blk.clause_arrows.iter().find(|(a, _)| *a == sidx as u64) {
                    sweep_arrow(&mut s, arrow);
                }
                s.forget(x);
            }
            let last_y = *blk.y_cycle.last().unwrap();
            if last_y != y0 {
                s.forget(last_y);
            }
            s.forget(y0);
            for row in &lay.paths[i] {
                for k in 3 * l..3 * l + 3 {
                    s.forget(row[k]);
                }
            }
            chain_left[i] = Some(blk.left[0]);
        }
        for &(v, tag) in &cc.vertices[next_real..] {
            debug_assert!(tag.is_none());
            s.intro(v);
            if prev_cycle != first {
                s.forget(prev_cycle);
            }
            prev_cycle = v;
        }
        if prev_cycle != first {
            s.forget(prev_cycle);
        }
        s.forget(first);
    }
    s
}

pub fn reduce_oct(phi: &CnfFormula, p: u32) -> Result<Instance, ReductionError> {
    require_clauses(phi)?;
    let t = make_groups(phi.num_vars.max(1), 3, p.max(1), Rounding::Floor)?.num_groups();
    reduce_oct_with_segments(phi, p, t * p as usize + 1)
}

/// Same construction with an explicit number of clause-cycle copies per clause.
pub fn reduce_oct_with_segments(phi: &CnfFormula, p: u32, segments: usize) -> Result<Instance, ReductionError> {
    require_clauses(phi)?;
    if p < 1 || segments < 1 {
        return Err(ReductionError::InvalidParameter("p and the copy count must be at least 1".into()));
    }
    let (graph, lay) = build(phi, p, segments)?;
    let decomposition = sweep(&lay).finish();
    let t = lay.grouping.num_groups();
    let pu = p as usize;
    Ok(Instance {
        kind: Kind::OddCycleTransversal,
        graph,
        target: Some(lay.budget()),
        sense: Sense::AtMost,
        decomposition,
        claimed_width_bound: t * (pu + 1) + 10 * pu * 3usize.pow(p),
        meta: ReductionMeta {
            n: phi.num_vars,
            m: phi.num_clauses(),
            p: Some(p),
            t: Some(t),
            beta: Some(lay.grouping.group_size),
            budget_items: Some(lay.budget_items.clone()),
            mu: Some(lay.mu),
            arrow_count: Some(lay.arrow_count),
            ..Default::default()
        },
        lists: None,
        experimental: false,
    })
}

/// Rebuilds the layout behind an instance (its copy count is recovered from
/// the path length).
pub fn layout_for(inst: &Instance, phi: &CnfFormula) -> Result<Layout, ReductionError> {
    let p = inst.meta.p.unwrap_or(1);
    let path_len = inst.graph.labels().iter().filter(|l| l.starts_with("OCT:group=1:path=1:pos=")).count();
    let per_copy = 3 * phi.num_clauses();
    if path_len == 0 || per_copy == 0 || path_len % per_copy != 0 {
        return Err(ReductionError::Mismatch("not an OCT instance of this formula".into()));
    }
    let (g, lay) = build(phi, p, path_len / per_copy)?;
    if g.num_vertices() != inst.graph.num_vertices() {
        return Err(ReductionError::Mismatch("instance does not match formula".into()));
    }
    Ok(lay)
}

pub(crate) fn witness(inst: &Instance, phi: &CnfFormula, tau: &Assignment) -> Result<Solution, ReductionError> {
    let lay = layout_for(inst, phi)?;
    let mut z = Vec::new();
    let mut in_z = vec![false; inst.graph.num_vertices()];
    let take = |v: usize, z: &mut Vec<usize>, in_z: &mut Vec<bool>| {
        z.push(v);
        in_z[v] = true;
    };
    for i in 0..lay.paths.len() {
        let code = lay.grouping.restrict(i, tau).rank;
        let digits = base3_digits(code, lay.p);
        for j in 0..lay.p {
            // Offsets from the chosen column: 0 → Z, 1 → L, 2 → R.
            let offset = |k: usize| (k + 3 - digits[j]) % 3;
            let row = &lay.paths[i][j];
            for k in 0..row.len() {
                if offset(k) == 0 {
                    take(row[k], &mut z, &mut in_z);
                }
                if k + 1 < row.len() {
                    let [a, b, q] = lay.triangles[i][j][k];
                    let pick = match (offset(k), offset(k + 1)) {
                        (0, 1) => b,
                        (2, 0) => a,
                        _ => q,
                    };
                    take(pick, &mut z, &mut in_z);
                }
            }
        }
        for blk in &lay.blocks[i] {
            for arrows in &blk.x_arrows {
                for a in arrows {
                    let pick = if in_z[a.from] { a.active() } else { a.passive() };
                    pick.into_iter().for_each(|v| take(v, &mut z, &mut in_z));
                }
            }
            take(blk.x_cycles[code as usize][0], &mut z, &mut in_z);
            for a in blk.y_arrows.iter().chain(blk.clause_arrows.iter().map(|(_, a)| a)) {
                let pick = if in_z[a.from] { a.active() } else { a.passive() };
                pick.into_iter().for_each(|v| take(v, &mut z, &mut in_z));
            }
        }
    }
    z.sort_unstable();
    Ok(Solution::VertexSet(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::instance::{check_solution, objective};

    #[test]
    fn arrow_counts() {
        let mut g = Graph::with_vertices(2);
        add_arrow(&mut g, 0, 1, "t");
        assert_eq!((g.num_vertices(), g.num_edges()), (9, 12));
    }

    #[test]
    fn example_counts_and_witness() {
        let phi = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]);
        let inst = reduce_oct(&phi, 1).unwrap();
        let lay = layout_for(&inst, &phi).unwrap();
        // Floor grouping at p=1: one variable per group.
        assert_eq!((lay.grouping.group_size, lay.paths.len()), (1, 2));
        assert_eq!(lay.paths[0][0].len(), 3 * (2 + 1));
        assert_eq!(lay.blocks[0][0].x_cycles.len(), 3);
        assert!(lay.blocks[0][0].x_cycles.iter().all(|c| c.len() == 3));
        assert_eq!(lay.blocks[0][0].y_cycle.len(), 3);
        assert_eq!(inst.target, Some(inst.meta.budget_items.as_ref().unwrap().iter().sum()));
        assert!(inst.decomposition.validate(&inst.graph).unwrap() <= inst.claimed_width_bound);
        let sol = witness(&inst, &phi, &Assignment::new(vec![false, false])).unwrap();
        assert_eq!(objective(&inst, &sol).unwrap(), inst.target);
        assert!(check_solution(&inst, &sol).unwrap());
    }

    #[test]
    fn p2_witness() {
        let phi = CnfFormula::from_dimacs_clauses(3, &[&[1, -2], &[-3, 2]]);
        let inst = reduce_oct(&phi, 2).unwrap();
        assert!(inst.decomposition.validate(&inst.graph).unwrap() <= inst.claimed_width_bound);
        let sol = witness(&inst, &phi, &Assignment::new(vec![true, true, false])).unwrap();
        assert_eq!(objective(&inst, &sol).unwrap(), inst.target);
    }
}
