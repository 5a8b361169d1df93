//! Dynamic programming over nice path decompositions. States are packed into
//! a `u128` with a fixed number of bits per live vertex; slots are recycled
//! on forget so keys stay canonical.

use rustc_hash::FxHashMap;

use crate::decomposition::{NicePathDecomposition, PathDecomposition, Step};
use crate::graph::Graph;
use crate::reductions::{Instance, Kind, Solution};

use super::{pairwise, Answer, SolveError, Stats};

pub const DEFAULT_STATE_CAP: usize = 1 << 28;

#[derive(Debug, Clone)]
pub struct DpOptions {
    /// Maximum number of states in any layer.
    pub state_cap: usize,
    pub witness: bool,
    /// Merge false twins into one weighted vertex (IS and OCT only).
    pub compress_twins: bool,
    /// For minimization kinds: search for solutions of cost at most this value,
    /// pruning states that provably exceed it. The optimum is exact whenever it
    /// is within the bound; otherwise the answer is infeasible.
    pub cost_bound: Option<i64>,
    /// Minimization kinds with a target: start from `cost_bound = target` and
    /// widen until a solution appears.
    pub deepen: bool,
    /// OCT: fold vertices of degree at most two into cost tables and merge
    /// states that differ by swapping the two sides.
    pub eliminate: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { state_cap: DEFAULT_STATE_CAP, witness: false, compress_twins: true, cost_bound: None, deepen: true, eliminate: true }
    }
}

// Slot values.
const IS_IN: u32 = 1;
const DS_DOMINATED: u32 = 1;
const DS_IN: u32 = 2;
const OCT_Z: u32 = 0;
const PACK_USED: u32 = 1;

/// Per-vertex alphabet size: the base of the state-count bound.
pub fn base(inst: &Instance) -> Option<u64> {
    match inst.kind {
        Kind::IndependentSet | Kind::MaxCut => Some(2),
        Kind::DominatingSet | Kind::OddCycleTransversal => Some(3),
        Kind::QColoring | Kind::QListColoring => Some(inst.num_colors() as u64),
        Kind::TrianglePacking | Kind::PartitionIntoTriangles => None,
    }
}

fn bits_per_slot(inst: &Instance) -> u32 {
    match inst.kind {
        Kind::IndependentSet | Kind::MaxCut | Kind::TrianglePacking | Kind::PartitionIntoTriangles => 1,
        Kind::DominatingSet | Kind::OddCycleTransversal => 2,
        Kind::QColoring | Kind::QListColoring => 32 - inst.num_colors().leading_zeros(),
    }
}

#[derive(Clone, Copy)]
struct Entry {
    key: u128,
    score: i64,
    parent: u32,
}

struct Layer {
    entries: Vec<Entry>,
    index: FxHashMap<u128, u32>,
}

impl Layer {
    fn with_capacity(n: usize) -> Self {
        Layer { entries: Vec::with_capacity(n), index: FxHashMap::with_capacity_and_hasher(n, Default::default()) }
    }

    /// Keeps the best score; ties go to the parent with the smaller key.
    fn offer(&mut self, key: u128, score: i64, parent: u32, parent_key: u128, prev: &[Entry]) {
        match self.index.get(&key) {
            Some(&i) => {
                let e = &mut self.entries[i as usize];
                if score > e.score || (score == e.score && parent_key < prev[e.parent as usize].key) {
                    e.score = score;
                    e.parent = parent;
                }
            }
            None => {
                self.index.insert(key, self.entries.len() as u32);
                self.entries.push(Entry { key, score, parent });
            }
        }
    }
}

/// Introduce-step bookkeeping kept for witness reconstruction.
struct IntroRecord {
    vertex: usize,
    slot: u32,
    neighbor_slots: Vec<(usize, u32)>,
}

struct Problem<'a> {
    kind: Kind,
    graph: &'a Graph,
    weights: Vec<i64>,
    lists: Vec<Vec<u32>>,
    bits: u32,
}

impl Problem<'_> {
    fn get(&self, key: u128, slot: u32) -> u32 {
        ((key >> (slot * self.bits)) & ((1u128 << self.bits) - 1)) as u32
    }

    fn set(&self, key: u128, slot: u32, val: u32) -> u128 {
        let shift = slot * self.bits;
        (key & !(((1u128 << self.bits) - 1) << shift)) | ((val as u128) << shift)
    }

    /// Calls `emit(child_key, gain)` for every extension of `key` by `v`.
    fn introduce(&self, key: u128, v: usize, slot: u32, nbrs: &[(usize, u32)], mut emit: impl FnMut(u128, i64)) {
        let w = self.weights[v];
        match self.kind {
            Kind::IndependentSet => {
                emit(key, 0);
                if nbrs.iter().all(|&(_, s)| self.get(key, s) != IS_IN) {
                    emit(self.set(key, slot, IS_IN), w);
                }
            }
            Kind::DominatingSet => {
                let dominated = nbrs.iter().any(|&(_, s)| self.get(key, s) == DS_IN);
                emit(self.set(key, slot, if dominated { DS_DOMINATED } else { 0 }), 0);
                let mut k = self.set(key, slot, DS_IN);
                for &(_, s) in nbrs {
                    if self.get(k, s) == 0 {
                        k = self.set(k, s, DS_DOMINATED);
                    }
                }
                emit(k, -w);
            }
            Kind::MaxCut => {
                for side in 0..2 {
                    let gain: i64 = nbrs
                        .iter()
                        .filter(|&&(_, s)| self.get(key, s) != side)
                        .map(|&(u, _)| self.graph.weight(u, v).unwrap_or(1) as i64)
                        .sum();
                    emit(self.set(key, slot, side), gain);
                }
            }
            Kind::QColoring | Kind::QListColoring => {
                for &c in &self.lists[v] {
                    if nbrs.iter().all(|&(_, s)| self.get(key, s) != c) {
                        emit(self.set(key, slot, c), 0);
                    }
                }
            }
            Kind::OddCycleTransversal => {
                emit(self.set(key, slot, OCT_Z), -w);
                for side in 1..=2 {
                    if nbrs.iter().all(|&(_, s)| self.get(key, s) != side) {
                        emit(self.set(key, slot, side), 0);
                    }
                }
            }
            Kind::TrianglePacking | Kind::PartitionIntoTriangles => {
                emit(key, 0);
                let free: Vec<&(usize, u32)> = nbrs.iter().filter(|&&(_, s)| self.get(key, s) != PACK_USED).collect();
                for (i, &&(a, sa)) in free.iter().enumerate() {
                    for &&(b, sb) in &free[i + 1..] {
                        if self.graph.has_edge(a, b) {
                            let k = self.set(self.set(self.set(key, sa, PACK_USED), sb, PACK_USED), slot, PACK_USED);
                            emit(k, 1);
                        }
                    }
                }
            }
        }
    }

    fn may_forget(&self, key: u128, slot: u32) -> bool {
        match self.kind {
            Kind::DominatingSet => self.get(key, slot) != 0,
            Kind::PartitionIntoTriangles => self.get(key, slot) == PACK_USED,
            _ => true,
        }
    }
}

/// Groups vertices with identical open neighborhoods; returns the class of
/// each representative (first member), in vertex order.
pub fn false_twin_classes(g: &Graph) -> Vec<Vec<usize>> {
    let mut by_nbhd: FxHashMap<Vec<usize>, usize> = FxHashMap::default();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.num_vertices() {
        let mut nb = g.neighbors(v).to_vec();
        nb.sort_unstable();
        if nb.is_empty() {
            classes.push(vec![v]);
            continue;
        }
        match by_nbhd.get(&nb) {
            Some(&c) => classes[c].push(v),
            None => {
                by_nbhd.insert(nb, classes.len());
                classes.push(vec![v]);
            }
        }
    }
    classes
}

/// Greedy packing of odd cycles in which vertex `v` lies on at most
/// `capacity[v]` cycles. Any odd cycle transversal then weighs at least the
/// number of packed cycles. Cycles are found by depth-bounded BFS from the
/// vertices in `order`.
pub fn odd_cycle_packing(g: &Graph, capacity: &[i64], order: &[usize]) -> Vec<Vec<usize>> {
    const MAX_DEPTH: usize = 4;
    let n = g.num_vertices();
    let mut out = Vec::new();
    let mut residual = capacity.to_vec();
    // Short cycles first: a pass per BFS depth.
    for max_depth in 1..=MAX_DEPTH {
        pack_pass(g, &mut residual, order, max_depth, &mut out);
    }
    debug_assert!(out.iter().flatten().all(|&v| v < n));
    out
}

fn pack_pass(g: &Graph, residual: &mut [i64], order: &[usize], max_depth: usize, out: &mut Vec<Vec<usize>>) {
    let n = g.num_vertices();
    let mut depth = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for &v in order {
        while residual[v] > 0 {
            let mut seen = vec![v];
            depth[v] = 0;
            let mut frontier = vec![v];
            let mut hit = None;
            'bfs: for d in 0..max_depth {
                let mut next = Vec::new();
                for &x in &frontier {
                    for &y in g.neighbors(x) {
                        if residual[y] <= 0 || y == parent[x] {
                            continue;
                        }
                        if depth[y] == usize::MAX {
                            depth[y] = d + 1;
                            parent[y] = x;
                            seen.push(y);
                            next.push(y);
                        } else if depth[y] == d {
                            hit = Some((x, y));
                            break 'bfs;
                        }
                    }
                }
                for &x in &next {
                    for &y in g.neighbors(x) {
                        if residual[y] > 0 && depth[y] == d + 1 && parent[x] != y && parent[y] != x {
                            hit = Some((x, y));
                            break 'bfs;
                        }
                    }
                }
                frontier = next;
            }
            let cycle = hit.map(|(x, y)| {
                // Walk both tree paths up to their meeting point.
                let (mut a, mut b) = (x, y);
                let (mut left, mut right) = (vec![a], vec![b]);
                while a != b {
                    a = parent[a];
                    b = parent[b];
                    left.push(a);
                    right.push(b);
                }
                right.pop();
                left.extend(right.into_iter().rev());
                left
            });
            for z in seen {
                depth[z] = usize::MAX;
                parent[z] = usize::MAX;
            }
            let Some(cycle) = cycle else { break };
            for &z in &cycle {
                residual[z] -= 1;
            }
            out.push(cycle);
        }
    }
}

pub fn solve(inst: &Instance, nice: &NicePathDecomposition) -> Result<Answer, SolveError> {
    solve_with(inst, nice, &DpOptions::default())
}

/// Nicifies the instance's own decomposition and solves.
pub fn solve_instance(inst: &Instance, opts: &DpOptions) -> Result<Answer, SolveError> {
    let nice = inst.decomposition.nicify(&inst.graph)?;
    solve_with(inst, &nice, opts)
}

pub fn solve_with(inst: &Instance, nice: &NicePathDecomposition, opts: &DpOptions) -> Result<Answer, SolveError> {
    let minimize = matches!(inst.kind, Kind::DominatingSet | Kind::OddCycleTransversal);
    if let (true, true, None, Some(target)) = (minimize, opts.deepen, opts.cost_bound, inst.target) {
        let n = inst.graph.num_vertices() as i64;
        let mut slack = 0;
        let mut merged = Stats::default();
        loop {
            let bound = target + slack;
            let o = DpOptions { cost_bound: (bound < n).then_some(bound), deepen: false, ..opts.clone() };
            let mut a = solve_with(inst, nice, &o)?;
            merged.transitions += a.stats.transitions;
            merged.max_states = merged.max_states.max(a.stats.max_states);
            merged.per_step.extend_from_slice(&a.stats.per_step);
            if a.optimum.is_some() || o.cost_bound.is_none() {
                a.stats = merged;
                return Ok(a);
            }
            slack = 2 * slack + 1;
        }
    }
    let twins_ok = matches!(inst.kind, Kind::IndependentSet | Kind::OddCycleTransversal);
    let pairwise = inst.kind == Kind::OddCycleTransversal && opts.eliminate;
    if opts.compress_twins && twins_ok || pairwise {
        let classes = if opts.compress_twins {
            false_twin_classes(&inst.graph)
        } else {
            (0..inst.graph.num_vertices()).map(|v| vec![v]).collect()
        };
        if classes.len() < inst.graph.num_vertices() || pairwise {
            return solve_compressed(inst, nice, classes, opts);
        }
    }
    let weights = vec![1; inst.graph.num_vertices()];
    run(inst, &inst.graph, &weights, nice, opts)
}

fn solve_compressed(
    inst: &Instance,
    nice: &NicePathDecomposition,
    classes: Vec<Vec<usize>>,
    opts: &DpOptions,
) -> Result<Answer, SolveError> {
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let (small, map) = inst.graph.induced(&reps);
    let weights: Vec<i64> = classes.iter().map(|c| c.len() as i64).collect();
    // Restricting the bags keeps a valid decomposition of the induced graph.
    let mut bags: Vec<Vec<usize>> = Vec::new();
    let mut live: Vec<usize> = Vec::new();
    let mut last_was_intro = false;
    for step in &nice.steps {
        match step {
            Step::Introduce { vertex, .. } => {
                if let Some(v) = map[*vertex] {
                    live.push(v);
                    last_was_intro = true;
                }
            }
            Step::Forget(u) => {
                if let Some(v) = map[*u] {
                    if last_was_intro {
                        bags.push(live.clone());
                        last_was_intro = false;
                    }
                    live.retain(|&x| x != v);
                }
            }
        }
    }
    if last_was_intro {
        bags.push(live);
    }
    let small_nice = PathDecomposition::new(bags).nicify(&small)?;
    let mut answer = if inst.kind == Kind::OddCycleTransversal && opts.eliminate {
        let out = pairwise::solve_oct(&small, &weights, &small_nice, opts.cost_bound, opts.witness, opts.state_cap)?;
        Answer::new(inst, out.cost, out.transversal.map(Solution::VertexSet), out.stats)
    } else {
        run(inst, &small, &weights, &small_nice, opts)?
    };
    if let Some(Solution::VertexSet(vs)) = &answer.solution {
        let mut full: Vec<usize> = vs.iter().flat_map(|&v| classes[v].iter().copied()).collect();
        full.sort_unstable();
        answer.solution = Some(Solution::VertexSet(full));
    }
    Ok(answer)
}

fn run(
    inst: &Instance,
    g: &Graph,
    weights: &[i64],
    nice: &NicePathDecomposition,
    opts: &DpOptions,
) -> Result<Answer, SolveError> {
    let n = g.num_vertices();
    let bits = bits_per_slot(inst);
    let max_slots = 128 / bits;
    let lists = match inst.kind {
        Kind::QColoring | Kind::QListColoring => {
            if inst.graph.num_vertices() != n {
                return Err(SolveError::Unsupported("compressed coloring".into()));
            }
            (0..n).map(|v| inst.list(v)).collect()
        }
        _ => Vec::new(),
    };
    let prob = Problem { kind: inst.kind, graph: g, weights: weights.to_vec(), lists, bits };

    let minimize = matches!(inst.kind, Kind::DominatingSet | Kind::OddCycleTransversal);
    let bound = if minimize { opts.cost_bound } else { None };
    let mut cycle_bound = match (inst.kind, bound) {
        (Kind::OddCycleTransversal, Some(_)) => Some(CycleBound::new(g, weights, nice)),
        _ => None,
    };

    let mut slot_of = vec![u32::MAX; n];
    let mut free_slots: Vec<u32> = (0..max_slots).rev().collect();
    let mut layers: Vec<Vec<Entry>> = Vec::new();
    let mut intros: Vec<Option<IntroRecord>> = Vec::new();
    let mut cur = vec![Entry { key: 0, score: 0, parent: 0 }];
    let mut stats = Stats::default();
    let mut live = 0usize;

    for step in &nice.steps {
        let mut next = Layer::with_capacity(cur.len());
        let mut record = None;
        match step {
            Step::Introduce { vertex, earlier_neighbors } => {
                let v = *vertex;
                let slot = free_slots.pop().ok_or(SolveError::WidthTooLarge { live: live + 1, max: max_slots as usize })?;
                slot_of[v] = slot;
                live += 1;
                let nbrs: Vec<(usize, u32)> = earlier_neighbors.iter().map(|&u| (u, slot_of[u])).collect();
                // Scores are negated costs; a child survives when its cost plus
                // the remaining lower bound stays within the bound.
                let (floor, open) = match (&mut cycle_bound, bound) {
                    (Some(cb), Some(b)) => {
                        cb.introduce(v);
                        (cb.untouched - b, cb.open_slots(&slot_of))
                    }
                    (None, Some(b)) => (-b, Vec::new()),
                    _ => (i64::MIN, Vec::new()),
                };
                let unhit = |k: u128| -> i64 {
                    open.iter().filter(|slots| slots.iter().all(|&s| prob.get(k, s) != OCT_Z)).count() as i64
                };
                for (pi, e) in cur.iter().enumerate() {
                    prob.introduce(e.key, v, slot, &nbrs, |k, gain| {
                        let score = e.score + gain;
                        if score >= floor && (open.is_empty() || score >= floor + unhit(k)) {
                            next.offer(k, score, pi as u32, e.key, &cur);
                        }
                    });
                    stats.transitions += 1;
                }
                record = Some(IntroRecord { vertex: v, slot, neighbor_slots: nbrs });
            }
            Step::Forget(v) => {
                if let Some(cb) = &mut cycle_bound {
                    cb.forget(*v);
                }
                let slot = slot_of[*v];
                for (pi, e) in cur.iter().enumerate() {
                    if prob.may_forget(e.key, slot) {
                        next.offer(prob.set(e.key, slot, 0), e.score, pi as u32, e.key, &cur);
                    }
                    stats.transitions += 1;
                }
                slot_of[*v] = u32::MAX;
                free_slots.push(slot);
                live -= 1;
            }
        }
        if next.entries.len() > opts.state_cap {
            return Err(SolveError::StateCap { states: next.entries.len(), cap: opts.state_cap });
        }
        stats.max_states = stats.max_states.max(next.entries.len());
        stats.per_step.push((live as u32, next.entries.len() as u64));
        let prev = std::mem::replace(&mut cur, next.entries);
        if opts.witness {
            layers.push(prev);
            intros.push(record);
        }
        if cur.is_empty() {
            break;
        }
    }

    let feasibility = matches!(inst.kind, Kind::QColoring | Kind::QListColoring | Kind::PartitionIntoTriangles);
    let best = cur.iter().enumerate().max_by_key(|(_, e)| (e.score, std::cmp::Reverse(e.key)));
    let optimum = best.map(|(_, e)| {
        if feasibility {
            1
        } else if minimize {
            -e.score
        } else {
            e.score
        }
    });
    let solution = match (opts.witness, best) {
        (true, Some((idx, _))) => {
            layers.push(cur.clone());
            Some(reconstruct(&prob, inst.kind, n, &layers, &intros, idx))
        }
        _ => None,
    };
    Ok(Answer::new(inst, optimum, solution, stats))
}

/// Tracks packed odd cycles along the sweep: cycles not yet touched count
/// toward the remaining cost unconditionally, partially introduced ones
/// (all introduced members still live) count when no member is in Z.
pub(super) struct CycleBound {
    cycles: Vec<Vec<usize>>,
    cycles_of: Vec<Vec<u32>>,
    introduced: Vec<u32>,
    dead: Vec<bool>,
    pub(super) untouched: i64,
    open: Vec<u32>,
}

impl CycleBound {
    fn new(g: &Graph, weights: &[i64], nice: &NicePathDecomposition) -> Self {
        let order: Vec<usize> = nice
            .steps
            .iter()
            .filter_map(|s| match s {
                Step::Introduce { vertex, .. } => Some(*vertex),
                Step::Forget(_) => None,
            })
            .collect();
        Self::from_cycles(odd_cycle_packing(g, weights, &order), g.num_vertices())
    }

    pub(super) fn from_cycles(cycles: Vec<Vec<usize>>, n: usize) -> Self {
        let mut cycles_of = vec![Vec::new(); n];
        for (c, cyc) in cycles.iter().enumerate() {
            for &v in cyc {
                cycles_of[v].push(c as u32);
            }
        }
        CycleBound {
            introduced: vec![0; cycles.len()],
            dead: vec![false; cycles.len()],
            untouched: cycles.len() as i64,
            open: Vec::new(),
            cycles,
            cycles_of,
        }
    }

    pub(super) fn introduce(&mut self, v: usize) {
        for &c in &self.cycles_of[v] {
            let c = c as usize;
            self.introduced[c] += 1;
            if self.introduced[c] == 1 {
                self.untouched -= 1;
                self.open.push(c as u32);
            }
            if self.introduced[c] as usize == self.cycles[c].len() {
                // Fully live: the parity constraints already force a Z vertex.
                self.dead[c] = true;
            }
        }
        let dead = &self.dead;
        self.open.retain(|&c| !dead[c as usize]);
    }

    pub(super) fn forget(&mut self, v: usize) {
        for &c in &self.cycles_of[v] {
            self.dead[c as usize] = true;
        }
        let dead = &self.dead;
        self.open.retain(|&c| !dead[c as usize]);
    }

    /// Slots of the live members of each open cycle.
    pub(super) fn open_slots(&self, slot_of: &[u32]) -> Vec<Vec<u32>> {
        self.open
            .iter()
            .map(|&c| {
                self.cycles[c as usize].iter().map(|&v| slot_of[v]).filter(|&s| s != u32::MAX).collect()
            })
            .collect()
    }
}

fn reconstruct(
    prob: &Problem,
    kind: Kind,
    n: usize,
    layers: &[Vec<Entry>],
    intros: &[Option<IntroRecord>],
    final_idx: usize,
) -> Solution {
    let mut value = vec![0u32; n];
    let mut triangles = Vec::new();
    let mut idx = final_idx;
    // layers[i + 1] is the layer after step i.
    for i in (0..intros.len()).rev() {
        let e = layers[i + 1][idx];
        let parent = layers[i][e.parent as usize];
        if let Some(rec) = &intros[i] {
            value[rec.vertex] = prob.get(e.key, rec.slot);
            if matches!(kind, Kind::TrianglePacking | Kind::PartitionIntoTriangles) && value[rec.vertex] == PACK_USED {
                let closed: Vec<usize> = rec
                    .neighbor_slots
                    .iter()
                    .filter(|&&(_, s)| prob.get(parent.key, s) != PACK_USED && prob.get(e.key, s) == PACK_USED)
                    .map(|&(u, _)| u)
                    .collect();
                if let [a, b] = closed[..] {
                    triangles.push([a, b, rec.vertex]);
                }
            }
        }
        idx = e.parent as usize;
    }
    match kind {
        Kind::IndependentSet => Solution::VertexSet((0..n).filter(|&v| value[v] == IS_IN).collect()),
        Kind::DominatingSet => Solution::VertexSet((0..n).filter(|&v| value[v] == DS_IN).collect()),
        Kind::OddCycleTransversal => Solution::VertexSet((0..n).filter(|&v| value[v] == OCT_Z).collect()),
        Kind::MaxCut => Solution::Sides(value.iter().map(|&x| x as u8).collect()),
        Kind::QColoring | Kind::QListColoring => Solution::Colors(value),
        Kind::TrianglePacking | Kind::PartitionIntoTriangles => {
            for t in &mut triangles {
                t.sort_unstable();
            }
            triangles.sort_unstable();
            Solution::Triangles(triangles)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::check_solution;

    fn k3() -> Graph {
        let mut g = Graph::with_vertices(3);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(0, 2);
        g
    }

    fn optimum(kind: Kind, g: Graph) -> Option<i64> {
        let inst = Instance::from_graph(kind, g, Some(0));
        let opts = DpOptions { witness: true, ..Default::default() };
        let a = solve_instance(&inst, &opts).unwrap();
        if let Some(sol) = &a.solution {
            assert_eq!(crate::reductions::objective(&inst, sol).unwrap(), a.optimum, "{kind}");
        }
        a.optimum
    }

    #[test]
    fn triangle_examples() {
        assert_eq!(optimum(Kind::IndependentSet, k3()), Some(1));
        assert_eq!(optimum(Kind::DominatingSet, k3()), Some(1));
        assert_eq!(optimum(Kind::MaxCut, k3()), Some(2));
        assert_eq!(optimum(Kind::QColoring, k3()), Some(1));
        assert_eq!(optimum(Kind::OddCycleTransversal, k3()), Some(1));
        assert_eq!(optimum(Kind::PartitionIntoTriangles, k3()), Some(1));
        assert_eq!(optimum(Kind::TrianglePacking, k3()), Some(1));
    }

    #[test]
    fn infeasible_coloring() {
        let mut g = Graph::with_vertices(4);
        for u in 0..4 {
            for v in u + 1..4 {
                g.add_edge(u, v);
            }
        }
        assert_eq!(optimum(Kind::QColoring, g), None);
    }

    #[test]
    fn twins_expand_in_witness() {
        // K_{2,3}: IS 3, OCT 0 with twin classes of size 2 and 3.
        let mut g = Graph::with_vertices(5);
        for a in 0..2 {
            for b in 2..5 {
                g.add_edge(a, b);
            }
        }
        assert_eq!(false_twin_classes(&g).len(), 2);
        assert_eq!(optimum(Kind::IndependentSet, g.clone()), Some(3));
        assert_eq!(optimum(Kind::OddCycleTransversal, g), Some(0));
    }

    #[test]
    fn state_cap_is_an_error() {
        let inst = Instance::from_graph(Kind::DominatingSet, Graph::with_vertices(6), Some(6));
        let opts = DpOptions { state_cap: 4, ..Default::default() };
        assert!(matches!(solve_instance(&inst, &opts), Err(SolveError::StateCap { .. })));
    }

    #[test]
    fn witness_passes_check() {
        let mut g = Graph::with_vertices(5);
        for v in 0..5 {
            g.add_edge(v, (v + 1) % 5);
        }
        let inst = Instance::from_graph(Kind::DominatingSet, g, Some(2));
        let a = solve_instance(&inst, &DpOptions { witness: true, ..Default::default() }).unwrap();
        assert_eq!(a.optimum, Some(2));
        assert!(check_solution(&inst, a.solution.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn packed_cycles_are_disjoint_odd_cycles() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let g = crate::suite::random_graph(&mut rng, 10, 0.4);
            let order: Vec<usize> = (0..10).collect();
            let mut used = [false; 10];
            for c in odd_cycle_packing(&g, &[1; 10], &order) {
                assert!(c.len() % 2 == 1 && c.len() >= 3, "{c:?}");
                for (i, &v) in c.iter().enumerate() {
                    assert!(!std::mem::replace(&mut used[v], true), "{c:?}");
                    assert!(g.has_edge(v, c[(i + 1) % c.len()]), "{c:?}");
                }
            }
        }
    }
}
