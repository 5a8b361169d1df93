//! Exhaustive oracles that ignore the decomposition. Enumeration kinds are
//! capped at 24 vertices, search kinds at 64 (bitset width).

use crate::graph::Graph;
use crate::reductions::{two_color, Instance, Kind, Solution};

use super::{Answer, SolveError, Stats};

#[derive(Debug, Clone, Copy)]
pub struct BruteOptions {
    /// DS, Max Cut and OCT enumerate vertex subsets.
    pub enumeration_cap: usize,
    /// IS, coloring and triangle searches use `u64` bitsets; at most 64.
    pub search_cap: usize,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions { enumeration_cap: 24, search_cap: 64 }
    }
}

pub fn brute_force(inst: &Instance) -> Result<Answer, SolveError> {
    brute_force_with(inst, &BruteOptions::default())
}

pub fn brute_force_with(inst: &Instance, opts: &BruteOptions) -> Result<Answer, SolveError> {
    let g = &inst.graph;
    let n = g.num_vertices();
    let enumerated = matches!(inst.kind, Kind::DominatingSet | Kind::MaxCut | Kind::OddCycleTransversal);
    let cap = if enumerated { opts.enumeration_cap } else { opts.search_cap.min(64) };
    if n > cap {
        return Err(SolveError::CapExceeded { kind: inst.kind, n, cap });
    }
    let (optimum, solution) = match inst.kind {
        Kind::IndependentSet => {
            let set = max_independent_set(g);
            (Some(set.len() as i64), Some(Solution::VertexSet(set)))
        }
        Kind::DominatingSet => {
            let set = min_dominating_set(g);
            (Some(set.len() as i64), Some(Solution::VertexSet(set)))
        }
        Kind::MaxCut => {
            let (value, sides) = max_cut(g);
            (Some(value), Some(Solution::Sides(sides)))
        }
        Kind::OddCycleTransversal => {
            let set = min_oct(g);
            (Some(set.len() as i64), Some(Solution::VertexSet(set)))
        }
        Kind::QColoring | Kind::QListColoring => {
            let lists: Vec<Vec<u32>> = (0..n).map(|v| inst.list(v)).collect();
            match list_coloring(g, &lists) {
                Some(cs) => (Some(1), Some(Solution::Colors(cs))),
                None => (None, None),
            }
        }
        Kind::TrianglePacking => {
            let ts = max_triangle_packing(g);
            (Some(ts.len() as i64), Some(Solution::Triangles(ts)))
        }
        Kind::PartitionIntoTriangles => match triangle_partition(g) {
            Some(ts) => (Some(1), Some(Solution::Triangles(ts))),
            None => (None, None),
        },
    };
    Ok(Answer::new(inst, optimum, solution, Stats::default()))
}

fn masks(g: &Graph) -> Vec<u64> {
    (0..g.num_vertices()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u)).collect()
}

fn bits(mut m: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Branch and bound on the highest-degree candidate.
pub fn max_independent_set(g: &Graph) -> Vec<usize> {
    fn go(nb: &[u64], cand: u64, cur: u64, best: &mut u64) {
        if cur.count_ones() + cand.count_ones() <= best.count_ones() {
            return;
        }
        // Vertices with no candidate neighbor are always taken.
        let mut cand = cand;
        let mut cur = cur;
        loop {
            let free = bits(cand).into_iter().filter(|&v| nb[v] & cand == 0).fold(0u64, |m, v| m | 1 << v);
            if free == 0 {
                break;
            }
            cur |= free;
            cand &= !free;
        }
        if cand == 0 {
            if cur.count_ones() > best.count_ones() {
                *best = cur;
            }
            return;
        }
        let v = bits(cand).into_iter().max_by_key(|&v| ((nb[v] & cand).count_ones(), std::cmp::Reverse(v))).unwrap();
        go(nb, cand & !(1 << v) & !nb[v], cur | 1 << v, best);
        go(nb, cand & !(1 << v), cur, best);
    }
    let n = g.num_vertices();
    let nb = masks(g);
    let mut best = 0u64;
    go(&nb, if n == 64 { u64::MAX } else { (1u64 << n) - 1 }, 0, &mut best);
    bits(best)
}

/// Calls `f` on every `k`-subset of `0..n` (as a bitmask) until it returns true.
fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(u64) -> bool) -> bool {
    fn go(start: usize, n: usize, left: usize, cur: u64, f: &mut impl FnMut(u64) -> bool) -> bool {
        if left == 0 {
            return f(cur);
        }
        (start..=n - left).any(|v| go(v + 1, n, left - 1, cur | 1 << v, f))
    }
    go(0, n, k, 0, f)
}

/// Smallest dominating set, subsets by increasing size.
pub fn min_dominating_set(g: &Graph) -> Vec<usize> {
    let n = g.num_vertices();
    let closed: Vec<u64> = masks(g).iter().enumerate().map(|(v, m)| m | 1 << v).collect();
    let all = (1u64 << n) - 1;
    for k in 0..=n {
        let mut found = 0;
        if for_each_subset(n, k, &mut |s| {
            let dom = bits(s).into_iter().fold(0u64, |m, v| m | closed[v]);
            (dom == all).then(|| found = s).is_some()
        }) {
            return bits(found);
        }
    }
    unreachable!("the full vertex set dominates")
}

/// Maximum weighted cut by Gray-code enumeration with vertex 0 fixed to side 0.
pub fn max_cut(g: &Graph) -> (i64, Vec<u8>) {
    let n = g.num_vertices();
    if n == 0 {
        return (0, Vec::new());
    }
    let mut side = vec![0u8; n];
    let mut value = 0i64;
    let mut best = (0i64, 0u64);
    let mut mask = 0u64;
    for i in 1u64..1 << (n - 1) {
        let v = i.trailing_zeros() as usize + 1;
        for &u in g.neighbors(v) {
            let w = g.weight(u, v).unwrap() as i64;
            value += if side[u] == side[v] { w } else { -w };
        }
        side[v] ^= 1;
        mask ^= 1 << v;
        if value > best.0 {
            best = (value, mask);
        }
    }
    (best.0, (0..n).map(|v| (best.1 >> v & 1) as u8).collect())
}

/// Smallest odd cycle transversal, subsets by increasing size.
pub fn min_oct(g: &Graph) -> Vec<usize> {
    let n = g.num_vertices();
    for k in 0..=n {
        let mut found = 0;
        if for_each_subset(n, k, &mut |s| {
            let removed: Vec<bool> = (0..n).map(|v| s >> v & 1 == 1).collect();
            two_color(g, &removed).is_some().then(|| found = s).is_some()
        }) {
            return bits(found);
        }
    }
    unreachable!("removing every vertex leaves a bipartite graph")
}

/// Backtracking list coloring, most constrained vertex first.
pub fn list_coloring(g: &Graph, lists: &[Vec<u32>]) -> Option<Vec<u32>> {
    fn go(g: &Graph, lists: &[Vec<u32>], colors: &mut [u32]) -> bool {
        let options = |v: usize, colors: &[u32]| -> Vec<u32> {
            lists[v].iter().copied().filter(|&c| g.neighbors(v).iter().all(|&u| colors[u] != c)).collect()
        };
        let next = (0..colors.len()).filter(|&v| colors[v] == 0).min_by_key(|&v| options(v, colors).len());
        let Some(v) = next else { return true };
        for c in options(v, colors) {
            colors[v] = c;
            if go(g, lists, colors) {
                return true;
            }
        }
        colors[v] = 0;
        false
    }
    let mut colors = vec![0u32; g.num_vertices()];
    go(g, lists, &mut colors).then_some(colors)
}

fn triangles(g: &Graph) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for &(a, b, _) in g.edges() {
        for &c in g.neighbors(b) {
            if c > b && g.has_edge(a, c) {
                out.push([a, b, c]);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Maximum set of vertex-disjoint triangles: the lowest vertex still in some
/// usable triangle is either left out or covered by one of them.
pub fn max_triangle_packing(g: &Graph) -> Vec<[usize; 3]> {
    struct Search {
        tris: Vec<[usize; 3]>,
        masks: Vec<u64>,
        by_vertex: Vec<Vec<usize>>,
        best: Vec<usize>,
    }
    impl Search {
        fn go(&mut self, blocked: u64, cur: &mut Vec<usize>) {
            let usable: Vec<usize> = (0..self.tris.len()).filter(|&t| self.masks[t] & blocked == 0).collect();
            let touched = usable.iter().fold(0u64, |m, &t| m | self.masks[t]);
            if cur.len() + touched.count_ones() as usize / 3 <= self.best.len() {
                return;
            }
            if touched == 0 {
                self.best = cur.clone();
                return;
            }
            let v = touched.trailing_zeros() as usize;
            for t in self.by_vertex[v].clone() {
                if self.masks[t] & blocked == 0 {
                    cur.push(t);
                    self.go(blocked | self.masks[t], cur);
                    cur.pop();
                }
            }
            self.go(blocked | 1 << v, cur);
        }
    }
    let tris = triangles(g);
    let masks: Vec<u64> = tris.iter().map(|t| t.iter().fold(0, |m, &v| m | 1 << v)).collect();
    let mut by_vertex = vec![Vec::new(); g.num_vertices()];
    for (i, t) in tris.iter().enumerate() {
        for &v in t {
            by_vertex[v].push(i);
        }
    }
    let mut s = Search { tris, masks, by_vertex, best: Vec::new() };
    s.go(0, &mut Vec::new());
    s.best.iter().map(|&t| s.tris[t]).collect()
}

/// Exact cover of the vertex set by triangles.
pub fn triangle_partition(g: &Graph) -> Option<Vec<[usize; 3]>> {
    fn go(n: usize, tris: &[[usize; 3]], by_vertex: &[Vec<usize>], covered: u64, cur: &mut Vec<usize>) -> bool {
        if covered.count_ones() as usize == n {
            return true;
        }
        let v = (!covered).trailing_zeros() as usize;
        for &t in &by_vertex[v] {
            let m = tris[t].iter().fold(0u64, |m, &u| m | 1 << u);
            if m & covered == 0 {
                cur.push(t);
                if go(n, tris, by_vertex, covered | m, cur) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    let n = g.num_vertices();
    if !n.is_multiple_of(3) {
        return None;
    }
    let tris = triangles(g);
    let mut by_vertex = vec![Vec::new(); n];
    for (i, t) in tris.iter().enumerate() {
        for &v in t {
            by_vertex[v].push(i);
        }
    }
    let mut cur = Vec::new();
    go(n, &tris, &by_vertex, 0, &mut cur).then(|| cur.iter().map(|&t| tris[t]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::check_solution;

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::with_vertices(n);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n);
        }
        g
    }

    #[test]
    fn five_cycle() {
        let g = cycle(5);
        assert_eq!(max_cut(&g).0, 4);
        assert_eq!(min_oct(&g).len(), 1);
        assert_eq!(max_independent_set(&g).len(), 2);
        assert_eq!(min_dominating_set(&g).len(), 2);
        assert!(list_coloring(&g, &vec![vec![1, 2, 3]; 5]).is_some());
        assert!(list_coloring(&g, &vec![vec![1, 2]; 5]).is_none());
    }

    #[test]
    fn empty_graph_meets_zero_target() {
        for kind in [Kind::IndependentSet, Kind::MaxCut, Kind::TrianglePacking] {
            let inst = Instance::from_graph(kind, Graph::new(), Some(0));
            let a = brute_force(&inst).unwrap();
            assert!(a.verdict, "{kind}");
        }
    }

    #[test]
    fn witnesses_check() {
        let g = cycle(6);
        for kind in Kind::ALL {
            let inst = Instance::from_graph(kind, g.clone(), Some(0));
            let a = brute_force(&inst).unwrap();
            if let Some(sol) = &a.solution {
                assert_eq!(crate::reductions::objective(&inst, sol).unwrap(), a.optimum, "{kind}");
            }
        }
        let ds = Instance::from_graph(Kind::DominatingSet, g, Some(2));
        assert!(check_solution(&ds, &brute_force(&ds).unwrap().solution.unwrap()).unwrap());
    }

    #[test]
    fn caps() {
        let inst = Instance::from_graph(Kind::DominatingSet, Graph::with_vertices(25), Some(0));
        assert!(matches!(brute_force(&inst), Err(SolveError::CapExceeded { .. })));
    }

    #[test]
    fn packing_and_partition() {
        let mut g = Graph::with_vertices(6);
        for (a, b) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)] {
            g.add_edge(a, b);
        }
        assert_eq!(max_triangle_packing(&g).len(), 2);
        assert_eq!(triangle_partition(&g).unwrap().len(), 2);
        g.add_vertex("x");
        assert!(triangle_partition(&g).is_none());
    }
}
