//! Odd cycle transversal as a pairwise cost model over the values Z, L, R.
//! Vertices of degree at most two are folded into cost tables on their
//! neighbors before the sweep, and states are merged under the L/R swap.

use std::rc::Rc;

use rustc_hash::FxHashMap;

use crate::decomposition::{NicePathDecomposition, Step};
use crate::graph::Graph;

use super::dp::{odd_cycle_packing, CycleBound};
use super::{SolveError, Stats};

const INF: i64 = i64::MAX / 4;
/// Vertices tracked exactly by the backward bound.
const LOOKAHEAD_KEEP: usize = 9;
const PART_KEEP: usize = 14;
const Z: usize = 0;
/// `t[a][b]`: cost when the row vertex takes `a` and the column vertex `b`.
type Table = [[i64; 3]; 3];

fn parity_table() -> Table {
    let mut t = [[0; 3]; 3];
    t[1][1] = INF;
    t[2][2] = INF;
    t
}

fn transpose(t: &Table) -> Table {
    let mut out = [[0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            out[b][a] = t[a][b];
        }
    }
    out
}

fn plus(a: i64, b: i64) -> i64 {
    (a + b).min(INF)
}

fn table_min(t: &Table) -> i64 {
    t.iter().flatten().copied().min().unwrap_or(0)
}

fn forces_parity(t: &Table) -> bool {
    t[1][1] >= INF && t[2][2] >= INF
}

struct Model {
    unary: Vec<[i64; 3]>,
    /// `adj[u][v][su][sv]`; `adj[v][u]` holds the transpose.
    adj: Vec<FxHashMap<usize, Table>>,
    constant: i64,
}

/// What is needed to pick an eliminated vertex's value once its neighbors
/// are fixed. Tables are indexed `[neighbor][vertex]`.
struct Elimination {
    vertex: usize,
    unary: [i64; 3],
    nbrs: Vec<(usize, Table)>,
}

impl Elimination {
    fn best(&self, value: &[usize]) -> usize {
        (0..3)
            .min_by_key(|&s| self.nbrs.iter().fold(self.unary[s], |acc, (u, t)| plus(acc, t[value[*u]][s])))
            .unwrap()
    }
}

impl Model {
    fn oct(g: &Graph, weights: &[i64]) -> Self {
        let n = g.num_vertices();
        let mut m = Model {
            unary: weights.iter().map(|&w| [w, 0, 0]).collect(),
            adj: vec![FxHashMap::default(); n],
            constant: 0,
        };
        for &(u, v, _) in g.edges() {
            m.add_table(u, v, &parity_table());
        }
        m
    }

    fn add_table(&mut self, u: usize, v: usize, t: &Table) {
        let e = self.adj[u].entry(v).or_insert([[0; 3]; 3]);
        for a in 0..3 {
            for b in 0..3 {
                e[a][b] = plus(e[a][b], t[a][b]);
            }
        }
        let fwd = *e;
        self.adj[v].insert(u, transpose(&fwd));
    }

    fn eliminate(&mut self, v: usize) -> Elimination {
        let mut nbrs: Vec<(usize, Table)> = self.adj[v].drain().map(|(u, t)| (u, transpose(&t))).collect();
        nbrs.sort_unstable_by_key(|&(u, _)| u);
        for &(u, _) in &nbrs {
            self.adj[u].remove(&v);
        }
        let uv = self.unary[v];
        match nbrs[..] {
            [] => self.constant += uv.iter().copied().min().unwrap(),
            [(u, t)] => {
                for su in 0..3 {
                    let best = (0..3).map(|sv| plus(uv[sv], t[su][sv])).min().unwrap();
                    self.unary[u][su] = plus(self.unary[u][su], best);
                }
            }
            [(u, tu), (w, tw)] => {
                let mut t = [[0; 3]; 3];
                for su in 0..3 {
                    for sw in 0..3 {
                        t[su][sw] = (0..3).map(|sv| plus(plus(uv[sv], tu[su][sv]), tw[sw][sv])).min().unwrap();
                    }
                }
                self.add_table(u, w, &t);
            }
            _ => unreachable!("only vertices of degree at most two are eliminated"),
        }
        Elimination { vertex: v, unary: uv, nbrs }
    }
}

pub(super) struct Outcome {
    pub cost: Option<i64>,
    pub transversal: Option<Vec<usize>>,
    pub stats: Stats,
}

#[derive(Clone, Copy)]
struct Entry {
    key: u128,
    cost: i64,
    parent: u32,
    /// The stored key is the L/R swap of the transition's result.
    flipped: bool,
}

struct Layer {
    entries: Vec<Entry>,
    index: FxHashMap<u128, u32>,
}

impl Layer {
    fn offer(&mut self, e: Entry, prev: &[Entry]) {
        match self.index.get(&e.key) {
            Some(&i) => {
                let cur = &mut self.entries[i as usize];
                if e.cost < cur.cost || (e.cost == cur.cost && prev[e.parent as usize].key < prev[cur.parent as usize].key)
                {
                    *cur = e;
                }
            }
            None => {
                self.index.insert(e.key, self.entries.len() as u32);
                self.entries.push(e);
            }
        }
    }
}

const LOW_BITS: u128 = 0x5555_5555_5555_5555_5555_5555_5555_5555;

fn swap_sides(key: u128) -> u128 {
    ((key & LOW_BITS) << 1) | ((key >> 1) & LOW_BITS)
}

fn canonical(key: u128) -> (u128, bool) {
    let s = swap_sides(key);
    if s < key {
        (s, true)
    } else {
        (key, false)
    }
}

fn get(key: u128, slot: u32) -> usize {
    ((key >> (2 * slot)) & 3) as usize
}

fn set(key: u128, slot: u32, val: usize) -> u128 {
    (key & !(3u128 << (2 * slot))) | ((val as u128) << (2 * slot))
}

enum Event {
    Intro(usize),
    Forget(usize),
}

/// Lower bounds on the cost still to come after each introduce event, from
/// a backward pass that tracks at most `keep` live vertices exactly. Dropped
/// vertices are relaxed: every later term picks their value independently.
struct Lookahead {
    after: Vec<Option<Rc<Snapshot>>>,
}

/// `(slots, table)`: digit j of a table index is the value in `slots[j]`.
type Snapshot = (Vec<u32>, Vec<i32>);

impl Lookahead {
    /// Only vertices with `member` set are tracked; terms they share with
    /// other vertices are relaxed like dropped vertices.
    fn new(
        model: &Model,
        events: &[Event],
        position: &[usize],
        slot: &[u32],
        keep: usize,
        member: impl Fn(usize) -> bool,
    ) -> Self {
        let n = model.unary.len();
        let pow3: Vec<usize> = (0..=keep).map(|k| 3usize.pow(k as u32)).collect();
        let mut intro_at = vec![0usize; n];
        for (i, ev) in events.iter().enumerate() {
            if let Event::Intro(v) = *ev {
                intro_at[v] = i;
            }
        }
        // Event indices at which a vertex's value is read, ascending.
        let mut uses: Vec<Vec<usize>> = vec![Vec::new(); n];
        for ev in events {
            if let Event::Intro(v) = *ev {
                uses[v].push(intro_at[v]);
                for &u in model.adj[v].keys() {
                    if position[u] < position[v] {
                        uses[u].push(intro_at[v]);
                    }
                }
            }
        }
        let next_use = |d: usize, before: usize| -> usize {
            let k = uses[d].partition_point(|&x| x < before);
            if k == 0 {
                0
            } else {
                uses[d][k - 1]
            }
        };

        let mut after = vec![None; events.len()];
        let mut kept: Vec<usize> = Vec::new();
        let mut table: Vec<i64> = vec![0];
        let mut digits = vec![0usize; keep + 1];
        let mut snapshot: Option<Rc<(Vec<u32>, Vec<i32>)>> = None;
        for i in (0..events.len()).rev() {
            let (Event::Intro(v) | Event::Forget(v)) = events[i];
            if let Event::Intro(_) = events[i] {
                let snap = snapshot.get_or_insert_with(|| {
                    let slots = kept.iter().map(|&u| slot[u]).collect();
                    Rc::new((slots, table.iter().map(|&c| c.min(i32::MAX as i64) as i32).collect()))
                });
                after[i] = Some(snap.clone());
            }
            if !member(v) {
                continue;
            }
            snapshot = None;
            match events[i] {
                Event::Intro(v) => {
                    let j = kept.iter().position(|&u| u == v);
                    let nbrs: Vec<(Option<usize>, &Table)> = model.adj[v]
                        .iter()
                        .filter(|(&u, _)| position[u] < position[v])
                        .map(|(&u, t)| (kept.iter().position(|&x| x == u), t))
                        .collect();
                    // Cost of v taking `sv` given the kept digits; t is [sv][su].
                    let term = |sv: usize, digits: &[usize]| -> i64 {
                        nbrs.iter().fold(model.unary[v][sv], |acc, (k, t)| {
                            let c = match k {
                                Some(k) => t[sv][digits[*k]],
                                None => t[sv].iter().copied().min().unwrap(),
                            };
                            plus(acc, c)
                        })
                    };
                    let k = kept.len();
                    let mut out = vec![INF; table.len() / if j.is_some() { 3 } else { 1 }];
                    for (idx, &c) in table.iter().enumerate() {
                        if c >= INF {
                            continue;
                        }
                        let mut x = idx;
                        for d in digits.iter_mut().take(k) {
                            *d = x % 3;
                            x /= 3;
                        }
                        let (add, slot_idx) = match j {
                            Some(j) => (term(digits[j], &digits), idx - digits[j] * pow3[j]),
                            None => ((0..3).map(|sv| term(sv, &digits)).min().unwrap(), idx),
                        };
                        // Drop digit j from the index.
                        let o = match j {
                            Some(j) => slot_idx % pow3[j] + (slot_idx / pow3[j + 1]) * pow3[j],
                            None => slot_idx,
                        };
                        out[o] = out[o].min(plus(c, add));
                    }
                    if let Some(j) = j {
                        kept.remove(j);
                    }
                    table = out;
                }
                Event::Forget(v) => {
                    let mut enter = true;
                    if kept.len() == keep {
                        let (far, _) = kept
                            .iter()
                            .enumerate()
                            .map(|(j, &u)| (Some(j), next_use(u, i)))
                            .chain(std::iter::once((None, next_use(v, i))))
                            .min_by_key(|&(_, t)| t)
                            .unwrap();
                        match far {
                            None => enter = false,
                            Some(j) => {
                                let mut out = vec![INF; table.len() / 3];
                                for (idx, &c) in table.iter().enumerate() {
                                    let o = idx % pow3[j] + (idx / pow3[j + 1]) * pow3[j];
                                    out[o] = out[o].min(c);
                                }
                                kept.remove(j);
                                table = out;
                            }
                        }
                    }
                    if enter {
                        let len = table.len();
                        let mut out = Vec::with_capacity(3 * len);
                        for _ in 0..3 {
                            out.extend_from_slice(&table);
                        }
                        debug_assert_eq!(out.len(), 3 * len);
                        kept.push(v);
                        table = out;
                    }
                }
            }
        }
        Lookahead { after }
    }

    fn bound(&self, step: usize, key: u128) -> i64 {
        match &self.after[step] {
            Some(snap) => {
                let (slots, table) = &**snap;
                let idx = slots.iter().rev().fold(0usize, |acc, &s| acc * 3 + get(key, s));
                table[idx] as i64
            }
            None => 0,
        }
    }
}

/// Vertices whose label carries a `group=` tag share a part; everything else
/// forms part 0. Only the strength of pruning depends on this split.
fn part_tag(label: &str) -> usize {
    label
        .split(':')
        .find_map(|f| f.strip_prefix("group="))
        .and_then(|x| x.parse().ok())
        .unwrap_or(0)
}

/// Minimum-weight odd cycle transversal of `g`. With `bound`, only solutions
/// of weight at most `bound` are searched for.
pub(super) fn solve_oct(
    g: &Graph,
    weights: &[i64],
    nice: &NicePathDecomposition,
    bound: Option<i64>,
    witness: bool,
    state_cap: usize,
) -> Result<Outcome, SolveError> {
    let n = g.num_vertices();
    let mut model = Model::oct(g, weights);

    // Live intervals over step indices; at equal times intros come first.
    let mut start = vec![usize::MAX; n];
    let mut end = vec![nice.steps.len(); n];
    for (i, step) in nice.steps.iter().enumerate() {
        match step {
            Step::Introduce { vertex, .. } => start[*vertex] = i,
            Step::Forget(v) => end[*v] = i,
        }
    }
    if let Some(v) = start.iter().position(|&s| s == usize::MAX) {
        return Err(SolveError::Unsupported(format!("vertex {} is never introduced", v + 1)));
    }

    let mut alive = vec![true; n];
    let mut eliminated = Vec::new();
    let mut queue: Vec<usize> = (0..n).rev().filter(|&v| model.adj[v].len() <= 2).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] || model.adj[v].len() > 2 {
            continue;
        }
        let nb: Vec<usize> = model.adj[v].keys().copied().collect();
        if let [u, w] = nb[..] {
            // The new table needs u and w live together; the gap between them
            // lies inside v's interval, so the extension reuses v's place.
            if end[u] < start[w] {
                end[u] = start[w];
            } else if end[w] < start[u] {
                end[w] = start[u];
            }
        }
        alive[v] = false;
        eliminated.push(model.eliminate(v));
        queue.extend(nb.into_iter().filter(|&u| model.adj[u].len() <= 2));
    }

    let mut events: Vec<(usize, u8, usize)> = Vec::new();
    for v in (0..n).filter(|&v| alive[v]) {
        events.push((start[v], 0, v));
        events.push((end[v], 1, v));
    }
    events.sort_unstable();
    let events: Vec<Event> =
        events.into_iter().map(|(_, k, v)| if k == 0 { Event::Intro(v) } else { Event::Forget(v) }).collect();
    let order: Vec<usize> = events
        .iter()
        .filter_map(|e| match e {
            Event::Intro(v) => Some(*v),
            Event::Forget(_) => None,
        })
        .collect();
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }

    // Each table is paid when its later endpoint arrives; `local[i]` is the
    // least that the i-th introduced vertex can add.
    let local: Vec<i64> = order
        .iter()
        .map(|&v| {
            let own = model.unary[v].iter().copied().min().unwrap();
            own + model.adj[v].iter().filter(|(&u, _)| position[u] < position[v]).map(|(_, t)| table_min(t)).sum::<i64>()
        })
        .collect();
    let mut suffix = vec![0i64; order.len() + 1];
    for i in (0..order.len()).rev() {
        suffix[i] = plus(suffix[i + 1], local[i]);
    }

    let mut cycle_bound = bound.map(|_| {
        let mut pg = Graph::with_vertices(n);
        for u in 0..n {
            for (&v, t) in &model.adj[u] {
                if u < v && forces_parity(t) {
                    pg.add_edge(u, v);
                }
            }
        }
        let capacity: Vec<i64> = (0..n)
            .map(|v| if alive[v] { model.unary[v][Z] - model.unary[v].iter().copied().min().unwrap() } else { 0 })
            .collect();
        CycleBound::from_cycles(odd_cycle_packing(&pg, &capacity, &order), n)
    });

    let max_slots = 64u32;
    let mut slot_at = vec![u32::MAX; n];
    {
        let mut free: Vec<u32> = (0..max_slots).rev().collect();
        let mut live = 0usize;
        for ev in &events {
            match *ev {
                Event::Intro(v) => {
                    live += 1;
                    slot_at[v] = free.pop().ok_or(SolveError::WidthTooLarge { live, max: max_slots as usize })?;
                }
                Event::Forget(v) => {
                    live -= 1;
                    free.push(slot_at[v]);
                }
            }
        }
    }
    let lookahead = bound.map(|_| Lookahead::new(&model, &events, &position, &slot_at, LOOKAHEAD_KEEP, |_| true));
    // Summing exact per-part bounds keeps each part's boundary (which the
    // global pass must drop when many parts are live) fully constrained.
    let part_of: Vec<usize> = (0..n).map(|v| part_tag(g.label(v))).collect();
    let mut part_ids: Vec<usize> = part_of.clone();
    part_ids.sort_unstable();
    part_ids.dedup();
    let parts: Vec<Lookahead> = match bound {
        Some(_) if part_ids.len() > 1 => part_ids
            .iter()
            .map(|&p| Lookahead::new(&model, &events, &position, &slot_at, PART_KEEP, |v| part_of[v] == p))
            .collect(),
        _ => Vec::new(),
    };
    let mut slot_of = vec![u32::MAX; n];
    let mut layers: Vec<Vec<Entry>> = Vec::new();
    let mut intro_slots: Vec<Option<(usize, u32)>> = Vec::new();
    let mut cur = vec![Entry { key: 0, cost: 0, parent: 0, flipped: false }];
    let mut stats = Stats::default();
    let mut live: Vec<usize> = Vec::new();
    let mut introduced = 0usize;

    for (step, ev) in events.iter().enumerate() {
        let mut next = Layer { entries: Vec::with_capacity(cur.len()), index: FxHashMap::default() };
        let mut record = None;
        match *ev {
            Event::Intro(v) => {
                let slot = slot_at[v];
                slot_of[v] = slot;
                live.push(v);
                introduced += 1;
                let mut nbrs: Vec<(u32, Table)> = Vec::new();
                for (&u, t) in &model.adj[v] {
                    if position[u] < position[v] {
                        if slot_of[u] == u32::MAX {
                            return Err(SolveError::Unsupported("table endpoints never live together".into()));
                        }
                        nbrs.push((slot_of[u], *t));
                    }
                }
                let unary = model.unary[v];

                let floor = match (&mut cycle_bound, bound) {
                    (Some(cb), Some(b)) => {
                        cb.introduce(v);
                        Some(b - model.constant - plus(suffix[introduced], cb.untouched))
                    }
                    _ => None,
                };
                let open = cycle_bound.as_ref().map(|cb| cb.open_slots(&slot_of)).unwrap_or_default();
                // Tables from live vertices to later ones: what each value of
                // the live endpoint forces beyond the table's minimum.
                let mut pending: Vec<(u32, [i64; 3])> = Vec::new();
                if floor.is_some() {
                    for &u in &live {
                        let mut extra = [0i64; 3];
                        for (&x, t) in &model.adj[u] {
                            if position[x] > position[v] {
                                let lo = table_min(t);
                                for (s, e) in extra.iter_mut().enumerate() {
                                    *e += t[s].iter().copied().min().unwrap() - lo;
                                }
                            }
                        }
                        if extra.iter().any(|&e| e > 0) {
                            pending.push((slot_of[u], extra));
                        }
                    }
                }
                let remaining = |k: u128| -> i64 {
                    let unhit = open.iter().filter(|slots| slots.iter().all(|&s| get(k, s) != Z)).count() as i64;
                    pending.iter().fold(unhit, |acc, (s, extra)| plus(acc, extra[get(k, *s)]))
                };

                for (pi, e) in cur.iter().enumerate() {
                    for sv in 0..3 {
                        // Tables from `adj[v]` are indexed [v's value][neighbor's value].
                        let gain = nbrs.iter().fold(unary[sv], |acc, (s, t)| plus(acc, t[sv][get(e.key, *s)]));
                        if gain >= INF {
                            continue;
                        }
                        let cost = e.cost + gain;
                        let child = set(e.key, slot, sv);
                        if let Some(f) = floor {
                            if cost > f || cost + remaining(child) > f {
                                continue;
                            }
                        }
                        if let (Some(la), Some(b)) = (&lookahead, bound) {
                            let split: i64 = parts.iter().map(|p| p.bound(step, child)).sum();
                            if cost + la.bound(step, child).max(split) > b - model.constant {
                                continue;
                            }
                        }
                        let (key, flipped) = canonical(child);
                        next.offer(Entry { key, cost, parent: pi as u32, flipped }, &cur);
                    }
                    stats.transitions += 1;
                }
                record = Some((v, slot));
            }
            Event::Forget(v) => {
                if let Some(cb) = &mut cycle_bound {
                    cb.forget(v);
                }
                let slot = slot_of[v];
                for (pi, e) in cur.iter().enumerate() {
                    let (key, flipped) = canonical(set(e.key, slot, 0));
                    next.offer(Entry { key, cost: e.cost, parent: pi as u32, flipped }, &cur);
                    stats.transitions += 1;
                }
                slot_of[v] = u32::MAX;
                live.retain(|&x| x != v);
            }
        }
        if next.entries.len() > state_cap {
            return Err(SolveError::StateCap { states: next.entries.len(), cap: state_cap });
        }
        stats.max_states = stats.max_states.max(next.entries.len());
        stats.per_step.push((live.len() as u32, next.entries.len() as u64));
        let prev = std::mem::replace(&mut cur, next.entries);
        if witness {
            layers.push(prev);
            intro_slots.push(record);
        }
        if cur.is_empty() {
            break;
        }
    }

    // Pruning is one-sided: a state above the bound may survive, but then
    // cheaper ones above the bound may not have, so it proves nothing.
    let best = cur
        .iter()
        .enumerate()
        .filter(|(_, e)| bound.is_none_or(|b| e.cost + model.constant <= b))
        .min_by_key(|(_, e)| (e.cost, e.key));
    let cost = best.map(|(_, e)| e.cost + model.constant);
    let transversal = match (witness, best) {
        (true, Some((idx, _))) => {
            layers.push(cur.clone());
            let mut value = vec![0usize; n];
            let mut idx = idx;
            let mut swapped = false;
            for i in (0..intro_slots.len()).rev() {
                let e = layers[i + 1][idx];
                if let Some((v, slot)) = intro_slots[i] {
                    let actual = if swapped { swap_sides(e.key) } else { e.key };
                    value[v] = get(actual, slot);
                }
                swapped ^= e.flipped;
                idx = e.parent as usize;
            }
            for el in eliminated.iter().rev() {
                value[el.vertex] = el.best(&value);
            }
            Some((0..n).filter(|&v| value[v] == Z).collect())
        }
        _ => None,
    };
    Ok(Outcome { cost, transversal, stats })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::decomposition::PathDecomposition;
    use crate::solvers::brute::min_oct;
    use crate::suite::random_graph;

    fn run(g: &Graph, bound: Option<i64>) -> Outcome {
        let nice = PathDecomposition::trivial(g.num_vertices()).nicify(g).unwrap();
        solve_oct(g, &vec![1; g.num_vertices()], &nice, bound, true, usize::MAX).unwrap()
    }

    #[test]
    fn folded_tables_are_read_in_the_right_orientation() {
        // Sparse graphs fold degree-2 chains into tables that are not symmetric.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.gen_range(3..=11);
            let g = random_graph(&mut rng, n, 0.35);
            let best = min_oct(&g).len() as i64;
            let out = run(&g, None);
            assert_eq!(out.cost, Some(best), "{}", g.to_gr());
            let z = out.transversal.unwrap();
            let mut removed = vec![false; n];
            z.iter().for_each(|&v| removed[v] = true);
            assert!(crate::reductions::two_color(&g, &removed).is_some());
            assert_eq!(z.len() as i64, best);
            assert_eq!(run(&g, Some(best)).cost, Some(best), "{}", g.to_gr());
            if best > 0 {
                let o = run(&g, Some(best - 1));
                assert_eq!(o.cost, None, "best {best} wit {:?}\n{}", o.transversal, g.to_gr());
            }
        }
    }

    #[test]
    fn swap_is_an_involution() {
        let k = 0b10_01_00_10u128;
        assert_eq!(swap_sides(swap_sides(k)), k);
        assert_eq!(swap_sides(k), 0b01_10_00_01);
        assert!(!canonical(0b01).1 && canonical(0b10).1);
    }
}
