//! Exhaustive self-checks: gadget properties, solver-vs-oracle agreement, the
//! weighted-to-unweighted Max Cut identity, the formula round trip, and the
//! partition transformation check. Everything is seeded and deterministic.

use std::collections::VecDeque;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::formula::{brute_force_sat, checked_pow, CnfFormula};
use crate::graph::Graph;
use crate::reductions::coloring::{add_connector, codeword, BLACK, RED, WHITE};
use crate::reductions::independent_set::{add_clause_gadget, gadget_independent_set};
use crate::reductions::oct::add_arrow;
use crate::reductions::{
    build_witness, check_solution, expand_to_unweighted, objective, reduce, reduce_max_cut_weighted,
    reduce_q_coloring, reduce_triangle_packing, to_partition, two_color, Instance, Kind, Problem,
};
use crate::solvers::brute::{list_coloring, max_cut, triangle_partition};
use crate::solvers::{brute_force, dp, solve_instance, DpOptions};
use crate::suite::{formula_suite, random_graph, random_weighted_graph, NamedFormula};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, cases: 0, failures: Vec::new(), note: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("{status} {} ({} checks, {} failed)", self.name, self.cases, self.failures.len());
        if let Some(f) = self.failures.first() {
            s.push_str(&format!(": {f}"));
        }
        if let Some(n) = &self.note {
            s.push_str(&format!(" [{n}]"));
        }
        s
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
}

fn is_independent(g: &Graph, mark: &[bool]) -> bool {
    g.edges().iter().all(|&(u, v, _)| !(mark[u] && mark[v]))
}

/// Clause gadget of size c: the maximum independent set has size c+2, always
/// uses a literal vertex, and can use any single literal alone.
pub fn clause_gadget_suite() -> SuiteReport {
    let mut r = SuiteReport::new("is-clause-gadget");
    for c in [2, 4] {
        let mut g = Graph::new();
        let gd = add_clause_gadget(&mut g, c, "gadget");
        let n = g.num_vertices();
        let best = subsets(n).filter(|s| is_independent(&g, s)).map(|s| s.iter().filter(|&&b| b).count()).max();
        r.check(best == Some(c + 2), || format!("c={c}: maximum independent set {best:?}, expected {}", c + 2));
        let maximum: Vec<Vec<bool>> =
            subsets(n).filter(|s| is_independent(&g, s) && s.iter().filter(|&&b| b).count() == c + 2).collect();
        let literal_count = |s: &[bool]| gd.lit.iter().filter(|&&l| s[l]).count();
        r.check(maximum.iter().all(|s| literal_count(s) >= 1), || {
            format!("c={c}: a maximum independent set avoids every literal vertex")
        });
        for i in 0..c {
            let alone = maximum.iter().any(|s| s[gd.lit[i]] && literal_count(s) == 1);
            r.check(alone, || format!("c={c}: no maximum independent set uses literal {} alone", i + 1));
            let built = gadget_independent_set(&gd, i);
            let mut mark = vec![false; n];
            built.iter().for_each(|&v| mark[v] = true);
            r.check(built.len() == c + 2 && is_independent(&g, &mark) && literal_count(&mark) == 1, || {
                format!("c={c}: constructed set for literal {} is not a lone-literal maximum set", i + 1)
            });
        }
    }
    r
}

fn connected(g: &Graph, removed: &[bool], a: usize, b: usize) -> bool {
    let mut seen = removed.to_vec();
    let mut queue = VecDeque::from([a]);
    seen[a] = true;
    while let Some(u) = queue.pop_front() {
        if u == b {
            return true;
        }
        for &w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// The arrow widget A(u, v) by exhaustive enumeration of its 2^9 vertex subsets.
pub fn arrow_suite() -> SuiteReport {
    let mut r = SuiteReport::new("arrow");
    let mut g = Graph::new();
    let (u, v) = (g.add_vertex("u"), g.add_vertex("v"));
    let arrow = add_arrow(&mut g, u, v, "arrow");
    let n = g.num_vertices();
    let size = |s: &[bool]| s.iter().filter(|&&b| b).count();
    let set = |vs: &[usize]| {
        let mut m = vec![false; n];
        vs.iter().for_each(|&x| m[x] = true);
        m
    };
    let octs: Vec<Vec<bool>> = subsets(n).filter(|s| two_color(&g, s).is_some()).collect();
    let smallest = octs.iter().map(|s| size(s)).min().unwrap_or(0);
    let minimum: Vec<&Vec<bool>> = octs.iter().filter(|s| size(s) == smallest).collect();
    r.check(smallest == 2 && minimum.len() == 1 && *minimum[0] == set(&arrow.passive()), || {
        format!("smallest transversals: size {smallest}, {} of them, passive set unique: false", minimum.len())
    });
    r.check(!connected(&g, &set(&arrow.passive()), u, v), || "u and v connected after removing the passive set".into());
    // A(u,v) minus u: transversals are the sets that, together with u, leave it bipartite.
    let without_u: Vec<&Vec<bool>> = octs.iter().filter(|s| s[u]).collect();
    let smallest_without_u = without_u.iter().map(|s| size(s) - 1).min().unwrap_or(0);
    let mut active = set(&arrow.active());
    active[u] = true;
    r.check(two_color(&g, &active).is_some() && smallest_without_u == 2, || {
        format!("active set is not a smallest transversal of A - u (smallest {smallest_without_u})")
    });
    r.check(octs.iter().all(|s| size(s) - usize::from(s[u]) >= 2), || {
        "some transversal has fewer than two vertices besides u".into()
    });
    r
}

/// Connector between a group of `p` full-list vertices and a path vertex with
/// list {red, white, black}, for every codeword, by exhaustive enumeration of
/// the group coloring and the path vertex color.
pub fn connector_suite() -> SuiteReport {
    let mut r = SuiteReport::new("connector");
    for (q, p) in [(3u32, 1u32), (4, 1), (3, 2)] {
        let words = checked_pow(q as u64, p).expect("tiny");
        for rank in 0..words {
            let code = codeword(rank, q, p);
            let mut g = Graph::new();
            let mut lists: Vec<Vec<u32>> = Vec::new();
            let group: Vec<usize> = (0..p)
                .map(|l| {
                    lists.push((1..=q).collect());
                    g.add_vertex(format!("group:{l}"))
                })
                .collect();
            let v = g.add_vertex("v");
            lists.push(vec![RED, WHITE, BLACK]);
            add_connector(&mut g, &mut lists, q, v, &group, &code, "conn");
            for coloring in 0..words {
                let gamma = codeword(coloring, q, p);
                for c in [RED, WHITE, BLACK] {
                    let mut fixed = lists.clone();
                    for (l, &gv) in group.iter().enumerate() {
                        fixed[gv] = vec![gamma[l]];
                    }
                    fixed[v] = vec![c];
                    let extends = list_coloring(&g, &fixed).is_some();
                    let expected = c != RED || gamma == code;
                    r.check(extends == expected, || {
                        format!("q={q} p={p} code={code:?}: group {gamma:?}, v={c}: extends={extends}")
                    });
                }
            }
        }
    }
    r
}

/// Vertices of clause `j`'s path (start, path vertices, end) in a list-coloring
/// instance, recovered from the labels.
fn clause_path(inst: &Instance, j: usize) -> Vec<usize> {
    let prefix = format!("COL:clause={j}:");
    (0..inst.graph.num_vertices())
        .filter(|&v| {
            inst.graph.label(v).strip_prefix(&prefix).is_some_and(|rest| {
                rest == "start" || rest == "end" || (rest.starts_with("group=") && rest.matches(':').count() == 1)
            })
        })
        .collect()
}

/// The clause path with its end lists admits no proper coloring without red,
/// and one red vertex anywhere on it suffices.
pub fn coloring_path_suite(formulas: &[NamedFormula]) -> SuiteReport {
    let mut r = SuiteReport::new("coloring-path");
    let mut lengths = std::collections::BTreeSet::new();
    for f in formulas {
        for p in [1, 2] {
            let Ok(inst) = reduce_q_coloring(&f.formula, 3, p) else { continue };
            let lists = inst.lists.as_ref().expect("list instance");
            for j in 1..=inst.meta.m {
                let keep = clause_path(&inst, j);
                let (sub, _) = inst.graph.induced(&keep);
                let base: Vec<Vec<u32>> = keep.iter().map(|&v| lists[v].clone()).collect();
                let inner = keep.len() - 2;
                lengths.insert(inner);
                let no_red: Vec<Vec<u32>> =
                    base.iter().map(|l| l.iter().copied().filter(|&c| c != RED).collect()).collect();
                r.check(list_coloring(&sub, &no_red).is_none(), || {
                    format!("{} p={p} clause {j}: red-free coloring of a {inner}-vertex path", f.id)
                });
                for k in 0..keep.len() {
                    if !base[k].contains(&RED) || base[k].len() == 1 {
                        continue;
                    }
                    let mut one = no_red.clone();
                    one[k] = vec![RED];
                    r.check(list_coloring(&sub, &one).is_some(), || {
                        format!("{} p={p} clause {j}: red at path vertex {k} does not extend", f.id)
                    });
                }
            }
        }
    }
    r.note = Some(format!("path lengths {lengths:?}"));
    r
}

/// DP optimum equals the brute-force optimum on seeded G(n, 1/2) graphs.
pub fn oracle_suite(seed: u64, graphs: usize) -> SuiteReport {
    let mut r = SuiteReport::new("oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let kinds = [
        Kind::IndependentSet,
        Kind::DominatingSet,
        Kind::MaxCut,
        Kind::QColoring,
        Kind::OddCycleTransversal,
        Kind::TrianglePacking,
        Kind::PartitionIntoTriangles,
    ];
    for k in 0..graphs {
        let n = rng.gen_range(1..=12);
        let g = random_graph(&mut rng, n, 0.5);
        for kind in kinds {
            let inst = Instance::from_graph(kind, g.clone(), None);
            let dp = solve_instance(&inst, &DpOptions { witness: true, ..Default::default() });
            let bf = brute_force(&inst);
            match (dp, bf) {
                (Ok(a), Ok(b)) => {
                    r.check(a.optimum == b.optimum, || {
                        format!("graph {k} (n={n}) {kind}: dp {:?}, brute {:?}", a.optimum, b.optimum)
                    });
                    let sound = match &a.solution {
                        Some(s) => objective(&inst, s).ok().flatten() == a.optimum,
                        None => a.optimum.is_none(),
                    };
                    r.check(sound, || format!("graph {k} (n={n}) {kind}: dp witness does not attain its optimum"));
                }
                (a, b) => r.check(false, || format!("graph {k} {kind}: dp {a:?}, brute {b:?}")),
            }
            if matches!(kind, Kind::DominatingSet | Kind::OddCycleTransversal) {
                // A target of 0 makes the solver deepen through bounded runs.
                let bounded = Instance::from_graph(kind, g.clone(), Some(0));
                let a = solve_instance(&bounded, &DpOptions::default()).ok().and_then(|a| a.optimum);
                let b = brute_force(&inst).ok().and_then(|b| b.optimum);
                r.check(a == b, || format!("graph {k} (n={n}) {kind} with target 0: dp {a:?}, brute {b:?}"));
            }
        }
    }
    r
}

/// Unweighted optimum = 2W + weighted optimum, where W is the total weight.
pub fn expansion_suite(seed: u64, graphs: usize, formulas: &[NamedFormula]) -> SuiteReport {
    let mut r = SuiteReport::new("maxcut-expansion");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    let check = |r: &mut SuiteReport, what: &str, weighted: &Instance| {
        let expanded = expand_to_unweighted(weighted);
        let (w_opt, _) = max_cut(&weighted.graph);
        let u_opt = if expanded.graph.num_vertices() <= 24 {
            brute_force(&expanded).ok().and_then(|a| a.optimum)
        } else {
            solve_instance(&expanded, &DpOptions::default()).ok().and_then(|a| a.optimum)
        };
        let w = weighted.graph.total_weight() as i64;
        r.check(u_opt == Some(2 * w + w_opt), || format!("{what}: unweighted {u_opt:?}, 2W + weighted = {}", 2 * w + w_opt));
    };
    for k in 0..graphs {
        let n = rng.gen_range(1..=8);
        let g = random_weighted_graph(&mut rng, n, 0.5, 3);
        check(&mut r, &format!("weighted graph {k}"), &Instance::from_graph(Kind::MaxCut, g, None));
    }
    let mut reductions = 0;
    for f in formulas {
        let Ok(weighted) = reduce_max_cut_weighted(&f.formula) else { continue };
        if weighted.graph.num_vertices() <= 24 {
            reductions += 1;
            check(&mut r, &f.id, &weighted);
        }
    }
    r.note = Some(format!("{graphs} random graphs, {reductions} reduction outputs"));
    r
}

/// Outcome of the exhaustive partition search on the smallest partition instance.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionCheck {
    pub formula: String,
    pub vertices: usize,
    pub satisfiable: bool,
    pub partitionable: bool,
    /// The instance is partitionable exactly when the formula is satisfiable.
    pub equivalence_holds: bool,
    pub detail: String,
}

fn run_partition_check() -> PartitionCheck {
    let phi = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]);
    let satisfiable = brute_force_sat(&phi).ok().flatten().is_some();
    let inst = reduce_triangle_packing(&phi).and_then(|p| to_partition(&p)).expect("partition instance");
    let search = triangle_partition(&inst.graph);
    let dp = solve_instance(&inst, &DpOptions::default()).ok().map(|a| a.optimum.is_some());
    let partitionable = search.is_some();
    let n = inst.graph.num_vertices();
    let mut detail = if partitionable {
        "exact-cover search found a partition".to_string()
    } else {
        format!("exact-cover search: the {n} vertices admit no partition into triangles")
    };
    if dp != Some(partitionable) {
        detail.push_str(&format!("; decomposition solver disagrees ({dp:?})"));
    }
    PartitionCheck {
        formula: "(x1 | -x2)".into(),
        vertices: n,
        satisfiable,
        partitionable,
        equivalence_holds: partitionable == satisfiable && dp == Some(partitionable),
        detail,
    }
}

/// Computed once per process.
pub fn partition_check() -> &'static PartitionCheck {
    static CHECK: OnceLock<PartitionCheck> = OnceLock::new();
    CHECK.get_or_init(run_partition_check)
}

/// The suite records the outcome; it only fails if the check itself could not
/// complete, which the search cannot do silently.
pub fn partition_suite() -> SuiteReport {
    let c = partition_check();
    let mut r = SuiteReport::new("partition-check");
    r.check(c.vertices > 0, || "partition check did not run".into());
    r.note = Some(format!(
        "{} on {} ({} vertices): satisfiable={}, partitionable={}; {}",
        if c.equivalence_holds { "equivalence holds" } else { "documented failure" },
        c.formula,
        c.vertices,
        c.satisfiable,
        c.partitionable,
        c.detail
    ));
    r
}

/// The width every construction is expected to stay within, from the
/// instance's own parameters.
pub fn reference_width_bound(inst: &Instance) -> Option<usize> {
    let m = &inst.meta;
    let n = m.n;
    let p = m.p.unwrap_or(1) as usize;
    let t = m.t.unwrap_or(0);
    let pow3 = 3usize.checked_pow(p as u32)?;
    Some(match inst.kind {
        Kind::IndependentSet => n + 4,
        Kind::MaxCut => n + 5,
        Kind::DominatingSet => t * p + 2 * pow3 + 5 * p + 3,
        Kind::QListColoring => p * t + 4,
        Kind::QColoring => p * t + 4 + m.q? as usize,
        Kind::OddCycleTransversal => t * (p + 1) + 10 * p * pow3,
        Kind::TrianglePacking | Kind::PartitionIntoTriangles => n + 10,
    })
}

/// One reduction of one formula in the round trip.
#[derive(Debug, Clone, Serialize)]
pub struct RoundTripRow {
    pub formula: String,
    pub kind: Kind,
    pub satisfiable: bool,
    pub verdict: Option<bool>,
    pub width: Option<usize>,
    pub width_bound: Option<usize>,
    /// Witness from the satisfying assignment: accepted, and exactly on target
    /// where the kind has a numeric target.
    pub witness_ok: Option<bool>,
    pub law_violations: Option<usize>,
    pub error: Option<String>,
}

impl RoundTripRow {
    pub fn agrees(&self) -> bool {
        self.error.is_none() && self.verdict == Some(self.satisfiable)
    }

    pub fn width_ok(&self) -> bool {
        matches!((self.width, self.width_bound), (Some(w), Some(b)) if w <= b)
    }
}

pub const ROUND_TRIP_PROBLEMS: [Problem; 6] =
    [Problem::Is, Problem::Ds, Problem::MaxCut, Problem::QCol, Problem::Oct, Problem::Packing];

pub fn round_trip_row(f: &NamedFormula, problem: Problem, opts: &DpOptions) -> RoundTripRow {
    let sat = brute_force_sat(&f.formula).expect("suite formulas are tiny");
    let mut row = RoundTripRow {
        formula: f.id.clone(),
        kind: Kind::IndependentSet,
        satisfiable: sat.is_some(),
        verdict: None,
        width: None,
        width_bound: None,
        witness_ok: None,
        law_violations: None,
        error: None,
    };
    let inst = match reduce(problem, &f.formula, 1, 3) {
        Ok(i) => i,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.kind = inst.kind;
    row.width_bound = reference_width_bound(&inst).map(|b| b.min(inst.claimed_width_bound));
    match inst.decomposition.validate(&inst.graph) {
        Ok(w) => row.width = Some(w),
        Err(e) => row.error = Some(format!("invalid-decomposition: {e}")),
    }
    match solve_instance(&inst, opts) {
        Ok(a) => {
            row.verdict = Some(a.verdict);
            row.law_violations = dp::base(&inst).map(|b| a.stats.law_violations(b));
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    if let Some(tau) = sat {
        row.witness_ok = Some(match build_witness(&inst, &f.formula, &tau) {
            Ok(s) => {
                let accepted = check_solution(&inst, &s).unwrap_or(false);
                let value = objective(&inst, &s).ok().flatten();
                accepted && (inst.target.is_none() || value == inst.target)
            }
            Err(_) => false,
        });
    }
    row
}

pub fn round_trip(formulas: &[NamedFormula], problems: &[Problem], opts: &DpOptions) -> Vec<RoundTripRow> {
    formulas.iter().flat_map(|f| problems.iter().map(move |&p| round_trip_row(f, p, opts))).collect()
}

/// Problems in the round trip: the partition variant joins only when its
/// transformation check holds.
pub fn round_trip_problems() -> Vec<Problem> {
    let mut ps = ROUND_TRIP_PROBLEMS.to_vec();
    if partition_check().equivalence_holds {
        ps.push(Problem::Partition);
    }
    ps
}

pub fn round_trip_suite(rows: &[RoundTripRow]) -> SuiteReport {
    let mut r = SuiteReport::new("round-trip");
    for row in rows {
        let what = |msg: &str| format!("{} {}: {msg}", row.formula, row.kind);
        r.check(row.agrees(), || what(&format!("verdict {:?}, satisfiable {} {:?}", row.verdict, row.satisfiable, row.error)));
        r.check(row.width_ok(), || what(&format!("width {:?} above bound {:?}", row.width, row.width_bound)));
        if let Some(ok) = row.witness_ok {
            r.check(ok, || what("witness rejected or off target"));
        }
        if let Some(v) = row.law_violations {
            r.check(v == 0, || what(&format!("{v} steps exceed the state-count bound")));
        }
    }
    r
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub partition: PartitionCheck,
    pub pass: bool,
}

pub const SUITES: [&str; 8] = [
    "is-clause-gadget",
    "arrow",
    "connector",
    "coloring-path",
    "oracle",
    "maxcut-expansion",
    "partition-check",
    "round-trip",
];

/// Runs the named suites (all when `only` is empty).
pub fn run(seed: u64, only: &[String], opts: &DpOptions) -> SelftestReport {
    let formulas = formula_suite(seed);
    let wanted = |name: &str| only.is_empty() || only.iter().any(|o| o == name);
    let mut suites = Vec::new();
    for name in SUITES.into_iter().filter(|n| wanted(n)) {
        suites.push(match name {
            "is-clause-gadget" => clause_gadget_suite(),
            "arrow" => arrow_suite(),
            "connector" => connector_suite(),
            "coloring-path" => coloring_path_suite(&formulas),
            "oracle" => oracle_suite(seed, 200),
            "maxcut-expansion" => expansion_suite(seed, 30, &formulas),
            "partition-check" => partition_suite(),
            _ => round_trip_suite(&round_trip(&formulas, &round_trip_problems(), opts)),
        });
    }
    let pass = suites.iter().all(SuiteReport::passed);
    SelftestReport { seed, suites, partition: partition_check().clone(), pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gadget_suites_pass() {
        for r in [clause_gadget_suite(), arrow_suite(), connector_suite()] {
            assert!(r.passed(), "{}", r.line());
            assert!(r.cases > 0);
        }
    }

    #[test]
    fn coloring_path_covers_both_parities() {
        let r = coloring_path_suite(&crate::suite::random_formulas(7, 6));
        assert!(r.passed(), "{}", r.line());
    }

    #[test]
    fn small_oracle_run() {
        let r = oracle_suite(3, 10);
        assert!(r.passed(), "{}", r.line());
        assert_eq!(r.cases, 10 * (7 * 2 + 2));
    }

    #[test]
    fn reference_bounds_match_claims() {
        let phi = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]);
        for p in ROUND_TRIP_PROBLEMS {
            let inst = reduce(p, &phi, 1, 3).unwrap();
            assert!(reference_width_bound(&inst).unwrap() >= inst.claimed_width_bound, "{p:?}");
        }
    }
}
