//! Formula suites and random graph generators shared by `verify`, `selftest`
//! and the test targets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::CnfFormula;
use crate::graph::Graph;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// A formula plus a stable identifier for reports.
#[derive(Debug, Clone)]
pub struct NamedFormula {
    pub id: String,
    pub formula: CnfFormula,
}

fn clauses_over(n: usize) -> Vec<Vec<i64>> {
    let lits: Vec<i64> = (1..=n as i64).flat_map(|v| [v, -v]).collect();
    let mut out: Vec<Vec<i64>> = lits.iter().map(|&l| vec![l]).collect();
    for (i, &a) in lits.iter().enumerate() {
        for &b in &lits[i..] {
            out.push(vec![a, b]);
        }
    }
    out
}

/// Every formula over x1 (n=1) or x1, x2 (n=2) with one or two clauses of at
/// most two literals, taken up to clause order and literal order.
pub fn small_formulas() -> Vec<NamedFormula> {
    let mut out = Vec::new();
    for n in 1..=2 {
        let cs = clauses_over(n);
        for i in 0..cs.len() {
            out.push((n, vec![cs[i].clone()]));
            for c2 in &cs[i..] {
                out.push((n, vec![cs[i].clone(), c2.clone()]));
            }
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(k, (n, clauses))| {
            let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
            NamedFormula { id: format!("small-{k:03}"), formula: CnfFormula::from_dimacs_clauses(n, &refs) }
        })
        .collect()
}

/// `count` formulas with n, m in 1..=4 and clauses of distinct variables.
pub fn random_formulas(seed: u64, count: usize) -> Vec<NamedFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let n = rng.gen_range(1..=4usize);
            let m = rng.gen_range(1..=4usize);
            let clauses: Vec<Vec<i64>> = (0..m)
                .map(|_| {
                    let size = rng.gen_range(1..=n.min(3));
                    let mut vars: Vec<i64> = (1..=n as i64).collect();
                    vars.shuffle(&mut rng);
                    vars[..size].iter().map(|&v| if rng.gen_bool(0.5) { v } else { -v }).collect()
                })
                .collect();
            let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
            NamedFormula { id: format!("random-{k:02}"), formula: CnfFormula::from_dimacs_clauses(n, &refs) }
        })
        .collect()
}

/// The round-trip suite: all small formulas plus 50 seeded random ones.
pub fn formula_suite(seed: u64) -> Vec<NamedFormula> {
    let mut all = small_formulas();
    all.extend(random_formulas(seed, 50));
    all
}

/// G(n, p) graph.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// G(n, p) with integer weights drawn from 1..=max_weight.
pub fn random_weighted_graph(rng: &mut impl Rng, n: usize, p: f64, max_weight: u64) -> Graph {
    let mut g = Graph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_weighted_edge(u, v, rng.gen_range(1..=max_weight));
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_size() {
        // n=1: 5 clauses -> 5 + 15; n=2: 14 clauses -> 14 + 105.
        assert_eq!(small_formulas().len(), 139);
    }

    #[test]
    fn random_suite_is_seeded() {
        let a = random_formulas(DEFAULT_SEED, 5);
        let b = random_formulas(DEFAULT_SEED, 5);
        assert_eq!(a.iter().map(|f| f.formula.to_dimacs()).collect::<Vec<_>>(),
                   b.iter().map(|f| f.formula.to_dimacs()).collect::<Vec<_>>());
        for f in random_formulas(DEFAULT_SEED, 50) {
            assert!(f.formula.num_vars <= 4 && f.formula.num_clauses() <= 4);
        }
    }
}
