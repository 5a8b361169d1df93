//! SAT-to-graph constructions. Every reduction emits a labeled graph, a
//! decision target and a path decomposition built from its search sweep.

pub mod coloring;
pub mod dominating_set;
pub mod independent_set;
pub mod instance;
pub mod max_cut;
pub mod oct;
pub mod triangles;

pub use coloring::{complete_lists_to_plain, reduce_q_coloring};
pub use dominating_set::reduce_dominating_set;
pub use independent_set::reduce_independent_set;
pub use instance::{
    check_solution, objective, two_color, Instance, Kind, ReductionError, ReductionMeta, Sense, ShapeMismatch,
    Solution,
};
pub use max_cut::{expand_to_unweighted, reduce_max_cut_weighted};
pub use oct::reduce_oct;
pub use triangles::{reduce_triangle_packing, to_partition};

use crate::formula::{Assignment, CnfFormula};

pub(crate) fn require_clauses(phi: &CnfFormula) -> Result<(), ReductionError> {
    if phi.num_clauses() == 0 {
        return Err(ReductionError::Degenerate("empty formula (no clauses)".into()));
    }
    Ok(())
}

/// Base-3 digits of `r`, most significant first, padded to `p` digits.
pub(crate) fn base3_digits(mut r: u64, p: usize) -> Vec<usize> {
    let mut d = vec![0; p];
    for slot in d.iter_mut().rev() {
        *slot = (r % 3) as usize;
        r /= 3;
    }
    d
}

/// Problems exposed by the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Problem {
    Is,
    Ds,
    MaxCut,
    QCol,
    QList,
    Oct,
    Packing,
    Partition,
}

impl Problem {
    pub const ALL: [Problem; 8] = [
        Problem::Is,
        Problem::Ds,
        Problem::MaxCut,
        Problem::QCol,
        Problem::QList,
        Problem::Oct,
        Problem::Packing,
        Problem::Partition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Is => "is",
            Problem::Ds => "ds",
            Problem::MaxCut => "maxcut",
            Problem::QCol => "qcol",
            Problem::QList => "qlist",
            Problem::Oct => "oct",
            Problem::Packing => "packing",
            Problem::Partition => "partition",
        }
    }

    pub fn from_name(s: &str) -> Option<Problem> {
        Problem::ALL.into_iter().find(|p| p.name() == s)
    }
}

/// Runs the construction for `problem`. Max Cut is returned unweighted and
/// q-coloring after clique completion.
pub fn reduce(problem: Problem, phi: &CnfFormula, p: u32, q: u32) -> Result<Instance, ReductionError> {
    match problem {
        Problem::Is => reduce_independent_set(phi),
        Problem::Ds => reduce_dominating_set(phi, p),
        Problem::MaxCut => Ok(expand_to_unweighted(&reduce_max_cut_weighted(phi)?)),
        Problem::QList => reduce_q_coloring(phi, q, p),
        Problem::QCol => Ok(complete_lists_to_plain(&reduce_q_coloring(phi, q, p)?)),
        Problem::Oct => reduce_oct(phi, p),
        Problem::Packing => reduce_triangle_packing(phi),
        Problem::Partition => to_partition(&reduce_triangle_packing(phi)?),
    }
}

/// Solution of `inst` read off a satisfying assignment. `inst` must have been
/// built from `phi`.
pub fn build_witness(inst: &Instance, phi: &CnfFormula, tau: &Assignment) -> Result<Solution, ReductionError> {
    if !phi.evaluate(tau).unwrap_or(false) {
        return Err(ReductionError::NotSatisfying);
    }
    match inst.kind {
        Kind::IndependentSet => independent_set::witness(phi, tau),
        Kind::DominatingSet => {
            let p = inst.meta.p.ok_or_else(|| ReductionError::Mismatch("missing p".into()))?;
            dominating_set::witness(phi, p, tau)
        }
        Kind::MaxCut => max_cut::witness(inst, phi, tau),
        Kind::QColoring | Kind::QListColoring => coloring::witness(inst, phi, tau),
        Kind::OddCycleTransversal => oct::witness(inst, phi, tau),
        Kind::TrianglePacking => triangles::witness(phi, tau),
        Kind::PartitionIntoTriangles => {
            Err(ReductionError::Experimental("no witness construction for the partition variant".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_msb_first() {
        assert_eq!(base3_digits(5, 2), vec![1, 2]);
        assert_eq!(base3_digits(0, 3), vec![0, 0, 0]);
    }

    #[test]
    fn empty_formula_is_degenerate() {
        let phi = CnfFormula { num_vars: 1, clauses: vec![] };
        for p in Problem::ALL {
            assert!(matches!(reduce(p, &phi, 1, 3), Err(ReductionError::Degenerate(_))), "{p:?}");
        }
    }
}
