//! CNF formulas: DIMACS I/O, evaluation, a brute-force SAT oracle, and the
//! variable-grouping machinery shared by the grouped reductions.

use std::fmt::Write as _;

use thiserror::Error;

/// Default cap on the number of variables for [`brute_force_sat`].
pub const DEFAULT_SAT_CAP: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("variable index out of range: literal {lit} with {num_vars} variables (line {line})")]
    VariableOutOfRange { lit: i64, num_vars: usize, line: usize },
    #[error("empty clause (clause {0})")]
    EmptyClause(usize),
    #[error("clause count mismatch: header declares {declared}, found {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("bad token {token:?} on line {line}")]
    BadToken { token: String, line: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("assignment has {got} values, formula has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{n} variables exceed the brute-force cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("group size rounds to zero (base {base}, p {p})")]
    ZeroGroupSize { base: u64, p: u32 },
    #[error("{base}^{p} codewords exceed the size cap")]
    TooManyCodewords { base: u64, p: u32 },
    #[error("invalid grouping parameters: {0}")]
    InvalidParameters(String),
}

/// A literal: 1-based variable index plus polarity (`true` = positive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn from_dimacs(x: i64) -> Self {
        Literal { var: x.unsigned_abs() as usize, positive: x > 0 }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn is_true_under(self, value: bool) -> bool {
        value == self.positive
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    pub fn from_dimacs(lits: &[i64]) -> Self {
        Clause { literals: lits.iter().map(|&x| Literal::from_dimacs(x)).collect() }
    }

    /// Number of literal occurrences, repeats included.
    pub fn size(&self) -> usize {
        self.literals.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

/// Truth values indexed by variable; `values[0]` is x1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    /// Assignment of `n` variables at `rank`, with x1 as the most significant bit.
    pub fn from_rank(n: usize, rank: u64) -> Self {
        Assignment { values: (0..n).map(|i| (rank >> (n - 1 - i)) & 1 == 1).collect() }
    }

    pub fn rank(&self) -> u64 {
        self.values.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }
}

impl CnfFormula {
    /// Builds a formula from DIMACS-style signed literals. Panics on invalid input;
    /// meant for tests and generated suites.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[&[i64]]) -> Self {
        let f = CnfFormula {
            num_vars,
            clauses: clauses.iter().map(|c| Clause::from_dimacs(c)).collect(),
        };
        assert!(f.clauses.iter().all(|c| !c.literals.is_empty()));
        assert!(f.clauses.iter().flat_map(|c| &c.literals).all(|l| l.var >= 1 && l.var <= num_vars));
        f
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn total_literals(&self) -> usize {
        self.clauses.iter().map(Clause::size).sum()
    }

    pub fn evaluate(&self, tau: &Assignment) -> Result<bool, FormulaError> {
        if tau.values.len() != self.num_vars {
            return Err(FormulaError::LengthMismatch { expected: self.num_vars, got: tau.values.len() });
        }
        Ok(self
            .clauses
            .iter()
            .all(|c| c.literals.iter().any(|l| l.is_true_under(tau.value(l.var)))))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in &c.literals {
                write!(out, "{} ", l.to_dimacs()).unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::MalformedHeader(format!("second header on line {line_no}")));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(ParseError::MalformedHeader(line.to_string()));
            }
            let n = parts[2].parse().map_err(|_| ParseError::MalformedHeader(line.to_string()))?;
            let m = parts[3].parse().map_err(|_| ParseError::MalformedHeader(line.to_string()))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(ParseError::MalformedHeader(format!("clause data before header on line {line_no}")));
        };
        for tok in line.split_whitespace() {
            let x: i64 = tok
                .parse()
                .map_err(|_| ParseError::BadToken { token: tok.to_string(), line: line_no })?;
            if x == 0 {
                if current.is_empty() {
                    return Err(ParseError::EmptyClause(clauses.len() + 1));
                }
                clauses.push(Clause::new(std::mem::take(&mut current)));
            } else {
                if x.unsigned_abs() as usize > n {
                    return Err(ParseError::VariableOutOfRange { lit: x, num_vars: n, line: line_no });
                }
                current.push(Literal::from_dimacs(x));
            }
        }
    }

    let Some((n, m)) = header else {
        return Err(ParseError::MalformedHeader("missing `p cnf` header".into()));
    };
    // A trailing clause without its terminating 0 still counts toward the mismatch.
    let found = clauses.len() + usize::from(!current.is_empty());
    if found != m {
        return Err(ParseError::ClauseCountMismatch { declared: m, found });
    }
    Ok(CnfFormula { num_vars: n, clauses })
}

/// Lowest-rank satisfying assignment (x1 most significant), or `None` if UNSAT.
pub fn brute_force_sat(phi: &CnfFormula) -> Result<Option<Assignment>, FormulaError> {
    brute_force_sat_capped(phi, DEFAULT_SAT_CAP)
}

pub fn brute_force_sat_capped(phi: &CnfFormula, cap: usize) -> Result<Option<Assignment>, FormulaError> {
    let n = phi.num_vars;
    if n > cap {
        return Err(FormulaError::CapExceeded { n, cap });
    }
    // Clauses as (positive mask, negative mask) over rank bits.
    let bit = |var: usize| 1u64 << (n - var);
    let masks: Vec<(u64, u64)> = phi
        .clauses
        .iter()
        .map(|c| {
            c.literals.iter().fold((0, 0), |(p, q), l| {
                if l.positive {
                    (p | bit(l.var), q)
                } else {
                    (p, q | bit(l.var))
                }
            })
        })
        .collect();
    for rank in 0..(1u64 << n) {
        if masks.iter().all(|&(p, q)| rank & p != 0 || !rank & q != 0) {
            return Ok(Some(Assignment::from_rank(n, rank)));
        }
    }
    Ok(None)
}

/// Makes every clause even-sized: a fresh variable z is appended to each odd
/// clause and forced false by the extra clause (¬z ∨ ¬z).
pub fn pad_to_even(phi: &CnfFormula) -> CnfFormula {
    if phi.clauses.iter().all(|c| c.size() % 2 == 0) {
        return phi.clone();
    }
    let z = phi.num_vars + 1;
    let mut clauses: Vec<Clause> = phi
        .clauses
        .iter()
        .map(|c| {
            let mut c = c.clone();
            if c.size() % 2 == 1 {
                c.literals.push(Literal::pos(z));
            }
            c
        })
        .collect();
    clauses.push(Clause::new(vec![Literal::neg(z), Literal::neg(z)]));
    CnfFormula { num_vars: z, clauses }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
}

/// Consecutive blocks of variables; group `i` holds `groups[i]` (1-based variable indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableGrouping {
    pub group_size: usize,
    pub groups: Vec<Vec<usize>>,
    pub rounding: Rounding,
}

/// Upper limit on base^p, the number of codewords a gadget can encode.
pub const MAX_CODEWORDS: u64 = 1 << 20;

pub fn checked_pow(base: u64, p: u32) -> Option<u64> {
    base.checked_pow(p).filter(|&v| v <= MAX_CODEWORDS)
}

/// ⌊log2 base^p⌋ or ⌈log2 base^p⌉, computed exactly.
pub fn group_size_for(base: u64, p: u32, rounding: Rounding) -> Result<usize, FormulaError> {
    let codewords = checked_pow(base, p).ok_or(FormulaError::TooManyCodewords { base, p })?;
    let floor = 63 - codewords.leading_zeros() as usize;
    Ok(match rounding {
        Rounding::Floor => floor,
        Rounding::Ceil if codewords.is_power_of_two() => floor,
        Rounding::Ceil => floor + 1,
    })
}

pub fn make_groups(n: usize, base: u64, p: u32, rounding: Rounding) -> Result<VariableGrouping, FormulaError> {
    if base < 2 || p < 1 || n < 1 {
        return Err(FormulaError::InvalidParameters(format!("n={n}, base={base}, p={p}")));
    }
    let beta = group_size_for(base, p, rounding)?;
    if beta == 0 {
        return Err(FormulaError::ZeroGroupSize { base, p });
    }
    let groups = (1..=n).collect::<Vec<_>>().chunks(beta).map(<[usize]>::to_vec).collect();
    Ok(VariableGrouping { group_size: beta, groups, rounding })
}

impl VariableGrouping {
    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn num_assignments(&self, group: usize) -> u64 {
        1 << self.groups[group].len()
    }

    /// Group index (0-based) holding variable `var`.
    pub fn group_of(&self, var: usize) -> usize {
        (var - 1) / self.group_size
    }

    pub fn unrank(&self, group: usize, rank: u64) -> GroupAssignment {
        let k = self.groups[group].len();
        assert!(rank < 1 << k, "rank {rank} out of range for group of size {k}");
        GroupAssignment {
            group_index: group,
            values: (0..k).map(|b| (rank >> (k - 1 - b)) & 1 == 1).collect(),
            rank,
        }
    }

    /// Restriction of a full assignment to one group.
    pub fn restrict(&self, group: usize, tau: &Assignment) -> GroupAssignment {
        let values: Vec<bool> = self.groups[group].iter().map(|&v| tau.value(v)).collect();
        let rank = values.iter().fold(0, |acc, &b| (acc << 1) | b as u64);
        GroupAssignment { group_index: group, values, rank }
    }

    pub fn satisfies(&self, ga: &GroupAssignment, clause: &Clause) -> bool {
        let vars = &self.groups[ga.group_index];
        clause.literals.iter().any(|l| {
            vars.iter()
                .position(|&v| v == l.var)
                .is_some_and(|k| l.is_true_under(ga.values[k]))
        })
    }
}

/// Truth values for one group; the first variable is the most significant rank bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAssignment {
    pub group_index: usize,
    pub values: Vec<bool>,
    pub rank: u64,
}

/// Assignments of group `group` under which clause `clause` (0-based) has a true
/// literal, in rank order.
pub fn satisfying_group_assignments(
    phi: &CnfFormula,
    grouping: &VariableGrouping,
    group: usize,
    clause: usize,
) -> Vec<GroupAssignment> {
    let c = &phi.clauses[clause];
    (0..grouping.num_assignments(group))
        .map(|r| grouping.unrank(group, r))
        .filter(|ga| grouping.satisfies(ga, c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let f = parse_dimacs("p cnf 1 1\n1 0").unwrap();
        assert_eq!(f, CnfFormula::from_dimacs_clauses(1, &[&[1]]));
        let f = parse_dimacs("c hi\np cnf 2 2\n1 -2 0\n-1 0\n").unwrap();
        assert_eq!(f, CnfFormula::from_dimacs_clauses(2, &[&[1, -2], &[-1]]));
    }

    #[test]
    fn parse_errors_are_distinct() {
        assert!(matches!(parse_dimacs("p cnf 1 1\n2 0"), Err(ParseError::VariableOutOfRange { .. })));
        assert!(matches!(parse_dimacs("p cnf x 1\n1 0"), Err(ParseError::MalformedHeader(_))));
        assert!(matches!(parse_dimacs("p dnf 1 1\n1 0"), Err(ParseError::MalformedHeader(_))));
        assert!(matches!(parse_dimacs("1 0"), Err(ParseError::MalformedHeader(_))));
        assert!(matches!(parse_dimacs("p cnf 1 2\n1 0\n0"), Err(ParseError::EmptyClause(2))));
        assert!(matches!(
            parse_dimacs("p cnf 1 2\n1 0"),
            Err(ParseError::ClauseCountMismatch { declared: 2, found: 1 })
        ));
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_dimacs("p cnf 3 1\n1 2\n-3 0\n").unwrap();
        assert_eq!(f.clauses[0].size(), 3);
    }

    #[test]
    fn writer_is_exact() {
        let text = "p cnf 2 2\n1 -2 0\n-1 0\n";
        assert_eq!(parse_dimacs(text).unwrap().to_dimacs(), text);
    }

    #[test]
    fn evaluate_examples() {
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1]]);
        assert!(f.evaluate(&Assignment::new(vec![true])).unwrap());
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1], &[-1]]);
        assert!(!f.evaluate(&Assignment::new(vec![true])).unwrap());
        assert!(!f.evaluate(&Assignment::new(vec![false])).unwrap());
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]);
        assert!(f.evaluate(&Assignment::new(vec![false, false])).unwrap());
        assert!(f.evaluate(&Assignment::new(vec![true])).is_err());
    }

    #[test]
    fn brute_force_order() {
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1], &[-1]]);
        assert_eq!(brute_force_sat(&f).unwrap(), None);
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2]]);
        assert_eq!(brute_force_sat(&f).unwrap(), Some(Assignment::new(vec![false, true])));
        let f = CnfFormula::from_dimacs_clauses(1, &[&[-1]]);
        assert_eq!(brute_force_sat(&f).unwrap(), Some(Assignment::new(vec![false])));
        let big = CnfFormula { num_vars: 25, clauses: vec![Clause::from_dimacs(&[1])] };
        assert!(matches!(brute_force_sat(&big), Err(FormulaError::CapExceeded { .. })));
    }

    #[test]
    fn padding_examples() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]);
        assert_eq!(pad_to_even(&f), f);
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1]]);
        assert_eq!(pad_to_even(&f), CnfFormula::from_dimacs_clauses(2, &[&[1, 2], &[-2, -2]]));
        let f = CnfFormula::from_dimacs_clauses(3, &[&[1], &[2, 3]]);
        assert_eq!(
            pad_to_even(&f),
            CnfFormula::from_dimacs_clauses(4, &[&[1, 4], &[2, 3], &[-4, -4]])
        );
    }

    #[test]
    fn grouping_examples() {
        let g = make_groups(5, 3, 1, Rounding::Floor).unwrap();
        assert_eq!((g.group_size, g.num_groups()), (1, 5));
        let g = make_groups(5, 3, 1, Rounding::Ceil).unwrap();
        assert_eq!((g.group_size, g.num_groups()), (2, 3));
        assert_eq!(g.groups, vec![vec![1, 2], vec![3, 4], vec![5]]);
        let g = make_groups(4, 3, 2, Rounding::Floor).unwrap();
        assert_eq!((g.group_size, g.num_groups()), (3, 2));
        let g = make_groups(4, 4, 1, Rounding::Ceil).unwrap();
        assert_eq!(g.group_size, 2);
        assert!(make_groups(4, 3, 40, Rounding::Floor).is_err());
        assert!(make_groups(0, 3, 1, Rounding::Floor).is_err());
    }

    #[test]
    fn satisfying_group_assignment_examples() {
        let f = CnfFormula::from_dimacs_clauses(3, &[&[1, -2]]);
        let single = make_groups(3, 3, 1, Rounding::Floor).unwrap();
        let sat = satisfying_group_assignments(&f, &single, 0, 0);
        assert_eq!(sat.len(), 1);
        assert_eq!(sat[0].values, vec![true]);
        assert!(satisfying_group_assignments(&f, &single, 2, 0).is_empty());

        let pairs = make_groups(3, 3, 1, Rounding::Ceil).unwrap();
        let sat = satisfying_group_assignments(&f, &pairs, 0, 0);
        assert_eq!(sat.iter().map(|g| g.rank).collect::<Vec<_>>(), vec![0, 2, 3]);
    }
}
