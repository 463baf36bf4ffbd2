//! 3-SAT instances: representation, evaluation, exhaustive counting and the
//! derived-instance operations used when hunting for further solutions.

mod dimacs;
mod generate;

pub use dimacs::{emit_dimacs, parse_dimacs};
pub use generate::{clause_count_for, generate_instance, GenConfig, CLAUSE_RATIO};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{map_chunks, Exec};

/// Default ceiling on `n` for exhaustive enumeration.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("assignment has {got} bits but the instance has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("exhaustive enumeration refused: n = {n} exceeds the limit of {limit}")]
    ExhaustiveLimit { n: usize, limit: usize },
    #[error("generation requires n >= 4, got {0}")]
    TooFewVariables(usize),
    #[error("no instance matched after {attempts} draws (target N_S = {target:?})")]
    GenerationFailed { attempts: u64, target: Option<u64> },
    #[error("variable {var} out of range for n = {n}")]
    VariableOutOfRange { var: usize, n: usize },
    #[error("assignment does not satisfy the instance")]
    NotASolution,
    #[error("fixing x{var} = {value} empties clause {clause}")]
    Conflict { var: usize, value: bool, clause: usize },
    #[error("exclusion clause needs 3 distinct variables in range, got {0:?}")]
    BadExclusionVars([usize; 3]),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    /// +1 for a positive literal, -1 for a negated one.
    pub fn sign(self) -> f64 {
        if self.negated {
            -1.0
        } else {
            1.0
        }
    }

    pub fn satisfied_by(self, value: bool) -> bool {
        value != self.negated
    }

    /// DIMACS encoding: 1-based, negative when negated.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn satisfied_by(&self, bits: &[bool]) -> bool {
        self.literals.iter().any(|l| l.satisfied_by(bits[l.var]))
    }

    /// Literals sorted by (var, polarity); clauses are equal as sets iff
    /// their normal forms match.
    pub fn normal_form(&self) -> Vec<Literal> {
        let mut lits = self.literals.clone();
        lits.sort_unstable();
        lits
    }

    pub fn has_distinct_vars(&self) -> bool {
        let mut vars: Vec<usize> = self.literals.iter().map(|l| l.var).collect();
        vars.sort_unstable();
        vars.windows(2).all(|w| w[0] != w[1])
    }

    /// (mask, fail pattern) over an assignment index: the clause is false
    /// exactly when `z & mask == fail`.
    fn masks(&self) -> (u64, u64) {
        self.literals.iter().fold((0, 0), |(m, f), l| {
            let bit = 1u64 << l.var;
            (m | bit, if l.negated { f | bit } else { f })
        })
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Truth values for `n` variables. Bit `i` is x_i; `true` is TRUE.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    pub bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn all(n: usize, value: bool) -> Self {
        Assignment { bits: vec![value; n] }
    }

    /// Decodes a basis index: bit `i` of `z` is variable `i`.
    pub fn from_index(n: usize, z: u64) -> Self {
        Assignment {
            bits: (0..n).map(|i| (z >> i) & 1 == 1).collect(),
        }
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.bits.len() <= 64, "assignment too wide for an index");
        self.bits
            .iter()
            .enumerate()
            .fold(0, |z, (i, &b)| if b { z | (1 << i) } else { z })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn hamming(&self, other: &Assignment) -> usize {
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for Assignment {
    /// Variable 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Per-criterion results of the generation rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Criteria {
    pub distinct_clauses: bool,
    pub both_polarities: bool,
    pub three_distinct_vars: bool,
    pub clause_count: bool,
}

impl Criteria {
    pub fn all(&self) -> bool {
        self.distinct_clauses && self.both_polarities && self.three_distinct_vars && self.clause_count
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatInstance {
    n: usize,
    clauses: Vec<Clause>,
    /// Variables fixed by [`SatInstance::assign_and_simplify`].
    pinned: Vec<(usize, bool)>,
    canonical: bool,
    solution_count: Option<u64>,
    seed: Option<u64>,
}

impl SatInstance {
    /// Builds an instance, validating literal ranges and recomputing the
    /// canonical flag.
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self, SatError> {
        for c in &clauses {
            for l in &c.literals {
                if l.var >= n {
                    return Err(SatError::VariableOutOfRange { var: l.var, n });
                }
            }
        }
        let mut inst = SatInstance {
            n,
            clauses,
            pinned: Vec::new(),
            canonical: false,
            solution_count: None,
            seed: None,
        };
        inst.canonical = inst.criteria().all();
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn pinned(&self) -> &[(usize, bool)] {
        &self.pinned
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn solution_count(&self) -> Option<u64> {
        self.solution_count
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn with_solution_count(mut self, count: Option<u64>) -> Self {
        self.solution_count = count;
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    /// The clause checks a solver must pass: every clause in stored order,
    /// followed by a unit clause for each pinned variable.
    pub fn check_clauses(&self) -> Vec<Clause> {
        let mut out = self.clauses.clone();
        out.extend(
            self.pinned
                .iter()
                .map(|&(var, value)| Clause::new(vec![Literal { var, negated: !value }])),
        );
        out
    }

    /// Same instance with clauses permuted by `order` (indices into the
    /// current clause list).
    pub fn reordered(&self, order: &[usize]) -> Self {
        let mut out = self.clone();
        out.clauses = order.iter().map(|&i| self.clauses[i].clone()).collect();
        out
    }

    pub fn criteria(&self) -> Criteria {
        let mut forms: Vec<Vec<Literal>> = self.clauses.iter().map(Clause::normal_form).collect();
        forms.sort();
        let distinct_clauses = forms.windows(2).all(|w| w[0] != w[1]);

        let mut pos = vec![false; self.n];
        let mut neg = vec![false; self.n];
        for l in self.clauses.iter().flat_map(|c| &c.literals) {
            if l.negated {
                neg[l.var] = true;
            } else {
                pos[l.var] = true;
            }
        }
        let both_polarities = pos.iter().zip(&neg).all(|(p, q)| *p && *q);
        let three_distinct_vars = self.clauses.iter().all(|c| c.len() == 3 && c.has_distinct_vars());
        Criteria {
            distinct_clauses,
            both_polarities,
            three_distinct_vars,
            clause_count: self.pinned.is_empty() && self.clauses.len() == clause_count_for(self.n),
        }
    }

    /// True iff every clause (and every pin) holds under `a`.
    pub fn evaluate(&self, a: &Assignment) -> Result<bool, SatError> {
        if a.len() != self.n {
            return Err(SatError::LengthMismatch {
                expected: self.n,
                got: a.len(),
            });
        }
        Ok(
            self.pinned.iter().all(|&(v, val)| a.bits[v] == val)
                && self.clauses.iter().all(|c| c.satisfied_by(&a.bits)),
        )
    }

    /// Exhaustive count of satisfying assignments. The solutions themselves
    /// are returned when there are at most `cap` of them.
    pub fn count_solutions(&self, cap: usize, limit: usize) -> Result<SolutionCount, SatError> {
        self.count_solutions_with(cap, limit, Exec::default())
    }

    pub fn count_solutions_with(&self, cap: usize, limit: usize, exec: Exec) -> Result<SolutionCount, SatError> {
        let limit = limit.min(63);
        if self.n > limit {
            return Err(SatError::ExhaustiveLimit { n: self.n, limit });
        }
        let masks = self.compiled_masks();
        let total = 1usize << self.n;
        let parts = map_chunks(exec, total, |r| {
            let mut count = 0u64;
            let mut found = Vec::new();
            for z in r {
                let z = z as u64;
                if masks.iter().all(|&(m, f)| z & m != f) {
                    count += 1;
                    if found.len() <= cap {
                        found.push(z);
                    }
                }
            }
            (count, found)
        });
        let count: u64 = parts.iter().map(|p| p.0).sum();
        let solutions = (count as usize <= cap).then(|| {
            parts
                .into_iter()
                .flat_map(|p| p.1)
                .map(|z| Assignment::from_index(self.n, z))
                .collect()
        });
        Ok(SolutionCount { count, solutions })
    }

    /// Clause masks plus one unit mask per pin.
    fn compiled_masks(&self) -> Vec<(u64, u64)> {
        let mut masks: Vec<(u64, u64)> = self.clauses.iter().map(Clause::masks).collect();
        masks.extend(self.pinned.iter().map(|&(v, val)| {
            let bit = 1u64 << v;
            (bit, if val { 0 } else { bit })
        }));
        masks
    }

    /// Appends a clause that `a` falsifies, built on `vars` with each literal
    /// opposite to `a`'s value. Any assignment agreeing with `a` on `vars`
    /// is excluded along with it.
    pub fn add_exclusion_clause(&self, a: &Assignment, vars: [usize; 3]) -> Result<Self, SatError> {
        if !self.evaluate(a)? {
            return Err(SatError::NotASolution);
        }
        let distinct = vars[0] != vars[1] && vars[0] != vars[2] && vars[1] != vars[2];
        if !distinct || vars.iter().any(|&v| v >= self.n) {
            return Err(SatError::BadExclusionVars(vars));
        }
        let clause = Clause::new(
            vars.iter()
                .map(|&var| Literal {
                    var,
                    negated: a.bits[var],
                })
                .collect(),
        );
        let mut out = self.clone();
        out.clauses.push(clause);
        out.canonical = false;
        out.solution_count = None;
        Ok(out)
    }

    /// Fixes `var := value`: drops satisfied clauses and deletes the
    /// falsified literal from the rest. Indices are not renumbered; the
    /// variable is recorded as pinned.
    pub fn assign_and_simplify(&self, var: usize, value: bool) -> Result<Self, SatError> {
        if var >= self.n {
            return Err(SatError::VariableOutOfRange { var, n: self.n });
        }
        if let Some(&(_, v)) = self.pinned.iter().find(|p| p.0 == var) {
            if v != value {
                return Err(SatError::Conflict {
                    var,
                    value,
                    clause: self.clauses.len(),
                });
            }
        }
        let mut clauses = Vec::with_capacity(self.clauses.len());
        for (i, c) in self.clauses.iter().enumerate() {
            if c.literals.iter().any(|l| l.var == var && l.satisfied_by(value)) {
                continue;
            }
            let kept: Vec<Literal> = c.literals.iter().copied().filter(|l| l.var != var).collect();
            if kept.is_empty() {
                return Err(SatError::Conflict { var, value, clause: i });
            }
            clauses.push(Clause::new(kept));
        }
        let mut pinned = self.pinned.clone();
        if !pinned.iter().any(|p| p.0 == var) {
            pinned.push((var, value));
        }
        Ok(SatInstance {
            n: self.n,
            clauses,
            pinned,
            canonical: false,
            solution_count: None,
            seed: self.seed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionCount {
    pub count: u64,
    pub solutions: Option<Vec<Assignment>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(lits: &[i64]) -> Clause {
        Clause::new(
            lits.iter()
                .map(|&l| Literal {
                    var: (l.unsigned_abs() - 1) as usize,
                    negated: l < 0,
                })
                .collect(),
        )
    }

    fn all_patterns() -> SatInstance {
        let clauses = (0..8)
            .map(|p| {
                clause(&[
                    if p & 1 == 0 { 1 } else { -1 },
                    if p & 2 == 0 { 2 } else { -2 },
                    if p & 4 == 0 { 3 } else { -3 },
                ])
            })
            .collect();
        SatInstance::new(3, clauses).unwrap()
    }

    #[test]
    fn positive_clause_semantics() {
        let inst = SatInstance::new(3, vec![clause(&[1, 2, 3])]).unwrap();
        assert!(inst.evaluate(&Assignment::all(3, true)).unwrap());
        assert!(!inst.evaluate(&Assignment::all(3, false)).unwrap());
        assert_eq!(inst.count_solutions(8, 30).unwrap().count, 7);
    }

    #[test]
    fn all_eight_patterns_unsatisfiable() {
        let inst = all_patterns();
        for z in 0..8 {
            assert!(!inst.evaluate(&Assignment::from_index(3, z)).unwrap());
        }
        let c = inst.count_solutions(4, 30).unwrap();
        assert_eq!(c.count, 0);
        assert_eq!(c.solutions, Some(vec![]));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let inst = SatInstance::new(3, vec![clause(&[1, 2, 3])]).unwrap();
        assert!(matches!(
            inst.evaluate(&Assignment::all(4, true)),
            Err(SatError::LengthMismatch { expected: 3, got: 4 })
        ));
    }

    #[test]
    fn exhaustive_limit_refusal_names_limit() {
        let inst = SatInstance::new(12, vec![clause(&[1, 2, 3])]).unwrap();
        let err = inst.count_solutions(0, 10).unwrap_err();
        assert_eq!(err, SatError::ExhaustiveLimit { n: 12, limit: 10 });
        assert!(err.to_string().contains("10"));
    }

    #[test]
    fn solutions_listed_only_under_cap() {
        let inst = SatInstance::new(3, vec![clause(&[1, 2, 3])]).unwrap();
        assert!(inst.count_solutions(6, 30).unwrap().solutions.is_none());
        assert_eq!(inst.count_solutions(7, 30).unwrap().solutions.unwrap().len(), 7);
    }

    #[test]
    fn exclusion_on_all_false() {
        let inst = SatInstance::new(4, vec![clause(&[-1, 2, 4])]).unwrap();
        let a = Assignment::all(4, false);
        let ex = inst.add_exclusion_clause(&a, [0, 1, 2]).unwrap();
        assert_eq!(ex.clauses().last().unwrap(), &clause(&[1, 2, 3]));
        assert!(!ex.evaluate(&a).unwrap());
        assert!(!ex.is_canonical());
    }

    #[test]
    fn exclusion_requires_solution() {
        let inst = SatInstance::new(3, vec![clause(&[1, 2, 3])]).unwrap();
        assert_eq!(
            inst.add_exclusion_clause(&Assignment::all(3, false), [0, 1, 2]),
            Err(SatError::NotASolution)
        );
        assert!(matches!(
            inst.add_exclusion_clause(&Assignment::all(3, true), [0, 0, 2]),
            Err(SatError::BadExclusionVars(_))
        ));
    }

    #[test]
    fn simplify_drops_and_shrinks() {
        let inst = SatInstance::new(3, vec![clause(&[1, 2, 3]), clause(&[-1, 2, 3])]).unwrap();
        let s = inst.assign_and_simplify(0, true).unwrap();
        assert_eq!(s.clauses(), &[clause(&[2, 3])]);
        assert_eq!(s.pinned(), &[(0, true)]);
        assert_eq!(s.n(), 3);
    }

    #[test]
    fn simplify_conflict() {
        let inst = SatInstance::new(3, vec![clause(&[1]), clause(&[2, 3])]).unwrap();
        assert!(matches!(
            inst.assign_and_simplify(0, false),
            Err(SatError::Conflict { var: 0, clause: 0, .. })
        ));
        let s = inst.assign_and_simplify(0, true).unwrap();
        assert!(s.assign_and_simplify(0, false).is_err());
    }

    #[test]
    fn pins_become_unit_checks() {
        let inst = SatInstance::new(3, vec![clause(&[-1, 2, 3])]).unwrap();
        let s = inst.assign_and_simplify(0, true).unwrap();
        let checks = s.check_clauses();
        assert_eq!(checks.len(), 2);
        assert_eq!(checks[1], clause(&[1]));
        let s = inst.assign_and_simplify(1, false).unwrap();
        assert_eq!(s.check_clauses()[1], clause(&[-2]));
    }

    #[test]
    fn index_round_trip() {
        let a = Assignment::new(vec![true, false, true, true]);
        assert_eq!(a.to_index(), 0b1101);
        assert_eq!(Assignment::from_index(4, 0b1101), a);
        assert_eq!(a.to_string(), "1011");
    }
}
