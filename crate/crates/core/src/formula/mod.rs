//! Literals, terms, r-DNFs and restrictions.

mod blocks;
pub mod php;
pub mod text;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::FormulaError;

pub use blocks::{BlockId, BlockStructure};
pub use php::{expand_php_literals, php_preprocess, Hole, PhpInstance, Pigeon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: VarId,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var: VarId(var),
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var: VarId(var),
            positive: false,
        }
    }

    /// The value of this literal under a restriction: `None` if its variable is starred.
    pub fn value_under(&self, rho: &Restriction) -> Option<bool> {
        rho.get(self.var).as_bool().map(|b| b == self.positive)
    }

    /// The variable value that makes this literal true.
    pub fn satisfying_value(&self) -> bool {
        self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "¬{}", self.var)
        }
    }
}

/// A conjunction of literals. Literal positions are load-bearing: the codecs
/// refer to literals by their index in this sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Term {
    literals: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermStatus {
    Falsified,
    Satisfied,
    /// The starred literals, in their original order.
    Residual(Term),
}

impl Term {
    pub fn new(literals: Vec<Literal>) -> Result<Self, FormulaError> {
        for (i, a) in literals.iter().enumerate() {
            if literals[..i].iter().any(|b| b.var == a.var) {
                return Err(FormulaError::DuplicateVar { var: a.var.0 });
            }
        }
        Ok(Term { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn restrict(&self, rho: &Restriction) -> TermStatus {
        let mut residual = Vec::new();
        for lit in &self.literals {
            match lit.value_under(rho) {
                Some(false) => return TermStatus::Falsified,
                Some(true) => {}
                None => residual.push(*lit),
            }
        }
        if residual.is_empty() {
            TermStatus::Satisfied
        } else {
            TermStatus::Residual(Term { literals: residual })
        }
    }

    pub fn is_falsified(&self, rho: &Restriction) -> bool {
        self.literals.iter().any(|l| l.value_under(rho) == Some(false))
    }

    pub fn is_satisfied(&self, rho: &Restriction) -> bool {
        self.literals.iter().all(|l| l.value_under(rho) == Some(true))
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.literals
            .iter()
            .all(|l| assignment[l.var.0] == l.positive)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "⊤");
        }
        write!(f, "(")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// An ordered disjunction of terms of width at most `r` over `n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dnf {
    n: usize,
    r: usize,
    terms: Vec<Term>,
}

/// A DNF after restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduced {
    Zero,
    One,
    Open(Dnf),
}

impl Reduced {
    pub fn constant(&self) -> Option<bool> {
        match self {
            Reduced::Zero => Some(false),
            Reduced::One => Some(true),
            Reduced::Open(_) => None,
        }
    }
}

impl Dnf {
    pub fn new(n: usize, r: usize, terms: Vec<Term>) -> Result<Self, FormulaError> {
        for t in &terms {
            if t.len() > r {
                return Err(FormulaError::TooWide { width: t.len(), r });
            }
            if let Some(l) = t.literals.iter().find(|l| l.var.0 >= n) {
                return Err(FormulaError::VarOutOfRange { var: l.var.0, n });
            }
        }
        Ok(Dnf { n, r, terms })
    }

    /// Builds a DNF from literal lists; convenient for tests and corpora.
    pub fn from_literals(
        n: usize,
        r: usize,
        terms: impl IntoIterator<Item = Vec<Literal>>,
    ) -> Result<Self, FormulaError> {
        let terms = terms
            .into_iter()
            .map(Term::new)
            .collect::<Result<Vec<_>, _>>()?;
        Dnf::new(n, r, terms)
    }

    pub fn empty(n: usize, r: usize) -> Self {
        Dnf {
            n,
            r,
            terms: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn restrict(&self, rho: &Restriction) -> Reduced {
        let mut kept = Vec::new();
        for t in &self.terms {
            match t.restrict(rho) {
                TermStatus::Falsified => {}
                TermStatus::Satisfied => return Reduced::One,
                TermStatus::Residual(t) => kept.push(t),
            }
        }
        if kept.is_empty() {
            Reduced::Zero
        } else {
            Reduced::Open(Dnf {
                n: self.n,
                r: self.r,
                terms: kept,
            })
        }
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.terms.iter().any(|t| t.eval(assignment))
    }

    /// Index of the first term not falsified by `rho`.
    pub fn first_live_term(&self, rho: &Restriction) -> Option<usize> {
        self.terms.iter().position(|t| !t.is_falsified(rho))
    }
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "⊥");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Value {
    Zero,
    One,
    Star,
}

impl Value {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Value::One
        } else {
            Value::Zero
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Zero => Some(false),
            Value::One => Some(true),
            Value::Star => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Value::Zero => '0',
            Value::One => '1',
            Value::Star => '*',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            '0' => Some(Value::Zero),
            '1' => Some(Value::One),
            '*' => Some(Value::Star),
            _ => None,
        }
    }
}

/// A total map from variables to {0, 1, ⋆}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Restriction {
    values: Vec<Value>,
}

/// Assignment to a set of previously starred variables, in the order made.
pub type Assignment = Vec<(VarId, bool)>;

impl Restriction {
    pub fn all_star(n: usize) -> Self {
        Restriction {
            values: vec![Value::Star; n],
        }
    }

    pub fn from_values(values: Vec<Value>) -> Self {
        Restriction { values }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Restriction {
            values: bits.iter().map(|&b| Value::from_bool(b)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn get(&self, v: VarId) -> Value {
        self.values[v.0]
    }

    pub fn set(&mut self, v: VarId, value: Value) {
        self.values[v.0] = value;
    }

    pub fn is_star(&self, v: VarId) -> bool {
        self.values[v.0] == Value::Star
    }

    pub fn stars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == Value::Star)
            .map(|(i, _)| VarId(i))
    }

    /// Counts of (ones, zeros, stars).
    pub fn counts(&self) -> (usize, usize, usize) {
        self.values.iter().fold((0, 0, 0), |(a, b, c), v| match v {
            Value::One => (a + 1, b, c),
            Value::Zero => (a, b + 1, c),
            Value::Star => (a, b, c + 1),
        })
    }

    /// The assignment this restriction denotes, if it has no stars.
    pub fn as_total(&self) -> Option<Vec<bool>> {
        self.values.iter().map(|v| v.as_bool()).collect()
    }

    /// `ρπ`: extends `self` by an assignment to variables that are starred in `self`.
    pub fn compose(&self, pi: &[(VarId, bool)]) -> Result<Restriction, FormulaError> {
        let mut out = self.clone();
        for &(v, b) in pi {
            if v.0 >= out.values.len() {
                return Err(FormulaError::VarOutOfRange {
                    var: v.0,
                    n: out.values.len(),
                });
            }
            if out.values[v.0] != Value::Star {
                return Err(FormulaError::AlreadySet { var: v.0 });
            }
            out.values[v.0] = Value::from_bool(b);
        }
        Ok(out)
    }

    /// Whether `other` agrees with `self` everywhere `self` is set.
    pub fn extended_by(&self, other: &Restriction) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| *a == Value::Star || a == b)
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            write!(f, "{}", v.symbol())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Restriction {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| {
                Value::from_symbol(c).ok_or(FormulaError::BadSymbol(c))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Restriction::from_values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho(s: &str) -> Restriction {
        s.parse().unwrap()
    }

    fn t(lits: Vec<Literal>) -> Term {
        Term::new(lits).unwrap()
    }

    #[test]
    fn restrict_term_cases() {
        // (x1 ∧ ¬x2) with x1 at index 0, x2 at index 1
        let term = t(vec![Literal::pos(0), Literal::neg(1)]);
        assert_eq!(
            term.restrict(&rho("1*")),
            TermStatus::Residual(t(vec![Literal::neg(1)]))
        );
        assert_eq!(term.restrict(&rho("0*")), TermStatus::Falsified);
        assert_eq!(term.restrict(&rho("10")), TermStatus::Satisfied);
    }

    #[test]
    fn residual_keeps_literal_order() {
        let term = t(vec![Literal::neg(2), Literal::pos(0), Literal::pos(1)]);
        assert_eq!(
            term.restrict(&rho("*1*")),
            TermStatus::Residual(t(vec![Literal::neg(2), Literal::pos(0)]))
        );
    }

    #[test]
    fn duplicate_variables_rejected() {
        assert_eq!(
            Term::new(vec![Literal::pos(3), Literal::neg(3)]),
            Err(FormulaError::DuplicateVar { var: 3 })
        );
    }

    #[test]
    fn restrict_dnf_cases() {
        let f = Dnf::from_literals(2, 1, [vec![Literal::pos(0)], vec![Literal::pos(1)]]).unwrap();
        assert_eq!(f.restrict(&rho("**")), Reduced::Open(f.clone()));
        assert_eq!(f.restrict(&rho("1*")), Reduced::One);
        assert_eq!(Dnf::empty(2, 1).restrict(&rho("**")), Reduced::Zero);
        assert_eq!(f.restrict(&rho("00")), Reduced::Zero);
    }

    #[test]
    fn compose_cases() {
        assert_eq!(rho("*").compose(&[(VarId(0), false)]).unwrap(), rho("0"));
        assert_eq!(rho("1*0").compose(&[]).unwrap(), rho("1*0"));
        assert_eq!(
            rho("1").compose(&[(VarId(0), false)]),
            Err(FormulaError::AlreadySet { var: 0 })
        );
    }

    #[test]
    fn dnf_validation() {
        assert_eq!(
            Dnf::from_literals(2, 1, [vec![Literal::pos(0), Literal::pos(1)]]),
            Err(FormulaError::TooWide { width: 2, r: 1 })
        );
        assert_eq!(
            Dnf::from_literals(2, 1, [vec![Literal::pos(2)]]),
            Err(FormulaError::VarOutOfRange { var: 2, n: 2 })
        );
    }

    #[test]
    fn counts_and_display() {
        let r = rho("10*1");
        assert_eq!(r.counts(), (2, 1, 1));
        assert_eq!(r.to_string(), "10*1");
        assert_eq!(r.stars().collect::<Vec<_>>(), vec![VarId(2)]);
    }
}
