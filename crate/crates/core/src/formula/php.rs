//! Pigeonhole variables `p_xy` and the positive-literal preprocessing `F -> F'`.

use serde::{Deserialize, Serialize};

use super::{Dnf, Literal, Term, VarId};
use crate::error::FormulaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pigeon(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Hole(pub usize);

/// `n + 1` pigeons, `n` holes; variable `p_xy` is `VarId(x * n + y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhpInstance {
    pub n: usize,
}

impl PhpInstance {
    pub fn new(n: usize) -> Self {
        PhpInstance { n }
    }

    pub fn pigeons(&self) -> usize {
        self.n + 1
    }

    pub fn holes(&self) -> usize {
        self.n
    }

    pub fn num_vars(&self) -> usize {
        (self.n + 1) * self.n
    }

    pub fn var(&self, x: Pigeon, y: Hole) -> VarId {
        debug_assert!(x.0 <= self.n && y.0 < self.n);
        VarId(x.0 * self.n + y.0)
    }

    pub fn pair(&self, v: VarId) -> (Pigeon, Hole) {
        (Pigeon(v.0 / self.n), Hole(v.0 % self.n))
    }
}

/// Expands one conjunction of pigeonhole literals into positive terms.
///
/// `¬p_xy` becomes the choice of `p_xy'` over `y' != y` in ascending hole
/// order; choices are enumerated lexicographically across literals, the first
/// literal varying slowest. Repeated literals collapse, and any combination
/// that sends one pigeon to two holes or two pigeons to one hole is dropped.
/// The input may mention a variable twice (with either sign).
pub fn expand_php_literals(inst: PhpInstance, literals: &[Literal]) -> Vec<Term> {
    let options: Vec<Vec<VarId>> = literals
        .iter()
        .map(|lit| {
            let (x, y) = inst.pair(lit.var);
            if lit.positive {
                vec![lit.var]
            } else {
                (0..inst.n)
                    .filter(|&h| h != y.0)
                    .map(|h| inst.var(x, Hole(h)))
                    .collect()
            }
        })
        .collect();
    if options.iter().any(|o| o.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; options.len()];
    loop {
        let mut vars: Vec<VarId> = Vec::with_capacity(options.len());
        for (i, &c) in choice.iter().enumerate() {
            let v = options[i][c];
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        if is_consistent(inst, &vars) {
            let lits = vars
                .into_iter()
                .map(|var| Literal {
                    var,
                    positive: true,
                })
                .collect();
            out.push(Term::new(lits).expect("deduplicated"));
        }
        // odometer, last literal fastest
        let mut i = options.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

fn is_consistent(inst: PhpInstance, vars: &[VarId]) -> bool {
    let pairs: Vec<_> = vars.iter().map(|&v| inst.pair(v)).collect();
    pairs.iter().enumerate().all(|(i, (x, y))| {
        pairs[..i]
            .iter()
            .all(|(x2, y2)| x != x2 && y != y2)
    })
}

/// `F -> F'`: expansions of earlier terms precede those of later ones.
pub fn php_preprocess(inst: PhpInstance, f: &Dnf) -> Result<Dnf, FormulaError> {
    if f.n() != inst.num_vars() {
        return Err(FormulaError::UniverseMismatch {
            got: f.n(),
            n: inst.num_vars(),
        });
    }
    let terms = f
        .terms()
        .iter()
        .flat_map(|t| expand_php_literals(inst, t.literals()))
        .collect();
    Dnf::new(f.n(), f.r(), terms)
}
