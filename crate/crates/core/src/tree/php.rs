//! Canonical tree for partial injections. Each round takes the starred
//! literals `p_xy` of the first live term of `F′` and, for each, asks where
//! pigeon `x` goes and then which pigeon takes hole `y`. Queries whose answer
//! is already fixed are skipped.

use serde::Serialize;

use super::{build, depth_at_least, first_long_branch, DecisionTree, Label, Procedure, Step, MAX_TREE_DEPTH};
use crate::dist::php::PartialInjection;
use crate::error::TreeError;
use crate::formula::{Dnf, Hole, PhpInstance, Pigeon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PhpQuery {
    /// Which hole does this pigeon go to?
    Pigeon(Pigeon),
    /// Which pigeon goes to this hole?
    Hole(Hole),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PhpAnswer {
    Hole(Hole),
    Pigeon(Pigeon),
}

impl PhpAnswer {
    /// The pair this answer adds to the injection.
    pub fn pair(self, q: PhpQuery) -> (Pigeon, Hole) {
        match (q, self) {
            (PhpQuery::Pigeon(x), PhpAnswer::Hole(y)) => (x, y),
            (PhpQuery::Hole(y), PhpAnswer::Pigeon(x)) => (x, y),
            _ => panic!("answer {self:?} does not fit query {q:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhpRound {
    pub term: usize,
    /// Literals `p_xy` reached in this round.
    pub literals: Vec<(Pigeon, Hole)>,
    /// Queries actually asked, with answers.
    pub queries: Vec<(PhpQuery, PhpAnswer)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhpTrace {
    pub rounds: Vec<PhpRound>,
}

impl PhpTrace {
    pub fn query_count(&self) -> usize {
        self.rounds.iter().map(|r| r.queries.len()).sum()
    }
}

#[derive(Debug, Clone)]
struct Cursor {
    term: usize,
    queue: Vec<(Pigeon, Hole)>,
    next: usize,
    hole_stage: bool,
}

#[derive(Debug, Clone)]
pub struct PhpState {
    pub current: PartialInjection,
    active: Option<Cursor>,
    pub rounds: Vec<PhpRound>,
}

pub struct PhpProcedure<'a> {
    f: &'a Dnf,
    rho: &'a PartialInjection,
    inst: PhpInstance,
}

impl<'a> PhpProcedure<'a> {
    /// `fprime` must contain positive literals only.
    pub fn new(fprime: &'a Dnf, rho: &'a PartialInjection) -> Self {
        let inst = rho.instance();
        debug_assert_eq!(fprime.n(), inst.num_vars());
        debug_assert!(fprime.terms().iter().all(|t| t.literals().iter().all(|l| l.positive)));
        PhpProcedure { f: fprime, rho, inst }
    }

    pub fn tree(&self) -> Result<DecisionTree<PhpQuery, PhpAnswer>, TreeError> {
        build(self, MAX_TREE_DEPTH)
    }

    pub fn depth_at_least(&self, s: usize) -> bool {
        depth_at_least(self, s)
    }

    pub fn trace(&self, s: usize) -> Option<PhpTrace> {
        first_long_branch(self, s).map(|(st, _)| PhpTrace { rounds: st.rounds })
    }

    pub fn first_live_term(&self, current: &PartialInjection) -> Option<usize> {
        self.f.terms().iter().position(|t| !current.falsifies(t))
    }

    /// Literals of `term` still unset under `current`, in term order.
    pub fn starred_literals(&self, term: usize, current: &PartialInjection) -> Vec<(Pigeon, Hole)> {
        self.f.terms()[term]
            .literals()
            .iter()
            .map(|l| self.inst.pair(l.var))
            .filter(|&(x, y)| current.value_of(x, y).is_none())
            .collect()
    }
}

impl Procedure for PhpProcedure<'_> {
    type Query = PhpQuery;
    type Answer = PhpAnswer;
    type State = PhpState;

    fn start(&self) -> PhpState {
        PhpState {
            current: self.rho.clone(),
            active: None,
            rounds: Vec::new(),
        }
    }

    fn step(&self, st: &mut PhpState) -> Step<PhpQuery> {
        loop {
            if let Some(cur) = st.active.as_mut() {
                let round = st.rounds.last_mut().expect("active round");
                while cur.next < cur.queue.len() {
                    let (x, y) = cur.queue[cur.next];
                    if round.literals.len() <= cur.next {
                        round.literals.push((x, y));
                    }
                    if !cur.hole_stage {
                        cur.hole_stage = true;
                        if st.current.hole_of(x).is_none() {
                            return Step::Ask(PhpQuery::Pigeon(x));
                        }
                    }
                    cur.hole_stage = false;
                    cur.next += 1;
                    if st.current.pigeon_of(y).is_none() {
                        // Resume at the following literal after the answer.
                        return Step::Ask(PhpQuery::Hole(y));
                    }
                }
                let term = cur.term;
                st.active = None;
                if st.current.satisfies(&self.f.terms()[term]) {
                    return Step::Leaf(Label::One);
                }
            }
            let Some(term) = self.first_live_term(&st.current) else {
                return Step::Leaf(Label::Zero);
            };
            let queue = self.starred_literals(term, &st.current);
            if queue.is_empty() {
                return Step::Leaf(Label::One);
            }
            st.rounds.push(PhpRound {
                term,
                literals: Vec::new(),
                queries: Vec::new(),
            });
            st.active = Some(Cursor {
                term,
                queue,
                next: 0,
                hole_stage: false,
            });
        }
    }

    fn answers(&self, st: &PhpState, q: &PhpQuery) -> Vec<PhpAnswer> {
        match q {
            PhpQuery::Pigeon(_) => st.current.free_holes().into_iter().map(PhpAnswer::Hole).collect(),
            PhpQuery::Hole(_) => st.current.free_pigeons().into_iter().map(PhpAnswer::Pigeon).collect(),
        }
    }

    fn apply(&self, st: &mut PhpState, q: &PhpQuery, a: &PhpAnswer) {
        let (x, y) = a.pair(*q);
        st.current.assign(x, y).expect("answers are free");
        st.rounds
            .last_mut()
            .expect("active round")
            .queries
            .push((*q, *a));
    }
}

pub fn build_tree_php(
    fprime: &Dnf,
    rho: &PartialInjection,
) -> Result<DecisionTree<PhpQuery, PhpAnswer>, TreeError> {
    PhpProcedure::new(fprime, rho).tree()
}
