//! Canonical decision trees.
//!
//! Each setting is a [`Procedure`]: a deterministic query process whose
//! state advances through forced work until it either halts with a label or
//! asks a query. The engine here explores it depth-first, answers in the
//! order given by [`Procedure::answers`], to materialize the tree, decide
//! `depth >= s` with pruning, or extract the first branch reaching `s`
//! queries.

pub mod block;
pub mod independent;
pub mod php;

use std::fmt::Debug;

use serde::Serialize;

use crate::error::TreeError;

pub use block::{BlockProcedure, BlockRound, BlockTrace};
pub use independent::{IndepProcedure, IndepRound, IndepTrace};
pub use php::{PhpAnswer, PhpProcedure, PhpQuery, PhpRound, PhpTrace};

/// Depth cap for full materialization.
pub const MAX_TREE_DEPTH: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    Zero,
    One,
    /// No legal answer exists for the next query.
    Error,
}

pub enum Step<Q> {
    Leaf(Label),
    Ask(Q),
}

pub trait Procedure {
    type Query: Clone + Debug + PartialEq;
    type Answer: Clone + Debug + PartialEq;
    type State: Clone;

    fn start(&self) -> Self::State;

    /// Runs until the next query or a leaf.
    fn step(&self, state: &mut Self::State) -> Step<Self::Query>;

    /// Legal answers, in branch order.
    fn answers(&self, state: &Self::State, query: &Self::Query) -> Vec<Self::Answer>;

    fn apply(&self, state: &mut Self::State, query: &Self::Query, answer: &Self::Answer);
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecisionTree<Q, A> {
    Leaf(Label),
    Node {
        query: Q,
        children: Vec<(A, DecisionTree<Q, A>)>,
    },
}

impl<Q, A> DecisionTree<Q, A> {
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Node { children, .. } => {
                1 + children.iter().map(|(_, c)| c.depth()).max().unwrap_or(0)
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 1,
            DecisionTree::Node { children, .. } => children.iter().map(|(_, c)| c.leaf_count()).sum(),
        }
    }
}

/// One root-to-leaf path together with the final state.
#[derive(Debug, Clone)]
pub struct Branch<Q, A, S> {
    pub path: Vec<(Q, A)>,
    pub label: Label,
    pub state: S,
}

pub fn build<P: Procedure>(
    proc: &P,
    cap: usize,
) -> Result<DecisionTree<P::Query, P::Answer>, TreeError> {
    fn go<P: Procedure>(
        proc: &P,
        mut state: P::State,
        depth: usize,
        cap: usize,
    ) -> Result<DecisionTree<P::Query, P::Answer>, TreeError> {
        match proc.step(&mut state) {
            Step::Leaf(l) => Ok(DecisionTree::Leaf(l)),
            Step::Ask(q) => {
                if depth >= cap {
                    return Err(TreeError::TooDeep { cap });
                }
                let answers = proc.answers(&state, &q);
                if answers.is_empty() {
                    return Ok(DecisionTree::Leaf(Label::Error));
                }
                let children = answers
                    .into_iter()
                    .map(|a| {
                        let mut child = state.clone();
                        proc.apply(&mut child, &q, &a);
                        go(proc, child, depth + 1, cap).map(|t| (a, t))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(DecisionTree::Node { query: q, children })
            }
        }
    }
    go(proc, proc.start(), 0, cap)
}

/// `depth(T) >= s`, exploring only the top `s` levels.
pub fn depth_at_least<P: Procedure>(proc: &P, s: usize) -> bool {
    fn go<P: Procedure>(proc: &P, mut state: P::State, remaining: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        match proc.step(&mut state) {
            Step::Leaf(_) => false,
            Step::Ask(q) => proc.answers(&state, &q).into_iter().any(|a| {
                let mut child = state.clone();
                proc.apply(&mut child, &q, &a);
                go(proc, child, remaining - 1)
            }),
        }
    }
    go(proc, proc.start(), s)
}

/// State after the first `s` queries of the first branch (in answer order)
/// that has at least `s` queries.
pub fn first_long_branch<P: Procedure>(proc: &P, s: usize) -> Option<(P::State, Vec<(P::Query, P::Answer)>)> {
    fn go<P: Procedure>(
        proc: &P,
        mut state: P::State,
        path: &mut Vec<(P::Query, P::Answer)>,
        remaining: usize,
    ) -> Option<P::State> {
        if remaining == 0 {
            return Some(state);
        }
        match proc.step(&mut state) {
            Step::Leaf(_) => None,
            Step::Ask(q) => {
                for a in proc.answers(&state, &q) {
                    let mut child = state.clone();
                    proc.apply(&mut child, &q, &a);
                    path.push((q.clone(), a));
                    if let Some(found) = go(proc, child, path, remaining - 1) {
                        return Some(found);
                    }
                    path.pop();
                }
                None
            }
        }
    }
    let mut path = Vec::new();
    go(proc, proc.start(), &mut path, s).map(|st| (st, path))
}

/// Every root-to-leaf branch; `Err` if some branch exceeds `cap` queries.
pub fn branches<P: Procedure>(
    proc: &P,
    cap: usize,
) -> Result<Vec<Branch<P::Query, P::Answer, P::State>>, TreeError> {
    fn go<P: Procedure>(
        proc: &P,
        mut state: P::State,
        path: &mut Vec<(P::Query, P::Answer)>,
        cap: usize,
        out: &mut Vec<Branch<P::Query, P::Answer, P::State>>,
    ) -> Result<(), TreeError> {
        match proc.step(&mut state) {
            Step::Leaf(label) => {
                out.push(Branch {
                    path: path.clone(),
                    label,
                    state,
                });
                Ok(())
            }
            Step::Ask(q) => {
                if path.len() >= cap {
                    return Err(TreeError::TooDeep { cap });
                }
                let answers = proc.answers(&state, &q);
                if answers.is_empty() {
                    out.push(Branch {
                        path: path.clone(),
                        label: Label::Error,
                        state,
                    });
                    return Ok(());
                }
                for a in answers {
                    let mut child = state.clone();
                    proc.apply(&mut child, &q, &a);
                    path.push((q.clone(), a));
                    go(proc, child, path, cap, out)?;
                    path.pop();
                }
                Ok(())
            }
        }
    }
    let mut out = Vec::new();
    go(proc, proc.start(), &mut Vec::new(), cap, &mut out)?;
    Ok(out)
}
