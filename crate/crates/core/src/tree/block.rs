//! Canonical tree for block restrictions. Terms are scanned under `ρπ`; each
//! round lists the blocks of the term's starred literals and queries the first
//! star of every such block, fixing the rest of the block to `1`.

use serde::Serialize;

use super::{build, depth_at_least, first_long_branch, DecisionTree, Label, Procedure, Step, MAX_TREE_DEPTH};
use crate::dist::block::{first_star, BlockOutcome};
use crate::error::TreeError;
use crate::formula::{BlockId, BlockStructure, Dnf, Restriction, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockRound {
    pub term: usize,
    /// Blocks queried in this round, in order.
    pub blocks: Vec<BlockId>,
    /// Queried variable of each block.
    pub queried: Vec<VarId>,
    pub replies: Vec<bool>,
    /// Every variable this round set, in block order.
    pub assignment: Vec<(VarId, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockTrace {
    pub rounds: Vec<BlockRound>,
}

impl BlockTrace {
    pub fn query_count(&self) -> usize {
        self.rounds.iter().map(|r| r.blocks.len()).sum()
    }
}

#[derive(Debug, Clone)]
pub struct BlockState {
    pub current: Restriction,
    active: Option<(usize, Vec<BlockId>)>,
    pub rounds: Vec<BlockRound>,
}

pub struct BlockProcedure<'a> {
    f: &'a Dnf,
    rho: &'a Restriction,
    blocks: &'a BlockStructure,
}

impl<'a> BlockProcedure<'a> {
    pub fn new(f: &'a Dnf, outcome: &'a BlockOutcome, blocks: &'a BlockStructure) -> Self {
        Self::from_restriction(f, &outcome.rho, blocks)
    }

    /// Stars of `rho` must already be confined to whole ⋆-blocks.
    pub fn from_restriction(f: &'a Dnf, rho: &'a Restriction, blocks: &'a BlockStructure) -> Self {
        debug_assert_eq!(f.n(), rho.len());
        debug_assert_eq!(blocks.n(), rho.len());
        BlockProcedure { f, rho, blocks }
    }

    pub fn tree(&self) -> Result<DecisionTree<VarId, bool>, TreeError> {
        build(self, MAX_TREE_DEPTH)
    }

    pub fn depth_at_least(&self, s: usize) -> bool {
        depth_at_least(self, s)
    }

    pub fn trace(&self, s: usize) -> Option<BlockTrace> {
        first_long_branch(self, s).map(|(st, _)| BlockTrace { rounds: st.rounds })
    }

    /// Blocks of the starred variables of `term` under `current`, in order of appearance.
    pub fn starred_blocks(&self, term: usize, current: &Restriction) -> Vec<BlockId> {
        let mut out: Vec<BlockId> = Vec::new();
        for lit in self.f.terms()[term].literals() {
            if current.is_star(lit.var) {
                let b = self.blocks.block_of(lit.var);
                if !out.contains(&b) {
                    out.push(b);
                }
            }
        }
        out
    }
}

impl Procedure for BlockProcedure<'_> {
    type Query = VarId;
    type Answer = bool;
    type State = BlockState;

    fn start(&self) -> BlockState {
        BlockState {
            current: self.rho.clone(),
            active: None,
            rounds: Vec::new(),
        }
    }

    fn step(&self, st: &mut BlockState) -> Step<VarId> {
        loop {
            if let Some((term, queue)) = &st.active {
                let asked = st.rounds.last().map_or(0, |r| r.blocks.len());
                if asked < queue.len() {
                    let v = first_star(&st.current, self.blocks, queue[asked]).expect("untouched ⋆-block");
                    return Step::Ask(v);
                }
                let term = *term;
                st.active = None;
                if self.f.terms()[term].is_satisfied(&st.current) {
                    return Step::Leaf(Label::One);
                }
            }
            let Some(term) = self.f.first_live_term(&st.current) else {
                return Step::Leaf(Label::Zero);
            };
            let queue = self.starred_blocks(term, &st.current);
            if queue.is_empty() {
                return Step::Leaf(Label::One);
            }
            st.rounds.push(BlockRound {
                term,
                blocks: Vec::new(),
                queried: Vec::new(),
                replies: Vec::new(),
                assignment: Vec::new(),
            });
            st.active = Some((term, queue));
        }
    }

    fn answers(&self, _: &BlockState, _: &VarId) -> Vec<bool> {
        vec![false, true]
    }

    fn apply(&self, st: &mut BlockState, v: &VarId, reply: &bool) {
        let b = self.blocks.block_of(*v);
        let round = st.rounds.last_mut().expect("active round");
        let mut fixes = Vec::new();
        for &u in self.blocks.block(b) {
            if st.current.is_star(u) {
                fixes.push((u, if u == *v { *reply } else { true }));
            }
        }
        st.current = st.current.compose(&fixes).expect("block stars are unset");
        round.blocks.push(b);
        round.queried.push(*v);
        round.replies.push(*reply);
        round.assignment.extend(fixes);
    }
}

pub fn build_tree_block(
    f: &Dnf,
    outcome: &BlockOutcome,
    blocks: &BlockStructure,
) -> Result<DecisionTree<VarId, bool>, TreeError> {
    BlockProcedure::new(f, outcome, blocks).tree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::block::{enumerate_block, g_extension};
    use crate::formula::Literal;
    use crate::tree::branches;

    fn outcome(s: &str, blocks: &BlockStructure) -> BlockOutcome {
        BlockOutcome::classify(s.parse().unwrap(), blocks).unwrap()
    }

    #[test]
    fn one_star_block() {
        let blocks = BlockStructure::consecutive(&[2]).unwrap();
        let f = Dnf::from_literals(2, 2, [vec![Literal::pos(0), Literal::pos(1)]]).unwrap();
        let o = outcome("**", &blocks);
        assert_eq!(g_extension(&o.rho, &o.classes, &blocks).to_string(), "*1");
        let t = build_tree_block(&f, &o, &blocks).unwrap();
        assert_eq!(
            t,
            DecisionTree::Node {
                query: VarId(0),
                children: vec![(false, DecisionTree::Leaf(Label::Zero)), (true, DecisionTree::Leaf(Label::One))]
            }
        );
        let trace = BlockProcedure::new(&f, &o, &blocks).trace(1).unwrap();
        assert_eq!(
            trace.rounds,
            vec![BlockRound {
                term: 0,
                blocks: vec![BlockId(0)],
                queried: vec![VarId(0)],
                replies: vec![false],
                assignment: vec![(VarId(0), false), (VarId(1), true)],
            }]
        );
    }

    #[test]
    fn queried_variable_is_not_the_term_variable() {
        // Block (x0, x1), term mentions only x1; the query goes to x0.
        let blocks = BlockStructure::consecutive(&[2]).unwrap();
        let f = Dnf::from_literals(2, 1, [vec![Literal::pos(1)]]).unwrap();
        let o = outcome("**", &blocks);
        let t = build_tree_block(&f, &o, &blocks).unwrap();
        // x1 is fixed to 1 whatever the reply, so both leaves are 1.
        assert_eq!(
            t,
            DecisionTree::Node {
                query: VarId(0),
                children: vec![(false, DecisionTree::Leaf(Label::One)), (true, DecisionTree::Leaf(Label::One))]
            }
        );
        // Negated: leaves are both 0.
        let g = Dnf::from_literals(2, 1, [vec![Literal::neg(1)]]).unwrap();
        let t = build_tree_block(&g, &o, &blocks).unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(t.leaf_count(), 2);
        for b in branches(&BlockProcedure::new(&g, &o, &blocks), 20).unwrap() {
            assert_eq!(b.label, Label::Zero);
        }
    }

    #[test]
    fn trivial_cases() {
        let blocks = BlockStructure::consecutive(&[2, 1]).unwrap();
        let f = Dnf::from_literals(3, 2, [vec![Literal::pos(0), Literal::pos(2)], vec![Literal::pos(1)]]).unwrap();
        assert_eq!(
            build_tree_block(&f, &outcome("000", &blocks), &blocks).unwrap(),
            DecisionTree::Leaf(Label::Zero)
        );
        let g = Dnf::from_literals(3, 1, [vec![Literal::pos(2)]]).unwrap();
        assert_eq!(
            build_tree_block(&g, &outcome("**1", &blocks), &blocks).unwrap(),
            DecisionTree::Leaf(Label::One)
        );
    }

    #[test]
    fn one_query_per_block_within_a_round() {
        let blocks = BlockStructure::consecutive(&[2]).unwrap();
        let f = Dnf::from_literals(2, 2, [vec![Literal::pos(0), Literal::neg(1)]]).unwrap();
        let o = outcome("**", &blocks);
        let t = build_tree_block(&f, &o, &blocks).unwrap();
        assert_eq!(t.depth(), 1);
    }

    fn corpus_formulas(n: usize) -> Vec<Dnf> {
        let lits: Vec<Literal> = (0..n).flat_map(|v| [Literal::pos(v), Literal::neg(v)]).collect();
        let mut terms = Vec::new();
        for (i, a) in lits.iter().enumerate() {
            terms.push(vec![*a]);
            for b in &lits[i + 1..] {
                if a.var != b.var {
                    terms.push(vec![*a, *b]);
                }
            }
        }
        let mut out = Vec::new();
        for (i, t) in terms.iter().enumerate() {
            out.push(Dnf::from_literals(n, 2, [t.clone()]).unwrap());
            for u in &terms[i + 1..] {
                out.push(Dnf::from_literals(n, 2, [t.clone(), u.clone()]).unwrap());
            }
        }
        out
    }

    #[test]
    fn decides_g_restriction_exhaustively() {
        for sizes in [vec![2, 1], vec![1, 2], vec![3]] {
            let blocks = BlockStructure::consecutive(&sizes).unwrap();
            let outcomes = enumerate_block(&blocks);
            for f in corpus_formulas(3) {
                for o in &outcomes {
                    let g = g_extension(&o.rho, &o.classes, &blocks);
                    let proc = BlockProcedure::new(&f, o, &blocks);
                    let depth = proc.tree().unwrap().depth();
                    for s in 1..=3 {
                        assert_eq!(proc.depth_at_least(s), depth >= s);
                        assert_eq!(proc.trace(s).map(|t| t.query_count()), (depth >= s).then_some(s));
                    }
                    for b in branches(&proc, 20).unwrap() {
                        let leaf = g.compose(&b.path).unwrap();
                        let want = match b.label {
                            Label::One => Some(true),
                            Label::Zero => Some(false),
                            Label::Error => None,
                        };
                        assert_eq!(f.restrict(&leaf).constant(), want);
                        let mut qs: Vec<BlockId> = b.path.iter().map(|(v, _)| blocks.block_of(*v)).collect();
                        qs.sort();
                        qs.dedup();
                        assert_eq!(qs.len(), b.path.len());
                        // every queried block is fully set
                        for (v, _) in &b.path {
                            for &u in blocks.block(blocks.block_of(*v)) {
                                assert!(!b.state.current.is_star(u));
                            }
                        }
                    }
                }
            }
        }
    }
}
