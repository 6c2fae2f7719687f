//! Canonical tree for independent restrictions: find the first term not
//! falsified, query its starred variables in order, stop with `1` once the
//! term is satisfied, otherwise rescan.

use serde::Serialize;

use super::{build, depth_at_least, first_long_branch, DecisionTree, Procedure, Step, Label, MAX_TREE_DEPTH};
use crate::error::TreeError;
use crate::formula::{Dnf, Restriction, VarId};

/// One scan-and-query round: the term, the variables queried (so far) and the replies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndepRound {
    pub term: usize,
    pub vars: Vec<VarId>,
    pub replies: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndepTrace {
    pub rounds: Vec<IndepRound>,
}

impl IndepTrace {
    pub fn query_count(&self) -> usize {
        self.rounds.iter().map(|r| r.vars.len()).sum()
    }
}

#[derive(Debug, Clone)]
pub struct IndepState {
    pub current: Restriction,
    active: Option<(usize, Vec<VarId>)>,
    pub rounds: Vec<IndepRound>,
}

pub struct IndepProcedure<'a> {
    f: &'a Dnf,
    rho: &'a Restriction,
}

impl<'a> IndepProcedure<'a> {
    pub fn new(f: &'a Dnf, rho: &'a Restriction) -> Self {
        debug_assert_eq!(f.n(), rho.len());
        IndepProcedure { f, rho }
    }

    pub fn tree(&self) -> Result<DecisionTree<VarId, bool>, TreeError> {
        build(self, MAX_TREE_DEPTH)
    }

    pub fn depth_at_least(&self, s: usize) -> bool {
        depth_at_least(self, s)
    }

    /// Trace of the first branch with at least `s` queries, cut after the `s`-th.
    pub fn trace(&self, s: usize) -> Option<IndepTrace> {
        first_long_branch(self, s).map(|(st, _)| IndepTrace { rounds: st.rounds })
    }
}

impl Procedure for IndepProcedure<'_> {
    type Query = VarId;
    type Answer = bool;
    type State = IndepState;

    fn start(&self) -> IndepState {
        IndepState {
            current: self.rho.clone(),
            active: None,
            rounds: Vec::new(),
        }
    }

    fn step(&self, st: &mut IndepState) -> Step<VarId> {
        loop {
            if let Some((term, queue)) = &st.active {
                let asked = st.rounds.last().map_or(0, |r| r.vars.len());
                if asked < queue.len() {
                    return Step::Ask(queue[asked]);
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
            let stars: Vec<VarId> = self.f.terms()[term]
                .literals()
                .iter()
                .map(|l| l.var)
                .filter(|&v| st.current.is_star(v))
                .collect();
            if stars.is_empty() {
                return Step::Leaf(Label::One);
            }
            st.rounds.push(IndepRound {
                term,
                vars: Vec::new(),
                replies: Vec::new(),
            });
            st.active = Some((term, stars));
        }
    }

    fn answers(&self, _: &IndepState, _: &VarId) -> Vec<bool> {
        vec![false, true]
    }

    fn apply(&self, st: &mut IndepState, v: &VarId, b: &bool) {
        st.current = st.current.compose(&[(*v, *b)]).expect("queried variable is starred");
        let round = st.rounds.last_mut().expect("active round");
        round.vars.push(*v);
        round.replies.push(*b);
    }
}

pub fn build_tree_indep(f: &Dnf, rho: &Restriction) -> Result<DecisionTree<VarId, bool>, TreeError> {
    IndepProcedure::new(f, rho).tree()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::dist::independent::enumerate_indep;
    use crate::formula::Literal;
    use crate::tree::branches;

    fn r(s: &str) -> Restriction {
        s.parse().unwrap()
    }

    fn dnf(n: usize, r: usize, terms: &[&[i64]]) -> Dnf {
        Dnf::from_literals(
            n,
            r,
            terms.iter().map(|t| {
                t.iter()
                    .map(|&k| {
                        if k > 0 {
                            Literal::pos((k - 1) as usize)
                        } else {
                            Literal::neg((-k - 1) as usize)
                        }
                    })
                    .collect()
            }),
        )
        .unwrap()
    }

    #[test]
    fn single_variable_tree() {
        let f = dnf(1, 1, &[&[1]]);
        let t = build_tree_indep(&f, &r("*")).unwrap();
        assert_eq!(
            t,
            DecisionTree::Node {
                query: VarId(0),
                children: vec![(false, DecisionTree::Leaf(Label::Zero)), (true, DecisionTree::Leaf(Label::One))]
            }
        );
        assert_eq!(t.depth(), 1);
        let star = r("*");
        let p = IndepProcedure::new(&f, &star);
        assert!(p.depth_at_least(1));
        assert!(!p.depth_at_least(2));
    }

    #[test]
    fn empty_and_satisfied() {
        let e = Dnf::empty(2, 1);
        assert_eq!(build_tree_indep(&e, &r("**")).unwrap(), DecisionTree::Leaf(Label::Zero));
        let f = dnf(1, 1, &[&[1]]);
        assert_eq!(build_tree_indep(&f, &r("1")).unwrap(), DecisionTree::Leaf(Label::One));
    }

    #[test]
    fn first_long_branch_takes_zero_first() {
        let f = dnf(2, 1, &[&[1], &[2]]);
        let stars = r("**");
        let trace = IndepProcedure::new(&f, &stars).trace(1).unwrap();
        assert_eq!(
            trace.rounds,
            vec![IndepRound {
                term: 0,
                vars: vec![VarId(0)],
                replies: vec![false]
            }]
        );
        assert!(IndepProcedure::new(&f, &stars).trace(3).is_none());
    }

    #[test]
    fn trims_last_round_mid_term() {
        // (x0 ∧ x1 ∧ x2): first long branch with s = 2 stops inside the term.
        let f = dnf(3, 3, &[&[1, 2, 3]]);
        // The round asks every star of the term even after a 0 reply.
        let stars = r("***");
        let trace = IndepProcedure::new(&f, &stars).trace(2).unwrap();
        assert_eq!(trace.rounds.len(), 1);
        assert_eq!(trace.rounds[0].vars, vec![VarId(0), VarId(1)]);
        assert_eq!(trace.rounds[0].replies, vec![false, false]);
    }

    fn arb_instance() -> impl Strategy<Value = (Dnf, Restriction)> {
        let n = 4usize;
        let lit = (0..n, any::<bool>()).prop_map(|(v, p)| Literal { var: VarId(v), positive: p });
        let term = proptest::collection::vec(lit, 1..=3).prop_filter_map("dup", |mut ls| {
            ls.sort();
            ls.dedup_by_key(|l| l.var);
            Some(ls)
        });
        let f = proptest::collection::vec(term, 0..=4)
            .prop_map(move |ts| Dnf::from_literals(n, 3, ts).unwrap());
        let rho = proptest::collection::vec(0u8..3, n).prop_map(|ds| {
            Restriction::from_values(
                ds.into_iter()
                    .map(|d| [crate::formula::Value::Zero, crate::formula::Value::One, crate::formula::Value::Star][d as usize])
                    .collect(),
            )
        });
        (f, rho)
    }

    proptest! {
        #[test]
        fn tree_decides_restricted_formula((f, rho) in arb_instance()) {
            let proc = IndepProcedure::new(&f, &rho);
            for b in branches(&proc, MAX_TREE_DEPTH).unwrap() {
                let pi: Vec<(VarId, bool)> = b.path.clone();
                let leaf_rho = rho.compose(&pi).unwrap();
                let want = match b.label { Label::One => Some(true), Label::Zero => Some(false), Label::Error => None };
                prop_assert_eq!(f.restrict(&leaf_rho).constant(), want);
                let mut seen: Vec<VarId> = pi.iter().map(|(v, _)| *v).collect();
                seen.sort();
                seen.dedup();
                prop_assert_eq!(seen.len(), pi.len());
            }
        }

        #[test]
        fn pruned_depth_matches_full_depth((f, rho) in arb_instance(), s in 1usize..6) {
            let proc = IndepProcedure::new(&f, &rho);
            let depth = proc.tree().unwrap().depth();
            prop_assert_eq!(proc.depth_at_least(s), depth >= s);
            prop_assert_eq!(proc.trace(s).is_some(), depth >= s);
        }

        #[test]
        fn trace_replays((f, rho) in arb_instance(), s in 1usize..5) {
            let proc = IndepProcedure::new(&f, &rho);
            if let Some(trace) = proc.trace(s) {
                prop_assert_eq!(trace.query_count(), s);
                // Replaying the replies regenerates the same terms and variables.
                let mut cur = rho.clone();
                for (i, round) in trace.rounds.iter().enumerate() {
                    let term = f.first_live_term(&cur).unwrap();
                    prop_assert_eq!(term, round.term);
                    let stars: Vec<VarId> = f.terms()[term].literals().iter().map(|l| l.var).filter(|&v| cur.is_star(v)).collect();
                    if i + 1 < trace.rounds.len() {
                        prop_assert_eq!(&stars, &round.vars);
                    } else {
                        prop_assert!(stars.starts_with(&round.vars));
                    }
                    let pi: Vec<_> = round.vars.iter().copied().zip(round.replies.iter().copied()).collect();
                    cur = cur.compose(&pi).unwrap();
                }
                prop_assert_eq!(proc.trace(s), Some(trace));
            }
        }
    }

    #[test]
    fn exhaustive_agreement_small() {
        let f = dnf(3, 2, &[&[1, -2], &[2, 3], &[-1, -3]]);
        for rho in enumerate_indep(3) {
            let proc = IndepProcedure::new(&f, &rho);
            let depth = proc.tree().unwrap().depth();
            for s in 1..=4 {
                assert_eq!(proc.depth_at_least(s), depth >= s);
            }
        }
    }
}
