//! Codec for block restrictions.
//!
//! `σ` turns every ⋆-block of `β` into a 0-block or an all-ones block: stars
//! whose literal occurs positively become `1`, the others `0`. `γ′` records,
//! per round and per term position, which literals were flipped to `1`.

use serde::{Deserialize, Serialize};

use super::{beta_round, BetaEntry};
use crate::dist::block::BlockOutcome;
use crate::error::CodecError;
use crate::formula::{BlockId, BlockStructure, Dnf, Restriction, Value, VarId};
use crate::tree::{BlockProcedure, BlockTrace};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WitnessBlock {
    pub rho_sigma: BlockOutcome,
    pub beta: Vec<BetaEntry>,
    pub pi: Vec<bool>,
    /// One string of `r` bits per round.
    pub gamma: Vec<Vec<bool>>,
}

impl WitnessBlock {
    /// Number of variables recorded in `γ′`.
    pub fn gamma_weight(&self) -> usize {
        self.gamma.iter().flatten().filter(|b| **b).count()
    }
}

pub fn encode_trace_block(f: &Dnf, blocks: &BlockStructure, rho: &Restriction, trace: &BlockTrace) -> WitnessBlock {
    let mut current = rho.clone();
    let mut sigma: Vec<(VarId, bool)> = Vec::new();
    let mut beta = Vec::new();
    let mut gamma = Vec::new();
    let mut pi = Vec::new();
    for round in &trace.rounds {
        let lits = f.terms()[round.term].literals();
        let first_location = |b: BlockId| {
            lits.iter()
                .position(|l| current.is_star(l.var) && blocks.block_of(l.var) == b)
                .expect("block of a starred literal")
        };
        beta.extend(beta_round(round.blocks.iter().map(|&b| first_location(b))));
        let mut bits = vec![false; f.r()];
        for (j, l) in lits.iter().enumerate() {
            if l.positive && current.is_star(l.var) && round.blocks.contains(&blocks.block_of(l.var)) {
                bits[j] = true;
            }
        }
        for &b in &round.blocks {
            for &v in blocks.block(b) {
                if current.is_star(v) {
                    let positive = lits.iter().any(|l| l.var == v && l.positive);
                    sigma.push((v, positive));
                }
            }
        }
        gamma.push(bits);
        pi.extend(round.replies.iter().copied());
        current = current.compose(&round.assignment).expect("round sets fresh stars");
    }
    let rs = rho.compose(&sigma).expect("σ sets fresh stars");
    let rho_sigma = BlockOutcome::classify(rs, blocks).expect("σ keeps blocks homogeneous");
    WitnessBlock {
        rho_sigma,
        beta,
        pi,
        gamma,
    }
}

pub fn encode_block(
    f: &Dnf,
    blocks: &BlockStructure,
    outcome: &BlockOutcome,
    s: usize,
) -> Result<WitnessBlock, CodecError> {
    if s == 0 {
        return Err(CodecError::ZeroDepth);
    }
    let trace = BlockProcedure::new(f, outcome, blocks)
        .trace(s)
        .ok_or(CodecError::NotInFailureSet { s })?;
    Ok(encode_trace_block(f, blocks, &outcome.rho, &trace))
}

pub fn decode_block(
    f: &Dnf,
    blocks: &BlockStructure,
    w: &WitnessBlock,
    s: usize,
) -> Result<BlockOutcome, CodecError> {
    if s == 0 {
        return Err(CodecError::ZeroDepth);
    }
    let n = f.n();
    if w.rho_sigma.rho.len() != n || blocks.n() != n || w.rho_sigma.classes.len() != blocks.len() {
        return Err(CodecError::decode(0, "ρσ does not match the universe"));
    }
    if w.beta.len() != s || w.pi.len() != s {
        return Err(CodecError::decode(0, format!("expected {s} β′ and π′ entries, got {} and {}", w.beta.len(), w.pi.len())));
    }
    if w.gamma.iter().any(|g| g.len() != f.r()) {
        return Err(CodecError::decode(0, format!("γ′ strings must have {} bits", f.r())));
    }
    let mut current = w.rho_sigma.rho.clone();
    let mut rho = w.rho_sigma.rho.clone();
    let mut undone = vec![false; blocks.len()];
    let mut pos = 0;
    let mut round = 0;
    while pos < s {
        let gamma = w
            .gamma
            .get(round)
            .ok_or_else(|| CodecError::decode(round + 1, "γ′ has too few rounds"))?;
        round += 1;
        let term = f
            .first_live_term(&current)
            .ok_or_else(|| CodecError::decode(round, "no term survives"))?;
        let lits = f.terms()[term].literals();
        if gamma.iter().skip(lits.len()).any(|b| *b) {
            return Err(CodecError::decode(round, "γ′ marks a position past the end of the term"));
        }
        let mut updates: Vec<(VarId, Value)> = Vec::new();
        loop {
            let e = w.beta[pos];
            let lit = lits
                .get(e.location)
                .ok_or_else(|| CodecError::decode(round, format!("location {} outside term {term}", e.location)))?;
            let b = blocks.block_of(lit.var);
            if std::mem::replace(&mut undone[b.0], true) {
                return Err(CodecError::decode(round, format!("block {} named twice", b.0)));
            }
            let marked: Vec<VarId> = lits
                .iter()
                .zip(gamma)
                .filter(|(l, g)| **g && blocks.block_of(l.var) == b)
                .map(|(l, _)| l.var)
                .collect();
            for &v in blocks.block(b) {
                if marked.contains(&v) || current.get(v) == Value::Zero {
                    rho.set(v, Value::Star);
                }
            }
            let first = blocks
                .block(b)
                .iter()
                .copied()
                .find(|&v| rho.is_star(v))
                .ok_or_else(|| CodecError::decode(round, format!("block {} has no star to restore", b.0)))?;
            for &v in blocks.block(b) {
                if rho.is_star(v) {
                    let value = if v == first { Value::from_bool(w.pi[pos]) } else { Value::One };
                    updates.push((v, value));
                }
            }
            pos += 1;
            if e.last || pos == s {
                break;
            }
        }
        for (v, value) in updates {
            current.set(v, value);
        }
    }
    if round != w.gamma.len() {
        return Err(CodecError::decode(round, "γ′ has extra rounds"));
    }
    let outcome = BlockOutcome::classify(rho, blocks).map_err(|e| CodecError::decode(round, e.to_string()))?;
    if encode_block(f, blocks, &outcome, s).ok().as_ref() != Some(w) {
        return Err(CodecError::decode(round, "witness is not the image of the recovered restriction"));
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use num_rational::BigRational;

    use super::*;
    use crate::dist::block::{enumerate_block, weight_block, BlockClass, BlockParams};
    use crate::formula::Literal;
    use crate::num::Scalar;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn single_block_example() {
        let blocks = BlockStructure::consecutive(&[2]).unwrap();
        let f = Dnf::from_literals(2, 2, [vec![Literal::pos(0), Literal::pos(1)]]).unwrap();
        let o = BlockOutcome::classify("**".parse().unwrap(), &blocks).unwrap();
        let w = encode_block(&f, &blocks, &o, 1).unwrap();
        assert_eq!(w.rho_sigma.rho.to_string(), "11");
        assert_eq!(w.rho_sigma.classes, vec![BlockClass::AllOnes]);
        assert_eq!(w.gamma, vec![vec![true, true]]);
        assert_eq!(w.gamma_weight(), 2);
        assert_eq!(w.pi, vec![false]);
        assert_eq!(w.beta, vec![BetaEntry::new(0, true)]);
        assert_eq!(decode_block(&f, &blocks, &w, 1).unwrap(), o);

        let params = BlockParams::new(blocks.clone(), q(1, 4), q(1, 4)).unwrap();
        let ratio = weight_block(&w.rho_sigma.rho, &w.rho_sigma.classes, &params).unwrap()
            / weight_block(&o.rho, &o.classes, &params).unwrap();
        assert_eq!(ratio, q(36, 1));
        assert!(ratio >= q(27, 1));
    }

    #[test]
    fn negative_literal_gives_zero_block() {
        let blocks = BlockStructure::consecutive(&[2]).unwrap();
        let f = Dnf::from_literals(2, 1, [vec![Literal::neg(1)]]).unwrap();
        let o = BlockOutcome::classify("**".parse().unwrap(), &blocks).unwrap();
        let w = encode_block(&f, &blocks, &o, 1).unwrap();
        assert_eq!(w.rho_sigma.rho.to_string(), "00");
        assert_eq!(w.gamma, vec![vec![false]]);
        assert_eq!(decode_block(&f, &blocks, &w, 1).unwrap(), o);
    }

    #[test]
    fn malformed_witnesses_are_rejected() {
        let blocks = BlockStructure::consecutive(&[2, 2]).unwrap();
        let f = Dnf::from_literals(4, 2, [vec![Literal::pos(1), Literal::pos(2)]]).unwrap();
        let o = BlockOutcome::classify("****".parse().unwrap(), &blocks).unwrap();
        let w = encode_block(&f, &blocks, &o, 2).unwrap();
        assert_eq!(decode_block(&f, &blocks, &w, 2).unwrap(), o);
        let mut a = w.clone();
        a.gamma[0][0] = !a.gamma[0][0];
        assert!(decode_block(&f, &blocks, &a, 2).is_err());
        let mut b = w.clone();
        b.beta[1].location = 0;
        assert!(decode_block(&f, &blocks, &b, 2).is_err());
        let mut c = w.clone();
        c.gamma.push(vec![false, false]);
        assert!(decode_block(&f, &blocks, &c, 2).is_err());
        let mut d = w.clone();
        d.gamma[0].pop();
        assert!(decode_block(&f, &blocks, &d, 2).is_err());
        let mut e = w;
        e.beta[0].location = 9;
        assert!(decode_block(&f, &blocks, &e, 2).is_err());
    }

    #[test]
    fn exhaustive_roundtrip_and_ratio() {
        let p = q(1, 16);
        let qq = q(1, 16);
        let f = Dnf::from_literals(
            4,
            2,
            [
                vec![Literal::pos(0), Literal::neg(2)],
                vec![Literal::pos(1), Literal::pos(3)],
                vec![Literal::neg(1)],
            ],
        )
        .unwrap();
        for order in [vec![vec![0, 1], vec![2, 3]], vec![vec![1, 2], vec![3, 0]], vec![vec![3], vec![0, 2], vec![1]]] {
            let blocks = BlockStructure::new(4, order.into_iter().map(|b| b.into_iter().map(VarId).collect()).collect()).unwrap();
            let params = BlockParams::new(blocks.clone(), p.clone(), qq.clone()).unwrap();
            let one = q(1, 1);
            for s in 1..=2 {
                let mut seen = HashSet::new();
                for o in enumerate_block(&blocks) {
                    let Ok(w) = encode_block(&f, &blocks, &o, s) else { continue };
                    assert_eq!(decode_block(&f, &blocks, &w, s).unwrap(), o);
                    assert!(seen.insert(w.clone()));
                    let ratio = weight_block(&w.rho_sigma.rho, &w.rho_sigma.classes, &params).unwrap()
                        / weight_block(&o.rho, &o.classes, &params).unwrap();
                    let m = w.gamma_weight() as u32;
                    let bound = ((&one - &p) / &p).powu(m) * ((&one - &qq) / &qq).powu(s as u32);
                    assert!(ratio >= bound, "{o}: {ratio} < {bound}");
                }
            }
        }
    }
}
