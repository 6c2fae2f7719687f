//! Codec for partial injections.
//!
//! `β_i` keeps the literals of round `i` that received at least one of the
//! first `s` queries, and `σ_i` maps each of their pigeons to its hole. `β′`
//! is padded with `(0, last)` entries to exactly `s` symbols. Every query
//! reply becomes one `π′` symbol: either "the literal's own hole/pigeon" or
//! an index into a sorted candidate list. For a pigeon query the candidates
//! are the holes unset in `ρσ` together with the holes of later literals of
//! the same `β_i`; hole queries use pigeons symmetrically.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::BetaEntry;
use crate::dist::php::{PartialInjection, PhpParams};
use crate::error::CodecError;
use crate::formula::{Dnf, Hole, Pigeon};
use crate::num::Scalar;
use crate::tree::{PhpAnswer, PhpProcedure, PhpQuery, PhpTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PhpReply {
    /// The pigeon (hole) of the literal being queried.
    Match,
    /// Position in the sorted candidate list.
    Other(usize),
}

impl PhpReply {
    pub fn index(self) -> Option<usize> {
        match self {
            PhpReply::Match => None,
            PhpReply::Other(i) => Some(i),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WitnessPhp {
    pub rho_sigma: PartialInjection,
    pub beta: Vec<BetaEntry>,
    /// Replies grouped by `β′` round; padding rounds are empty.
    pub pi: Vec<Vec<PhpReply>>,
}

impl WitnessPhp {
    pub fn replies(&self) -> impl Iterator<Item = PhpReply> + '_ {
        self.pi.iter().flatten().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.replies().filter_map(PhpReply::index).max()
    }
}

/// Admissible reply indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexLimit {
    /// No bound; used to measure the code space.
    Unbounded,
    /// Indices below this value.
    Explicit(usize),
    /// `l = 2qn` rounded up: `ρσ` must leave fewer than `l` pigeons and
    /// holes unset, and every index must be below `l`.
    Regime(usize),
}

impl IndexLimit {
    pub fn from_params<T: Scalar>(params: &PhpParams<T>) -> Result<Self, CodecError> {
        let l = params.l();
        if l < T::one() {
            return Err(CodecError::OutOfRegime { l: format!("{l:?}") });
        }
        let ceil = (1..=2 * params.n as u64 + 1)
            .find(|&k| T::from_count(k) >= l)
            .expect("l = 2qn <= 2n");
        Ok(IndexLimit::Regime(ceil as usize))
    }

    fn check(self, what: &'static str, size: usize) -> Result<(), CodecError> {
        let bound = match self {
            IndexLimit::Unbounded => return Ok(()),
            IndexLimit::Explicit(b) | IndexLimit::Regime(b) => b,
        };
        if size >= bound {
            return Err(CodecError::IndexBound { what, size, bound });
        }
        Ok(())
    }
}

/// Unset pigeons `A` and unset holes `B` of `ρσ`.
pub fn unset_sets(rho_sigma: &PartialInjection) -> (Vec<Pigeon>, Vec<Hole>) {
    (rho_sigma.free_pigeons(), rho_sigma.free_holes())
}

/// Literals of a round that received a query, in round order.
fn kept_literals(round: &crate::tree::PhpRound) -> Vec<(Pigeon, Hole)> {
    round
        .literals
        .iter()
        .copied()
        .filter(|&(x, y)| {
            round
                .queries
                .iter()
                .any(|(q, _)| *q == PhpQuery::Pigeon(x) || *q == PhpQuery::Hole(y))
        })
        .collect()
}

fn hole_candidates(b: &[Hole], later: &[(Pigeon, Hole)]) -> Vec<Hole> {
    let set: BTreeSet<Hole> = b.iter().copied().chain(later.iter().map(|&(_, y)| y)).collect();
    set.into_iter().collect()
}

fn pigeon_candidates(a: &[Pigeon], later: &[(Pigeon, Hole)]) -> Vec<Pigeon> {
    let set: BTreeSet<Pigeon> = a.iter().copied().chain(later.iter().map(|&(x, _)| x)).collect();
    set.into_iter().collect()
}

pub fn encode_trace_php(
    fprime: &Dnf,
    rho: &PartialInjection,
    trace: &PhpTrace,
    s: usize,
    limit: IndexLimit,
) -> Result<WitnessPhp, CodecError> {
    let inst = rho.instance();
    let kept: Vec<Vec<(Pigeon, Hole)>> = trace.rounds.iter().map(kept_literals).collect();
    let mut rho_sigma = rho.clone();
    for &(x, y) in kept.iter().flatten() {
        rho_sigma.assign(x, y).expect("σ is disjoint from ρ");
    }
    let (a, b) = unset_sets(&rho_sigma);
    if let IndexLimit::Regime(_) = limit {
        limit.check("unset pigeons", a.len())?;
        limit.check("unset holes", b.len())?;
    }
    let mut beta = Vec::new();
    let mut pi = Vec::new();
    for (round, lits) in trace.rounds.iter().zip(&kept) {
        let term = fprime.terms()[round.term].literals();
        for (j, &(x, y)) in lits.iter().enumerate() {
            let location = term
                .iter()
                .position(|l| inst.pair(l.var) == (x, y))
                .expect("kept literal belongs to the term");
            beta.push(BetaEntry::new(location, j + 1 == lits.len()));
        }
        let mut replies = Vec::new();
        for &(q, ans) in &round.queries {
            let idx = lits
                .iter()
                .position(|&(x, y)| q == PhpQuery::Pigeon(x) || q == PhpQuery::Hole(y))
                .expect("query on a kept literal");
            let (x, y) = lits[idx];
            let later = &lits[idx + 1..];
            let reply = match ans {
                PhpAnswer::Hole(h) if h == y => PhpReply::Match,
                PhpAnswer::Pigeon(p) if p == x => PhpReply::Match,
                PhpAnswer::Hole(h) => {
                    let c = hole_candidates(&b, later);
                    PhpReply::Other(c.iter().position(|&z| z == h).expect("reply hole is a candidate"))
                }
                PhpAnswer::Pigeon(p) => {
                    let c = pigeon_candidates(&a, later);
                    PhpReply::Other(c.iter().position(|&z| z == p).expect("reply pigeon is a candidate"))
                }
            };
            if let PhpReply::Other(i) = reply {
                limit.check("reply index", i)?;
            }
            replies.push(reply);
        }
        pi.push(replies);
    }
    while beta.len() < s {
        beta.push(BetaEntry::new(0, true));
        pi.push(Vec::new());
    }
    Ok(WitnessPhp { rho_sigma, beta, pi })
}

pub fn encode_php(
    fprime: &Dnf,
    rho: &PartialInjection,
    s: usize,
    limit: IndexLimit,
) -> Result<WitnessPhp, CodecError> {
    if s == 0 {
        return Err(CodecError::ZeroDepth);
    }
    let trace = PhpProcedure::new(fprime, rho)
        .trace(s)
        .ok_or(CodecError::NotInFailureSet { s })?;
    encode_trace_php(fprime, rho, &trace, s, limit)
}

pub fn decode_php(
    fprime: &Dnf,
    w: &WitnessPhp,
    s: usize,
    limit: IndexLimit,
) -> Result<PartialInjection, CodecError> {
    if s == 0 {
        return Err(CodecError::ZeroDepth);
    }
    let inst = w.rho_sigma.instance();
    if fprime.n() != inst.num_vars() {
        return Err(CodecError::decode(0, "ρσ does not match the universe"));
    }
    if w.beta.len() != s || w.pi.len() != super::beta_rounds(&w.beta).len() {
        return Err(CodecError::decode(0, format!("expected {s} β′ entries grouped like π′")));
    }
    if w.replies().count() != s {
        return Err(CodecError::decode(0, format!("expected {s} π′ entries")));
    }
    let proc = PhpProcedure::new(fprime, &w.rho_sigma);
    let (a, b) = unset_sets(&w.rho_sigma);
    let mut kappa = w.rho_sigma.clone();
    let mut sigma: Vec<(Pigeon, Hole)> = Vec::new();
    let mut asked = 0;
    let rounds = super::beta_rounds(&w.beta);
    let mut round = 0;
    while asked < s {
        let entries = rounds.get(round).ok_or_else(|| CodecError::decode(round + 1, "β′ ran out"))?;
        let mut replies = w.pi[round].iter().copied();
        round += 1;
        let term = proc
            .first_live_term(&kappa)
            .ok_or_else(|| CodecError::decode(round, "no term survives"))?;
        let term_lits = fprime.terms()[term].literals();
        let mut lits = Vec::with_capacity(entries.len());
        for e in entries.iter() {
            let lit = term_lits
                .get(e.location)
                .ok_or_else(|| CodecError::decode(round, format!("location {} outside term {term}", e.location)))?;
            let (x, y) = inst.pair(lit.var);
            if kappa.hole_of(x) != Some(y) || lits.contains(&(x, y)) || sigma.contains(&(x, y)) {
                return Err(CodecError::decode(round, format!("p{}{} is not set by σ", x.0, y.0)));
            }
            lits.push((x, y));
        }
        for &(x, _) in &lits {
            kappa.unassign(x);
        }
        sigma.extend(lits.iter().copied());
        let starred = proc.starred_literals(term, &kappa);
        let mut next = 0;
        let mut used = 0;
        for (x, y) in starred {
            if asked == s {
                break;
            }
            let pigeon_asked = kappa.hole_of(x).is_none();
            let hole_asked_if_pigeon = |k: &PartialInjection| k.pigeon_of(y).is_none();
            let will_ask = pigeon_asked || hole_asked_if_pigeon(&kappa);
            if !will_ask {
                continue;
            }
            if lits.get(next) != Some(&(x, y)) {
                return Err(CodecError::decode(round, format!("β′ does not list p{}{} where it is queried", x.0, y.0)));
            }
            let later = &lits[next + 1..];
            next += 1;
            if pigeon_asked {
                let reply = replies.next().ok_or_else(|| CodecError::decode(round, "π′ ran out"))?;
                let h = match reply {
                    PhpReply::Match => y,
                    PhpReply::Other(i) => {
                        limit.check("reply index", i)?;
                        *hole_candidates(&b, later)
                            .get(i)
                            .ok_or_else(|| CodecError::decode(round, format!("hole index {i} out of range")))?
                    }
                };
                kappa
                    .assign(x, h)
                    .map_err(|e| CodecError::decode(round, e.to_string()))?;
                asked += 1;
                used += 1;
                if asked == s {
                    break;
                }
            }
            if kappa.pigeon_of(y).is_none() {
                let reply = replies.next().ok_or_else(|| CodecError::decode(round, "π′ ran out"))?;
                let p = match reply {
                    PhpReply::Match => x,
                    PhpReply::Other(i) => {
                        limit.check("reply index", i)?;
                        *pigeon_candidates(&a, later)
                            .get(i)
                            .ok_or_else(|| CodecError::decode(round, format!("pigeon index {i} out of range")))?
                    }
                };
                kappa
                    .assign(p, y)
                    .map_err(|e| CodecError::decode(round, e.to_string()))?;
                asked += 1;
                used += 1;
            }
        }
        if next != lits.len() || used == 0 || replies.next().is_some() {
            return Err(CodecError::decode(round, "round does not match its β′ and π′ entries"));
        }
    }
    if rounds[round..].iter().any(|r| r.len() != 1 || r[0] != BetaEntry::new(0, true)) {
        return Err(CodecError::decode(round, "β′ padding must be (0, last)"));
    }
    let mut rho = w.rho_sigma.clone();
    for (x, _) in sigma {
        rho.unassign(x);
    }
    if encode_php(fprime, &rho, s, limit).ok().as_ref() != Some(w) {
        return Err(CodecError::decode(round, "witness is not the image of the recovered restriction"));
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use num_rational::BigRational;

    use super::*;
    use crate::dist::php::enumerate_php;
    use crate::formula::{php_preprocess, Literal, PhpInstance};

    fn lit(inst: PhpInstance, x: usize, y: usize, positive: bool) -> Literal {
        Literal {
            var: inst.var(Pigeon(x), Hole(y)),
            positive,
        }
    }

    #[test]
    fn single_literal_example() {
        let inst = PhpInstance::new(2);
        let f = Dnf::from_literals(inst.num_vars(), 1, [vec![lit(inst, 0, 0, true)]]).unwrap();
        let rho = PartialInjection::empty(2);
        let w = encode_php(&f, &rho, 1, IndexLimit::Unbounded).unwrap();
        assert_eq!(w.rho_sigma, PartialInjection::from_pairs(2, &[(0, 0)]).unwrap());
        assert_eq!(w.beta, vec![BetaEntry::new(0, true)]);
        assert_eq!(w.pi, vec![vec![PhpReply::Match]]);
        assert_eq!(decode_php(&f, &w, 1, IndexLimit::Unbounded).unwrap(), rho);
        // Depth 2: first long branch is 0→1 then hole 0 ← pigeon 1.
        let w2 = encode_php(&f, &rho, 2, IndexLimit::Unbounded).unwrap();
        assert_eq!(w2.beta, vec![BetaEntry::new(0, true), BetaEntry::new(0, true)]);
        assert_eq!(w2.pi[0].len(), 2);
        assert!(w2.pi[1].is_empty());
        assert_eq!(decode_php(&f, &w2, 2, IndexLimit::Unbounded).unwrap(), rho);
    }

    #[test]
    fn regime_limit() {
        let params = PhpParams::new(2, BigRational::new(1.into(), 8.into())).unwrap();
        assert!(matches!(IndexLimit::from_params(&params), Err(CodecError::OutOfRegime { .. })));
        let params = PhpParams::new(3, BigRational::new(1.into(), 3.into())).unwrap();
        assert_eq!(IndexLimit::from_params(&params).unwrap(), IndexLimit::Regime(2));
        let params = PhpParams::new(3, BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(IndexLimit::from_params(&params).unwrap(), IndexLimit::Regime(3));
        let inst = PhpInstance::new(2);
        let f = Dnf::from_literals(inst.num_vars(), 1, [vec![lit(inst, 0, 0, true)]]).unwrap();
        // ρσ = {0→0} leaves 2 pigeons and 1 hole unset.
        let rho = PartialInjection::empty(2);
        assert!(matches!(
            encode_php(&f, &rho, 1, IndexLimit::Regime(2)),
            Err(CodecError::IndexBound { what: "unset pigeons", .. })
        ));
        assert!(encode_php(&f, &rho, 1, IndexLimit::Regime(3)).is_ok());
    }

    #[test]
    fn malformed_indices_are_rejected() {
        let inst = PhpInstance::new(2);
        let f = Dnf::from_literals(inst.num_vars(), 1, [vec![lit(inst, 0, 0, true)]]).unwrap();
        let rho = PartialInjection::empty(2);
        let w = encode_php(&f, &rho, 2, IndexLimit::Unbounded).unwrap();
        let mut a = w.clone();
        a.pi[0][1] = PhpReply::Other(99);
        assert!(decode_php(&f, &a, 2, IndexLimit::Unbounded).is_err());
        let mut b = w.clone();
        b.beta[1] = BetaEntry::new(1, true);
        assert!(decode_php(&f, &b, 2, IndexLimit::Unbounded).is_err());
        let mut c = w.clone();
        c.pi[1].push(PhpReply::Match);
        assert!(decode_php(&f, &c, 2, IndexLimit::Unbounded).is_err());
        let mut d = w;
        d.pi.pop();
        assert!(decode_php(&f, &d, 2, IndexLimit::Unbounded).is_err());
    }

    #[test]
    fn later_literal_hole_needs_extended_candidates() {
        // Term p00 ∧ p11 at n = 2: on the first long branch pigeon 0 can go to
        // hole 1, the hole of the later literal, which σ then occupies.
        let inst = PhpInstance::new(2);
        let f = Dnf::from_literals(inst.num_vars(), 2, [vec![lit(inst, 0, 0, true), lit(inst, 1, 1, true)]]).unwrap();
        let rho = PartialInjection::empty(2);
        let proc = PhpProcedure::new(&f, &rho);
        for s in 1..=4 {
            if let Ok(w) = encode_php(&f, &rho, s, IndexLimit::Unbounded) {
                assert_eq!(decode_php(&f, &w, s, IndexLimit::Unbounded).unwrap(), rho);
            } else {
                assert!(!proc.depth_at_least(s));
            }
        }
    }

    #[test]
    fn exhaustive_roundtrip() {
        for n in 1..=2 {
            let inst = PhpInstance::new(n);
            let mut formulas = vec![Dnf::from_literals(
                inst.num_vars(),
                2,
                [vec![lit(inst, 0, 0, true), lit(inst, 1, n - 1, false)], vec![lit(inst, n, 0, true)]],
            )
            .unwrap()];
            if n == 2 {
                formulas.push(
                    Dnf::from_literals(
                        inst.num_vars(),
                        2,
                        [vec![lit(inst, 0, 1, true), lit(inst, 2, 0, true)], vec![lit(inst, 1, 0, false)]],
                    )
                    .unwrap(),
                );
            }
            for f in formulas {
                let fp = php_preprocess(inst, &f).unwrap();
                for s in 1..=4 {
                    let mut seen = HashSet::new();
                    for rho in enumerate_php(n) {
                        match encode_php(&fp, &rho, s, IndexLimit::Unbounded) {
                            Ok(w) => {
                                assert_eq!(decode_php(&fp, &w, s, IndexLimit::Unbounded).unwrap(), rho);
                                assert!(seen.insert(w.clone()));
                                let added = w.rho_sigma.size() - rho.size();
                                assert!(2 * added >= s);
                            }
                            Err(CodecError::NotInFailureSet { .. }) => {
                                assert!(!PhpProcedure::new(&fp, &rho).depth_at_least(s));
                            }
                            Err(e) => panic!("{e}"),
                        }
                    }
                }
            }
        }
    }
}
