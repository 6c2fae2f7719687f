//! Exhaustive codec sweeps: `decode ∘ encode = id` on `S`, distinct
//! witnesses for distinct restrictions, and per-class weight bounds.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;

use super::{BlockSetting, IndepSetting, Outcome, PhpSetting, Setting};
use crate::codec::text::{write_witness, Witness};
use crate::codec::{
    decode_block, decode_indep, decode_php, encode_block, encode_indep, encode_php, BetaEntry, PhpReply,
    WitnessBlock, WitnessIndep, WitnessPhp,
};
use crate::dist::block::BlockOutcome;
use crate::dist::{Family, PartialInjection};
use crate::error::{CodecError, ParamError};
use crate::formula::Restriction;
use crate::num::{one_minus, Scalar};

/// A setting with a witness codec.
pub trait Roundtrip<T: Scalar>: Setting<T> {
    type Witness: Clone + Eq + Hash + Debug + Send + Sync;
    /// The witness with `ρσ` dropped; the proofs bound each class's weight.
    type Class: Clone + Eq + Hash + Send + Sync;

    fn encode(&self, o: &Outcome<T, Self>, s: usize) -> Result<Self::Witness, CodecError>;

    fn decode(&self, w: &Self::Witness, s: usize) -> Result<Outcome<T, Self>, CodecError>;

    fn class(&self, w: &Self::Witness) -> Self::Class;

    /// Bound on the total weight of a class, where the proof supplies one.
    fn class_bound(&self, w: &Self::Witness, s: usize) -> Option<T>;

    /// A deliberately damaged copy, for fault injection.
    fn corrupt(&self, w: &Self::Witness) -> Self::Witness;

    fn show_outcome(&self, o: &Outcome<T, Self>) -> String;

    fn show_witness(&self, w: &Self::Witness) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rho: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectivityReport {
    /// Outcomes in `S`.
    pub members: u64,
    pub distinct_witnesses: u64,
    /// Distinct witnesses once `ρσ` is dropped.
    pub classes: u64,
    pub violation_count: u64,
    /// The first few violations in enumeration order.
    pub violations: Vec<Violation>,
    pub class_violations: u64,
    /// Largest class weight divided by its bound.
    pub max_class_ratio: Option<f64>,
}

impl InjectivityReport {
    pub fn ok(&self) -> bool {
        self.violation_count == 0 && self.class_violations == 0
    }
}

const KEPT_VIOLATIONS: usize = 10;

/// Encodes every outcome, decodes every witness, and checks injectivity and
/// the class bounds. `corrupt` damages each witness before decoding.
pub fn sweep_injectivity<T: Scalar, S: Roundtrip<T>>(
    setting: &S,
    s: usize,
    corrupt: bool,
    unsafe_sizes: bool,
) -> Result<InjectivityReport, ParamError> {
    if !unsafe_sizes {
        setting.guard()?;
    }
    let family = setting.family();
    let outcomes = family.outcomes();
    let results: Vec<(usize, Result<Option<S::Witness>, Violation>)> = outcomes
        .par_iter()
        .enumerate()
        .map(|(i, o)| (i, check_one(setting, o, s, corrupt)))
        .collect();

    let mut violations = Vec::new();
    let mut violation_count = 0u64;
    let mut push = |v: Violation| {
        violation_count += 1;
        if violations.len() < KEPT_VIOLATIONS {
            violations.push(v);
        }
    };
    let mut owners: HashMap<S::Witness, usize> = HashMap::new();
    let mut classes: HashMap<S::Class, (T, Option<T>)> = HashMap::new();
    let mut members = 0u64;
    for (i, r) in results {
        let w = match r {
            Ok(Some(w)) => w,
            Ok(None) => continue,
            Err(v) => {
                members += 1;
                push(v);
                continue;
            }
        };
        members += 1;
        if let Some(&j) = owners.get(&w) {
            push(Violation {
                rho: setting.show_outcome(&outcomes[i]),
                witness: Some(setting.show_witness(&w)),
                reason: format!("shares its witness with {}", setting.show_outcome(&outcomes[j])),
            });
            continue;
        }
        let entry = classes
            .entry(setting.class(&w))
            .or_insert_with(|| (T::zero(), setting.class_bound(&w, s)));
        entry.0 = entry.0.clone() + family.weight(&outcomes[i]);
        owners.insert(w, i);
    }
    let mut class_violations = 0;
    let mut max_ratio: Option<f64> = None;
    for (sum, bound) in classes.values() {
        if let Some(b) = bound {
            if sum > b {
                class_violations += 1;
            }
            let ratio = sum.to_f64() / b.to_f64();
            max_ratio = Some(max_ratio.map_or(ratio, |m| m.max(ratio)));
        }
    }
    Ok(InjectivityReport {
        members,
        distinct_witnesses: owners.len() as u64,
        classes: classes.len() as u64,
        violation_count,
        violations,
        class_violations,
        max_class_ratio: max_ratio,
    })
}

fn check_one<T: Scalar, S: Roundtrip<T>>(
    setting: &S,
    o: &Outcome<T, S>,
    s: usize,
    corrupt: bool,
) -> Result<Option<S::Witness>, Violation> {
    let member = setting.fails(o, s);
    let bad = |witness: Option<String>, reason: String| Violation {
        rho: setting.show_outcome(o),
        witness,
        reason,
    };
    match setting.encode(o, s) {
        Err(CodecError::NotInFailureSet { .. }) if !member => Ok(None),
        Err(e) => Err(bad(None, format!("encoding failed: {e}"))),
        Ok(w) if !member => Err(bad(Some(setting.show_witness(&w)), "encoded although not in S".into())),
        Ok(w) => {
            let sent = if corrupt { setting.corrupt(&w) } else { w.clone() };
            match setting.decode(&sent, s) {
                Ok(back) if back == *o => Ok(Some(w)),
                Ok(back) => Err(bad(
                    Some(setting.show_witness(&sent)),
                    format!("decoded to {}", setting.show_outcome(&back)),
                )),
                Err(e) => Err(bad(Some(setting.show_witness(&sent)), format!("decoding failed: {e}"))),
            }
        }
    }
}

fn flip_first(bits: &mut [bool]) {
    if let Some(b) = bits.first_mut() {
        *b = !*b;
    }
}

impl<T: Scalar> Roundtrip<T> for IndepSetting<T> {
    type Witness = WitnessIndep;
    type Class = (Vec<BetaEntry>, Vec<bool>);

    fn encode(&self, rho: &Restriction, s: usize) -> Result<WitnessIndep, CodecError> {
        encode_indep(&self.f, rho, s)
    }

    fn decode(&self, w: &WitnessIndep, s: usize) -> Result<Restriction, CodecError> {
        decode_indep(&self.f, w, s)
    }

    fn class(&self, w: &WitnessIndep) -> Self::Class {
        (w.beta.clone(), w.pi.clone())
    }

    /// `(2p/(1-p))^s`.
    fn class_bound(&self, _: &WitnessIndep, s: usize) -> Option<T> {
        let p = &self.params.p;
        (*p < T::one()).then(|| (T::from_count(2) * p.clone() / one_minus(p)).powu(s as u32))
    }

    fn corrupt(&self, w: &WitnessIndep) -> WitnessIndep {
        let mut w = w.clone();
        flip_first(&mut w.pi);
        w
    }

    fn show_outcome(&self, rho: &Restriction) -> String {
        rho.to_string()
    }

    fn show_witness(&self, w: &WitnessIndep) -> String {
        write_witness(&Witness::Indep(w.clone()))
    }
}

impl<T: Scalar> Roundtrip<T> for BlockSetting<T> {
    type Witness = WitnessBlock;
    type Class = (Vec<BetaEntry>, Vec<bool>, Vec<Vec<bool>>);

    fn encode(&self, o: &BlockOutcome, s: usize) -> Result<WitnessBlock, CodecError> {
        encode_block(&self.f, &self.params.blocks, o, s)
    }

    fn decode(&self, w: &WitnessBlock, s: usize) -> Result<BlockOutcome, CodecError> {
        decode_block(&self.f, &self.params.blocks, w, s)
    }

    fn class(&self, w: &WitnessBlock) -> Self::Class {
        (w.beta.clone(), w.pi.clone(), w.gamma.clone())
    }

    /// `(p/(1-p))^m (q/(1-q))^s` with `m` the number of `γ′` marks.
    fn class_bound(&self, w: &WitnessBlock, s: usize) -> Option<T> {
        let (p, q) = (&self.params.p, &self.params.q);
        (*p < T::one() && *q < T::one()).then(|| {
            (p.clone() / one_minus(p)).powu(w.gamma_weight() as u32) * (q.clone() / one_minus(q)).powu(s as u32)
        })
    }

    fn corrupt(&self, w: &WitnessBlock) -> WitnessBlock {
        let mut w = w.clone();
        flip_first(&mut w.pi);
        w
    }

    fn show_outcome(&self, o: &BlockOutcome) -> String {
        o.to_string()
    }

    fn show_witness(&self, w: &WitnessBlock) -> String {
        write_witness(&Witness::Block(w.clone()))
    }
}

impl<T: Scalar> Roundtrip<T> for PhpSetting<T> {
    type Witness = WitnessPhp;
    type Class = (Vec<BetaEntry>, Vec<Vec<PhpReply>>);

    fn encode(&self, rho: &PartialInjection, s: usize) -> Result<WitnessPhp, CodecError> {
        encode_php(&self.fprime, rho, s, self.limit)
    }

    fn decode(&self, w: &WitnessPhp, s: usize) -> Result<PartialInjection, CodecError> {
        decode_php(&self.fprime, w, s, self.limit)
    }

    fn class(&self, w: &WitnessPhp) -> Self::Class {
        (w.beta.clone(), w.pi.clone())
    }

    fn class_bound(&self, _: &WitnessPhp, _: usize) -> Option<T> {
        None
    }

    fn corrupt(&self, w: &WitnessPhp) -> WitnessPhp {
        let mut w = w.clone();
        if let Some(r) = w.pi.iter_mut().flatten().next() {
            *r = match *r {
                PhpReply::Match => PhpReply::Other(0),
                PhpReply::Other(_) => PhpReply::Match,
            };
        }
        w
    }

    fn show_outcome(&self, rho: &PartialInjection) -> String {
        rho.to_string()
    }

    fn show_witness(&self, w: &WitnessPhp) -> String {
        write_witness(&Witness::Php(w.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{BlockStructure, Dnf, Hole, Literal, PhpInstance, Pigeon};
    use crate::Exact;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn sample_dnf() -> Dnf {
        Dnf::from_literals(
            3,
            2,
            [vec![Literal::pos(0), Literal::neg(1)], vec![Literal::pos(1), Literal::pos(2)], vec![Literal::neg(0)]],
        )
        .unwrap()
    }

    #[test]
    fn indep_sweep_is_clean() {
        let set = IndepSetting::new(sample_dnf(), q(1, 10)).unwrap();
        for s in 1..=3 {
            let r = sweep_injectivity(&set, s, false, false).unwrap();
            assert!(r.ok(), "{r:?}");
            assert_eq!(r.members, r.distinct_witnesses);
            let b = crate::verify::failure_breakdown(&set, s, false).unwrap();
            assert_eq!(b.members, r.members);
        }
    }

    #[test]
    fn corruption_is_caught() {
        let set = IndepSetting::new(sample_dnf(), q(1, 10)).unwrap();
        let r = sweep_injectivity(&set, 1, true, false).unwrap();
        assert!(!r.ok());
        assert_eq!(r.violation_count, r.members);
        assert!(r.violations[0].witness.is_some());
    }

    #[test]
    fn block_sweep_is_clean() {
        let blocks = BlockStructure::consecutive(&[2, 1]).unwrap();
        let set = BlockSetting::new(sample_dnf(), blocks, q(1, 16), q(1, 16)).unwrap();
        for s in 1..=2 {
            let r = sweep_injectivity(&set, s, false, false).unwrap();
            assert!(r.ok(), "{r:?}");
            assert!(r.max_class_ratio.unwrap() <= 1.0);
        }
        assert!(!sweep_injectivity(&set, 1, true, false).unwrap().ok());
    }

    #[test]
    fn php_sweep_is_clean() {
        let inst = PhpInstance::new(2);
        let v = |x, y| inst.var(Pigeon(x), Hole(y));
        let f = Dnf::from_literals(
            inst.num_vars(),
            2,
            [
                vec![Literal { var: v(0, 0), positive: true }, Literal { var: v(1, 1), positive: true }],
                vec![Literal { var: v(2, 0), positive: false }],
            ],
        )
        .unwrap();
        let set = PhpSetting::new(inst, f, q(1, 4)).unwrap();
        for s in 1..=3 {
            let r = sweep_injectivity(&set, s, false, false).unwrap();
            assert!(r.ok(), "{r:?}");
            assert!(r.max_class_ratio.is_none());
        }
        assert!(!sweep_injectivity(&set, 1, true, false).unwrap().ok());
    }
}
