//! Codec for independent restrictions.

use serde::{Deserialize, Serialize};

use super::{beta_round, BetaEntry};
use crate::error::CodecError;
use crate::formula::{Dnf, Restriction, Value, VarId};
use crate::tree::{IndepProcedure, IndepTrace};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WitnessIndep {
    pub rho_sigma: Restriction,
    pub beta: Vec<BetaEntry>,
    pub pi: Vec<bool>,
}

/// `θ(ρ)` from an already extracted trace.
pub fn encode_trace_indep(f: &Dnf, rho: &Restriction, trace: &IndepTrace) -> WitnessIndep {
    let mut sigma = Vec::new();
    let mut beta = Vec::new();
    let mut pi = Vec::new();
    for round in &trace.rounds {
        let term = &f.terms()[round.term];
        let locations = round.vars.iter().map(|v| {
            term.literals()
                .iter()
                .position(|l| l.var == *v)
                .expect("queried variable belongs to the term")
        });
        beta.extend(beta_round(locations));
        for v in &round.vars {
            let lit = term.literals().iter().find(|l| l.var == *v).expect("in term");
            sigma.push((*v, lit.satisfying_value()));
        }
        pi.extend(round.replies.iter().copied());
    }
    let rho_sigma = rho.compose(&sigma).expect("rounds touch disjoint stars");
    WitnessIndep { rho_sigma, beta, pi }
}

pub fn encode_indep(f: &Dnf, rho: &Restriction, s: usize) -> Result<WitnessIndep, CodecError> {
    if s == 0 {
        return Err(CodecError::ZeroDepth);
    }
    let trace = IndepProcedure::new(f, rho)
        .trace(s)
        .ok_or(CodecError::NotInFailureSet { s })?;
    Ok(encode_trace_indep(f, rho, &trace))
}

pub fn decode_indep(f: &Dnf, w: &WitnessIndep, s: usize) -> Result<Restriction, CodecError> {
    if s == 0 {
        return Err(CodecError::ZeroDepth);
    }
    if w.rho_sigma.len() != f.n() {
        return Err(CodecError::decode(0, format!("ρσ has {} variables, formula has {}", w.rho_sigma.len(), f.n())));
    }
    if w.beta.len() != s || w.pi.len() != s {
        return Err(CodecError::decode(0, format!("expected {s} β′ and π′ entries, got {} and {}", w.beta.len(), w.pi.len())));
    }
    let mut current = w.rho_sigma.clone();
    let mut rho = w.rho_sigma.clone();
    let mut pos = 0;
    let mut round = 0;
    while pos < s {
        round += 1;
        let term = f
            .first_live_term(&current)
            .ok_or_else(|| CodecError::decode(round, "no term survives"))?;
        let lits = f.terms()[term].literals();
        let mut fixes: Vec<(VarId, bool)> = Vec::new();
        loop {
            let e = w.beta[pos];
            let lit = lits
                .get(e.location)
                .ok_or_else(|| CodecError::decode(round, format!("location {} outside term {term}", e.location)))?;
            if current.get(lit.var) != Value::from_bool(lit.satisfying_value()) || rho.is_star(lit.var) {
                return Err(CodecError::decode(round, format!("{} is not set by σ", lit.var)));
            }
            rho.set(lit.var, Value::Star);
            fixes.push((lit.var, w.pi[pos]));
            pos += 1;
            if e.last || pos == s {
                break;
            }
        }
        for (v, b) in fixes {
            current.set(v, Value::from_bool(b));
        }
    }
    if encode_indep(f, &rho, s).ok().as_ref() != Some(w) {
        return Err(CodecError::decode(round, "witness is not the image of the recovered restriction"));
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::dist::independent::{enumerate_indep, weight_indep, IndepParams};
    use crate::formula::Literal;
    use crate::num::Scalar;

    fn r(s: &str) -> Restriction {
        s.parse().unwrap()
    }

    fn two_units() -> Dnf {
        Dnf::from_literals(2, 1, [vec![Literal::pos(0)], vec![Literal::pos(1)]]).unwrap()
    }

    #[test]
    fn encode_example() {
        let w = encode_indep(&two_units(), &r("**"), 1).unwrap();
        assert_eq!(w.rho_sigma, r("1*"));
        assert_eq!(w.beta, vec![BetaEntry::new(0, true)]);
        assert_eq!(w.pi, vec![false]);
        assert_eq!(decode_indep(&two_units(), &w, 1).unwrap(), r("**"));
    }

    #[test]
    fn weight_factor_is_one_at_p_one_third() {
        let params = IndepParams::new(2, BigRational::from_ratio(1, 3)).unwrap();
        let w = encode_indep(&two_units(), &r("**"), 1).unwrap();
        assert_eq!(weight_indep(&w.rho_sigma, &params), weight_indep(&r("**"), &params));
    }

    #[test]
    fn rejects_outside_failure_set() {
        assert_eq!(encode_indep(&two_units(), &r("**"), 3), Err(CodecError::NotInFailureSet { s: 3 }));
        assert_eq!(encode_indep(&two_units(), &r("**"), 0), Err(CodecError::ZeroDepth));
    }

    #[test]
    fn corrupted_location_is_rejected() {
        let f = Dnf::from_literals(2, 2, [vec![Literal::pos(0), Literal::neg(1)]]).unwrap();
        let mut w = encode_indep(&f, &r("**"), 1).unwrap();
        assert_eq!(w.rho_sigma, r("1*"));
        w.beta[0].location = 1;
        assert!(matches!(decode_indep(&f, &w, 1), Err(CodecError::Decode { .. })));
        // Moving the location onto a variable ρ already fixed yields the
        // witness of a different restriction, which decodes to that one.
        let mut w2 = encode_indep(&f, &r("*0"), 1).unwrap();
        w2.beta[0].location = 1;
        assert_eq!(decode_indep(&f, &w2, 1).unwrap(), r("1*"));
        let mut w3 = encode_indep(&f, &r("**"), 1).unwrap();
        w3.beta[0].location = 7;
        assert!(decode_indep(&f, &w3, 1).is_err());
        let mut w4 = encode_indep(&f, &r("**"), 1).unwrap();
        w4.pi.push(true);
        assert!(decode_indep(&f, &w4, 1).is_err());
    }

    #[test]
    fn exhaustive_roundtrip_and_identity() {
        let f = Dnf::from_literals(
            4,
            2,
            [
                vec![Literal::pos(0), Literal::neg(1)],
                vec![Literal::pos(1), Literal::pos(2)],
                vec![Literal::neg(0), Literal::neg(3)],
            ],
        )
        .unwrap();
        let p = BigRational::from_ratio(1, 10);
        let params = IndepParams::new(4, p.clone()).unwrap();
        let factor = (BigRational::from_ratio(1, 1) - &p) / (BigRational::from_ratio(2, 1) * &p);
        for s in 1..=3 {
            let mut seen = std::collections::HashSet::new();
            for rho in enumerate_indep(4) {
                let Ok(w) = encode_indep(&f, &rho, s) else {
                    assert!(!IndepProcedure::new(&f, &rho).depth_at_least(s));
                    continue;
                };
                assert_eq!(decode_indep(&f, &w, s).unwrap(), rho);
                assert!(seen.insert(w.clone()));
                assert_eq!(
                    weight_indep(&w.rho_sigma, &params),
                    factor.powu(s as u32) * weight_indep(&rho, &params)
                );
            }
        }
    }
}
