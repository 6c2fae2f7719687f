//! Witness codecs: the maps `θ : ρ ↦ (ρσ, β′, π′[, γ′])` and their inverses.
//!
//! Every decoder is total. It rebuilds a candidate `ρ` from the witness and
//! then re-encodes it; anything that is not exactly `θ(ρ)` is rejected.

pub mod block;
pub mod independent;
pub mod php;
pub mod text;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

pub use block::{decode_block, encode_block, WitnessBlock};
pub use independent::{decode_indep, encode_indep, WitnessIndep};
pub use php::{decode_php, encode_php, IndexLimit, PhpReply, WitnessPhp};

/// One `β′` symbol: a location in the term plus the last-of-round bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BetaEntry {
    pub location: usize,
    pub last: bool,
}

impl BetaEntry {
    pub fn new(location: usize, last: bool) -> Self {
        BetaEntry { location, last }
    }
}

/// Locations of one round's entries, closing the round with `last`.
pub(crate) fn beta_round(locations: impl IntoIterator<Item = usize>) -> Vec<BetaEntry> {
    let mut out: Vec<BetaEntry> = locations.into_iter().map(|l| BetaEntry::new(l, false)).collect();
    if let Some(e) = out.last_mut() {
        e.last = true;
    }
    out
}

/// Splits `β′` into rounds at the last bits; a trailing open round is kept.
pub fn beta_rounds(beta: &[BetaEntry]) -> Vec<&[BetaEntry]> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, e) in beta.iter().enumerate() {
        if e.last {
            out.push(&beta[start..=i]);
            start = i + 1;
        }
    }
    if start < beta.len() {
        out.push(&beta[start..]);
    }
    out
}

/// Code-space cardinalities behind each union bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeSpace {
    pub beta: BigUint,
    pub pi: BigUint,
    /// `γ′` strings (block codec only).
    pub gamma: Option<BigUint>,
}

impl CodeSpace {
    pub fn total(&self) -> BigUint {
        let g = self.gamma.clone().unwrap_or_else(BigUint::one);
        &self.beta * &self.pi * g
    }
}

fn pow(base: usize, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

/// `(2r)^s` and `2^s`.
pub fn code_space_indep(r: usize, s: usize) -> CodeSpace {
    CodeSpace {
        beta: pow(2 * r, s),
        pi: pow(2, s),
        gamma: None,
    }
}

/// `(2r)^s`, `2^s` and `2^(rs)`.
pub fn code_space_block(r: usize, s: usize) -> CodeSpace {
    CodeSpace {
        beta: pow(2 * r, s),
        pi: pow(2, s),
        gamma: Some(pow(2, r * s)),
    }
}

/// `(2r)^s` and `(2u)^s` where every reply index is below `u`.
pub fn code_space_php(r: usize, u: usize, s: usize) -> CodeSpace {
    CodeSpace {
        beta: pow(2 * r, s),
        pi: pow(2 * u, s),
        gamma: None,
    }
}
