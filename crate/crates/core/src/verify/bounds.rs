//! The three lemma bounds and their parameter preconditions.

use serde::{Deserialize, Serialize};

use crate::num::{one_minus, HalfPower, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Lemma {
    Indep,
    Block,
    Php,
}

impl Lemma {
    pub fn id(self) -> u8 {
        match self {
            Lemma::Indep => 1,
            Lemma::Block => 2,
            Lemma::Php => 3,
        }
    }
}

impl From<Lemma> for u8 {
    fn from(l: Lemma) -> u8 {
        l.id()
    }
}

impl TryFrom<u8> for Lemma {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(Lemma::Indep),
            2 => Ok(Lemma::Block),
            3 => Ok(Lemma::Php),
            _ => Err(format!("no lemma {v}; expected 1, 2 or 3")),
        }
    }
}

/// The quantities each bound depends on.
#[derive(Debug, Clone, PartialEq)]
pub enum LemmaParams<T> {
    Indep { r: usize, p: T },
    Block { r: usize, p: T, q: T },
    Php { r: usize, n: usize, q: T },
}

impl<T: Scalar> LemmaParams<T> {
    pub fn lemma(&self) -> Lemma {
        match self {
            LemmaParams::Indep { .. } => Lemma::Indep,
            LemmaParams::Block { .. } => Lemma::Block,
            LemmaParams::Php { .. } => Lemma::Php,
        }
    }
}

/// Stated bound and the sharper form its proof actually yields.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<T> {
    pub loose: HalfPower<T>,
    pub tight: HalfPower<T>,
}

impl<T: Scalar> Bounds<T> {
    /// `w` is below both forms.
    pub fn admits(&self, w: &T) -> bool {
        self.loose.admits(w) && self.tight.admits(w)
    }

    pub fn tight_below_loose(&self) -> bool {
        self.tight.le(&self.loose)
    }
}

fn count<T: Scalar>(k: usize) -> T {
    T::from_count(k as u64)
}

/// `128 r² n³ q⁴`.
pub fn php_base<T: Scalar>(r: usize, n: usize, q: &T) -> T {
    count::<T>(128 * r * r * n * n * n) * q.powu(4)
}

/// Lemma 1: `(9pr)^s` and `(8pr/(1-p))^s`.
/// Lemma 2: `(13qr)^s` and `(12qr/(1-q))^s`.
/// Lemma 3: `(128 r² n³ q⁴)^(s/2)` and the same base over `1-q`.
pub fn bound_value<T: Scalar>(params: &LemmaParams<T>, s: usize) -> Bounds<T> {
    let s = s as u32;
    match params {
        LemmaParams::Indep { r, p } => {
            let pr = p.clone() * count(*r);
            Bounds {
                loose: HalfPower::integral(count::<T>(9) * pr.clone(), s),
                tight: HalfPower::integral(count::<T>(8) * pr / one_minus(p), s),
            }
        }
        LemmaParams::Block { r, q, .. } => {
            let qr = q.clone() * count(*r);
            Bounds {
                loose: HalfPower::integral(count::<T>(13) * qr.clone(), s),
                tight: HalfPower::integral(count::<T>(12) * qr / one_minus(q), s),
            }
        }
        LemmaParams::Php { r, n, q } => {
            let base = php_base(*r, *n, q);
            Bounds {
                tight: HalfPower::half(base.clone() / one_minus(q), s),
                loose: HalfPower::half(base, s),
            }
        }
    }
}

/// Violated preconditions, as readable messages; empty when all hold.
pub fn preconditions<T: Scalar>(params: &LemmaParams<T>) -> Vec<String> {
    let mut out = Vec::new();
    let mut below = |name: &str, v: &T, limit: T, text: &str| {
        if *v >= limit {
            out.push(format!("{name} = {} violates {text}", v.render()));
        }
    };
    match params {
        LemmaParams::Indep { p, .. } => below("p", p, T::from_ratio(1, 9), "p < 1/9"),
        LemmaParams::Block { r, p, q } => {
            below("p", p, T::from_ratio(1, 2 * (*r).max(1) as i64), "p < 1/(2r)");
            below("q", q, T::from_ratio(1, 13), "q < 1/13");
        }
        LemmaParams::Php { r, n, q } => {
            below("q", q, T::from_ratio(1, 2), "q < 1/2");
            below("128 r^2 n^3 q^4", &php_base(*r, *n, q), T::one(), "128 r^2 n^3 q^4 < 1");
        }
    }
    out
}
