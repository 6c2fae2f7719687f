//! Failure weights `|S|` and their comparison against the lemma bounds.
//!
//! A [`Setting`] bundles a formula with a distribution and knows which
//! outcomes fall into the failure set `S` (canonical tree of height at least
//! `s`). On top of that sit exact enumeration, seeded Monte Carlo, lemma
//! reports and codec injectivity sweeps.

pub mod bounds;
pub mod injectivity;
pub mod montecarlo;
pub mod report;
pub mod settings;

use rayon::prelude::*;

use crate::dist::Family;
use crate::error::ParamError;
use crate::num::Scalar;

pub use bounds::{bound_value, preconditions, Bounds, Lemma, LemmaParams};
pub use injectivity::{sweep_injectivity, InjectivityReport, Roundtrip, Violation};
pub use montecarlo::{draw_samples, monte_carlo_failure, wilson_interval, Estimate, Z_99};
pub use report::{check_lemma, LemmaReport, Mode, ReportParams};
pub use settings::{BlockSetting, IndepSetting, PhpSetting};

/// Outcome type of a setting's family.
pub type Outcome<T, S> = <<S as Setting<T>>::Family as Family<T>>::Outcome;

/// Enumeration limits; `unsafe_sizes` lifts them.
pub const INDEP_OUTCOME_LIMIT: u128 = 531_441; // 3^12
pub const BLOCK_OUTCOME_LIMIT: u128 = 10_000_000;
pub const PHP_HOLE_LIMIT: usize = 5;

/// A formula together with a weighted restriction family.
pub trait Setting<T: Scalar>: Sync {
    type Family: Family<T>;

    fn lemma(&self) -> Lemma;

    fn family(&self) -> &Self::Family;

    /// Whether the outcome's canonical tree has height at least `s`.
    fn fails(&self, outcome: &Outcome<T, Self>, s: usize) -> bool;

    /// Outcomes excluded from the trimmed failure set.
    fn excepted(&self, _outcome: &Outcome<T, Self>) -> bool {
        false
    }

    fn lemma_params(&self) -> LemmaParams<T>;

    fn report_params(&self, s: usize) -> ReportParams;

    /// Rejects instances beyond the enumeration limits.
    fn guard(&self) -> Result<(), ParamError>;

    fn bounds(&self, s: usize) -> Bounds<T> {
        bound_value(&self.lemma_params(), s)
    }
}

/// `|S|` split by the trimming predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Breakdown<T> {
    pub total: T,
    /// Weight of failing outcomes that are not excepted.
    pub trimmed: T,
    pub exception: T,
    /// Number of outcomes in `S`.
    pub members: u64,
}

/// Exact `|S|` with its trimmed and excepted parts.
pub fn failure_breakdown<T: Scalar, S: Setting<T>>(
    setting: &S,
    s: usize,
    unsafe_sizes: bool,
) -> Result<Breakdown<T>, ParamError> {
    if !unsafe_sizes {
        setting.guard()?;
    }
    let family = setting.family();
    let zero = || Breakdown {
        total: T::zero(),
        trimmed: T::zero(),
        exception: T::zero(),
        members: 0,
    };
    let out = family
        .outcomes()
        .par_iter()
        .filter(|o| setting.fails(o, s))
        .fold(zero, |mut acc, o| {
            let w = family.weight(o);
            if setting.excepted(o) {
                acc.exception = acc.exception + w.clone();
            } else {
                acc.trimmed = acc.trimmed + w.clone();
            }
            acc.total = acc.total + w;
            acc.members += 1;
            acc
        })
        .reduce(zero, |a, b| Breakdown {
            total: a.total + b.total,
            trimmed: a.trimmed + b.trimmed,
            exception: a.exception + b.exception,
            members: a.members + b.members,
        });
    Ok(out)
}

/// Exact `|S|` by exhaustive enumeration.
pub fn exact_failure_weight<T: Scalar, S: Setting<T>>(setting: &S, s: usize, unsafe_sizes: bool) -> Result<T, ParamError> {
    failure_breakdown(setting, s, unsafe_sizes).map(|b| b.total)
}

/// Sum of all outcome weights.
pub fn total_weight<T: Scalar, F: Family<T>>(family: &F) -> T {
    family
        .outcomes()
        .par_iter()
        .map(|o| family.weight(o))
        .reduce(T::zero, |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::dist::IndepParams;
    use crate::formula::{BlockStructure, Dnf, Literal, PhpInstance};
    use crate::Exact;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn unit(n: usize) -> Dnf {
        Dnf::from_literals(n, 1, [vec![Literal::pos(0)]]).unwrap()
    }

    #[test]
    fn single_literal_fails_with_probability_p() {
        for n in 1..=3 {
            let set = IndepSetting::new(unit(n), q(1, 10)).unwrap();
            assert_eq!(exact_failure_weight(&set, 1, false).unwrap(), q(1, 10));
            assert_eq!(exact_failure_weight(&set, 2, false).unwrap(), q(0, 1));
        }
    }

    #[test]
    fn empty_formula_never_fails() {
        let set = IndepSetting::new(Dnf::empty(3, 2), q(1, 10)).unwrap();
        assert_eq!(exact_failure_weight(&set, 1, false).unwrap(), q(0, 1));
        let b = BlockSetting::new(Dnf::empty(2, 2), BlockStructure::singletons(2), q(1, 4), q(1, 4)).unwrap();
        assert_eq!(exact_failure_weight(&b, 1, false).unwrap(), q(0, 1));
    }

    #[test]
    fn two_units() {
        // Depth >= 1 iff x0 = ⋆, or x0 = 0 and x1 = ⋆.
        let f = Dnf::from_literals(2, 1, [vec![Literal::pos(0)], vec![Literal::pos(1)]]).unwrap();
        let set = IndepSetting::new(f, q(1, 10)).unwrap();
        let half = q(9, 20);
        let p = q(1, 10);
        let want = p.clone() + half.clone() * p.clone();
        assert_eq!(exact_failure_weight(&set, 1, false).unwrap(), want);
        // Depth >= 2 iff both are ⋆.
        assert_eq!(exact_failure_weight(&set, 2, false).unwrap(), p.clone() * p);
    }

    #[test]
    fn guards() {
        let set = IndepSetting::new(Dnf::empty(13, 1), q(1, 10)).unwrap();
        assert!(matches!(exact_failure_weight(&set, 1, false), Err(ParamError::TooLarge { .. })));
        let php = PhpSetting::new(PhpInstance::new(6), Dnf::empty(42, 1), q(1, 4)).unwrap();
        assert!(matches!(exact_failure_weight(&php, 1, false), Err(ParamError::TooLarge { .. })));
    }

    #[test]
    fn normalization() {
        for p in [q(1, 16), q(1, 3), q(9, 10)] {
            assert_eq!(total_weight(&IndepParams::new(4, p).unwrap()), q(1, 1));
        }
    }

    #[test]
    fn php_exceptions_partition_the_failure_set() {
        let inst = PhpInstance::new(2);
        let lit = Literal {
            var: inst.var(crate::formula::Pigeon(0), crate::formula::Hole(1)),
            positive: true,
        };
        let f = Dnf::from_literals(inst.num_vars(), 1, [vec![lit]]).unwrap();
        let set = PhpSetting::new(inst, f, q(1, 4)).unwrap();
        let b = failure_breakdown(&set, 1, false).unwrap();
        assert_eq!(b.total, b.trimmed.clone() + b.exception.clone());
        // l = 1: every outcome leaves at least one pigeon unset.
        assert_eq!(b.trimmed, q(0, 1));
        assert!(b.members > 0);
    }

    fn small_dnf() -> impl Strategy<Value = Dnf> {
        (0..=3usize, any::<u64>()).prop_map(|(k, seed)| {
            use rand::SeedableRng;
            crate::corpus::random_dnf(3, 2, k, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
        })
    }

    proptest! {
        #[test]
        fn failure_weight_is_monotone_in_s(f in small_dnf(), pn in 1i64..10) {
            let set = IndepSetting::new(f, q(pn, 10)).unwrap();
            let mut prev = q(1, 1);
            for s in 0..=4 {
                let w = exact_failure_weight(&set, s, false).unwrap();
                prop_assert!(w <= prev);
                prev = w;
            }
        }

        #[test]
        fn block_failure_weight_is_monotone_in_s(f in small_dnf()) {
            let blocks = BlockStructure::consecutive(&[2, 1]).unwrap();
            let set = BlockSetting::new(f, blocks, q(1, 8), q(1, 8)).unwrap();
            let mut prev = q(1, 1);
            for s in 0..=3 {
                let w = exact_failure_weight(&set, s, false).unwrap();
                prop_assert!(w <= prev);
                prev = w;
            }
        }
    }
}
