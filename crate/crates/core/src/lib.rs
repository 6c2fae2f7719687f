//! Random restrictions, canonical decision trees and the witness codecs
//! behind three switching lemmas: independent restrictions, block
//! restrictions, and partial-injection restrictions for the pigeonhole
//! principle. Failure weights are computed exactly by enumeration or
//! estimated by seeded Monte Carlo, and compared against each lemma's bound.
//!
//! The numeric core is generic over [`num::Scalar`]; exact runs use
//! [`Exact`] (arbitrary-precision rationals).

pub mod codec;
pub mod corpus;
pub mod dist;
pub mod error;
pub mod formula;
pub mod num;
pub mod tree;
pub mod verify;

use num_rational::BigRational;

/// Exact rational scalar used for all bound comparisons.
pub type Exact = BigRational;

pub type ExactIndepParams = dist::IndepParams<Exact>;
pub type ExactBlockParams = dist::BlockParams<Exact>;
pub type ExactPhpParams = dist::PhpParams<Exact>;
pub type FloatIndepParams = dist::IndepParams<f64>;
pub type FloatBlockParams = dist::BlockParams<f64>;
pub type FloatPhpParams = dist::PhpParams<f64>;

pub type ExactIndepSetting = verify::IndepSetting<Exact>;
pub type ExactBlockSetting = verify::BlockSetting<Exact>;
pub type ExactPhpSetting = verify::PhpSetting<Exact>;
