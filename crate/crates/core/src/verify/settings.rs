//! Concrete settings for the three lemmas.

use super::{
    Lemma, LemmaParams, ReportParams, Setting, BLOCK_OUTCOME_LIMIT, INDEP_OUTCOME_LIMIT, PHP_HOLE_LIMIT,
};
use crate::codec::IndexLimit;
use crate::dist::block::{block_outcome_count, BlockOutcome};
use crate::dist::{BlockParams, Family, IndepParams, PartialInjection, PhpParams};
use crate::error::ParamError;
use crate::formula::{php_preprocess, BlockStructure, Dnf, PhpInstance, Restriction};
use crate::num::Scalar;
use crate::tree::{BlockProcedure, IndepProcedure, PhpProcedure};

#[derive(Debug, Clone)]
pub struct IndepSetting<T> {
    pub f: Dnf,
    pub params: IndepParams<T>,
}

impl<T: Scalar> IndepSetting<T> {
    pub fn new(f: Dnf, p: T) -> Result<Self, ParamError> {
        let params = IndepParams::new(f.n(), p)?;
        Ok(IndepSetting { f, params })
    }
}

impl<T: Scalar> Setting<T> for IndepSetting<T> {
    type Family = IndepParams<T>;

    fn lemma(&self) -> Lemma {
        Lemma::Indep
    }

    fn family(&self) -> &IndepParams<T> {
        &self.params
    }

    fn fails(&self, rho: &Restriction, s: usize) -> bool {
        IndepProcedure::new(&self.f, rho).depth_at_least(s)
    }

    fn lemma_params(&self) -> LemmaParams<T> {
        LemmaParams::Indep {
            r: self.f.r(),
            p: self.params.p.clone(),
        }
    }

    fn report_params(&self, s: usize) -> ReportParams {
        ReportParams {
            n: self.f.n(),
            r: self.f.r(),
            terms: self.f.terms().len(),
            s,
            p: Some(self.params.p.render()),
            q: None,
            blocks: None,
            l: None,
        }
    }

    fn guard(&self) -> Result<(), ParamError> {
        let size = self.params.outcome_count();
        if size > INDEP_OUTCOME_LIMIT {
            return Err(ParamError::TooLarge {
                what: "3^n restrictions",
                size,
                limit: INDEP_OUTCOME_LIMIT,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BlockSetting<T> {
    pub f: Dnf,
    pub params: BlockParams<T>,
}

impl<T: Scalar> BlockSetting<T> {
    pub fn new(f: Dnf, blocks: BlockStructure, p: T, q: T) -> Result<Self, ParamError> {
        if blocks.n() != f.n() {
            return Err(crate::error::FormulaError::UniverseMismatch {
                got: blocks.n(),
                n: f.n(),
            }
            .into());
        }
        let params = BlockParams::new(blocks, p, q)?;
        Ok(BlockSetting { f, params })
    }

    pub fn blocks(&self) -> &BlockStructure {
        &self.params.blocks
    }
}

impl<T: Scalar> Setting<T> for BlockSetting<T> {
    type Family = BlockParams<T>;

    fn lemma(&self) -> Lemma {
        Lemma::Block
    }

    fn family(&self) -> &BlockParams<T> {
        &self.params
    }

    fn fails(&self, o: &BlockOutcome, s: usize) -> bool {
        BlockProcedure::new(&self.f, o, &self.params.blocks).depth_at_least(s)
    }

    fn lemma_params(&self) -> LemmaParams<T> {
        LemmaParams::Block {
            r: self.f.r(),
            p: self.params.p.clone(),
            q: self.params.q.clone(),
        }
    }

    fn report_params(&self, s: usize) -> ReportParams {
        ReportParams {
            n: self.f.n(),
            r: self.f.r(),
            terms: self.f.terms().len(),
            s,
            p: Some(self.params.p.render()),
            q: Some(self.params.q.render()),
            blocks: Some(
                self.params
                    .blocks
                    .blocks()
                    .map(|(_, b)| b.iter().map(|v| v.0).collect())
                    .collect(),
            ),
            l: None,
        }
    }

    fn guard(&self) -> Result<(), ParamError> {
        let size = block_outcome_count(&self.params.blocks);
        if size > BLOCK_OUTCOME_LIMIT {
            return Err(ParamError::TooLarge {
                what: "block outcomes",
                size,
                limit: BLOCK_OUTCOME_LIMIT,
            });
        }
        Ok(())
    }
}

/// The pigeonhole setting. Trees and codecs run on the preprocessed `F′`;
/// `f` is kept for reporting and semantic checks.
#[derive(Debug, Clone)]
pub struct PhpSetting<T> {
    pub inst: PhpInstance,
    pub f: Dnf,
    pub fprime: Dnf,
    pub params: PhpParams<T>,
    /// Reply-index limit used by the codec.
    pub limit: IndexLimit,
}

impl<T: Scalar> PhpSetting<T> {
    pub fn new(inst: PhpInstance, f: Dnf, q: T) -> Result<Self, ParamError> {
        let fprime = php_preprocess(inst, &f)?;
        let params = PhpParams::new(inst.n, q)?;
        Ok(PhpSetting {
            inst,
            f,
            fprime,
            params,
            limit: IndexLimit::Unbounded,
        })
    }

    pub fn with_limit(mut self, limit: IndexLimit) -> Self {
        self.limit = limit;
        self
    }

    /// Unset pigeons and holes of `rho`.
    pub fn unset_counts(&self, rho: &PartialInjection) -> (usize, usize) {
        let m = rho.size();
        (self.inst.pigeons() - m, self.inst.holes() - m)
    }
}

impl<T: Scalar> Setting<T> for PhpSetting<T> {
    type Family = PhpParams<T>;

    fn lemma(&self) -> Lemma {
        Lemma::Php
    }

    fn family(&self) -> &PhpParams<T> {
        &self.params
    }

    fn fails(&self, rho: &PartialInjection, s: usize) -> bool {
        PhpProcedure::new(&self.fprime, rho).depth_at_least(s)
    }

    /// At least `l = 2qn` pigeons or holes left unset.
    fn excepted(&self, rho: &PartialInjection) -> bool {
        let l = self.params.l();
        let (a, b) = self.unset_counts(rho);
        T::from_count(a as u64) >= l || T::from_count(b as u64) >= l
    }

    fn lemma_params(&self) -> LemmaParams<T> {
        LemmaParams::Php {
            r: self.f.r(),
            n: self.inst.n,
            q: self.params.q.clone(),
        }
    }

    fn report_params(&self, s: usize) -> ReportParams {
        ReportParams {
            n: self.inst.n,
            r: self.f.r(),
            terms: self.f.terms().len(),
            s,
            p: None,
            q: Some(self.params.q.render()),
            blocks: None,
            l: Some(self.params.l().render()),
        }
    }

    fn guard(&self) -> Result<(), ParamError> {
        if self.inst.n > PHP_HOLE_LIMIT {
            return Err(ParamError::TooLarge {
                what: "holes n",
                size: self.inst.n as u128,
                limit: PHP_HOLE_LIMIT as u128,
            });
        }
        Ok(())
    }
}
