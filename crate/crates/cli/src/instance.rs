//! Loading inputs and dispatching over the three lemma settings.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use switchlab::codec::IndexLimit;
use switchlab::formula::text::{parse_blocks, parse_formula_file, FormulaFile};
use switchlab::formula::{BlockStructure, Dnf, PhpInstance};
use switchlab::num::parse_rational;
use switchlab::dist::Family;
use switchlab::num::Scalar;
use switchlab::verify::{
    check_lemma, draw_samples, sweep_injectivity, BlockSetting, IndepSetting, InjectivityReport, LemmaReport, Mode,
    Outcome, PhpSetting, Roundtrip, Setting,
};
use switchlab::Exact;

use crate::InputError;

pub fn rational(name: &str, text: &str) -> Result<Exact, InputError> {
    parse_rational(text.trim())
        .with_context(|| format!("--{name}"))
        .map_err(InputError)
}

pub fn rational_list(name: &str, text: &str) -> Result<Vec<Exact>, InputError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| rational(name, t))
        .collect()
}

pub fn usize_list(name: &str, text: &str) -> Result<Vec<usize>, InputError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().with_context(|| format!("--{name}: bad integer {t:?}")).map_err(InputError))
        .collect()
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(InputError)
}

pub fn load_formula(path: &Path) -> Result<FormulaFile, InputError> {
    let text = read(path)?;
    parse_formula_file(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(InputError)
}

pub fn load_blocks(path: Option<&Path>, n: usize) -> Result<BlockStructure, InputError> {
    let Some(path) = path else {
        return Ok(BlockStructure::singletons(n));
    };
    let b = parse_blocks(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(InputError)?;
    if b.n() != n {
        return Err(InputError(anyhow!("blocks cover {} variables, formula has {n}", b.n())));
    }
    Ok(b)
}

pub fn plain(file: FormulaFile, lemma: u8) -> Result<Dnf, InputError> {
    match file {
        FormulaFile::Plain(f) => Ok(f),
        FormulaFile::Php(..) => Err(InputError(anyhow!("lemma {lemma} needs a `dnf` file, not `php`"))),
    }
}

pub fn php(file: FormulaFile) -> Result<(PhpInstance, Dnf), InputError> {
    match file {
        FormulaFile::Php(i, f) => Ok((i, f)),
        FormulaFile::Plain(_) => Err(InputError(anyhow!("lemma 3 needs a `php n` formula file"))),
    }
}

pub fn index_limit(text: &str, q: &Exact, n: usize) -> Result<IndexLimit, InputError> {
    match text {
        "none" => Ok(IndexLimit::Unbounded),
        "regime" => {
            let params = switchlab::dist::PhpParams::new(n, q.clone())?;
            Ok(IndexLimit::from_params(&params)?)
        }
        k => k
            .parse()
            .map(IndexLimit::Explicit)
            .map_err(|_| InputError(anyhow!("--index-limit must be none, regime or an integer"))),
    }
}

/// One listed restriction.
pub struct Row {
    pub outcome: String,
    pub weight: String,
    pub fails: Option<bool>,
}

fn rows<S: Roundtrip<Exact>>(set: &S, outcomes: &[Outcome<Exact, S>], s: Option<usize>) -> Vec<Row> {
    outcomes
        .iter()
        .map(|o| Row {
            outcome: set.show_outcome(o),
            weight: set.family().weight(o).render(),
            fails: s.map(|s| set.fails(o, s)),
        })
        .collect()
}

pub enum AnySetting {
    Indep(IndepSetting<Exact>),
    Block(BlockSetting<Exact>),
    Php(PhpSetting<Exact>),
}

impl AnySetting {
    /// Builds a setting; `p` and `q` are used only where the lemma needs them.
    pub fn build(
        lemma: u8,
        file: FormulaFile,
        blocks: Option<&Path>,
        p: Option<Exact>,
        q: Option<Exact>,
        limit: &str,
    ) -> Result<Self, InputError> {
        let need = |name: &str, v: Option<Exact>| v.ok_or_else(|| InputError(anyhow!("--{name} is required for lemma {lemma}")));
        match lemma {
            1 => Ok(AnySetting::Indep(IndepSetting::new(plain(file, 1)?, need("p", p)?)?)),
            2 => {
                let f = plain(file, 2)?;
                let b = load_blocks(blocks, f.n())?;
                Ok(AnySetting::Block(BlockSetting::new(f, b, need("p", p)?, need("q", q)?)?))
            }
            3 => {
                let (inst, f) = php(file)?;
                let q = need("q", q)?;
                let limit = index_limit(limit, &q, inst.n)?;
                Ok(AnySetting::Php(PhpSetting::new(inst, f, q)?.with_limit(limit)))
            }
            other => Err(InputError(anyhow!("no lemma {other}"))),
        }
    }

    pub fn check(&self, s: usize, mode: Mode, unsafe_sizes: bool) -> Result<LemmaReport, InputError> {
        Ok(match self {
            AnySetting::Indep(x) => check_lemma(x, s, mode, unsafe_sizes)?,
            AnySetting::Block(x) => check_lemma(x, s, mode, unsafe_sizes)?,
            AnySetting::Php(x) => check_lemma(x, s, mode, unsafe_sizes)?,
        })
    }

    pub fn sweep(&self, s: usize, corrupt: bool, unsafe_sizes: bool) -> Result<InjectivityReport, InputError> {
        Ok(match self {
            AnySetting::Indep(x) => sweep_injectivity(x, s, corrupt, unsafe_sizes)?,
            AnySetting::Block(x) => sweep_injectivity(x, s, corrupt, unsafe_sizes)?,
            AnySetting::Php(x) => sweep_injectivity(x, s, corrupt, unsafe_sizes)?,
        })
    }

    pub fn enumerate(&self, s: Option<usize>, unsafe_sizes: bool) -> Result<Vec<Row>, InputError> {
        Ok(match self {
            AnySetting::Indep(x) => {
                guard(x, unsafe_sizes)?;
                rows(x, &x.family().outcomes(), s)
            }
            AnySetting::Block(x) => {
                guard(x, unsafe_sizes)?;
                rows(x, &x.family().outcomes(), s)
            }
            AnySetting::Php(x) => {
                guard(x, unsafe_sizes)?;
                rows(x, &x.family().outcomes(), s)
            }
        })
    }

    pub fn sample(&self, count: u64, seed: u64, s: Option<usize>) -> Vec<Row> {
        match self {
            AnySetting::Indep(x) => rows(x, &draw_samples(x.family(), count, seed), s),
            AnySetting::Block(x) => rows(x, &draw_samples(x.family(), count, seed), s),
            AnySetting::Php(x) => rows(x, &draw_samples(x.family(), count, seed), s),
        }
    }

    /// Short text naming the formula (and blocks).
    pub fn describe(&self) -> String {
        match self {
            AnySetting::Indep(x) => x.f.to_string(),
            AnySetting::Block(x) => {
                let blocks: Vec<String> = x
                    .blocks()
                    .blocks()
                    .map(|(_, b)| b.iter().map(|v| v.0.to_string()).collect::<Vec<_>>().join(" "))
                    .collect();
                format!("{} with blocks [{}]", x.f, blocks.join(" | "))
            }
            AnySetting::Php(x) => format!("php {}: {}", x.inst.n, x.f),
        }
    }
}

fn guard<S: switchlab::verify::Setting<Exact>>(set: &S, unsafe_sizes: bool) -> Result<(), InputError> {
    if !unsafe_sizes {
        set.guard()?;
    }
    Ok(())
}
