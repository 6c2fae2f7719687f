//! Lemma reports.

use serde::{Deserialize, Serialize};

use super::{failure_breakdown, monte_carlo_failure, preconditions, Lemma, Setting};
use crate::error::ParamError;
use crate::num::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sample { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportParams {
    pub n: usize,
    pub r: usize,
    pub terms: usize,
    pub s: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub blocks: Option<Vec<Vec<usize>>>,
    /// Trimming threshold `2qn` (pigeonhole only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<String>,
}

/// Outcome of checking one lemma instance. Exact quantities are rendered by
/// [`Scalar::render`], so exact runs carry `"num/den"` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub params: ReportParams,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact_weight: Option<String>,
    /// Number of outcomes in `S`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure_count: Option<u64>,
    /// `|S|` minus the exception mass (pigeonhole only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trimmed_weight: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exception_mass: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub half_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub interval: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trimmed_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trimmed_half_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub bound_loose: String,
    pub bound_tight: String,
    /// Violated parameter preconditions; `pass` is false unless empty.
    pub violations: Vec<String>,
    pub pass: bool,
}

/// Computes `|S|` (or its estimate) and compares it with both bound forms.
///
/// The pigeonhole lemma is judged on the trimmed weight; the exception mass
/// is reported beside it.
pub fn check_lemma<T: Scalar, S: Setting<T>>(
    setting: &S,
    s: usize,
    mode: Mode,
    unsafe_sizes: bool,
) -> Result<LemmaReport, ParamError> {
    let lemma = setting.lemma();
    let bounds = setting.bounds(s);
    let violations = preconditions(&setting.lemma_params());
    let php = lemma == Lemma::Php;
    let mut report = LemmaReport {
        lemma,
        params: setting.report_params(s),
        mode: String::new(),
        exact_weight: None,
        failure_count: None,
        trimmed_weight: None,
        exception_mass: None,
        estimate: None,
        half_width: None,
        interval: None,
        trimmed_estimate: None,
        trimmed_half_width: None,
        trials: None,
        seed: None,
        bound_loose: bounds.loose.render(),
        bound_tight: bounds.tight.render(),
        pass: false,
        violations,
    };
    let holds = match mode {
        Mode::Exact => {
            report.mode = "exact".into();
            let b = failure_breakdown(setting, s, unsafe_sizes)?;
            report.exact_weight = Some(b.total.render());
            report.failure_count = Some(b.members);
            if php {
                report.trimmed_weight = Some(b.trimmed.render());
                report.exception_mass = Some(b.exception.render());
            }
            bounds.admits(if php { &b.trimmed } else { &b.total })
        }
        Mode::Sample { trials, seed } => {
            report.mode = "sample".into();
            let e = monte_carlo_failure(setting, s, trials, seed);
            report.estimate = Some(e.estimate);
            report.half_width = Some(e.half_width);
            report.interval = Some((e.low, e.high));
            report.trials = Some(trials);
            report.seed = Some(seed);
            let judged = if php {
                let t = e.trimmed();
                report.trimmed_estimate = Some(t.estimate);
                report.trimmed_half_width = Some(t.half_width);
                t
            } else {
                e
            };
            let upper = judged.estimate + judged.half_width;
            upper <= bounds.loose.to_f64() && upper <= bounds.tight.to_f64()
        }
    };
    report.pass = holds && report.violations.is_empty();
    Ok(report)
}
