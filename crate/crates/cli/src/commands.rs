//! Command implementations. Each returns `Ok(pass)` or an input error.

use std::io::{self, Write};

use anyhow::anyhow;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use switchlab::corpus;
use switchlab::formula::text::FormulaFile;
use switchlab::formula::{Dnf, PhpInstance};
use switchlab::verify::{InjectivityReport, LemmaReport, Mode, Violation};
use switchlab::Exact;

use crate::instance::{load_blocks, load_formula, rational, rational_list, usize_list, AnySetting};
use crate::{CheckArgs, DistArgs, EnumerateArgs, InputError, InstanceArgs, ModeArg, RoundtripArgs, SampleArgs, SweepArgs};

fn mode(m: ModeArg, trials: u64, seed: u64) -> Result<Mode, InputError> {
    match m {
        ModeArg::Exact => Ok(Mode::Exact),
        ModeArg::Sample if trials == 0 => Err(InputError(anyhow!("--trials must be at least 1"))),
        ModeArg::Sample => Ok(Mode::Sample { trials, seed }),
    }
}

fn opt_rational(name: &str, v: &Option<String>) -> Result<Option<Exact>, InputError> {
    v.as_deref().map(|t| rational(name, t)).transpose()
}

fn formula_arg(inst: &InstanceArgs) -> Result<FormulaFile, InputError> {
    let path = inst.dnf.as_deref().ok_or_else(|| InputError(anyhow!("--dnf is required")))?;
    load_formula(path)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), InputError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn diagnose(r: &LemmaReport) {
    if r.pass {
        return;
    }
    for v in &r.violations {
        eprintln!("lemma {} s={}: precondition failed: {v}", r.lemma.id(), r.params.s);
    }
    if r.violations.is_empty() {
        eprintln!(
            "lemma {} s={}: failure weight exceeds the bound (loose {}, tight {})",
            r.lemma.id(),
            r.params.s,
            r.bound_loose,
            r.bound_tight
        );
    }
}

pub fn check(a: &CheckArgs, unsafe_sizes: bool) -> Result<bool, InputError> {
    let file = formula_arg(&a.inst)?;
    let setting = AnySetting::build(
        a.inst.lemma,
        file,
        a.inst.blocks.as_deref(),
        opt_rational("p", &a.p)?,
        opt_rational("q", &a.q)?,
        &a.inst.index_limit,
    )?;
    let mode = mode(a.mode, a.trials, a.seed)?;
    let reports = a
        .s
        .iter()
        .map(|&s| setting.check(s, mode, unsafe_sizes))
        .collect::<Result<Vec<_>, _>>()?;
    if let [one] = &reports[..] {
        print_json(one)?;
    } else {
        print_json(&reports)?;
    }
    reports.iter().for_each(diagnose);
    Ok(reports.iter().all(|r| r.pass))
}

#[derive(Serialize)]
struct FirstViolation {
    instance: String,
    s: usize,
    #[serde(flatten)]
    violation: Violation,
}

#[derive(Serialize)]
struct RoundtripSummary {
    lemma: u8,
    instances: usize,
    s: Vec<usize>,
    members: u64,
    distinct_witnesses: u64,
    violations: u64,
    class_violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_class_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_violation: Option<FirstViolation>,
}

fn corpus_settings(a: &RoundtripArgs, p: &Exact, q: &Exact) -> Result<Vec<AnySetting>, InputError> {
    if let Some(path) = &a.inst.dnf {
        let file = load_formula(path)?;
        return Ok(vec![AnySetting::build(
            a.inst.lemma,
            file,
            a.inst.blocks.as_deref(),
            Some(p.clone()),
            Some(q.clone()),
            &a.inst.index_limit,
        )?]);
    }
    let n = a
        .n
        .ok_or_else(|| InputError(anyhow!("give --dnf, or --n for the built-in corpus")))?;
    let build = |file: FormulaFile, blocks: Option<switchlab::formula::BlockStructure>| -> Result<AnySetting, InputError> {
        match blocks {
            Some(b) => Ok(AnySetting::Block(switchlab::verify::BlockSetting::new(
                file.dnf().clone(),
                b,
                p.clone(),
                q.clone(),
            )?)),
            None => AnySetting::build(a.inst.lemma, file, None, Some(p.clone()), Some(q.clone()), &a.inst.index_limit),
        }
    };
    let mut out = Vec::new();
    match a.inst.lemma {
        1 => {
            for f in corpus::canonical_dnfs(n, a.r, a.terms.unwrap_or(3)) {
                out.push(build(FormulaFile::Plain(f), None)?);
            }
        }
        2 => {
            let dnfs = corpus::canonical_dnfs(n, a.r, a.terms.unwrap_or(if n <= 3 { 3 } else { 2 }));
            let structures = match &a.inst.blocks {
                Some(path) => vec![load_blocks(Some(path), n)?],
                None => corpus::block_structures(n, 2),
            };
            for b in structures {
                for f in &dnfs {
                    out.push(build(FormulaFile::Plain(f.clone()), Some(b.clone()))?);
                }
            }
        }
        _ => {
            let inst = PhpInstance::new(n);
            let k = a.terms.unwrap_or(match n {
                0 | 1 => 3,
                2 => 2,
                _ => 1,
            });
            let mut dnfs: Vec<Dnf> = corpus::canonical_dnfs(inst.num_vars(), a.r, k);
            if n >= 3 && a.terms.is_none() {
                let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
                for _ in 0..a.random {
                    let terms = rand::Rng::gen_range(&mut rng, 2..=3);
                    dnfs.push(corpus::random_dnf(inst.num_vars(), a.r, terms, &mut rng));
                }
            }
            for f in dnfs {
                out.push(build(FormulaFile::Php(inst, f), None)?);
            }
        }
    }
    Ok(out)
}

pub fn roundtrip(a: &RoundtripArgs, unsafe_sizes: bool) -> Result<bool, InputError> {
    let p = rational("p", &a.p)?;
    let q = rational("q", &a.q)?;
    let settings = corpus_settings(a, &p, &q)?;
    let results: Vec<Vec<InjectivityReport>> = settings
        .par_iter()
        .map(|set| {
            a.s.iter()
                .map(|&s| set.sweep(s, a.corrupt_witness, unsafe_sizes))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut summary = RoundtripSummary {
        lemma: a.inst.lemma,
        instances: settings.len(),
        s: a.s.clone(),
        members: 0,
        distinct_witnesses: 0,
        violations: 0,
        class_violations: 0,
        max_class_ratio: None,
        first_violation: None,
    };
    for (set, reports) in settings.iter().zip(&results) {
        for (&s, r) in a.s.iter().zip(reports) {
            summary.members += r.members;
            summary.distinct_witnesses += r.distinct_witnesses;
            summary.violations += r.violation_count;
            summary.class_violations += r.class_violations;
            if let Some(m) = r.max_class_ratio {
                summary.max_class_ratio = Some(summary.max_class_ratio.map_or(m, |x: f64| x.max(m)));
            }
            if summary.first_violation.is_none() {
                if let Some(v) = r.violations.first() {
                    summary.first_violation = Some(FirstViolation {
                        instance: set.describe(),
                        s,
                        violation: v.clone(),
                    });
                }
            }
        }
    }
    print_json(&summary)?;
    let ok = summary.violations == 0 && summary.class_violations == 0;
    if !ok {
        eprintln!(
            "{} injectivity violations, {} class-bound violations",
            summary.violations, summary.class_violations
        );
        if let Some(v) = &summary.first_violation {
            eprintln!("first: {} at s={}: ρ = {}: {}", v.instance, v.s, v.violation.rho, v.violation.reason);
        }
    }
    Ok(ok)
}

#[derive(Serialize)]
struct SweepRow {
    lemma: u8,
    n: usize,
    r: usize,
    p: String,
    q: String,
    s: usize,
    mode: String,
    exact_weight: String,
    trimmed_weight: String,
    exception_mass: String,
    estimate: String,
    half_width: String,
    bound_loose: String,
    bound_tight: String,
    pass: bool,
}

const SWEEP_HEADER: [&str; 15] = [
    "lemma",
    "n",
    "r",
    "p",
    "q",
    "s",
    "mode",
    "exact_weight",
    "trimmed_weight",
    "exception_mass",
    "estimate",
    "half_width",
    "bound_loose",
    "bound_tight",
    "pass",
];

pub fn sweep(a: &SweepArgs, unsafe_sizes: bool) -> Result<bool, InputError> {
    let file = formula_arg(&a.inst)?;
    let lemma = a.inst.lemma;
    let ps = rational_list("p", &a.p)?;
    let qs = rational_list("q", &a.q)?;
    let ss = usize_list("s", &a.s)?;
    // Parameters a lemma does not use collapse to one blank slot.
    let slot = |xs: Vec<Exact>, used: bool| if used { xs.into_iter().map(Some).collect() } else { vec![None] };
    let ps: Vec<Option<Exact>> = slot(ps, lemma != 3);
    let qs: Vec<Option<Exact>> = slot(qs, lemma != 1);
    let mode = mode(a.mode, a.trials, a.seed)?;

    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(io::stdout().lock());
    out.write_record(SWEEP_HEADER)?;
    let text = |v: &Option<String>| v.clone().unwrap_or_default();
    let float = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for p in &ps {
        for q in &qs {
            let setting = AnySetting::build(
                lemma,
                file.clone(),
                a.inst.blocks.as_deref(),
                p.clone(),
                q.clone(),
                &a.inst.index_limit,
            )?;
            for &s in &ss {
                let r = setting.check(s, mode, unsafe_sizes)?;
                out.serialize(SweepRow {
                    lemma,
                    n: r.params.n,
                    r: r.params.r,
                    p: text(&r.params.p),
                    q: text(&r.params.q),
                    s,
                    mode: r.mode.clone(),
                    exact_weight: text(&r.exact_weight),
                    trimmed_weight: text(&r.trimmed_weight),
                    exception_mass: text(&r.exception_mass),
                    estimate: float(r.estimate),
                    half_width: float(r.half_width),
                    bound_loose: r.bound_loose.clone(),
                    bound_tight: r.bound_tight.clone(),
                    pass: r.pass,
                })?;
            }
        }
    }
    out.flush()?;
    Ok(true)
}

fn dist_setting(d: &DistArgs) -> Result<AnySetting, InputError> {
    let file = match (&d.dnf, d.n) {
        (Some(path), _) => load_formula(path)?,
        (None, Some(n)) if d.lemma == 3 => FormulaFile::Php(PhpInstance::new(n), Dnf::empty(PhpInstance::new(n).num_vars(), 1)),
        (None, Some(n)) => FormulaFile::Plain(Dnf::empty(n, 1)),
        (None, None) => return Err(InputError(anyhow!("give --n or --dnf"))),
    };
    if d.s.is_some() && d.dnf.is_none() {
        return Err(InputError(anyhow!("--s needs --dnf")));
    }
    AnySetting::build(
        d.lemma,
        file,
        d.blocks.as_deref(),
        opt_rational("p", &d.p)?,
        opt_rational("q", &d.q)?,
        "none",
    )
}

fn write_rows(rows: &[crate::instance::Row], with_fails: bool) -> Result<(), InputError> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(io::stdout().lock());
    let mut header = vec!["index", "restriction", "weight"];
    if with_fails {
        header.push("fails");
    }
    out.write_record(&header)?;
    for (i, r) in rows.iter().enumerate() {
        let mut rec = vec![i.to_string(), r.outcome.clone(), r.weight.clone()];
        if let Some(f) = r.fails {
            rec.push(f.to_string());
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn sample(a: &SampleArgs) -> Result<bool, InputError> {
    let setting = dist_setting(&a.dist)?;
    let rows = setting.sample(a.count, a.seed, a.dist.s);
    write_rows(&rows, a.dist.s.is_some())?;
    Ok(true)
}

pub fn enumerate(a: &EnumerateArgs, unsafe_sizes: bool) -> Result<bool, InputError> {
    let setting = dist_setting(&a.dist)?;
    let rows = setting.enumerate(a.dist.s, unsafe_sizes)?;
    write_rows(&rows, a.dist.s.is_some())?;
    Ok(true)
}
