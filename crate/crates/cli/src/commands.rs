use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use slabshear::codes::{CodeOptions, CodePrediction};
use slabshear::dataset::{
    load_csv, summarize, synthesize as draw, validate_ranges, write_csv, ColumnBounds, RangeSpec,
    ValidationReport,
};
use slabshear::evaluation::{self, correlation_matrix, CompareInput, CorrelationMatrix};
use slabshear::metaheuristics::Execution;
use slabshear::pipeline::{self, BackpropLog, ModelFile, ModelKind, TrainMetrics, TrainSpec};
use slabshear::{CodeMethod, Dataset, EvaluationReport, Method, Param};

use crate::output::{num, opt, RunDir};
use crate::{CodeArg, CompareArgs, Global, ModelArg, Subset, TrainArgs};

fn load(path: &Path) -> Result<Dataset> {
    Ok(load_csv(path)?)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into())
}

fn run_dir(g: &Global, command: &str, default_label: String) -> Result<RunDir> {
    let label = g.label.clone().unwrap_or(default_label);
    RunDir::create(&g.out, command, &label, g.json.as_deref())
}

fn execution(g: &Global) -> Execution {
    if g.threads > 1 {
        Execution::Threads(g.threads)
    } else {
        Execution::Serial
    }
}

fn code_method(c: CodeArg) -> CodeMethod {
    match c {
        CodeArg::Aci => CodeMethod::Aci,
        CodeArg::Ec2 => CodeMethod::Ec2,
        CodeArg::Cfp => CodeMethod::Cfp,
    }
}

fn code_options(ec2_cap: bool) -> CodeOptions {
    CodeOptions {
        ec2_cap_size_term: ec2_cap,
        ..CodeOptions::default()
    }
}

fn dedup<T: Copy + PartialEq>(items: &[T]) -> Vec<T> {
    let mut out = Vec::new();
    for &i in items {
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

// ---- stats ----

#[derive(Serialize)]
struct StatsFile<'a> {
    input: &'a Path,
    n_samples: usize,
    ranges: RangeSpec,
    correlation: CorrelationMatrix,
    /// Samples outside the reference database ranges.
    reference_check: ValidationReport,
}

pub fn stats(g: &Global, csv: &Path) -> Result<()> {
    let ds = load(csv)?;
    let ranges = summarize(&ds)?;
    let correlation = correlation_matrix(&ds)?;
    let reference_check = validate_ranges(&ds, &RangeSpec::reference_database());

    println!("{} samples from {}", ds.len(), csv.display());
    println!(
        "{:<10} {:>8} {:>8} {:>8} {:>10} {:>8} {:>10}",
        "id", "d", "c", "av/d", "rho %", "fc", "v_exp"
    );
    for s in &ds {
        println!(
            "{:<10} {:>8} {:>8} {:>8} {:>10.4} {:>8} {:>10}",
            s.id,
            s.d,
            s.c,
            s.av_d,
            s.rho * 100.0,
            s.fc,
            s.v_exp
        );
    }
    println!();
    println!(
        "{:<6} {:>12} {:>12} {:>12} {:>12} {:>12} {:>8}",
        "param", "min", "max", "diff", "avg", "std", "cov"
    );
    for r in &ranges.rows {
        println!(
            "{:<6} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>8.3}",
            r.param.symbol(),
            r.min,
            r.max,
            r.diff,
            r.avg,
            r.std,
            r.cov
        );
    }
    println!();
    print!("{:<6}", "");
    for p in &correlation.params {
        print!(" {:>7}", p.symbol());
    }
    println!();
    for (p, row) in correlation.params.iter().zip(&correlation.values) {
        print!("{:<6}", p.symbol());
        for v in row {
            print!(" {v:>7.3}");
        }
        println!();
    }
    for d in &correlation.dropped {
        println!("dropped {}: {}", d.param.symbol(), d.reason);
    }
    if !reference_check.is_pass() {
        println!(
            "values outside the reference ranges: {}",
            reference_check.violations.len()
        );
    }

    let mut dir = run_dir(g, "stats", stem(csv))?;
    let range_rows: Vec<Vec<String>> = ranges
        .rows
        .iter()
        .map(|r| {
            vec![
                r.param.symbol().into(),
                num(r.min),
                num(r.max),
                num(r.diff),
                num(r.avg),
                num(r.std),
                num(r.cov),
            ]
        })
        .collect();
    dir.csv(
        "ranges.csv",
        &["param", "min", "max", "diff", "avg", "std", "cov"],
        &range_rows,
    )?;
    let mut header = vec!["param"];
    header.extend(correlation.params.iter().map(|p| p.symbol()));
    let corr_rows: Vec<Vec<String>> = correlation
        .params
        .iter()
        .zip(&correlation.values)
        .map(|(p, row)| {
            std::iter::once(p.symbol().to_string())
                .chain(row.iter().map(|v| num(*v)))
                .collect()
        })
        .collect();
    dir.csv("correlation.csv", &header, &corr_rows)?;
    dir.primary_json(
        "stats.json",
        &StatsFile {
            input: csv,
            n_samples: ds.len(),
            ranges,
            correlation,
            reference_check,
        },
    )?;
    dir.report();
    Ok(())
}

// ---- predict ----

#[derive(Serialize)]
struct PredictionRow<'a> {
    sample_id: &'a str,
    v_exp: f64,
    /// V_exp / V_pred.
    ratio: f64,
    #[serde(flatten)]
    prediction: CodePrediction,
}

#[derive(Serialize)]
struct PredictFile<'a> {
    input: &'a Path,
    methods: Vec<CodeMethod>,
    ec2_cap_size_term: bool,
    cfp_closure: &'static str,
    predictions: Vec<PredictionRow<'a>>,
}

const PREDICT_HEADER: [&str; 13] = [
    "sample_id",
    "method",
    "v_pred_kn",
    "v_exp_kn",
    "ratio",
    "perimeter_mm",
    "lambda_s",
    "ec2_size_term",
    "rho_s",
    "lambda_c",
    "w_mm",
    "warnings",
    "v_pred_n",
];

pub fn predict(g: &Global, csv: &Path, methods: &[CodeArg], ec2_cap: bool) -> Result<()> {
    let ds = load(csv)?;
    let methods: Vec<CodeMethod> = dedup(methods).into_iter().map(code_method).collect();
    let opts = code_options(ec2_cap);
    let mut rows = Vec::new();
    for s in &ds {
        for &m in &methods {
            let p = m
                .predict(s, &opts)
                .with_context(|| format!("{} on sample {}", m.name(), s.id))?;
            rows.push(PredictionRow {
                sample_id: &s.id,
                v_exp: s.v_exp,
                ratio: s.v_exp / p.v_pred,
                prediction: p,
            });
        }
    }

    println!(
        "{:<10} {:<5} {:>12} {:>10} {:>8}  warnings",
        "sample", "method", "V_pred kN", "V_exp kN", "ratio"
    );
    for r in &rows {
        println!(
            "{:<10} {:<5} {:>12.2} {:>10.2} {:>8.3}  {}",
            r.sample_id,
            r.prediction.method.name(),
            r.prediction.v_pred,
            r.v_exp,
            r.ratio,
            warning_text(&r.prediction)
        );
    }

    let label = format!(
        "{}-{}",
        stem(csv),
        methods
            .iter()
            .map(|m| m.name().to_lowercase())
            .collect::<Vec<_>>()
            .join("-")
    );
    let mut dir = run_dir(g, "predict", label)?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let p = &r.prediction;
            let i = &p.intermediates;
            vec![
                r.sample_id.to_string(),
                p.method.name().into(),
                num(p.v_pred),
                num(r.v_exp),
                num(r.ratio),
                num(i.perimeter_mm),
                opt(i.lambda_s),
                opt(i.ec2_size_term),
                opt(i.rho_s),
                opt(i.lambda_c),
                opt(i.w_ii2_mm),
                warning_text(p),
                num(p.v_newtons),
            ]
        })
        .collect();
    dir.csv("predictions.csv", &PREDICT_HEADER, &csv_rows)?;
    dir.primary_json(
        "predictions.json",
        &PredictFile {
            input: csv,
            methods,
            ec2_cap_size_term: ec2_cap,
            cfp_closure: opts.cfp_closure.name(),
            predictions: rows,
        },
    )?;
    dir.report();
    Ok(())
}

fn warning_text(p: &CodePrediction) -> String {
    p.warnings
        .iter()
        .map(|w| serde_json::to_string(w).unwrap_or_default())
        .collect::<Vec<_>>()
        .join(";")
}

// ---- train ----

#[derive(Serialize)]
struct MetricsFile<'a> {
    input: &'a Path,
    model: ModelKind,
    combo: u8,
    seed: u64,
    spec: &'a TrainSpec,
    metrics: &'a TrainMetrics,
}

#[derive(Serialize)]
struct HistoryFile<'a> {
    spec: &'a TrainSpec,
    #[serde(flatten)]
    log: &'a BackpropLog,
}

fn model_kind(m: ModelArg) -> ModelKind {
    match m {
        ModelArg::Fnn => ModelKind::Fnn,
        ModelArg::Psofnn => ModelKind::Psofnn,
        ModelArg::Batfnn => ModelKind::Batfnn,
    }
}

fn train_spec(g: &Global, a: &TrainArgs) -> Result<TrainSpec> {
    let mut spec = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let mut spec: TrainSpec = serde_json::from_str(&text)
                .with_context(|| format!("invalid training spec {}", path.display()))?;
            if let Some(c) = a.combo {
                spec.combo = c;
            }
            if let Some(m) = a.model {
                spec.model = model_kind(m);
            }
            if let Some(s) = g.seed {
                spec.seed = s;
                spec.backprop.seed = s;
                spec.pso.seed = s;
                spec.bat.seed = s;
            }
            spec
        }
        None => {
            let combo = a
                .combo
                .ok_or_else(|| anyhow!("--combo is required without --config"))?;
            let model = a
                .model
                .ok_or_else(|| anyhow!("--model is required without --config"))?;
            let seed = g
                .seed
                .ok_or_else(|| anyhow!("--seed is required for train"))?;
            TrainSpec::new(combo, model_kind(model), seed)?
        }
    };
    if let Some(f) = a.train_fraction {
        spec.train_fraction = f;
    }
    if let Some(n) = a.iterations {
        spec.pso.max_iterations = n;
        spec.bat.max_iterations = n;
    }
    if let Some(n) = a.population {
        spec.pso.swarm_size = n;
        spec.bat.population = n;
    }
    if let Some(b) = a.weight_bound {
        spec.weight_bound = b;
    }
    if let Some(e) = a.epochs {
        spec.backprop.max_epochs = e;
    }
    if let Some(lr) = a.learning_rate {
        spec.backprop.learning_rate = lr;
    }
    Ok(spec)
}

pub fn train(g: &Global, a: &TrainArgs) -> Result<()> {
    let spec = train_spec(g, a)?;
    let ds = load(&a.csv)?;
    let run = pipeline::train_model(&ds, &spec, execution(g))?;
    let m = &run.metrics;

    println!(
        "{} on combo {} ({} features, {} train / {} test samples), seed {}",
        spec.model,
        spec.combo,
        run.model.feature_names.len(),
        run.model.train_ids.len(),
        run.model.test_ids.len(),
        spec.seed
    );
    println!(
        "{:<6} {:>8} {:>12} {:>12} {:>12} {:>12}",
        "split", "r", "MSE %", "MAE %", "MSE kN^2", "MAE kN"
    );
    for (name, s) in [("train", &m.train), ("test", &m.test)] {
        println!(
            "{:<6} {:>8.4} {:>12.4} {:>12.4} {:>12.2} {:>12.2}",
            name,
            s.normalized.r,
            100.0 * s.normalized.mse,
            100.0 * s.normalized.mae,
            s.kn.mse,
            s.kn.mae
        );
    }
    println!("untrained test MSE %: {:.4}", 100.0 * m.untrained_test_mse);

    let label = format!(
        "{}-combo{}-{}-seed{}",
        stem(&a.csv),
        spec.combo,
        spec.model,
        spec.seed
    );
    let mut dir = run_dir(g, "train", label)?;
    dir.json("model.json", &run.model)?;
    if let Some(trace) = &run.trace {
        dir.json("trace.json", trace)?;
        let rows: Vec<Vec<String>> = trace
            .trace
            .best_history
            .iter()
            .enumerate()
            .map(|(i, v)| vec![(i + 1).to_string(), num(*v)])
            .collect();
        dir.csv("trace.csv", &["iteration", "best_mse"], &rows)?;
    }
    if let Some(log) = &run.backprop {
        dir.json("history.json", &HistoryFile { spec: &spec, log })?;
    }
    dir.primary_json(
        "metrics.json",
        &MetricsFile {
            input: &a.csv,
            model: spec.model,
            combo: spec.combo,
            seed: spec.seed,
            spec: &spec,
            metrics: m,
        },
    )?;
    dir.report();
    Ok(())
}

// ---- compare ----

#[derive(Serialize)]
struct ModelSource {
    path: PathBuf,
    model: ModelKind,
    combo: u8,
    seed: u64,
}

#[derive(Serialize)]
struct CompareFile<'a> {
    input: &'a Path,
    subset: &'static str,
    sample_ids: Vec<String>,
    models: Vec<ModelSource>,
    ec2_cap_size_term: bool,
    report: &'a EvaluationReport,
}

fn load_model(path: &Path) -> Result<ModelFile> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid model file {}", path.display()))
}

fn test_subset(ds: &Dataset, models: &[(PathBuf, ModelFile)]) -> Result<Dataset> {
    let Some((_, first)) = models.first() else {
        bail!("--subset test needs at least one --model");
    };
    for (path, m) in &models[1..] {
        if m.test_ids != first.test_ids {
            bail!(
                "provenance mismatch: {} was trained on a different test split",
                path.display()
            );
        }
    }
    let wanted: BTreeSet<&str> = first.test_ids.iter().map(String::as_str).collect();
    let samples: Vec<_> = ds
        .iter()
        .filter(|s| wanted.contains(s.id.as_str()))
        .cloned()
        .collect();
    if samples.len() != wanted.len() {
        bail!(
            "provenance mismatch: {} of {} test samples are missing from the CSV",
            wanted.len() - samples.len(),
            wanted.len()
        );
    }
    Ok(Dataset::new(samples)?)
}

pub fn compare(g: &Global, a: &CompareArgs) -> Result<()> {
    let full = load(&a.csv)?;
    let mut models: Vec<(PathBuf, ModelFile)> = Vec::new();
    for path in &a.models {
        let m = load_model(path)?;
        if let Some((other, _)) = models.iter().find(|(_, o)| o.model == m.model) {
            bail!(
                "{} and {} are both {} models",
                other.display(),
                path.display(),
                m.model
            );
        }
        if let Some((_, first)) = models.first() {
            first
                .check_compatible(&m)
                .with_context(|| format!("model {}", path.display()))?;
        }
        models.push((path.clone(), m));
    }
    let ds = match a.subset {
        Subset::All => full,
        Subset::Test => test_subset(&full, &models)?,
    };

    let opts = code_options(a.ec2_cap);
    let mut predictions = Vec::new();
    for c in dedup(&a.codes) {
        let m = code_method(c);
        let v = ds
            .iter()
            .map(|s| {
                m.predict(s, &opts)
                    .map(|p| p.v_pred)
                    .with_context(|| format!("{} on sample {}", m.name(), s.id))
            })
            .collect::<Result<Vec<_>>>()?;
        predictions.push((Method::from(m), v));
    }
    for (path, m) in &models {
        let v = m
            .predict(&ds)
            .with_context(|| format!("model {}", path.display()))?;
        predictions.push((m.model.method(), v));
    }
    let target_bounds = match models.first() {
        Some((_, m)) => Some(m.norm.target.clone()),
        None => {
            let v = ds.column(Param::VExp);
            let (lo, hi) = v
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| {
                    (l.min(*x), h.max(*x))
                });
            (hi > lo).then(|| ColumnBounds {
                name: Param::VExp.column().into(),
                min: lo,
                max: hi,
            })
        }
    };
    let report = evaluation::compare(&CompareInput {
        samples: &ds,
        predictions,
        target_bounds,
        band: a.band,
    })?;

    print_report(&report);

    let label = match a.subset {
        Subset::All => stem(&a.csv),
        Subset::Test => format!("{}-test", stem(&a.csv)),
    };
    let mut dir = run_dir(g, "compare", label)?;
    write_compare_tables(&mut dir, &report)?;
    dir.primary_json(
        "report.json",
        &CompareFile {
            input: &a.csv,
            subset: match a.subset {
                Subset::All => "all",
                Subset::Test => "test",
            },
            sample_ids: ds.iter().map(|s| s.id.clone()).collect(),
            models: models
                .iter()
                .map(|(path, m)| ModelSource {
                    path: path.clone(),
                    model: m.model,
                    combo: m.combo,
                    seed: m.spec.seed,
                })
                .collect(),
            ec2_cap_size_term: a.ec2_cap,
            report: &report,
        },
    )?;
    dir.report();
    Ok(())
}

fn print_report(report: &EvaluationReport) {
    println!("{} samples", report.n_samples);
    println!(
        "{:<4} {:<7} {:>8} {:>8} {:>12} {:>10} {:>8} {:>8}  assessment",
        "rank", "method", "r", "r^2", "MSE kN^2", "MAE kN", "ratio", "std"
    );
    for (i, m) in report.ranking.iter().enumerate() {
        let r = report.method(*m);
        let (Some(s), Some(q)) = (&r.metrics, &r.ratios) else {
            continue;
        };
        println!(
            "{:<4} {:<7} {:>8.4} {:>8.4} {:>12.2} {:>10.2} {:>8.3} {:>8.3}  {}",
            i + 1,
            m.name(),
            s.r,
            s.r_squared,
            s.mse,
            s.mae,
            q.mean,
            q.std,
            r.assessment.map(assessment_name).unwrap_or("")
        );
    }
    for r in report.methods.iter().filter(|r| !r.present) {
        println!("-    {:<7} absent", r.method.name());
    }
}

fn assessment_name(a: evaluation::Assessment) -> &'static str {
    match a {
        evaluation::Assessment::Underestimates => "underestimates",
        evaluation::Assessment::Overestimates => "overestimates",
        evaluation::Assessment::Exact => "exact",
    }
}

fn write_compare_tables(dir: &mut RunDir, report: &EvaluationReport) -> Result<()> {
    let mut summary = Vec::new();
    for r in &report.methods {
        let rank = report
            .ranking
            .iter()
            .position(|m| *m == r.method)
            .map(|i| (i + 1).to_string());
        let mut row = vec![
            r.method.name().to_string(),
            r.present.to_string(),
            rank.unwrap_or_default(),
        ];
        match (&r.metrics, &r.ratios) {
            (Some(s), Some(q)) => {
                let (mse_pct, mae_pct) = r
                    .normalized
                    .as_ref()
                    .map_or((String::new(), String::new()), |n| {
                        (num(n.mse_percent), num(n.mae_percent))
                    });
                row.extend([
                    s.n.to_string(),
                    num(s.r),
                    num(s.r_squared),
                    num(s.mse),
                    num(s.mae),
                    mse_pct,
                    mae_pct,
                    num(q.mean),
                    num(q.std),
                    num(q.min),
                    num(q.max),
                    r.assessment.map(assessment_name).unwrap_or("").into(),
                ]);
            }
            _ => row.extend(std::iter::repeat_n(String::new(), 12)),
        }
        summary.push(row);

        let tag = r.method.name().to_lowercase();
        if let Some(q) = &r.ratios {
            let pdf: Vec<Vec<String>> = q
                .pdf
                .iter()
                .map(|p| vec![num(p.x), num(p.density)])
                .collect();
            dir.csv(&format!("pdf_{tag}.csv"), &["ratio", "density"], &pdf)?;
        }
        for t in &r.scatter {
            let rows: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|row| {
                    vec![
                        row.sample_id.clone(),
                        num(row.value),
                        num(row.ratio),
                        row.flagged.to_string(),
                    ]
                })
                .collect();
            dir.csv(
                &format!("scatter_{tag}_{}.csv", t.param.symbol()),
                &["sample_id", t.param.symbol(), "ratio", "flagged"],
                &rows,
            )?;
        }
    }
    dir.csv(
        "metrics.csv",
        &[
            "method",
            "present",
            "rank",
            "n",
            "r",
            "r_squared",
            "mse_kn2",
            "mae_kn",
            "mse_percent",
            "mae_percent",
            "ratio_mean",
            "ratio_std",
            "ratio_min",
            "ratio_max",
            "assessment",
        ],
        &summary,
    )
}

// ---- synthesize ----

#[derive(Serialize)]
struct SynthFile<'a> {
    n: usize,
    noise: f64,
    seed: u64,
    ranges_file: Option<&'a Path>,
    ranges: &'a RangeSpec,
}

pub fn synthesize(g: &Global, n: usize, noise: f64, ranges: Option<&Path>) -> Result<()> {
    let seed = g
        .seed
        .ok_or_else(|| anyhow!("--seed is required for synthesize"))?;
    let spec = match ranges {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("invalid range spec {}", path.display()))?
        }
        None => RangeSpec::reference_database(),
    };
    let ds = draw(n, &spec, seed, noise)?;
    let mut buf = Vec::new();
    write_csv(&ds, &mut buf)?;

    let mut dir = run_dir(g, "synthesize", format!("n{n}-seed{seed}"))?;
    dir.raw("data.csv", &buf)?;
    dir.primary_json(
        "synthesize.json",
        &SynthFile {
            n,
            noise,
            seed,
            ranges_file: ranges,
            ranges: &spec,
        },
    )?;
    println!("{} synthetic samples, seed {seed}", ds.len());
    dir.report();
    Ok(())
}
