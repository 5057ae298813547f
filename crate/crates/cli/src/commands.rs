//! Subcommand implementations.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use ripbound::chi2;
use ripbound::io::{render_curve_svg, write_curve_csv, RunManifest};
use ripbound::mc_lab::{exact_rip_with_cap, run_experiment, sample_matrix, Ensemble};
use ripbound::order_stats::ConcentrationExperiment;
use ripbound::rip_bounds::{
    algorithm_requirement, classical_upper_threshold, eps_for_confidence, lower_bounds, upper_bound_delta,
    BoundReport, CurveConfig, CurveRow, EpsForm, MeasurementScan, ProblemDims,
};
use ripbound::{Error, Result};

use crate::table::{emit, Cell, Format, Table};
use crate::{Command, Confidence, OutputArgs};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Bounds {
            n,
            ambient,
            s,
            conf,
            eps,
            c1,
            c2,
            output,
        } => bounds(n, ambient, s, &conf, eps, c1, c2, &output),
        Command::Curve {
            ambient,
            sparsity,
            rate_min,
            rate_max,
            points,
            conf,
            c1,
            c2,
            out,
            svg,
            svg_panels,
        } => curve(&CurveArgs {
            ambient,
            sparsity,
            rate_min,
            rate_max,
            points,
            confidence: conf.confidence,
            const_c: conf.const_c,
            c1,
            c2,
            out,
            svg,
            svg_panels,
        }),
        Command::Mc {
            n,
            ambient,
            s,
            ensemble,
            trials,
            seed,
            conf,
            trials_out,
            output,
        } => mc(n, ambient, s, ensemble, trials, seed, &conf, trials_out.as_deref(), &output),
        Command::Exact {
            n,
            ambient,
            s,
            ensemble,
            seed,
            cap,
            output,
        } => exact(n, ambient, s, ensemble, seed, cap, &output),
        Command::Orderstats {
            n,
            k,
            trials,
            seed,
            const_c,
            eps,
            output,
        } => orderstats(n, k, trials, seed, const_c, eps, &output),
        Command::Minmeas {
            ambient,
            s,
            delta,
            algorithm,
            conf,
            n_max,
            output,
        } => minmeas(ambient, s, delta, algorithm.as_deref(), &conf, n_max, &output),
        Command::Quantile { alpha, output } => quantile(alpha, &output),
        Command::Cte { t, alpha, output } => cte(t, alpha, &output),
    }
}

fn join_reals(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn bound_row(report: &BoundReport) -> Vec<Cell> {
    vec![
        report.kind.as_str().into(),
        report.value.into(),
        report.eps.into(),
        report.delta_internal.into(),
        report.prob_floor.into(),
        report.const_c.into(),
        report.is_valid().into(),
        report.vacuous.into(),
        report.reasons.join(";").into(),
    ]
}

#[allow(clippy::too_many_arguments)]
fn bounds(
    n: usize,
    ambient: usize,
    s: usize,
    conf: &Confidence,
    eps: Option<f64>,
    c1: f64,
    c2: f64,
    output: &OutputArgs,
) -> Result<()> {
    let dims = ProblemDims::new(n, ambient, s)?;
    let (eps_lower, eps_upper) = match eps {
        Some(e) => (e, e),
        None => (
            eps_for_confidence(n, conf.confidence, EpsForm::Lower, conf.const_c)?,
            eps_for_confidence(n, conf.confidence, EpsForm::Upper, conf.const_c)?,
        ),
    };
    let (plus, minus) = lower_bounds(dims, eps_lower, conf.const_c)?;
    let upper = upper_bound_delta(dims, eps_upper, conf.const_c)?;
    let classical = classical_upper_threshold(dims, conf.confidence, c1, c2)?;

    let mut table = Table::new(&[
        "bound",
        "value",
        "eps",
        "delta_internal",
        "prob_floor",
        "const_c",
        "valid",
        "vacuous",
        "reasons",
    ]);
    for report in [&plus, &minus, &upper, &classical] {
        table.push(bound_row(report));
    }
    let mut manifest = RunManifest::new("bounds")
        .param("n", n)
        .param("N", ambient)
        .param("s", s)
        .param("confidence", conf.confidence)
        .param("eps", eps.map(|e| e.to_string()).unwrap_or_else(|| "derived".into()))
        .constant("C", conf.const_c)
        .constant("c1", c1)
        .constant("c2", c2);
    manifest = manifest.param("format", format_name(output.format));
    emit(&table, output.format, output.out.as_deref(), &manifest)
}

fn format_name(format: Format) -> &'static str {
    match format {
        Format::Text => "text",
        Format::Csv => "csv",
    }
}

pub struct CurveArgs {
    pub ambient: usize,
    pub sparsity: Vec<f64>,
    pub rate_min: f64,
    pub rate_max: f64,
    pub points: usize,
    pub confidence: f64,
    pub const_c: f64,
    pub c1: f64,
    pub c2: f64,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub svg_panels: bool,
}

/// `points` equally spaced rates in `[rate_min, rate_max]`.
fn rate_grid(rate_min: f64, rate_max: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::Domain("--points must be at least 1".into()));
    }
    if !(rate_min > 1.0) || !(rate_max >= rate_min) || !rate_max.is_finite() {
        return Err(Error::Domain(format!(
            "need 1 < rate-min <= rate-max, got {rate_min} and {rate_max}"
        )));
    }
    if points == 1 {
        return Ok(vec![rate_min]);
    }
    let step = (rate_max - rate_min) / (points - 1) as f64;
    Ok((0..points).map(|i| rate_min + step * i as f64).collect())
}

fn panel_path(svg: &Path, level: f64) -> PathBuf {
    let stem = svg.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    svg.with_file_name(format!("{stem}_s{level}.svg"))
}

fn curve(args: &CurveArgs) -> Result<()> {
    let rates = rate_grid(args.rate_min, args.rate_max, args.points)?;
    if args.sparsity.is_empty() {
        return Err(Error::Domain("at least one sparsity level is needed".into()));
    }
    let levels = args
        .sparsity
        .iter()
        .map(|&level| {
            let mut config = CurveConfig::new(args.ambient, level, rates.clone(), args.confidence, args.const_c);
            config.c1 = args.c1;
            config.c2 = args.c2;
            config.run().map(|rows| (level, rows))
        })
        .collect::<Result<Vec<(f64, Vec<CurveRow>)>>>()?;
    let rows: Vec<CurveRow> = levels.iter().flat_map(|(_, rows)| rows.iter().cloned()).collect();

    let manifest = RunManifest::new("curve")
        .param("N", args.ambient)
        .param("sparsity", join_reals(&args.sparsity))
        .param("rate_min", args.rate_min)
        .param("rate_max", args.rate_max)
        .param("points", args.points)
        .param("confidence", args.confidence)
        .constant("C", args.const_c)
        .constant("c1", args.c1)
        .constant("c2", args.c2);

    match &args.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_curve_csv(&mut w, &rows)?;
            w.flush()?;
            manifest.clone().param("output", "csv").write_alongside(path)?;
        }
        None => write_curve_csv(io::stdout().lock(), &rows)?,
    }

    if let Some(svg) = &args.svg {
        let title = format!(
            "RIP constant bounds, N = {}, confidence {}",
            args.ambient, args.confidence
        );
        fs::write(svg, render_curve_svg(&title, &levels))?;
        manifest.clone().param("output", "svg").write_alongside(svg)?;
        if args.svg_panels {
            for (level, rows) in &levels {
                let path = panel_path(svg, *level);
                let title = format!("{title}, s/N = {level}");
                fs::write(&path, render_curve_svg(&title, &[(*level, rows.clone())]))?;
                manifest
                    .clone()
                    .param("output", "svg_panel")
                    .param("panel_sparsity", level)
                    .write_alongside(&path)?;
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn mc(
    n: usize,
    ambient: usize,
    s: usize,
    ensemble: Ensemble,
    trials: usize,
    seed: u64,
    conf: &Confidence,
    trials_out: Option<&Path>,
    output: &OutputArgs,
) -> Result<()> {
    let dims = ProblemDims::new(n, ambient, s)?;
    let summary = run_experiment(dims, ensemble, trials, seed, conf.confidence, conf.const_c)?;
    let degenerate = summary.trials.iter().filter(|t| t.degenerate).count();

    let mut table = Table::metrics();
    table.metric("n", n);
    table.metric("N", ambient);
    table.metric("s", s);
    table.metric("ensemble", ensemble.as_str());
    table.metric("trials", trials);
    table.metric("seed", seed);
    table.metric("confidence", conf.confidence);
    table.metric("const_c", conf.const_c);
    table.metric("eps", summary.lower_plus.eps);
    table.metric("lower_plus", summary.lower_plus.value);
    table.metric("lower_minus", summary.lower_minus.value);
    table.metric("lower_plus_reasons", summary.lower_plus.reasons.join(";"));
    table.metric("lower_minus_reasons", summary.lower_minus.reasons.join(";"));
    table.metric("plus_coverage", summary.plus_coverage);
    table.metric("minus_coverage", summary.minus_coverage);
    for (name, q) in [("delta_plus_emp", summary.plus_quantiles), ("delta_minus_emp", summary.minus_quantiles)] {
        table.metric(format!("{name}.min"), q.min);
        table.metric(format!("{name}.q05"), q.q05);
        table.metric(format!("{name}.median"), q.median);
        table.metric(format!("{name}.q95"), q.q95);
        table.metric(format!("{name}.max"), q.max);
    }
    table.metric("mean_plus_energy", summary.mean_plus_energy);
    table.metric("tail_root", summary.tail_root);
    table.metric("center", summary.center);
    table.metric("center_gap", summary.center_gap());
    table.metric("center_tail_exact", summary.center_tail_exact);
    table.metric("degenerate_trials", degenerate);

    let manifest = RunManifest::new("mc")
        .param("n", n)
        .param("N", ambient)
        .param("s", s)
        .param("ensemble", ensemble)
        .param("trials", trials)
        .param("confidence", conf.confidence)
        .param("format", format_name(output.format))
        .seed(seed)
        .constant("C", conf.const_c);

    if let Some(path) = trials_out {
        let mut per_trial = Table::new(&[
            "trial",
            "matrix_seed",
            "plus_energy",
            "minus_energy",
            "delta_plus_emp",
            "delta_minus_emp",
            "degenerate",
        ]);
        for t in &summary.trials {
            per_trial.push(vec![
                t.trial.into(),
                t.matrix_seed.into(),
                t.plus_energy.into(),
                t.minus_energy.into(),
                t.delta_plus_emp.into(),
                t.delta_minus_emp.into(),
                t.degenerate.into(),
            ]);
        }
        let mut w = BufWriter::new(File::create(path)?);
        per_trial.write_csv(&mut w)?;
        w.flush()?;
        manifest.clone().param("output", "trials").write_alongside(path)?;
    }
    emit(&table, output.format, output.out.as_deref(), &manifest)
}

fn support_text(support: &[usize]) -> String {
    support.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(" ")
}

fn exact(
    n: usize,
    ambient: usize,
    s: usize,
    ensemble: Ensemble,
    seed: u64,
    cap: u128,
    output: &OutputArgs,
) -> Result<()> {
    let a = sample_matrix(n, ambient, ensemble, seed)?;
    let rip = exact_rip_with_cap(&a, s, cap)?;
    let mut table = Table::metrics();
    table.metric("n", n);
    table.metric("N", ambient);
    table.metric("s", s);
    table.metric("ensemble", ensemble.as_str());
    table.metric("seed", seed);
    table.metric("delta_plus", rip.delta_plus);
    table.metric("delta_minus", rip.delta_minus);
    table.metric("delta_s", rip.delta_s);
    table.metric("supports_checked", rip.supports_checked);
    table.metric("argmax_support", support_text(&rip.argmax_support));
    table.metric("argmin_support", support_text(&rip.argmin_support));
    table.metric("sigma_max", rip.sigma_max(n));
    table.metric("sigma_min", rip.sigma_min(n));
    let manifest = RunManifest::new("exact")
        .param("n", n)
        .param("N", ambient)
        .param("s", s)
        .param("ensemble", ensemble)
        .param("cap", cap)
        .param("format", format_name(output.format))
        .seed(seed);
    emit(&table, output.format, output.out.as_deref(), &manifest)
}

fn orderstats(
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    const_c: f64,
    eps: Vec<f64>,
    output: &OutputArgs,
) -> Result<()> {
    let report = ConcentrationExperiment::new(n, k, trials, seed)
        .with_const_c(const_c)
        .with_eps_grid(eps.clone())
        .run()?;
    let mut table = Table::metrics();
    table.metric("n", n);
    table.metric("k", k);
    table.metric("trials", trials);
    table.metric("seed", seed);
    table.metric("const_c", const_c);
    table.metric("outside_validity", report.outside_validity);
    table.metric("threshold", report.theory.threshold);
    table.metric("theory_t", report.theory.tail_root);
    table.metric("theory_t_squared", report.theory.tail_mean);
    table.metric("mean", report.mean);
    table.metric("sd", report.sd);
    table.metric("abs_bias", report.abs_bias);
    table.metric("bias_radius", report.bias_radius);
    for c in &report.coverage {
        table.metric(format!("radius@{}", c.eps), c.radius);
        table.metric(format!("prob_floor@{}", c.eps), c.prob_floor);
        table.metric(format!("covered@{}", c.eps), c.covered);
    }
    let manifest = RunManifest::new("orderstats")
        .param("n", n)
        .param("k", k)
        .param("trials", trials)
        .param("eps", join_reals(&eps))
        .param("format", format_name(output.format))
        .seed(seed)
        .constant("C", const_c);
    emit(&table, output.format, output.out.as_deref(), &manifest)
}

/// Largest double strictly below a positive `x`.
fn just_below(x: f64) -> f64 {
    f64::from_bits(x.to_bits() - 1)
}

fn minmeas(
    ambient: usize,
    s: usize,
    delta: Option<f64>,
    algorithm: Option<&str>,
    conf: &Confidence,
    n_max: usize,
    output: &OutputArgs,
) -> Result<()> {
    let (label, order, threshold, strict) = match algorithm {
        Some(name) => {
            let req = algorithm_requirement(name)?;
            (req.id.to_string(), req.order_multiplier * s, req.threshold.value(s), req.strict)
        }
        None => ("none".to_string(), s, delta.expect("clap requires --delta or --algorithm"), false),
    };
    if !(threshold > 0.0) {
        return Err(Error::Domain(format!("delta target must be positive, got {threshold}")));
    }
    // A strict requirement delta < d is met by delta <= the next double below d.
    let target = if strict { just_below(threshold) } else { threshold };
    let scan = MeasurementScan::new(ambient, order, target, conf.confidence, conf.const_c).with_n_max(n_max);

    let mut notes = Vec::new();
    let sufficient = match scan.sufficient() {
        Ok(n) => Some(n),
        Err(e @ Error::NotFound { .. }) => {
            notes.push(format!("sufficient: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let necessary = match scan.necessary() {
        Ok(n) => Some(n),
        Err(e @ (Error::NotFound { .. } | Error::Domain(_))) => {
            notes.push(format!("necessary: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let count = |v: Option<usize>| Cell::text(v.map(|n| n.to_string()).unwrap_or_default());

    let mut table = Table::new(&[
        "algorithm",
        "N",
        "s",
        "order",
        "delta_target",
        "strict",
        "confidence",
        "const_c",
        "n_sufficient",
        "n_necessary",
        "notes",
    ]);
    table.push(vec![
        label.as_str().into(),
        ambient.into(),
        s.into(),
        order.into(),
        threshold.into(),
        strict.into(),
        conf.confidence.into(),
        conf.const_c.into(),
        count(sufficient),
        count(necessary),
        notes.join(";").into(),
    ]);
    let manifest = RunManifest::new("minmeas")
        .param("N", ambient)
        .param("s", s)
        .param("algorithm", &label)
        .param("delta_target", threshold)
        .param("confidence", conf.confidence)
        .param("n_max", n_max)
        .param("format", format_name(output.format))
        .constant("C", conf.const_c);
    emit(&table, output.format, output.out.as_deref(), &manifest)
}

fn quantile(alpha: f64, output: &OutputArgs) -> Result<()> {
    let spec = chi2::quantile(alpha)?;
    let mut table = Table::new(&["alpha", "t"]);
    table.push(vec![spec.alpha.into(), spec.t.into()]);
    let manifest = RunManifest::new("quantile")
        .param("alpha", alpha)
        .param("format", format_name(output.format));
    emit(&table, output.format, output.out.as_deref(), &manifest)
}

fn cte(t: Option<f64>, alpha: Option<f64>, output: &OutputArgs) -> Result<()> {
    let moment = match (t, alpha) {
        (Some(t), _) => chi2::conditional_tail_expectation(t)?,
        (None, Some(alpha)) => chi2::big_t(alpha)?,
        (None, None) => unreachable!("clap requires --t or --alpha"),
    };
    let mut table = Table::new(&["t", "survival", "tail_mean", "tail_root"]);
    table.push(vec![
        moment.threshold.into(),
        chi2::survival(moment.threshold)?.into(),
        moment.tail_mean.into(),
        moment.tail_root.into(),
    ]);
    let mut manifest = RunManifest::new("cte").param("format", format_name(output.format));
    manifest = match (t, alpha) {
        (Some(t), _) => manifest.param("t", t),
        (None, Some(alpha)) => manifest.param("alpha", alpha),
        (None, None) => manifest,
    };
    emit(&table, output.format, output.out.as_deref(), &manifest)
}
