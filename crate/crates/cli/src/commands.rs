use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anchova::equivalence::{verify_bound_sweep, write_reports_csv};
use anchova::random::{random_function, sample_rng, RandomFunctionSpec};
use anchova::weights::{classify_equivalence, classify_schedule, interpolate_constant, Regime, RegimeReport};
use anchova::{
    anchored_components, anchored_norm, anchored_reconstruct, anova_components, anova_norm, anova_reconstruct,
    measure_ratio, witness_function, witness_norms_closed, PExponent, TensorFunction,
};
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::args::{Command, Family, WeightArgs};
use crate::CliError;

/// Absolute pointwise tolerance of the verify round trips.
const ROUNDTRIP_TOL: f64 = 1e-9;
const ROUNDTRIP_POINTS: usize = 100;

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Constants { weights, d, p, output } => constants(&weights, weights.dims(d)?, &p, output),
        Command::Decompose { function, output } => decompose(&function, output),
        Command::Norms {
            function,
            weights,
            p,
            output,
        } => norms(&function, &weights, &p, output),
        Command::Witness { weights, d, p, output } => witness(&weights, weights.dims(d)?, &p, output),
        Command::Classify {
            weights,
            p,
            d_max,
            output,
        } => classify(&weights, &p, d_max, output),
        Command::Verify {
            weights,
            d,
            p,
            samples,
            seed,
            output,
        } => verify(&weights, d.iter().collect(), &p, samples, seed, output),
    }
}

/// Shortest round-trip decimal, switching to exponent form outside
/// `[1e-5, 1e16)` so tiny values stay short.
fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn sink(output: Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match output {
        Some(path) => Box::new(BufWriter::new(
            File::create(&path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_function(path: &Path) -> Result<TensorFunction, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(TensorFunction::from_json(&text)?)
}

fn csv_writer(output: Option<PathBuf>) -> Result<csv::Writer<Box<dyn Write>>, CliError> {
    Ok(csv::Writer::from_writer(sink(output)?))
}

fn constants(weights: &WeightArgs, dims: Vec<usize>, ps: &[PExponent], output: Option<PathBuf>) -> Result<(), CliError> {
    let mut header = vec!["d".to_string(), "c1".into(), "cinf".into()];
    header.extend(ps.iter().map(|p| format!("cdp_{p}")));
    let mut rows = Vec::with_capacity(dims.len());
    for d in dims {
        let w = weights.schedule(d)?;
        let (c1, cinf) = (w.constant_c1()?, w.constant_cinf()?);
        let mut row = vec![d.to_string(), num(c1), num(cinf)];
        row.extend(ps.iter().map(|&p| num(interpolate_constant(c1, cinf, p))));
        rows.push(row);
    }
    let mut out = csv_writer(output)?;
    out.write_record(&header)?;
    for row in rows {
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

fn decompose(function: &Path, output: Option<PathBuf>) -> Result<(), CliError> {
    let f = read_function(function)?;
    let doc = json!({
        "dim": f.dim(),
        "anchored": anchored_components(&f)?,
        "anova": anova_components(&f)?,
    });
    let mut out = sink(output)?;
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn norms(function: &Path, weights: &WeightArgs, ps: &[PExponent], output: Option<PathBuf>) -> Result<(), CliError> {
    let f = read_function(function)?;
    let w = weights.schedule(f.dim())?;
    let reports = ps.iter().map(|&p| measure_ratio(&f, &w, p)).collect::<Result<Vec<_>, _>>()?;
    let mut out = sink(output)?;
    write_reports_csv(&mut out, &reports)?;
    out.flush()?;
    Ok(())
}

fn rel_delta(closed: f64, pipeline: f64) -> f64 {
    if closed == 0.0 {
        pipeline.abs()
    } else {
        (pipeline - closed).abs() / closed.abs()
    }
}

fn witness(weights: &WeightArgs, dims: Vec<usize>, ps: &[PExponent], output: Option<PathBuf>) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for d in dims {
        let gammas = weights.gammas(d)?;
        let w = weights.schedule(d)?;
        let f = witness_function(&gammas)?;
        for &p in ps {
            let (anch_closed, anova_closed) = witness_norms_closed(&gammas, p);
            let anch = anchored_norm(&f, &w, p)?;
            let anova = anova_norm(&f, &w, p)?;
            rows.push([
                d.to_string(),
                p.to_string(),
                num(anch_closed),
                num(anch),
                num(rel_delta(anch_closed, anch)),
                num(anova_closed),
                num(anova),
                num(rel_delta(anova_closed, anova)),
                num(anova / anch),
                num(w.constant_cdp(p)?),
            ]);
        }
    }
    let mut out = csv_writer(output)?;
    out.write_record([
        "d",
        "p",
        "anch_closed",
        "anch_pipeline",
        "anch_rel_delta",
        "anova_closed",
        "anova_pipeline",
        "anova_rel_delta",
        "ratio",
        "c_dp",
    ])?;
    for row in rows {
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn classify(weights: &WeightArgs, ps: &[PExponent], d_max: usize, output: Option<PathBuf>) -> Result<(), CliError> {
    let reports: Vec<(PExponent, RegimeReport)> = ps
        .iter()
        .map(|&p| {
            let report = match weights.family {
                Family::Product => classify_equivalence(&weights.gammas(d_max)?, p, d_max)?,
                Family::Explicit => {
                    return Err(CliError::Config("an explicit weight table has no regime".into()));
                }
                _ => classify_schedule(&weights.schedule(d_max.clamp(1, anchova::weights::MAX_DIM))?, p, d_max)?,
            };
            Ok((p, report))
        })
        .collect::<Result<_, CliError>>()?;
    let mut out = csv_writer(output)?;
    out.write_record([
        "p",
        "regime",
        "exponent",
        "sharp",
        "confidence",
        "partial_sum",
        "tail_sum",
        "tau_zero",
        "tau_maximizer",
    ])?;
    for (p, r) in reports {
        let (name, exponent, sharp) = match r.regime {
            Regime::Uniform => ("uniform", None, None),
            Regime::Polynomial { exponent, sharp } => ("polynomial", Some(exponent), Some(sharp)),
            Regime::Divergent => ("divergent", None, None),
        };
        let confidence = serde_json::to_value(r.confidence)?;
        out.write_record([
            p.to_string(),
            name.to_string(),
            opt(exponent),
            sharp.map(|s| s.to_string()).unwrap_or_default(),
            confidence.as_str().unwrap_or_default().to_string(),
            opt(r.partial_sum),
            opt(r.tail_sum),
            opt(r.tau_zero.map(|t| t.value)),
            r.tau_zero.map(|t| t.maximizer.to_string()).unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Largest `|g(x) - f(x)|` over `n` points drawn from `rng`.
fn max_deviation<R: Rng>(rng: &mut R, f: &TensorFunction, g: &TensorFunction, n: usize) -> f64 {
    let mut x = vec![0.0; f.dim()];
    (0..n)
        .map(|_| {
            x.iter_mut().for_each(|xi| *xi = rng.gen());
            (g.eval(&x) - f.eval(&x)).abs()
        })
        .fold(0.0, f64::max)
}

fn verify(
    weights: &WeightArgs,
    dims: Vec<usize>,
    ps: &[PExponent],
    samples: usize,
    seed: u64,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let spec = RandomFunctionSpec::default();
    let mut out = csv_writer(output)?;
    out.write_record(["d", "check", "sample", "p", "value", "limit", "pass"])?;
    let (mut checks, mut failures) = (0usize, 0usize);
    let mut record = |out: &mut csv::Writer<_>, row: [String; 7], pass: bool| -> Result<(), CliError> {
        checks += 1;
        failures += usize::from(!pass);
        out.write_record(row)?;
        Ok(())
    };
    for d in dims {
        let w = weights.schedule(d)?;
        // Round trips use the functions of the bound sweep; evaluation points
        // continue each sample's stream.
        let trips = (0..samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(seed, i as u64);
                let f = random_function(&mut rng, d, &spec);
                let anch = anchored_reconstruct(&anchored_components(&f)?);
                let anova = anova_reconstruct(&anova_components(&f)?);
                Ok((
                    max_deviation(&mut rng, &f, &anch, ROUNDTRIP_POINTS),
                    max_deviation(&mut rng, &f, &anova, ROUNDTRIP_POINTS),
                ))
            })
            .collect::<Result<Vec<_>, anchova::Error>>()?;
        for (i, (anch, anova)) in trips.into_iter().enumerate() {
            for (name, dev) in [("roundtrip_anchored", anch), ("roundtrip_anova", anova)] {
                let pass = dev <= ROUNDTRIP_TOL;
                let row = [
                    d.to_string(),
                    name.into(),
                    i.to_string(),
                    String::new(),
                    num(dev),
                    num(ROUNDTRIP_TOL),
                    pass.to_string(),
                ];
                record(&mut out, row, pass)?;
            }
        }
        let sweep = verify_bound_sweep(&w, ps, samples, seed)?;
        for r in &sweep.records {
            let row = [
                d.to_string(),
                "bound".into(),
                r.sample.to_string(),
                r.report.p.to_string(),
                num(r.report.max_ratio()),
                num(r.report.bound_cdp),
                r.report.bound_satisfied.to_string(),
            ];
            record(&mut out, row, r.report.bound_satisfied)?;
        }
    }
    out.flush()?;
    eprintln!("verify: {checks} checks, {failures} failed");
    if failures > 0 {
        return Err(CliError::Verification(format!("{failures} of {checks} checks failed")));
    }
    Ok(())
}
