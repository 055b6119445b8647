use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use gennorm::estimation::sample_score;
use gennorm::verify::{run_suite, Suite, VerifyOptions};
use gennorm::{
    fisher_closed_form, fisher_mc_score_variance, fisher_quad_neg_hessian,
    fisher_quad_score_variance, mle_theta, FisherEstimate, FisherMethod, GenNormParams,
};

use crate::record::{Cell, Format, Metadata, OutputRecord, Table};
use crate::{Common, UsageError};

/// Rendered command output; `passed` is false only for failed verification.
pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn params(common: &Common) -> anyhow::Result<GenNormParams> {
    Ok(GenNormParams::new(common.theta, common.beta)?)
}

fn render_table(common: &Common, table: &Table, record: OutputRecord) -> String {
    match common.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => record.output("rows", table.to_json()).to_json(),
    }
}

#[derive(Debug, Args)]
pub struct PdfArgs {
    /// Left end of the grid.
    #[arg(long, allow_hyphen_values = true)]
    min: Option<f64>,
    /// Right end of the grid.
    #[arg(long, allow_hyphen_values = true)]
    max: Option<f64>,
    /// Number of equally spaced grid points (>= 2).
    #[arg(long)]
    count: Option<usize>,
    /// Explicit evaluation points, comma separated (instead of a grid).
    #[arg(long = "x", value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["min", "max", "count"])]
    points: Vec<f64>,
}

fn grid(args: &PdfArgs) -> anyhow::Result<Vec<f64>> {
    if !args.points.is_empty() {
        return Ok(args.points.clone());
    }
    let (Some(min), Some(max), Some(count)) = (args.min, args.max, args.count) else {
        return Err(usage("pdf needs either --x or all of --min, --max, --count"));
    };
    if count < 2 || !min.is_finite() || !max.is_finite() || min >= max {
        return Err(usage(format!(
            "grid needs count >= 2 and finite min < max (got min={min}, max={max}, count={count})"
        )));
    }
    let step = (max - min) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i + 1 == count { max } else { min + i as f64 * step })
        .collect())
}

pub fn pdf(common: &Common, args: &PdfArgs) -> anyhow::Result<Output> {
    let p = params(common)?;
    let xs = grid(args)?;
    let mut table = Table::new(&["x", "pdf", "log_pdf"]);
    for &x in &xs {
        let log_pdf = p.log_pdf(x)?;
        table.push(vec![x.into(), log_pdf.exp().into(), log_pdf.into()]);
    }
    let record = OutputRecord::new("pdf", Metadata::new(None))
        .input("theta", p.theta())
        .input("beta", p.beta())
        .input("x", &xs);
    Ok(Output::ok(render_table(common, &table, record)))
}

#[derive(Debug, Args)]
pub struct FisherArgs {
    /// Comma-separated methods, or `all` (closed_form only for even integer β).
    #[arg(long, value_delimiter = ',', default_value = "all")]
    methods: Vec<String>,
    /// Monte Carlo sample size.
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
}

fn selected_methods(args: &FisherArgs, p: &GenNormParams) -> anyhow::Result<Vec<FisherMethod>> {
    if args.methods.is_empty() {
        return Err(usage("at least one method is required"));
    }
    if args.methods.iter().any(|m| m == "all") {
        if args.methods.len() > 1 {
            return Err(usage("`all` cannot be combined with other methods"));
        }
        return Ok(FisherMethod::ALL
            .into_iter()
            .filter(|m| *m != FisherMethod::ClosedForm || p.even_shape().is_some())
            .collect());
    }
    let mut methods = Vec::new();
    for name in &args.methods {
        let m: FisherMethod = name.parse().map_err(|e: gennorm::Error| usage(e.to_string()))?;
        if m == FisherMethod::ClosedForm && p.even_shape().is_none() {
            return Err(usage(format!(
                "closed_form needs an even positive integer beta, got {}",
                p.beta()
            )));
        }
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    Ok(methods)
}

pub fn fisher(common: &Common, args: &FisherArgs) -> anyhow::Result<Output> {
    let p = params(common)?;
    let methods = selected_methods(args, &p)?;
    let mut table = Table::new(&["method", "value", "error_estimate"]);
    for m in &methods {
        let est: FisherEstimate = match m {
            FisherMethod::ClosedForm => fisher_closed_form(&p)?,
            FisherMethod::QuadScoreVariance => fisher_quad_score_variance(&p, common.tol)?,
            FisherMethod::QuadNegHessian => fisher_quad_neg_hessian(&p, common.tol)?,
            FisherMethod::McScoreVariance => fisher_mc_score_variance(&p, args.n, common.seed)?,
        };
        table.push(vec![m.name().into(), est.value.into(), est.error_estimate.into()]);
    }
    let uses_mc = methods.contains(&FisherMethod::McScoreVariance);
    let record = OutputRecord::new(
        "fisher",
        Metadata::new(uses_mc.then_some(common.seed)).tolerance("quad_rel_tol", common.tol),
    )
    .input("theta", p.theta())
    .input("beta", p.beta())
    .input("methods", methods.iter().map(|m| m.name()).collect::<Vec<_>>())
    .input("n", args.n);
    Ok(Output::ok(render_table(common, &table, record)))
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    /// Comma-separated moment orders.
    #[arg(long = "k", value_delimiter = ',', required = true)]
    orders: Vec<u32>,
}

pub fn moments(common: &Common, args: &MomentsArgs) -> anyhow::Result<Output> {
    let p = params(common)?;
    let mut table = Table::new(&["k", "value"]);
    for &k in &args.orders {
        table.push(vec![Cell::Int(u64::from(k)), p.moment(k)?.into()]);
    }
    let record = OutputRecord::new("moments", Metadata::new(None))
        .input("theta", p.theta())
        .input("beta", p.beta())
        .input("k", &args.orders);
    Ok(Output::ok(render_table(common, &table, record)))
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Sample file: one number per line, blank lines ignored.
    #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
    input: Option<PathBuf>,
    /// Draw the sample from the distribution given by --theta, --beta, --seed.
    #[arg(long)]
    generate: bool,
    /// Size of the generated sample.
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
}

pub fn read_samples(text: &str) -> anyhow::Result<Vec<f64>> {
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| usage(format!("line {}: cannot parse '{line}' as a number", i + 1)))?;
        samples.push(v);
    }
    if samples.is_empty() {
        return Err(usage("sample input contains no numbers"));
    }
    Ok(samples)
}

pub fn estimate(common: &Common, args: &EstimateArgs) -> anyhow::Result<Output> {
    let beta = common.beta;
    let mut record;
    let samples = match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            record = OutputRecord::new("estimate", Metadata::new(None))
                .input("input", path.display().to_string());
            read_samples(&text)?
        }
        None => {
            let p = params(common)?;
            record = OutputRecord::new("estimate", Metadata::new(Some(common.seed)))
                .input("theta", p.theta())
                .input("n", args.n);
            p.sample(args.n, common.seed)?
        }
    };
    let theta_hat = mle_theta(&samples, beta).context("maximum-likelihood estimate")?;
    let residual = sample_score(&samples, &GenNormParams::new(theta_hat, beta)?);
    record = record
        .input("beta", beta)
        .output("theta_hat", theta_hat)
        .output("score_residual", residual)
        .output("sample_size", samples.len());
    record.metadata = record
        .metadata
        .tolerance("stationarity", gennorm::estimation::STATIONARITY_TOL);
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => record.to_json(),
        Format::Csv => record.to_csv(),
    };
    Ok(Output::ok(text))
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// lemma2, theorem1, equivalence or crlb.
    #[arg(long)]
    suite: String,
    /// Samples per trial (crlb).
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Number of trials (crlb).
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Monte Carlo sample size (theorem1).
    #[arg(long, default_value_t = 1_000_000)]
    mc_samples: usize,
}

pub fn verify(common: &Common, args: &VerifyArgs) -> anyhow::Result<Output> {
    let suite: Suite = args
        .suite
        .parse()
        .map_err(|e: gennorm::Error| usage(e.to_string()))?;
    let beta = common.beta;
    if suite == Suite::Crlb && !(beta.fract() == 0.0 && beta > 0.0 && (beta as u64).is_multiple_of(2)) {
        return Err(usage(format!(
            "crlb suite needs an even positive integer --beta, got {beta}"
        )));
    }
    let opts = VerifyOptions {
        quad_tol: common.tol,
        mc_samples: args.mc_samples,
        seed: common.seed,
        beta: beta as u64,
        theta: common.theta,
        n: args.n,
        trials: args.trials,
    };
    let checks = run_suite(suite, &opts)?;
    let passed = checks.iter().all(|c| c.passed);
    let text = match common.format {
        None => {
            let mut s: String = checks.iter().map(|c| format!("{c}\n")).collect();
            let failed = checks.iter().filter(|c| !c.passed).count();
            s.push_str(&format!(
                "{}: {} checks, {failed} failed\n",
                if passed { "PASS" } else { "FAIL" },
                checks.len()
            ));
            s
        }
        Some(Format::Csv) => {
            let mut t = Table::new(&["check", "observed", "expected", "tolerance", "kind", "passed"]);
            for c in &checks {
                let kind = serde_json::to_value(c.kind)?;
                t.push(vec![
                    c.name.as_str().into(),
                    c.observed.into(),
                    c.expected.into(),
                    c.tolerance.into(),
                    kind.as_str().unwrap_or_default().into(),
                    c.passed.into(),
                ]);
            }
            t.to_csv()
        }
        Some(Format::Json) => OutputRecord::new(
            "verify",
            Metadata::new(Some(common.seed)).tolerance("quad_rel_tol", common.tol),
        )
        .input("suite", suite.name())
        .output("passed", passed)
        .output("checks", &checks)
        .to_json(),
    };
    Ok(Output { text, passed })
}
