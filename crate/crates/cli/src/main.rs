use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use prodsurf::harness::report::emit_grid_report;
use prodsurf::harness::sampling::{random_kadiyala_params, random_ves_params};
use prodsurf::harness::verify::{
    run_verify_theorem1_with, run_verify_theorem2_with, VerificationSummary, VerifyConfig,
};
use prodsurf::surface::{fundamental_forms, gaussian_curvature, DEFAULT_TOL_K};
use prodsurf::{
    curvature, CurvatureReport, DomainMode, GridReport, GridSpec, HeightField, KadiyalaParams,
    Model, ReportFormat, VesParams,
};
use serde_json::json;

/// Curvature of production-function surfaces.
#[derive(Debug, Parser)]
#[command(name = "prodsurf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Value, derivatives, fundamental forms and curvature at one point.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        /// Evaluation point as `u,v`.
        #[arg(long, value_parser = parse_point)]
        point: (f64, f64),
        #[arg(long, default_value_t = DEFAULT_TOL_K)]
        tol: f64,
    },
    /// Tabulate height and curvature over a grid.
    Grid {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Seed for the parameter draw when `--params` is absent.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL_K)]
        tol: f64,
    },
    /// Predicted curvature behavior of a parameter set, checked on a grid.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = DEFAULT_TOL_K)]
        tol: f64,
    },
    /// Randomized check of the VES returns-to-scale / curvature-sign result.
    #[command(name = "verify-t1")]
    VerifyT1 {
        #[command(flatten)]
        run: VerifyArgs,
        #[arg(long, default_value_t = 300)]
        trials: usize,
    },
    /// Randomized check of the Kadiyala flat-surface conditions.
    #[command(name = "verify-t2")]
    VerifyT2 {
        #[command(flatten)]
        run: VerifyArgs,
        /// Trials per flat-surface condition, and for the converse.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Named special case of a Kadiyala parameter set.
    Specialize {
        /// Kadiyala parameters as a JSON file or inline JSON.
        #[arg(long)]
        params: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Ves,
    Kadiyala,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Family,
    /// Parameters as a JSON file or inline JSON.
    #[arg(long)]
    params: Option<String>,
    /// Restrict VES to the region of positive elasticity of substitution.
    #[arg(long)]
    strict_domain: bool,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// `u_min,u_max,n_u,v_min,v_max,n_v[,lin|log]` or a JSON object.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_TOL_K)]
    tol: f64,
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let (u, v) = s.split_once(',').ok_or("expected u,v")?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((num(u)?, num(v)?))
}

fn read_json_arg(arg: &str) -> anyhow::Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return Ok(arg.to_owned());
    }
    let path = Path::new(arg);
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_params<T: serde::de::DeserializeOwned>(arg: &str) -> anyhow::Result<T> {
    let text = read_json_arg(arg)?;
    serde_json::from_str(&text).context("invalid parameters")
}

impl ModelArgs {
    fn domain(&self) -> DomainMode {
        if self.strict_domain {
            DomainMode::Strict
        } else {
            DomainMode::NonStrict
        }
    }

    fn required(&self) -> anyhow::Result<Model> {
        match &self.params {
            Some(p) => self.with_params(p),
            None => bail!("--params is required"),
        }
    }

    fn or_random(&self, seed: u64) -> anyhow::Result<Model> {
        match &self.params {
            Some(p) => self.with_params(p),
            None => Ok(match self.model {
                Family::Ves => Model::ves(random_ves_params(seed), self.domain()),
                Family::Kadiyala => Model::kadiyala(random_kadiyala_params(seed, None)),
            }),
        }
    }

    fn with_params(&self, arg: &str) -> anyhow::Result<Model> {
        Ok(match self.model {
            Family::Ves => Model::ves(parse_params::<VesParams>(arg)?, self.domain()),
            Family::Kadiyala => Model::kadiyala(parse_params::<KadiyalaParams>(arg)?),
        })
    }
}

impl GridArgs {
    fn spec(&self) -> anyhow::Result<GridSpec> {
        match &self.grid {
            Some(s) => s.parse().context("invalid grid"),
            None => Ok(GridSpec::default()),
        }
    }
}

fn check_tol(tol: f64) -> anyhow::Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        bail!("--tol must be a positive number, got {tol}");
    }
    Ok(())
}

enum Outcome {
    Success,
    VerificationFailed,
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn eval(model: &Model, (u, v): (f64, f64), tol: f64) -> anyhow::Result<()> {
    if !model.in_domain(u, v) {
        bail!("({u}, {v}) is outside the {} domain", model.name());
    }
    let jet = model.jet(u, v)?;
    let forms = fundamental_forms(&jet)?;
    let k = gaussian_curvature(&forms);
    let report = CurvatureReport::new(&forms, true, k.abs(), tol);
    print_json(&json!({
        "model": model,
        "u": u,
        "v": v,
        "f": jet.val,
        "gradient": jet.gradient(),
        "hessian": jet.hessian(),
        "first_form": [forms.g11, forms.g12, forms.g22],
        "second_form": [forms.h11, forms.h12, forms.h22],
        "normal": forms.normal(),
        "curvature": report,
    }))
}

fn classify(model: &Model, grid: &GridSpec, tol: f64) -> anyhow::Result<()> {
    let report = GridReport::build(model, grid, tol)?;
    let s = &report.summary;
    let family = match model {
        Model::Kadiyala { params } => Some(params.specialize()),
        Model::Ves { .. } => None,
    };
    print_json(&json!({
        "model": model,
        "verdict": s.verdict,
        "family": family,
        "grid": {
            "points": s.points,
            "invalid": s.invalid_count,
            "positive": s.positive,
            "zero": s.zero,
            "negative": s.negative,
            "max_abs_K": s.max_abs_k,
        },
    }))
}

fn report_summary(summary: &VerificationSummary) -> anyhow::Result<Outcome> {
    let mut err = io::stderr().lock();
    writeln!(
        err,
        "{}: {}/{} trials passed, {} points, worst closed-form deviation {:e}",
        summary.theorem,
        summary.passed,
        summary.trials,
        summary.points_checked,
        summary.worst_closed_deviation
    )?;
    if let Some(d) = summary.min_denominator {
        writeln!(
            err,
            "  smallest denominator {d:e}, positivity violations {}",
            summary.positivity_violations
        )?;
    }
    for s in &summary.strata {
        writeln!(err, "  {:<20} {}/{}", s.name, s.passed, s.trials)?;
    }
    for f in summary.failures.iter().take(5) {
        writeln!(err, "  trial {} ({}) {}", f.trial, f.stratum, f.params)?;
        for r in &f.reasons {
            writeln!(err, "    {r}")?;
        }
    }
    print_json(summary)?;
    Ok(if summary.all_passed() {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Eval { model, point, tol } => {
            check_tol(tol)?;
            eval(&model.required()?, point, tol)?;
        }
        Command::Grid {
            model,
            grid,
            format,
            seed,
            tol,
        } => {
            check_tol(tol)?;
            let report = GridReport::build(&model.or_random(seed)?, &grid.spec()?, tol)?;
            let mut out = BufWriter::new(io::stdout().lock());
            emit_grid_report(&report, format.into(), &mut out)?;
            out.flush()?;
        }
        Command::Classify { model, grid, tol } => {
            check_tol(tol)?;
            classify(&model.required()?, &grid.spec()?, tol)?;
        }
        Command::VerifyT1 { run, trials } => {
            check_tol(run.tol)?;
            let cfg = VerifyConfig {
                tol_k: run.tol,
                ..VerifyConfig::new(trials, run.seed, run.grid.spec()?)
            };
            return report_summary(&run_verify_theorem1_with(
                &cfg,
                curvature::ves_theorem1_verdict,
            ));
        }
        Command::VerifyT2 { run, trials } => {
            check_tol(run.tol)?;
            let cfg = VerifyConfig {
                tol_k: run.tol,
                ..VerifyConfig::new(trials, run.seed, run.grid.spec()?)
            };
            return report_summary(&run_verify_theorem2_with(
                &cfg,
                curvature::kadiyala_is_developable,
            ));
        }
        Command::Specialize { params } => {
            let p: KadiyalaParams = parse_params(&params)?;
            print_json(&p.specialize())?;
        }
    }
    Ok(Outcome::Success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
