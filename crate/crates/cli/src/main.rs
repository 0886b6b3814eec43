mod args;
mod output;

use std::fs;
use std::process::ExitCode;

use clap::Parser;
use drzero::acceptance::verify_all;
use drzero::baselines::run_comparison;
use drzero::basin::{estimate_rate, scan_with_trajectories, GridSpec};
use drzero::douglas_rachford::iterate;
use drzero::lyapunov::check_trajectory;
use drzero::projection::project_graph;
use drzero::stability::stability_report;
use drzero::{Error, FunctionModel, ProductPoint};

use args::{Cli, Command, Format};
use output::Sink;

/// A failure with its exit code: 1 for invalid input, 2 for numerical failure.
struct Failure {
    kind: String,
    message: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            kind: e.kind().to_string(),
            message: e.to_string(),
            code: if e.is_numerical() { 2 } else { 1 },
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<Error>() {
            Ok(e) => e.into(),
            Err(e) => Failure {
                kind: "IoError".into(),
                message: format!("{e:#}"),
                code: 1,
            },
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        kind: "UsageError".into(),
        message: message.into(),
        code: 1,
    }
}

fn load_family(spec: &str) -> Result<FunctionModel, Failure> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        fs::read_to_string(spec).map_err(|e| usage(format!("cannot read family file {spec}: {e}")))?
    };
    Ok(FunctionModel::from_json(&text)?)
}

fn point(x: &[f64], rho: f64) -> ProductPoint {
    ProductPoint::new(x.to_vec(), rho)
}

fn nearest_zero(m: &FunctionModel, x: &[f64]) -> Result<ProductPoint, Failure> {
    let dist = |z: &Vec<f64>| z.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    m.known_zeros()
        .into_iter()
        .min_by(|a, b| dist(a).total_cmp(&dist(b)))
        .map(|z| ProductPoint::new(z, 0.0))
        .ok_or_else(|| usage("the function has no known zero; pass --target"))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve { common, start, selection } => {
            let m = load_family(&common.family_json)?;
            let cfg = config(common.numeric_config())?;
            let t = iterate(&m, &point(&start.x0, start.rho0), &cfg, selection.into())?;
            let sink = Sink::new(&common.output);
            match common.output.format.unwrap_or(Format::Csv) {
                Format::Csv => sink.write_csv(output::trajectory_csv(&t))?,
                Format::Json => sink.write_json(&t)?,
            }
        }
        Command::Project { common, x, rho } => {
            let m = load_family(&common.family_json)?;
            let cfg = config(common.numeric_config())?;
            let p = project_graph(&m, &x, rho, &cfg)?;
            Sink::new(&common.output).write_json(&p)?;
        }
        Command::Stability { common, xbar, rhobar } => {
            let m = load_family(&common.family_json)?;
            config(common.numeric_config())?;
            let r = stability_report(&m, &point(&xbar, rhobar))?;
            Sink::new(&common.output).write_json(&r)?;
        }
        Command::Lyapunov { common, start } => {
            let m = load_family(&common.family_json)?;
            let cfg = config(common.numeric_config())?;
            let t = iterate(&m, &point(&start.x0, start.rho0), &cfg, Default::default())?;
            let c = check_trajectory(&m, &t)?;
            let sink = Sink::new(&common.output);
            match common.output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    sink.write_csv(output::lyapunov_csv(&t, &c))?;
                    eprintln!("{}", output::lyapunov_verdict(&c));
                }
                Format::Json => sink.write_json(&c)?,
            }
        }
        Command::Compare { common, start } => {
            let m = load_family(&common.family_json)?;
            let cfg = config(common.numeric_config())?;
            let r = run_comparison(&m, &point(&start.x0, start.rho0), &cfg)?;
            Sink::new(&common.output).write_json(&r)?;
            eprint!("{}", output::verdict_table(&r));
        }
        Command::Basin(b) => {
            let m = load_family(&b.family_json)?;
            let cfg = config(b.numeric.to_config())?;
            let (nx, nrho) = b.resolution;
            let spec = GridSpec {
                x_range: b.x_range,
                rho_range: b.rho_range,
                nx,
                nrho,
                tol: b.tol,
            };
            spec.validate()?;
            let keep = if b.dump_trajectories.is_some() { b.dump_limit } else { 0 };
            let threads = std::env::var("DRZERO_THREADS")
                .ok()
                .map(|v| v.parse::<usize>().map_err(|_| usage(format!("DRZERO_THREADS must be a positive integer, got {v}"))))
                .transpose()?
                .unwrap_or(0);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| usage(format!("cannot start thread pool: {e}")))?;
            let (grid, kept) = pool.install(|| scan_with_trajectories(&m, &spec, &cfg, keep))?;
            let sink = Sink::new(&b.output);
            match b.output.format.unwrap_or(Format::Csv) {
                Format::Csv => sink.write_csv(output::basin_csv(&grid))?,
                Format::Json => sink.write_json(&grid)?,
            }
            if let Some(dir) = &b.dump_trajectories {
                output::dump_trajectories(dir, &kept)?;
            }
        }
        Command::Rate { common, start, target } => {
            let m = load_family(&common.family_json)?;
            let cfg = config(common.numeric_config())?;
            let t = iterate(&m, &point(&start.x0, start.rho0), &cfg, Default::default())?;
            let target = match target {
                Some(v) => {
                    let (rho, x) = v.split_last().ok_or_else(|| usage("--target needs x and rho"))?;
                    point(x, *rho)
                }
                None => nearest_zero(&m, &t.last().x)?,
            };
            let r = estimate_rate(&t, &target)?;
            Sink::new(&common.output).write_json(&r)?;
        }
        Command::VerifyAll { seed, output: out } => {
            let report = verify_all(seed);
            let sink = Sink::new(&out);
            match out.format {
                Some(Format::Json) => sink.write_json(&report)?,
                Some(Format::Csv) => sink.write_csv(output::acceptance_csv(&report))?,
                None => sink.write_text(&report.render())?,
            }
            return Ok(if report.all_passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            report(&usage(msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ")));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            report(&f);
            ExitCode::from(f.code)
        }
    }
}

fn report(f: &Failure) {
    let body = serde_json::json!({ "error": { "kind": f.kind, "message": f.message } });
    eprintln!("{body}");
}

fn config(cfg: drzero::NumericConfig) -> Result<drzero::NumericConfig, Failure> {
    cfg.validate()?;
    Ok(cfg)
}
