use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use pcm_efficiency::extension::{
    conjugated_extension, constant_row_sum_extension, ExtensionReport,
};
use pcm_efficiency::io::{format_matrix, load_matrix, load_vector, save_report};
use pcm_efficiency::sweep::{grid_sweep, DEFAULT_AXIS};
use pcm_efficiency::verify::{run_logged, verify_suite, SuiteConfig, SUITES};
use pcm_efficiency::zfamily::{
    guarantee_n5plus, sink_characterization_with, table_oracle, z_matrix, ZParams,
};
use pcm_efficiency::{analyze, reference, Error, ReciprocityMode, DEFAULT_EPS_REL};

#[derive(Parser)]
#[command(
    name = "pcm-eff",
    version,
    about = "Efficiency of Perron vectors of reciprocal matrices"
)]
struct Cli {
    /// Relative tolerance for digraph edges.
    #[arg(long, global = true, env = "RECIP_EPS", default_value_t = DEFAULT_EPS_REL)]
    eps: f64,
    /// Rebuild the lower triangle from the upper one instead of validating it.
    #[arg(long, global = true)]
    symmetrize: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Efficiency report for a matrix and a vector (Perron vector by default).
    Analyze {
        matrix: PathBuf,
        #[arg(long)]
        vector: Option<PathBuf>,
        /// Write the JSON here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Report and region verdict for Z_n(x, y, z, a).
    Z {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        z: f64,
        #[arg(long)]
        a: f64,
    },
    /// Grid sweep of Z_n over axis^4, as CSV.
    Sweep {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_AXIS.to_vec())]
        axis: Vec<f64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// One-column extension of a matrix.
    Extend {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::ConstantRowSum)]
        method: Method,
        /// Conjugate by diag(d1, ..., dn) first and map the extension back.
        #[arg(long, value_delimiter = ',')]
        conjugate_diag: Option<Vec<f64>>,
        /// Also write the extended matrix as CSV.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
    },
    /// Runs a verification suite; exits 1 on any failure.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// The 5x5 worked example end to end, with pass/fail marks.
    ExampleEe1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    ConstantRowSum,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print_json(value: &serde_json::Value) -> pcm_efficiency::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> pcm_efficiency::Result<ExitCode> {
    if !(0.0..1.0).contains(&cli.eps) {
        return Err(Error::InvalidParams(format!(
            "eps must lie in [0, 1), got {}",
            cli.eps
        )));
    }
    let mode = if cli.symmetrize {
        ReciprocityMode::Symmetrize
    } else {
        ReciprocityMode::validate()
    };
    match cli.command {
        Command::Analyze {
            matrix,
            vector,
            output,
        } => {
            let a = load_matrix(matrix, mode)?;
            let w = vector.map(load_vector).transpose()?;
            let report = analyze(&a, w.as_ref(), cli.eps)?.to_json();
            match output {
                Some(path) => save_report(&report, path)?,
                None => print_json(&report)?,
            }
        }
        Command::Z { n, x, y, z, a } => {
            let p = ZParams::new(n, x, y, z, a)?;
            let report = analyze(&z_matrix(&p), None, cli.eps)?;
            let table = table_oracle(&p).map(|m| {
                json!({
                    "table": m.row.table,
                    "relation": m.row.relation,
                    "symmetry": m.symmetry.label(),
                    "efficient": m.row.efficient,
                    "possible_source": m.possible_source.map(|v| v + 1),
                    "possible_sink": m.possible_sink.map(|v| v + 1),
                })
            });
            print_json(&json!({
                "params": p,
                "report": report.to_json(),
                "region": guarantee_n5plus(&p).ok(),
                "sink_check": sink_characterization_with(&p, cli.eps)?,
                "table_row": table,
            }))?;
        }
        Command::Sweep { n, axis, output } => {
            match output {
                Some(path) => grid_sweep(n, &axis, cli.eps, Some(File::create(path)?))?,
                None => grid_sweep(n, &axis, cli.eps, Some(io::stdout().lock()))?,
            };
        }
        Command::Extend {
            matrix,
            method: Method::ConstantRowSum,
            conjugate_diag,
            matrix_out,
        } => {
            let a = load_matrix(matrix, mode)?;
            let (b, s) = match conjugate_diag {
                Some(d) => {
                    let c = conjugated_extension(&a, &d)?;
                    (c.matrix, c.inner.target_sum)
                }
                None => {
                    let e = constant_row_sum_extension(&a)?;
                    (e.matrix, e.target_sum)
                }
            };
            if let Some(path) = matrix_out {
                std::fs::write(path, format_matrix(&b))?;
            }
            print_json(&serde_json::to_value(ExtensionReport::evaluate(
                &a, &b, s,
            )?)?)?;
        }
        Command::Verify { suite, seed } => {
            let mut config = SuiteConfig::default();
            if let Some(seed) = seed {
                config.seed = seed;
            }
            let Some(summary) = verify_suite(&suite, &config) else {
                return Err(Error::InvalidParams(format!(
                    "unknown suite {suite:?}; expected all or one of {}",
                    SUITES.join(", ")
                )));
            };
            print_json(&serde_json::to_value(&summary)?)?;
            if !summary.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::ExampleEe1 => return example_ee1(cli.eps),
    }
    Ok(ExitCode::SUCCESS)
}

fn example_ee1(eps: f64) -> pcm_efficiency::Result<ExitCode> {
    let b = reference::matrix_b();
    let w = pcm_efficiency::perron(&b)?;
    let conj = conjugated_extension(&b, &reference::D_DIAG)?;
    let ext = constant_row_sum_extension(&reference::printed_b_prime())?;
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:.6}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    println!("W  = [{}]  (r = {:.6})", fmt(w.vector.as_slice()), w.value);
    println!("B' = D B D^-1:");
    print!("{}", format_matrix(&conj.conjugated));
    println!("s (printed B') = {:.10}", ext.target_sum);
    println!("s (computed B') = {:.10}", conj.inner.target_sum);
    println!("V  = [{}]", fmt(conj.perron_vector.as_slice()));
    let config = SuiteConfig {
        eps_rel: eps,
        ..SuiteConfig::default()
    };
    let log = run_logged("example", &config).expect("example suite exists");
    let mut failed = false;
    for c in &log {
        failed |= !c.passed;
        let mark = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            println!("[{mark}] {}", c.id);
        } else {
            println!("[{mark}] {}: {}", c.id, c.detail);
        }
    }
    Ok(if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}
