use std::path::PathBuf;
use std::process::ExitCode;

use bicouple::error::CliError;
use bicouple::{execute_plan, output, presets, Plan, Report, RunConfig};
use bicouple_core::Summation;
use clap::{Args, Parser, Subcommand};

const DEFAULT_OUT: &str = "bicouple-out";

#[derive(Parser)]
#[command(name = "bicouple", version, about = "Bi-domain diffusion coupling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a configuration file and write CSV artifacts.
    Run {
        #[command(flatten)]
        source: Source,
        /// Output directory (default: $BICOUPLE_OUT, then ./bicouple-out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write profile.svg.
        #[arg(long)]
        plot: bool,
        /// Compensated summation for the mass audit.
        #[arg(long)]
        kahan: bool,
    },
    /// List the preset catalogue.
    ListPresets,
    /// Run a preset and report tolerance verdicts without writing files.
    Check {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        kahan: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn load(source: &Source) -> Result<Plan, CliError> {
    if let Some(name) = &source.preset {
        return Ok(Plan::from_preset(name)?);
    }
    let path = source.config.as_ref().expect("clap enforces one source");
    let text = std::fs::read_to_string(path).map_err(|e| bicouple::ConfigError::Unreadable {
        path: path.clone(),
        message: e.to_string(),
    })?;
    let config = RunConfig::from_json(&text)?;
    Plan::from_config(&config).map_err(|e| bicouple::config::locate(e, &text).into())
}

fn print_report(plan: &Plan, report: &Report) {
    println!("{} ({} run(s))", plan.name, report.results.len());
    println!("{:<24} {:>24} {:>24} {:>24}", "coupling", "C0bar", "CTbar", "abs_drift");
    for r in &report.results {
        println!(
            "{:<24} {:>24} {:>24} {:>24}",
            r.spec.label,
            output::fmt_num(r.c0bar),
            output::fmt_num(r.ctbar),
            output::fmt_num(r.abs_drift())
        );
    }
    for v in &report.verdicts {
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!("{tag}  {}  (measured {})", v.check, v.measured);
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::ListPresets => {
            for p in presets::all_presets() {
                println!("{:<22} {}", p.name, p.description);
            }
            Ok(0)
        }
        Command::Check { preset, kahan } => {
            let mut plan = Plan::from_preset(&preset)?;
            if kahan {
                plan.summation = Summation::Compensated;
            }
            let report = execute_plan(&plan)?;
            print_report(&plan, &report);
            Ok(report.exit_code())
        }
        Command::Run {
            source,
            out,
            plot,
            kahan,
        } => {
            let mut plan = load(&source)?;
            if kahan {
                plan.summation = Summation::Compensated;
            }
            let dir = out
                .or_else(|| plan.output_dir.clone())
                .or_else(|| std::env::var_os("BICOUPLE_OUT").map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
            let report = execute_plan(&plan)?;
            output::emit_outputs(&dir, &report.results, plot || plan.plot)?;
            print_report(&plan, &report);
            println!("artifacts written to {}", dir.display());
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = execute(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
