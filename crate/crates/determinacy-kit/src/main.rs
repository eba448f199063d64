use clap::Parser;
use determinacy_kit::job::{self, Command, RunError, RunOverrides};
use determinacy_kit::orbit::OrbitMethod;
use std::path::PathBuf;
use std::process::ExitCode;

/// Finite determinacy and jet-orbit computations for matrices of power series.
#[derive(Parser, Debug)]
#[command(name = "determinacy-kit", version, about)]
struct Cli {
    /// Command to run; must match the job file's `command` when both are given
    command: Option<String>,

    /// Job file (line-oriented key/value or JSON)
    #[arg(long, conflicts_with = "jobs_dir")]
    job: Option<PathBuf>,

    /// Directory of job files to run in sorted order
    #[arg(long)]
    jobs_dir: Option<PathBuf>,

    /// Cross-check orbit-codim/separability with the other method
    #[arg(long)]
    verify: bool,

    /// Override the jet level k
    #[arg(long)]
    jet_level: Option<u32>,

    /// Orbit codimension method
    #[arg(long, value_parser = parse_method)]
    orbit_method: Option<OrbitMethod>,

    /// Report format
    #[arg(long, default_value = "text", value_parser = ["text", "structured"])]
    output: String,
}

fn parse_method(s: &str) -> Result<OrbitMethod, String> {
    match s {
        "eliminate" => Ok(OrbitMethod::Eliminate),
        "stabilizer" => Ok(OrbitMethod::Stabilizer),
        other => Err(format!("unknown method `{other}`")),
    }
}

fn run_one(path: &PathBuf, cli: &Cli) -> Result<(), RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let mut parsed = job::parse_job(&text)?;
    if let Some(cmd) = &cli.command {
        let cmd = Command::parse(cmd)
            .ok_or_else(|| RunError::Validation(format!("unknown command `{cmd}`")))?;
        if parsed.command != cmd && cli.jobs_dir.is_none() {
            // A single explicit job runs the command named on the command line.
            parsed.command = cmd;
        } else if parsed.command != cmd {
            return Err(RunError::Validation(format!(
                "{}: job command `{}` does not match requested `{}`",
                path.display(),
                parsed.command.name(),
                cmd.name()
            )));
        }
    }
    let overrides = RunOverrides {
        verify: cli.verify,
        jet_level: cli.jet_level,
        orbit_method: cli.orbit_method,
    };
    let report = job::run_job(&parsed, &overrides)?;
    if cli.output == "structured" {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        print!("{}", job::render_text(&report));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs: Vec<PathBuf> = if let Some(dir) = &cli.jobs_dir {
        match std::fs::read_dir(dir) {
            Ok(entries) => {
                let mut files: Vec<PathBuf> = entries
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.is_file())
                    .collect();
                files.sort();
                files
            }
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", dir.display());
                return ExitCode::from(2);
            }
        }
    } else if let Some(job) = &cli.job {
        vec![job.clone()]
    } else {
        eprintln!("error: pass --job <file> or --jobs-dir <dir>");
        return ExitCode::from(2);
    };

    let mut worst = 0i32;
    for path in &jobs {
        if jobs.len() > 1 {
            println!("== {} ==", path.display());
        }
        if let Err(e) = run_one(path, &cli) {
            if cli.output == "structured" {
                let report = serde_json::json!({
                    "error": e.to_string(),
                    "exit_code": e.exit_code(),
                });
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            }
            eprintln!("error: {e}");
            worst = worst.max(e.exit_code());
        }
    }
    ExitCode::from(worst as u8)
}
