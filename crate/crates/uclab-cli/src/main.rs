use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "uclab", about = "Unique-continuation laboratory experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment
    Run {
        /// experiment name (see `uclab list`)
        name: String,
        /// JSON parameter file; omitted fields take their defaults
        #[arg(long)]
        config: Option<PathBuf>,
        /// output directory for CSV/SVG artifacts and the manifest
        #[arg(long, default_value = "uclab-out")]
        out: PathBuf,
        /// RNG seed for randomized suites
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// worker threads (0 = library default)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// List registered experiments with their parameter schemas
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for spec in uclab_cli::registry() {
                println!("{:<18} {}  [{}]", spec.name, spec.about, spec.expected_runtime);
                let schema = (spec.default_params)();
                println!("    defaults: {}", serde_json::to_string(&schema).unwrap());
            }
            ExitCode::SUCCESS
        }
        Command::Run { name, config, out, seed, jobs } => {
            let params = match config {
                None => serde_json::json!({}),
                Some(path) => match std::fs::read_to_string(&path) {
                    Err(e) => {
                        eprintln!("{}", error_json("config read failed", &e.to_string()));
                        return ExitCode::from(2);
                    }
                    Ok(text) => match serde_json::from_str(&text) {
                        Err(e) => {
                            eprintln!("{}", error_json("config parse failed", &e.to_string()));
                            return ExitCode::from(2);
                        }
                        Ok(v) => v,
                    },
                },
            };
            let run = || match uclab_cli::run_experiment(&name, params, &out, seed) {
                Err(msg) => {
                    eprintln!("{}", error_json("run failed", &msg));
                    ExitCode::from(2)
                }
                Ok(outcome) => {
                    for c in &outcome.checks {
                        println!(
                            "{}: {} — {}",
                            c.name,
                            if c.pass { "PASS" } else { "FAIL" },
                            c.detail
                        );
                    }
                    if outcome.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
            };
            if jobs > 0 {
                uclab::par::with_threads(jobs, run)
            } else {
                run()
            }
        }
    }
}

fn error_json(kind: &str, detail: &str) -> String {
    serde_json::json!({ "error": kind, "detail": detail }).to_string()
}
