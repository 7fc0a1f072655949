use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use curvatura::check::{self, CheckConfig};
use curvatura::figure::{self, FigureId};
use curvatura::{solve, Error, Kind};
use serde_json::Value;

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "curvatura", version, about = "Constant-curvature plane geometry: solve, check, draw")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Answer one JSON request (a file path, or `-` for stdin).
    Solve {
        input: String,
        /// Postcondition tolerance.
        #[arg(long, env = "CURVATURA_TOL")]
        tol: Option<f64>,
    },
    /// Run proposition suites and report failures.
    Check {
        /// Suite name or `all`; repeat to run several.
        #[arg(long = "suite", default_value = "all")]
        suites: Vec<String>,
        #[arg(long, default_value_t = check::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = check::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, env = "CURVATURA_TOL", default_value_t = curvatura::space::DEFAULT_TOL)]
        tol: f64,
        /// Restrict to one space; repeat for several.
        #[arg(long = "space", value_parser = parse_kind)]
        spaces: Vec<Kind>,
        /// Write the full JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// List suite names and exit.
        #[arg(long)]
        list: bool,
    },
    /// Draw a figure as SVG.
    Figure {
        #[arg(long)]
        id: String,
        /// JSON parameters with a `space` object (`-` for stdin).
        #[arg(long)]
        params: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    serde_json::from_value(Value::String(s.to_string()))
        .map_err(|_| format!("unknown space `{s}` (spherical, euclidean, hyperbolic)"))
}

fn read_input(src: &str) -> io::Result<String> {
    if src == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(src)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn print_json(v: &Value) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn cmd_solve(input: &str, tol: Option<f64>) -> u8 {
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("curvatura: cannot read {input}: {e}");
            return USAGE;
        }
    };
    let parsed = serde_json::from_str::<Value>(&text)
        .map_err(|e| Error::Schema(e.to_string()))
        .and_then(|v| solve::solve_with_tol(&v, tol));
    match parsed {
        Ok(v) => {
            print_json(&v);
            PASS
        }
        Err(e) => {
            print_json(&solve::schema_error(&e));
            eprintln!("curvatura: {e}");
            USAGE
        }
    }
}

fn cmd_check(cfg: CheckConfig, out: Option<PathBuf>) -> u8 {
    let report = match check::run_checks(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("curvatura: {e}");
            return USAGE;
        }
    };
    print!("{}", report.summary());
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&report.to_json()).expect("json") + "\n";
        if let Err(e) = write_file(&path, &text) {
            eprintln!("curvatura: {e}");
            return USAGE;
        }
    }
    if report.passed {
        PASS
    } else {
        FAIL
    }
}

fn cmd_figure(id: &str, params: &str, out: &Path) -> u8 {
    let parsed = FigureId::parse(id).and_then(|id| {
        let text = read_input(params).map_err(|e| Error::Schema(format!("cannot read {params}: {e}")))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
        figure::render(id, &v)
    });
    match parsed {
        Ok(svg) => match write_file(out, &svg) {
            Ok(()) => PASS,
            Err(e) => {
                eprintln!("curvatura: {e}");
                USAGE
            }
        },
        Err(e @ Error::Schema(_)) => {
            eprintln!("curvatura: {e}");
            USAGE
        }
        Err(e) => {
            eprintln!("curvatura: figure not drawn ({}): {e}", e.code());
            FAIL
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Solve { input, tol } => cmd_solve(&input, tol),
        Cmd::Check {
            suites,
            samples,
            seed,
            tol,
            spaces,
            out,
            list,
        } => {
            if list {
                for id in check::suite_ids() {
                    println!("{id}");
                }
                PASS
            } else {
                let cfg = CheckConfig {
                    suites,
                    samples,
                    seed,
                    tol,
                    spaces,
                };
                cmd_check(cfg, out)
            }
        }
        Cmd::Figure { id, params, out } => cmd_figure(&id, &params, &out),
    };
    ExitCode::from(code)
}
