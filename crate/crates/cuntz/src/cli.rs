//! Command-line front end: every experiment as a subcommand emitting a
//! JSON or CSV report.
//!
//! Exit codes: 0 when the report passes, 2 on a bound violation
//! (`pass = false`), 1 on usage or input errors.

use clap::{Args, Parser, Subcommand};

use crate::experiment::{
    parse_vector, parse_word_set, run_experiment, Experiment, ExperimentConfig, StateSpec,
};

#[derive(Parser, Debug)]
#[command(
    name = "cuntz",
    about = "Cuntz algebra workbench: symbolic word calculus, matrix levels, and bound-checked constructions"
)]
struct Cli {
    /// Alphabet size d ≥ 2.
    #[arg(long, global = true, default_value_t = 2)]
    d: u32,
    /// Emit the report as JSON (default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit the report as CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance used by pass/fail gates that take one.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse an expression and print its canonical and compressed forms.
    Normalize {
        /// Expression, e.g. "s1s1' + s2s2'".
        expr: String,
    },
    /// Evaluate an expression against a state.
    Eval {
        expr: String,
        #[command(flatten)]
        state: StateArgs,
    },
    /// Apply the endomorphism attached to a unitary expression.
    Endo {
        /// The unitary u (expression).
        #[arg(long)]
        u: String,
        /// The argument x (expression).
        #[arg(long)]
        x: String,
        /// Check unitarity of u symbolically before applying.
        #[arg(long)]
        verify: bool,
    },
    /// Connect two cylinder projections by an explicit partial isometry.
    Equiv {
        /// Prefix-free set, words separated by ';' (e.g. "11;12;2").
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Sweep the averaged-projection defect over tower exponents.
    Kishimoto {
        #[arg(long, default_value_t = 1)]
        nmin: u32,
        #[arg(long, default_value_t = 5)]
        nmax: u32,
    },
    /// Approximate one-cocycles on the cyclic model.
    Rordam {
        /// Comma-separated tower periods, e.g. "4,8,16".
        #[arg(long, default_value = "4,8,16")]
        periods: String,
        /// Random unitaries per period.
        #[arg(long, default_value_t = 5)]
        runs: u32,
        /// Slot block size of the cyclic carrier.
        #[arg(long, default_value_t = 2)]
        block: usize,
    },
    /// Transport one product state onto another block by block.
    Transport {
        /// Site vector of the first tail, e.g. "1,0" or "(0,1),0".
        #[arg(long)]
        tail1: String,
        #[arg(long)]
        tail2: String,
        #[arg(long, default_value_t = 4)]
        blocks: u32,
        /// Block width; derived from the site overlap when omitted.
        #[arg(long)]
        width: Option<u32>,
    },
    /// Align a product state with a cylinder and build the unitary with
    /// φ(u·s_1) = 1.
    Cuntzify {
        #[arg(long)]
        tail: String,
        #[arg(long, default_value_t = 2)]
        level: u32,
    },
    /// Sharpen φ(u·s_1) = 1 by exponential phases over nested cylinders.
    Strengthen {
        #[arg(long, default_value_t = 6)]
        mmax: u32,
    },
}

#[derive(Args, Debug)]
struct StateArgs {
    /// State kind: "cuntz" or "product".
    #[arg(long, default_value = "cuntz")]
    state: String,
    /// Unit vector for a Cuntz state, e.g. "0.6,0.8".
    #[arg(long)]
    xi: Option<String>,
    /// Periodic tail for a product state: sites separated by ';'.
    #[arg(long)]
    tail: Option<String>,
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, String> {
    let experiment = match &cli.command {
        Command::Normalize { expr } => Experiment::Normalize { expr: expr.clone() },
        Command::Eval { expr, state } => {
            let spec = match state.state.as_str() {
                "cuntz" => {
                    let xi = state
                        .xi
                        .as_deref()
                        .ok_or("a cuntz state needs --xi")?;
                    StateSpec::Cuntz {
                        xi: parse_vector(xi).map_err(|e| e.to_string())?,
                    }
                }
                "product" => {
                    let tail = state
                        .tail
                        .as_deref()
                        .ok_or("a product state needs --tail")?;
                    let period = tail
                        .split(';')
                        .map(|site| parse_vector(site).map_err(|e| e.to_string()))
                        .collect::<Result<Vec<_>, _>>()?;
                    StateSpec::Product { period }
                }
                other => return Err(format!("unknown state kind '{other}'")),
            };
            Experiment::Eval {
                expr: expr.clone(),
                state: spec,
            }
        }
        Command::Endo { u, x, verify } => Experiment::Endo {
            unitary: u.clone(),
            argument: x.clone(),
            verify: *verify,
        },
        Command::Equiv { p, q } => Experiment::Equiv {
            p: parse_word_set(p).map_err(|e| e.to_string())?,
            q: parse_word_set(q).map_err(|e| e.to_string())?,
        },
        Command::Kishimoto { nmin, nmax } => Experiment::Kishimoto {
            n_min: *nmin,
            n_max: *nmax,
        },
        Command::Rordam {
            periods,
            runs,
            block,
        } => Experiment::Rordam {
            periods: periods
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?,
            runs: *runs,
            block: *block,
        },
        Command::Transport {
            tail1,
            tail2,
            blocks,
            width,
        } => Experiment::Transport {
            tail1: parse_vector(tail1).map_err(|e| e.to_string())?,
            tail2: parse_vector(tail2).map_err(|e| e.to_string())?,
            blocks: *blocks,
            width: *width,
        },
        Command::Cuntzify { tail, level } => Experiment::Cuntzify {
            tail: parse_vector(tail).map_err(|e| e.to_string())?,
            level: *level,
        },
        Command::Strengthen { mmax } => Experiment::Strengthen { m_max: *mmax },
    };
    Ok(ExperimentConfig {
        experiment,
        d: cli.d,
        seed: cli.seed,
        tol: cli.tol,
    })
}

/// Entry point used by the `cuntz` binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    let report = match run_experiment(&cfg) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let rendered = if cli.csv {
        report.to_csv()
    } else {
        report.to_json()
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, rendered) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 1;
        }
    } else {
        print!("{rendered}");
    }
    if report.pass {
        0
    } else {
        2
    }
}
