//! Command-line front end for the gps-radial solver.
//!
//! Subcommands: `solve` (one converged state), `scan` (parameter sweeps as
//! CSV), `table` (reference-data validation), `critical` (critical ECSC
//! screening search). All machine-readable output is CSV with a header
//! row, LF line endings and fixed-point numbers.
//!
//! Exit codes: 0 success, 1 validation mismatch, 2 usage or parse error,
//! 3 convergence failure.

use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use gps_radial::golden::{self, EntryCheck, GoldenEntry, TableId};
use gps_radial::spectrum::format_truncated;
use gps_radial::{
    converge_state, find_critical_screening, EcscFamily, Potential, SolverError, SolverConfig,
    StateLabel,
};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gps-radial",
    about = "Bound states of screened Coulomb potentials on a mapped Gauss-Lobatto grid",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct GridArgs {
    /// Collocation order N (default 200)
    #[arg(long)]
    order: Option<usize>,
    /// Map steepness alpha (default 25)
    #[arg(long)]
    alpha: Option<f64>,
    /// Domain truncation radius in a.u. (default 300)
    #[arg(long)]
    rmax: Option<f64>,
}

impl GridArgs {
    fn config(&self) -> SolverConfig {
        let mut config = SolverConfig::default();
        if let Some(order) = self.order {
            config.order = order;
        }
        if let Some(alpha) = self.alpha {
            config.alpha = alpha;
        }
        if let Some(rmax) = self.rmax {
            config.r_max = rmax;
        }
        config
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one (n, l) state to grid-stable digits
    Solve {
        /// Potential string, e.g. ecsc:delta=0.06 or gesc:b=0.02
        #[arg(long)]
        pot: String,
        /// Principal quantum number
        #[arg(long)]
        n: u32,
        /// Orbital angular momentum
        #[arg(long)]
        l: u32,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Sweep a screening parameter for a list of states, emitting CSV
    Scan {
        /// Potential family: ecsc, gesc or yukawa
        #[arg(long)]
        family: String,
        /// Comma-separated spectroscopic labels, e.g. 7s,7p,8d
        #[arg(long)]
        states: String,
        /// Sweep start (inclusive)
        #[arg(long)]
        from: f64,
        /// Sweep end (inclusive)
        #[arg(long)]
        to: f64,
        /// Number of sweep points (>= 2)
        #[arg(long)]
        steps: usize,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Recompute a reference table and compare entry by entry
    Table {
        /// Table id: T1..T5
        id: String,
        /// External golden CSV path (defaults to the embedded copy)
        #[arg(long)]
        golden: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Bisect for the critical ECSC screening strength of a state
    Critical {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        /// Bracket tolerance on delta_c (>= 1e-5)
        #[arg(long)]
        tol: f64,
        /// Potential family (only ecsc has a critical screening)
        #[arg(long, default_value = "ecsc")]
        family: String,
        #[command(flatten)]
        grid: GridArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                SolverError::NotConverged { .. }
                | SolverError::NodeConvergence { .. }
                | SolverError::EigenIterationLimit { .. }
                | SolverError::NoUpperBracket { .. }
                | SolverError::NoLowerBracket { .. } => EXIT_NO_CONVERGENCE,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, SolverError> {
    match cli.command {
        Command::Solve { pot, n, l, grid } => cmd_solve(&pot, n, l, grid.config()),
        Command::Scan {
            family,
            states,
            from,
            to,
            steps,
            out,
            grid,
        } => cmd_scan(&family, &states, from, to, steps, out.as_deref(), grid.config()),
        Command::Table { id, golden, grid } => cmd_table(&id, golden.as_deref(), grid.config()),
        Command::Critical {
            n,
            l,
            tol,
            family,
            grid,
        } => cmd_critical(n, l, tol, &family, grid.config()),
    }
}

/// Energy column formatting: sign plus magnitude truncated to the digits
/// that survived grid escalation. Never scientific notation.
fn energy_field(energy: f64, stable_digits: u32) -> String {
    format!("-{}", format_truncated(-energy, stable_digits.max(1)))
}

fn cmd_solve(pot: &str, n: u32, l: u32, config: SolverConfig) -> Result<ExitCode, SolverError> {
    let potential = Potential::from_str(pot)?;
    let state = converge_state(potential, n, l, &config)?;
    println!("potential,params,n,l,energy,stable_digits,N,r_max");
    println!(
        "{},{},{},{},{},{},{},{}",
        potential.family(),
        potential.params_string(),
        state.n,
        state.l,
        energy_field(state.energy, state.stable_digits),
        state.stable_digits,
        state.config_used.order,
        state.config_used.r_max,
    );
    Ok(ExitCode::SUCCESS)
}

fn sweep_potential(family: &str, value: f64) -> Result<Potential, SolverError> {
    match family {
        "ecsc" => Ok(Potential::ecsc(value)),
        "gesc" => Ok(Potential::gesc(value)),
        "yukawa" => Ok(Potential::yukawa(1.0, value)),
        other => Err(SolverError::Parse(format!(
            "family `{other}` cannot be swept (use ecsc, gesc or yukawa)"
        ))),
    }
}

fn cmd_scan(
    family: &str,
    states: &str,
    from: f64,
    to: f64,
    steps: usize,
    out: Option<&str>,
    config: SolverConfig,
) -> Result<ExitCode, SolverError> {
    let labels: Vec<StateLabel> = states
        .split(',')
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    if labels.is_empty() {
        return Err(SolverError::Parse("empty state list".into()));
    }
    if steps < 2 {
        return Err(SolverError::InvalidArgument("steps must be >= 2".into()));
    }
    if !(0.0..=2.0).contains(&from) || !(0.0..=2.0).contains(&to) || from >= to {
        return Err(SolverError::InvalidArgument(format!(
            "sweep range [{from}, {to}] must lie within [0, 2] and be increasing"
        )));
    }
    sweep_potential(family, from.max(1e-12))?; // validate the family up front

    // All (point, state) tasks computed in parallel, emitted in input order.
    use rayon::prelude::*;
    let mut tasks = Vec::new();
    for i in 0..steps {
        let value = from + (to - from) * i as f64 / (steps - 1) as f64;
        for &label in &labels {
            tasks.push((value, label));
        }
    }
    let rows: Vec<String> = tasks
        .par_iter()
        .map(|&(value, label)| {
            let energy = sweep_potential(family, value)
                .ok()
                .and_then(|pot| converge_state(pot, label.n, label.l, &config).ok())
                .map(|st| energy_field(st.energy, st.stable_digits))
                .unwrap_or_default();
            format!("{value},{label},{energy}")
        })
        .collect();

    let mut text = String::from("param,state,energy\n");
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| SolverError::InvalidArgument(format!("cannot write {path}: {e}")))?;
            file.write_all(text.as_bytes())
                .map_err(|e| SolverError::InvalidArgument(format!("cannot write {path}: {e}")))?;
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(
    id: &str,
    golden_path: Option<&str>,
    config: SolverConfig,
) -> Result<ExitCode, SolverError> {
    let id: TableId = id.parse()?;
    let entries: Vec<GoldenEntry> = match golden_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                SolverError::Parse(format!("cannot read golden file {path}: {e}"))
            })?;
            golden::parse_csv(&text)?
                .into_iter()
                .filter(|e| e.table == id)
                .collect()
        }
        None => golden::table(id).into_iter().cloned().collect(),
    };
    if entries.is_empty() {
        return Err(SolverError::Parse(format!("golden data has no {id} rows")));
    }

    let checks = golden::check_entries(&entries, &config);
    println!("state,param,golden,computed,abs_diff,matched_digits");
    let mut max_diff = 0.0f64;
    let mut min_matched = u32::MAX;
    let mut all_pass = true;
    for EntryCheck {
        entry,
        computed,
        abs_diff,
        matched_digits,
        pass,
        ..
    } in &checks
    {
        // Print the full comparison precision here; the reference strings
        // carry 11-12 significant digits.
        let computed_field = match computed {
            Some(e) => energy_field(*e, 12),
            None => String::new(),
        };
        println!(
            "{},{},-{},{},{},{}",
            entry.state,
            entry.param_str,
            entry.energy_str,
            computed_field,
            format_fixed(*abs_diff),
            matched_digits
        );
        max_diff = max_diff.max(*abs_diff);
        min_matched = min_matched.min(*matched_digits);
        all_pass &= pass;
    }
    println!(
        "SUMMARY,{},,,{},{}",
        entries.len(),
        format_fixed(max_diff),
        min_matched
    );
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{id}: at least one entry differs beyond tolerance");
        Ok(ExitCode::from(EXIT_MISMATCH))
    }
}

/// Fixed-point rendering for small difference columns.
fn format_fixed(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.14}")
    } else {
        String::from("inf")
    }
}

fn cmd_critical(
    n: u32,
    l: u32,
    tol: f64,
    family: &str,
    config: SolverConfig,
) -> Result<ExitCode, SolverError> {
    if family != "ecsc" {
        return Err(SolverError::InvalidArgument(format!(
            "critical screening is only defined for the ecsc family; \
             `{family}` binds at every screening strength"
        )));
    }
    let result = find_critical_screening(EcscFamily::default(), n, l, tol, &config)?;
    println!("n,l,delta_c,bracket_width,energy_at_lower");
    println!(
        "{},{},{},{},{}",
        result.n,
        result.l,
        format_truncated(result.delta_c, 6),
        format_fixed(result.bracket_width),
        energy_field(result.energy_at_lower, 8),
    );
    Ok(ExitCode::SUCCESS)
}
