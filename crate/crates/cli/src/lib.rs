//! `structctl` command-line front end. Results go to stdout as a single JSON
//! object with sorted keys (DOT for `export-dot`); diagnostics go to stderr.
//!
//! Exit codes: 0 success or pass, 1 infeasible or fail, 2 input or usage
//! error, 3 resource cap exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use structctl_core::verification::{DEFAULT_RANGE, DEFAULT_TOLERANCE};
use structctl_core::{
    brute_force_min_dedicated, check_structural_controllability, dedicated_b, dedicated_placement,
    distribute, min_modes_exact, min_modes_greedy, minimal_b, non_dedicated_b,
    numeric_controllable, realize, to_dot, Error, ModeInputAssignment, Pattern,
    PlacementSolution, SwitchedSystem,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Pass ratio `check-numeric` needs for exit 0.
const NUMERIC_PASS_RATIO: f64 = 0.98;

#[derive(Debug, Parser)]
#[command(name = "structctl", version, about = "Sparsest actuator placement for switched linear systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimum dedicated placement and the solutions derived from it
    Place {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SolutionKind::Dedicated)]
        solution: SolutionKind,
        /// Input column per J''' state for `non-dedicated`, e.g. "4=1" (default column 1)
        #[arg(long)]
        choice: Option<String>,
        /// Print the input system with the solution's B patterns instead of the solution
        #[arg(long)]
        emit_system: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spread the input columns of a placement over the modes
    Distribute {
        input: PathBuf,
        /// Column-to-mode pairs, e.g. "2=1,4=3"
        #[arg(long)]
        assign: String,
        #[arg(long, value_enum, default_value_t = SolutionKind::Dedicated)]
        solution: SolutionKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graph-theoretic structural controllability check
    Verify { input: PathBuf },
    /// Randomized numeric rank test over real realizations
    CheckNumeric {
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Smallest set of modes keeping the system structurally controllable
    MinModes {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
    },
    /// Brute-force minimum number of dedicated inputs
    OracleMin { input: PathBuf },
    /// Graphviz rendering of the state digraph and its SCCs
    ExportDot {
        input: PathBuf,
        /// `union` or `mode=K`
        #[arg(long, default_value = "union")]
        which: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolutionKind {
    Dedicated,
    Minimal,
    NonDedicated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Greedy,
}

enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<i32, Failure>;

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                if !text.contains("Usage:") {
                    let _ = writeln!(stderr, "\n{}", Cli::command().render_usage());
                }
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Infeasible(_) => EXIT_FAIL,
                Error::Resource { .. } => EXIT_RESOURCE,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Outcome {
    match command {
        Command::Place { input, solution, choice, emit_system, out } => {
            let system = load(&input)?;
            let sol = dedicated_placement(&system)?;
            let choice = choice.as_deref().map(|c| parse_pairs(c, "--choice")).transpose()?;
            let b = solution_inputs(&system, &sol, solution, choice)?;
            let text = if emit_system {
                system.with_inputs(b.modes)?.to_json()
            } else {
                solution_json(&sol, &b).to_string()
            };
            emit(stdout, out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Distribute { input, assign, solution, out } => {
            let system = load(&input)?;
            let sol = dedicated_placement(&system)?;
            let pairs: Vec<(usize, usize)> =
                parse_pairs(&assign, "--assign")?.into_iter().collect();
            let base = solution_inputs(&system, &sol, solution, None)?.modes[0].clone();
            let b = distribute(&base, &pairs, system.mode_count())?;
            emit(stdout, out.as_deref(), &solution_json(&sol, &b).to_string())?;
            Ok(EXIT_OK)
        }
        Command::Verify { input } => {
            let report = check_structural_controllability(&load(&input)?)?;
            let value = serde_json::to_value(&report).expect("report serializes");
            emit(stdout, None, &value.to_string())?;
            Ok(if report.overall { EXIT_OK } else { EXIT_FAIL })
        }
        Command::CheckNumeric { input, trials, seed, tol } => {
            if trials == 0 {
                return Err(Failure::Usage("--trials must be positive".into()));
            }
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Failure::Usage("--tol must be a positive number".into()));
            }
            let system = load(&input)?;
            let mut passed = 0u64;
            for t in 0..trials {
                let num = realize(&system, seed.wrapping_add(t), DEFAULT_RANGE)?;
                if numeric_controllable(&num, tol)? {
                    passed += 1;
                }
            }
            let ratio = passed as f64 / trials as f64;
            let pass = ratio >= NUMERIC_PASS_RATIO;
            let value = json!({
                "controllable": passed,
                "pass": pass,
                "ratio": ratio,
                "seed": seed,
                "tol": tol,
                "trials": trials,
            });
            emit(stdout, None, &value.to_string())?;
            Ok(if pass { EXIT_OK } else { EXIT_FAIL })
        }
        Command::MinModes { input, method } => {
            let system = load(&input)?;
            let result = match method {
                Method::Exact => min_modes_exact(&system)?,
                Method::Greedy => min_modes_greedy(&system)?,
            };
            let value = serde_json::to_value(&result).expect("result serializes");
            emit(stdout, None, &value.to_string())?;
            Ok(EXIT_OK)
        }
        Command::OracleMin { input } => {
            let (size, states) = brute_force_min_dedicated(&load(&input)?)?;
            emit(stdout, None, &json!({ "cardinality": size, "states": states }).to_string())?;
            Ok(EXIT_OK)
        }
        Command::ExportDot { input, which } => {
            let system = load(&input)?;
            let (a, b) = select_view(&system, &which)?;
            let dot = to_dot(&a, b.as_ref())?;
            stdout
                .write_all(dot.as_bytes())
                .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))?;
            Ok(EXIT_OK)
        }
    }
}

fn load(path: &Path) -> Result<SwitchedSystem, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(SwitchedSystem::from_json(&text)?)
}

fn emit(stdout: &mut dyn Write, out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let result = match out {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => writeln!(stdout, "{text}"),
    };
    result.map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

/// Parses `"a=b,c=d"` into 1-based pairs; keys must be distinct.
fn parse_pairs(text: &str, flag: &str) -> Result<BTreeMap<usize, usize>, Failure> {
    let mut pairs = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parsed = item
            .split_once('=')
            .and_then(|(k, v)| Some((k.trim().parse().ok()?, v.trim().parse().ok()?)));
        let Some((k, v)) = parsed else {
            return Err(Failure::Usage(format!("{flag}: expected INDEX=INDEX, got {item:?}")));
        };
        if pairs.insert(k, v).is_some() {
            return Err(Failure::Usage(format!("{flag}: index {k} given twice")));
        }
    }
    Ok(pairs)
}

fn solution_inputs(
    system: &SwitchedSystem,
    sol: &PlacementSolution,
    kind: SolutionKind,
    choice: Option<BTreeMap<usize, usize>>,
) -> Result<ModeInputAssignment, Failure> {
    let m = system.mode_count();
    let first = match kind {
        SolutionKind::Dedicated => {
            if choice.is_some() {
                return Err(Failure::Usage("--choice needs --solution non-dedicated".into()));
            }
            return Ok(dedicated_b(sol, m)?);
        }
        SolutionKind::Minimal => {
            if choice.is_some() {
                return Err(Failure::Usage("--choice needs --solution non-dedicated".into()));
            }
            minimal_b(sol)
        }
        SolutionKind::NonDedicated => {
            let choice = choice.unwrap_or_else(|| sol.j_tprime.iter().map(|&s| (s, 1)).collect());
            non_dedicated_b(sol, &choice)?
        }
    };
    let mut modes = vec![Pattern::zeros(sol.n, sol.n); m];
    modes[0] = first;
    Ok(ModeInputAssignment { modes })
}

fn solution_json(sol: &PlacementSolution, b: &ModeInputAssignment) -> Value {
    let modes: Vec<Value> = b
        .modes
        .iter()
        .map(|p| json!({ "B": p.iter().map(|(r, c)| [r, c]).collect::<Vec<_>>() }))
        .collect();
    json!({
        "cardinality": sol.cardinality(),
        "j_dprime": sol.j_dprime,
        "j_prime": sol.j_prime,
        "j_tprime": sol.j_tprime,
        "modes": modes,
    })
}

fn select_view(system: &SwitchedSystem, which: &str) -> Result<(Pattern, Option<Pattern>), Failure> {
    if which == "union" {
        let b = system.has_inputs().then(|| system.b_union());
        return Ok((system.a_union(), b));
    }
    let k = which
        .strip_prefix("mode=")
        .and_then(|k| k.parse::<usize>().ok())
        .filter(|k| (1..=system.mode_count()).contains(k))
        .ok_or_else(|| {
            Failure::Usage(format!(
                "--which: expected union or mode=K with K in 1..={}, got {which:?}",
                system.mode_count()
            ))
        })?;
    let b = system.b_modes().map(|bs| bs[k - 1].clone());
    Ok((system.a_modes()[k - 1].clone(), b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn pairs_parse_and_reject() {
        let p = parse_pairs("2=1, 4=3", "--assign").ok().unwrap();
        assert_eq!(p, BTreeMap::from([(2, 1), (4, 3)]));
        assert!(parse_pairs("2=1,2=3", "--assign").is_err());
        assert!(parse_pairs("2:1", "--assign").is_err());
        assert!(parse_pairs("x=1", "--assign").is_err());
        assert!(parse_pairs("", "--assign").ok().unwrap().is_empty());
    }

    #[test]
    fn solution_json_has_sorted_lists() {
        let sol = PlacementSolution {
            n: 2,
            j_prime: BTreeSet::from([2]),
            j_dprime: BTreeSet::new(),
            j_tprime: BTreeSet::from([1]),
            scc_cover: BTreeMap::new(),
        };
        let b = dedicated_b(&sol, 1).unwrap();
        assert_eq!(
            solution_json(&sol, &b).to_string(),
            r#"{"cardinality":2,"j_dprime":[],"j_prime":[2],"j_tprime":[1],"modes":[{"B":[[1,1],[2,2]]}]}"#
        );
    }
}
