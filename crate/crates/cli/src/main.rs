//! `eqt`: solve, verify, generate, and benchmark equilibrium transition
//! instances from the command line.
//!
//! Exit codes, shared by every subcommand:
//!   0  success (solved, verified within threshold, generated, ...)
//!   1  invalid input: malformed JSON, violated invariants, bad paths
//!   2  decision failures and resource stops: infeasible instance, state or
//!      pivot budget exceeded, verification over threshold, generator gave up
//!   3  filesystem problems reading inputs or writing outputs

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eqt_core::{
    gen_exact_cover, gen_knapsack, gen_random, gen_random_single_peaked, materialize_matrices,
    parse_cover_input, parse_instance_file, parse_knapsack_input, parse_lp, parse_path_states,
    profile_count, solve_approx, solve_exact, solve_lp, solve_single_peaked, validate_path,
    CostValue, Error, ExactOutcome, Instance, InstanceFile, LineInstance, MatrixNorms,
    StateGraphSpec, DEFAULT_STATE_BUDGET,
};

#[derive(Parser)]
#[command(
    name = "eqt",
    about = "Minimum-reward schedules between pure equilibria",
    version,
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance file and write the schedule as JSON.
    Solve(SolveArgs),
    /// Check a candidate schedule against an instance and a cost threshold.
    Verify(VerifyArgs),
    /// Generate instance files with known structure.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Solve every instance in a directory and tabulate costs as CSV.
    Bench(BenchArgs),
    /// Solve a standalone linear program (diagnostic).
    LpSolve(LpSolveArgs),
    /// Expand a line instance into an explicit payoff-matrix instance.
    Materialize(MaterializeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Approx,
    SinglePeaked,
    Auto,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (payoff-matrix or line format).
    #[arg(short, long)]
    input: PathBuf,
    /// Solution file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// auto picks single-peaked for line files, exact while the state count
    /// fits the budget, and the rounded approximation beyond it.
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    /// Largest state count the exact solver may materialize.
    #[arg(long, env = "EQT_STATE_BUDGET", default_value_t = DEFAULT_STATE_BUDGET)]
    state_budget: u64,
    /// Print solver internals (states explored, gap bound) to stderr.
    #[arg(long)]
    emit_diagnostics: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file the schedule claims to solve.
    #[arg(short, long)]
    input: PathBuf,
    /// Schedule file: any JSON object with a "path" array of states, so
    /// solver outputs work directly.
    #[arg(long)]
    path: PathBuf,
    /// Cost threshold "p/q"; exit 2 when the schedule costs more.
    #[arg(long)]
    threshold: Option<String>,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Embed a 3-element exact cover problem; optimum 0 iff a cover exists.
    ExactCover(GenFileArgs),
    /// Embed an exact-k knapsack; prints the decision threshold 4*eps*k*V.
    Knapsack(GenFileArgs),
    /// Random integer payoffs with equilibrium endpoints.
    Random(GenRandomArgs),
    /// Random line instance (single-peaked payoffs).
    RandomLine(GenRandomLineArgs),
}

#[derive(Args)]
struct GenFileArgs {
    /// Source problem JSON.
    #[arg(short, long)]
    input: PathBuf,
    /// Instance file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenRandomArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Payoffs are drawn uniformly from [-payoff-range, payoff-range].
    #[arg(long, default_value_t = 10)]
    payoff_range: i64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenRandomLineArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Locations are distinct integers in [-coord-range, coord-range].
    #[arg(long, default_value_t = 10)]
    coord_range: i64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of *.json instance files.
    #[arg(long)]
    corpus: PathBuf,
    /// CSV report; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Worker threads; default uses all cores. Row order is by filename
    /// either way.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, env = "EQT_STATE_BUDGET", default_value_t = DEFAULT_STATE_BUDGET)]
    state_budget: u64,
}

#[derive(Args)]
struct LpSolveArgs {
    /// LP JSON: {"objective": [...], "constraints": [{"coeffs", "rel", "rhs"}]},
    /// minimizing over nonnegative variables.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MaterializeArgs {
    /// Line instance file.
    #[arg(short, long)]
    input: PathBuf,
    /// Payoff-matrix instance file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Anything a subcommand can end with: a chosen exit code, a solver error,
/// or a filesystem error tied to a path.
enum Stop {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl Stop {
    fn code(&self) -> u8 {
        match self {
            Stop::Core(e) => match e {
                Error::InvalidInput(_) | Error::Unsupported(_) | Error::Internal(_) => 1,
                Error::BudgetExceeded { .. }
                | Error::GenerationFailed { .. }
                | Error::PivotLimitExceeded(_) => 2,
            },
            Stop::Io(..) => 3,
        }
    }

    fn report(&self) {
        match self {
            Stop::Core(e) => err_line(&format!("error: {e}")),
            Stop::Io(path, e) => err_line(&format!("error: {}: {e}", path.display())),
        }
    }
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Core(e)
    }
}

type CmdResult = Result<u8, Stop>;

fn read_file(path: &Path) -> Result<String, Stop> {
    std::fs::read_to_string(path).map_err(|e| Stop::Io(path.to_path_buf(), e))
}

/// Write to stdout, exiting quietly when the downstream reader is gone
/// (e.g. the output is piped into head).
fn out_text(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let result = out.write_all(text.as_bytes()).and_then(|()| out.flush());
    if let Err(e) = result {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        err_line(&format!("error: stdout: {e}"));
        std::process::exit(3);
    }
}

fn out_line(text: &str) {
    out_text(text);
    out_text("\n");
}

/// Best-effort stderr line; diagnostics never abort the run.
fn err_line(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr().lock(), "{text}");
}

/// Write to the file, or to stdout when no path was given.
fn emit(output: Option<&Path>, text: &str) -> Result<(), Stop> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Stop::Io(path.to_path_buf(), e))
        }
        None => {
            out_text(text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Solve(a) => run_solve(&a),
        Cmd::Verify(a) => run_verify(&a),
        Cmd::Gen(g) => run_gen(&g),
        Cmd::Bench(a) => run_bench(&a),
        Cmd::LpSolve(a) => run_lp_solve(&a),
        Cmd::Materialize(a) => run_materialize(&a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(stop) => {
            stop.report();
            ExitCode::from(stop.code())
        }
    }
}

/// The state count an exact run would materialize, when it fits u64.
fn state_count(inst: &Instance) -> Option<u64> {
    let profiles = profile_count(inst.n(), inst.k())?;
    let total = (inst.m() as u128).checked_mul(profiles)?;
    u64::try_from(total).ok()
}

fn pick_method(inst: &Instance, budget: u64) -> Method {
    if !inst.matrices().all_finite() {
        // The rounded pipeline needs finite matrices; exact handles -inf.
        return Method::Exact;
    }
    match state_count(inst) {
        Some(states) if states <= budget => Method::Exact,
        _ => Method::Approx,
    }
}

fn run_solve(a: &SolveArgs) -> CmdResult {
    let text = read_file(&a.input)?;
    let parsed = parse_instance_file(&text)?;

    // Resolve (file kind, method) to one concrete solver run.
    let (json, cost, path_len, code) = match parsed {
        InstanceFile::Line(li) => match a.method {
            Method::SinglePeaked | Method::Auto => solve_line(&li, a.emit_diagnostics)?,
            Method::Exact => solve_exactly(&materialize_matrices(&li)?, a)?,
            Method::Approx => solve_approximately(&materialize_matrices(&li)?, a)?,
        },
        InstanceFile::General(inst) => match a.method {
            Method::SinglePeaked => {
                return Err(Stop::Core(Error::InvalidInput(
                    "single-peaked applies only to line instance files".into(),
                )))
            }
            Method::Exact => solve_exactly(&inst, a)?,
            Method::Approx => solve_approximately(&inst, a)?,
            Method::Auto => match pick_method(&inst, a.state_budget) {
                Method::Exact => solve_exactly(&inst, a)?,
                _ => solve_approximately(&inst, a)?,
            },
        },
    };
    emit(a.output.as_deref(), &json)?;
    out_line(&format!("cost {cost}"));
    out_line(&format!("path length {path_len}"));
    Ok(code)
}

type Solved = (String, String, usize, u8);

fn solve_exactly(inst: &Instance, a: &SolveArgs) -> Result<Solved, Stop> {
    let spec = StateGraphSpec::with_budget(inst, a.state_budget);
    let out = solve_exact(&spec)?;
    let json = eqt_core::exact_outcome_to_json(&out);
    Ok(match out {
        ExactOutcome::Optimal(sol) => {
            if a.emit_diagnostics {
                err_line(&format!("states explored {}", sol.states_explored));
            }
            (json, format!("{}", sol.opt_cost), sol.path.states.len(), 0)
        }
        ExactOutcome::Infeasible { states_explored, .. } => {
            if a.emit_diagnostics {
                err_line(&format!("states explored {states_explored}"));
            }
            (json, "inf".into(), 0, 2)
        }
    })
}

fn solve_approximately(inst: &Instance, a: &SolveArgs) -> Result<Solved, Stop> {
    let sol = solve_approx(inst)?;
    if a.emit_diagnostics {
        err_line(&format!("additive gap bound {}", eqt_core::format_rat(&sol.bound)));
        err_line(&format!("alternating path length {}", sol.alternating.len_edges()));
    }
    let json = eqt_core::approx_solution_to_json(&sol);
    let cost = format!("{}", sol.total_cost);
    let len = sol.path.states.len();
    Ok((json, cost, len, 0))
}

fn solve_line(li: &LineInstance, diagnostics: bool) -> Result<Solved, Stop> {
    let sol = solve_single_peaked(li)?;
    if diagnostics {
        err_line(&format!("alternating path length {}", sol.alternating.len_edges()));
    }
    let json = eqt_core::line_solution_to_json(&sol);
    let cost = format!("{}", sol.total_cost);
    let len = sol.path.states.len();
    Ok((json, cost, len, 0))
}

fn load_general_instance(path: &Path) -> Result<Instance, Stop> {
    let text = read_file(path)?;
    Ok(match parse_instance_file(&text)? {
        InstanceFile::General(inst) => inst,
        InstanceFile::Line(li) => materialize_matrices(&li)?,
    })
}

fn run_verify(a: &VerifyArgs) -> CmdResult {
    let inst = load_general_instance(&a.input)?;
    let states = parse_path_states(&read_file(&a.path)?)?;
    let threshold = match &a.threshold {
        Some(t) => Some(eqt_core::parse_rat(t)?),
        None => None,
    };
    let report = validate_path(&inst, &states);
    if !report.valid {
        for issue in &report.issues {
            err_line(&format!("invalid: {issue}"));
        }
        return Ok(1);
    }
    let total = report.total.expect("valid reports carry a total");
    out_line(&format!("cost {total}"));
    match total {
        CostValue::PosInf => {
            err_line("schedule needs a blocked transition; no finite reward achieves it");
            Ok(2)
        }
        CostValue::Finite(ref cost) => match threshold {
            Some(t) if *cost > t => Ok(2),
            _ => Ok(0),
        },
    }
}

fn run_gen(g: &GenCmd) -> CmdResult {
    match g {
        GenCmd::ExactCover(a) => {
            let input = parse_cover_input(&read_file(&a.input)?)?;
            let inst = gen_exact_cover(&input)?;
            emit(a.output.as_deref(), &eqt_core::instance_to_json(&inst))?;
            out_line(&format!("cover instance: m {} n {} k {}", inst.m(), inst.n(), inst.k()));
        }
        GenCmd::Knapsack(a) => {
            let input = parse_knapsack_input(&read_file(&a.input)?)?;
            let (inst, threshold) = gen_knapsack(&input)?;
            emit(a.output.as_deref(), &eqt_core::instance_to_json(&inst))?;
            out_line(&format!("knapsack instance: m {} n {} k {}", inst.m(), inst.n(), inst.k()));
            out_line(&format!("threshold {}", eqt_core::format_rat(&threshold)));
        }
        GenCmd::Random(a) => {
            let inst = gen_random(a.m, a.n, a.k, a.seed, a.payoff_range)?;
            emit(a.output.as_deref(), &eqt_core::instance_to_json(&inst))?;
        }
        GenCmd::RandomLine(a) => {
            let li = gen_random_single_peaked(a.n, a.k, a.seed, a.coord_range)?;
            emit(a.output.as_deref(), &eqt_core::line_instance_to_json(&li))?;
        }
    }
    Ok(0)
}

fn run_lp_solve(a: &LpSolveArgs) -> CmdResult {
    let lp = parse_lp(&read_file(&a.input)?)?;
    let out = solve_lp(&lp)?;
    emit(a.output.as_deref(), &eqt_core::lp_outcome_to_json(&out))?;
    Ok(0)
}

fn run_materialize(a: &MaterializeArgs) -> CmdResult {
    let text = read_file(&a.input)?;
    let li = match parse_instance_file(&text)? {
        InstanceFile::Line(li) => li,
        InstanceFile::General(_) => {
            return Err(Stop::Core(Error::InvalidInput(
                "materialize expects a line instance file".into(),
            )))
        }
    };
    let inst = materialize_matrices(&li)?;
    emit(a.output.as_deref(), &eqt_core::instance_to_json(&inst))?;
    Ok(0)
}

/// One CSV row of the bench report. Blank fields mean "not applicable"
/// (no approximation gap for -inf payoffs, no state count for LP methods).
struct BenchRow {
    instance: String,
    method: &'static str,
    cost: String,
    gap: String,
    bound: String,
    states_explored: String,
    wall_ms: u128,
}

fn bench_one(name: &str, text: &str, budget: u64) -> Result<BenchRow, Stop> {
    let parsed = parse_instance_file(text)?;
    let (inst, line) = match parsed {
        InstanceFile::General(inst) => (inst, None),
        InstanceFile::Line(li) => (materialize_matrices(&li)?, Some(li)),
    };

    let started = Instant::now();
    let exact = solve_exact(&StateGraphSpec::with_budget(&inst, budget))?;
    let exact_ms = started.elapsed().as_millis();
    let (exact_cost, states) = match &exact {
        ExactOutcome::Optimal(sol) => (sol.opt_cost.clone(), sol.states_explored),
        ExactOutcome::Infeasible { states_explored, .. } => (CostValue::PosInf, *states_explored),
    };

    let mut row = BenchRow {
        instance: name.to_string(),
        method: "exact",
        cost: format!("{exact_cost}"),
        gap: String::new(),
        bound: String::new(),
        states_explored: states.to_string(),
        wall_ms: exact_ms,
    };

    // The additive-gap columns only exist where the approximation runs:
    // finite matrices with a finite exact optimum.
    if inst.matrices().all_finite() {
        if let CostValue::Finite(exact_rat) = &exact_cost {
            let sol = solve_approx(&inst)?;
            let approx_rat = sol
                .total_cost
                .as_finite()
                .ok_or_else(|| Error::Internal("approximate schedule cost must be finite".into()))?
                .clone();
            let gap = &approx_rat - exact_rat;
            let bound = MatrixNorms::of(inst.matrices()).global_gap_bound(inst.m());
            if gap > bound {
                return Err(Stop::Core(Error::Internal(format!(
                    "{name}: additive gap {} exceeds its bound {}",
                    eqt_core::format_rat(&gap),
                    eqt_core::format_rat(&bound)
                ))));
            }
            row.gap = eqt_core::format_rat(&gap);
            row.bound = eqt_core::format_rat(&bound);
        }
    }

    // Line instances are additionally solved by the closed-form method,
    // which must agree with exact search to the last bit.
    if let Some(li) = line {
        let started = Instant::now();
        let sol = solve_single_peaked(&li)?;
        let line_ms = started.elapsed().as_millis();
        if sol.total_cost != exact_cost {
            return Err(Stop::Core(Error::Internal(format!(
                "{name}: single-peaked cost {} disagrees with exact cost {}",
                sol.total_cost, exact_cost
            ))));
        }
        row.method = "single-peaked";
        row.wall_ms = line_ms;
    }
    Ok(row)
}

fn run_bench(a: &BenchArgs) -> CmdResult {
    let entries = std::fs::read_dir(&a.corpus).map_err(|e| Stop::Io(a.corpus.clone(), e))?;
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Stop::Io(a.corpus.clone(), e))?;
        let path = entry.path();
        if path.extension().is_some_and(|e| e == "json") && path.is_file() {
            files.push(path);
        }
    }
    files.sort();

    let loaded: Vec<(String, String)> = files
        .iter()
        .map(|path| {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            Ok((name, read_file(path)?))
        })
        .collect::<Result<_, Stop>>()?;

    let budget = a.state_budget;
    let solve_all = || -> Vec<Result<BenchRow, Stop>> {
        use rayon::prelude::*;
        loaded
            .par_iter()
            .map(|(name, text)| bench_one(name, text, budget))
            .collect()
    };
    let results = match a.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot build a {jobs}-thread pool: {e}")))?
            .install(solve_all),
        None => solve_all(),
    };

    let mut csv = String::from("instance,method,cost,gap,bound,states_explored,wall_ms\n");
    for result in results {
        let row = result?;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.instance, row.method, row.cost, row.gap, row.bound, row.states_explored,
            row.wall_ms
        ));
    }
    emit(a.output.as_deref(), &csv)?;
    Ok(0)
}
