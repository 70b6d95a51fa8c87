//! Command-line workbench over the core models: formula measuring,
//! program evaluation, the compilation chain, distribution equivalence
//! checking, and the polynomial zero tester.
//!
//! Exit codes: 0 success, 1 failed verdict, 2 parse/usage error,
//! 3 budget or fuel exhausted.

mod parse;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};

use flipbench_core::bitstring::BitString;
use flipbench_core::harness::{self, Chain, HarnessError, Model, DEFAULT_MAX_BITS};
use flipbench_core::machine::{MachineError, DEFAULT_MACHINE_FUEL};
use flipbench_core::por::PorError;
use flipbench_core::pzt::{self, PztError, Verdict};
use flipbench_core::randomness::{Oracle, Stream};
use flipbench_core::rl::{
    counting_fraction, measure, two_thirds_check, Env, MeasureCfg, RlError,
};
use flipbench_core::sifp::{self, Flavor, Reg, SifpError, Stmt, Store, DEFAULT_FUEL};
use flipbench_core::translate::canonical::{od_to_stm, stm_to_ptm};
use flipbench_core::translate::la_to_machine::la_to_machine;
use flipbench_core::translate::por_to_ra::por_to_ra;
use flipbench_core::translate::ra_to_la::ra_to_la;

#[derive(Parser)]
#[command(name = "flipbench", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Stage {
    /// Function algebra to oracle-flavor imperative program.
    PorRa,
    /// Oracle flavor to stream flavor (memoized lookup table).
    RaLa,
    /// Stream-flavor program to an on-demand machine.
    LaOd,
    /// On-demand machine to a canonical stream machine.
    OdStm,
    /// Canonical stream machine to a two-table machine.
    StmPtm,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact measure of the oracles satisfying a formula.
    Measure {
        file: PathBuf,
        /// Free-variable binding `name=bits`, repeatable.
        #[arg(long = "env")]
        env: Vec<String>,
        #[arg(long)]
        max_bits: Option<usize>,
    },
    /// Satisfying packed-witness count out of the total.
    Count {
        file: PathBuf,
        #[arg(long = "env")]
        env: Vec<String>,
        #[arg(long)]
        max_bits: Option<usize>,
    },
    /// Check that for every input some advice reaches measure 2/3.
    ///
    /// The formula's input variable must be named `x` and its advice
    /// variable `y`; the inputs file lists one input string per line.
    Noterratic {
        file: PathBuf,
        #[arg(long)]
        inputs: PathBuf,
        #[arg(long = "env")]
        env: Vec<String>,
        #[arg(long)]
        max_bits: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate a function-algebra program.
    Por {
        #[command(subcommand)]
        cmd: PorCmd,
    },
    /// Translate an artifact one stage down the chain.
    Compile {
        stage: Stage,
        input: PathBuf,
        output: PathBuf,
        /// Input arity for la-od (default: highest X register used).
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Run an imperative program.
    Sifp {
        #[command(subcommand)]
        cmd: SifpCmd,
    },
    /// Run a machine table.
    Machine {
        #[command(subcommand)]
        cmd: MachineCmd,
    },
    /// Compile a function-algebra program through all six stages and
    /// compare exact output distributions on each input tuple.
    Equiv {
        file: PathBuf,
        /// One tuple per line, entries whitespace-separated; `-` alone is
        /// the empty tuple.
        #[arg(long)]
        inputs: PathBuf,
        #[arg(long)]
        max_bits: Option<usize>,
        #[arg(long)]
        fuel: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Polynomial zero testing.
    Pzt {
        #[command(subcommand)]
        cmd: PztCmd,
    },
    /// Polynomial identity testing: do two circuits agree?
    Pit {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        iters: Option<u64>,
        /// Decide circuits with fewer than this many gates exactly.
        #[arg(long, default_value_t = 0)]
        rho: usize,
    },
}

#[derive(Subcommand)]
enum PorCmd {
    /// One evaluation against a seeded random oracle.
    Run {
        file: PathBuf,
        #[arg(long = "input")]
        inputs: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact output distribution over all oracles.
    Dist {
        file: PathBuf,
        #[arg(long = "input")]
        inputs: Vec<String>,
        #[arg(long)]
        max_bits: Option<usize>,
    },
}

#[derive(Subcommand)]
enum SifpCmd {
    Run {
        file: PathBuf,
        #[arg(long = "input")]
        inputs: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        fuel: Option<u64>,
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Subcommand)]
enum MachineCmd {
    Run {
        file: PathBuf,
        #[arg(long = "input")]
        inputs: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        fuel: Option<u64>,
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Subcommand)]
enum PztCmd {
    /// Randomized zero test on one circuit: accept or reject.
    Test {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        iters: Option<u64>,
        #[arg(long, default_value_t = 0)]
        rho: usize,
    },
    /// Empirical error rate against the exact zero oracle.
    ErrorRate {
        file: PathBuf,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        iters: Option<u64>,
        #[arg(long, default_value_t = 0)]
        rho: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Exhaustively verify the root-count bound on the small family.
    SzCheck,
    /// Verify the prime-count lower bound for a range of sizes.
    Primes {
        /// Inclusive range `a..b`.
        #[arg(long)]
        m_range: String,
    },
}

/// A failed invocation, with its exit code.
enum Failure {
    /// A check the tool ran came out negative; details already printed.
    Verdict,
    Parse(String),
    Budget(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        match self {
            Failure::Verdict => ExitCode::from(1),
            Failure::Parse(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Failure::Budget(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(3)
            }
        }
    }
}

impl From<RlError> for Failure {
    fn from(e: RlError) -> Self {
        match e {
            RlError::Budget { .. } | RlError::OracleExhausted => {
                Failure::Budget(e.to_string())
            }
            _ => Failure::Parse(e.to_string()),
        }
    }
}

impl From<SifpError> for Failure {
    fn from(e: SifpError) -> Self {
        match e {
            SifpError::FuelExhausted | SifpError::RandomnessExhausted => {
                Failure::Budget(e.to_string())
            }
            SifpError::WrongFlavor { .. } => Failure::Parse(e.to_string()),
        }
    }
}

impl From<MachineError> for Failure {
    fn from(e: MachineError) -> Self {
        match e {
            MachineError::FuelExhausted
            | MachineError::RandomnessExhausted
            | MachineError::BranchBudget { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Parse(e.to_string()),
        }
    }
}

impl From<PorError> for Failure {
    fn from(e: PorError) -> Self {
        match e {
            PorError::OracleExhausted => Failure::Budget(e.to_string()),
            _ => Failure::Parse(e.to_string()),
        }
    }
}

impl From<PztError> for Failure {
    fn from(e: PztError) -> Self {
        match e {
            PztError::MonomialBudget { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Parse(e.to_string()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Por(e) => e.into(),
            HarnessError::Sifp(e) => e.into(),
            HarnessError::Machine(e) => e.into(),
            HarnessError::Budget { .. } => Failure::Budget(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Parse(format!("cannot write {}: {e}", path.display())))
}

fn bits(s: &str) -> Result<BitString, Failure> {
    BitString::parse(s).map_err(Failure::Parse)
}

fn bits_vec(ss: &[String]) -> Result<Vec<BitString>, Failure> {
    ss.iter().map(|s| bits(s)).collect()
}

fn env_of(pairs: &[String]) -> Result<Env, Failure> {
    let mut bound = Vec::new();
    for p in pairs {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Failure::Parse(format!("--env expects name=bits, got {p:?}")))?;
        bound.push((k.to_string(), bits(v)?));
    }
    Ok(Env::from_pairs(bound))
}

fn env_default(var: &str) -> Option<u64> {
    std::env::var(var).ok().and_then(|v| v.parse().ok())
}

fn pick_max_bits(flag: Option<usize>) -> usize {
    flag.or_else(|| env_default("FLIPBENCH_MAX_BITS").map(|v| v as usize))
        .unwrap_or(DEFAULT_MAX_BITS)
}

fn pick_fuel(flag: Option<u64>, fallback: u64) -> u64 {
    flag.or_else(|| env_default("FLIPBENCH_FUEL")).unwrap_or(fallback)
}

fn measure_cfg(max_bits: Option<usize>) -> MeasureCfg {
    let mut cfg = MeasureCfg::default();
    if let Some(m) = max_bits {
        cfg.max_coord_bits = m;
    } else if let Some(m) = env_default("FLIPBENCH_MAX_BITS") {
        cfg.max_coord_bits = m as usize;
    }
    cfg
}

/// Read one input tuple per nonblank line; `-` denotes the empty tuple.
fn read_tuples(path: &PathBuf) -> Result<Vec<Vec<BitString>>, Failure> {
    let mut out = Vec::new();
    for line in read(path)?.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "-" {
            out.push(Vec::new());
            continue;
        }
        let tuple =
            line.split_whitespace().map(bits_str).collect::<Result<Vec<_>, _>>()?;
        out.push(tuple);
    }
    Ok(out)
}

fn bits_str(s: &str) -> Result<BitString, Failure> {
    BitString::parse(s).map_err(Failure::Parse)
}

/// Apply `f` to every item, preserving order, on up to `jobs` threads.
fn par_map<T, R, F>(jobs: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let jobs = jobs.max(1);
    if jobs == 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let slots: Mutex<Vec<Option<R>>> =
        Mutex::new((0..items.len()).map(|_| None).collect());
    let work: Mutex<Vec<(usize, T)>> =
        Mutex::new(items.into_iter().enumerate().rev().collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let next = work.lock().unwrap().pop();
                match next {
                    Some((i, item)) => {
                        let r = f(item);
                        slots.lock().unwrap()[i] = Some(r);
                    }
                    None => break,
                }
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|r| r.unwrap()).collect()
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Measure { file, env, max_bits } => {
            let f = parse::formula::parse_formula(&read(&file)?).map_err(Failure::Parse)?;
            let env = env_of(&env)?;
            match measure(&f, &env, &measure_cfg(max_bits)) {
                Ok(m) => {
                    println!("{}", m.to_plain_string());
                    Ok(())
                }
                Err(RlError::Budget { .. }) => {
                    println!("infeasible");
                    Err(Failure::Budget("relevant coordinate budget exceeded".into()))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Count { file, env, max_bits } => {
            let f = parse::formula::parse_formula(&read(&file)?).map_err(Failure::Parse)?;
            let env = env_of(&env)?;
            match counting_fraction(&f, &env, &measure_cfg(max_bits)) {
                Ok((count, total)) => {
                    println!("{count}/{total}");
                    Ok(())
                }
                Err(RlError::Budget { .. }) => {
                    println!("infeasible");
                    Err(Failure::Budget("relevant coordinate budget exceeded".into()))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Noterratic { file, inputs, env, max_bits, format } => {
            let f = parse::formula::parse_formula(&read(&file)?).map_err(Failure::Parse)?;
            let env = env_of(&env)?;
            let ins: Vec<BitString> = read_tuples(&inputs)?
                .into_iter()
                .map(|t| match t.as_slice() {
                    [one] => Ok(one.clone()),
                    [] => Ok(BitString::empty()),
                    _ => Err(Failure::Parse(
                        "inputs file must list one string per line".into(),
                    )),
                })
                .collect::<Result<_, _>>()?;
            let report = two_thirds_check(&f, "x", "y", &ins, &env, &measure_cfg(max_bits))?;
            for row in &report.rows {
                match (&row.witness, format) {
                    (Some((y, m)), Format::Text) => {
                        println!("input {}: advice {y} measure {m} ok", row.input)
                    }
                    (Some((y, m)), Format::Tsv) => {
                        println!("{}\t{y}\t{m}\tok", row.input)
                    }
                    (None, Format::Text) => {
                        println!("input {}: FAIL (best measure {})", row.input, row.best)
                    }
                    (None, Format::Tsv) => {
                        println!("{}\t-\t{}\tfail", row.input, row.best)
                    }
                }
            }
            if report.pass() { Ok(()) } else { Err(Failure::Verdict) }
        }
        Cmd::Por { cmd } => match cmd {
            PorCmd::Run { file, inputs, seed } => {
                let f = parse::por::parse_por(&read(&file)?).map_err(Failure::Parse)?;
                let args = bits_vec(&inputs)?;
                let v = f.eval(&args, &Oracle::new(seed))?;
                println!("{v}");
                Ok(())
            }
            PorCmd::Dist { file, inputs, max_bits } => {
                let f = parse::por::parse_por(&read(&file)?).map_err(Failure::Parse)?;
                let args = bits_vec(&inputs)?;
                let d = harness::exact_dist(
                    &Model::Por(f),
                    &args,
                    pick_max_bits(max_bits),
                    DEFAULT_FUEL,
                )?;
                print!("{}", d.render());
                Ok(())
            }
        },
        Cmd::Compile { stage, input, output, arity } => {
            let src = read(&input)?;
            let text = match stage {
                Stage::PorRa => {
                    let f = parse::por::parse_por(&src).map_err(Failure::Parse)?;
                    parse::sifp::render_program(&por_to_ra(&f)?)
                }
                Stage::RaLa => {
                    let p = parse::sifp::parse_program(&src).map_err(Failure::Parse)?;
                    if matches!(sifp::flavor(&p), Flavor::Stream | Flavor::Mixed) {
                        return Err(Failure::Parse(
                            "ra-la expects an oracle-flavor program".into(),
                        ));
                    }
                    parse::sifp::render_program(&ra_to_la(&p))
                }
                Stage::LaOd => {
                    let p = parse::sifp::parse_program(&src).map_err(Failure::Parse)?;
                    let n = arity.unwrap_or_else(|| max_input_reg(&p));
                    parse::machine::render_machine(&la_to_machine(&p, n)?)
                }
                Stage::OdStm => {
                    let m = parse::machine::parse_machine(&src).map_err(Failure::Parse)?;
                    parse::machine::render_machine(&od_to_stm(&m)?)
                }
                Stage::StmPtm => {
                    let m = parse::machine::parse_machine(&src).map_err(Failure::Parse)?;
                    parse::machine::render_machine(&stm_to_ptm(&m)?)
                }
            };
            write(&output, &text)
        }
        Cmd::Sifp { cmd } => match cmd {
            SifpCmd::Run { file, inputs, seed, fuel, trace } => {
                let p = parse::sifp::parse_program(&read(&file)?).map_err(Failure::Parse)?;
                let args = bits_vec(&inputs)?;
                let fuel = pick_fuel(fuel, DEFAULT_FUEL);
                let store = Store::with_inputs(&args);
                let mut log = |s: &Stmt, st: &Store| {
                    if let Some(line) = trace_line(s, st) {
                        println!("{line}");
                    }
                };
                let tracer: Option<sifp::Tracer> =
                    if trace { Some(&mut log as sifp::Tracer) } else { None };
                let final_store = match sifp::flavor(&p) {
                    Flavor::Stream => {
                        let s = Stream::new(seed);
                        let (st, consumed) = sifp::run_stream(&p, store, &s, fuel, tracer)?;
                        if trace {
                            println!("consumed {consumed}");
                        }
                        st
                    }
                    _ => {
                        let o = Oracle::new(seed);
                        sifp::run_oracle(&p, store, &o, fuel, tracer)?
                    }
                };
                println!("{}", final_store.get(Reg::R));
                Ok(())
            }
        },
        Cmd::Machine { cmd } => match cmd {
            MachineCmd::Run { file, inputs, seed, fuel, trace } => {
                let m = parse::machine::parse_machine(&read(&file)?).map_err(Failure::Parse)?;
                let args = bits_vec(&inputs)?;
                let fuel = pick_fuel(fuel, DEFAULT_MACHINE_FUEL);
                let s = Stream::new(seed);
                let names = m.state_names.clone();
                let mut log = |step: u64, c: &flipbench_core::machine::Config| {
                    println!("step {step} state {}", names[c.state]);
                };
                let tracer = if trace {
                    Some(&mut log as flipbench_core::machine::MachineTracer)
                } else {
                    None
                };
                let out = m.run(&args, &s, fuel, tracer)?;
                println!("output {}", out.output);
                println!("steps {}", out.steps);
                println!("consumed {}", out.consumed);
                Ok(())
            }
        },
        Cmd::Equiv { file, inputs, max_bits, fuel, format, jobs } => {
            let f = parse::por::parse_por(&read(&file)?).map_err(Failure::Parse)?;
            let tuples = read_tuples(&inputs)?;
            let max_bits = pick_max_bits(max_bits);
            let fuel = pick_fuel(fuel, DEFAULT_MACHINE_FUEL);
            let chain = Chain::build(&f)?;
            let stages = chain.stages();
            let rows = par_map(jobs, tuples, |tuple| {
                let mut digests = Vec::new();
                for (name, model) in &stages {
                    let d = harness::exact_dist(model, &tuple, max_bits, fuel)
                        .map(|d| parse::digest(&d.render()));
                    digests.push((*name, d));
                }
                (tuple, digests)
            });
            let mut all_ok = true;
            for (tuple, digests) in rows {
                let shown = if tuple.is_empty() {
                    "-".to_string()
                } else {
                    tuple
                        .iter()
                        .map(|b| b.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let reference = match &digests[0].1 {
                    Ok(d) => d.clone(),
                    Err(e) => return Err(e.clone().into()),
                };
                for (i, (name, dig)) in digests.iter().enumerate() {
                    let dig = match dig {
                        Ok(d) => d,
                        Err(e) => return Err(e.clone().into()),
                    };
                    let verdict = if i == 0 {
                        "reference"
                    } else if *dig == reference {
                        "ok"
                    } else {
                        all_ok = false;
                        "MISMATCH"
                    };
                    match format {
                        Format::Text => {
                            println!("input {shown:12} stage {name:4} {dig} {verdict}")
                        }
                        Format::Tsv => println!("{shown}\t{name}\t{dig}\t{verdict}"),
                    }
                }
            }
            if format == Format::Text {
                println!("all stages agree: {}", if all_ok { "yes" } else { "no" });
            }
            if all_ok { Ok(()) } else { Err(Failure::Verdict) }
        }
        Cmd::Pzt { cmd } => match cmd {
            PztCmd::Test { file, seed, iters, rho } => {
                let c = parse::circuit::parse_circuit(&read(&file)?).map_err(Failure::Parse)?;
                let out = pzt::pzt_run(&c, rho, iters, seed)?;
                match out.verdict {
                    Verdict::Zero => {
                        println!("accept");
                        Ok(())
                    }
                    Verdict::NonZero => {
                        println!("reject");
                        Err(Failure::Verdict)
                    }
                }
            }
            PztCmd::ErrorRate { file, trials, seed, iters, rho, jobs } => {
                let c = parse::circuit::parse_circuit(&read(&file)?).map_err(Failure::Parse)?;
                if trials == 0 {
                    return Err(Failure::Parse("--trials must be positive".into()));
                }
                let jobs = jobs.max(1).min(trials as usize);
                let chunk = trials.div_ceil(jobs as u64);
                let ranges: Vec<(u64, u64)> = (0..trials)
                    .step_by(chunk as usize)
                    .map(|start| (start, chunk.min(trials - start)))
                    .collect();
                let parts = par_map(jobs, ranges, |(start, len)| {
                    pzt::error_rate(&c, rho, iters, len, seed + start)
                });
                let mut wrong = 0u64;
                for p in parts {
                    wrong += p?.wrong;
                }
                let rate = wrong as f64 / trials as f64;
                let upper = pzt::wilson_upper(wrong, trials);
                println!("wrong {wrong}");
                println!("trials {trials}");
                println!("rate {rate:.6}");
                println!("wilson99 {upper:.6}");
                if upper < 1.0 / 3.0 { Ok(()) } else { Err(Failure::Verdict) }
            }
            PztCmd::SzCheck => {
                let r = pzt::sz_exhaustive_check();
                println!("checked {}", r.checked);
                println!("violations {}", r.violations);
                if r.violations == 0 { Ok(()) } else { Err(Failure::Verdict) }
            }
            PztCmd::Primes { m_range } => {
                let (a, b) = m_range
                    .split_once("..")
                    .and_then(|(a, b)| Some((a.parse::<u32>().ok()?, b.parse::<u32>().ok()?)))
                    .ok_or_else(|| {
                        Failure::Parse(format!("--m-range expects a..b, got {m_range:?}"))
                    })?;
                let mut all_ok = true;
                for m in a..=b {
                    let ok = pzt::prime_density_holds(m);
                    all_ok &= ok;
                    println!("m={m} {}", if ok { "ok" } else { "FAIL" });
                }
                if all_ok { Ok(()) } else { Err(Failure::Verdict) }
            }
        },
        Cmd::Pit { p, q, seed, iters, rho } => {
            let cp = parse::circuit::parse_circuit(&read(&p)?).map_err(Failure::Parse)?;
            let cq = parse::circuit::parse_circuit(&read(&q)?).map_err(Failure::Parse)?;
            let joined = pzt::pit_to_pzt(&cp, &cq)?;
            let out = pzt::pzt_run(&joined, rho, iters, seed)?;
            match out.verdict {
                Verdict::Zero => {
                    println!("equal");
                    Ok(())
                }
                Verdict::NonZero => {
                    println!("different");
                    Err(Failure::Verdict)
                }
            }
        }
    }
}

/// Highest X register mentioned, used as the default machine input arity.
fn max_input_reg(p: &Stmt) -> usize {
    fn expr(e: &sifp::Expr, best: &mut usize) {
        match e {
            sifp::Expr::Eps => {}
            sifp::Expr::Id(r) => reg(r, best),
            sifp::Expr::App(i, _) | sifp::Expr::Not(i) => expr(i, best),
            sifp::Expr::SubEq(i, r) | sifp::Expr::And(i, r) => {
                expr(i, best);
                reg(r, best);
            }
        }
    }
    fn reg(r: &Reg, best: &mut usize) {
        if let Reg::X(i) = r {
            *best = (*best).max(*i as usize);
        }
    }
    fn stmt(s: &Stmt, best: &mut usize) {
        match s {
            Stmt::Assign(r, e) => {
                reg(r, best);
                expr(e, best);
            }
            Stmt::Seq(a, b) => {
                stmt(a, best);
                stmt(b, best);
            }
            Stmt::While(g, b) => {
                expr(g, best);
                stmt(b, best);
            }
            Stmt::Flip(e) => expr(e, best),
            Stmt::RandBit => {}
        }
    }
    let mut best = 0;
    stmt(p, &mut best);
    best
}

/// One line per effectful statement under `--trace`.
fn trace_line(s: &Stmt, st: &Store) -> Option<String> {
    match s {
        Stmt::Assign(r, _) => Some(format!("{r} = {}", st.get(*r))),
        Stmt::Flip(_) | Stmt::RandBit => Some(format!("R = {}", st.get(Reg::R))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_input_reg_scans_everywhere() {
        let p = parse::sifp::parse_program(
            "R := X2; while X3 sub R { flip X1 }; Y1 := eps",
        )
        .unwrap();
        assert_eq!(max_input_reg(&p), 3);
    }

    #[test]
    fn par_map_preserves_order() {
        let out = par_map(4, (0..100).collect::<Vec<_>>(), |x| x * 2);
        assert_eq!(out, (0..100).map(|x| x * 2).collect::<Vec<_>>());
    }
}
