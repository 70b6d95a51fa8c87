//! Stream-driven multi-tape machines.
//!
//! Three kinds share one transition table shape:
//!
//! * **On-demand**: a transition is labeled with an oracle bit or with the
//!   neutral label `#`; neutral steps do not consume stream bits, labeled
//!   steps consume exactly one and fire only when it matches.
//! * **Canonical**: every transition is labeled; one stream bit is consumed
//!   on every step.
//! * **Two-table** (`Ptm`): the labels partition the table into two
//!   transition functions; at step `n` the machine applies the function
//!   selected by stream bit `n`, staying in place when it is undefined at
//!   the current configuration. Randomness is indexed by the global step
//!   counter rather than consumed.
//!
//! A configuration is a state plus one two-way tape per track; heads read
//! the cell under them, and a machine's output is the longest blank-free
//! suffix strictly to the left of the output tape's head. Read patterns may
//! be wildcards and writes may keep the current symbol, with determinism
//! checked over overlapping patterns.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bitstring::BitString;
use crate::dist::{DistBuilder, Distribution};
use crate::dyadic::Dyadic;
use crate::randomness::{Exhausted, StreamSource};

/// A tape symbol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Sym {
    Zero,
    One,
    Blank,
}

impl Sym {
    pub fn bit(b: bool) -> Sym {
        if b { Sym::One } else { Sym::Zero }
    }
}

/// What a transition requires of one tape's current cell.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReadPat {
    Sym(Sym),
    Any,
}

impl ReadPat {
    fn matches(self, s: Sym) -> bool {
        match self {
            ReadPat::Sym(p) => p == s,
            ReadPat::Any => true,
        }
    }

    fn overlaps(self, other: ReadPat) -> bool {
        match (self, other) {
            (ReadPat::Any, _) | (_, ReadPat::Any) => true,
            (ReadPat::Sym(a), ReadPat::Sym(b)) => a == b,
        }
    }
}

/// What a transition writes on one tape.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WriteOp {
    Sym(Sym),
    Keep,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Move {
    L,
    R,
    S,
}

/// The randomness label on a transition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Label {
    Bit(bool),
    /// Neutral: fires regardless of the stream, consuming nothing.
    /// Only on-demand machines may use it.
    Natural,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transition {
    pub from: usize,
    pub reads: Vec<ReadPat>,
    pub label: Label,
    pub to: usize,
    pub writes: Vec<WriteOp>,
    pub moves: Vec<Move>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MachineKind {
    OnDemand,
    Canonical,
    /// Two transition tables selected by the step-indexed stream bit.
    Ptm,
}

#[derive(Clone, Debug)]
pub struct Machine {
    pub kind: MachineKind,
    pub tapes: usize,
    pub state_names: Vec<String>,
    pub start: usize,
    pub halts: BTreeSet<usize>,
    pub transitions: Vec<Transition>,
    /// Tape whose head-left content is the machine's output.
    pub output_tape: usize,
    /// Tapes that receive the run's inputs, in argument order.
    pub input_tapes: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MachineError {
    Invalid(Vec<String>),
    /// No transition applies outside a halt state.
    Stuck { state: usize, step: u64 },
    FuelExhausted,
    /// The stream ran out (finite or partial sources only).
    RandomnessExhausted,
    /// Two transitions can fire on the same configuration and bit.
    Nondeterministic { state: usize },
    /// Exact enumeration exceeded its branching budget.
    BranchBudget { max_bits: usize },
}

impl core::fmt::Display for MachineError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MachineError::Invalid(msgs) => write!(f, "invalid machine: {}", msgs.join("; ")),
            MachineError::Stuck { state, step } => {
                write!(f, "stuck in state {state} at step {step} (no applicable transition)")
            }
            MachineError::FuelExhausted => write!(f, "fuel exhausted"),
            MachineError::RandomnessExhausted => write!(f, "randomness exhausted"),
            MachineError::Nondeterministic { state } => {
                write!(f, "overlapping transitions from state {state}")
            }
            MachineError::BranchBudget { max_bits } => {
                write!(f, "exact enumeration exceeded {max_bits} branching bits")
            }
        }
    }
}

/// One two-way tape. The head sits on `right[0]`; cells spread blank in
/// both directions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tape {
    left: Vec<Sym>, // cells left of the head, nearest last
    right: Vec<Sym>, // head cell first
}

impl Tape {
    pub fn empty() -> Self {
        Tape { left: Vec::new(), right: Vec::new() }
    }

    /// A tape holding `s` with the head on its first bit.
    pub fn with_value(s: &BitString) -> Self {
        Tape { left: Vec::new(), right: s.bits().iter().map(|&b| Sym::bit(b)).collect() }
    }

    pub fn read(&self) -> Sym {
        self.right.first().copied().unwrap_or(Sym::Blank)
    }

    fn write(&mut self, s: Sym) {
        if self.right.is_empty() {
            self.right.push(s);
        } else {
            self.right[0] = s;
        }
    }

    fn shift(&mut self, m: Move) {
        match m {
            Move::S => {}
            Move::R => {
                let cur = if self.right.is_empty() { Sym::Blank } else { self.right.remove(0) };
                self.left.push(cur);
            }
            Move::L => {
                let cur = self.left.pop().unwrap_or(Sym::Blank);
                self.right.insert(0, cur);
            }
        }
        self.trim();
    }

    fn trim(&mut self) {
        while self.right.last() == Some(&Sym::Blank) {
            self.right.pop();
        }
        while self.left.first() == Some(&Sym::Blank) {
            self.left.remove(0);
        }
    }

    /// The longest blank-free suffix of the cells left of the head.
    pub fn output(&self) -> BitString {
        let mut bits = Vec::new();
        for &s in self.left.iter().rev() {
            match s {
                Sym::Zero => bits.push(false),
                Sym::One => bits.push(true),
                Sym::Blank => break,
            }
        }
        bits.reverse();
        BitString::from_bits(bits)
    }
}

/// A machine configuration: state and tapes. Stream position is tracked by
/// the runner, not the configuration, since the future behavior under a
/// fresh uniform stream depends only on state and tapes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Config {
    pub state: usize,
    pub tapes: Vec<Tape>,
}

impl Config {
    fn reads(&self) -> Vec<Sym> {
        self.tapes.iter().map(|t| t.read()).collect()
    }
}

/// Result of one run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RunOutcome {
    pub output: BitString,
    pub steps: u64,
    /// Stream bits consumed (for two-table machines: steps taken).
    pub consumed: usize,
    pub final_config: Config,
}

pub const DEFAULT_MACHINE_FUEL: u64 = 10_000_000;

/// Observer invoked on every step with the step index and configuration.
pub type MachineTracer<'a> = &'a mut dyn FnMut(u64, &Config);

impl Machine {
    /// Check shape and determinism.
    pub fn validate(&self) -> Result<(), MachineError> {
        let mut errs = Vec::new();
        let n_states = self.state_names.len();
        if self.start >= n_states {
            errs.push(alloc::format!("start state {} out of range", self.start));
        }
        if self.output_tape >= self.tapes {
            errs.push(alloc::format!("output tape {} out of range", self.output_tape));
        }
        for h in &self.halts {
            if *h >= n_states {
                errs.push(alloc::format!("halt state {h} out of range"));
            }
        }
        for t in &self.input_tapes {
            if *t >= self.tapes {
                errs.push(alloc::format!("input tape {t} out of range"));
            }
        }
        for (i, t) in self.transitions.iter().enumerate() {
            if t.from >= n_states || t.to >= n_states {
                errs.push(alloc::format!("transition {i} references an unknown state"));
            }
            if t.reads.len() != self.tapes
                || t.writes.len() != self.tapes
                || t.moves.len() != self.tapes
            {
                errs.push(alloc::format!(
                    "transition {i} has the wrong number of per-tape entries"
                ));
            }
            if t.label == Label::Natural && self.kind != MachineKind::OnDemand {
                errs.push(alloc::format!(
                    "transition {i} uses the neutral label on a {:?} machine",
                    self.kind
                ));
            }
        }
        // Determinism: no two transitions from the same state may overlap on
        // reads and fire on the same stream bit. A neutral transition
        // overlapping a labeled one is ambiguous too.
        for (i, a) in self.transitions.iter().enumerate() {
            for b in self.transitions.iter().skip(i + 1) {
                if a.from != b.from || a.reads.len() != b.reads.len() {
                    continue;
                }
                let reads_overlap =
                    a.reads.iter().zip(&b.reads).all(|(x, y)| x.overlaps(*y));
                if !reads_overlap {
                    continue;
                }
                let labels_clash = match (a.label, b.label) {
                    (Label::Natural, _) | (_, Label::Natural) => true,
                    (Label::Bit(x), Label::Bit(y)) => x == y,
                };
                if labels_clash {
                    errs.push(alloc::format!(
                        "transitions from state {} overlap ({} and {})",
                        a.from,
                        self.state_names[a.from],
                        if a.label == b.label { "same label" } else { "neutral vs labeled" },
                    ));
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(MachineError::Invalid(errs))
        }
    }

    pub fn initial_config(&self, inputs: &[BitString]) -> Result<Config, MachineError> {
        if inputs.len() != self.input_tapes.len() {
            return Err(MachineError::Invalid(alloc::vec![alloc::format!(
                "machine takes {} inputs, got {}",
                self.input_tapes.len(),
                inputs.len()
            )]));
        }
        let mut tapes = alloc::vec![Tape::empty(); self.tapes];
        for (tape, v) in self.input_tapes.iter().zip(inputs) {
            tapes[*tape] = Tape::with_value(v);
        }
        Ok(Config { state: self.start, tapes })
    }

    fn applicable<'a>(&'a self, c: &Config, label: Label) -> Option<&'a Transition> {
        let reads = c.reads();
        self.transitions.iter().find(|t| {
            t.from == c.state
                && t.label == label
                && t.reads.iter().zip(&reads).all(|(p, &s)| p.matches(s))
        })
    }

    fn apply(&self, c: &Config, t: &Transition) -> Config {
        let mut out = c.clone();
        out.state = t.to;
        for (i, tape) in out.tapes.iter_mut().enumerate() {
            match t.writes[i] {
                WriteOp::Sym(s) => tape.write(s),
                WriteOp::Keep => {}
            }
            tape.shift(t.moves[i]);
        }
        out
    }

    /// Run to a halt state under the given stream.
    pub fn run(
        &self,
        inputs: &[BitString],
        stream: &dyn StreamSource,
        fuel: u64,
        mut tracer: Option<MachineTracer<'_>>,
    ) -> Result<RunOutcome, MachineError> {
        self.validate()?;
        let mut c = self.initial_config(inputs)?;
        let mut consumed = 0usize;
        let mut steps = 0u64;
        loop {
            if let Some(t) = tracer.as_mut() {
                t(steps, &c);
            }
            if self.halts.contains(&c.state) {
                return Ok(RunOutcome {
                    output: c.tapes[self.output_tape].output(),
                    steps,
                    consumed,
                    final_config: c,
                });
            }
            if steps >= fuel {
                return Err(MachineError::FuelExhausted);
            }
            c = match self.kind {
                MachineKind::OnDemand => {
                    if let Some(t) = self.applicable(&c, Label::Natural) {
                        self.apply(&c, t)
                    } else {
                        let b = stream
                            .bit(consumed)
                            .map_err(|_: Exhausted| MachineError::RandomnessExhausted)?;
                        consumed += 1;
                        match self.applicable(&c, Label::Bit(b)) {
                            Some(t) => self.apply(&c, t),
                            None => return Err(MachineError::Stuck { state: c.state, step: steps }),
                        }
                    }
                }
                MachineKind::Canonical => {
                    let b = stream
                        .bit(consumed)
                        .map_err(|_: Exhausted| MachineError::RandomnessExhausted)?;
                    consumed += 1;
                    match self.applicable(&c, Label::Bit(b)) {
                        Some(t) => self.apply(&c, t),
                        None => return Err(MachineError::Stuck { state: c.state, step: steps }),
                    }
                }
                MachineKind::Ptm => {
                    // Step-indexed randomness; undefined means stay put.
                    let b = stream
                        .bit(consumed)
                        .map_err(|_: Exhausted| MachineError::RandomnessExhausted)?;
                    consumed += 1;
                    match self.applicable(&c, Label::Bit(b)) {
                        Some(t) => self.apply(&c, t),
                        None => c,
                    }
                }
            };
            steps += 1;
        }
    }

    /// Successor of a configuration given the next stream bit, or an error
    /// if the machine is stuck. `None` consumed means the step was neutral.
    fn step_with_bit(&self, c: &Config, b: bool) -> Result<Config, MachineError> {
        match self.kind {
            MachineKind::OnDemand | MachineKind::Canonical => {
                match self.applicable(&c, Label::Bit(b)) {
                    Some(t) => Ok(self.apply(c, t)),
                    None => Err(MachineError::Stuck { state: c.state, step: 0 }),
                }
            }
            MachineKind::Ptm => Ok(match self.applicable(&c, Label::Bit(b)) {
                Some(t) => self.apply(c, t),
                None => c.clone(),
            }),
        }
    }

    /// Exact output distribution by symbolic execution: deterministic steps
    /// advance directly, and a consumed stream bit forks the run only when
    /// the two successor configurations differ (identical successors merge,
    /// keeping the leaf count at `2^(effective branch bits)`).
    pub fn exact_dist(
        &self,
        inputs: &[BitString],
        max_bits: usize,
        fuel: u64,
    ) -> Result<Distribution, MachineError> {
        self.validate()?;
        let mut builder = DistBuilder::new();
        let init = self.initial_config(inputs)?;
        // Depth-first over (config, forks so far).
        let mut stack = alloc::vec![(init, 0usize)];
        while let Some((mut c, mut forks)) = stack.pop() {
            let mut steps = 0u64;
            loop {
                if self.halts.contains(&c.state) {
                    builder.add(
                        c.tapes[self.output_tape].output(),
                        Dyadic::pow2_inverse(forks as u64),
                    );
                    break;
                }
                if steps >= fuel {
                    return Err(MachineError::FuelExhausted);
                }
                steps += 1;
                if self.kind == MachineKind::OnDemand {
                    if let Some(t) = self.applicable(&c, Label::Natural) {
                        c = self.apply(&c, t);
                        continue;
                    }
                }
                let c0 = self.step_with_bit(&c, false)?;
                let c1 = self.step_with_bit(&c, true)?;
                if c0 == c1 {
                    c = c0;
                } else {
                    if forks >= max_bits {
                        return Err(MachineError::BranchBudget { max_bits });
                    }
                    forks += 1;
                    stack.push((c1, forks));
                    c = c0;
                }
            }
        }
        Ok(builder
            .finish()
            .expect("merged symbolic execution preserves total mass"))
    }
}

/// Build a small single-tape canonical machine for tests and examples: it
/// copies `n` stream bits to the output then halts.
pub fn stream_copier(n: usize) -> Machine {
    let mut names: Vec<String> = (0..=n).map(|i| alloc::format!("s{i}")).collect();
    names.push(String::from("halt"));
    let mut transitions = Vec::new();
    for i in 0..n {
        for b in [false, true] {
            transitions.push(Transition {
                from: i,
                reads: alloc::vec![ReadPat::Any],
                label: Label::Bit(b),
                to: if i + 1 == n { n + 1 } else { i + 1 },
                writes: alloc::vec![WriteOp::Sym(Sym::bit(b))],
                moves: alloc::vec![Move::R],
            });
        }
    }
    let halts = [n + 1].into_iter().collect();
    Machine {
        kind: MachineKind::Canonical,
        tapes: 1,
        state_names: names,
        start: 0,
        halts,
        transitions,
        output_tape: 0,
        input_tapes: Vec::new(),
    }
}
