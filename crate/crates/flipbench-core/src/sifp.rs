//! A small imperative language over bit-string registers.
//!
//! Programs are assignments, sequencing, and while loops whose guard must
//! evaluate to the one-bit string `1` to continue. Expressions read
//! registers (unbound registers hold `eps`), append constant bits, and
//! compute three tests that return `1`/`0` as strings: prefix (`e sub R`),
//! conjunction (`e and R`, which is `1` exactly when both sides are the
//! string `1`), and negation (`not e`, which is `1` exactly when `e` is the
//! string `0`).
//!
//! Randomness comes in two flavors that never mix in one program: `flip e`
//! queries an oracle at the coordinate `e` evaluates to, while `randbit`
//! consumes the next bit of a stream. Both load the bit into register `R`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bitstring::BitString;
use crate::randomness::{Exhausted, OracleSource, StreamSource};

/// A register. Indices are 1-based in the surface syntax (`X1`, `S3`, ...).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Reg {
    X(u32),
    Y(u32),
    S(u32),
    R,
    Q,
    Z,
    T,
}

impl core::fmt::Display for Reg {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Reg::X(i) => write!(f, "X{i}"),
            Reg::Y(i) => write!(f, "Y{i}"),
            Reg::S(i) => write!(f, "S{i}"),
            Reg::R => write!(f, "R"),
            Reg::Q => write!(f, "Q"),
            Reg::Z => write!(f, "Z"),
            Reg::T => write!(f, "T"),
        }
    }
}

/// A string expression.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Eps,
    /// `e.0` / `e.1`: append a constant bit.
    App(Box<Expr>, bool),
    Id(Reg),
    /// `e sub R`: 1 if the value of `e` is a prefix of the register, else 0.
    SubEq(Box<Expr>, Reg),
    /// `e and R`: 1 if both the value of `e` and the register are `1`, else 0.
    And(Box<Expr>, Reg),
    /// `not e`: 1 if the value of `e` is `0`, else 0.
    Not(Box<Expr>),
}

impl Expr {
    pub fn app(e: Expr, b: bool) -> Expr {
        Expr::App(Box::new(e), b)
    }

    pub fn sub_eq(e: Expr, r: Reg) -> Expr {
        Expr::SubEq(Box::new(e), r)
    }

    pub fn and(e: Expr, r: Reg) -> Expr {
        Expr::And(Box::new(e), r)
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }
}

/// A statement.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Stmt {
    Assign(Reg, Expr),
    Seq(Box<Stmt>, Box<Stmt>),
    While(Expr, Box<Stmt>),
    /// Oracle flavor: `R := omega(e)`.
    Flip(Expr),
    /// Stream flavor: `R := next stream bit`.
    RandBit,
}

impl Stmt {
    pub fn seq(a: Stmt, b: Stmt) -> Stmt {
        Stmt::Seq(Box::new(a), Box::new(b))
    }

    pub fn seq_all(stmts: Vec<Stmt>) -> Stmt {
        let mut it = stmts.into_iter();
        let first = it.next().unwrap_or(Stmt::Assign(Reg::Z, Expr::Id(Reg::Z)));
        it.fold(first, Stmt::seq)
    }

    pub fn while_loop(guard: Expr, body: Stmt) -> Stmt {
        Stmt::While(guard, Box::new(body))
    }
}

/// Which randomness primitives a program uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Flavor {
    Pure,
    /// Only `flip` (oracle access).
    Oracle,
    /// Only `randbit` (stream access).
    Stream,
    /// Both primitives appear; such programs are rejected by the runners.
    Mixed,
}

impl Flavor {
    fn join(self, other: Flavor) -> Flavor {
        use Flavor::*;
        match (self, other) {
            (Pure, f) | (f, Pure) => f,
            (Oracle, Oracle) => Oracle,
            (Stream, Stream) => Stream,
            _ => Mixed,
        }
    }
}

pub fn flavor(s: &Stmt) -> Flavor {
    match s {
        Stmt::Assign(_, _) => Flavor::Pure,
        Stmt::Seq(a, b) => flavor(a).join(flavor(b)),
        Stmt::While(_, b) => flavor(b),
        Stmt::Flip(_) => Flavor::Oracle,
        Stmt::RandBit => Flavor::Stream,
    }
}

/// The register store; unbound registers read as `eps`.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Store {
    regs: BTreeMap<Reg, BitString>,
}

impl Store {
    pub fn new() -> Self {
        Store::default()
    }

    /// Load `X1..Xn` from the inputs.
    pub fn with_inputs(inputs: &[BitString]) -> Self {
        let mut s = Store::new();
        for (i, v) in inputs.iter().enumerate() {
            s.set(Reg::X(i as u32 + 1), v.clone());
        }
        s
    }

    pub fn get(&self, r: Reg) -> BitString {
        self.regs.get(&r).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: Reg, v: BitString) {
        self.regs.insert(r, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Reg, &BitString)> {
        self.regs.iter()
    }
}

pub fn eval_expr(e: &Expr, store: &Store) -> BitString {
    let truth = |b: bool| BitString::bit(b);
    match e {
        Expr::Eps => BitString::empty(),
        Expr::App(e, b) => {
            let mut v = eval_expr(e, store);
            v.push(*b);
            v
        }
        Expr::Id(r) => store.get(*r),
        Expr::SubEq(e, r) => truth(eval_expr(e, store).is_prefix_of(&store.get(*r))),
        Expr::And(e, r) => {
            let one = BitString::bit(true);
            truth(eval_expr(e, store) == one && store.get(*r) == one)
        }
        Expr::Not(e) => truth(eval_expr(e, store) == BitString::bit(false)),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SifpError {
    /// Statement budget exhausted before the program terminated.
    FuelExhausted,
    /// The randomness source ran out (finite or partial sources only).
    RandomnessExhausted,
    /// The program uses the other flavor's primitive (or both).
    WrongFlavor { expected: Flavor, found: Flavor },
}

impl core::fmt::Display for SifpError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SifpError::FuelExhausted => write!(f, "fuel exhausted"),
            SifpError::RandomnessExhausted => write!(f, "randomness exhausted"),
            SifpError::WrongFlavor { expected, found } => {
                write!(f, "program flavor {found:?} does not match runner {expected:?}")
            }
        }
    }
}

/// Default statement budget for the runners.
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Observer invoked after each executed statement (assignments, flips,
/// random bits; not the structural seq/while nodes).
pub type Tracer<'a> = &'a mut dyn FnMut(&Stmt, &Store);

enum Rand<'a> {
    Oracle(&'a dyn OracleSource),
    Stream(&'a dyn StreamSource, usize),
}

struct Runner<'a> {
    store: Store,
    rand: Rand<'a>,
    fuel: u64,
    tracer: Option<Tracer<'a>>,
}

impl Runner<'_> {
    fn burn(&mut self) -> Result<(), SifpError> {
        if self.fuel == 0 {
            return Err(SifpError::FuelExhausted);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn exec(&mut self, s: &Stmt) -> Result<(), SifpError> {
        match s {
            Stmt::Assign(r, e) => {
                self.burn()?;
                let v = eval_expr(e, &self.store);
                self.store.set(*r, v);
                self.trace(s);
            }
            Stmt::Seq(a, b) => {
                self.exec(a)?;
                self.exec(b)?;
            }
            Stmt::While(guard, body) => loop {
                self.burn()?;
                if eval_expr(guard, &self.store) != BitString::bit(true) {
                    break;
                }
                self.exec(body)?;
            },
            Stmt::Flip(e) => {
                self.burn()?;
                let coord = eval_expr(e, &self.store);
                let b = match &self.rand {
                    Rand::Oracle(o) => o
                        .query(&coord)
                        .map_err(|_: Exhausted| SifpError::RandomnessExhausted)?,
                    Rand::Stream(_, _) => unreachable!("flavor checked before execution"),
                };
                self.store.set(Reg::R, BitString::bit(b));
                self.trace(s);
            }
            Stmt::RandBit => {
                self.burn()?;
                let b = match &mut self.rand {
                    Rand::Stream(st, pos) => {
                        let b = st
                            .bit(*pos)
                            .map_err(|_: Exhausted| SifpError::RandomnessExhausted)?;
                        *pos += 1;
                        b
                    }
                    Rand::Oracle(_) => unreachable!("flavor checked before execution"),
                };
                self.store.set(Reg::R, BitString::bit(b));
                self.trace(s);
            }
        }
        Ok(())
    }

    fn trace(&mut self, s: &Stmt) {
        if let Some(t) = self.tracer.as_mut() {
            t(s, &self.store);
        }
    }
}

fn check_flavor(p: &Stmt, expected: Flavor) -> Result<(), SifpError> {
    let found = flavor(p);
    if found == Flavor::Pure || found == expected {
        Ok(())
    } else {
        Err(SifpError::WrongFlavor { expected, found })
    }
}

/// Run an oracle-flavor program on a prepared store.
pub fn run_oracle<'a>(
    p: &Stmt,
    store: Store,
    oracle: &'a dyn OracleSource,
    fuel: u64,
    tracer: Option<Tracer<'a>>,
) -> Result<Store, SifpError> {
    check_flavor(p, Flavor::Oracle)?;
    let mut r = Runner { store, rand: Rand::Oracle(oracle), fuel, tracer };
    r.exec(p)?;
    Ok(r.store)
}

/// Run a stream-flavor program; returns the final store and the number of
/// stream bits consumed.
pub fn run_stream<'a>(
    p: &Stmt,
    store: Store,
    stream: &'a dyn StreamSource,
    fuel: u64,
    tracer: Option<Tracer<'a>>,
) -> Result<(Store, usize), SifpError> {
    check_flavor(p, Flavor::Stream)?;
    let mut r = Runner { store, rand: Rand::Stream(stream, 0), fuel, tracer };
    r.exec(p)?;
    let consumed = match r.rand {
        Rand::Stream(_, pos) => pos,
        _ => unreachable!(),
    };
    Ok((r.store, consumed))
}

/// Load the inputs into `X1..Xn`, run, and return the final `R`.
pub fn eval_program_oracle(
    p: &Stmt,
    inputs: &[BitString],
    oracle: &dyn OracleSource,
    fuel: u64,
) -> Result<BitString, SifpError> {
    let store = run_oracle(p, Store::with_inputs(inputs), oracle, fuel, None)?;
    Ok(store.get(Reg::R))
}

/// Stream-flavor analogue of [`eval_program_oracle`].
pub fn eval_program_stream(
    p: &Stmt,
    inputs: &[BitString],
    stream: &dyn StreamSource,
    fuel: u64,
) -> Result<(BitString, usize), SifpError> {
    let (store, consumed) = run_stream(p, Store::with_inputs(inputs), stream, fuel, None)?;
    Ok((store.get(Reg::R), consumed))
}
