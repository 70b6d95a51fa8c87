//! An oracle-recursive function algebra over bit strings.
//!
//! Base functions: the empty function `E`, projections, the two append
//! successors, the 4-ary conditional `C` dispatching on the last bit of its
//! first argument, and the oracle query `Q`. Functions close under
//! composition and bounded recursion on notation: the recursion peels the
//! last bit of its designated argument and truncates every step's value at
//! a bound term drawn from the explicit-definition fragment (`eps`, `0`,
//! `1`, concatenation, repetition over the arguments).

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bitstring::{dyad_usize, BitString};
use crate::randomness::{Exhausted, OracleSource, RecordingOracle};

/// A bound term for recursion: the explicit-definition fragment only.
/// `Arg(i)` refers to position `i` of the enclosing function's arguments
/// (the recursion argument is the last position).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BoundTerm {
    Eps,
    Zero,
    One,
    Arg(usize),
    Concat(Box<BoundTerm>, Box<BoundTerm>),
    Times(Box<BoundTerm>, Box<BoundTerm>),
}

impl BoundTerm {
    pub fn concat(a: BoundTerm, b: BoundTerm) -> BoundTerm {
        BoundTerm::Concat(Box::new(a), Box::new(b))
    }

    pub fn times(a: BoundTerm, b: BoundTerm) -> BoundTerm {
        BoundTerm::Times(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, args: &[BitString]) -> BitString {
        match self {
            BoundTerm::Eps => BitString::empty(),
            BoundTerm::Zero => BitString::bit(false),
            BoundTerm::One => BitString::bit(true),
            BoundTerm::Arg(i) => args[*i].clone(),
            BoundTerm::Concat(a, b) => a.eval(args).concat(&b.eval(args)),
            BoundTerm::Times(a, b) => a.eval(args).times(&b.eval(args)),
        }
    }

    fn max_arg(&self) -> Option<usize> {
        match self {
            BoundTerm::Eps | BoundTerm::Zero | BoundTerm::One => None,
            BoundTerm::Arg(i) => Some(*i),
            BoundTerm::Concat(a, b) | BoundTerm::Times(a, b) => a.max_arg().max(b.max_arg()),
        }
    }
}

/// A function of the algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PorFn {
    /// `E(x, omega) = eps`; unary.
    Empty,
    /// `P^n_i(x1..xn, omega) = xi`; 1-based `i`.
    Proj { n: usize, i: usize },
    /// `S_b(x, omega) = x b`.
    Succ(bool),
    /// `C(eps, y, z0, z1) = y`; `C(x b, y, z0, z1) = z_b`.
    Cond,
    /// `Q(x, omega) = omega(x)` as a one-bit string.
    Query,
    /// `g(h1(args), .., hk(args))`.
    Compose { g: Box<PorFn>, hs: Vec<PorFn> },
    /// Bounded recursion on notation over the last argument:
    /// `f(xs, eps) = g(xs)`;
    /// `f(xs, y b) = h_b(xs, y, f(xs, y)) |_ t(xs, y)`.
    Rec { g: Box<PorFn>, h0: Box<PorFn>, h1: Box<PorFn>, bound: BoundTerm },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PorError {
    Invalid(Vec<String>),
    /// Called with the wrong number of arguments.
    Arity { expected: usize, got: usize },
    /// The oracle ran out (partial sources only).
    OracleExhausted,
}

impl core::fmt::Display for PorError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PorError::Invalid(msgs) => write!(f, "invalid function: {}", msgs.join("; ")),
            PorError::Arity { expected, got } => {
                write!(f, "arity mismatch: expected {expected} arguments, got {got}")
            }
            PorError::OracleExhausted => write!(f, "oracle exhausted"),
        }
    }
}

impl PorFn {
    pub fn compose(g: PorFn, hs: Vec<PorFn>) -> PorFn {
        PorFn::Compose { g: Box::new(g), hs }
    }

    pub fn rec(g: PorFn, h0: PorFn, h1: PorFn, bound: BoundTerm) -> PorFn {
        PorFn::Rec { g: Box::new(g), h0: Box::new(h0), h1: Box::new(h1), bound }
    }

    /// Check well-formedness and return the arity.
    pub fn validate(&self) -> Result<usize, PorError> {
        let mut errs = Vec::new();
        let arity = self.check(&mut errs);
        match arity {
            Some(n) if errs.is_empty() => Ok(n),
            _ => Err(PorError::Invalid(errs)),
        }
    }

    fn check(&self, errs: &mut Vec<String>) -> Option<usize> {
        match self {
            PorFn::Empty | PorFn::Succ(_) | PorFn::Query => Some(1),
            PorFn::Cond => Some(4),
            PorFn::Proj { n, i } => {
                if *i == 0 || i > n {
                    errs.push(alloc::format!(
                        "projection index {i} out of range for arity {n}"
                    ));
                    None
                } else {
                    Some(*n)
                }
            }
            PorFn::Compose { g, hs } => {
                let g_arity = g.check(errs)?;
                if g_arity != hs.len() {
                    errs.push(alloc::format!(
                        "composition arity mismatch: outer function takes {g_arity} \
                         arguments but {} inner functions were given",
                        hs.len()
                    ));
                    return None;
                }
                let mut common: Option<usize> = None;
                for h in hs {
                    let a = h.check(errs)?;
                    match common {
                        None => common = Some(a),
                        Some(c) if c != a => {
                            errs.push(alloc::format!(
                                "inner functions disagree on arity: {c} vs {a}"
                            ));
                            return None;
                        }
                        _ => {}
                    }
                }
                common
            }
            PorFn::Rec { g, h0, h1, bound } => {
                let n = g.check(errs)?;
                let a0 = h0.check(errs)?;
                let a1 = h1.check(errs)?;
                if a0 != n + 2 || a1 != n + 2 {
                    errs.push(alloc::format!(
                        "recursion step arity must be {} (arguments, recursion prefix, \
                         previous value); got {a0} and {a1}",
                        n + 2
                    ));
                    return None;
                }
                if let Some(m) = bound.max_arg() {
                    if m > n {
                        errs.push(alloc::format!(
                            "bound term refers to argument {m} but only {} are in scope",
                            n + 1
                        ));
                        return None;
                    }
                }
                Some(n + 1)
            }
        }
    }

    /// Evaluate on the given arguments and oracle.
    pub fn eval<O: OracleSource + ?Sized>(
        &self,
        args: &[BitString],
        oracle: &O,
    ) -> Result<BitString, PorError> {
        let arity = self.validate()?;
        if args.len() != arity {
            return Err(PorError::Arity { expected: arity, got: args.len() });
        }
        self.eval_unchecked(args, oracle)
    }

    fn eval_unchecked<O: OracleSource + ?Sized>(
        &self,
        args: &[BitString],
        oracle: &O,
    ) -> Result<BitString, PorError> {
        Ok(match self {
            PorFn::Empty => BitString::empty(),
            PorFn::Proj { i, .. } => args[i - 1].clone(),
            PorFn::Succ(b) => {
                let mut s = args[0].clone();
                s.push(*b);
                s
            }
            PorFn::Cond => match args[0].split_last() {
                None => args[1].clone(),
                Some((_, false)) => args[2].clone(),
                Some((_, true)) => args[3].clone(),
            },
            PorFn::Query => {
                let b = oracle.query(&args[0]).map_err(|_: Exhausted| PorError::OracleExhausted)?;
                BitString::bit(b)
            }
            PorFn::Compose { g, hs } => {
                let mut inner = Vec::with_capacity(hs.len());
                for h in hs {
                    inner.push(h.eval_unchecked(args, oracle)?);
                }
                g.eval_unchecked(&inner, oracle)?
            }
            PorFn::Rec { g, h0, h1, bound } => {
                let (xs, y) = args.split_at(args.len() - 1);
                let y = &y[0];
                let mut acc = g.eval_unchecked(xs, oracle)?;
                let mut step_args: Vec<BitString> = xs.to_vec();
                step_args.push(BitString::empty()); // recursion prefix
                step_args.push(BitString::empty()); // previous value
                let mut bound_args: Vec<BitString> = xs.to_vec();
                bound_args.push(BitString::empty());
                for i in 0..y.len() {
                    let prefix = y.prefix(i);
                    let b = y.get(i).unwrap();
                    let n = xs.len();
                    step_args[n] = prefix.clone();
                    step_args[n + 1] = acc;
                    let h = if b { h1 } else { h0 };
                    let v = h.eval_unchecked(&step_args, oracle)?;
                    bound_args[n] = prefix;
                    let t = bound.eval(&bound_args);
                    acc = v.truncate_to(&t);
                }
                acc
            }
        })
    }

    /// The set of coordinates the oracle is asked for during one evaluation.
    pub fn queried_coords<O: OracleSource + ?Sized>(
        &self,
        args: &[BitString],
        oracle: &O,
    ) -> Result<BTreeSet<BitString>, PorError> {
        let rec = RecordingOracle::new(oracle);
        self.eval(args, &rec)?;
        Ok(rec.into_log())
    }
}

/// Iterated application with truncation: apply `f` to the running value and
/// the side arguments `|n|` times, truncating each result at the value of
/// `bound` (evaluated once, over the initial `x` and the side arguments).
pub fn sa_iterate<O: OracleSource + ?Sized>(
    f: &PorFn,
    bound: &BoundTerm,
    x: &BitString,
    n: &BitString,
    zs: &[BitString],
    oracle: &O,
) -> Result<BitString, PorError> {
    let arity = f.validate()?;
    if arity != zs.len() + 1 {
        return Err(PorError::Arity { expected: zs.len() + 1, got: arity });
    }
    let mut bound_args: Vec<BitString> = Vec::with_capacity(zs.len() + 1);
    bound_args.push(x.clone());
    bound_args.extend_from_slice(zs);
    let t = bound.eval(&bound_args);
    let mut acc = x.clone();
    for _ in 0..n.len() {
        let mut args: Vec<BitString> = Vec::with_capacity(zs.len() + 1);
        args.push(acc);
        args.extend_from_slice(zs);
        acc = f.eval_unchecked(&args, oracle)?.truncate_to(&t);
    }
    Ok(acc)
}

/// The extractor: `e(x, omega)` has one bit per bit of `x`, bit `j` being
/// the oracle's answer at the dyadic coordinate `dyad(j)`. Direct form.
pub fn extractor<O: OracleSource + ?Sized>(
    x: &BitString,
    oracle: &O,
) -> Result<BitString, PorError> {
    let mut out = BitString::empty();
    for j in 0..x.len() {
        let b = oracle
            .query(&dyad_usize(j))
            .map_err(|_: Exhausted| PorError::OracleExhausted)?;
        out.push(b);
    }
    Ok(out)
}

/// The extractor as a function of the algebra itself, recursing on its
/// single argument: `e(eps) = eps`, `e(x b) = e(x) . Q(dy(x))` where
/// `dy(x) = dyad(|x|)` is computed by a binary counter built from two inner
/// recursions (increment and leading-bit removal).
pub fn extractor_fn() -> PorFn {
    let p31 = PorFn::Proj { n: 3, i: 1 };
    let p32 = PorFn::Proj { n: 3, i: 2 };
    let p33 = PorFn::Proj { n: 3, i: 3 };

    // incr(d, y): binary increment of y (most-significant bit first), with a
    // dummy first argument so the recursion base has arity 1.
    // incr eps = 1; incr (y 0) = y 1; incr (y 1) = (incr y) 0.
    let incr = PorFn::rec(
        PorFn::compose(PorFn::Succ(true), alloc::vec![PorFn::Empty]),
        PorFn::compose(PorFn::Succ(true), alloc::vec![p32.clone()]),
        PorFn::compose(PorFn::Succ(false), alloc::vec![p33.clone()]),
        BoundTerm::concat(
            BoundTerm::concat(BoundTerm::Arg(1), BoundTerm::One),
            BoundTerm::One,
        ),
    );

    // u(d, y) = binary representation of |y| + 1: iterate incr |y| times
    // starting from "1".
    let u = PorFn::rec(
        PorFn::compose(PorFn::Succ(true), alloc::vec![PorFn::Empty]),
        PorFn::compose(incr.clone(), alloc::vec![p31.clone(), p33.clone()]),
        PorFn::compose(incr, alloc::vec![p31.clone(), p33.clone()]),
        BoundTerm::concat(
            BoundTerm::concat(BoundTerm::Arg(1), BoundTerm::One),
            BoundTerm::One,
        ),
    );

    // tail(d, y): y without its first bit.
    // tail eps = eps; tail (y b) = C(y, eps, tail(y) b, tail(y) b).
    let eps3 = PorFn::compose(PorFn::Empty, alloc::vec![p31.clone()]);
    let tail_step = |b: bool| {
        PorFn::compose(
            PorFn::Cond,
            alloc::vec![
                p32.clone(),
                eps3.clone(),
                PorFn::compose(PorFn::Succ(b), alloc::vec![p33.clone()]),
                PorFn::compose(PorFn::Succ(b), alloc::vec![p33.clone()]),
            ],
        )
    };
    let tail = PorFn::rec(
        PorFn::Empty,
        tail_step(false),
        tail_step(true),
        BoundTerm::Arg(1),
    );

    // dy(d, y) = tail(d, u(d, y)) = dyad(|y|).
    let p21 = PorFn::Proj { n: 2, i: 1 };
    let p22 = PorFn::Proj { n: 2, i: 2 };
    let dy = PorFn::compose(
        tail,
        alloc::vec![p21.clone(), PorFn::compose(u, alloc::vec![p21.clone(), p22])],
    );

    // e(d, y): append Q(dy(y')) at each recursion step.
    let step = PorFn::compose(
        PorFn::Cond,
        alloc::vec![
            PorFn::compose(
                PorFn::Query,
                alloc::vec![PorFn::compose(dy, alloc::vec![p31, p32])],
            ),
            p33.clone(),
            PorFn::compose(PorFn::Succ(false), alloc::vec![p33.clone()]),
            PorFn::compose(PorFn::Succ(true), alloc::vec![p33]),
        ],
    );
    let e = PorFn::rec(
        PorFn::Empty,
        step.clone(),
        step,
        BoundTerm::concat(BoundTerm::Arg(1), BoundTerm::One),
    );

    // Close the dummy argument: e(x) = e'(x, x).
    let p11 = PorFn::Proj { n: 1, i: 1 };
    PorFn::compose(e, alloc::vec![p11.clone(), p11])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomness::Oracle;
    use alloc::collections::BTreeMap;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn args(xs: &[&str]) -> Vec<BitString> {
        xs.iter().map(|s| bs(s)).collect()
    }

    #[test]
    fn base_functions() {
        let o = Oracle::new(0);
        assert_eq!(PorFn::Empty.eval(&args(&["101"]), &o).unwrap(), bs("eps"));
        assert_eq!(
            PorFn::Proj { n: 3, i: 2 }.eval(&args(&["0", "10", "1"]), &o).unwrap(),
            bs("10")
        );
        assert_eq!(PorFn::Succ(true).eval(&args(&["10"]), &o).unwrap(), bs("101"));
        // C dispatches on the last bit of its first argument.
        assert_eq!(
            PorFn::Cond.eval(&args(&["eps", "1", "00", "11"]), &o).unwrap(),
            bs("1")
        );
        assert_eq!(
            PorFn::Cond.eval(&args(&["10", "1", "00", "11"]), &o).unwrap(),
            bs("00")
        );
        assert_eq!(
            PorFn::Cond.eval(&args(&["11", "1", "00", "11"]), &o).unwrap(),
            bs("11")
        );
    }

    #[test]
    fn query_reads_the_oracle() {
        let mut m = BTreeMap::new();
        m.insert(bs("01"), true);
        m.insert(bs("1"), false);
        let o = Oracle::with_assignments(m, 0);
        assert_eq!(PorFn::Query.eval(&args(&["01"]), &o).unwrap(), bs("1"));
        assert_eq!(PorFn::Query.eval(&args(&["1"]), &o).unwrap(), bs("0"));
    }

    #[test]
    fn validation_errors() {
        let bad = PorFn::compose(PorFn::Cond, alloc::vec![PorFn::Empty]);
        assert!(matches!(bad.validate(), Err(PorError::Invalid(_))));
        let bad = PorFn::Proj { n: 2, i: 3 };
        assert!(matches!(bad.validate(), Err(PorError::Invalid(_))));
        let bad = PorFn::rec(
            PorFn::Empty,
            PorFn::Empty,
            PorFn::Empty,
            BoundTerm::One,
        );
        assert!(matches!(bad.validate(), Err(PorError::Invalid(_))));
        assert_eq!(extractor_fn().validate(), Ok(1));
    }

    #[test]
    fn arity_mismatch_at_call() {
        let o = Oracle::new(0);
        assert!(matches!(
            PorFn::Succ(false).eval(&args(&["0", "1"]), &o),
            Err(PorError::Arity { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn bounded_recursion_truncates() {
        // f(x, y): append 1 to the previous value each step, bound length 1.
        let append1 = PorFn::compose(PorFn::Succ(true), alloc::vec![PorFn::Proj { n: 3, i: 3 }]);
        let f = PorFn::rec(PorFn::Empty, append1.clone(), append1, BoundTerm::One);
        let o = Oracle::new(0);
        assert_eq!(f.eval(&args(&["eps", "00"]), &o).unwrap(), bs("1"));
        assert_eq!(f.eval(&args(&["1010", "000"]), &o).unwrap(), bs("1"));
        assert_eq!(f.eval(&args(&["eps", "eps"]), &o).unwrap(), bs("eps"));
    }

    #[test]
    fn sa_iteration() {
        let append0 = PorFn::compose(PorFn::Succ(false), alloc::vec![PorFn::Proj { n: 1, i: 1 }]);
        let o = Oracle::new(0);
        // Unbounded enough: |result| grows freely under a long bound.
        let long = BoundTerm::concat(
            BoundTerm::concat(BoundTerm::One, BoundTerm::One),
            BoundTerm::concat(BoundTerm::One, BoundTerm::One),
        );
        assert_eq!(
            sa_iterate(&append0, &long, &bs("eps"), &bs("11"), &[], &o).unwrap(),
            bs("00")
        );
        // Bound of length one pins the value to a single bit.
        assert_eq!(
            sa_iterate(&append0, &BoundTerm::One, &bs("eps"), &bs("111"), &[], &o).unwrap(),
            bs("0")
        );
    }

    #[test]
    fn extractor_direct() {
        let mut m = BTreeMap::new();
        m.insert(bs("eps"), true); // dyad(0)
        m.insert(bs("0"), false); // dyad(1)
        m.insert(bs("1"), true); // dyad(2)
        m.insert(bs("00"), true); // dyad(3)
        let o = Oracle::with_assignments(m, 0);
        assert_eq!(extractor(&bs("eps"), &o).unwrap(), bs("eps"));
        assert_eq!(extractor(&bs("11"), &o).unwrap(), bs("10"));
        assert_eq!(extractor(&bs("0110"), &o).unwrap(), bs("1011"));
    }

    #[test]
    fn extractor_fn_matches_direct() {
        let e = extractor_fn();
        for seed in 0..4 {
            let o = Oracle::new(seed);
            for n in 0..31 {
                let x = crate::bitstring::dyad_usize(n);
                assert_eq!(
                    e.eval(&[x.clone()], &o).unwrap(),
                    extractor(&x, &o).unwrap(),
                    "extractor mismatch on {x}"
                );
            }
        }
    }

    #[test]
    fn extractor_fn_queries_dyadic_coordinates() {
        let o = Oracle::new(9);
        let coords = extractor_fn().queried_coords(&[bs("11")], &o).unwrap();
        let expect: BTreeSet<BitString> = [bs("eps"), bs("0")].into_iter().collect();
        assert_eq!(coords, expect);
        let coords = extractor_fn().queried_coords(&[bs("10101")], &o).unwrap();
        let expect: BTreeSet<BitString> =
            (0..5).map(crate::bitstring::dyad_usize).collect();
        assert_eq!(coords, expect);
    }

    #[test]
    fn queried_coords_of_query() {
        let o = Oracle::new(0);
        let coords = PorFn::Query.queried_coords(&args(&["010"]), &o).unwrap();
        assert_eq!(coords.len(), 1);
        assert!(coords.contains(&bs("010")));
    }
}
