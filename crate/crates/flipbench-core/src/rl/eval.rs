//! Exact measure computation for formulas by finite counting.
//!
//! The coordinates a formula can touch are bounded: every `Flip` argument,
//! over all values of the bounded quantifiers, has length at most the
//! formula's relevant bound `L`. The measure of the formula is then the
//! fraction of assignments to the `2^(L+1) - 1` coordinates of length at
//! most `L` that make it true, out of `2^(2^(L+1)-1)` — computed exactly by
//! enumerating witnesses.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::bitstring::{dyad_index_usize, strings_up_to, BitString};
use crate::dist::Distribution;
use crate::dyadic::Dyadic;
use crate::randomness::OracleSource;

use super::{eval_term, Env, Formula, Term};

/// Configuration for the finite checkers.
#[derive(Clone, Copy, Debug)]
pub struct MeasureCfg {
    /// Maximum number of relevant coordinates (equivalently, of enumerated
    /// oracle bits) a single measure computation may touch.
    pub max_coord_bits: usize,
}

impl Default for MeasureCfg {
    fn default() -> Self {
        MeasureCfg { max_coord_bits: 20 }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RlError {
    UnboundVariable(String),
    /// An unbounded quantifier reached a finite checker.
    UnboundedQuantifier(String),
    /// The relevant coordinate count exceeded the configured budget.
    Budget { coords: usize, max: usize },
    /// `C[t/s]` may not appear under a first-order quantifier.
    MeasureQUnderQuantifier,
    /// The randomness source ran out (only partial sources can).
    OracleExhausted,
}

impl core::fmt::Display for RlError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RlError::UnboundVariable(x) => write!(f, "unbound variable {x}"),
            RlError::UnboundedQuantifier(x) => {
                write!(f, "unbounded quantifier over {x} in a finite check")
            }
            RlError::Budget { coords, max } => {
                write!(f, "relevant coordinate budget exceeded: {coords} > {max}")
            }
            RlError::MeasureQUnderQuantifier => {
                write!(f, "measure connective nested under a first-order quantifier")
            }
            RlError::OracleExhausted => write!(f, "randomness source exhausted"),
        }
    }
}

/// Syntactic classification of a formula.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FormulaClass {
    /// A (possibly empty) prefix of bounded existentials over a body whose
    /// only quantifiers are subword-bounded.
    SigmaB1,
    /// All quantifiers bounded, but not of the shape above.
    BoundedOnly,
    /// Contains an unbounded quantifier.
    Unbounded,
}

fn has_unbounded(f: &Formula) -> bool {
    match f {
        Formula::Flip(_) | Formula::Eq(_, _) | Formula::Sub(_, _) => false,
        Formula::Not(g) => has_unbounded(g),
        Formula::And(a, b) | Formula::Or(a, b) => has_unbounded(a) || has_unbounded(b),
        Formula::Exists(_, _) | Formula::Forall(_, _) => true,
        Formula::ExistsLen(_, _, g)
        | Formula::ForallLen(_, _, g)
        | Formula::ExistsSub(_, _, g)
        | Formula::ForallSub(_, _, g)
        | Formula::MeasureQ(_, _, g) => has_unbounded(g),
    }
}

fn subword_only(f: &Formula) -> bool {
    match f {
        Formula::Flip(_) | Formula::Eq(_, _) | Formula::Sub(_, _) => true,
        Formula::Not(g) => subword_only(g),
        Formula::And(a, b) | Formula::Or(a, b) => subword_only(a) && subword_only(b),
        Formula::ExistsSub(_, _, g) | Formula::ForallSub(_, _, g) => subword_only(g),
        _ => false,
    }
}

pub fn classify(f: &Formula) -> FormulaClass {
    if has_unbounded(f) {
        return FormulaClass::Unbounded;
    }
    let mut body = f;
    while let Formula::ExistsLen(_, _, g) = body {
        body = g;
    }
    if subword_only(body) {
        FormulaClass::SigmaB1
    } else {
        FormulaClass::BoundedOnly
    }
}

fn mq_under_quantifier(f: &Formula, under: bool) -> bool {
    match f {
        Formula::Flip(_) | Formula::Eq(_, _) | Formula::Sub(_, _) => false,
        Formula::Not(g) => mq_under_quantifier(g, under),
        Formula::And(a, b) | Formula::Or(a, b) => {
            mq_under_quantifier(a, under) || mq_under_quantifier(b, under)
        }
        Formula::Exists(_, g)
        | Formula::Forall(_, g)
        | Formula::ExistsLen(_, _, g)
        | Formula::ForallLen(_, _, g)
        | Formula::ExistsSub(_, _, g)
        | Formula::ForallSub(_, _, g) => mq_under_quantifier(g, true),
        Formula::MeasureQ(_, _, g) => under || mq_under_quantifier(g, under),
    }
}

/// The least `L` such that, over all values of the bounded quantifiers,
/// every `Flip` argument evaluates to a string of length at most `L`.
pub fn relevant_bound(f: &Formula, env: &Env) -> Result<usize, RlError> {
    match f {
        Formula::Flip(t) => Ok(eval_term(t, env)?.len()),
        Formula::Eq(_, _) | Formula::Sub(_, _) => Ok(0),
        Formula::Not(g) => relevant_bound(g, env),
        Formula::And(a, b) | Formula::Or(a, b) => {
            Ok(relevant_bound(a, env)?.max(relevant_bound(b, env)?))
        }
        Formula::Exists(x, _) | Formula::Forall(x, _) => {
            Err(RlError::UnboundedQuantifier(x.clone()))
        }
        Formula::ExistsLen(x, t, g) | Formula::ForallLen(x, t, g) => {
            let b = eval_term(t, env)?.len();
            let mut out = 0;
            for v in strings_up_to(b) {
                out = out.max(relevant_bound(g, &env.bound(x, v))?);
            }
            Ok(out)
        }
        Formula::ExistsSub(x, t, g) | Formula::ForallSub(x, t, g) => {
            let tv = eval_term(t, env)?;
            let mut out = 0;
            for v in tv.subwords() {
                out = out.max(relevant_bound(g, &env.bound(x, v))?);
            }
            Ok(out)
        }
        // The connective's truth value does not depend on any outer
        // coordinate; its body is measured in its own enumeration.
        Formula::MeasureQ(_, _, _) => Ok(0),
    }
}

/// Replace every measure connective by a constant, evaluating it once. The
/// entry points have already rejected connectives under quantifiers, so the
/// ambient environment is the right one.
fn resolve_measure_q(f: &Formula, env: &Env, cfg: &MeasureCfg) -> Result<Formula, RlError> {
    Ok(match f {
        Formula::Flip(_) | Formula::Eq(_, _) | Formula::Sub(_, _) => f.clone(),
        Formula::Not(g) => Formula::not(resolve_measure_q(g, env, cfg)?),
        Formula::And(a, b) => Formula::and(
            resolve_measure_q(a, env, cfg)?,
            resolve_measure_q(b, env, cfg)?,
        ),
        Formula::Or(a, b) => Formula::or(
            resolve_measure_q(a, env, cfg)?,
            resolve_measure_q(b, env, cfg)?,
        ),
        Formula::Exists(_, _)
        | Formula::Forall(_, _)
        | Formula::ExistsLen(_, _, _)
        | Formula::ForallLen(_, _, _)
        | Formula::ExistsSub(_, _, _)
        | Formula::ForallSub(_, _, _) => f.clone(),
        Formula::MeasureQ(t, s, g) => {
            let tv = eval_term(t, env)?;
            let sv = eval_term(s, env)?;
            let truth = if sv.is_empty() {
                false
            } else {
                let mu = measure(g, env, cfg)?;
                mu.cmp_frac(tv.len() as u64, sv.len() as u64) != core::cmp::Ordering::Less
            };
            let tautology = Formula::Eq(Term::Eps, Term::Eps);
            if truth { tautology } else { Formula::not(tautology) }
        }
    })
}

/// Truth of a measure-free formula when coordinate `i` (in dyad order)
/// reads bit `i` of the packed witness `w`.
fn truth_packed(f: &Formula, env: &Env, w: u64, n_coords: usize) -> Result<bool, RlError> {
    Ok(match f {
        Formula::Flip(t) => {
            let c = eval_term(t, env)?;
            let idx = dyad_index_usize(&c).expect("coordinate index within budget");
            debug_assert!(idx < n_coords, "Flip coordinate beyond the relevant bound");
            (w >> idx) & 1 == 1
        }
        Formula::Eq(a, b) => eval_term(a, env)? == eval_term(b, env)?,
        Formula::Sub(a, b) => eval_term(a, env)?.is_prefix_of(&eval_term(b, env)?),
        Formula::Not(g) => !truth_packed(g, env, w, n_coords)?,
        Formula::And(a, b) => {
            truth_packed(a, env, w, n_coords)? && truth_packed(b, env, w, n_coords)?
        }
        Formula::Or(a, b) => {
            truth_packed(a, env, w, n_coords)? || truth_packed(b, env, w, n_coords)?
        }
        Formula::Exists(x, _) | Formula::Forall(x, _) => {
            return Err(RlError::UnboundedQuantifier(x.clone()))
        }
        Formula::ExistsLen(x, t, g) => {
            let b = eval_term(t, env)?.len();
            let mut any = false;
            for v in strings_up_to(b) {
                if truth_packed(g, &env.bound(x, v), w, n_coords)? {
                    any = true;
                    break;
                }
            }
            any
        }
        Formula::ForallLen(x, t, g) => {
            let b = eval_term(t, env)?.len();
            let mut all = true;
            for v in strings_up_to(b) {
                if !truth_packed(g, &env.bound(x, v), w, n_coords)? {
                    all = false;
                    break;
                }
            }
            all
        }
        Formula::ExistsSub(x, t, g) => {
            let tv = eval_term(t, env)?;
            let mut any = false;
            for v in tv.subwords() {
                if truth_packed(g, &env.bound(x, v), w, n_coords)? {
                    any = true;
                    break;
                }
            }
            any
        }
        Formula::ForallSub(x, t, g) => {
            let tv = eval_term(t, env)?;
            let mut all = true;
            for v in tv.subwords() {
                if !truth_packed(g, &env.bound(x, v), w, n_coords)? {
                    all = false;
                    break;
                }
            }
            all
        }
        Formula::MeasureQ(_, _, _) => {
            unreachable!("measure connectives are resolved before enumeration")
        }
    })
}

fn coord_count(f: &Formula, env: &Env, cfg: &MeasureCfg) -> Result<usize, RlError> {
    let l = relevant_bound(f, env)?;
    let coords = (1usize << (l + 1)) - 1;
    if coords > cfg.max_coord_bits {
        return Err(RlError::Budget { coords, max: cfg.max_coord_bits });
    }
    Ok(coords)
}

/// The number of packed witnesses satisfying the formula, out of `2^N`
/// where `N` is the relevant coordinate count.
pub fn counting_fraction(
    f: &Formula,
    env: &Env,
    cfg: &MeasureCfg,
) -> Result<(BigUint, BigUint), RlError> {
    let (count, n) = packed_count(f, env, cfg)?;
    Ok((BigUint::from(count), BigUint::one() << n))
}

/// The exact measure of the oracles satisfying the formula.
///
/// Quantifier-free formulas depend on their finitely many syntactic `Flip`
/// coordinates only, so they are counted over just those; the canonical
/// dyadic value is the same as the full packed count's. Quantified
/// formulas go through the packed-witness enumeration.
pub fn measure(f: &Formula, env: &Env, cfg: &MeasureCfg) -> Result<Dyadic, RlError> {
    if mq_under_quantifier(f, false) {
        return Err(RlError::MeasureQUnderQuantifier);
    }
    let f = resolve_measure_q(f, env, cfg)?;
    let mut coords = alloc::collections::BTreeSet::new();
    if collect_flip_coords(&f, env, &mut coords)? {
        let list: Vec<BitString> = coords.into_iter().collect();
        let k = list.len();
        if k > cfg.max_coord_bits {
            return Err(RlError::Budget { coords: k, max: cfg.max_coord_bits });
        }
        let mut count: u64 = 0;
        for w in 0..(1u64 << k) {
            if truth_mapped(&f, env, w, &list)? {
                count += 1;
            }
        }
        return Ok(Dyadic::new(BigUint::from(count), k as u64));
    }
    let (count, n) = packed_count(&f, env, cfg)?;
    Ok(Dyadic::new(BigUint::from(count), n as u64))
}

/// Gather the coordinates a quantifier-free formula queries; returns
/// `false` (leaving the set unspecified) if a quantifier is present.
fn collect_flip_coords(
    f: &Formula,
    env: &Env,
    out: &mut alloc::collections::BTreeSet<BitString>,
) -> Result<bool, RlError> {
    Ok(match f {
        Formula::Flip(t) => {
            out.insert(eval_term(t, env)?);
            true
        }
        Formula::Eq(_, _) | Formula::Sub(_, _) => true,
        Formula::Not(g) => collect_flip_coords(g, env, out)?,
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_flip_coords(a, env, out)? && collect_flip_coords(b, env, out)?
        }
        _ => false,
    })
}

/// Truth when the `i`-th coordinate of `list` reads bit `i` of `w`. Only
/// reached for quantifier-free formulas.
fn truth_mapped(
    f: &Formula,
    env: &Env,
    w: u64,
    list: &[BitString],
) -> Result<bool, RlError> {
    Ok(match f {
        Formula::Flip(t) => {
            let c = eval_term(t, env)?;
            let idx = list.binary_search(&c).expect("coordinate was collected");
            (w >> idx) & 1 == 1
        }
        Formula::Eq(a, b) => eval_term(a, env)? == eval_term(b, env)?,
        Formula::Sub(a, b) => eval_term(a, env)?.is_prefix_of(&eval_term(b, env)?),
        Formula::Not(g) => !truth_mapped(g, env, w, list)?,
        Formula::And(a, b) => {
            truth_mapped(a, env, w, list)? && truth_mapped(b, env, w, list)?
        }
        Formula::Or(a, b) => {
            truth_mapped(a, env, w, list)? || truth_mapped(b, env, w, list)?
        }
        _ => unreachable!("quantifiers take the packed-witness path"),
    })
}

fn packed_count(f: &Formula, env: &Env, cfg: &MeasureCfg) -> Result<(u64, usize), RlError> {
    if mq_under_quantifier(f, false) {
        return Err(RlError::MeasureQUnderQuantifier);
    }
    let f = resolve_measure_q(f, env, cfg)?;
    let n = coord_count(&f, env, cfg)?;
    let mut count: u64 = 0;
    for w in 0..(1u64 << n) {
        if truth_packed(&f, env, w, n)? {
            count += 1;
        }
    }
    Ok((count, n))
}

/// Truth of the formula on one concrete oracle.
pub fn holds<O: OracleSource + ?Sized>(
    f: &Formula,
    env: &Env,
    oracle: &O,
    cfg: &MeasureCfg,
) -> Result<bool, RlError> {
    if mq_under_quantifier(f, false) {
        return Err(RlError::MeasureQUnderQuantifier);
    }
    let f = resolve_measure_q(f, env, cfg)?;
    holds_resolved(&f, env, oracle)
}

fn holds_resolved<O: OracleSource + ?Sized>(
    f: &Formula,
    env: &Env,
    oracle: &O,
) -> Result<bool, RlError> {
    Ok(match f {
        Formula::Flip(t) => oracle
            .query(&eval_term(t, env)?)
            .map_err(|_| RlError::OracleExhausted)?,
        Formula::Eq(a, b) => eval_term(a, env)? == eval_term(b, env)?,
        Formula::Sub(a, b) => eval_term(a, env)?.is_prefix_of(&eval_term(b, env)?),
        Formula::Not(g) => !holds_resolved(g, env, oracle)?,
        Formula::And(a, b) => {
            holds_resolved(a, env, oracle)? && holds_resolved(b, env, oracle)?
        }
        Formula::Or(a, b) => {
            holds_resolved(a, env, oracle)? || holds_resolved(b, env, oracle)?
        }
        Formula::Exists(x, _) | Formula::Forall(x, _) => {
            return Err(RlError::UnboundedQuantifier(x.clone()))
        }
        Formula::ExistsLen(x, t, g) => {
            let b = eval_term(t, env)?.len();
            let mut any = false;
            for v in strings_up_to(b) {
                if holds_resolved(g, &env.bound(x, v), oracle)? {
                    any = true;
                    break;
                }
            }
            any
        }
        Formula::ForallLen(x, t, g) => {
            let b = eval_term(t, env)?.len();
            let mut all = true;
            for v in strings_up_to(b) {
                if !holds_resolved(g, &env.bound(x, v), oracle)? {
                    all = false;
                    break;
                }
            }
            all
        }
        Formula::ExistsSub(x, t, g) => {
            let tv = eval_term(t, env)?;
            let mut any = false;
            for v in tv.subwords() {
                if holds_resolved(g, &env.bound(x, v), oracle)? {
                    any = true;
                    break;
                }
            }
            any
        }
        Formula::ForallSub(x, t, g) => {
            let tv = eval_term(t, env)?;
            let mut all = true;
            for v in tv.subwords() {
                if !holds_resolved(g, &env.bound(x, v), oracle)? {
                    all = false;
                    break;
                }
            }
            all
        }
        Formula::MeasureQ(_, _, _) => {
            unreachable!("measure connectives are resolved before evaluation")
        }
    })
}

/// One input's outcome in a two-thirds acceptance check.
#[derive(Clone, Debug)]
pub struct TwoThirdsRow {
    pub input: BitString,
    /// The advice string (of length at most one) achieving measure >= 2/3,
    /// if any, with the measure it achieves.
    pub witness: Option<(BitString, Dyadic)>,
    /// The best measure seen over all advice candidates.
    pub best: Dyadic,
}

#[derive(Clone, Debug)]
pub struct TwoThirdsReport {
    pub rows: Vec<TwoThirdsRow>,
}

impl TwoThirdsReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.witness.is_some())
    }
}

/// For each input `sigma`, search for advice `y` of length at most one such
/// that `G[x := sigma, y := y]` has measure at least 2/3.
pub fn two_thirds_check(
    g: &Formula,
    x: &str,
    y: &str,
    inputs: &[BitString],
    env: &Env,
    cfg: &MeasureCfg,
) -> Result<TwoThirdsReport, RlError> {
    let mut rows = Vec::new();
    for sigma in inputs {
        let mut witness = None;
        let mut best = Dyadic::zero();
        for yv in strings_up_to(1) {
            let e = env.bound(x, sigma.clone()).bound(y, yv.clone());
            let mu = measure(g, &e, cfg)?;
            if mu > best {
                best = mu.clone();
            }
            if mu.cmp_frac(2, 3) != core::cmp::Ordering::Less {
                witness = Some((yv, mu));
                break;
            }
        }
        rows.push(TwoThirdsRow { input: sigma.clone(), witness, best });
    }
    Ok(TwoThirdsReport { rows })
}

/// Acceptance by majority on the empty output: `sigma` is in the language
/// of `f` exactly when `f(sigma)` puts mass strictly above 1/2 on `eps`.
pub fn lang_member<F>(mut f: F, sigma: &BitString) -> bool
where
    F: FnMut(&BitString) -> Distribution,
{
    f(sigma).mass_of(&BitString::empty()).cmp_frac(1, 2) == core::cmp::Ordering::Greater
}
