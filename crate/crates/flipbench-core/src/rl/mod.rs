//! A first-order logic over bit strings with randomness atoms.
//!
//! Terms denote strings built from variables, constants, concatenation, and
//! repetition. Formulas add the atom `Flip(t)`, which holds on the oracles
//! answering 1 at coordinate `t`; under the uniform measure on oracles each
//! such cylinder has mass 1/2 and distinct coordinates are independent.
//!
//! Quantifiers come in three shapes: unbounded (rejected by the finite
//! checkers), length-bounded (`E x <= t . F`, ranging over all strings no
//! longer than the bound's value), and subword-bounded (`Esub x in t . F`,
//! ranging over contiguous substrings of the bound's value). The
//! measure-threshold connective `C[t/s] F` holds exactly when `|s|` is
//! positive and the measure of `F` is at least `|t| / |s|`.

mod eval;

pub use eval::{
    classify, counting_fraction, holds, lang_member, measure, relevant_bound,
    two_thirds_check, FormulaClass, MeasureCfg, RlError, TwoThirdsReport, TwoThirdsRow,
};

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;

use crate::bitstring::BitString;

/// A string-valued term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Term {
    Var(String),
    Eps,
    Zero,
    One,
    Concat(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
}

impl Term {
    pub fn concat(a: Term, b: Term) -> Term {
        Term::Concat(Box::new(a), Box::new(b))
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::Times(Box::new(a), Box::new(b))
    }

    pub fn var(name: &str) -> Term {
        Term::Var(String::from(name))
    }

    /// A constant term spelling out a concrete string.
    pub fn lit(s: &BitString) -> Term {
        let mut t = Term::Eps;
        for &b in s.bits() {
            let bit = if b { Term::One } else { Term::Zero };
            t = if matches!(t, Term::Eps) { bit } else { Term::concat(t, bit) };
        }
        t
    }
}

/// A formula.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Formula {
    Flip(Term),
    Eq(Term, Term),
    /// Prefix order `t sub s`.
    Sub(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// Unbounded quantifiers; present for completeness, rejected by every
    /// finite checker.
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    /// `E x <= t . F`: some string of length at most `|t|` satisfies `F`.
    ExistsLen(String, Term, Box<Formula>),
    ForallLen(String, Term, Box<Formula>),
    /// `Esub x in t . F`: some contiguous subword of `t` satisfies `F`.
    ExistsSub(String, Term, Box<Formula>),
    ForallSub(String, Term, Box<Formula>),
    /// `C[t/s] F`: the measure of `F` is at least `|t| / |s|` (and `|s| > 0`).
    MeasureQ(Term, Term, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists_len(x: &str, bound: Term, body: Formula) -> Formula {
        Formula::ExistsLen(String::from(x), bound, Box::new(body))
    }

    pub fn forall_len(x: &str, bound: Term, body: Formula) -> Formula {
        Formula::ForallLen(String::from(x), bound, Box::new(body))
    }

    pub fn exists_sub(x: &str, bound: Term, body: Formula) -> Formula {
        Formula::ExistsSub(String::from(x), bound, Box::new(body))
    }

    pub fn forall_sub(x: &str, bound: Term, body: Formula) -> Formula {
        Formula::ForallSub(String::from(x), bound, Box::new(body))
    }

    pub fn measure_q(t: Term, s: Term, body: Formula) -> Formula {
        Formula::MeasureQ(t, s, Box::new(body))
    }
}

/// Assignment of free variables to strings.
#[derive(Clone, Default, Debug)]
pub struct Env {
    vars: BTreeMap<String, BitString>,
}

impl Env {
    pub fn new() -> Self {
        Env { vars: BTreeMap::new() }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, BitString)>) -> Self {
        Env { vars: pairs.into_iter().collect() }
    }

    pub fn get(&self, name: &str) -> Option<&BitString> {
        self.vars.get(name)
    }

    pub fn bound(&self, name: &str, value: BitString) -> Env {
        let mut vars = self.vars.clone();
        vars.insert(String::from(name), value);
        Env { vars }
    }
}

/// Evaluate a term under an environment.
pub fn eval_term(t: &Term, env: &Env) -> Result<BitString, RlError> {
    Ok(match t {
        Term::Var(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| RlError::UnboundVariable(name.clone()))?,
        Term::Eps => BitString::empty(),
        Term::Zero => BitString::bit(false),
        Term::One => BitString::bit(true),
        Term::Concat(a, b) => eval_term(a, env)?.concat(&eval_term(b, env)?),
        Term::Times(a, b) => eval_term(a, env)?.times(&eval_term(b, env)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn term_evaluation() {
        let env = Env::from_pairs([(String::from("x"), bs("10"))]);
        let t = Term::concat(Term::var("x"), Term::One);
        assert_eq!(eval_term(&t, &env).unwrap(), bs("101"));
        let t = Term::times(Term::var("x"), Term::concat(Term::One, Term::One));
        assert_eq!(eval_term(&t, &env).unwrap(), bs("1010"));
        assert!(matches!(
            eval_term(&Term::var("y"), &env),
            Err(RlError::UnboundVariable(_))
        ));
    }

    #[test]
    fn lit_round_trips() {
        let env = Env::new();
        for n in 0..64 {
            let s = crate::bitstring::dyad_usize(n);
            assert_eq!(eval_term(&Term::lit(&s), &env).unwrap(), s);
        }
    }
}
