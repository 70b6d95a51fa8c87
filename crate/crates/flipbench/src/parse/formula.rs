//! Formula text.
//!
//! Formulas: `Flip(t)`, `t = s`, `t sub s`, `~F`, `F & G`, `F | G`,
//! `E x <= t . F`, `A x <= t . F`, `Esub x in t . F`, `Asub x in t . F`,
//! `C[t/s] F`, and parentheses. `|` binds loosest, then `&`; `~` and the
//! quantifier bodies extend as far right as possible.
//!
//! Terms: `eps`, `0`, `1`, `t . s` (concatenation), `t * s` (length
//! product), identifiers, and parentheses. The words `Flip`, `E`, `A`,
//! `Esub`, `Asub`, `C`, `eps`, `sub`, `in`, and `not` are reserved and
//! cannot name variables. A quantifier's bound term is the longest term
//! after which a `.` and a well-formed body follow.

use flipbench_core::rl::{Formula, Term};

use super::{lex, Cur, Tok};

const PUNCTS: &[&'static str] =
    &["<=", "(", ")", "[", "]", "~", "&", "|", "=", ".", "*", "/"];

const RESERVED: &[&str] = &["Flip", "E", "A", "Esub", "Asub", "C", "eps", "sub", "in", "not"];

pub fn parse_formula(src: &str) -> Result<Formula, String> {
    let toks = lex(src, PUNCTS)?;
    let mut c = Cur::new(&toks);
    let f = parse_or(&mut c)?;
    c.expect_end()?;
    Ok(f)
}

fn parse_or(c: &mut Cur) -> Result<Formula, String> {
    let mut f = parse_and(c)?;
    while c.eat_punct("|") {
        f = Formula::or(f, parse_and(c)?);
    }
    Ok(f)
}

fn parse_and(c: &mut Cur) -> Result<Formula, String> {
    let mut f = parse_unary(c)?;
    while c.eat_punct("&") {
        f = Formula::and(f, parse_unary(c)?);
    }
    Ok(f)
}

fn parse_unary(c: &mut Cur) -> Result<Formula, String> {
    if c.eat_punct("~") {
        return Ok(Formula::not(parse_unary(c)?));
    }
    match c.peek() {
        Some(Tok::Ident(w)) if w == "E" || w == "A" || w == "Esub" || w == "Asub" => {
            let kw = w.clone();
            c.next();
            parse_quantifier(c, &kw)
        }
        Some(Tok::Ident(w)) if w == "C" => {
            c.next();
            c.expect_punct("[")?;
            let t = parse_term(c)?;
            c.expect_punct("/")?;
            let s = parse_term(c)?;
            c.expect_punct("]")?;
            let body = parse_or(c)?;
            Ok(Formula::measure_q(t, s, body))
        }
        _ => parse_atom(c),
    }
}

fn parse_quantifier(c: &mut Cur, kw: &str) -> Result<Formula, String> {
    let x = match c.next() {
        Some(Tok::Ident(v)) if !RESERVED.contains(&v.as_str()) => v.clone(),
        other => return Err(format!("expected a variable name, found {other:?}")),
    };
    let len_style = kw == "E" || kw == "A";
    if len_style {
        c.expect_punct("<=")?;
    } else if !c.eat_ident("in") {
        return Err(format!("expected 'in' after {kw} {x}"));
    }
    // The bound term is ambiguous against the quantifier dot: take the
    // longest term whose following `.` starts a parseable body.
    let splits = term_splits(c)?;
    let mut last_err = String::from("no valid bound/body split");
    for (t, end) in splits.into_iter().rev() {
        let mut probe = Cur { toks: c.toks, pos: end };
        if !probe.eat_punct(".") {
            continue;
        }
        match parse_or(&mut probe) {
            Ok(body) => {
                c.pos = probe.pos;
                return Ok(match kw {
                    "E" => Formula::exists_len(&x, t, body),
                    "A" => Formula::forall_len(&x, t, body),
                    "Esub" => Formula::exists_sub(&x, t, body),
                    _ => Formula::forall_sub(&x, t, body),
                });
            }
            Err(e) => last_err = e,
        }
    }
    Err(format!("quantifier {kw} {x}: {last_err}"))
}

/// All prefixes of a maximal term starting at the cursor, shortest first,
/// with the token position at which each prefix ends.
fn term_splits(c: &Cur) -> Result<Vec<(Term, usize)>, String> {
    let mut probe = Cur { toks: c.toks, pos: c.pos };
    let mut t = parse_term_factor(&mut probe)?;
    let mut out = vec![(t.clone(), probe.pos)];
    loop {
        let op = if probe.eat_punct(".") {
            "."
        } else if probe.eat_punct("*") {
            "*"
        } else {
            break;
        };
        let rhs = match parse_term_factor(&mut probe) {
            Ok(r) => r,
            Err(_) => break,
        };
        t = if op == "." { Term::concat(t, rhs) } else { Term::times(t, rhs) };
        out.push((t.clone(), probe.pos));
    }
    Ok(out)
}

fn parse_atom(c: &mut Cur) -> Result<Formula, String> {
    if c.eat_ident("Flip") {
        c.expect_punct("(")?;
        let t = parse_term(c)?;
        c.expect_punct(")")?;
        return Ok(Formula::Flip(t));
    }
    // `(` may open a parenthesized formula or a term; try the formula
    // reading first and fall back to a term relation.
    if matches!(c.peek(), Some(Tok::Punct("("))) {
        let save = c.pos;
        c.next();
        if let Ok(f) = parse_or(c) {
            if c.eat_punct(")")
                && !matches!(c.peek(), Some(Tok::Punct("=")))
                && !matches!(c.peek(), Some(Tok::Ident(w)) if w == "sub")
            {
                return Ok(f);
            }
        }
        c.pos = save;
    }
    let a = parse_term(c)?;
    if c.eat_punct("=") {
        return Ok(Formula::Eq(a, parse_term(c)?));
    }
    if c.eat_ident("sub") {
        return Ok(Formula::Sub(a, parse_term(c)?));
    }
    Err(format!("expected '=' or 'sub' after a term, found {:?}", c.peek()))
}

#[cfg(test)]
pub fn parse_term_str(src: &str) -> Result<Term, String> {
    let toks = lex(src, PUNCTS)?;
    let mut c = Cur::new(&toks);
    let t = parse_term(&mut c)?;
    c.expect_end()?;
    Ok(t)
}

fn parse_term(c: &mut Cur) -> Result<Term, String> {
    let mut t = parse_term_factor(c)?;
    loop {
        if c.eat_punct(".") {
            t = Term::concat(t, parse_term_factor(c)?);
        } else if c.eat_punct("*") {
            t = Term::times(t, parse_term_factor(c)?);
        } else {
            return Ok(t);
        }
    }
}

fn parse_term_factor(c: &mut Cur) -> Result<Term, String> {
    match c.peek() {
        Some(Tok::Digits(d)) => {
            // Runs of bits denote the spelled-out constant, e.g. `01` or `10`.
            let digits = d.clone();
            c.next();
            bits_term(&digits)
        }
        Some(Tok::Ident(w)) if w == "eps" => {
            c.next();
            Ok(Term::Eps)
        }
        Some(Tok::Ident(w)) if !RESERVED.contains(&w.as_str()) => {
            let t = Term::var(w);
            c.next();
            Ok(t)
        }
        Some(Tok::Punct("(")) => {
            c.next();
            let t = parse_term(c)?;
            c.expect_punct(")")?;
            Ok(t)
        }
        other => Err(format!("expected a term, found {other:?}")),
    }
}

fn bits_term(digits: &str) -> Result<Term, String> {
    let mut t: Option<Term> = None;
    for ch in digits.chars() {
        let bit = match ch {
            '0' => Term::Zero,
            '1' => Term::One,
            _ => return Err(format!("constant {digits:?} contains a non-bit digit")),
        };
        t = Some(match t {
            None => bit,
            Some(prev) => Term::concat(prev, bit),
        });
    }
    t.ok_or_else(|| "empty constant".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flip_and_connectives() {
        let f = parse_formula("Flip(eps) & ~Flip(1) | Flip(0)").unwrap();
        assert_eq!(
            f,
            Formula::or(
                Formula::and(
                    Formula::Flip(Term::Eps),
                    Formula::not(Formula::Flip(Term::One))
                ),
                Formula::Flip(Term::Zero)
            )
        );
    }

    #[test]
    fn parses_relations_and_terms() {
        let f = parse_formula("x . 1 = y * x").unwrap();
        assert_eq!(
            f,
            Formula::Eq(
                Term::concat(Term::var("x"), Term::One),
                Term::times(Term::var("y"), Term::var("x"))
            )
        );
        let f = parse_formula("eps sub x").unwrap();
        assert_eq!(f, Formula::Sub(Term::Eps, Term::var("x")));
    }

    #[test]
    fn quantifier_bound_takes_longest_term() {
        let f = parse_formula("E x <= 1 . 1 . Flip(x)").unwrap();
        assert_eq!(
            f,
            Formula::exists_len(
                "x",
                Term::concat(Term::One, Term::One),
                Formula::Flip(Term::var("x"))
            )
        );
        let f = parse_formula("A y <= x . y sub x").unwrap();
        assert_eq!(
            f,
            Formula::forall_len(
                "y",
                Term::var("x"),
                Formula::Sub(Term::var("y"), Term::var("x"))
            )
        );
    }

    #[test]
    fn parses_subword_quantifiers_and_measure() {
        let f = parse_formula("Esub y in x . Flip(y)").unwrap();
        assert_eq!(
            f,
            Formula::exists_sub("y", Term::var("x"), Formula::Flip(Term::var("y")))
        );
        let f = parse_formula("C[1/1 . 0] Flip(eps)").unwrap();
        assert_eq!(
            f,
            Formula::measure_q(
                Term::One,
                Term::concat(Term::One, Term::Zero),
                Formula::Flip(Term::Eps)
            )
        );
    }

    #[test]
    fn multibit_constants() {
        let f = parse_formula("Flip(10)").unwrap();
        assert_eq!(f, Formula::Flip(Term::concat(Term::One, Term::Zero)));
        let f = parse_formula("Flip(11)").unwrap();
        assert_eq!(f, Formula::Flip(Term::concat(Term::One, Term::One)));
    }

    #[test]
    fn parenthesized_formulas() {
        let f = parse_formula("~(Flip(0) | Flip(1))").unwrap();
        assert_eq!(
            f,
            Formula::not(Formula::or(
                Formula::Flip(Term::Zero),
                Formula::Flip(Term::One)
            ))
        );
        let f = parse_formula("(x . 1) = x . 1").unwrap();
        assert!(matches!(f, Formula::Eq(_, _)));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_formula("Flip(").is_err());
        assert!(parse_formula("E sub <= 1 . Flip(x)").is_err());
        assert!(parse_formula("x = ").is_err());
        assert!(parse_formula("Flip(eps) Flip(eps)").is_err());
        assert!(parse_formula("Flip(2)").is_err());
    }
}
