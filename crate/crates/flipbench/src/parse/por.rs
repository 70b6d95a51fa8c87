//! Function-algebra program text: nested prefix notation.
//!
//! Forms: `(empty)`, `(proj n i)`, `(succ 0)`, `(succ 1)`, `(cond)`,
//! `(query)`, `(comp g h1 .. hk)`, and
//! `(rec (g F) (h0 F) (h1 F) (bound T))`.
//!
//! Bound terms `T`: `eps`, `0`, `1`, `y` (the recursion argument), `x1`,
//! `x2`, .. (the fixed arguments, 1-based), `(arg i)` (0-based position),
//! `(cat T T)`, `(times T T)`. `y` resolves to the position right after the
//! fixed arguments of the step functions' base `g`.

use flipbench_core::por::{BoundTerm, PorFn};

#[derive(Debug, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn parse_sexp(src: &str) -> Result<Sexp, String> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    let mut in_comment = false;
    for ch in src.chars() {
        if in_comment {
            if ch == '\n' {
                in_comment = false;
            }
            continue;
        }
        match ch {
            ';' | '#' => {
                if !cur.is_empty() {
                    toks.push(core::mem::take(&mut cur));
                }
                in_comment = true;
            }
            '(' | ')' => {
                if !cur.is_empty() {
                    toks.push(core::mem::take(&mut cur));
                }
                toks.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    toks.push(core::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    let (sexp, rest) = read_sexp(&toks)?;
    if !rest.is_empty() {
        return Err(format!("trailing input after the program: {rest:?}"));
    }
    Ok(sexp)
}

fn read_sexp<'a>(toks: &'a [String]) -> Result<(Sexp, &'a [String]), String> {
    match toks.split_first() {
        None => Err("unexpected end of input".into()),
        Some((t, rest)) if t == "(" => {
            let mut items = Vec::new();
            let mut rest = rest;
            loop {
                match rest.first() {
                    None => return Err("unclosed parenthesis".into()),
                    Some(t) if t == ")" => return Ok((Sexp::List(items), &rest[1..])),
                    Some(_) => {
                        let (item, r) = read_sexp(rest)?;
                        items.push(item);
                        rest = r;
                    }
                }
            }
        }
        Some((t, _)) if t == ")" => Err("unexpected ')'".into()),
        Some((t, rest)) => Ok((Sexp::Atom(t.clone()), rest)),
    }
}

pub fn parse_por(src: &str) -> Result<PorFn, String> {
    let sexp = parse_sexp(src)?;
    let f = from_sexp(&sexp)?;
    f.validate().map_err(|e| format!("invalid program: {e}"))?;
    Ok(f)
}

fn from_sexp(s: &Sexp) -> Result<PorFn, String> {
    let items = match s {
        Sexp::List(items) => items,
        Sexp::Atom(a) => return Err(format!("expected a form in parentheses, found {a:?}")),
    };
    let head = match items.first() {
        Some(Sexp::Atom(h)) => h.as_str(),
        _ => return Err("empty or headless form".into()),
    };
    match head {
        "empty" => expect_len(items, 1).map(|_| PorFn::Empty),
        "cond" => expect_len(items, 1).map(|_| PorFn::Cond),
        "query" => expect_len(items, 1).map(|_| PorFn::Query),
        "succ" => {
            expect_len(items, 2)?;
            match atom(&items[1])? {
                "0" => Ok(PorFn::Succ(false)),
                "1" => Ok(PorFn::Succ(true)),
                other => Err(format!("succ takes 0 or 1, found {other:?}")),
            }
        }
        "proj" => {
            expect_len(items, 3)?;
            let n = num(&items[1])?;
            let i = num(&items[2])?;
            Ok(PorFn::Proj { n, i })
        }
        "comp" => {
            if items.len() < 3 {
                return Err("comp needs an outer function and at least one inner".into());
            }
            let g = from_sexp(&items[1])?;
            let hs = items[2..].iter().map(from_sexp).collect::<Result<Vec<_>, _>>()?;
            Ok(PorFn::compose(g, hs))
        }
        "rec" => {
            expect_len(items, 5)?;
            let g = labeled(&items[1], "g").and_then(|s| from_sexp(s))?;
            let h0 = labeled(&items[2], "h0").and_then(|s| from_sexp(s))?;
            let h1 = labeled(&items[3], "h1").and_then(|s| from_sexp(s))?;
            let bound_sexp = labeled(&items[4], "bound")?;
            // `y` in the bound refers to the recursion argument, whose
            // position is the arity of the base function.
            let n = g.validate().map_err(|e| format!("invalid rec base: {e}"))?;
            let bound = bound_term(bound_sexp, n)?;
            Ok(PorFn::rec(g, h0, h1, bound))
        }
        other => Err(format!("unknown form {other:?}")),
    }
}

fn bound_term(s: &Sexp, y_pos: usize) -> Result<BoundTerm, String> {
    match s {
        Sexp::Atom(a) => match a.as_str() {
            "eps" => Ok(BoundTerm::Eps),
            "0" => Ok(BoundTerm::Zero),
            "1" => Ok(BoundTerm::One),
            "y" => Ok(BoundTerm::Arg(y_pos)),
            _ if a.starts_with('x') => {
                let i: usize =
                    a[1..].parse().map_err(|_| format!("bad argument name {a:?}"))?;
                if i == 0 || i > y_pos {
                    return Err(format!("argument {a:?} out of range (arity {y_pos})"));
                }
                Ok(BoundTerm::Arg(i - 1))
            }
            other => Err(format!("unknown bound-term atom {other:?}")),
        },
        Sexp::List(items) => {
            let head = match items.first() {
                Some(Sexp::Atom(h)) => h.as_str(),
                _ => return Err("headless bound term".into()),
            };
            match head {
                "arg" => {
                    expect_len(items, 2)?;
                    Ok(BoundTerm::Arg(num(&items[1])?))
                }
                "cat" | "concat" => {
                    expect_len(items, 3)?;
                    Ok(BoundTerm::concat(
                        bound_term(&items[1], y_pos)?,
                        bound_term(&items[2], y_pos)?,
                    ))
                }
                "times" => {
                    expect_len(items, 3)?;
                    Ok(BoundTerm::times(
                        bound_term(&items[1], y_pos)?,
                        bound_term(&items[2], y_pos)?,
                    ))
                }
                other => Err(format!("unknown bound-term form {other:?}")),
            }
        }
    }
}

fn labeled<'a>(s: &'a Sexp, label: &str) -> Result<&'a Sexp, String> {
    match s {
        Sexp::List(items) if items.len() == 2 => match &items[0] {
            Sexp::Atom(h) if h == label => Ok(&items[1]),
            _ => Err(format!("expected a ({label} ..) pair")),
        },
        _ => Err(format!("expected a ({label} ..) pair")),
    }
}

fn expect_len(items: &[Sexp], n: usize) -> Result<(), String> {
    if items.len() == n {
        Ok(())
    } else {
        Err(format!("form takes {} items, found {}", n - 1, items.len() - 1))
    }
}

fn atom(s: &Sexp) -> Result<&str, String> {
    match s {
        Sexp::Atom(a) => Ok(a),
        Sexp::List(_) => Err("expected an atom".into()),
    }
}

fn num(s: &Sexp) -> Result<usize, String> {
    atom(s)?.parse().map_err(|_| "expected a number".to_string())
}
