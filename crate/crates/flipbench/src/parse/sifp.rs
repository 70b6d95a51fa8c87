//! Imperative program text.
//!
//! Statements: `R := e`, `s ; t`, `while e { s }`, `flip e`, `randbit`.
//! Registers: `X1..`, `Y1..`, `S1..`, `R`, `Q`, `Z`, `T`.
//! Expressions: `eps`, `e.0`, `e.1`, `e sub Reg`, `e and Reg`, `not e`,
//! registers, and parentheses. `not` applies to everything to its right;
//! `sub`/`and` chain to the left; bit append binds tightest.

use flipbench_core::sifp::{Expr, Reg, Stmt};

use super::{lex, Cur, Tok};

const PUNCTS: &[&'static str] = &[":=", ";", "{", "}", "(", ")", "."];

pub fn parse_program(src: &str) -> Result<Stmt, String> {
    let toks = lex(src, PUNCTS)?;
    let mut c = Cur::new(&toks);
    let s = parse_stmts(&mut c)?;
    c.expect_end()?;
    Ok(s)
}

fn parse_stmts(c: &mut Cur) -> Result<Stmt, String> {
    let mut list = vec![parse_stmt(c)?];
    while c.eat_punct(";") {
        if c.at_end() || matches!(c.peek(), Some(Tok::Punct("}"))) {
            break; // trailing separator
        }
        list.push(parse_stmt(c)?);
    }
    Ok(Stmt::seq_all(list))
}

fn parse_stmt(c: &mut Cur) -> Result<Stmt, String> {
    match c.peek() {
        Some(Tok::Ident(w)) if w == "while" => {
            c.next();
            let guard = parse_expr(c)?;
            c.expect_punct("{")?;
            let body = parse_stmts(c)?;
            c.expect_punct("}")?;
            Ok(Stmt::while_loop(guard, body))
        }
        Some(Tok::Ident(w)) if w == "flip" => {
            c.next();
            Ok(Stmt::Flip(parse_expr(c)?))
        }
        Some(Tok::Ident(w)) if w == "randbit" => {
            c.next();
            Ok(Stmt::RandBit)
        }
        Some(Tok::Ident(w)) => {
            let r = parse_reg_name(w)?;
            c.next();
            c.expect_punct(":=")?;
            Ok(Stmt::Assign(r, parse_expr(c)?))
        }
        other => Err(format!("expected a statement, found {other:?}")),
    }
}

#[cfg(test)]
pub fn parse_expr_str(src: &str) -> Result<Expr, String> {
    let toks = lex(src, PUNCTS)?;
    let mut c = Cur::new(&toks);
    let e = parse_expr(&mut c)?;
    c.expect_end()?;
    Ok(e)
}

fn parse_expr(c: &mut Cur) -> Result<Expr, String> {
    if c.eat_ident("not") {
        return Ok(Expr::not(parse_expr(c)?));
    }
    let mut e = parse_postfix(c)?;
    loop {
        if c.eat_ident("sub") {
            e = Expr::sub_eq(e, parse_reg(c)?);
        } else if c.eat_ident("and") {
            e = Expr::and(e, parse_reg(c)?);
        } else {
            return Ok(e);
        }
    }
}

fn parse_postfix(c: &mut Cur) -> Result<Expr, String> {
    let mut e = parse_atom(c)?;
    while c.eat_punct(".") {
        match c.next() {
            Some(Tok::Digits(d)) if d == "0" => e = Expr::app(e, false),
            Some(Tok::Digits(d)) if d == "1" => e = Expr::app(e, true),
            other => return Err(format!("expected 0 or 1 after '.', found {other:?}")),
        }
    }
    Ok(e)
}

fn parse_atom(c: &mut Cur) -> Result<Expr, String> {
    match c.peek() {
        Some(Tok::Punct("(")) => {
            c.next();
            let e = parse_expr(c)?;
            c.expect_punct(")")?;
            Ok(e)
        }
        Some(Tok::Ident(w)) if w == "eps" => {
            c.next();
            Ok(Expr::Eps)
        }
        Some(Tok::Ident(w)) => {
            let r = parse_reg_name(w)?;
            c.next();
            Ok(Expr::Id(r))
        }
        other => Err(format!("expected an expression, found {other:?}")),
    }
}

fn parse_reg(c: &mut Cur) -> Result<Reg, String> {
    match c.next() {
        Some(Tok::Ident(w)) => parse_reg_name(w),
        other => Err(format!("expected a register, found {other:?}")),
    }
}

pub fn parse_reg_name(w: &str) -> Result<Reg, String> {
    let idx = |s: &str| -> Result<u32, String> {
        s.parse().map_err(|_| format!("bad register index in {w:?}"))
    };
    match w {
        "R" => Ok(Reg::R),
        "Q" => Ok(Reg::Q),
        "Z" => Ok(Reg::Z),
        "T" => Ok(Reg::T),
        _ if w.starts_with('X') && w.len() > 1 => Ok(Reg::X(idx(&w[1..])?)),
        _ if w.starts_with('Y') && w.len() > 1 => Ok(Reg::Y(idx(&w[1..])?)),
        _ if w.starts_with('S') && w.len() > 1 => Ok(Reg::S(idx(&w[1..])?)),
        _ => Err(format!("unknown register {w:?}")),
    }
}

pub fn render_program(s: &Stmt) -> String {
    let mut out = String::new();
    render_stmt(s, 0, &mut out);
    out
}

fn render_stmt(s: &Stmt, indent: usize, out: &mut String) {
    match s {
        Stmt::Seq(a, b) => {
            render_stmt(a, indent, out);
            out.push_str(";\n");
            render_stmt(b, indent, out);
        }
        Stmt::While(g, body) => {
            pad(indent, out);
            out.push_str("while ");
            out.push_str(&render_expr(g));
            out.push_str(" {\n");
            render_stmt(body, indent + 1, out);
            out.push('\n');
            pad(indent, out);
            out.push('}');
        }
        Stmt::Assign(r, e) => {
            pad(indent, out);
            out.push_str(&format!("{r} := {}", render_expr(e)));
        }
        Stmt::Flip(e) => {
            pad(indent, out);
            out.push_str(&format!("flip {}", render_expr(e)));
        }
        Stmt::RandBit => {
            pad(indent, out);
            out.push_str("randbit");
        }
    }
}

fn pad(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

pub fn render_expr(e: &Expr) -> String {
    match e {
        Expr::Eps => "eps".into(),
        Expr::Id(r) => format!("{r}"),
        Expr::App(inner, b) => {
            let s = render_expr(inner);
            let tight = matches!(**inner, Expr::Eps | Expr::Id(_) | Expr::App(_, _));
            let bit = if *b { "1" } else { "0" };
            if tight { format!("{s}.{bit}") } else { format!("({s}).{bit}") }
        }
        Expr::SubEq(inner, r) => format!("{} sub {r}", chain_operand(inner)),
        Expr::And(inner, r) => format!("{} and {r}", chain_operand(inner)),
        Expr::Not(inner) => format!("not {}", render_expr(inner)),
    }
}

fn chain_operand(e: &Expr) -> String {
    // `not` would swallow the infix operator, so parenthesize it here.
    if matches!(e, Expr::Not(_)) {
        format!("({})", render_expr(e))
    } else {
        render_expr(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // The parser rebuilds sequences left-associated, so compare programs
    // through a second render rather than on the raw trees.
    fn roundtrip(s: &Stmt) {
        let text = render_program(s);
        let back = parse_program(&text).unwrap();
        assert_eq!(render_program(&back), text);
        assert_eq!(flatten(&back), flatten(s), "text was:\n{text}");
    }

    // Sequence-free statement list, recursing into loop bodies.
    fn flatten(s: &Stmt) -> Vec<Stmt> {
        match s {
            Stmt::Seq(a, b) => {
                let mut v = flatten(a);
                v.extend(flatten(b));
                v
            }
            Stmt::While(g, body) => {
                vec![Stmt::While(g.clone(), Box::new(Stmt::seq_all(flatten(body))))]
            }
            other => vec![other.clone()],
        }
    }

    #[test]
    fn parses_surface_syntax() {
        let p = parse_program("X1 := eps.1.0; while not R { flip X1 }; randbit").unwrap();
        let expected = Stmt::seq_all(vec![
            Stmt::Assign(Reg::X(1), Expr::app(Expr::app(Expr::Eps, true), false)),
            Stmt::while_loop(
                Expr::not(Expr::Id(Reg::R)),
                Stmt::Flip(Expr::Id(Reg::X(1))),
            ),
            Stmt::RandBit,
        ]);
        assert_eq!(p, expected);
    }

    #[test]
    fn expression_shapes() {
        let e = parse_expr_str("(not X1) sub R and Q").unwrap();
        assert_eq!(
            e,
            Expr::and(Expr::sub_eq(Expr::not(Expr::Id(Reg::X(1))), Reg::R), Reg::Q)
        );
        let e = parse_expr_str("not X1 sub R").unwrap();
        assert_eq!(e, Expr::not(Expr::sub_eq(Expr::Id(Reg::X(1)), Reg::R)));
    }

    #[test]
    fn roundtrips_translator_output() {
        use flipbench_core::harness::Chain;
        use flipbench_core::por::{BoundTerm, PorFn};

        let f = PorFn::rec(
            PorFn::Empty,
            PorFn::compose(PorFn::Query, vec![PorFn::Proj { n: 3, i: 2 }]),
            PorFn::compose(PorFn::Succ(true), vec![PorFn::Proj { n: 3, i: 3 }]),
            BoundTerm::concat(BoundTerm::Arg(1), BoundTerm::One),
        );
        let chain = Chain::build(&f).unwrap();
        roundtrip(&chain.ra);
        roundtrip(&chain.la);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_program("X1 := ").is_err());
        assert!(parse_program("W1 := eps").is_err());
        assert!(parse_program("while R { flip R").is_err());
        assert!(parse_program("X1 := eps.2").is_err());
    }
}
