//! Machine table text.
//!
//! Header lines, in any order before the transitions:
//!   `kind on-demand|canonical|ptm`
//!   `tapes <n>`
//!   `state <name>` (one per state; indices follow declaration order)
//!   `start <name>`
//!   `halt <name>` (repeatable)
//!   `output-tape <i>`
//!   `input-tapes <i> <j> ..` (optional; defaults to none)
//!
//! Transitions, one per line:
//!   `(<state>, <reads>, <label>) -> (<state>, <writes>, <moves>)`
//! where `<reads>` has one character per tape from `0 1 _ *` (`*` matches
//! anything, `_` is blank), `<label>` is `0`, `1`, or `#` (neutral),
//! `<writes>` uses `0 1 _ =` (`=` keeps the cell), and `<moves>` uses
//! `L R S`.

use std::collections::BTreeMap;

use flipbench_core::machine::{
    Label, Machine, MachineKind, Move, ReadPat, Sym, Transition, WriteOp,
};

pub fn parse_machine(src: &str) -> Result<Machine, String> {
    let mut kind = None;
    let mut tapes = None;
    let mut names: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut start = None;
    let mut halts = Vec::new();
    let mut output_tape = None;
    let mut input_tapes = Vec::new();
    let mut transitions = Vec::new();

    for (lineno, raw) in src.lines().enumerate() {
        // `#` is the neutral label, so machine files use `//` comments.
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| format!("line {}: {msg}", lineno + 1);
        if let Some(rest) = line.strip_prefix("kind ") {
            kind = Some(match rest.trim() {
                "on-demand" => MachineKind::OnDemand,
                "canonical" => MachineKind::Canonical,
                "ptm" => MachineKind::Ptm,
                other => return Err(err(format!("unknown kind {other:?}"))),
            });
        } else if let Some(rest) = line.strip_prefix("tapes ") {
            tapes = Some(rest.trim().parse::<usize>().map_err(|e| err(format!("{e}")))?);
        } else if let Some(rest) = line.strip_prefix("state ") {
            let name = rest.trim().to_string();
            if index.contains_key(&name) {
                return Err(err(format!("duplicate state {name:?}")));
            }
            index.insert(name.clone(), names.len());
            names.push(name);
        } else if let Some(rest) = line.strip_prefix("start ") {
            start = Some(lookup(&index, rest.trim()).map_err(&err)?);
        } else if let Some(rest) = line.strip_prefix("halt ") {
            halts.push(lookup(&index, rest.trim()).map_err(&err)?);
        } else if let Some(rest) = line.strip_prefix("output-tape ") {
            output_tape =
                Some(rest.trim().parse::<usize>().map_err(|e| err(format!("{e}")))?);
        } else if let Some(rest) = line.strip_prefix("input-tapes") {
            for w in rest.split_whitespace() {
                input_tapes.push(w.parse::<usize>().map_err(|e| err(format!("{e}")))?);
            }
        } else if line.starts_with('(') {
            let n = tapes.ok_or_else(|| err("tapes must be declared first".into()))?;
            transitions.push(parse_transition(line, n, &index).map_err(&err)?);
        } else {
            return Err(err(format!("unrecognized line {line:?}")));
        }
    }

    let m = Machine {
        kind: kind.ok_or("missing kind header")?,
        tapes: tapes.ok_or("missing tapes header")?,
        state_names: names,
        start: start.ok_or("missing start header")?,
        halts: halts.into_iter().collect(),
        transitions,
        output_tape: output_tape.ok_or("missing output-tape header")?,
        input_tapes,
    };
    m.validate().map_err(|e| format!("invalid machine: {e}"))?;
    Ok(m)
}

fn lookup(index: &BTreeMap<String, usize>, name: &str) -> Result<usize, String> {
    index.get(name).copied().ok_or_else(|| format!("undeclared state {name:?}"))
}

fn parse_transition(
    line: &str,
    tapes: usize,
    index: &BTreeMap<String, usize>,
) -> Result<Transition, String> {
    let (lhs, rhs) = line
        .split_once("->")
        .ok_or_else(|| "transition needs '->'".to_string())?;
    let l = triple(lhs)?;
    let r = triple(rhs)?;
    let from = lookup(index, l.0)?;
    let to = lookup(index, r.0)?;
    let reads = per_tape(l.1, tapes, |c| match c {
        '0' => Some(ReadPat::Sym(Sym::Zero)),
        '1' => Some(ReadPat::Sym(Sym::One)),
        '_' => Some(ReadPat::Sym(Sym::Blank)),
        '*' => Some(ReadPat::Any),
        _ => None,
    })?;
    let label = match l.2 {
        "0" => Label::Bit(false),
        "1" => Label::Bit(true),
        "#" => Label::Natural,
        other => return Err(format!("bad label {other:?}")),
    };
    let writes = per_tape(r.1, tapes, |c| match c {
        '0' => Some(WriteOp::Sym(Sym::Zero)),
        '1' => Some(WriteOp::Sym(Sym::One)),
        '_' => Some(WriteOp::Sym(Sym::Blank)),
        '=' => Some(WriteOp::Keep),
        _ => None,
    })?;
    let moves = per_tape(r.2, tapes, |c| match c {
        'L' => Some(Move::L),
        'R' => Some(Move::R),
        'S' => Some(Move::S),
        _ => None,
    })?;
    Ok(Transition { from, reads, label, to, writes, moves })
}

/// Split `( a , b , c )` into its three fields.
fn triple(s: &str) -> Result<(&str, &str, &str), String> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| format!("expected a parenthesized triple, found {s:?}"))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated fields in {s:?}"));
    }
    Ok((parts[0], parts[1], parts[2]))
}

fn per_tape<T>(
    field: &str,
    tapes: usize,
    f: impl Fn(char) -> Option<T>,
) -> Result<Vec<T>, String> {
    if field.chars().count() != tapes {
        return Err(format!(
            "field {field:?} must have one character per tape ({tapes})"
        ));
    }
    field
        .chars()
        .map(|c| f(c).ok_or_else(|| format!("bad character {c:?} in {field:?}")))
        .collect()
}

pub fn render_machine(m: &Machine) -> String {
    let mut out = String::new();
    out.push_str(match m.kind {
        MachineKind::OnDemand => "kind on-demand\n",
        MachineKind::Canonical => "kind canonical\n",
        MachineKind::Ptm => "kind ptm\n",
    });
    out.push_str(&format!("tapes {}\n", m.tapes));
    for name in &m.state_names {
        out.push_str(&format!("state {name}\n"));
    }
    out.push_str(&format!("start {}\n", m.state_names[m.start]));
    for h in &m.halts {
        out.push_str(&format!("halt {}\n", m.state_names[*h]));
    }
    out.push_str(&format!("output-tape {}\n", m.output_tape));
    if !m.input_tapes.is_empty() {
        out.push_str("input-tapes");
        for t in &m.input_tapes {
            out.push_str(&format!(" {t}"));
        }
        out.push('\n');
    }
    for t in &m.transitions {
        let reads: String = t
            .reads
            .iter()
            .map(|r| match r {
                ReadPat::Sym(Sym::Zero) => '0',
                ReadPat::Sym(Sym::One) => '1',
                ReadPat::Sym(Sym::Blank) => '_',
                ReadPat::Any => '*',
            })
            .collect();
        let label = match t.label {
            Label::Bit(false) => "0",
            Label::Bit(true) => "1",
            Label::Natural => "#",
        };
        let writes: String = t
            .writes
            .iter()
            .map(|w| match w {
                WriteOp::Sym(Sym::Zero) => '0',
                WriteOp::Sym(Sym::One) => '1',
                WriteOp::Sym(Sym::Blank) => '_',
                WriteOp::Keep => '=',
            })
            .collect();
        let moves: String = t
            .moves
            .iter()
            .map(|mv| match mv {
                Move::L => 'L',
                Move::R => 'R',
                Move::S => 'S',
            })
            .collect();
        out.push_str(&format!(
            "({}, {reads}, {label}) -> ({}, {writes}, {moves})\n",
            m.state_names[t.from], m.state_names[t.to]
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use flipbench_core::machine::stream_copier;

    fn eq_machines(a: &Machine, b: &Machine) {
        assert_eq!(a.kind, b.kind);
        assert_eq!(a.tapes, b.tapes);
        assert_eq!(a.state_names, b.state_names);
        assert_eq!(a.start, b.start);
        assert_eq!(a.halts, b.halts);
        assert_eq!(a.transitions, b.transitions);
        assert_eq!(a.output_tape, b.output_tape);
        assert_eq!(a.input_tapes, b.input_tapes);
    }

    #[test]
    fn roundtrips_stream_copier() {
        let m = stream_copier(2);
        let text = render_machine(&m);
        let back = parse_machine(&text).unwrap();
        eq_machines(&m, &back);
    }

    #[test]
    fn roundtrips_compiled_machine() {
        use flipbench_core::sifp::{Expr, Reg, Stmt};
        use flipbench_core::translate::la_to_machine::la_to_machine;
        let p = Stmt::seq(
            Stmt::RandBit,
            Stmt::Assign(Reg::R, Expr::app(Expr::Id(Reg::R), true)),
        );
        let m = la_to_machine(&p, 0).unwrap();
        let text = render_machine(&m);
        let back = parse_machine(&text).unwrap();
        eq_machines(&m, &back);
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(parse_machine("kind on-demand\n").is_err());
        let bad = "kind on-demand\ntapes 1\nstate a\nstart a\nhalt a\noutput-tape 0\n\
                   (a, 00, #) -> (a, =, S)\n";
        assert!(parse_machine(bad).is_err());
    }
}
