//! Arithmetic circuit text, one node per line:
//!   `n<i> = input <j>`
//!   `n<i> = const 0|1`
//!   `n<i> = add|mul|sub n<a> n<b>`
//! and a final `output n<i>`. Node indices must count up from 0 and may
//! only refer backwards.

use flipbench_core::pzt::{Circuit, Gate};

pub fn parse_circuit(src: &str) -> Result<Circuit, String> {
    let mut gates = Vec::new();
    let mut output = None;
    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| format!("line {}: {msg}", lineno + 1);
        if let Some(rest) = line.strip_prefix("output") {
            if output.is_some() {
                return Err(err("duplicate output line".into()));
            }
            output = Some(node_ref(rest.trim(), gates.len()).map_err(&err)?);
            continue;
        }
        let (lhs, rhs) =
            line.split_once('=').ok_or_else(|| err("expected '='".into()))?;
        let idx = node_ref(lhs.trim(), usize::MAX).map_err(&err)?;
        if idx != gates.len() {
            return Err(err(format!(
                "node n{idx} out of order; expected n{}",
                gates.len()
            )));
        }
        let words: Vec<&str> = rhs.split_whitespace().collect();
        let gate = match words.as_slice() {
            ["input", j] => Gate::Input(
                j.parse().map_err(|e| err(format!("bad input index: {e}")))?,
            ),
            ["const", "0"] => Gate::Const0,
            ["const", "1"] => Gate::Const1,
            [op @ ("add" | "mul" | "sub"), a, b] => {
                let a = node_ref(a, gates.len()).map_err(&err)?;
                let b = node_ref(b, gates.len()).map_err(&err)?;
                match *op {
                    "add" => Gate::Add(a, b),
                    "mul" => Gate::Mul(a, b),
                    _ => Gate::Sub(a, b),
                }
            }
            _ => return Err(err(format!("unrecognized node definition {rhs:?}"))),
        };
        gates.push(gate);
    }
    let c = Circuit { gates, output: output.ok_or("missing output line")? };
    c.validate().map_err(|e| format!("invalid circuit: {e}"))?;
    Ok(c)
}

fn node_ref(s: &str, limit: usize) -> Result<usize, String> {
    let idx: usize = s
        .strip_prefix('n')
        .ok_or_else(|| format!("expected a node reference like n0, found {s:?}"))?
        .parse()
        .map_err(|_| format!("bad node reference {s:?}"))?;
    if limit != usize::MAX && idx >= limit {
        return Err(format!("node n{idx} referenced before definition"));
    }
    Ok(idx)
}

#[cfg(test)]
pub fn render_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    for (i, g) in c.gates.iter().enumerate() {
        let rhs = match g {
            Gate::Input(j) => format!("input {j}"),
            Gate::Const0 => "const 0".into(),
            Gate::Const1 => "const 1".into(),
            Gate::Add(a, b) => format!("add n{a} n{b}"),
            Gate::Mul(a, b) => format!("mul n{a} n{b}"),
            Gate::Sub(a, b) => format!("sub n{a} n{b}"),
        };
        out.push_str(&format!("n{i} = {rhs}\n"));
    }
    out.push_str(&format!("output n{}\n", c.output));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrips() {
        let text = "n0 = input 0\nn1 = input 1\nn2 = add n0 n1\nn3 = mul n2 n2\n\
                    n4 = const 1\nn5 = sub n3 n4\noutput n5\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(render_circuit(&c), text);
        assert_eq!(c.gates.len(), 6);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse_circuit("n0 = input 0\n").is_err()); // no output
        assert!(parse_circuit("n1 = input 0\noutput n1\n").is_err()); // gap
        assert!(parse_circuit("n0 = add n0 n0\noutput n0\n").is_err()); // forward ref
        assert!(parse_circuit("n0 = frob n0\noutput n0\n").is_err());
    }
}
