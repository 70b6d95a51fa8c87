//! Text formats for the artifacts the tool reads and writes: formulas,
//! function-algebra programs, imperative programs, machine tables, and
//! arithmetic circuits. Parsers return plain `String` errors; the driver
//! maps them all to the parse-error exit code.

pub mod circuit;
pub mod formula;
pub mod machine;
pub mod por;
pub mod sifp;

/// A token stream shared by the expression-level parsers.
#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    /// A digit run, kept verbatim (leading zeros matter in bit constants).
    Digits(String),
    Punct(&'static str),
}

pub fn lex(src: &str, puncts: &[&'static str]) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len()
                && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            out.push(Tok::Ident(src[start..i].to_string()));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Digits(src[start..i].to_string()));
            continue;
        }
        // Longest punctuator first.
        let mut ps: Vec<&'static str> = puncts.to_vec();
        ps.sort_by_key(|p| core::cmp::Reverse(p.len()));
        for p in ps {
            if src[i..].starts_with(p) {
                out.push(Tok::Punct(p));
                i += p.len();
                continue 'outer;
            }
        }
        return Err(format!("unexpected character {c:?} at byte {i}"));
    }
    Ok(out)
}

/// Cursor over a token list.
pub struct Cur<'a> {
    pub toks: &'a [Tok],
    pub pos: usize,
}

impl<'a> Cur<'a> {
    pub fn new(toks: &'a [Tok]) -> Self {
        Cur { toks, pos: 0 }
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos)
    }

    pub fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat_punct(&mut self, p: &str) -> bool {
        if let Some(Tok::Punct(q)) = self.peek() {
            if *q == p {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    pub fn expect_punct(&mut self, p: &str) -> Result<(), String> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(format!("expected {p:?}, found {:?}", self.peek()))
        }
    }

    pub fn eat_ident(&mut self, kw: &str) -> bool {
        if let Some(Tok::Ident(q)) = self.peek() {
            if q == kw {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn expect_end(&self) -> Result<(), String> {
        if self.at_end() {
            Ok(())
        } else {
            Err(format!("trailing input starting at {:?}", self.peek()))
        }
    }
}

/// FNV-1a digest of a rendered artifact, for compact comparison tables.
pub fn digest(s: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}
