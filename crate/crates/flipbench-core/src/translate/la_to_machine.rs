//! Compile stream-flavor programs to on-demand machines. Each register
//! gets its own tape plus one scratch tape for expression values; a tape
//! holds its register's value as the blank-free run just left of the head,
//! with the head parked one cell past the last bit. Because the output of
//! a machine is read the same way, halting with the result register's tape
//! in this discipline yields the right output with no extra work.
//!
//! All control flow is neutral-labeled; only `randbit` sites consume
//! stream bits, via a pair of transitions labeled 0 and 1. The machine
//! therefore consumes exactly as many bits as the source program.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::machine::{
    Label, Machine, MachineKind, Move, ReadPat, Sym, Transition, WriteOp,
};
use crate::sifp::{flavor, Expr, Flavor, Reg, SifpError, Stmt};

struct Builder {
    tapes: usize,
    names: Vec<String>,
    transitions: Vec<Transition>,
}

impl Builder {
    fn state(&mut self, tag: &str) -> usize {
        let id = self.names.len();
        self.names.push(alloc::format!("q{id}_{tag}"));
        id
    }

    /// Add a transition touching only the listed tapes; the rest read
    /// anything, keep their symbol, and stay.
    fn t(
        &mut self,
        from: usize,
        to: usize,
        label: Label,
        reads: &[(usize, Sym)],
        writes: &[(usize, Sym)],
        moves: &[(usize, Move)],
    ) {
        let mut r = alloc::vec![ReadPat::Any; self.tapes];
        for &(i, s) in reads {
            r[i] = ReadPat::Sym(s);
        }
        let mut w = alloc::vec![WriteOp::Keep; self.tapes];
        for &(i, s) in writes {
            w[i] = WriteOp::Sym(s);
        }
        let mut m = alloc::vec![Move::S; self.tapes];
        for &(i, mv) in moves {
            m[i] = mv;
        }
        self.transitions.push(Transition { from, reads: r, label, to, writes: w, moves: m });
    }

    fn goto(&mut self, from: usize, to: usize) {
        self.t(from, to, Label::Natural, &[], &[], &[]);
    }

    /// Move the head right over bits until it rests on a blank.
    fn to_end(&mut self, entry: usize, tape: usize) -> usize {
        let exit = self.state("end");
        for s in [Sym::Zero, Sym::One] {
            self.t(entry, entry, Label::Natural, &[(tape, s)], &[], &[(tape, Move::R)]);
        }
        self.t(entry, exit, Label::Natural, &[(tape, Sym::Blank)], &[], &[]);
        exit
    }

    /// From one past the end, park the head on the value's first bit.
    fn rewind(&mut self, entry: usize, tape: usize) -> usize {
        let scan = self.state("rw");
        let exit = self.state("rw_done");
        self.t(entry, scan, Label::Natural, &[], &[], &[(tape, Move::L)]);
        for s in [Sym::Zero, Sym::One] {
            self.t(scan, scan, Label::Natural, &[(tape, s)], &[], &[(tape, Move::L)]);
        }
        self.t(scan, exit, Label::Natural, &[(tape, Sym::Blank)], &[], &[(tape, Move::R)]);
        exit
    }

    /// Erase the value; the head ends where the value began.
    fn clear(&mut self, entry: usize, tape: usize) -> usize {
        let scan = self.state("clr");
        let exit = self.state("clr_done");
        self.t(entry, scan, Label::Natural, &[], &[], &[(tape, Move::L)]);
        for s in [Sym::Zero, Sym::One] {
            self.t(
                scan,
                scan,
                Label::Natural,
                &[(tape, s)],
                &[(tape, Sym::Blank)],
                &[(tape, Move::L)],
            );
        }
        self.t(scan, exit, Label::Natural, &[(tape, Sym::Blank)], &[], &[(tape, Move::R)]);
        exit
    }

    /// Write one bit at the head and step past it.
    fn write_bit(&mut self, entry: usize, tape: usize, b: bool) -> usize {
        let exit = self.state("wr");
        self.t(entry, exit, Label::Natural, &[], &[(tape, Sym::bit(b))], &[(tape, Move::R)]);
        exit
    }

    /// `dst := src` for distinct tapes; both heads end past their values.
    fn copy(&mut self, entry: usize, src: usize, dst: usize) -> usize {
        debug_assert_ne!(src, dst);
        let s = self.clear(entry, dst);
        let loop_st = self.rewind(s, src);
        let exit = self.state("cp_done");
        for b in [false, true] {
            self.t(
                loop_st,
                loop_st,
                Label::Natural,
                &[(src, Sym::bit(b))],
                &[(dst, Sym::bit(b))],
                &[(src, Move::R), (dst, Move::R)],
            );
        }
        self.t(loop_st, exit, Label::Natural, &[(src, Sym::Blank)], &[], &[]);
        exit
    }

    /// With both heads on their first bits, branch on whether tape `a`'s
    /// value is a prefix of tape `b`'s. Heads are left mid-value; callers
    /// restore them.
    fn is_prefix(&mut self, entry: usize, a: usize, b: usize) -> (usize, usize) {
        let yes = self.state("pfx_y");
        let no = self.state("pfx_n");
        self.t(entry, yes, Label::Natural, &[(a, Sym::Blank)], &[], &[]);
        for bit in [Sym::Zero, Sym::One] {
            self.t(
                entry,
                entry,
                Label::Natural,
                &[(a, bit), (b, bit)],
                &[],
                &[(a, Move::R), (b, Move::R)],
            );
        }
        for (x, y) in [
            (Sym::Zero, Sym::One),
            (Sym::One, Sym::Zero),
            (Sym::Zero, Sym::Blank),
            (Sym::One, Sym::Blank),
        ] {
            self.t(entry, no, Label::Natural, &[(a, x), (b, y)], &[], &[]);
        }
        (yes, no)
    }

    /// Branch on whether the tape's value is exactly the one-bit string
    /// `b`. The head is restored to one past the end on both exits.
    fn test_exact_bit(&mut self, entry: usize, tape: usize, b: bool) -> (usize, usize) {
        let yes = self.state("tb_y");
        let no = self.state("tb_n");
        let last = self.state("tb_last");
        let first = self.state("tb_first");
        let back = self.state("tb_back");
        self.t(entry, last, Label::Natural, &[], &[], &[(tape, Move::L)]);
        // Last bit matches: check it is also the first bit.
        self.t(last, first, Label::Natural, &[(tape, Sym::bit(b))], &[], &[(tape, Move::L)]);
        // Wrong last bit: restore by walking right to the end.
        let wrong = self.state("tb_wrong");
        self.t(last, wrong, Label::Natural, &[(tape, Sym::bit(!b))], &[], &[]);
        let w_end = self.to_end(wrong, tape);
        self.goto(w_end, no);
        // Empty value: every cell is blank, so position is immaterial.
        self.t(last, no, Label::Natural, &[(tape, Sym::Blank)], &[], &[]);
        // Exactly one bit: step back over it and past it.
        self.t(first, back, Label::Natural, &[(tape, Sym::Blank)], &[], &[(tape, Move::R)]);
        self.t(back, yes, Label::Natural, &[], &[], &[(tape, Move::R)]);
        // Longer value: restore and fail.
        let longer = self.state("tb_long");
        for s in [Sym::Zero, Sym::One] {
            self.t(first, longer, Label::Natural, &[(tape, s)], &[], &[]);
        }
        let l_end = self.to_end(longer, tape);
        self.goto(l_end, no);
        (yes, no)
    }
}

struct Compiler {
    b: Builder,
    reg_tape: BTreeMap<Reg, usize>,
    /// Expression scratch tape.
    e: usize,
}

impl Compiler {
    fn tape(&self, r: Reg) -> usize {
        self.reg_tape[&r]
    }

    /// Evaluate `expr` into the scratch tape.
    fn expr(&mut self, expr: &Expr, entry: usize) -> usize {
        match expr {
            Expr::Eps => {
                let s = self.b.clear(entry, self.e);
                // clear leaves the head at the old value's start; for an
                // empty value every position is equivalent.
                s
            }
            Expr::App(inner, bit) => {
                let s = self.expr(inner, entry);
                self.b.write_bit(s, self.e, *bit)
            }
            Expr::Id(r) => {
                let t = self.tape(*r);
                self.b.copy(entry, t, self.e)
            }
            Expr::SubEq(inner, r) => {
                let t = self.tape(*r);
                let s = self.expr(inner, entry);
                let s = self.b.rewind(s, self.e);
                let s = self.b.rewind(s, t);
                let (yes, no) = self.b.is_prefix(s, self.e, t);
                let exit = self.b.state("sub_done");
                for (branch, bit) in [(yes, true), (no, false)] {
                    let s = self.b.to_end(branch, self.e);
                    let s = self.b.to_end(s, t);
                    let s = self.b.clear(s, self.e);
                    let s = self.b.write_bit(s, self.e, bit);
                    self.b.goto(s, exit);
                }
                exit
            }
            Expr::And(inner, r) => {
                let t = self.tape(*r);
                let s = self.expr(inner, entry);
                let (y1, n1) = self.b.test_exact_bit(s, self.e, true);
                let (y2, n2) = self.b.test_exact_bit(y1, t, true);
                let exit = self.b.state("and_done");
                for (branch, bit) in [(y2, true), (n1, false), (n2, false)] {
                    let s = self.b.clear(branch, self.e);
                    let s = self.b.write_bit(s, self.e, bit);
                    self.b.goto(s, exit);
                }
                exit
            }
            Expr::Not(inner) => {
                let s = self.expr(inner, entry);
                let (yes, no) = self.b.test_exact_bit(s, self.e, false);
                let exit = self.b.state("not_done");
                for (branch, bit) in [(yes, true), (no, false)] {
                    let s = self.b.clear(branch, self.e);
                    let s = self.b.write_bit(s, self.e, bit);
                    self.b.goto(s, exit);
                }
                exit
            }
        }
    }

    fn stm(&mut self, s: &Stmt, entry: usize) -> usize {
        match s {
            Stmt::Assign(r, e) => {
                let t = self.tape(*r);
                let s = self.expr(e, entry);
                self.b.copy(s, self.e, t)
            }
            Stmt::Seq(a, b) => {
                let m = self.stm(a, entry);
                self.stm(b, m)
            }
            Stmt::While(g, body) => {
                let s = self.expr(g, entry);
                let (yes, no) = self.b.test_exact_bit(s, self.e, true);
                let b_exit = self.stm(body, yes);
                self.b.goto(b_exit, entry);
                no
            }
            Stmt::RandBit => {
                let r = self.tape(Reg::R);
                let exit = self.b.state("rb_done");
                for bit in [false, true] {
                    let s = self.b.state("rb_bit");
                    self.b.t(entry, s, Label::Bit(bit), &[], &[], &[]);
                    let s = self.b.clear(s, r);
                    let s = self.b.write_bit(s, r, bit);
                    self.b.goto(s, exit);
                }
                exit
            }
            Stmt::Flip(_) => unreachable!("flavor checked before compilation"),
        }
    }
}

fn regs_of_stmt(s: &Stmt, out: &mut BTreeSet<Reg>) {
    match s {
        Stmt::Assign(r, e) => {
            out.insert(*r);
            regs_of_expr(e, out);
        }
        Stmt::Seq(a, b) => {
            regs_of_stmt(a, out);
            regs_of_stmt(b, out);
        }
        Stmt::While(g, b) => {
            regs_of_expr(g, out);
            regs_of_stmt(b, out);
        }
        Stmt::Flip(e) => regs_of_expr(e, out),
        Stmt::RandBit => {}
    }
}

fn regs_of_expr(e: &Expr, out: &mut BTreeSet<Reg>) {
    match e {
        Expr::Eps => {}
        Expr::App(e, _) | Expr::Not(e) => regs_of_expr(e, out),
        Expr::Id(r) => {
            out.insert(*r);
        }
        Expr::SubEq(e, r) | Expr::And(e, r) => {
            regs_of_expr(e, out);
            out.insert(*r);
        }
    }
}

/// Compile a stream-flavor (or pure) program taking `n_inputs` arguments
/// in `X1..Xn` into an on-demand machine whose output is the final value
/// of `R` and which consumes exactly the bits the program draws.
pub fn la_to_machine(p: &Stmt, n_inputs: usize) -> Result<Machine, SifpError> {
    let found = flavor(p);
    if found != Flavor::Pure && found != Flavor::Stream {
        return Err(SifpError::WrongFlavor { expected: Flavor::Stream, found });
    }
    let mut regs = BTreeSet::new();
    regs_of_stmt(p, &mut regs);
    regs.insert(Reg::R);
    for i in 1..=n_inputs as u32 {
        regs.insert(Reg::X(i));
    }
    let reg_tape: BTreeMap<Reg, usize> =
        regs.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let e = regs.len();
    let mut b = Builder { tapes: regs.len() + 1, names: Vec::new(), transitions: Vec::new() };
    let start = b.state("start");
    // Input tapes begin with the head on the first bit; park each head one
    // past the end to establish the register discipline.
    let mut cur = start;
    let input_tapes: Vec<usize> =
        (1..=n_inputs as u32).map(|i| reg_tape[&Reg::X(i)]).collect();
    for &t in &input_tapes {
        cur = b.to_end(cur, t);
    }
    let mut c = Compiler { b, reg_tape, e };
    let end = c.stm(p, cur);
    let mut b = c.b;
    let halt = b.state("halt");
    b.goto(end, halt);
    let m = Machine {
        kind: MachineKind::OnDemand,
        tapes: b.tapes,
        state_names: b.names,
        start,
        halts: [halt].into_iter().collect(),
        transitions: b.transitions,
        output_tape: c.reg_tape[&Reg::R],
        input_tapes,
    };
    Ok(m)
}
