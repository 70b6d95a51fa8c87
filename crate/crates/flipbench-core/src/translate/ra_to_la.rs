//! Compile oracle-flavor programs into stream-flavor programs with the
//! same output distribution. Oracle answers are i.i.d. fair bits per
//! coordinate, so it suffices to draw one fresh stream bit the first time
//! each coordinate is queried and replay it on repeats.
//!
//! The memo table lives in one reserved scratch register: a sequence of
//! self-delimiting entries, each the coordinate's bits encoded as pairs
//! `b 0`, the terminator `1 1`, then the remembered answer bit. The pair
//! code keeps keys from matching anywhere except at an entry boundary with
//! an equal coordinate.

use crate::sifp::{Expr, Reg, Stmt};

use super::emit::{append_bit, block, concat_into, foreach_bit, if_else, EmitCtx};

/// Largest `S` index mentioned by the program, if any.
fn max_s_stmt(s: &Stmt) -> Option<u32> {
    match s {
        Stmt::Assign(r, e) => max_s_reg(*r).max(max_s_expr(e)),
        Stmt::Seq(a, b) => max_s_stmt(a).max(max_s_stmt(b)),
        Stmt::While(g, b) => max_s_expr(g).max(max_s_stmt(b)),
        Stmt::Flip(e) => max_s_expr(e),
        Stmt::RandBit => None,
    }
}

fn max_s_expr(e: &Expr) -> Option<u32> {
    match e {
        Expr::Eps => None,
        Expr::App(e, _) | Expr::Not(e) => max_s_expr(e),
        Expr::Id(r) => max_s_reg(*r),
        Expr::SubEq(e, r) | Expr::And(e, r) => max_s_expr(e).max(max_s_reg(*r)),
    }
}

fn max_s_reg(r: Reg) -> Option<u32> {
    match r {
        Reg::S(i) => Some(i),
        _ => None,
    }
}

/// Translate an oracle-flavor (or pure) program; the result is
/// stream-flavor (or pure) and induces the same distribution on final
/// stores over the source registers.
pub fn ra_to_la(p: &Stmt) -> Stmt {
    let base = max_s_stmt(p).map_or(0, |m| m + 1);
    let mut ctx = EmitCtx::new(base + 1);
    let memo = Reg::S(base);
    rewrite(p, memo, &mut ctx)
}

fn rewrite(s: &Stmt, memo: Reg, ctx: &mut EmitCtx) -> Stmt {
    match s {
        Stmt::Assign(_, _) | Stmt::RandBit => s.clone(),
        Stmt::Seq(a, b) => Stmt::seq(rewrite(a, memo, ctx), rewrite(b, memo, ctx)),
        Stmt::While(g, b) => Stmt::while_loop(g.clone(), rewrite(b, memo, ctx)),
        Stmt::Flip(e) => flip_to_lookup(e, memo, ctx),
    }
}

/// Emit the lookup-or-draw block for one `flip e` site, leaving the answer
/// in `R`.
fn flip_to_lookup(e: &Expr, memo: Reg, ctx: &mut EmitCtx) -> Stmt {
    let coord = ctx.fresh();
    let key = ctx.fresh();
    let found = ctx.fresh();
    let cont = ctx.fresh();
    let p = ctx.fresh();
    let cand = ctx.fresh();
    let b1 = ctx.fresh();
    let b2 = ctx.fresh();
    let scont = ctx.fresh();

    // key := pair-encode(coord) followed by the 1 1 terminator.
    let build_key = block(alloc::vec![
        Stmt::Assign(coord, e.clone()),
        Stmt::Assign(key, Expr::Eps),
        foreach_bit(ctx, coord, |ctx, bit| {
            Stmt::seq(
                append_bit(ctx, key, bit),
                Stmt::Assign(key, Expr::app(Expr::Id(key), false)),
            )
        }),
        Stmt::Assign(key, Expr::app(Expr::app(Expr::Id(key), true), true)),
    ]);

    // Advance p past one stored bit of memo, recording it in `into`.
    let take_bit = |ctx: &mut EmitCtx, into: Reg| {
        if_else(
            ctx,
            Expr::sub_eq(Expr::app(Expr::Id(p), false), memo),
            Stmt::seq(
                Stmt::Assign(p, Expr::app(Expr::Id(p), false)),
                Stmt::Assign(into, Expr::app(Expr::Eps, false)),
            ),
            Stmt::seq(
                Stmt::Assign(p, Expr::app(Expr::Id(p), true)),
                Stmt::Assign(into, Expr::app(Expr::Eps, true)),
            ),
        )
    };

    // Skip a whole entry: pairs until 1 1, then the answer bit.
    let first = take_bit(ctx, b1);
    let second = take_bit(ctx, b2);
    let answer = take_bit(ctx, b2);
    let skip_pair = block(alloc::vec![
        first,
        second,
        if_else(
            ctx,
            Expr::and(Expr::Id(b1), b2),
            Stmt::seq(answer, Stmt::Assign(scont, Expr::Eps)),
            Stmt::Assign(scont, Expr::app(Expr::Eps, true)),
        ),
    ]);
    let skip_entry = Stmt::seq(
        Stmt::Assign(scont, Expr::app(Expr::Eps, true)),
        Stmt::while_loop(Expr::Id(scont), skip_pair),
    );

    // Scan entry boundaries for the key.
    let on_hit = block(alloc::vec![
        Stmt::Assign(found, Expr::app(Expr::Eps, true)),
        Stmt::Assign(cont, Expr::Eps),
        if_else(
            ctx,
            Expr::sub_eq(Expr::app(Expr::Id(cand), false), memo),
            Stmt::Assign(Reg::R, Expr::app(Expr::Eps, false)),
            Stmt::Assign(Reg::R, Expr::app(Expr::Eps, true)),
        ),
    ]);
    let on_miss = Stmt::seq(
        skip_entry,
        Stmt::Assign(cont, Expr::not(Expr::sub_eq(Expr::Id(memo), p))),
    );
    let scan_step = block(alloc::vec![
        concat_into(ctx, cand, p, key),
        if_else(ctx, Expr::sub_eq(Expr::Id(cand), memo), on_hit, on_miss),
    ]);
    let scan = block(alloc::vec![
        Stmt::Assign(found, Expr::app(Expr::Eps, false)),
        Stmt::Assign(p, Expr::Eps),
        Stmt::Assign(cont, Expr::not(Expr::sub_eq(Expr::Id(memo), p))),
        Stmt::while_loop(Expr::Id(cont), scan_step),
    ]);

    // On a genuine miss, draw a fresh bit and record the entry.
    let record = block(alloc::vec![
        Stmt::RandBit,
        foreach_bit(ctx, key, |ctx, bit| append_bit(ctx, memo, bit)),
        append_bit(ctx, memo, Reg::R),
    ]);
    let draw = if_else(ctx, Expr::not(Expr::Id(found)), record, Stmt::Assign(Reg::Z, Expr::Id(Reg::Z)));

    block(alloc::vec![build_key, scan, draw])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::BitString;
    use crate::randomness::{FiniteStream, Oracle, Stream};
    use crate::sifp::{eval_program_oracle, eval_program_stream, flavor, run_oracle, Flavor, Store};
    use alloc::vec;
    use alloc::vec::Vec;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn repeated_coordinate_consumes_one_bit_and_replays() {
        // flip X1; Y1 := R; flip X1; Y2 := R; flip X2; Y3 := R
        let p = Stmt::seq_all(vec![
            Stmt::Flip(Expr::Id(Reg::X(1))),
            Stmt::Assign(Reg::Y(1), Expr::Id(Reg::R)),
            Stmt::Flip(Expr::Id(Reg::X(1))),
            Stmt::Assign(Reg::Y(2), Expr::Id(Reg::R)),
            Stmt::Flip(Expr::Id(Reg::X(2))),
            Stmt::Assign(Reg::Y(3), Expr::Id(Reg::R)),
        ]);
        let q = ra_to_la(&p);
        assert_eq!(flavor(&q), Flavor::Stream);
        let s = FiniteStream::new(vec![true, false]);
        let mut store = Store::new();
        store.set(Reg::X(1), bs("01"));
        store.set(Reg::X(2), bs("1"));
        let (out, consumed) =
            crate::sifp::run_stream(&q, store, &s, 10_000_000, None).unwrap();
        assert_eq!(consumed, 2);
        assert_eq!(out.get(Reg::Y(1)), bs("1"));
        assert_eq!(out.get(Reg::Y(2)), bs("1"));
        assert_eq!(out.get(Reg::Y(3)), bs("0"));
    }

    /// Replay an oracle run as a stream: feed the translated program the
    /// oracle's answers in first-query order and demand the same result.
    fn agree(p: &Stmt, inputs: &[BitString], seed: u64) {
        let o = Oracle::new(seed);
        let mut order: Vec<BitString> = Vec::new();
        let mut answers: Vec<bool> = Vec::new();
        {
            let mut tr = |s: &Stmt, st: &Store| {
                if let Stmt::Flip(e) = s {
                    let coord = crate::sifp::eval_expr(e, st);
                    if !order.contains(&coord) {
                        order.push(coord);
                        answers.push(st.get(Reg::R) == BitString::bit(true));
                    }
                }
            };
            run_oracle(p, Store::with_inputs(inputs), &o, 10_000_000, Some(&mut tr)).unwrap();
        }
        let want = eval_program_oracle(p, inputs, &o, 10_000_000).unwrap();
        let s = FiniteStream::new(answers.clone());
        let (got, consumed) =
            eval_program_stream(&ra_to_la(p), inputs, &s, 10_000_000).unwrap();
        assert_eq!(got, want, "seed {seed} inputs {inputs:?}");
        assert_eq!(consumed, answers.len(), "distinct coordinates consumed");
    }

    #[test]
    fn translated_por_corpus_agrees_under_replay() {
        use super::super::por_to_ra::tests::{arg_tuples, corpus};
        use super::super::por_to_ra::por_to_ra;
        for f in corpus() {
            let n = f.validate().unwrap();
            let p = por_to_ra(&f).unwrap();
            for tuple in arg_tuples(n, 1) {
                for seed in [0u64, 5] {
                    agree(&p, &tuple, seed);
                }
            }
        }
    }

    #[test]
    fn eps_coordinate_and_empty_memo() {
        let p = Stmt::Flip(Expr::Eps);
        let q = ra_to_la(&p);
        let (r, consumed) = eval_program_stream(&q, &[], &Stream::with_prefix(vec![true], 0), 100_000).unwrap();
        assert_eq!(r, bs("1"));
        assert_eq!(consumed, 1);
    }

    #[test]
    fn pure_programs_pass_through() {
        let p = Stmt::Assign(Reg::Y(1), Expr::app(Expr::Eps, true));
        assert_eq!(flavor(&ra_to_la(&p)), Flavor::Pure);
    }
}
