//! Helpers that emit imperative statement fragments used by the
//! translators: conditionals, bit-by-bit walks over register contents, and
//! derived string operations (concatenation, repetition, length-bounded
//! truncation, equality).
//!
//! The language has no last-bit destructor, so the walks rebuild a register
//! prefix by prefix: a candidate prefix `p` of `src` is extended by testing
//! whether `p.0` is still a prefix of `src`. Every fragment initializes all
//! of its scratch registers before reading them, so fragments can be
//! re-executed inside loops.

use alloc::vec::Vec;

use crate::sifp::{Expr, Reg, Stmt};

/// Allocates scratch registers and owns the designated always-empty
/// register (allocated once, never assigned by any fragment).
pub struct EmitCtx {
    next: u32,
    /// A register no emitted statement ever assigns; reads as `eps`.
    pub empty: Reg,
}

impl EmitCtx {
    /// Scratch registers are `S(start)`, `S(start + 1)`, ...
    pub fn new(start: u32) -> Self {
        EmitCtx { next: start + 1, empty: Reg::S(start) }
    }

    pub fn fresh(&mut self) -> Reg {
        let r = Reg::S(self.next);
        self.next += 1;
        r
    }
}

fn bit_expr(b: bool) -> Expr {
    Expr::app(Expr::Eps, b)
}

/// `if cond == 1 { then } else { els }`. The condition must evaluate to a
/// boolean string (`1` or `0`).
pub fn if_else(ctx: &mut EmitCtx, cond: Expr, then: Stmt, els: Stmt) -> Stmt {
    let g = ctx.fresh();
    let h = ctx.fresh();
    Stmt::seq_all(alloc::vec![
        Stmt::Assign(g, cond),
        Stmt::Assign(h, Expr::not(Expr::Id(g))),
        Stmt::while_loop(Expr::Id(g), Stmt::seq(then, Stmt::Assign(g, Expr::Eps))),
        Stmt::while_loop(Expr::Id(h), Stmt::seq(els, Stmt::Assign(h, Expr::Eps))),
    ])
}

/// Walk the bits of `src` in order; `body` is emitted once and executed per
/// bit with the current bit (as a one-bit string) in the returned register.
/// The body must not write `src` or the walk registers.
pub fn foreach_bit(
    ctx: &mut EmitCtx,
    src: Reg,
    body: impl FnOnce(&mut EmitCtx, Reg) -> Stmt,
) -> Stmt {
    let p = ctx.fresh();
    let b = ctx.fresh();
    let t = ctx.fresh();
    let step = Stmt::seq_all(alloc::vec![
        Stmt::Assign(t, Expr::sub_eq(Expr::app(Expr::Id(p), false), src)),
        if_else(
            ctx,
            Expr::Id(t),
            Stmt::seq(
                Stmt::Assign(p, Expr::app(Expr::Id(p), false)),
                Stmt::Assign(b, bit_expr(false)),
            ),
            Stmt::seq(
                Stmt::Assign(p, Expr::app(Expr::Id(p), true)),
                Stmt::Assign(b, bit_expr(true)),
            ),
        ),
        body(ctx, b),
    ]);
    Stmt::seq(
        Stmt::Assign(p, Expr::Eps),
        Stmt::while_loop(Expr::not(Expr::sub_eq(Expr::Id(src), p)), step),
    )
}

/// `pre, bit := src minus its last bit, the last bit` (`eps`, `eps` when
/// `src` is empty). `src` must differ from both destinations.
pub fn split_last(ctx: &mut EmitCtx, src: Reg, pre: Reg, bit: Reg) -> Stmt {
    debug_assert!(src != pre && src != bit && pre != bit);
    let p = ctx.fresh();
    let t = ctx.fresh();
    let step = Stmt::seq_all(alloc::vec![
        Stmt::Assign(pre, Expr::Id(p)),
        Stmt::Assign(t, Expr::sub_eq(Expr::app(Expr::Id(p), false), src)),
        if_else(
            ctx,
            Expr::Id(t),
            Stmt::seq(
                Stmt::Assign(p, Expr::app(Expr::Id(p), false)),
                Stmt::Assign(bit, bit_expr(false)),
            ),
            Stmt::seq(
                Stmt::Assign(p, Expr::app(Expr::Id(p), true)),
                Stmt::Assign(bit, bit_expr(true)),
            ),
        ),
    ]);
    Stmt::seq_all(alloc::vec![
        Stmt::Assign(p, Expr::Eps),
        Stmt::Assign(pre, Expr::Eps),
        Stmt::Assign(bit, Expr::Eps),
        Stmt::while_loop(Expr::not(Expr::sub_eq(Expr::Id(src), p)), step),
    ])
}

/// Append the one-bit string held in `bit` to `dst`.
pub fn append_bit(ctx: &mut EmitCtx, dst: Reg, bit: Reg) -> Stmt {
    if_else(
        ctx,
        Expr::not(Expr::Id(bit)), // 1 exactly when bit is the string 0
        Stmt::Assign(dst, Expr::app(Expr::Id(dst), false)),
        Stmt::Assign(dst, Expr::app(Expr::Id(dst), true)),
    )
}

/// `dst := a . b`. `dst` must differ from `b`.
pub fn concat_into(ctx: &mut EmitCtx, dst: Reg, a: Reg, b: Reg) -> Stmt {
    debug_assert!(dst != b);
    Stmt::seq(
        Stmt::Assign(dst, Expr::Id(a)),
        foreach_bit(ctx, b, |ctx, bit| append_bit(ctx, dst, bit)),
    )
}

/// `dst := a times b` (a repeated |b| times). `dst`, `a`, `b` distinct.
pub fn times_into(ctx: &mut EmitCtx, dst: Reg, a: Reg, b: Reg) -> Stmt {
    debug_assert!(dst != a && dst != b && a != b);
    Stmt::seq(
        Stmt::Assign(dst, Expr::Eps),
        foreach_bit(ctx, b, |ctx, _| {
            foreach_bit(ctx, a, |ctx, bit| append_bit(ctx, dst, bit))
        }),
    )
}

/// `dst := 1^|a|`. `dst` must differ from `a`.
pub fn ones_into(ctx: &mut EmitCtx, dst: Reg, a: Reg) -> Stmt {
    debug_assert!(dst != a);
    Stmt::seq(
        Stmt::Assign(dst, Expr::Eps),
        foreach_bit(ctx, a, |_, _| Stmt::Assign(dst, Expr::app(Expr::Id(dst), true))),
    )
}

/// `dst := v truncated at r`: the length-`|r|` prefix of `v` when
/// `|r| <= |v|`, otherwise `v`. `dst` may alias `v` or `r`.
pub fn truncate_into(ctx: &mut EmitCtx, dst: Reg, v: Reg, r: Reg) -> Stmt {
    let uv = ctx.fresh();
    let ur = ctx.fresh();
    let p = ctx.fresh();
    let cnt = ctx.fresh();
    let t = ctx.fresh();
    let walk = Stmt::seq_all(alloc::vec![
        Stmt::Assign(p, Expr::Eps),
        Stmt::Assign(cnt, Expr::Eps),
        Stmt::while_loop(
            Expr::not(Expr::sub_eq(Expr::Id(ur), cnt)),
            Stmt::seq_all(alloc::vec![
                Stmt::Assign(t, Expr::sub_eq(Expr::app(Expr::Id(p), false), v)),
                if_else(
                    ctx,
                    Expr::Id(t),
                    Stmt::Assign(p, Expr::app(Expr::Id(p), false)),
                    Stmt::Assign(p, Expr::app(Expr::Id(p), true)),
                ),
                Stmt::Assign(cnt, Expr::app(Expr::Id(cnt), true)),
            ]),
        ),
        Stmt::Assign(dst, Expr::Id(p)),
    ]);
    Stmt::seq_all(alloc::vec![
        ones_into(ctx, uv, v),
        ones_into(ctx, ur, r),
        if_else(
            ctx,
            Expr::sub_eq(Expr::Id(uv), ur), // |v| <= |r|
            Stmt::Assign(dst, Expr::Id(v)),
            walk,
        ),
    ])
}

/// `dst := 1` if the registers hold equal strings, else `0`.
pub fn eq_into(ctx: &mut EmitCtx, dst: Reg, a: Reg, b: Reg) -> Stmt {
    let t = ctx.fresh();
    Stmt::seq(
        Stmt::Assign(t, Expr::sub_eq(Expr::Id(a), b)),
        Stmt::Assign(dst, Expr::and(Expr::sub_eq(Expr::Id(b), a), t)),
    )
}

/// Sequence a vector of fragments.
pub fn block(stmts: Vec<Stmt>) -> Stmt {
    Stmt::seq_all(stmts)
}
