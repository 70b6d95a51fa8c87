//! Compile function-algebra programs into oracle-flavor imperative
//! programs. A function of arity `n` becomes a program reading `X1..Xn`
//! and leaving its value in `R`; every oracle query of the source turns
//! into one `flip`, in the same order, so the two sides induce the same
//! distribution over answers under any oracle.

use alloc::vec::Vec;

use crate::por::{BoundTerm, PorError, PorFn};
use crate::sifp::{Expr, Reg, Stmt};

use super::emit::{
    append_bit, block, concat_into, if_else, split_last, times_into, truncate_into, EmitCtx,
};

/// Compile `f` to a program over `X1..Xn` with the result in `R`.
pub fn por_to_ra(f: &PorFn) -> Result<Stmt, PorError> {
    let n = f.validate()?;
    let mut ctx = EmitCtx::new(1);
    let args: Vec<Reg> = (1..=n as u32).map(Reg::X).collect();
    let out = ctx.fresh();
    let body = compile(f, &args, out, &mut ctx);
    Ok(Stmt::seq(body, Stmt::Assign(Reg::R, Expr::Id(out))))
}

/// Emit code computing `f(args)` into `out`. Argument registers are only
/// read, and every emitted fragment initializes its own scratch state, so
/// the result can be re-executed inside loops.
fn compile(f: &PorFn, args: &[Reg], out: Reg, ctx: &mut EmitCtx) -> Stmt {
    match f {
        PorFn::Empty => Stmt::Assign(out, Expr::Eps),
        PorFn::Proj { i, .. } => Stmt::Assign(out, Expr::Id(args[i - 1])),
        PorFn::Succ(b) => Stmt::Assign(out, Expr::app(Expr::Id(args[0]), *b)),
        PorFn::Cond => {
            let pre = ctx.fresh();
            let bit = ctx.fresh();
            let on_bit = if_else(
                ctx,
                Expr::not(Expr::Id(bit)),
                Stmt::Assign(out, Expr::Id(args[2])),
                Stmt::Assign(out, Expr::Id(args[3])),
            );
            let empty = ctx.empty;
            block(alloc::vec![
                split_last(ctx, args[0], pre, bit),
                if_else(
                    ctx,
                    Expr::sub_eq(Expr::Id(args[0]), empty),
                    Stmt::Assign(out, Expr::Id(args[1])),
                    on_bit,
                ),
            ])
        }
        PorFn::Query => Stmt::seq(
            Stmt::Flip(Expr::Id(args[0])),
            Stmt::Assign(out, Expr::Id(Reg::R)),
        ),
        PorFn::Compose { g, hs } => {
            let mut stmts = Vec::new();
            let mut inner = Vec::new();
            for h in hs {
                let v = ctx.fresh();
                stmts.push(compile(h, args, v, ctx));
                inner.push(v);
            }
            stmts.push(compile(g, &inner, out, ctx));
            block(stmts)
        }
        PorFn::Rec { g, h0, h1, bound } => {
            let (xs, y) = args.split_at(args.len() - 1);
            let y = y[0];
            let pre = ctx.fresh();
            let bit = ctx.fresh();
            let t = ctx.fresh();
            let v = ctx.fresh();
            let b = ctx.fresh();

            let mut step_args = xs.to_vec();
            step_args.push(pre);
            step_args.push(out); // previous value lives in out
            let step0 = compile(h0, &step_args, v, ctx);
            let step1 = compile(h1, &step_args, v, ctx);

            let mut bound_args = xs.to_vec();
            bound_args.push(pre);
            let bound_code = compile_bound(bound, &bound_args, b, ctx);

            // Walk y's bits in order; pre holds the processed prefix.
            let step = block(alloc::vec![
                Stmt::Assign(t, Expr::sub_eq(Expr::app(Expr::Id(pre), false), y)),
                if_else(
                    ctx,
                    Expr::Id(t),
                    Stmt::seq(Stmt::Assign(bit, Expr::app(Expr::Eps, false)), step0),
                    Stmt::seq(Stmt::Assign(bit, Expr::app(Expr::Eps, true)), step1),
                ),
                bound_code,
                truncate_into(ctx, out, v, b),
                append_bit(ctx, pre, bit),
            ]);
            block(alloc::vec![
                compile(g, xs, out, ctx),
                Stmt::Assign(pre, Expr::Eps),
                Stmt::while_loop(Expr::not(Expr::sub_eq(Expr::Id(y), pre)), step),
            ])
        }
    }
}

/// Emit code evaluating a bound term over the given argument registers.
fn compile_bound(t: &BoundTerm, args: &[Reg], out: Reg, ctx: &mut EmitCtx) -> Stmt {
    match t {
        BoundTerm::Eps => Stmt::Assign(out, Expr::Eps),
        BoundTerm::Zero => Stmt::Assign(out, Expr::app(Expr::Eps, false)),
        BoundTerm::One => Stmt::Assign(out, Expr::app(Expr::Eps, true)),
        BoundTerm::Arg(i) => Stmt::Assign(out, Expr::Id(args[*i])),
        BoundTerm::Concat(a, b) => {
            let ra = ctx.fresh();
            let rb = ctx.fresh();
            block(alloc::vec![
                compile_bound(a, args, ra, ctx),
                compile_bound(b, args, rb, ctx),
                concat_into(ctx, out, ra, rb),
            ])
        }
        BoundTerm::Times(a, b) => {
            let ra = ctx.fresh();
            let rb = ctx.fresh();
            block(alloc::vec![
                compile_bound(a, args, ra, ctx),
                compile_bound(b, args, rb, ctx),
                times_into(ctx, out, ra, rb),
            ])
        }
    }
}
