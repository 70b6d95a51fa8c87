//! Exact semantics for oracle-randomized computation.
//!
//! The crate covers, bottom to top:
//!
//! * bit strings and the dyadic naturals-to-strings bijection ([`bitstring`]);
//! * exact dyadic rationals and finitely supported distributions
//!   ([`dyadic`], [`dist`]), with oracles and streams as randomness sources
//!   ([`randomness`]);
//! * a first-order logic with randomness atoms `Flip(t)` interpreted over
//!   the uniform measure on oracles, including exact measure computation by
//!   finite counting and measure-threshold connectives ([`rl`]);
//! * an oracle-recursive function algebra with bounded recursion on
//!   notation ([`por`]);
//! * a small imperative language over string registers in two randomness
//!   flavors, oracle access and stream access ([`sifp`]);
//! * stream-driven multi-tape machines in on-demand, canonical, and
//!   two-transition-table forms ([`machine`]);
//! * translators that carry a function of the algebra all the way down to
//!   machines while preserving output distributions exactly ([`translate`]),
//!   and a harness that checks those distributions against each other
//!   ([`harness`]);
//! * arithmetic-circuit zero testing by random evaluation modulo random
//!   small moduli, with exact supporting predicates ([`pzt`]).
//!
//! Everything is `no_std` + `alloc`; all probability arithmetic is exact
//! dyadic, never floating point. The companion `flipbench` crate adds text
//! formats and a command-line interface.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bitstring;
pub mod dist;
pub mod dyadic;
pub mod harness;
pub mod machine;
pub mod por;
pub mod pzt;
pub mod randomness;
pub mod rl;
pub mod sifp;
pub mod translate;
