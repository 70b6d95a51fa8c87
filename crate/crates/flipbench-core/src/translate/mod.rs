//! Compilers between the computation models: function algebra programs to
//! oracle-flavor imperative programs, oracle flavor to stream flavor,
//! stream-flavor programs to on-demand machines, and the machine-kind
//! conversions (on-demand to canonical, canonical to and from the
//! step-indexed kind).

pub mod canonical;
pub mod emit;
pub mod por_to_ra;
pub mod la_to_machine;
pub mod ra_to_la;
