//! Machine-kind conversions.
//!
//! An on-demand machine becomes canonical by duplicating every neutral
//! transition under both bit labels: the canonical machine draws a fresh
//! fair bit on each such step and ignores it, which changes bit
//! consumption but not the output distribution. Valid on-demand machines
//! never mix neutral and labeled transitions on overlapping reads of one
//! state, so the duplication stays deterministic.
//!
//! A canonical machine and a two-table machine have the same table shape;
//! relabeling the kind preserves behavior whenever the table is total at
//! every reachable non-halt configuration (both bits always applicable),
//! because then the two-table stay-in-place rule never fires and both
//! kinds consume one bit per step. Machines produced by the compilers in
//! this crate are total by construction.

use crate::machine::{Label, Machine, MachineError, MachineKind};

/// Duplicate neutral transitions under both labels and mark the machine
/// canonical.
pub fn od_to_stm(m: &Machine) -> Result<Machine, MachineError> {
    m.validate()?;
    let mut out = m.clone();
    out.kind = MachineKind::Canonical;
    out.transitions.clear();
    for t in &m.transitions {
        if t.label == Label::Natural {
            for b in [false, true] {
                let mut d = t.clone();
                d.label = Label::Bit(b);
                out.transitions.push(d);
            }
        } else {
            out.transitions.push(t.clone());
        }
    }
    out.validate()?;
    Ok(out)
}

/// Reinterpret a canonical table as a two-table machine.
pub fn stm_to_ptm(m: &Machine) -> Result<Machine, MachineError> {
    require_kind(m, MachineKind::Canonical)?;
    let mut out = m.clone();
    out.kind = MachineKind::Ptm;
    Ok(out)
}

/// Reinterpret a two-table machine as a canonical one. Where the source
/// would stay in place on an undefined entry, the result is stuck instead;
/// the conversion is exact for total tables.
pub fn ptm_to_stm(m: &Machine) -> Result<Machine, MachineError> {
    require_kind(m, MachineKind::Ptm)?;
    let mut out = m.clone();
    out.kind = MachineKind::Canonical;
    Ok(out)
}

fn require_kind(m: &Machine, kind: MachineKind) -> Result<(), MachineError> {
    m.validate()?;
    if m.kind != kind {
        return Err(MachineError::Invalid(alloc::vec![alloc::format!(
            "expected a {kind:?} machine, got {:?}",
            m.kind
        )]));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::BitString;
    use crate::machine::{stream_copier, DEFAULT_MACHINE_FUEL};
    use crate::randomness::Stream;
    use crate::sifp::{Expr, Reg, Stmt};
    use crate::translate::la_to_machine::la_to_machine;
    use alloc::vec;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn kind_checks() {
        let stm = stream_copier(1);
        assert!(od_to_stm(&stm).is_ok()); // no neutral labels, still fine
        assert!(stm_to_ptm(&stm).is_ok());
        assert!(ptm_to_stm(&stm).is_err());
        let ptm = stm_to_ptm(&stm).unwrap();
        assert!(ptm_to_stm(&ptm).is_ok());
    }

    #[test]
    fn chain_preserves_distribution() {
        // R := one random bit appended to X1.
        let p = Stmt::seq_all(vec![
            Stmt::RandBit,
            Stmt::Assign(Reg::Y(1), Expr::Id(Reg::R)),
            Stmt::RandBit,
            Stmt::Assign(
                Reg::R,
                Expr::app(Expr::Id(Reg::X(1)), false),
            ),
            Stmt::Assign(Reg::Q, Expr::and(Expr::Id(Reg::Y(1)), Reg::R)),
        ]);
        let od = la_to_machine(&p, 1).unwrap();
        let stm = od_to_stm(&od).unwrap();
        let ptm = stm_to_ptm(&stm).unwrap();
        let input = [bs("1")];
        let d_od = od.exact_dist(&input, 24, DEFAULT_MACHINE_FUEL).unwrap();
        let d_stm = stm.exact_dist(&input, 24, DEFAULT_MACHINE_FUEL).unwrap();
        let d_ptm = ptm.exact_dist(&input, 24, DEFAULT_MACHINE_FUEL).unwrap();
        assert_eq!(d_od, d_stm);
        assert_eq!(d_stm, d_ptm);
        // And a concrete run agrees between canonical and two-table kinds.
        let s = Stream::new(4);
        let a = stm.run(&input, &s, DEFAULT_MACHINE_FUEL, None).unwrap();
        let b = ptm.run(&input, &s, DEFAULT_MACHINE_FUEL, None).unwrap();
        assert_eq!(a.output, b.output);
        assert_eq!(a.consumed, b.consumed);
    }

    #[test]
    fn od_duplication_matches_on_demand_distribution() {
        let p = Stmt::seq(Stmt::RandBit, Stmt::Assign(Reg::R, Expr::app(Expr::Id(Reg::R), true)));
        let od = la_to_machine(&p, 0).unwrap();
        let stm = od_to_stm(&od).unwrap();
        let d_od = od.exact_dist(&[], 24, DEFAULT_MACHINE_FUEL).unwrap();
        let d_stm = stm.exact_dist(&[], 24, DEFAULT_MACHINE_FUEL).unwrap();
        assert_eq!(d_od, d_stm);
        assert_eq!(d_od.support_len(), 2);
    }
}
