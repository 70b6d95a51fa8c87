//! Finite probability distributions over bit strings with exact dyadic
//! masses, plus monadic composition and total-variation distance.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bitstring::BitString;
use crate::dyadic::Dyadic;

/// A finitely supported distribution whose masses are dyadic and sum to
/// exactly one. Zero-mass entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Distribution {
    mass: BTreeMap<BitString, Dyadic>,
}

/// The masses handed to a builder did not sum to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotNormalized {
    pub total: Dyadic,
}

impl Distribution {
    /// Point mass on one string.
    pub fn dirac(s: BitString) -> Self {
        let mut mass = BTreeMap::new();
        mass.insert(s, Dyadic::one());
        Distribution { mass }
    }

    /// Build from (value, mass) pairs; masses for equal values accumulate,
    /// zero masses are dropped, and the total must be exactly one.
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (BitString, Dyadic)>,
    ) -> Result<Self, NotNormalized> {
        let mut b = DistBuilder::new();
        for (s, m) in pairs {
            b.add(s, m);
        }
        b.finish()
    }

    pub fn mass_of(&self, s: &BitString) -> Dyadic {
        self.mass.get(s).cloned().unwrap_or_else(Dyadic::zero)
    }

    pub fn support_len(&self) -> usize {
        self.mass.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitString, &Dyadic)> {
        self.mass.iter()
    }

    /// Composition of a kernel after this distribution:
    /// `out(tau) = sum_rho kernel(rho)(tau) * self(rho)`.
    pub fn compose<F>(&self, mut kernel: F) -> Distribution
    where
        F: FnMut(&BitString) -> Distribution,
    {
        let mut b = DistBuilder::new();
        for (rho, p) in &self.mass {
            let g = kernel(rho);
            for (tau, q) in &g.mass {
                b.add(tau.clone(), p.mul(q));
            }
        }
        b.finish().expect("composition of normalized distributions is normalized")
    }

    /// Total-variation distance: half the sum of absolute mass differences.
    pub fn total_variation(&self, other: &Distribution) -> Dyadic {
        let mut acc = Dyadic::zero();
        let keys: alloc::collections::BTreeSet<_> =
            self.mass.keys().chain(other.mass.keys()).collect();
        for k in keys {
            acc = acc.add(&self.mass_of(k).abs_diff(&other.mass_of(k)));
        }
        acc.halved()
    }

    /// One line per support point, sorted: `<string> <num>/2^<exp>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (s, m) in &self.mass {
            out.push_str(&alloc::format!("{s} {m}\n"));
        }
        out
    }
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> =
            self.mass.iter().map(|(s, m)| alloc::format!("{s}: {m}")).collect();
        write!(f, "{{{}}}", entries.join(", "))
    }
}

/// Accumulates (value, mass) pairs and checks normalization at the end.
pub struct DistBuilder {
    mass: BTreeMap<BitString, Dyadic>,
    total: Dyadic,
}

impl DistBuilder {
    pub fn new() -> Self {
        DistBuilder { mass: BTreeMap::new(), total: Dyadic::zero() }
    }

    pub fn add(&mut self, s: BitString, m: Dyadic) {
        if m.is_zero() {
            return;
        }
        self.total = self.total.add(&m);
        match self.mass.get_mut(&s) {
            Some(acc) => *acc = acc.add(&m),
            None => {
                self.mass.insert(s, m);
            }
        }
    }

    pub fn total(&self) -> &Dyadic {
        &self.total
    }

    pub fn finish(self) -> Result<Distribution, NotNormalized> {
        if self.total.is_one() {
            Ok(Distribution { mass: self.mass })
        } else {
            Err(NotNormalized { total: self.total })
        }
    }
}

impl Default for DistBuilder {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn dirac_and_lookup() {
        let d = Distribution::dirac(bs("01"));
        assert!(d.mass_of(&bs("01")).is_one());
        assert!(d.mass_of(&bs("eps")).is_zero());
        assert_eq!(d.support_len(), 1);
    }

    #[test]
    fn builder_rejects_non_unit_total() {
        let r = Distribution::from_pairs([(bs("0"), Dyadic::half())]);
        assert_eq!(r.unwrap_err().total, Dyadic::half());
        let ok = Distribution::from_pairs([
            (bs("0"), Dyadic::half()),
            (bs("0"), Dyadic::ratio(1, 2)),
            (bs("1"), Dyadic::ratio(1, 2)),
        ])
        .unwrap();
        assert_eq!(ok.mass_of(&bs("0")), Dyadic::ratio(3, 2));
    }

    #[test]
    fn compose_matches_hand_computation() {
        // f = {0 -> 1/2, 1 -> 1/2}; g(0) = {eps -> 1/2, 0 -> 1/2}; g(1) = {eps -> 1}
        let f = Distribution::from_pairs([
            (bs("0"), Dyadic::half()),
            (bs("1"), Dyadic::half()),
        ])
        .unwrap();
        let out = f.compose(|rho| {
            if rho == &bs("0") {
                Distribution::from_pairs([
                    (bs("eps"), Dyadic::half()),
                    (bs("0"), Dyadic::half()),
                ])
                .unwrap()
            } else {
                Distribution::dirac(bs("eps"))
            }
        });
        assert_eq!(out.mass_of(&bs("eps")), Dyadic::ratio(3, 2));
        assert_eq!(out.mass_of(&bs("0")), Dyadic::ratio(1, 2));
    }

    #[test]
    fn total_variation_examples() {
        let d1 = Distribution::dirac(bs("eps"));
        let d2 = Distribution::from_pairs([
            (bs("eps"), Dyadic::half()),
            (bs("1"), Dyadic::half()),
        ])
        .unwrap();
        assert_eq!(d1.total_variation(&d2), Dyadic::half());
        assert!(d1.total_variation(&d1).is_zero());
    }

    #[test]
    fn render_is_sorted_lines() {
        let d = Distribution::from_pairs([
            (bs("1"), Dyadic::half()),
            (bs("eps"), Dyadic::half()),
        ])
        .unwrap();
        assert_eq!(d.render(), "eps 1/2^1\n1 1/2^1\n");
    }
}
