//! Finite binary strings and the primitive operations every other module
//! builds on: concatenation, repetition, prefix truncation, the prefix and
//! subword orders, and the dyadic bijection between naturals and strings.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A finite string over {0, 1}. The empty string is written `eps` in text
/// form; every other string is its plain 0/1 spelling.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub const fn empty() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    /// Single-bit string.
    pub fn bit(b: bool) -> Self {
        BitString { bits: alloc::vec![b] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    /// `self` concatenated with itself `|other|` times.
    pub fn times(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() * other.len());
        for _ in 0..other.len() {
            bits.extend_from_slice(&self.bits);
        }
        BitString { bits }
    }

    /// The length-`|r|` prefix of `self` when `|r| <= |self|`, otherwise
    /// `self` unchanged.
    pub fn truncate_to(&self, r: &BitString) -> BitString {
        if r.len() <= self.len() {
            BitString { bits: self.bits[..r.len()].to_vec() }
        } else {
            self.clone()
        }
    }

    /// Prefix of the first `n` bits (or all of `self` if shorter).
    pub fn prefix(&self, n: usize) -> BitString {
        let n = n.min(self.len());
        BitString { bits: self.bits[..n].to_vec() }
    }

    /// Initial-substring order: `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len() <= other.len() && other.bits[..self.len()] == self.bits[..]
    }

    /// Length order: `|self| <= |other|`.
    pub fn len_leq(&self, other: &BitString) -> bool {
        self.len() <= other.len()
    }

    /// Contiguous-substring order: `self` occurs as a factor of `other`.
    pub fn is_subword_of(&self, other: &BitString) -> bool {
        if self.is_empty() {
            return true;
        }
        if self.len() > other.len() {
            return false;
        }
        (0..=other.len() - self.len())
            .any(|i| other.bits[i..i + self.len()] == self.bits[..])
    }

    /// Split off the last bit, if any.
    pub fn split_last(&self) -> Option<(BitString, bool)> {
        let (&last, init) = self.bits.split_last()?;
        Some((BitString { bits: init.to_vec() }, last))
    }

    /// All distinct contiguous subwords, in sorted order.
    pub fn subwords(&self) -> Vec<BitString> {
        let mut out = alloc::collections::BTreeSet::new();
        out.insert(BitString::empty());
        for i in 0..self.len() {
            for j in i + 1..=self.len() {
                out.insert(BitString { bits: self.bits[i..j].to_vec() });
            }
        }
        out.into_iter().collect()
    }

    /// Parse the textual form: `eps` for the empty string, otherwise a
    /// nonempty run of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<BitString, String> {
        if s == "eps" {
            return Ok(BitString::empty());
        }
        if s.is_empty() {
            return Err("empty bit string literal; write `eps`".into());
        }
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(alloc::format!("invalid bit character {c:?}")),
            }
        }
        Ok(BitString { bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("eps");
        }
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The bijection from naturals onto strings: the binary representation of
/// `n + 1` with its leading bit removed. `dyad(0) = eps`, `dyad(1) = 0`,
/// `dyad(2) = 1`, `dyad(3) = 00`, ...
pub fn dyad(n: &BigUint) -> BitString {
    let m = n + BigUint::one();
    let nbits = m.bits();
    // Bits of m from the second-highest position downward.
    let mut bits = Vec::with_capacity(nbits as usize - 1);
    for i in (0..nbits - 1).rev() {
        bits.push(m.bit(i));
    }
    BitString { bits }
}

/// `dyad` on machine-sized indices.
pub fn dyad_usize(n: usize) -> BitString {
    dyad(&BigUint::from(n))
}

/// Inverse of `dyad`: the index of a string in the length-then-value order.
pub fn dyad_index(s: &BitString) -> BigUint {
    let mut m = BigUint::one();
    for &b in s.bits() {
        m <<= 1u8;
        if b {
            m += BigUint::one();
        }
    }
    m - BigUint::one()
}

/// `dyad_index` when it fits in a machine word.
pub fn dyad_index_usize(s: &BitString) -> Option<usize> {
    if s.len() >= usize::BITS as usize {
        return None;
    }
    let mut m: usize = 1;
    for &b in s.bits() {
        m = m.checked_mul(2)?.checked_add(b as usize)?;
    }
    Some(m - 1)
}

/// All strings of length at most `max_len`, in dyad order (length first,
/// then numeric value). There are `2^(max_len+1) - 1` of them.
pub fn strings_up_to(max_len: usize) -> Vec<BitString> {
    let count = (1usize << (max_len + 1)) - 1;
    (0..count).map(dyad_usize).collect()
}

#[allow(unused)]
fn _assert_zero_is_zero() {
    // dyad relies on BigUint::bits() returning 0 only for zero; n+1 >= 1.
    debug_assert!(BigUint::zero().bits() == 0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn concat_and_display() {
        assert_eq!(bs("10").concat(&bs("eps")), bs("10"));
        assert_eq!(bs("eps").concat(&bs("01")), bs("01"));
        assert_eq!(bs("10").concat(&bs("01")).to_string(), "1001");
        assert_eq!(BitString::empty().to_string(), "eps");
    }

    #[test]
    fn times_matches_definition() {
        // x times eps = eps, x times yb = (x times y) x
        assert_eq!(bs("10").times(&bs("eps")), bs("eps"));
        assert_eq!(bs("10").times(&bs("111")), bs("101010"));
        assert_eq!(bs("eps").times(&bs("111")), bs("eps"));
        for x in strings_up_to(3) {
            for y in strings_up_to(3) {
                if let Some((y0, _)) = y.split_last() {
                    assert_eq!(x.times(&y), x.times(&y0).concat(&x));
                }
                assert_eq!(x.times(&y).len(), x.len() * y.len());
            }
        }
    }

    #[test]
    fn truncate_prefix_subword() {
        assert_eq!(bs("1011").truncate_to(&bs("00")), bs("10"));
        assert_eq!(bs("1").truncate_to(&bs("0000")), bs("1"));
        assert!(bs("10").is_prefix_of(&bs("101")));
        assert!(!bs("11").is_prefix_of(&bs("101")));
        assert!(bs("eps").is_prefix_of(&bs("eps")));
        assert!(bs("01").is_subword_of(&bs("101")));
        assert!(!bs("00").is_subword_of(&bs("101")));
        assert!(bs("eps").is_subword_of(&bs("eps")));
        assert!(bs("0").len_leq(&bs("11")));
        assert!(!bs("00").len_leq(&bs("1")));
    }

    #[test]
    fn concat_associative_exhaustive() {
        // All splits of strings up to length 8.
        for a in strings_up_to(2) {
            for b in strings_up_to(2) {
                for c in strings_up_to(2) {
                    assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
                }
            }
        }
    }

    #[test]
    fn dyad_small_values() {
        assert_eq!(dyad_usize(0), bs("eps"));
        assert_eq!(dyad_usize(1), bs("0"));
        assert_eq!(dyad_usize(2), bs("1"));
        assert_eq!(dyad_usize(3), bs("00"));
        assert_eq!(dyad_usize(4), bs("01"));
        assert_eq!(dyad_usize(6), bs("11"));
    }

    #[test]
    fn dyad_is_a_bijection() {
        let mut seen = alloc::collections::BTreeSet::new();
        for n in 0..(1usize << 12) - 1 {
            let s = dyad_usize(n);
            assert!(seen.insert(s.clone()), "dyad collision at {n}");
            assert_eq!(dyad_index_usize(&s), Some(n));
            assert_eq!(dyad_index(&s), BigUint::from(n));
        }
        // Every string of length <= 11 is hit.
        assert_eq!(seen.len(), (1 << 12) - 1);
        assert!(seen.iter().all(|s| s.len() <= 11));
    }

    #[test]
    fn strings_up_to_is_sorted_by_length() {
        let all = strings_up_to(3);
        assert_eq!(all.len(), 15);
        assert_eq!(all[0], bs("eps"));
        for w in all.windows(2) {
            assert!(w[0].len() <= w[1].len());
        }
    }

    #[test]
    fn subwords_of_101() {
        let subs = bs("101").subwords();
        let expect: Vec<BitString> =
            ["eps", "0", "1", "01", "10", "101"].iter().map(|s| bs(s)).collect();
        let mut expect = expect;
        expect.sort();
        assert_eq!(subs, expect);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(BitString::parse("10x").is_err());
        assert!(BitString::parse("").is_err());
    }
}
