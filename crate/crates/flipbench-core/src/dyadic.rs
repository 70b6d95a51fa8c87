//! Exact dyadic rationals: nonnegative numbers of the form n / 2^e with
//! unbounded numerators. All probability mass in this crate is dyadic and
//! no operation ever rounds.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A nonnegative dyadic rational `num / 2^exp` in canonical form: either
/// `num` is odd or `exp` is zero (so zero is `0 / 2^0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { num: BigUint::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { num: BigUint::one(), exp: 0 }
    }

    pub fn half() -> Self {
        Dyadic { num: BigUint::one(), exp: 1 }
    }

    /// `num / 2^exp`, normalized.
    pub fn new(num: BigUint, exp: u64) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    /// `count / 2^bits` for machine-sized counts.
    pub fn ratio(count: u64, bits: u64) -> Self {
        Dyadic::new(BigUint::from(count), bits)
    }

    /// `1 / 2^bits`.
    pub fn pow2_inverse(bits: u64) -> Self {
        Dyadic { num: BigUint::one(), exp: bits }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp);
        if tz > 0 {
            self.num >>= tz;
            self.exp -= tz;
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.num.is_one()
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        Dyadic::new(a + b, e)
    }

    /// `|self - other|`.
    pub fn abs_diff(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        if a >= b {
            Dyadic::new(a - b, e)
        } else {
            Dyadic::new(b - a, e)
        }
    }

    /// Checked subtraction; `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        if a >= b {
            Some(Dyadic::new(a - b, e))
        } else {
            None
        }
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &other.num, self.exp + other.exp)
    }

    /// Halve, i.e. multiply by 1/2.
    pub fn halved(&self) -> Dyadic {
        if self.num.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic { num: self.num.clone(), exp: self.exp + 1 }
        }
    }

    /// Compare against the rational `p / q` (with `q > 0`), exactly.
    pub fn cmp_frac(&self, p: u64, q: u64) -> Ordering {
        assert!(q > 0, "comparison against a fraction with zero denominator");
        // num / 2^exp  vs  p / q  <=>  num * q  vs  p * 2^exp
        let lhs = &self.num * BigUint::from(q);
        let rhs = BigUint::from(p) << self.exp;
        lhs.cmp(&rhs)
    }

    /// Render with a plain decimal denominator, e.g. `3/4`, `1/2`, `1`, `0`.
    pub fn to_plain_string(&self) -> String {
        if self.exp == 0 {
            alloc::format!("{}", self.num)
        } else {
            alloc::format!("{}/{}", self.num, BigUint::one() << self.exp)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        a.cmp(&b)
    }
}

/// Canonical text form `num/2^exp`; exponent zero prints as the bare numerator.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_keeps_numerator_odd() {
        let d = Dyadic::ratio(4, 3); // 4/8 = 1/2
        assert_eq!(d, Dyadic::half());
        assert_eq!(d.exponent(), 1);
        let z = Dyadic::ratio(0, 7);
        assert!(z.is_zero());
        assert_eq!(z.exponent(), 0);
    }

    #[test]
    fn arithmetic_is_exact() {
        let q = Dyadic::ratio(1, 2); // 1/4
        assert_eq!(Dyadic::half().add(&q), Dyadic::ratio(3, 2));
        assert_eq!(Dyadic::half().mul(&q), Dyadic::ratio(1, 3));
        assert_eq!(Dyadic::ratio(3, 2).abs_diff(&Dyadic::half()), q);
        assert_eq!(Dyadic::half().abs_diff(&Dyadic::ratio(3, 2)), q);
        assert_eq!(Dyadic::half().halved(), q);
        assert!(Dyadic::ratio(3, 2).checked_sub(&Dyadic::one()).is_none());
    }

    #[test]
    fn ordering_and_fraction_compare() {
        assert!(Dyadic::ratio(3, 2) > Dyadic::half());
        assert_eq!(Dyadic::ratio(2, 2), Dyadic::half());
        // 3/4 >= 2/3, 1/2 < 2/3
        assert_eq!(Dyadic::ratio(3, 2).cmp_frac(2, 3), Ordering::Greater);
        assert_eq!(Dyadic::half().cmp_frac(2, 3), Ordering::Less);
        assert_eq!(Dyadic::half().cmp_frac(1, 2), Ordering::Equal);
    }

    #[test]
    fn display_forms() {
        use alloc::string::ToString;
        assert_eq!(Dyadic::ratio(3, 2).to_string(), "3/2^2");
        assert_eq!(Dyadic::one().to_string(), "1");
        assert_eq!(Dyadic::zero().to_string(), "0");
        assert_eq!(Dyadic::ratio(3, 2).to_plain_string(), "3/4");
        assert_eq!(Dyadic::one().to_plain_string(), "1");
    }

    #[test]
    fn sum_of_all_masses_is_one() {
        // 2^k equal parts add back to one, exactly.
        let mut acc = Dyadic::zero();
        for _ in 0..32 {
            acc = acc.add(&Dyadic::pow2_inverse(5));
        }
        assert!(acc.is_one());
    }
}
