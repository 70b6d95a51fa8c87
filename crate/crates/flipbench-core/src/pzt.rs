//! Arithmetic circuits over the integers and randomized zero testing.
//!
//! A circuit is a topologically ordered gate list (inputs, the constants 0
//! and 1, addition, multiplication, subtraction) with one output node. The
//! randomized tester evaluates the circuit at uniformly random small
//! points modulo a random odd-sized modulus; a circuit computing the zero
//! polynomial always evaluates to 0, while a nonzero circuit survives one
//! round with probability at most 1/2 once enough rounds of randomness are
//! thrown at it, so repeated rounds drive the false-accept rate down
//! geometrically. An exact sparse normal form backs the small cases and
//! serves as the reference decision procedure.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gate {
    Input(usize),
    Const0,
    Const1,
    Add(usize, usize),
    Mul(usize, usize),
    Sub(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit {
    pub gates: Vec<Gate>,
    pub output: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PztError {
    Invalid(Vec<String>),
    /// The sparse normal form outgrew its monomial budget.
    MonomialBudget { max_monomials: usize },
    /// A tested circuit has no input variables to randomize, and is
    /// handled exactly instead.
    WrongArity { expected: usize, got: usize },
}

impl core::fmt::Display for PztError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PztError::Invalid(msgs) => write!(f, "invalid circuit: {}", msgs.join("; ")),
            PztError::MonomialBudget { max_monomials } => {
                write!(f, "normal form exceeded {max_monomials} monomials")
            }
            PztError::WrongArity { expected, got } => {
                write!(f, "expected {expected} input values, got {got}")
            }
        }
    }
}

/// Size statistics used to calibrate the tester.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CircuitStats {
    /// Number of input variables (one past the largest input index).
    pub n: usize,
    /// Number of gates.
    pub m: usize,
    /// Syntactic degree of the output (inputs count 1, products add).
    pub d: u64,
}

impl Circuit {
    pub fn validate(&self) -> Result<(), PztError> {
        let mut errs = Vec::new();
        if self.gates.is_empty() {
            errs.push(String::from("circuit has no gates"));
        }
        if self.output >= self.gates.len() {
            errs.push(alloc::format!("output node {} out of range", self.output));
        }
        for (i, g) in self.gates.iter().enumerate() {
            let check = |j: usize, errs: &mut Vec<String>| {
                if j >= i {
                    errs.push(alloc::format!(
                        "gate {i} refers to node {j}, breaking topological order"
                    ));
                }
            };
            match *g {
                Gate::Input(_) | Gate::Const0 | Gate::Const1 => {}
                Gate::Add(a, b) | Gate::Mul(a, b) | Gate::Sub(a, b) => {
                    check(a, &mut errs);
                    check(b, &mut errs);
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(PztError::Invalid(errs))
        }
    }

    pub fn stats(&self) -> CircuitStats {
        let mut n = 0usize;
        let mut deg: Vec<u64> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let d = match *g {
                Gate::Input(j) => {
                    n = n.max(j + 1);
                    1
                }
                Gate::Const0 | Gate::Const1 => 0,
                Gate::Add(a, b) | Gate::Sub(a, b) => deg[a].max(deg[b]),
                Gate::Mul(a, b) => deg[a].saturating_add(deg[b]),
            };
            deg.push(d);
        }
        CircuitStats { n, m: self.gates.len(), d: deg.get(self.output).copied().unwrap_or(0) }
    }

    /// Exact evaluation over the integers.
    pub fn eval_exact(&self, xs: &[BigInt]) -> Result<BigInt, PztError> {
        self.validate()?;
        let s = self.stats();
        if xs.len() < s.n {
            return Err(PztError::WrongArity { expected: s.n, got: xs.len() });
        }
        let mut vals: Vec<BigInt> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match *g {
                Gate::Input(j) => xs[j].clone(),
                Gate::Const0 => BigInt::zero(),
                Gate::Const1 => BigInt::one(),
                Gate::Add(a, b) => &vals[a] + &vals[b],
                Gate::Mul(a, b) => &vals[a] * &vals[b],
                Gate::Sub(a, b) => &vals[a] - &vals[b],
            };
            vals.push(v);
        }
        Ok(vals.swap_remove(self.output))
    }

    /// Evaluation with reduction modulo `k` after every gate; residues are
    /// canonical in `[0, k)`. A native fast path covers moduli fitting in
    /// 64 bits, where every product fits in 128.
    pub fn eval_mod(&self, xs: &[BigUint], k: &BigUint) -> Result<BigUint, PztError> {
        self.validate()?;
        let s = self.stats();
        if xs.len() < s.n {
            return Err(PztError::WrongArity { expected: s.n, got: xs.len() });
        }
        if let Some(k64) = k.to_u64() {
            let xs64: Vec<u64> = xs.iter().map(|x| (x % k).to_u64().unwrap()).collect();
            return Ok(BigUint::from(self.eval_mod_u64(&xs64, k64)));
        }
        let mut vals: Vec<BigUint> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match *g {
                Gate::Input(j) => &xs[j] % k,
                Gate::Const0 => BigUint::zero(),
                Gate::Const1 => BigUint::one() % k,
                Gate::Add(a, b) => (&vals[a] + &vals[b]) % k,
                Gate::Mul(a, b) => (&vals[a] * &vals[b]) % k,
                Gate::Sub(a, b) => (&vals[a] + k - &vals[b]) % k,
            };
            vals.push(v);
        }
        Ok(vals.swap_remove(self.output))
    }

    fn eval_mod_u64(&self, xs: &[u64], k: u64) -> u64 {
        let kk = k as u128;
        let mut vals: Vec<u64> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match *g {
                Gate::Input(j) => xs[j] % k,
                Gate::Const0 => 0,
                Gate::Const1 => 1 % k,
                Gate::Add(a, b) => ((vals[a] as u128 + vals[b] as u128) % kk) as u64,
                Gate::Mul(a, b) => ((vals[a] as u128 * vals[b] as u128) % kk) as u64,
                Gate::Sub(a, b) => {
                    ((vals[a] as u128 + kk - vals[b] as u128) % kk) as u64
                }
            };
            vals.push(v);
        }
        vals[self.output]
    }
}

/// A polynomial in sparse normal form: exponent vector to nonzero
/// coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl SparsePoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomials(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    fn constant(c: i64, n: usize) -> SparsePoly {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(alloc::vec![0; n], BigInt::from(c));
        }
        SparsePoly { terms }
    }

    fn var(j: usize, n: usize) -> SparsePoly {
        let mut e = alloc::vec![0u32; n];
        e[j] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::one());
        SparsePoly { terms }
    }

    fn insert(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(acc) => {
                *acc += c;
                if acc.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn add(&self, other: &SparsePoly, negate: bool) -> SparsePoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), if negate { -c } else { c.clone() });
        }
        out
    }

    fn mul(&self, other: &SparsePoly, budget: usize) -> Result<SparsePoly, PztError> {
        let mut out = SparsePoly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, ca * cb);
                if out.terms.len() > budget {
                    return Err(PztError::MonomialBudget { max_monomials: budget });
                }
            }
        }
        Ok(out)
    }

    /// Exact evaluation over the integers.
    pub fn eval_exact(&self, xs: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t *= &xs[j];
                }
            }
            acc += t;
        }
        acc
    }
}

/// Default cap on normal-form monomials.
pub const DEFAULT_MONOMIAL_BUDGET: usize = 100_000;

/// Expand a circuit into sparse normal form, failing if the form outgrows
/// the budget.
pub fn normal_form(c: &Circuit, budget: usize) -> Result<SparsePoly, PztError> {
    c.validate()?;
    let n = c.stats().n;
    let mut polys: Vec<SparsePoly> = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        let p = match *g {
            Gate::Input(j) => SparsePoly::var(j, n),
            Gate::Const0 => SparsePoly::constant(0, n),
            Gate::Const1 => SparsePoly::constant(1, n),
            Gate::Add(a, b) => polys[a].add(&polys[b], false),
            Gate::Sub(a, b) => polys[a].add(&polys[b], true),
            Gate::Mul(a, b) => polys[a].mul(&polys[b], budget)?,
        };
        if p.terms.len() > budget {
            return Err(PztError::MonomialBudget { max_monomials: budget });
        }
        polys.push(p);
    }
    Ok(polys.swap_remove(c.output))
}

/// The exact decision procedure: does the circuit compute the zero
/// polynomial?
pub fn h_oracle(c: &Circuit, budget: usize) -> Result<bool, PztError> {
    Ok(normal_form(c, budget)?.is_zero())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Zero,
    NonZero,
}

/// Outcome of one randomized test, with the round that rejected (if any).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PztOutcome {
    pub verdict: Verdict,
    pub rounds_run: u64,
}

fn random_bits(rng: &mut ChaCha8Rng, bits: usize) -> BigUint {
    if bits == 0 {
        return BigUint::zero();
    }
    let nbytes = (bits + 7) / 8;
    let mut buf = alloc::vec![0u8; nbytes];
    rng.fill_bytes(&mut buf);
    let extra = nbytes * 8 - bits;
    let last = buf.last_mut().unwrap();
    *last &= 0xffu8 >> extra;
    BigUint::from_bytes_le(&buf)
}

/// Randomized zero test. Small circuits (`m < exact_below`) are decided
/// exactly via the normal form; otherwise each round draws a modulus
/// `k = (2m random bits) + 1` and a point with `m + 3` random bits per
/// variable, and accepts only if every round evaluates to 0 mod `k`. The
/// default round count is `37 * m`; rejection exits early.
pub fn pzt_run(
    c: &Circuit,
    exact_below: usize,
    iters: Option<u64>,
    seed: u64,
) -> Result<PztOutcome, PztError> {
    c.validate()?;
    let s = c.stats();
    if s.m < exact_below {
        let zero = h_oracle(c, DEFAULT_MONOMIAL_BUDGET)?;
        return Ok(PztOutcome {
            verdict: if zero { Verdict::Zero } else { Verdict::NonZero },
            rounds_run: 0,
        });
    }
    let rounds = iters.unwrap_or(37 * s.m as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..rounds {
        let k = random_bits(&mut rng, 2 * s.m) + BigUint::one();
        let xs: Vec<BigUint> =
            (0..s.n).map(|_| random_bits(&mut rng, s.m + 3)).collect();
        if !c.eval_mod(&xs, &k)?.is_zero() {
            return Ok(PztOutcome { verdict: Verdict::NonZero, rounds_run: round + 1 });
        }
    }
    Ok(PztOutcome { verdict: Verdict::Zero, rounds_run: rounds })
}

/// Empirical false-accept rate of the tester on a (nonzero) circuit, with
/// a Wilson score upper confidence bound at 99% (z = 2.5758...).
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ErrorRate {
    pub wrong: u64,
    pub trials: u64,
    pub point: f64,
    pub wilson_upper: f64,
}

pub fn wilson_upper(wrong: u64, trials: u64) -> f64 {
    let z = 2.5758293035489004f64;
    let n = trials as f64;
    let p = wrong as f64 / n;
    let z2 = z * z;
    let center = p + z2 / (2.0 * n);
    let spread = z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    (center + spread) / (1.0 + z2 / n)
}

/// Run `trials` independent tests (seeds `seed..seed+trials`) against the
/// exact verdict and report how often the randomized verdict was wrong.
pub fn error_rate(
    c: &Circuit,
    exact_below: usize,
    iters: Option<u64>,
    trials: u64,
    seed: u64,
) -> Result<ErrorRate, PztError> {
    let truth = h_oracle(c, DEFAULT_MONOMIAL_BUDGET)?;
    let want = if truth { Verdict::Zero } else { Verdict::NonZero };
    let mut wrong = 0u64;
    for t in 0..trials {
        let out = pzt_run(c, exact_below, iters, seed.wrapping_add(t))?;
        if out.verdict != want {
            wrong += 1;
        }
    }
    Ok(ErrorRate {
        wrong,
        trials,
        point: wrong as f64 / trials as f64,
        wilson_upper: wilson_upper(wrong, trials),
    })
}

/// The zero-count bound for a degree-`d` nonzero polynomial in `n`
/// variables over a finite test set `S`: at most `d * |S|^(n-1)` roots in
/// `S^n`.
pub fn sz_bound(d: u64, s_len: usize, n: usize) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    BigUint::from(d) * BigUint::from(s_len).pow(n as u32 - 1)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SzReport {
    pub zeros: BigUint,
    pub bound: BigUint,
    pub total_points: BigUint,
}

impl SzReport {
    pub fn pass(&self) -> bool {
        self.zeros <= self.bound
    }
}

/// Exhaustively count the circuit's zeros on `S^n` and compare with the
/// bound. Intended for small `|S|^n`; the caller picks the family.
pub fn sz_check(c: &Circuit, s: &[BigInt]) -> Result<SzReport, PztError> {
    c.validate()?;
    let st = c.stats();
    let nf = normal_form(c, DEFAULT_MONOMIAL_BUDGET)?;
    if nf.is_zero() {
        return Err(PztError::Invalid(alloc::vec![String::from(
            "zero-count bound applies to nonzero polynomials only"
        )]));
    }
    let n = st.n.max(1);
    let mut idx = alloc::vec![0usize; n];
    let mut zeros = BigUint::zero();
    loop {
        let xs: Vec<BigInt> = idx.iter().map(|&i| s[i].clone()).collect();
        if c.eval_exact(&xs)?.is_zero() {
            zeros += BigUint::one();
        }
        // Odometer over S^n.
        let mut j = 0;
        loop {
            if j == n {
                let bound = sz_bound(st.d, s.len(), n);
                let total_points = BigUint::from(s.len()).pow(n as u32);
                return Ok(SzReport { zeros, bound, total_points });
            }
            idx[j] += 1;
            if idx[j] < s.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Result of the exhaustive zero-count sweep.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SzFamilyReport {
    /// Nonzero polynomials checked.
    pub checked: u64,
    /// Polynomials whose zero count exceeded `d * |S|^(n-1)`.
    pub violations: u64,
}

/// Exhaustively verify the zero-count bound over the family of bivariate
/// polynomials of total degree at most 3 with coefficients in `{-2..2}`,
/// counting roots on `{0..4}^2`. The sweep walks the coefficient space as
/// an odometer, updating the 25 point evaluations incrementally.
pub fn sz_exhaustive_check() -> SzFamilyReport {
    // Monomial exponents (i, j) with i + j <= 3, constant first.
    const MONO: [(u32, u32); 10] =
        [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)];
    const S: i64 = 5;
    let points: Vec<(i64, i64)> =
        (0..S).flat_map(|x| (0..S).map(move |y| (x, y))).collect();
    let mono_val: Vec<[i64; 25]> = MONO
        .iter()
        .map(|&(i, j)| {
            let mut row = [0i64; 25];
            for (p, &(x, y)) in points.iter().enumerate() {
                row[p] = x.pow(i) * y.pow(j);
            }
            row
        })
        .collect();
    let mut coeff = [0i64; 10];
    let mut vals = [0i64; 25];
    let mut checked = 0u64;
    let mut violations = 0u64;
    loop {
        if coeff.iter().any(|&c| c != 0) {
            let d = MONO
                .iter()
                .zip(&coeff)
                .filter(|(_, &c)| c != 0)
                .map(|(&(i, j), _)| (i + j) as i64)
                .max()
                .unwrap();
            let zeros = vals.iter().filter(|&&v| v == 0).count() as i64;
            checked += 1;
            if zeros > d * S {
                violations += 1;
            }
        }
        // Odometer step over coefficients in -2..=2.
        let mut j = 0;
        loop {
            if j == 10 {
                return SzFamilyReport { checked, violations };
            }
            if coeff[j] < 2 {
                coeff[j] += 1;
                for (p, v) in vals.iter_mut().enumerate() {
                    *v += mono_val[j][p];
                }
                break;
            }
            coeff[j] = -2;
            for (p, v) in vals.iter_mut().enumerate() {
                *v -= 4 * mono_val[j][p];
            }
            j += 1;
        }
    }
}

/// Exact check that primes are dense enough below `2^(2m)`: the prime
/// count times `8m` must reach `2^(2m)`.
pub fn prime_density_holds(m: u32) -> bool {
    let limit: u64 = 1u64 << (2 * m);
    let mut sieve = alloc::vec![true; (limit + 1) as usize];
    sieve[0] = false;
    if limit >= 1 {
        sieve[1] = false;
    }
    let mut i = 2u64;
    while i * i <= limit {
        if sieve[i as usize] {
            let mut j = i * i;
            while j <= limit {
                sieve[j as usize] = false;
                j += i;
            }
        }
        i += 1;
    }
    let count = sieve.iter().filter(|&&b| b).count() as u64;
    count.checked_mul(8 * m as u64).map_or(true, |lhs| lhs >= limit)
}

/// Reduce identity testing to zero testing: a circuit computing `f - g`.
pub fn pit_to_pzt(f: &Circuit, g: &Circuit) -> Result<Circuit, PztError> {
    f.validate()?;
    g.validate()?;
    let mut gates = f.gates.clone();
    let shift = gates.len();
    for gate in &g.gates {
        gates.push(match *gate {
            Gate::Input(j) => Gate::Input(j),
            Gate::Const0 => Gate::Const0,
            Gate::Const1 => Gate::Const1,
            Gate::Add(a, b) => Gate::Add(a + shift, b + shift),
            Gate::Mul(a, b) => Gate::Mul(a + shift, b + shift),
            Gate::Sub(a, b) => Gate::Sub(a + shift, b + shift),
        });
    }
    let out = gates.len();
    gates.push(Gate::Sub(f.output, g.output + shift));
    Ok(Circuit { gates, output: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// (x + y) * (x - y) - x*x + y*y, identically zero.
    pub(crate) fn zero_circuit() -> Circuit {
        Circuit {
            gates: vec![
                Gate::Input(0),            // 0: x
                Gate::Input(1),            // 1: y
                Gate::Add(0, 1),           // 2: x+y
                Gate::Sub(0, 1),           // 3: x-y
                Gate::Mul(2, 3),           // 4: x^2-y^2
                Gate::Mul(0, 0),           // 5: x^2
                Gate::Mul(1, 1),           // 6: y^2
                Gate::Sub(4, 5),           // 7: -y^2
                Gate::Add(7, 6),           // 8: 0
            ],
            output: 8,
        }
    }

    fn x_minus_x_times() -> Circuit {
        // x*1 - x
        Circuit {
            gates: vec![Gate::Input(0), Gate::Const1, Gate::Mul(0, 1), Gate::Sub(2, 0)],
            output: 3,
        }
    }

    fn single_var() -> Circuit {
        Circuit { gates: vec![Gate::Input(0)], output: 0 }
    }

    #[test]
    fn stats_and_degree() {
        let c = zero_circuit();
        let s = c.stats();
        assert_eq!(s.n, 2);
        assert_eq!(s.m, 9);
        assert_eq!(s.d, 2);
        assert_eq!(single_var().stats().d, 1);
    }

    #[test]
    fn validation_rejects_forward_references() {
        let c = Circuit { gates: vec![Gate::Add(0, 1), Gate::Input(0)], output: 0 };
        assert!(matches!(c.validate(), Err(PztError::Invalid(_))));
    }

    #[test]
    fn normal_form_detects_zero() {
        assert!(h_oracle(&zero_circuit(), 1000).unwrap());
        assert!(h_oracle(&x_minus_x_times(), 1000).unwrap());
        assert!(!h_oracle(&single_var(), 1000).unwrap());
    }

    #[test]
    fn normal_form_budget() {
        // (x+1)^16 by squaring has 17 monomials.
        let mut gates = vec![Gate::Input(0), Gate::Const1, Gate::Add(0, 1)];
        let mut cur = 2;
        for _ in 0..4 {
            gates.push(Gate::Mul(cur, cur));
            cur = gates.len() - 1;
        }
        let c = Circuit { gates, output: cur };
        assert_eq!(normal_form(&c, 1000).unwrap().monomials(), 17);
        assert!(matches!(
            normal_form(&c, 10),
            Err(PztError::MonomialBudget { max_monomials: 10 })
        ));
    }

    #[test]
    fn eval_mod_matches_exact() {
        let c = zero_circuit();
        let xs = [BigUint::from(12u32), BigUint::from(5u32)];
        let k = BigUint::from(97u32);
        assert!(c.eval_mod(&xs, &k).unwrap().is_zero());
        let c = single_var();
        assert_eq!(
            c.eval_mod(&[BigUint::from(100u32)], &k).unwrap(),
            BigUint::from(3u32)
        );
    }

    #[test]
    fn eval_mod_fast_path_agrees_with_bignum() {
        // Force both paths on a nontrivial circuit and modulus near 2^64.
        let c = Circuit {
            gates: vec![
                Gate::Input(0),
                Gate::Input(1),
                Gate::Mul(0, 1),
                Gate::Mul(2, 2),
                Gate::Add(3, 0),
                Gate::Sub(4, 1),
            ],
            output: 5,
        };
        let xs = [BigUint::from(0xdeadbeefcafeu64), BigUint::from(0x123456789abcu64)];
        let k_small = BigUint::from(u64::MAX - 58);
        let want = {
            let xi: Vec<BigInt> = xs.iter().map(|x| BigInt::from(x.clone())).collect();
            let v = c.eval_exact(&xi).unwrap();
            let k = BigInt::from(k_small.clone());
            let r = ((v % &k) + &k) % &k;
            r.to_biguint().unwrap()
        };
        assert_eq!(c.eval_mod(&xs, &k_small).unwrap(), want);
        // A modulus above 2^64 exercises the bignum path.
        let k_big = BigUint::from(u64::MAX) + BigUint::from(59u32);
        let got = c.eval_mod(&xs, &k_big).unwrap();
        let want_big = {
            let xi: Vec<BigInt> = xs.iter().map(|x| BigInt::from(x.clone())).collect();
            let v = c.eval_exact(&xi).unwrap();
            let k = BigInt::from(k_big.clone());
            (((v % &k) + &k) % &k).to_biguint().unwrap()
        };
        assert_eq!(got, want_big);
    }

    #[test]
    fn pzt_accepts_zero_and_rejects_nonzero() {
        for seed in 0..20 {
            let out = pzt_run(&zero_circuit(), 0, None, seed).unwrap();
            assert_eq!(out.verdict, Verdict::Zero);
        }
        let mut rejected = 0;
        for seed in 0..20 {
            if pzt_run(&single_var(), 0, None, seed).unwrap().verdict == Verdict::NonZero {
                rejected += 1;
            }
        }
        assert_eq!(rejected, 20, "a plain variable should essentially always reject");
    }

    #[test]
    fn exact_below_delegates_to_normal_form() {
        let out = pzt_run(&single_var(), 100, None, 0).unwrap();
        assert_eq!(out.verdict, Verdict::NonZero);
        assert_eq!(out.rounds_run, 0);
    }

    #[test]
    fn wilson_bound_sane() {
        assert!(wilson_upper(0, 10_000) < 0.001);
        assert!(wilson_upper(3_333, 10_000) > 0.333);
        assert!(wilson_upper(3_333, 10_000) < 0.35);
    }

    #[test]
    fn sz_zero_counts_within_bound() {
        // x*y over S = {0,1,2}: zeros where x=0 or y=0 -> 5 <= 2*3.
        let c = Circuit { gates: vec![Gate::Input(0), Gate::Input(1), Gate::Mul(0, 1)], output: 2 };
        let s: Vec<BigInt> = (0..3).map(BigInt::from).collect();
        let r = sz_check(&c, &s).unwrap();
        assert_eq!(r.zeros, BigUint::from(5u32));
        assert_eq!(r.bound, BigUint::from(6u32));
        assert!(r.pass());
    }

    #[test]
    fn sz_family_spot_size() {
        // The full sweep runs in the integration suite; here just pin the
        // family size arithmetic on a reduced run via the bound check on
        // one member.
        let c = Circuit {
            gates: vec![Gate::Input(0), Gate::Input(1), Gate::Mul(0, 1), Gate::Mul(2, 0)],
            output: 3,
        };
        let s: Vec<BigInt> = (0..5).map(BigInt::from).collect();
        let r = sz_check(&c, &s).unwrap();
        // x^2 y: zeros where x = 0 or y = 0 -> 9 of 25, bound 3 * 5.
        assert_eq!(r.zeros, BigUint::from(9u32));
        assert_eq!(r.bound, BigUint::from(15u32));
        assert!(r.pass());
    }

    #[test]
    fn prime_density_small_cases() {
        for m in 4..=8 {
            assert!(prime_density_holds(m), "density fails at m = {m}");
        }
    }

    #[test]
    fn pit_reduction() {
        // f = (x+y)^2, g = x^2 + 2xy + y^2: identical polynomials.
        let f = Circuit {
            gates: vec![Gate::Input(0), Gate::Input(1), Gate::Add(0, 1), Gate::Mul(2, 2)],
            output: 3,
        };
        let g = Circuit {
            gates: vec![
                Gate::Input(0),
                Gate::Input(1),
                Gate::Mul(0, 0),
                Gate::Mul(1, 1),
                Gate::Mul(0, 1),
                Gate::Add(4, 4),
                Gate::Add(2, 3),
                Gate::Add(6, 5),
            ],
            output: 7,
        };
        let diff = pit_to_pzt(&f, &g).unwrap();
        assert!(h_oracle(&diff, 1000).unwrap());
        assert_eq!(pzt_run(&diff, 0, None, 1).unwrap().verdict, Verdict::Zero);
        // And a genuinely different pair is caught.
        let h = single_var();
        let diff2 = pit_to_pzt(&f, &h).unwrap();
        assert!(!h_oracle(&diff2, 1000).unwrap());
    }

    #[test]
    fn randomized_mod_identities() {
        // Normal form and gate-by-gate modular evaluation agree at random
        // points and moduli.
        let circuits = [zero_circuit(), single_var(), x_minus_x_times()];
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            for c in &circuits {
                let st = c.stats();
                let k = random_bits(&mut rng, 16) + BigUint::one();
                let xs: Vec<BigUint> =
                    (0..st.n.max(1)).map(|_| random_bits(&mut rng, 20)).collect();
                let direct = c.eval_mod(&xs, &k).unwrap();
                let nf = normal_form(c, 1000).unwrap();
                let xi: Vec<BigInt> = xs.iter().map(|x| BigInt::from(x.clone())).collect();
                let v = nf.eval_exact(&xi);
                let kk = BigInt::from(k.clone());
                let want = (((v % &kk) + &kk) % &kk).to_biguint().unwrap();
                assert_eq!(direct, want);
            }
        }
    }
}
