//! Number-theoretic kernel: exact rationals, harmonic numbers, lcm of
//! initial segments, the prime products `phi_n` / `phi_tilde_n`, p-adic
//! valuations and a deterministic prime sieve.
//!
//! Every quantity here is exact; no floating point anywhere.

use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// The universal scalar of the crate: an arbitrary-precision signed
/// rational, normalized on construction (gcd 1, positive denominator).
pub type Rational = num_rational::BigRational;

/// Shorthand for a `BigInt` from a machine integer.
pub fn big(i: i64) -> BigInt {
    BigInt::from(i)
}

/// Integer as a `Rational`.
pub fn rat_int(i: i64) -> Rational {
    Rational::from_integer(big(i))
}

/// `num/den` as a `Rational`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(big(num), big(den))
}

/// Errors from the arithmetic kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// `p_adic_val` was called with a composite or unit modulus.
    NotPrime(u64),
}

impl std::fmt::Display for ArithError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArithError::NotPrime(p) => write!(f, "{} is not prime", p),
        }
    }
}

impl std::error::Error for ArithError {}

/// Ascending table of all primes up to `limit`, built by a sieve of
/// Eratosthenes. Completeness up to `limit` is the type's invariant.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut is_comp = vec![false; n + 1];
        let mut primes = Vec::new();
        for p in 2..=n {
            if !is_comp[p] {
                primes.push(p as u64);
                let mut q = p * p;
                while q <= n {
                    is_comp[q] = true;
                    q += p;
                }
            }
        }
        PrimeTable { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primality test for `p <= limit`. Panics beyond the sieve range.
    pub fn is_prime(&self, p: u64) -> bool {
        assert!(p <= self.limit, "prime table limit exceeded: {}", p);
        self.primes.binary_search(&p).is_ok()
    }
}

/// Deterministic primality by trial division; adequate at desk scale.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn harmonic_cache() -> &'static Mutex<HashMap<u32, Vec<Rational>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<Rational>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Generalized harmonic number `H_m^{(e)} = sum_{i=1}^m 1/i^e`, with
/// `H_0^{(e)} = 0`. Memoized per exponent as a prefix table; the table is
/// behind a mutex so concurrent workers share it safely.
pub fn harmonic(m: usize, e: u32) -> Rational {
    assert!(e >= 1, "harmonic exponent must be >= 1");
    let mut cache = harmonic_cache().lock().unwrap();
    let table = cache.entry(e).or_insert_with(|| vec![Rational::zero()]);
    while table.len() <= m {
        let i = table.len() as i64;
        let last = table.last().unwrap().clone();
        let inv = Rational::new(BigInt::one(), big(i).pow(e));
        table.push(last + inv);
    }
    table[m].clone()
}

/// `d_n = lcm(1, ..., n)`, with `d_0 = d_1 = 1`.
pub fn lcm_upto(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=i64::from(n) {
        acc = acc.lcm(&big(i));
    }
    acc
}

fn phi_product(n: u32, strict_below_n: bool) -> BigInt {
    assert!(n >= 1);
    let n64 = u64::from(n);
    // {n/p} >= 2/3 iff 3*(n mod p) >= 2*p; primes above 3n/2 never qualify.
    let table = PrimeTable::new(3 * n64 / 2 + 1);
    let mut acc = BigInt::one();
    for &p in table.primes() {
        if strict_below_n && p >= n64 {
            continue;
        }
        let rem = n64 % p;
        if rem > 0 && 3 * rem >= 2 * p {
            acc *= big(p as i64);
        }
    }
    acc
}

/// Product of the primes `p` with fractional part `{n/p}` in `[2/3, 1)`.
/// Empty products are 1.
pub fn phi_n(n: u32) -> BigInt {
    phi_product(n, false)
}

/// Same product restricted to primes `p < n`; divides `phi_n(n)`.
pub fn phi_tilde_n(n: u32) -> BigInt {
    phi_product(n, true)
}

/// A p-adic valuation, with a distinguished value for the valuation of 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// p-adic valuation of a nonzero integer.
pub fn v_p_int(p: u64, x: &BigInt) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = big(p as i64);
    let mut v = 0i64;
    let mut x = x.abs();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        v += 1;
        x = q;
    }
}

/// p-adic valuation `v_p(num) - v_p(den)` of a rational; errors on a
/// non-prime `p`, returns `Infinite` for 0.
pub fn p_adic_val(p: u64, x: &Rational) -> Result<Valuation, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let vn = v_p_int(p, x.numer()).finite().unwrap();
    let vd = v_p_int(p, x.denom()).finite().unwrap();
    Ok(Valuation::Finite(vn - vd))
}

/// Binomial coefficient `C(n, k)` with the conventions `C(n, k) = 0` for
/// `k < 0` or `k > n`. Requires `n >= 0`.
pub fn binom(n: i64, k: i64) -> BigInt {
    assert!(n >= 0, "binom: negative top {}", n);
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * big(n - t) / big(t + 1);
    }
    acc
}

/// `n!` as a `BigInt`.
pub fn fact(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n as i64 {
        acc *= big(i);
    }
    acc
}

/// `1/m!` with the reciprocal-gamma convention: zero for negative `m`.
pub fn fact_recip(m: i64) -> Rational {
    if m < 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::one(), fact(m as u64))
    }
}

/// Rising factorial `(a)_m = a (a+1) ... (a+m-1)` over rationals.
pub fn poch_rat(a: &Rational, m: usize) -> Rational {
    let mut acc = Rational::one();
    let mut f = a.clone();
    for _ in 0..m {
        acc *= &f;
        f += Rational::one();
    }
    acc
}

/// True iff `x` is an integer.
pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Floor of `log_p(n)` for `p >= 2`, `n >= 1`.
pub fn floor_log(p: u64, n: u64) -> i64 {
    let mut v = 0i64;
    let mut acc = p;
    while acc <= n {
        v += 1;
        match acc.checked_mul(p) {
            Some(next) => acc = next,
            None => break,
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_small_values() {
        assert_eq!(harmonic(0, 1), rat_int(0));
        assert_eq!(harmonic(3, 1), rat(11, 6));
        assert_eq!(harmonic(2, 2), rat(5, 4));
    }

    #[test]
    fn harmonic_difference_is_inverse_power() {
        for e in 1..=3u32 {
            for m in 1..=1000usize {
                let diff = harmonic(m, e) - harmonic(m - 1, e);
                assert_eq!(diff, Rational::new(BigInt::one(), big(m as i64).pow(e)));
            }
        }
    }

    #[test]
    fn lcm_values() {
        assert_eq!(lcm_upto(0), big(1));
        assert_eq!(lcm_upto(1), big(1));
        assert_eq!(lcm_upto(6), big(60));
        assert_eq!(lcm_upto(10), big(2520));
    }

    #[test]
    fn lcm_valuation_is_floor_log() {
        // v_p(d_n) = [log_p n] for every prime p <= n
        let table = PrimeTable::new(500);
        for n in 1..=500u32 {
            let d = lcm_upto(n);
            for &p in table.primes().iter().take_while(|&&p| p <= u64::from(n)) {
                let v = v_p_int(p, &d).finite().unwrap();
                assert_eq!(v, floor_log(p, u64::from(n)), "p={} n={}", p, n);
            }
        }
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi_n(1), big(1));
        // n=5: p=3 has {5/3}=2/3, p=7 has {5/7}=5/7
        assert_eq!(phi_n(5), big(21));
        assert_eq!(phi_n(6), big(7));
        assert_eq!(phi_tilde_n(6), big(1));
    }

    #[test]
    fn phi_matches_brute_force_and_divides() {
        for n in 1..=200u32 {
            let mut expect = BigInt::one();
            let mut expect_tilde = BigInt::one();
            for p in 2..=(3 * u64::from(n) / 2 + 1) {
                if !is_prime(p) {
                    continue;
                }
                let frac_num = u64::from(n) % p;
                if 3 * frac_num >= 2 * p && frac_num > 0 {
                    expect *= big(p as i64);
                    if p < u64::from(n) {
                        expect_tilde *= big(p as i64);
                    }
                }
            }
            assert_eq!(phi_n(n), expect, "n={}", n);
            assert_eq!(phi_tilde_n(n), expect_tilde, "n={}", n);
            assert!(phi_n(n).is_multiple_of(&phi_tilde_n(n)));
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(p_adic_val(3, &rat_int(18)), Ok(Valuation::Finite(2)));
        assert_eq!(p_adic_val(2, &rat(5, 8)), Ok(Valuation::Finite(-3)));
        assert_eq!(p_adic_val(5, &rat_int(0)), Ok(Valuation::Infinite));
        assert!(p_adic_val(6, &rat_int(1)).is_err());
        // Legendre: v_5(10!) = [10/5] + [10/25] = 2
        let f10 = Rational::from_integer(fact(10));
        assert_eq!(p_adic_val(5, &f10), Ok(Valuation::Finite(2)));
    }

    #[test]
    fn legendre_formula_for_factorials() {
        for s in 1..=60u64 {
            let f = fact(s);
            for p in [2u64, 3, 5, 7, 11, 13] {
                let mut expect = 0i64;
                let mut q = p;
                while q <= s {
                    expect += (s / q) as i64;
                    match q.checked_mul(p) {
                        Some(next) => q = next,
                        None => break,
                    }
                }
                assert_eq!(v_p_int(p, &f).finite().unwrap(), expect);
            }
        }
    }

    #[test]
    fn wolstenholme_valuations() {
        // for primes 5 <= p <= 500: v_p(H_{p-1}) >= 2 and v_p(H^{(2)}_{p-1}) >= 1
        let table = PrimeTable::new(500);
        for &p in table.primes().iter().filter(|&&p| p >= 5) {
            let h1 = harmonic(p as usize - 1, 1);
            let h2 = harmonic(p as usize - 1, 2);
            assert!(p_adic_val(p, &h1).unwrap().finite().unwrap() >= 2, "p={}", p);
            assert!(p_adic_val(p, &h2).unwrap().finite().unwrap() >= 1, "p={}", p);
        }
    }

    #[test]
    fn binom_conventions() {
        assert_eq!(binom(5, 2), big(10));
        assert_eq!(binom(5, -1), big(0));
        assert_eq!(binom(5, 6), big(0));
        assert_eq!(binom(0, 0), big(1));
    }

    #[test]
    fn prime_table_complete() {
        let table = PrimeTable::new(100);
        let expect: Vec<u64> = (2..=100).filter(|&p| is_prime(p)).collect();
        assert_eq!(table.primes(), &expect[..]);
    }
}
