//! Exact integer/rational arithmetic and the number-theory kernel:
//! p-adic valuations, Möbius, cyclotomic polynomials, q-Pochhammer products,
//! Legendre sums and the small helpers the 2-adic lemmas consume.

mod multivariate;

pub use multivariate::{moebius_necklace_sum, IntMultiPoly};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::qseries::QPolynomial;

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Largest modulus accepted by the trial-division primality check.
pub const PRIME_TRIAL_BOUND: u64 = 1 << 32;

/// A p-adic valuation: a finite integer or `+∞` (the valuation of zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
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

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }

    /// `self ≥ bound`, with `+∞` above every integer.
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Valuation::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Valuation::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

/// Trial-division primality test; inputs here are small primes.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if p >= PRIME_TRIAL_BOUND {
        return input(format!("prime {p} exceeds the trial-division bound"));
    }
    if !is_prime(p) {
        return input(format!("{p} is not prime"));
    }
    Ok(())
}

/// `v_p(n)` for a big integer, `+∞` at zero. `p` is assumed prime.
pub fn vp_int(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p_big = BigUint::from(p);
    let mut m = n.magnitude().clone();
    let mut v = 0i64;
    // Strip large powers first so huge valuations stay cheap.
    let mut powers = vec![(p_big.clone(), 1i64)];
    loop {
        let (last, e) = powers.last().unwrap().clone();
        let sq = &last * &last;
        if sq.bits() > m.bits() {
            break;
        }
        powers.push((sq, 2 * e));
    }
    for (pw, e) in powers.iter().rev() {
        loop {
            let (q, r) = m.div_rem(pw);
            if !r.is_zero() {
                break;
            }
            m = q;
            v += e;
        }
    }
    Valuation::Finite(v)
}

/// `v_p(n)` for a machine integer (`n ≥ 1`); `p` is assumed prime.
pub fn vp_u64(mut n: u64, p: u64) -> u32 {
    assert!(n > 0, "v_p(0) is infinite");
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation of a rational: `v_p(num) − v_p(den)`, `+∞` at zero.
pub fn vp(x: &Rational, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    Ok(vp_unchecked(x, p))
}

pub(crate) fn vp_unchecked(x: &Rational, p: u64) -> Valuation {
    match vp_int(x.numer(), p) {
        Valuation::Infinite => Valuation::Infinite,
        Valuation::Finite(a) => {
            let b = vp_int(x.denom(), p).finite().unwrap_or(0);
            Valuation::Finite(a - b)
        }
    }
}

/// `∏_{i=1}^{n} (1 − x^i)`; the empty product is `1`.
pub fn q_pochhammer<R>(n: usize, x: &R) -> R
where
    R: Clone + One + Sub<Output = R> + Mul<Output = R>,
{
    let mut acc = R::one();
    let mut power = R::one();
    for _ in 0..n {
        power = power * x.clone();
        acc = acc * (R::one() - power.clone());
    }
    acc
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn moebius(n: u64) -> Result<i8> {
    if n == 0 {
        return input("moebius(0) is undefined");
    }
    let mut sign = 1i8;
    for (_, e) in factorize(n) {
        if e > 1 {
            return Ok(0);
        }
        sign = -sign;
    }
    Ok(sign)
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The `d`-th cyclotomic polynomial, by exact division of `x^d − 1` by
/// `Φ_e` for every proper divisor `e` of `d`.
pub fn cyclotomic(d: u64) -> Result<QPolynomial> {
    if d == 0 {
        return input("cyclotomic(0) is undefined");
    }
    let mut table: Vec<(u64, QPolynomial)> = Vec::new();
    for e in divisors(d) {
        let mut poly = QPolynomial::monomial(e as i64, Rational::one()) - QPolynomial::one();
        for (f, phi) in &table {
            if e % f == 0 {
                poly = poly.div_exact(phi)?;
            }
        }
        table.push((e, poly));
    }
    Ok(table.pop().unwrap().1)
}

/// Legendre's sum `v_p(n!) = Σ_{i≥1} ⌊n/p^i⌋`.
pub fn vp_factorial(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut m = n;
    while m > 0 {
        m /= p;
        total += m;
    }
    total
}

/// Multiplicative order of `q` modulo the prime `p` (`p ∤ q`).
pub fn multiplicative_order(q: u64, p: u64) -> Result<u64> {
    if q.is_multiple_of(p) {
        return input(format!("{p} divides {q}"));
    }
    let base = q % p;
    let mut x = base;
    let mut d = 1;
    while x != 1 {
        x = x * base % p;
        d += 1;
    }
    Ok(d)
}

/// `v_p(q^e − 1)` for `e ≥ 1` computed from `q^e mod p^K`, doubling `K`
/// until the residue is not `1`.
pub(crate) fn vp_power_minus_one(p: u64, q: u64, e: &BigUint) -> u64 {
    let p_big = BigUint::from(p);
    let q_big = BigUint::from(q);
    let mut k = 16u32;
    loop {
        let modulus = p_big.pow(k);
        // p ∤ q, so the residue is a unit and `r − 1` lies in [0, p^K).
        let r = q_big.modpow(e, &modulus);
        if !r.is_one() {
            return vp_int(&BigInt::from(r - 1u32), p).finite().unwrap() as u64;
        }
        k *= 2;
    }
}

/// `λ_i = v_p(q^{d·p^i} − 1)` evaluated directly.
pub(crate) fn lambda_direct(p: u64, q: u64, d: u64, i: u32) -> u64 {
    let e = BigUint::from(d) * BigUint::from(p).pow(i);
    vp_power_minus_one(p, q, &e)
}

/// `v_p(q^n − 1)`: zero unless the order `d` of `q` mod `p` divides `n`,
/// otherwise `λ_{v_p(n)}` evaluated directly.
pub fn vp_q_power_minus_1(p: u64, q: u64, n: u64) -> Result<Valuation> {
    require_prime(p)?;
    if q < 2 {
        return input(format!("q = {q} must be at least 2"));
    }
    if n == 0 {
        return input("n must be positive");
    }
    if q.is_multiple_of(p) {
        return input(format!("{p} divides q = {q} (modular case)"));
    }
    let d = multiplicative_order(q, p)?;
    if !n.is_multiple_of(d) {
        return Ok(Valuation::Finite(0));
    }
    let lam = lambda_direct(p, q, d, vp_u64(n, p));
    Ok(Valuation::Finite(lam as i64))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `n(n−1)/2`.
pub fn choose2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// Binary digit sum `s_2(n)`.
pub fn digit_sum_base2(n: u64) -> u32 {
    n.count_ones()
}

/// `Σ_{i=1}^{d} 1/(2i−1)`.
pub fn odd_harmonic(d: u64) -> Rational {
    (1..=d).fold(Rational::zero(), |acc, i| {
        acc + Rational::new(BigInt::one(), BigInt::from(2 * i - 1))
    })
}

pub fn big_pow(base: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Exact conversion for rationals that are known to be integers.
pub fn to_integer(x: &Rational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: i64) -> Valuation {
        Valuation::Finite(x)
    }

    #[test]
    fn vp_examples() {
        assert_eq!(vp(&int(8), 2).unwrap(), v(3));
        assert_eq!(vp(&int(0), 5).unwrap(), Valuation::Infinite);
        assert_eq!(vp(&rat(4, 3), 2).unwrap(), v(2));
        assert_eq!(vp(&int(14), 2).unwrap(), v(1));
        assert_eq!(vp(&rat(1, 12), 2).unwrap(), v(-2));
        assert!(vp(&int(8), 4).is_err());
        assert!(vp(&int(8), 1).is_err());
    }

    #[test]
    fn vp_of_huge_power() {
        let x = big_pow(3, 5000) * BigInt::from(7);
        assert_eq!(vp_int(&x, 3), v(5000));
        assert_eq!(vp_int(&-x, 7), v(1));
    }

    #[test]
    fn valuation_order_and_sum() {
        assert!(Valuation::Infinite > v(1_000_000));
        assert_eq!(v(2) + Valuation::Infinite, Valuation::Infinite);
        assert_eq!(v(2) + v(-5), v(-3));
        assert!(Valuation::Infinite.at_least(i64::MAX));
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(q_pochhammer(0, &int(17)), int(1));
        assert_eq!(q_pochhammer(2, &int(3)), int(16));
        let q = QPolynomial::q();
        assert_eq!(q_pochhammer(1, &q), QPolynomial::one() - QPolynomial::q());
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1).unwrap(), 1);
        assert_eq!(moebius(6).unwrap(), 1);
        assert_eq!(moebius(12).unwrap(), 0);
        assert_eq!(moebius(30).unwrap(), -1);
        assert!(moebius(0).is_err());
    }

    #[test]
    fn cyclotomic_examples() {
        let x = QPolynomial::q;
        let one = QPolynomial::one;
        assert_eq!(cyclotomic(1).unwrap(), x() - one());
        assert_eq!(cyclotomic(4).unwrap(), x() * x() + one());
        assert_eq!(cyclotomic(6).unwrap(), x() * x() - x() + one());
        // Φ_12 = x^4 − x^2 + 1
        let x2 = x() * x();
        assert_eq!(cyclotomic(12).unwrap(), x2.clone() * x2.clone() - x2 + one());
        assert!(cyclotomic(0).is_err());
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(vp_factorial(0, 2), 0);
        assert_eq!(vp_factorial(4, 2), 3);
        assert_eq!(vp_factorial(10, 3), 4);
    }

    #[test]
    fn q_power_minus_one_examples() {
        assert_eq!(vp_q_power_minus_1(2, 3, 1).unwrap(), v(1));
        assert_eq!(vp_q_power_minus_1(2, 3, 2).unwrap(), v(3));
        assert_eq!(vp_q_power_minus_1(3, 17, 1).unwrap(), v(0));
        assert!(vp_q_power_minus_1(3, 9, 1).is_err());
    }

    #[test]
    fn q_power_minus_one_matches_factorization() {
        for p in (2..20).filter(|&p| is_prime(p)) {
            for q in 2..30u64 {
                if q % p == 0 {
                    continue;
                }
                for n in 1..=12u64 {
                    let direct = vp_int(&(big_pow(q, n) - 1), p);
                    assert_eq!(vp_q_power_minus_1(p, q, n).unwrap(), direct, "p={p} q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn odd_harmonic_two_adic_law() {
        for d in 1..=256u64 {
            let h = odd_harmonic(d);
            assert_eq!(vp(&h, 2).unwrap(), v(2 * vp_u64(d, 2) as i64), "d={d}");
        }
    }

    #[test]
    fn binomial_two_adic_law() {
        for d in 1..=128u64 {
            let sign = if d % 2 == 0 { 1 } else { -1 };
            let x = binomial(4 * d - 1, 2 * d - 1) - BigInt::from(sign) * binomial(2 * d - 1, d - 1);
            let expected = 2 + 2 * vp_u64(d, 2) as i64 + digit_sum_base2(d - 1) as i64;
            assert_eq!(vp_int(&x, 2), v(expected), "d={d}");
        }
    }

    #[test]
    fn divisors_and_factorize() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_squarefree(30) && !is_squarefree(18));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn vp_is_a_valuation(x in small_rational(), y in small_rational(), pi in 0usize..25) {
            let primes: Vec<u64> = (2..100).filter(|&p| is_prime(p)).collect();
            let p = primes[pi];
            let vx = vp(&x, p).unwrap();
            let vy = vp(&y, p).unwrap();
            prop_assert_eq!(vp(&(&x * &y), p).unwrap(), vx + vy);
            prop_assert!(vp(&(&x + &y), p).unwrap() >= vx.min(vy));
        }
    }
}
