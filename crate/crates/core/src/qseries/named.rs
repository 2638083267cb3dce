use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{PolySeries, QPolynomial, RationalSeries, TruncatedSeries};
use crate::error::{input, Result};
use crate::exact::{choose2, Rational};

fn check_q(q: &Rational) -> Result<()> {
    let one = Rational::one();
    if q.is_zero() || *q == one || *q == -one {
        return input(format!("f(q, z) is undefined at q = {q}"));
    }
    Ok(())
}

/// `f(q,z) = Σ_n (−1)^n z^n / (q^{C(n,2)} (q;q)_n)` through `z^order`.
pub fn f_series(q: &Rational, order: usize) -> Result<RationalSeries> {
    check_q(q)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = Rational::one();
    let mut q_pow = Rational::one(); // q^{n−1}
    coeffs.push(c.clone());
    for _ in 1..=order {
        let q_n = &q_pow * q; // q^n
        c = -c / (&q_pow * (Rational::one() - &q_n));
        coeffs.push(c.clone());
        q_pow = q_n;
    }
    Ok(TruncatedSeries::new(order, coeffs))
}

/// `f(q^k, z^k)` through `z^order`, built from `f(q^k, ·)` at order `⌊order/k⌋`.
pub fn f_series_at_power(q: &Rational, k: u32, order: usize) -> Result<RationalSeries> {
    let qk = num_traits::pow(q.clone(), k as usize);
    Ok(f_series(&qk, order / k as usize)?.spread(k as usize, order))
}

/// `h(q,z) = log f(q,z)`.
pub fn h_series(q: &Rational, order: usize) -> Result<RationalSeries> {
    f_series(q, order)?.log()
}

/// `h(q^k, z^k)` through `z^order`.
pub fn h_series_at_power(q: &Rational, k: u32, order: usize) -> Result<RationalSeries> {
    let qk = num_traits::pow(q.clone(), k as usize);
    Ok(h_series(&qk, order / k as usize)?.spread(k as usize, order))
}

/// Carlitz–Riordan q-Catalan numbers `C_0(q), …, C_n(q)` from
/// `C_{m+1} = Σ_{j=0}^{m} q^{(m−j)(j+1)} C_j C_{m−j}`.
pub fn q_catalan_table(n: usize) -> Vec<QPolynomial> {
    let mut table = vec![QPolynomial::one()];
    for m in 0..n {
        let mut next = QPolynomial::zero();
        for j in 0..=m {
            let weight = ((m - j) * (j + 1)) as i64;
            next = next + (&table[j] * &table[m - j]).shift(weight);
        }
        table.push(next);
    }
    table
}

pub fn q_catalan(n: usize) -> QPolynomial {
    q_catalan_table(n).pop().unwrap()
}

/// `g(q,z) = f(q,qz)/f(q,z) = 1 + Σ_{n≥1} (−1)^{n−1} q^{−C(n,2)} C_{n−1}(q) z^n`,
/// with Laurent-polynomial coefficients.
pub fn g_series(order: usize) -> PolySeries {
    let catalan = q_catalan_table(order.saturating_sub(1));
    let mut coeffs = vec![QPolynomial::one()];
    for n in 1..=order {
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let c = catalan[n - 1]
            .shift(-choose2(n as i64))
            .scale(&Rational::from_integer(BigInt::from(sign)));
        coeffs.push(c);
    }
    TruncatedSeries::new(order, coeffs)
}
