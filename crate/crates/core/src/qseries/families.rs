//! The integer polynomial families `P_n`, `R_n`, `Q_n` attached to `log g`.

use num_bigint::BigInt;

use super::named::g_series;
use super::QPolynomial;
use crate::error::{input, internal, Result};
use crate::exact::{choose2, divisors, moebius, Rational};

/// Largest index for which the families are computed.
pub const FAMILY_LIMIT: usize = 32;

/// `P_1..P_max`, computed once from `log g` over Laurent polynomials.
#[derive(Debug, Clone)]
pub struct PolyFamilies {
    p: Vec<QPolynomial>,
}

fn sign(e: u64) -> Rational {
    Rational::from_integer(BigInt::from(if e.is_multiple_of(2) { 1 } else { -1 }))
}

impl PolyFamilies {
    /// Builds `P_n = (−1)^{n−1} n q^{C(n,2)} [z^n] log g` for `1 ≤ n ≤ max_n`,
    /// checking integrality and `deg P_n = C(n,2)`.
    pub fn new(max_n: usize) -> Result<Self> {
        if max_n > FAMILY_LIMIT {
            return input(format!("n = {max_n} exceeds the family limit {FAMILY_LIMIT}"));
        }
        let log_g = g_series(max_n).log()?;
        let mut p = vec![QPolynomial::zero()];
        for n in 1..=max_n {
            let c = log_g
                .coeff(n)
                .shift(choose2(n as i64))
                .scale(&(sign(n as u64 - 1) * Rational::from_integer(BigInt::from(n))));
            if !c.is_integral() {
                return internal(format!("P_{n} is not in Z[q]: {c}"));
            }
            if c.degree() != Some(choose2(n as i64)) {
                return internal(format!("deg P_{n} = {:?}, expected C({n},2)", c.degree()));
            }
            p.push(c);
        }
        Ok(PolyFamilies { p })
    }

    pub fn max_n(&self) -> usize {
        self.p.len() - 1
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_n() {
            return input(format!("index {n} outside 1..={}", self.max_n()));
        }
        Ok(())
    }

    pub fn p(&self, n: usize) -> Result<&QPolynomial> {
        self.check(n)?;
        Ok(&self.p[n])
    }

    /// `R_n = Σ_{d|n} (−1)^{n−d} μ(n/d) q^{C(n,2) − (n/d)C(d,2)} P_d(q^{n/d})`.
    pub fn r(&self, n: usize) -> Result<QPolynomial> {
        self.check(n)?;
        let n64 = n as u64;
        let mut acc = QPolynomial::zero();
        for d in divisors(n64) {
            let mu = moebius(n64 / d)?;
            if mu == 0 {
                continue;
            }
            let k = n64 / d;
            let shift = choose2(n as i64) - k as i64 * choose2(d as i64);
            let term = self.p[d as usize]
                .substitute_power(k as u32)
                .shift(shift)
                .scale(&(sign(n64 - d) * Rational::from_integer(BigInt::from(mu))));
            acc = acc + term;
        }
        Ok(acc)
    }

    /// `Q_n = R_n·(q−1) / (n·(q^n−1))`; the division must be exact.
    pub fn q(&self, n: usize) -> Result<QPolynomial> {
        let r = self.r(n)?;
        let q_minus_1 = QPolynomial::q() - QPolynomial::one();
        let qn_minus_1 = QPolynomial::q().pow(n as u32) - QPolynomial::one();
        let quot = (&r * &q_minus_1)
            .div_exact(&qn_minus_1)?
            .scale(&Rational::new(BigInt::from(1), BigInt::from(n)));
        if !quot.is_integral() {
            return internal(format!("Q_{n} is not in Z[q]: {quot}"));
        }
        Ok(quot)
    }
}

pub fn p_poly(n: usize) -> Result<QPolynomial> {
    Ok(PolyFamilies::new(n.max(1))?.p(n)?.clone())
}

pub fn r_poly(n: usize) -> Result<QPolynomial> {
    PolyFamilies::new(n.max(1))?.r(n)
}

pub fn q_poly(n: usize) -> Result<QPolynomial> {
    PolyFamilies::new(n.max(1))?.q(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{binomial, big_pow, cyclotomic, int, is_squarefree};
    use crate::qseries::named::h_series;
    use num_integer::Integer;

    #[test]
    fn small_members() {
        assert_eq!(p_poly(1).unwrap(), QPolynomial::one());
        assert_eq!(r_poly(1).unwrap(), QPolynomial::one());
        assert_eq!(q_poly(1).unwrap(), QPolynomial::one());
        assert!(p_poly(0).is_err());
        assert!(PolyFamilies::new(FAMILY_LIMIT + 1).is_err());
    }

    #[test]
    fn p_at_one_is_central_binomial() {
        let fam = PolyFamilies::new(12).unwrap();
        for n in 1..=12u64 {
            let v = fam.p(n as usize).unwrap().eval(&int(1)).unwrap();
            assert_eq!(v, Rational::from_integer(binomial(2 * n - 1, n - 1)), "n={n}");
        }
    }

    #[test]
    fn p_matches_numeric_h() {
        let fam = PolyFamilies::new(10).unwrap();
        for q in [2i64, 3, 5] {
            let h = h_series(&int(q), 10).unwrap();
            for n in 1..=10u64 {
                let scale = Rational::from_integer(
                    BigInt::from(n) * big_pow(q as u64, n * (n - 1) / 2) * (big_pow(q as u64, n) - 1),
                ) * sign(n - 1);
                let from_h = h.coeff(n as usize) * scale;
                let p = fam.p(n as usize).unwrap().eval(&int(q)).unwrap();
                assert_eq!(from_h, p, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn cyclotomic_divides_shifted_p() {
        let fam = PolyFamilies::new(14).unwrap();
        for d in 1..=14u64 {
            for n in 1..=(14 / d) {
                let target = fam.p((d * n) as usize).unwrap()
                    - &QPolynomial::from_int(binomial(2 * n - 1, n - 1));
                let phi = cyclotomic(d).unwrap();
                assert!(target.is_divisible_by(&phi).unwrap(), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn q_family_integral_with_parity_law() {
        let fam = PolyFamilies::new(14).unwrap();
        for n in 1..=14usize {
            let qn = fam.q(n).unwrap();
            assert!(qn.is_integral());
            let at_one = qn.eval(&int(1)).unwrap().to_integer();
            assert_eq!(at_one.is_odd(), is_squarefree(n as u64), "n={n}");
        }
    }
}
