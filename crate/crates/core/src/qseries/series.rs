use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::QPolynomial;
use crate::error::{input, Result};
use crate::exact::Rational;
use crate::exec::Exec;

/// Which coefficient ring a series lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ring {
    Rational,
    QPolynomial,
}

/// Exact coefficient ring for truncated series: `Q` or `Q[q, q^{-1}]`.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    const RING: Ring;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, r: &Rational) -> Self;
}

impl Coeff for Rational {
    const RING: Ring = Ring::Rational;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, r: &Rational) -> Self {
        self * r
    }
}

impl Coeff for QPolynomial {
    const RING: Ring = Ring::QPolynomial;
    fn zero() -> Self {
        QPolynomial::zero()
    }
    fn one() -> Self {
        QPolynomial::one()
    }
    fn is_zero(&self) -> bool {
        QPolynomial::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, r: &Rational) -> Self {
        self.scale(r)
    }
}

/// Formal power series in `z` known through `z^order`.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<C: Coeff> {
    order: usize,
    coeffs: Vec<C>,
}

pub type RationalSeries = TruncatedSeries<Rational>;
pub type PolySeries = TruncatedSeries<QPolynomial>;

impl<C: Coeff> TruncatedSeries<C> {
    /// Series from leading coefficients; missing ones are zero, extra ones dropped.
    pub fn new(order: usize, mut coeffs: Vec<C>) -> Self {
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, C::zero());
        TruncatedSeries { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn one(order: usize) -> Self {
        Self::new(order, vec![C::one()])
    }

    /// `c·z^k` (zero if `k > order`).
    pub fn monomial(order: usize, k: usize, c: C) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ring(&self) -> Ring {
        C::RING
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return input(format!(
                "series orders differ: {} vs {}",
                self.order, other.order
            ));
        }
        Ok(())
    }

    /// Re-truncates to a lower order or pads a series known to be a polynomial.
    pub fn with_order(&self, order: usize) -> Self {
        Self::new(order, self.coeffs.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.plus(b)).collect();
        Ok(TruncatedSeries { order: self.order, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.minus(b)).collect();
        Ok(TruncatedSeries { order: self.order, coeffs })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.scaled(r)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.negated()).collect(),
        }
    }

    /// Coefficientwise map `c_n ↦ f(n, c_n)`.
    pub fn map_indexed(&self, f: impl Fn(usize, &C) -> C) -> Self {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().enumerate().map(|(n, c)| f(n, c)).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_with(other, Exec::Sequential)
    }

    pub fn mul_with(&self, other: &Self, exec: Exec) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = exec.map_range(0..self.order + 1, |k| {
            let mut acc = C::zero();
            for i in 0..=k {
                let (a, b) = (&self.coeffs[i], &other.coeffs[k - i]);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.plus(&a.times(b));
                }
            }
            acc
        });
        Ok(TruncatedSeries { order: self.order, coeffs })
    }

    /// `self^e` by binary powering.
    pub fn pow(&self, e: &BigUint) -> Self {
        let mut acc = Self::one(self.order);
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = acc.mul(&acc).expect("same order");
            if e.bit(i) {
                acc = acc.mul(self).expect("same order");
            }
        }
        acc
    }

    /// Exponential of a series with zero constant term, via
    /// `n·b_n = Σ_{k=1}^{n} k·a_k·b_{n−k}` from `(exp a)' = a'·exp a`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return input("exp requires a zero constant term");
        }
        let mut out: Vec<C> = Vec::with_capacity(self.order + 1);
        out.push(C::one());
        for n in 1..=self.order {
            let mut acc = C::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if a.is_zero() || out[n - k].is_zero() {
                    continue;
                }
                acc = acc.plus(&a.times(&out[n - k]).scaled(&Rational::from_integer(BigInt::from(k))));
            }
            out.push(acc.scaled(&Rational::new(BigInt::one(), BigInt::from(n))));
        }
        Ok(TruncatedSeries { order: self.order, coeffs: out })
    }

    /// Logarithm of a series with constant term one, via
    /// `n·l_n = n·a_n − Σ_{k=1}^{n−1} k·l_k·a_{n−k}`.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0] != C::one() {
            return input("log requires constant term 1");
        }
        let mut out: Vec<C> = Vec::with_capacity(self.order + 1);
        out.push(C::zero());
        for n in 1..=self.order {
            let mut acc = C::zero();
            for k in 1..n {
                let (l, a) = (&out[k], &self.coeffs[n - k]);
                if l.is_zero() || a.is_zero() {
                    continue;
                }
                acc = acc.plus(&l.times(a).scaled(&Rational::from_integer(BigInt::from(k))));
            }
            let corr = acc.scaled(&Rational::new(BigInt::one(), BigInt::from(n)));
            out.push(self.coeffs[n].minus(&corr));
        }
        Ok(TruncatedSeries { order: self.order, coeffs: out })
    }

    /// `a(z^k)` truncated at `order`; only every `k`-th coefficient is populated.
    pub fn spread(&self, k: usize, order: usize) -> Self {
        assert!(k >= 1);
        let mut s = Self::zero(order);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * k > order {
                break;
            }
            s.coeffs[i * k] = c.clone();
        }
        s
    }
}

impl<C: Coeff> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[{}](", self.order)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, " [{i}]{c}")?;
            }
        }
        write!(f, " )")
    }
}
