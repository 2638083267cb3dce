use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{input, internal, Result};
use crate::exact::Rational;

/// Laurent polynomial in `q` with rational coefficients.
///
/// Stored densely as `q^low · Σ coeffs[i]·q^i / den` with integer `coeffs`,
/// `den > 0` and `gcd(content, den) = 1`. The first and last stored
/// coefficients are nonzero, so trailing and leading degrees are `low` and
/// `low + len − 1`; the zero polynomial stores nothing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QPolynomial {
    low: i64,
    coeffs: Vec<BigInt>,
    den: BigInt,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { low: 0, coeffs: Vec::new(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    /// The variable `q`.
    pub fn q() -> Self {
        QPolynomial { low: 1, coeffs: vec![BigInt::one()], den: BigInt::one() }
    }

    pub fn from_int(c: BigInt) -> Self {
        QPolynomial { low: 0, coeffs: vec![c], den: BigInt::one() }.normalized()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    /// `c · q^exp`.
    pub fn monomial(exp: i64, c: Rational) -> Self {
        let (num, den) = c.into_raw();
        QPolynomial { low: exp, coeffs: vec![num], den }.normalized()
    }

    /// `Σ coeffs[i] q^{low+i}` with integer coefficients.
    pub fn from_int_coeffs(low: i64, coeffs: Vec<BigInt>) -> Self {
        QPolynomial { low, coeffs, den: BigInt::one() }.normalized()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (e, c)| acc + Self::monomial(e, c))
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        let Some(lead) = lead else {
            return Self::zero();
        };
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.den.is_negative() {
            self.den = -self.den;
            for c in &mut self.coeffs {
                *c = -std::mem::take(c);
            }
        }
        if !self.den.is_one() {
            let mut g = self.den.clone();
            for c in &self.coeffs {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                self.den /= &g;
                for c in &mut self.coeffs {
                    *c /= &g;
                }
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one() && self.den.is_one()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn trailing_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        let idx = exp - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return Rational::zero();
        }
        Rational::new(self.coeffs[idx as usize].clone(), self.den.clone())
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> Vec<(i64, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.low + i as i64, Rational::new(c.clone(), self.den.clone())))
            .collect()
    }

    /// Membership in `Z[q]`: integer coefficients and no negative exponents.
    pub fn is_integral(&self) -> bool {
        self.is_zero() || (self.den.is_one() && self.low >= 0)
    }

    /// Integer coefficients of `q^0..q^deg` when [`is_integral`](Self::is_integral).
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        if !self.is_integral() {
            return None;
        }
        if self.is_zero() {
            return Some(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.low as usize];
        out.extend(self.coeffs.iter().cloned());
        Some(out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        QPolynomial {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| c * r.numer()).collect(),
            den: &self.den * r.denom(),
        }
        .normalized()
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        QPolynomial { low: self.low + e, ..self.clone() }
    }

    /// `p(q^k)` for `k ≥ 1`.
    pub fn substitute_power(&self, k: u32) -> Self {
        assert!(k >= 1, "substitution exponent must be positive");
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let k = k as usize;
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        QPolynomial { low: self.low * k as i64, coeffs, den: self.den.clone() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Value at a rational point; a pole at `q = 0` is an input error.
    pub fn eval(&self, q: &Rational) -> Result<Rational> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        if q.is_zero() && self.low < 0 {
            return input("Laurent polynomial has a pole at q = 0");
        }
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + Rational::from_integer(c.clone());
        }
        let shift = if self.low >= 0 {
            num_traits::pow(q.clone(), self.low as usize)
        } else {
            num_traits::pow(q.recip(), (-self.low) as usize)
        };
        Ok(acc * shift / Rational::from_integer(self.den.clone()))
    }

    /// Value at an integer point, for polynomials without negative exponents.
    pub fn eval_int(&self, q: &BigInt) -> Result<Rational> {
        if self.low < 0 && !self.is_zero() {
            return self.eval(&Rational::from_integer(q.clone()));
        }
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c;
        }
        let shifted = acc * num_traits::pow(q.clone(), self.low.max(0) as usize);
        Ok(Rational::new(shifted, self.den.clone()))
    }

    /// Quotient of an exact division; a nonzero remainder is an internal error.
    pub fn div_exact(&self, divisor: &QPolynomial) -> Result<QPolynomial> {
        let (quot, rem) = self.div_rem(divisor)?;
        if !rem.is_zero() {
            return internal(format!("inexact polynomial division: ({self}) / ({divisor})"));
        }
        Ok(quot)
    }

    /// Whether `divisor` divides `self` in `Q[q, q^{-1}]`.
    pub fn is_divisible_by(&self, divisor: &QPolynomial) -> Result<bool> {
        Ok(self.div_rem(divisor)?.1.is_zero())
    }

    /// Division with remainder after stripping both trailing powers of `q`:
    /// `self = quot·divisor + rem` where `rem·q^{-t}` has degree below the
    /// divisor's span (`t` the trailing degree of `self`).
    pub fn div_rem(&self, divisor: &QPolynomial) -> Result<(QPolynomial, QPolynomial)> {
        if divisor.is_zero() {
            return input("division by the zero polynomial");
        }
        if self.is_zero() {
            return Ok((Self::zero(), Self::zero()));
        }
        let b = &divisor.coeffs;
        let lc = b.last().unwrap();
        let db = b.len() - 1;
        let scale = Rational::new(divisor.den.clone(), self.den.clone());
        let shift = self.low - divisor.low;
        if self.coeffs.len() <= db {
            return Ok((Self::zero(), self.clone()));
        }
        let steps = self.coeffs.len() - db;
        if lc.abs().is_one() {
            let mut rem = self.coeffs.clone();
            let mut quot = vec![BigInt::zero(); steps];
            for i in (0..steps).rev() {
                let c = &rem[i + db] * lc;
                if c.is_zero() {
                    continue;
                }
                for (j, bj) in b.iter().enumerate() {
                    rem[i + j] -= &c * bj;
                }
                quot[i] = c;
            }
            let quot = QPolynomial { low: shift, coeffs: quot, den: BigInt::one() }
                .normalized()
                .scale(&scale);
            let rem = QPolynomial { low: self.low, coeffs: rem, den: self.den.clone() }.normalized();
            return Ok((quot, rem));
        }
        let lc_r = Rational::from_integer(lc.clone());
        let mut rem: Vec<Rational> =
            self.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect();
        let mut quot = vec![Rational::zero(); steps];
        for i in (0..steps).rev() {
            let c = &rem[i + db] / &lc_r;
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * Rational::from_integer(bj.clone());
            }
            quot[i] = c;
        }
        let quot = Self::from_terms(
            quot.into_iter().enumerate().map(|(i, c)| (shift + i as i64, c)),
        )
        .scale(&scale);
        let rem = Self::from_terms(
            rem.into_iter().enumerate().map(|(i, c)| (self.low + i as i64, c)),
        )
        .scale(&Rational::new(BigInt::one(), self.den.clone()));
        Ok((quot, rem))
    }
}

impl Default for QPolynomial {
    fn default() -> Self {
        Self::zero()
    }
}

fn add_impl(a: &QPolynomial, b: &QPolynomial, negate_b: bool) -> QPolynomial {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b } else { b.clone() };
    }
    let low = a.low.min(b.low);
    let high = a.degree().unwrap().max(b.degree().unwrap());
    let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
    let g = a.den.gcd(&b.den);
    let (sa, sb) = (&b.den / &g, &a.den / &g);
    for (i, c) in a.coeffs.iter().enumerate() {
        let idx = (a.low - low) as usize + i;
        coeffs[idx] += if sa.is_one() { c.clone() } else { c * &sa };
    }
    for (i, c) in b.coeffs.iter().enumerate() {
        let idx = (b.low - low) as usize + i;
        let term = if sb.is_one() { c.clone() } else { c * &sb };
        if negate_b {
            coeffs[idx] -= term;
        } else {
            coeffs[idx] += term;
        }
    }
    QPolynomial { low, coeffs, den: &a.den * &sa }.normalized()
}

impl Add<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        add_impl(self, rhs, false)
    }
}

impl Sub<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        add_impl(self, rhs, true)
    }
}

impl Mul<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QPolynomial { low: self.low + rhs.low, coeffs, den: &self.den * &rhs.den }.normalized()
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QPolynomial> for QPolynomial {
            type Output = QPolynomial;
            fn $m(self, rhs: QPolynomial) -> QPolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QPolynomial> for QPolynomial {
            type Output = QPolynomial;
            fn $m(self, rhs: &QPolynomial) -> QPolynomial {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Zero for QPolynomial {
    fn zero() -> Self {
        QPolynomial::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for QPolynomial {
    fn one() -> Self {
        QPolynomial::one()
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().into_iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || e == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "{}q", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}q^{e}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPolynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn q() -> QPolynomial {
        QPolynomial::q()
    }
    fn c(n: i64) -> QPolynomial {
        QPolynomial::constant(int(n))
    }

    #[test]
    fn normal_form_drops_zeros_and_reduces() {
        let p = QPolynomial::from_terms([(3, rat(2, 4)), (5, rat(1, 2)), (4, int(0))]);
        assert_eq!(p.trailing_degree(), Some(3));
        assert_eq!(p.degree(), Some(5));
        assert_eq!(p.coeff(3), rat(1, 2));
        assert_eq!(p.terms().len(), 2);
        assert!(!p.is_integral());
        assert!((&p - &p).is_zero());
        assert!(QPolynomial::monomial(-1, int(1)).scale(&int(1)).trailing_degree() == Some(-1));
        assert!(!QPolynomial::monomial(-1, int(1)).is_integral());
    }

    #[test]
    fn division_exact_and_inexact() {
        let a = (q() - c(1)) * (q() * q() + c(1));
        assert_eq!(a.div_exact(&(q() - c(1))).unwrap(), q() * q() + c(1));
        assert!(matches!(a.div_exact(&(q() + c(2))), Err(crate::Error::Internal(_))));
        // non-monic divisor
        let b = (c(2) * q() + c(3)) * (q() - c(5));
        assert_eq!(b.div_exact(&(c(2) * q() + c(3))).unwrap(), q() - c(5));
        // Laurent shifts
        let l = QPolynomial::monomial(-3, int(1)) * (q() + c(1));
        assert_eq!(l.div_exact(&(q() + c(1))).unwrap(), QPolynomial::monomial(-3, int(1)));
        assert!(a.div_exact(&QPolynomial::zero()).is_err());
    }

    #[test]
    fn substitution_and_eval() {
        let p = q() * q() - q() + c(3);
        let p3 = p.substitute_power(3);
        assert_eq!(p3.eval(&int(2)).unwrap(), p.eval(&int(8)).unwrap());
        assert_eq!(p.eval_int(&BigInt::from(4)).unwrap(), int(15));
        let l = QPolynomial::monomial(-2, int(3));
        assert_eq!(l.eval(&int(3)).unwrap(), rat(1, 3));
        assert!(l.eval(&int(0)).is_err());
    }

    #[test]
    fn display_form() {
        let p = q().pow(4) + q().pow(3) - q();
        assert_eq!(p.to_string(), "q^4 + q^3 - q");
        assert_eq!((c(-2) * q() + c(1)).to_string(), "-2*q + 1");
    }

    fn arb_poly() -> impl Strategy<Value = QPolynomial> {
        (-3i64..4, prop::collection::vec((-20i64..20, 1i64..5), 0..6)).prop_map(|(low, cs)| {
            QPolynomial::from_terms(cs.into_iter().enumerate().map(|(i, (n, d))| (low + i as i64, rat(n, d))))
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), x in arb_poly()) {
            prop_assert_eq!(&(&a + &b) * &x, &(&a * &x) + &(&b * &x));
            prop_assert_eq!(&a * &b, &b * &a);
            let pt = rat(3, 2);
            let lhs = (&a * &b).eval(&pt).unwrap();
            prop_assert_eq!(lhs, a.eval(&pt).unwrap() * b.eval(&pt).unwrap());
        }

        #[test]
        fn product_divides_back(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
        }
    }
}
