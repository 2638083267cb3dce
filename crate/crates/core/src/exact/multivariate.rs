use std::collections::BTreeMap;

use super::{divisors, moebius};
use crate::error::{internal, Result};

/// Integer polynomial in a fixed number of variables with exact `i128`
/// coefficients; overflow is reported rather than wrapped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMultiPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, i128>,
}

impl IntMultiPoly {
    pub fn zero(vars: usize) -> Self {
        IntMultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize) -> Self {
        let mut p = Self::zero(vars);
        p.terms.insert(vec![0; vars], 1);
        p
    }

    /// Builds from `(exponent vector, coefficient)` pairs, merging repeats.
    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, i128)>) -> Self {
        let mut p = Self::zero(vars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), vars, "exponent vector has wrong arity");
            *p.terms.entry(exps).or_insert(0) += c;
        }
        p.terms.retain(|_, c| *c != 0);
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i128)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let prod = ca.checked_mul(*cb);
                let slot = out.entry(e).or_insert(0);
                match prod.and_then(|p| slot.checked_add(p)) {
                    Some(v) => *slot = v,
                    None => return internal("i128 overflow in multivariate product"),
                }
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(IntMultiPoly { vars: self.vars, terms: out })
    }

    pub fn add_scaled(&mut self, other: &Self, scale: i128) -> Result<()> {
        for (e, c) in &other.terms {
            let slot = self.terms.entry(e.clone()).or_insert(0);
            match c.checked_mul(scale).and_then(|v| slot.checked_add(v)) {
                Some(v) => *slot = v,
                None => return internal("i128 overflow in multivariate sum"),
            }
        }
        self.terms.retain(|_, c| *c != 0);
        Ok(())
    }

    /// `f(x_1^k, x_2^k, …)`.
    pub fn substitute_power(&self, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().map(|x| x * k).collect(), *c))
            .collect();
        IntMultiPoly { vars: self.vars, terms }
    }

    pub fn all_divisible_by(&self, d: i128) -> bool {
        self.terms.values().all(|c| c % d == 0)
    }
}

/// `Σ_{e | d} μ(d/e) · f(x^{d/e})^e`, which has every coefficient divisible by `d`.
pub fn moebius_necklace_sum(f: &IntMultiPoly, d: u64) -> Result<IntMultiPoly> {
    // f(x^k)^e = (f^e)(x^k), so only the powers f^1..f^d are needed.
    let mut powers = vec![IntMultiPoly::one(f.vars())];
    for _ in 0..d {
        let next = powers.last().unwrap().mul(f)?;
        powers.push(next);
    }
    let mut acc = IntMultiPoly::zero(f.vars());
    for e in divisors(d) {
        let mu = moebius(d / e)? as i128;
        if mu == 0 {
            continue;
        }
        let term = powers[e as usize].substitute_power((d / e) as u32);
        acc.add_scaled(&term, mu)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_form_necklaces() {
        // x + y: the sum counts aperiodic words, d times the necklace count.
        let f = IntMultiPoly::from_terms(2, [(vec![1, 0], 1), (vec![0, 1], 1)]);
        for d in 1..=10 {
            let s = moebius_necklace_sum(&f, d).unwrap();
            assert!(s.all_divisible_by(d as i128), "d={d}");
        }
        // d = 2: (x+y)^2 − (x^2+y^2) = 2xy
        let s = moebius_necklace_sum(&f, 2).unwrap();
        assert_eq!(s, IntMultiPoly::from_terms(2, [(vec![1, 1], 2)]));
    }

    #[test]
    fn constant_polynomial_is_fermat() {
        // f = a constant c: Σ μ(d/e) c^e ≡ 0 mod d.
        for c in -5i128..=5 {
            let f = IntMultiPoly::from_terms(1, [(vec![0], c)]);
            for d in 1..=12 {
                assert!(moebius_necklace_sum(&f, d).unwrap().all_divisible_by(d as i128));
            }
        }
    }
}
