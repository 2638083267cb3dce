//! Finite Abelian p-groups `G = ∏_j C_{p^j}^{k_j}`, the λ-profile of `q`
//! modulo `p`, and the dimensions of the irreducible `F_q`-representations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{input, internal, Result};
use crate::exact::{big_pow, lambda_direct, multiplicative_order, require_prime};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianPGroup {
    p: u64,
    /// `k[j−1] = k_j`; the last entry is nonzero unless the group is trivial.
    k: Vec<u32>,
}

impl AbelianPGroup {
    /// Group from multiplicities `k_1..k_r`; trailing zeros are dropped and
    /// all-zero input yields the trivial group.
    pub fn from_multiplicities(p: u64, k: &[u32]) -> Result<Self> {
        require_prime(p)?;
        let mut k = k.to_vec();
        while k.last() == Some(&0) {
            k.pop();
        }
        Ok(AbelianPGroup { p, k })
    }

    /// Group from the exponents of its cyclic factors: `[2,2,2]` is `C_4^3`.
    pub fn from_factors(p: u64, exponents: &[u32]) -> Result<Self> {
        let r = exponents.iter().copied().max().unwrap_or(0) as usize;
        let mut k = vec![0u32; r];
        for &e in exponents {
            if e == 0 {
                return input("cyclic factor exponents must be positive");
            }
            k[e as usize - 1] += 1;
        }
        Self::from_multiplicities(p, &k)
    }

    pub fn cyclic(p: u64, e: u32) -> Result<Self> {
        Self::from_factors(p, &[e])
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::from_multiplicities(p, &[])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.k
    }

    /// Cyclic factor exponents in nonincreasing order.
    pub fn factors(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (j, &kj) in self.k.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(j as u32 + 1, kj as usize));
        }
        out
    }

    pub fn is_trivial(&self) -> bool {
        self.k.is_empty()
    }

    /// `r`, with `exp G = p^r`.
    pub fn r(&self) -> u32 {
        self.k.len() as u32
    }

    /// `log_p |G| = Σ j·k_j`.
    pub fn log_order(&self) -> u32 {
        self.k.iter().enumerate().map(|(j, &kj)| (j as u32 + 1) * kj).sum()
    }

    /// `s = log_p|G| − r`.
    pub fn s(&self) -> u32 {
        self.log_order() - self.r()
    }

    /// `r′`: `r` if `k_r ≥ 2`, else the largest `j < r` with `k_j > 0`, else 0.
    pub fn r_prime(&self) -> u32 {
        match self.k.last() {
            None => 0,
            Some(&kr) if kr >= 2 => self.r(),
            Some(_) => self.k[..self.k.len() - 1]
                .iter()
                .rposition(|&kj| kj > 0)
                .map_or(0, |j| j as u32 + 1),
        }
    }

    /// `c_i = Σ_j min(i, j)·k_j`.
    pub fn c(&self, i: u64) -> u64 {
        self.k
            .iter()
            .enumerate()
            .map(|(j, &kj)| (j as u64 + 1).min(i) * kj as u64)
            .sum()
    }

    pub fn order(&self) -> BigInt {
        big_pow(self.p, self.log_order() as u64)
    }

    pub fn exponent(&self) -> BigInt {
        big_pow(self.p, self.r() as u64)
    }
}

impl fmt::Display for AbelianPGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut first = true;
        for (j, &kj) in self.k.iter().enumerate().rev() {
            if kj == 0 {
                continue;
            }
            if !first {
                write!(f, " x ")?;
            }
            first = false;
            write!(f, "C_{}", big_pow(self.p, j as u64 + 1))?;
            if kj > 1 {
                write!(f, "^{kj}")?;
            }
        }
        Ok(())
    }
}

/// `d = ord_p(q)` and `λ_i = v_p(q^{d·p^i} − 1)` for `0 ≤ i ≤ m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaProfile {
    pub p: u64,
    pub q: u64,
    pub d: u64,
    pub lambdas: Vec<u64>,
}

impl LambdaProfile {
    /// `λ_i`, computed directly when beyond the stored prefix.
    pub fn lambda(&self, i: usize) -> u64 {
        match self.lambdas.get(i) {
            Some(&l) => l,
            None => lambda_direct(self.p, self.q, self.d, i as u32),
        }
    }

    /// Smallest `i` with `λ_i > r`, plus 4.
    pub fn default_horizon(&self, r: u32) -> usize {
        (0..).find(|&i| self.lambda(i) > r as u64).unwrap() + 4
    }
}

/// Builds λ_0..λ_m and checks the growth law: `λ_i = λ_0 + i` when `p ≥ 3` or
/// `λ_0 ≥ 2`, and `λ_i = λ_1 + i − 1` for `i ≥ 1` otherwise.
pub fn lambda_profile(p: u64, q: u64, m: usize) -> Result<LambdaProfile> {
    require_prime(p)?;
    if q < 2 {
        return input(format!("q = {q} must be at least 2"));
    }
    if q.is_multiple_of(p) {
        return input(format!("{p} divides q = {q} (modular case)"));
    }
    let d = multiplicative_order(q, p)?;
    let lambdas: Vec<u64> = (0..=m).map(|i| lambda_direct(p, q, d, i as u32)).collect();
    let l0 = lambdas[0];
    for (i, &li) in lambdas.iter().enumerate() {
        let expected = if p >= 3 || l0 >= 2 {
            l0 + i as u64
        } else if i == 0 {
            l0
        } else {
            lambdas[1] + i as u64 - 1
        };
        if li != expected || li == 0 {
            return internal(format!("λ_{i} = {li} breaks the growth law for p={p}, q={q}"));
        }
    }
    Ok(LambdaProfile { p, q, d, lambdas })
}

/// Multiplicities `n_e` of irreducible `F_q`-representations of dimension `e`,
/// listed by increasing `e` with zero entries omitted.
pub fn irred_dim_counts(g: &AbelianPGroup, q: u64) -> Result<Vec<(u64, BigInt)>> {
    let prof = lambda_profile(g.p, q, 0)?;
    let (p, d) = (g.p, prof.d);
    let stable = g.log_order() as u64;
    let pc = |i: usize| big_pow(p, g.c(prof.lambda(i)));
    let mut out: Vec<(u64, BigInt)> = Vec::new();
    let mut push = |e: u64, num: BigInt| -> Result<()> {
        let (quot, rem) = num.div_rem(&BigInt::from(e));
        if !rem.is_zero() {
            return internal(format!("n_{e} = {num}/{e} is not an integer"));
        }
        if !quot.is_zero() {
            out.push((e, quot));
        }
        Ok(())
    };
    if d > 1 {
        push(1, BigInt::one())?;
        push(d, pc(0) - 1)?;
    } else {
        push(1, pc(0))?;
    }
    let mut i = 1usize;
    let mut e = d;
    while g.c(prof.lambda(i - 1)) < stable {
        e *= p;
        push(e, pc(i) - pc(i - 1))?;
        i += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn g(p: u64, f: &[u32]) -> AbelianPGroup {
        AbelianPGroup::from_factors(p, f).unwrap()
    }

    #[test]
    fn group_statistics() {
        let c2 = g(2, &[1]);
        assert_eq!((0..4).map(|i| c2.c(i)).collect::<Vec<_>>(), [0, 1, 1, 1]);
        assert_eq!((c2.r(), c2.s(), c2.r_prime()), (1, 0, 0));
        let c4_3 = g(2, &[2, 2, 2]);
        assert_eq!((0..4).map(|i| c4_3.c(i)).collect::<Vec<_>>(), [0, 3, 6, 6]);
        assert_eq!((c4_3.r(), c4_3.s(), c4_3.r_prime()), (2, 4, 2));
        let c27 = g(3, &[3]);
        assert_eq!((0..5).map(|i| c27.c(i)).collect::<Vec<_>>(), [0, 1, 2, 3, 3]);
        assert_eq!((c27.r(), c27.s(), c27.r_prime()), (3, 0, 0));
        let c3c9 = g(3, &[1, 2]);
        assert_eq!((c3c9.r(), c3c9.s(), c3c9.r_prime()), (2, 1, 1));
        assert_eq!(c3c9.order(), BigInt::from(27));
        assert_eq!(c3c9.to_string(), "C_9 x C_3");
        assert_eq!(c4_3.to_string(), "C_4^3");
        assert!(AbelianPGroup::trivial(2).unwrap().is_trivial());
        assert!(AbelianPGroup::from_factors(4, &[1]).is_err());
        assert!(AbelianPGroup::from_factors(2, &[0]).is_err());
    }

    #[test]
    fn c_sequence_properties() {
        let groups = [
            g(2, &[1]), g(2, &[3, 1]), g(2, &[2, 2, 2]), g(3, &[1, 2]), g(2, &[4, 2, 2, 1]),
            g(3, &[3, 3, 1]), g(5, &[2, 1, 1]),
        ];
        for grp in groups {
            let (r, s, rp) = (grp.r() as u64, grp.s() as u64, grp.r_prime() as u64);
            for i in 0..10 {
                assert!(grp.c(i + 1) >= grp.c(i));
                if i >= 1 {
                    assert!(grp.c(i + 1) + grp.c(i - 1) <= 2 * grp.c(i));
                }
                if i >= r {
                    assert_eq!(grp.c(i), r + s);
                }
                if rp <= i && i <= r {
                    assert_eq!(grp.c(i), i + s, "{grp} i={i}");
                }
                if i < rp {
                    assert!(grp.c(i + 1) - grp.c(i) >= 2);
                }
            }
        }
    }

    #[test]
    fn lambda_examples() {
        let a = lambda_profile(2, 3, 3).unwrap();
        assert_eq!((a.d, a.lambdas.clone()), (1, vec![1, 3, 4, 5]));
        let b = lambda_profile(2, 5, 2).unwrap();
        assert_eq!((b.d, b.lambdas.clone()), (1, vec![2, 3, 4]));
        let c = lambda_profile(3, 17, 0).unwrap();
        assert_eq!((c.d, c.lambdas[0]), (2, 2));
        assert!(lambda_profile(3, 9, 2).is_err());
        assert_eq!(a.lambda(6), 8);
    }

    #[test]
    fn lambda_law_on_grid() {
        for p in [2u64, 3, 5, 7, 11] {
            for q in 2..200u64 {
                if q % p != 0 {
                    lambda_profile(p, q, 6).unwrap();
                }
            }
        }
    }

    #[test]
    fn irreducible_dimension_examples() {
        assert_eq!(irred_dim_counts(&g(2, &[1]), 3).unwrap(), vec![(1, BigInt::from(2))]);
        assert_eq!(
            irred_dim_counts(&g(3, &[2]), 17).unwrap(),
            vec![(1, BigInt::from(1)), (2, BigInt::from(4))]
        );
        assert_eq!(
            irred_dim_counts(&g(3, &[3]), 7).unwrap(),
            vec![(1, BigInt::from(3)), (3, BigInt::from(2)), (9, BigInt::from(2))]
        );
        assert_eq!(
            irred_dim_counts(&AbelianPGroup::trivial(3).unwrap(), 7).unwrap(),
            vec![(1, BigInt::from(1))]
        );
    }

    /// Cycle lengths of `x ↦ q·x` on `∏_j (Z/p^j)^{k_j}`.
    fn orbit_counts(grp: &AbelianPGroup, q: u64) -> BTreeMap<u64, BigInt> {
        let moduli: Vec<u64> = grp.factors().iter().map(|&e| grp.p().pow(e)).collect();
        let total: u64 = moduli.iter().product();
        let decode = |mut x: u64| -> Vec<u64> {
            moduli.iter().map(|&m| { let v = x % m; x /= m; v }).collect()
        };
        let encode = |v: &[u64]| -> u64 {
            v.iter().zip(&moduli).rev().fold(0, |acc, (&c, &m)| acc * m + c)
        };
        let mut seen = vec![false; total as usize];
        let mut counts = BTreeMap::new();
        for x in 0..total {
            if seen[x as usize] {
                continue;
            }
            let mut len = 0u64;
            let mut y = x;
            loop {
                seen[y as usize] = true;
                len += 1;
                let v: Vec<u64> = decode(y).iter().zip(&moduli).map(|(&c, &m)| c * q % m).collect();
                y = encode(&v);
                if y == x {
                    break;
                }
            }
            *counts.entry(len).or_insert_with(BigInt::zero) += 1;
        }
        counts
    }

    #[test]
    fn orbit_oracle_agrees() {
        let groups = [
            g(2, &[1]), g(2, &[2]), g(2, &[3]), g(2, &[1, 1]), g(2, &[2, 2, 2]), g(2, &[3, 1]),
            g(2, &[4, 4]), g(3, &[2]), g(3, &[1, 2]), g(3, &[3]), g(5, &[1, 1]),
        ];
        for grp in &groups {
            if grp.order() > BigInt::from(729) {
                continue;
            }
            for q in [2u64, 3, 5, 7, 13, 17, 31, 47, 163] {
                if q % grp.p() == 0 {
                    continue;
                }
                let closed: BTreeMap<u64, BigInt> = irred_dim_counts(grp, q).unwrap().into_iter().collect();
                assert_eq!(closed, orbit_counts(grp, q), "{grp}, q={q}");
            }
        }
    }

    #[test]
    fn dimension_sum_is_order() {
        for p in [2u64, 3] {
            for f in [&[1u32][..], &[2, 1], &[3, 3], &[1, 1, 1, 1, 1, 1], &[6], &[4, 2]] {
                let grp = g(p, f);
                if grp.log_order() > 6 {
                    continue;
                }
                for q in [2u64, 5, 7, 17, 31] {
                    if q % p == 0 {
                        continue;
                    }
                    let sum: BigInt = irred_dim_counts(&grp, q)
                        .unwrap()
                        .into_iter()
                        .map(|(e, n)| n * e)
                        .sum();
                    assert_eq!(sum, grp.order());
                }
            }
        }
    }
}
