//! The modular case `char F_q = p`: counts `a_{n,k}` of `n×n` matrices with
//! `B^k = 0` as polynomials in `q`, by summing conjugacy class sizes over
//! Jordan types and by the removal recurrence, plus the quadratic bound.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::exact::{big_pow, choose2, q_pochhammer, require_prime, vp_int, Rational, Valuation};
use crate::nonmodular::serialize_decimal;
use crate::qseries::{rational_to_json, QPolynomial};

/// A partition of `n` by multiplicities: `a[i−1]` parts equal to `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    n: usize,
    a: Vec<usize>,
}

impl Partition {
    pub fn from_multiplicities(a: &[usize]) -> Self {
        let mut a = a.to_vec();
        while a.last() == Some(&0) {
            a.pop();
        }
        let n = a.iter().enumerate().map(|(i, &m)| (i + 1) * m).sum();
        Partition { n, a }
    }

    /// From parts listed in any order.
    pub fn from_parts(parts: &[usize]) -> Result<Self> {
        let max = parts.iter().copied().max().unwrap_or(0);
        let mut a = vec![0; max];
        for &part in parts {
            if part == 0 {
                return input("partition parts must be positive");
            }
            a[part - 1] += 1;
        }
        Ok(Self::from_multiplicities(&a))
    }

    pub fn weight(&self) -> usize {
        self.n
    }

    /// `a_i`, zero beyond the largest part.
    pub fn multiplicity(&self, i: usize) -> usize {
        if i == 0 { 0 } else { self.a.get(i - 1).copied().unwrap_or(0) }
    }

    pub fn largest_part(&self) -> usize {
        self.a.len()
    }

    pub fn num_parts(&self) -> usize {
        self.a.iter().sum()
    }

    /// Parts in nonincreasing order.
    pub fn parts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &m) in self.a.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(i + 1, m));
        }
        out
    }
}

/// Every partition of `n` with parts at most `max_part`, each exactly once,
/// in reverse lexicographic order of parts.
pub fn partitions(n: usize, max_part: usize) -> impl Iterator<Item = Partition> {
    fn go(rest: usize, max: usize, parts: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::from_parts(parts).expect("positive parts"));
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            parts.push(part);
            go(rest - part, part, parts, out);
            parts.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_part, &mut Vec::new(), &mut out);
    out.into_iter()
}

/// `β(λ) = C(n,2) + Σ_j C(a_j+1, 2) − Σ_{j=1}^{n} (a_j + … + a_n)²`.
pub fn beta_stat(lambda: &Partition) -> i64 {
    let n = lambda.n as i64;
    let mut beta = choose2(n);
    let mut tail = 0i64;
    for j in (1..=lambda.largest_part()).rev() {
        let aj = lambda.multiplicity(j) as i64;
        beta += choose2(aj + 1);
        tail += aj;
        beta -= tail * tail;
    }
    beta
}

fn poch(n: usize) -> QPolynomial {
    q_pochhammer(n, &QPolynomial::q())
}

/// Size of the conjugacy class of nilpotent matrices of Jordan type `λ`:
/// `(−1)^{n−Σa} q^{β(λ)} (q;q)_n / ∏_j (q;q)_{a_j}`.
pub fn class_size(lambda: &Partition) -> Result<QPolynomial> {
    let mut den = QPolynomial::one();
    for j in 1..=lambda.largest_part() {
        den = den * poch(lambda.multiplicity(j));
    }
    let sign = if (lambda.n - lambda.num_parts()).is_multiple_of(2) { 1 } else { -1 };
    let c = poch(lambda.n)
        .div_exact(&den)?
        .shift(beta_stat(lambda))
        .scale(&Rational::from_integer(BigInt::from(sign)));
    if c.trailing_degree() != Some(beta_stat(lambda)) {
        return Err(Error::Internal(format!("class size of {:?} has the wrong trailing degree", lambda.parts())));
    }
    Ok(c)
}

/// `a_{n,k}` as the sum of class sizes over partitions with parts `≤ k`.
pub fn a_nk_partition(n: usize, k: usize) -> Result<QPolynomial> {
    let mut acc = QPolynomial::zero();
    for lambda in partitions(n, k) {
        acc = acc + class_size(&lambda)?;
    }
    Ok(acc)
}

type Memo = RwLock<HashMap<(usize, usize), QPolynomial>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Exponent `β(λ) − β(μ)` when `l` parts equal to `m` are added to a
/// partition `μ` of `n − lm` with parts below `m`.
pub fn removal_exponent(l: i64, m: i64, n: i64) -> i64 {
    l * n * (m - 2) + l * l - choose2(l * (m - 1) + 1)
}

/// Exponent as stated, `l·n·(m−2) + C(l(m−1), 2)`; agrees with
/// [`removal_exponent`] only for `m = 2`.
pub fn stated_removal_exponent(l: i64, m: i64, n: i64) -> i64 {
    l * n * (m - 2) + choose2(l * (m - 1))
}

/// `a_{n,k}` by removing the Jordan blocks longer than `k`:
/// `q^{n²−n} − Σ_{m=k+1}^{n} Σ_{l=1}^{⌊n/m⌋} (−1)^{l(m−1)} [(q;q)_n/((q;q)_{n−lm}(q;q)_l)] q^{f} a_{n−lm,m−1}`
/// with `f` from [`removal_exponent`]. Memoized; `a_{0,k} = 1`, `a_{n,0} = 0`.
pub fn a_nk_recurrence(n: usize, k: usize) -> Result<QPolynomial> {
    if n == 0 {
        return Ok(QPolynomial::one());
    }
    if k == 0 {
        return Ok(QPolynomial::zero());
    }
    let k = k.min(n);
    if let Some(hit) = memo().read().expect("memo lock").get(&(n, k)) {
        return Ok(hit.clone());
    }
    let (ni, nn) = (n as i64, n);
    let mut acc = QPolynomial::monomial(ni * ni - ni, Rational::one());
    let pn = poch(nn);
    for m in (k + 1)..=nn {
        for l in 1..=(nn / m) {
            let (li, mi) = (l as i64, m as i64);
            let ratio = pn.div_exact(&(poch(nn - l * m) * poch(l)))?;
            let f = removal_exponent(li, mi, ni);
            let sign = if (l * (m - 1)) % 2 == 0 { 1 } else { -1 };
            let term = (ratio * a_nk_recurrence(nn - l * m, m - 1)?)
                .shift(f)
                .scale(&Rational::from_integer(BigInt::from(sign)));
            acc = acc - term;
        }
    }
    memo().write().expect("memo lock").insert((n, k), acc.clone());
    Ok(acc)
}

/// Trailing degree of `a_{n,k}` against `(k−1)/(k+1)·C(n,2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularBound {
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub bound: Rational,
    pub trailing_degree: i64,
    pub equality_expected: bool,
    pub equality: bool,
}

pub(crate) fn serialize_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rational_to_json(x), s)
}

fn quadratic_bound(n: usize, k: usize) -> Rational {
    Rational::new(BigInt::from(k as i64 - 1), BigInt::from(k as i64 + 1)) * Rational::from_integer(BigInt::from(choose2(n as i64)))
}

pub fn modular_bound(n: usize, k: usize) -> Result<ModularBound> {
    if k == 0 {
        return input("k must be at least 1");
    }
    let a = a_nk_recurrence(n, k)?;
    let trailing_degree = a.trailing_degree().ok_or_else(|| Error::Internal(format!("a_{{{n},{k}}} = 0")))?;
    let bound = quadratic_bound(n, k);
    let td = Rational::from_integer(BigInt::from(trailing_degree));
    if td < bound {
        return Err(Error::Verification(format!("trailing degree {trailing_degree} of a_{{{n},{k}}} is below {bound}")));
    }
    Ok(ModularBound {
        n,
        k,
        equality: td == bound,
        bound,
        trailing_degree,
        equality_expected: n % (k + 1) <= 1,
    })
}

/// `#Hom(C_{p^u}, GL_n(F_{p^v})) = a_{n,p^u}(p^v)` with its valuation and
/// the bound `v·(p^u−1)/(p^u+1)·C(n,2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularHom {
    #[serde(serialize_with = "serialize_decimal")]
    pub count: BigInt,
    pub vp: Valuation,
    #[serde(serialize_with = "serialize_rational")]
    pub bound: Rational,
    pub equality_expected: bool,
}

/// Which `a_{n,k}` route a modular count uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModularMethod {
    Recurrence,
    Partition,
}

pub fn a_nk(n: usize, k: usize, method: ModularMethod) -> Result<QPolynomial> {
    match method {
        ModularMethod::Recurrence => a_nk_recurrence(n, k),
        ModularMethod::Partition => a_nk_partition(n, k),
    }
}

pub fn modular_hom(p: u64, u: u32, v: u32, n: usize) -> Result<ModularHom> {
    modular_hom_with(p, u, v, n, ModularMethod::Recurrence)
}

pub fn modular_hom_with(p: u64, u: u32, v: u32, n: usize, method: ModularMethod) -> Result<ModularHom> {
    require_prime(p)?;
    if u == 0 || v == 0 {
        return input("u and v must be at least 1");
    }
    let k = p.checked_pow(u).filter(|&k| k <= 1 << 20).ok_or_else(|| Error::Input(format!("{p}^{u} is too large")))?;
    let q = big_pow(p, v as u64);
    let value = a_nk(n, k as usize, method)?.eval_int(&q)?;
    let count = value.to_integer();
    let vp = vp_int(&count, p);
    let bound = quadratic_bound(n, k as usize) * Rational::from_integer(BigInt::from(v));
    let vp_r = Rational::from_integer(BigInt::from(vp.finite().unwrap_or(i64::MAX)));
    if vp_r < bound.ceil() {
        return Err(Error::Verification(format!("v_{p}(#Hom) = {vp} is below {bound} at n = {n}")));
    }
    let equality_expected = n % (k as usize + 1) <= 1;
    if equality_expected && vp_r != bound {
        return Err(Error::Verification(format!("v_{p}(#Hom) = {vp} differs from {bound} at n = {n}")));
    }
    Ok(ModularHom { count, vp, bound, equality_expected })
}

/// `a_{n,k}` evaluated at an integer `q`.
pub fn nilpotent_count(n: usize, k: usize, q: u64) -> Result<BigInt> {
    Ok(a_nk_recurrence(n, k)?.eval_int(&BigInt::from(q))?.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use num_traits::Zero;

    fn poly(terms: &[(i64, i64)]) -> QPolynomial {
        QPolynomial::from_terms(terms.iter().map(|&(e, c)| (e, int(c))))
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions(0, 3).count(), 1);
        let p32: Vec<Vec<usize>> = partitions(3, 2).map(|p| p.parts()).collect();
        assert_eq!(p32, vec![vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(10, 10).count(), 42);
        assert_eq!(partitions(20, 20).count(), 627);
        for p in partitions(12, 4) {
            assert_eq!(p.weight(), 12);
            assert!(p.largest_part() <= 4);
        }
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_stat(&Partition::from_parts(&[1, 1]).unwrap()), 0);
        assert_eq!(beta_stat(&Partition::from_parts(&[2]).unwrap()), 0);
        assert_eq!(beta_stat(&Partition::from_parts(&[2, 1]).unwrap()), 0);
    }

    #[test]
    fn class_size_examples() {
        assert_eq!(class_size(&Partition::from_parts(&[1, 1]).unwrap()).unwrap(), QPolynomial::one());
        assert_eq!(class_size(&Partition::from_parts(&[2]).unwrap()).unwrap(), poly(&[(2, 1), (0, -1)]));
        for n in 0..=10usize {
            let total = partitions(n, n).try_fold(QPolynomial::zero(), |acc, l| class_size(&l).map(|c| acc + c)).unwrap();
            assert_eq!(total, QPolynomial::monomial((n * n - n) as i64, int(1)), "n={n}");
        }
    }

    #[test]
    fn a_nk_examples() {
        assert_eq!(a_nk_partition(2, 2).unwrap(), poly(&[(2, 1)]));
        assert_eq!(a_nk_partition(3, 2).unwrap(), poly(&[(4, 1), (3, 1), (1, -1)]));
        assert_eq!(a_nk_recurrence(3, 2).unwrap(), poly(&[(4, 1), (3, 1), (1, -1)]));
        assert_eq!(a_nk_recurrence(2, 1).unwrap(), QPolynomial::one());
        for n in 0..=8usize {
            assert_eq!(a_nk_partition(n, 1).unwrap(), QPolynomial::one());
            assert_eq!(a_nk_recurrence(n, n).unwrap(), QPolynomial::monomial((n * n - n) as i64, int(1)));
        }
        assert!(a_nk_partition(3, 0).unwrap().is_zero());
        assert!(a_nk_recurrence(3, 0).unwrap().is_zero());
    }

    #[test]
    fn removal_exponent_is_beta_difference() {
        for n in 1..=12usize {
            for lambda in partitions(n, n) {
                let m = lambda.largest_part();
                let l = lambda.multiplicity(m);
                let mut mu = lambda.parts();
                mu.retain(|&x| x != m);
                let mu = Partition::from_parts(&mu).unwrap();
                let diff = beta_stat(&lambda) - beta_stat(&mu);
                assert_eq!(diff, removal_exponent(l as i64, m as i64, n as i64), "{:?}", lambda.parts());
                if m == 2 {
                    assert_eq!(diff, stated_removal_exponent(l as i64, 2, n as i64));
                }
            }
        }
        assert_ne!(removal_exponent(1, 3, 3), stated_removal_exponent(1, 3, 3));
    }

    #[test]
    fn routes_agree() {
        for n in 0..=9usize {
            for k in 0..=n {
                assert_eq!(a_nk_partition(n, k).unwrap(), a_nk_recurrence(n, k).unwrap(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn bound_examples() {
        let b = modular_bound(3, 2).unwrap();
        assert_eq!((b.trailing_degree, b.bound.clone(), b.equality_expected, b.equality), (1, int(1), true, true));
        let b = modular_bound(2, 2).unwrap();
        assert_eq!((b.trailing_degree, b.equality_expected), (2, false));
        for n in 0..10 {
            let b = modular_bound(n, 1).unwrap();
            assert_eq!(b.trailing_degree, 0);
            assert!(b.equality);
        }
        assert!(modular_bound(3, 0).is_err());
    }

    #[test]
    fn hom_examples() {
        let h = modular_hom(2, 1, 1, 2).unwrap();
        assert_eq!(h.count, BigInt::from(4));
        let h = modular_hom(2, 1, 1, 3).unwrap();
        assert_eq!((h.count, h.vp, h.bound, h.equality_expected), (BigInt::from(22), Valuation::Finite(1), int(1), true));
        let h = modular_hom(5, 1, 1, 0).unwrap();
        assert_eq!((h.count, h.vp, h.bound), (BigInt::one(), Valuation::Finite(0), int(0)));
        assert_eq!(modular_hom_with(3, 1, 1, 5, ModularMethod::Partition).unwrap(), modular_hom(3, 1, 1, 5).unwrap());
    }

    #[test]
    fn monotone_in_k() {
        for n in 0..=10usize {
            for k in 0..n {
                let diff = nilpotent_count(n, k + 1, 2).unwrap() - nilpotent_count(n, k, 2).unwrap();
                assert!(diff >= BigInt::zero());
            }
        }
    }
}
