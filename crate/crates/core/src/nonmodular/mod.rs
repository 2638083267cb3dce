//! The non-modular case `p ∤ q`: the generating function `F(G,q;z)`, exact
//! homomorphism counts, and the p-adic lower bounds on them.

mod bounds;
mod decomposition;

pub use bounds::{
    b_a_sequences, bound_first, bound_main, bound_refined, main_case_table, stated_case_table,
    BaSequences, BoundReport, BoundTheorem, CaseTable,
};
pub use decomposition::{
    alternative_parts, decomposition_log_f, limit_log_f, AlternativeParts,
};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use crate::error::{input, internal, Result};
use crate::exact::{big_pow, choose2, int, q_pochhammer, vp_int, Rational, Valuation};
use crate::exec::Exec;
use crate::groups::{irred_dim_counts, lambda_profile, AbelianPGroup, LambdaProfile};
use crate::qseries::{f_series_at_power, h_series_at_power, RationalSeries};

pub(crate) fn serialize_decimal<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `#Hom(G, GL_n(F_q))` with its p-adic valuation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomCount {
    #[serde(serialize_with = "serialize_decimal")]
    pub count: BigInt,
    pub vp: Valuation,
}

fn check_q(g: &AbelianPGroup, q: u64) -> Result<()> {
    if q < 2 {
        return input(format!("q = {q} must be at least 2"));
    }
    if q.is_multiple_of(g.p()) {
        return input(format!("{} divides q = {q}; use the modular commands", g.p()));
    }
    Ok(())
}

/// `F(G,q;z)` truncated at a fixed order, with the data it was built from.
#[derive(Debug, Clone)]
pub struct GenFun {
    group: AbelianPGroup,
    q: u64,
    dims: Vec<(u64, BigInt)>,
    log_f: RationalSeries,
    f: RationalSeries,
}

impl GenFun {
    /// `F = exp(Σ_e n_e·h(q^e, z^e))`.
    pub fn new(group: &AbelianPGroup, q: u64, order: usize) -> Result<Self> {
        Self::with_exec(group, q, order, Exec::Sequential)
    }

    pub fn with_exec(group: &AbelianPGroup, q: u64, order: usize, exec: Exec) -> Result<Self> {
        check_q(group, q)?;
        let dims = irred_dim_counts(group, q)?;
        let used: Vec<&(u64, BigInt)> = dims.iter().filter(|(e, _)| *e as usize <= order).collect();
        let qr = int(q as i64);
        let parts = exec.map_slice(&used, |(e, n)| {
            h_series_at_power(&qr, *e as u32, order).map(|h| h.scale(&Rational::from_integer(n.clone())))
        });
        let mut log_f = RationalSeries::zero(order);
        for part in parts {
            log_f = log_f.add(&part?)?;
        }
        let f = log_f.exp()?;
        Ok(GenFun { group: group.clone(), q, dims, log_f, f })
    }

    pub fn group(&self) -> &AbelianPGroup {
        &self.group
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.f.order()
    }

    pub fn dims(&self) -> &[(u64, BigInt)] {
        &self.dims
    }

    pub fn series(&self) -> &RationalSeries {
        &self.f
    }

    pub fn log_series(&self) -> &RationalSeries {
        &self.log_f
    }

    /// `(−1)^n q^{C(n,2)} (q;q)_n [z^n]F`, required to be a non-negative integer.
    pub fn hom_count(&self, n: usize) -> Result<HomCount> {
        if n > self.order() {
            return input(format!("n = {n} exceeds the truncation order {}", self.order()));
        }
        let q = int(self.q as i64);
        let sign = if n.is_multiple_of(2) { int(1) } else { int(-1) };
        let scale = sign * Rational::from_integer(big_pow(self.q, choose2(n as i64) as u64)) * q_pochhammer(n, &q);
        let value = scale * self.f.coeff(n);
        if !value.is_integer() || value.is_negative() {
            return internal(format!(
                "#Hom({}, GL_{n}(F_{})) came out as {value}",
                self.group, self.q
            ));
        }
        let count = value.to_integer();
        let vp = vp_int(&count, self.group.p());
        Ok(HomCount { count, vp })
    }
}

/// `F(G,q;z)` through `z^order` by the exp route.
pub fn f_series(g: &AbelianPGroup, q: u64, order: usize) -> Result<RationalSeries> {
    Ok(GenFun::new(g, q, order)?.f)
}

/// `∏_e f(q^e, z^e)^{n_e}` through `z^order` by binary powering.
pub fn f_series_product(g: &AbelianPGroup, q: u64, order: usize) -> Result<RationalSeries> {
    check_q(g, q)?;
    let qr = int(q as i64);
    let mut acc = RationalSeries::one(order);
    for (e, n) in irred_dim_counts(g, q)? {
        if e as usize > order {
            continue;
        }
        let base = f_series_at_power(&qr, e as u32, order)?;
        let exp: BigUint = n.to_biguint().expect("multiplicities are non-negative");
        acc = acc.mul(&base.pow(&exp))?;
    }
    Ok(acc)
}

pub fn hom_count(g: &AbelianPGroup, q: u64, n: usize) -> Result<HomCount> {
    GenFun::new(g, q, n.max(1))?.hom_count(n)
}

/// Counts for `0 ≤ n ≤ n_max` from one generating function.
pub fn hom_counts(g: &AbelianPGroup, q: u64, n_max: usize) -> Result<Vec<HomCount>> {
    let gf = GenFun::new(g, q, n_max.max(1))?;
    (0..=n_max).map(|n| gf.hom_count(n)).collect()
}

/// `|GL_n(F_q)| = q^{C(n,2)} ∏_{i=1}^{n} (q^i − 1)`.
pub fn gln_order(n: usize, q: u64) -> BigInt {
    let mut acc = big_pow(q, choose2(n as i64) as u64);
    for i in 1..=n {
        acc *= big_pow(q, i as u64) - BigInt::one();
    }
    acc
}

/// `v_p(|GL_n(F_q)|) = Σ_i λ_i (⌊n/dp^i⌋ − ⌊n/dp^{i+1}⌋)`.
pub fn gln_vp(n: u64, q: u64, p: u64) -> Result<u64> {
    let prof = lambda_profile(p, q, 0)?;
    Ok(gln_vp_with(&prof, n))
}

pub(crate) fn gln_vp_with(prof: &LambdaProfile, n: u64) -> u64 {
    let mut total = 0;
    let mut m = prof.d;
    let mut i = 0;
    while m <= n {
        total += prof.lambda(i) * (n / m - n / (m * prof.p));
        m *= prof.p;
        i += 1;
    }
    total
}

/// `gcd(|G|, |GL_n(F_q)|)`.
pub fn yoshida_modulus(g: &AbelianPGroup, q: u64, n: usize) -> BigInt {
    num_integer::Integer::gcd(&g.order(), &gln_order(n, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use num_traits::Zero;

    fn g(p: u64, f: &[u32]) -> AbelianPGroup {
        AbelianPGroup::from_factors(p, f).unwrap()
    }

    #[test]
    fn generating_function_examples() {
        let f = f_series(&g(2, &[1]), 3, 4).unwrap();
        assert_eq!(f.coeff(0), &int(1));
        assert_eq!(f.coeff(1), &int(1));
        assert_eq!(f.coeff(2), &rat(7, 24));
        assert!(f_series(&g(3, &[1]), 9, 4).is_err());
    }

    #[test]
    fn product_route_agrees() {
        for (p, fac, q) in [(2, &[1u32][..], 3u64), (2, &[2, 2, 2], 31), (3, &[2], 17), (3, &[3], 7), (2, &[1, 1], 5)] {
            let grp = g(p, fac);
            assert_eq!(f_series(&grp, q, 12).unwrap(), f_series_product(&grp, q, 12).unwrap(), "{grp} q={q}");
        }
    }

    #[test]
    fn count_examples() {
        let c2 = g(2, &[1]);
        assert_eq!(hom_count(&c2, 3, 1).unwrap().count, BigInt::from(2));
        let h = hom_count(&c2, 3, 2).unwrap();
        assert_eq!((h.count, h.vp), (BigInt::from(14), Valuation::Finite(1)));
        assert_eq!(hom_count(&g(3, &[1, 2]), 7, 0).unwrap().count, BigInt::one());
        assert_eq!(hom_count(&c2, 5, 1).unwrap().count, BigInt::from(2));
        let json = serde_json::to_string(&hom_count(&c2, 3, 2).unwrap()).unwrap();
        assert_eq!(json, r#"{"count":"14","vp":1}"#);
    }

    #[test]
    fn trivial_group_counts_one() {
        let t = AbelianPGroup::trivial(2).unwrap();
        for c in hom_counts(&t, 3, 6).unwrap() {
            assert_eq!(c.count, BigInt::one());
        }
    }

    #[test]
    fn gln_valuation() {
        assert_eq!(gln_vp(2, 3, 2).unwrap(), 4);
        assert_eq!(gln_vp(1, 5, 2).unwrap(), 2);
        for p in [2u64, 3, 5, 7] {
            for q in 2..=9u64 {
                if q % p == 0 {
                    continue;
                }
                for n in 0..=8u64 {
                    let direct = vp_int(&gln_order(n as usize, q), p).finite().unwrap() as u64;
                    assert_eq!(gln_vp(n, q, p).unwrap(), direct, "p={p} q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn yoshida_divides_counts() {
        for (p, fac, q) in [(2, &[1u32][..], 3u64), (2, &[2], 5), (3, &[1, 2], 7), (2, &[2, 2, 2], 31)] {
            let grp = g(p, fac);
            for (n, c) in hom_counts(&grp, q, 10).unwrap().into_iter().enumerate() {
                let m = yoshida_modulus(&grp, q, n);
                assert!((c.count % m).is_zero(), "{grp} q={q} n={n}");
            }
        }
    }
}
