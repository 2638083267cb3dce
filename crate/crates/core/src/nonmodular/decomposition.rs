//! `log F` rebuilt from the `c`/`λ` data, and its alternative split into a
//! p-integral part plus the correction terms `log F_i^*`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::Result;
use crate::exact::{int, Rational};
use crate::groups::{lambda_profile, AbelianPGroup, LambdaProfile};
use crate::qseries::{h_series_at_power, RationalSeries};

/// `h(q^e, z^e)` for the exponents `e ≤ order` requested so far.
struct HCache {
    q: Rational,
    order: usize,
    map: BTreeMap<u64, RationalSeries>,
}

impl HCache {
    fn new(q: u64, order: usize) -> Self {
        HCache { q: int(q as i64), order, map: BTreeMap::new() }
    }

    fn get(&mut self, e: u64) -> Result<RationalSeries> {
        if e as usize > self.order {
            return Ok(RationalSeries::zero(self.order));
        }
        if let Some(s) = self.map.get(&e) {
            return Ok(s.clone());
        }
        let s = h_series_at_power(&self.q, e as u32, self.order)?;
        self.map.insert(e, s.clone());
        Ok(s)
    }

    /// `h_1 − (1/d) h_d`.
    fn base(&mut self, d: u64) -> Result<RationalSeries> {
        let hd = self.get(d)?.scale(&Rational::new(BigInt::from(1), BigInt::from(d)));
        self.get(1)?.sub(&hd)
    }

    /// `h_{dp^i} − (1/p) h_{dp^{i+1}}`.
    fn step(&mut self, d: u64, p: u64, i: u32) -> Result<RationalSeries> {
        let e = d * p.pow(i);
        let next = self.get(e * p)?.scale(&Rational::new(BigInt::from(1), BigInt::from(p)));
        self.get(e)?.sub(&next)
    }
}

/// `p^{x}/d` as an exact rational, `x` possibly negative.
fn weight(p: u64, x: i64, d: u64) -> Rational {
    let pow = num_traits::pow(BigInt::from(p), x.unsigned_abs() as usize);
    let w = if x >= 0 { Rational::from_integer(pow) } else { Rational::new(BigInt::from(1), pow) };
    w / int(d as i64)
}

/// Indices `i` with `d·p^i ≤ order`; later terms vanish at this truncation.
fn live_indices(prof: &LambdaProfile, order: usize) -> impl Iterator<Item = u32> + '_ {
    (0u32..).take_while(move |&i| prof.d * prof.p.pow(i) <= order as u64)
}

/// `(h_1 − h_d/d) + (1/d) Σ_i p^{c_{λ_i} − i} (h_{dp^i} − h_{dp^{i+1}}/p)`.
pub fn decomposition_log_f(g: &AbelianPGroup, q: u64, order: usize) -> Result<RationalSeries> {
    let prof = lambda_profile(g.p(), q, 0)?;
    let mut cache = HCache::new(q, order);
    let mut acc = cache.base(prof.d)?;
    for i in live_indices(&prof, order) {
        let c = g.c(prof.lambda(i as usize)) as i64;
        let term = cache.step(prof.d, prof.p, i)?.scale(&weight(prof.p, c - i as i64, prof.d));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `lim_k log F(C_{p^k}, q; z)`: the decomposition with `c_{λ_i} = λ_i`.
pub fn limit_log_f(p: u64, q: u64, order: usize) -> Result<RationalSeries> {
    let prof = lambda_profile(p, q, 0)?;
    let mut cache = HCache::new(q, order);
    limit_with(&prof, &mut cache, order)
}

fn limit_with(prof: &LambdaProfile, cache: &mut HCache, order: usize) -> Result<RationalSeries> {
    let mut acc = cache.base(prof.d)?;
    for i in live_indices(prof, order) {
        let lam = prof.lambda(i as usize) as i64;
        let term = cache.step(prof.d, prof.p, i)?.scale(&weight(prof.p, lam - i as i64, prof.d));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `log F = log F^† + Σ_i log F_i^*`.
#[derive(Debug, Clone)]
pub struct AlternativeParts {
    /// `p^s·lim_k log F(C_{p^k}) − (p^s − 1)(h_1 − h_d/d)`.
    pub dagger: RationalSeries,
    /// `(i, log F_i^*)` with `log F_i^* = (1/d)(p^{c_{λ_i}−i} − p^{λ_i+s−i})(h_{dp^i} − h_{dp^{i+1}}/p)`.
    pub stars: Vec<(u32, RationalSeries)>,
}

impl AlternativeParts {
    pub fn total(&self) -> Result<RationalSeries> {
        let mut acc = self.dagger.clone();
        for (_, s) in &self.stars {
            acc = acc.add(s)?;
        }
        Ok(acc)
    }
}

pub fn alternative_parts(g: &AbelianPGroup, q: u64, order: usize) -> Result<AlternativeParts> {
    let prof = lambda_profile(g.p(), q, 0)?;
    let (p, d, s) = (prof.p, prof.d, g.s() as i64);
    let mut cache = HCache::new(q, order);
    let ps = Rational::from_integer(num_traits::pow(BigInt::from(p), s as usize));
    let base = cache.base(d)?;
    let limit = limit_with(&prof, &mut cache, order)?;
    let dagger = limit.scale(&ps).sub(&base.scale(&(ps - int(1))))?;
    let mut stars = Vec::new();
    for i in live_indices(&prof, order) {
        let lam = prof.lambda(i as usize) as i64;
        let c = g.c(lam as u64) as i64;
        let w = weight(p, c - i as i64, d) - weight(p, lam + s - i as i64, d);
        stars.push((i, cache.step(d, p, i)?.scale(&w)));
    }
    Ok(AlternativeParts { dagger, stars })
}
