//! JSON forms: rationals as `{"num","den"}` decimal strings, series as
//! `{"order","coeffs"}`, polynomials as `{"terms":[{"exp","num","den"}]}`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{QPolynomial, RationalSeries, TruncatedSeries};
use crate::error::{input, Result};
use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub order: usize,
    pub coeffs: Vec<RationalJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: i64,
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

pub fn rational_to_json(x: &Rational) -> RationalJson {
    RationalJson { num: x.numer().to_string(), den: x.denom().to_string() }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse::<BigInt>().or_else(|_| input(format!("not a decimal integer: {s:?}")))
}

fn parse_rational(num: &str, den: &str) -> Result<Rational> {
    let d = parse_int(den)?;
    if d.is_zero() {
        return input("zero denominator");
    }
    Ok(Rational::new(parse_int(num)?, d))
}

pub fn rational_from_json(j: &RationalJson) -> Result<Rational> {
    parse_rational(&j.num, &j.den)
}

pub fn series_to_json(s: &RationalSeries) -> SeriesJson {
    SeriesJson { order: s.order(), coeffs: s.coeffs().iter().map(rational_to_json).collect() }
}

pub fn series_from_json(j: &SeriesJson) -> Result<RationalSeries> {
    if j.coeffs.len() > j.order + 1 {
        return input(format!("{} coefficients exceed order {}", j.coeffs.len(), j.order));
    }
    let coeffs = j.coeffs.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
    Ok(TruncatedSeries::new(j.order, coeffs))
}

pub fn poly_to_json(p: &QPolynomial) -> PolyJson {
    PolyJson {
        terms: p
            .terms()
            .into_iter()
            .map(|(exp, c)| TermJson { exp, num: c.numer().to_string(), den: c.denom().to_string() })
            .collect(),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<QPolynomial> {
    let terms = j
        .terms
        .iter()
        .map(|t| Ok((t.exp, parse_rational(&t.num, &t.den)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(QPolynomial::from_terms(terms))
}
