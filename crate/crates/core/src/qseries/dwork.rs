use serde::Serialize;

use super::RationalSeries;
use crate::error::{input, Result};
use crate::exact::{require_prime, vp_unchecked, Valuation};

/// Outcome of the Dieudonné–Dwork scan on `p·a(z) − a(z^p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DworkReport {
    pub prime: u64,
    pub order: usize,
    /// Minimum of `v_p([z^n](p·a(z) − a(z^p)))` over `1 ≤ n ≤ order`.
    pub min_valuation: Valuation,
    /// First index attaining the minimum, if any coefficient is nonzero.
    pub argmin: Option<usize>,
    /// `min_valuation ≥ 1`: the criterion for `exp a ∈ Z_p[[z]]`.
    pub passes: bool,
}

pub fn dwork_check(a: &RationalSeries, p: u64) -> Result<DworkReport> {
    require_prime(p)?;
    if !num_traits::Zero::is_zero(a.coeff(0)) {
        return input("Dwork scan needs a zero constant term");
    }
    let pr = crate::exact::int(p as i64);
    let mut min_valuation = Valuation::Infinite;
    let mut argmin = None;
    for n in 1..=a.order() {
        let mut c = a.coeff(n) * &pr;
        if n % p as usize == 0 {
            c -= a.coeff(n / p as usize);
        }
        let v = vp_unchecked(&c, p);
        if v < min_valuation {
            min_valuation = v;
            argmin = Some(n);
        }
    }
    Ok(DworkReport {
        prime: p,
        order: a.order(),
        min_valuation,
        argmin,
        passes: min_valuation.at_least(1),
    })
}

/// Minimum p-adic valuation over the coefficients `z^from..=z^order`.
pub fn min_valuation(a: &RationalSeries, p: u64, from: usize) -> Valuation {
    (from..=a.order())
        .map(|n| vp_unchecked(a.coeff(n), p))
        .min()
        .unwrap_or(Valuation::Infinite)
}

/// Whether every coefficient has nonnegative p-adic valuation.
pub fn is_p_integral(a: &RationalSeries, p: u64) -> bool {
    min_valuation(a, p, 0).at_least(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::qseries::TruncatedSeries;

    #[test]
    fn log_one_plus_z_passes() {
        let a = TruncatedSeries::new(24, vec![int(1), int(1)]).log().unwrap();
        for p in [2, 3, 5] {
            let r = dwork_check(&a, p).unwrap();
            assert!(r.passes, "p={p}: {r:?}");
            assert!(is_p_integral(&a.exp().unwrap(), p));
        }
    }

    #[test]
    fn identity_series_fails() {
        let a = TruncatedSeries::new(8, vec![int(0), int(1)]);
        let r = dwork_check(&a, 2).unwrap();
        assert_eq!(r.min_valuation, Valuation::Finite(0));
        assert_eq!(r.argmin, Some(2));
        assert!(!r.passes);
        assert!(!is_p_integral(&a.exp().unwrap(), 2));
    }

    #[test]
    fn constant_term_rejected() {
        let a = TruncatedSeries::new(4, vec![int(1)]);
        assert!(dwork_check(&a, 2).is_err());
        assert!(dwork_check(&RationalSeries::zero(4), 4).is_err());
    }
}
