//! The `b`/`a` sequences, their minimizers and the closed-form lower bounds on
//! `v_p(#Hom(G, GL_n(F_q)))`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{input, internal, Result};
use crate::exact::Rational;
use crate::groups::{lambda_profile, AbelianPGroup, LambdaProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundTheorem {
    First,
    Main1,
    Main2,
    Main3,
}

/// The sequences `b_i = c_{λ_i} − λ_i − i` and `a_i` (`None` for `+∞`)
/// scanned up to the horizon, with their minimizers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaSequences {
    pub p: u64,
    pub d: u64,
    pub lambdas: Vec<u64>,
    pub b: Vec<i64>,
    pub a: Vec<Option<i64>>,
    /// Smallest minimizer of `p^{−i}(b_i − 1/(p−1))`.
    pub l_first: usize,
    pub first_unique: bool,
    /// Smallest `i` with `a_i < 0`.
    pub l: usize,
    pub a_l: i64,
    /// Whether `l` is the unique minimizer of `p^{−i}(a_i − 1/(p−1))`.
    pub main_unique: bool,
}

fn objective(p: u64, i: usize, x: i64) -> Rational {
    let pm1 = BigInt::from(p - 1);
    let num = BigInt::from(x) * &pm1 - 1;
    Rational::new(num, pm1 * num_traits::pow(BigInt::from(p), i))
}

/// Index of the smallest value (first on ties) and whether it is unique.
fn argmin(values: &[Option<Rational>]) -> Option<(usize, bool)> {
    let mut best: Option<(usize, &Rational)> = None;
    let mut unique = true;
    for (i, v) in values.iter().enumerate() {
        let Some(v) = v else { continue };
        match best {
            None => best = Some((i, v)),
            Some((_, b)) => match v.cmp(b) {
                Ordering::Less => {
                    best = Some((i, v));
                    unique = true;
                }
                Ordering::Equal => unique = false,
                Ordering::Greater => {}
            },
        }
    }
    best.map(|(i, _)| (i, unique))
}

fn check_group(g: &AbelianPGroup) -> Result<()> {
    if g.is_trivial() {
        return input("bounds need a nontrivial group");
    }
    Ok(())
}

/// Scans `b` and `a`. The scan stops two indices after the first `i` with
/// `λ_i > r` and `b_i ≤ −1`: from there on `b` drops by 2 per step, so both
/// objectives are non-decreasing.
pub fn b_a_sequences(g: &AbelianPGroup, q: u64) -> Result<BaSequences> {
    check_group(g)?;
    let p = g.p();
    let prof = lambda_profile(p, q, 0)?;
    let (r, rp) = (g.r() as u64, g.r_prime() as u64);
    let mut lambdas = Vec::new();
    let mut b = Vec::new();
    let mut a = Vec::new();
    let mut stop = None;
    let mut i = 0usize;
    while stop.is_none_or(|s| i <= s) {
        let lam = prof.lambda(i);
        let bi = g.c(lam) as i64 - lam as i64 - i as i64;
        lambdas.push(lam);
        b.push(bi);
        a.push(if rp <= lam && lam <= r { None } else { Some(bi) });
        if stop.is_none() && lam > r && bi <= -1 {
            stop = Some(i + 2);
        }
        i += 1;
    }
    check_b_properties(&prof, r, &b)?;

    let first_obj: Vec<Option<Rational>> = b.iter().enumerate().map(|(i, &x)| Some(objective(p, i, x))).collect();
    let (l_first, first_unique) = argmin(&first_obj).expect("nonempty scan");
    let main_obj: Vec<Option<Rational>> =
        a.iter().enumerate().map(|(i, x)| x.map(|x| objective(p, i, x))).collect();
    let (l_min, main_unique) =
        argmin(&main_obj).ok_or_else(|| crate::Error::Internal("every a_i is infinite".into()))?;
    let l = a
        .iter()
        .position(|x| matches!(x, Some(v) if *v < 0))
        .ok_or_else(|| crate::Error::Internal("no a_i < 0 within the horizon".into()))?;
    if l != l_min {
        return internal(format!("first negative a at {l} but the minimizer is {l_min}"));
    }
    let a_l = a[l].unwrap();
    if main_unique != !(p == 2 && a_l == -1) {
        return internal(format!("minimizer uniqueness {main_unique} at a_l = {a_l}, p = {p}"));
    }
    if lambdas[l] <= r {
        return internal(format!("λ_l = {} ≤ r at l = {l}", lambdas[l]));
    }
    Ok(BaSequences { p, d: prof.d, lambdas, b, a, l_first, first_unique, l, a_l, main_unique })
}

fn check_b_properties(prof: &LambdaProfile, r: u64, b: &[i64]) -> Result<()> {
    for i in 0..b.len().saturating_sub(1) {
        let step = b[i + 1] - b[i];
        let exempt = i == 0 && prof.p == 2 && prof.lambda(0) == 1;
        if exempt && b[0] < 0 {
            return internal(format!("b_0 = {} < 0 in the exempt case", b[0]));
        }
        if !exempt && step < -2 {
            return internal(format!("b_{} − b_{i} = {step} < −2", i + 1));
        }
        if prof.lambda(i) > r && step != -2 {
            return internal(format!("b_{} − b_{i} = {step} with λ_{i} > r", i + 1));
        }
    }
    Ok(())
}

/// `l` and `a_l` for the main theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseTable {
    pub theorem: BoundTheorem,
    pub l: usize,
    pub a_l: i64,
}

fn uses_main1(p: u64, lambda0: u64) -> bool {
    p >= 3 || lambda0 >= 2
}

/// `l` and `a_l` from `(λ_0 or λ_1, r, s)`. `i_0` is the first index with
/// `λ_i > r` and `A = a_{i_0}`; past `i_0` the sequence drops by 2 per step.
pub fn main_case_table(p: u64, lambda0: u64, lambda1: u64, r: u32, s: u32) -> CaseTable {
    let (r, s) = (r as i64, s as i64);
    let (theorem, i0, a0) = if uses_main1(p, lambda0) {
        let l0 = lambda0 as i64;
        if l0 > r {
            (BoundTheorem::Main1, 0, r + s - l0)
        } else {
            (BoundTheorem::Main1, r - l0 + 1, -r + s + l0 - 2)
        }
    } else {
        let l1 = lambda1 as i64;
        if l1 > r {
            (BoundTheorem::Main2, 1, r + s - l1 - 1)
        } else {
            (BoundTheorem::Main2, r - l1 + 2, -r + s + l1 - 3)
        }
    };
    let (l, a_l) = if a0 < 0 {
        (i0, a0)
    } else {
        let steps = a0.div_euclid(2) + 1;
        (i0 + steps, a0 - 2 * steps)
    };
    CaseTable { theorem, l: l as usize, a_l }
}

/// The four-case tables exactly as stated, first matching case wins.
pub fn stated_case_table(p: u64, lambda0: u64, lambda1: u64, r: u32, s: u32) -> CaseTable {
    let (r, s) = (r as i64, s as i64);
    if uses_main1(p, lambda0) {
        let l0 = lambda0 as i64;
        let (l, a_l) = if l0 > r + s {
            (0, r + s - l0)
        } else if r - s + 2 <= l0 && (r + s - l0) % 2 == 0 {
            ((r + s - l0 + 2) / 2, -2)
        } else if r - s + 2 <= l0 {
            ((r + s - l0 + 1) / 2, -1)
        } else {
            (r - l0 + 1, -r + s + l0 - 2)
        };
        CaseTable { theorem: BoundTheorem::Main1, l: l as usize, a_l }
    } else {
        let l1 = lambda1 as i64;
        let (l, a_l) = if l1 > r + s - 1 {
            (1, r + s - l1 - 1)
        } else if r - s + 3 <= l1 && (r + s - l1) % 2 == 1 {
            ((r + s - l1 + 1) / 2, -2)
        } else if r - s + 3 <= l1 {
            ((r + s - l1) / 2, -1)
        } else {
            (r - l1 + 2, -r + s + l1 - 3)
        };
        CaseTable { theorem: BoundTheorem::Main2, l: l as usize, a_l }
    }
}

/// A lower bound on `v_p(#Hom(G, GL_n(F_q)))` with the data it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub theorem: BoundTheorem,
    pub p: u64,
    pub d: u64,
    pub lambda0: u64,
    pub lambda1: u64,
    pub l: usize,
    /// `b_l` for the first bound, `a_l` otherwise.
    pub coeff: i64,
    pub n: u64,
    pub bound: i64,
    pub tight_claim: bool,
    /// Equality is claimed at multiples of this modulus when `tight_claim`.
    pub tight_modulus: u64,
}

impl BoundReport {
    /// The bound formula evaluated at `n`.
    pub fn at(&self, n: u64) -> i64 {
        let (p, d, l) = (self.p, self.d, self.l as u32);
        let fl = |m: u64| (n / m) as i64;
        let dp = |i: u32| d * p.pow(i);
        let (l0, l1) = (self.lambda0 as i64, self.lambda1 as i64);
        match self.theorem {
            BoundTheorem::First => {
                let sum: i64 = (0..=l).map(|i| fl(dp(i))).sum();
                if uses_main1(p, self.lambda0) {
                    self.coeff * fl(dp(l)) + sum + (l0 - 1) * fl(d)
                } else {
                    self.coeff * fl(dp(l)) + sum + (l1 - 2) * fl(2)
                }
            }
            BoundTheorem::Main1 => main1(n, p, d, l0, l, self.coeff),
            BoundTheorem::Main2 => main2(n, l1, l, self.coeff),
            BoundTheorem::Main3 => {
                let base = if uses_main1(p, self.lambda0) {
                    main1(n, p, d, l0, l, self.coeff)
                } else {
                    main2(n, l1, l, self.coeff)
                };
                base + fl(1 << (l + 1)) - fl(1 << (l + 2))
            }
        }
    }

    /// Whether equality is claimed at `n`.
    pub fn tight_at(&self, n: u64) -> bool {
        self.tight_claim && n.is_multiple_of(self.tight_modulus)
    }

    fn evaluated(mut self, n: u64) -> Self {
        self.n = n;
        self.bound = self.at(n);
        self
    }
}

fn main1(n: u64, p: u64, d: u64, l0: i64, l: u32, a_l: i64) -> i64 {
    let fl = |m: u64| (n / m) as i64;
    let sum: i64 = (1..=l).map(|i| fl(d * p.pow(i))).sum();
    l0 * fl(d) + sum + a_l * fl(d * p.pow(l))
}

fn main2(n: u64, l1: i64, l: u32, a_l: i64) -> i64 {
    let fl = |m: u64| (n / m) as i64;
    let sum: i64 = (2..=l).map(|i| fl(1 << i)).sum();
    n as i64 + (l1 - 1) * fl(2) + sum + a_l * fl(1 << l)
}

fn lambda01(g: &AbelianPGroup, q: u64) -> Result<LambdaProfile> {
    check_group(g)?;
    lambda_profile(g.p(), q, 1)
}

/// First estimate, using the minimizer of `p^{−i}(b_i − 1/(p−1))`. No
/// equality is claimed.
pub fn bound_first(g: &AbelianPGroup, q: u64, n: u64) -> Result<BoundReport> {
    let prof = lambda01(g, q)?;
    let seq = b_a_sequences(g, q)?;
    let report = BoundReport {
        theorem: BoundTheorem::First,
        p: g.p(),
        d: prof.d,
        lambda0: prof.lambdas[0],
        lambda1: prof.lambdas[1],
        l: seq.l_first,
        coeff: seq.b[seq.l_first],
        n,
        bound: 0,
        tight_claim: false,
        tight_modulus: prof.d * g.p().pow(seq.l_first as u32),
    };
    Ok(report.evaluated(n))
}

fn unrefined_main(g: &AbelianPGroup, q: u64, n: u64) -> Result<BoundReport> {
    let prof = lambda01(g, q)?;
    let seq = b_a_sequences(g, q)?;
    let (l0, l1) = (prof.lambdas[0], prof.lambdas[1]);
    let table = main_case_table(g.p(), l0, l1, g.r(), g.s());
    if table.l != seq.l || table.a_l != seq.a_l {
        return internal(format!(
            "case table gives l={}, a_l={} but the scan gives l={}, a_l={} for {g}, q={q}",
            table.l, table.a_l, seq.l, seq.a_l
        ));
    }
    let report = BoundReport {
        theorem: table.theorem,
        p: g.p(),
        d: prof.d,
        lambda0: l0,
        lambda1: l1,
        l: table.l,
        coeff: table.a_l,
        n,
        bound: 0,
        tight_claim: seq.main_unique,
        tight_modulus: prof.d * g.p().pow(table.l as u32),
    };
    Ok(report.evaluated(n))
}

/// Main bound; chains to [`bound_refined`] when `p = 2` and `a_l = −1`.
pub fn bound_main(g: &AbelianPGroup, q: u64, n: u64) -> Result<BoundReport> {
    let report = unrefined_main(g, q, n)?;
    if report.p == 2 && report.coeff == -1 {
        return Ok(refine(report));
    }
    Ok(report)
}

fn refine(mut report: BoundReport) -> BoundReport {
    report.theorem = BoundTheorem::Main3;
    report.tight_claim = true;
    report.tight_modulus = 1 << (report.l + 2);
    let n = report.n;
    report.evaluated(n)
}

/// Main bound plus `⌊n/2^{l+1}⌋ − ⌊n/2^{l+2}⌋`; requires `p = 2`, `a_l = −1`.
pub fn bound_refined(g: &AbelianPGroup, q: u64, n: u64) -> Result<BoundReport> {
    let report = unrefined_main(g, q, n)?;
    if report.p != 2 || report.coeff != -1 {
        return input(format!("refinement needs p = 2 and a_l = −1 (got p = {}, a_l = {})", report.p, report.coeff));
    }
    Ok(refine(report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u64, f: &[u32]) -> AbelianPGroup {
        AbelianPGroup::from_factors(p, f).unwrap()
    }

    fn values(r: &BoundReport) -> Vec<i64> {
        (0..=24).map(|n| r.at(n)).collect()
    }

    fn formula(f: impl Fn(i64) -> i64) -> Vec<i64> {
        (0..=24).map(f).collect()
    }

    #[test]
    fn sequence_examples() {
        let s = b_a_sequences(&g(2, &[1]), 3).unwrap();
        assert_eq!(&s.b[..4], &[0, -3, -5, -7]);
        let s = b_a_sequences(&g(2, &[2, 2, 2]), 31).unwrap();
        assert_eq!(&s.b[..4], &[2, -1, -3, -5]);
        assert_eq!((s.l, s.a_l), (1, -1));
        assert!(!s.main_unique);
        let s = b_a_sequences(&g(3, &[3]), 7).unwrap();
        assert_eq!(&s.b[..4], &[0, -1, -2, -4]);
        assert_eq!(&s.a[..4], &[None, None, None, Some(-4)]);
        assert_eq!((s.l, s.a_l), (3, -4));
        assert!(b_a_sequences(&AbelianPGroup::trivial(2).unwrap(), 3).is_err());
    }

    #[test]
    fn first_bound_examples() {
        let r = bound_first(&g(2, &[1]), 3, 0).unwrap();
        assert_eq!(values(&r), formula(|n| n - n / 2));
        let r = bound_first(&g(3, &[3]), 163, 0).unwrap();
        assert_eq!(values(&r), formula(|n| 3 * n));
        let r = bound_first(&g(2, &[1]), 5, 0).unwrap();
        assert_eq!(values(&r), formula(|n| n));
        assert!(!r.tight_claim);
    }

    #[test]
    fn main_bound_examples() {
        let r = bound_main(&g(3, &[2]), 17, 0).unwrap();
        assert_eq!((r.theorem, r.l, r.coeff), (BoundTheorem::Main1, 1, -2));
        assert_eq!(values(&r), formula(|n| 2 * (n / 2) - n / 6));
        let r = bound_main(&g(3, &[3]), 7, 0).unwrap();
        assert_eq!((r.l, r.coeff), (3, -4));
        assert_eq!(values(&r), formula(|n| n + n / 3 + n / 9 - 3 * (n / 27)));
        let r = bound_main(&g(2, &[1]), 3, 0).unwrap();
        assert_eq!((r.theorem, r.l, r.coeff), (BoundTheorem::Main2, 1, -3));
        assert_eq!(values(&r), formula(|n| n - n / 2));
    }

    #[test]
    fn refined_examples() {
        let r = bound_refined(&g(2, &[1]), 5, 1).unwrap();
        assert_eq!((r.theorem, r.l, r.bound), (BoundTheorem::Main3, 0, 1));
        assert_eq!(values(&r), formula(|n| n + n / 2 - n / 4));
        assert_eq!(bound_main(&g(2, &[1]), 5, 1).unwrap(), r);
        let r = bound_refined(&g(2, &[2, 2, 2]), 31, 0).unwrap();
        assert_eq!(values(&r), formula(|n| n + 4 * (n / 2) + n / 4 - n / 8));
        assert_eq!(r.tight_modulus, 8);
        assert!(bound_refined(&g(2, &[1]), 3, 0).is_err());
        assert!(bound_refined(&g(3, &[2]), 17, 0).is_err());
    }

    #[test]
    fn case_table_matches_scan_widely() {
        let groups = [
            g(2, &[1]), g(2, &[2]), g(2, &[3]), g(2, &[4]), g(2, &[1, 1]), g(2, &[2, 1]), g(2, &[2, 2, 2]),
            g(2, &[3, 1, 1]), g(2, &[5, 2]), g(3, &[1]), g(3, &[2]), g(3, &[3]), g(3, &[1, 2]), g(3, &[4, 1, 1, 1]),
            g(5, &[2, 2]), g(7, &[3]),
        ];
        for grp in &groups {
            for q in 2..=200u64 {
                if q % grp.p() == 0 {
                    continue;
                }
                bound_main(grp, q, 10).unwrap_or_else(|e| panic!("{grp} q={q}: {e}"));
            }
        }
    }

    #[test]
    fn stated_table_differs_only_in_main2() {
        assert_eq!(stated_case_table(2, 1, 5, 2, 4), CaseTable { theorem: BoundTheorem::Main2, l: 1, a_l: -2 });
        assert_eq!(main_case_table(2, 1, 5, 2, 4), CaseTable { theorem: BoundTheorem::Main2, l: 2, a_l: -2 });
        assert_eq!(stated_case_table(2, 1, 3, 3, 0), CaseTable { theorem: BoundTheorem::Main2, l: 1, a_l: -1 });
        assert_eq!(main_case_table(2, 1, 3, 3, 0), CaseTable { theorem: BoundTheorem::Main2, l: 2, a_l: -3 });
        for r in 1..8u32 {
            for s in 0..8u32 {
                for l0 in 1..20u64 {
                    assert_eq!(stated_case_table(3, l0, l0 + 1, r, s), main_case_table(3, l0, l0 + 1, r, s));
                }
            }
        }
    }
}
