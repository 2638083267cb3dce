//! Brute-force ground truth over small finite fields: exhaustive matrix
//! enumeration for nilpotent counts and homomorphism counts.

use num_bigint::BigInt;

use crate::error::{input, Error, Result};
use crate::exact::is_prime;
use crate::exec::Exec;
use crate::groups::AbelianPGroup;

/// Largest field size supported.
pub const FIELD_LIMIT: u64 = 16;
/// Hard cap on the number of matrices enumerated.
pub const ENUMERATION_BUDGET: u64 = 1 << 20;

/// `F_{p^v}` with elements encoded as integers whose base-`p` digits are the
/// polynomial coefficients, and full addition/multiplication tables.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u64,
    v: u32,
    /// Low coefficients `c_0..c_{v−1}` of the monic modulus.
    modulus: Vec<u8>,
    size: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

fn digits(mut x: u64, p: u64, len: usize) -> Vec<u64> {
    (0..len).map(|_| { let d = x % p; x /= p; d }).collect()
}

fn undigits(ds: &[u64], p: u64) -> u64 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// `a·b mod (x^v + Σ c_i x^i)` on digit vectors.
fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let v = modulus.len();
    let mut prod = vec![0u64; 2 * v];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (v..2 * v).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &m) in modulus.iter().enumerate() {
            prod[deg - v + i] = (prod[deg - v + i] + (p - m) * c) % p;
        }
    }
    prod.truncate(v);
    prod
}

/// Whether a monic polynomial of degree `deg` with low coefficients `f` has a
/// monic factor of degree `1..=deg/2`, by exhaustive trial division.
fn has_low_degree_factor(f: &[u64], p: u64) -> bool {
    let deg = f.len();
    for fd in 1..=deg / 2 {
        for enc in 0..p.pow(fd as u32) {
            let g = digits(enc, p, fd);
            if remainder_is_zero(f, &g, p) {
                return true;
            }
        }
    }
    false
}

fn remainder_is_zero(f: &[u64], g: &[u64], p: u64) -> bool {
    let mut r: Vec<u64> = f.to_vec();
    r.push(1);
    let gd = g.len();
    let mut full_g = g.to_vec();
    full_g.push(1);
    for deg in (gd..r.len()).rev() {
        let c = r[deg];
        if c == 0 {
            continue;
        }
        for (i, &gc) in full_g.iter().enumerate() {
            let idx = deg - gd + i;
            r[idx] = (r[idx] + (p - gc) * c) % p;
        }
    }
    r.iter().all(|&x| x == 0)
}

/// All monic irreducible moduli of degree `v`, by increasing encoding.
pub fn irreducible_moduli(p: u64, v: u32) -> Vec<Vec<u8>> {
    (0..p.pow(v))
        .map(|enc| digits(enc, p, v as usize))
        .filter(|f| v == 1 || !has_low_degree_factor(f, p))
        .map(|f| f.into_iter().map(|x| x as u8).collect())
        .collect()
}

/// `F_{p^v}` with the lexicographically least monic irreducible modulus.
pub fn ff_make(p: u64, v: u32) -> Result<FiniteField> {
    check_size(p, v)?;
    let modulus = irreducible_moduli(p, v).into_iter().next().expect("irreducibles exist in every degree");
    ff_with_modulus(p, &modulus)
}

fn check_size(p: u64, v: u32) -> Result<()> {
    if !is_prime(p) {
        return input(format!("{p} is not prime"));
    }
    if v == 0 {
        return input("field degree must be at least 1");
    }
    match p.checked_pow(v) {
        Some(q) if q <= FIELD_LIMIT => Ok(()),
        _ => input(format!("F_{{{p}^{v}}} exceeds the field size limit {FIELD_LIMIT}")),
    }
}

/// `F_{p^v}` for a given monic modulus (low coefficients `c_0..c_{v−1}`).
pub fn ff_with_modulus(p: u64, modulus: &[u8]) -> Result<FiniteField> {
    let v = modulus.len() as u32;
    check_size(p, v)?;
    let m: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
    if m.iter().any(|&c| c >= p) {
        return input("modulus coefficients must be reduced mod p");
    }
    if v > 1 && has_low_degree_factor(&m, p) {
        return input(format!("modulus {modulus:?} is reducible over F_{p}"));
    }
    let size = p.pow(v) as usize;
    let mut add = vec![0u8; size * size];
    let mut mul = vec![0u8; size * size];
    for a in 0..size {
        let da = digits(a as u64, p, v as usize);
        for b in 0..size {
            let db = digits(b as u64, p, v as usize);
            let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a * size + b] = undigits(&s, p) as u8;
            mul[a * size + b] = if v == 1 {
                ((a * b) as u64 % p) as u8
            } else {
                undigits(&poly_mulmod(&da, &db, &m, p), p) as u8
            };
        }
    }
    let neg = (0..size).map(|a| (0..size).find(|&b| add[a * size + b] == 0).unwrap() as u8).collect();
    let mut inv = vec![0u8; size];
    for a in 1..size {
        let b = (1..size)
            .find(|&b| mul[a * size + b] == 1)
            .ok_or_else(|| Error::Internal(format!("{a} has no inverse mod {modulus:?}")))?;
        inv[a] = b as u8;
    }
    let field = FiniteField { p, v, modulus: modulus.to_vec(), size, add, mul, neg, inv };
    for a in 1..size as u8 {
        if field.pow(a, size as u64 - 1) != 1 {
            return Err(Error::Internal(format!("x^(q−1) ≠ 1 for x = {a}")));
        }
    }
    Ok(field)
}

impl FiniteField {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.v
    }

    pub fn size(&self) -> u64 {
        self.size as u64
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.size + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u8, mut e: u64) -> u8 {
        let (mut base, mut acc) = (a, 1u8);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Square matrices over a [`FiniteField`], stored row-major.
#[derive(Debug, Clone, Copy)]
pub struct MatrixSpace<'a> {
    field: &'a FiniteField,
    n: usize,
}

impl<'a> MatrixSpace<'a> {
    pub fn new(field: &'a FiniteField, n: usize) -> Self {
        MatrixSpace { field, n }
    }

    /// `q^{n²}`, or an error beyond the enumeration budget.
    pub fn count(&self) -> Result<u64> {
        let cells = (self.n * self.n) as u32;
        match self.field.size().checked_pow(cells) {
            Some(c) if c <= ENUMERATION_BUDGET => Ok(c),
            _ => Err(Error::Budget(format!(
                "{}^{cells} matrices exceed the budget of {ENUMERATION_BUDGET}",
                self.field.size()
            ))),
        }
    }

    pub fn decode(&self, mut index: u64) -> Vec<u8> {
        let q = self.field.size();
        (0..self.n * self.n).map(|_| { let d = index % q; index /= q; d as u8 }).collect()
    }

    pub fn identity(&self) -> Vec<u8> {
        let mut m = vec![0u8; self.n * self.n];
        for i in 0..self.n {
            m[i * self.n + i] = 1;
        }
        m
    }

    pub fn mul(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let (n, f) = (self.n, self.field);
        let mut out = vec![0u8; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let cell = &mut out[i * n + j];
                    *cell = f.add(*cell, f.mul(x, b[k * n + j]));
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[u8], mut e: u64) -> Vec<u8> {
        let mut base = a.to_vec();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Exact determinant by Gaussian elimination.
    pub fn det(&self, a: &[u8]) -> u8 {
        let (n, f) = (self.n, self.field);
        let mut m = a.to_vec();
        let mut det = 1u8;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| m[r * n + col] != 0) else { return 0 };
            if pivot != col {
                for j in 0..n {
                    m.swap(pivot * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pv = m[col * n + col];
            det = f.mul(det, pv);
            let pinv = f.inv(pv);
            for r in col + 1..n {
                let factor = f.mul(m[r * n + col], pinv);
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in col..n {
                    m[r * n + j] = f.add(m[r * n + j], f.mul(nf, m[col * n + j]));
                }
            }
        }
        det
    }

    pub fn is_zero(&self, a: &[u8]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Multiplicative order of an invertible matrix.
    pub fn order(&self, a: &[u8]) -> u64 {
        let id = self.identity();
        let mut x = a.to_vec();
        let mut k = 1;
        while x != id {
            x = self.mul(&x, a);
            k += 1;
        }
        k
    }

    /// All invertible matrices satisfying `keep`, in enumeration order.
    pub fn invertible_where<F>(&self, exec: Exec, keep: F) -> Result<Vec<Vec<u8>>>
    where
        F: Fn(&[u8]) -> bool + Sync + Send,
    {
        let total = self.count()?;
        let starts: Vec<u64> = (0..total).step_by(CHUNK as usize).collect();
        let parts = exec.map_slice(&starts, |&s| {
            (s..(s + CHUNK).min(total))
                .map(|i| self.decode(i))
                .filter(|m| self.det(m) != 0 && keep(m))
                .collect::<Vec<_>>()
        });
        Ok(parts.into_iter().flatten().collect())
    }
}

const CHUNK: u64 = 4096;

/// `#{B ∈ F^{n×n} : B^k = 0}` by full enumeration.
pub fn nilpotent_count_bruteforce(n: usize, field: &FiniteField, k: u32) -> Result<u64> {
    nilpotent_count_with(n, field, k, Exec::default())
}

pub fn nilpotent_count_with(n: usize, field: &FiniteField, k: u32, exec: Exec) -> Result<u64> {
    let space = MatrixSpace::new(field, n);
    let total = space.count()?;
    Ok(exec.sum_chunks(0..total, CHUNK, |range| {
        range.filter(|&i| space.is_zero(&space.pow(&space.decode(i), k as u64))).count() as u64
    }))
}

/// `#Hom(G, GL_n(F))`: tuples of pairwise commuting invertible matrices with
/// `A_j^{p^{e_j}} = I`, one per cyclic factor `C_{p^{e_j}}` of `G`.
pub fn hom_count_bruteforce(g: &AbelianPGroup, field: &FiniteField, n: usize) -> Result<BigInt> {
    hom_count_with(g, field, n, Exec::default())
}

pub fn hom_count_with(g: &AbelianPGroup, field: &FiniteField, n: usize, exec: Exec) -> Result<BigInt> {
    let space = MatrixSpace::new(field, n);
    let factors = g.factors();
    if factors.is_empty() {
        space.count()?;
        return Ok(BigInt::from(1));
    }
    let max_e = factors[0];
    let id = space.identity();
    let pool = space.invertible_where(exec, |m| space.pow(m, g.p().pow(max_e)) == id)?;
    let candidates: Vec<Vec<usize>> = factors
        .iter()
        .map(|&e| (0..pool.len()).filter(|&i| space.pow(&pool[i], g.p().pow(e)) == id).collect())
        .collect();
    if factors.len() == 1 {
        let by_order = pool.iter().filter(|m| g.p().pow(factors[0]).is_multiple_of(space.order(m))).count();
        if by_order != candidates[0].len() {
            return Err(Error::Internal(format!(
                "power filter gives {} elements, order filter gives {by_order}",
                candidates[0].len()
            )));
        }
        return Ok(BigInt::from(by_order));
    }
    let counts = exec.map_slice(&candidates[0], |&first| {
        let mut chosen = vec![first];
        count_commuting(&space, &pool, &candidates, &mut chosen)
    });
    Ok(counts.into_iter().map(BigInt::from).sum())
}

fn count_commuting(space: &MatrixSpace<'_>, pool: &[Vec<u8>], candidates: &[Vec<usize>], chosen: &mut Vec<usize>) -> u64 {
    let depth = chosen.len();
    if depth == candidates.len() {
        return 1;
    }
    let mut total = 0;
    for &c in &candidates[depth] {
        let m = &pool[c];
        let commutes = chosen.iter().all(|&o| space.mul(m, &pool[o]) == space.mul(&pool[o], m));
        if commutes {
            chosen.push(c);
            total += count_commuting(space, pool, candidates, chosen);
            chosen.pop();
        }
    }
    total
}

/// Frobenius: `#{A ∈ GL_n(F) : A^m = I}` together with whether `m` divides it.
/// Only meaningful when `m` divides `|GL_n(F)|`.
pub fn frobenius_count(field: &FiniteField, n: usize, m: u64) -> Result<(u64, bool)> {
    let space = MatrixSpace::new(field, n);
    let id = space.identity();
    let count = space.invertible_where(Exec::default(), |a| space.pow(a, m) == id)?.len() as u64;
    Ok((count, count.is_multiple_of(m)))
}
