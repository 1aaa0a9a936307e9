//! Polynomials over a prime field: squarefree and distinct-degree factorization,
//! used only to read off factor-degree patterns.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{require_prime, PolyZ};
use crate::arith::modular::{inv_mod_prime, mul_mod};
use crate::error::{Error, Result};

/// Polynomial over `F_q`, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFq {
    q: u64,
    c: Vec<u64>,
}

impl PolyFq {
    pub fn new(q: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= q;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyFq { q, c }
    }

    pub fn reduce(f: &PolyZ, q: u64) -> Self {
        let qb = BigInt::from(q);
        let c = f
            .coeffs()
            .iter()
            .map(|x| {
                let r = ((x % &qb) + &qb) % &qb;
                r.to_u64().expect("residue fits")
            })
            .collect();
        Self::new(q, c)
    }

    fn x(q: u64) -> Self {
        Self::new(q, vec![0, 1])
    }

    fn one(q: u64) -> Self {
        Self::new(q, vec![1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.q) + c) % self.q)
    }

    fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = inv_mod_prime(lead, self.q);
                Self::new(self.q, self.c.iter().map(|&x| mul_mod(x, inv, self.q)).collect())
            }
        }
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let q = self.q;
        Self::new(
            q,
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).copied().unwrap_or(0);
                    let b = other.c.get(i).copied().unwrap_or(0);
                    (a + q - b) % q
                })
                .collect(),
        )
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(self.q, vec![]);
        }
        let q = self.q;
        let mut out = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, q)) % q;
            }
        }
        Self::new(q, out)
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let q = self.q;
        let dd = d.degree().expect("division by zero polynomial");
        if self.c.len() <= dd {
            return (Self::new(q, vec![]), self.clone());
        }
        let inv = inv_mod_prime(*d.c.last().unwrap(), q);
        let mut r = self.c.clone();
        let mut quot = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let t = mul_mod(r[i], inv, q);
            if t == 0 {
                continue;
            }
            quot[i - dd] = t;
            for (j, &dc) in d.c.iter().enumerate() {
                let k = i - dd + j;
                r[k] = (r[k] + q - mul_mod(t, dc, q)) % q;
            }
        }
        (Self::new(q, quot), Self::new(q, r))
    }

    fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn derivative(&self) -> Self {
        let q = self.q;
        Self::new(
            q,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % q, q))
                .collect(),
        )
    }

    fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.q).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// For `f` a polynomial in `X^q`, the `g` with `g(X)^q = f(X)`.
    fn qth_root(&self) -> Self {
        let q = self.q as usize;
        // a^q = a in F_q, so coefficients pass through unchanged
        Self::new(self.q, self.c.iter().step_by(q).copied().collect())
    }

    fn is_one(&self) -> bool {
        self.c == [1]
    }
}

/// Squarefree decomposition of a monic polynomial: `(factor, multiplicity)` pairs.
fn squarefree_decomposition(f: &PolyFq) -> Vec<(PolyFq, u32)> {
    let mut out = Vec::new();
    let q = f.q;
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while !w.is_one() && !w.is_zero() {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0;
        if fac.deg() > 0 {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if c.deg() > 0 {
        let root = c.qth_root().monic();
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * q as u32));
        }
    }
    out
}

/// Degrees of the irreducible factors of a squarefree monic polynomial.
fn distinct_degree(f: &PolyFq) -> Vec<usize> {
    let q = f.q;
    let mut degrees = Vec::new();
    let mut g = f.clone();
    let x = PolyFq::x(q);
    let mut h = x.rem(&g);
    let mut d = 1;
    while g.deg() >= 2 * d {
        h = h.pow_mod(q, &g);
        let t = h.sub(&x).gcd(&g);
        if t.deg() > 0 {
            degrees.extend(std::iter::repeat_n(d, t.deg() / d));
            g = g.div_rem(&t).0;
            h = h.rem(&g);
        }
        d += 1;
    }
    if g.deg() > 0 {
        degrees.push(g.deg());
    }
    degrees
}

/// Factor degrees of `f mod q`, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePattern {
    pub q: u64,
    /// Ascending, each irreducible factor listed once per multiplicity.
    pub degrees: Vec<usize>,
    pub squarefree: bool,
}

impl DegreePattern {
    /// Degrees reachable as a sum of a sub-multiset of the factor degrees.
    pub fn subset_sums(&self) -> Vec<bool> {
        let total: usize = self.degrees.iter().sum();
        let mut reach = vec![false; total + 1];
        reach[0] = true;
        for &d in &self.degrees {
            for s in (d..=total).rev() {
                if reach[s - d] {
                    reach[s] = true;
                }
            }
        }
        reach
    }

    pub fn has_linear_factor(&self) -> bool {
        self.degrees.first() == Some(&1)
    }
}

pub fn factor_degrees_mod_q(f: &PolyZ, q: u64) -> Result<DegreePattern> {
    require_prime(q)?;
    let lead = f
        .leading()
        .ok_or_else(|| Error::domain("factor degrees of the zero polynomial"))?;
    if (lead % BigInt::from(q)) == BigInt::from(0) {
        return Err(Error::domain(format!("{q} divides the leading coefficient")));
    }
    let fq = PolyFq::reduce(f, q).monic();
    let mut degrees = Vec::new();
    let mut squarefree = true;
    for (part, mult) in squarefree_decomposition(&fq) {
        if mult > 1 {
            squarefree = false;
        }
        for d in distinct_degree(&part) {
            degrees.extend(std::iter::repeat_n(d, mult as usize));
        }
    }
    degrees.sort_unstable();
    debug_assert_eq!(degrees.iter().sum::<usize>(), fq.deg());
    Ok(DegreePattern { q, degrees, squarefree })
}

/// Whether `f` has a root in `F_q`, via `gcd(f, X^q - X)`.
pub fn has_root_mod_q(f: &PolyFq) -> bool {
    match f.degree() {
        None => true,
        Some(0) => false,
        Some(_) => {
            let q = f.q;
            let g = f.monic();
            let xq = PolyFq::x(q).pow_mod(q, &g);
            xq.sub(&PolyFq::x(q)).gcd(&g).deg() > 0
        }
    }
}
