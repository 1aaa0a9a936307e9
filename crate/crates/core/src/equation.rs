//! Exhaustive searches for `n! = (b^m - 1)/(b - 1) + a` with `m >= 3`, `b >= 2`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::repunit;
use crate::error::{Error, Result};

/// Largest `n` accepted by the searches.
pub const MAX_N: u64 = 300;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EquationInstance {
    pub n: u64,
    pub m: u32,
    #[serde(with = "crate::serde_dec")]
    pub b: BigInt,
    pub a: i64,
}

impl EquationInstance {
    /// Checked constructor: fails unless `n! - repunit(b, m) == a`.
    pub fn new(n: u64, m: u32, b: BigInt, a: i64) -> Result<Self> {
        let inst = EquationInstance { n, m, b, a };
        inst.verify()?;
        Ok(inst)
    }

    pub fn verify(&self) -> Result<()> {
        if self.n < 2 || self.m < 3 || self.b < BigInt::from(2) {
            return Err(Error::Verification(format!("out of range: {self:?}")));
        }
        let lhs = crate::arith::factorial(self.n);
        if lhs - repunit(&self.b, self.m) != BigInt::from(self.a) {
            return Err(Error::Verification(format!(
                "{}! - R({}, {}) != {}",
                self.n, self.b, self.m, self.a
            )));
        }
        Ok(())
    }
}

fn factorials(n_max: u64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(BigInt::one());
    for n in 1..=n_max {
        let next = &out[n as usize - 1] * n;
        out.push(next);
    }
    out
}

/// Least `b >= 2` with `repunit(b, m) >= target`, searching below `hi`.
fn lower_bound(target: &BigInt, m: u32, hi: &BigInt) -> BigInt {
    let mut lo = BigInt::from(2);
    let mut hi = hi.clone();
    while lo < hi {
        let mid: BigInt = (&lo + &hi) >> 1;
        if &repunit(&mid, m) >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Exclusive upper limit for `b` with `repunit(b, m) <= n`: since
/// `repunit(b, m) > b^(m-1)`, any solution has `b <= n^(1/(m-1))`.
fn b_ceiling(n: &BigInt, m: u32) -> BigInt {
    n.nth_root(m - 1) + 1
}

/// The unique `b >= 2` with `repunit(b, m) == n`, if any.
pub fn solve_repunit_eq(n: &BigInt, m: u32) -> Result<Option<BigInt>> {
    if *n < BigInt::from(3) {
        return Err(Error::domain("solve_repunit_eq needs N >= 3"));
    }
    if m < 2 {
        return Err(Error::domain("solve_repunit_eq needs m >= 2"));
    }
    let b = lower_bound(n, m, &b_ceiling(n, m));
    Ok((repunit(&b, m) == *n).then_some(b))
}

fn check_n_max(n_max: u64) -> Result<()> {
    if n_max > MAX_N {
        return Err(Error::domain(format!("n_max must be at most {MAX_N}")));
    }
    Ok(())
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::domain(format!("thread pool: {e}")))
}

/// All solutions with `2 <= n <= n_max` and `a` in `[a_min, a_max]`, sorted.
///
/// For each `(n, m)` the admissible `b` form an interval, located by binary search;
/// `m` runs while `repunit(2, m) <= n! - a_min`, which does not depend on any
/// heuristic bound.
pub fn search_range(a_min: i64, a_max: i64, n_max: u64, jobs: usize) -> Result<Vec<EquationInstance>> {
    use rayon::prelude::*;

    check_n_max(n_max)?;
    if a_min > a_max {
        return Err(Error::domain("empty a range"));
    }
    let facts = factorials(n_max);
    let per_n = |n: u64| -> Result<Vec<EquationInstance>> {
        let f = &facts[n as usize];
        let top = f - a_min;
        let bottom = f - a_max;
        let mut out = Vec::new();
        let mut m = 3u32;
        while repunit(&BigInt::from(2), m) <= top {
            let hi = b_ceiling(&top, m) + 1;
            let mut b = lower_bound(&bottom, m, &hi);
            loop {
                let r = repunit(&b, m);
                if r > top {
                    break;
                }
                let a = (f - r).to_i64().expect("within the a range");
                out.push(EquationInstance::new(n, m, b.clone(), a)?);
                b += 1;
            }
            m += 1;
        }
        Ok(out)
    };
    let found: Vec<Result<Vec<EquationInstance>>> =
        pool(jobs)?.install(|| (2..=n_max).into_par_iter().map(per_n).collect());
    let mut all = Vec::new();
    for r in found {
        all.extend(r?);
    }
    all.sort();
    Ok(all)
}

/// All solutions with `2 <= n <= n_max` for this `a`.
pub fn search_fixed_a(a: i64, n_max: u64, jobs: usize) -> Result<Vec<EquationInstance>> {
    search_range(a, a, n_max, jobs)
}

/// `9 | n!`, i.e. `n >= 6`; then `n! = b^2 + b + 1` is impossible, since
/// `b^2 + b + 1 mod 9` is one of 1, 3, 7.
pub fn check_m3_divisibility(n: u64) -> bool {
    crate::arith::legendre_valuation(n, 3).expect("3 is prime") >= 2
}

/// Heuristic search caps: `m_cap = ceil(c_m sqrt(n) (ln n)^2)` and
/// `b_floor = ceil(exp(c_b sqrt(n) / ln n))`. Used for ordering only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Box {
    pub m_cap: f64,
    pub b_floor: f64,
}

pub fn lemma1_box(n: u64, c_m: f64, c_b: f64) -> Result<Lemma1Box> {
    if n < 3 {
        return Err(Error::domain("lemma1_box needs n >= 3"));
    }
    let x = n as f64;
    let ln = x.ln();
    Ok(Lemma1Box {
        m_cap: (c_m * x.sqrt() * ln * ln).ceil(),
        b_floor: (c_b * x.sqrt() / ln).exp().ceil(),
    })
}
