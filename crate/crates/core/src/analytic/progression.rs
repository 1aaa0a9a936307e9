//! Prime sums over residue classes:
//! `S(x;k,l) = sum 1/p - ln ln x / phi(k)` and `T(x;k,l) = sum ln p / p - ln x / phi(k)`,
//! with the sums over primes `p <= x`, `p = l (mod k)`.

use astro_float::BigFloat;
use num_integer::Integer;
use serde::Serialize;

use super::hp::{self, Hp};
use crate::arith::{is_prime_u64, PrimeSieve, SmallestFactorTable};
use crate::error::{Error, Result};

/// Primes up to `x` with `1/p` and `ln p / p` in fixed point.
pub struct PrimeTable {
    x: u64,
    primes: Vec<u64>,
    inv: Vec<u128>,
    log_over: Vec<u128>,
    ln_x: BigFloat,
    ln_ln_x: BigFloat,
}

impl PrimeTable {
    pub fn new(x: u64) -> Result<Self> {
        if x < 3 {
            return Err(Error::domain("prime sums need x >= 3"));
        }
        Self::from_sieve(&PrimeSieve::new(x)?, x)
    }

    /// Reuse a sieve whose limit is at least `x`.
    pub fn from_sieve(sieve: &PrimeSieve, x: u64) -> Result<Self> {
        use rayon::prelude::*;

        if x < 3 || sieve.limit() < x {
            return Err(Error::domain("prime sums need 3 <= x <= sieve limit"));
        }
        let primes: Vec<u64> = sieve.primes().take_while(|&p| p <= x).collect();
        let inv = primes.iter().map(|&p| (1u128 << hp::FRAC_BITS) / p as u128).collect();
        let log_over = primes
            .par_chunks(4096)
            .flat_map_iter(|chunk| {
                let mut h = Hp::new();
                chunk
                    .iter()
                    .map(|&p| {
                        let pf = hp::int(p);
                        hp::to_fixed(&hp::div(&h.ln(&pf), &pf))
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut h = Hp::new();
        let ln_x = h.ln(&hp::int(x));
        let ln_ln_x = h.ln(&ln_x);
        Ok(PrimeTable { x, primes, inv, log_over, ln_x, ln_ln_x })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn pi(&self) -> usize {
        self.primes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProgressionSumRecord {
    pub x: u64,
    pub k: u64,
    pub l: u64,
    /// `pi(x; k, l)`.
    pub pi: u64,
    #[serde(serialize_with = "hp::ser")]
    pub s: BigFloat,
    #[serde(serialize_with = "hp::ser")]
    pub t: BigFloat,
    /// Least prime `= l (mod k)`, possibly beyond `x`.
    pub p_kl: u64,
}

fn least_prime_in_class(k: u64, l: u64, from: u64) -> u64 {
    let mut n = if from <= l { l } else { from + (k + l - from % k) % k };
    loop {
        if is_prime_u64(n) {
            return n;
        }
        n += k;
    }
}

fn check_modulus(k: u64) -> Result<()> {
    if k < 2 || k > u32::MAX as u64 {
        return Err(Error::domain("modulus must satisfy 2 <= k < 2^32"));
    }
    Ok(())
}

/// Records for every residue `l` coprime to `k`, ascending in `l`.
pub fn progression_table(table: &PrimeTable, k: u64) -> Result<Vec<ProgressionSumRecord>> {
    check_modulus(k)?;
    let ku = k as usize;
    let mut inv = vec![0u128; ku];
    let mut log_over = vec![0u128; ku];
    let mut count = vec![0u64; ku];
    let mut first = vec![0u64; ku];
    for (i, &p) in table.primes.iter().enumerate() {
        let r = (p % k) as usize;
        inv[r] += table.inv[i];
        log_over[r] += table.log_over[i];
        if count[r] == 0 {
            first[r] = p;
        }
        count[r] += 1;
    }
    let phi = SmallestFactorTable::new(k as u32).totient(k as u32);
    let phi_f = hp::int(phi);
    let s_shift = hp::div(&table.ln_ln_x, &phi_f);
    let t_shift = hp::div(&table.ln_x, &phi_f);
    let mut out = Vec::with_capacity(phi as usize);
    for l in 1..k {
        if l.gcd(&k) != 1 {
            continue;
        }
        let r = l as usize;
        let p_kl = if count[r] > 0 { first[r] } else { least_prime_in_class(k, l, table.x + 1) };
        out.push(ProgressionSumRecord {
            x: table.x,
            k,
            l,
            pi: count[r],
            s: hp::sub(&hp::from_fixed(inv[r]), &s_shift),
            t: hp::sub(&hp::from_fixed(log_over[r]), &t_shift),
            p_kl,
        });
    }
    Ok(out)
}

/// The record for one class; `gcd(l, k) = 1` is required.
pub fn progression_sums(table: &PrimeTable, k: u64, l: u64) -> Result<ProgressionSumRecord> {
    check_modulus(k)?;
    if l.gcd(&k) != 1 {
        return Err(Error::domain(format!("gcd({l}, {k}) != 1")));
    }
    let l = l % k;
    let all = progression_table(table, k)?;
    Ok(all.into_iter().find(|r| r.l == l).expect("coprime class present"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropPomRow {
    #[serde(flatten)]
    pub record: ProgressionSumRecord,
    #[serde(serialize_with = "hp::ser")]
    pub bound: BigFloat,
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropPomReport {
    pub x: u64,
    pub k_max: u64,
    /// The constant the bound was checked with.
    #[serde(serialize_with = "hp::ser")]
    pub constant: BigFloat,
    /// Least constant for which no row violates the bound; a fitted value.
    #[serde(serialize_with = "hp::ser")]
    pub fitted_constant: BigFloat,
    pub violations: Vec<(u64, u64)>,
    #[serde(skip)]
    pub rows: Vec<PropPomRow>,
}

/// Check `|T(x;k,l)| <= ln p_kl / p_kl + C sqrt(k) ln k / phi(k)` for
/// `3 <= k <= k_max` and every `l` coprime to `k`.
pub fn check_prop_pom(table: &PrimeTable, k_max: u64, constant: &BigFloat, jobs: usize) -> Result<PropPomReport> {
    use rayon::prelude::*;

    if k_max < 3 {
        return Err(Error::domain("k_max must be at least 3"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
    let per_k = |k: u64| -> Result<(Vec<PropPomRow>, BigFloat)> {
        let mut h = Hp::new();
        let kf = hp::int(k);
        let phi = hp::int(SmallestFactorTable::new(k as u32).totient(k as u32));
        let scale = hp::div(&hp::mul(&hp::sqrt(&kf), &h.ln(&kf)), &phi);
        let mut fitted = hp::int(0);
        let mut rows = Vec::new();
        for record in progression_table(table, k)? {
            let pf = hp::int(record.p_kl);
            let main = hp::div(&h.ln(&pf), &pf);
            let bound = hp::add(&main, &hp::mul(constant, &scale));
            let abs_t = record.t.abs();
            let needed = hp::div(&hp::sub(&abs_t, &main), &scale);
            if hp::gt(&needed, &fitted) {
                fitted = needed;
            }
            let violation = hp::gt(&abs_t, &bound);
            rows.push(PropPomRow { record, bound, violation });
        }
        Ok((rows, fitted))
    };
    let parts: Vec<Result<(Vec<PropPomRow>, BigFloat)>> =
        pool.install(|| (3..=k_max).into_par_iter().map(per_k).collect());
    let mut rows = Vec::new();
    let mut fitted = hp::int(0);
    for part in parts {
        let (r, f) = part?;
        if hp::gt(&f, &fitted) {
            fitted = f;
        }
        rows.extend(r);
    }
    let violations = rows
        .iter()
        .filter(|r| r.violation)
        .map(|r| (r.record.k, r.record.l))
        .collect();
    Ok(PropPomReport {
        x: table.x,
        k_max,
        constant: constant.clone(),
        fitted_constant: fitted,
        violations,
        rows,
    })
}

/// `pi(x;k,l) phi(k) ln(x/k) / x`, to be compared with 2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BtRecord {
    pub x: u64,
    pub k: u64,
    pub l: u64,
    pub pi: u64,
    #[serde(serialize_with = "hp::ser")]
    pub ratio: BigFloat,
    pub exceeds: bool,
}

/// Brun-Titchmarsh ratios for every class coprime to `k`, counting primes up to
/// `x <= table.x()`.
pub fn bt_table(table: &PrimeTable, x: u64, k: u64) -> Result<Vec<BtRecord>> {
    check_modulus(k)?;
    if x <= k {
        return Err(Error::domain("Brun-Titchmarsh ratio needs x > k"));
    }
    if x > table.x {
        return Err(Error::domain(format!("x = {x} exceeds the prime table ({})", table.x)));
    }
    let mut count = vec![0u64; k as usize];
    for &p in table.primes.iter().take_while(|&&p| p <= x) {
        count[(p % k) as usize] += 1;
    }
    let mut h = Hp::new();
    let phi = SmallestFactorTable::new(k as u32).totient(k as u32);
    let factor = hp::div(
        &hp::mul(&hp::int(phi), &h.ln(&hp::div(&hp::int(x), &hp::int(k)))),
        &hp::int(x),
    );
    let two = hp::int(2);
    Ok((1..k)
        .filter(|l| l.gcd(&k) == 1)
        .map(|l| {
            let pi = count[l as usize];
            let ratio = hp::mul(&hp::int(pi), &factor);
            let exceeds = hp::gt(&ratio, &two);
            BtRecord { x, k, l, pi, ratio, exceeds }
        })
        .collect())
}

/// One Brun-Titchmarsh ratio.
pub fn bt_check(table: &PrimeTable, x: u64, k: u64, l: u64) -> Result<BtRecord> {
    if l.gcd(&k) != 1 {
        return Err(Error::domain(format!("gcd({l}, {k}) != 1")));
    }
    let l = l % k;
    Ok(bt_table(table, x, k)?.into_iter().find(|r| r.l == l).expect("coprime class"))
}
