//! Local obstructions to `n! = Phi_p(b) + a`.
//!
//! Since `q | n!` for every prime `q <= n`, a prime `q` at which
//! `Phi_p(X) + a` has no root rules out the pair `(a, p)` for large `n`. The scan
//! over odd `a` collects the pairs for which no such `q` is found.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::modular::{add_mod, mul_mod, reduce_i64};
use crate::arith::{factor_u64, is_prime_u64, repunit_mod, trial_primes, PrimeSieve};
use crate::error::{Error, Result};
use crate::poly::{build_p_i64, has_root_mod_q, PolyFq};

/// Primes `p >= 7` dividing `|a| - 1` or `a`, other than `p = -a`, ascending.
pub fn candidate_primes(a: i64) -> Result<Vec<u64>> {
    let abs = a.unsigned_abs();
    if abs < 2 {
        return Err(Error::domain("candidate primes need |a| >= 2"));
    }
    let mut set = BTreeSet::new();
    for n in [abs - 1, abs] {
        set.extend(factor_u64(n).into_iter().map(|(p, _)| p).filter(|&p| p >= 7));
    }
    if a < 0 {
        set.remove(&abs);
    }
    Ok(set.into_iter().collect())
}

/// `q` together with `Phi_p(k) + a mod q` for every `k mod q`, all nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionCertificate {
    pub a: i64,
    pub p: u64,
    pub q: u64,
    /// Indexed by `k = 0, ..., q - 1`.
    pub residues: Vec<u64>,
}

impl ObstructionCertificate {
    /// Replays the table by Horner evaluation of `X^(p-1) + ... + X + 1 + a`,
    /// independent of the closed repunit formula used to build it.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Verification(msg));
        if !is_prime_u64(self.p) || !is_prime_u64(self.q) {
            return fail(format!("p = {} and q = {} must be prime", self.p, self.q));
        }
        if self.q > self.a.unsigned_abs() {
            return fail(format!("q = {} exceeds |a| = {}", self.q, self.a.unsigned_abs()));
        }
        if self.residues.len() as u64 != self.q {
            return fail(format!("expected {} residues, got {}", self.q, self.residues.len()));
        }
        let q = self.q;
        let shift = reduce_i64(self.a, q);
        for (k, &r) in self.residues.iter().enumerate() {
            let mut acc = 0u64;
            for _ in 0..self.p {
                acc = add_mod(mul_mod(acc, k as u64, q), 1, q);
            }
            let value = add_mod(acc, shift, q);
            if value != r {
                return fail(format!("residue at k = {k} is {value}, certificate says {r}"));
            }
            if value == 0 {
                return fail(format!("k = {k} is a root mod {q}"));
            }
        }
        Ok(())
    }
}

fn residue_table(a: i64, p: u64, q: u64) -> Option<Vec<u64>> {
    let shift = reduce_i64(a, q);
    let mut residues = Vec::with_capacity(q as usize);
    for k in 0..q {
        let v = if k == 1 % q {
            let direct = reduce_i64(a + p as i64, q);
            debug_assert_eq!(
                direct,
                add_mod(repunit_mod(k as i64, p, q).expect("prime q"), shift, q)
            );
            direct
        } else {
            add_mod(crate::arith::repunit_mod_unchecked(k as i64, p, q), shift, q)
        };
        if v == 0 {
            return None;
        }
        residues.push(v);
    }
    Some(residues)
}

/// The least prime `q <= min(|a|, q_bound)` at which `Phi_p(X) + a` has no root.
pub fn find_obstruction(a: i64, p: u64, q_bound: u64) -> Result<Option<ObstructionCertificate>> {
    if p < 7 || !is_prime_u64(p) {
        return Err(Error::domain(format!("p = {p} must be a prime >= 7")));
    }
    let limit = q_bound.min(a.unsigned_abs());
    for &q in trial_primes(limit).iter() {
        if q > limit {
            break;
        }
        if let Some(residues) = residue_table(a, p, q) {
            return Ok(Some(ObstructionCertificate { a, p, q, residues }));
        }
    }
    Ok(None)
}

/// Evidence that a pair survives: a root `k` of `Phi_p(X) + a` modulo every
/// prime `q <= min(|a|, q_bound)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivalWitness {
    pub a: i64,
    pub p: u64,
    pub q_bound: u64,
    /// `(q, k)` pairs, ascending in `q`.
    pub roots: Vec<(u64, u64)>,
}

impl SurvivalWitness {
    pub fn verify(&self) -> Result<()> {
        let limit = self.q_bound.min(self.a.unsigned_abs());
        let expected: Vec<u64> = trial_primes(limit).iter().copied().filter(|&q| q <= limit).collect();
        let got: Vec<u64> = self.roots.iter().map(|r| r.0).collect();
        if got != expected {
            return Err(Error::Verification("witness does not cover every prime".into()));
        }
        for &(q, k) in &self.roots {
            let mut acc = 0u64;
            for _ in 0..self.p {
                acc = add_mod(mul_mod(acc, k % q, q), 1, q);
            }
            if add_mod(acc, reduce_i64(self.a, q), q) != 0 {
                return Err(Error::Verification(format!("{k} is not a root mod {q}")));
            }
        }
        Ok(())
    }
}

/// A root modulo each prime up to `min(|a|, q_bound)`, or `None` if some prime has none.
pub fn survival_witness(a: i64, p: u64, q_bound: u64) -> Result<Option<SurvivalWitness>> {
    if p < 7 || !is_prime_u64(p) {
        return Err(Error::domain(format!("p = {p} must be a prime >= 7")));
    }
    let limit = q_bound.min(a.unsigned_abs());
    let mut roots = Vec::new();
    for &q in trial_primes(limit).iter().filter(|&&q| q <= limit) {
        let shift = reduce_i64(a, q);
        let root = (0..q).find(|&k| {
            add_mod(crate::arith::repunit_mod_unchecked(k as i64, p, q), shift, q) == 0
        });
        match root {
            Some(k) => roots.push((q, k)),
            None => return Ok(None),
        }
    }
    Ok(Some(SurvivalWitness { a, p, q_bound, roots }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    Survivor,
    Obstructed,
    Fiat,
    Discrepancy,
}

/// One output line of a scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub a: i64,
    pub p: u64,
    pub status: PairStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residues: Option<Vec<u64>>,
    /// `(q, k)` roots backing a survivor reported as a discrepancy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<(u64, u64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ScanRecord {
    fn bare(a: i64, p: u64, status: PairStatus) -> Self {
        ScanRecord { a, p, status, q: None, residues: None, roots: None, note: None }
    }

    fn obstructed(cert: ObstructionCertificate, status: PairStatus) -> Self {
        ScanRecord {
            a: cert.a,
            p: cert.p,
            status,
            q: Some(cert.q),
            residues: Some(cert.residues),
            roots: None,
            note: None,
        }
    }

    /// Whether the record carries replayable evidence: an obstruction
    /// certificate, or a survival witness for primes up to `q_bound`.
    pub fn is_certified(&self, q_bound: u64) -> bool {
        if let Some(c) = self.certificate() {
            return c.verify().is_ok();
        }
        match &self.roots {
            Some(roots) => {
                let w = SurvivalWitness { a: self.a, p: self.p, q_bound, roots: roots.clone() };
                w.verify().is_ok()
            }
            None => false,
        }
    }

    pub fn certificate(&self) -> Option<ObstructionCertificate> {
        Some(ObstructionCertificate {
            a: self.a,
            p: self.p,
            q: self.q?,
            residues: self.residues.clone()?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanParams {
    pub a_max: u64,
    pub q_bound: u64,
}

impl Default for ScanParams {
    fn default() -> Self {
        ScanParams { a_max: 100_000, q_bound: 100 }
    }
}

/// Result of [`reproduce_s0`]: every candidate pair with its status, sorted by `(a, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorSet {
    pub params: ScanParams,
    pub records: Vec<ScanRecord>,
}

impl SurvivorSet {
    fn pairs_with(&self, status: PairStatus) -> Vec<(i64, u64)> {
        self.records
            .iter()
            .filter(|r| r.status == status)
            .map(|r| (r.a, r.p))
            .collect()
    }

    /// Pairs found by the scan itself.
    pub fn discovered(&self) -> Vec<(i64, u64)> {
        self.pairs_with(PairStatus::Survivor)
    }

    /// The `(-p, p)` family.
    pub fn fiat(&self) -> Vec<(i64, u64)> {
        self.pairs_with(PairStatus::Fiat)
    }

    /// Discovered and fiat pairs together, sorted.
    pub fn pairs(&self) -> Vec<(i64, u64)> {
        let mut all = self.discovered();
        all.extend(self.fiat());
        all.sort_unstable();
        all
    }

    pub fn record(&self, a: i64, p: u64) -> Option<&ScanRecord> {
        self.records
            .binary_search_by(|r| (r.a, r.p).cmp(&(a, p)))
            .ok()
            .map(|i| &self.records[i])
    }
}

fn scan_a(a: i64, q_bound: u64, out: &mut Vec<ScanRecord>) {
    for p in candidate_primes(a).expect("|a| >= 3") {
        match find_obstruction(a, p, q_bound).expect("p >= 7 prime") {
            Some(cert) => out.push(ScanRecord::obstructed(cert, PairStatus::Obstructed)),
            None => out.push(ScanRecord::bare(a, p, PairStatus::Survivor)),
        }
    }
}

const BLOCK: i64 = 2048;

/// Scan odd `a` with `3 <= |a| <= a_max` over all candidate primes, and add the
/// `(-p, p)` pairs for primes `7 <= p <= a_max`.
///
/// The output does not depend on `jobs`.
pub fn reproduce_s0(params: ScanParams, jobs: usize) -> Result<SurvivorSet> {
    use rayon::prelude::*;

    if params.a_max < 7 {
        return Err(Error::domain("a_max must be at least 7"));
    }
    if params.a_max > i64::MAX as u64 / 2 {
        return Err(Error::domain("a_max too large"));
    }
    let a_max = params.a_max as i64;
    let starts: Vec<i64> = (-a_max..=a_max).step_by(BLOCK as usize).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
    let blocks: Vec<Vec<ScanRecord>> = pool.install(|| {
        starts
            .par_iter()
            .map(|&start| {
                let mut out = Vec::new();
                for a in start..(start + BLOCK).min(a_max + 1) {
                    if a % 2 != 0 && a.unsigned_abs() >= 3 {
                        scan_a(a, params.q_bound, &mut out);
                    }
                }
                out
            })
            .collect()
    });
    let mut records: Vec<ScanRecord> = blocks.into_iter().flatten().collect();
    let sieve = PrimeSieve::new(params.a_max)?;
    records.extend(
        sieve
            .primes()
            .filter(|&p| p >= 7)
            .map(|p| ScanRecord::bare(-(p as i64), p, PairStatus::Fiat)),
    );
    records.sort_by_key(|r| (r.a, r.p));
    Ok(SurvivorSet { params, records })
}

/// Compare a scan with a reference list of pairs.
///
/// Emits one `Discrepancy` record per listed pair that the scan does not keep,
/// with an obstruction certificate where one exists, and one per kept pair
/// that the list omits, with a survival witness.
pub fn diff_against(scan: &SurvivorSet, listed: &[(i64, u64)]) -> Result<Vec<ScanRecord>> {
    let kept: BTreeSet<(i64, u64)> = scan.pairs().into_iter().collect();
    let listed_set: BTreeSet<(i64, u64)> = listed.iter().copied().collect();
    let mut out = Vec::new();
    for &(a, p) in &listed_set {
        if kept.contains(&(a, p)) {
            continue;
        }
        let mut rec = match scan.record(a, p) {
            Some(r) if r.status == PairStatus::Obstructed => {
                let mut r = r.clone();
                r.note = Some("listed pair is obstructed".into());
                r
            }
            _ => {
                let note = if a.unsigned_abs() > scan.params.a_max {
                    "listed pair lies outside the scanned range"
                } else {
                    "listed pair is not in the candidate set"
                };
                let cert = if p >= 7 && is_prime_u64(p) {
                    find_obstruction(a, p, scan.params.q_bound)?
                } else {
                    None
                };
                let mut r = match cert {
                    Some(c) => ScanRecord::obstructed(c, PairStatus::Discrepancy),
                    None => ScanRecord::bare(a, p, PairStatus::Discrepancy),
                };
                r.note = Some(note.into());
                r
            }
        };
        rec.status = PairStatus::Discrepancy;
        out.push(rec);
    }
    for &(a, p) in kept.difference(&listed_set) {
        let mut r = ScanRecord::bare(a, p, PairStatus::Discrepancy);
        r.note = Some("survivor missing from the list".into());
        r.roots = survival_witness(a, p, scan.params.q_bound)?.map(|w| w.roots);
        out.push(r);
    }
    out.sort_by_key(|r| (r.a, r.p));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LeastRootless {
    Found { q: u64 },
    NotBelow { ceiling: u64 },
}

/// The least prime `q` modulo which `Phi_p(X) + a` has no root, searched up to `ceiling`.
pub fn least_rootless_prime(p: u64, a: i64, ceiling: u64) -> Result<LeastRootless> {
    let f = build_p_i64(p, a)?;
    let mut q = 2;
    while q <= ceiling {
        if is_prime_u64(q) && !has_root_mod_q(&PolyFq::reduce(&f, q)) {
            return Ok(LeastRootless::Found { q });
        }
        q += 1;
    }
    Ok(LeastRootless::NotBelow { ceiling })
}

/// Rootless primes up to `x` against all primes up to `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootlessDensity {
    pub p: u64,
    pub a: i64,
    pub x: u64,
    pub rootless: u64,
    pub primes: u64,
}

impl RootlessDensity {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.rootless, self.primes)
    }

    pub fn value(&self) -> f64 {
        self.rootless as f64 / self.primes as f64
    }
}

pub fn rootless_density(p: u64, a: i64, x: u64) -> Result<RootlessDensity> {
    if x < 100 {
        return Err(Error::domain("density needs x >= 100"));
    }
    rootless_density_in(&PrimeSieve::new(x)?, p, a, x)
}

/// As [`rootless_density`], reusing a sieve whose limit is at least `x`.
pub fn rootless_density_in(sieve: &PrimeSieve, p: u64, a: i64, x: u64) -> Result<RootlessDensity> {
    if x < 100 || sieve.limit() < x {
        return Err(Error::domain("density needs 100 <= x <= sieve limit"));
    }
    let f = build_p_i64(p, a)?;
    let mut rootless = 0;
    let mut primes = 0;
    for q in sieve.primes().take_while(|&q| q <= x) {
        primes += 1;
        if !has_root_mod_q(&PolyFq::reduce(&f, q)) {
            rootless += 1;
        }
    }
    Ok(RootlessDensity { p, a, x, rootless, primes })
}

/// An integer root of `Phi_p(X) + a`, if one exists.
pub fn integer_root(p: u64, a: i64) -> Result<Option<BigInt>> {
    let f = build_p_i64(p, a)?;
    Ok(crate::poly::integer_roots(&f, Default::default())?.into_iter().next())
}
