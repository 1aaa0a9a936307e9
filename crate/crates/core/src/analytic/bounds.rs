//! The explicit threshold function of the first proof for `m >= m0`, and the
//! totient lower bound it relies on.

use astro_float::BigFloat;
use serde::Serialize;

use super::hp::{self, Hp};
use crate::arith::SmallestFactorTable;
use crate::error::{Error, Result};

/// Start of the range on which the threshold function is claimed increasing.
pub const THRESHOLD_START: &str = "405149999";

/// `f(x) = x - 69.2224 (ln x)^4 (1.78107242 ln ln x + 0.83918269)^2`.
pub fn first_proof_threshold(h: &mut Hp, x: &BigFloat) -> Result<BigFloat> {
    if !hp::gt(x, &hp::int(3)) && x.cmp(&hp::int(3)) != Some(0) {
        return Err(Error::domain("threshold function needs x >= 3"));
    }
    let c0 = h.parse("69.2224").expect("literal");
    let c1 = h.parse("1.78107242").expect("literal");
    let c2 = h.parse("0.83918269").expect("literal");
    let ln = h.ln(x);
    let lnln = h.ln(&ln);
    let ln2 = hp::mul(&ln, &ln);
    let inner = hp::add(&hp::mul(&c1, &lnln), &c2);
    let term = hp::mul(&hp::mul(&c0, &hp::mul(&ln2, &ln2)), &hp::mul(&inner, &inner));
    Ok(hp::sub(x, &term))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSample {
    #[serde(serialize_with = "hp::ser")]
    pub x: BigFloat,
    #[serde(serialize_with = "hp::ser")]
    pub f: BigFloat,
}

/// `f` at `n` log-spaced points from `lo` to `hi`, both included.
pub fn threshold_samples(lo: &BigFloat, hi: &BigFloat, n: usize) -> Result<Vec<ThresholdSample>> {
    if n < 2 || !hp::gt(hi, lo) {
        return Err(Error::domain("need n >= 2 and lo < hi"));
    }
    let mut h = Hp::new();
    let ln_lo = h.ln(lo);
    let step = hp::div(&hp::sub(&h.ln(hi), &ln_lo), &hp::int(n as u64 - 1));
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match i {
            0 => lo.clone(),
            _ if i == n - 1 => hi.clone(),
            _ => h.exp(&hp::add(&ln_lo, &hp::mul(&step, &hp::int(i as u64)))),
        };
        let f = first_proof_threshold(&mut h, &x)?;
        out.push(ThresholdSample { x, f });
    }
    Ok(out)
}

fn euler_gamma(h: &mut Hp) -> BigFloat {
    h.parse("0.5772156649").expect("literal")
}

/// `phi(m') > m' / (e^gamma ln ln m' + 2.50637 / ln ln m')` with `gamma = 0.5772156649`.
pub fn phi_lower_bound_check(m_prime: u64) -> Result<bool> {
    if m_prime < 3 {
        return Err(Error::domain("totient bound needs m' >= 3"));
    }
    let phi = SmallestFactorTable::new(m_prime.try_into().map_err(|_| Error::domain("m' too large"))?)
        .totient(m_prime as u32);
    let mut h = Hp::new();
    Ok(phi_bound_holds(&mut h, m_prime, phi))
}

fn phi_bound_holds(h: &mut Hp, m: u64, phi: u64) -> bool {
    let lnln = {
        let l = h.ln(&hp::int(m));
        h.ln(&l)
    };
    let eg = {
        let g = euler_gamma(h);
        h.exp(&g)
    };
    let c = h.parse("2.50637").expect("literal");
    let denom = hp::add(&hp::mul(&eg, &lnln), &hp::div(&c, &lnln));
    hp::gt(&hp::int(phi), &hp::div(&hp::int(m), &denom))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiScan {
    pub limit: u64,
    pub checked: u64,
    pub failures: Vec<u64>,
}

/// Check the totient bound for every `3 <= m' <= limit`. Values are screened in
/// double precision and re-checked at full precision when within `1e-9` relative.
pub fn phi_scan(limit: u64) -> Result<PhiScan> {
    if !(3..=u32::MAX as u64).contains(&limit) {
        return Err(Error::domain("phi scan limit must be in [3, 2^32)"));
    }
    let table = SmallestFactorTable::new(limit as u32);
    let mut h = Hp::new();
    let eg = 0.5772156649f64.exp();
    let mut failures = Vec::new();
    for m in 3..=limit {
        let phi = table.totient(m as u32);
        let lnln = (m as f64).ln().ln();
        let rhs = m as f64 / (eg * lnln + 2.50637 / lnln);
        let gap = (phi as f64 - rhs) / rhs;
        let holds = if gap.abs() < 1e-9 { phi_bound_holds(&mut h, m, phi) } else { gap > 0.0 };
        if !holds {
            failures.push(m);
        }
    }
    Ok(PhiScan { limit, checked: limit - 2, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_positive_at_start() {
        let mut h = Hp::new();
        let x = h.parse(THRESHOLD_START).unwrap();
        let f = first_proof_threshold(&mut h, &x).unwrap();
        assert!(f.is_positive());
        // f changes sign only a little below the start
        let x = h.parse("3.5e8").unwrap();
        let below = first_proof_threshold(&mut h, &x).unwrap();
        assert!(hp::is_negative(&below));
        // outside the claimed range; evaluated, not asserted
        let _ = first_proof_threshold(&mut h, &hp::int(1000)).unwrap();
        assert!(first_proof_threshold(&mut h, &hp::int(2)).is_err());
    }

    #[test]
    fn threshold_increasing_on_sample() {
        let mut h = Hp::new();
        let lo = h.parse(THRESHOLD_START).unwrap();
        let hi = h.parse("1e12").unwrap();
        let s = threshold_samples(&lo, &hi, 200).unwrap();
        assert!(s.windows(2).all(|w| hp::gt(&w[1].f, &w[0].f) && hp::gt(&w[1].x, &w[0].x)));
    }

    #[test]
    fn phi_examples() {
        assert!(phi_lower_bound_check(30_030).unwrap());
        assert!(phi_lower_bound_check(101).unwrap());
        assert!(phi_lower_bound_check(2).is_err());
        let scan = phi_scan(20_000).unwrap();
        assert!(scan.failures.is_empty());
        assert_eq!(scan.checked, 19_998);
    }
}
