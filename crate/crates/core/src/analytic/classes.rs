//! The residue set `C(m')` of the second proof for `m >= 6`, the exact quantity
//! `1 - ((1 + delta)/m' + |C|/phi(m'))`, the excluded residue, and rough primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::hp::{self, Hp};
use crate::arith::{factor_u64, PrimeSieve};
use crate::error::{Error, Result};

/// `c` is in `C(m')` iff `gcd(c, m') = 1` and some divisor `d >= 3` of `m'`
/// divides `c - 1`, i.e. `gcd(c - 1, m') >= 3`.
pub fn in_class_set(c: u64, m_prime: u64) -> bool {
    c.gcd(&m_prime) == 1 && (c - 1).gcd(&m_prime) >= 3
}

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSetReport {
    pub m_prime: u64,
    /// `gcd(m', 2) - 1`.
    pub delta: u64,
    pub phi: u64,
    /// Residues in `[1, m']`, ascending.
    pub c: Vec<u64>,
    #[serde(serialize_with = "ser_rational")]
    pub lhs6: BigRational,
}

pub fn class_set_c(m_prime: u64) -> Result<ClassSetReport> {
    if m_prime < 2 {
        return Err(Error::domain("class set needs m' >= 2"));
    }
    let c: Vec<u64> = (1..=m_prime).filter(|&c| in_class_set(c, m_prime)).collect();
    let phi = totient(m_prime);
    let delta = m_prime.gcd(&2) - 1;
    let r = |n: u64, d: u64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let lhs6 = r(1, 1) - (r(1 + delta, m_prime) + r(c.len() as u64, phi));
    Ok(ClassSetReport { m_prime, delta, phi, c, lhs6 })
}

fn totient(n: u64) -> u64 {
    factor_u64(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExcludedResidue {
    pub m_prime: u64,
    /// `m' = 2^s m0` with `m0` odd.
    pub s: u32,
    pub m0: u64,
    pub a: u64,
    pub coprime: bool,
    /// `1 <= a < m' - 1`.
    pub in_range: bool,
    pub outside_c: bool,
}

impl ExcludedResidue {
    pub fn verified(&self) -> bool {
        self.coprime && self.in_range && self.outside_c
    }
}

/// The case-defined residue and the outcome of each of its checks.
pub fn excluded_residue_report(m_prime: u64) -> Result<ExcludedResidue> {
    if m_prime < 2 {
        return Err(Error::domain("excluded residue needs m' >= 2"));
    }
    let s = m_prime.trailing_zeros();
    let m0 = m_prime >> s;
    let a = match (s, m0 % 4) {
        (0, _) => 2,
        (_, 1) | (1, 3) => m0 + 2,
        _ => 3 * m0 + 2,
    };
    let in_range = a >= 1 && a + 1 < m_prime;
    let coprime = a.gcd(&m_prime) == 1;
    let outside_c = !in_class_set(a % m_prime, m_prime) || a % m_prime == 0;
    Ok(ExcludedResidue { m_prime, s, m0, a, coprime, in_range, outside_c })
}

/// As [`excluded_residue_report`], but any failed check is an error.
pub fn excluded_residue(m_prime: u64) -> Result<ExcludedResidue> {
    let r = excluded_residue_report(m_prime)?;
    if !r.verified() {
        return Err(Error::Verification(format!(
            "excluded residue {} for m' = {} fails: coprime={}, 1 <= a < m'-1: {}, not in C: {}",
            r.a, m_prime, r.coprime, r.in_range, r.outside_c
        )));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoughPrimeCount {
    pub m_prime: u64,
    /// `(ln m')^3`.
    #[serde(serialize_with = "hp::ser")]
    pub threshold: astro_float::BigFloat,
    /// Primes `q` in `(m'/2, m']` with every prime factor of `(q - 1)/2` at least the threshold.
    pub pi1: u64,
    /// Those of them whose residue lies in `C(m')`.
    pub overlap: u64,
}

pub fn rough_prime_count(m_prime: u64) -> Result<RoughPrimeCount> {
    if m_prime < 100 {
        return Err(Error::domain("rough prime count needs m' >= 100"));
    }
    let mut h = Hp::new();
    let ln = h.ln(&hp::int(m_prime));
    let threshold = hp::mul(&hp::mul(&ln, &ln), &ln);
    let sieve = PrimeSieve::new(m_prime)?;
    let (mut pi1, mut overlap) = (0, 0);
    for q in sieve.primes().filter(|&q| 2 * q > m_prime && q > 2) {
        let rough = factor_u64((q - 1) / 2)
            .iter()
            .all(|&(r, _)| !hp::gt(&threshold, &hp::int(r)));
        if rough {
            pi1 += 1;
            if in_class_set(q % m_prime, m_prime) && q != m_prime {
                overlap += 1;
            }
        }
    }
    Ok(RoughPrimeCount { m_prime, threshold, pi1, overlap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, Zero};

    fn brute_c(m: u64) -> Vec<u64> {
        let divisors: Vec<u64> = (3..=m).filter(|d| m.is_multiple_of(*d)).collect();
        (1..=m)
            .filter(|&c| c.gcd(&m) == 1 && divisors.iter().any(|d| (c - 1) % d == 0))
            .collect()
    }

    #[test]
    fn examples() {
        let r = class_set_c(3).unwrap();
        assert_eq!(r.c, vec![1]);
        assert_eq!(r.lhs6, BigRational::new(1.into(), 6.into()));
        let r = class_set_c(4).unwrap();
        assert_eq!((r.c.clone(), r.delta), (vec![1], 1));
        assert!(r.lhs6.is_zero());
        assert_eq!(class_set_c(2).unwrap().c, Vec::<u64>::new());
        assert!(class_set_c(1).is_err());
    }

    #[test]
    fn matches_divisor_definition() {
        for m in 2..400 {
            assert_eq!(class_set_c(m).unwrap().c, brute_c(m), "m'={m}");
        }
    }

    #[test]
    fn positivity_range() {
        assert!(class_set_c(3).unwrap().lhs6.is_positive());
        for m in 5..=1000 {
            assert!(class_set_c(m).unwrap().lhs6.is_positive(), "m'={m}");
        }
    }

    #[test]
    fn minus_one_never_in_c() {
        for m in 2..=10_000u64 {
            assert!(!in_class_set(m - 1, m), "m'={m}");
        }
    }

    #[test]
    fn excluded_residue_cases() {
        assert_eq!(excluded_residue(1001).unwrap().a, 2);
        let six = excluded_residue_report(6).unwrap();
        assert_eq!(six.a, 5);
        assert!(six.outside_c && !six.in_range);
        let twelve = excluded_residue_report(12).unwrap();
        assert_eq!((twelve.a, twelve.coprime, twelve.in_range), (11, true, false));
        assert!(excluded_residue(12).is_err());
        // the checks fail only at the small boundary cases
        let failing: Vec<u64> =
            (2..=20_000).filter(|&m| !excluded_residue_report(m).unwrap().verified()).collect();
        assert_eq!(failing, vec![2, 3, 4, 6, 12]);
    }

    #[test]
    fn lhs6_lower_bound_where_residue_verifies() {
        for m in 5..=1000u64 {
            if excluded_residue_report(m).unwrap().verified() {
                let r = class_set_c(m).unwrap();
                let floor = BigRational::new(2.into(), BigInt::from(m * (m - 1)));
                assert!(r.lhs6 >= floor, "m'={m}");
            }
        }
    }

    #[test]
    fn rough_primes() {
        let r = rough_prime_count(10_000).unwrap();
        assert!(r.pi1 > 0);
        assert!(r.overlap <= r.pi1);
        assert!(rough_prime_count(99).is_err());
    }
}
