//! Cyclotomic polynomials and the prime divisors of their values.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::factor::{factor_biguint, FactorBudget};
use super::sieve::SmallestFactorTable;
use crate::error::{Error, Result};

/// Coefficients of `Phi_m`, constant term first, from the Moebius product
/// `prod_{d | m} (X^d - 1)^{mu(m/d)}`.
pub fn cyclotomic_coeffs(m: u32) -> Result<Vec<BigInt>> {
    if m == 0 {
        return Err(Error::domain("cyclotomic index must be at least 1"));
    }
    let table = SmallestFactorTable::new(m);
    let divisors = table.divisors(m);
    let (mut up, mut down) = (Vec::new(), Vec::new());
    for &d in &divisors {
        match table.mobius(m / d) {
            1 => up.push(d as usize),
            -1 => down.push(d as usize),
            _ => {}
        }
    }

    // multiply by each (X^d - 1): c'_i = c_{i-d} - c_i
    let mut poly = vec![BigInt::one()];
    for d in up {
        let mut next = vec![BigInt::zero(); poly.len() + d];
        for (i, c) in poly.iter().enumerate() {
            next[i + d] += c;
            next[i] -= c;
        }
        poly = next;
    }
    // exact division by each (X^d - 1), from the top: q_{i-d} = p_i + q_i
    for d in down {
        let deg = poly.len() - 1;
        let mut quot = vec![BigInt::zero(); deg + 1 - d];
        for i in (d..=deg).rev() {
            let above = if i <= deg - d { quot[i].clone() } else { BigInt::zero() };
            quot[i - d] = &poly[i] + above;
        }
        debug_assert!((0..d).all(|i| {
            let qi = if i < quot.len() { quot[i].clone() } else { BigInt::zero() };
            poly[i] == -qi
        }));
        poly = quot;
    }
    Ok(poly)
}

/// `Phi_m(b)`, exact.
pub fn cyclotomic_value(m: u32, b: &BigInt) -> Result<BigInt> {
    let coeffs = cyclotomic_coeffs(m)?;
    Ok(coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * b + c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiLabel {
    /// `q | m`.
    Exceptional,
    /// `q = 1 (mod m)`.
    Split,
    /// Neither; never expected for `m >= 2`, kept so a violation is representable.
    Unexpected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiDivisor {
    #[serde(with = "crate::serde_dec")]
    pub prime: BigUint,
    pub exponent: u32,
    pub label: PhiLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiDivisorReport {
    pub m: u32,
    #[serde(with = "crate::serde_dec")]
    pub b: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub value: BigInt,
    pub divisors: Vec<PhiDivisor>,
    /// Composite parts left unsplit by the factoring budget.
    #[serde(with = "crate::serde_dec::vec")]
    pub unfactored: Vec<BigUint>,
}

impl PhiDivisorReport {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    pub fn exceptional(&self) -> impl Iterator<Item = &PhiDivisor> {
        self.divisors.iter().filter(|d| d.label == PhiLabel::Exceptional)
    }

    pub fn has_unexpected(&self) -> bool {
        self.divisors.iter().any(|d| d.label == PhiLabel::Unexpected)
    }

    /// Every prime factor of each unsplit cofactor `N` is `1 mod m`, shown
    /// without factoring: `b^m = 1 (mod N)` and `gcd(b^(m/r) - 1, N) = 1` for
    /// each prime `r | m` force `ord_q(b) = m` for every prime `q | N`.
    pub fn unfactored_split(&self) -> bool {
        let table = SmallestFactorTable::new(self.m);
        let radicals: Vec<u32> = table.factorize(self.m).into_iter().map(|(r, _)| r).collect();
        self.unfactored.iter().all(|n| {
            let modulus = BigInt::from(n.clone());
            let b = self.b.mod_floor(&modulus);
            let pow = |e: u32| -> BigInt { b.modpow(&BigInt::from(e), &modulus) };
            pow(self.m).is_one()
                && radicals.iter().all(|&r| {
                    let t: BigInt = (pow(self.m / r) - BigInt::one()).mod_floor(&modulus);
                    t.gcd(&modulus).is_one()
                })
        })
    }
}

/// Label every prime factor of `Phi_m(b)` as dividing `m` or being `1 mod m`.
pub fn classify_phi_divisors(m: u32, b: &BigInt, budget: FactorBudget) -> Result<PhiDivisorReport> {
    if m < 2 {
        return Err(Error::domain("classify_phi_divisors needs m >= 2"));
    }
    let value = cyclotomic_value(m, b)?;
    if value <= BigInt::one() {
        return Err(Error::domain(format!("Phi_{m}({b}) = {value} has no prime factors to classify")));
    }
    let fact = factor_biguint(value.magnitude(), budget);
    let modulus = BigUint::from(m);
    let divisors = fact
        .primes
        .into_iter()
        .map(|(prime, exponent)| {
            let label = if (&modulus % &prime).is_zero() {
                PhiLabel::Exceptional
            } else if (&prime % &modulus).to_u32() == Some(1 % m) {
                PhiLabel::Split
            } else {
                PhiLabel::Unexpected
            };
            PhiDivisor { prime, exponent, label }
        })
        .collect();
    Ok(PhiDivisorReport {
        m,
        b: b.clone(),
        value,
        divisors,
        unfactored: fact.unfactored,
    })
}
