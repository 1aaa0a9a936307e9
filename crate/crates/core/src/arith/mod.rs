//! Exact and modular arithmetic primitives: sieving, factorial valuations,
//! repunits, multiplicative orders and cyclotomic values.

pub mod cyclotomic;
pub mod factor;
pub mod modular;
pub mod sieve;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use cyclotomic::{
    classify_phi_divisors, cyclotomic_coeffs, cyclotomic_value, PhiDivisor, PhiDivisorReport,
    PhiLabel,
};
pub use factor::{factor_biguint, factor_u64, is_prime_u64, FactorBudget, Factorization};
pub use sieve::{trial_primes, PrimeSieve, SmallestFactorTable};

use modular::{inv_mod_prime, mul_mod, pow_mod, reduce_i64};

fn require_prime(q: u64) -> Result<()> {
    if is_prime_u64(q) {
        Ok(())
    } else {
        Err(Error::domain(format!("{q} is not prime")))
    }
}

/// The exponent of the prime `q` in `n!`, by Legendre's formula.
pub fn legendre_valuation(n: u64, q: u64) -> Result<u64> {
    require_prime(q)?;
    let mut total = 0;
    let mut m = n;
    while m >= q {
        m /= q;
        total += m;
    }
    Ok(total)
}

/// `1 + b + ... + b^(m-1)`, exact, for any integer base.
///
/// `b = 1` gives `m`; negative and zero bases are allowed.
pub fn repunit(b: &BigInt, m: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for _ in 0..m {
        acc = acc * b + 1;
    }
    acc
}

pub fn repunit_i64(b: i64, m: u32) -> BigInt {
    repunit(&BigInt::from(b), m)
}

/// `(b^m - 1)/(b - 1) mod q` without forming the integer.
///
/// When `b = 1 (mod q)` every term is 1 and the value is `m mod q`.
pub fn repunit_mod(b: i64, m: u64, q: u64) -> Result<u64> {
    require_prime(q)?;
    Ok(repunit_mod_unchecked(b, m, q))
}

#[inline]
pub(crate) fn repunit_mod_unchecked(b: i64, m: u64, q: u64) -> u64 {
    let br = reduce_i64(b, q);
    if br == 1 % q {
        return m % q;
    }
    let num = (pow_mod(br, m, q) + q - 1) % q;
    mul_mod(num, inv_mod_prime((br + q - 1) % q, q), q)
}

/// Least `d >= 1` with `b^d = 1 (mod q)`; always divides `q - 1`.
pub fn multiplicative_order(b: i64, q: u64) -> Result<u64> {
    require_prime(q)?;
    let br = reduce_i64(b, q);
    if br == 0 {
        return Err(Error::domain(format!("{q} divides {b}; order undefined")));
    }
    let mut order = q - 1;
    for (p, _) in factor_u64(q - 1) {
        while order.is_multiple_of(p) && pow_mod(br, order / p, q) == 1 {
            order /= p;
        }
    }
    Ok(order)
}

/// The `p`-adic valuation of a nonzero integer.
pub fn int_valuation(x: &BigInt, p: u64) -> Result<u64> {
    require_prime(p)?;
    if x.is_zero() {
        return Err(Error::domain("valuation of zero is infinite"));
    }
    if p == 2 {
        return Ok(x.trailing_zeros().unwrap_or(0));
    }
    let mut v = 0;
    let mut m = x.abs();
    let pb = BigInt::from(p);
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Ok(v);
        }
        m = q;
        v += 1;
    }
}

/// `nu_2` of the base-`b` repunit of length `m`, from its product structure.
///
/// Writing `m = 2^r t` with `t` odd, the repunit is `prod_{i<r} (b^(2^i) + 1)` times
/// a sum of `t` odd terms, which is odd. Each factor's valuation is read off modulo
/// `2^64`; for `i >= 1` the factor is `2 mod 4`, and for `i = 0` it is `b + 1`.
pub fn nu2_repunit(b: u64, m: u64) -> Result<u64> {
    if b < 2 || m < 2 {
        return Err(Error::domain(format!("nu2_repunit needs b >= 2, m >= 2 (got {b}, {m})")));
    }
    if b.is_multiple_of(2) {
        return Ok(0);
    }
    let r = m.trailing_zeros();
    let mut total = 0u64;
    let mut power = b; // b^(2^i) mod 2^64
    for _ in 0..r {
        total += power.wrapping_add(1).trailing_zeros() as u64;
        power = power.wrapping_mul(power);
    }
    Ok(total)
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}
