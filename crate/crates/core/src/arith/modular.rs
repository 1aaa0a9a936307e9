//! Word-sized modular arithmetic.

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Least nonnegative residue of a signed integer.
#[inline]
pub fn reduce_i64(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

/// Inverse modulo a prime, via Fermat. `a` must be nonzero mod `q`.
pub fn inv_mod_prime(a: u64, q: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(q));
    pow_mod(a, q - 2, q)
}
