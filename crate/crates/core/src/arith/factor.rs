//! Primality testing and budgeted factorization for machine words and big integers.
//!
//! Word-sized inputs are always factored completely (trial division then Brent's
//! variant of Pollard rho). Big inputs get trial division up to a bound, then rho
//! under an iteration budget; anything left over is reported, not guessed.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::modular::{mul_mod, pow_mod};

/// Miller-Rabin witnesses; deterministic for every n < 3.3 * 10^24.
const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &w in &WITNESSES[..12] {
        let mut x = pow_mod(w % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Probable-prime test on big integers; a proof below 3.3 * 10^24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &w in &WITNESSES {
        let mut x = BigUint::from(w).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..128.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Complete factorization of a machine word, ascending primes with exponents.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n < 2 {
        return out;
    }
    for &p in &SMALL_PRIMES {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![n];
    let mut found = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            found.push(m);
            continue;
        }
        let d = rho_u64(m);
        stack.push(d);
        stack.push(m / d);
    }
    found.sort_unstable();
    for p in found {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Limits for [`factor_biguint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division by every prime up to this bound.
    pub trial_bound: u64,
    /// Total rho iterations allowed across the whole factorization.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 1 << 22,
        }
    }
}

/// Result of a budgeted factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Primes (probable primes above 3.3e24) with exponents, ascending.
    pub primes: Vec<(BigUint, u32)>,
    /// Composite parts the budget could not split, ascending.
    pub unfactored: Vec<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }
}

fn rho_biguint(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u32..64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = BigUint::zero();
        let mut ys = BigUint::zero();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let steps = 64.min(r - k);
                if *budget < steps {
                    return None;
                }
                *budget -= steps;
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Factor `n` by trial division up to the budget's bound, then Pollard rho.
pub fn factor_biguint(n: &BigUint, budget: FactorBudget) -> Factorization {
    let mut primes: Vec<(BigUint, u32)> = Vec::new();
    let mut unfactored = Vec::new();
    if n <= &BigUint::one() {
        return Factorization { primes, unfactored };
    }
    let mut rest = n.clone();
    if let Some(small) = rest.to_u64() {
        primes = factor_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
        return Factorization { primes, unfactored };
    }

    // Trial division; stop early once the cofactor fits a word.
    for &candidate in super::sieve::trial_primes(budget.trial_bound).iter() {
        if rest.to_u64().is_some() {
            break;
        }
        let mut e = 0u32;
        while (&rest % candidate).is_zero() {
            rest /= candidate;
            e += 1;
        }
        if e > 0 {
            primes.push((BigUint::from(candidate), e));
        }
    }

    let mut found: Vec<BigUint> = Vec::new();
    let mut rho_budget = budget.rho_iterations;
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            for (p, e) in factor_u64(small) {
                for _ in 0..e {
                    found.push(BigUint::from(p));
                }
            }
            continue;
        }
        if is_probable_prime(&m) {
            found.push(m);
            continue;
        }
        match rho_biguint(&m, &mut rho_budget) {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => unfactored.push(m),
        }
    }
    found.sort();
    for p in found {
        match primes.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += 1,
            None => primes.push((p, 1)),
        }
    }
    primes.sort();
    unfactored.sort();
    Factorization { primes, unfactored }
}
