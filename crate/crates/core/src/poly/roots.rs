use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::PolyZ;
use crate::arith::{factor_biguint, FactorBudget};
use crate::error::{Error, Result};

fn divisors(primes: &[(BigUint, u32)]) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in primes {
        let len = divs.len();
        let mut pk = BigUint::one();
        for _ in 0..*e {
            pk *= p;
            for i in 0..len {
                divs.push(&divs[i] * &pk);
            }
        }
    }
    divs.sort();
    divs
}

/// All integer roots of `f`, ascending, repeated by multiplicity.
///
/// Candidates are the signed divisors of the constant term left after dividing
/// out the largest power of `X`. Fails only when the budgeted factorization of
/// that constant term does not complete.
pub fn integer_roots(f: &PolyZ, budget: FactorBudget) -> Result<Vec<BigInt>> {
    if f.is_zero() {
        return Err(Error::domain("integer roots of the zero polynomial"));
    }
    let (zeros, mut rest) = f.strip_x_power();
    let mut roots = vec![BigInt::zero(); zeros];
    if rest.degree() == Some(0) {
        return Ok(roots);
    }
    let c0 = rest.constant_term();
    let fact = factor_biguint(c0.magnitude(), budget);
    if !fact.is_complete() {
        return Err(Error::FactorizationIncomplete {
            cofactor: fact.unfactored[0].to_string(),
        });
    }
    let mut candidates: Vec<BigInt> = Vec::new();
    for d in divisors(&fact.primes) {
        let d = BigInt::from(d);
        candidates.push(-&d);
        candidates.push(d);
    }
    candidates.sort();
    for r in candidates {
        loop {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let (q, rem) = rest.div_linear(&r);
            if !rem.is_zero() {
                break;
            }
            roots.push(r.clone());
            rest = q;
        }
    }
    roots.sort();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::build_p_i64;

    fn roots(f: &PolyZ) -> Vec<BigInt> {
        integer_roots(f, FactorBudget::default()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(roots(&build_p_i64(7, -127).unwrap()), ints(&[2]));
        for p in [7u64, 11, 13] {
            assert_eq!(roots(&build_p_i64(p, -(p as i64)).unwrap()), ints(&[1]));
        }
        assert!(roots(&build_p_i64(7, 7).unwrap()).is_empty());
        assert_eq!(roots(&build_p_i64(7, -43).unwrap()), ints(&[-2]));
    }

    #[test]
    fn multiplicities_and_zero_roots() {
        // X^2 (X - 3)^2 (X + 5)
        let f = &(&PolyZ::from_i64s(&[0, 0, 1]) * &PolyZ::from_i64s(&[9, -6, 1]))
            * &PolyZ::from_i64s(&[5, 1]);
        assert_eq!(roots(&f), ints(&[-5, 0, 0, 3, 3]));
        assert_eq!(roots(&PolyZ::from_i64s(&[0, 0, 7])), ints(&[0, 0]));
        assert!(roots(&PolyZ::from_i64s(&[7])).is_empty());
        assert!(integer_roots(&PolyZ::zero(), FactorBudget::default()).is_err());
    }

    #[test]
    fn every_root_divides_the_constant_and_vanishes() {
        for a in -200i64..=200 {
            if a == -1 {
                continue; // constant term zero: root 0
            }
            let f = build_p_i64(7, a).unwrap();
            for r in roots(&f) {
                assert!(f.eval(&r).is_zero());
                assert!((BigInt::from(a + 1) % &r).is_zero());
            }
        }
    }
}
