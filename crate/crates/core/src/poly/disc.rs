//! Discriminants of `Phi_p(X) + a`: the closed form, and a Sylvester-matrix
//! resultant that serves as its independent check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{require_prime, PolyZ};
use crate::error::{Error, Result};

/// The `(m + n) x (m + n)` Sylvester matrix of `f` (degree m) and `g` (degree n),
/// coefficients written from the leading term down.
pub fn sylvester_matrix(f: &PolyZ, g: &PolyZ) -> Result<Vec<Vec<BigInt>>> {
    let (m, n) = match (f.degree(), g.degree()) {
        (Some(m), Some(n)) => (m, n),
        _ => return Err(Error::domain("Sylvester matrix of a zero polynomial")),
    };
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Fraction-free (Bareiss) determinant.
fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v.div_floor(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `Res(f, g)` as the determinant of the Sylvester matrix.
pub fn resultant(f: &PolyZ, g: &PolyZ) -> Result<BigInt> {
    match (f.degree(), g.degree()) {
        (None, _) | (_, None) => Err(Error::domain("resultant with the zero polynomial")),
        (Some(0), Some(n)) => Ok(num_traits::pow(f.constant_term(), n)),
        (Some(m), Some(0)) => Ok(num_traits::pow(g.constant_term(), m)),
        _ => Ok(determinant(sylvester_matrix(f, g)?)),
    }
}

/// Signed discriminant `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant_resultant(f: &PolyZ) -> Result<BigInt> {
    let n = match f.degree() {
        None => return Err(Error::domain("discriminant of the zero polynomial")),
        Some(0) => return Err(Error::domain("discriminant of a constant")),
        Some(n) => n,
    };
    let res = resultant(f, &f.derivative())?;
    let (q, r) = res.div_rem(f.leading().expect("nonzero"));
    debug_assert!(r.is_zero());
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -q } else { q })
}

/// `|Delta|` for `Phi_p(X) + a` from the closed form
/// `(p^p (a+1)^(p-1) + a^p (p-1)^(p-1)) / (a+p)^2`.
pub fn discriminant_closed(p: u64, a: &BigInt) -> Result<BigInt> {
    require_prime(p)?;
    if p < 3 {
        return Err(Error::domain("closed-form discriminant needs an odd prime"));
    }
    let pb = BigInt::from(p);
    let denom = a + &pb;
    if denom.is_zero() {
        let a = i64::try_from(a).unwrap_or(i64::MIN);
        return Err(Error::SingularDiscriminant { a });
    }
    let e = p as usize;
    let numer: BigInt = num_traits::pow(pb.clone(), e) * num_traits::pow(a + 1, e - 1)
        + num_traits::pow(a.clone(), e) * num_traits::pow(&pb - 1, e - 1);

    let denom = &denom * &denom;
    let (q, r) = numer.div_rem(&denom);
    if !r.is_zero() {
        return Err(Error::Verification(format!(
            "closed-form discriminant not integral at p = {p}, a = {a}"
        )));
    }
    Ok(q.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::build_p_i64;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(discriminant_resultant(&PolyZ::from_i64s(&[1, 1, 1])).unwrap(), big(-3));
        assert_eq!(discriminant_resultant(&PolyZ::from_i64s(&[-1, 0, 1])).unwrap(), big(4));
        // b^2 - 4ac with a non-monic leading coefficient
        assert_eq!(discriminant_resultant(&PolyZ::from_i64s(&[5, 3, 2])).unwrap(), big(9 - 40));
        // cubic x^3 + px + q: -4p^3 - 27q^2
        assert_eq!(
            discriminant_resultant(&PolyZ::from_i64s(&[2, -3, 0, 1])).unwrap(),
            big(-4 * -27 - 27 * 4)
        );
        assert_eq!(discriminant_resultant(&PolyZ::from_i64s(&[7, 3])).unwrap(), big(1));
        assert!(discriminant_resultant(&PolyZ::zero()).is_err());
        assert!(discriminant_resultant(&PolyZ::from_i64s(&[4])).is_err());
    }

    #[test]
    fn resultant_vanishes_on_common_root() {
        let f = &PolyZ::from_i64s(&[-2, 1]) * &PolyZ::from_i64s(&[1, 1, 1]);
        let g = &PolyZ::from_i64s(&[-2, 1]) * &PolyZ::from_i64s(&[3, 0, 1]);
        assert_eq!(resultant(&f, &g).unwrap(), big(0));
        // Res(x - r, g) = g(r)
        let g = PolyZ::from_i64s(&[5, -1, 0, 2]);
        assert_eq!(resultant(&PolyZ::from_i64s(&[-3, 1]), &g).unwrap(), g.eval_i64(3));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(discriminant_closed(3, &big(0)).unwrap(), big(3));
        assert_eq!(discriminant_closed(5, &big(-1)).unwrap(), big(16));
        let oracle = discriminant_resultant(&build_p_i64(5, -1).unwrap()).unwrap();
        assert_eq!(oracle.abs(), big(16));
        let oracle = discriminant_resultant(&build_p_i64(7, 7).unwrap()).unwrap();
        assert_eq!(discriminant_closed(7, &big(7)).unwrap(), oracle.abs());
        assert!(matches!(
            discriminant_closed(7, &big(-7)),
            Err(Error::SingularDiscriminant { a: -7 })
        ));
        assert!(discriminant_closed(9, &big(1)).is_err());
    }

    #[test]
    fn closed_form_matches_resultant_grid() {
        for p in [3u64, 5, 7, 11, 13] {
            for a in -30i64..=30 {
                if a == -(p as i64) {
                    continue;
                }
                let f = build_p_i64(p, a).unwrap();
                let oracle = discriminant_resultant(&f).unwrap();
                assert_eq!(discriminant_closed(p, &big(a)).unwrap(), oracle.abs(), "p={p} a={a}");
            }
        }
    }

    #[test]
    fn trinomial_discriminant_carries_the_value_at_one() {
        // disc((X-1)P) = disc(P) * P(1)^2 and (X-1)P = X^p + aX - (a+1)
        for p in [3u64, 5, 7] {
            for a in [-9i64, -4, -1, 0, 2, 6] {
                let mut t = vec![big(0); p as usize + 1];
                t[p as usize] = big(1);
                t[1] = big(a);
                t[0] = big(-(a + 1));
                let trinomial = PolyZ::new(t);
                let lhs = discriminant_resultant(&trinomial).unwrap();
                let rhs = discriminant_resultant(&build_p_i64(p, a).unwrap()).unwrap()
                    * big((a + p as i64) * (a + p as i64));
                assert_eq!(lhs, rhs, "p={p} a={a}");
            }
        }
    }
}
