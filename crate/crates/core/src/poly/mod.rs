//! Dense integer polynomials and the shifted cyclotomic family `Phi_p(X) + a`.

mod disc;
mod modq;
mod newton;
mod roots;
mod shape;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};

pub use disc::{discriminant_closed, discriminant_resultant, resultant, sylvester_matrix};
pub use modq::{factor_degrees_mod_q, has_root_mod_q, DegreePattern, PolyFq};
pub use newton::{is_eisenstein, newton_polygon, NewtonPolygon, Segment};
pub use roots::integer_roots;
pub use shape::{
    certify_irreducible, classify_shape, verify_shape, Certificate, FactorizationShape, ShapeOptions,
};

/// Polynomials above this degree are refused by [`build_p`].
pub const MAX_CONSTRUCTED_DEGREE: u64 = 10_000;

/// Integer polynomial, `coeffs[i]` is the coefficient of `X^i`.
///
/// No trailing zeros are stored, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyZ {
    coeffs: Vec<BigInt>,
}

impl PolyZ {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyZ { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        PolyZ { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `X - r`.
    pub fn linear_root(r: &BigInt) -> Self {
        Self::new(vec![-r, BigInt::one()])
    }

    pub fn monomial(degree: usize, c: BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Synthetic division by `X - r`: quotient and remainder `f(r)`.
    pub fn div_linear(&self, r: &BigInt) -> (Self, BigInt) {
        if self.coeffs.is_empty() {
            return (Self::zero(), BigInt::zero());
        }
        let n = self.coeffs.len();
        let mut quot = vec![BigInt::zero(); n - 1];
        let mut carry = BigInt::zero();
        for i in (0..n).rev() {
            let v = &self.coeffs[i] + &carry * r;
            if i == 0 {
                return (Self::new(quot), v);
            }
            quot[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Exact division; fails when the divisor is zero or does not divide.
    pub fn div_exact(&self, divisor: &PolyZ) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::domain("polynomial division is not exact"));
        }
        Ok(q)
    }

    /// Division with remainder; requires every step's leading quotient to be integral.
    pub fn div_rem(&self, divisor: &PolyZ) -> Result<(Self, Self)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::domain("division by the zero polynomial"))?;
        let lead = divisor.leading().expect("nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let (q, r) = rem[i].div_rem(lead);
            if !r.is_zero() {
                return Err(Error::domain("non-integral quotient in polynomial division"));
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &q * c;
            }
            quot[i - dd] = q;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Divide out `X^k` for the largest such `k`, returning `(k, f / X^k)`.
    pub fn strip_x_power(&self) -> (usize, Self) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, Self::new(self.coeffs[k..].to_vec()))
    }

    /// `f(Y + 1)`, by repeated synthetic division (Taylor expansion at 1).
    pub fn shift_plus_one(&self) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = c[j + 1].clone();
                c[j] += next;
            }
        }
        Self::new(c)
    }

    /// The content (gcd of the coefficients), nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

impl fmt::Debug for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyZ({self})")
    }
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &PolyZ {
    type Output = PolyZ;
    fn add(self, rhs: &PolyZ) -> PolyZ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyZ::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &PolyZ {
    type Output = PolyZ;
    fn sub(self, rhs: &PolyZ) -> PolyZ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyZ::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &PolyZ {
    type Output = PolyZ;
    fn neg(self) -> PolyZ {
        PolyZ::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &PolyZ {
    type Output = PolyZ;
    fn mul(self, rhs: &PolyZ) -> PolyZ {
        if self.is_zero() || rhs.is_zero() {
            return PolyZ::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyZ::new(out)
    }
}

/// JSON form: array of decimal strings, constant term first.
impl Serialize for PolyZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_dec::vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for PolyZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::serde_dec::vec::deserialize(d).map(PolyZ::new)
    }
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::domain(format!("{p} is not prime")))
    }
}

/// `P_{p,a}(X) = X^(p-1) + ... + X + 1 + a`.
pub fn build_p(p: u64, a: &BigInt) -> Result<PolyZ> {
    require_prime(p)?;
    if p < 3 {
        return Err(Error::domain("build_p needs an odd prime"));
    }
    if p > MAX_CONSTRUCTED_DEGREE {
        return Err(Error::domain(format!(
            "p = {p} exceeds the construction guard {MAX_CONSTRUCTED_DEGREE}"
        )));
    }
    let mut coeffs = vec![BigInt::one(); p as usize];
    coeffs[0] += a;
    Ok(PolyZ::new(coeffs))
}

pub fn build_p_i64(p: u64, a: i64) -> Result<PolyZ> {
    build_p(p, &BigInt::from(a))
}

/// `Phi_m(X)` as a polynomial.
pub fn cyclotomic(m: u32) -> Result<PolyZ> {
    crate::arith::cyclotomic_coeffs(m).map(PolyZ::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn build_p_examples() {
        assert_eq!(build_p_i64(3, 0).unwrap(), PolyZ::from_i64s(&[1, 1, 1]));
        assert_eq!(
            build_p_i64(7, -127).unwrap(),
            PolyZ::from_i64s(&[-126, 1, 1, 1, 1, 1, 1])
        );
        assert_eq!(build_p_i64(7, -43).unwrap().eval_i64(-2), big(0));
        assert!(build_p_i64(9, 0).is_err());
        assert!(build_p_i64(2, 0).is_err());
        assert!(build_p_i64(10_007, 0).is_err());
    }

    #[test]
    fn shift_examples() {
        let x2 = PolyZ::from_i64s(&[0, 0, 1]);
        assert_eq!(x2.shift_plus_one(), PolyZ::from_i64s(&[1, 2, 1]));
        let g = build_p_i64(7, 56).unwrap().shift_plus_one();
        assert_eq!(g.constant_term(), big(63));
        // binomials C(7, j) in the middle
        assert_eq!(g, PolyZ::from_i64s(&[63, 21, 35, 35, 21, 7, 1]));
    }

    #[test]
    fn times_x_minus_one_identity() {
        for p in [3u64, 5, 7, 11, 13] {
            for a in -10i64..=10 {
                let lhs = &PolyZ::from_i64s(&[-1, 1]) * &build_p_i64(p, a).unwrap();
                let mut rhs = vec![big(0); p as usize + 1];
                rhs[p as usize] = big(1);
                rhs[1] = big(a);
                rhs[0] = big(-(a + 1));
                assert_eq!(lhs, PolyZ::new(rhs), "p={p} a={a}");
            }
        }
    }

    #[test]
    fn value_at_one_is_a_plus_p() {
        for p in [3u64, 5, 7, 11, 13, 17] {
            for a in -40i64..=40 {
                assert_eq!(build_p_i64(p, a).unwrap().eval_i64(1), big(a + p as i64));
            }
        }
    }

    #[test]
    fn division_helpers() {
        let f = build_p_i64(7, -127).unwrap();
        let (q, r) = f.div_linear(&big(2));
        assert_eq!(r, big(0));
        assert_eq!(&q * &PolyZ::linear_root(&big(2)), f);
        assert_eq!(f.div_exact(&PolyZ::linear_root(&big(2))).unwrap(), q);
        assert!(f.div_exact(&PolyZ::linear_root(&big(3))).is_err());
        let (k, g) = PolyZ::from_i64s(&[0, 0, 3, 1]).strip_x_power();
        assert_eq!((k, g), (2, PolyZ::from_i64s(&[3, 1])));
    }

    #[test]
    fn display_and_json() {
        let f = PolyZ::from_i64s(&[-126, 1, 0, 1, -2]);
        assert_eq!(f.to_string(), "-2X^4 + X^3 + X - 126");
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"["-126","1","0","1","-2"]"#);
        let back: PolyZ = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<PolyZ>(r#"["1.5"]"#).is_err());
        assert!(serde_json::from_str::<PolyZ>(r#"[1]"#).is_err());
    }

    proptest! {
        #[test]
        fn shift_matches_evaluation(coeffs in proptest::collection::vec(-1000i64..1000, 0..12), y in -50i64..50) {
            let f = PolyZ::from_i64s(&coeffs);
            let g = f.shift_plus_one();
            prop_assert_eq!(g.eval_i64(y), f.eval_i64(y + 1));
            prop_assert!(g.degree() == f.degree());
        }

        #[test]
        fn json_round_trip(coeffs in proptest::collection::vec(any::<i64>(), 0..10)) {
            let f = PolyZ::from_i64s(&coeffs);
            let back: PolyZ = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
