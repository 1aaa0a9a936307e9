//! 128-bit binary floating point, plus a 120-bit fixed-point format for sums of
//! many small positive terms: fixed-point addition is exact, so a sum does not
//! depend on the order or grouping of its terms.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, Word};
use serde::Serializer;

/// Working precision in bits.
pub const PREC: usize = 128;
pub const RM: RoundingMode = RoundingMode::ToEven;
/// Fractional bits of the fixed-point format; integer parts up to 255 fit.
pub const FRAC_BITS: u32 = 120;

/// Holds the constants cache that logarithms and exponentials need.
pub struct Hp {
    cc: Consts,
}

impl Default for Hp {
    fn default() -> Self {
        Self::new()
    }
}

impl Hp {
    pub fn new() -> Self {
        Hp { cc: Consts::new().expect("constants cache") }
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PREC, RM, &mut self.cc)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(PREC, RM, &mut self.cc)
    }

    /// Parse a decimal literal such as `"69.2224"` or `"4.0515e8"`.
    pub fn parse(&mut self, s: &str) -> Option<BigFloat> {
        let v = BigFloat::parse(s, Radix::Dec, PREC, RM, &mut self.cc);
        (!v.is_nan()).then_some(v)
    }
}

pub fn int(n: u64) -> BigFloat {
    BigFloat::from_u64(n, PREC)
}

pub fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, PREC, RM)
}

pub fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.sub(b, PREC, RM)
}

pub fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, PREC, RM)
}

pub fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, PREC, RM)
}

pub fn sqrt(a: &BigFloat) -> BigFloat {
    a.sqrt(PREC, RM)
}

/// `a > b`; false if either is NaN.
pub fn gt(a: &BigFloat, b: &BigFloat) -> bool {
    matches!(a.cmp(b), Some(c) if c > 0)
}

pub fn to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().unwrap_or(f64::NAN)
}

/// `x` in fixed point, truncated; requires `0 <= x < 2^(128 - FRAC_BITS)`.
pub fn to_fixed(x: &BigFloat) -> u128 {
    if x.is_zero() {
        return 0;
    }
    assert!(x.is_positive(), "fixed point needs a nonnegative value");
    let (words, _, _, e, _) = x.as_raw_parts().expect("finite value");
    let bits = words.len() as i64 * Word::BITS as i64;
    assert!(bits <= 128, "mantissa wider than 128 bits");
    let mut m: u128 = 0;
    for &w in words.iter().rev() {
        m = (m << (Word::BITS - 1) << 1) | w as u128;
    }
    // x = m * 2^(e - bits)
    let shift = e as i64 - bits + FRAC_BITS as i64;
    assert!(shift <= 0 || m.leading_zeros() as i64 >= shift, "fixed point overflow");
    if shift >= 0 {
        m << shift
    } else if -shift >= 128 {
        0
    } else {
        m >> -shift
    }
}

pub fn from_fixed(v: u128) -> BigFloat {
    let scale = BigFloat::from_u128(1u128 << FRAC_BITS, PREC);
    BigFloat::from_u128(v, PREC).div(&scale, PREC, RM)
}

pub fn is_negative(x: &BigFloat) -> bool {
    x.sign() == Some(Sign::Neg) && !x.is_zero()
}

pub fn ser<S: Serializer>(x: &BigFloat, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_round_trip() {
        let mut hp = Hp::new();
        let ln2 = hp.ln(&int(2));
        let fixed = to_fixed(&ln2);
        // ln 2 * 2^120, leading hex digits of ln 2 = 0.b17217f7d1cf79ab...
        assert_eq!(fixed >> 56, 0xb17217f7d1cf79ab);
        let back = from_fixed(fixed);
        assert!(to_f64(&sub(&ln2, &back)).abs() < 1e-35);
        assert_eq!(to_fixed(&int(3)), 3u128 << FRAC_BITS);
        assert_eq!(to_fixed(&div(&int(1), &int(4))), 1u128 << (FRAC_BITS - 2));
        assert_eq!(to_fixed(&int(0)), 0);
    }

    #[test]
    fn parse_and_compare() {
        let mut hp = Hp::new();
        let a = hp.parse("0.5772156649").unwrap();
        assert!(gt(&a, &hp.parse("0.57").unwrap()));
        assert!(!gt(&a, &a));
        assert!(hp.parse("nonsense").is_none());
        assert!((to_f64(&a) - 0.5772156649).abs() < 1e-15);
        assert!(is_negative(&sub(&int(1), &int(2))));
    }
}
