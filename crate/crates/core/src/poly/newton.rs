//! Newton polygons with respect to a prime, and the Eisenstein test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{require_prime, PolyZ};
use crate::arith::int_valuation;
use crate::error::{Error, Result};

/// Lower convex hull of `(i, v_p(c_i))` over the nonzero coefficients `c_i` of `X^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub prime: u64,
    /// Corner points, strictly increasing in the first coordinate.
    pub vertices: Vec<(usize, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: (usize, u64),
    pub end: (usize, u64),
}

impl Segment {
    pub fn length(&self) -> usize {
        self.end.0 - self.start.0
    }

    pub fn slope(&self) -> Ratio<i64> {
        Ratio::new(
            self.end.1 as i64 - self.start.1 as i64,
            self.length() as i64,
        )
    }

    /// Number of lattice steps along the segment, `gcd(dx, dy)`.
    pub fn lattice_steps(&self) -> usize {
        let dy = self.end.1.abs_diff(self.start.1) as usize;
        self.length().gcd(&dy)
    }
}

impl NewtonPolygon {
    pub fn segments(&self) -> Vec<Segment> {
        self.vertices
            .windows(2)
            .map(|w| Segment { start: w[0], end: w[1] })
            .collect()
    }

    /// The polygon in the reversed convention, indexing coefficients from the
    /// leading term: `(i, v)` becomes `(deg - i, v)`.
    ///
    /// The reflection of a lower hull is the lower hull of the reflected points.
    pub fn reflected(&self) -> NewtonPolygon {
        let deg = self.vertices.last().map_or(0, |v| v.0);
        NewtonPolygon {
            prime: self.prime,
            vertices: self.vertices.iter().rev().map(|&(i, v)| (deg - i, v)).collect(),
        }
    }

    /// Factor-degree constraint from the segments' lattice decomposition: any
    /// factor degree over the p-adics is a sum of primitive segment lengths.
    pub fn primitive_lengths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for s in self.segments() {
            let steps = s.lattice_steps();
            for _ in 0..steps {
                out.push(s.length() / steps);
            }
        }
        out
    }
}

fn cross(o: (usize, u64), a: (usize, u64), b: (usize, u64)) -> i128 {
    let (ox, oy) = (o.0 as i128, o.1 as i128);
    (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
}

/// Newton polygon of `f` at `p`; requires a nonzero constant term.
pub fn newton_polygon(f: &PolyZ, p: u64) -> Result<NewtonPolygon> {
    require_prime(p)?;
    if f.is_zero() {
        return Err(Error::domain("Newton polygon of the zero polynomial"));
    }
    if f.constant_term().is_zero() {
        return Err(Error::domain("zero constant term; divide out the power of X first"));
    }
    let mut hull: Vec<(usize, u64)> = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let pt = (i, int_valuation(c, p)?);
        // pop while the last turn is not strictly counter-clockwise
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    Ok(NewtonPolygon { prime: p, vertices: hull })
}

/// `p` misses the leading coefficient, divides every other one, and `p^2` misses
/// the constant term.
pub fn is_eisenstein(f: &PolyZ, p: u64) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let pb = BigInt::from(p);
    let c = f.coeffs();
    if c[n].is_multiple_of(&pb) {
        return false;
    }
    if !c[..n].iter().all(|x| x.is_multiple_of(&pb)) {
        return false;
    }
    !c[0].is_multiple_of(&(&pb * &pb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::build_p_i64;

    #[test]
    fn eisenstein_cubic_single_segment() {
        let f = PolyZ::from_i64s(&[2, 2, 0, 1]);
        let np = newton_polygon(&f, 2).unwrap();
        assert_eq!(np.vertices, vec![(0, 1), (3, 0)]);
        assert_eq!(np.segments()[0].slope(), Ratio::new(-1, 3));
        assert!(is_eisenstein(&f, 2));
    }

    #[test]
    fn constant_polynomial() {
        let np = newton_polygon(&PolyZ::from_i64s(&[5]), 5).unwrap();
        assert_eq!(np.vertices, vec![(0, 1)]);
        assert!(np.segments().is_empty());
    }

    #[test]
    fn errors() {
        assert!(newton_polygon(&PolyZ::from_i64s(&[0, 1]), 3).is_err());
        assert!(newton_polygon(&PolyZ::zero(), 3).is_err());
        assert!(newton_polygon(&PolyZ::from_i64s(&[1, 1]), 4).is_err());
    }

    #[test]
    fn dumas_shape_for_a_divisible_by_p_squared_plus_one() {
        // a = -39991 = 7 * (-5713); a1 + 1 = -5712 = 7 * (-816)
        let g = build_p_i64(7, -39_991).unwrap().shift_plus_one();
        assert_eq!(g.constant_term(), BigInt::from(-39_984));
        assert_eq!(int_valuation(&BigInt::from(-39_984), 7).unwrap(), 2);
        let np = newton_polygon(&g, 7).unwrap();
        assert_eq!(np.vertices, vec![(0, 2), (1, 1), (6, 0)]);
        assert_eq!(np.reflected().vertices, vec![(0, 0), (5, 1), (6, 2)]);
        assert_eq!(np.reflected().primitive_lengths(), vec![5, 1]);
    }

    #[test]
    fn eisenstein_examples() {
        let g = build_p_i64(7, 56).unwrap().shift_plus_one();
        assert!(is_eisenstein(&g, 7));
        assert!(!is_eisenstein(&PolyZ::from_i64s(&[1, 1, 1]), 3));
        assert!(!is_eisenstein(&PolyZ::from_i64s(&[1, 1, 1]), 2));
        // a1 = -7, constant 7 * (1 - 7) = -42 has v_7 = 1 and 7 does not divide a1 + 1 = -6
        let g = build_p_i64(7, -49).unwrap().shift_plus_one();
        assert_eq!(g.constant_term(), BigInt::from(-42));
        assert!(is_eisenstein(&g, 7));
    }

    #[test]
    fn slopes_strictly_increase() {
        for a in -60i64..60 {
            let f = build_p_i64(7, a).unwrap().shift_plus_one();
            if f.constant_term().is_zero() {
                continue;
            }
            for p in [2u64, 3, 7] {
                let np = newton_polygon(&f, p).unwrap();
                let slopes: Vec<_> = np.segments().iter().map(Segment::slope).collect();
                assert!(slopes.windows(2).all(|w| w[0] < w[1]), "a={a} p={p}");
                assert_eq!(np.vertices.first().unwrap().0, 0);
                assert_eq!(np.vertices.last().unwrap().0, 6);
            }
        }
    }
}
