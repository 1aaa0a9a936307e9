//! Factorization shape of `Phi_p(X) + a` over the rationals.
//!
//! Certification is one-sided: `Unknown` is returned when no route succeeds
//! within the configured prime bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{build_p, factor_degrees_mod_q, integer_roots, is_eisenstein, newton_polygon};
use super::{require_prime, DegreePattern, PolyZ};
use crate::arith::{trial_primes, FactorBudget};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeOptions {
    /// Largest prime tried for degree-pattern certification.
    pub cert_bound: u64,
    pub factor_budget: FactorBudget,
}

impl Default for ShapeOptions {
    fn default() -> Self {
        ShapeOptions { cert_bound: 1000, factor_budget: FactorBudget::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `P(X + 1)` is Eisenstein at `prime`.
    Eisenstein { prime: u64 },
    /// The Newton polygon of `P(X + 1)` at `prime`, read from the leading term,
    /// is `(0,0)-(p-2,1)-(p-1,e)`.
    Dumas { prime: u64, e: u64 },
    /// Reductions whose achievable factor degrees leave only `0` and the full degree.
    DegreeAnalysis { patterns: Vec<DegreePattern> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum FactorizationShape {
    Irreducible {
        certificate: Certificate,
    },
    LinearTimesIrreducible {
        #[serde(with = "crate::serde_dec")]
        root: BigInt,
        certificate: Certificate,
    },
    HasLinearFactorUncertifiedCofactor {
        #[serde(with = "crate::serde_dec")]
        root: BigInt,
    },
    Unknown,
}

impl FactorizationShape {
    pub fn root(&self) -> Option<&BigInt> {
        match self {
            FactorizationShape::LinearTimesIrreducible { root, .. }
            | FactorizationShape::HasLinearFactorUncertifiedCofactor { root } => Some(root),
            _ => None,
        }
    }
}

/// Try to prove `f` irreducible over the rationals from squarefree reductions
/// modulo primes `q <= bound`.
///
/// Any rational factor of degree `d` forces `d` to be a sum of factor degrees
/// modulo every good prime; once the intersection over primes leaves only `0`
/// and `deg f`, `f` has no proper factor.
pub fn certify_irreducible(f: &PolyZ, bound: u64) -> Option<Certificate> {
    let n = f.degree()?;
    if n == 0 {
        return None;
    }
    if !f.content().magnitude().is_one() {
        return None;
    }
    if n == 1 {
        return Some(Certificate::DegreeAnalysis { patterns: Vec::new() });
    }
    let lead = f.leading()?.clone();
    let mut possible = vec![true; n + 1];
    let mut patterns = Vec::new();
    for &q in trial_primes(bound).iter() {
        if q > bound {
            break;
        }
        if (&lead % BigInt::from(q)).is_zero() {
            continue;
        }
        let pat = match factor_degrees_mod_q(f, q) {
            Ok(p) if p.squarefree => p,
            _ => continue,
        };
        let sums = pat.subset_sums();
        let mut changed = false;
        for d in 1..n {
            if possible[d] && !sums[d] {
                possible[d] = false;
                changed = true;
            }
        }
        if changed {
            patterns.push(pat);
        }
        if possible[1..n].iter().all(|&x| !x) {
            return Some(Certificate::DegreeAnalysis { patterns });
        }
    }
    None
}

/// Shape of `Phi_p(X) + a`; `p >= 7` prime and `a != 0`.
pub fn classify_shape(p: u64, a: &BigInt, opts: &ShapeOptions) -> Result<FactorizationShape> {
    require_prime(p)?;
    if p < 7 {
        return Err(Error::domain("shape classification needs p >= 7"));
    }
    if a.is_zero() {
        return Err(Error::domain("shape classification needs a != 0"));
    }
    let f = build_p(p, a)?;
    let pb = BigInt::from(p);
    if a.is_multiple_of(&pb) && *a != -&pb {
        let a1 = a / &pb;
        let a1_plus_one: BigInt = &a1 + 1;
        if !a1_plus_one.is_multiple_of(&pb) {
            debug_assert!(is_eisenstein(&f.shift_plus_one(), p));
            return Ok(FactorizationShape::Irreducible {
                certificate: Certificate::Eisenstein { prime: p },
            });
        }
        let e = dumas_exponent(&f, p)?;
        let certificate = Certificate::Dumas { prime: p, e };
        return Ok(match integer_roots(&f, opts.factor_budget) {
            Ok(roots) if roots.is_empty() => FactorizationShape::Irreducible { certificate },
            Ok(roots) => {
                FactorizationShape::LinearTimesIrreducible { root: roots[0].clone(), certificate }
            }
            Err(_) => FactorizationShape::Unknown,
        });
    }
    let roots = match integer_roots(&f, opts.factor_budget) {
        Ok(r) => r,
        Err(_) => return Ok(FactorizationShape::Unknown),
    };
    Ok(match roots.first() {
        None => match certify_irreducible(&f, opts.cert_bound) {
            Some(certificate) => FactorizationShape::Irreducible { certificate },
            None => FactorizationShape::Unknown,
        },
        Some(root) => {
            let (cofactor, rem) = f.div_linear(root);
            debug_assert!(rem.is_zero());
            match certify_irreducible(&cofactor, opts.cert_bound) {
                Some(certificate) => {
                    FactorizationShape::LinearTimesIrreducible { root: root.clone(), certificate }
                }
                None => FactorizationShape::HasLinearFactorUncertifiedCofactor { root: root.clone() },
            }
        }
    })
}

/// `e` such that the Newton polygon of `P(X + 1)` read from the leading term is
/// `(0,0)-(p-2,1)-(p-1,e)`; an error if the polygon has any other shape.
fn dumas_exponent(f: &PolyZ, p: u64) -> Result<u64> {
    let np = newton_polygon(&f.shift_plus_one(), p)?.reflected();
    let n = (p - 1) as usize;
    match np.vertices.as_slice() {
        [(0, 0), (m, 1), (last, e)] if *m == n - 1 && *last == n && *e >= 2 => Ok(*e),
        _ => Err(Error::Verification(format!(
            "Newton polygon at {p} is not of Dumas shape: {:?}",
            np.vertices
        ))),
    }
}

/// Replay a certificate for `f`.
fn check_certificate(f: &PolyZ, p: u64, cert: &Certificate) -> Result<()> {
    let fail = |msg: String| Err(Error::Verification(msg));
    match cert {
        Certificate::Eisenstein { prime } => {
            if *prime != p || !is_eisenstein(&f.shift_plus_one(), p) {
                return fail(format!("shifted polynomial is not Eisenstein at {prime}"));
            }
        }
        Certificate::Dumas { prime, e } => {
            if *prime != p || dumas_exponent(f, p)? != *e {
                return fail(format!("Dumas polygon at {prime} does not match e = {e}"));
            }
        }
        Certificate::DegreeAnalysis { patterns } => {
            let n = f.degree().unwrap_or(0);
            if n == 0 || !f.content().magnitude().is_one() {
                return fail("degree analysis needs a primitive non-constant polynomial".into());
            }
            let mut possible = vec![true; n + 1];
            for pat in patterns {
                let fresh = factor_degrees_mod_q(f, pat.q)?;
                if &fresh != pat || !fresh.squarefree {
                    return fail(format!("pattern mod {} does not replay", pat.q));
                }
                for (d, ok) in fresh.subset_sums().iter().enumerate() {
                    if !ok {
                        possible[d] = false;
                    }
                }
            }
            if possible[1..n].iter().any(|&x| x) {
                return fail("degree patterns leave a proper factor degree open".into());
            }
        }
    }
    Ok(())
}

/// Independently re-check a shape for `Phi_p(X) + a`.
pub fn verify_shape(p: u64, a: &BigInt, shape: &FactorizationShape) -> Result<()> {
    let f = build_p(p, a)?;
    match shape {
        FactorizationShape::Irreducible { certificate } => {
            if let Certificate::Dumas { .. } = certificate {
                // Dumas alone allows one linear factor; there must be no root
                if !integer_roots(&f, FactorBudget::default())?.is_empty() {
                    return Err(Error::Verification("Dumas case has an integer root".into()));
                }
            }
            check_certificate(&f, p, certificate)
        }
        FactorizationShape::LinearTimesIrreducible { root, certificate } => {
            let (cofactor, rem) = f.div_linear(root);
            if !rem.is_zero() {
                return Err(Error::Verification(format!("{root} is not a root")));
            }
            match certificate {
                Certificate::DegreeAnalysis { .. } => check_certificate(&cofactor, p, certificate),
                _ => check_certificate(&f, p, certificate),
            }
        }
        FactorizationShape::HasLinearFactorUncertifiedCofactor { root } => {
            if !f.eval(root).is_zero() {
                return Err(Error::Verification(format!("{root} is not a root")));
            }
            Ok(())
        }
        FactorizationShape::Unknown => Ok(()),
    }
}
