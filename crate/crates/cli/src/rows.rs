//! Record types printed by the subcommands.

use num_bigint::BigInt;
use rgl_core::analytic::{BtRecord, ExcludedResidue, PhiScan, PropPomRow, RoughPrimeCount, ThresholdSample};
use rgl_core::equation::EquationInstance;
use rgl_core::obstruction::{LeastRootless, RootlessDensity, ScanRecord};
use rgl_core::poly::{Certificate, FactorizationShape};
use serde::Serialize;

use crate::output::{join, opt, Row};

impl Row for ScanRecord {
    fn header() -> &'static [&'static str] {
        &["a", "p", "status", "q", "residues", "roots", "note"]
    }

    fn cells(&self) -> Vec<String> {
        let status = serde_json::to_value(self.status).unwrap();
        vec![
            self.a.to_string(),
            self.p.to_string(),
            status.as_str().unwrap_or_default().to_string(),
            opt(&self.q),
            self.residues.as_deref().map(join).unwrap_or_default(),
            self.roots
                .as_deref()
                .map(|r| r.iter().map(|(q, k)| format!("{q}:{k}")).collect::<Vec<_>>().join(" "))
                .unwrap_or_default(),
            opt(&self.note),
        ]
    }

    fn text(&self) -> String {
        let c = self.cells();
        let mut s = format!("{} {} {}", c[0], c[1], c[2]);
        if let Some(q) = self.q {
            s.push_str(&format!(" q={q}"));
        }
        if let Some(n) = &self.note {
            s.push_str(&format!(" ({n})"));
        }
        s
    }
}

impl Row for EquationInstance {
    fn header() -> &'static [&'static str] {
        &["n", "m", "b", "a"]
    }

    fn cells(&self) -> Vec<String> {
        vec![self.n.to_string(), self.m.to_string(), self.b.to_string(), self.a.to_string()]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscRow {
    pub p: u64,
    pub a: String,
    /// `None` where the closed form is singular (`a = -p`).
    pub closed: Option<String>,
    pub resultant: String,
    pub equal: bool,
}

impl DiscRow {
    pub fn new(p: u64, a: &BigInt, closed: Option<BigInt>, resultant: BigInt) -> Self {
        let equal = closed.as_ref().is_some_and(|c| *c == resultant.magnitude().clone().into());
        DiscRow {
            p,
            a: a.to_string(),
            closed: closed.map(|c| c.to_string()),
            resultant: resultant.to_string(),
            equal,
        }
    }
}

impl Row for DiscRow {
    fn header() -> &'static [&'static str] {
        &["p", "a", "closed", "resultant", "equal"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.a.clone(),
            opt(&self.closed),
            self.resultant.clone(),
            self.equal.to_string(),
        ]
    }

    fn text(&self) -> String {
        format!(
            "closed: {}\nresultant: {}\nequal: {}",
            self.closed.as_deref().unwrap_or("singular"),
            self.resultant,
            self.equal
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NewtonRow {
    pub p: u64,
    pub a: String,
    pub prime: u64,
    /// Polygon of `P(X + shift)`.
    pub shift: i64,
    /// Indexed by power of `X`.
    pub vertices: Vec<(usize, u64)>,
    /// Indexed from the leading term.
    pub reflected: Vec<(usize, u64)>,
    pub slopes: Vec<String>,
}

fn points(v: &[(usize, u64)]) -> String {
    v.iter().map(|(i, e)| format!("({i},{e})")).collect::<Vec<_>>().join("-")
}

impl Row for NewtonRow {
    fn header() -> &'static [&'static str] {
        &["p", "a", "prime", "shift", "vertices", "reflected", "slopes"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.a.clone(),
            self.prime.to_string(),
            self.shift.to_string(),
            points(&self.vertices),
            points(&self.reflected),
            join(&self.slopes),
        ]
    }

    fn text(&self) -> String {
        format!("{}\nreflected: {}\nslopes: {}", points(&self.vertices), points(&self.reflected), join(&self.slopes))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeRow {
    pub p: u64,
    pub a: String,
    #[serde(flatten)]
    pub shape: FactorizationShape,
    pub verified: bool,
}

fn shape_name(s: &FactorizationShape) -> &'static str {
    match s {
        FactorizationShape::Irreducible { .. } => "irreducible",
        FactorizationShape::LinearTimesIrreducible { .. } => "linear_times_irreducible",
        FactorizationShape::HasLinearFactorUncertifiedCofactor { .. } => "has_linear_factor_uncertified_cofactor",
        FactorizationShape::Unknown => "unknown",
    }
}

fn certificate(s: &FactorizationShape) -> Option<&Certificate> {
    match s {
        FactorizationShape::Irreducible { certificate }
        | FactorizationShape::LinearTimesIrreducible { certificate, .. } => Some(certificate),
        _ => None,
    }
}

impl Row for ShapeRow {
    fn header() -> &'static [&'static str] {
        &["p", "a", "shape", "root", "certificate", "verified"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.a.clone(),
            shape_name(&self.shape).into(),
            opt(&self.shape.root()),
            certificate(&self.shape).map(|c| serde_json::to_string(c).unwrap()).unwrap_or_default(),
            self.verified.to_string(),
        ]
    }

    fn text(&self) -> String {
        let mut s = shape_name(&self.shape).to_string();
        if let Some(r) = self.shape.root() {
            s.push_str(&format!(" root={r}"));
        }
        if let Some(c) = certificate(&self.shape) {
            s.push_str(&format!(" certificate={}", serde_json::to_string(c).unwrap()));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RootsRow {
    pub p: u64,
    pub a: String,
    pub roots: Vec<String>,
}

impl Row for RootsRow {
    fn header() -> &'static [&'static str] {
        &["p", "a", "roots"]
    }

    fn cells(&self) -> Vec<String> {
        vec![self.p.to_string(), self.a.clone(), join(&self.roots)]
    }

    fn text(&self) -> String {
        join(&self.roots)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LeastRootlessRow {
    pub p: u64,
    pub a: i64,
    #[serde(flatten)]
    pub result: LeastRootless,
}

impl Row for LeastRootlessRow {
    fn header() -> &'static [&'static str] {
        &["p", "a", "q", "ceiling"]
    }

    fn cells(&self) -> Vec<String> {
        let (q, c) = match self.result {
            LeastRootless::Found { q } => (q.to_string(), String::new()),
            LeastRootless::NotBelow { ceiling } => (String::new(), ceiling.to_string()),
        };
        vec![self.p.to_string(), self.a.to_string(), q, c]
    }

    fn text(&self) -> String {
        match self.result {
            LeastRootless::Found { q } => q.to_string(),
            LeastRootless::NotBelow { ceiling } => format!("none up to {ceiling}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityRow {
    #[serde(flatten)]
    pub density: RootlessDensity,
    pub ratio: String,
    /// Decimal, 6 places.
    pub value: String,
}

impl From<RootlessDensity> for DensityRow {
    fn from(d: RootlessDensity) -> Self {
        DensityRow { density: d, ratio: d.ratio().to_string(), value: format!("{:.6}", d.value()) }
    }
}

impl Row for DensityRow {
    fn header() -> &'static [&'static str] {
        &["p", "a", "x", "rootless", "primes", "ratio", "value"]
    }

    fn cells(&self) -> Vec<String> {
        let d = &self.density;
        vec![
            d.p.to_string(),
            d.a.to_string(),
            d.x.to_string(),
            d.rootless.to_string(),
            d.primes.to_string(),
            self.ratio.clone(),
            self.value.clone(),
        ]
    }
}

impl Row for PropPomRow {
    fn header() -> &'static [&'static str] {
        &["x", "k", "l", "pi", "S", "T", "p_kl", "bound", "violation"]
    }

    fn cells(&self) -> Vec<String> {
        let r = &self.record;
        vec![
            r.x.to_string(),
            r.k.to_string(),
            r.l.to_string(),
            r.pi.to_string(),
            r.s.to_string(),
            r.t.to_string(),
            r.p_kl.to_string(),
            self.bound.to_string(),
            self.violation.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Lhs6Row {
    pub m_prime: u64,
    pub lhs6: String,
    pub positive: bool,
}

impl Row for Lhs6Row {
    fn header() -> &'static [&'static str] {
        &["m_prime", "lhs6", "positive"]
    }

    fn cells(&self) -> Vec<String> {
        vec![self.m_prime.to_string(), self.lhs6.clone(), self.positive.to_string()]
    }

    fn text(&self) -> String {
        format!("{} {}", self.m_prime, self.lhs6)
    }
}

impl Row for BtRecord {
    fn header() -> &'static [&'static str] {
        &["x", "k", "l", "pi", "ratio", "exceeds"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.x.to_string(),
            self.k.to_string(),
            self.l.to_string(),
            self.pi.to_string(),
            self.ratio.to_string(),
            self.exceeds.to_string(),
        ]
    }
}

impl Row for ThresholdSample {
    fn header() -> &'static [&'static str] {
        &["x", "f"]
    }

    fn cells(&self) -> Vec<String> {
        vec![self.x.to_string(), self.f.to_string()]
    }
}

impl Row for PhiScan {
    fn header() -> &'static [&'static str] {
        &["limit", "checked", "failures"]
    }

    fn cells(&self) -> Vec<String> {
        vec![self.limit.to_string(), self.checked.to_string(), join(&self.failures)]
    }
}

impl Row for RoughPrimeCount {
    fn header() -> &'static [&'static str] {
        &["m_prime", "threshold", "pi1", "overlap"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.m_prime.to_string(),
            self.threshold.to_string(),
            self.pi1.to_string(),
            self.overlap.to_string(),
        ]
    }
}

impl Row for ExcludedResidue {
    fn header() -> &'static [&'static str] {
        &["m_prime", "s", "m0", "a", "coprime", "in_range", "outside_c"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.m_prime.to_string(),
            self.s.to_string(),
            self.m0.to_string(),
            self.a.to_string(),
            self.coprime.to_string(),
            self.in_range.to_string(),
            self.outside_c.to_string(),
        ]
    }
}
