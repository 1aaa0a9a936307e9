//! `reproduce-all`: every reproduction in one run, diffed against the baseline.
//!
//! A discrepancy is acceptable when it carries replayable evidence (an
//! obstruction certificate, a survival witness, or an exactly verified
//! solution). Anything else lands in `problems`, which decides the exit code.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use rgl_core::arith::PrimeSieve;
use rgl_core::equation::{self, EquationInstance};
use rgl_core::obstruction::{self, ScanParams};
use rgl_core::poly::{self, FactorizationShape, ShapeOptions};
use serde::Serialize;
use serde_json::{json, Value};

use crate::app::{disc_row, lhs6_row, Ctx, ReproduceArgs};
use crate::baseline::{PaperBaseline, DIGEST};
use crate::exit::{CliError, ExitCode};
use crate::output;

/// Listed pairs with `|a| <= a_max`, plus the fiat pairs `(-p, p)` in range.
pub fn listed_in_range(b: &PaperBaseline, a_max: u64) -> Vec<(i64, u64)> {
    let mut v: Vec<(i64, u64)> =
        b.listed_pairs().into_iter().filter(|&(a, _)| a.unsigned_abs() <= a_max).collect();
    let hi = b.s0.fiat.p_max.min(a_max);
    if hi >= b.s0.fiat.p_min {
        let sieve = PrimeSieve::new(hi.max(2)).expect("small sieve");
        v.extend(sieve.primes().filter(|&p| p >= b.s0.fiat.p_min).map(|p| (-(p as i64), p)));
    }
    v.sort_unstable();
    v
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionDiff {
    #[serde(flatten)]
    pub solution: EquationInstance,
    /// `match`, `unlisted` or `missing`.
    pub status: &'static str,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeSweepRow {
    pub a: i64,
    pub p: u64,
    pub listed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<FactorizationShape>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

struct Bundle<'a> {
    dir: &'a Path,
    ctx: &'a mut Ctx,
}

impl Bundle<'_> {
    fn put(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let e = output::write_file(&self.dir.join(name), bytes)?;
        self.ctx.outputs.push(e);
        Ok(())
    }
}

pub fn run(args: &ReproduceArgs, dir: &Path, ctx: &mut Ctx) -> Result<ExitCode, CliError> {
    let baseline = PaperBaseline::load(args.baseline.as_deref())?;
    let jobs = ctx.jobs;
    let mut problems: Vec<String> = Vec::new();
    let mut bundle = Bundle { dir, ctx };

    // exceptional set
    let params = ScanParams { a_max: args.amax, q_bound: args.qbound };
    let scan = obstruction::reproduce_s0(params, jobs)?;
    let listed = listed_in_range(&baseline, args.amax);
    let diff = obstruction::diff_against(&scan, &listed)?;
    bundle.put("s0.jsonl", &output::jsonl(&scan.records)?)?;
    bundle.put("s0_diff.jsonl", &output::jsonl(&diff)?)?;
    let kept: BTreeSet<(i64, u64)> = scan.pairs().into_iter().collect();
    let listed_nonfiat: Vec<(i64, u64)> =
        baseline.listed_pairs().into_iter().filter(|&(a, _)| a.unsigned_abs() <= args.amax).collect();
    let matched: Vec<(i64, u64)> = listed_nonfiat.iter().copied().filter(|p| kept.contains(p)).collect();
    let fiat_expected = listed.len() - listed_nonfiat.len();
    let fiat_matched = listed.iter().filter(|&&(a, p)| a == -(p as i64) && kept.contains(&(a, p))).count();
    let mut uncertified = Vec::new();
    for (line, r) in diff.iter().enumerate() {
        if !r.is_certified(args.qbound) {
            uncertified.push((r.a, r.p));
            problems.push(format!("s0_diff.jsonl:{}: uncertified discrepancy ({}, {})", line + 1, r.a, r.p));
        }
    }
    if fiat_matched != fiat_expected {
        problems.push(format!("s0.jsonl: {fiat_matched} of {fiat_expected} fiat pairs present"));
    }
    let s0 = json!({
        "params": params,
        "listed_matched": matched,
        "fiat_matched": fiat_matched,
        "fiat_expected": fiat_expected,
        "discovered": scan.discovered().len(),
        "discrepancies": diff.iter().map(|r| json!({
            "a": r.a, "p": r.p, "note": r.note, "certified": r.is_certified(args.qbound),
        })).collect::<Vec<_>>(),
        "uncertified": uncertified,
    });

    // equation search at the known value of a
    let known = &baseline.known_solution;
    let found = equation::search_fixed_a(known.a, args.nmax.max(known.n), jobs)?;
    let known_inst = EquationInstance::new(known.n, known.m, BigInt::from(known.b), known.a)?;
    let mut eq_diff: Vec<SolutionDiff> = found
        .iter()
        .map(|s| SolutionDiff {
            solution: s.clone(),
            status: if *s == known_inst { "match" } else { "unlisted" },
            verified: s.verify().is_ok(),
        })
        .collect();
    if !found.contains(&known_inst) {
        eq_diff.push(SolutionDiff { solution: known_inst.clone(), status: "missing", verified: true });
    }
    bundle.put("eqsearch.jsonl", &output::jsonl(&found)?)?;
    bundle.put("eqsearch_diff.jsonl", &output::jsonl(&eq_diff)?)?;
    for (line, d) in eq_diff.iter().enumerate() {
        if !d.verified || d.status == "missing" {
            problems.push(format!("eqsearch_diff.jsonl:{}: {} solution not backed", line + 1, d.status));
        }
    }
    let eq = json!({
        "a": known.a,
        "n_max": args.nmax,
        "solutions": found.len(),
        "known_found": found.contains(&known_inst),
        "unlisted": eq_diff.iter().filter(|d| d.status == "unlisted").map(|d| &d.solution).collect::<Vec<_>>(),
    });

    // positivity of the exact quantity
    let m_hi = baseline.lhs6_positive.max();
    let rows = (2..=m_hi).map(lhs6_row).collect::<Result<Vec<_>, _>>()?;
    bundle.put("lhs6.csv", &output::csv(&rows)?)?;
    let mismatches: Vec<u64> = rows
        .iter()
        .filter(|r| r.positive != baseline.lhs6_positive.contains(r.m_prime))
        .map(|r| r.m_prime)
        .collect();
    for m in &mismatches {
        problems.push(format!("lhs6.csv: m' = {m} disagrees with the listed positivity range"));
    }
    let lhs6 = json!({ "range": [2, m_hi], "mismatches": mismatches });

    // discriminant oracle
    let grid: Vec<(u64, i64)> = [3u64, 5, 7, 11, 13]
        .iter()
        .flat_map(|&p| (-30i64..=30).filter(move |&a| a != -(p as i64)).map(move |a| (p, a)))
        .collect();
    let disc_rows = grid
        .par_iter()
        .map(|&(p, a)| disc_row(p, &BigInt::from(a)))
        .collect::<Result<Vec<_>, _>>()?;
    bundle.put("disc.jsonl", &output::jsonl(&disc_rows)?)?;
    let disc_bad: Vec<(u64, String)> =
        disc_rows.iter().filter(|r| !r.equal).map(|r| (r.p, r.a.clone())).collect();
    for (line, r) in disc_rows.iter().enumerate().filter(|(_, r)| !r.equal) {
        problems.push(format!("disc.jsonl:{}: closed form differs at p = {}, a = {}", line + 1, r.p, r.a));
    }
    let disc = json!({ "checked": disc_rows.len(), "mismatches": disc_bad });

    // shapes of the listed and discovered pairs
    let listed_set: BTreeSet<(i64, u64)> = listed_nonfiat.iter().copied().collect();
    let mut targets: BTreeSet<(i64, u64)> = listed_set.clone();
    targets.extend(scan.discovered());
    let shape_rows: Vec<ShapeSweepRow> = targets
        .par_iter()
        .map(|&(a, p)| shape_sweep(a, p, listed_set.contains(&(a, p)), args.shape_pmax))
        .collect();
    bundle.put("shapes.jsonl", &output::jsonl(&shape_rows)?)?;
    for (line, r) in shape_rows.iter().enumerate() {
        if r.verified == Some(false) {
            problems.push(format!("shapes.jsonl:{}: shape of ({}, {}) failed verification", line + 1, r.a, r.p));
        }
    }
    let shapes = json!({
        "classified": shape_rows.iter().filter(|r| r.shape.is_some()).count(),
        "linear_times_irreducible": shape_rows.iter()
            .filter(|r| matches!(r.shape, Some(FactorizationShape::LinearTimesIrreducible { .. }))).count(),
        "without_root": shape_rows.iter()
            .filter(|r| r.shape.as_ref().is_some_and(|s| s.root().is_none()))
            .map(|r| (r.a, r.p)).collect::<Vec<_>>(),
        "skipped": shape_rows.iter().filter(|r| r.shape.is_none()).map(|r| (r.a, r.p)).collect::<Vec<_>>(),
    });

    let status = if problems.is_empty() { "ok" } else { "fail" };
    let report: Value = json!({
        "status": status,
        "baseline_sha256": DIGEST,
        "s0": s0,
        "eqsearch": eq,
        "lhs6": lhs6,
        "disc": disc,
        "shapes": shapes,
        "problems": problems,
    });
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    bundle.put("report.json", text.as_bytes())?;
    eprintln!("reproduce-all: {status}; report in {}", dir.join("report.json").display());
    for p in &problems {
        eprintln!("  {p}");
    }
    ctx_meta(bundle.ctx, &report);
    Ok(if problems.is_empty() { ExitCode::Ok } else { ExitCode::Verification })
}

fn ctx_meta(ctx: &mut Ctx, report: &Value) {
    ctx.metadata = json!({ "status": report["status"], "problems": report["problems"] });
}

fn shape_sweep(a: i64, p: u64, listed: bool, p_max: u64) -> ShapeSweepRow {
    let mut row = ShapeSweepRow { a, p, listed, shape: None, verified: None, note: None };
    if p > p_max {
        row.note = Some(format!("not classified: p > {p_max}"));
        return row;
    }
    let a_big = BigInt::from(a);
    match poly::classify_shape(p, &a_big, &ShapeOptions::default()) {
        Ok(s) => {
            row.verified = Some(poly::verify_shape(p, &a_big, &s).is_ok());
            if s.root().is_none() {
                row.note = Some("no integer root".into());
            }
            row.shape = Some(s);
        }
        Err(e) => row.note = Some(format!("not classified: {e}")),
    }
    row
}
