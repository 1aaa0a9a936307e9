//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! A criterion may fail for a documented reason (the published data disagrees
//! with the computation). Such failures are pinned: the suite checks that the
//! observed deviation is exactly the recorded one, so any change in behaviour
//! still breaks the build. The process exits nonzero if any criterion deviates
//! from its expectation.

use std::collections::BTreeSet;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rgl_cli::baseline::PaperBaseline;
use rgl_cli::manifest::RunManifest;
use rgl_core::analytic::{self, hp, PrimeTable};
use rgl_core::arith::{self, FactorBudget, PhiLabel};
use rgl_core::equation::{self, EquationInstance};
use rgl_core::obstruction::{self, PairStatus, ScanRecord};
use rgl_core::poly::{self, build_p_i64, FactorizationShape, ShapeOptions};

enum Expect {
    Pass,
    /// Fails for a recorded reason; `pinned` checks the observed deviation.
    KnownFail { pinned: bool },
}

struct Outcome {
    pass: bool,
    expect: Expect,
    detail: String,
}

impl Outcome {
    fn pass_if(pass: bool, detail: String) -> Self {
        Outcome { pass, expect: Expect::Pass, detail }
    }
}

fn rgl(args: &[&str]) -> (i32, String, Duration) {
    let t = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_rgl")).args(args).output().expect("run rgl");
    (o.status.code().unwrap_or(-1), String::from_utf8(o.stdout).unwrap(), t.elapsed())
}

/// Unlisted survivors of the full scan, each confirmed by an independent oracle.
const UNLISTED_SURVIVORS: [(i64, u64); 11] = [
    (-99961, 17),
    (-58061, 2903),
    (-42839, 21419),
    (-17183, 71),
    (-8191, 13),
    (5179, 863),
    (13753, 17),
    (15299, 15299),
    (28979, 28979),
    (38639, 38639),
    (54199, 83),
];

fn criterion_1() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s0.jsonl");
    let (code, _, took) =
        rgl(&["--jobs", "4", "--out", out.to_str().unwrap(), "obstruct", "scan", "--amax", "100000", "--qbound", "100"]);
    let records: Vec<ScanRecord> = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let discovered: BTreeSet<(i64, u64)> =
        records.iter().filter(|r| r.status == PairStatus::Survivor).map(|r| (r.a, r.p)).collect();
    let baseline = PaperBaseline::embedded().unwrap();
    let listed = baseline.listed_pairs();
    let verified: BTreeSet<(i64, u64)> = listed
        .iter()
        .copied()
        .filter(|&(a, p)| obstruction::candidate_primes(a).unwrap().contains(&p))
        .collect();
    let anomaly: Vec<&ScanRecord> =
        records.iter().filter(|r| (r.a, r.p) == (-8191, 11) && r.status == PairStatus::Discrepancy).collect();
    let anomaly_cert = anomaly
        .first()
        .and_then(|r| r.certificate())
        .map(|c| c.verify().is_ok().then_some(c.q))
        .unwrap_or(None);
    let unlisted: BTreeSet<(i64, u64)> = discovered.difference(&verified).copied().collect();
    let unlisted_backed = records
        .iter()
        .filter(|r| r.status == PairStatus::Discrepancy && unlisted.contains(&(r.a, r.p)))
        .all(|r| r.is_certified(100));
    let fiat = records.iter().filter(|r| r.status == PairStatus::Fiat).count();
    let exact = discovered == verified;
    let resolved = anomaly_cert.is_some();
    let in_time = took <= Duration::from_secs(600);
    let detail = format!(
        "{} discovered ({} of the {} listed pairs in the candidate set, {} unlisted), {fiat} fiat; \
         (-8191,11) {}; exit {code}; {:.1}s",
        discovered.len(),
        verified.intersection(&discovered).count(),
        verified.len(),
        unlisted.len(),
        match anomaly_cert {
            Some(q) => format!("eliminated by a replayable certificate at q = {q}"),
            None => "unresolved".into(),
        },
        took.as_secs_f64()
    );
    let pinned = verified.len() == 16
        && verified.is_subset(&discovered)
        && unlisted == UNLISTED_SURVIVORS.into_iter().collect()
        && unlisted_backed
        && resolved
        && anomaly_cert == Some(11)
        && fiat == 9589
        && code == 0
        && in_time;
    let pass = exact && resolved && in_time;
    Outcome {
        pass,
        expect: Expect::KnownFail { pinned },
        detail: if pass { detail } else { format!("{detail}; exact set comparison fails on the unlisted survivors") },
    }
}

fn brute_solutions(a_lo: i64, a_hi: i64, n_max: u64) -> Vec<EquationInstance> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        let f = arith::factorial(n);
        let cap = &f - a_lo;
        for m in 3u32.. {
            if arith::repunit(&BigInt::from(2), m) > cap {
                break;
            }
            let mut b = BigInt::from(2);
            loop {
                let r = arith::repunit(&b, m);
                if r > cap {
                    break;
                }
                let a = &f - &r;
                if a >= BigInt::from(a_lo) && a <= BigInt::from(a_hi) {
                    out.push(EquationInstance { n, m, b: b.clone(), a: i64::try_from(&a).unwrap() });
                }
                b += 1;
            }
        }
    }
    out.sort();
    out
}

fn criterion_2() -> Outcome {
    let (code, stdout, took) = rgl(&["eqsearch", "--a", "-1", "--nmax", "100"]);
    let mut found = equation::search_range(-5, 5, 12, 4).unwrap();
    found.sort();
    let oracle = found == brute_solutions(-5, 5, 12);
    let in_time = took <= Duration::from_secs(60);
    let lines: Vec<&str> = stdout.lines().collect();
    let pass = lines == ["5 5 3 -1"] && oracle && in_time && code == 0;
    let pinned = lines == ["3 3 2 -1", "5 5 3 -1"] && oracle && in_time && code == 0;
    Outcome {
        pass,
        expect: Expect::KnownFail { pinned },
        detail: format!(
            "found {:?} (n m b a); brute-force oracle n <= 12, |a| <= 5: {}; {:.1}s{}",
            lines,
            if oracle { "agrees" } else { "DISAGREES" },
            took.as_secs_f64(),
            if pass { "" } else { "; (3,3,2) is a genuine extra solution: 3! = 7 - 1" }
        ),
    }
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in [3u64, 5, 7, 11, 13] {
        for a in (-30i64..=30).filter(|&a| a != -(p as i64)) {
            let a_big = BigInt::from(a);
            let closed = poly::discriminant_closed(p, &a_big).unwrap();
            let res = poly::discriminant_resultant(&build_p_i64(p, a).unwrap()).unwrap();
            checked += 1;
            if closed != res.abs() {
                bad.push((p, a));
            }
        }
    }
    Outcome::pass_if(bad.is_empty(), format!("{checked} pairs, {} mismatches {bad:?}", bad.len()))
}

fn criterion_4() -> Outcome {
    let mut eis_bad = Vec::new();
    let mut dumas_bad = Vec::new();
    let mut dumas_cases = 0;
    for p in [7u64, 11, 13] {
        for a1 in (-20i64..=20).filter(|&a1| a1 != 0 && a1 != -1) {
            let shifted = build_p_i64(p, p as i64 * a1).unwrap().shift_plus_one();
            let predicate = (a1 + 1) % p as i64 != 0;
            if poly::is_eisenstein(&shifted, p) != predicate {
                eis_bad.push((p, a1));
            }
            if !predicate {
                dumas_cases += 1;
                let v = poly::newton_polygon(&shifted, p).unwrap().reflected().vertices;
                let n = p as usize;
                let ok = v.len() == 3 && v[0] == (0, 0) && v[1] == (n - 2, 1) && v[2].0 == n - 1 && v[2].1 >= 2;
                if !ok {
                    dumas_bad.push((p, a1, v));
                }
            }
        }
    }
    let baseline = PaperBaseline::embedded().unwrap();
    let mut shape_bad = Vec::new();
    let mut rootless = Vec::new();
    let mut certified = 0;
    for (a, p) in baseline.listed_pairs() {
        let a_big = BigInt::from(a);
        let shape = poly::classify_shape(p, &a_big, &ShapeOptions::default()).unwrap();
        let verified = poly::verify_shape(p, &a_big, &shape).is_ok();
        match obstruction::integer_root(p, a).unwrap() {
            Some(_) if verified && matches!(shape, FactorizationShape::LinearTimesIrreducible { .. }) => certified += 1,
            Some(_) => shape_bad.push((a, p)),
            None => rootless.push((a, p)),
        }
    }
    let pass = eis_bad.is_empty() && dumas_bad.is_empty() && dumas_cases > 0 && shape_bad.is_empty() && rootless.len() <= 1;
    Outcome::pass_if(
        pass,
        format!(
            "Eisenstein mismatches {eis_bad:?}; Dumas cases {dumas_cases}, bad {dumas_bad:?}; \
             {certified} rooted listed pairs linear x irreducible with verified certificates; \
             no integer root: {rootless:?}; failures {shape_bad:?}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    for m in std::iter::once(3).chain(5..=1000u64) {
        if !analytic::class_set_c(m).unwrap().lhs6.is_positive() {
            bad.push(m);
        }
    }
    let four = analytic::class_set_c(4).unwrap().lhs6.is_zero();
    let took = t.elapsed();
    let (_, cli_four, _) = rgl(&["analytic", "lhs6", "--m", "4"]);
    let pass = bad.is_empty() && four && cli_four == "0\n" && took <= Duration::from_secs(5);
    Outcome::pass_if(
        pass,
        format!("nonpositive at {bad:?}; lhs6(4) = {}; {:.2}s", cli_four.trim(), took.as_secs_f64()),
    )
}

fn criterion_6() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("prop.csv");
    let (code, _, took) = rgl(&[
        "--format", "csv", "--out", out.to_str().unwrap(), "analytic", "prop-pom", "--x", "1e6", "--kmax", "101",
        "--constant", "10",
    ]);
    let m: RunManifest =
        serde_json::from_slice(&fs::read(dir.path().join("prop.csv.manifest.json")).unwrap()).unwrap();
    let fitted: f64 = m.metadata["fitted_constant"].as_str().unwrap().parse().unwrap();
    let violations = m.metadata["violations"].as_array().unwrap().len();
    let rows = csv::Reader::from_path(&out).unwrap().records().count();
    let expected_rows: u64 = (3..=101u32).map(|k| arith::SmallestFactorTable::new(101).totient(k)).sum();
    let pass = code == 0
        && violations == 0
        && fitted <= 10.0
        && rows as u64 == expected_rows
        && took <= Duration::from_secs(120);
    Outcome::pass_if(
        pass,
        format!("x = 1e6, 3 <= k <= 101, {rows} classes; fitted C = {fitted:.4}, {violations} violations at C = 10; {:.1}s", took.as_secs_f64()),
    )
}

fn criterion_7() -> Outcome {
    let table = PrimeTable::new(1_000_000).unwrap();
    let mut worst = (0.0f64, 0, 0, 0);
    let mut over = 0;
    let mut rows = 0;
    for k in 3..=101u64 {
        let xs: BTreeSet<u64> = [10 * k, 100 * k, 10_000, 1_000_000].into_iter().filter(|&x| x > k).collect();
        for x in xs {
            for r in analytic::bt_table(&table, x, k).unwrap() {
                rows += 1;
                over += r.exceeds as usize;
                let v = hp::to_f64(&r.ratio);
                if v > worst.0 {
                    worst = (v, r.x, r.k, r.l);
                }
            }
        }
    }
    Outcome::pass_if(
        over == 0,
        format!("{rows} ratios, {over} above 2; largest {:.4} at x = {}, k = {}, l = {}", worst.0, worst.1, worst.2, worst.3),
    )
}

fn criterion_8() -> Outcome {
    let legendre = (4..=10_000u64).all(|n| 2 * arith::legendre_valuation(n, 2).unwrap() > n);
    let mut nu2_bad = Vec::new();
    for b in 2..=50u64 {
        for m in 2..=50u64 {
            let direct = arith::int_valuation(&arith::repunit(&BigInt::from(b), m as u32), 2).unwrap();
            if arith::nu2_repunit(b, m).unwrap() != direct {
                nu2_bad.push((b, m));
            }
        }
    }
    let mut third = Vec::new();
    let mut uncertified = Vec::new();
    let mut cofactors = 0;
    for m in 2..=50u32 {
        for b in 2..=20i64 {
            let r = arith::classify_phi_divisors(m, &BigInt::from(b), FactorBudget::default()).unwrap();
            if r.divisors.iter().any(|d| d.label == PhiLabel::Unexpected) {
                third.push((m, b));
            }
            cofactors += r.unfactored.len();
            if !r.unfactored_split() {
                uncertified.push((m, b));
            }
        }
    }
    let pass = legendre && nu2_bad.is_empty() && third.is_empty() && uncertified.is_empty();
    Outcome::pass_if(
        pass,
        format!(
            "nu2(n!) > n/2 on [4, 1e4]: {legendre}; nu2_repunit mismatches on 2..50 x 2..50: {nu2_bad:?}; \
             third-category primes (m <= 50, b <= 20): {third:?}; {cofactors} unsplit cofactors, \
             uncertified (order test): {uncertified:?}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut h = hp::Hp::new();
    let start = h.parse("405149999").unwrap();
    let f0 = analytic::first_proof_threshold(&mut h, &start).unwrap();
    let hi = h.parse("1e12").unwrap();
    let s = analytic::threshold_samples(&start, &hi, 1000).unwrap();
    let increasing = s.windows(2).all(|w| hp::gt(&w[1].f, &w[0].f));
    let pass = f0.is_positive() && increasing && s.len() == 1000 && hp::PREC >= 80;
    Outcome::pass_if(
        pass,
        format!(
            "f(4.0515e8 - 1) = {:.6e}; increasing on 1000 log-spaced points to 1e12: {increasing}; {} bits",
            hp::to_f64(&f0),
            hp::PREC
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for p in [7u64, 11, 13] {
        let a = p as i64;
        let eis = poly::is_eisenstein(&build_p_i64(p, a).unwrap().shift_plus_one(), p);
        let d = obstruction::rootless_density(p, a, 100_000).unwrap();
        let floor = 1.0 / (p - 1) as f64 - 0.05;
        pass &= eis && d.value() >= floor;
        parts.push(format!("(p, a) = ({p}, {a}): {:.4} >= {floor:.4}", d.value()));
    }
    Outcome::pass_if(
        pass,
        format!(
            "asymptotic statements not desk-checkable; rootless densities at x = 1e5 for Eisenstein cases: {}",
            parts.join(", ")
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    // `cargo test` passes harness flags such as `--nocapture`; only a filter matters here.
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let criteria: [Criterion; 10] = [
        ("S0 reproduction", criterion_1),
        ("unique small solution", criterion_2),
        ("discriminant oracle", criterion_3),
        ("factorization shapes", criterion_4),
        ("lhs6 positivity", criterion_5),
        ("progression sum bound", criterion_6),
        ("Brun-Titchmarsh ratio", criterion_7),
        ("valuation invariants", criterion_8),
        ("first-proof threshold", criterion_9),
        ("rootless densities", criterion_10),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let label = format!("criterion {} ({name})", i + 1);
        if filter.as_deref().is_some_and(|f| !label.contains(f)) {
            continue;
        }
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = match o.expect {
            Expect::Pass if o.pass => "",
            Expect::Pass => "  [UNEXPECTED]",
            Expect::KnownFail { pinned: true } if !o.pass => "  [known deviation, observed values pinned]",
            Expect::KnownFail { .. } => "  [UNEXPECTED: pinned observation changed]",
        };
        if note.contains("UNEXPECTED") {
            unexpected += 1;
        }
        println!("{label}: {status} - {}{note}", o.detail);
    }
    if unexpected > 0 {
        println!("{unexpected} criteria deviate from their recorded expectation");
        std::process::exit(1);
    }
}
