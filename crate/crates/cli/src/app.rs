//! Argument parsing and one thin handler per subcommand.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Signed;
use rgl_core::analytic::{self, hp, PrimeTable};
use rgl_core::arith::PrimeSieve;
use rgl_core::equation;
use rgl_core::obstruction::{self, PairStatus, ScanParams, ScanRecord};
use rgl_core::poly::{self, ShapeOptions};
use serde::Serialize;
use serde_json::{json, Value};

use crate::baseline::PaperBaseline;
use crate::exit::{CliError, ExitCode};
use crate::manifest::{RunManifest, Timing};
use crate::output::{Emitted, Format, Row, Target};
use crate::reproduce;
use crate::rows::*;

#[derive(Debug, Parser, Serialize)]
#[command(name = "rgl", version, about = "Distances between factorials and repunits")]
pub struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output file (a directory for `reproduce-all`); standard output otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record format; plain text on standard output, JSON lines in files, by default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Prime sieve cache file, reused across runs.
    #[arg(long, global = true)]
    pub seed_cache: Option<PathBuf>,
    /// Where to write the run manifest; defaults to `<out>.manifest.json`, or
    /// standard error without `--out`.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Local obstructions and the exceptional set.
    #[command(subcommand)]
    Obstruct(ObstructCmd),
    /// Solutions of n! = (b^m - 1)/(b - 1) + a.
    Eqsearch(EqsearchArgs),
    /// The polynomials Phi_p(X) + a.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Numerical checks of the analytic inputs.
    #[command(subcommand)]
    Analytic(AnalyticCmd),
    /// Run every reproduction and diff it against the shipped baseline.
    ReproduceAll(ReproduceArgs),
}

/// Integers, also in scientific notation such as `1e6` or `4.0515e8`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let bad = || format!("{s:?} is not a nonnegative integer");
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<u32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let frac_len = frac.len() as u32;
    if frac_len > exp && frac[(exp as usize)..].chars().any(|c| c != '0') {
        return Err(bad());
    }
    let digits: String = format!("{int}{frac}");
    let mut v: u128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    if exp >= frac_len {
        v = 10u128.checked_pow(exp - frac_len).and_then(|p| v.checked_mul(p)).ok_or_else(bad)?;
    } else {
        v /= 10u128.pow(frac_len - exp);
    }
    u64::try_from(v).map_err(|_| bad())
}

#[derive(Debug, Subcommand, Serialize)]
pub enum ObstructCmd {
    /// Scan odd a with 3 <= |a| <= amax and diff the survivors against the baseline.
    Scan {
        #[arg(long, default_value = "100000", value_parser = parse_count)]
        amax: u64,
        #[arg(long, default_value = "100", value_parser = parse_count)]
        qbound: u64,
        /// Baseline file to diff against instead of the shipped one.
        #[arg(long)]
        baseline: Option<PathBuf>,
        /// Emit only survivors, fiat pairs and discrepancies.
        #[arg(long)]
        survivors_only: bool,
    },
    /// Obstruction certificate for one pair, or a survival witness.
    Cert {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "100", value_parser = parse_count)]
        qbound: u64,
    },
    /// Least prime modulo which Phi_p(X) + a has no root.
    LeastRootless {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, default_value = "100000", value_parser = parse_count)]
        ceiling: u64,
    },
    /// Proportion of primes up to x modulo which Phi_p(X) + a has no root.
    Density {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, default_value = "100000", value_parser = parse_count)]
        x: u64,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct EqsearchArgs {
    /// A single value of a.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["amin", "amax"])]
    pub a: Option<i64>,
    #[arg(long, allow_hyphen_values = true, requires = "amax")]
    pub amin: Option<i64>,
    #[arg(long, allow_hyphen_values = true, requires = "amin")]
    pub amax: Option<i64>,
    #[arg(long, default_value = "100", value_parser = parse_count)]
    pub nmax: u64,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum PolyCmd {
    /// Closed-form discriminant next to the Sylvester-resultant value.
    Disc(PolyArgs),
    /// Newton polygon of Phi_p(X) + a, or of Phi_p(X + 1) + a with --shifted.
    Newton {
        #[command(flatten)]
        poly: PolyArgs,
        /// Defaults to p.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        shifted: bool,
    },
    /// Certified factorization shape.
    Shape {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value = "1000", value_parser = parse_count)]
        cert_bound: u64,
    },
    /// Integer roots with multiplicity.
    Roots(PolyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct PolyArgs {
    #[arg(long)]
    pub p: u64,
    /// Any integer.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
}

impl PolyArgs {
    fn a(&self) -> Result<BigInt, CliError> {
        self.a.parse().map_err(|_| CliError::usage(format!("--a {:?} is not an integer", self.a)))
    }
}

#[derive(Debug, Subcommand, Serialize)]
pub enum AnalyticCmd {
    /// |T(x;k,l)| against ln p_kl / p_kl + C sqrt(k) ln k / phi(k), one row per (k, l).
    PropPom {
        #[arg(long, default_value = "1e6", value_parser = parse_count)]
        x: u64,
        #[arg(long, default_value = "101", value_parser = parse_count)]
        kmax: u64,
        #[arg(long, default_value = "10")]
        constant: String,
    },
    /// Exact 1 - ((1 + delta)/m' + |C|/phi(m')).
    Lhs6 {
        #[arg(long, value_parser = parse_count, conflicts_with = "mmax")]
        m: Option<u64>,
        /// Every m' from 2 to this bound.
        #[arg(long, value_parser = parse_count)]
        mmax: Option<u64>,
    },
    /// Brun-Titchmarsh ratios pi(x;k,l) phi(k) ln(x/k) / x.
    Bt {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, value_parser = parse_count)]
        k: u64,
        /// All classes coprime to k by default.
        #[arg(long, value_parser = parse_count)]
        l: Option<u64>,
    },
    /// The first-proof threshold function, at one point or on a log-spaced sample.
    Threshold {
        /// Evaluate at this point only.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value = analytic::THRESHOLD_START)]
        lo: String,
        #[arg(long, default_value = "1e12")]
        hi: String,
        #[arg(long, default_value = "1000", value_parser = parse_count)]
        samples: u64,
    },
    /// The totient lower bound for every 3 <= m' <= limit.
    PhiScan {
        #[arg(long, default_value = "1e6", value_parser = parse_count)]
        limit: u64,
    },
    /// Primes in (m'/2, m'] with (q - 1)/2 free of factors below (ln m')^3.
    Rough {
        #[arg(long, value_parser = parse_count)]
        m: u64,
    },
    /// The excluded residue and its three checks.
    Excluded {
        #[arg(long, value_parser = parse_count)]
        m: u64,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct ReproduceArgs {
    #[arg(long, default_value = "100000", value_parser = parse_count)]
    pub amax: u64,
    #[arg(long, default_value = "100", value_parser = parse_count)]
    pub qbound: u64,
    #[arg(long, default_value = "100", value_parser = parse_count)]
    pub nmax: u64,
    /// Pairs with larger p are listed in the shape report but not classified.
    #[arg(long, default_value = "200", value_parser = parse_count)]
    pub shape_pmax: u64,
    #[arg(long)]
    pub baseline: Option<PathBuf>,
}

/// Per-run state shared by the handlers.
pub struct Ctx {
    pub jobs: usize,
    pub target: Target,
    pub seed_cache: Option<PathBuf>,
    pub outputs: Vec<Emitted>,
    pub metadata: Value,
}

impl Ctx {
    fn emit<R: Row>(&mut self, rows: &[R]) -> Result<(), CliError> {
        let bytes = self.target.render(rows)?;
        let e = self.target.write(&bytes)?;
        self.outputs.push(e);
        Ok(())
    }

    /// A sieve up to `limit`, through the cache file when one is configured.
    pub fn sieve(&self, limit: u64) -> Result<PrimeSieve, CliError> {
        let path = self.seed_cache.clone().or_else(|| {
            std::env::var_os("RGL_CACHE_DIR").map(|d| Path::new(&d).join(format!("sieve-{limit}.bin")))
        });
        Ok(match path {
            Some(p) => PrimeSieve::load_or_build(&p, limit)?,
            None => PrimeSieve::new(limit)?,
        })
    }
}

/// Parse `args` (including the program name), run, write the manifest, and
/// return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::Usage.code() } else { 0 };
        }
    };
    let started = SystemTime::now();
    let clock = Instant::now();
    let jobs = cli.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let mut ctx = Ctx {
        jobs,
        target: Target { path: cli.out.clone(), format: cli.format },
        seed_cache: cli.seed_cache.clone(),
        outputs: Vec::new(),
        metadata: Value::Null,
    };
    let result = if jobs == 0 {
        Err(CliError::usage("--jobs must be at least 1"))
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut ctx)),
            Err(e) => Err(CliError::new(ExitCode::Io, format!("thread pool: {e}"))),
        }
    };
    let code = match result {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    };
    let manifest = RunManifest {
        command: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        config: serde_json::to_value(&cli).unwrap_or(Value::Null),
        version: env!("CARGO_PKG_VERSION").to_string(),
        jobs,
        exit_code: code.code(),
        outputs: ctx.outputs.into_iter().map(Into::into).collect(),
        metadata: ctx.metadata,
        timing: Timing::new(started, clock.elapsed()),
    };
    match write_manifest(&cli, &manifest) {
        Ok(()) => code.code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::Io.code()
        }
    }
}

fn manifest_path(cli: &Cli) -> Option<PathBuf> {
    if let Some(p) = &cli.manifest {
        return Some(p.clone());
    }
    let out = cli.out.as_ref()?;
    Some(match cli.command {
        Command::ReproduceAll(_) => out.join("manifest.json"),
        _ => {
            let mut s = out.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        }
    })
}

fn write_manifest(cli: &Cli, m: &RunManifest) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(m)?;
    text.push('\n');
    match manifest_path(cli) {
        Some(p) => {
            crate::output::write_file(&p, text.as_bytes())?;
        }
        None => eprint!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: &Cli, ctx: &mut Ctx) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Obstruct(c) => obstruct(c, ctx),
        Command::Eqsearch(a) => eqsearch(a, ctx),
        Command::Poly(c) => poly_cmd(c, ctx),
        Command::Analytic(c) => analytic_cmd(c, ctx),
        Command::ReproduceAll(a) => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("reproduce-out"));
            reproduce::run(a, &dir, ctx)
        }
    }
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::Ok
    } else {
        ExitCode::Verification
    }
}

fn obstruct(cmd: &ObstructCmd, ctx: &mut Ctx) -> Result<ExitCode, CliError> {
    match cmd {
        ObstructCmd::Scan { amax, qbound, baseline, survivors_only } => {
            let baseline = PaperBaseline::load(baseline.as_deref())?;
            let params = ScanParams { a_max: *amax, q_bound: *qbound };
            let scan = obstruction::reproduce_s0(params, ctx.jobs)?;
            let listed = reproduce::listed_in_range(&baseline, *amax);
            let diff = obstruction::diff_against(&scan, &listed)?;
            let certified = diff.iter().all(|r| r.is_certified(*qbound));
            let mut rows: Vec<ScanRecord> = scan
                .records
                .iter()
                .filter(|r| !survivors_only || r.status != PairStatus::Obstructed)
                .cloned()
                .collect();
            rows.extend(diff.iter().cloned());
            ctx.emit(&rows)?;
            let summary = json!({
                "discovered": scan.discovered().len(),
                "fiat": scan.fiat().len(),
                "obstructed": scan.records.iter().filter(|r| r.status == PairStatus::Obstructed).count(),
                "discrepancies": diff.len(),
                "all_discrepancies_certified": certified,
            });
            eprintln!("{summary}");
            ctx.metadata = summary;
            Ok(verdict(certified))
        }
        ObstructCmd::Cert { a, p, qbound } => {
            let rec = match obstruction::find_obstruction(*a, *p, *qbound)? {
                Some(cert) => {
                    cert.verify()?;
                    ScanRecord {
                        a: *a,
                        p: *p,
                        status: PairStatus::Obstructed,
                        q: Some(cert.q),
                        residues: Some(cert.residues),
                        roots: None,
                        note: None,
                    }
                }
                None => {
                    let w = obstruction::survival_witness(*a, *p, *qbound)?
                        .ok_or_else(|| CliError::verification("no obstruction and no witness"))?;
                    w.verify()?;
                    ScanRecord {
                        a: *a,
                        p: *p,
                        status: PairStatus::Survivor,
                        q: None,
                        residues: None,
                        roots: Some(w.roots),
                        note: None,
                    }
                }
            };
            ctx.emit(&[rec])?;
            Ok(ExitCode::Ok)
        }
        ObstructCmd::LeastRootless { p, a, ceiling } => {
            let result = obstruction::least_rootless_prime(*p, *a, *ceiling)?;
            ctx.emit(&[LeastRootlessRow { p: *p, a: *a, result }])?;
            Ok(ExitCode::Ok)
        }
        ObstructCmd::Density { p, a, x } => {
            let sieve = ctx.sieve(*x)?;
            let d = obstruction::rootless_density_in(&sieve, *p, *a, *x)?;
            ctx.emit(&[DensityRow::from(d)])?;
            Ok(ExitCode::Ok)
        }
    }
}

fn eqsearch(args: &EqsearchArgs, ctx: &mut Ctx) -> Result<ExitCode, CliError> {
    let found = match (args.a, args.amin, args.amax) {
        (Some(a), _, _) => equation::search_fixed_a(a, args.nmax, ctx.jobs)?,
        (None, Some(lo), Some(hi)) => equation::search_range(lo, hi, args.nmax, ctx.jobs)?,
        _ => return Err(CliError::usage("give --a, or both --amin and --amax")),
    };
    for s in &found {
        s.verify()?;
    }
    ctx.emit(&found)?;
    Ok(ExitCode::Ok)
}

fn poly_cmd(cmd: &PolyCmd, ctx: &mut Ctx) -> Result<ExitCode, CliError> {
    match cmd {
        PolyCmd::Disc(pa) => {
            let a = pa.a()?;
            let row = disc_row(pa.p, &a)?;
            let ok = row.equal;
            ctx.emit(&[row])?;
            Ok(verdict(ok))
        }
        PolyCmd::Newton { poly: pa, prime, shifted } => {
            let a = pa.a()?;
            let mut f = poly::build_p(pa.p, &a)?;
            if *shifted {
                f = f.shift_plus_one();
            }
            let prime = prime.unwrap_or(pa.p);
            let np = poly::newton_polygon(&f, prime)?;
            let row = NewtonRow {
                p: pa.p,
                a: a.to_string(),
                prime,
                shift: *shifted as i64,
                vertices: np.vertices.clone(),
                reflected: np.reflected().vertices,
                slopes: np.segments().iter().map(|s| s.slope().to_string()).collect(),
            };
            ctx.emit(&[row])?;
            Ok(ExitCode::Ok)
        }
        PolyCmd::Shape { poly: pa, cert_bound } => {
            let a = pa.a()?;
            let opts = ShapeOptions { cert_bound: *cert_bound, ..Default::default() };
            let shape = poly::classify_shape(pa.p, &a, &opts)?;
            let verified = poly::verify_shape(pa.p, &a, &shape).is_ok();
            ctx.emit(&[ShapeRow { p: pa.p, a: a.to_string(), shape, verified }])?;
            Ok(verdict(verified))
        }
        PolyCmd::Roots(pa) => {
            let a = pa.a()?;
            let f = poly::build_p(pa.p, &a)?;
            let roots = poly::integer_roots(&f, Default::default())?;
            ctx.emit(&[RootsRow { p: pa.p, a: a.to_string(), roots: roots.iter().map(|r| r.to_string()).collect() }])?;
            Ok(ExitCode::Ok)
        }
    }
}

/// Both discriminant routes; the closed form is `None` where it is singular.
pub fn disc_row(p: u64, a: &BigInt) -> Result<DiscRow, CliError> {
    let f = poly::build_p(p, a)?;
    let resultant = poly::discriminant_resultant(&f)?;
    let closed = match poly::discriminant_closed(p, a) {
        Ok(c) => Some(c),
        Err(rgl_core::Error::SingularDiscriminant { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(DiscRow::new(p, a, closed, resultant))
}

pub fn lhs6_row(m: u64) -> Result<Lhs6Row, CliError> {
    let r = analytic::class_set_c(m)?;
    Ok(Lhs6Row { m_prime: m, lhs6: r.lhs6.to_string(), positive: r.lhs6.is_positive() })
}

fn analytic_cmd(cmd: &AnalyticCmd, ctx: &mut Ctx) -> Result<ExitCode, CliError> {
    match cmd {
        AnalyticCmd::PropPom { x, kmax, constant } => {
            let mut h = hp::Hp::new();
            let c = h.parse(constant).ok_or_else(|| CliError::usage(format!("bad --constant {constant:?}")))?;
            if *x < 3 {
                return Err(CliError::usage("--x must be at least 3"));
            }
            let table = PrimeTable::from_sieve(&ctx.sieve(*x)?, *x)?;
            let report = analytic::check_prop_pom(&table, *kmax, &c, ctx.jobs)?;
            ctx.emit(&report.rows)?;
            let meta = serde_json::to_value(&report)?;
            eprintln!("{meta}");
            ctx.metadata = meta;
            Ok(verdict(report.violations.is_empty()))
        }
        AnalyticCmd::Lhs6 { m, mmax } => match (m, mmax) {
            (Some(m), _) => {
                let row = lhs6_row(*m)?;
                if ctx.target.path.is_none() && ctx.target.format.is_none() {
                    let bytes = format!("{}\n", row.lhs6).into_bytes();
                    let e = ctx.target.write(&bytes)?;
                    ctx.outputs.push(e);
                } else {
                    ctx.emit(&[row])?;
                }
                Ok(ExitCode::Ok)
            }
            (None, Some(mmax)) => {
                let rows = (2..=*mmax).map(lhs6_row).collect::<Result<Vec<_>, _>>()?;
                ctx.emit(&rows)?;
                Ok(ExitCode::Ok)
            }
            _ => Err(CliError::usage("give --m or --mmax")),
        },
        AnalyticCmd::Bt { x, k, l } => {
            if *x < 3 {
                return Err(CliError::usage("--x must be at least 3"));
            }
            let table = PrimeTable::from_sieve(&ctx.sieve(*x)?, *x)?;
            let rows = match l {
                Some(l) => vec![analytic::bt_check(&table, *x, *k, *l)?],
                None => analytic::bt_table(&table, *x, *k)?,
            };
            let ok = rows.iter().all(|r| !r.exceeds);
            ctx.emit(&rows)?;
            Ok(verdict(ok))
        }
        AnalyticCmd::Threshold { x, lo, hi, samples } => {
            let mut h = hp::Hp::new();
            let mut parse = |s: &str| h.parse(s).ok_or_else(|| CliError::usage(format!("bad number {s:?}")));
            match x {
                Some(x) => {
                    let x = parse(x)?;
                    let f = analytic::first_proof_threshold(&mut hp::Hp::new(), &x)?;
                    ctx.emit(&[analytic::ThresholdSample { x, f }])?;
                    Ok(ExitCode::Ok)
                }
                None => {
                    let (lo, hi) = (parse(lo)?, parse(hi)?);
                    let s = analytic::threshold_samples(&lo, &hi, *samples as usize)?;
                    let increasing = s.windows(2).all(|w| hp::gt(&w[1].f, &w[0].f));
                    let positive = s.first().is_some_and(|s| s.f.is_positive());
                    ctx.emit(&s)?;
                    ctx.metadata = json!({ "increasing": increasing, "positive_at_lo": positive });
                    Ok(verdict(increasing && positive))
                }
            }
        }
        AnalyticCmd::PhiScan { limit } => {
            let scan = analytic::phi_scan(*limit)?;
            let ok = scan.failures.is_empty();
            ctx.emit(&[scan])?;
            Ok(verdict(ok))
        }
        AnalyticCmd::Rough { m } => {
            let r = analytic::rough_prime_count(*m)?;
            ctx.emit(&[r])?;
            Ok(ExitCode::Ok)
        }
        AnalyticCmd::Excluded { m } => {
            let r = analytic::excluded_residue_report(*m)?;
            let ok = r.verified();
            ctx.emit(&[r])?;
            Ok(verdict(ok))
        }
    }
}
