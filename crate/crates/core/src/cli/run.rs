use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::algebra::{cesaro_sum, commutant_extract, pk_polynomial, to_operator, FourierElement};
use crate::eigen::{ellipse_predicate, region_csv, region_sample, Membership};
use crate::error::{Error, Result};
use crate::fock::{commutation_defect, norm_check, vacuum_kernel_check, TruncatedFock};
use crate::spectra::{
    left_membership, resolvent_check, right_membership, zero_left_inverses, SpectrumMode, SpectrumReport,
    SpectrumVerdict, Witness,
};
use crate::weights::{check_cocycles, check_intertwining, commutant_mu, commutant_sup, CommutantSup, DefectReport, Verdict, WeightSystem};
use crate::words::{truncated_dimension, Word};

use super::config::{parse_config, Overrides, RunConfig, SpectraMode, DEFAULT_GROWTH_K};
use super::report::{all_passed, envelope, render, spectrum_json, write_output, CheckEntry};

/// Relative tolerance for the power-iteration norm estimates.
pub const NORM_REL_TOL: f64 = 1e-6;
/// Deepest truncation used by the dense vacuum-kernel SVD.
pub const VACUUM_MAX_DEPTH: usize = 6;
/// Tolerance of the rank-one reconstruction in `spectra --mode zero`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
/// Largest μ table `commutant` prints.
const MAX_TABLE_WORDS: usize = 1 << 16;
const ROUND_TRIPS: usize = 3;

#[derive(Debug, Parser)]
#[command(name = "fockshift", version, about = "Weighted shifts on truncated Fock space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON config: a weight system, or {"weights": …, "depth": …, …}
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Margin of the region verdicts
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// lo:hi:step, applied to every modulus
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Comma-separated complex numbers, e.g. 0.3+0.1i,0.4
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Fourier coefficient file {"coeffs": {"w": [re, im]}}
    #[arg(long, global = true)]
    pub coeffs: Option<PathBuf>,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Spectra mode: right, left or zero
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// CSV output (region) or report output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON report output
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Add wall-clock seconds to each check
    #[arg(long, global = true)]
    pub timings: bool,
    /// Worker threads
    #[arg(long, env = "FOCKSHIFT_THREADS", hide = true, global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, Subcommand, PartialEq, Eq)]
pub enum Command {
    /// Cocycles, intertwining, commutant bound, commutation, norms, vacuum kernel
    Check,
    /// μ table and commutant round trips
    Commutant,
    /// Eigenvalue region sample as CSV
    Region,
    /// Cesàro sums against Fejér polynomials
    Cesaro,
    /// Joint spectrum experiments
    Spectra,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Commutant => "commutant",
            Command::Region => "region",
            Command::Cesaro => "cesaro",
            Command::Spectra => "spectra",
        }
    }
}

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| Error::config(path.display().to_string(), e.to_string()))
}

/// Resolves the configuration from the file and the flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => parse_config(&read_json(p)?)?,
        None => RunConfig::default(),
    };
    let coeffs = cli.coeffs.as_ref().map(read_json).transpose()?;
    cfg.apply(&Overrides {
        depth: cli.depth,
        tol: cli.tol,
        eps: cli.eps,
        seed: cli.seed,
        grid: cli.grid.clone(),
        lambda: cli.lambda.clone(),
        k: cli.k,
        mode: cli.mode.clone(),
        coeffs,
    })?;
    Ok(cfg)
}

/// Output of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    /// CSV body (region only).
    pub csv: Option<String>,
    pub passed: bool,
}

fn timed<T>(timings: bool, f: impl FnOnce() -> Result<T>) -> Result<(T, Option<f64>)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, timings.then(|| start.elapsed().as_secs_f64())))
}

fn word_list(words: &[Word], n: usize) -> String {
    words.iter().map(|w| w.format(n)).collect::<Vec<_>>().join(",")
}

fn defect_entry(name: &str, r: &DefectReport, tol: f64, n: usize) -> CheckEntry {
    let witness = r.witness.as_ref().map(|ws| match r.letter {
        Some(i) => format!("i={i}; {}", word_list(ws, n)),
        None => word_list(ws, n),
    });
    CheckEntry::measured(name, r.max_defect, tol, witness).with("checked", r.checked)
}

fn commutant_sup_json(c: &CommutantSup, n: usize) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("verdict".into(), c.verdict.as_str().into());
    m.insert("value".into(), c.value.into());
    m.insert("depth".into(), c.depth.into());
    m.insert("exact_sup".into(), c.exact_sup.map_or(Value::Null, Value::from));
    m.insert("method".into(), c.method.into());
    m.insert("witness".into(), format!("{}:{}", c.witness.0, c.witness.1.format(n)).into());
    if let Some(cert) = &c.certificate {
        m.insert(
            "certificate".into(),
            json!({
                "letter": cert.letter,
                "cycle": cert.cycle.format(n),
                "prefix": cert.prefix.format(n),
                "growth_per_cycle": cert.growth_per_cycle,
                "samples": cert.samples.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
            }),
        );
    }
    m
}

fn diverging_reason(c: &CommutantSup, n: usize) -> String {
    match &c.certificate {
        Some(cert) => format!(
            "commutant weights are unbounded: W({}, w)/W(e, w) grows by {} per repetition of {}",
            cert.letter,
            cert.growth_per_cycle,
            cert.cycle.format(n)
        ),
        None => "commutant weights are unbounded".into(),
    }
}

fn check(cfg: &RunConfig, timings: bool) -> Result<Outcome> {
    let ws = cfg.require_weights("check")?;
    let n = ws.n();
    let (depth, tol) = (cfg.depth, cfg.tol);
    let mu = ws.mu_system();
    let mut entries = Vec::new();

    let (cocycles, secs) = timed(timings, || check_cocycles(ws, &mu, depth))?;
    let mut e = defect_entry("left_cocycle", &cocycles.left, tol, n);
    e.seconds = secs;
    entries.push(e);
    let mut e = defect_entry("right_cocycle", &cocycles.right, tol, n);
    e.seconds = secs;
    entries.push(e);

    let (inter, secs) = timed(timings, || check_intertwining(ws, depth))?;
    let mut e = defect_entry("intertwining", &inter, tol, n);
    e.seconds = secs;
    entries.push(e);

    let (c6, secs) = timed(timings, || commutant_sup(ws, depth))?;
    let mut e = CheckEntry::finding("commutant_sup", commutant_sup_json(&c6, n));
    e.seconds = secs;
    entries.push(e);

    if c6.verdict == Verdict::Diverging {
        entries.push(CheckEntry::skipped("commutation", diverging_reason(&c6, n)));
    } else {
        let (r, secs) = timed(timings, || commutation_defect(ws, &mu, depth))?;
        let witness = r.witness.map(|(i, j, w)| format!("T_{i} S_{j} at {}", w.format(n)));
        let mut e = CheckEntry::measured("commutation", r.max_defect, tol, witness);
        e.seconds = secs;
        entries.push(e);
    }

    let (norms, secs) = timed(timings, || norm_check(ws, depth))?;
    let worst = norms
        .iter()
        .max_by(|a, b| (a.gap / a.expected).total_cmp(&(b.gap / b.expected)))
        .expect("at least one letter");
    let mut e = CheckEntry::measured(
        "norm",
        worst.gap / worst.expected,
        NORM_REL_TOL,
        Some(format!("letter {}", worst.letter)),
    )
    .with(
        "norms",
        norms
            .iter()
            .map(|e| json!({"letter": e.letter, "computed": e.computed.value, "expected": e.expected,
                "iterations": e.computed.iterations, "converged": e.computed.converged}))
            .collect::<Vec<_>>(),
    )
    .require(norms.iter().all(|e| e.computed.converged));
    e.seconds = secs;
    entries.push(e);

    let vdepth = depth.min(VACUUM_MAX_DEPTH);
    let (v, secs) = timed(timings, || vacuum_kernel_check(ws, vdepth))?;
    let mut e = CheckEntry::measured("vacuum_kernel", v.projection_defect, tol, None)
        .with("depth", vdepth)
        .with("kernel_dimension", v.kernel_dimension)
        .with("vacuum_overlap", v.vacuum_overlap)
        .require(v.kernel_dimension == 1 && (v.vacuum_overlap - 1.0).abs() <= 1e-9);
    e.seconds = secs;
    entries.push(e);

    let out = envelope("check", cfg.to_json(), &entries);
    Ok(Outcome {
        passed: all_passed(&entries),
        report: Value::Object(out),
        csv: None,
    })
}

/// Random element supported on `|w| <= max_len`.
pub fn random_element(n: usize, max_len: usize, rng: &mut ChaCha8Rng) -> Result<FourierElement> {
    let basis = crate::words::enumerate_basis(n, max_len)?;
    FourierElement::new(
        n,
        basis
            .words()
            .map(|w| (w, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect::<Vec<_>>(),
    )
}

fn round_trip_entry(name: &str, a: &FourierElement, ws: &WeightSystem, depth: usize, tol: f64) -> Result<CheckEntry> {
    let space = TruncatedFock::new(ws.n(), depth)?;
    let x = to_operator(a, ws, &space)?;
    let ext = commutant_extract(&x, &ws.mu_system())?;
    let mut words: Vec<&Word> = a.coeffs().keys().chain(ext.element.coeffs().keys()).collect();
    words.sort();
    words.dedup();
    let coeff_err = words
        .iter()
        .map(|w| (a.coeff(w) - ext.element.coeff(w)).norm())
        .fold(0.0, f64::max);
    Ok(CheckEntry::measured(name, coeff_err.max(ext.residual), tol, None)
        .with("coefficient_error", coeff_err)
        .with("residual", ext.residual)
        .with("residual_witness", ext.residual_witness.format(ws.n()))
        .with("commutation_defect", ext.commutation_defect))
}

fn commutant(cfg: &RunConfig) -> Result<Outcome> {
    let ws = cfg.require_weights("commutant")?;
    let n = ws.n();
    let depth = cfg.depth;
    if truncated_dimension(n, depth - 1).is_none_or(|d| d > MAX_TABLE_WORDS) {
        return Err(Error::Size(format!("μ table for n = {n}, depth {depth} is too large to print")));
    }
    let c6 = commutant_sup(ws, depth)?;
    let mut table = Map::new();
    for w in crate::words::enumerate_basis(n, depth - 1)?.words() {
        for i in 1..=n as u8 {
            table.insert(format!("{i}:{}", w.format(n)), commutant_mu(ws, i, &w)?.into());
        }
    }
    let mut entries = vec![CheckEntry::finding("commutant_sup", commutant_sup_json(&c6, n))];
    if c6.verdict == Verdict::Diverging {
        entries.push(CheckEntry::skipped("extract_roundtrip", diverging_reason(&c6, n)));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let support = 3.min(depth.saturating_sub(1));
        for t in 0..ROUND_TRIPS {
            let a = random_element(n, support, &mut rng)?;
            entries.push(round_trip_entry(&format!("extract_roundtrip_{t}"), &a, ws, depth, cfg.tol)?);
        }
        if let Some(a) = &cfg.coeffs {
            entries.push(round_trip_entry("extract_roundtrip_coeffs", a, ws, depth, cfg.tol)?);
        }
    }
    let mut out = envelope("commutant", cfg.to_json(), &entries);
    out.insert("mu".into(), Value::Object(table));
    Ok(Outcome {
        passed: all_passed(&entries),
        report: Value::Object(out),
        csv: None,
    })
}

fn region(cfg: &RunConfig) -> Result<Outcome> {
    let ws = cfg.require_weights("region")?;
    let grid = cfg
        .grid
        .ok_or_else(|| Error::precondition("`region` needs --grid lo:hi:step"))?;
    let rows = region_sample(ws, &grid, cfg.depth, cfg.eps)?;
    let count = |m: Membership| rows.iter().filter(|r| r.verdict == m).count();
    let mut out = envelope("region", cfg.to_json(), &[]);
    out.insert(
        "counts".into(),
        json!({"inside": count(Membership::Inside), "outside": count(Membership::Outside),
            "inconclusive": count(Membership::Inconclusive)}),
    );
    match ellipse_predicate(ws, &vec![0.0; ws.n()], cfg.depth) {
        Ok(e) => {
            let in_ellipse = rows
                .iter()
                .filter(|r| r.moduli.iter().zip(&e.c).map(|(x, c)| (x / c).powi(2)).sum::<f64>() < 1.0 - cfg.eps)
                .collect::<Vec<_>>();
            out.insert(
                "ellipse".into(),
                json!({"c": e.c, "exact": e.exact, "points": in_ellipse.len(),
                    "inside": in_ellipse.iter().filter(|r| r.verdict == Membership::Inside).count()}),
            );
        }
        Err(e) => {
            out.insert("ellipse".into(), json!({"unavailable": e.to_string()}));
        }
    }
    Ok(Outcome {
        report: Value::Object(out),
        csv: Some(region_csv(&rows, ws.n())),
        passed: true,
    })
}

fn cesaro(cfg: &RunConfig) -> Result<Outcome> {
    let ws = cfg.require_weights("cesaro")?;
    let a = cfg
        .coeffs
        .as_ref()
        .ok_or_else(|| Error::precondition("`cesaro` needs --coeffs PATH"))?;
    let depth = cfg.depth;
    let space = TruncatedFock::new(ws.n(), depth)?;
    let x = to_operator(a, ws, &space)?;
    let orders: Vec<usize> = match cfg.k {
        Some(k) => vec![k],
        None => [2, 4, 8].into_iter().filter(|&k| k <= depth).collect(),
    };
    let mut entries = Vec::new();
    for k in orders {
        if k == 0 || k > depth {
            return Err(Error::domain(format!("order k = {k} must lie in 1..={depth}")));
        }
        let diff = cesaro_sum(&x, k)?
            .sub(&pk_polynomial(a, ws, k, &space)?)?
            .restrict_columns(depth - k);
        let (norm, col) = diff.max_column_norm();
        let witness = (norm > 0.0).then(|| space.basis().word_at(col).format(ws.n()));
        entries.push(CheckEntry::measured(&format!("cesaro_k{k}"), norm, cfg.tol, witness).with("k", k));
    }
    let c6 = commutant_sup(ws, depth)?;
    if c6.verdict == Verdict::Diverging {
        entries.push(CheckEntry::skipped("extract_roundtrip", diverging_reason(&c6, ws.n())));
    } else {
        entries.push(round_trip_entry("extract_roundtrip", a, ws, depth, cfg.tol)?);
    }
    Ok(Outcome {
        passed: all_passed(&entries),
        report: Value::Object(envelope("cesaro", cfg.to_json(), &entries)),
        csv: None,
    })
}

fn spectrum_entries(r: &SpectrumReport, tol: f64) -> Vec<CheckEntry> {
    let mut entries = Vec::new();
    for (name, &v) in &r.defects {
        let t = match name.as_str() {
            "reconstruction" | "solve_residual" => RECONSTRUCTION_TOL,
            "right_inverse_top" | "resolvent_top" => continue,
            _ => tol,
        };
        entries.push(CheckEntry::measured(name, v, t, None));
    }
    entries
}

fn spectra(cfg: &RunConfig) -> Result<Outcome> {
    let mut reports = Vec::new();
    if cfg.mode == SpectraMode::Zero {
        let z = zero_left_inverses(&cfg.eta[0], &cfg.eta[1], cfg.depth)?;
        let mut r = SpectrumReport {
            lambda: vec![Complex64::default(); 2],
            mode: SpectrumMode::ZeroLeftInverse,
            verdict: SpectrumVerdict::NotInSpectrum,
            defects: Default::default(),
            witness: Witness::None,
            note: None,
        };
        r.defects.insert("identity".into(), z.identity_defect);
        r.defects.insert("reconstruction".into(), z.reconstruction_residual);
        r.defects.insert("solve_residual".into(), z.solve_residual);
        r.witness = Witness::ZeroLeft(z);
        reports.push(r);
    } else {
        if cfg.lambdas.is_empty() {
            return Err(Error::precondition("`spectra` needs --lambda LIST"));
        }
        for lambda in &cfg.lambdas {
            let r = match cfg.mode {
                SpectraMode::Right => {
                    let mut r = right_membership(lambda, cfg.depth)?;
                    if crate::spectra::lambda_norm(lambda) < 1.0 {
                        let res = resolvent_check(lambda, cfg.depth)?;
                        r.defects.insert("resolvent_low".into(), res.low_defect);
                        r.defects.insert("resolvent_top".into(), res.top_defect);
                    }
                    r
                }
                SpectraMode::Left => left_membership(lambda, cfg.k.unwrap_or(DEFAULT_GROWTH_K), cfg.growth_bound)?,
                SpectraMode::Zero => unreachable!("handled above"),
            };
            reports.push(r);
        }
    }
    let mut entries = Vec::new();
    let mut rendered = Vec::new();
    for r in &reports {
        let e = spectrum_entries(r, cfg.tol);
        let mut m = spectrum_json(r);
        m.insert("checks".into(), e.iter().map(CheckEntry::to_json).collect());
        rendered.push(Value::Object(m));
        entries.extend(e);
    }
    let passed = all_passed(&entries);
    let report = if rendered.len() == 1 {
        let Value::Object(mut m) = rendered.pop().expect("one report") else {
            unreachable!()
        };
        m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        m.insert("command".into(), "spectra".into());
        m.insert("config".into(), cfg.to_json());
        m.insert("passed".into(), passed.into());
        Value::Object(m)
    } else {
        json!({"version": env!("CARGO_PKG_VERSION"), "command": "spectra", "config": cfg.to_json(),
            "reports": rendered, "passed": passed})
    };
    Ok(Outcome {
        report,
        csv: None,
        passed,
    })
}

/// Runs one command on a resolved configuration.
pub fn run_command(command: Command, cfg: &RunConfig, timings: bool) -> Result<Outcome> {
    match command {
        Command::Check => check(cfg, timings),
        Command::Commutant => commutant(cfg),
        Command::Region => region(cfg),
        Command::Cesaro => cesaro(cfg),
        Command::Spectra => spectra(cfg),
    }
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Some(t) = threads {
        if t == 0 {
            return Err(Error::domain("FOCKSHIFT_THREADS must be at least 1"));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn execute(cli: &Cli) -> Result<bool> {
    configure_threads(cli.threads)?;
    let cfg = resolve_config(cli)?;
    let outcome = run_command(cli.command, &cfg, cli.timings)?;
    let json = render(&outcome.report);
    match &outcome.csv {
        Some(csv) => {
            write_output(cli.out.as_deref(), csv)?;
            if let Some(p) = &cli.report {
                write_output(Some(p), &json)?;
            }
        }
        None => write_output(cli.report.as_deref().or(cli.out.as_deref()), &json)?,
    }
    Ok(outcome.passed)
}

/// Runs the CLI and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("fockshift {}: some checks failed", cli.command.name());
            EXIT_CHECK_FAILED
        }
        Err(e) => {
            eprintln!("fockshift {}: {e}", cli.command.name());
            EXIT_PRECONDITION
        }
    }
}
