//! The `xsep` command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad input.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use xsep_core::orbit::{classify_by_block_spectra, classify_orbit, diagonalize, DiagonalizingFrame, OrderedSpectrum};
use xsep_core::sampler::{self, region_export, sample_xstate, SamplerConfig, SimplexSampler};
use xsep_core::separability::{
    degenerate_cross_check, ineq_spectrum_angles, ppt_elementwise, ppt_oracle, Binding,
};
use xsep_core::su4;
use xsep_core::xstate::{XStateRecord, CSV_HEADER};
use xsep_core::{Tolerances, XState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "xsep", version, about = "Orbit classification and separability of two-qubit X-states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Tolerance for Hermiticity, trace and X-pattern checks, in (0, 1e-3]
    #[arg(long, global = true)]
    pub tol_structural: Option<f64>,

    /// Width of the marginal band around boundaries, in (0, 1e-3]
    #[arg(long, global = true)]
    pub tol_band: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the su(4) identities and run seeded concordance samples
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        count: usize,
    },
    /// Orbit type, spectrum and frame angles of each input state
    Classify { input: PathBuf },
    /// PPT verdict of each input state
    CheckSep { input: PathBuf },
    /// Draw seeded random X-states
    Sample {
        #[arg(long, value_enum, default_value_t = MeasureArg::Spectrum)]
        measure: MeasureArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Scan a one-parameter family and report verdicts
    Sweep {
        #[arg(value_enum)]
        family: Family,
        /// Number of steps across the parameter range
        #[arg(long, default_value_t = 30)]
        count: usize,
        /// Degenerate family: the doubled eigenvalue
        #[arg(long, default_value_t = 0.1)]
        r1: f64,
        /// Degenerate family: r4/r3
        #[arg(long, default_value_t = 0.1)]
        zeta: f64,
    },
    /// Grid the spectrum simplex and flag absolutely separable points
    RegionExport {
        #[arg(long, default_value_t = 10)]
        resolution: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum MeasureArg {
    /// Uniform spectrum and uniform frame angles
    Spectrum,
    /// Uniform populations and coherences uniform on their discs
    Param,
}

impl From<MeasureArg> for sampler::Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Spectrum => sampler::Measure::SpectrumUniform,
            MeasureArg::Param => sampler::Measure::ParamUniformRejection,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Family {
    Werner,
    Degenerate,
}

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        input_error(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances, Failure> {
    let mut t = Tolerances::default();
    if let Some(v) = cli.tol_structural {
        t.structural = v;
    }
    if let Some(v) = cli.tol_band {
        t.band = v;
    }
    t.validate().map_err(|e| input_error(e.to_string()))?;
    Ok(t)
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let tol = tolerances(cli)?;
    match &cli.command {
        Command::Verify { seed, count } => verify(*seed, *count, cli.format.unwrap_or(Format::Jsonl), &tol, out, err),
        Command::Classify { input } => {
            let states = read_states(input, &tol)?;
            classify(&states, cli.format.unwrap_or(Format::Jsonl), &tol, out)
        }
        Command::CheckSep { input } => {
            let states = read_states(input, &tol)?;
            check_sep(&states, cli.format.unwrap_or(Format::Jsonl), &tol, out)
        }
        Command::Sample { measure, seed, count } => {
            let cfg = SamplerConfig::new((*measure).into(), *seed, *count).map_err(|e| input_error(e.to_string()))?;
            sample(&cfg, cli.format.unwrap_or(Format::Jsonl), &tol, out)
        }
        Command::Sweep { family, count, r1, zeta } => {
            sweep(*family, *count, *r1, *zeta, cli.format.unwrap_or(Format::Csv), &tol, out)
        }
        Command::RegionExport { resolution } => {
            let points = region_export(*resolution, &tol).map_err(|e| input_error(e.to_string()))?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => sampler::write_region_csv(&mut *out, &points, &tol)?,
                Format::Jsonl => {
                    header_jsonl(out, "region-export", &tol)?;
                    for p in &points {
                        writeln!(out, "{}", serde_json::to_string(p).expect("serializable"))?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn header_jsonl(out: &mut dyn Write, command: &str, tol: &Tolerances) -> io::Result<()> {
    writeln!(out, "{}", json!({ "header": { "command": command, "tolerances": tol } }))
}

fn header_csv(out: &mut dyn Write, command: &str, tol: &Tolerances) -> io::Result<()> {
    writeln!(
        out,
        "# {command} tolerances structural={} spectral={} band={}",
        tol.structural, tol.spectral, tol.band
    )
}

fn header(out: &mut dyn Write, format: Format, command: &str, tol: &Tolerances) -> io::Result<()> {
    match format {
        Format::Jsonl => header_jsonl(out, command, tol),
        Format::Csv => header_csv(out, command, tol),
    }
}

/// Reads X-states, one per line, as JSON objects or CSV rows. Blank lines,
/// `#` comments and the CSV header are skipped. Returns (line number, state).
pub fn parse_states(text: &str, tol: &Tolerances) -> Result<Vec<(usize, XState)>, Failure> {
    let mut states = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let n = i + 1;
        if line.is_empty() || line.starts_with('#') || line == CSV_HEADER {
            continue;
        }
        let parsed = if line.starts_with('{') {
            let value: serde_json::Value = match serde_json::from_str(line) {
                Ok(v) => v,
                Err(e) => return Err(input_error(format!("line {n}: {e}"))),
            };
            // header records written by this tool
            if value.get("header").is_some() {
                continue;
            }
            serde_json::from_value::<XStateRecord>(value)
                .map_err(|e| e.to_string())
                .and_then(|r| r.validate(tol).map_err(|e| e.to_string()))
        } else {
            XState::from_csv_row(line, tol).map_err(|e| e.to_string())
        };
        match parsed {
            Ok(x) => states.push((n, x)),
            Err(e) => return Err(input_error(format!("line {n}: {e}"))),
        }
    }
    if states.is_empty() {
        return Err(input_error("no states in input"));
    }
    Ok(states)
}

fn read_states(path: &PathBuf, tol: &Tolerances) -> Result<Vec<(usize, XState)>, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?
    };
    parse_states(&text, tol)
}

#[derive(Serialize)]
struct ClassifyRecord {
    line: usize,
    orbit_kind: String,
    isotropy_dim: usize,
    mu1: f64,
    mu2: f64,
    spectrum: [f64; 4],
    angles: DiagonalizingFrame,
    marginal: bool,
}

fn classify(states: &[(usize, XState)], format: Format, tol: &Tolerances, out: &mut dyn Write) -> Result<i32, Failure> {
    let records: Vec<ClassifyRecord> = states
        .par_iter()
        .map(|(line, x)| {
            let c = classify_orbit(x, tol);
            let (r, f) = diagonalize(x, tol).map_err(|e| input_error(format!("line {line}: {e}")))?;
            Ok(ClassifyRecord {
                line: *line,
                orbit_kind: c.kind.to_string(),
                isotropy_dim: c.isotropy_dim,
                mu1: c.mu1,
                mu2: c.mu2,
                spectrum: r.to_array(),
                angles: f,
                marginal: c.marginal,
            })
        })
        .collect::<Result<_, Failure>>()?;
    header(out, format, "classify", tol)?;
    if format == Format::Csv {
        writeln!(out, "line,orbit_kind,isotropy_dim,mu1,mu2,r1,r2,r3,r4,phi1,psi1,phi2,psi2,omega,marginal")?;
    }
    for rec in records {
        match format {
            Format::Jsonl => writeln!(out, "{}", serde_json::to_string(&rec).expect("serializable"))?,
            Format::Csv => {
                let [r1, r2, r3, r4] = rec.spectrum;
                let a = rec.angles;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    rec.line, rec.orbit_kind, rec.isotropy_dim, rec.mu1, rec.mu2, r1, r2, r3, r4,
                    a.phi1, a.psi1, a.phi2, a.psi2, a.omega, rec.marginal
                )?
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SepRecord {
    line: usize,
    separable: bool,
    margin: f64,
    binding: Binding,
    marginal: bool,
    oracle_min_eig: f64,
}

fn check_sep(states: &[(usize, XState)], format: Format, tol: &Tolerances, out: &mut dyn Write) -> Result<i32, Failure> {
    let records: Vec<SepRecord> = states
        .par_iter()
        .map(|(line, x)| {
            let v = ppt_elementwise(x, tol);
            let o = ppt_oracle(x, tol).map_err(|e| input_error(format!("line {line}: {e}")))?;
            Ok(SepRecord {
                line: *line,
                separable: v.separable,
                margin: v.margin,
                binding: v.binding,
                marginal: v.marginal,
                oracle_min_eig: o.min_eigenvalue,
            })
        })
        .collect::<Result<_, Failure>>()?;
    header(out, format, "check-sep", tol)?;
    if format == Format::Csv {
        writeln!(out, "line,separable,margin,binding,marginal,oracle_min_eig")?;
    }
    for r in records {
        match format {
            Format::Jsonl => writeln!(out, "{}", serde_json::to_string(&r).expect("serializable"))?,
            Format::Csv => writeln!(
                out,
                "{},{},{},{:?},{},{}",
                r.line, r.separable, r.margin, r.binding, r.marginal, r.oracle_min_eig
            )?,
        }
    }
    Ok(EXIT_OK)
}

fn sample(cfg: &SamplerConfig, format: Format, tol: &Tolerances, out: &mut dyn Write) -> Result<i32, Failure> {
    header(out, format, "sample", tol)?;
    if format == Format::Csv {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for x in sample_xstate(cfg, tol) {
        match format {
            Format::Jsonl => writeln!(out, "{}", serde_json::to_string(&x).expect("serializable"))?,
            Format::Csv => writeln!(out, "{}", x.to_csv_row())?,
        }
    }
    Ok(EXIT_OK)
}

fn sweep(
    family: Family,
    count: usize,
    r1: f64,
    zeta: f64,
    format: Format,
    tol: &Tolerances,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if count == 0 {
        return Err(input_error("sweep needs at least one step"));
    }
    let mut rows: Vec<serde_json::Value> = Vec::new();
    match family {
        Family::Werner => {
            for i in 0..=count {
                let p = i as f64 / count as f64;
                let x = XState::werner(p).map_err(|e| input_error(e.to_string()))?;
                let v = ppt_elementwise(&x, tol);
                let o = ppt_oracle(&x, tol).map_err(|e| input_error(e.to_string()))?;
                rows.push(json!({
                    "parameter": p, "separable": v.separable, "margin": v.margin,
                    "marginal": v.marginal, "oracle_min_eig": o.min_eigenvalue,
                }));
            }
        }
        Family::Degenerate => {
            if !(0.0..1.0).contains(&zeta) || !(0.0..0.5).contains(&r1) {
                return Err(input_error("degenerate sweep needs 0 <= zeta < 1 and 0 <= r1 < 0.5"));
            }
            let r3 = (1.0 - 2.0 * r1) / (1.0 + zeta);
            let r4 = (1.0 - 2.0 * r1 - r3).max(0.0);
            let rep = degenerate_cross_check(r1, r3, r4, count, tol).map_err(|e| input_error(e.to_string()))?;
            for row in rep.rows {
                rows.push(json!({
                    "parameter": row.phi2, "separable": row.oracle, "margin": row.ppt_slack,
                    "marginal": row.marginal, "published_separable": row.published,
                    "oracle_min_eig": row.oracle_min_eigenvalue,
                }));
            }
        }
    }
    let name = match family {
        Family::Werner => "sweep werner",
        Family::Degenerate => "sweep degenerate",
    };
    header(out, format, name, tol)?;
    let mut columns = vec!["parameter", "separable", "margin", "marginal", "oracle_min_eig"];
    if matches!(family, Family::Degenerate) {
        columns.push("published_separable");
    }
    if format == Format::Csv {
        writeln!(out, "{}", columns.join(","))?;
    }
    for row in rows {
        match format {
            Format::Jsonl => writeln!(out, "{row}")?,
            Format::Csv => {
                let cells: Vec<String> = columns.iter().map(|c| row[*c].to_string()).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
    }
    Ok(EXIT_OK)
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn verify(
    seed: u64,
    count: usize,
    format: Format,
    tol: &Tolerances,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    if count == 0 {
        return Err(input_error("verify needs --count >= 1"));
    }
    let mut checks = Vec::new();
    let table = su4::verify_commutator_table(tol.structural);
    checks.push(Check {
        name: "commutator table",
        passed: table.passed(),
        detail: format!("{}/{} commutators, max deviation {:e}", table.matches, table.total, table.max_deviation),
    });
    let cartan = su4::verify_cartan_split(tol.structural);
    checks.push(Check {
        name: "cartan split",
        passed: cartan.passed(),
        detail: format!("{} pairs, max residual {:e}", cartan.pairs_checked, cartan.max_residual),
    });
    let spins = su4::verify_pseudospins(tol.structural);
    checks.push(Check {
        name: "pseudospins",
        passed: spins.passed(),
        detail: format!("{} relations, max residual {:e}", spins.checks.len(), spins.max_residual),
    });
    let ppi = su4::ppi_conjugation_table(tol.structural);
    checks.push(Check {
        name: "P_pi conjugation",
        passed: ppi.passed(),
        detail: format!("{} identities, max residual {:e}", ppi.checks.len(), ppi.max_residual),
    });
    let closure = su4::alpha_closure_residual();
    checks.push(Check {
        name: "X-subalgebra closure",
        passed: closure <= tol.structural,
        detail: format!("residual {closure:e}"),
    });
    let transcription = su4::transcription_deviation();
    checks.push(Check {
        name: "basis transcription",
        passed: transcription <= tol.structural,
        detail: format!("max deviation {transcription:e}"),
    });

    let cfg = SamplerConfig::new(sampler::Measure::ParamUniformRejection, seed, count)
        .map_err(|e| input_error(e.to_string()))?;
    let states: Vec<XState> = sample_xstate(&cfg, tol).collect();
    let (oracle_bad, orbit_bad) = states
        .par_iter()
        .map(|x| {
            let e = ppt_elementwise(x, tol);
            let o = ppt_oracle(x, tol).map(|o| o.separable);
            let oracle_bad = match o {
                Ok(s) => !e.marginal && s != e.separable,
                Err(_) => true,
            };
            let (a, b) = (classify_orbit(x, tol), classify_by_block_spectra(x, tol));
            let orbit_bad = !a.marginal && !b.marginal && a.kind != b.kind;
            (oracle_bad as usize, orbit_bad as usize)
        })
        .reduce(|| (0, 0), |p, q| (p.0 + q.0, p.1 + q.1));
    checks.push(Check {
        name: "oracle concordance",
        passed: oracle_bad == 0,
        detail: format!("{count} states, {oracle_bad} disagreements"),
    });
    checks.push(Check {
        name: "orbit concordance",
        passed: orbit_bad == 0,
        detail: format!("{count} states, {orbit_bad} disagreements"),
    });

    let mut s = SimplexSampler::new(seed.wrapping_add(1), *tol);
    let draws: Vec<(OrderedSpectrum, DiagonalizingFrame)> = (0..count).map(|_| (s.spectrum(), s.frame())).collect();
    let ineq_bad: usize = draws
        .par_iter()
        .map(|(r, f)| {
            let v = ineq_spectrum_angles(r, f.phi1, f.phi2, tol);
            let o = xsep_core::orbit::reconstruct(r, f, tol).and_then(|x| ppt_oracle(&x, tol));
            match o {
                Ok(o) => (!v.marginal && o.separable != v.separable) as usize,
                Err(_) => 1,
            }
        })
        .sum();
    checks.push(Check {
        name: "inequality concordance",
        passed: ineq_bad == 0,
        detail: format!("{count} draws, {ineq_bad} disagreements"),
    });

    header(out, format, "verify", tol)?;
    if format == Format::Csv {
        writeln!(out, "check,passed,detail")?;
    }
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        match format {
            Format::Jsonl => writeln!(out, "{}", json!({ "check": c.name, "passed": c.passed, "detail": c.detail }))?,
            Format::Csv => writeln!(out, "{},{},\"{}\"", c.name, c.passed, c.detail)?,
        }
        writeln!(err, "{:<width$}  {}  {}", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail)?;
    }
    let all = checks.iter().all(|c| c.passed);
    Ok(if all { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
