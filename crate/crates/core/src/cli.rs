//! Command-line front end. Exit codes: 0 = D-function (or success), 1 = not a
//! D-function (or a failed claim/identity), 2 = error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::FamilySpec;
use crate::dproperty::{
    applicable_methods, d_check, dimension_bounds, route, verify_moment_identities, CheckOptions, DReport, Method,
    Verdict,
};
use crate::error::{Error, Result};
use crate::formats::format_truth_table;
use crate::gf2n::{FieldCtx, SubspaceBasis};
use crate::limits;
use crate::reproduce::{run_experiment, ExperimentReport, RunOptions, EXPERIMENTS};
use crate::spectra::{ddt_row, differential_uniformity, nonlinearity, plateaued_profile, walsh_row_checked};
use crate::vbf::Vbf;

pub const EXIT_D: i32 = 0;
pub const EXIT_NOT_D: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dillonlab", version, about = "D-property, APN and spectral analysis of vectorial Boolean functions")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// scan threads; 0 = machine parallelism, 1 = sequential with deterministic witnesses
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// field polynomial in hex, e.g. 0x83 for x^7+x+1
    #[arg(long, global = true, value_parser = parse_hex_u64)]
    modulus: Option<u64>,
    /// record one witness (a, b, x) per attained value
    #[arg(long, global = true)]
    witnesses: bool,
    /// list every missing value
    #[arg(long, global = true)]
    full_missing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report: degree, APN, nonlinearity, plateaued profile and every D-check
    Analyze {
        spec: String,
        /// comma-separated methods (default: every applicable one)
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
    },
    /// Run a single D-property checker
    Dcheck {
        spec: String,
        /// bruteforce, ddt, moment4, moment3-quadratic, hyperplane-quadratic, anf-span, plateaued
        #[arg(long)]
        method: Option<String>,
        /// hyperplane K for hyperplane-quadratic, comma-separated hex vectors
        #[arg(long, value_delimiter = ',', value_parser = parse_hex_u32)]
        k_basis: Vec<u32>,
    },
    /// DDT row for a nonzero input difference, as CSV
    Ddt {
        spec: String,
        #[arg(long, value_parser = parse_hex_u32)]
        a: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Walsh row of the component v, as CSV
    Walsh {
        spec: String,
        #[arg(long, value_parser = parse_hex_u32)]
        v: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Restrict to the trace-zero hyperplane (or {x : Tr(alpha x) = 0}) and write the truth table
    Restrict {
        spec: String,
        #[arg(long, value_parser = parse_hex_u32)]
        alpha: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named reproduction experiment, or "all"
    Reproduce { experiment: String },
    /// Verify the Walsh-moment identities of the second-order spectrum
    Moments {
        spec: String,
        /// comma-separated hex points b (default: all of F_2^m)
        #[arg(long, value_delimiter = ',', value_parser = parse_hex_u32)]
        sample: Vec<u32>,
    },
}

fn parse_hex_u64(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(t, 16).map_err(|e| format!("{s:?} is not hex: {e}"))
}

fn parse_hex_u32(s: &str) -> std::result::Result<u32, String> {
    let t = s.trim_start_matches("0x").trim_start_matches("0X");
    u32::from_str_radix(t, 16).map_err(|e| format!("{s:?} is not hex: {e}"))
}

struct Ctx {
    output: Output,
    threads: usize,
    modulus: Option<u64>,
    witnesses: bool,
    full_missing: bool,
}

impl Ctx {
    fn opts(&self) -> CheckOptions {
        CheckOptions {
            witnesses: self.witnesses,
            full_missing: self.full_missing,
            threads: self.threads,
            k_basis: None,
        }
    }

    fn build(&self, spec: &str, err: &mut dyn Write) -> Result<(FamilySpec, Vbf)> {
        let fs: FamilySpec = spec.parse()?;
        for w in fs.warnings() {
            let _ = writeln!(err, "warning: {w}");
        }
        let f = fs.build(self.modulus)?;
        Ok((fs, f))
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
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let ctx = Ctx {
        output: cli.output,
        threads: cli.threads,
        modulus: cli.modulus,
        witnesses: cli.witnesses,
        full_missing: cli.full_missing,
    };
    let result = match cli.command {
        Command::Analyze { spec, methods } => cmd_analyze(&ctx, &spec, &methods, out, err),
        Command::Dcheck { spec, method, k_basis } => cmd_dcheck(&ctx, &spec, method.as_deref(), &k_basis, out, err),
        Command::Ddt { spec, a, out: path } => cmd_ddt(&ctx, &spec, a, path, out, err),
        Command::Walsh { spec, v, out: path } => cmd_walsh(&ctx, &spec, v, path, out, err),
        Command::Restrict { spec, alpha, out: path } => cmd_restrict(&ctx, &spec, alpha, path, out, err),
        Command::Reproduce { experiment } => cmd_reproduce(&ctx, &experiment, out),
        Command::Moments { spec, sample } => cmd_moments(&ctx, &spec, &sample, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json value serializes"))?;
    Ok(())
}

fn verdict_code(v: Verdict) -> i32 {
    if v.is_d() {
        EXIT_D
    } else {
        EXIT_NOT_D
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlateauedSummary {
    pub is_plateaued: bool,
    pub is_strongly_plateaued: bool,
    /// amplitude -> number of components
    pub amplitude_histogram: BTreeMap<String, usize>,
    pub bent_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsCheck {
    pub quadratic: bool,
    pub m_min: u32,
    pub m_max: u32,
    pub strict_upper: u32,
    /// only meaningful for APN D-functions; None when the bound does not apply
    pub consistent: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Skipped {
    pub method: String,
    pub reason: String,
}

/// Everything `analyze` knows about one function. Serialized as "analysis/1";
/// wall-clock data lives only under `timings`.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub spec: String,
    pub n: u32,
    pub m: u32,
    pub modulus: Option<String>,
    pub warnings: Vec<String>,
    pub degree: u32,
    pub delta: Option<u32>,
    pub is_apn: Option<bool>,
    pub nonlinearity: Option<u64>,
    pub plateaued: Option<PlateauedSummary>,
    pub verdict: Verdict,
    pub d_reports: Vec<Value>,
    pub skipped: Vec<Skipped>,
    pub bounds: Option<BoundsCheck>,
    pub timings: BTreeMap<String, u128>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("analysis report serializes")
    }
}

/// Analysis of `f`. With `methods` empty every applicable method runs and the
/// ones refused by a size guard are listed as skipped.
pub fn analyze(spec: &str, f: &Vbf, methods: &[Method], opts: &CheckOptions) -> Result<(AnalysisReport, Vec<DReport>)> {
    let mut timings = BTreeMap::new();
    let mut timed = |name: &str, t: Instant| {
        timings.insert(name.to_string(), t.elapsed().as_millis());
    };
    let t = Instant::now();
    let degree = f.degree();
    let quadratic = degree <= 2;
    timed("degree_ms", t);

    let t = Instant::now();
    let delta = limits::check("differential uniformity", 2 * f.n(), limits::SPECTRAL_BITS, "")
        .ok()
        .map(|_| differential_uniformity(f));
    timed("delta_ms", t);

    let t = Instant::now();
    let nl = nonlinearity(f).ok();
    let profile = plateaued_profile(f).ok();
    timed("spectra_ms", t);

    let explicit = !methods.is_empty();
    let chosen: Vec<Method> = if explicit {
        for &m in methods {
            if m.needs_quadratic() && !quadratic {
                return Err(Error::Precondition(format!("method {m} needs a quadratic function (degree is {degree})")));
            }
        }
        methods.to_vec()
    } else {
        match &profile {
            Some(_) => applicable_methods(f),
            None => Method::ALL.into_iter().filter(|m| !m.needs_quadratic() || quadratic).collect(),
        }
    };

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for m in chosen {
        let t = Instant::now();
        match d_check(f, m, opts) {
            Ok(r) => reports.push(r),
            Err(e @ (Error::SizeLimit { .. } | Error::Precondition(_))) if !explicit => {
                skipped.push(Skipped { method: m.name().into(), reason: e.to_string() })
            }
            Err(e) => return Err(e),
        }
        timed(&format!("{}_ms", m.name()), t);
    }
    let Some(first) = reports.first() else {
        return Err(Error::Precondition("no D-property method could run on this input".into()));
    };
    let verdict = first.verdict;
    if reports.iter().any(|r| r.verdict != verdict) {
        let dump: Vec<String> = reports.iter().map(DReport::summary).collect();
        return Err(Error::StructuralMismatch(format!("methods disagree:\n  {}", dump.join("\n  "))));
    }

    let is_apn = delta.map(|d| d == 2);
    let bounds =
        if quadratic && f.n() > 3 { dimension_bounds(f.n(), true).ok() } else { dimension_bounds(f.n(), false).ok() };
    let bounds = bounds.map(|b| BoundsCheck {
        quadratic: b.quadratic,
        m_min: b.m_min,
        m_max: b.m_max,
        strict_upper: b.strict_upper,
        consistent: (is_apn == Some(true) && verdict.is_d()).then(|| b.admits(f.m())),
    });

    let report = AnalysisReport {
        schema: "analysis/1",
        spec: spec.to_string(),
        n: f.n(),
        m: f.m(),
        modulus: f.provenance().modulus.map(|m| format!("{m:#x}")),
        warnings: Vec::new(),
        degree,
        delta,
        is_apn,
        nonlinearity: nl,
        plateaued: profile.map(|p| PlateauedSummary {
            is_plateaued: p.is_plateaued,
            is_strongly_plateaued: p.is_strongly_plateaued,
            amplitude_histogram: p.amplitude_histogram().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            bent_count: p.bent_set_size(),
        }),
        verdict,
        d_reports: reports.iter().map(DReport::to_json_untimed).collect(),
        skipped,
        bounds,
        timings,
    };
    Ok((report, reports))
}

fn parse_methods(names: &[String]) -> Result<Vec<Method>> {
    names.iter().map(|s| Method::parse(s).ok_or_else(|| Error::Parse(format!("unknown method {s:?}")))).collect()
}

fn cmd_analyze(ctx: &Ctx, spec: &str, methods: &[String], out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let methods = parse_methods(methods)?;
    let (fs, f) = ctx.build(spec, err)?;
    let (mut report, reports) = analyze(spec, &f, &methods, &ctx.opts())?;
    report.warnings = fs.warnings();
    match ctx.output {
        Output::Json => emit_json(out, &report.to_json())?,
        Output::Text => {
            let opt = |x: Option<String>| x.unwrap_or_else(|| "skipped (size guard)".into());
            writeln!(out, "function      {} ({},{})", report.spec, report.n, report.m)?;
            if let Some(m) = &report.modulus {
                writeln!(out, "modulus       {m}")?;
            }
            writeln!(out, "degree        {}", report.degree)?;
            writeln!(out, "delta         {}", opt(report.delta.map(|d| d.to_string())))?;
            writeln!(out, "apn           {}", opt(report.is_apn.map(|d| d.to_string())))?;
            writeln!(out, "nonlinearity  {}", opt(report.nonlinearity.map(|d| d.to_string())))?;
            if let Some(p) = &report.plateaued {
                writeln!(
                    out,
                    "plateaued     {} (strongly: {}), bent components {}, amplitudes {:?}",
                    p.is_plateaued, p.is_strongly_plateaued, p.bent_count, p.amplitude_histogram
                )?;
            }
            if let Some(b) = &report.bounds {
                let c = match b.consistent {
                    Some(true) => "consistent",
                    Some(false) => "VIOLATED",
                    None => "n/a",
                };
                writeln!(out, "bounds        {} <= m <= {} ({c})", b.m_min, b.m_max)?;
            }
            for r in &reports {
                writeln!(out, "  {}", r.summary())?;
            }
            for s in &report.skipped {
                writeln!(out, "  {:<21} skipped: {}", s.method, s.reason)?;
            }
            writeln!(out, "verdict       {}", report.verdict)?;
        }
    }
    Ok(verdict_code(report.verdict))
}

fn cmd_dcheck(
    ctx: &Ctx,
    spec: &str,
    method: Option<&str>,
    k_basis: &[u32],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let (_, f) = ctx.build(spec, err)?;
    let method = match method {
        Some(s) => Method::parse(s).ok_or_else(|| Error::Parse(format!("unknown method {s:?}")))?,
        None => route(&f),
    };
    let mut opts = ctx.opts();
    if !k_basis.is_empty() {
        opts.k_basis = Some(SubspaceBasis::new(f.n(), k_basis.to_vec())?);
    }
    let report = d_check(&f, method, &opts)?;
    match ctx.output {
        Output::Json => emit_json(out, &report.to_json())?,
        Output::Text => {
            writeln!(out, "{}", report.summary())?;
            if let Some(w) = &report.witnesses {
                for (value, wit) in w {
                    writeln!(out, "  {value:#x} = D2_{{{:#x},{:#x}}}F({:#x})", wit.a, wit.b, wit.x)?;
                }
            }
        }
    }
    Ok(verdict_code(report.verdict))
}

fn write_csv(csv: &str, path: Option<PathBuf>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(&p, csv).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(csv.as_bytes())?),
    }
}

fn cmd_ddt(
    ctx: &Ctx,
    spec: &str,
    a: u32,
    path: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let (_, f) = ctx.build(spec, err)?;
    let row = ddt_row(&f, a)?;
    match ctx.output {
        Output::Json => emit_json(out, &json!({"a": a, "counts": row.counts, "sum": row.sum()}))?,
        Output::Text => {
            write_csv(&row.to_csv(), path, out)?;
            writeln!(err, "row sum {}", row.sum())?;
        }
    }
    Ok(0)
}

fn cmd_walsh(
    ctx: &Ctx,
    spec: &str,
    v: u32,
    path: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let (_, f) = ctx.build(spec, err)?;
    let row = walsh_row_checked(&f, v)?;
    match ctx.output {
        Output::Json => emit_json(out, &json!({"v": v, "values": row.values, "max_abs": row.max_abs()}))?,
        Output::Text => write_csv(&row.to_csv(), path, out)?,
    }
    Ok(0)
}

fn cmd_restrict(
    ctx: &Ctx,
    spec: &str,
    alpha: Option<u32>,
    path: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let (_, f) = ctx.build(spec, err)?;
    let field = FieldCtx::new(f.n(), ctx.modulus.filter(|m| 63 - m.leading_zeros() == f.n()))?;
    let basis = match alpha {
        Some(a) => field.hyperplane_basis(a)?,
        None => field.trace_zero_basis(),
    };
    let g = f.restrict(&basis)?;
    let text = format_truth_table(&g);
    match path {
        Some(p) => {
            std::fs::write(&p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            writeln!(err, "wrote ({},{})-function to {}", g.n(), g.m(), p.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn cmd_reproduce(ctx: &Ctx, experiment: &str, out: &mut dyn Write) -> Result<i32> {
    let names: Vec<&str> = if experiment == "all" {
        EXPERIMENTS.iter().copied().filter(|&e| e != "extension-17").collect()
    } else if EXPERIMENTS.contains(&experiment) {
        vec![experiment]
    } else {
        return Err(Error::InvalidArguments(format!(
            "unknown experiment {experiment:?}; choose one of {} or all",
            EXPERIMENTS.join(", ")
        )));
    };
    let run = RunOptions { threads: ctx.threads, modulus: ctx.modulus };
    let mut reports: Vec<ExperimentReport> = Vec::new();
    for name in names {
        let rep = run_experiment(name, &run)?;
        if ctx.output == Output::Text {
            write!(out, "{}", rep.to_text())?;
        }
        reports.push(rep);
    }
    if ctx.output == Output::Json {
        emit_json(out, &serde_json::to_value(&reports).expect("reports serialize"))?;
    }
    Ok(if reports.iter().all(ExperimentReport::passed) { 0 } else { 1 })
}

fn cmd_moments(ctx: &Ctx, spec: &str, sample: &[u32], out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (_, f) = ctx.build(spec, err)?;
    let rep = verify_moment_identities(&f, (!sample.is_empty()).then_some(sample))?;
    match ctx.output {
        Output::Json => emit_json(out, &serde_json::to_value(&rep).expect("report serializes"))?,
        Output::Text => {
            for id in &rep.identities {
                writeln!(out, "{:<24} {}", id.name, serde_json::to_string(&id.status).expect("status serializes"))?;
            }
        }
    }
    Ok(if rep.all_hold() { 0 } else { 1 })
}
