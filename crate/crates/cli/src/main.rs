//! `noncyc` — construct and verify certificates of non-cyclic
//! abelian-variety isogeny classes over finite fields.
//!
//! Exit codes: 0 success; 2 invalid input (bad q, bad polynomial, bad
//! flags); 1 internal construction or verification failure.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use noncyc_core::certificate::{reverify, Certificate, Realizability};
use noncyc_core::chebgen::construct_large_g;
use noncyc_core::cyclicity::cyclicity_report;
use noncyc_core::enumerate::classify_noncyclic;
use noncyc_core::hsearch::{
    certify_exceptional, certify_small_g, h_table, is_exceptional_pair, verify_table_entry,
    HsearchError,
};
use noncyc_core::intpoly::IntPoly;
use noncyc_core::weil::{expand_h_to_f, is_ordinary, WeilPoly};
use noncyc_core::PrimePower;

#[derive(Parser)]
#[command(
    name = "noncyc",
    about = "Non-cyclic isogeny classes of abelian varieties over finite fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<String>,

    /// Worker threads for enumeration and batch verification.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Construct certificate(s) of a non-cyclic simple isogeny class for
    /// a dimension and field size.
    Certify(CertifyArgs),
    /// Re-derive every column of the built-in trace-polynomial table.
    VerifyTables,
    /// Analyze a user-supplied polynomial over F_q.
    Check(CheckArgs),
    /// Enumerate all q-Weil polynomials of a given dimension with their
    /// cyclicity reports (JSON lines).
    Enumerate(EnumerateArgs),
    /// Recompute every predicate of a stored certificate file.
    Reverify(ReverifyArgs),
}

#[derive(Args)]
struct CertifyArgs {
    /// Dimension g >= 2.
    #[arg(long)]
    g: usize,
    /// Field size q (a prime power).
    #[arg(long)]
    q: u64,
}

#[derive(Args)]
struct CheckArgs {
    /// Field size q (a prime power).
    #[arg(long)]
    q: u64,
    /// Ascending comma-separated integer coefficients (constant term
    /// first); arbitrarily large values accepted as decimal strings.
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Interpret the polynomial as a trace polynomial h of degree g
    /// instead of a Weil polynomial f of degree 2g.
    #[arg(long)]
    as_h: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Dimension g.
    #[arg(long)]
    g: usize,
    /// Field size q (a prime power).
    #[arg(long)]
    q: u64,
    /// Emit only the aggregate result instead of one line per polynomial.
    #[arg(long)]
    summary: bool,
    /// Lift the desk-scale guard (the run may be very large).
    #[arg(long)]
    allow_large_enumeration: bool,
}

#[derive(Args)]
struct ReverifyArgs {
    /// Path of a certificate JSON file (a single certificate or an
    /// array).
    path: String,
}

const EXIT_INTERNAL: u8 = 1;
const EXIT_INVALID: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let mut out = Output::new(cli.output.clone());
    let code = match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    };
    if let Err(e) = out.finish() {
        eprintln!("error: cannot write output: {}", e);
        return ExitCode::from(EXIT_INTERNAL);
    }
    code
}

struct CliError {
    code: u8,
    message: String,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_INVALID, message: msg.into() }
}

fn internal(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_INTERNAL, message: msg.into() }
}

/// Buffers output so a failed run does not leave a partial file.
struct Output {
    path: Option<String>,
    buf: String,
}

impl Output {
    fn new(path: Option<String>) -> Output {
        Output { path, buf: String::new() }
    }

    fn line(&mut self, s: &str) {
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    fn finish(&mut self) -> io::Result<()> {
        match &self.path {
            Some(p) => fs::write(p, self.buf.as_bytes()),
            None => io::stdout().write_all(self.buf.as_bytes()),
        }
    }
}

fn run(cli: &Cli, out: &mut Output) -> Result<(), CliError> {
    match &cli.command {
        Command::Certify(args) => cmd_certify(args, cli.format, out),
        Command::VerifyTables => cmd_verify_tables(cli.format, out),
        Command::Check(args) => cmd_check(args, cli.format, out),
        Command::Enumerate(args) => cmd_enumerate(args, out),
        Command::Reverify(args) => cmd_reverify(args, out),
    }
}

fn parse_q(q: u64) -> Result<PrimePower, CliError> {
    PrimePower::new(q).map_err(|e| invalid(e.to_string()))
}

fn cmd_certify(args: &CertifyArgs, format: Format, out: &mut Output) -> Result<(), CliError> {
    if args.g < 2 {
        return Err(invalid(
            "certify requires --g >= 2: the construction covers dimensions g > 1 only",
        ));
    }
    let q = parse_q(args.q)?;
    let certs: Vec<Certificate> = if is_exceptional_pair(args.g, q.q()) {
        certify_exceptional(args.g, q).map_err(|e| internal(e.to_string()))?
    } else if args.g <= 13 {
        match certify_small_g(args.g, q) {
            Ok(c) => vec![c],
            Err(e @ HsearchError::DimensionOutOfRange(_)) => return Err(invalid(e.to_string())),
            Err(e) => return Err(internal(e.to_string())),
        }
    } else {
        vec![construct_large_g(args.g, q).map_err(|e| internal(e.to_string()))?]
    };
    match format {
        Format::Json => out.line(
            &serde_json::to_string_pretty(&certs).expect("certificates serialize"),
        ),
        Format::Text => {
            for c in &certs {
                out.line(&render_certificate(c));
            }
        }
    }
    Ok(())
}

fn cmd_verify_tables(format: Format, out: &mut Output) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct RowResult {
        g: usize,
        h: String,
        case: String,
        pass: bool,
    }
    let mut results = Vec::new();
    let mut all_pass = true;
    for e in h_table() {
        let v = verify_table_entry(e);
        all_pass &= v.all_pass();
        results.push(RowResult {
            g: e.g,
            h: e.h.to_string(),
            case: e.case.label().to_string(),
            pass: v.all_pass(),
        });
    }
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Summary {
                rows: usize,
                all_pass: bool,
                results: Vec<RowResult>,
            }
            let s = Summary { rows: results.len(), all_pass, results };
            out.line(&serde_json::to_string_pretty(&s).expect("serializes"));
        }
        Format::Text => {
            for r in &results {
                out.line(&format!(
                    "g={:<3} {:<7} {}  {}",
                    r.g,
                    r.case,
                    if r.pass { "ok " } else { "FAIL" },
                    r.h
                ));
            }
            out.line(&format!(
                "{} rows, {}",
                results.len(),
                if all_pass { "all pass" } else { "FAILURES PRESENT" }
            ));
        }
    }
    if all_pass {
        Ok(())
    } else {
        Err(internal("built-in table failed verification"))
    }
}

#[derive(Serialize)]
struct CheckReport {
    q: u64,
    interpreted_as: &'static str,
    h: Option<Vec<String>>,
    f: Vec<String>,
    weil: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    irreducible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ordinary: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    simple_ordinary: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cyclicity: Option<noncyc_core::certificate::CyclicityDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    noncyclic_witnesses: Option<Vec<String>>,
}

fn cmd_check(args: &CheckArgs, format: Format, out: &mut Output) -> Result<(), CliError> {
    let q = parse_q(args.q)?;
    let coeff_strings: Vec<String> = args.poly.split(',').map(|s| s.trim().to_string()).collect();
    let poly = IntPoly::from_dec_strings(&coeff_strings)
        .ok_or_else(|| invalid("polynomial coefficients must be integers"))?;
    if !poly.is_monic() {
        return Err(invalid("polynomial must be monic"));
    }
    if poly.deg_or_zero() < 1 {
        return Err(invalid("polynomial must have degree at least 1"));
    }
    let (h, f, weil, reason) = if args.as_h {
        match expand_h_to_f(&poly, q) {
            Ok(w) => (Some(poly.clone()), w.f().clone(), true, None),
            Err(e) => (Some(poly.clone()), IntPoly::zero(), false, Some(e.to_string())),
        }
    } else {
        match WeilPoly::new(poly.clone(), q) {
            Ok(w) => (Some(w.trace()), poly.clone(), true, None),
            Err(e) => (None, poly.clone(), false, Some(e.to_string())),
        }
    };
    let report = if weil {
        let w = WeilPoly::new(f.clone(), q).expect("validated above");
        let h = h.as_ref().expect("trace exists for a Weil polynomial");
        let r = cyclicity_report(&w).map_err(|e| invalid(e.to_string()))?;
        let irreducible = noncyc_core::intpoly::is_irreducible_q(&f);
        let ordinary = is_ordinary(h, q);
        CheckReport {
            q: q.q(),
            interpreted_as: if args.as_h { "h" } else { "f" },
            h: Some(h.to_dec_strings()),
            f: f.to_dec_strings(),
            weil: true,
            reason: None,
            irreducible: Some(irreducible),
            ordinary: Some(ordinary),
            simple_ordinary: Some(irreducible && ordinary),
            noncyclic_witnesses: Some(r.witnesses.iter().map(|w| w.to_string()).collect()),
            cyclicity: Some(noncyc_core::certificate::CyclicityDto::from_report(&r)),
        }
    } else {
        CheckReport {
            q: q.q(),
            interpreted_as: if args.as_h { "h" } else { "f" },
            h: h.as_ref().map(|p| p.to_dec_strings()),
            f: f.to_dec_strings(),
            weil: false,
            reason,
            irreducible: None,
            ordinary: None,
            simple_ordinary: None,
            cyclicity: None,
            noncyclic_witnesses: None,
        }
    };
    match format {
        Format::Json => {
            out.line(&serde_json::to_string_pretty(&report).expect("serializes"))
        }
        Format::Text => out.line(&render_check(&report)),
    }
    Ok(())
}

fn cmd_enumerate(args: &EnumerateArgs, out: &mut Output) -> Result<(), CliError> {
    if args.g < 1 {
        return Err(invalid("enumerate requires --g >= 1"));
    }
    let q = parse_q(args.q)?;
    let within_guard =
        args.g <= noncyc_core::enumerate::MAX_G && q.q() <= noncyc_core::enumerate::MAX_Q;
    if !within_guard && !args.allow_large_enumeration {
        return Err(invalid(format!(
            "enumeration guard: g <= {} and q <= {}; pass --allow-large-enumeration to exceed",
            noncyc_core::enumerate::MAX_G,
            noncyc_core::enumerate::MAX_Q
        )));
    }
    let result =
        classify_noncyclic(args.g, q, true).map_err(|e| invalid(e.to_string()))?;
    if args.summary {
        #[derive(Serialize)]
        struct Summary<'a> {
            g: usize,
            q: u64,
            total_weil: usize,
            noncyclic_count: usize,
            witness_prime_profile: Vec<(String, usize)>,
            noncyclic: Vec<SummaryEntry<'a>>,
        }
        #[derive(Serialize)]
        struct SummaryEntry<'a> {
            f: Vec<String>,
            witnesses: Vec<String>,
            irreducible: bool,
            ordinary: bool,
            realizability: &'a Realizability,
        }
        let s = Summary {
            g: result.g,
            q: result.q,
            total_weil: result.total_weil,
            noncyclic_count: result.noncyclic.len(),
            witness_prime_profile: result
                .witness_prime_profile
                .iter()
                .map(|(p, c)| (p.to_string(), *c))
                .collect(),
            noncyclic: result
                .noncyclic
                .iter()
                .map(|c| SummaryEntry {
                    f: c.weil.f().to_dec_strings(),
                    witnesses: c.report.witnesses.iter().map(|w| w.to_string()).collect(),
                    irreducible: c.irreducible,
                    ordinary: c.ordinary,
                    realizability: &c.realizability,
                })
                .collect(),
        };
        out.line(&serde_json::to_string_pretty(&s).expect("serializes"));
        return Ok(());
    }
    // JSON lines: every enumerated polynomial with its report. The
    // classification retains only non-cyclic entries, so re-enumerate and
    // report each class.
    let all = noncyc_core::enumerate::enumerate_weil_unguarded(args.g, q);
    #[derive(Serialize)]
    struct Line {
        f: Vec<String>,
        h: Vec<String>,
        cyclic: bool,
        witnesses: Vec<String>,
    }
    for w in &all {
        let r = cyclicity_report(w).map_err(|e| internal(e.to_string()))?;
        let line = Line {
            f: w.f().to_dec_strings(),
            h: w.trace().to_dec_strings(),
            cyclic: r.is_cyclic,
            witnesses: r.witnesses.iter().map(|x| x.to_string()).collect(),
        };
        out.line(&serde_json::to_string(&line).expect("serializes"));
    }
    Ok(())
}

fn cmd_reverify(args: &ReverifyArgs, out: &mut Output) -> Result<(), CliError> {
    let data = fs::read_to_string(&args.path)
        .map_err(|e| invalid(format!("cannot read {}: {}", args.path, e)))?;
    let certs: Vec<Certificate> = match serde_json::from_str::<Vec<Certificate>>(&data) {
        Ok(list) => list,
        Err(_) => vec![serde_json::from_str::<Certificate>(&data)
            .map_err(|e| invalid(format!("corrupt certificate: {}", e)))?],
    };
    for (i, c) in certs.iter().enumerate() {
        reverify(c).map_err(|e| internal(format!("certificate {}: {}", i, e)))?;
    }
    out.line(&format!(
        "{}: {} certificate(s) reproduce under recomputation",
        args.path,
        certs.len()
    ));
    Ok(())
}

fn poly_of(strings: &[String]) -> String {
    IntPoly::from_dec_strings(strings)
        .map(|p| p.to_string())
        .unwrap_or_else(|| "<invalid>".to_string())
}

fn render_certificate(c: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Certificate (v{})", c.v);
    let _ = writeln!(s, "  dimension g = {}, field F_{} (p = {}, r = {})", c.g, c.q, c.p, c.r);
    let _ = writeln!(s, "  case {}  provenance {:?}", c.case.label(), c.provenance);
    let _ = writeln!(s, "  h = {}", poly_of(&c.h));
    let _ = writeln!(s, "  f = {}", poly_of(&c.f));
    let _ = writeln!(s, "  checks:");
    let _ = writeln!(s, "    weil shape            {}", c.checks.weil_shape);
    let _ = writeln!(s, "    roots real, sq <= 4q  {}", c.checks.totally_real_within_4q);
    let _ = writeln!(s, "    irreducible over Q    {}", c.checks.irreducible);
    let _ = writeln!(s, "    ordinary              {}", c.checks.ordinary);
    let _ = writeln!(s, "    case divisibilities   {}", c.checks.case_conditions);
    let _ = writeln!(s, "    simple ordinary       {}", c.checks.simple_ordinary);
    let _ = writeln!(s, "  realizability: {:?}", c.realizability);
    let _ = writeln!(
        s,
        "  f(1) = {} = #A(F_q);  f'(1) = {}",
        c.cyclicity.f1, c.cyclicity.fprime1
    );
    let _ = writeln!(
        s,
        "  rad f(1) over primes {:?}, quotient {}",
        c.cyclicity.radical_primes, c.cyclicity.hat_f1
    );
    let _ = writeln!(
        s,
        "  witness primes {:?} -> the class is {}",
        c.cyclicity.witnesses,
        if c.cyclicity.cyclic { "cyclic" } else { "NON-CYCLIC" }
    );
    if let Some(cons) = &c.construction {
        let _ = writeln!(s, "  construction: s = {}, seed {:?}", cons.s, cons.seed);
        let _ = writeln!(
            s,
            "    deltas: a_g-1 {:+}, a_g-2 {:+}, a_g {:+} (coprimality {:+})",
            cons.delta_a_g_minus_1, cons.delta_a_g_minus_2, cons.delta_a_g, cons.coprimality_shift
        );
        let _ = writeln!(
            s,
            "    weighted coefficient sum <= {} (< 1: {})",
            cons.howe_bound_upper, cons.howe_bound_less_than_one
        );
    }
    s
}

fn render_check(r: &CheckReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Polynomial over F_{} (given as {})", r.q, r.interpreted_as);
    let _ = writeln!(s, "  f = {}", poly_of(&r.f));
    if let Some(h) = &r.h {
        let _ = writeln!(s, "  h = {}", poly_of(h));
    }
    if !r.weil {
        let _ = writeln!(
            s,
            "  NOT a q-Weil polynomial: {}",
            r.reason.as_deref().unwrap_or("shape check failed")
        );
        return s;
    }
    let _ = writeln!(s, "  q-Weil polynomial: yes");
    if let (Some(i), Some(o), Some(so)) = (r.irreducible, r.ordinary, r.simple_ordinary) {
        let _ = writeln!(s, "  irreducible {}, ordinary {}, simple ordinary {}", i, o, so);
    }
    if let Some(c) = &r.cyclicity {
        let _ = writeln!(s, "  f(1) = {}, f'(1) = {}", c.f1, c.fprime1);
        let _ = writeln!(
            s,
            "  witnesses {:?} -> {}",
            c.witnesses,
            if c.cyclic {
                "cyclic isogeny class".to_string()
            } else {
                format!("non-{}-cyclic", c.witnesses.join(",-"))
            }
        );
    }
    s
}
