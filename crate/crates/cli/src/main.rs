//! `qtouch`: verify the identity catalog and expand `.cf` continued fractions.
//!
//! Exit codes: 0 pass, 1 identity failure or internal error, 2 usage or parse
//! error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qtouch_core::contfrac::{stable_expansion, ContFracError};
use qtouch_core::dsl::parse_spec;
use qtouch_core::identities::{catalog, run_check, CheckReport, IdentityError};
use qtouch_core::Var;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "qtouch", version, about = "Exact checks for Touchard-type continued fractions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one catalog check.
    Verify {
        #[arg(long)]
        id: String,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Run the whole catalog.
    VerifyAll {
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Expand the continued fraction described by a `.cf` file.
    Expand {
        #[arg(long = "spec", visible_alias = "spec-file", value_name = "FILE")]
        spec_file: PathBuf,
        #[arg(long, default_value_t = 16)]
        order: usize,
        /// Variable name used when printing the series; defaults to the file's own.
        #[arg(long)]
        var: Option<Var>,
        /// Parameter value overriding the file's `param`, e.g. `--param d=3`.
        #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
        params: Vec<(String, i64)>,
    },
    /// List the catalog ids.
    List,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Order to check at; defaults to each check's catalog order.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Report wall-clock times; without this `elapsed_ms` is 0 so output is reproducible.
    #[arg(long)]
    timings: bool,
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value = value.trim().parse().map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((name.trim().to_string(), value))
}

#[derive(Serialize)]
struct JsonMismatch {
    power: usize,
    lhs: String,
    rhs: String,
}

#[derive(Serialize)]
struct JsonReport {
    id: String,
    order: usize,
    status: &'static str,
    first_mismatch: Option<JsonMismatch>,
    depth_used: usize,
    elapsed_ms: u64,
}

impl JsonReport {
    fn new(r: &CheckReport, timings: bool) -> Self {
        JsonReport {
            id: r.id.clone(),
            order: r.order,
            status: r.status.as_str(),
            first_mismatch: r.first_mismatch.as_ref().map(|m| JsonMismatch {
                power: m.power,
                lhs: m.lhs.to_string(),
                rhs: m.rhs.to_string(),
            }),
            depth_used: r.depth_used,
            elapsed_ms: if timings { r.elapsed_ms } else { 0 },
        }
    }
}

fn text_report(r: &CheckReport, timings: bool) -> String {
    let mut out = format!("{}: {} (order {}, depth {})", r.id, r.status, r.order, r.depth_used);
    if timings {
        let _ = write!(out, " in {} ms", r.elapsed_ms);
    }
    out.push('\n');
    if let Some(m) = &r.first_mismatch {
        let ctx = if m.context.is_empty() { String::new() } else { format!(" [{}]", m.context) };
        let _ = writeln!(out, "  first mismatch at power {}{ctx}", m.power);
        let _ = writeln!(out, "    lhs: {}", m.lhs);
        let _ = writeln!(out, "    rhs: {}", m.rhs);
    }
    out
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
        }
    }
}

fn default_order(id: &str) -> Option<usize> {
    catalog().iter().find(|e| e.id == id).map(|e| e.default_order.value())
}

fn identity_error(e: &IdentityError) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        IdentityError::UnknownId { .. } => ExitCode::from(EXIT_USAGE),
        _ => ExitCode::from(EXIT_FAIL),
    }
}

fn cmd_verify(id: &str, args: &ReportArgs) -> ExitCode {
    let Some(order) = args.order.or_else(|| default_order(id)) else {
        return identity_error(&IdentityError::UnknownId { id: id.to_string() });
    };
    let report = match run_check(id, order) {
        Ok(r) => r,
        Err(e) => return identity_error(&e),
    };
    if args.json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&JsonReport::new(&report, args.timings)).expect("serializable")));
    } else {
        emit(&text_report(&report, args.timings));
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn cmd_verify_all(args: &ReportArgs) -> ExitCode {
    let reports = match qtouch_core::identities::run_catalog(args.order) {
        Ok(r) => r,
        Err(e) => return identity_error(&e),
    };
    let passed = reports.iter().filter(|r| r.passed()).count();
    let mut out = String::new();
    if args.json {
        let json: Vec<_> = reports.iter().map(|r| JsonReport::new(r, args.timings)).collect();
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&json).expect("serializable"));
    } else {
        let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(0);
        let mut header = format!("{:width$}  {:>5}  {:>5}  status", "id", "order", "depth");
        if args.timings {
            header.push_str("        ms");
        }
        let _ = writeln!(out, "{header}");
        for r in &reports {
            let mut line = format!("{:width$}  {:>5}  {:>5}  {:6}", r.id, r.order, r.depth_used, r.status.as_str());
            if args.timings {
                let _ = write!(line, "  {:>8}", r.elapsed_ms);
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        let _ = writeln!(out, "{passed}/{} checks passed", reports.len());
        for r in reports.iter().filter(|r| !r.passed()) {
            out.push_str(&text_report(r, args.timings));
        }
    }
    emit(&out);
    if passed == reports.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn qmax_from_env() -> Result<Option<u32>, String> {
    match std::env::var("QTOUCH_QMAX") {
        Ok(s) => s.trim().parse().map(Some).map_err(|e| format!("QTOUCH_QMAX=`{s}` is not a valid bound: {e}")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("QTOUCH_QMAX: {e}")),
    }
}

fn cmd_expand(path: &Path, order: usize, var: Option<Var>, params: &[(String, i64)]) -> ExitCode {
    let usage = |msg: String| {
        eprintln!("error: {msg}");
        ExitCode::from(EXIT_USAGE)
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage(format!("cannot read {}: {e}", path.display())),
    };
    let doc = match parse_spec(&text) {
        Ok(d) => d,
        Err(e) => return usage(format!("{}: {e}", path.display())),
    };
    let params: BTreeMap<String, i64> = params.iter().cloned().collect();
    if let Some(name) = params.keys().find(|k| k.as_str() != "d") {
        return usage(format!("unknown parameter `{name}`; only `d` is supported"));
    }
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut spec = match doc.to_cf_spec(&name, &params) {
        Ok(s) => s,
        Err(e) => return usage(format!("{}: {e}", path.display())),
    };
    match qmax_from_env() {
        Ok(Some(q)) => spec = spec.with_qmax(q),
        Ok(None) => {}
        Err(msg) => return usage(msg),
    }
    let result = match stable_expansion(&spec, order) {
        Ok(r) => r,
        Err(e @ (ContFracError::Degenerate { .. } | ContFracError::InvalidSpec(_))) => {
            return usage(format!("{}: {e}", path.display()))
        }
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_FAIL);
        }
    };
    if !result.stabilized {
        eprintln!("warning: expansion did not stabilize at depth {}", result.depth_used);
    }
    let mut out = String::new();
    for line in result.series.render_lines(var.unwrap_or(spec.var())) {
        let _ = writeln!(out, "{line}");
    }
    emit(&out);
    ExitCode::SUCCESS
}

fn cmd_list() -> ExitCode {
    let width = catalog().iter().map(|e| e.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for e in catalog() {
        let _ = writeln!(out, "{:width$}  {:>2}  {}", e.id, e.default_order.value(), e.description);
    }
    emit(&out);
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Verify { id, report } => cmd_verify(id, report),
        Command::VerifyAll { report } => cmd_verify_all(report),
        Command::Expand { spec_file, order, var, params } => cmd_expand(spec_file, *order, *var, params),
        Command::List => cmd_list(),
    }
}
