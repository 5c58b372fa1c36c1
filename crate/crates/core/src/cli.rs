//! Command-line front end: argument parsing, cached evaluation and report output.
//!
//! Exit status: 0 on success, 1 when the key is invalid, 2 on internal failure
//! or a failed check. Exact numbers are always printed as "p/q" strings.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::scalar::{self, Scalar};
use crate::algebra::Polynomial;
use crate::cache::Cache;
use crate::correlators::{correlator_at, CorrelatorError, CorrelatorTrunc};
use crate::descendents::{bracket, BracketKey};
use crate::invariants::{
    compute, welschinger_degree, welschinger_from_invariant, welschinger_key, InvariantError, InvariantKey,
    InvariantValue, Route,
};
use crate::selftest;
use crate::wdvv::OracleError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_KEY: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "ogw-loc", version, about = "Equivariant open Gromov-Witten invariants by torus localization")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Cache directory; defaults to $OGW_CACHE_DIR, then ./.ogw-cache.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Skip reading and writing the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Leave timings out so reports are byte-for-byte reproducible.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Welschinger count W(k,l) of real rational plane curves.
    Welschinger {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value = "diagrams")]
        route: Route,
    },
    /// All Welschinger counts with k + 2l up to a bound.
    WelschingerTable {
        #[arg(long, default_value_t = 11)]
        max_total: u32,
        #[arg(long, default_value = "diagrams")]
        route: Route,
    },
    /// Equivariant invariant as a polynomial in the torus weights.
    Ogw {
        #[arg(long)]
        m: u8,
        #[arg(long)]
        k: u32,
        /// Interior constraint counts l_0,...,l_2m.
        #[arg(long, value_delimiter = ',')]
        lvec: Vec<u32>,
        #[arg(long)]
        beta: u32,
        #[arg(long, default_value = "orbits")]
        route: Route,
    },
    /// Closed correlator Z_a at hbar = alpha_a/d, restricted to the real torus.
    Correlator {
        #[arg(long)]
        m: u8,
        #[arg(long)]
        a: u8,
        /// Positive half-integer, as p/q.
        #[arg(long)]
        d: String,
        #[arg(long)]
        q_cap: u32,
        /// Caps on eta_0,...,eta_2m; missing entries are 0.
        #[arg(long, value_delimiter = ',')]
        eta_caps: Vec<u32>,
    },
    /// Open descendent integral <tau_a1 ... tau_an sigma^k>.
    Bracket {
        #[arg(long, value_delimiter = ',')]
        a_list: Vec<u32>,
        #[arg(long)]
        k: u32,
    },
    /// Check that ogw(m, k=1, l=0, beta=2) vanishes for m = 1..m_max.
    RelationCheck {
        #[arg(long, default_value_t = 8)]
        m_max: u8,
    },
    /// Run the acceptance criteria (all, or the listed ones).
    Selftest { criteria: Vec<u8> },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Correlator(#[from] CorrelatorError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("{0}")]
    Failed(String),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        let invalid = match self {
            CliError::Invariant(e) => e.is_invalid_key(),
            CliError::Correlator(e) => matches!(e, CorrelatorError::InvalidKey(_)),
            CliError::Oracle(e) => matches!(e, OracleError::InvalidKey(_)),
            CliError::InvalidKey(_) => true,
            _ => false,
        };
        if invalid {
            EXIT_INVALID_KEY
        } else {
            EXIT_FAILURE
        }
    }
}

/// Parse `argv` (program name first), run, and return the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_FAILURE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    if let Some(n) = config.jobs {
        // a second configuration in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(&config, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Session<'a> {
    config: &'a RunConfig,
    cache: Option<Cache>,
}

impl Session<'_> {
    fn invariant(&self, key: &InvariantKey, route: Route) -> Result<InvariantValue, InvariantError> {
        key.validate()?;
        match &self.cache {
            Some(c) => c.get_or_compute("invariant", &(key, route), || compute(key, route)),
            None => compute(key, route),
        }
    }

    fn welschinger(&self, k: u32, l: u32, route: Route) -> Result<Scalar, InvariantError> {
        let key = welschinger_key(k, l)?;
        let value = self.invariant(&key, route)?;
        let s = value
            .as_scalar()
            .ok_or_else(|| InvariantError::NonPolynomialResult(format!("degree-0 key gave {}", value.value)))?;
        welschinger_from_invariant(l, &s)
    }

    fn seconds(&self, start: Instant) -> Option<f64> {
        (!self.config.no_timing).then(|| (start.elapsed().as_secs_f64() * 1e3).round() / 1e3)
    }
}

/// One row of a Welschinger report.
struct WelschingerRow {
    k: u32,
    l: u32,
    beta: u32,
    value: Scalar,
    route: Route,
    seconds: Option<f64>,
}

impl WelschingerRow {
    fn json(&self) -> Value {
        let mut v = json!({
            "key": {"k": self.k, "l": self.l, "beta": self.beta},
            "value": scalar::to_string(&self.value),
            "route": self.route.to_string(),
        });
        if let Some(s) = self.seconds {
            v["seconds"] = json!(s);
        }
        v
    }

    fn csv(&self) -> String {
        let secs = self.seconds.map(|s| format!("{s:.3}")).unwrap_or_default();
        format!("{},{},{},{},{},{}", self.k, self.l, self.beta, scalar::to_string(&self.value), self.route, secs)
    }

    fn text(&self) -> String {
        format!("W({},{}) = {}  [degree {}, {}]", self.k, self.l, scalar::to_string(&self.value), self.beta, self.route)
    }
}

const CSV_HEADER: &str = "k,l,beta,value,route,seconds";

#[derive(Serialize, Deserialize)]
struct CorrelatorTerm {
    exponents: Vec<u32>,
    value: String,
}

fn polynomial_json(p: &Polynomial) -> Value {
    match p.as_constant() {
        Some(c) => json!(scalar::to_string(&c)),
        None => serde_json::to_value(p).expect("polynomials serialize"),
    }
}

fn emit(out: &mut dyn Write, format: Format, json_value: &Value, csv: &[String], text: &str) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(json_value).expect("reports serialize")),
        Format::Csv => {
            for line in csv {
                writeln!(out, "{line}")?;
            }
            Ok(())
        }
        Format::Text => writeln!(out, "{text}"),
    }
}

fn execute(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let cache = (!config.no_cache).then(|| config.cache_dir.clone().map(Cache::new).unwrap_or_else(Cache::from_env));
    let session = Session { config, cache };
    let format = config.format;
    match &config.command {
        Command::Welschinger { k, l, route } => {
            let beta = welschinger_degree(*k, *l)
                .ok_or_else(|| CliError::InvalidKey(format!("k + 2l = {} is not 3d - 1", k + 2 * l)))?;
            let start = Instant::now();
            let value = session.welschinger(*k, *l, *route)?;
            let row = WelschingerRow { k: *k, l: *l, beta, value, route: *route, seconds: session.seconds(start) };
            emit(out, format, &row.json(), &[CSV_HEADER.into(), row.csv()], &row.text())?;
        }
        Command::WelschingerTable { max_total, route } => {
            let mut rows = Vec::new();
            for total in 2..=*max_total {
                for l in 0..=total / 2 {
                    let k = total - 2 * l;
                    if let Some(beta) = welschinger_degree(k, l) {
                        let start = Instant::now();
                        let value = session.welschinger(k, l, *route)?;
                        rows.push(WelschingerRow { k, l, beta, value, route: *route, seconds: session.seconds(start) });
                    }
                }
            }
            let json_rows = Value::Array(rows.iter().map(WelschingerRow::json).collect());
            let mut csv = vec![CSV_HEADER.to_string()];
            csv.extend(rows.iter().map(WelschingerRow::csv));
            let text: Vec<String> = rows.iter().map(WelschingerRow::text).collect();
            emit(out, format, &json_rows, &csv, &text.join("\n"))?;
        }
        Command::Ogw { m, k, lvec, beta, route } => {
            let key = InvariantKey::new(*m, *k, lvec.clone(), *beta);
            let start = Instant::now();
            let v = session.invariant(&key, *route)?;
            let seconds = session.seconds(start);
            let mut record = json!({
                "key": {"m": key.m, "k": key.k, "lvec": key.lvec, "beta": key.beta},
                "expected_degree": v.expected_degree,
                "value": polynomial_json(&v.value),
                "route": route.to_string(),
            });
            if let Some(s) = seconds {
                record["timing"] = json!(s);
            }
            let l: Vec<String> = lvec.iter().map(u32::to_string).collect();
            let secs = seconds.map(|s| format!("{s:.3}")).unwrap_or_default();
            let csv = vec![CSV_HEADER.into(), format!("{},{},{},\"{}\",{},{}", k, l.join(";"), beta, v.value, route, secs)];
            let text = format!("{key} via {route}: {} (expected degree {})", v.value, v.expected_degree);
            emit(out, format, &record, &csv, &text)?;
        }
        Command::Correlator { m, a, d, q_cap, eta_caps } => {
            let d = scalar::parse(d).map_err(|e| CliError::InvalidKey(format!("d = {d}: {e}")))?;
            let mut caps = eta_caps.clone();
            if caps.len() > 2 * *m as usize + 1 {
                return Err(CliError::InvalidKey(format!("{} eta caps for m = {m}", caps.len())));
            }
            caps.resize(2 * *m as usize + 1, 0);
            let trunc = CorrelatorTrunc::new(*q_cap, caps);
            let compute_terms = || -> Result<Vec<CorrelatorTerm>, CorrelatorError> {
                let z = correlator_at(*m, *a, &d, &trunc)?;
                Ok(z.terms
                    .iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(e, c)| CorrelatorTerm { exponents: e.clone(), value: c.reduce().to_string() })
                    .collect())
            };
            let key = (*m, *a, scalar::to_string(&d), &trunc);
            let terms = match &session.cache {
                Some(c) => c.get_or_compute("correlator", &key, compute_terms)?,
                None => compute_terms()?,
            };
            let vars: Vec<String> = trunc.spec().vars.iter().map(|v| format!("{v:?}")).collect();
            let record = json!({
                "key": {"m": m, "a": a, "d": scalar::to_string(&d), "q_cap": q_cap, "eta_caps": trunc.eta_caps},
                "variables": vars,
                "terms": terms.iter().map(|t| json!({"exponents": t.exponents, "value": t.value})).collect::<Vec<_>>(),
            });
            let mut csv = vec![format!("{},value", vars.join(","))];
            let mut text = String::new();
            for t in &terms {
                let e: Vec<String> = t.exponents.iter().map(u32::to_string).collect();
                csv.push(format!("{},\"{}\"", e.join(","), t.value));
                let _ = writeln!(text, "{:?}: {}", t.exponents, t.value);
            }
            emit(out, format, &record, &csv, text.trim_end())?;
        }
        Command::Bracket { a_list, k } => {
            let key = BracketKey::new(a_list.clone(), *k);
            let value = bracket(&key);
            let record = json!({
                "key": {"a_list": key.a_list, "k": key.k},
                "in_dimension": key.in_dimension(),
                "value": value.to_string(),
            });
            let a: Vec<String> = key.a_list.iter().map(u32::to_string).collect();
            let csv = vec!["a_list,k,value".into(), format!("{},{},{}", a.join(";"), k, value)];
            emit(out, format, &record, &csv, &format!("<tau{:?} sigma^{k}> = {value}", key.a_list))?;
        }
        Command::RelationCheck { m_max } => {
            let start = Instant::now();
            let vanished = selftest::relation_check(*m_max, |key| {
                session.invariant(key, Route::Orbits).map_err(|e| e.to_string())
            })
            .map_err(CliError::Failed)?;
            let ok = vanished == *m_max as usize;
            let summary = format!("{}: {vanished}/{m_max} vanish", if ok { "OK" } else { "FAIL" });
            let mut record = json!({"m_max": m_max, "vanished": vanished, "ok": ok, "summary": summary});
            if let Some(s) = session.seconds(start) {
                record["seconds"] = json!(s);
            }
            let csv = vec!["m_max,vanished,ok".into(), format!("{m_max},{vanished},{ok}")];
            emit(out, format, &record, &csv, &summary)?;
            return Ok(if ok { EXIT_OK } else { EXIT_FAILURE });
        }
        Command::Selftest { criteria } => {
            let mut write_err = None;
            let reports = selftest::run(criteria, |r| {
                if format == Format::Text {
                    if let Err(e) = writeln!(out, "{}", r.line()).and_then(|_| out.flush()) {
                        write_err.get_or_insert(e);
                    }
                }
            });
            if let Some(e) = write_err {
                return Err(e.into());
            }
            let passed = reports.iter().all(|r| r.passed);
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| json!({"criterion": r.id, "title": r.title, "passed": r.passed, "detail": r.detail, "seconds": r.seconds}))
                .collect();
            let mut csv = vec!["criterion,passed,seconds".to_string()];
            csv.extend(reports.iter().map(|r| format!("{},{},{:.2}", r.id, r.passed, r.seconds)));
            if format != Format::Text {
                emit(out, format, &Value::Array(rows), &csv, "")?;
            }
            return Ok(if passed { EXIT_OK } else { EXIT_FAILURE });
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let dir = tempfile::tempdir().unwrap();
        let mut argv = vec!["ogw-loc", "--cache-dir", dir.path().to_str().unwrap()];
        argv.extend_from_slice(args);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn lines_report() {
        let (code, out, _) = run_capture(&["welschinger", "--k", "2", "--l", "0"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"], "1");
    }

    #[test]
    fn invalid_key_exits_one() {
        let (code, _, err) = run_capture(&["ogw", "--m", "1", "--k", "2", "--lvec", "0,0,0", "--beta", "2"]);
        assert_eq!(code, 1);
        assert!(err.contains("invalid key"));
        assert_eq!(run_capture(&["welschinger", "--k", "3", "--l", "0"]).0, 1);
    }

    #[test]
    fn usage_error_is_nonzero() {
        let (code, _, err) = run_capture(&["ogw", "--m", "one"]);
        assert_ne!(code, 0);
        assert!(!err.is_empty());
    }

    #[test]
    fn csv_columns() {
        let (code, out, _) = run_capture(&["--format", "csv", "--no-timing", "welschinger", "--k", "5", "--l", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out, "k,l,beta,value,route,seconds\n5,0,2,1,diagrams,\n");
    }

    #[test]
    fn bracket_and_relation_text() {
        let (_, out, _) = run_capture(&["--format", "text", "bracket", "--a-list", "2", "--k", "5"]);
        assert!(out.trim().ends_with("= 8"));
        let (code, out, _) = run_capture(&["--format", "text", "relation-check", "--m-max", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "OK: 3/3 vanish");
    }
}
