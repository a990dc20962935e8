//! Command-line front end. `run` is the whole program minus process exit, so
//! tests can drive it with in-memory writers.

use std::cmp::Ordering;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::closed_forms::{
    f_definition, f_expanded, f_normalized, invariants_closed_form, normalization_factor, scan_min_n,
};
use crate::exact::{approx_decimal, format_rational, int, parse_rational, Rational};
use crate::identity::{
    format_form, verify_identities, IdentityReport, PointwiseIdentity, Prover, APTE_PROVENANCE,
};
use crate::inequality::{
    bochner_bound, bound_difference, calabi_trivial_bound, compare_lower_bounds, csck_obstruction_check,
    tian_check_csck, tian_check_with_scalar, yau_check, InequalityReport, KahlerClassData, YauMode,
};
use crate::ring::{parse_class_expr, eval_class_expr, top_evaluate, DslError};
use crate::tensor::{
    certify_with, verify_cross_terms_with, verify_key_subcontraction, verify_norm_identities_with, IdentityCheck,
    TensorModel,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Io(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "kahlerq", version, about = "Exact Kähler-class invariants, cscK obstructions and curvature identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants, obstruction polynomial and inequality verdicts for αL + βH
    Batyrev {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long)]
        json: bool,
    },
    /// Sign of f(n, α, β) for n = 2..=n_max
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        n_max: i64,
        /// Write rows n,t,f_num,f_den,sign to this file
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run the inequality checks over JSON-lines records
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// CSV output, to a file or to stdout when no path is given
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        csv: Option<PathBuf>,
        /// Use this constant scalar curvature in the Tian check instead of the cscK value
        #[arg(long, allow_hyphen_values = true)]
        scalar: Option<String>,
    },
    /// Evaluate a class expression in the intersection ring
    Ring {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Check the tensor norm identities and the derived integral identities
    Verify {
        #[arg(value_enum)]
        which: Which,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Tensor,
    Identities,
    All,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Batyrev { n, alpha, beta, json } => cmd_batyrev(*n, alpha, beta, *json, out),
        Command::Scan { alpha, beta, n_max, csv, json } => cmd_scan(alpha, beta, *n_max, csv.as_deref(), *json, out),
        Command::Check { input, json, csv, scalar } => cmd_check(input, *json, csv.as_deref(), scalar.as_deref(), out),
        Command::Ring { n, alpha, beta, expr, json } => cmd_ring(*n, alpha, beta, expr, *json, out),
        Command::Verify { which, json } => cmd_verify(*which, &TensorModel::default(), *json, out),
    }
}

fn flag_rational(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Parse(format!("invalid value for {flag}: {e}")))
}

fn dimension(flag: &str, n: i64) -> Result<u32, CliError> {
    u32::try_from(n)
        .ok()
        .filter(|&n| n >= 2)
        .ok_or_else(|| CliError::Precondition(format!("{flag} must be an integer >= 2, got {n}")))
}

fn positive(flag: &str, x: &Rational) -> Result<(), CliError> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(CliError::Precondition(format!("{flag} must be positive, got {}", format_rational(x))))
    }
}

/// `p/q (≈ d)` for human output; integers print bare.
pub fn human(x: &Rational) -> String {
    if x.is_integer() {
        format_rational(x)
    } else {
        format!("{} (≈ {})", format_rational(x), approx_decimal(x, 6))
    }
}

fn exact(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out, "{text}").map_err(io_err)
}

fn report_json(r: &InequalityReport) -> Value {
    json!({
        "name": r.name,
        "lhs": exact(&r.lhs),
        "rhs": exact(&r.rhs),
        "margin": exact(&r.margin),
        "verdict": r.verdict.as_str(),
        "note": r.note,
    })
}

fn report_line(r: &InequalityReport) -> String {
    let note = r.note.map(|n| format!(" ({n})")).unwrap_or_default();
    format!(
        "{}: lhs = {}, rhs = {}, margin = {} -> {}{}",
        r.name,
        human(&r.lhs),
        human(&r.rhs),
        human(&r.margin),
        r.verdict,
        note
    )
}

fn comparison_text(o: Ordering) -> &'static str {
    match o {
        Ordering::Greater => "Bochner bound sharper",
        Ordering::Equal => "bounds coincide",
        Ordering::Less => "trivial bound sharper",
    }
}

fn sign_int(x: &Rational) -> i32 {
    match x.cmp(&Rational::zero()) {
        Ordering::Greater => 1,
        Ordering::Equal => 0,
        Ordering::Less => -1,
    }
}

/// Everything the inequality suite says about one class.
struct ClassReport {
    reports: Vec<InequalityReport>,
    trivial: Rational,
    bochner: Rational,
    comparison: Ordering,
    scalar: Rational,
    scalar_is_csck: bool,
    bound_difference: Rational,
}

fn class_report(d: &KahlerClassData, scalar: Option<&Rational>, yau: Option<YauMode>) -> ClassReport {
    let mut reports = vec![csck_obstruction_check(d)];
    reports.push(match scalar {
        Some(s) => tian_check_with_scalar(d, s),
        None => tian_check_csck(d),
    });
    if let Some(mode) = yau {
        reports.push(yau_check(d, mode));
    }
    ClassReport {
        reports,
        trivial: calabi_trivial_bound(d),
        bochner: bochner_bound(d),
        comparison: compare_lower_bounds(d),
        scalar: scalar.cloned().unwrap_or_else(|| d.csck_scalar()),
        scalar_is_csck: scalar.is_none(),
        bound_difference: bound_difference(d),
    }
}

impl ClassReport {
    fn json(&self) -> Value {
        json!({
            "inequalities": self.reports.iter().map(report_json).collect::<Vec<_>>(),
            "calabi_trivial_bound": exact(&self.trivial),
            "bochner_bound": exact(&self.bochner),
            "compare_lower_bounds": sign_ord(self.comparison),
            "scalar_curvature": exact(&self.scalar),
            "scalar_source": if self.scalar_is_csck { "cscK" } else { "flag" },
            "bound_difference": exact(&self.bound_difference),
        })
    }

    fn write_human(&self, out: &mut dyn Write, indent: &str) -> std::io::Result<()> {
        for r in &self.reports {
            writeln!(out, "{indent}{}", report_line(r))?;
        }
        writeln!(
            out,
            "{indent}Calabi lower bounds: trivial = {}, Bochner = {}; {}",
            human(&self.trivial),
            human(&self.bochner),
            comparison_text(self.comparison)
        )?;
        let source = if self.scalar_is_csck { "cscK value" } else { "from --scalar" };
        writeln!(out, "{indent}scalar curvature s = {} ({source})", human(&self.scalar))?;
        writeln!(out, "{indent}bound difference (rewritten obstruction - Tian) = {}", human(&self.bound_difference))
    }
}

fn sign_ord(o: Ordering) -> i32 {
    o as i32
}

fn cmd_batyrev(n: i64, alpha: &str, beta: &str, as_json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let alpha = flag_rational("--alpha", alpha)?;
    let beta = flag_rational("--beta", beta)?;
    let n = dimension("--n", n)?;
    positive("--alpha", &alpha)?;
    positive("--beta", &beta)?;
    let pre = |e: crate::closed_forms::DomainError| CliError::Precondition(e.to_string());
    let inv = invariants_closed_form(n, &alpha, &beta).map_err(pre)?;
    let f = f_definition(&inv);
    let expanded = f_expanded(n, &alpha, &beta).map_err(pre)?;
    let normalized = f_normalized(n, &alpha, &beta).map_err(pre)?;
    let factor = normalization_factor(n, &alpha, &beta).map_err(pre)?;
    let k = i64::from(n);
    let forms_agree = f == int(k) / int((k - 1) * (k - 1)) * &expanded && f == &normalized * &factor;
    let d = KahlerClassData::from(&inv);
    let report = class_report(&d, None, None);

    if as_json {
        let v = json!({
            "n": n,
            "alpha": exact(&alpha),
            "beta": exact(&beta),
            "t": exact(&inv.t),
            "vol": exact(&inv.vol),
            "c1_w_nm1": exact(&inv.deg1),
            "c1sq_w_nm2": exact(&inv.chern11),
            "c2_w_nm2": exact(&inv.chern2),
            "f": exact(&f),
            "f_expanded": exact(&expanded),
            "f_normalized": exact(&normalized),
            "normalization_factor": exact(&factor),
            "forms_agree": forms_agree,
            "checks": report.json(),
        });
        return emit_json(out, &v);
    }
    let w = |out: &mut dyn Write| -> std::io::Result<()> {
        writeln!(out, "class αL + βH with n = {n}, α = {}, β = {}", human(&alpha), human(&beta))?;
        writeln!(out, "t = (n-1)α + β = {}", human(&inv.t))?;
        writeln!(out, "[ω]^n          = {}", human(&inv.vol))?;
        writeln!(out, "c1·[ω]^{{n-1}}   = {}", human(&inv.deg1))?;
        writeln!(out, "c1^2·[ω]^{{n-2}} = {}", human(&inv.chern11))?;
        writeln!(out, "c2·[ω]^{{n-2}}   = {}", human(&inv.chern2))?;
        writeln!(out, "f                    = {}", human(&f))?;
        writeln!(out, "f expanded ((n-1)^2/n·f) = {}", human(&expanded))?;
        writeln!(out, "f normalized         = {}", human(&normalized))?;
        writeln!(out, "normalization factor = {}", human(&factor))?;
        writeln!(out, "three forms agree: {}", if forms_agree { "yes" } else { "NO" })?;
        writeln!(out, "inequalities:")?;
        report.write_human(out, "  ")
    };
    w(out).map_err(io_err)
}

fn cmd_scan(
    alpha: &str,
    beta: &str,
    n_max: i64,
    csv_path: Option<&Path>,
    as_json: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let alpha = flag_rational("--alpha", alpha)?;
    let beta = flag_rational("--beta", beta)?;
    let n_max = dimension("--n-max", n_max)?;
    positive("--alpha", &alpha)?;
    positive("--beta", &beta)?;
    let scan = scan_min_n(&alpha, &beta, n_max).map_err(|e| CliError::Precondition(e.to_string()))?;

    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let csv_err = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
        w.write_record(["n", "t", "f_num", "f_den", "sign"]).map_err(csv_err)?;
        for row in &scan.rows {
            w.write_record([
                row.n.to_string(),
                format_rational(&row.t),
                row.f.numer().to_string(),
                row.f.denom().to_string(),
                sign_int(&row.f).to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }

    if as_json {
        let rows: Vec<Value> = scan
            .rows
            .iter()
            .map(|r| json!({"n": r.n, "t": exact(&r.t), "f": exact(&r.f), "sign": sign_int(&r.f)}))
            .collect();
        let v = json!({
            "alpha": exact(&alpha),
            "beta": exact(&beta),
            "n_max": n_max,
            "first_positive": scan.first_positive,
            "reversals": scan.reversals,
            "summary": scan.summary(),
            "rows": rows,
        });
        return emit_json(out, &v);
    }
    let w = |out: &mut dyn Write| -> std::io::Result<()> {
        writeln!(out, "scan of f(n, α, β) with α = {}, β = {}", human(&alpha), human(&beta))?;
        writeln!(out, "{:>6}  {:>4}  f (approximate; exact values via --csv or --json)", "n", "sign")?;
        for r in &scan.rows {
            let sign = match sign_int(&r.f) {
                1 => "+",
                0 => "0",
                _ => "-",
            };
            writeln!(out, "{:>6}  {:>4}  ≈ {}", r.n, sign, approx_decimal(&r.f, 6))?;
        }
        writeln!(out, "{}", scan.summary())
    };
    w(out).map_err(io_err)
}

struct CheckRecord {
    line: usize,
    data: KahlerClassData,
    yau: Option<YauMode>,
}

const RECORD_FIELDS: [&str; 6] = ["n", "vol", "c1_w_nm1", "c1sq_w_nm2", "c2_w_nm2", "yau"];

fn field_rational(obj: &Map<String, Value>, line: usize, field: &str) -> Result<Rational, CliError> {
    let bad = |msg: String| CliError::Parse(format!("line {line}, field `{field}`: {msg}"));
    match obj.get(field) {
        None => Err(bad("missing".into())),
        Some(Value::String(s)) => parse_rational(s).map_err(|e| bad(e.to_string())),
        Some(Value::Number(x)) => x
            .as_i64()
            .map(int)
            .ok_or_else(|| bad(format!("expected an integer or a \"p/q\" string, got {x}"))),
        Some(other) => Err(bad(format!("expected a \"p/q\" string, got {other}"))),
    }
}

/// One JSON object per non-blank line.
fn parse_records(text: &str) -> Result<Vec<CheckRecord>, CliError> {
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let value: Value =
            serde_json::from_str(raw).map_err(|e| CliError::Parse(format!("line {line}: invalid JSON: {e}")))?;
        let Value::Object(obj) = value else {
            return Err(CliError::Parse(format!("line {line}: expected a JSON object")));
        };
        if let Some(unknown) = obj.keys().find(|k| !RECORD_FIELDS.contains(&k.as_str())) {
            return Err(CliError::Parse(format!("line {line}: unknown field `{unknown}`")));
        }
        let n = match obj.get("n") {
            None => return Err(CliError::Parse(format!("line {line}, field `n`: missing"))),
            Some(v) => v
                .as_i64()
                .ok_or_else(|| CliError::Parse(format!("line {line}, field `n`: expected an integer, got {v}")))?,
        };
        let vol = field_rational(&obj, line, "vol")?;
        let deg1 = field_rational(&obj, line, "c1_w_nm1")?;
        let chern11 = field_rational(&obj, line, "c1sq_w_nm2")?;
        let chern2 = field_rational(&obj, line, "c2_w_nm2")?;
        let yau = match obj.get("yau") {
            None => None,
            Some(Value::String(s)) if s == "c1_negative" => Some(YauMode::C1Negative),
            Some(Value::String(s)) if s == "c1_zero" => Some(YauMode::C1Zero),
            Some(v) => {
                return Err(CliError::Parse(format!(
                    "line {line}, field `yau`: expected \"c1_negative\" or \"c1_zero\", got {v}"
                )))
            }
        };
        let n = u32::try_from(n).unwrap_or(0);
        let data = KahlerClassData::new(n, vol, deg1, chern11, chern2)
            .map_err(|e| CliError::Precondition(format!("line {line}: {e}")))?;
        records.push(CheckRecord { line, data, yau });
    }
    Ok(records)
}

fn cmd_check(
    input: &Path,
    as_json: bool,
    csv_target: Option<&Path>,
    scalar: Option<&str>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let scalar = scalar.map(|s| flag_rational("--scalar", s)).transpose()?;
    let text = std::fs::read_to_string(input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
    let records = parse_records(&text)?;
    let reports: Vec<ClassReport> = records.iter().map(|r| class_report(&r.data, scalar.as_ref(), r.yau)).collect();

    if as_json {
        let items: Vec<Value> = records
            .iter()
            .zip(&reports)
            .enumerate()
            .map(|(i, (rec, rep))| {
                let mut v = rep.json();
                let obj = v.as_object_mut().expect("object");
                obj.insert("record".into(), json!(i + 1));
                obj.insert("line".into(), json!(rec.line));
                obj.insert("n".into(), json!(rec.data.n()));
                v
            })
            .collect();
        return emit_json(out, &json!({ "records": items }));
    }

    if let Some(target) = csv_target {
        let mut buf = csv::Writer::from_writer(Vec::new());
        let mut rows = vec![vec![
            "record".to_string(),
            "line".into(),
            "n".into(),
            "check".into(),
            "lhs".into(),
            "rhs".into(),
            "margin".into(),
            "verdict".into(),
        ]];
        for (i, (rec, rep)) in records.iter().zip(&reports).enumerate() {
            let head = [(i + 1).to_string(), rec.line.to_string(), rec.data.n().to_string()];
            for r in &rep.reports {
                let mut row = head.to_vec();
                row.extend([
                    r.name.to_string(),
                    format_rational(&r.lhs),
                    format_rational(&r.rhs),
                    format_rational(&r.margin),
                    r.verdict.as_str().to_string(),
                ]);
                rows.push(row);
            }
            let mut row = head.to_vec();
            row.extend([
                "Bochner - trivial bound".to_string(),
                format_rational(&rep.bochner),
                format_rational(&rep.trivial),
                format_rational(&(&rep.bochner - &rep.trivial)),
                String::new(),
            ]);
            rows.push(row);
            let mut row = head.to_vec();
            row.extend([
                "bound difference".to_string(),
                String::new(),
                String::new(),
                format_rational(&rep.bound_difference),
                String::new(),
            ]);
            rows.push(row);
        }
        for row in rows {
            buf.write_record(&row).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = buf.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        return if target == Path::new("-") {
            out.write_all(&bytes).map_err(io_err)
        } else {
            std::fs::write(target, bytes).map_err(|e| CliError::Io(format!("{}: {e}", target.display())))
        };
    }

    let w = |out: &mut dyn Write| -> std::io::Result<()> {
        if records.is_empty() {
            return writeln!(out, "no records");
        }
        for (i, (rec, rep)) in records.iter().zip(&reports).enumerate() {
            writeln!(out, "record {} (line {}): n = {}", i + 1, rec.line, rec.data.n())?;
            rep.write_human(out, "  ")?;
        }
        Ok(())
    };
    w(out).map_err(io_err)
}

fn dsl_error(e: DslError) -> CliError {
    match e {
        DslError::Syntax { .. } | DslError::UnknownSymbol { .. } | DslError::BadExponent { .. } => {
            CliError::Parse(format!("--expr: {e}"))
        }
        _ => CliError::Precondition(format!("--expr: {e}")),
    }
}

fn cmd_ring(n: i64, alpha: &str, beta: &str, expr: &str, as_json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let alpha = flag_rational("--alpha", alpha)?;
    let beta = flag_rational("--beta", beta)?;
    let parsed = parse_class_expr(expr).map_err(dsl_error)?;
    let n = dimension("--n", n)?;
    let class = eval_class_expr(&parsed, n, &alpha, &beta).map_err(dsl_error)?;
    let top = (class.degree() == n).then(|| top_evaluate(&class).expect("top degree"));

    if as_json {
        let v = json!({
            "expr": parsed.to_string(),
            "n": n,
            "alpha": exact(&alpha),
            "beta": exact(&beta),
            "degree": class.degree(),
            "normal_form": class.to_string(),
            "scalar": exact(class.scalar_part()),
            "lh": exact(class.coeff_lh()),
            "h": exact(class.coeff_h()),
            "top": top.as_ref().map(exact),
        });
        return emit_json(out, &v);
    }
    let w = |out: &mut dyn Write| -> std::io::Result<()> {
        writeln!(out, "expression: {parsed}")?;
        writeln!(out, "degree {} in dimension {n}", class.degree())?;
        writeln!(out, "normal form: {class}")?;
        if let Some(top) = &top {
            writeln!(out, "top intersection number: {}", human(top))?;
        }
        Ok(())
    };
    w(out).map_err(io_err)
}

fn check_json(c: &IdentityCheck) -> Value {
    json!({
        "name": c.name,
        "reduced": c.reduced.to_string(),
        "expected": c.expected.to_string(),
        "residual": c.residual.to_string(),
        "passed": c.passed(),
    })
}

fn identity_json(id: &PointwiseIdentity) -> Value {
    let coeffs: Map<String, Value> =
        id.combo.iter().map(|(s, c)| (s.key().to_string(), Value::String(c.to_string()))).collect();
    json!({ "name": id.name, "lhs": id.lhs_label, "density": id.combo.to_string(), "coefficients": coeffs })
}

fn identities_json(r: &IdentityReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "identity": c.identity,
                "symbol": c.symbol.key(),
                "derived": c.derived.to_string(),
                "expected": c.expected.to_string(),
                "symbolic": c.symbolic,
                "numeric": c.numeric,
                "passed": c.passed(),
            })
        })
        .collect();
    let facts: Vec<Value> = r.facts.iter().map(|(label, ok)| json!({"fact": label, "passed": ok})).collect();
    let b = &r.besse;
    let li = &r.li;
    json!({
        "axioms": APTE_PROVENANCE,
        "identities": r.identities.iter().map(identity_json).collect::<Vec<_>>(),
        "checks": checks,
        "facts": facts,
        "besse": {
            "c1_display": b.c1_display.to_string(),
            "c2_display_half": b.c2_display.to_string(),
            "corrected": b.corrected.to_string(),
            "erroneous": b.erroneous.to_string(),
            "difference": b.difference.to_string(),
            "vanishing_at": b.vanishing_at,
            "erroneous_combination_rtilde": b.erroneous_combination_rtilde.to_string(),
            "conventions": b.convention_note,
        },
        "li": {
            "obstruction": [format_form(&li.obstruction.0), format_form(&li.obstruction.1)],
            "rearranged": [format_form(&li.rearranged.0), format_form(&li.rearranged.1)],
            "csck": [format_form(&li.csck.0), format_form(&li.csck.1)],
            "tian_rhs": format_form(&li.tian_rhs),
            "difference": format_form(&li.difference),
        },
        "passed": r.passed(),
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn write_identities(out: &mut dyn Write, r: &IdentityReport) -> std::io::Result<()> {
    writeln!(out, "note: {APTE_PROVENANCE}")?;
    for id in &r.identities {
        writeln!(out, "{id}")?;
    }
    for c in &r.checks {
        writeln!(
            out,
            "{}  {} {}: {} (expected {}; symbolic {}, numeric n = 2..40 {})",
            pass(c.passed()),
            c.identity,
            c.symbol,
            c.derived,
            c.expected,
            pass(c.symbolic),
            pass(c.numeric)
        )?;
    }
    for (label, ok) in &r.facts {
        writeln!(out, "{}  {label}", pass(*ok))?;
    }
    let b = &r.besse;
    writeln!(out, "Besse audit:")?;
    writeln!(out, "  c1^2[ω]^{{n-2}}/(n-2)! = ∫[{}]·ω^n/n!", b.c1_display)?;
    writeln!(out, "  c2[ω]^{{n-2}}/(n-2)! = (1/2)∫[{}]·ω^n/n!", b.c2_display)?;
    writeln!(out, "  corrected |r̃|^2 coefficient: {}", b.corrected)?;
    writeln!(out, "  erroneous |r̃|^2 coefficient: {}", b.erroneous)?;
    let roots: Vec<String> = b.vanishing_at.iter().map(u32::to_string).collect();
    writeln!(out, "  difference: {} (zero for n >= 2 only at n = {})", b.difference, roots.join(", "))?;
    writeln!(
        out,
        "  with the erroneous value the |r̃|^2 term of n·c1^2 - (n+2)·c2 would be {}",
        b.erroneous_combination_rtilde
    )?;
    writeln!(out, "  conventions: {}", b.convention_note)?;
    let li = &r.li;
    writeln!(out, "Li rewrite of the obstruction inequality:")?;
    writeln!(out, "  {} <= {}", format_form(&li.obstruction.0), format_form(&li.obstruction.1))?;
    writeln!(out, "  {} <= {}", format_form(&li.rearranged.0), format_form(&li.rearranged.1))?;
    writeln!(out, "  {} <= {}  (cscK)", format_form(&li.csck.0), format_form(&li.csck.1))?;
    writeln!(out, "  Tian bound: {}", format_form(&li.tian_rhs))?;
    writeln!(out, "  difference of upper bounds: {}", format_form(&li.difference))?;
    let failed = r.checks.iter().filter(|c| !c.passed()).count() + r.facts.iter().filter(|(_, ok)| !ok).count();
    writeln!(out, "identities: {} checks, {} failed", r.checks.len() + r.facts.len(), failed)
}

/// `verify` with an explicit tensor model; a perturbed model is the negative control.
pub fn cmd_verify(which: Which, model: &TensorModel, as_json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let mut tensor_checks = verify_norm_identities_with(model);
    tensor_checks.push(verify_key_subcontraction());
    tensor_checks.extend(verify_cross_terms_with(model));
    let tensor_ok = tensor_checks.iter().all(IdentityCheck::passed);
    let show_tensor = which != Which::Identities || !tensor_ok;

    // the prover only accepts certified norms
    let identities = match certify_with(model) {
        Ok(cert) if which != Which::Tensor => {
            let prover = Prover::from_certificate(&cert).map_err(|e| CliError::VerificationFailed(e.to_string()))?;
            Some(verify_identities(&prover))
        }
        _ => None,
    };
    let identities_ok = identities.as_ref().is_none_or(IdentityReport::passed);

    if as_json {
        let mut v = Map::new();
        v.insert("tensor".into(), json!({
            "checks": tensor_checks.iter().map(check_json).collect::<Vec<_>>(),
            "passed": tensor_ok,
        }));
        if which != Which::Tensor {
            v.insert("identities".into(), identities.as_ref().map(identities_json).unwrap_or(Value::Null));
        }
        v.insert("passed".into(), json!(tensor_ok && identities_ok));
        emit_json(out, &Value::Object(v))?;
    } else {
        let w = |out: &mut dyn Write| -> std::io::Result<()> {
            if show_tensor {
                writeln!(out, "tensor identities:")?;
                for c in &tensor_checks {
                    writeln!(out, "{c}")?;
                }
            } else {
                writeln!(out, "tensor identities: {} checks passed", tensor_checks.len())?;
            }
            if which != Which::Tensor {
                match &identities {
                    Some(r) => write_identities(out, r)?,
                    None => writeln!(out, "identities: not run, tensor verification failed")?,
                }
            }
            writeln!(out, "overall: {}", pass(tensor_ok && identities_ok))
        };
        w(out).map_err(io_err)?;
    }

    if !tensor_ok {
        let names: Vec<&str> = tensor_checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
        return Err(CliError::VerificationFailed(names.join(", ")));
    }
    if which != Which::Tensor && !identities_ok {
        return Err(CliError::VerificationFailed("identity coefficients".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, RationalFunctionN};

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("kahlerq").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn human_formatting() {
        assert_eq!(human(&int(-100)), "-100");
        assert_eq!(human(&frac(400, 3)), "400/3 (≈ 133.333)");
    }

    #[test]
    fn batyrev_reports() {
        let (code, out, _) = run_str(&["batyrev", "--n", "4", "--alpha", "1", "--beta", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("f                    = 32384"));
        assert!(out.contains("violated (no cscK metric in this class)"));
        let (code, out, _) = run_str(&["batyrev", "--n", "2", "--alpha", "1", "--beta", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("= -100"));
        assert!(out.contains("cscK obstruction: lhs = 100, rhs = 0, margin = 100 -> strict"));
        assert_eq!(run_str(&["batyrev", "--n", "1", "--alpha", "1", "--beta", "1"]).0, 3);
        assert_eq!(run_str(&["batyrev", "--n", "3", "--alpha", "0", "--beta", "1"]).0, 3);
        assert_eq!(run_str(&["batyrev", "--n", "3", "--alpha", "3/", "--beta", "1"]).0, 2);
    }

    #[test]
    fn ring_command() {
        let (code, out, _) = run_str(&["ring", "--n", "2", "--expr", "c1^2"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("top intersection number: 8"));
        let (code, _, err) = run_str(&["ring", "--n", "2", "--expr", "c1 ** 2"]);
        assert_eq!(code, 2);
        assert!(err.contains("offset 4"), "{err}");
        assert_eq!(run_str(&["ring", "--n", "2", "--expr", "c1^3"]).0, 3);
    }

    #[test]
    fn verify_negative_control() {
        let model = TensorModel {
            p_coefficient: RationalFunctionN::one() / (RationalFunctionN::n() + 3),
            ..TensorModel::default()
        };
        let mut out = Vec::new();
        let e = cmd_verify(Which::All, &model, false, &mut out).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("FAIL  |P|^2"));
        assert!(text.contains("residual"));
        assert!(text.contains("overall: FAIL"));
    }

    #[test]
    fn clap_errors_exit_two() {
        assert_eq!(run_str(&["verify", "nothing"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }
}
