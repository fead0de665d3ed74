//! Command-line interface.
//!
//! Each subcommand produces a JSON result and, where one makes sense, a
//! table. The main artifact goes to `--output` in the chosen `--format`;
//! `--csv PATH` additionally writes the table. JSON artifacts are wrapped as
//! `{"blockspec_version", "command", "config", "result"}` and CSV artifacts
//! carry the same provenance in leading comment lines. Output paths and the
//! thread count are not part of the config, so artifacts depend only on the
//! numerical settings.

use std::collections::BTreeMap;
use std::io::Write;

use blockspec_core::dixmier::{
    dixmier_estimate, geometric_grid, hypothesis_check, Multiplier, SeparableSymbol,
};
use blockspec_core::generators::{
    anharmonic_decay_check, anharmonic_galerkin_spectrum, so3_schrodinger_symbol,
    su2_laplacian_power_symbol, su2_tensor_norm, su2_weight_label, AnharmonicSpec,
};
use blockspec_core::spectral::{
    decay_exponent_fit, operator_norm, schatten_norm, schatten_series, PowerSeries,
};
use blockspec_core::tensor::{
    tensor_factor_norms, tensor_operator_norm, tensor_schatten_norm, tensor_symbols,
};
use blockspec_core::{SchattenEstimate, TruncationPolicy, C64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::format::{parse_document, Document, ExplicitSymbol};
use crate::selfcheck::{tensor_check, SelfCheckConfig};
use crate::table::{fmt_float, read_column, Table};
use crate::VERSION;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "BLOCKSPEC_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "blockspec",
    version,
    about = "Schatten norms, traces and spectra of block-diagonal symbols"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Where to write the main artifact; `-` is standard output.
    #[arg(long, global = true, default_value = "-")]
    pub output: String,
    /// Format of the main artifact. Defaults to csv for su2-table and json
    /// otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Also write the command's table as CSV to this path.
    #[arg(long, global = true)]
    pub csv: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schatten p-norm of a symbol or tensor product read from JSON.
    Norm(NormArgs),
    /// Check the tensor identities on seeded random symbols.
    TensorCheck(TensorCheckArgs),
    /// Partial sums of the SU(2) × SU(2) Bessel-potential norm.
    Su2Table(Su2TableArgs),
    /// Blocks of the SO(3) Schrödinger symbol.
    So3Symbol(So3Args),
    /// Low-lying spectrum of an anharmonic oscillator.
    Anharmonic(AnharmonicArgs),
    /// Power-law decay exponent of a positive sequence.
    DecayFit(DecayFitArgs),
    /// Dixmier trace estimate for separable torus symbols.
    Dixmier(DixmierArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Norm(_) => "norm",
            Command::TensorCheck(_) => "tensor-check",
            Command::Su2Table(_) => "su2-table",
            Command::So3Symbol(_) => "so3-symbol",
            Command::Anharmonic(_) => "anharmonic",
            Command::DecayFit(_) => "decay-fit",
            Command::Dixmier(_) => "dixmier",
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Truncation {
    /// Block budget: blocks 0..=lmax may be summed.
    #[arg(long, default_value_t = 400)]
    pub lmax: usize,
    /// Relative tolerance of the stopping rule; 0 sums the whole budget.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-8)]
    pub tail_tol: f64,
    /// Consecutive blocks that must meet the tolerance.
    #[arg(long, default_value_t = 3)]
    pub min_blocks: usize,
}

impl Truncation {
    fn policy(&self) -> Result<TruncationPolicy> {
        Ok(TruncationPolicy::new(
            self.lmax,
            self.tail_tol,
            self.min_blocks,
        )?)
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct NormArgs {
    /// Symbol document (JSON).
    #[arg(long)]
    pub symbol: String,
    /// Schatten exponent; `inf` gives the operator norm.
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    #[command(flatten)]
    pub truncation: Truncation,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct TensorCheckArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated exponents.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 3.0])]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
    #[arg(long, default_value_t = 100)]
    pub triples: usize,
    #[arg(long, default_value_t = 100)]
    pub kron_pairs: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Su2TableArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    #[command(flatten)]
    pub truncation: Truncation,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct So3Args {
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Blocks 0..=lmax are listed.
    #[arg(long, default_value_t = 50)]
    pub lmax: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct AnharmonicArgs {
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 1)]
    pub ell: u32,
    /// Negative power used by the decay check.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub mu: f64,
    /// Number of levels listed.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = 12.0)]
    pub extent: f64,
    /// Run the decay check for this Schatten exponent.
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Number of levels used by the decay check.
    #[arg(long, default_value_t = 60)]
    pub decay_count: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DecayFitArgs {
    /// JSON array of numbers, or CSV whose last (or `--column`) column holds
    /// the values.
    #[arg(long, conflicts_with = "values", required_unless_present = "values")]
    pub input: Option<String>,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<f64>,
    #[arg(long, requires = "input")]
    pub column: Option<String>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DixmierArgs {
    /// `inv-sqrt-quadratic` or `inv-power:S` for `(1 + j²)^{−S/2}`.
    #[arg(long, default_value = "inv-sqrt-quadratic", value_parser = parse_beta_name)]
    pub beta: String,
    /// Fourier coefficients of `a` as a JSON object: index → number or
    /// `[re, im]`.
    #[arg(long, default_value = r#"{"0":1}"#)]
    pub a_hat: String,
    /// Number of identical tensor factors.
    #[arg(long, default_value_t = 1)]
    pub factors: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.5)]
    pub p0: f64,
    #[arg(long, default_value_t = 7)]
    pub grid_len: usize,
    /// Frequency cutoff J.
    #[arg(long, default_value_t = 1_000_000)]
    pub cutoff: usize,
}

fn parse_beta_name(s: &str) -> std::result::Result<String, String> {
    parse_beta(s).map(|_| s.to_string())
}

/// Multiplier named by a `--beta` value.
pub fn parse_beta(s: &str) -> std::result::Result<Multiplier, String> {
    if s == "inv-sqrt-quadratic" {
        return Ok(Multiplier::inv_sqrt_quadratic());
    }
    if let Some(rest) = s.strip_prefix("inv-power:") {
        return match rest.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Multiplier::InvPower { s: v }),
            _ => Err(format!("{rest:?} is not a finite exponent")),
        };
    }
    Err(format!(
        "unknown family {s:?}; expected inv-sqrt-quadratic or inv-power:S"
    ))
}

/// Fourier coefficients from a JSON object such as `{"0":2,"1":[0.5,0.5]}`.
pub fn parse_a_hat(text: &str) -> Result<BTreeMap<i64, C64>> {
    let obj: serde_json::Map<String, Value> = serde_json::from_str(text)?;
    let mut out = BTreeMap::new();
    for (key, value) in obj {
        let j: i64 = key
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("a_hat key {key:?} is not an integer")))?;
        let z = match &value {
            Value::Number(n) => n.as_f64().map(|re| C64::new(re, 0.0)),
            Value::Array(v) if v.len() == 2 => v[0]
                .as_f64()
                .zip(v[1].as_f64())
                .map(|(re, im)| C64::new(re, im)),
            _ => None,
        }
        .ok_or_else(|| {
            Error::Format(format!(
                "a_hat[{j}] must be a number or [re, im], got {value}"
            ))
        })?;
        out.insert(j, z);
    }
    Ok(out)
}

/// JSON result plus an optional table.
pub struct Artifact {
    pub result: Value,
    pub table: Option<Table>,
    pub default_format: Format,
    /// Set when the run completed but its checks failed.
    pub failure: Option<String>,
}

impl Artifact {
    fn json(result: Value, table: Option<Table>) -> Self {
        Self {
            result,
            table,
            default_format: Format::Json,
            failure: None,
        }
    }
}

/// Parse the process arguments and run; the returned code is the exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let report = serde_json::to_string(&e.report()).unwrap_or_else(|_| e.to_string());
            eprintln!("{report}");
            e.exit_code()
        }
    }
}

/// Worker count from [`THREADS_ENV`]; `None` leaves the choice to rayon.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(_) => Err(Error::Usage(format!("{THREADS_ENV} is not valid unicode"))),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads_from_env()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker threads: {e}")))?;
    let artifact = pool.install(|| execute(&cli.command))?;
    write_outputs(cli, &artifact)?;
    match artifact.failure {
        Some(msg) => Err(Error::CheckFailed(msg)),
        None => Ok(()),
    }
}

/// Config embedded in artifacts: the subcommand's arguments.
pub fn config_of(command: &Command) -> Result<Value> {
    Ok(match command {
        Command::Norm(a) => serde_json::to_value(a)?,
        Command::TensorCheck(a) => serde_json::to_value(a)?,
        Command::Su2Table(a) => serde_json::to_value(a)?,
        Command::So3Symbol(a) => serde_json::to_value(a)?,
        Command::Anharmonic(a) => serde_json::to_value(a)?,
        Command::DecayFit(a) => serde_json::to_value(a)?,
        Command::Dixmier(a) => serde_json::to_value(a)?,
    })
}

fn write_outputs(cli: &Cli, artifact: &Artifact) -> Result<()> {
    let config = config_of(&cli.command)?;
    let format = cli.format.unwrap_or(artifact.default_format);
    let missing_table = || Error::Usage(format!("{} has no CSV form", cli.command.name()));
    let main = match format {
        Format::Json => {
            let doc = json!({
                "blockspec_version": VERSION,
                "command": cli.command.name(),
                "config": config,
                "result": artifact.result,
            });
            let mut text = serde_json::to_string_pretty(&doc)?;
            text.push('\n');
            text.into_bytes()
        }
        Format::Csv => artifact
            .table
            .as_ref()
            .ok_or_else(missing_table)?
            .to_bytes(VERSION, &config)?,
    };
    let extra = match &cli.csv {
        Some(path) => Some((
            path,
            artifact
                .table
                .as_ref()
                .ok_or_else(missing_table)?
                .to_bytes(VERSION, &config)?,
        )),
        None => None,
    };
    write_to(&cli.output, &main)?;
    if let Some((path, bytes)) = extra {
        write_to(path, &bytes)?;
    }
    Ok(())
}

fn write_to(path: &str, bytes: &[u8]) -> Result<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io("<stdout>", e))
    } else {
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Compute a subcommand's artifact without writing anything.
pub fn execute(command: &Command) -> Result<Artifact> {
    match command {
        Command::Norm(a) => norm(a),
        Command::TensorCheck(a) => tensor_check_cmd(a),
        Command::Su2Table(a) => su2_table(a),
        Command::So3Symbol(a) => so3_symbol(a),
        Command::Anharmonic(a) => anharmonic(a),
        Command::DecayFit(a) => decay_fit(a),
        Command::Dixmier(a) => dixmier(a),
    }
}

fn estimate_table(estimates: &[(&str, SchattenEstimate)]) -> Table {
    let mut t = Table::new([
        "factor",
        "value",
        "p",
        "blocks_used",
        "last_increment",
        "converged",
        "limit",
    ]);
    for (name, e) in estimates {
        t.push(vec![
            name.to_string(),
            fmt_float(e.value),
            fmt_float(e.p),
            e.blocks_used.to_string(),
            fmt_float(e.last_increment),
            e.converged.to_string(),
            e.limit.map(fmt_float).unwrap_or_default(),
        ]);
    }
    t
}

fn norm(a: &NormArgs) -> Result<Artifact> {
    let t = a.truncation.policy()?;
    let doc = parse_document(&read_file(&a.symbol)?)?;
    match doc {
        Document::Single(s) => {
            let est = if a.p == f64::INFINITY {
                operator_norm(&s, &t)?
            } else {
                schatten_norm(&s, a.p, &t)?
            };
            Ok(Artifact::json(
                serde_json::to_value(est)?,
                Some(estimate_table(&[("total", est)])),
            ))
        }
        Document::Tensor(factors) => {
            let ts = tensor_symbols(factors)?;
            let (est, per_factor) = if a.p == f64::INFINITY {
                let per = ts
                    .factors()
                    .iter()
                    .map(|f| operator_norm(f, &t))
                    .collect::<blockspec_core::Result<Vec<_>>>()?;
                (tensor_operator_norm(&ts, &t)?, per)
            } else {
                (
                    tensor_schatten_norm(&ts, a.p, &t)?,
                    tensor_factor_norms(&ts, a.p, &t)?,
                )
            };
            let names: Vec<String> = (0..per_factor.len()).map(|i| i.to_string()).collect();
            let mut rows: Vec<(&str, SchattenEstimate)> = names
                .iter()
                .map(String::as_str)
                .zip(per_factor.iter().copied())
                .collect();
            rows.push(("total", est));
            let mut result = serde_json::to_value(est)?;
            result["factors"] = serde_json::to_value(&per_factor)?;
            Ok(Artifact::json(result, Some(estimate_table(&rows))))
        }
    }
}

fn tensor_check_cmd(a: &TensorCheckArgs) -> Result<Artifact> {
    let cfg = SelfCheckConfig {
        pairs: a.pairs,
        triples: a.triples,
        kron_pairs: a.kron_pairs,
        ..SelfCheckConfig::new(a.seed, a.p.clone())
    };
    let report = tensor_check(&cfg)?;
    let mut t = Table::new(["check", "p", "cases", "max_rel_error", "tol", "pass"]);
    for c in &report.checks {
        t.push(vec![
            c.name.to_string(),
            c.p.map(fmt_float).unwrap_or_default(),
            c.cases.to_string(),
            fmt_float(c.max_rel_error),
            fmt_float(c.tol),
            c.pass.to_string(),
        ]);
    }
    let failure = (!report.pass).then(|| {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name)
            .collect();
        format!("identities violated: {}", failed.join(", "))
    });
    Ok(Artifact {
        failure,
        ..Artifact::json(serde_json::to_value(&report)?, Some(t))
    })
}

fn series_json(s: &PowerSeries) -> Value {
    json!({ "terms": s.terms, "partial_sums": s.partial_sums, "estimate": s.estimate })
}

fn su2_table(a: &Su2TableArgs) -> Result<Artifact> {
    let t = a.truncation.policy()?;
    let sa = schatten_series(&su2_laplacian_power_symbol(a.alpha)?, a.p, &t)?;
    let sb = schatten_series(&su2_laplacian_power_symbol(a.beta)?, a.p, &t)?;
    let total = su2_tensor_norm(a.alpha, a.beta, a.p, &t)?;
    let mut table = Table::new([
        "t",
        "ell",
        "alpha_term",
        "alpha_partial",
        "beta_term",
        "beta_partial",
        "product",
    ]);
    let rows = sa.terms.len().max(sb.terms.len());
    let cell = |v: &[f64], i: usize| v.get(i).copied().map(fmt_float).unwrap_or_default();
    for i in 0..rows {
        let carried = |v: &[f64]| v[i.min(v.len() - 1)].powf(1.0 / a.p);
        table.push(vec![
            i.to_string(),
            su2_weight_label(i),
            cell(&sa.terms, i),
            cell(&sa.partial_sums, i),
            cell(&sb.terms, i),
            cell(&sb.partial_sums, i),
            fmt_float(carried(&sa.partial_sums) * carried(&sb.partial_sums)),
        ]);
    }
    table
        .footer
        .push(format!("result: {}", serde_json::to_string(&total)?));
    Ok(Artifact {
        default_format: Format::Csv,
        ..Artifact::json(
            json!({ "norm": total, "alpha_series": series_json(&sa), "beta_series": series_json(&sb) }),
            Some(table),
        )
    })
}

fn so3_symbol(a: &So3Args) -> Result<Artifact> {
    let s = so3_schrodinger_symbol(a.gamma)?;
    let doc = ExplicitSymbol::from_symbol_prefix(&s, a.lmax + 1)?;
    let mut table = Table::new(["ell", "m", "re", "im"]);
    let mut diagonal = true;
    for (ell, (&d, entries)) in doc.dims.iter().zip(&doc.blocks).enumerate() {
        for r in 0..d {
            for c in 0..d {
                let [re, im] = entries[r * d + c];
                if r == c {
                    let m = r as i64 - ell as i64;
                    table.push(vec![
                        ell.to_string(),
                        m.to_string(),
                        fmt_float(re),
                        fmt_float(im),
                    ]);
                } else if re != 0.0 || im != 0.0 {
                    diagonal = false;
                }
            }
        }
    }
    Ok(Artifact::json(
        json!({ "symbol": doc, "diagonal": diagonal }),
        Some(table),
    ))
}

fn anharmonic(a: &AnharmonicArgs) -> Result<Artifact> {
    let spec = AnharmonicSpec::new(a.k, a.ell, a.mu).with_grid(a.points, a.extent);
    let spectrum = anharmonic_galerkin_spectrum(&spec, a.count)?;
    let mut table = Table::new(["m", "E_m"]);
    for (m, e) in spectrum.eigenvalues.iter().enumerate() {
        table.push(vec![m.to_string(), fmt_float(*e)]);
    }
    let decay = match a.p {
        Some(p) => Some(anharmonic_decay_check(&spec, p, a.decay_count)?),
        None => None,
    };
    Ok(Artifact::json(
        json!({ "spectrum": spectrum, "decay": decay }),
        Some(table),
    ))
}

fn decay_fit(a: &DecayFitArgs) -> Result<Artifact> {
    let values = match &a.input {
        Some(path) => {
            let text = read_file(path)?;
            if text.trim_start().starts_with('[') {
                serde_json::from_str::<Vec<f64>>(&text)?
            } else {
                read_column(&text, a.column.as_deref())?
            }
        }
        None => a.values.clone(),
    };
    let fit = decay_exponent_fit(&values)?;
    let mut table = Table::new(["slope", "half_width", "intercept", "points_used"]);
    table.push(vec![
        fmt_float(fit.slope),
        fmt_float(fit.half_width),
        fmt_float(fit.intercept),
        fit.points_used.to_string(),
    ]);
    Ok(Artifact::json(serde_json::to_value(fit)?, Some(table)))
}

fn dixmier(a: &DixmierArgs) -> Result<Artifact> {
    let beta = parse_beta(&a.beta).map_err(Error::Usage)?;
    let symbol = SeparableSymbol::new(parse_a_hat(&a.a_hat)?, beta)?;
    let symbols = vec![symbol; a.factors];
    let grid = geometric_grid(a.p0, a.grid_len)?;
    let estimate = dixmier_estimate(&symbols, &grid, a.cutoff)?;
    let hypothesis = hypothesis_check(&symbols, &grid, a.cutoff)?;
    let mut table = Table::new(["p", "g", "h"]);
    for ((p, g), h) in estimate
        .p_grid
        .iter()
        .zip(&estimate.g_values)
        .zip(&estimate.h_values)
    {
        table.push(vec![fmt_float(*p), fmt_float(*g), fmt_float(*h)]);
    }
    Ok(Artifact::json(
        json!({ "estimate": estimate, "hypothesis": hypothesis }),
        Some(table),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_families() {
        assert!(
            matches!(parse_beta("inv-sqrt-quadratic"), Ok(Multiplier::InvPower { s }) if s == 1.0)
        );
        assert!(matches!(parse_beta("inv-power:2.5"), Ok(Multiplier::InvPower { s }) if s == 2.5));
        assert!(parse_beta("inv-power:x").is_err());
        assert!(parse_beta("gaussian").is_err());
    }

    #[test]
    fn a_hat_forms() {
        let a = parse_a_hat(r#"{"0":2,"1":[0.5,0.5],"-1":[0.5,-0.5]}"#).unwrap();
        assert_eq!(a[&0], C64::new(2.0, 0.0));
        assert_eq!(a[&-1], C64::new(0.5, -0.5));
        assert!(parse_a_hat(r#"{"x":1}"#).is_err());
        assert!(parse_a_hat(r#"{"0":"1"}"#).is_err());
        assert!(parse_a_hat("[1]").is_err());
    }

    #[test]
    fn subcommand_names_match_clap() {
        use clap::CommandFactory;
        let names: Vec<String> = Cli::command()
            .get_subcommands()
            .map(|c| c.get_name().to_string())
            .collect();
        assert_eq!(
            names,
            [
                "norm",
                "tensor-check",
                "su2-table",
                "so3-symbol",
                "anharmonic",
                "decay-fit",
                "dixmier"
            ]
        );
        Cli::command().debug_assert();
    }

    #[test]
    fn su2_rows_carry_the_shorter_series() {
        let cli = Cli::try_parse_from([
            "blockspec",
            "su2-table",
            "--alpha",
            "4",
            "--beta",
            "6",
            "--p",
            "1",
        ])
        .unwrap();
        let art = execute(&cli.command).unwrap();
        let table = art.table.unwrap();
        assert_eq!(art.default_format, Format::Csv);
        let last = table.rows.last().unwrap();
        let product: f64 = last[6].parse().unwrap();
        let norm = art.result["norm"]["estimate"]["value"].as_f64().unwrap();
        assert!(((product - norm) / norm).abs() < 1e-15);
        assert_eq!(table.footer.len(), 1);
    }

    #[test]
    fn so3_table_lists_diagonals() {
        let cli = Cli::try_parse_from(["blockspec", "so3-symbol", "--gamma", "1", "--lmax", "2"])
            .unwrap();
        let art = execute(&cli.command).unwrap();
        assert_eq!(art.result["diagonal"], Value::Bool(true));
        let t = art.table.unwrap();
        assert_eq!(t.rows.len(), 1 + 3 + 5);
        let ell1: Vec<f64> = t.rows[1..4].iter().map(|r| r[2].parse().unwrap()).collect();
        assert_eq!(ell1, vec![1.0, 3.0, 3.0]);
    }
}
