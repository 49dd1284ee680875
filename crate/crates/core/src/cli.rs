//! The `ghost` command line: model ingestion, subcommands and output formatting.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{
    ap_parameters, ap_verify, compare_slopes, distribution_reports, gouvea_check, semistable_check,
};
use crate::dimension_models::{
    build_gamma0_model, build_quasilinear_model, build_rhobar_model, verify_axioms, DimensionModel,
    QuasiLinearSpec, RhobarSpec,
};
use crate::error::GhostError;
use crate::ghost_core::coefficient;
use crate::newton::{ghost_slopes, wadic_slopes, NewtonPolygon, SlopeSequence};
use crate::rational::{format_rational, int, Rational};
use crate::weightspace::{GhostParams, WeightPoint};

#[derive(Debug, Parser)]
#[command(name = "ghost", version, about = "Ghost series slopes from dimension data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "GHOST_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct ModelArg {
    /// `gamma0:P,N,K0`, `rhobar:P,KR,split|nonsplit,M1,M2,M3,T`, or a JSON file.
    #[arg(long)]
    pub model: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension table `(n, k_n, d, d^new, d_p)`.
    Dims {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value = "0..10")]
        range: String,
    },
    /// Zeros and degrees of `g_0, …, g_up_to`.
    Coeffs {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, visible_alias = "count", default_value_t = 10)]
        up_to: i64,
    },
    /// Certified slopes at a weight, or of the w-adic polygon when no weight is given.
    Slopes {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        weight: Option<String>,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Newton polygon vertices covering the first `count` slopes.
    Np {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        weight: Option<String>,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Slope distribution at `k_n` against its limit.
    Dist {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<i64>,
    },
    /// Highest old and classical slopes at `k_n`.
    Gouvea {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, value_delimiter = ',')]
        n: Vec<i64>,
        #[arg(long)]
        range: Option<String>,
    },
    /// Breakpoints at `d(n)` and `d(n) + d^new(n)`.
    Ss {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, value_delimiter = ',')]
        n: Vec<i64>,
        #[arg(long)]
        range: Option<String>,
    },
    /// Progression parameters and the shift check on certified slopes.
    Ap {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Monotonicity and quasi-linearity checks on a window.
    Axioms {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value = "-50..200")]
        range: String,
    },
    /// Compare computed slopes with a slope file.
    Compare {
        /// Defaults to the model named in the file.
        #[arg(long)]
        model: Option<String>,
        /// Defaults to the weight named in the file.
        #[arg(long)]
        weight: Option<String>,
        #[arg(long)]
        file: PathBuf,
    },
}

/// Model files, tagged by `"type"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelConfig {
    Gamma0 {
        p: i64,
        #[serde(rename = "N")]
        level: i64,
        k0: i64,
    },
    Quasilinear {
        p: i64,
        k_base: i64,
        d: QuasiLinearSpec,
        dnew: QuasiLinearSpec,
    },
    Rhobar(RhobarSpec),
}

impl ModelConfig {
    pub fn build(self) -> crate::error::Result<DimensionModel> {
        match self {
            ModelConfig::Gamma0 { p, level, k0 } => build_gamma0_model(p, level, k0),
            ModelConfig::Quasilinear { p, k_base, d, dnew } => {
                build_quasilinear_model(d, dnew, GhostParams::new(p, k_base)?)
            }
            ModelConfig::Rhobar(spec) => build_rhobar_model(&spec),
        }
    }
}

/// Slope files: a header plus exact slopes as strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeFile {
    pub p: i64,
    pub model: String,
    /// `None` for w-adic slopes.
    pub weight: Option<WeightPoint>,
    pub count: usize,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub slopes: Vec<Rational>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, files or model data: exit 2.
    Input(String),
    /// A check ran and failed: exit 1.
    Failed(String),
}

impl From<GhostError> for CliError {
    fn from(e: GhostError) -> Self {
        match e {
            GhostError::Uncertified | GhostError::GrowthViolated(_) => CliError::Failed(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Rendered result plus whether the command's check passed.
pub struct Output {
    pub json: Value,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Extra lines printed before a table.
    pub preamble: Vec<String>,
    pub ok: bool,
}

impl Output {
    fn new(json: Value, headers: &[&str], rows: Vec<Vec<String>>) -> Self {
        Output {
            json,
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows,
            preamble: Vec::new(),
            ok: true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values always serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
                for row in std::iter::once(&self.headers).chain(&self.rows) {
                    w.write_record(row).expect("writing to memory");
                }
                String::from_utf8(w.into_inner().expect("writing to memory")).expect("cells are UTF-8")
            }
            Format::Table => {
                let mut s = String::new();
                for line in &self.preamble {
                    let _ = writeln!(s, "{line}");
                }
                let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
                for row in &self.rows {
                    for (w, c) in widths.iter_mut().zip(row) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                for row in std::iter::once(&self.headers).chain(&self.rows) {
                    let cells: Vec<String> =
                        row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}", w = *w)).collect();
                    let _ = writeln!(s, "{}", cells.join("  ").trim_end());
                }
                s
            }
        }
    }
}

fn r(x: &Rational) -> String {
    format_rational(x)
}

fn opt(x: Option<i64>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

/// Inclusive `a..b`.
pub fn parse_range(s: &str) -> CliResult<(i64, i64)> {
    let bad = || CliError::Input(format!("invalid range {s:?}; expected a..b with a <= b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn ints(s: &str, expect: usize, what: &str) -> CliResult<Vec<i64>> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Input(format!("{what}: expected {expect} integers, got {s:?}")))?;
    if v.len() != expect {
        return Err(CliError::Input(format!("{what}: expected {expect} integers, got {s:?}")));
    }
    Ok(v)
}

/// Parses an inline model description or reads a model file, then checks the axioms.
pub fn parse_model(s: &str) -> CliResult<DimensionModel> {
    let model = build_model(s)?;
    check_axioms(&model)?;
    Ok(model)
}

fn build_model(s: &str) -> CliResult<DimensionModel> {
    let config = if let Some(rest) = s.strip_prefix("gamma0:") {
        let v = ints(rest, 3, "gamma0:P,N,K0")?;
        ModelConfig::Gamma0 { p: v[0], level: v[1], k0: v[2] }
    } else if let Some(rest) = s.strip_prefix("rhobar:") {
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        let usage = "rhobar:P,KR,split|nonsplit,M1,M2,M3,T";
        if parts.len() != 7 {
            return Err(CliError::Input(format!("{usage}: expected 7 fields, got {rest:?}")));
        }
        let split = match parts[2] {
            "split" => true,
            "nonsplit" => false,
            other => {
                return Err(CliError::Input(format!(
                    "{usage}: third field must be split or nonsplit, got {other:?}"
                )))
            }
        };
        let a = ints(&parts[..2].join(","), 2, usage)?;
        let b = ints(&parts[3..].join(","), 4, usage)?;
        ModelConfig::Rhobar(RhobarSpec::new(a[0], a[1], split, b[0], b[1], b[2], b[3]))
    } else {
        read_model_file(Path::new(s))?
    };
    Ok(config.build()?)
}

fn read_model_file(path: &Path) -> CliResult<ModelConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read model {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("model file {}: {e}", path.display())))
}

/// Rejects models failing (ND) or (QL) on a few periods from 0.
fn check_axioms(model: &DimensionModel) -> CliResult<()> {
    let p = model.periods;
    let longest = [p.d.period, p.dnew.period, p.dsum.period, p.dp.period].into_iter().max().unwrap_or(1);
    let report = verify_axioms(model, 0, 4 * longest + 20);
    if let Some((f, n)) = report.nd_failures.first() {
        return Err(CliError::Input(format!("model violates (ND): {f} decreases at n = {n}")));
    }
    if let Some((f, n)) = report.ql_failures.first() {
        return Err(CliError::Input(format!(
            "model violates (QL): {f} at n = {n} breaks its declared period"
        )));
    }
    if let Some(n) = report.dp_identity_failures.first() {
        return Err(CliError::Input(format!("model violates d_p = 2d + d^new at n = {n}")));
    }
    Ok(())
}

fn parse_weight(s: &str, model: &DimensionModel) -> CliResult<WeightPoint> {
    let w: WeightPoint = s.parse()?;
    w.validate(&model.params)?;
    Ok(w)
}

fn slopes_for(
    model: &DimensionModel,
    weight: Option<&WeightPoint>,
    count: usize,
) -> CliResult<SlopeSequence> {
    let s = match weight {
        Some(w) => ghost_slopes(model, w, count)?,
        None => wadic_slopes(model, count)?,
    };
    if !s.certified {
        return Err(CliError::Failed(format!("slopes not certified within {} coefficients", s.index_bound)));
    }
    Ok(s)
}

fn n_list(n: Vec<i64>, range: Option<String>) -> CliResult<Vec<i64>> {
    match (n.is_empty(), range) {
        (true, Some(r)) => {
            let (a, b) = parse_range(&r)?;
            Ok((a..=b).collect())
        }
        (false, None) => Ok(n),
        _ => Err(CliError::Input("give exactly one of --n and --range".into())),
    }
}

pub fn execute(command: Command) -> CliResult<Output> {
    match command {
        Command::Dims { model, range } => {
            let m = parse_model(&model.model)?;
            let (a, b) = parse_range(&range)?;
            let rows: Vec<[i64; 5]> =
                (a..=b).map(|n| [n, m.params.k_n(n), m.d(n), m.dnew(n), m.dp(n)]).collect();
            let json = json!({
                "model": m.label(),
                "rows": rows.iter().map(|x| json!({"n": x[0], "k": x[1], "d": x[2], "dnew": x[3], "dp": x[4]})).collect::<Vec<_>>(),
            });
            let rows = rows.iter().map(|x| x.iter().map(|v| v.to_string()).collect()).collect();
            Ok(Output::new(json, &["n", "k", "d", "dnew", "dp"], rows))
        }
        Command::Coeffs { model, up_to } => {
            let m = parse_model(&model.model)?;
            if up_to < 0 {
                return Err(CliError::Input(format!("--up-to must be >= 0, got {up_to}")));
            }
            let coeffs = (0..=up_to).map(|i| coefficient(&m, i)).collect::<crate::error::Result<Vec<_>>>()?;
            let rows = coeffs
                .iter()
                .map(|c| {
                    let zeros: Vec<String> =
                        c.zeros.iter().map(|(n, e)| format!("w{}^{e}", m.params.k_n(*n))).collect();
                    vec![c.index.to_string(), c.degree.to_string(), opt(c.lz), opt(c.hz), zeros.join(" ")]
                })
                .collect();
            let json = json!({"model": m.label(), "coefficients": coeffs});
            Ok(Output::new(json, &["i", "degree", "lz", "hz", "zeros"], rows))
        }
        Command::Slopes { model, weight, count } => {
            let m = parse_model(&model.model)?;
            let w = weight.map(|w| parse_weight(&w, &m)).transpose()?;
            let s = slopes_for(&m, w.as_ref(), count)?;
            let rows = s.slopes.iter().enumerate().map(|(i, x)| vec![(i + 1).to_string(), r(x)]).collect();
            let file = SlopeFile { p: m.params.p, model: m.label(), weight: w, count, slopes: s.slopes };
            Ok(Output::new(serde_json::to_value(&file).expect("serializable"), &["i", "slope"], rows))
        }
        Command::Np { model, weight, count } => {
            let m = parse_model(&model.model)?;
            let w = weight.map(|w| parse_weight(&w, &m)).transpose()?;
            let s = slopes_for(&m, w.as_ref(), count)?;
            let np = NewtonPolygon::from_slopes(int(0), &s.slopes);
            let rows = np.vertices.iter().map(|(x, y)| vec![x.to_string(), r(y)]).collect();
            let json = json!({"model": m.label(), "weight": w, "polygon": np});
            Ok(Output::new(json, &["x", "y"], rows))
        }
        Command::Dist { model, n } => {
            let m = parse_model(&model.model)?;
            let reports = distribution_reports(&m, &n)?;
            let mut rows: Vec<Vec<String>> = reports
                .iter()
                .map(|x| {
                    [x.n.to_string(), x.k.to_string()]
                        .into_iter()
                        .chain([&x.mass_low, &x.mass_at_half, &x.mass_high, &x.ks_low, &x.ks_high].map(r))
                        .collect()
                })
                .collect();
            if let Some(x) = reports.first() {
                let l = &x.limit_masses;
                rows.push(vec![
                    "limit".into(),
                    "-".into(),
                    r(&l[0]),
                    r(&l[1]),
                    r(&l[2]),
                    "0".into(),
                    "0".into(),
                ]);
            }
            let json = json!({"model": m.label(), "reports": reports});
            Ok(Output::new(
                json,
                &["n", "k", "mass_low", "mass_at_half", "mass_high", "ks_low", "ks_high"],
                rows,
            ))
        }
        Command::Gouvea { model, n, range } => {
            let m = parse_model(&model.model)?;
            let ns = n_list(n, range)?;
            let reports =
                ns.iter().map(|&n| gouvea_check(&m, n)).collect::<crate::error::Result<Vec<_>>>()?;
            let rows = reports
                .iter()
                .map(|x| {
                    vec![
                        x.n.to_string(),
                        x.k.to_string(),
                        r(&x.ratio_old),
                        r(&x.ratio_classical),
                        r(&x.limit_old),
                        r(&x.limit_classical),
                        x.buzzard_bound_holds.to_string(),
                    ]
                })
                .collect();
            let json = json!({"model": m.label(), "reports": reports});
            Ok(Output::new(
                json,
                &["n", "k", "ratio_old", "ratio_classical", "limit_old", "limit_classical", "buzzard"],
                rows,
            ))
        }
        Command::Ss { model, n, range } => {
            let m = parse_model(&model.model)?;
            let ns = n_list(n, range)?;
            let reports =
                ns.iter().map(|&n| semistable_check(&m, n)).collect::<crate::error::Result<Vec<_>>>()?;
            let rows = reports
                .iter()
                .map(|x| {
                    vec![
                        x.n.to_string(),
                        x.k.to_string(),
                        x.d.to_string(),
                        x.d_plus_dnew.to_string(),
                        x.passed.to_string(),
                        x.slope.as_ref().map_or("-".into(), r),
                        r(&x.predicted),
                        x.deviation.as_ref().map_or("-".into(), r),
                    ]
                })
                .collect();
            let ok = reports.iter().all(|x| x.passed);
            let json = json!({"model": m.label(), "reports": reports});
            let mut out = Output::new(
                json,
                &["n", "k", "d", "d+dnew", "breakpoints", "slope", "predicted", "deviation"],
                rows,
            );
            out.ok = ok;
            Ok(out)
        }
        Command::Ap { model, weight, count } => {
            let m = parse_model(&model.model)?;
            let w = parse_weight(&weight, &m)?;
            let params = ap_parameters(&m, &w)?;
            let s = slopes_for(&m, Some(&w), count)?;
            let report = ap_verify(&s, params.q_r, &params.common_difference)?;
            let mut out = Output::new(
                json!({"model": m.label(), "weight": w, "parameters": params, "report": report}),
                &["i", "s_{i+Q_r} - s_i"],
                report.violations.iter().map(|(i, d)| vec![i.to_string(), r(d)]).collect(),
            );
            out.preamble = vec![
                format!(
                    "Q = {}  Q_r = {}  r = {}  D = {}",
                    params.q,
                    params.q_r,
                    params.r,
                    r(&params.common_difference)
                ),
                format!(
                    "checked {} <= i <= {}: {}",
                    report.verified_range.0,
                    report.verified_range.1,
                    if report.verified { "verified" } else { "violations below" }
                ),
            ];
            out.ok = report.verified;
            Ok(out)
        }
        Command::Axioms { model, range } => {
            let (a, b) = parse_range(&range)?;
            let m = build_model(&model.model)?;
            let report = verify_axioms(&m, a, b);
            let mut rows: Vec<Vec<String>> = Vec::new();
            rows.extend(report.nd_failures.iter().map(|(f, n)| vec!["ND".into(), f.clone(), n.to_string()]));
            rows.extend(report.ql_failures.iter().map(|(f, n)| vec!["QL".into(), f.clone(), n.to_string()]));
            rows.extend(
                report
                    .dp_identity_failures
                    .iter()
                    .map(|n| vec!["dp=2d+dnew".into(), "d_p".into(), n.to_string()]),
            );
            let mut out =
                Output::new(json!({"model": m.label(), "report": report}), &["axiom", "function", "n"], rows);
            out.preamble = vec![format!(
                "window {a}..{b}: A = {}, B = {}, {}",
                r(&report.a),
                r(&report.b),
                if report.passed() { "all axioms hold" } else { "failures below" }
            )];
            out.preamble.extend(report.notes.iter().cloned());
            out.ok = report.passed();
            Ok(out)
        }
        Command::Compare { model, weight, file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))?;
            let ext: SlopeFile = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("slope file {}: {e}", file.display())))?;
            let m = parse_model(model.as_deref().unwrap_or(&ext.model))?;
            if ext.p != m.params.p {
                return Err(CliError::Input(format!(
                    "slope file is for p = {}, model has p = {}",
                    ext.p, m.params.p
                )));
            }
            let w = match weight {
                Some(w) => Some(parse_weight(&w, &m)?),
                None => {
                    if let Some(w) = &ext.weight {
                        w.validate(&m.params)?;
                    }
                    ext.weight.clone()
                }
            };
            let s = slopes_for(&m, w.as_ref(), ext.slopes.len())?;
            let report = compare_slopes(&s.slopes, &ext.slopes);
            let mut out = Output::new(
                json!({"model": m.label(), "weight": w, "report": report}),
                &["compared", "first_mismatch", "matches"],
                vec![vec![
                    report.compared.to_string(),
                    report.first_mismatch.map_or("-".into(), |i| i.to_string()),
                    report.matches.to_string(),
                ]],
            );
            if let Some(i) = report.first_mismatch {
                out.preamble.push(format!(
                    "first mismatch at index {i}: computed {}, file {}",
                    r(&s.slopes[i - 1]),
                    r(&sorted(&ext.slopes)[i - 1])
                ));
            }
            out.preamble.extend(report.note.iter().cloned());
            out.ok = report.matches;
            Ok(out)
        }
    }
}

fn sorted(v: &[Rational]) -> Vec<Rational> {
    let mut v = v.to_vec();
    v.sort();
    v
}

/// Parses arguments, runs, writes output. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        // Fails only if a pool already exists, in which case that pool is used.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let format = cli.format;
    match execute(cli.command) {
        Ok(out) => {
            let text = out.render(format);
            let written = match &cli.out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display()))
                }
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return 2;
            }
            if out.ok {
                0
            } else {
                for line in &out.preamble {
                    eprintln!("{line}");
                }
                1
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("failed: {msg}");
            1
        }
    }
}
