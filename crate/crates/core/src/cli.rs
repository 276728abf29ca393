//! Command-line front end. The `cvtele` binary only forwards to [`run_with`].
//!
//! Every number is printed with 17 significant digits (`{:.16e}`), in CSV and
//! JSON alike, so the two encodings of a run carry identical values and
//! repeated invocations are byte-identical.

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{Map, Number, Value};
use thiserror::Error;

use crate::circuit::presets::Scheme;
use crate::circuit::Circuit;
use crate::dsl;
use crate::fock::verify::{run_grid, Check, VerifyGrid};
use crate::fock::{simulate, OracleOptions, DEFAULT_TAIL_THRESHOLD};
use crate::metrics::{teleport_report, ReportOptions};
use crate::mode::stats::{quadrature_stats, QuadratureStats};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "cvtele", version, about = "Continuous-variable teleportation simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one circuit and print its report.
    Run(GridArgs),
    /// Evaluate a grid of parameters, one row per point.
    Sweep(GridArgs),
    /// Compare the coefficient algebra against the number-basis oracle.
    Verify(VerifyArgs),
    /// Print a `.qot` file in canonical form.
    Fmt(FmtArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Json,
    Csv,
}

/// `value` or `start:stop:count[:lin|log]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl Range {
    pub fn single(value: f64) -> Self {
        Self {
            start: value,
            stop: value,
            count: 1,
            log: false,
        }
    }

    pub fn is_single(&self) -> bool {
        self.count == 1
    }

    /// Grid values in increasing order; both endpoints are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    return self.stop;
                }
                let t = i as f64 / last;
                if self.log {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| -> Result<f64, String> {
            let v: f64 = t.trim().parse().map_err(|_| format!("`{t}` is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{t}` is not finite"))
            }
        };
        let parts: Vec<&str> = s.split(':').collect();
        let range = match parts.as_slice() {
            [v] => Range::single(num(v)?),
            [a, b, n] | [a, b, n, _] => {
                let log = match parts.get(3).map(|t| t.trim()) {
                    None | Some("lin") => false,
                    Some("log") => true,
                    Some(other) => return Err(format!("spacing must be `lin` or `log`, not `{other}`")),
                };
                let count: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| format!("count `{n}` is not a whole number"))?;
                Range {
                    start: num(a)?,
                    stop: num(b)?,
                    count,
                    log,
                }
            }
            _ => return Err("expected VALUE or START:STOP:COUNT[:lin|log]".into()),
        };
        if range.count == 0 {
            return Err("count must be at least 1".into());
        }
        if range.start > range.stop {
            return Err(format!("start {} exceeds stop {}", range.start, range.stop));
        }
        if range.count == 1 && range.start != range.stop {
            return Err("a single-point range needs start = stop".into());
        }
        if range.log && range.start <= 0.0 {
            return Err("log spacing needs positive endpoints".into());
        }
        Ok(range)
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Preset (eo-classical, ao-classical, ao-quantum) or a `.qot` circuit file.
    pub target: String,
    /// Classical-channel gain G.
    #[arg(long = "G", value_name = "RANGE")]
    pub g: Option<Range>,
    /// EPR parametric gain H.
    #[arg(long = "H", value_name = "RANGE")]
    pub h: Option<Range>,
    /// Homodyne photocurrent constant K (default 1).
    #[arg(long = "K", value_name = "RANGE")]
    pub k: Option<Range>,
    /// Modulator gain λ (default 1).
    #[arg(long, value_name = "RANGE")]
    pub lambda: Option<Range>,
    /// Real part of the coherent input amplitude.
    #[arg(long, value_name = "RANGE", allow_hyphen_values = true)]
    pub alpha: Option<Range>,
    /// Imaginary part of the coherent input amplitude.
    #[arg(long = "alpha-im", value_name = "RANGE", allow_hyphen_values = true)]
    pub alpha_im: Option<Range>,
    /// Build the quantum scheme's amplifier from two degenerate amplifiers.
    #[arg(long)]
    pub composite: bool,
    /// Mode whose variances decide the classical-channel flag.
    #[arg(long)]
    pub channel: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub out: Format,
    /// Also simulate each point in a truncated number basis.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 40)]
    pub cutoff: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Amplifier gains, comma separated.
    #[arg(long = "G", value_delimiter = ',')]
    pub g: Option<Vec<f64>>,
    /// Parametric gains, comma separated.
    #[arg(long = "H", value_delimiter = ',')]
    pub h: Option<Vec<f64>>,
    /// Real coherent amplitudes, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, default_value_t = 40)]
    pub cutoff: usize,
    #[arg(long, default_value_t = DEFAULT_TAIL_THRESHOLD)]
    pub tail_threshold: f64,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub out: TableFormat,
}

#[derive(Debug, Args)]
pub struct FmtArgs {
    pub file: String,
    /// Rewrite the file instead of printing.
    #[arg(long)]
    pub write: bool,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return e.exit_code();
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Io(_) => EXIT_CHECK,
            }
        }
    }
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Run(args) => {
            let single = [args.g, args.h, args.k, args.lambda, args.alpha, args.alpha_im]
                .iter()
                .flatten()
                .all(Range::is_single);
            if !single {
                return Err(CliError::Usage("`run` takes single values; use `sweep` for ranges".into()));
            }
            let (rows, modes) = evaluate(&args, true)?;
            write_rows(out, args.out, &rows, modes.first())?;
        }
        Command::Sweep(args) => {
            let (rows, _) = evaluate(&args, false)?;
            write_rows(out, args.out, &rows, None)?;
        }
        Command::Verify(args) => return verify(&args, out),
        Command::Fmt(args) => {
            let circuit = load_circuit(&args.file)?;
            let text = dsl::format(&circuit);
            if args.write {
                std::fs::write(&args.file, text)?;
            } else {
                out.write_all(text.as_bytes())?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn load_circuit(path: &str) -> Result<Circuit, CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => CliError::Usage(format!("file not found: {path}")),
        _ => CliError::Usage(format!("cannot read {path}: {e}")),
    })?;
    dsl::parse(&src).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => Value::Number(
                Number::from_str(&number(*x)).expect("formatted floats are valid JSON numbers"),
            ),
            Cell::Num(_) => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(t) => Value::String(t.clone()),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(x) => f.write_str(&number(*x)),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Text(t) => f.write_str(t),
        }
    }
}

/// 17 significant digits with a signed exponent; `nan`, `inf`, `-inf` for the rest.
pub fn number(x: f64) -> String {
    if x.is_finite() {
        // fold −0 into 0
        let text = format!("{:.16e}", x + 0.0);
        match text.split_once('e') {
            Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
            _ => text,
        }
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub type Row = Vec<(&'static str, Cell)>;

#[derive(Debug, Clone)]
enum Target {
    Preset(&'static str),
    File(Circuit),
}

#[derive(Debug, Clone, Copy)]
struct Point {
    scheme: Option<Scheme>,
    alpha: Complex64,
}

fn resolve(args: &GridArgs) -> Result<(Target, Vec<Point>), CliError> {
    let misplaced = |flag: &str, what: &str| CliError::Usage(format!("{flag} does not apply to {what}"));
    let target = match Scheme::NAMES.iter().find(|&&n| n == args.target) {
        Some(&name) => Target::Preset(name),
        None => Target::File(load_circuit(&args.target)?),
    };
    let values = |r: Option<Range>, default: Option<f64>, flag: &str| -> Result<Vec<f64>, CliError> {
        match (r, default) {
            (Some(r), _) => Ok(r.values()),
            (None, Some(d)) => Ok(vec![d]),
            (None, None) => Err(CliError::Usage(format!("{flag} is required for {}", args.target))),
        }
    };
    let re = values(args.alpha, Some(0.0), "--alpha")?;
    let im = values(args.alpha_im, Some(0.0), "--alpha-im")?;
    let alphas: Vec<Complex64> = re
        .iter()
        .flat_map(|&r| im.iter().map(move |&i| Complex64::new(r, i)))
        .collect();
    let given = [
        ("--G", args.g.is_some()),
        ("--H", args.h.is_some()),
        ("--K", args.k.is_some()),
        ("--lambda", args.lambda.is_some()),
        ("--composite", args.composite),
    ];
    let allowed: &[&str] = match &target {
        Target::File(_) => &[],
        Target::Preset("eo-classical") => &["--K", "--lambda"],
        Target::Preset("ao-classical") => &["--G"],
        Target::Preset(_) => &["--G", "--H", "--composite"],
    };
    if let Some((flag, _)) = given.iter().find(|(f, on)| *on && !allowed.contains(f)) {
        return Err(misplaced(flag, &args.target));
    }
    let mut schemes: Vec<Option<Scheme>> = Vec::new();
    match &target {
        Target::File(_) => schemes.push(None),
        Target::Preset("eo-classical") => {
            for k in values(args.k, Some(1.0), "--K")? {
                for lambda in values(args.lambda, Some(1.0), "--lambda")? {
                    schemes.push(Some(Scheme::EoClassical { k, lambda }));
                }
            }
        }
        Target::Preset("ao-classical") => {
            for gain in values(args.g, None, "--G")? {
                schemes.push(Some(Scheme::AoClassical { gain }));
            }
        }
        Target::Preset(_) => {
            for gain in values(args.g, None, "--G")? {
                for h in values(args.h, None, "--H")? {
                    schemes.push(Some(Scheme::AoQuantum {
                        gain,
                        h,
                        composite: args.composite,
                    }));
                }
            }
        }
    }
    let points = schemes
        .into_iter()
        .flat_map(|scheme| alphas.iter().map(move |&alpha| Point { scheme, alpha }))
        .collect();
    Ok((target, points))
}

type NamedStats = Vec<(String, QuadratureStats)>;

fn evaluate(args: &GridArgs, with_modes: bool) -> Result<(Vec<Row>, Vec<NamedStats>), CliError> {
    let (target, points) = resolve(args)?;
    let results: Vec<Result<(Row, NamedStats), CliError>> = points
        .par_iter()
        .map(|p| evaluate_point(&target, p, args, with_modes))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut modes = Vec::new();
    for r in results {
        let (row, m) = r?;
        rows.push(row);
        modes.push(m);
    }
    Ok((rows, modes))
}

fn evaluate_point(target: &Target, p: &Point, args: &GridArgs, with_modes: bool) -> Result<(Row, NamedStats), CliError> {
    let usage = |e: &dyn fmt::Display| CliError::Usage(e.to_string());
    let circuit = match (target, p.scheme) {
        (_, Some(s)) => s.circuit(p.alpha).map_err(|e| usage(&e))?,
        (Target::File(c), None) => c.clone().with_signal_displacement(p.alpha),
        (Target::Preset(_), None) => unreachable!("presets always carry a scheme"),
    };
    let run = circuit.run().map_err(|e| usage(&e))?;
    let channel = args.channel.clone().or_else(|| {
        p.scheme
            .map(|s| s.channel_label().to_string())
            .or_else(|| ["a_c", "A_c"].iter().find(|n| run.mode(n).is_some()).map(|n| n.to_string()))
    });
    if let Some(name) = &args.channel {
        if run.mode(name).is_none() {
            return Err(CliError::Usage(format!("--channel: no mode named `{name}`")));
        }
    }
    let report = teleport_report(
        &run,
        &ReportOptions {
            channel,
            ..ReportOptions::default()
        },
    );
    let mut row: Row = Vec::new();
    match (target, p.scheme) {
        (Target::File(_), _) => row.push(("scheme", Cell::Text("file".into()))),
        (_, Some(s)) => {
            row.push(("scheme", Cell::Text(s.name().into())));
            match s {
                Scheme::EoClassical { k, lambda } => {
                    row.push(("K", Cell::Num(k)));
                    row.push(("lambda", Cell::Num(lambda)));
                }
                Scheme::AoClassical { gain } => row.push(("G", Cell::Num(gain))),
                Scheme::AoQuantum { gain, h, composite } => {
                    row.push(("G", Cell::Num(gain)));
                    row.push(("H", Cell::Num(h)));
                    row.push(("composite", Cell::Bool(composite)));
                }
            }
        }
        _ => unreachable!(),
    }
    row.extend([
        ("alpha_re", Cell::Num(p.alpha.re)),
        ("alpha_im", Cell::Num(p.alpha.im)),
        ("signal_gain", Cell::Num(report.signal_gain)),
        ("added_noise_plus", Cell::Num(report.added_noise_plus)),
        ("added_noise_minus", Cell::Num(report.added_noise_minus)),
    ]);
    if let Some(s) = p.scheme {
        row.push(("asymptotic_added_noise", Cell::Num(s.asymptotic_added_noise())));
    }
    row.extend([
        ("fidelity", Cell::Num(report.fidelity)),
        ("transfer_plus", Cell::Num(report.transfer_plus)),
        ("transfer_minus", Cell::Num(report.transfer_minus)),
        ("conditional_variance_plus", Cell::Num(report.conditional_variance_plus)),
        ("conditional_variance_minus", Cell::Num(report.conditional_variance_minus)),
        ("classical_channel_flag", Cell::Bool(report.classical_channel_flag)),
        ("fidelity_flag", Cell::Bool(report.fidelity_flag)),
        ("transfer_flag", Cell::Bool(report.transfer_flag)),
    ]);
    if args.oracle {
        row.extend(oracle_cells(&circuit, p.alpha, args.cutoff));
    }
    let modes = if with_modes {
        run.modes.iter().map(|(n, m)| (n.clone(), quadrature_stats(m))).collect()
    } else {
        Vec::new()
    };
    Ok((row, modes))
}

fn oracle_cells(circuit: &Circuit, alpha: Complex64, cutoff: usize) -> Row {
    let opts = OracleOptions {
        cutoff,
        tail_threshold: DEFAULT_TAIL_THRESHOLD,
    };
    let outcome = simulate(circuit, opts).and_then(|o| {
        let slot = o.slot(circuit.output())?;
        let stats = o.state.measure(slot)?;
        Ok((o.state.overlap(alpha, slot)?, stats, o.state.max_tail()))
    });
    let nan = f64::NAN;
    let (status, fid, vp, vm, tail) = match outcome {
        Ok((f, s, t)) => ("ok", f, s.var_plus, s.var_minus, t),
        Err(_) => ("refused", nan, nan, nan, nan),
    };
    vec![
        ("oracle_status", Cell::Text(status.into())),
        ("oracle_fidelity", Cell::Num(fid)),
        ("oracle_var_plus", Cell::Num(vp)),
        ("oracle_var_minus", Cell::Num(vm)),
        ("oracle_max_tail", Cell::Num(tail)),
    ]
}

fn stats_json(s: &QuadratureStats) -> Value {
    let mut m = Map::new();
    for (k, v) in [
        ("mean_plus", s.mean_plus),
        ("mean_minus", s.mean_minus),
        ("var_plus", s.var_plus),
        ("var_minus", s.var_minus),
        ("cov_plus_minus", s.cov_plus_minus),
        ("mean_photons", s.mean_photons),
    ] {
        m.insert(k.into(), Cell::Num(v).json());
    }
    Value::Object(m)
}

fn row_json(row: &Row) -> Map<String, Value> {
    row.iter().map(|(k, v)| (k.to_string(), v.json())).collect()
}

fn write_csv(out: &mut dyn Write, rows: &[Row]) -> io::Result<()> {
    let Some(first) = rows.first() else {
        return Ok(());
    };
    let header: Vec<&str> = first.iter().map(|(k, _)| *k).collect();
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|(_, v)| v.to_string()).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Runs print one object (with per-mode statistics); sweeps print an array.
fn write_rows(out: &mut dyn Write, format: Format, rows: &[Row], modes: Option<&NamedStats>) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(out, rows)?,
        Format::Json => {
            let value = match modes {
                Some(modes) => {
                    let mut obj = row_json(&rows[0]);
                    let m: Map<String, Value> = modes.iter().map(|(n, s)| (n.clone(), stats_json(s))).collect();
                    obj.insert("modes".into(), Value::Object(m));
                    Value::Object(obj)
                }
                None => Value::Array(rows.iter().map(|r| Value::Object(row_json(r))).collect()),
            };
            let text = serde_json::to_string_pretty(&value).map_err(io::Error::from)?;
            writeln!(out, "{text}")?;
        }
    }
    Ok(())
}

fn check_row(c: &Check) -> Row {
    let (status, oracle, err) = match &c.oracle {
        Ok(v) => (if c.passed() { "pass" } else { "fail" }, *v, c.abs_error().unwrap_or(f64::NAN)),
        Err(_) => ("refused", f64::NAN, f64::NAN),
    };
    vec![
        ("case", Cell::Text(c.case.clone())),
        ("quantity", Cell::Text(c.quantity.clone())),
        ("algebra", Cell::Num(c.algebra)),
        ("oracle", Cell::Num(oracle)),
        ("abs_error", Cell::Num(err)),
        ("status", Cell::Text(status.into())),
    ]
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut grid = VerifyGrid::default();
    if let Some(g) = &args.g {
        grid.gains = g.clone();
    }
    if let Some(h) = &args.h {
        grid.parametric_gains = h.clone();
    }
    if let Some(a) = &args.alpha {
        grid.alphas = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    }
    grid.cutoff = args.cutoff;
    let checks = run_grid(&grid, args.tail_threshold).map_err(|e| CliError::Usage(e.to_string()))?;
    let rows: Vec<Row> = checks.iter().map(check_row).collect();
    let passed = checks.iter().filter(|c| c.passed()).count();
    let refused = checks.iter().filter(|c| c.oracle.is_err()).count();
    let failed = checks.len() - passed - refused;
    match args.out {
        TableFormat::Csv => write_csv(out, &rows)?,
        TableFormat::Json => write_rows(out, Format::Json, &rows, None)?,
        TableFormat::Text => {
            for c in &checks {
                match &c.oracle {
                    Ok(_) => writeln!(
                        out,
                        "{:<7} {:>9.2e}  {}  {}",
                        if c.passed() { "PASS" } else { "FAIL" },
                        c.abs_error().unwrap_or(f64::NAN),
                        c.case,
                        c.quantity
                    )?,
                    Err(e) => writeln!(out, "REFUSED {:>9}  {}  {}: {e}", "-", c.case, c.quantity)?,
                }
            }
            writeln!(
                out,
                "{} checks: {passed} passed, {failed} failed, {refused} refused (tolerance {:e}, cutoff {})",
                checks.len(),
                crate::fock::verify::ORACLE_TOL,
                grid.cutoff
            )?;
        }
    }
    Ok(if passed == checks.len() { EXIT_OK } else { EXIT_CHECK })
}
