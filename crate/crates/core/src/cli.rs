//! Command-line front end. Every subcommand writes one table, as CSV (an input
//! echo comment line, then a header with units) or JSON with the same fields.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::aqw::{self, WellSpec};
use crate::contact::{self, ComplexScatteringLength, Coupling};
use crate::decay::{self, EvolutionState};
use crate::error::Error;
use crate::physunits::{self, SpeciesRegistry};
use crate::trapwell::{self, FiniteRangeProblem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

const DEFAULT_SPECIES_FILE: &str = "species.cfg";

#[derive(Debug, Parser)]
#[command(name = "trapreact", version, about = "Two ultracold particles in a harmonic trap with reactive loss")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Output file; standard output when omitted.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Species registry; the built-in table is used if the default file is absent.
    #[arg(long, global = true)]
    species_file: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Contact-interaction levels for one scattering length a = re_a - i im_a.
    Spectrum(SpectrumArgs),
    /// Levels along a range of Re a at fixed beta = -Im a.
    SweepA(SweepArgs),
    /// Beta at which two branches come closest.
    Crossing(CrossingArgs),
    /// Scattering length of the absorbing square well against alpha = sqrt(2U) L.
    Aqw(AqwArgs),
    /// Exact, edep and eindep levels of a square well inside the trap against the depth.
    Trapwell(TrapwellArgs),
    /// Universal-limit lifetimes against the trap frequency.
    Lifetime(LifetimeArgs),
    /// Populations of a diagonal initial state under non-Hermitian evolution.
    Evolve(EvolveArgs),
    /// List the species registry.
    Species,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "inverse_a")]
    re_a: Option<f64>,
    /// beta >= 0; the scattering length is re_a - i im_a.
    #[arg(long, default_value_t = 0.0)]
    im_a: f64,
    /// Inverse scattering length c = 1/a as RE or RE+IMi; 0 is unitarity.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    inverse_a: Option<Complex64>,
    #[arg(long, default_value_t = 3)]
    levels: usize,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    im_a: f64,
    /// lo:hi:step
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-5:5:0.01")]
    re_a_range: Range,
    #[arg(long, default_value_t = 2)]
    levels: usize,
}

#[derive(Debug, Args)]
struct CrossingArgs {
    /// Two branch indices, lower first.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    branches: Vec<usize>,
    #[arg(long, default_value_t = 0.2)]
    beta_min: f64,
    #[arg(long, default_value_t = 0.7)]
    beta_max: f64,
}

#[derive(Debug, Args)]
struct EtaArgs {
    /// |eta| in [0, 1].
    #[arg(long, default_value_t = 1.0)]
    eta_mod: f64,
    /// arg(eta) in units of pi.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    eta_phase: f64,
}

#[derive(Debug, Args)]
struct AqwArgs {
    #[command(flatten)]
    eta: EtaArgs,
    /// Well range L.
    #[arg(long, default_value_t = 1.0)]
    range: f64,
    /// lo:hi:step
    #[arg(long, value_parser = parse_range, default_value = "0.01:12.56:0.01")]
    alpha_range: Range,
    /// Also report a(kappa) at this collision energy (units of hbar^2 / (m L^2) with m = 1).
    #[arg(long)]
    energy: Option<f64>,
}

#[derive(Debug, Args)]
struct TrapwellArgs {
    #[command(flatten)]
    eta: EtaArgs,
    /// Well range L in oscillator lengths.
    #[arg(long, default_value_t = 0.1)]
    range: f64,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Depths with alpha evenly spaced on (0, alpha_max].
    #[arg(long, default_value_t = 2000)]
    points: usize,
    #[arg(long, default_value_t = 4.0 * PI)]
    alpha_max: f64,
}

#[derive(Debug, Args)]
struct LifetimeArgs {
    #[arg(long, default_value = "KRb")]
    species: String,
    /// Hz; lo:hi:step or lo:hi:logN
    #[arg(long, value_parser = parse_range, default_value = "1e3:1e6:log50")]
    freq_range: Range,
    /// 0 is the molecular branch, 1.. the trap levels.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    levels: Vec<usize>,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    /// Complex eigenvalues in units of hbar omega, e.g. 1.5-0.1i,3.5-0.2i
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_complex, required = true)]
    eigenvalues: Vec<Complex64>,
    /// Initial populations c_ii(0); defaults to equal weights summing to 1.
    #[arg(long, value_delimiter = ',')]
    populations: Option<Vec<f64>>,
    /// Times in units of 1/omega, lo:hi:step
    #[arg(long, value_parser = parse_range, default_value = "0:10:0.5")]
    t_range: Range,
}

/// Inclusive parameter grid parsed from `lo:hi:step` or `lo:hi:logN`.
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spacing {
    Step(f64),
    Log(usize),
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Step(step) => {
                let n = ((self.hi - self.lo) / step * (1.0 + 1e-12)).floor() as usize;
                // round away the accumulated representation error of lo + k step
                let q = 10f64.powi(3 - step.log10().floor() as i32);
                (0..=n).map(|k| ((self.lo + k as f64 * step) * q).round() / q).collect()
            }
            Spacing::Log(1) => vec![self.lo],
            Spacing::Log(n) => {
                let ratio = self.hi / self.lo;
                (0..n)
                    .map(|k| match k {
                        0 => self.lo,
                        k if k == n - 1 => self.hi,
                        k => self.lo * ratio.powf(k as f64 / (n - 1) as f64),
                    })
                    .collect()
            }
        }
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, spacing] = parts[..] else {
            return Err(format!("expected lo:hi:step or lo:hi:logN, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let (lo, hi) = (num(lo)?, num(hi)?);
        if !(lo.is_finite() && hi.is_finite()) || hi < lo {
            return Err(format!("range {s:?} must have finite lo <= hi"));
        }
        let spacing = match spacing.trim().strip_prefix("log") {
            Some(n) => {
                let n: usize = n.parse().map_err(|e| format!("{n:?}: {e}"))?;
                if n == 0 || lo <= 0.0 || (n == 1 && hi != lo) {
                    return Err(format!("log range {s:?} needs lo > 0 and at least 2 points"));
                }
                Spacing::Log(n)
            }
            None => {
                let step = num(spacing)?;
                if !(step > 0.0 && step.is_finite()) {
                    return Err(format!("step in {s:?} must be positive"));
                }
                Spacing::Step(step)
            }
        };
        Ok(Range { lo, hi, spacing })
    }
}

fn parse_range(s: &str) -> Result<Range, String> {
    s.parse()
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    Complex64::from_str(s.trim()).map_err(|e| format!("{s:?} is not a complex number: {e}"))
}

/// Columns with units and rows of JSON values, written as CSV or JSON.
struct Table {
    echo: String,
    columns: Vec<(&'static str, &'static str)>,
    rows: Vec<Vec<Value>>,
    /// Printed to standard error; never part of the data.
    warnings: Vec<String>,
}

impl Table {
    fn new(echo: &str, columns: &[(&'static str, &'static str)]) -> Self {
        Self {
            echo: echo.to_owned(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn csv(&self) -> String {
        let mut out = format!("# {}\n", self.echo);
        let header: Vec<String> = self
            .columns
            .iter()
            .map(|(name, unit)| if unit.is_empty() { name.to_string() } else { format!("{name}[{unit}]") })
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self) -> String {
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|(name, unit)| json!({ "name": name, "unit": unit }))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|((name, _), v)| (name.to_string(), v.clone()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({ "command": self.echo, "columns": columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Non-finite values become strings so that JSON stays valid.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

/// A failure with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) | Error::Config(_) => EXIT_USAGE,
            _ => EXIT_NUMERICAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Numerical failure with the row it happened at.
fn at(context: String) -> impl FnOnce(Error) -> Failure {
    move |e| {
        let mut f = Failure::from(e);
        f.message = format!("{context}: {}", f.message);
        f
    }
}

/// Parses `argv` (program name first), runs the subcommand and writes the
/// table. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let echo = std::iter::once("trapreact".to_owned())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    let result = execute(&cli, &echo).and_then(|table| {
        for w in &table.warnings {
            let _ = writeln!(err, "warning: {w}");
        }
        let text = match cli.format {
            Format::Csv => table.csv(),
            Format::Json => table.json(),
        };
        match &cli.output {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
            None => out
                .write_all(text.as_bytes())
                .map_err(|e| usage(format!("cannot write output: {e}"))),
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, echo: &str) -> Result<Table, Failure> {
    match &cli.command {
        Command::Spectrum(a) => spectrum(a, echo),
        Command::SweepA(a) => sweep_a(a, echo),
        Command::Crossing(a) => crossing(a, echo),
        Command::Aqw(a) => aqw_table(a, echo),
        Command::Trapwell(a) => trapwell_table(a, echo),
        Command::Lifetime(a) => lifetime(a, &load_species(cli)?, echo),
        Command::Evolve(a) => evolve(a, echo),
        Command::Species => species(&load_species(cli)?, echo),
    }
}

fn load_species(cli: &Cli) -> Result<SpeciesRegistry, Failure> {
    match &cli.species_file {
        Some(path) => Ok(SpeciesRegistry::load(path)?),
        None if std::path::Path::new(DEFAULT_SPECIES_FILE).exists() => {
            Ok(SpeciesRegistry::load(DEFAULT_SPECIES_FILE)?)
        }
        None => Ok(SpeciesRegistry::builtin()),
    }
}

const LEVEL_COLUMNS: [(&str, &str); 3] = [("re_E", "hbar_omega"), ("im_E", "hbar_omega"), ("residual", "")];

fn spectrum(args: &SpectrumArgs, echo: &str) -> Result<Table, Failure> {
    if args.levels == 0 {
        return Err(usage("--levels must be at least 1"));
    }
    let levels = match (args.re_a, args.inverse_a) {
        (Some(re), None) => contact::spectrum(ComplexScatteringLength::new(re, args.im_a)?, args.levels)?,
        (None, Some(c)) => {
            let coupling = if c == Complex64::new(0.0, 0.0) {
                Coupling::unitarity()
            } else {
                Coupling::Inverse(c)
            };
            contact::spectrum_for_coupling(coupling, args.levels)?
        }
        _ => return Err(usage("give either --re-a or --inverse-a")),
    };
    let mut cols = vec![("branch", "")];
    cols.extend(LEVEL_COLUMNS);
    let mut table = Table::new(echo, &cols);
    for l in levels {
        table.push(vec![json!(l.branch), num(l.energy.re), num(l.energy.im), num(l.residual)]);
    }
    Ok(table)
}

fn sweep_a(args: &SweepArgs, echo: &str) -> Result<Table, Failure> {
    if args.levels == 0 {
        return Err(usage("--levels must be at least 1"));
    }
    if matches!(args.re_a_range.spacing, Spacing::Log(_)) {
        return Err(usage("--re-a-range takes lo:hi:step"));
    }
    let grid = args.re_a_range.values();
    let tracks = contact::sweep_re_a(args.im_a, &grid, args.levels)
        .map_err(at(format!("sweep at im_a = {}", args.im_a)))?;
    let mut cols = vec![("re_a", "osc_length"), ("branch", "")];
    cols.extend(LEVEL_COLUMNS);
    let mut table = Table::new(echo, &cols);
    for t in &tracks {
        for ((re_a, e), r) in t.parameter_grid.iter().zip(&t.roots).zip(&t.residuals) {
            table.push(vec![num(*re_a), json!(t.branch_index), num(e.re), num(e.im), num(*r)]);
        }
        if let Some(first) = t.collisions.iter().find(|c| c.other_branch > t.branch_index) {
            table.warnings.push(format!(
                "branches {} and {} coincide from re_a = {} ({} grid points); refine the grid if this is not an exceptional point",
                t.branch_index,
                first.other_branch,
                grid[first.grid_index],
                t.collisions.iter().filter(|c| c.other_branch == first.other_branch).count()
            ));
        }
    }
    Ok(table)
}

fn crossing(args: &CrossingArgs, echo: &str) -> Result<Table, Failure> {
    let [lo, hi] = args.branches[..] else {
        return Err(usage("--branches takes exactly two indices"));
    };
    let beta = contact::find_avoided_crossing(lo, hi, (args.beta_min, args.beta_max))
        .map_err(at(format!("branches {lo},{hi}")))?;
    let gap = contact::branch_gap(lo, hi, beta, &contact::CrossingOptions::default())?;
    let mut table = Table::new(
        echo,
        &[
            ("branch_lo", ""),
            ("branch_hi", ""),
            ("beta", "osc_length"),
            ("re_a", "osc_length"),
            ("gap", "hbar_omega"),
            ("re_E_lo", "hbar_omega"),
            ("im_E_lo", "hbar_omega"),
            ("re_E_hi", "hbar_omega"),
            ("im_E_hi", "hbar_omega"),
        ],
    );
    table.push(vec![
        json!(lo),
        json!(hi),
        num(beta),
        num(gap.re_a),
        num(gap.distance()),
        num(gap.lower.re),
        num(gap.lower.im),
        num(gap.upper.re),
        num(gap.upper.im),
    ]);
    Ok(table)
}

fn eta_of(args: &EtaArgs) -> Result<Complex64, Failure> {
    if !(0.0..=1.0).contains(&args.eta_mod) {
        return Err(usage("--eta-mod must lie in [0, 1]"));
    }
    Ok(aqw::eta_from_polar(args.eta_mod, args.eta_phase))
}

fn aqw_table(args: &AqwArgs, echo: &str) -> Result<Table, Failure> {
    let eta = eta_of(&args.eta)?;
    let mut cols = vec![("alpha", ""), ("re_a0", "L_unit"), ("im_a0", "L_unit")];
    if args.energy.is_some() {
        cols.extend([("re_a_E", "L_unit"), ("im_a_E", "L_unit")]);
    }
    let mut table = Table::new(echo, &cols);
    for alpha in args.alpha_range.values() {
        let well = WellSpec::from_alpha(alpha, args.range, eta)?;
        let (re0, im0) = match aqw::zero_energy_a(&well) {
            Ok(a) => (num(a.re), num(a.im)),
            Err(Error::ResonancePole { .. }) => (num(f64::INFINITY), num(f64::NAN)),
            Err(e) => return Err(at(format!("alpha = {alpha}"))(e)),
        };
        let mut row = vec![num(alpha), re0, im0];
        if let Some(e) = args.energy {
            let a = aqw::energy_dependent_a(Complex64::new((2.0 * e).sqrt(), 0.0), &well)
                .map_err(at(format!("alpha = {alpha}, E = {e}")))?;
            row.extend([num(a.re), num(a.im)]);
        }
        table.push(row);
    }
    Ok(table)
}

fn trapwell_table(args: &TrapwellArgs, echo: &str) -> Result<Table, Failure> {
    let eta = eta_of(&args.eta)?;
    if args.points == 0 || !(args.alpha_max > 0.0) {
        return Err(usage("--points and --alpha-max must be positive"));
    }
    let problem = FiniteRangeProblem::alpha_grid(args.range, eta, args.levels, args.points, args.alpha_max)?;
    let rows = trapwell::compare_methods(&problem)
        .map_err(at(format!("eta = {eta}, L = {}", args.range)))?;
    let mut table = Table::new(
        echo,
        &[
            ("U", "hbar_omega"),
            ("alpha", ""),
            ("branch", ""),
            ("re_E_exact", "hbar_omega"),
            ("im_E_exact", "hbar_omega"),
            ("re_E_edep", "hbar_omega"),
            ("im_E_edep", "hbar_omega"),
            ("re_E_eindep", "hbar_omega"),
            ("im_E_eindep", "hbar_omega"),
            ("shallow", ""),
        ],
    );
    for r in rows {
        let alpha = (2.0 * r.u_value).sqrt() * args.range;
        table.push(vec![
            num(r.u_value),
            num(alpha),
            json!(r.branch),
            num(r.exact.re),
            num(r.exact.im),
            num(r.edep.re),
            num(r.edep.im),
            num(r.eindep.re),
            num(r.eindep.im),
            json!(r.shallow_warning),
        ]);
    }
    Ok(table)
}

fn lifetime(args: &LifetimeArgs, registry: &SpeciesRegistry, echo: &str) -> Result<Table, Failure> {
    let species = registry.get(&args.species)?;
    let freqs = args.freq_range.values();
    if freqs.iter().any(|f| *f <= 0.0) {
        return Err(usage("frequencies must be positive"));
    }
    let excited: Vec<usize> = args.levels.iter().copied().filter(|&l| l > 0).collect();
    let mut rows = if excited.is_empty() {
        Vec::new()
    } else {
        physunits::lifetime_sweep(species, &freqs, &excited).map_err(at(format!("species {}", species.name)))?
    };
    if args.levels.contains(&0) {
        for &f in &freqs {
            rows.push(physunits::molecular_lifetime(species, f).map_err(at(format!("molecular level at {f} Hz")))?);
        }
        rows.sort_by(|a, b| a.frequency.total_cmp(&b.frequency).then(a.level.cmp(&b.level)));
    }
    let mut table = Table::new(
        echo,
        &[
            ("species", ""),
            ("f", "Hz"),
            ("level", ""),
            ("re_E", "hbar_omega"),
            ("im_E", "hbar_omega"),
            ("tau", "s"),
            ("tau_overlap", "s"),
            ("tau_ratio", ""),
        ],
    );
    for r in rows {
        table.push(vec![
            json!(r.species),
            num(r.frequency),
            json!(r.level),
            num(r.re_e),
            num(r.im_e),
            num(r.tau),
            r.tau_overlap.map_or(Value::Null, num),
            r.convention_ratio().map_or(Value::Null, num),
        ]);
    }
    Ok(table)
}

fn evolve(args: &EvolveArgs, echo: &str) -> Result<Table, Failure> {
    let n = args.eigenvalues.len();
    let pops = match &args.populations {
        Some(p) if p.len() != n => return Err(usage("one population per eigenvalue")),
        Some(p) => p.clone(),
        None => vec![1.0 / n as f64; n],
    };
    let c0 = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(pops[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    // Gain here comes from the command line, so it is a usage error.
    let state = EvolutionState::new(args.eigenvalues.clone(), c0).map_err(|e| usage(e.to_string()))?;
    let mut table = Table::new(
        echo,
        &[("t", "1/omega"), ("level", ""), ("population", ""), ("trace", "")],
    );
    for t in args.t_range.values() {
        let s = decay::evolve(&state, t).map_err(at(format!("t = {t}")))?;
        let trace = s.trace();
        for (i, p) in s.populations().into_iter().enumerate() {
            table.push(vec![num(t), json!(i), num(p), num(trace)]);
        }
    }
    Ok(table)
}

fn species(registry: &SpeciesRegistry, echo: &str) -> Result<Table, Failure> {
    let mut table = Table::new(
        echo,
        &[
            ("name", ""),
            ("mass", "amu"),
            ("abar", "nm"),
            ("g", ""),
            ("k_reactive", "cm^3/s"),
            ("provenance", ""),
        ],
    );
    for s in &registry.species {
        table.push(vec![
            json!(s.name),
            num(s.mass_amu),
            num(s.abar_nm),
            json!(s.g),
            num(physunits::k_reactive_universal(s)),
            json!(s.provenance),
        ]);
    }
    Ok(table)
}
