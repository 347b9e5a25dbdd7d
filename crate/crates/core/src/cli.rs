//! Command-line surface. JSON for single results, CSV for sweeps; complex
//! numbers are `[re, im]` pairs throughout.
//!
//! Exit codes: 0 success, 1 an inconsistency where consistency was demanded,
//! 2 an input error (diagnostic on standard error).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::families::{build_state, verify_family_tol, MusFamily};
use crate::limits::{
    coherent_convergence, hp_operator_error, schwinger_check, symbol_limit_condition1,
    symbol_limit_condition2, SymbolLimit,
};
use crate::numerics::{psd_sqrt, CMat, Complex};
use crate::random::{ginibre_state, seeded};
use crate::recurrence::{proposition1_scan_tol, solve_recurrence_tol, ParamGrid};
use crate::spin::{coherent_state, frame_rotation, DensityState, Frame, PureState, SpinOps, TwoJ};
use crate::uncertainty::{
    fit_saturation_params, report, report_rotated, solve_saturation_params, SaturationParams,
    SaturationReport, UncertaintyReport,
};
use crate::wick::{residual_eq3_eq4, residual_special, symbol_of, WickPoly};

pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "spinmus", version, about = "Spin-j minimum uncertainty states: construction and checks")]
pub struct Cli {
    /// Residual tolerance for saturation and recurrence consistency.
    #[arg(long, global = true, env = "SPINMUS_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Write the primary output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Refined uncertainty report of a state file, as JSON.
    Report {
        state: PathBuf,
        /// Three orthonormal axes `x1,x2,x3;y1,y2,y3;z1,z2,z3`.
        #[arg(long)]
        frame: Option<String>,
    },
    /// Build a family member; emits the state file and its saturation report.
    Family(FamilyArgs),
    /// Solve the √ρ recurrence for `(s, t, u, v)`, as JSON.
    Recurrence {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
        #[arg(long, allow_hyphen_values = true)]
        v: f64,
        #[arg(long)]
        two_j: u32,
        /// Exit 1 when the system is inconsistent.
        #[arg(long)]
        require_consistent: bool,
    },
    /// Scan a parameter grid for consistent recurrences, as CSV. Exits 1 if a
    /// consistent point lies off both conditions.
    Scan {
        #[arg(long)]
        two_j: u32,
        /// `s=a,b,..;t=..;u=..;v=..`; omitted axes keep the default grid.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Symbol of √ρ with the residuals of its symbol equations, as JSON.
    Wick { state: PathBuf },
    /// Large-j convergence tables, as CSV.
    Limits(LimitsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Lowest,
    Coherent,
    Gibbs,
    Intelligent,
    /// A Ginibre-random density matrix (not a saturating family).
    Ginibre,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    pub kind: FamilyKind,
    #[arg(long)]
    pub two_j: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub s_prime: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Magnetic label of the intelligent state (integer or half-integer).
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub zeta_re: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub zeta_im: f64,
    #[arg(long)]
    pub frame: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitKind {
    Coherent,
    Hp,
    Condition1,
    Condition2,
    Schwinger,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    pub which: LimitKind,
    /// Comma-separated spins, e.g. `5,10,20` or `2.5,3`.
    #[arg(long, default_value = "5,10,20,40")]
    pub j_list: String,
    /// Bosonic amplitude `z` for the coherent table.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub zeta_re: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub zeta_im: f64,
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub s_prime: f64,
    /// `re,im`
    #[arg(long, allow_hyphen_values = true, default_value = "0.5,0.3")]
    pub alpha: String,
    /// `re,im`
    #[arg(long, allow_hyphen_values = true, default_value = "-0.2,0.4")]
    pub beta_c: String,
}

/// On-disk state: `{two_j, kind: "density" | "pure", data}` with `data` a
/// row-major matrix or an amplitude list of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub two_j: u32,
    pub kind: StateKind,
    pub data: serde_json::Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Density,
    Pure,
}

impl StateFile {
    pub fn from_density(state: &DensityState) -> Self {
        StateFile {
            two_j: state.j().two_j(),
            kind: StateKind::Density,
            data: serde_json::to_value(state.rho()).expect("matrices serialize"),
        }
    }

    pub fn from_pure(state: &PureState) -> Self {
        let pairs: Vec<[f64; 2]> = state.amplitudes().iter().map(|z| [z.re, z.im]).collect();
        StateFile {
            two_j: state.j().two_j(),
            kind: StateKind::Pure,
            data: serde_json::to_value(pairs).expect("pairs serialize"),
        }
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state file: {e}")))
    }

    /// Validates against the state invariants and returns `ρ`.
    pub fn to_density(&self) -> Result<DensityState, Error> {
        let j = TwoJ::new(self.two_j)?;
        match self.kind {
            StateKind::Density => {
                let rho: CMat = serde_json::from_value(self.data.clone())
                    .map_err(|e| Error::Parse(format!("field `data`: {e}")))?;
                DensityState::new(j, rho)
            }
            StateKind::Pure => {
                let pairs: Vec<[f64; 2]> = serde_json::from_value(self.data.clone())
                    .map_err(|e| Error::Parse(format!("field `data`: {e}")))?;
                let amps = pairs.iter().map(|p| Complex::new(p[0], p[1])).collect();
                Ok(PureState::new(j, amps)?.to_density())
            }
        }
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Inconsistent(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Inconsistent(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(format!("csv: {e}"))
    }
}

type CliResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Inconsistent(msg) => eprintln!("inconsistent: {msg}"),
            }
            f.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> CliResult {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Failure::Input(format!("--tol must be positive, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Report { state, frame } => cmd_report(cli, state, frame.as_deref()),
        Command::Family(args) => cmd_family(cli, args),
        Command::Recurrence {
            s,
            t,
            u,
            v,
            two_j,
            require_consistent,
        } => cmd_recurrence(cli, SaturationParams::new(*s, *t, *u, *v), *two_j, *require_consistent),
        Command::Scan { two_j, grid, jobs } => cmd_scan(cli, *two_j, grid.as_deref(), *jobs),
        Command::Wick { state } => cmd_wick(cli, state),
        Command::Limits(args) => cmd_limits(cli, args),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize");
    s.push('\n');
    s
}

pub fn parse_frame(text: &str) -> Result<Frame, Error> {
    let rows: Vec<&str> = text.split(';').collect();
    if rows.len() != 3 {
        return Err(Error::Parse(format!("frame needs three `;`-separated axes, got {}", rows.len())));
    }
    let mut frame = [[0.0; 3]; 3];
    for (r, row) in rows.iter().enumerate() {
        let vals = parse_floats(row)?;
        if vals.len() != 3 {
            return Err(Error::Parse(format!("frame axis {} needs 3 components", r + 1)));
        }
        frame[r].copy_from_slice(&vals);
    }
    Ok(frame)
}

fn parse_floats(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("`{}`: {e}", x.trim())))
        })
        .collect()
}

fn parse_complex(text: &str) -> Result<Complex, Error> {
    match parse_floats(text)?.as_slice() {
        [re, im] => Ok(Complex::new(*re, *im)),
        _ => Err(Error::Parse(format!("expected `re,im`, got `{text}`"))),
    }
}

/// `s=..;t=..;u=..;v=..` over the default grid.
pub fn parse_grid(text: &str) -> Result<ParamGrid, Error> {
    let mut grid = ParamGrid::default();
    for part in text.split(';').filter(|p| !p.trim().is_empty()) {
        let (key, vals) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("grid axis `{part}` lacks `=`")))?;
        let vals = parse_floats(vals)?;
        match key.trim() {
            "s" => grid.s = vals,
            "t" => grid.t = vals,
            "u" => grid.u = vals,
            "v" => grid.v = vals,
            other => return Err(Error::Parse(format!("unknown grid axis `{other}`"))),
        }
    }
    Ok(grid)
}

fn parse_j_list(text: &str) -> Result<Vec<TwoJ>, Error> {
    parse_floats(text)?.into_iter().map(TwoJ::from_j).collect()
}

fn cmd_report(cli: &Cli, path: &Path, frame: Option<&str>) -> CliResult {
    let state = StateFile::load(path)?.to_density()?;
    let ops = SpinOps::new(state.j());
    let rep: UncertaintyReport = match frame {
        Some(f) => report_rotated(&state, &ops, &parse_frame(f)?)?,
        None => report(&state, &ops)?,
    };
    emit(&cli.out, &to_json(&rep))
}

#[derive(Serialize)]
struct FamilyOutput {
    family: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<StateFile>,
    saturation: Option<SaturationReport>,
    report: UncertaintyReport,
}

fn two_n_of(n: f64, j: TwoJ) -> Result<i32, Error> {
    let two_n = 2.0 * n;
    let tj = j.two_j() as f64;
    if (two_n - two_n.round()).abs() > 1e-12 || two_n.abs() > tj || (two_n.round() + tj) as i64 % 2 != 0 {
        return Err(Error::Parse(format!("--n {n} is not a magnetic number of j = {}", j.j())));
    }
    Ok(two_n.round() as i32)
}

fn cmd_family(cli: &Cli, a: &FamilyArgs) -> CliResult {
    let j = TwoJ::new(a.two_j)?;
    let ops = SpinOps::new(j);
    let rotation = match &a.frame {
        Some(f) => frame_rotation(&ops, &parse_frame(f)?)?,
        None => CMat::identity(j.dim()),
    };
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Failure::Input(format!("{flag} is required")));
    let no_frame = |kind: &str| -> CliResult {
        if a.frame.is_some() {
            return Err(Failure::Input(format!("--frame does not apply to `{kind}`")));
        }
        Ok(())
    };

    let (family, file, state) = match a.kind {
        FamilyKind::Ginibre => {
            no_frame("ginibre")?;
            let state = ginibre_state(j, &mut seeded(a.seed));
            let file = StateFile::from_density(&state);
            let rep = report(&state, &ops)?;
            return write_family(cli, "ginibre", file, None, rep);
        }
        FamilyKind::Lowest => {
            no_frame("lowest")?;
            let state = DensityState::dicke(j, -(a.two_j as i32))?;
            (MusFamily::LowestWeight, StateFile::from_density(&state), state)
        }
        FamilyKind::Coherent => {
            no_frame("coherent")?;
            let zeta = Complex::new(a.zeta_re, a.zeta_im);
            let pure = coherent_state(j, zeta)?;
            let fam = MusFamily::Coherent { zeta };
            let state = build_state(&fam, &ops)?;
            (fam, StateFile::from_pure(&pure), state)
        }
        FamilyKind::Gibbs => {
            let fam = MusFamily::RotatedGibbs {
                s_prime: need(a.s_prime, "--s-prime")?,
                rotation,
            };
            let state = build_state(&fam, &ops)?;
            (fam, StateFile::from_density(&state), state)
        }
        FamilyKind::Intelligent => {
            let two_n = two_n_of(need(a.n, "--n")?, j)?;
            let beta = a.beta.unwrap_or(0.0);
            let pure = crate::families::intelligent_pure(&ops, two_n, beta, &rotation)?;
            let fam = MusFamily::IntelligentPure { two_n, beta, rotation };
            let state = pure.to_density();
            (fam, StateFile::from_pure(&pure), state)
        }
    };
    let sat = verify_family_tol(&family, &ops, cli.tol)?;
    let rep = report(&state, &ops)?;
    write_family(cli, family.name(), file, Some(sat), rep)
}

fn write_family(
    cli: &Cli,
    family: &'static str,
    file: StateFile,
    saturation: Option<SaturationReport>,
    report: UncertaintyReport,
) -> CliResult {
    match &cli.out {
        Some(path) => {
            fs::write(path, to_json(&file))?;
            let summary = FamilyOutput {
                family,
                state: None,
                saturation,
                report,
            };
            print!("{}", to_json(&summary));
        }
        None => print!(
            "{}",
            to_json(&FamilyOutput {
                family,
                state: Some(file),
                saturation,
                report,
            })
        ),
    }
    Ok(())
}

fn cmd_recurrence(cli: &Cli, params: SaturationParams, two_j: u32, require: bool) -> CliResult {
    let j = TwoJ::new(two_j)?;
    let outcome = solve_recurrence_tol(j, &params, cli.tol)?;
    emit(&cli.out, &to_json(&outcome))?;
    if require && !outcome.consistent {
        return Err(Failure::Inconsistent(format!(
            "worst residual {:e} exceeds {:e}",
            outcome.worst_residual, outcome.tolerance
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ScanCsvRow {
    s: f64,
    t: f64,
    u: f64,
    v: f64,
    consistent: bool,
    worst_residual: f64,
    gap: Option<f64>,
}

fn cmd_scan(cli: &Cli, two_j: u32, grid: Option<&str>, jobs: usize) -> CliResult {
    let j = TwoJ::new(two_j)?;
    let grid = match grid {
        Some(g) => parse_grid(g)?,
        None => ParamGrid::default(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Input(format!("worker pool: {e}")))?;
    let rows = pool.install(|| proposition1_scan_tol(j, &grid, cli.tol))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(ScanCsvRow {
            s: r.s,
            t: r.t,
            u: r.u,
            v: r.v,
            consistent: r.consistent,
            worst_residual: r.worst_residual,
            gap: r.gap,
        })?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Input(format!("csv: {e}")))?;
    emit(&cli.out, &String::from_utf8(bytes).expect("csv is utf-8"))?;
    let bad = rows.iter().filter(|r| r.contradicts_proposition()).count();
    if bad > 0 {
        return Err(Failure::Inconsistent(format!("{bad} consistent point(s) off both conditions")));
    }
    Ok(())
}

#[derive(Serialize)]
struct WickOutput {
    symbol: WickPoly,
    params: SaturationParams,
    residual_a: f64,
    residual_b: f64,
}

fn cmd_wick(cli: &Cli, path: &Path) -> CliResult {
    let state = StateFile::load(path)?.to_density()?;
    let ops = SpinOps::new(state.j());
    let sqrt = psd_sqrt(state.rho())?;
    let symbol = symbol_of(&sqrt, state.j())?;
    let params = match solve_saturation_params(&state, &ops) {
        Err(Error::DegenerateSkew { .. }) => fit_saturation_params(&state, &ops)?,
        other => other?,
    };
    let (residual_a, residual_b) = if params.is_special() {
        residual_special(&symbol, params.u, params.v)
    } else {
        residual_eq3_eq4(&symbol, &params)?
    };
    emit(
        &cli.out,
        &to_json(&WickOutput {
            symbol,
            params,
            residual_a,
            residual_b,
        }),
    )
}

fn limit_csv(lim: &SymbolLimit) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "orientation", "chosen", "converges", "two_j", "value_re", "value_im", "target_re", "target_im",
        "rel_error",
    ])?;
    for table in &lim.candidates {
        for r in &table.rows {
            w.write_record([
                table.orientation.label().to_string(),
                (table.orientation == lim.chosen).to_string(),
                table.converges.to_string(),
                r.two_j.to_string(),
                r.value.re.to_string(),
                r.value.im.to_string(),
                r.target.re.to_string(),
                r.target.im.to_string(),
                r.rel_error.to_string(),
            ])?;
        }
    }
    w.into_inner().map_err(|e| Failure::Input(format!("csv: {e}")))
}

fn cmd_limits(cli: &Cli, a: &LimitsArgs) -> CliResult {
    let js = parse_j_list(&a.j_list)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut verdict: Option<String> = None;
    let bytes = match a.which {
        LimitKind::Coherent => {
            w.write_record(["two_j", "fidelity", "infidelity"])?;
            for r in coherent_convergence(Complex::new(a.zeta_re, a.zeta_im), &js)? {
                w.write_record([r.two_j.to_string(), r.fidelity.to_string(), r.infidelity.to_string()])?;
            }
            w.into_inner().map_err(|e| Failure::Input(format!("csv: {e}")))?
        }
        LimitKind::Hp => {
            w.write_record(["two_j", "nmax", "error"])?;
            for j in &js {
                let e = hp_operator_error(*j, a.nmax)?;
                w.write_record([j.two_j().to_string(), a.nmax.to_string(), e.to_string()])?;
            }
            w.into_inner().map_err(|e| Failure::Input(format!("csv: {e}")))?
        }
        LimitKind::Condition1 | LimitKind::Condition2 => {
            let alpha = parse_complex(&a.alpha)?;
            let lim = if a.which == LimitKind::Condition1 {
                symbol_limit_condition1(a.s_prime, alpha, parse_complex(&a.beta_c)?, &js)?
            } else {
                symbol_limit_condition2(a.s_prime, alpha, &js)?
            };
            if !lim.chosen_table().converges {
                verdict = Some("no orientation converges within the bound".into());
            }
            limit_csv(&lim)?
        }
        LimitKind::Schwinger => {
            w.write_record(["two_j", "max_error", "integer_elements"])?;
            for j in &js {
                let r = schwinger_check(j.two_j())?;
                if r.max_error > 1e-12 || !r.integer_elements {
                    verdict = Some(format!("mismatch at 2j = {}", r.two_j));
                }
                w.write_record([r.two_j.to_string(), r.max_error.to_string(), r.integer_elements.to_string()])?;
            }
            w.into_inner().map_err(|e| Failure::Input(format!("csv: {e}")))?
        }
    };
    emit(&cli.out, &String::from_utf8(bytes).expect("csv is utf-8"))?;
    match verdict {
        Some(msg) => Err(Failure::Inconsistent(msg)),
        None => Ok(()),
    }
}
