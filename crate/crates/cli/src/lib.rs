//! Command-line front end: one subcommand per construction, canonical text
//! formats in and out, deterministic output.
//!
//! Exit codes: 0 success, 1 a check subcommand's predicate is false,
//! 2 usage or input format errors, 3 numeric or precondition failures.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dsiep::matrix::{format_float, FloatMatrix, RatMatrix};
use dsiep::orthogonal::{sum_deviation, target_coefficients, OrthoBasis};
use dsiep::poly::{charpoly_f64, coeff_residual};
use dsiep::rational::{self, Rational};
use dsiep::{balance, nearness, rado, report, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FALSE: i32 = 1;
pub const EXIT_FORMAT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisKind {
    Canonical,
    Random,
}

#[derive(Debug, Parser)]
#[command(name = "dsiep", version, about = "Spectrum-preserving constructions for stochastic and doubly stochastic matrices")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write output here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// Arithmetic mode; float-only subcommands reject `exact`.
    #[arg(long, value_enum, global = true)]
    pub mode: Option<Mode>,

    /// Seed for `--basis random`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Most specific stochasticity class and its row sum.
    Classify { matrix: PathBuf },
    /// Column sums and column minima.
    Colstats { matrix: PathBuf },
    /// Characteristic polynomial coefficients, lowest degree first.
    Charpoly { matrix: PathBuf },
    /// Whether two matrices share a characteristic polynomial (exit 1 if not).
    Cospectral { a: PathBuf, b: PathBuf },
    /// Whether the unit left and right eigenspaces are non-orthogonal (exit 1 if not).
    Check41 { matrix: PathBuf },
    /// A + eps·J_n for constant row sums.
    Shift {
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        matrix: PathBuf,
    },
    /// A + XC for eigenvector block X and coefficient block C.
    Rado {
        matrix: PathBuf,
        /// n×r matrix whose columns are eigenvectors of A.
        #[arg(long)]
        x: PathBuf,
        /// r×n coefficient matrix.
        #[arg(long)]
        c: PathBuf,
        /// Eigenvalues of the columns of X; inferred when omitted.
        #[arg(long, num_args = 1.., allow_hyphen_values = true)]
        lambda: Option<Vec<String>>,
    },
    /// Least offset y_m and least Perron shift for column balancing.
    Threshold { matrix: PathBuf },
    /// Column-balanced matrix with Perron value r + eps.
    Balance {
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        matrix: PathBuf,
    },
    /// Full report for the least balanced matrix.
    BalanceMin { matrix: PathBuf },
    /// Balanced matrix with all row and column sums n·r.
    T33 { matrix: PathBuf },
    /// Column slack condition x_j <= 1 + n·a_j (exit 1 if it fails).
    Check4 { matrix: PathBuf },
    /// Doubly stochastic matrix cospectral to a stochastic matrix.
    CospectralDs { matrix: PathBuf },
    /// Frobenius-nearest matrix with all row and column sums 1.
    Nearest {
        matrix: PathBuf,
        /// Also print the squared Frobenius distance.
        #[arg(long)]
        distance: bool,
    },
    /// U(1 ⊕ X)Uᵀ for an (n-1)×(n-1) block X.
    Embed {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = BasisKind::Canonical)]
        basis: BasisKind,
    },
    /// Trailing block of UᵀAU for A with unit row and column sums.
    Extract {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = BasisKind::Canonical)]
        basis: BasisKind,
    },
    /// Nonnegative realization of (1 + k; λ_2, …, λ_n) with a JSON report.
    Realize {
        spectrum: PathBuf,
        #[arg(long, value_enum, default_value_t = BasisKind::Canonical)]
        basis: BasisKind,
    },
    /// Unit-sum realization of (1; λ_2, …, λ_n).
    RealizeCospectral {
        spectrum: PathBuf,
        #[arg(long, value_enum, default_value_t = BasisKind::Canonical)]
        basis: BasisKind,
    },
    /// Diagonal similarity by the Perron vector: constant row sums r.
    Normalize { matrix: PathBuf },
}

#[derive(Debug)]
pub enum CliError {
    Format(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Format(_) => EXIT_FORMAT,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_format_error() {
            CliError::Format(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// What a subcommand produced: text and JSON renderings plus exit code.
struct Output {
    text: String,
    json: Value,
    code: i32,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            code: EXIT_OK,
        }
    }

    fn check(holds: bool, text: String, json: Value) -> Self {
        Output {
            text,
            json,
            code: if holds { EXIT_OK } else { EXIT_CHECK_FALSE },
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: dsiep::Result<T>) -> CliResult<T> {
    r.map_err(|e| match CliError::from(e) {
        CliError::Format(m) => CliError::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load(path: &Path) -> CliResult<RatMatrix> {
    with_path(path, dsiep::parse_matrix(&read(path)?))
}

fn load_float(path: &Path) -> CliResult<FloatMatrix> {
    with_path(path, dsiep::parse_float_matrix(&read(path)?))
}

fn load_spectrum(path: &Path) -> CliResult<dsiep::SpectrumList> {
    with_path(path, dsiep::parse_spectrum(&read(path)?))
}

fn scalar(token: &str) -> CliResult<Rational> {
    rational::parse(token).map_err(|_| CliError::Format(format!("malformed number `{token}`")))
}

fn matrix_output(m: &RatMatrix) -> Output {
    Output::new(dsiep::format_matrix(m), report::matrix_json(m))
}

fn float_output(m: &FloatMatrix) -> Output {
    Output::new(dsiep::format_float_matrix(m), report::float_matrix_json(m))
}

fn basis_for(kind: BasisKind, n: usize, seed: u64) -> CliResult<OrthoBasis> {
    Ok(match kind {
        BasisKind::Canonical => OrthoBasis::canonical(n)?,
        BasisKind::Random => OrthoBasis::random(n, seed)?,
    })
}

fn is_float_only(cmd: &Command) -> bool {
    matches!(
        cmd,
        Command::Embed { .. }
            | Command::Extract { .. }
            | Command::Realize { .. }
            | Command::RealizeCospectral { .. }
            | Command::Normalize { .. }
    )
}

fn supports_float(cmd: &Command) -> bool {
    is_float_only(cmd) || matches!(cmd, Command::Charpoly { .. } | Command::Nearest { .. })
}

fn warn_dominance(s: &dsiep::SpectrumList) {
    let bad = s.dominance_violations();
    if !bad.is_empty() {
        let list: Vec<String> = bad.iter().map(|k| (k + 1).to_string()).collect();
        eprintln!("warning: Perron entry does not dominate entries {}", list.join(", "));
    }
}

fn execute(cli: &Cli) -> CliResult<Output> {
    let mode = cli.mode.unwrap_or(if is_float_only(&cli.command) { Mode::Float } else { Mode::Exact });
    if mode == Mode::Exact && is_float_only(&cli.command) {
        return Err(CliError::Format("this subcommand is float-only; --mode exact is not allowed".into()));
    }
    if mode == Mode::Float && !supports_float(&cli.command) {
        return Err(CliError::Format("this subcommand is exact-only; --mode float is not allowed".into()));
    }

    Ok(match &cli.command {
        Command::Classify { matrix } => {
            let c = dsiep::classify(&load(matrix)?)?;
            Output::new(
                format!("{c}\n"),
                json!({ "tag": c.tag.name(), "r": c.r.as_ref().map(report::rational_json) }),
            )
        }
        Command::Colstats { matrix } => {
            let s = dsiep::column_stats(&load(matrix)?)?;
            Output::new(
                format!("x={}\na={}\n", report::rationals_text(&s.sums), report::rationals_text(&s.minima)),
                json!({ "x": report::rationals_json(&s.sums), "a": report::rationals_json(&s.minima) }),
            )
        }
        Command::Charpoly { matrix } => match mode {
            Mode::Exact => {
                let p = dsiep::charpoly(&load(matrix)?)?;
                Output::new(format!("{p}\n"), json!({ "coefficients": report::rationals_json(p.coeffs()) }))
            }
            Mode::Float => {
                let p = charpoly_f64(&load_float(matrix)?)?;
                let text: Vec<String> = p.iter().map(|c| format_float(*c)).collect();
                Output::new(format!("{}\n", text.join(" ")), json!({ "coefficients": p }))
            }
        },
        Command::Cospectral { a, b } => {
            let same = dsiep::cospectral(&load(a)?, &load(b)?)?;
            Output::check(same, format!("{same}\n"), json!({ "cospectral": same }))
        }
        Command::Check41 { matrix } => {
            let holds = dsiep::unit_eigenspaces_nonorthogonal(&load(matrix)?)?;
            Output::check(holds, format!("{holds}\n"), json!({ "nonorthogonal": holds }))
        }
        Command::Shift { eps, matrix } => matrix_output(&rado::shift(&load(matrix)?, &scalar(eps)?)?),
        Command::Rado { matrix, x, c, lambda } => {
            let a = load(matrix)?;
            let xm = load(x)?;
            let cm = load(c)?;
            let lambda = match lambda {
                Some(tokens) => tokens.iter().map(|t| scalar(t)).collect::<CliResult<Vec<_>>>()?,
                None => rado::infer_eigenvalues(&a, &xm)?,
            };
            let u = dsiep::RadoUpdate::new(&a, xm, cm, lambda)?;
            matrix_output(&rado::rado_update(&a, &u)?)
        }
        Command::Threshold { matrix } => {
            let a = load(matrix)?;
            let y = balance::y_threshold(&a)?;
            let e = balance::epsilon_threshold(&a)?;
            Output::new(
                format!("y_threshold={}\nepsilon_threshold={}\n", rational::format(&y), rational::format(&e)),
                json!({ "y_threshold": report::rational_json(&y), "epsilon_threshold": report::rational_json(&e) }),
            )
        }
        Command::Balance { eps, matrix } => matrix_output(&balance::balance(&load(matrix)?, &scalar(eps)?)?),
        Command::BalanceMin { matrix } => {
            let rep = balance::balance_minimal(&load(matrix)?)?;
            Output::new(rep.to_text(), rep.to_json())
        }
        Command::T33 { matrix } => matrix_output(&balance::balance_to_order_multiple(&load(matrix)?)?),
        Command::Check4 { matrix } => {
            let rep = nearness::column_slack_condition(&load(matrix)?)?;
            Output::check(rep.holds, rep.to_text(), rep.to_json())
        }
        Command::CospectralDs { matrix } => match nearness::cospectral_ds(&load(matrix)?) {
            Ok(b) => matrix_output(&b),
            Err(Error::SlackConditionFails(rep)) => {
                eprint!("{}", rep.to_text());
                return Err(CliError::Numeric(Error::SlackConditionFails(rep).to_string()));
            }
            Err(e) => return Err(e.into()),
        },
        Command::Nearest { matrix, distance } => match mode {
            Mode::Exact => {
                let a = load(matrix)?;
                let b = nearness::nearest_ds(&a)?;
                let mut out = matrix_output(&b);
                if *distance {
                    let d = dsiep::frobenius_distance(&a, &b)?;
                    out.text.push_str(&format!("distance_sq={}\n", rational::format(&d)));
                    out.json = json!({ "matrix": out.json, "distance_sq": report::rational_json(&d) });
                }
                out
            }
            Mode::Float => {
                let a = load_float(matrix)?;
                let b = nearness::nearest_ds(&a.to_exact()?)?.to_float();
                let mut out = float_output(&b);
                if *distance {
                    let d: f64 = a.entries().iter().zip(b.entries()).map(|(p, q)| (p - q) * (p - q)).sum();
                    out.text.push_str(&format!("distance_sq={}\n", format_float(d)));
                    out.json = json!({ "matrix": out.json, "distance_sq": d });
                }
                out
            }
        },
        Command::Embed { matrix, basis } => {
            let x = load_float(matrix)?;
            let u = basis_for(*basis, x.rows() + 1, cli.seed)?;
            float_output(&dsiep::embed(&u, &x)?)
        }
        Command::Extract { matrix, basis } => {
            let a = load_float(matrix)?;
            let u = basis_for(*basis, a.rows(), cli.seed)?;
            float_output(&dsiep::extract(&u, &a)?)
        }
        Command::RealizeCospectral { spectrum, basis } => {
            let s = load_spectrum(spectrum)?;
            warn_dominance(&s);
            let u = basis_for(*basis, s.len(), cli.seed)?;
            let b = dsiep::realize_cospectral(&s, &u)?;
            let residual = coeff_residual(&charpoly_f64(&b)?, &target_coefficients(&s)?);
            let mut out = float_output(&b);
            out.json = json!({
                "matrix": out.json,
                "row_sum": 1.0,
                "sum_deviation": sum_deviation(&b, 1.0),
                "charpoly_residual": residual,
            });
            out
        }
        Command::Realize { spectrum, basis } => {
            let s = load_spectrum(spectrum)?;
            warn_dominance(&s);
            let u = basis_for(*basis, s.len(), cli.seed)?;
            let r = dsiep::realize_nonneg(&s, &u)?;
            let summary = json!({
                "k": r.k,
                "entry_shift": r.entry_shift,
                "row_sum": r.row_sum(),
                "charpoly_residual": r.charpoly_residual,
            });
            let text = format!("{}{}\n", dsiep::format_float_matrix(&r.matrix), summary);
            let mut full = summary;
            full["matrix"] = report::float_matrix_json(&r.matrix);
            Output::new(text, full)
        }
        Command::Normalize { matrix } => {
            let (b, r) = dsiep::normalize_to_stochastic(&load_float(matrix)?)?;
            Output::new(
                format!("{}r={}\n", dsiep::format_float_matrix(&b), format_float(r)),
                json!({ "matrix": report::float_matrix_json(&b), "r": r }),
            )
        }
    })
}

fn emit(cli: &Cli, out: &Output) -> CliResult<()> {
    let body = if cli.json {
        format!("{}\n", out.json)
    } else {
        out.text.clone()
    };
    match &cli.output {
        Some(path) => fs::write(path, body)
            .map_err(|e| CliError::Format(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Format(e.to_string()))
        }
    }
}

/// Parses `argv` (including the program name) and runs one subcommand,
/// returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FORMAT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli).and_then(|out| emit(&cli, &out).map(|_| out.code)) {
        Ok(code) => code,
        Err(e) => {
            match &e {
                CliError::Format(m) => eprintln!("error: {m}"),
                CliError::Numeric(m) => eprintln!("error: {m}"),
            }
            e.code()
        }
    }
}
