//! `hklat`: lattice-level numerics for rational Lagrangian fibrations on Hilbert
//! schemes of points of K3 surfaces.
//!
//! Exit status: 0 success, 1 mathematical non-existence, 2 usage error.

mod config;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hklat_core::report::{self, BFieldSpec, ScenarioRequest};
use hklat_core::{brill_noether, fm, hilbert, lattice, serial, Error};
use num_bigint::BigInt;
use serde_json::{json, Value};

use config::FileConfig;

#[derive(Parser, Debug)]
#[command(name = "hklat", version, about = "Lagrangian fibration numerics on Hilbert schemes of K3 surfaces")]
struct Cli {
    /// Output format [default: json]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// TOML file supplying defaults for any flag
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Default, Clone)]
struct BArgs {
    /// Denominator of the B-field [default: m]
    #[arg(long)]
    b_denominator: Option<String>,
    /// Comma-separated numerator of B in the basis {P, T} [default: 0,1]
    #[arg(long, allow_hyphen_values = true)]
    b_direction: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report for the degree-(2d-2)m^2 scenario
    Scenario {
        /// Number of points on the K3 surface
        #[arg(long)]
        d: Option<u64>,
        /// Scale of the polarization, m >= 2
        #[arg(long)]
        m: Option<u64>,
        /// K3 degree n; m is then solved from k^2 n = (2d-2) m^2
        #[arg(long)]
        degree: Option<u64>,
        /// Also replay the rank-2 lattice-polarized scenario
        #[arg(long)]
        polar2: bool,
        #[command(flatten)]
        b: BArgs,
    },
    /// Primitive isotropic classes a h + b e on X^[d] for a generic K3 of degree n
    Isotropic {
        #[arg(long, visible_alias = "n")]
        degree: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
    },
    /// Reflection in the square-2 class f_2d - e of the rank-2 scenario
    Reflect {
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        /// Coordinates (f_2d, f_2d-2, e) of the class to reflect [default: 0,1,-1]
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
    },
    /// Brill-Noether numbers: the scenario certificate, or a single rho(g, r, c)
    Bn {
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// Twisted algebraic lattice for B on Z P + Z T
    Twisted {
        #[arg(long)]
        m: Option<u64>,
        /// P^2 [default: 2]
        #[arg(long)]
        degree: Option<u64>,
        #[command(flatten)]
        b: BArgs,
    },
    /// Lattice-level data of the twisted Fourier-Mukai transform
    Fm {
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Run the oracle suite
    Selftest {
        #[arg(long)]
        grid_max: Option<u64>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

enum Failure {
    NonExistence(String),
    Usage(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::NonExistence(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::NonExistence(s) | Failure::Usage(s) => s,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoIsotropicClass => Failure::NonExistence(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CmdResult = Result<Output, Failure>;

enum Output {
    Document(Value),
    Selftest(Vec<selftest::Outcome>),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(Failure::Usage)?,
        None => FileConfig::default(),
    };
    let format = match (cli.format, file.format.as_deref()) {
        (Some(f), _) => f,
        (None, None) | (None, Some("json")) => Format::Json,
        (None, Some("text")) => Format::Text,
        (None, Some(other)) => return Err(Failure::Usage(format!("unknown format {other:?} in config"))),
    };
    match dispatch(cli.command, &file)? {
        Output::Document(doc) => {
            print!("{}", render(&doc, format));
            Ok(0)
        }
        Output::Selftest(outcomes) => {
            let all = outcomes.iter().all(|o| o.passed);
            let doc = report::document(
                "selftest",
                json!({
                    "checks": outcomes.iter().map(|o| json!({
                        "name": o.name, "pass": o.passed, "detail": o.detail, "millis": o.millis.to_string(),
                    })).collect::<Vec<_>>(),
                    "pass": all,
                }),
            );
            match format {
                Format::Json => print!("{}", render(&doc, format)),
                Format::Text => {
                    for o in &outcomes {
                        println!("{} {} ({} ms): {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.millis, o.detail);
                    }
                    println!("{}/{} checks passed", outcomes.iter().filter(|o| o.passed).count(), outcomes.len());
                }
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("documents serialize") + "\n",
        Format::Text => report::render_text(doc),
    }
}

fn required(name: &str, cli: Option<u64>, file: Option<u64>) -> Result<u64, Failure> {
    cli.or(file).ok_or_else(|| Failure::Usage(format!("--{name} is required")))
}

fn parse_bigint(name: &str, s: &str) -> Result<BigInt, Failure> {
    serial::parse_int(s).map_err(|e| Failure::Usage(format!("--{name}: {e}")))
}

fn parse_list(name: &str, s: &str) -> Result<Vec<BigInt>, Failure> {
    s.split(',').map(|x| parse_bigint(name, x)).collect()
}

fn b_spec(b: BArgs, file: &FileConfig, m: u64) -> Result<BFieldSpec, Failure> {
    let mut spec = BFieldSpec::transcendental(m);
    if let Some(den) = b.b_denominator.or_else(|| file.b_denominator.clone()) {
        spec.denominator = parse_bigint("b-denominator", &den)?;
    }
    if let Some(dir) = b.b_direction.or_else(|| file.b_direction.clone()) {
        spec.direction = parse_list("b-direction", &dir)?;
    }
    if spec.direction.len() != 2 {
        return Err(Failure::Usage("--b-direction needs two entries (P, T)".into()));
    }
    if spec.denominator == BigInt::from(0) {
        return Err(Failure::Usage("--b-denominator must be nonzero".into()));
    }
    Ok(spec)
}

fn check_m(d: u64, m: u64) -> Result<(), Failure> {
    if m < 2 {
        return Err(Failure::Usage(format!(
            "m >= 2 is required for the twisted construction; for m = 1 the fibration class on X^[{d}] is h - e (see `hklat isotropic --degree {} --d {d}`)",
            2 * d.saturating_sub(1)
        )));
    }
    Ok(())
}

fn dispatch(cmd: Command, file: &FileConfig) -> CmdResult {
    match cmd {
        Command::Scenario { d, m, degree, polar2, b } => {
            let d = required("d", d, file.d)?;
            let m = match (m, degree, file.m, file.degree) {
                (Some(_), Some(_), _, _) => return Err(Failure::Usage("give either --m or --degree, not both".into())),
                (Some(m), None, _, _) => m,
                (None, Some(n), _, _) => scenario_m_from_degree(n, d)?,
                (None, None, Some(m), _) => m,
                (None, None, None, Some(n)) => scenario_m_from_degree(n, d)?,
                (None, None, None, None) => return Err(Failure::Usage("--m or --degree is required".into())),
            };
            check_m(d, m)?;
            let b_field = Some(b_spec(b, file, m)?);
            let req = ScenarioRequest { d, m, polar2: polar2 || file.polar2.unwrap_or(false), b_field };
            Ok(Output::Document(report::scenario_document(&req)?))
        }
        Command::Isotropic { degree, d } => {
            let n = required("degree", degree, file.degree)?;
            let d = required("d", d, file.d)?;
            let witness = hilbert::isotropic_exists(n, d)?;
            let sols = hilbert::primitive_isotropic_classes(n, d)?;
            let doc = report::document("isotropic", report::isotropic_json(n, d, witness, &sols));
            if witness.is_none() {
                print!("{}", render(&doc, Format::Json));
                return Err(Failure::NonExistence(Error::NoIsotropicClass.to_string()));
            }
            Ok(Output::Document(doc))
        }
        Command::Reflect { d, m, class } => {
            let d = required("d", d, file.d)?;
            let m = required("m", m, file.m)?;
            check_m(d, m)?;
            let p = hilbert::polar2_scenario(d, m)?;
            let coords = match class {
                Some(s) => parse_list("class", &s)?,
                None => p.source.coords().to_vec(),
            };
            let x = lattice::LatticeVector::new(p.bb.full(), coords)?;
            let y = lattice::reflect(&p.root, &x)?;
            let mut body = report::polar2_json(&p);
            body["input"] = json!({ "class": x.to_string(), "square": serial::int_string(&x.square()) });
            body["image"] = json!({ "class": y.to_string(), "square": serial::int_string(&y.square()) });
            Ok(Output::Document(report::document("reflect", body)))
        }
        Command::Bn { d, m, g, r, c } => {
            if let (Some(g), Some(r), Some(c)) = (&g, &r, &c) {
                let (g, r, c) = (parse_bigint("g", g)?, parse_bigint("r", r)?, parse_bigint("c", c)?);
                let rho = brill_noether::bn_number(&g, &r, &c)?;
                let body = json!({
                    "g": serial::int_string(&g), "r": serial::int_string(&r), "c": serial::int_string(&c),
                    "rho": serial::int_string(&rho),
                });
                return Ok(Output::Document(report::document("bn", body)));
            }
            if g.is_some() || r.is_some() || c.is_some() {
                return Err(Failure::Usage("--g, --r and --c must be given together".into()));
            }
            let d = required("d", d, file.d)?;
            let m = required("m", m, file.m)?;
            check_m(d, m)?;
            let cert = brill_noether::certify_serre(d, m)?;
            let chi = brill_noether::serre_euler_characteristics(d, m)?;
            Ok(Output::Document(report::document("bn", report::serre_json(&cert, &chi))))
        }
        Command::Twisted { m, degree, b } => {
            let m = required("m", m, file.m)?;
            if m == 0 {
                return Err(Failure::Usage("--m must be positive".into()));
            }
            let p2 = degree.or(file.degree).unwrap_or(2);
            let spec = b_spec(b, file, m)?;
            Ok(Output::Document(report::document("twisted", report::twisted_json(&BigInt::from(p2), &spec)?)))
        }
        Command::Fm { d, m } => {
            let d = required("d", d, file.d)?;
            let m = required("m", m, file.m)?;
            check_m(d, m)?;
            let r = fm::replay_theorem(d, m)?;
            Ok(Output::Document(report::document("fm", report::fm_json(&r))))
        }
        Command::Selftest { grid_max, inject_fault } => {
            let grid_max = grid_max.or(file.grid_max).unwrap_or(12);
            if grid_max < 2 {
                return Err(Failure::Usage("--grid-max must be at least 2".into()));
            }
            Ok(Output::Selftest(selftest::run(&selftest::Options { grid_max, inject_fault })))
        }
    }
}

/// Resolves `m` for `scenario --degree n --d d`. Only degrees of the form
/// `(2d−2)m²` (witness `k = 1`) belong to the scenario family.
fn scenario_m_from_degree(n: u64, d: u64) -> Result<u64, Failure> {
    match hilbert::isotropic_exists(n, d)? {
        None => Err(Failure::NonExistence(Error::NoIsotropicClass.to_string())),
        Some(w) if w.k == 1 => Ok(w.m),
        Some(w) => Err(Failure::NonExistence(format!(
            "degree {n} is not of the form (2d-2)m^2 for d = {d}; the isotropic classes are {}h ± {}e (see `hklat isotropic`)",
            w.k, w.m
        ))),
    }
}
