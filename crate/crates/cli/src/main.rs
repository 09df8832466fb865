//! `ccent`: classify, convert and probe three- and four-fermion states.
//!
//! Exit codes: 0 success, 1 failed verification, 2 malformed input,
//! 3 unsupported shape, 4 reference-deficient state.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use ccent::four_eight::{self, ClosedOrbitParams};
use ccent::io::{classify_report, invariants_report, CoordinateFile, CoordinateKind, StateFile, C, VERSION};
use ccent::multilinear::{AntisymTensor, Cplx};
use ccent::perturbation::{self, Base, TriplesPerturbation};
use ccent::verify::{run_suite, Suite, DEFAULT_SEED};
use ccent::Error;
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SUPPORTED: &str = "supported cases: (3,6), (3,7), (4,8 membership only)";

#[derive(Parser)]
#[command(name = "ccent", version, about = "Entanglement classes of few-fermion states through cluster amplitudes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a state file; (4,8) states get the closed-orbit subspace test.
    Classify {
        /// State file, or `-` for stdin.
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a state file to CI or CC blocks, or a coordinate file back to a state.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative invariants and covariant spectra.
    Invariants {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the triples perturbation of the GHZ-like seven-mode states.
    Perturb {
        #[arg(long, value_enum)]
        base: BaseArg,
        /// `axis=start:stop:step` with axis one of xi, u1, u2, u3.
        #[arg(long, conflicts_with_all = ["sphere", "complex"])]
        grid: Option<String>,
        /// Radius of real points on the sphere ξ² + u·u = radius².
        #[arg(long, requires = "samples", conflicts_with = "complex")]
        sphere: Option<f64>,
        /// Half-width of complex points with parts uniform in [-w, w].
        #[arg(long, requires = "samples")]
        complex: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run acceptance checks; nonzero exit if any fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a closed-orbit (4,8) doubles state and test subspace membership.
    Orbit48 {
        /// Real parameters a..e; `f` is solved from the normalization
        /// constraint. Unset parameters are drawn at random from --seed.
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        e: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also report which sign pattern of the constraint the Fock engine supports.
        #[arg(long)]
        verdict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Ci,
    Cc,
    State,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Minus,
    Plus,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

enum Failure {
    Input(String),
    Unsupported(String),
    ReferenceDeficient(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedShape { .. } => Failure::Unsupported(format!("{e}; {SUPPORTED}")),
            Error::ReferenceDeficient { .. } => Failure::ReferenceDeficient(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify { input, tol, out } => classify(&input, tol, out),
        Command::Convert { input, to, out } => convert(&input, to, out),
        Command::Invariants { input, tol, out } => invariants(&input, tol, out),
        Command::Perturb { base, grid, sphere, complex, samples, seed, tol, format, out } => {
            perturb(base, grid, sphere, complex, samples, seed, tol, format, out)
        }
        Command::Verify { suite, seed, format, out } => verify(&suite, seed, format, out),
        Command::Orbit48 { a, b, c, d, e, seed, verdict, out } => orbit48([a, b, c, d, e], seed, verdict, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Verification => (1, None),
                Failure::Input(m) => (2, Some(m)),
                Failure::Unsupported(m) => (3, Some(m)),
                Failure::ReferenceDeficient(m) => (4, Some(m)),
            };
            if let Some(m) = msg {
                eprintln!("error: {m}");
            }
            ExitCode::from(code)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(e.to_string()))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(s)
}

fn read_state(path: &PathBuf) -> Result<AntisymTensor, Failure> {
    let f: StateFile = serde_json::from_str(&read_input(path)?).map_err(|e| Failure::Input(format!("state file: {e}")))?;
    Ok(f.to_tensor()?)
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Outcome {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Input(e.to_string())),
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn classify(input: &PathBuf, tol: f64, out: Option<PathBuf>) -> Outcome {
    check_tol(tol)?;
    let report = classify_report(&read_state(input)?, tol)?;
    write_output(&out, &json(&report))
}

fn invariants(input: &PathBuf, tol: f64, out: Option<PathBuf>) -> Outcome {
    check_tol(tol)?;
    let report = invariants_report(&read_state(input)?, tol)?;
    write_output(&out, &json(&report))
}

fn check_tol(tol: f64) -> Outcome {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::Input(format!("tolerance must be positive and finite, got {tol}")))
    }
}

/// Accepts a state file for `--to ci|cc` and a coordinate file for `--to state`.
fn convert(input: &PathBuf, to: Target, out: Option<PathBuf>) -> Outcome {
    let text = read_input(input)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::Input(e.to_string()))?;
    let tensor = if value.get("kind").is_some() {
        let f: CoordinateFile =
            serde_json::from_value(value).map_err(|e| Failure::Input(format!("coordinate file: {e}")))?;
        f.to_tensor()?
    } else {
        let f: StateFile = serde_json::from_value(value).map_err(|e| Failure::Input(format!("state file: {e}")))?;
        f.to_tensor()?
    };
    let doc = match to {
        Target::State => json(&StateFile::from_tensor(&tensor)),
        Target::Ci => json(&CoordinateFile::from_tensor(&tensor, CoordinateKind::Ci)?),
        Target::Cc => json(&CoordinateFile::from_tensor(&tensor, CoordinateKind::Cc)?),
    };
    write_output(&out, &doc)
}

fn parse_grid(spec: &str) -> Result<Vec<TriplesPerturbation>, Failure> {
    let bad = || Failure::Input(format!("bad grid spec '{spec}'; expected axis=start:stop:step with axis in xi, u1, u2, u3"));
    let (axis, range) = spec.split_once('=').ok_or_else(bad)?;
    let axis = match axis.trim() {
        "xi" => 0,
        "u1" => 1,
        "u2" => 2,
        "u3" => 3,
        _ => return Err(bad()),
    };
    let parts: Vec<f64> = range.split(':').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let [start, stop, step] = parts[..] else { return Err(bad()) };
    if !(start.is_finite() && stop.is_finite() && step.is_finite() && step > 0.0) || (stop - start) / step > 1e6 {
        return Err(bad());
    }
    Ok(perturbation::ray(axis, start, stop, step))
}

#[allow(clippy::too_many_arguments)]
fn perturb(
    base: BaseArg,
    grid: Option<String>,
    sphere: Option<f64>,
    complex: Option<f64>,
    samples: Option<usize>,
    seed: u64,
    tol: f64,
    format: Format,
    out: Option<PathBuf>,
) -> Outcome {
    check_tol(tol)?;
    let base = match base {
        BaseArg::Minus => Base::Minus,
        BaseArg::Plus => Base::Plus,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = match (grid, sphere, complex, samples) {
        (Some(g), _, _, _) => parse_grid(&g)?,
        (None, Some(q), None, Some(k)) if q.is_finite() && q >= 0.0 => perturbation::sample_sphere(&mut rng, q, k),
        (None, None, Some(w), Some(k)) if w.is_finite() && w > 0.0 => perturbation::sample_complex(&mut rng, w, k),
        _ => return Err(Failure::Input("give --grid, or --sphere/--complex with --samples".into())),
    };
    let records = perturbation::sweep(base, &points, tol)?;
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            perturbation::write_csv(&mut buf, &records).map_err(|e| Failure::Input(e.to_string()))?;
            write_output(&out, &String::from_utf8(buf).expect("csv is utf-8"))
        }
        Format::Json => write_output(&out, &json(&records)),
        Format::Text => Err(Failure::Input("perturb writes csv or json".into())),
    }
}

fn verify(suite: &str, seed: u64, format: Format, out: Option<PathBuf>) -> Outcome {
    let suite: Suite = suite.parse().map_err(Failure::Input)?;
    let results = run_suite(suite, seed);
    let text = match format {
        Format::Json => json(&results),
        Format::Text => results.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"),
        Format::Csv => return Err(Failure::Input("verify writes text or json".into())),
    };
    write_output(&out, &text)?;
    if results.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[derive(serde::Serialize)]
struct Orbit48Output {
    version: &'static str,
    seed: u64,
    params: [C; 6],
    constraint: &'static str,
    subspace_residual: f64,
    coords: [C; 7],
    predicted_coords: [C; 7],
    state: StateFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<four_eight::ConstraintVerdict>,
}

fn orbit48(given: [Option<f64>; 5], seed: u64, verdict: bool, out: Option<PathBuf>) -> Outcome {
    if given.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Failure::Input("parameters must be finite".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drawn = ClosedOrbitParams::random(&mut rng, 1.0);
    let pick = |k: usize| given[k].map(|x| Cplx::new(x, 0.0)).unwrap_or(drawn[k]);
    let p = ClosedOrbitParams::on_orbit(pick(0), pick(1), pick(2), pick(3), pick(4));
    let state = four_eight::t2_state_48(&p.amplitudes());
    let m = four_eight::subspace_membership(&state)?;
    let doc = Orbit48Output {
        version: VERSION,
        seed,
        params: [p.a, p.b, p.c, p.d, p.e, p.f].map(C::from),
        constraint: four_eight::CONSTRAINT_ORACLE,
        subspace_residual: m.residual,
        coords: m.coords.map(C::from),
        predicted_coords: p.predicted_coords().map(C::from),
        state: StateFile::from_tensor(&state),
        verdict: if verdict { Some(four_eight::constraint_verdict(seed, 50)?) } else { None },
    };
    write_output(&out, &json(&doc))
}
