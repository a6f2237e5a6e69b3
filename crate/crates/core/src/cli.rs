//! Command-line front end for the `ti` binary.
//!
//! Trajectory strings are written X outcomes first, then Z outcomes, each in
//! stabiliser order: for d = 2, `1001` means X = (1, 0), Z = (0, 1).
//!
//! Exit codes: 0 success, 1 computational failure, 2 usage error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::amplitude::InjectionState;
use crate::bitkit::BitWord;
use crate::catalog::{self, ChiSpec};
use crate::coset::{enumerate_coset, Trajectory};
use crate::error::Error;
use crate::lattice::{build_layout, CodeLayout, LayoutJson};
use crate::oracle::{cross_check, Deviation};
use crate::projector::{evaluate_result, Engine, Projector};

#[derive(Parser, Debug)]
#[command(name = "ti", version, about = "Logical states produced by transversal injection on unrotated surface codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the code layout as JSON.
    Layout {
        #[arg(long)]
        distance: usize,
    },
    /// List the data-qubit strings consistent with a Z-outcome string (d <= 3).
    Coset {
        #[arg(long)]
        distance: usize,
        #[arg(long)]
        z_outcomes: String,
    },
    /// Logical state and probability of one trajectory.
    State(StateArgs),
    /// Tabulate a family of trajectories.
    Enumerate(EnumerateArgs),
    /// Compare the algebraic engine against the statevector oracle.
    OracleCheck(OracleCheckArgs),
}

#[derive(Args, Debug, Default, Clone)]
pub struct ChiArgs {
    /// Polar angle of the injection state, radians.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Azimuthal angle, radians (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_im: Option<f64>,
}

impl ChiArgs {
    /// `None` when no injection state was given.
    pub fn spec(&self) -> Result<Option<ChiSpec>, String> {
        let angles = self.theta.is_some() || self.phi.is_some();
        let amps = [self.alpha_re, self.alpha_im, self.beta_re, self.beta_im]
            .iter()
            .any(Option::is_some);
        match (angles, amps) {
            (true, true) => Err("give the injection state either as --theta/--phi or as complex amplitudes, not both".into()),
            (true, false) => {
                let theta = self.theta.ok_or("--phi requires --theta")?;
                Ok(Some(ChiSpec::Angles { theta, phi: self.phi.unwrap_or(0.0) }))
            }
            (false, true) => {
                let c = |re: Option<f64>, im: Option<f64>| Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0));
                let spec = ChiSpec::Amplitudes {
                    alpha: c(self.alpha_re, self.alpha_im),
                    beta: c(self.beta_re, self.beta_im),
                };
                // normalise once so the echoed spec matches what is computed
                let chi = spec.state().map_err(|e| e.to_string())?;
                Ok(Some(ChiSpec::Amplitudes { alpha: chi.alpha, beta: chi.beta }))
            }
            (false, false) => Ok(None),
        }
    }
}

#[derive(Args, Debug)]
pub struct StateArgs {
    #[arg(long)]
    pub distance: usize,
    /// X outcomes then Z outcomes, e.g. `1001` at d = 2.
    #[arg(long)]
    pub trajectory: String,
    #[command(flatten)]
    pub chi: ChiArgs,
    #[arg(long, default_value = "solver")]
    pub engine: Engine,
    /// Include the amplitudes as readable polynomials in alpha (a) and beta (b).
    #[arg(long)]
    pub symbolic: bool,
    /// Fail (exit 1) if the trajectory has zero probability.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, env = "TI_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub distance: usize,
    /// Only trajectories with trivial X outcomes (default).
    #[arg(long, conflicts_with_all = ["all", "sample"])]
    pub trivial_x: bool,
    /// Every trajectory (d <= 3).
    #[arg(long, conflicts_with = "sample")]
    pub all: bool,
    /// Draw this many distinct trivial-X trajectories uniformly (d <= 6).
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub chi: ChiArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Print distribution statistics instead of the catalog.
    #[arg(long)]
    pub stats: bool,
    #[arg(long, env = "TI_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Args, Debug)]
pub struct OracleCheckArgs {
    #[arg(long)]
    pub distance: usize,
    /// `all` or `random:<n>`.
    #[arg(long, default_value = "all")]
    pub trajectories: String,
    /// `random:<m>`.
    #[arg(long, default_value = "random:20")]
    pub chis: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "solver")]
    pub engine: Engine,
    #[arg(long, env = "TI_WORKERS")]
    pub workers: Option<usize>,
}

/// Tolerance used by `oracle-check`.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DistanceTooSmall(_)
            | Error::DistanceTooLarge(_)
            | Error::Bits(_)
            | Error::LengthMismatch { .. }
            | Error::NotNormalisable(_)
            | Error::TooLargeFor { .. }
            | Error::OracleTooLarge { .. } => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, Failure> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Failure::Usage("--workers must be at least 1".into())),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Failure::Compute(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> CmdResult {
    match cli.command {
        Command::Layout { distance } => {
            let layout = build_layout(distance)?;
            emit(out, &LayoutJson::from(&layout))
        }
        Command::Coset { distance, z_outcomes } => coset_cmd(distance, &z_outcomes, out),
        Command::State(args) => state_cmd(args, out),
        Command::Enumerate(args) => enumerate_cmd(args, out),
        Command::OracleCheck(args) => oracle_cmd(args, out),
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> CmdResult {
    serde_json::to_writer(&mut *out, value).map_err(|e| Failure::Compute(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}

fn coset_cmd(distance: usize, z_outcomes: &str, out: &mut dyn Write) -> CmdResult {
    if distance > 3 {
        return Err(Error::TooLargeFor { what: "coset listing", distance, max: 3 }.into());
    }
    let layout = build_layout(distance)?;
    let z: BitWord = z_outcomes.parse().map_err(Error::from)?;
    let strings: Vec<String> = enumerate_coset(&layout, z)?.map(|c| c.to_string()).collect();
    emit(out, &json!({
        "distance": distance,
        "z_outcomes": z_outcomes,
        "count": strings.len(),
        "strings": strings,
    }))
}

fn pair_json(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn state_cmd(args: StateArgs, out: &mut dyn Write) -> CmdResult {
    let layout = build_layout(args.distance)?;
    let trajectory = Trajectory::parse(&layout, &args.trajectory)?;
    let chi_spec = args.chi.spec().map_err(Failure::Usage)?;
    let chi = chi_spec.map(|s| s.state()).transpose()?;

    let projector = Projector::new(&layout);
    let result = with_workers(args.workers, || projector.project(&trajectory, args.engine))??;

    let mut doc = json!({
        "trajectory": trajectory.to_string(),
        "A_coeffs": result.logical.a.coeffs(),
        "B_coeffs": result.logical.b.coeffs(),
        "frame": {
            "rep0": result.frame.rep0.to_string(),
            "rep1": result.frame.rep1.to_string(),
        },
    });
    if args.symbolic {
        doc["A_poly"] = json!(result.logical.a.to_string());
        doc["B_poly"] = json!(result.logical.b.to_string());
    }
    if let (Some(spec), Some(chi)) = (chi_spec, chi) {
        let (pair, probability) = evaluate_result(&result, &chi);
        if pair.is_none() && args.strict {
            return Err(Error::ZeroProbabilityTrajectory.into());
        }
        let bloch = pair.map(|(a, b)| crate::amplitude::bloch(a, b)).transpose()?;
        doc["chi"] = serde_json::to_value(spec).map_err(|e| Failure::Compute(e.to_string()))?;
        doc["alpha_L"] = json!(pair.map(|p| pair_json(p.0)));
        doc["beta_L"] = json!(pair.map(|p| pair_json(p.1)));
        doc["bloch"] = json!(bloch);
        doc["probability"] = json!(probability);
    }
    emit(out, &doc)
}

fn enumerate_cmd(args: EnumerateArgs, out: &mut dyn Write) -> CmdResult {
    let layout = build_layout(args.distance)?;
    let spec = args
        .chi
        .spec()
        .map_err(Failure::Usage)?
        .ok_or_else(|| Failure::Usage("enumerate needs an injection state (--theta/--phi or amplitudes)".into()))?;
    let chi = spec.state()?;

    let entries = with_workers(args.workers, || match (args.all, args.sample) {
        (true, _) => catalog::enumerate_all(&layout, &chi),
        (false, Some(n)) => catalog::sample_trajectories(&layout, &chi, n, args.seed),
        (false, None) => catalog::enumerate_trivial_x(&layout, &chi),
    })??;

    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(&mut *out),
    };
    if args.stats {
        let stats = catalog::distribution_stats(&entries);
        serde_json::to_writer(&mut sink, &stats).map_err(|e| Failure::Compute(e.to_string()))?;
        sink.write_all(b"\n")?;
    } else {
        match args.format {
            Format::Json => catalog::write_json(&mut sink, &layout, spec, &entries)?,
            Format::Csv => catalog::write_csv(&mut sink, &entries)?,
        }
    }
    sink.flush()?;
    Ok(())
}

fn parse_count(spec: &str, flag: &str, allow_all: bool) -> Result<Option<usize>, Failure> {
    if allow_all && spec == "all" {
        return Ok(None);
    }
    spec.strip_prefix("random:")
        .and_then(|n| n.parse().ok())
        .map(Some)
        .ok_or_else(|| Failure::Usage(format!("bad {flag} value {spec:?}")))
}

/// Uniform on the Bloch sphere.
pub fn random_chi(rng: &mut impl Rng) -> InjectionState {
    let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let phi = std::f64::consts::TAU * rng.gen::<f64>() - std::f64::consts::PI;
    InjectionState::from_angles(theta, phi)
}

pub fn random_trajectory(layout: &CodeLayout, rng: &mut impl Rng) -> Trajectory {
    let m = layout.num_stabs();
    Trajectory::new(BitWord::from_raw(rng.gen(), m), BitWord::from_raw(rng.gen(), m))
}

#[derive(Serialize)]
struct TrajectoryReport {
    trajectory: String,
    max_fidelity_deviation: f64,
    max_probability_deviation: f64,
}

fn oracle_cmd(args: OracleCheckArgs, out: &mut dyn Write) -> CmdResult {
    if !(2..=3).contains(&args.distance) {
        return Err(Failure::Usage("oracle-check supports --distance 2 or 3".into()));
    }
    let layout = build_layout(args.distance)?;
    let traj_count = parse_count(&args.trajectories, "--trajectories", true)?;
    let chi_count = parse_count(&args.chis, "--chis", false)?.unwrap_or(0);

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let chis: Vec<InjectionState> = (0..chi_count).map(|_| random_chi(&mut rng)).collect();
    let m = layout.num_stabs();
    let trajectories: Vec<Trajectory> = match traj_count {
        None => (0u128..1 << (2 * m))
            .map(|v| Trajectory::new(BitWord::from_raw(v, m), BitWord::from_raw(v >> m, m)))
            .collect(),
        Some(n) => (0..n).map(|_| random_trajectory(&layout, &mut rng)).collect(),
    };

    let projector = Projector::new(&layout);
    let devs = with_workers(args.workers, || {
        use rayon::prelude::*;
        trajectories
            .par_iter()
            .map(|t| cross_check(&projector, t, &chis, args.engine))
            .collect::<crate::error::Result<Vec<Deviation>>>()
    })??;

    let reports: Vec<TrajectoryReport> = trajectories
        .iter()
        .zip(&devs)
        .map(|(t, d)| TrajectoryReport {
            trajectory: t.to_string(),
            max_fidelity_deviation: d.fidelity,
            max_probability_deviation: d.probability,
        })
        .collect();
    let max_f = devs.iter().map(|d| d.fidelity).fold(0.0, f64::max);
    let max_p = devs.iter().map(|d| d.probability).fold(0.0, f64::max);
    let pass = max_f <= ORACLE_TOLERANCE && max_p <= ORACLE_TOLERANCE;
    emit(out, &json!({
        "distance": args.distance,
        "trajectories": trajectories.len(),
        "chis": chis.len(),
        "tolerance": ORACLE_TOLERANCE,
        "results": reports,
        "max_fidelity_deviation": max_f,
        "max_probability_deviation": max_p,
        "pass": pass,
    }))?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Compute("oracle deviation above tolerance".into()))
    }
}
