//! Command-line runner: one subcommand per figure-style data set, plus `verify`.
//!
//! Exit status: 0 success, 2 invalid arguments, 3 verification failure, 4 I/O error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wptoolbox::sweep::{
    self, corner_points, Format, Param, Point, RunOptions, Sweep, SweepSpec, Table, VerifyOptions,
};
use wptoolbox::Error;

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "WPTOOLBOX_OUT_DIR";

#[derive(Parser)]
#[command(name = "wptoolbox", version, about = "Wave-particle toolbox simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-photon detection probabilities P1..P4.
    SingleSweep(Common),
    /// Coherence witness |P1 - P2| (default: sweep of alpha).
    WitnessCoherence(Common),
    /// Sixteen coincidence probabilities (default: the {0, 180}² corners at both beta).
    TwoPhoton(Common),
    /// Entanglement witness P_22' - P_21' (default: sweep of phi1).
    WitnessEntanglement(Common),
    /// Sector probabilities of the N-photon output.
    Ghz {
        #[arg(long, default_value_t = 3)]
        photons: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Closed forms vs propagation and hardware vs conceptual circuit.
    Verify {
        /// Points per axis of the single-photon grid.
        #[arg(long, default_value_t = 21)]
        grid: usize,
        /// Random hardware points per beta setting.
        #[arg(long, default_value_t = 100)]
        hardware_points: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    alpha_deg: Option<f64>,
    #[arg(long)]
    phi1_deg: Option<f64>,
    #[arg(long)]
    phi1p_deg: Option<f64>,
    #[arg(long)]
    phi2_deg: Option<f64>,
    #[arg(long)]
    phi2p_deg: Option<f64>,
    #[arg(long)]
    beta_deg: Option<f64>,
    #[arg(long)]
    betap_deg: Option<f64>,
    /// Shots per row; 0 gives analytic values only.
    #[arg(long, default_value_t = 0)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    visibility: f64,
    #[arg(long, default_value_t = 0.0)]
    dephase: f64,
    /// Use the incoherent wave/particle mixture.
    #[arg(long)]
    mixed: bool,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Parameter to sweep: alpha, phi1, phi1_prime, phi2, phi2_prime, beta, beta_prime, visibility, dephase.
    #[arg(long, value_parser = parse_param)]
    sweep: Option<Param>,
    /// Sweep start for angle parameters, in degrees.
    #[arg(long)]
    from_deg: Option<f64>,
    #[arg(long)]
    to_deg: Option<f64>,
    /// Sweep start for visibility or dephase.
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_param(s: &str) -> Result<Param, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Spec(String),
    Verify(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Spec(e.to_string())
    }
}

impl Common {
    fn sets_any_angle(&self) -> bool {
        [self.phi1_deg, self.phi1p_deg, self.beta_deg, self.betap_deg]
            .iter()
            .any(Option::is_some)
    }

    fn base(&self, default_beta: f64) -> Point {
        let r = |v: Option<f64>, d: f64| v.map_or(d, f64::to_radians);
        let d = Point::default();
        let beta = r(self.beta_deg, default_beta);
        Point {
            alpha: r(self.alpha_deg, d.alpha),
            phi1: r(self.phi1_deg, d.phi1),
            phi1_prime: r(self.phi1p_deg, d.phi1_prime),
            phi2: r(self.phi2_deg, d.phi2),
            phi2_prime: r(self.phi2p_deg, d.phi2_prime),
            beta,
            beta_prime: r(self.betap_deg, beta),
            visibility: self.visibility,
            dephase: self.dephase,
        }
    }

    /// Whether `p` was fixed on the command line.
    fn pins(&self, p: Param) -> bool {
        match p {
            Param::Alpha => self.alpha_deg.is_some(),
            Param::Phi1 => self.phi1_deg.is_some(),
            Param::Phi1Prime => self.phi1p_deg.is_some(),
            Param::Phi2 => self.phi2_deg.is_some(),
            Param::Phi2Prime => self.phi2p_deg.is_some(),
            Param::Beta => self.beta_deg.is_some(),
            Param::BetaPrime => self.betap_deg.is_some(),
            Param::Visibility | Param::Dephase => false,
        }
    }

    fn sweep(&self, default: Option<Param>) -> Result<Option<Sweep>, Failure> {
        let default = default.filter(|&p| !self.pins(p));
        let Some(param) = self.sweep.or(default) else {
            if self.steps.is_some() || self.from_deg.is_some() || self.from.is_some() {
                return Err(Failure::Spec("sweep bounds given without --sweep".into()));
            }
            return Ok(None);
        };
        let mut s = Sweep::default_for(param);
        let (from, to) = if param.is_angle() {
            if self.from.is_some() || self.to.is_some() {
                return Err(Failure::Spec(format!(
                    "{param} is an angle; use --from-deg/--to-deg"
                )));
            }
            (
                self.from_deg.map(f64::to_radians),
                self.to_deg.map(f64::to_radians),
            )
        } else {
            if self.from_deg.is_some() || self.to_deg.is_some() {
                return Err(Failure::Spec(format!(
                    "{param} is not an angle; use --from/--to"
                )));
            }
            (self.from, self.to)
        };
        s.from = from.unwrap_or(s.from);
        s.to = to.unwrap_or(s.to);
        s.steps = self.steps.unwrap_or(s.steps);
        Ok(Some(s))
    }

    fn options(&self) -> RunOptions {
        RunOptions {
            shots: self.shots,
            seed: self.seed,
            mixed: self.mixed,
        }
    }

    fn points(
        &self,
        default_beta: f64,
        default_sweep: Option<Param>,
    ) -> Result<Vec<Point>, Failure> {
        let spec = SweepSpec {
            base: self.base(default_beta),
            sweep: self.sweep(default_sweep)?,
        };
        Ok(spec.points()?)
    }
}

fn emit(table: &Table, common: &Common, name: &str) -> Result<(), Failure> {
    let path = match (&common.out, std::env::var_os(OUT_DIR_ENV)) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => {
            Some(PathBuf::from(dir).join(format!("{name}.{}", common.format.extension())))
        }
        (None, None) => None,
    };
    let io_err = |e: io::Error| Failure::Io(e.to_string());
    match path {
        Some(p) => {
            let f = File::create(&p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(f);
            table.write(common.format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(common.format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
    }
}

const BETA_PRESENT: f64 = std::f64::consts::FRAC_PI_8;

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::SingleSweep(c) => {
            let pts = c.points(BETA_PRESENT, Some(Param::Phi1))?;
            emit(&sweep::single_sweep(&pts, c.options())?, &c, "single-sweep")
        }
        Command::WitnessCoherence(c) => {
            let pts = c.points(BETA_PRESENT, Some(Param::Alpha))?;
            emit(
                &sweep::witness_coherence(&pts, c.options())?,
                &c,
                "witness-coherence",
            )
        }
        Command::TwoPhoton(c) => {
            let pts = if c.sweep.is_none() && !c.sets_any_angle() {
                if c.steps.is_some() {
                    return Err(Failure::Spec("sweep bounds given without --sweep".into()));
                }
                let base = c.base(BETA_PRESENT);
                let pts = corner_points(base);
                SweepSpec { base, sweep: None }.points()?;
                pts
            } else {
                c.points(BETA_PRESENT, None)?
            };
            emit(&sweep::two_photon(&pts, c.options())?, &c, "two-photon")
        }
        Command::WitnessEntanglement(c) => {
            let pts = c.points(BETA_PRESENT, Some(Param::Phi1))?;
            emit(
                &sweep::witness_entanglement(&pts, c.options())?,
                &c,
                "witness-entanglement",
            )
        }
        Command::Ghz { photons, common } => {
            let pts = common.points(0.0, None)?;
            emit(
                &sweep::ghz(&pts, photons, common.options())?,
                &common,
                "ghz",
            )
        }
        Command::Verify {
            grid,
            hardware_points,
            seed,
        } => {
            let report = sweep::verify(VerifyOptions {
                single_grid: grid,
                hardware_points,
                seed,
            })?;
            print!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verify("verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Spec(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(4)
        }
    }
}
