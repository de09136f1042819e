use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinscatter::checks::run_verification;
use spinscatter::sweep::config::{parse_bool, parse_protocols};
use spinscatter::sweep::landmarks::{render_landmarks, EDGE_THRESHOLD};
use spinscatter::sweep::{csv, landmark_report, parse_config, run_and_emit, SweepConfig, SweptParameter};
use spinscatter::Error;

#[derive(Parser)]
#[command(name = "spinscatter", version, about = "Electron scattering off two exchange-coupled impurities in a ramp potential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write CSV (stdout if no file is given) and optionally SVG.
    Sweep {
        #[command(flatten)]
        params: Params,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Locate the unit-concurrence point and the reflection edge for several separations.
    Landmarks {
        #[command(flatten)]
        params: Params,
        /// Separations to report, nm.
        #[arg(long, value_delimiter = ',', default_values_t = [6.0, 10.0, 100.0])]
        x0_list: Vec<f64>,
        /// Reflected-concurrence level that defines the edge.
        #[arg(long, default_value_t = EDGE_THRESHOLD)]
        threshold: f64,
        /// Peak search range, meV.
        #[arg(long, default_value_t = 100.0)]
        peak_start: f64,
        #[arg(long, default_value_t = 250.0)]
        peak_stop: f64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Run the solver cross-checks; exits nonzero if any fails.
    Verify {
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

#[derive(Args)]
struct Params {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon_mev: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    j_ev_angstrom: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x0_nm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mass_ratio: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v0_mev_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v0_mev_stop: Option<f64>,
    #[arg(long)]
    v0_points: Option<usize>,
    /// Comma list of spin_charge, charge, none.
    #[arg(long)]
    protocols: Option<String>,
    #[arg(long)]
    output_csv: Option<PathBuf>,
    #[arg(long)]
    output_svg: Option<PathBuf>,
    /// Append Re/Im columns of r and t.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    dump_amplitudes: Option<String>,
    /// v0, x0, epsilon or j.
    #[arg(long)]
    sweep_parameter: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sweep_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    sweep_stop: Option<f64>,
    #[arg(long)]
    sweep_points: Option<usize>,
    /// Fixed V₀ when sweeping another parameter, meV.
    #[arg(long, allow_hyphen_values = true)]
    v0_mev: Option<f64>,
}

impl Params {
    fn resolve(self) -> Result<SweepConfig, Error> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                })?;
                parse_config(&text)?
            }
            None => SweepConfig::default(),
        };
        let flags = SweepConfig {
            epsilon_mev: self.epsilon_mev,
            j_ev_angstrom: self.j_ev_angstrom,
            x0_nm: self.x0_nm,
            mass_ratio: self.mass_ratio,
            v0_mev_start: self.v0_mev_start,
            v0_mev_stop: self.v0_mev_stop,
            v0_points: self.v0_points,
            protocols: self.protocols.as_deref().map(parse_protocols).transpose()?,
            output_csv: self.output_csv,
            output_svg: self.output_svg,
            dump_amplitudes: self
                .dump_amplitudes
                .as_deref()
                .map(|v| parse_bool("dump-amplitudes", v))
                .transpose()?,
            sweep_parameter: self.sweep_parameter.as_deref().map(SweptParameter::parse).transpose()?,
            sweep_start: self.sweep_start,
            sweep_stop: self.sweep_stop,
            sweep_points: self.sweep_points,
            v0_mev: self.v0_mev,
        };
        Ok(file.overridden_by(flags))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 3,
        Error::IllConditioned { .. } | Error::Singular { .. } | Error::StepUnderflow { .. } | Error::NotPositiveSemidefinite { .. } => 2,
        _ => 1,
    }
}

fn with_pool<T>(workers: usize, f: impl FnOnce() -> Result<T, Error> + Send) -> Result<T, Error>
where
    T: Send,
{
    if workers == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?
        .install(f)
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io {
            path: p.clone(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Sweep { params, workers } => {
            let spec = params.resolve()?.to_spec()?;
            let rows = run_and_emit(&spec, workers)?;
            if spec.output_csv.is_none() {
                print!("{}", csv::render_csv(&rows, &spec)?);
            }
            let failed = rows.iter().filter(|r| !r.is_ok()).count();
            if failed > 0 {
                eprintln!("{failed} of {} grid points were rejected as ill-conditioned", rows.len());
                return Ok(2);
            }
            Ok(0)
        }
        Command::Landmarks {
            params,
            x0_list,
            threshold,
            peak_start,
            peak_stop,
            workers,
        } => {
            let cfg = params.resolve()?;
            let base = cfg.base_problem()?;
            let reports = with_pool(workers, || landmark_report(&base, &x0_list, peak_start, peak_stop, threshold))?;
            write_or_print(cfg.output_csv.as_ref(), &render_landmarks(&reports))?;
            Ok(0)
        }
        Command::Verify { workers } => {
            let checks = with_pool(workers, run_verification)?;
            let mut ok = true;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.passed;
            }
            Ok(if ok { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
