//! Command-line entry points.
//!
//! Exit codes: 0 success, 1 a-priori bound failure, 2 configuration or IO
//! error, 3 numerical blow-up.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::diagnostics::{
    check_apriori_bounds, convergence_study, mean_evolution_check, modal_lq_conservation_check,
    oscillator_exact, twin_experiment, BoundReport, DiagnosticsRecord, History, LqNorm,
};
use crate::error::{Error, Result};
use crate::init::{build_initial_state, random_perturbation, IcKind};
use crate::io::{
    parse_config, write_checkpoint, write_diagnostics_csv, write_twin_csv, SimulationConfig,
};
use crate::model::{Model, ModelState};
use crate::spectral::Grid;
use crate::timestepper::{integrate, Observer};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BOUND_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BLOWUP: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "slowlim",
    version,
    about = "Slow-limiting ocean model simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate and write diagnostics.csv plus final.slwd.
    Run(Common),
    /// Integrate and check every a-priori bound.
    Verify(Common),
    /// Run the continuous-dependence twin experiment.
    Twin {
        #[command(flatten)]
        common: Common,
        /// Size of the random perturbation.
        #[arg(long, allow_hyphen_values = true)]
        perturb: f64,
    },
    /// Measure the time-integration order by step halving.
    Convergence(Common),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Blowup { .. } => EXIT_BLOWUP,
        _ => EXIT_CONFIG,
    }
}

struct Setup {
    config: SimulationConfig,
    model: Model,
    initial: ModelState,
}

fn setup(common: &Common) -> Result<Setup> {
    let text = fs::read_to_string(&common.config).map_err(|e| Error::io(&common.config, e))?;
    let mut config = parse_config(&text)?;
    if let Some(dir) = &common.output_dir {
        config.output_dir = dir.clone();
    }
    if let Some(seed) = common.seed {
        config.ic.seed = seed;
    }
    let grid = Grid::new(config.grid)?;
    let model = Model::new(grid, config.params)?;
    let initial = build_initial_state(&config.ic, model.grid())?;
    fs::create_dir_all(&config.output_dir).map_err(|e| Error::io(&config.output_dir, e))?;
    Ok(Setup {
        config,
        model,
        initial,
    })
}

/// Collects records and writes periodic checkpoints.
struct RunSink<'a> {
    history: History,
    dir: &'a Path,
    length: f64,
    model: &'a Model,
}

impl Observer for RunSink<'_> {
    fn diagnostic(
        &mut self,
        step: usize,
        record: &DiagnosticsRecord,
        state: &ModelState,
    ) -> Result<()> {
        self.history.diagnostic(step, record, state)
    }

    fn snapshot(&mut self, step: usize, state: &ModelState) -> Result<()> {
        let path = self.dir.join(format!("snapshot_{step:08}.slwd"));
        write_checkpoint(state, self.length, self.model.params(), &path)
    }
}

fn simulate(s: &Setup) -> Result<(Vec<DiagnosticsRecord>, BoundReport)> {
    let dir = &s.config.output_dir;
    let length = s.config.grid.length;
    let mut sink = RunSink {
        history: History::default(),
        dir,
        length,
        model: &s.model,
    };
    let last = integrate(&s.model, &s.initial, &s.config.run, &mut sink)?;
    let records = sink.history.records;
    let report = check_apriori_bounds(&records, s.model.params(), length, &s.config.tolerances)?;
    write_diagnostics_csv(&records, Some(&report), &dir.join("diagnostics.csv"))?;
    write_checkpoint(&last, length, s.model.params(), &dir.join("final.slwd"))?;
    Ok((records, report))
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Run(common) => {
            let s = setup(&common)?;
            let (records, _) = simulate(&s)?;
            println!(
                "integrated to t = {} with {} records; output in {}",
                s.config.run.t_end,
                records.len(),
                s.config.output_dir.display()
            );
            Ok(EXIT_OK)
        }
        Command::Verify(common) => {
            let s = setup(&common)?;
            let (records, report) = simulate(&s)?;
            print_bounds(&report);
            let tol = &s.config.tolerances;
            let means = mean_evolution_check(&records, s.model.params(), tol.mean)?;
            println!(
                "means: max deviation {:.3e} (tolerance {:.1e}) {}",
                means.max_error,
                means.tolerance,
                pass(means.satisfied)
            );
            let modal = modal_lq_conservation_check(&records, &LqNorm::ALL, tol)?;
            for q in LqNorm::ALL {
                println!("rho_k {q:?} drift: {:.3e}", modal.max_drift(q));
            }
            Ok(if report.all_satisfied() {
                EXIT_OK
            } else {
                EXIT_BOUND_FAILURE
            })
        }
        Command::Twin { common, perturb } => {
            let s = setup(&common)?;
            let delta = random_perturbation(
                s.model.grid(),
                s.config.twin_seed,
                perturb,
                s.config.ic.slope,
            )?;
            let res = twin_experiment(&s.model, &s.initial, &delta, &s.config.run)?;
            write_twin_csv(&res, &s.config.output_dir.join("twin.csv"))?;
            println!("D(0) = {:.6e}", res.distances[0]);
            match (res.rate, res.max_excess) {
                (Some(rate), Some(excess)) => {
                    println!("fitted rate {rate:.6e}, max excess over fit {excess:.3e}")
                }
                _ => println!("separation identically zero"),
            }
            Ok(EXIT_OK)
        }
        Command::Convergence(common) => {
            let s = setup(&common)?;
            let t_end = s.config.run.t_end;
            let exact =
                if s.config.ic.kind == IcKind::OscillatorOnly && !s.config.params.is_viscous() {
                    Some(oscillator_exact(&s.model, &s.initial, t_end)?)
                } else {
                    None
                };
            let rep = convergence_study(
                &s.model,
                &s.initial,
                t_end,
                &s.config.convergence_dts,
                exact.as_ref(),
            )?;
            let reference = if rep.against_exact {
                "exact solution"
            } else {
                "next finer run"
            };
            println!("errors against the {reference}:");
            for (dt, e) in rep.dts.iter().zip(&rep.errors) {
                println!("  dt = {dt:.3e}  error = {e:.6e}");
            }
            match rep.order() {
                Some(p) => println!("measured order {p:.4}"),
                None => println!("measured order unavailable"),
            }
            Ok(EXIT_OK)
        }
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn print_bounds(report: &BoundReport) {
    println!("K0 = {:.6e}, K0~ = {:.6e}", report.k0, report.k0_tilde);
    for name in BoundReport::names() {
        let entries: Vec<_> = report.bound(name).collect();
        let worst = entries
            .iter()
            .map(|e| e.margin)
            .fold(f64::INFINITY, f64::min);
        let ok = entries.iter().all(|e| e.satisfied);
        println!("{name:<20} min margin {worst:+.3e} {}", pass(ok));
    }
}
