//! Command-line front end: configuration parsing, run orchestration
//! (solve, reconstruct, verify) and artifact output.
//!
//! Exit status: 0 success, 2 solver failure, 3 a certificate failed,
//! 4 input, parse or I/O error.

pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use freesurf_core::profile::check_hypotheses;
use freesurf_core::strip::symmetric_extend;
use freesurf_core::verifier::{diagnose, diagnose_curve};
use freesurf_core::{solver, Error, Grid, PeriodicFunction, Profile, StripDomain};

pub use config::{load_config, parse_config, Command, ConfigError, NumericSpec, ProfileSpec, RunSpec};
use output::{write_text, BranchStep, Sampling};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Parse(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(Error),
    #[error("solver failed: {0}")]
    Solve(Error),
    #[error("verification could not be evaluated: {0}")]
    Verify(Error),
}

impl RunError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Solve(_) => 2,
            Self::Verify(_) => 3,
            Self::Parse(_) | Self::Io { .. } | Self::Input(_) => 4,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        Self::Input(e)
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        Self::Parse(e.to_string())
    }
}

/// Files written by a command and whether every certificate held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub certified: bool,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.certified {
            0
        } else {
            3
        }
    }
}

/// Maps a run result onto the exit-status contract.
pub fn exit_code(result: &Result<Outcome, RunError>) -> u8 {
    match result {
        Ok(o) => o.exit_code(),
        Err(e) => e.exit_code(),
    }
}

fn solver_error(e: Error) -> RunError {
    match e {
        Error::NonConvergence { .. }
        | Error::NearStagnation { .. }
        | Error::NoStream { .. }
        | Error::CriticalStream { .. }
        | Error::Range { .. } => RunError::Solve(e),
        other => RunError::Input(other),
    }
}

fn prepare_dir(dir: &Path) -> Result<(), RunError> {
    std::fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))
}

/// Runs the command named in `spec`.
pub fn run(spec: &RunSpec) -> Result<Outcome, RunError> {
    match spec.command {
        Command::Solve => solve(spec),
        Command::Verify => {
            let curve = spec.curve.as_deref().ok_or_else(|| RunError::Parse("verify needs a curve".into()))?;
            verify(curve, &spec.profile, &spec.numerics, &spec.output_dir)
        }
        Command::ProfileCheck => profile_check(&spec.profile, spec.numerics.hypothesis_samples, Some(&spec.output_dir)),
        Command::KernelEval => kernel_eval(spec),
    }
}

/// Continues the branch to the requested amplitude and writes
/// `solution.csv`, `solution.json` and `report.json`.
pub fn solve(spec: &RunSpec) -> Result<Outcome, RunError> {
    let profile = spec.profile.build()?;
    let domain = StripDomain::new(spec.half_width, spec.period)?;
    let num = &spec.numerics;
    let branch = solver::continue_branch(&profile, &domain, num.n, num.amplitude, &num.continuation())
        .map_err(solver_error)?;
    let last = branch.last().ok_or_else(|| RunError::Solve(Error::Input("empty continuation".into())))?;
    let steps: Vec<BranchStep> = branch
        .iter()
        .map(|s| BranchStep {
            amplitude: s.amplitude(),
            parameter: s.profile().released_parameter(),
            newton_iterations: s.newton_iterations(),
            residual_norm: s.residual_norm(),
        })
        .collect();
    let options = num.verify();
    let report = diagnose(last, &options).map_err(RunError::Verify)?;

    prepare_dir(&spec.output_dir)?;
    let files = vec![
        spec.output_dir.join("solution.csv"),
        spec.output_dir.join("solution.json"),
        spec.output_dir.join("report.json"),
    ];
    write_text(&files[0], &output::solution_csv(last))?;
    write_text(&files[1], &output::to_json_text(&output::solution_json(last, &steps)))?;
    let sampling = Sampling {
        source: "solution",
        stagnation_tol: options.stagnation_tol,
        boundary_offset: options.boundary_offset,
    };
    write_text(&files[2], &output::to_json_text(&output::report_json(&report, &sampling)))?;
    Ok(Outcome {
        certified: report.certified(),
        files,
    })
}

/// Certifies an imported curve against a profile; writes `report.json`.
pub fn verify(curve: &Path, profile: &ProfileSpec, num: &NumericSpec, out: &Path) -> Result<Outcome, RunError> {
    let profile = profile.build()?;
    let curve = output::read_curve(curve)?;
    let options = num.verify();
    let report = diagnose_curve(&curve, &profile, &options).map_err(RunError::Verify)?;
    prepare_dir(out)?;
    let path = out.join("report.json");
    let sampling = Sampling {
        source: "curve",
        stagnation_tol: options.stagnation_tol,
        boundary_offset: options.boundary_offset,
    };
    write_text(&path, &output::to_json_text(&output::report_json(&report, &sampling)))?;
    Ok(Outcome {
        certified: report.certified(),
        files: vec![path],
    })
}

/// Audits a profile; writes `hypotheses.json` under `out`, or prints it when
/// no directory is given.
pub fn profile_check(profile: &ProfileSpec, samples: usize, out: Option<&Path>) -> Result<Outcome, RunError> {
    let built: Profile = profile.build()?;
    let report = check_hypotheses(&built, samples)?;
    let text = output::to_json_text(&output::hypothesis_json(&report));
    let files = match out {
        Some(dir) => {
            prepare_dir(dir)?;
            let path = dir.join("hypotheses.json");
            write_text(&path, &text)?;
            vec![path]
        }
        None => {
            print!("{text}");
            Vec::new()
        }
    };
    Ok(Outcome {
        certified: report.overall,
        files,
    })
}

/// Writes `kernel.csv` (`x,y,value`): the symmetric extension of the
/// configured trace on a `grid_nx` by `grid_ny` grid of the open strip.
pub fn kernel_eval(spec: &RunSpec) -> Result<Outcome, RunError> {
    let domain = StripDomain::new(spec.half_width, spec.period)?;
    let num = &spec.numerics;
    let k = &num.kernel;
    let omega = std::f64::consts::TAU * f64::from(k.mode) / spec.period;
    let trace = PeriodicFunction::from_fn(spec.period, num.n, |t| {
        let phase = omega * t;
        k.mean
            + k.amplitude
                * match k.trace {
                    config::TraceShape::Cos => phase.cos(),
                    config::TraceShape::Sin => phase.sin(),
                }
    })?;
    let grid = Grid::full_strip(&domain, num.grid_nx, num.grid_ny)?;
    let points = grid.points();
    let values = symmetric_extend(&trace, k.parity, &domain, &points)?;
    let mut text = String::from("x,y,value\n");
    for (&(x, y), v) in points.iter().zip(values) {
        text += &format!("{},{},{}\n", output::fmt17(x), output::fmt17(y), output::fmt17(v));
    }
    prepare_dir(&spec.output_dir)?;
    let path = spec.output_dir.join("kernel.csv");
    write_text(&path, &text)?;
    Ok(Outcome {
        certified: true,
        files: vec![path],
    })
}
