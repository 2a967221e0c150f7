use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use freesurf::{exit_code, load_config, Command, NumericSpec, ProfileSpec, RunError, RunSpec};

#[derive(Parser)]
#[command(name = "freesurf", version, about = "Periodic free-surface solver and verifier on strip domains")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Solve along a continuation branch and certify the last solution.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `dir` in the `[output]` section.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify an imported curve (CSV `t,u,v[,theta]`) against a profile.
    Verify {
        #[arg(long)]
        curve: PathBuf,
        /// `water-wave:g=1,lambda=4` or `table:path`.
        #[arg(long)]
        profile: ProfileSpec,
        #[arg(long)]
        out: PathBuf,
    },
    /// Audit the structural hypotheses of a speed law.
    ProfileCheck {
        #[arg(long)]
        profile: ProfileSpec,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Evaluate a symmetric extension on a grid.
    KernelEval {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn from_config(path: &Path, out: Option<PathBuf>, expected: Command) -> Result<RunSpec, RunError> {
    let mut spec = load_config(path)?;
    if spec.command != expected {
        return Err(RunError::Parse(format!(
            "{}: config declares command {}, not {}",
            path.display(),
            spec.command.name(),
            expected.name()
        )));
    }
    if let Some(dir) = out {
        spec.output_dir = dir;
    }
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Sub::Solve { config, out } => from_config(&config, out, Command::Solve).and_then(|s| freesurf::run(&s)),
        Sub::Verify { curve, profile, out } => freesurf::verify(&curve, &profile, &NumericSpec::default(), &out),
        Sub::ProfileCheck { profile, out, samples } => freesurf::profile_check(&profile, samples, out.as_deref()),
        Sub::KernelEval { config, out } => {
            from_config(&config, out, Command::KernelEval).and_then(|s| freesurf::run(&s))
        }
    };
    match &result {
        Ok(o) => {
            for f in &o.files {
                eprintln!("wrote {}", f.display());
            }
            if !o.certified {
                eprintln!("certificate failed");
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result))
}
