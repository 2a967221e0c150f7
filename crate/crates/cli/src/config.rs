//! The `key = value` run configuration.
//!
//! ```text
//! command = solve
//!
//! [profile]
//! kind = water-wave
//! g = 1
//! lambda = 3.0241
//!
//! [domain]
//! C = 1
//! P = 6.283185307
//!
//! [numerics]
//! N = 128
//! amplitude = 0.001
//!
//! [output]
//! dir = out
//! ```
//!
//! Unknown sections and keys are rejected, so a misspelt tolerance can never
//! be silently replaced by its default.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use freesurf_core::solver::Branch;
use freesurf_core::Parity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line, or 0 when the problem is not tied to one line.
    pub line: usize,
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, key: &str, message: impl Into<String>) -> Self {
        Self {
            line,
            key: Some(key.to_string()),
            message: message.into(),
        }
    }

    fn global(message: impl Into<String>) -> Self {
        Self {
            line: 0,
            key: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, &self.key) {
            (0, _) => write!(f, "{}", self.message),
            (l, Some(k)) => write!(f, "line {l}, key `{k}`: {}", self.message),
            (l, None) => write!(f, "line {l}: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Verify,
    ProfileCheck,
    KernelEval,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Solve => "solve",
            Self::Verify => "verify",
            Self::ProfileCheck => "profile-check",
            Self::KernelEval => "kernel-eval",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "solve" => Ok(Self::Solve),
            "verify" => Ok(Self::Verify),
            "profile-check" => Ok(Self::ProfileCheck),
            "kernel-eval" => Ok(Self::KernelEval),
            _ => Err(format!("unknown command `{s}` (expected solve, verify, profile-check or kernel-eval)")),
        }
    }
}

/// A speed law, either the water-wave law `sqrt(lambda - 2 g Y)` or a table
/// file with header `Y,h`.
///
/// The command-line form is `water-wave:g=1,lambda=4` or `table:path`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    WaterWave { g: f64, lambda: f64 },
    Table { path: PathBuf },
}

impl ProfileSpec {
    pub fn build(&self) -> Result<freesurf_core::Profile, crate::RunError> {
        match self {
            Self::WaterWave { g, lambda } => Ok(freesurf_core::Profile::water_wave(*g, *lambda)?),
            Self::Table { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| crate::RunError::io(path, e))?;
                Ok(freesurf_core::Profile::parse_table(&text)?)
            }
        }
    }
}

impl fmt::Display for ProfileSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WaterWave { g, lambda } => write!(f, "water-wave:g={g},lambda={lambda}"),
            Self::Table { path } => write!(f, "table:{}", path.display()),
        }
    }
}

impl FromStr for ProfileSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        match kind.trim() {
            "water-wave" => {
                let (mut g, mut lambda) = (None, None);
                for item in rest.split(',').filter(|p| !p.trim().is_empty()) {
                    let (k, v) = item
                        .split_once('=')
                        .ok_or_else(|| format!("expected key=value in profile spec, found `{item}`"))?;
                    let v: f64 = v.trim().parse().map_err(|_| format!("malformed number `{}`", v.trim()))?;
                    match k.trim() {
                        "g" => g = Some(v),
                        "lambda" => lambda = Some(v),
                        other => return Err(format!("unknown water-wave parameter `{other}`")),
                    }
                }
                Ok(Self::WaterWave {
                    g: g.ok_or("water-wave profile needs g")?,
                    lambda: lambda.ok_or("water-wave profile needs lambda")?,
                })
            }
            "table" if !rest.trim().is_empty() => Ok(Self::Table {
                path: PathBuf::from(rest.trim()),
            }),
            "table" => Err("table profile needs a path, as in table:profile.csv".into()),
            other => Err(format!("unknown profile kind `{other}` (expected water-wave or table)")),
        }
    }
}

/// Boundary trace for `kernel-eval`: `amplitude * cos(mode * 2πt/P)` (or
/// `sin`), plus `mean`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub parity: Parity,
    pub trace: TraceShape,
    pub mode: u32,
    pub amplitude: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceShape {
    Cos,
    Sin,
}

impl Default for KernelSpec {
    fn default() -> Self {
        Self {
            parity: Parity::Even,
            trace: TraceShape::Cos,
            mode: 1,
            amplitude: 1.0,
            mean: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericSpec {
    pub n: usize,
    pub amplitude: f64,
    pub steps: usize,
    pub tolerance: f64,
    pub max_newton: usize,
    pub fd_step: f64,
    pub stagnation_clamp: f64,
    pub branch: Branch,
    pub mode: usize,
    pub grid_nx: usize,
    pub grid_ny: usize,
    pub stagnation_tol: f64,
    pub boundary_offset: f64,
    pub bernoulli_tol: f64,
    pub curve_bernoulli_tol: f64,
    pub turning_tol: f64,
    pub hypothesis_samples: usize,
    pub kernel: KernelSpec,
}

impl Default for NumericSpec {
    fn default() -> Self {
        let c = freesurf_core::ContinuationOptions::default();
        let v = freesurf_core::verifier::VerifyOptions::<f64>::default();
        Self {
            n: 128,
            amplitude: 0.0,
            steps: c.steps,
            tolerance: c.tolerance,
            max_newton: c.max_newton,
            fd_step: c.fd_step,
            stagnation_clamp: c.stagnation_clamp,
            branch: c.branch,
            mode: c.mode,
            grid_nx: v.grid_nx,
            grid_ny: v.grid_ny,
            stagnation_tol: v.stagnation_tol,
            boundary_offset: v.boundary_offset,
            bernoulli_tol: v.bernoulli_tol,
            curve_bernoulli_tol: v.curve_bernoulli_tol,
            turning_tol: v.turning_tol,
            hypothesis_samples: 512,
            kernel: KernelSpec::default(),
        }
    }
}

impl NumericSpec {
    pub fn continuation(&self) -> freesurf_core::ContinuationOptions {
        freesurf_core::ContinuationOptions {
            steps: self.steps,
            tolerance: self.tolerance,
            max_newton: self.max_newton,
            fd_step: self.fd_step,
            stagnation_clamp: self.stagnation_clamp,
            branch: self.branch,
            mode: self.mode,
        }
    }

    pub fn verify(&self) -> freesurf_core::verifier::VerifyOptions<f64> {
        freesurf_core::verifier::VerifyOptions {
            grid_nx: self.grid_nx,
            grid_ny: self.grid_ny,
            stagnation_tol: self.stagnation_tol,
            boundary_offset: self.boundary_offset,
            bernoulli_tol: self.bernoulli_tol,
            curve_bernoulli_tol: self.curve_bernoulli_tol,
            turning_tol: self.turning_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub profile: ProfileSpec,
    /// Half-width `C` and period `P`.
    pub half_width: f64,
    pub period: f64,
    pub numerics: NumericSpec,
    pub output_dir: PathBuf,
    /// Curve CSV for `verify`.
    pub curve: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Top,
    Profile,
    Domain,
    Numerics,
    Output,
}

fn number<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::at(line, key, format!("malformed number `{value}`")))
}

fn positive(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let x: f64 = number(line, key, value)?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(ConfigError::at(line, key, format!("must be positive and finite, got {value}")))
    }
}

fn count(line: usize, key: &str, value: &str) -> Result<usize, ConfigError> {
    let x: usize = number(line, key, value)?;
    if x == 0 {
        return Err(ConfigError::at(line, key, "must be at least 1"));
    }
    Ok(x)
}

/// Parses a configuration; relative table and curve paths are taken as given.
pub fn parse_config(text: &str) -> Result<RunSpec, ConfigError> {
    parse_with_base(text, None)
}

/// Reads and parses a configuration file; relative paths inside it resolve
/// against the file's directory.
pub fn load_config(path: &Path) -> Result<RunSpec, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::global(format!("cannot read {}: {e}", path.display())))?;
    parse_with_base(&text, path.parent())
}

fn resolve(base: Option<&Path>, value: &str) -> PathBuf {
    let p = PathBuf::from(value);
    match base {
        Some(b) if p.is_relative() && !b.as_os_str().is_empty() => b.join(p),
        _ => p,
    }
}

fn parse_with_base(text: &str, base: Option<&Path>) -> Result<RunSpec, ConfigError> {
    let mut section = Section::Top;
    let mut seen = [false; 4];
    let mut command = None;
    let mut curve = None;
    let (mut kind, mut g, mut lambda, mut table) = (None, None, None, None);
    let (mut c, mut p) = (None, None);
    let mut num = NumericSpec::default();
    let mut n_line = 0;
    let mut output = None;
    let mut keys_seen: Vec<(u8, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            section = match name {
                "profile" => Section::Profile,
                "domain" => Section::Domain,
                "numerics" => Section::Numerics,
                "output" => Section::Output,
                _ => {
                    return Err(ConfigError {
                        line,
                        key: None,
                        message: format!("unknown section [{name}]"),
                    })
                }
            };
            let slot = section as usize - 1;
            if seen[slot] {
                return Err(ConfigError {
                    line,
                    key: None,
                    message: format!("duplicate section [{name}]"),
                });
            }
            seen[slot] = true;
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError {
            line,
            key: None,
            message: format!("expected `key = value`, found `{content}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ConfigError {
                line,
                key: None,
                message: "empty key".into(),
            });
        }
        let tag = (section as u8, key.to_string());
        if keys_seen.contains(&tag) {
            return Err(ConfigError::at(line, key, "duplicate key"));
        }
        keys_seen.push(tag);

        match (section, key) {
            (Section::Top, "command") => {
                command = Some(value.parse::<Command>().map_err(|e| ConfigError::at(line, key, e))?)
            }
            (Section::Top, "curve") => curve = Some((line, resolve(base, value))),
            (Section::Profile, "kind") => kind = Some((line, value.to_string())),
            (Section::Profile, "g") => g = Some(positive(line, key, value)?),
            (Section::Profile, "lambda") => {
                let x: f64 = number(line, key, value)?;
                if !x.is_finite() {
                    return Err(ConfigError::at(line, key, "must be finite"));
                }
                lambda = Some(x);
            }
            (Section::Profile, "path") => table = Some((line, resolve(base, value))),
            (Section::Domain, "C") => c = Some(positive(line, key, value)?),
            (Section::Domain, "P") => p = Some(positive(line, key, value)?),
            (Section::Numerics, "N") => {
                num.n = count(line, key, value)?;
                n_line = line;
            }
            (Section::Numerics, "amplitude") => {
                let x: f64 = number(line, key, value)?;
                if !(x.is_finite() && x >= 0.0) {
                    return Err(ConfigError::at(line, key, "must be finite and non-negative"));
                }
                num.amplitude = x;
            }
            (Section::Numerics, "steps") => num.steps = count(line, key, value)?,
            (Section::Numerics, "tolerance") => num.tolerance = positive(line, key, value)?,
            (Section::Numerics, "max_newton") => num.max_newton = count(line, key, value)?,
            (Section::Numerics, "fd_step") => num.fd_step = positive(line, key, value)?,
            (Section::Numerics, "stagnation_clamp") => num.stagnation_clamp = positive(line, key, value)?,
            (Section::Numerics, "branch") => {
                num.branch = value.parse().map_err(|e: freesurf_core::Error| ConfigError::at(line, key, e.to_string()))?
            }
            (Section::Numerics, "mode") => num.mode = count(line, key, value)?,
            (Section::Numerics, "grid_nx") => num.grid_nx = count(line, key, value)?,
            (Section::Numerics, "grid_ny") => num.grid_ny = count(line, key, value)?,
            (Section::Numerics, "stagnation_tol") => num.stagnation_tol = positive(line, key, value)?,
            (Section::Numerics, "boundary_offset") => {
                let x = positive(line, key, value)?;
                if x >= 1.0 / 3.0 {
                    return Err(ConfigError::at(line, key, "must be below 1/3"));
                }
                num.boundary_offset = x;
            }
            (Section::Numerics, "bernoulli_tol") => num.bernoulli_tol = positive(line, key, value)?,
            (Section::Numerics, "curve_bernoulli_tol") => num.curve_bernoulli_tol = positive(line, key, value)?,
            (Section::Numerics, "turning_tol") => num.turning_tol = positive(line, key, value)?,
            (Section::Numerics, "hypothesis_samples") => {
                num.hypothesis_samples = count(line, key, value)?;
                if num.hypothesis_samples < 64 {
                    return Err(ConfigError::at(line, key, "must be at least 64"));
                }
            }
            (Section::Numerics, "kernel_parity") => {
                num.kernel.parity = match value {
                    "even" => Parity::Even,
                    "odd" => Parity::Odd,
                    _ => return Err(ConfigError::at(line, key, format!("expected even or odd, found `{value}`"))),
                }
            }
            (Section::Numerics, "kernel_trace") => {
                num.kernel.trace = match value {
                    "cos" => TraceShape::Cos,
                    "sin" => TraceShape::Sin,
                    _ => return Err(ConfigError::at(line, key, format!("expected cos or sin, found `{value}`"))),
                }
            }
            (Section::Numerics, "kernel_mode") => num.kernel.mode = number(line, key, value)?,
            (Section::Numerics, "kernel_amplitude") => {
                num.kernel.amplitude = number(line, key, value)?;
                if !num.kernel.amplitude.is_finite() {
                    return Err(ConfigError::at(line, key, "must be finite"));
                }
            }
            (Section::Numerics, "kernel_mean") => {
                num.kernel.mean = number(line, key, value)?;
                if !num.kernel.mean.is_finite() {
                    return Err(ConfigError::at(line, key, "must be finite"));
                }
            }
            (Section::Output, "dir") => output = Some(resolve(base, value)),
            _ => return Err(ConfigError::at(line, key, "unknown key")),
        }
    }

    let command = command.ok_or_else(|| ConfigError::global("missing key command"))?;
    for (slot, name) in ["profile", "domain", "numerics", "output"].iter().enumerate() {
        if !seen[slot] {
            return Err(ConfigError::global(format!("missing section {name}")));
        }
    }
    if !num.n.is_power_of_two() || num.n < 64 {
        return Err(ConfigError::at(n_line, "N", format!("must be a power of two and at least 64, got {}", num.n)));
    }

    let (kind_line, kind) = kind.ok_or_else(|| ConfigError::global("missing key kind in section profile"))?;
    let profile = match kind.as_str() {
        "water-wave" => {
            if let Some((line, _)) = table {
                return Err(ConfigError::at(line, "path", "only table profiles take a path"));
            }
            ProfileSpec::WaterWave {
                g: g.ok_or_else(|| ConfigError::global("missing key g in section profile"))?,
                lambda: lambda.ok_or_else(|| ConfigError::global("missing key lambda in section profile"))?,
            }
        }
        "table" => {
            if g.is_some() || lambda.is_some() {
                return Err(ConfigError::at(kind_line, "kind", "table profiles take only a path"));
            }
            let (line, path) = table.ok_or_else(|| ConfigError::global("missing key path in section profile"))?;
            if !path.is_file() {
                return Err(ConfigError::at(line, "path", format!("no such file {}", path.display())));
            }
            ProfileSpec::Table { path }
        }
        other => {
            return Err(ConfigError::at(
                kind_line,
                "kind",
                format!("unknown profile kind `{other}` (expected water-wave or table)"),
            ))
        }
    };
    let curve = match (command, curve) {
        (Command::Verify, None) => return Err(ConfigError::global("command verify needs a top-level curve key")),
        (Command::Verify, Some((line, path))) => {
            if !path.is_file() {
                return Err(ConfigError::at(line, "curve", format!("no such file {}", path.display())));
            }
            Some(path)
        }
        (_, Some((line, _))) => return Err(ConfigError::at(line, "curve", "only the verify command reads a curve")),
        (_, None) => None,
    };

    Ok(RunSpec {
        command,
        profile,
        half_width: c.ok_or_else(|| ConfigError::global("missing key C in section domain"))?,
        period: p.ok_or_else(|| ConfigError::global("missing key P in section domain"))?,
        numerics: num,
        output_dir: output.ok_or_else(|| ConfigError::global("missing key dir in section output"))?,
        curve,
    })
}

impl RunSpec {
    /// Writes every field back out. Floats use the shortest representation
    /// that round-trips, so `parse(serialize(spec)) == spec`.
    pub fn serialize(&self) -> String {
        let n = &self.numerics;
        let k = &n.kernel;
        let mut out = format!("command = {}\n", self.command.name());
        if let Some(c) = &self.curve {
            out += &format!("curve = {}\n", c.display());
        }
        out += "\n[profile]\n";
        match &self.profile {
            ProfileSpec::WaterWave { g, lambda } => {
                out += &format!("kind = water-wave\ng = {g:?}\nlambda = {lambda:?}\n");
            }
            ProfileSpec::Table { path } => out += &format!("kind = table\npath = {}\n", path.display()),
        }
        out += &format!("\n[domain]\nC = {:?}\nP = {:?}\n", self.half_width, self.period);
        out += &format!(
            "\n[numerics]\nN = {}\namplitude = {:?}\nsteps = {}\ntolerance = {:?}\nmax_newton = {}\n\
             fd_step = {:?}\nstagnation_clamp = {:?}\nbranch = {}\nmode = {}\ngrid_nx = {}\ngrid_ny = {}\n\
             stagnation_tol = {:?}\nboundary_offset = {:?}\nbernoulli_tol = {:?}\ncurve_bernoulli_tol = {:?}\n\
             turning_tol = {:?}\nhypothesis_samples = {}\n",
            n.n,
            n.amplitude,
            n.steps,
            n.tolerance,
            n.max_newton,
            n.fd_step,
            n.stagnation_clamp,
            n.branch.name(),
            n.mode,
            n.grid_nx,
            n.grid_ny,
            n.stagnation_tol,
            n.boundary_offset,
            n.bernoulli_tol,
            n.curve_bernoulli_tol,
            n.turning_tol,
            n.hypothesis_samples,
        );
        out += &format!(
            "kernel_parity = {}\nkernel_trace = {}\nkernel_mode = {}\nkernel_amplitude = {:?}\nkernel_mean = {:?}\n",
            match k.parity {
                Parity::Even => "even",
                Parity::Odd => "odd",
            },
            match k.trace {
                TraceShape::Cos => "cos",
                TraceShape::Sin => "sin",
            },
            k.mode,
            k.amplitude,
            k.mean,
        );
        out += &format!("\n[output]\ndir = {}\n", self.output_dir.display());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
command = solve
[profile]
kind = water-wave
g = 1
lambda = 3.0241
[domain]
C = 1
P = 6.283185307
[numerics]
N = 128
amplitude = 0.001
[output]
dir = out
";

    #[test]
    #[allow(clippy::approx_constant)]
    fn minimal_solve_config() {
        let s = parse_config(MINIMAL).unwrap();
        assert_eq!(s.command, Command::Solve);
        assert_eq!(s.profile, ProfileSpec::WaterWave { g: 1.0, lambda: 3.0241 });
        assert_eq!((s.half_width, s.period), (1.0, 6.283185307));
        assert_eq!(s.numerics.n, 128);
        assert_eq!(s.numerics.amplitude, 0.001);
        assert_eq!(s.output_dir, PathBuf::from("out"));
    }

    #[test]
    fn unknown_key_names_its_line() {
        let text = MINIMAL.replace("amplitude = 0.001", "amplitude = 0.001\nspeling=1");
        let e = parse_config(&text).unwrap_err();
        assert_eq!(e.line, 12);
        assert_eq!(e.key.as_deref(), Some("speling"));
        assert!(e.to_string().contains("line 12"));
    }

    #[test]
    fn missing_domain_section() {
        let text = MINIMAL.replace("[domain]\nC = 1\nP = 6.283185307\n", "");
        let e = parse_config(&text).unwrap_err();
        assert_eq!(e.to_string(), "missing section domain");
    }

    #[test]
    fn malformed_values_are_rejected() {
        for (from, to, key) in [
            ("N = 128", "N = 100", "N"),
            ("C = 1", "C = -1", "C"),
            ("amplitude = 0.001", "amplitude = x", "amplitude"),
            ("N = 128", "N = 128\nbranch = sideways", "branch"),
            ("kind = water-wave", "kind = river", "kind"),
        ] {
            let e = parse_config(&MINIMAL.replace(from, to)).unwrap_err();
            assert_eq!(e.key.as_deref(), Some(key), "{e}");
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = MINIMAL.replace("g = 1", "# gravity\n\ng = 1   # inline");
        assert_eq!(parse_config(&text).unwrap(), parse_config(MINIMAL).unwrap());
    }

    #[test]
    fn missing_table_is_rejected_at_parse_time() {
        let text = MINIMAL.replace("kind = water-wave\ng = 1\nlambda = 3.0241", "kind = table\npath = /no/such/table.csv");
        let e = parse_config(&text).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("path"));
    }

    #[test]
    fn serialize_round_trip() {
        let mut s = parse_config(MINIMAL).unwrap();
        s.numerics.kernel.parity = Parity::Odd;
        s.numerics.branch = Branch::Lower;
        s.numerics.tolerance = 1.0 / 3.0 * 1e-9;
        let again = parse_config(&s.serialize()).unwrap();
        assert_eq!(again, s);
        assert_eq!(again.serialize(), s.serialize());
    }

    #[test]
    fn profile_spec_strings() {
        let p: ProfileSpec = "water-wave:g=1,lambda=4".parse().unwrap();
        assert_eq!(p, ProfileSpec::WaterWave { g: 1.0, lambda: 4.0 });
        assert_eq!(p.to_string().parse::<ProfileSpec>().unwrap(), p);
        assert!("water-wave:g=1".parse::<ProfileSpec>().is_err());
        assert!("table:".parse::<ProfileSpec>().is_err());
        assert_eq!(
            "table:a/b.csv".parse::<ProfileSpec>().unwrap(),
            ProfileSpec::Table { path: "a/b.csv".into() }
        );
    }
}
