use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use udesign::control::{CompositeKind, DdKind};
use udesign::numeric::linear_grid;
use udesign::qmat::{c64, sigma_x, sigma_y, sigma_z, Axis3, CMat, UnitaryOp};
use udesign::sphere::{CurveKind, CurveSpec};
use udesign::upath::{build_open_path, UnitaryPath};

#[derive(Parser, Debug)]
#[command(name = "udesign", version, about = "Unitary 1-design paths, verification and robust-control simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a unitary path or a sphere curve to CSV, with a JSON descriptor.
    Construct(ConstructArgs),
    /// Frame-potential and twirl diagnostics for a sampled path.
    Verify(VerifyArgs),
    /// Noise simulations.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Map S³ points from a CSV file to R³.
    Project(ProjectArgs),
    /// Re-run the command recorded in a manifest.
    Rerun(RerunArgs),
}

#[derive(Subcommand, Debug)]
pub enum SimulateCommand {
    /// Noise-averaged gate fidelity versus static noise strength.
    Gate(GateArgs),
    /// Memory fidelity versus decoupling-sequence repetitions.
    Memory(MemoryArgs),
    /// Filter functions of control pulses.
    Ff(FfArgs),
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct PathArgs {
    /// two-axis, fixed-angle, open, tensor, fiber, hw or curve.
    #[arg(long)]
    pub path: Option<String>,
    /// First axis: x, y, z (optionally signed) or three comma-separated numbers.
    #[arg(long, default_value = "z")]
    pub n1: String,
    /// Second axis, perpendicular to the first.
    #[arg(long, default_value = "y")]
    pub n2: String,
    /// Dimension for fiber and hw paths, half-dimension for canonical-trig.
    #[arg(long)]
    pub d: Option<usize>,
    /// Target gate for open paths: I, X, Y, Z, H, S or T.
    #[arg(long, default_value = "Z")]
    pub target: String,
    /// Number of qubits for tensor paths.
    #[arg(long, default_value_t = 2)]
    pub qubits: usize,
    /// Curve name, for curve paths or curve sampling.
    #[arg(long)]
    pub curve: Option<String>,
    /// Curve family angle in [0, π].
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projection {
    Stereo,
    Hopf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct ConstructArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub shape: PathArgs,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Project curve samples to R³.
    #[arg(long, value_enum)]
    pub project: Option<Projection>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub shape: PathArgs,
    /// Sample count for the report; defaults to the path's minimum.
    #[arg(long)]
    pub n: Option<usize>,
    /// Sample-count range `a:b` or `a:b:step` for a CSV scan.
    #[arg(long)]
    pub scan: Option<String>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// JSON report path.
    #[arg(long)]
    pub out: PathBuf,
    /// Scan CSV path; defaults to the report path with a .csv extension.
    #[arg(long)]
    pub scan_out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct GateArgs {
    /// Comma-separated: urc, square, corpse, bb1.
    #[arg(long, default_value = "urc,square,corpse,bb1")]
    pub pulses: String,
    /// Strengths in units of Ω: `a:b:step` or a comma list.
    #[arg(long, default_value = "0:0.3:0.03")]
    pub eta: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Midpoint steps per segment; adaptive when omitted.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct MemoryArgs {
    /// Comma-separated: urc, xy4, cpmg.
    #[arg(long, default_value = "urc,xy4,cpmg")]
    pub kinds: String,
    /// Repetitions of the shortest cycle; the others match its total time.
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.05)]
    pub etamax: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Free-evolution interval; defaults to 2π/Ω.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct FfArgs {
    #[arg(long, default_value = "urc,square,corpse,bb1")]
    pub pulses: String,
    /// Frequencies in units of Ω: `a:b:step` or a comma list.
    #[arg(long, default_value = "0:0.5:0.005")]
    pub omega: String,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct ProjectArgs {
    /// CSV with columns x1..x4 (other columns are ignored except `s`).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "stereo")]
    pub map: Projection,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug)]
pub struct RerunArgs {
    pub manifest: PathBuf,
    /// Write to a different output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_axis(s: &str) -> Result<Axis3> {
    let t = s.trim().to_ascii_lowercase();
    let (sign, name) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(&t)),
    };
    let v = match name {
        "x" => [sign, 0.0, 0.0],
        "y" => [0.0, sign, 0.0],
        "z" => [0.0, 0.0, sign],
        _ => {
            let parts: Vec<f64> = s
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| anyhow!("invalid axis '{s}'"))?;
            let [x, y, z] = parts[..] else {
                bail!("invalid axis '{s}': expected x, y, z or three numbers");
            };
            [x, y, z]
        }
    };
    Axis3::new(v[0], v[1], v[2]).with_context(|| format!("invalid axis '{s}'"))
}

pub fn parse_target(s: &str) -> Result<UnitaryOp> {
    let h = FRAC_1_SQRT_2;
    let m = match s.trim().to_ascii_uppercase().as_str() {
        "I" => CMat::identity(2),
        "X" => sigma_x(),
        "Y" => sigma_y(),
        "Z" => sigma_z(),
        "H" => (&sigma_x() + &sigma_z()).scale_real(h),
        "S" => CMat::diagonal(&[c64(1.0, 0.0), c64(0.0, 1.0)]),
        "T" => CMat::diagonal(&[c64(1.0, 0.0), c64(h, h)]),
        _ => bail!("unknown target '{s}': expected I, X, Y, Z, H, S or T"),
    };
    Ok(UnitaryOp::new(m)?)
}

pub fn build_curve(shape: &PathArgs) -> Result<CurveSpec> {
    let name = shape.curve.as_deref().ok_or_else(|| anyhow!("--curve is required"))?;
    let kind = CurveKind::from_name(name).ok_or_else(|| {
        let names: Vec<&str> = CurveKind::ALL.iter().map(|k| k.name()).collect();
        anyhow!("unknown curve '{name}': expected one of {}", names.join(", "))
    })?;
    Ok(CurveSpec::new(kind, shape.phi, shape.d.unwrap_or(2))?)
}

pub fn build_path(shape: &PathArgs) -> Result<UnitaryPath> {
    let kind = shape.path.as_deref().ok_or_else(|| anyhow!("--path is required"))?;
    let need_d = || shape.d.ok_or_else(|| anyhow!("--d is required for {kind} paths"));
    let path = match kind {
        "two-axis" => UnitaryPath::two_axis(parse_axis(&shape.n1)?, parse_axis(&shape.n2)?)?,
        "fixed-angle" => UnitaryPath::fixed_angle(parse_axis(&shape.n1)?, parse_axis(&shape.n2)?)?,
        "open" => {
            let base = UnitaryPath::two_axis(parse_axis(&shape.n1)?, parse_axis(&shape.n2)?)?;
            build_open_path(&base, &parse_target(&shape.target)?)?
        }
        "tensor" => {
            if shape.qubits == 0 || shape.qubits > 4 {
                bail!("--qubits must be between 1 and 4");
            }
            let pair = (parse_axis(&shape.n1)?, parse_axis(&shape.n2)?);
            UnitaryPath::tensor_qubits(vec![pair; shape.qubits])?
        }
        "fiber" => UnitaryPath::fiber_bundle(need_d()?)?,
        "hw" => UnitaryPath::heisenberg_weyl(need_d()?)?,
        "curve" => UnitaryPath::sphere_curve(build_curve(shape)?)?,
        other => bail!("unknown path kind '{other}': expected two-axis, fixed-angle, open, tensor, fiber, hw or curve"),
    };
    Ok(path)
}

/// `a:b:step` (inclusive) or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = if s.contains(':') {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("invalid grid '{s}'"))?;
        let [a, b, step] = parts[..] else {
            bail!("invalid grid '{s}': expected start:stop:step");
        };
        if !(step > 0.0) || b < a {
            bail!("invalid grid '{s}': need start ≤ stop and step > 0");
        }
        linear_grid(a, b, step)
    } else {
        s.split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("invalid list '{s}'"))?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        bail!("grid '{s}' must contain finite nonnegative values");
    }
    Ok(values)
}

/// `a:b` or `a:b:step` over integers, inclusive.
pub fn parse_int_range(s: &str) -> Result<Vec<usize>> {
    let parts: Vec<usize> = s
        .split(':')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("invalid range '{s}'"))?;
    let (a, b, step) = match parts[..] {
        [a, b] => (a, b, 1),
        [a, b, step] => (a, b, step),
        _ => bail!("invalid range '{s}': expected a:b or a:b:step"),
    };
    if a == 0 || b < a || step == 0 {
        bail!("invalid range '{s}': need 1 ≤ a ≤ b and step ≥ 1");
    }
    Ok((a..=b).step_by(step).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PulseChoice {
    Urc,
    Composite(CompositeKind),
}

impl PulseChoice {
    pub fn name(&self) -> &'static str {
        match self {
            PulseChoice::Urc => "urc",
            PulseChoice::Composite(k) => k.name(),
        }
    }
}

fn split_list(s: &str) -> impl Iterator<Item = String> + '_ {
    s.split(',').map(|p| p.trim().to_ascii_lowercase()).filter(|p| !p.is_empty())
}

pub fn parse_pulses(s: &str) -> Result<Vec<PulseChoice>> {
    let out: Vec<PulseChoice> = split_list(s)
        .map(|p| match p.as_str() {
            "urc" => Ok(PulseChoice::Urc),
            "square" => Ok(PulseChoice::Composite(CompositeKind::Square)),
            "corpse" => Ok(PulseChoice::Composite(CompositeKind::Corpse)),
            "bb1" => Ok(PulseChoice::Composite(CompositeKind::Bb1)),
            other => Err(anyhow!("unknown pulse '{other}': expected urc, square, corpse or bb1")),
        })
        .collect::<Result<_>>()?;
    if out.is_empty() {
        bail!("no pulses given");
    }
    Ok(out)
}

pub fn parse_dd_kinds(s: &str) -> Result<Vec<DdKind>> {
    let out: Vec<DdKind> = split_list(s)
        .map(|p| match p.as_str() {
            "urc" => Ok(DdKind::UrcRep),
            "xy4" => Ok(DdKind::Xy4),
            "cpmg" => Ok(DdKind::Cpmg),
            other => Err(anyhow!("unknown sequence '{other}': expected urc, xy4 or cpmg")),
        })
        .collect::<Result<_>>()?;
    if out.is_empty() {
        bail!("no sequences given");
    }
    Ok(out)
}

/// Literal BB1 phase, recorded in simulation metadata.
pub const BB1_PHASE_LITERAL: &str = "phi2 = 5pi/2, applied as pi/2";
