//! Single-qubit control: pulse synthesis, noisy propagation, fidelities,
//! Monte Carlo noise averaging and filter functions.
//!
//! Units follow the Rabi bound: with `Ω = 1`, times are in `1/Ω` and
//! frequencies in `Ω`. The Hamiltonian is `H(t) = (u(t) + η v)·σ/2`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{mean_and_stderr, pairwise_sum};
use crate::qmat::{c64, cross3, Axis3, CMat, HermitianOp, Su2, UnitaryOp, C64};
use crate::upath::ReparamPL;

/// Slack allowed on the Rabi bound when sampling a waveform.
pub const AMPLITUDE_SLACK: f64 = 1e-9;

/// Control field on one segment, as a function of time since the segment
/// start.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Waveform {
    /// Fixed field `u`.
    Constant { u: [f64; 3] },
    /// Field that drives `R_{n₁}(θ) R_{n₂}(2θ)` with `θ = theta0 + rate·t`:
    /// `u = θ′ [n₁ + 2cos θ n₂ + 2sin θ (n₁ × n₂)]`.
    TwoAxisSweep {
        n1: Axis3,
        n2: Axis3,
        theta0: f64,
        rate: f64,
    },
}

impl Waveform {
    pub fn field(&self, t: f64) -> [f64; 3] {
        match self {
            Waveform::Constant { u } => *u,
            Waveform::TwoAxisSweep {
                n1,
                n2,
                theta0,
                rate,
            } => {
                let th = theta0 + rate * t;
                let (s, c) = th.sin_cos();
                let a = n1.vec();
                let b = n2.vec();
                let x = cross3(&a, &b);
                [
                    rate * (a[0] + 2.0 * c * b[0] + 2.0 * s * x[0]),
                    rate * (a[1] + 2.0 * c * b[1] + 2.0 * s * x[1]),
                    rate * (a[2] + 2.0 * c * b[2] + 2.0 * s * x[2]),
                ]
            }
        }
    }

    /// Noise-free propagator from the segment start to local time `t`.
    pub fn exact_propagator(&self, t: f64) -> Su2 {
        match self {
            Waveform::Constant { u } => Su2::from_generator(*u, t),
            Waveform::TwoAxisSweep {
                n1,
                n2,
                theta0,
                rate,
            } => {
                let at = |th: f64| Su2::rotation(n1, th).mul(&Su2::rotation(n2, 2.0 * th));
                at(theta0 + rate * t).mul(&at(*theta0).adjoint())
            }
        }
    }

    fn is_constant(&self) -> bool {
        matches!(self, Waveform::Constant { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub duration: f64,
    pub waveform: Waveform,
}

impl Segment {
    /// `∫|u| dt` over the segment.
    pub fn rotation_angle(&self) -> f64 {
        match &self.waveform {
            Waveform::Constant { u } => norm3(u) * self.duration,
            Waveform::TwoAxisSweep { rate, .. } => rate.abs() * 5f64.sqrt() * self.duration,
        }
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Control waveform with a Rabi bound `omega_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseProgram {
    label: String,
    omega_max: f64,
    segments: Vec<Segment>,
}

impl PulseProgram {
    /// Validates durations and samples `|u(t)| ≤ Ω` on every segment.
    pub fn new(label: impl Into<String>, omega_max: f64, segments: Vec<Segment>) -> Result<Self> {
        if !(omega_max > 0.0) || !omega_max.is_finite() {
            return Err(Error::OutOfRange {
                name: "omega",
                value: omega_max,
                range: "(0, ∞)",
            });
        }
        if segments.is_empty() {
            return Err(Error::Invalid("pulse needs at least one segment".into()));
        }
        for seg in &segments {
            if !(seg.duration > 0.0) || !seg.duration.is_finite() {
                return Err(Error::OutOfRange {
                    name: "duration",
                    value: seg.duration,
                    range: "(0, ∞)",
                });
            }
            for k in 0..=64 {
                let u = seg.waveform.field(seg.duration * k as f64 / 64.0);
                let amp = norm3(&u);
                if amp > omega_max + AMPLITUDE_SLACK {
                    return Err(Error::RateBound {
                        rate: amp,
                        bound: omega_max,
                    });
                }
            }
        }
        Ok(PulseProgram {
            label: label.into(),
            omega_max,
            segments,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Number of segments with a nonzero constant field.
    pub fn pulse_count(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| matches!(s.waveform, Waveform::Constant { u } if norm3(&u) > 0.0))
            .count()
    }

    pub fn field_at(&self, t: f64) -> Result<[f64; 3]> {
        let total = self.total_duration();
        if !(0.0..=total * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::OutOfRange {
                name: "t",
                value: t,
                range: "[0, T]",
            });
        }
        let mut start = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let last = i + 1 == self.segments.len();
            if t < start + seg.duration || last {
                return Ok(seg.waveform.field((t - start).min(seg.duration)));
            }
            start += seg.duration;
        }
        unreachable!("segments are nonempty")
    }

    /// The program played `k` times back to back.
    pub fn repeat(&self, k: usize) -> Result<PulseProgram> {
        if k == 0 {
            return Err(Error::Invalid("repetition count must be positive".into()));
        }
        let segments = (0..k).flat_map(|_| self.segments.iter().cloned()).collect();
        Ok(PulseProgram {
            label: format!("{}x{k}", self.label),
            omega_max: self.omega_max,
            segments,
        })
    }

    /// Splits at time `t`, cutting a segment if needed.
    pub fn split_at(&self, t: f64) -> Result<(PulseProgram, PulseProgram)> {
        let total = self.total_duration();
        if !(t > 0.0 && t < total) {
            return Err(Error::OutOfRange {
                name: "t",
                value: t,
                range: "(0, T)",
            });
        }
        let mut first = Vec::new();
        let mut second = Vec::new();
        let mut start = 0.0;
        for seg in &self.segments {
            let end = start + seg.duration;
            if end <= t {
                first.push(seg.clone());
            } else if start >= t {
                second.push(seg.clone());
            } else {
                let head = t - start;
                first.push(Segment {
                    duration: head,
                    waveform: seg.waveform.clone(),
                });
                let tail_wave = match &seg.waveform {
                    Waveform::Constant { u } => Waveform::Constant { u: *u },
                    Waveform::TwoAxisSweep {
                        n1,
                        n2,
                        theta0,
                        rate,
                    } => Waveform::TwoAxisSweep {
                        n1: *n1,
                        n2: *n2,
                        theta0: theta0 + rate * head,
                        rate: *rate,
                    },
                };
                second.push(Segment {
                    duration: end - t,
                    waveform: tail_wave,
                });
            }
            start = end;
        }
        let mk = |segments: Vec<Segment>, part: &str| PulseProgram {
            label: format!("{}[{part}]", self.label),
            omega_max: self.omega_max,
            segments,
        };
        Ok((mk(first, "head"), mk(second, "tail")))
    }
}

/// Static perturbation `V = (η/2) v·σ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub direction: Axis3,
    pub strength: f64,
}

impl NoiseSpec {
    pub fn new(direction: Axis3, strength: f64) -> Result<Self> {
        if !(strength >= 0.0) || !strength.is_finite() {
            return Err(Error::OutOfRange {
                name: "eta",
                value: strength,
                range: "[0, ∞)",
            });
        }
        Ok(NoiseSpec {
            direction,
            strength,
        })
    }

    pub fn none() -> Self {
        NoiseSpec {
            direction: Axis3::Z,
            strength: 0.0,
        }
    }

    /// `η v`, the field added to the control.
    pub fn field(&self) -> [f64; 3] {
        let v = self.direction.vec();
        [self.strength * v[0], self.strength * v[1], self.strength * v[2]]
    }

    pub fn operator(&self) -> HermitianOp {
        let f = self.field();
        HermitianOp::from_bloch(0.0, [0.5 * f[0], 0.5 * f[1], 0.5 * f[2]])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum EtaMode {
    Fixed { eta: f64 },
    UniformUpTo { eta_max: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub trials: usize,
    pub seed: u64,
    pub eta_mode: EtaMode,
}

impl MonteCarloConfig {
    pub fn new(trials: usize, seed: u64, eta_mode: EtaMode) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        Ok(MonteCarloConfig {
            trials,
            seed,
            eta_mode,
        })
    }

    /// Independent generator for trial `index`.
    pub fn trial_rng(&self, index: usize) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }

    /// Noise of trial `index`: direction first, then strength.
    pub fn trial_noise(&self, index: usize) -> NoiseSpec {
        let mut rng = self.trial_rng(index);
        let direction = sample_noise_direction(&mut rng);
        let strength = match self.eta_mode {
            EtaMode::Fixed { eta } => eta,
            EtaMode::UniformUpTo { eta_max } => eta_max * rng.random::<f64>(),
        };
        NoiseSpec {
            direction,
            strength,
        }
    }
}

/// Midpoint steps used on each time-dependent segment. Constant segments are
/// always exponentiated in one exact step by [`propagate`]; the step count
/// still sets their sampling grid for integrals along the evolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagationConfig {
    pub steps_per_segment: usize,
}

impl PropagationConfig {
    pub fn new(steps_per_segment: usize) -> Result<Self> {
        if steps_per_segment == 0 {
            return Err(Error::Invalid("steps_per_segment must be at least 1".into()));
        }
        Ok(PropagationConfig { steps_per_segment })
    }

    /// 64 steps per π of the largest per-segment rotation angle.
    pub fn initial(pulse: &PulseProgram) -> Self {
        let angle = pulse
            .segments
            .iter()
            .map(Segment::rotation_angle)
            .fold(0.0, f64::max);
        PropagationConfig {
            steps_per_segment: ((64.0 * angle / PI).ceil() as usize).max(1),
        }
    }

    /// Starts from [`PropagationConfig::initial`] and doubles until two
    /// successive noise-free propagators differ by less than `1e-8`
    /// (max-entry distance after aligning the sign).
    pub fn converged(pulse: &PulseProgram) -> Self {
        let mut cfg = Self::initial(pulse);
        if pulse.segments.iter().all(|s| s.waveform.is_constant()) {
            return cfg;
        }
        let noise = NoiseSpec::none();
        let mut prev = propagate_su2(pulse, &noise, &cfg);
        while cfg.steps_per_segment < 1 << 22 {
            let next_cfg = PropagationConfig {
                steps_per_segment: 2 * cfg.steps_per_segment,
            };
            let next = propagate_su2(pulse, &noise, &next_cfg);
            let diff = su2_distance(&prev, &next);
            cfg = next_cfg;
            prev = next;
            if diff < 1e-8 {
                break;
            }
        }
        cfg
    }
}

/// `min over ±` of the max-entry distance between two `SU(2)` elements.
pub fn su2_distance(a: &Su2, b: &Su2) -> f64 {
    let plus = (a.a - b.a).norm().max((a.b - b.b).norm());
    let minus = (a.a + b.a).norm().max((a.b + b.b).norm());
    plus.min(minus)
}

/// How `θ` advances during a URC pulse.
#[derive(Clone, Debug, PartialEq)]
pub enum ThetaProfile {
    /// `θ` from 0 to `2π` at the largest admissible rate `Ω/√5`.
    Linear,
    /// `θ` from 0 to `2π` at a given rate.
    LinearRate(f64),
    /// Piecewise-linear `θ(t/T)` over a total duration `T`.
    Piecewise { reparam: ReparamPL, duration: f64 },
}

/// Pulse whose noise-free evolution is `U(t) = R_{n₁}(θ) R_{n₂}(2θ)`.
pub fn urc_pulse(n1: Axis3, n2: Axis3, omega: f64, profile: &ThetaProfile) -> Result<PulseProgram> {
    let dot = n1.dot(&n2);
    if dot.abs() > 1e-12 {
        return Err(Error::NotPerpendicular { dot });
    }
    let bound = omega / 5f64.sqrt();
    let check = |rate: f64| -> Result<()> {
        if rate.abs() > bound * (1.0 + 1e-12) {
            Err(Error::RateBound { rate, bound })
        } else {
            Ok(())
        }
    };
    let segments = match profile {
        ThetaProfile::Linear | ThetaProfile::LinearRate(_) => {
            let rate = match profile {
                ThetaProfile::LinearRate(r) => *r,
                _ => bound,
            };
            if rate == 0.0 {
                return Err(Error::Invalid("rate must be nonzero".into()));
            }
            check(rate)?;
            vec![Segment {
                duration: TAU / rate.abs(),
                waveform: Waveform::TwoAxisSweep {
                    n1,
                    n2,
                    theta0: 0.0,
                    rate,
                },
            }]
        }
        ThetaProfile::Piecewise { reparam, duration } => {
            if !(*duration > 0.0) {
                return Err(Error::OutOfRange {
                    name: "duration",
                    value: *duration,
                    range: "(0, ∞)",
                });
            }
            let knots = reparam.knots();
            let mut segs = Vec::new();
            for w in knots.windows(2) {
                let dt = (w[1].0 - w[0].0) * duration;
                let rate = (w[1].1 - w[0].1) / dt;
                check(rate)?;
                segs.push(Segment {
                    duration: dt,
                    waveform: Waveform::TwoAxisSweep {
                        n1,
                        n2,
                        theta0: w[0].1,
                        rate,
                    },
                });
            }
            segs
        }
    };
    PulseProgram::new("urc", omega, segments)
}

/// The standard URC identity pulse with `n₁ = z`, `n₂ = y`.
pub fn standard_urc(omega: f64) -> PulseProgram {
    urc_pulse(Axis3::Z, Axis3::Y, omega, &ThetaProfile::Linear).expect("valid parameters")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositeKind {
    Square,
    Corpse,
    Bb1,
}

impl CompositeKind {
    /// Elementary rotations `(θ, φ)`, each an in-plane drive about
    /// `(cos φ, sin φ, 0)`. BB1's `5π/2` phase is kept as written; only its
    /// cosine and sine enter the field.
    pub fn elements(&self) -> Vec<(f64, f64)> {
        match self {
            CompositeKind::Square => vec![(TAU, PI / 2.0)],
            CompositeKind::Corpse => vec![(3.0 * PI, PI / 2.0), (TAU, 1.5 * PI), (PI, PI / 2.0)],
            CompositeKind::Bb1 => vec![
                (PI, 7.0 * PI / 6.0),
                (TAU, 2.5 * PI),
                (PI, 7.0 * PI / 6.0),
                (TAU, PI / 2.0),
            ],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CompositeKind::Square => "square",
            CompositeKind::Corpse => "corpse",
            CompositeKind::Bb1 => "bb1",
        }
    }
}

fn in_plane(omega: f64, phi: f64) -> [f64; 3] {
    [omega * phi.cos(), omega * phi.sin(), 0.0]
}

pub fn composite_pulse(kind: CompositeKind, omega: f64) -> Result<PulseProgram> {
    let segments = kind
        .elements()
        .into_iter()
        .map(|(theta, phi)| Segment {
            duration: theta / omega,
            waveform: Waveform::Constant {
                u: in_plane(omega, phi),
            },
        })
        .collect();
    PulseProgram::new(kind.name(), omega, segments)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DdKind {
    Cpmg,
    Xy4,
    UrcRep,
}

impl DdKind {
    pub fn name(&self) -> &'static str {
        match self {
            DdKind::Cpmg => "cpmg",
            DdKind::Xy4 => "xy4",
            DdKind::UrcRep => "urc",
        }
    }
}

/// Default free-evolution interval `2π/Ω`.
pub fn default_tau(omega: f64) -> f64 {
    TAU / omega
}

/// One cycle of a decoupling sequence with rectangular π pulses of length
/// `π/Ω`.
pub fn dd_sequence(kind: DdKind, tau: f64, omega: f64) -> Result<PulseProgram> {
    if !(tau >= 0.0) {
        return Err(Error::OutOfRange {
            name: "tau",
            value: tau,
            range: "[0, ∞)",
        });
    }
    let free = |t: f64| Segment {
        duration: t,
        waveform: Waveform::Constant { u: [0.0; 3] },
    };
    let pi_pulse = |phi: f64| Segment {
        duration: PI / omega,
        waveform: Waveform::Constant {
            u: in_plane(omega, phi),
        },
    };
    let (x, y) = (0.0, PI / 2.0);
    let raw = match kind {
        DdKind::Cpmg => vec![free(tau), pi_pulse(y), free(2.0 * tau), pi_pulse(y), free(tau)],
        DdKind::Xy4 => vec![
            free(tau),
            pi_pulse(y),
            free(2.0 * tau),
            pi_pulse(x),
            free(2.0 * tau),
            pi_pulse(y),
            free(2.0 * tau),
            pi_pulse(x),
            free(tau),
        ],
        DdKind::UrcRep => return Ok(standard_urc(omega)),
    };
    let segments = raw.into_iter().filter(|s| s.duration > 0.0).collect();
    PulseProgram::new(kind.name(), omega, segments)
}

/// `H(t) = u(t)·σ/2 + (η/2) v·σ`.
pub fn hamiltonian_at(pulse: &PulseProgram, noise: &NoiseSpec, t: f64) -> Result<HermitianOp> {
    let u = pulse.field_at(t)?;
    let f = noise.field();
    Ok(HermitianOp::from_bloch(
        0.0,
        [0.5 * (u[0] + f[0]), 0.5 * (u[1] + f[1]), 0.5 * (u[2] + f[2])],
    ))
}

/// Time-ordered propagator as an `SU(2)` element.
pub fn propagate_su2(pulse: &PulseProgram, noise: &NoiseSpec, cfg: &PropagationConfig) -> Su2 {
    let f = noise.field();
    let mut u = Su2::IDENTITY;
    for seg in &pulse.segments {
        match &seg.waveform {
            Waveform::Constant { u: c } => {
                let w = [c[0] + f[0], c[1] + f[1], c[2] + f[2]];
                u = Su2::from_generator(w, seg.duration).mul(&u);
            }
            wave => {
                let n = cfg.steps_per_segment.max(1);
                let dt = seg.duration / n as f64;
                for k in 0..n {
                    let c = wave.field((k as f64 + 0.5) * dt);
                    let w = [c[0] + f[0], c[1] + f[1], c[2] + f[2]];
                    u = Su2::from_generator(w, dt).mul(&u);
                }
            }
        }
    }
    u
}

/// Ordered product of exact exponentials of `H` sampled at step midpoints.
pub fn propagate(pulse: &PulseProgram, noise: &NoiseSpec, cfg: &PropagationConfig) -> UnitaryOp {
    propagate_su2(pulse, noise, cfg).to_unitary()
}

/// Noise-free evolution sampled at the midpoint of every step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionSample {
    pub t_mid: f64,
    pub dt: f64,
    pub u: Su2,
}

/// Exact noise-free `U(t)` at the midpoints of `steps_per_segment` equal
/// steps on every segment.
pub fn noise_free_samples(pulse: &PulseProgram, cfg: &PropagationConfig) -> Vec<EvolutionSample> {
    let n = cfg.steps_per_segment.max(1);
    let mut out = Vec::with_capacity(n * pulse.segments.len());
    let mut start = 0.0;
    let mut u0 = Su2::IDENTITY;
    for seg in &pulse.segments {
        let dt = seg.duration / n as f64;
        for k in 0..n {
            let local = (k as f64 + 0.5) * dt;
            out.push(EvolutionSample {
                t_mid: start + local,
                dt,
                u: seg.waveform.exact_propagator(local).mul(&u0),
            });
        }
        u0 = seg.waveform.exact_propagator(seg.duration).mul(&u0);
        start += seg.duration;
    }
    out
}

/// `|Tr(Ū† U)|² / d²`.
pub fn gate_fidelity(target: &UnitaryOp, actual: &UnitaryOp) -> Result<f64> {
    if target.dim() != actual.dim() {
        return Err(Error::DimensionMismatch {
            expected: target.dim(),
            found: actual.dim(),
        });
    }
    let d = target.dim() as f64;
    Ok(target.mat().hs_inner(actual.mat()).norm_sqr() / (d * d))
}

fn su2_fidelity(target: &Su2, actual: &Su2) -> f64 {
    let t = target.hs_inner(actual);
    t * t / 4.0
}

/// `∫₀ᵀ U†(t) V U(t) dt` along the noise-free evolution, midpoint rule.
pub fn first_order_integral(pulse: &PulseProgram, v: &HermitianOp, cfg: &PropagationConfig) -> Result<CMat> {
    if v.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: v.dim(),
        });
    }
    let samples = noise_free_samples(pulse, cfg);
    let mut acc = [C64::new(0.0, 0.0); 4];
    let mut parts: [Vec<C64>; 4] = Default::default();
    for smp in &samples {
        let u = smp.u.to_unitary().into_mat();
        let term = (&(&u.adjoint() * v.mat()) * &u).scale_real(smp.dt);
        for (i, p) in parts.iter_mut().enumerate() {
            p.push(term.get(i / 2, i % 2));
        }
    }
    for (i, p) in parts.iter().enumerate() {
        acc[i] = crate::numeric::pairwise_sum_complex(p);
    }
    CMat::from_row_major(2, &acc)
}

/// `1 − (1/d) Tr[(∫U†VU dt)²]` with `steps` midpoint samples per segment.
pub fn fidelity_second_order(pulse: &PulseProgram, noise: &NoiseSpec, steps: usize) -> Result<f64> {
    let cfg = PropagationConfig::new(steps)?;
    let m = first_order_integral(pulse, &noise.operator(), &cfg)?;
    Ok(1.0 - (&m * &m).trace().re / 2.0)
}

/// Mean and standard error over Monte Carlo trials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityStats {
    pub mean: f64,
    pub std_err: f64,
    pub trials: usize,
}

impl FidelityStats {
    fn from_values(values: &[f64]) -> Self {
        let (mean, std_err) = mean_and_stderr(values);
        FidelityStats {
            mean,
            std_err,
            trials: values.len(),
        }
    }

    /// `(self.mean − other.mean) / sqrt(se₁² + se₂²)`.
    pub fn separation(&self, other: &FidelityStats) -> f64 {
        let se = (self.std_err * self.std_err + other.std_err * other.std_err).sqrt();
        (self.mean - other.mean) / se
    }
}

/// Gate fidelity averaged over seeded random noise directions (and, with
/// [`EtaMode::UniformUpTo`], strengths).
pub fn noise_averaged_fidelity(
    pulse: &PulseProgram,
    target: &UnitaryOp,
    mc: &MonteCarloConfig,
    cfg: &PropagationConfig,
) -> Result<FidelityStats> {
    let tgt = Su2::from_unitary(&target.to_special())?;
    let values: Vec<f64> = (0..mc.trials)
        .into_par_iter()
        .map(|i| {
            let noise = mc.trial_noise(i);
            su2_fidelity(&tgt, &propagate_su2(pulse, &noise, cfg))
        })
        .collect();
    Ok(FidelityStats::from_values(&values))
}

/// Per-repetition fidelity of a repeated cycle, averaged over realizations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemoryDecay {
    /// `(r, mean F)` for `r = 1..=R`.
    pub curve: Vec<(usize, f64)>,
    /// Mean over repetitions and realizations.
    pub run_mean: f64,
    /// Standard error of the per-realization run means.
    pub run_std_err: f64,
    pub cycle_duration: f64,
}

/// Fidelity to the identity after `r` repetitions of one noisy cycle, with
/// each realization's noise frozen across repetitions.
pub fn memory_decay(
    kind: DdKind,
    repetitions: usize,
    mc: &MonteCarloConfig,
    cfg: &PropagationConfig,
    tau: f64,
    omega: f64,
) -> Result<MemoryDecay> {
    if repetitions == 0 {
        return Err(Error::Invalid("repetitions must be at least 1".into()));
    }
    let cycle = dd_sequence(kind, tau, omega)?;
    let per_realization: Vec<Vec<f64>> = (0..mc.trials)
        .into_par_iter()
        .map(|i| {
            let noise = mc.trial_noise(i);
            let c = propagate_su2(&cycle, &noise, cfg);
            let mut u = Su2::IDENTITY;
            (0..repetitions)
                .map(|_| {
                    u = c.mul(&u);
                    su2_fidelity(&Su2::IDENTITY, &u)
                })
                .collect()
        })
        .collect();
    let curve = (0..repetitions)
        .map(|r| {
            let col: Vec<f64> = per_realization.iter().map(|f| f[r]).collect();
            (r + 1, pairwise_sum(&col) / col.len() as f64)
        })
        .collect();
    let run_means: Vec<f64> = per_realization
        .iter()
        .map(|f| pairwise_sum(f) / f.len() as f64)
        .collect();
    let (run_mean, run_std_err) = mean_and_stderr(&run_means);
    Ok(MemoryDecay {
        curve,
        run_mean,
        run_std_err,
        cycle_duration: cycle.total_duration(),
    })
}

/// Repetition counts giving every kind the same total time, namely
/// `reference_reps` cycles of the shortest kind, to within half a cycle.
pub fn equal_time_repetitions(kinds: &[DdKind], reference_reps: usize, tau: f64, omega: f64) -> Result<Vec<usize>> {
    let durations = kinds
        .iter()
        .map(|k| dd_sequence(*k, tau, omega).map(|p| p.total_duration()))
        .collect::<Result<Vec<f64>>>()?;
    let shortest = durations.iter().cloned().fold(f64::INFINITY, f64::min);
    let total = reference_reps as f64 * shortest;
    Ok(durations
        .iter()
        .map(|d| ((total / d).round() as usize).max(1))
        .collect())
}

/// Filter functions `FF_x, FF_y, FF_z` on a frequency grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterFunction {
    pub omega: Vec<f64>,
    pub ff: [Vec<f64>; 3],
}

/// `FF_α(ω) = Σ_k |ω ∫₀ᵀ R_{αk}(t) e^{iωt} dt|²`,
/// `R_{αk} = Tr(U† σ_α U σ_k)/2` on the noise-free evolution.
///
/// `R` is held at its step-midpoint value and `e^{iωt}` is integrated
/// exactly over each step.
pub fn filter_function(pulse: &PulseProgram, omegas: &[f64], cfg: &PropagationConfig) -> Result<FilterFunction> {
    if let Some(w) = omegas.iter().find(|w| !(**w >= 0.0)) {
        return Err(Error::OutOfRange {
            name: "omega",
            value: *w,
            range: "[0, ∞)",
        });
    }
    let samples = noise_free_samples(pulse, cfg);
    let rs: Vec<[[f64; 3]; 3]> = samples.iter().map(|s| s.u.adjoint_action()).collect();
    let per_omega: Vec<[f64; 3]> = omegas
        .par_iter()
        .map(|&w| {
            let weights: Vec<C64> = samples
                .iter()
                .map(|s| {
                    let half = 0.5 * w * s.dt;
                    let sinc = if half == 0.0 { 1.0 } else { half.sin() / half };
                    C64::from_polar(s.dt * sinc, w * s.t_mid)
                })
                .collect();
            let mut out = [0.0; 3];
            for (alpha, o) in out.iter_mut().enumerate() {
                let mut total = 0.0;
                for k in 0..3 {
                    let terms: Vec<C64> = rs
                        .iter()
                        .zip(&weights)
                        .map(|(r, wt)| wt * r[alpha][k])
                        .collect();
                    let integral = crate::numeric::pairwise_sum_complex(&terms);
                    total += (integral * c64(w, 0.0)).norm_sqr();
                }
                *o = total;
            }
            out
        })
        .collect();
    Ok(FilterFunction {
        omega: omegas.to_vec(),
        ff: [
            per_omega.iter().map(|x| x[0]).collect(),
            per_omega.iter().map(|x| x[1]).collect(),
            per_omega.iter().map(|x| x[2]).collect(),
        ],
    })
}

/// Uniform direction on `S²` from a normalized 3-D Gaussian.
pub fn sample_noise_direction<R: Rng + ?Sized>(rng: &mut R) -> Axis3 {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        if let Ok(a) = Axis3::normalized(v) {
            if norm3(&v) > 1e-12 {
                return a;
            }
        }
    }
}
