//! Continuous unitary 1-design paths.
//!
//! A [`UnitaryPath`] maps `s ∈ [0, 1]` to a unitary. Closed families are
//! parameterized by `θ = 2πs`; the open family reparameterizes a closed
//! two-axis path with a piecewise-linear `θ(s)` and conjugates it so that it
//! ends on a chosen target gate.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qmat::{c64, overlap, tensor, Axis3, CMat, Su2, UnitaryOp, C64};
use crate::sphere::{CurveSpec, SpherePoint};

/// Whether `U(1)` returns to `U(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodNote {
    Closed,
    ClosedUpToPhase,
    Open,
}

/// Continuous piecewise-linear map `s ↦ θ(s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReparamPL {
    knots: Vec<(f64, f64)>,
}

impl ReparamPL {
    /// Knots `(s, θ)` with `s` strictly increasing from 0 to 1.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Invalid("a reparameterization needs at least two knots".into()));
        }
        if knots[0].0 != 0.0 || knots[knots.len() - 1].0 != 1.0 {
            return Err(Error::Invalid("knots must start at s = 0 and end at s = 1".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Invalid("knot positions must be strictly increasing".into()));
        }
        if knots.iter().any(|k| !k.1.is_finite()) {
            return Err(Error::Invalid("knot values must be finite".into()));
        }
        Ok(ReparamPL { knots })
    }

    /// `θ(s) = θ_end · s`.
    pub fn linear(theta_end: f64) -> Self {
        ReparamPL {
            knots: vec![(0.0, 0.0), (1.0, theta_end)],
        }
    }

    /// Double, single, double speed over `[0, s*/2]`, `[s*/2, 1 − s*/2]`,
    /// `[1 − s*/2, 1]`, so that a closed path of period `2π` is traversed
    /// once and then continued to `θ = 2π(1 + s*)`.
    pub fn open_profile(s_star: f64) -> Result<Self> {
        if !(s_star > 0.0 && s_star < 1.0) {
            return Err(Error::OutOfRange {
                name: "s_star",
                value: s_star,
                range: "(0, 1)",
            });
        }
        ReparamPL::new(vec![
            (0.0, 0.0),
            (0.5 * s_star, TAU * s_star),
            (1.0 - 0.5 * s_star, TAU),
            (1.0, TAU * (1.0 + s_star)),
        ])
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    fn segment(&self, s: f64) -> usize {
        let last = self.knots.len() - 2;
        self.knots[1..]
            .iter()
            .position(|k| s <= k.0)
            .unwrap_or(last)
            .min(last)
    }

    pub fn eval(&self, s: f64) -> f64 {
        let i = self.segment(s);
        let (s0, t0) = self.knots[i];
        let (s1, t1) = self.knots[i + 1];
        t0 + (t1 - t0) * (s - s0) / (s1 - s0)
    }

    /// `dθ/ds`, right-continuous at knots.
    pub fn slope(&self, s: f64) -> f64 {
        let i = self
            .knots
            .windows(2)
            .position(|w| s >= w[0].0 && s < w[1].0)
            .unwrap_or(self.knots.len() - 2);
        let (s0, t0) = self.knots[i];
        let (s1, t1) = self.knots[i + 1];
        (t1 - t0) / (s1 - s0)
    }

    pub fn max_slope(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
            .fold(0.0, f64::max)
    }
}

/// Shift, phase and Walsh–Hadamard operators of a qudit.
#[derive(Clone, Debug)]
pub struct HWSet {
    pub d: usize,
    pub x: UnitaryOp,
    pub z: UnitaryOp,
    pub omega: C64,
    pub w: UnitaryOp,
    pub q: UnitaryOp,
}

pub fn hw_set(d: usize) -> Result<HWSet> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            range: "[2, ∞)",
        });
    }
    let omega = C64::from_polar(1.0, TAU / d as f64);
    let zero = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let x = CMat::from_fn(d, |i, j| if i == (j + 1) % d { one } else { zero });
    let z = CMat::from_fn(d, |i, j| if i == j { omega.powu(i as u32) } else { zero });
    let w = walsh_hadamard(d);
    let qdiag: Vec<C64> = (0..d)
        .map(|k| C64::from_polar(1.0, TAU * k as f64 / (d * d) as f64))
        .collect();
    let q = &(&w * &CMat::diagonal(&qdiag)) * &w.adjoint();
    Ok(HWSet {
        d,
        x: UnitaryOp::new(x)?,
        z: UnitaryOp::new(z)?,
        omega,
        w: UnitaryOp::new(w)?,
        q: UnitaryOp::new(q)?,
    })
}

/// `W = (1/√d) Σ ω^{−kj} |k⟩⟨j|`.
fn walsh_hadamard(d: usize) -> CMat {
    let norm = 1.0 / (d as f64).sqrt();
    CMat::from_fn(d, |k, j| {
        C64::from_polar(norm, -TAU * ((k * j) % d) as f64 / d as f64)
    })
}

/// The family a path belongs to, with its parameters.
#[derive(Clone, Debug)]
pub enum PathKind {
    /// `U(θ) = R_{n₁}(θ) R_{n₂}(2θ)`.
    TwoAxis { n1: Axis3, n2: Axis3 },
    /// `U(θ) = R_n(θ) R_{n⊥(2θ)}(π/2)` where `n⊥(2θ)` is `n_perp` turned
    /// by `−2θ` about `n`.
    FixedAngleAxis { n: Axis3, n_perp: Axis3 },
    /// A two-axis path reparameterized and conjugated to end on `target`.
    OpenTarget {
        base: Box<UnitaryPath>,
        target: UnitaryOp,
        s_star: f64,
        conjugator: UnitaryOp,
        reparam: ReparamPL,
    },
    /// Tensor product of two-axis paths, qubit `m` running at `multipliers[m]`.
    TensorQubits {
        axes: Vec<(Axis3, Axis3)>,
        multipliers: Vec<f64>,
    },
    /// Lift of the base curve `(1, e^{iNθ}, …, e^{i(d−1)Nθ})/√d` through
    /// an embedded `SU(d−1)` path, `N = n_prev`.
    FiberBundle {
        d: usize,
        inner: Box<UnitaryPath>,
        n_prev: usize,
    },
    /// `U(θ) = W diag(e^{ikθ}) W† diag(e^{ikdθ})`.
    HeisenbergWeyl { d: usize },
    /// Image of an `S³` curve under the `S³ ≅ SU(2)` identification.
    SphereCurve { curve: CurveSpec },
}

/// A continuous path `s ∈ [0, 1] ↦ U(s)`.
#[derive(Clone, Debug)]
pub struct UnitaryPath {
    dim: usize,
    kind: PathKind,
    period_note: PeriodNote,
}

fn require_perpendicular(a: &Axis3, b: &Axis3) -> Result<()> {
    let dot = a.dot(b);
    if dot.abs() > 1e-12 {
        return Err(Error::NotPerpendicular { dot });
    }
    Ok(())
}

impl UnitaryPath {
    pub fn two_axis(n1: Axis3, n2: Axis3) -> Result<Self> {
        require_perpendicular(&n1, &n2)?;
        Ok(UnitaryPath {
            dim: 2,
            kind: PathKind::TwoAxis { n1, n2 },
            period_note: PeriodNote::ClosedUpToPhase,
        })
    }

    pub fn fixed_angle(n: Axis3, n_perp: Axis3) -> Result<Self> {
        require_perpendicular(&n, &n_perp)?;
        Ok(UnitaryPath {
            dim: 2,
            kind: PathKind::FixedAngleAxis { n, n_perp },
            period_note: PeriodNote::ClosedUpToPhase,
        })
    }

    /// Tensor path with multipliers `4^{m−1}` on qubit `m`.
    pub fn tensor_qubits(axes: Vec<(Axis3, Axis3)>) -> Result<Self> {
        let multipliers = (0..axes.len()).map(|m| 4f64.powi(m as i32)).collect();
        Self::tensor_qubits_with(axes, multipliers)
    }

    pub fn tensor_qubits_with(axes: Vec<(Axis3, Axis3)>, multipliers: Vec<f64>) -> Result<Self> {
        if axes.is_empty() || axes.len() != multipliers.len() {
            return Err(Error::Invalid(
                "tensor path needs one multiplier per qubit and at least one qubit".into(),
            ));
        }
        if axes.len() > 5 {
            return Err(Error::Invalid("tensor paths are limited to 5 qubits".into()));
        }
        for (a, b) in &axes {
            require_perpendicular(a, b)?;
        }
        let dim = 1 << axes.len();
        Ok(UnitaryPath {
            dim,
            kind: PathKind::TensorQubits { axes, multipliers },
            period_note: PeriodNote::ClosedUpToPhase,
        })
    }

    /// Canonical recursive fiber-bundle path for `SU(d)`: the `ξ` path in
    /// `SU(2)` (threshold 5), lifted with base frequency equal to the
    /// previous level's sampling threshold.
    pub fn fiber_bundle(d: usize) -> Result<Self> {
        if !(2..=6).contains(&d) {
            return Err(Error::OutOfRange {
                name: "d",
                value: d as f64,
                range: "[2, 6]",
            });
        }
        let mut path = UnitaryPath::sphere_curve(CurveSpec::xi())?;
        let mut n_prev = 5;
        for level in 3..=d {
            path = UnitaryPath::fiber_bundle_with(path, n_prev)?;
            debug_assert_eq!(path.dim, level);
            n_prev *= 5;
        }
        Ok(path)
    }

    /// One lifting step on top of an arbitrary inner path.
    pub fn fiber_bundle_with(inner: UnitaryPath, n_prev: usize) -> Result<Self> {
        if n_prev == 0 {
            return Err(Error::Invalid("n_prev must be positive".into()));
        }
        let d = inner.dim + 1;
        Ok(UnitaryPath {
            dim: d,
            kind: PathKind::FiberBundle {
                d,
                inner: Box::new(inner),
                n_prev,
            },
            period_note: PeriodNote::Closed,
        })
    }

    pub fn heisenberg_weyl(d: usize) -> Result<Self> {
        if !(2..=32).contains(&d) {
            return Err(Error::OutOfRange {
                name: "d",
                value: d as f64,
                range: "[2, 32]",
            });
        }
        Ok(UnitaryPath {
            dim: d,
            kind: PathKind::HeisenbergWeyl { d },
            period_note: PeriodNote::Closed,
        })
    }

    /// `SU(2)` path traced by an `S³` curve.
    pub fn sphere_curve(curve: CurveSpec) -> Result<Self> {
        if curve.ambient_dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: curve.ambient_dim(),
            });
        }
        let period_note = if curve.kind().is_antipodal() {
            PeriodNote::ClosedUpToPhase
        } else {
            PeriodNote::Closed
        };
        Ok(UnitaryPath {
            dim: 2,
            kind: PathKind::SphereCurve { curve },
            period_note,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &PathKind {
        &self.kind
    }

    pub fn period_note(&self) -> PeriodNote {
        self.period_note
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            PathKind::TwoAxis { .. } => "two-axis",
            PathKind::FixedAngleAxis { .. } => "fixed-angle",
            PathKind::OpenTarget { .. } => "open",
            PathKind::TensorQubits { .. } => "tensor",
            PathKind::FiberBundle { .. } => "fiber",
            PathKind::HeisenbergWeyl { .. } => "hw",
            PathKind::SphereCurve { .. } => "sphere-curve",
        }
    }

    /// Smallest equiangular sample count at which uniform averages along
    /// the path are exact, where known.
    pub fn min_samples(&self) -> Option<usize> {
        match &self.kind {
            PathKind::TwoAxis { .. } | PathKind::FixedAngleAxis { .. } => Some(8),
            PathKind::TensorQubits { axes, .. } => Some(2 * 4usize.pow(axes.len() as u32)),
            PathKind::HeisenbergWeyl { d } => Some(d * d),
            PathKind::FiberBundle { d, .. } => match d {
                3 => Some(25),
                4 => Some(200),
                _ => None,
            },
            PathKind::SphereCurve { curve } => Some((2.0 * curve.bandwidth()).floor() as usize + 1),
            PathKind::OpenTarget { .. } => None,
        }
    }

    /// Evaluates at `s ∈ [0, 1]`.
    pub fn eval(&self, s: f64) -> Result<UnitaryOp> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::OutOfRange {
                name: "s",
                value: s,
                range: "[0, 1]",
            });
        }
        Ok(self.eval_unchecked(s))
    }

    /// Evaluates at any real `s` using the natural periodic extension.
    pub fn eval_unchecked(&self, s: f64) -> UnitaryOp {
        match &self.kind {
            PathKind::OpenTarget {
                base,
                conjugator,
                reparam,
                ..
            } => {
                let u = base.raw_at_theta(reparam.eval(s));
                let w = conjugator.mat();
                UnitaryOp::new_unchecked(&(w * &u) * &w.adjoint(), true)
            }
            PathKind::FiberBundle { .. } => {
                let u = self.raw_at_theta(TAU * s);
                let base = self.raw_at_theta(0.0);
                UnitaryOp::new_unchecked(&u * &base.adjoint(), true)
            }
            PathKind::HeisenbergWeyl { .. } => {
                let u = self.raw_at_theta(TAU * s);
                let special = (u.determinant() - c64(1.0, 0.0)).norm() <= 1e-10;
                UnitaryOp::new_unchecked(u, special)
            }
            _ => UnitaryOp::new_unchecked(self.raw_at_theta(TAU * s), true),
        }
    }

    /// Fast evaluation for `SU(2)` kinds.
    pub fn su2_at(&self, s: f64) -> Option<Su2> {
        let theta = TAU * s;
        match &self.kind {
            PathKind::TwoAxis { n1, n2 } => Some(two_axis_su2(n1, n2, theta)),
            PathKind::FixedAngleAxis { n, n_perp } => Some(fixed_angle_su2(n, n_perp, theta)),
            PathKind::SphereCurve { curve } => {
                let x = curve.eval_unchecked(s);
                Some(Su2 {
                    a: c64(x[0], x[1]),
                    b: c64(x[2], x[3]),
                })
            }
            _ => None,
        }
    }

    /// Unbased evaluation at angle `θ`.
    fn raw_at_theta(&self, theta: f64) -> CMat {
        match &self.kind {
            PathKind::TwoAxis { n1, n2 } => two_axis_su2(n1, n2, theta).to_unitary().into_mat(),
            PathKind::FixedAngleAxis { n, n_perp } => {
                fixed_angle_su2(n, n_perp, theta).to_unitary().into_mat()
            }
            PathKind::SphereCurve { curve } => {
                let x = curve.eval_unchecked(theta / TAU);
                Su2 {
                    a: c64(x[0], x[1]),
                    b: c64(x[2], x[3]),
                }
                .to_unitary()
                .into_mat()
            }
            PathKind::TensorQubits { axes, multipliers } => axes
                .iter()
                .zip(multipliers)
                .map(|((a, b), m)| two_axis_su2(a, b, m * theta).to_unitary().into_mat())
                .reduce(|acc, u| tensor(&acc, &u))
                .expect("at least one qubit"),
            PathKind::FiberBundle { d, inner, n_prev } => {
                let embedded = inner.raw_at_theta(theta).embed_lower();
                let norm = 1.0 / (*d as f64).sqrt();
                let c: Vec<C64> = (0..*d)
                    .map(|k| C64::from_polar(norm, (k * n_prev) as f64 * theta))
                    .collect();
                let rep = coset_matrix(&c).expect("base curve stays inside the chart");
                &embedded * &rep
            }
            PathKind::HeisenbergWeyl { d } => {
                let w = walsh_hadamard(*d);
                let inner: Vec<C64> = (0..*d).map(|k| C64::from_polar(1.0, k as f64 * theta)).collect();
                let outer: Vec<C64> = (0..*d)
                    .map(|k| C64::from_polar(1.0, (k * d) as f64 * theta))
                    .collect();
                let left = &(&w * &CMat::diagonal(&inner)) * &w.adjoint();
                &left * &CMat::diagonal(&outer)
            }
            PathKind::OpenTarget { .. } => self.eval_unchecked(theta / TAU).into_mat(),
        }
    }

    /// `n` equiangular samples `s_k = k/n`, `k = 0..n`.
    pub fn sample(&self, n: usize) -> Vec<UnitaryOp> {
        self.sample_offset(n, 0.0)
    }

    /// Samples at `s_k = k/n + offset` (periodic extension).
    pub fn sample_offset(&self, n: usize, offset: f64) -> Vec<UnitaryOp> {
        (0..n)
            .map(|k| self.eval_unchecked(k as f64 / n as f64 + offset))
            .collect()
    }

    /// JSON descriptor `{kind, dim, parameters}`.
    pub fn descriptor(&self) -> Value {
        let parameters = match &self.kind {
            PathKind::TwoAxis { n1, n2 } => json!({ "n1": n1, "n2": n2 }),
            PathKind::FixedAngleAxis { n, n_perp } => json!({ "n": n, "n_perp": n_perp }),
            PathKind::OpenTarget {
                base,
                target,
                s_star,
                conjugator,
                reparam,
            } => json!({
                "base": base.descriptor(),
                "target": target.mat(),
                "s_star": s_star,
                "conjugator": conjugator.mat(),
                "knots": reparam.knots(),
            }),
            PathKind::TensorQubits { axes, multipliers } => json!({
                "axes": axes.iter().map(|(a, b)| json!({ "n1": a, "n2": b })).collect::<Vec<_>>(),
                "multipliers": multipliers,
            }),
            PathKind::FiberBundle { d, inner, n_prev } => json!({
                "d": d,
                "inner": inner.descriptor(),
                "n_prev": n_prev,
            }),
            PathKind::HeisenbergWeyl { d } => json!({ "d": d }),
            PathKind::SphereCurve { curve } => json!({ "curve": curve }),
        };
        json!({
            "kind": self.kind_name(),
            "dim": self.dim,
            "period": self.period_note,
            "parameters": parameters,
        })
    }
}

fn two_axis_su2(n1: &Axis3, n2: &Axis3, theta: f64) -> Su2 {
    Su2::rotation(n1, theta).mul(&Su2::rotation(n2, 2.0 * theta))
}

fn fixed_angle_su2(n: &Axis3, n_perp: &Axis3, theta: f64) -> Su2 {
    let moving = n_perp.rotated(n, -2.0 * theta);
    Su2::rotation(n, theta).mul(&Su2::rotation(&moving, 0.5 * PI))
}

/// `U(s)` for a two-axis path.
pub fn eval_two_axis(path: &UnitaryPath, s: f64) -> Result<UnitaryOp> {
    expect_kind(path, matches!(path.kind, PathKind::TwoAxis { .. }), "two-axis")?;
    path.eval(s)
}

pub fn eval_fixed_angle(path: &UnitaryPath, s: f64) -> Result<UnitaryOp> {
    expect_kind(path, matches!(path.kind, PathKind::FixedAngleAxis { .. }), "fixed-angle")?;
    path.eval(s)
}

pub fn eval_open_path(path: &UnitaryPath, s: f64) -> Result<UnitaryOp> {
    expect_kind(path, matches!(path.kind, PathKind::OpenTarget { .. }), "open")?;
    path.eval(s)
}

pub fn eval_tensor_path(path: &UnitaryPath, s: f64) -> Result<UnitaryOp> {
    expect_kind(path, matches!(path.kind, PathKind::TensorQubits { .. }), "tensor")?;
    path.eval(s)
}

pub fn eval_fiber_path(path: &UnitaryPath, s: f64) -> Result<UnitaryOp> {
    expect_kind(path, matches!(path.kind, PathKind::FiberBundle { .. }), "fiber")?;
    path.eval(s)
}

pub fn eval_hw_path(path: &UnitaryPath, s: f64) -> Result<UnitaryOp> {
    expect_kind(path, matches!(path.kind, PathKind::HeisenbergWeyl { .. }), "hw")?;
    path.eval(s)
}

fn expect_kind(path: &UnitaryPath, ok: bool, want: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "expected a {want} path, got {}",
            path.kind_name()
        )))
    }
}

/// `U = [[x₁ + ix₂, x₃ + ix₄], [−x₃ + ix₄, x₁ − ix₂]]`.
pub fn su2_from_s3(p: &SpherePoint) -> Result<UnitaryOp> {
    let (a, b) = p.as_complex_pair()?;
    Ok(Su2 { a, b }.to_unitary())
}

/// Inverse of [`su2_from_s3`].
pub fn s3_from_su2(u: &UnitaryOp) -> Result<SpherePoint> {
    let s = Su2::from_unitary(u)?;
    SpherePoint::normalized(vec![s.a.re, s.a.im, s.b.re, s.b.im])
}

/// Special unitary with first row `c`, completed by Gram–Schmidt.
///
/// Requires `‖c‖ = 1` and a nonzero last component.
pub fn fiber_coset_representative(c: &[C64]) -> Result<UnitaryOp> {
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if c.len() < 2 {
        return Err(Error::Invalid("coset representative needs d ≥ 2".into()));
    }
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitNorm { norm });
    }
    let m = coset_matrix(c)?;
    UnitaryOp::with_tolerance(m, 1e-11)
}

fn coset_matrix(c: &[C64]) -> Result<CMat> {
    let d = c.len();
    let last = c[d - 1].norm();
    if last <= 1e-14 {
        return Err(Error::ChartBoundary(format!(
            "last component of the first row vanishes (|c_{d}| = {last:e})"
        )));
    }
    let r = (1.0 - c[0].norm_sqr()).max(0.0).sqrt();
    let tail: Vec<C64> = c[1..].iter().map(|z| z / r).collect();
    let phase = c[d - 1].conj() / last;
    let zero = c64(0.0, 0.0);

    let inner = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x * y.conj()).sum() };
    let mut basis: Vec<Vec<C64>> = vec![tail.clone()];
    let mut rows: Vec<Vec<C64>> = vec![c.to_vec()];
    for k in 0..d.saturating_sub(2) {
        let mut v = vec![zero; d - 1];
        v[k] = c64(1.0, 0.0);
        for b in &basis {
            let proj = inner(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= proj * y);
        }
        let n = inner(&v, &v).re.sqrt();
        if n <= 1e-12 {
            return Err(Error::ChartBoundary("Gram–Schmidt step degenerated".into()));
        }
        v.iter_mut().for_each(|x| *x /= n);
        basis.push(v.clone());
        let mut row = vec![zero];
        row.extend(v.iter().map(|x| x * phase));
        rows.push(row);
    }
    let mut last_row: Vec<C64> = c.iter().map(|z| -c[0].conj() * z / r).collect();
    last_row[0] += c64(1.0 / r, 0.0);
    rows.push(last_row);

    let entries: Vec<C64> = rows.iter().flatten().copied().collect();
    let mut m = CMat::from_row_major(d, &entries)?;
    let det = m.determinant();
    let fix = det.conj() / det.norm();
    for j in 0..d {
        let z = m.get(d - 1, j);
        m.set(d - 1, j, z * fix);
    }
    Ok(m)
}

/// Trace-matching condition solved for the open-path construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpenPathRoots {
    /// All `θ ∈ [0, 2π]` with `|Tr U(θ)|/2 = |Tr target|/2`.
    pub roots: Vec<f64>,
    /// The root used.
    pub theta_star: f64,
}

/// Roots of `f(U(θ), I) = f(target, I)` with `f(U, V) = |Tr(UV†)|/2`.
///
/// Uses the signed trace `Tr U(θ)/2`, which is real on `SU(2)`, so tangential
/// zeros of `f` become sign changes.
pub fn open_path_roots(base: &UnitaryPath, target: &UnitaryOp) -> Result<Vec<f64>> {
    let (n1, n2) = match &base.kind {
        PathKind::TwoAxis { n1, n2 } => (*n1, *n2),
        _ => return Err(Error::Invalid("open paths are built from a two-axis path".into())),
    };
    let level = 0.5 * target.mat().trace().norm();
    let h = |theta: f64| 0.5 * two_axis_su2(&n1, &n2, theta).trace();
    let cells = 256;
    let step = TAU / cells as f64;
    let mut roots: Vec<f64> = Vec::new();
    let push = |x: f64, roots: &mut Vec<f64>| {
        if !roots.iter().any(|r| (r - x).abs() < 1e-9) {
            roots.push(x);
        }
    };
    for sign in [1.0, -1.0] {
        let g = |theta: f64| h(theta) - sign * level;
        for k in 0..cells {
            let (a, b) = (k as f64 * step, (k + 1) as f64 * step);
            let (ga, gb) = (g(a), g(b));
            if ga.abs() <= 1e-14 {
                push(a, &mut roots);
                continue;
            }
            if gb.abs() <= 1e-14 || ga * gb > 0.0 {
                continue;
            }
            let (mut lo, mut hi, mut glo) = (a, b, ga);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if gm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (gm > 0.0) == (glo > 0.0) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            push(0.5 * (lo + hi), &mut roots);
        }
        if level == 0.0 {
            break;
        }
    }
    roots.retain(|&r| r > 1e-12);
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    Ok(roots)
}

/// Builds the open path from `I` to `target` on top of a two-axis path.
///
/// The turning angle `θ*` is the first root at which the base path already
/// equals the target up to phase, or the first root otherwise; the
/// conjugator aligns the eigenbases of `U(θ*)` and the target.
pub fn build_open_path(base: &UnitaryPath, target: &UnitaryOp) -> Result<UnitaryPath> {
    if target.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: target.dim(),
        });
    }
    let target = target.to_special();
    let identity = UnitaryOp::identity(2);
    if overlap(&identity, &target)? >= 2.0 - 1e-12 {
        return Ok(base.clone());
    }
    let roots = open_path_roots(base, &target)?;
    let (n1, n2) = match &base.kind {
        PathKind::TwoAxis { n1, n2 } => (*n1, *n2),
        _ => unreachable!("checked by open_path_roots"),
    };
    let at = |theta: f64| two_axis_su2(&n1, &n2, theta).to_unitary();
    let theta_star = roots
        .iter()
        .copied()
        .find(|&r| at(r).equal_up_to_phase(&target, 1e-9))
        .or_else(|| roots.first().copied())
        .ok_or(Error::RootNotFound)?;
    let s_star = theta_star / TAU;
    let u_star = at(theta_star);
    let matched = if u_star.mat().trace().re * target.mat().trace().re < 0.0 {
        target.phased(PI)
    } else {
        target.clone()
    };
    let vu = eigenbasis_su2(&Su2::from_unitary(&u_star)?);
    let vt = eigenbasis_su2(&Su2 {
        a: matched.mat().get(0, 0),
        b: matched.mat().get(0, 1),
    });
    let conjugator = UnitaryOp::new(&vt * &vu.adjoint())?.to_special();
    let check = u_star.conjugated_by(&conjugator)?;
    if !check.equal_up_to_phase(&target, 1e-9) {
        return Err(Error::Invalid(
            "conjugator does not map the turning point onto the target".into(),
        ));
    }
    Ok(UnitaryPath {
        dim: 2,
        kind: PathKind::OpenTarget {
            base: Box::new(base.clone()),
            target,
            s_star,
            conjugator,
            reparam: ReparamPL::open_profile(s_star)?,
        },
        period_note: PeriodNote::Open,
    })
}

/// Eigenvector matrix of a non-scalar `SU(2)` element, columns ordered by
/// eigenvalue phase in `[−π, π)` and each column's largest entry made real
/// and positive.
fn eigenbasis_su2(u: &Su2) -> CMat {
    // u = cos α I − i sin α (m·σ); eigenvalue e^{−iα} on the +1 eigenvector
    // of m·σ and e^{iα} on the −1 eigenvector.
    let m = [-u.b.im, -u.b.re, -u.a.im];
    let sin_alpha = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
    let alpha = sin_alpha.atan2(u.a.re);
    let axis = Axis3::normalized(m).expect("non-scalar element");
    let eigvec = |sign: f64| -> [C64; 2] {
        let p = axis.sigma().scale_real(sign);
        let p00 = c64(1.0, 0.0) + p.get(0, 0);
        let p10 = p.get(1, 0);
        let p01 = p.get(0, 1);
        let p11 = c64(1.0, 0.0) + p.get(1, 1);
        let (v0, v1) = if p00.norm_sqr() + p10.norm_sqr() >= p01.norm_sqr() + p11.norm_sqr() {
            (p00, p10)
        } else {
            (p01, p11)
        };
        let n = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
        let big = if v0.norm() >= v1.norm() { v0 } else { v1 };
        let fix = big.conj() / big.norm();
        [v0 * fix / n, v1 * fix / n]
    };
    let wrap = |x: f64| (x + PI).rem_euclid(TAU) - PI;
    let mut cols = [(wrap(-alpha), eigvec(1.0)), (wrap(alpha), eigvec(-1.0))];
    cols.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite phases"));
    CMat::from_fn(2, |i, j| cols[j].1[i])
}
