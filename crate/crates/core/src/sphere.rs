//! Spherical design curves, discrete designs and maps out of `S³`.
//!
//! Every curve here is a trigonometric polynomial in `θ = 2πs` with
//! constant speed, so uniform samples in `s` are uniform in arc length and
//! Riemann sums of trig-polynomial integrands are exact once the sample
//! count exceeds the bandwidth.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, pairwise_sum};
use crate::qmat::{c64, C64};

/// Tolerance on `‖x‖ = 1` for sphere points.
pub const POINT_TOL: f64 = 1e-12;

/// Unit vector in `R^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SpherePoint(Vec<f64>);

impl SpherePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Invalid("sphere point needs at least one coordinate".into()));
        }
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > POINT_TOL {
            return Err(Error::NotUnitNorm { norm });
        }
        Ok(SpherePoint(coords))
    }

    /// Normalizes a nonzero vector onto the sphere.
    pub fn normalized(mut coords: Vec<f64>) -> Result<Self> {
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotUnitNorm { norm });
        }
        coords.iter_mut().for_each(|x| *x /= norm);
        Ok(SpherePoint(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn neg(&self) -> SpherePoint {
        SpherePoint(self.0.iter().map(|x| -x).collect())
    }

    /// Reads a point of `S³` as the complex pair `(x₁ + ix₂, x₃ + ix₄)`.
    pub fn as_complex_pair(&self) -> Result<(C64, C64)> {
        require_s3(self)?;
        Ok((c64(self.0[0], self.0[1]), c64(self.0[2], self.0[3])))
    }

    pub fn from_complex_pair(z1: C64, z2: C64) -> Result<Self> {
        SpherePoint::new(vec![z1.re, z1.im, z2.re, z2.im])
    }
}

impl TryFrom<Vec<f64>> for SpherePoint {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        SpherePoint::new(v)
    }
}

impl From<SpherePoint> for Vec<f64> {
    fn from(p: SpherePoint) -> Vec<f64> {
        p.0
    }
}

fn require_s3(p: &SpherePoint) -> Result<()> {
    if p.ambient_dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: p.ambient_dim(),
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveKind {
    Xi,
    Gamma,
    GammaTilde,
    XiPrime,
    GammaPrime,
    GammaTildePrime,
    XiPhi,
    GammaPhi,
    GammaTildePhi,
    CanonicalTrig,
}

impl CurveKind {
    pub const ALL: [CurveKind; 10] = [
        CurveKind::Xi,
        CurveKind::Gamma,
        CurveKind::GammaTilde,
        CurveKind::XiPrime,
        CurveKind::GammaPrime,
        CurveKind::GammaTildePrime,
        CurveKind::XiPhi,
        CurveKind::GammaPhi,
        CurveKind::GammaTildePhi,
        CurveKind::CanonicalTrig,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CurveKind::Xi => "xi",
            CurveKind::Gamma => "gamma",
            CurveKind::GammaTilde => "gamma-tilde",
            CurveKind::XiPrime => "xi-prime",
            CurveKind::GammaPrime => "gamma-prime",
            CurveKind::GammaTildePrime => "gamma-tilde-prime",
            CurveKind::XiPhi => "xi-phi",
            CurveKind::GammaPhi => "gamma-phi",
            CurveKind::GammaTildePhi => "gamma-tilde-phi",
            CurveKind::CanonicalTrig => "canonical-trig",
        }
    }

    pub fn from_name(name: &str) -> Option<CurveKind> {
        CurveKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn has_phi(&self) -> bool {
        matches!(
            self,
            CurveKind::XiPhi | CurveKind::GammaPhi | CurveKind::GammaTildePhi
        )
    }

    /// Whether `eval(1) = −eval(0)` rather than `eval(1) = eval(0)`.
    pub fn is_antipodal(&self) -> bool {
        matches!(
            self,
            CurveKind::GammaTilde | CurveKind::GammaTildePrime | CurveKind::GammaTildePhi
        )
    }
}

/// One term `c · e^{i f θ}` of a complex coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Term {
    coeff: C64,
    freq: f64,
}

/// A named parametric curve on a sphere, `θ = 2πs`, `s ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveSpecRepr", into = "CurveSpecRepr")]
pub struct CurveSpec {
    kind: CurveKind,
    phi: f64,
    half_dim: usize,
    coords: Vec<Vec<Term>>,
}

#[derive(Serialize, Deserialize)]
struct CurveSpecRepr {
    kind: CurveKind,
    #[serde(default)]
    phi: f64,
    #[serde(default = "default_half_dim")]
    half_dim: usize,
}

fn default_half_dim() -> usize {
    2
}

impl TryFrom<CurveSpecRepr> for CurveSpec {
    type Error = Error;
    fn try_from(r: CurveSpecRepr) -> Result<Self> {
        CurveSpec::new(r.kind, r.phi, r.half_dim)
    }
}

impl From<CurveSpec> for CurveSpecRepr {
    fn from(c: CurveSpec) -> Self {
        CurveSpecRepr {
            kind: c.kind,
            phi: c.phi,
            half_dim: c.half_dim,
        }
    }
}

fn t(re: f64, im: f64, freq: f64) -> Term {
    Term {
        coeff: c64(re, im),
        freq,
    }
}

fn phased(terms: Vec<Term>, phi: f64) -> Vec<Term> {
    let p = C64::from_polar(1.0, -phi);
    terms
        .into_iter()
        .map(|x| Term {
            coeff: x.coeff * p,
            freq: x.freq,
        })
        .collect()
}

impl CurveSpec {
    /// Builds a curve. `phi` is read only by the `*Phi` kinds and must lie
    /// in `[0, π]`; `half_dim` is read only by `CanonicalTrig`.
    pub fn new(kind: CurveKind, phi: f64, half_dim: usize) -> Result<Self> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let phi = if kind.has_phi() { phi } else { 0.0 };
        if kind.has_phi() && !(0.0..=PI).contains(&phi) {
            return Err(Error::OutOfRange {
                name: "phi",
                value: phi,
                range: "[0, π]",
            });
        }
        let half_dim = if kind == CurveKind::CanonicalTrig { half_dim } else { 2 };
        if half_dim == 0 {
            return Err(Error::OutOfRange {
                name: "half_dim",
                value: 0.0,
                range: "[1, ∞)",
            });
        }
        let coords = match kind {
            CurveKind::Xi => vec![vec![t(r, 0.0, 1.0)], vec![t(r, 0.0, 2.0)]],
            CurveKind::Gamma => vec![vec![t(r, 0.0, 1.0)], vec![t(r, 0.0, -3.0)]],
            CurveKind::GammaTilde => vec![vec![t(r, 0.0, 0.5)], vec![t(r, 0.0, -1.5)]],
            CurveKind::XiPrime | CurveKind::XiPhi => vec![
                vec![t(0.5, 0.0, 2.0), t(0.5, 0.0, 1.0)],
                phased(vec![t(0.0, 0.5, 2.0), t(0.0, -0.5, 1.0)], phi),
            ],
            CurveKind::GammaPrime | CurveKind::GammaPhi => vec![
                vec![t(0.5, 0.0, 1.0), t(0.5, 0.0, -3.0)],
                phased(vec![t(0.0, -0.5, 1.0), t(0.0, 0.5, -3.0)], phi),
            ],
            CurveKind::GammaTildePrime | CurveKind::GammaTildePhi => vec![
                vec![t(0.5, 0.0, 0.5), t(0.5, 0.0, -1.5)],
                phased(vec![t(0.0, -0.5, 0.5), t(0.0, 0.5, -1.5)], phi),
            ],
            CurveKind::CanonicalTrig => {
                let a = 1.0 / (half_dim as f64).sqrt();
                (1..=half_dim).map(|k| vec![t(a, 0.0, k as f64)]).collect()
            }
        };
        let spec = CurveSpec {
            kind,
            phi,
            half_dim,
            coords,
        };
        let variation = spec.speed_variation(64);
        if variation > 1e-9 {
            return Err(Error::Invalid(format!(
                "curve {} is not constant speed (relative variation {variation:e})",
                kind.name()
            )));
        }
        Ok(spec)
    }

    pub fn xi() -> Self {
        Self::new(CurveKind::Xi, 0.0, 2).expect("valid")
    }

    pub fn gamma() -> Self {
        Self::new(CurveKind::Gamma, 0.0, 2).expect("valid")
    }

    pub fn gamma_tilde() -> Self {
        Self::new(CurveKind::GammaTilde, 0.0, 2).expect("valid")
    }

    pub fn xi_prime() -> Self {
        Self::new(CurveKind::XiPrime, 0.0, 2).expect("valid")
    }

    pub fn gamma_prime() -> Self {
        Self::new(CurveKind::GammaPrime, 0.0, 2).expect("valid")
    }

    pub fn gamma_tilde_prime() -> Self {
        Self::new(CurveKind::GammaTildePrime, 0.0, 2).expect("valid")
    }

    pub fn xi_phi(phi: f64) -> Result<Self> {
        Self::new(CurveKind::XiPhi, phi, 2)
    }

    pub fn gamma_phi(phi: f64) -> Result<Self> {
        Self::new(CurveKind::GammaPhi, phi, 2)
    }

    pub fn gamma_tilde_phi(phi: f64) -> Result<Self> {
        Self::new(CurveKind::GammaTildePhi, phi, 2)
    }

    pub fn canonical_trig(half_dim: usize) -> Result<Self> {
        Self::new(CurveKind::CanonicalTrig, 0.0, half_dim)
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.coords.len()
    }

    /// Largest frequency (in cycles per unit `s`) of any coordinate.
    pub fn bandwidth(&self) -> f64 {
        self.coords
            .iter()
            .flatten()
            .fold(0.0, |acc, term| acc.max(term.freq.abs()))
    }

    /// Default number of samples for moment checks.
    pub fn default_samples(&self) -> usize {
        match self.kind {
            CurveKind::CanonicalTrig => 8 * self.half_dim * self.half_dim,
            _ => 128,
        }
    }

    fn complex_coords(&self, theta: f64) -> Vec<C64> {
        self.coords
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|x| x.coeff * C64::from_polar(1.0, x.freq * theta))
                    .sum()
            })
            .collect()
    }

    /// Evaluates at any real `s` (periodic extension), without range checks.
    pub fn eval_unchecked(&self, s: f64) -> Vec<f64> {
        self.complex_coords(TAU * s)
            .into_iter()
            .flat_map(|z| [z.re, z.im])
            .collect()
    }

    /// Analytic derivative `dx/ds`.
    pub fn velocity(&self, s: f64) -> Vec<f64> {
        let theta = TAU * s;
        self.coords
            .iter()
            .flat_map(|terms| {
                let dz: C64 = terms
                    .iter()
                    .map(|x| x.coeff * c64(0.0, TAU * x.freq) * C64::from_polar(1.0, x.freq * theta))
                    .sum();
                [dz.re, dz.im]
            })
            .collect()
    }

    pub fn speed(&self, s: f64) -> f64 {
        self.velocity(s).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `(max − min) / mean` of the speed over `n` uniform samples.
    pub fn speed_variation(&self, n: usize) -> f64 {
        let speeds: Vec<f64> = (0..n).map(|k| self.speed(k as f64 / n as f64)).collect();
        let max = speeds.iter().cloned().fold(f64::MIN, f64::max);
        let min = speeds.iter().cloned().fold(f64::MAX, f64::min);
        let mean = pairwise_sum(&speeds) / n as f64;
        if mean == 0.0 {
            0.0
        } else {
            (max - min) / mean
        }
    }

    /// Uniform samples `s_k = k/n`, `k = 0..n`.
    pub fn sample(&self, n: usize) -> Vec<SpherePoint> {
        (0..n)
            .map(|k| SpherePoint(self.eval_unchecked(k as f64 / n as f64)))
            .collect()
    }
}

/// Point of the curve at `s ∈ [0, 1]`.
pub fn eval_curve(spec: &CurveSpec, s: f64) -> Result<SpherePoint> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            range: "[0, 1]",
        });
    }
    Ok(SpherePoint(spec.eval_unchecked(s)))
}

/// Length of the curve over `s ∈ [0, 1]` by adaptive quadrature of the
/// analytic speed.
pub fn arc_length(spec: &CurveSpec) -> f64 {
    let scale = spec.speed(0.0).max(1.0);
    adaptive_simpson(&|s| spec.speed(s), 0.0, 1.0, 1e-12 * scale)
}

/// First and second moments of a point set or curve sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub m1: Vec<f64>,
    pub m2: Vec<Vec<f64>>,
    pub num_samples: usize,
    /// Set when the sample count does not exceed twice the bandwidth.
    pub undersampled: bool,
}

impl Moments {
    /// `‖m1‖₂`.
    pub fn first_residual(&self) -> f64 {
        self.m1.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `‖m2 − I/m‖_max` with `m` the ambient dimension.
    pub fn second_residual(&self) -> f64 {
        let m = self.m1.len();
        let mut worst = 0.0f64;
        for (i, row) in self.m2.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expect = if i == j { 1.0 / m as f64 } else { 0.0 };
                worst = worst.max((x - expect).abs());
            }
        }
        worst
    }
}

/// Moments of an explicit point set (uniform weights).
pub fn point_moments(points: &[SpherePoint]) -> Moments {
    let n = points.len();
    let m = points.first().map_or(0, |p| p.ambient_dim());
    let mut m1 = vec![0.0; m];
    let mut m2 = vec![vec![0.0; m]; m];
    let mut column = vec![0.0; n];
    for i in 0..m {
        for (k, p) in points.iter().enumerate() {
            column[k] = p.0[i];
        }
        m1[i] = pairwise_sum(&column) / n as f64;
        for j in 0..m {
            for (k, p) in points.iter().enumerate() {
                column[k] = p.0[i] * p.0[j];
            }
            m2[i][j] = pairwise_sum(&column) / n as f64;
        }
    }
    Moments {
        m1,
        m2,
        num_samples: n,
        undersampled: false,
    }
}

/// Arc-length–weighted moments from `num_samples` uniform samples.
pub fn curve_moments(spec: &CurveSpec, num_samples: usize) -> Moments {
    let mut mo = point_moments(&spec.sample(num_samples.max(1)));
    mo.undersampled = (num_samples as f64) < 2.0 * spec.bandwidth();
    mo
}

/// `max |avg x_i x_j x_k|` over all index triples; zero for a 3-design.
pub fn third_moment_residual(points: &[SpherePoint]) -> f64 {
    let n = points.len() as f64;
    let m = points.first().map_or(0, |p| p.ambient_dim());
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in i..m {
            for k in j..m {
                let terms: Vec<f64> = points.iter().map(|p| p.0[i] * p.0[j] * p.0[k]).collect();
                worst = worst.max((pairwise_sum(&terms) / n).abs());
            }
        }
    }
    worst
}

/// Input to [`is_spherical_design`].
#[derive(Clone, Copy, Debug)]
pub enum DesignInput<'a> {
    Points(&'a [SpherePoint]),
    Curve(&'a CurveSpec, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignCheck {
    pub is_design: bool,
    pub first_residual: f64,
    pub second_residual: Option<f64>,
    pub undersampled: bool,
}

/// Moment test for spherical `t`-designs, `t ∈ {1, 2}`.
pub fn is_spherical_design(input: DesignInput<'_>, t: u32, tol: f64) -> Result<DesignCheck> {
    if !(1..=2).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t as f64,
            range: "{1, 2}",
        });
    }
    let mo = match input {
        DesignInput::Points(points) => {
            if points.is_empty() {
                return Err(Error::Invalid("empty point set".into()));
            }
            point_moments(points)
        }
        DesignInput::Curve(spec, n) => curve_moments(spec, n),
    };
    let first = mo.first_residual();
    let second = (t == 2).then(|| mo.second_residual());
    Ok(DesignCheck {
        is_design: first <= tol && second.is_none_or(|r| r <= tol),
        first_residual: first,
        second_residual: second,
        undersampled: mo.undersampled,
    })
}

/// Finite point set with a declared design strength.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteDesign {
    pub points: Vec<SpherePoint>,
    pub strength: u32,
}

/// Vertices of a regular simplex inscribed in the unit sphere of `R^m`.
pub fn simplex_vertices(ambient_dim: usize) -> Result<DiscreteDesign> {
    if ambient_dim < 2 {
        return Err(Error::OutOfRange {
            name: "ambient_dim",
            value: ambient_dim as f64,
            range: "[2, ∞)",
        });
    }
    fn build(m: usize) -> Vec<Vec<f64>> {
        if m == 1 {
            return vec![vec![1.0], vec![-1.0]];
        }
        let mf = m as f64;
        let shrink = (1.0 - 1.0 / (mf * mf)).sqrt();
        let mut out = vec![{
            let mut v = vec![0.0; m];
            v[0] = 1.0;
            v
        }];
        for w in build(m - 1) {
            let mut v = Vec::with_capacity(m);
            v.push(-1.0 / mf);
            v.extend(w.iter().map(|x| shrink * x));
            out.push(v);
        }
        out
    }
    let points = build(ambient_dim)
        .into_iter()
        .map(SpherePoint::normalized)
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscreteDesign {
        points,
        strength: 2,
    })
}

/// Hopf map `S³ → S²`.
pub fn hopf_map(p: &SpherePoint) -> Result<SpherePoint> {
    let (z1, z2) = p.as_complex_pair()?;
    let w = 2.0 * z1 * z2.conj();
    SpherePoint::normalized(vec![z1.norm_sqr() - z2.norm_sqr(), w.re, w.im])
}

/// `C(θ, φ) = (cos θ, sin θ, cos φ, sin φ)/√2`.
pub fn clifford_torus(theta: f64, phi: f64) -> SpherePoint {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    SpherePoint(vec![r * theta.cos(), r * theta.sin(), r * phi.cos(), r * phi.sin()])
}

/// `f(x) = (x₁, x₂, x₃)/(1 + x₄)`.
pub fn stereographic_project(p: &SpherePoint) -> Result<[f64; 3]> {
    require_s3(p)?;
    let x = &p.0;
    let denom = 1.0 + x[3];
    if denom.abs() <= 1e-12 {
        return Err(Error::SouthPole);
    }
    Ok([x[0] / denom, x[1] / denom, x[2] / denom])
}

/// Fixed orthogonal maps of `R⁴` relating the curve families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum FixedRotation {
    /// Maps `ξ, γ, γ̃` to `ξ′, γ′, γ̃′`.
    R,
    /// Maps the lifted curve `ς` to `ξ_φ`.
    Q(f64),
    /// `diag(1, 1, 1, −1)`.
    T,
}

impl FixedRotation {
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        match *self {
            FixedRotation::R => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                [
                    [h, 0.0, h, 0.0],
                    [0.0, h, 0.0, h],
                    [0.0, h, 0.0, -h],
                    [-h, 0.0, h, 0.0],
                ]
            }
            FixedRotation::Q(phi) => {
                let (s, c) = phi.sin_cos();
                [
                    [1.0, 0.0, 0.0, 0.0],
                    [0.0, 0.0, 1.0, 0.0],
                    [0.0, c, 0.0, s],
                    [0.0, -s, 0.0, c],
                ]
            }
            FixedRotation::T => [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, -1.0],
            ],
        }
    }

    pub fn apply_vec(&self, x: &[f64]) -> [f64; 4] {
        let m = self.matrix();
        let mut out = [0.0; 4];
        for (i, row) in m.iter().enumerate() {
            out[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        out
    }
}

pub fn apply_fixed_rotation(which: FixedRotation, p: &SpherePoint) -> Result<SpherePoint> {
    require_s3(p)?;
    Ok(SpherePoint(which.apply_vec(&p.0).to_vec()))
}
