//! Dense complex linear algebra for small quantum operators.
//!
//! [`CMat`] is a square complex matrix. [`UnitaryOp`] and [`HermitianOp`]
//! wrap it with checked invariants, and [`Su2`] is a compact SU(2)
//! representation used on hot paths.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance on `‖U†U − I‖_max` for freshly constructed unitaries.
pub const UNITARY_TOL: f64 = 1e-12;
/// Tolerance on unitarity after long products.
pub const PRODUCT_TOL: f64 = 1e-10;
/// Tolerance on `|det U − 1|` for special unitaries.
pub const DET_TOL: f64 = 1e-10;
/// Tolerance on `‖H − H†‖_max`.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Square complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    m: DMatrix<C64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        CMat {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        CMat {
            m: DMatrix::identity(dim, dim),
        }
    }

    /// Builds a matrix from `dim * dim` entries in row-major order.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("matrix dimension must be at least 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        Ok(CMat {
            m: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    /// Builds a matrix from a function of `(row, column)`.
    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        CMat {
            m: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let d = entries.len();
        Self::from_fn(d, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.m[(i, j)] = z;
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        (0..self.dim()).map(|j| self.m[(i, j)]).collect()
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        CMat {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn determinant(&self) -> C64 {
        self.m.clone().determinant()
    }

    pub fn scale(&self, z: C64) -> Self {
        CMat { m: &self.m * z }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_max`.
    pub fn max_diff(&self, other: &CMat) -> f64 {
        (self - other).max_abs()
    }

    /// `Tr(self† other)`, the Hilbert–Schmidt inner product.
    pub fn hs_inner(&self, other: &CMat) -> C64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Integer matrix power by repeated squaring.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CMat::identity(self.dim());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Embeds `self` into the lower-right block of a `dim + 1` matrix with a
    /// leading 1.
    pub fn embed_lower(&self) -> Self {
        let d = self.dim();
        CMat::from_fn(d + 1, |i, j| match (i, j) {
            (0, 0) => C64::new(1.0, 0.0),
            (0, _) | (_, 0) => C64::new(0.0, 0.0),
            _ => self.m[(i - 1, j - 1)],
        })
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub(crate) fn from_nalgebra(m: DMatrix<C64>) -> Self {
        debug_assert!(m.is_square());
        CMat { m }
    }

    fn unitarity_deviation(&self) -> f64 {
        let p = self.m.adjoint() * &self.m;
        let d = self.dim();
        let mut dev = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let expect = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((p[(i, j)] - expect).norm());
            }
        }
        dev
    }

    fn hermiticity_deviation(&self) -> f64 {
        (&self.m - self.m.adjoint())
            .iter()
            .fold(0.0, |acc, z| acc.max(z.norm()))
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat({}x{})", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn mul(self, rhs: &'a CMat) -> CMat {
        CMat { m: &self.m * &rhs.m }
    }
}

impl<'a> Add<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn add(self, rhs: &'a CMat) -> CMat {
        CMat { m: &self.m + &rhs.m }
    }
}

impl<'a> Sub<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn sub(self, rhs: &'a CMat) -> CMat {
        CMat { m: &self.m - &rhs.m }
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        CMat { m: -&self.m }
    }
}

impl Serialize for CMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim())
            .map(|i| self.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(serde::de::Error::custom("matrix rows must form a square"));
        }
        let entries: Vec<C64> = rows.iter().flatten().map(|p| C64::new(p[0], p[1])).collect();
        CMat::from_row_major(dim, &entries).map_err(serde::de::Error::custom)
    }
}

/// Unit direction in R³.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Axis3([f64; 3]);

impl Axis3 {
    pub const X: Axis3 = Axis3([1.0, 0.0, 0.0]);
    pub const Y: Axis3 = Axis3([0.0, 1.0, 0.0]);
    pub const Z: Axis3 = Axis3([0.0, 0.0, 1.0]);

    /// Accepts a vector whose norm is 1 within `1e-12`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnitAxis { norm });
        }
        Ok(Axis3([x, y, z]))
    }

    /// Normalizes any finite nonzero vector.
    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::NonUnitAxis { norm });
        }
        Ok(Axis3([v[0] / norm, v[1] / norm, v[2] / norm]))
    }

    /// In-plane axis `(cos φ, sin φ, 0)`.
    pub fn azimuthal(phi: f64) -> Self {
        Axis3([phi.cos(), phi.sin(), 0.0])
    }

    pub fn vec(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Axis3) -> f64 {
        dot3(&self.0, &other.0)
    }

    pub fn cross(&self, other: &Axis3) -> [f64; 3] {
        cross3(&self.0, &other.0)
    }

    pub fn neg(&self) -> Axis3 {
        Axis3([-self.0[0], -self.0[1], -self.0[2]])
    }

    /// Rodrigues rotation of `self` about `about` by `angle` (right-handed).
    pub fn rotated(&self, about: &Axis3, angle: f64) -> Axis3 {
        let v = self.0;
        let k = about.0;
        let (s, c) = angle.sin_cos();
        let kxv = cross3(&k, &v);
        let kv = dot3(&k, &v);
        let r = [
            v[0] * c + kxv[0] * s + k[0] * kv * (1.0 - c),
            v[1] * c + kxv[1] * s + k[1] * kv * (1.0 - c),
            v[2] * c + kxv[2] * s + k[2] * kv * (1.0 - c),
        ];
        // Renormalize to keep the unit invariant exact to rounding.
        Axis3::normalized(r).expect("rotation preserves the norm")
    }

    pub fn sigma(&self) -> CMat {
        let [x, y, z] = self.0;
        CMat::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c64(z, 0.0),
            (0, 1) => c64(x, -y),
            (1, 0) => c64(x, y),
            _ => c64(-z, 0.0),
        })
    }
}

impl TryFrom<[f64; 3]> for Axis3 {
    type Error = Error;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        Axis3::new(v[0], v[1], v[2])
    }
}

impl From<Axis3> for [f64; 3] {
    fn from(a: Axis3) -> [f64; 3] {
        a.0
    }
}

#[inline]
pub fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Unitary operator, optionally flagged special (`det = 1`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitaryOp {
    mat: CMat,
    special: bool,
}

impl UnitaryOp {
    /// Checks unitarity at the construction tolerance.
    pub fn new(mat: CMat) -> Result<Self> {
        Self::with_tolerance(mat, UNITARY_TOL)
    }

    /// Checks unitarity at a caller-chosen tolerance, e.g. [`PRODUCT_TOL`]
    /// for long products.
    pub fn with_tolerance(mat: CMat, tol: f64) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        let deviation = mat.unitarity_deviation();
        if deviation > tol {
            return Err(Error::NotUnitary { deviation });
        }
        let special = (mat.determinant() - C64::new(1.0, 0.0)).norm() <= DET_TOL;
        Ok(UnitaryOp { mat, special })
    }

    pub(crate) fn new_unchecked(mat: CMat, special: bool) -> Self {
        UnitaryOp { mat, special }
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryOp {
            mat: CMat::identity(dim),
            special: true,
        }
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn is_special(&self) -> bool {
        self.special
    }

    pub fn adjoint(&self) -> UnitaryOp {
        UnitaryOp {
            mat: self.mat.adjoint(),
            special: self.special,
        }
    }

    /// Product `self · other`, rechecked at [`PRODUCT_TOL`].
    pub fn compose(&self, other: &UnitaryOp) -> Result<UnitaryOp> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mat = &self.mat * &other.mat;
        let deviation = mat.unitarity_deviation();
        if deviation > PRODUCT_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        let special = self.special && other.special
            || (mat.determinant() - C64::new(1.0, 0.0)).norm() <= DET_TOL;
        Ok(UnitaryOp { mat, special })
    }

    /// `W · self · W†`.
    pub fn conjugated_by(&self, w: &UnitaryOp) -> Result<UnitaryOp> {
        w.compose(self)?.compose(&w.adjoint())
    }

    /// Multiplies by a global phase `e^{iφ}`.
    pub fn phased(&self, phi: f64) -> UnitaryOp {
        let mat = self.mat.scale(C64::from_polar(1.0, phi));
        let special = (mat.determinant() - C64::new(1.0, 0.0)).norm() <= DET_TOL;
        UnitaryOp { mat, special }
    }

    /// Rescales by a global phase so that `det = 1`.
    pub fn to_special(&self) -> UnitaryOp {
        let det = self.mat.determinant();
        let phase = -det.arg() / self.dim() as f64;
        UnitaryOp {
            mat: self.mat.scale(C64::from_polar(1.0, phase)),
            special: true,
        }
    }

    pub fn pow(&self, k: u32) -> UnitaryOp {
        UnitaryOp {
            mat: self.mat.pow(k),
            special: self.special,
        }
    }

    pub fn tensor(&self, other: &UnitaryOp) -> UnitaryOp {
        let mat = tensor(&self.mat, &other.mat);
        let special = (mat.determinant() - C64::new(1.0, 0.0)).norm() <= DET_TOL;
        UnitaryOp { mat, special }
    }

    /// Whether `self` equals `other` up to a global phase, within `tol` in
    /// the overlap.
    pub fn equal_up_to_phase(&self, other: &UnitaryOp, tol: f64) -> bool {
        match overlap(self, other) {
            Ok(o) => (o - self.dim() as f64).abs() <= tol,
            Err(_) => false,
        }
    }
}

/// Hermitian operator, optionally flagged traceless.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HermitianOp {
    mat: CMat,
    traceless: bool,
}

impl HermitianOp {
    pub fn new(mat: CMat) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        let deviation = mat.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let traceless = mat.trace().norm() <= 1e-10;
        Ok(HermitianOp { mat, traceless })
    }

    /// `v·σ` for a real 3-vector `v` (not necessarily unit).
    pub fn from_bloch(trace: f64, v: [f64; 3]) -> Self {
        let h = 0.5 * trace;
        let mat = CMat::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c64(h + v[2], 0.0),
            (0, 1) => c64(v[0], -v[1]),
            (1, 0) => c64(v[0], v[1]),
            _ => c64(h - v[2], 0.0),
        });
        HermitianOp {
            mat,
            traceless: trace.abs() <= 1e-10,
        }
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn is_traceless(&self) -> bool {
        self.traceless
    }

    pub fn scale(&self, x: f64) -> HermitianOp {
        HermitianOp {
            mat: self.mat.scale_real(x),
            traceless: self.traceless,
        }
    }

    pub fn add(&self, other: &HermitianOp) -> Result<HermitianOp> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        HermitianOp::new(&self.mat + &other.mat)
    }
}

pub fn sigma_x() -> CMat {
    Axis3::X.sigma()
}

pub fn sigma_y() -> CMat {
    Axis3::Y.sigma()
}

pub fn sigma_z() -> CMat {
    Axis3::Z.sigma()
}

/// `R_n(θ) = exp(−iθ n·σ/2) = cos(θ/2) I − i sin(θ/2) n·σ`.
pub fn su2_rotation(axis: &Axis3, angle: f64) -> UnitaryOp {
    Su2::rotation(axis, angle).to_unitary()
}

/// `exp(−iHt)` by Hermitian eigendecomposition.
pub fn expm_hermitian(h: &HermitianOp, t: f64) -> UnitaryOp {
    let eig = h.mat.as_nalgebra().clone().symmetric_eigen();
    let v = eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|lam| C64::from_polar(1.0, -lam * t)));
    let m = &v * phases * v.adjoint();
    let mat = CMat::from_nalgebra(m);
    let special = (mat.determinant() - C64::new(1.0, 0.0)).norm() <= DET_TOL;
    UnitaryOp::new_unchecked(mat, special)
}

/// Kronecker product.
pub fn tensor(a: &CMat, b: &CMat) -> CMat {
    CMat::from_nalgebra(a.as_nalgebra().kronecker(b.as_nalgebra()))
}

/// `|Tr(U†V)|`.
pub fn overlap(u: &UnitaryOp, v: &UnitaryOp) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(u.mat.hs_inner(&v.mat).norm())
}

/// Tensor-product Pauli strings on `num_qubits` qubits, identity first,
/// in lexicographic order over `{I, X, Y, Z}`.
pub fn pauli_basis(num_qubits: usize) -> Result<Vec<HermitianOp>> {
    if num_qubits == 0 {
        return Err(Error::Invalid("pauli_basis needs at least one qubit".into()));
    }
    let single = [CMat::identity(2), sigma_x(), sigma_y(), sigma_z()];
    let mut strings: Vec<CMat> = single.to_vec();
    for _ in 1..num_qubits {
        strings = strings
            .iter()
            .flat_map(|p| single.iter().map(move |q| tensor(p, q)))
            .collect();
    }
    Ok(strings
        .into_iter()
        .enumerate()
        .map(|(k, mat)| HermitianOp {
            mat,
            traceless: k != 0,
        })
        .collect())
}

/// Splits a qubit Hermitian operator as `H = (trace/2) I + v·σ`.
pub fn bloch_decompose(h: &HermitianOp) -> Result<(f64, [f64; 3])> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: h.dim(),
        });
    }
    let m = &h.mat;
    let trace = (m.get(0, 0) + m.get(1, 1)).re;
    let vx = 0.5 * (m.get(0, 1) + m.get(1, 0)).re;
    let vy = 0.5 * (m.get(1, 0) - m.get(0, 1)).im;
    let vz = 0.5 * (m.get(0, 0) - m.get(1, 1)).re;
    Ok((trace, [vx, vy, vz]))
}

/// Inverse of [`bloch_decompose`].
pub fn bloch_compose(trace: f64, v: [f64; 3]) -> HermitianOp {
    HermitianOp::from_bloch(trace, v)
}

/// Element of SU(2) stored as `[[a, b], [−b̄, ā]]` with `|a|² + |b|² = 1`.
///
/// Products and rotations cost a handful of flops and never allocate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2 {
    pub a: C64,
    pub b: C64,
}

impl Su2 {
    pub const IDENTITY: Su2 = Su2 {
        a: C64 { re: 1.0, im: 0.0 },
        b: C64 { re: 0.0, im: 0.0 },
    };

    /// `exp(−iθ n·σ/2)`.
    #[inline]
    pub fn rotation(axis: &Axis3, angle: f64) -> Su2 {
        let [x, y, z] = axis.0;
        let (s, c) = (0.5 * angle).sin_cos();
        Su2 {
            a: C64::new(c, -s * z),
            b: C64::new(-s * y, -s * x),
        }
    }

    /// `exp(−i w·σ dt/2)` for an arbitrary real 3-vector `w`.
    #[inline]
    pub fn from_generator(w: [f64; 3], dt: f64) -> Su2 {
        let norm = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        if norm == 0.0 {
            return Su2::IDENTITY;
        }
        let half = 0.5 * norm * dt;
        let (s, c) = half.sin_cos();
        let k = s / norm;
        Su2 {
            a: C64::new(c, -k * w[2]),
            b: C64::new(-k * w[1], -k * w[0]),
        }
    }

    #[inline]
    pub fn mul(&self, rhs: &Su2) -> Su2 {
        Su2 {
            a: self.a * rhs.a - self.b * rhs.b.conj(),
            b: self.a * rhs.b + self.b * rhs.a.conj(),
        }
    }

    #[inline]
    pub fn adjoint(&self) -> Su2 {
        Su2 {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    /// `Tr(self)`, which is real for SU(2).
    #[inline]
    pub fn trace(&self) -> f64 {
        2.0 * self.a.re
    }

    /// `Tr(self† other)`.
    #[inline]
    pub fn hs_inner(&self, other: &Su2) -> f64 {
        self.adjoint().mul(other).trace()
    }

    pub fn to_unitary(&self) -> UnitaryOp {
        let mat = CMat::from_fn(2, |i, j| match (i, j) {
            (0, 0) => self.a,
            (0, 1) => self.b,
            (1, 0) => -self.b.conj(),
            _ => self.a.conj(),
        });
        UnitaryOp::new_unchecked(mat, true)
    }

    /// Reads the `(a, b)` entries of a special unitary of dimension 2.
    pub fn from_unitary(u: &UnitaryOp) -> Result<Su2> {
        if u.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: u.dim(),
            });
        }
        if !u.is_special() {
            return Err(Error::Invalid("expected a special unitary".into()));
        }
        Ok(Su2 {
            a: u.mat.get(0, 0),
            b: u.mat.get(0, 1),
        })
    }

    /// Adjoint-action matrix `R[α][k] = Tr(U† σ_α U σ_k)/2`.
    pub fn adjoint_action(&self) -> [[f64; 3]; 3] {
        let u = self.to_unitary().into_mat();
        let ud = u.adjoint();
        let sig = [sigma_x(), sigma_y(), sigma_z()];
        let mut r = [[0.0; 3]; 3];
        for (alpha, sa) in sig.iter().enumerate() {
            let conj = &(&ud * sa) * &u;
            for (k, sk) in sig.iter().enumerate() {
                r[alpha][k] = 0.5 * (&conj * sk).trace().re;
            }
        }
        r
    }

    pub fn norm_deviation(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() - 1.0).abs()
    }
}
