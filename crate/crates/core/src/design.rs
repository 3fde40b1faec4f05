//! Unitary design diagnostics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::qmat::{pauli_basis, CMat, HermitianOp, UnitaryOp};
use crate::upath::{hw_set, UnitaryPath};

/// Finite weighted set of unitaries of equal dimension.
#[derive(Clone, Debug)]
pub struct SampledEnsemble {
    unitaries: Vec<UnitaryOp>,
    weights: Vec<f64>,
}

impl SampledEnsemble {
    /// Uniform weights.
    pub fn new(unitaries: Vec<UnitaryOp>) -> Result<Self> {
        let n = unitaries.len();
        Self::with_weights(unitaries, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn with_weights(unitaries: Vec<UnitaryOp>, weights: Vec<f64>) -> Result<Self> {
        if unitaries.is_empty() {
            return Err(Error::Invalid("ensemble must be nonempty".into()));
        }
        if weights.len() != unitaries.len() {
            return Err(Error::DimensionMismatch {
                expected: unitaries.len(),
                found: weights.len(),
            });
        }
        let d = unitaries[0].dim();
        if let Some(u) = unitaries.iter().find(|u| u.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: u.dim(),
            });
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::Invalid("weights must be nonnegative".into()));
        }
        let total = pairwise_sum(&weights);
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(SampledEnsemble { unitaries, weights })
    }

    /// Uniform ensemble of `n` equiangular samples of a path.
    pub fn from_path(path: &UnitaryPath, n: usize) -> Result<Self> {
        Self::new(path.sample(n))
    }

    pub fn unitaries(&self) -> &[UnitaryOp] {
        &self.unitaries
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].dim()
    }
}

/// `F⁽ᵗ⁾ = Σ_k Σ_j w_k w_j |Tr(U_k† U_j)|^{2t}`.
///
/// Rows are evaluated in parallel; each row and the final reduction use
/// pairwise summation in index order, so the value does not depend on
/// scheduling.
pub fn frame_potential(e: &SampledEnsemble, t: u32) -> Result<f64> {
    if t == 0 {
        return Err(Error::OutOfRange {
            name: "t",
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    let us = &e.unitaries;
    let ws = &e.weights;
    let rows: Vec<f64> = (0..us.len())
        .into_par_iter()
        .map(|k| {
            let terms: Vec<f64> = (0..us.len())
                .map(|j| ws[j] * us[k].mat().hs_inner(us[j].mat()).norm_sqr().powi(t as i32))
                .collect();
            ws[k] * pairwise_sum(&terms)
        })
        .collect();
    Ok(pairwise_sum(&rows))
}

/// Traceless operator basis of dimension `d`, each element normalized to
/// `Tr(P†P) = d`: Pauli strings when `d` is a power of two, Heisenberg–Weyl
/// elements `XᵃZᵇ` otherwise.
pub fn traceless_basis(d: usize) -> Result<Vec<CMat>> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            range: "[2, ∞)",
        });
    }
    if d.is_power_of_two() {
        let n = d.trailing_zeros() as usize;
        return Ok(pauli_basis(n)?
            .into_iter()
            .skip(1)
            .map(|p| p.mat().clone())
            .collect());
    }
    let hw = hw_set(d)?;
    let mut out = Vec::with_capacity(d * d - 1);
    for a in 0..d as u32 {
        for b in 0..d as u32 {
            if a == 0 && b == 0 {
                continue;
            }
            out.push(hw.x.pow(a).mat() * hw.z.pow(b).mat());
        }
    }
    Ok(out)
}

fn pairwise_weighted_sum(
    lo: usize,
    hi: usize,
    f: &(dyn Fn(usize) -> CMat + Sync),
) -> CMat {
    if hi - lo <= 8 {
        let mut acc = f(lo);
        for k in lo + 1..hi {
            acc = &acc + &f(k);
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    &pairwise_weighted_sum(lo, mid, f) + &pairwise_weighted_sum(mid, hi, f)
}

/// Weighted average `Σ_k w_k U_k P U_k†` by pairwise summation.
pub fn twirl(e: &SampledEnsemble, p: &CMat) -> CMat {
    pairwise_weighted_sum(0, e.len(), &|k| {
        let u = e.unitaries[k].mat();
        (&(u * p) * &u.adjoint()).scale_real(e.weights[k])
    })
}

/// Largest Frobenius norm of the twirled image of a traceless basis element.
pub fn twirl_deviation(e: &SampledEnsemble) -> Result<f64> {
    let basis = traceless_basis(e.dim())?;
    Ok(basis
        .par_iter()
        .map(|p| twirl(e, p).frobenius_norm())
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max))
}

/// `(1/N) Σ_k U(s_k)† V U(s_k)` on equiangular `s_k = k/N`.
pub fn path_first_moment(path: &UnitaryPath, v: &HermitianOp, n: usize) -> Result<CMat> {
    if v.dim() != path.dim() {
        return Err(Error::DimensionMismatch {
            expected: path.dim(),
            found: v.dim(),
        });
    }
    if n == 0 {
        return Err(Error::Invalid("need at least one sample".into()));
    }
    let samples = path.sample(n);
    let w = 1.0 / n as f64;
    Ok(pairwise_weighted_sum(0, n, &|k| {
        let u = samples[k].mat();
        (&(&u.adjoint() * v.mat()) * u).scale_real(w)
    }))
}

/// Frame potential `F⁽¹⁾` for each requested sample count.
pub fn design_scan(path: &UnitaryPath, ns: &[usize]) -> Result<Vec<(usize, f64)>> {
    ns.iter()
        .map(|&n| {
            let e = SampledEnsemble::from_path(path, n)?;
            Ok((n, frame_potential(&e, 1)?))
        })
        .collect()
}

/// Summary of the 1-design diagnostics for an ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub dim: usize,
    pub num_samples: usize,
    pub frame_potential_t1: f64,
    pub twirl_deviation: f64,
    pub tolerance: f64,
    /// `F⁽¹⁾ − 1 ≤ tolerance` and twirl deviation `≤ tolerance`.
    pub verdict: bool,
}

pub fn design_report(e: &SampledEnsemble, tolerance: f64) -> Result<DesignReport> {
    let fp = frame_potential(e, 1)?;
    let dev = twirl_deviation(e)?;
    Ok(DesignReport {
        dim: e.dim(),
        num_samples: e.len(),
        frame_potential_t1: fp,
        twirl_deviation: dev,
        tolerance,
        verdict: fp - 1.0 <= tolerance && dev <= tolerance,
    })
}

/// Matrices `A_k` with `w_k = x A_k xᵀ`, where `w` is the Bloch vector of
/// `U (v·σ) U†` and `U` is the `SU(2)` element of `x ∈ S³`.
pub fn quadratic_form_matrices(v: [f64; 3]) -> [[[f64; 4]; 4]; 3] {
    let [v1, v2, v3] = v;
    [
        [
            [v1, v2, -v3, 0.0],
            [v2, -v1, 0.0, v3],
            [-v3, 0.0, -v1, v2],
            [0.0, v3, v2, v1],
        ],
        [
            [v2, -v1, 0.0, v3],
            [-v1, -v2, v3, 0.0],
            [0.0, v3, v2, v1],
            [v3, 0.0, v1, -v2],
        ],
        [
            [v3, 0.0, v1, -v2],
            [0.0, v3, v2, v1],
            [v1, v2, -v3, 0.0],
            [-v2, v1, 0.0, -v3],
        ],
    ]
}

/// `x A xᵀ`.
pub fn quadratic_form(a: &[[f64; 4]; 4], x: &[f64]) -> f64 {
    (0..4)
        .map(|i| (0..4).map(|j| x[i] * a[i][j] * x[j]).sum::<f64>())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{bloch_decompose, c64, sigma_x, sigma_y, sigma_z, Axis3};
    use crate::sphere::SpherePoint;
    use crate::upath::su2_from_s3;

    fn pauli_group() -> SampledEnsemble {
        let i = c64(0.0, 1.0);
        SampledEnsemble::new(vec![
            UnitaryOp::identity(2),
            UnitaryOp::new(sigma_x().scale(i)).unwrap(),
            UnitaryOp::new(sigma_y().scale(i)).unwrap(),
            UnitaryOp::new(sigma_z().scale(i)).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn frame_potential_small_cases() {
        assert!((frame_potential(&pauli_group(), 1).unwrap() - 1.0).abs() < 1e-15);
        let single = SampledEnsemble::new(vec![UnitaryOp::identity(2)]).unwrap();
        assert!((frame_potential(&single, 1).unwrap() - 4.0).abs() < 1e-15);
        let path = UnitaryPath::two_axis(Axis3::Z, Axis3::Y).unwrap();
        let three = SampledEnsemble::from_path(&path, 3).unwrap();
        assert!(frame_potential(&three, 1).unwrap() > 1.0 + 1e-3);
        assert!(frame_potential(&three, 0).is_err());
    }

    #[test]
    fn twirl_small_cases() {
        assert!(twirl_deviation(&pauli_group()).unwrap() < 1e-12);
        let single = SampledEnsemble::new(vec![UnitaryOp::identity(2)]).unwrap();
        assert!((twirl_deviation(&single).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let path = UnitaryPath::two_axis(Axis3::Z, Axis3::Y).unwrap();
        let e = SampledEnsemble::from_path(&path, 64).unwrap();
        assert!(twirl_deviation(&e).unwrap() < 1e-10);
    }

    #[test]
    fn weights_are_validated() {
        let us = vec![UnitaryOp::identity(2), UnitaryOp::identity(2)];
        assert!(SampledEnsemble::with_weights(us.clone(), vec![0.5, 0.6]).is_err());
        assert!(SampledEnsemble::with_weights(us.clone(), vec![-0.5, 1.5]).is_err());
        assert!(SampledEnsemble::with_weights(us, vec![0.25, 0.75]).is_ok());
        assert!(SampledEnsemble::new(vec![]).is_err());
    }

    #[test]
    fn first_moment_cases() {
        let path = UnitaryPath::two_axis(Axis3::Z, Axis3::Y).unwrap();
        let z = HermitianOp::new(sigma_z()).unwrap();
        assert!(path_first_moment(&path, &z, 64).unwrap().max_abs() < 1e-10);

        let hw = UnitaryPath::heisenberg_weyl(3).unwrap();
        for p in traceless_basis(3).unwrap() {
            // Hermitian parts of the HW elements span the traceless space.
            let herm = HermitianOp::new((&p + &p.adjoint()).scale_real(0.5)).unwrap();
            assert!(path_first_moment(&hw, &herm, 81).unwrap().max_abs() < 1e-10);
        }
    }

    #[test]
    fn basis_normalization() {
        for d in [2, 3, 4, 5, 8] {
            let b = traceless_basis(d).unwrap();
            assert_eq!(b.len(), d * d - 1);
            for p in &b {
                assert!(p.trace().norm() < 1e-12);
                assert!((p.hs_inner(p).re - d as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quadratic_forms_match_conjugation() {
        let v = [0.3, -1.2, 0.7];
        let a = quadratic_form_matrices(v);
        for ak in &a {
            assert_eq!(ak[0][0] + ak[1][1] + ak[2][2] + ak[3][3], 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(ak[i][j], ak[j][i]);
                }
            }
        }
        let x = SpherePoint::normalized(vec![0.4, -0.3, 0.5, 0.6]).unwrap();
        let u = su2_from_s3(&x).unwrap();
        let vm = HermitianOp::from_bloch(0.0, v);
        let w = HermitianOp::new(&(u.mat() * vm.mat()) * &u.mat().adjoint()).unwrap();
        let (_, wv) = bloch_decompose(&w).unwrap();
        for k in 0..3 {
            assert!((quadratic_form(&a[k], x.coords()) - wv[k]).abs() < 1e-14);
        }
        let e1 = [1.0, 0.0, 0.0, 0.0];
        let az = quadratic_form_matrices([0.0, 0.0, 1.0]);
        let w: Vec<f64> = az.iter().map(|ak| quadratic_form(ak, &e1)).collect();
        assert_eq!(w, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn report_fields() {
        let r = design_report(&pauli_group(), 1e-10).unwrap();
        assert!(r.verdict);
        assert_eq!(r.num_samples, 4);
        let single = SampledEnsemble::new(vec![UnitaryOp::identity(2)]).unwrap();
        assert!(!design_report(&single, 1e-10).unwrap().verdict);
    }
}
