use proptest::prelude::*;
use udesign::control::{propagate_su2, su2_distance, standard_urc, NoiseSpec, PropagationConfig};
use udesign::design::{frame_potential, path_first_moment, twirl_deviation, SampledEnsemble};
use udesign::qmat::{
    c64, expm_hermitian, overlap, su2_rotation, Axis3, CMat, HermitianOp, Su2, UnitaryOp, C64,
};
use udesign::sphere::{apply_fixed_rotation, CurveSpec, FixedRotation, SpherePoint};
use udesign::upath::UnitaryPath;

fn axis() -> impl Strategy<Value = Axis3> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-3)
        .prop_map(|(x, y, z)| Axis3::normalized([x, y, z]).unwrap())
}

fn hermitian(d: usize) -> impl Strategy<Value = HermitianOp> {
    proptest::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |raw| {
        let g = CMat::from_fn(d, |i, j| c64(raw[2 * (i * d + j)], raw[2 * (i * d + j) + 1]));
        let h = (&g + &g.adjoint()).scale_real(0.5);
        HermitianOp::new(h).unwrap()
    })
}

fn unitary(d: usize) -> impl Strategy<Value = UnitaryOp> {
    hermitian(d).prop_map(|h| expm_hermitian(&h, 1.3))
}

fn ensemble(d: usize, m: usize) -> impl Strategy<Value = Vec<UnitaryOp>> {
    proptest::collection::vec(unitary(d), m)
}

fn taylor_exp(h: &HermitianOp, t: f64) -> CMat {
    let d = h.dim();
    let a = h.mat().scale(c64(0.0, -t));
    let mut term = CMat::identity(d);
    let mut sum = CMat::identity(d);
    for k in 1..80 {
        term = (&term * &a).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    sum
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rotation_inverse(n in axis(), theta in -20.0f64..20.0) {
        let p = su2_rotation(&n, theta).compose(&su2_rotation(&n, -theta)).unwrap();
        prop_assert!(p.mat().max_diff(&CMat::identity(2)) < 1e-12);
    }

    #[test]
    fn su2_product_matches_dense(a in axis(), b in axis(), s in -5.0f64..5.0, t in -5.0f64..5.0) {
        let fast = Su2::rotation(&a, s).mul(&Su2::rotation(&b, t)).to_unitary();
        let dense = su2_rotation(&a, s).compose(&su2_rotation(&b, t)).unwrap();
        prop_assert!(fast.mat().max_diff(dense.mat()) < 1e-13);
    }

    #[test]
    fn overlap_symmetry_and_phase(u in unitary(3), v in unitary(3), p in -3.0f64..3.0, q in -3.0f64..3.0) {
        let f = overlap(&u, &v).unwrap();
        prop_assert!((f - overlap(&v, &u).unwrap()).abs() < 1e-12);
        prop_assert!((f - overlap(&u.phased(p), &v.phased(q)).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn tensor_of_special_is_special(u in unitary(2), v in unitary(3)) {
        let t = u.to_special().tensor(&v.to_special());
        prop_assert!((t.mat().determinant() - C64::new(1.0, 0.0)).norm() < 1e-10);
        prop_assert!((&t.mat().adjoint() * t.mat()).max_diff(&CMat::identity(6)) < 1e-10);
    }

    #[test]
    fn fixed_rotations_preserve_polygon_length(phi in 0.0f64..std::f64::consts::PI) {
        let curve = CurveSpec::gamma();
        let pts = curve.sample(512);
        let len = |ps: &[SpherePoint]| -> f64 {
            (0..ps.len())
                .map(|i| {
                    let a = ps[i].coords();
                    let b = ps[(i + 1) % ps.len()].coords();
                    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
                })
                .sum()
        };
        for which in [FixedRotation::R, FixedRotation::Q(phi), FixedRotation::T] {
            let moved: Vec<SpherePoint> =
                pts.iter().map(|p| apply_fixed_rotation(which, p).unwrap()).collect();
            prop_assert!((len(&moved) - len(&pts)).abs() < 1e-11);
        }
    }

    #[test]
    fn first_moment_is_linear(a in hermitian(2), b in hermitian(2), x in -2.0f64..2.0) {
        let path = UnitaryPath::fixed_angle(Axis3::Z, Axis3::X).unwrap();
        let combo = a.scale(x).add(&b).unwrap();
        let lhs = path_first_moment(&path, &combo, 7).unwrap();
        let ma = path_first_moment(&path, &a, 7).unwrap();
        let mb = path_first_moment(&path, &b, 7).unwrap();
        prop_assert!(lhs.max_diff(&(&ma.scale_real(x) + &mb)) < 1e-12);
    }

    #[test]
    fn split_propagation_composes(k in 1usize..2000, v in axis(), eta in 0.0f64..0.3) {
        // Split on a grid point so both sides use the same midpoints.
        let n = 2000;
        let p = standard_urc(1.0);
        let noise = NoiseSpec::new(v, eta).unwrap();
        let (a, b) = p.split_at(k as f64 / n as f64 * p.total_duration()).unwrap();
        let steps = |m| PropagationConfig::new(m).unwrap();
        let reference = propagate_su2(&p, &noise, &steps(n));
        let composed = propagate_su2(&b, &noise, &steps(n - k)).mul(&propagate_su2(&a, &noise, &steps(k)));
        prop_assert!(su2_distance(&reference, &composed) < 1e-9);
    }
}
proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn expm_matches_taylor(h in (2usize..=6).prop_flat_map(hermitian)) {
        let u = expm_hermitian(&h, 0.7);
        prop_assert!(u.mat().max_diff(&taylor_exp(&h, 0.7)) < 1e-10);
    }

    #[test]
    fn frame_potential_invariances(
        us in ensemble(2, 6),
        left in unitary(2),
        right in unitary(2),
        phases in proptest::collection::vec(-3.0f64..3.0, 6),
    ) {
        let base = frame_potential(&SampledEnsemble::new(us.clone()).unwrap(), 1).unwrap();
        let moved: Vec<UnitaryOp> = us
            .iter()
            .zip(&phases)
            .map(|(u, p)| left.compose(u).unwrap().compose(&right).unwrap().phased(*p))
            .collect();
        let fp = frame_potential(&SampledEnsemble::new(moved).unwrap(), 1).unwrap();
        prop_assert!((fp - base).abs() < 1e-10);
    }

    #[test]
    fn design_criteria_agree(us in ensemble(3, 5), d in 2usize..=5) {
        let random = SampledEnsemble::new(us).unwrap();
        let fp = frame_potential(&random, 1).unwrap();
        let dev = twirl_deviation(&random).unwrap();
        prop_assert_eq!(fp - 1.0 <= 1e-9, dev <= 1e-9);
        let hw = SampledEnsemble::from_path(&UnitaryPath::heisenberg_weyl(d).unwrap(), d * d).unwrap();
        prop_assert!(frame_potential(&hw, 1).unwrap() - 1.0 <= 1e-9);
        prop_assert!(twirl_deviation(&hw).unwrap() <= 1e-9);
    }
}
