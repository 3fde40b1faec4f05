//! Frozen numerical baselines and closed-form oracles.

#![allow(clippy::excessive_precision, clippy::needless_range_loop)]

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use udesign::control::{
    composite_pulse, fidelity_second_order, gate_fidelity, noise_averaged_fidelity, propagate,
    sample_noise_direction, standard_urc, CompositeKind, EtaMode, MonteCarloConfig, NoiseSpec,
    PropagationConfig,
};
use udesign::design::design_scan;
use udesign::qmat::{sigma_z, Axis3, UnitaryOp};
use udesign::upath::{build_open_path, UnitaryPath};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

#[test]
fn open_path_decay_baseline() {
    let base = UnitaryPath::two_axis(Axis3::Z, Axis3::Y).unwrap();
    let open = build_open_path(&base, &UnitaryOp::new(sigma_z()).unwrap()).unwrap();
    let frozen = [
        (4, 5.00000000000000000e-1),
        (8, 8.08058261758406449e-2),
        (16, 8.91633023801063906e-3),
        (32, 2.01226605471727105e-3),
        (64, 4.91851062903281289e-4),
    ];
    let ns: Vec<usize> = frozen.iter().map(|f| f.0).collect();
    for ((n, f), (_, want)) in design_scan(&open, &ns).unwrap().into_iter().zip(frozen) {
        assert!(close(f - 1.0, want, 1e-9), "N={n}: {} vs {want}", f - 1.0);
    }
}

#[test]
fn fiber_below_threshold_is_rational() {
    // Sums of |Tr|² over the sampled SU(3) path reduce to small rationals.
    let fiber = UnitaryPath::fiber_bundle(3).unwrap();
    let scan = design_scan(&fiber, &[5, 10, 24, 25, 75]).unwrap();
    let expect = [2.0, 4.0 / 3.0, 25.0 / 24.0, 1.0, 1.0];
    for ((n, f), want) in scan.iter().zip(expect) {
        assert!((f - want).abs() < 1e-10, "N={n}: {f}");
    }
}

#[test]
fn square_noisy_fidelity_closed_form() {
    // Constant field: U = exp(-i (ŷ + ηv)·σ T/2), so F = cos²(|ŷ + ηv| T/2).
    let sq = composite_pulse(CompositeKind::Square, 1.0).unwrap();
    let t = sq.total_duration();
    let cfg = PropagationConfig::new(1).unwrap();
    for (v, eta) in [([0.3, 0.4, -0.2], 0.1), ([0.0, 1.0, 0.0], 0.25), ([1.0, 0.0, 0.0], 0.05)] {
        let dir = Axis3::normalized(v).unwrap();
        let noise = NoiseSpec::new(dir, eta).unwrap();
        let f = gate_fidelity(&UnitaryOp::identity(2), &propagate(&sq, &noise, &cfg)).unwrap();
        let d = dir.vec();
        let w = [eta * d[0], 1.0 + eta * d[1], eta * d[2]];
        let norm = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        assert!((f - (norm * t / 2.0).cos().powi(2)).abs() < 1e-13);
    }
}

#[test]
fn urc_second_order_is_flat() {
    let urc = standard_urc(1.0);
    for v in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.2, -0.7, 0.4]] {
        let noise = NoiseSpec::new(Axis3::normalized(v).unwrap(), 0.05).unwrap();
        assert!((fidelity_second_order(&urc, &noise, 64).unwrap() - 1.0).abs() < 1e-4);
    }
}

#[test]
fn gate_fidelity_baseline() {
    let mc = MonteCarloConfig::new(200, 7, EtaMode::Fixed { eta: 0.1 }).unwrap();
    let id = UnitaryOp::identity(2);
    let frozen = [
        (CompositeKind::Square, 9.69052221761215637e-1, 2.00457435499368100e-3),
        (CompositeKind::Corpse, 7.62932267844882217e-1, 1.43633525565576344e-2),
        (CompositeKind::Bb1, 9.09511696858018470e-1, 5.70030360708010612e-3),
    ];
    for (kind, mean, se) in frozen {
        let p = composite_pulse(kind, 1.0).unwrap();
        let s = noise_averaged_fidelity(&p, &id, &mc, &PropagationConfig::converged(&p)).unwrap();
        assert!(close(s.mean, mean, 1e-10), "{kind:?} {}", s.mean);
        assert!(close(s.std_err, se, 1e-8), "{kind:?} {}", s.std_err);
    }
    let urc = standard_urc(1.0);
    let s = noise_averaged_fidelity(&urc, &id, &mc, &PropagationConfig::converged(&urc)).unwrap();
    assert!(close(s.mean, 9.98266155266182453e-1, 1e-9), "{}", s.mean);
}

#[test]
fn monte_carlo_ignores_thread_count() {
    let p = composite_pulse(CompositeKind::Corpse, 1.0).unwrap();
    let mc = MonteCarloConfig::new(300, 11, EtaMode::UniformUpTo { eta_max: 0.2 }).unwrap();
    let cfg = PropagationConfig::new(1).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| noise_averaged_fidelity(&p, &UnitaryOp::identity(2), &mc, &cfg).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.std_err.to_bits(), b.std_err.to_bits());
}

#[test]
fn noise_direction_moments() {
    let mut rng = ChaCha20Rng::seed_from_u64(99);
    let n = 100_000;
    let mut mean = [0.0; 3];
    let mut cov = [[0.0; 3]; 3];
    for _ in 0..n {
        let v = sample_noise_direction(&mut rng).vec();
        for i in 0..3 {
            mean[i] += v[i] / n as f64;
            for j in 0..3 {
                cov[i][j] += v[i] * v[j] / n as f64;
            }
        }
    }
    for i in 0..3 {
        assert!(mean[i].abs() < 0.02);
        for j in 0..3 {
            let want = if i == j { 1.0 / 3.0 } else { 0.0 };
            assert!((cov[i][j] - want).abs() < 0.02);
        }
    }
}
