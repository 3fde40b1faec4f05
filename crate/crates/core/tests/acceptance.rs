//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p udesign --test acceptance`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use udesign::control::{
    composite_pulse, dd_sequence, default_tau, equal_time_repetitions, filter_function,
    fidelity_second_order, first_order_integral, gate_fidelity, memory_decay,
    noise_averaged_fidelity, propagate, standard_urc, CompositeKind, DdKind, EtaMode,
    MonteCarloConfig, NoiseSpec, PropagationConfig, PulseProgram, Segment, Waveform,
};
use udesign::design::{
    design_scan, frame_potential, quadratic_form, quadratic_form_matrices, SampledEnsemble,
};
use udesign::numeric::linear_grid;
use udesign::qmat::{
    bloch_decompose, sigma_x, sigma_y, sigma_z, Axis3, HermitianOp, UnitaryOp,
};
use udesign::sphere::{arc_length, curve_moments, CurveSpec, SpherePoint};
use udesign::upath::{build_open_path, su2_from_s3, UnitaryPath};

type Outcome = Result<(bool, String), String>;
type Check = fn() -> Outcome;

fn fp1(path: &UnitaryPath, n: usize) -> Result<f64, String> {
    let e = SampledEnsemble::from_path(path, n).map_err(|e| e.to_string())?;
    frame_potential(&e, 1).map_err(|e| e.to_string())
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn exact_design_identities() -> Outcome {
    let mut cases: Vec<(String, UnitaryPath, usize)> = Vec::new();
    let two = UnitaryPath::two_axis(Axis3::Z, Axis3::Y).map_err(err)?;
    for n in 4..=12 {
        cases.push((format!("two-axis N={n}"), two.clone(), n));
    }
    let fixed = UnitaryPath::fixed_angle(Axis3::Z, Axis3::X).map_err(err)?;
    for n in [8, 16] {
        cases.push((format!("fixed-angle N={n}"), fixed.clone(), n));
    }
    let tensor = UnitaryPath::tensor_qubits(vec![(Axis3::Z, Axis3::Y); 2]).map_err(err)?;
    cases.push(("tensor 2q N=16".into(), tensor, 16));
    for d in 2..=5 {
        cases.push((format!("hw d={d}"), UnitaryPath::heisenberg_weyl(d).map_err(err)?, d * d));
    }
    let fiber = UnitaryPath::fiber_bundle(3).map_err(err)?;
    for n in [25, 50] {
        cases.push((format!("fiber d=3 N={n}"), fiber.clone(), n));
    }
    let mut worst = (0.0f64, String::new());
    for (name, path, n) in &cases {
        let dev = (fp1(path, *n)? - 1.0).abs();
        if dev >= worst.0 {
            worst = (dev, name.clone());
        }
    }
    Ok((worst.0 <= 1e-10, format!("{} cases, worst |F-1| = {:.3e} ({})", cases.len(), worst.0, worst.1)))
}

fn curve_metrics() -> Outcome {
    let checks = [
        ("xi", CurveSpec::xi(), 10f64.sqrt() * PI),
        ("gamma", CurveSpec::gamma(), 2.0 * 5f64.sqrt() * PI),
        ("gamma-tilde", CurveSpec::gamma_tilde(), 5f64.sqrt() * PI),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, spec, expect) in &checks {
        let rel = (arc_length(spec) - expect).abs() / expect;
        ok &= rel <= 1e-8;
        detail.push(format!("{name} rel {rel:.1e}"));
    }
    let xi = CurveSpec::xi();
    let pts: Vec<SpherePoint> = (0..5)
        .map(|k| SpherePoint::new(xi.eval_unchecked(k as f64 / 5.0)).map_err(err))
        .collect::<Result<_, _>>()?;
    let mut worst = 0.0f64;
    for i in 0..5 {
        for j in i + 1..5 {
            worst = worst.max((pts[i].dot(&pts[j]) + 0.25).abs());
        }
    }
    ok &= worst <= 1e-12;
    detail.push(format!("xi pentagon max |<p,q>+1/4| {worst:.1e}"));
    Ok((ok, detail.join(", ")))
}

fn moment_checks() -> Outcome {
    let mut curves: Vec<(String, CurveSpec)> = vec![
        ("xi".into(), CurveSpec::xi()),
        ("gamma".into(), CurveSpec::gamma()),
        ("xi'".into(), CurveSpec::xi_prime()),
        ("gamma'".into(), CurveSpec::gamma_prime()),
    ];
    for phi in [0.0, FRAC_PI_4, FRAC_PI_2, PI] {
        curves.push((format!("xi_phi({phi:.3})"), CurveSpec::xi_phi(phi).map_err(err)?));
        curves.push((format!("gamma_phi({phi:.3})"), CurveSpec::gamma_phi(phi).map_err(err)?));
    }
    let mut worst = (0.0f64, String::new());
    for (name, spec) in &curves {
        let m = curve_moments(spec, 128);
        let r = m.first_residual().max(m.second_residual());
        if r >= worst.0 {
            worst = (r, name.clone());
        }
    }
    Ok((worst.0 <= 1e-9, format!("{} curves, worst residual {:.2e} ({})", curves.len(), worst.0, worst.1)))
}

fn first_moment_cancellation() -> Outcome {
    let urc = standard_urc(1.0);
    let cfg = PropagationConfig::initial(&urc);
    let mut worst = 0.0f64;
    for s in [sigma_x(), sigma_y(), sigma_z()] {
        let v = HermitianOp::new(s).map_err(err)?;
        worst = worst.max(first_order_integral(&urc, &v, &cfg).map_err(err)?.max_abs());
    }
    Ok((worst <= 1e-6, format!("max entry {worst:.2e}")))
}

fn open_path_convergence() -> Outcome {
    let base = UnitaryPath::two_axis(Axis3::Z, Axis3::Y).map_err(err)?;
    let z = UnitaryOp::new(sigma_z()).map_err(err)?;
    let open = build_open_path(&base, &z).map_err(err)?;
    let scan = design_scan(&open, &[8, 16, 32, 64]).map_err(err)?;
    let decreasing = scan.windows(2).all(|w| w[1].1 < w[0].1);
    let last = scan[3].1 - 1.0;
    let trace: Vec<String> = scan.iter().map(|(n, f)| format!("N={n}: {:.3e}", f - 1.0)).collect();
    Ok((decreasing && last <= 1e-3, format!("F-1 {}", trace.join(", "))))
}

fn appendix_oracle() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut trace_ok = true;
    for _ in 0..1000 {
        let v: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let x = loop {
            let raw: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            if let Ok(p) = SpherePoint::normalized(raw) {
                break p;
            }
        };
        let a = quadratic_form_matrices(v);
        trace_ok &= a.iter().all(|m| m[0][0] + m[1][1] + m[2][2] + m[3][3] == 0.0);
        let u = su2_from_s3(&x).map_err(err)?;
        let conj = &(u.mat() * HermitianOp::from_bloch(0.0, v).mat()) * &u.mat().adjoint();
        let (_, w) = bloch_decompose(&HermitianOp::new(conj).map_err(err)?).map_err(err)?;
        for k in 0..3 {
            worst = worst.max((quadratic_form(&a[k], x.coords()) - w[k]).abs());
        }
    }
    Ok((worst <= 1e-12 && trace_ok, format!("1000 draws, max error {worst:.2e}, traces exactly zero: {trace_ok}")))
}

fn gate_robustness() -> Outcome {
    let mc = MonteCarloConfig::new(1000, 7, EtaMode::Fixed { eta: 0.1 }).map_err(err)?;
    let id = UnitaryOp::identity(2);
    let stats = |p: &PulseProgram| noise_averaged_fidelity(p, &id, &mc, &PropagationConfig::converged(p)).map_err(err);
    let urc = stats(&standard_urc(1.0))?;
    let sq = stats(&composite_pulse(CompositeKind::Square, 1.0).map_err(err)?)?;
    let corpse = stats(&composite_pulse(CompositeKind::Corpse, 1.0).map_err(err)?)?;
    let bb1 = stats(&composite_pulse(CompositeKind::Bb1, 1.0).map_err(err)?)?;
    let runner_up = if corpse.mean >= bb1.mean { corpse } else { bb1 };
    let s1 = urc.separation(&sq);
    let s2 = sq.separation(&runner_up);
    let ok = s1 >= 5.0 && s2 >= 5.0 && urc.mean >= 0.99;
    Ok((
        ok,
        format!(
            "URC {:.6} SQUARE {:.6} CORPSE {:.6} BB1 {:.6}; separations {s1:.1}σ, {s2:.1}σ",
            urc.mean, sq.mean, corpse.mean, bb1.mean
        ),
    ))
}

fn memory_ordering() -> Outcome {
    let kinds = [DdKind::UrcRep, DdKind::Xy4, DdKind::Cpmg];
    let tau = default_tau(1.0);
    let reps = equal_time_repetitions(&kinds, 20, tau, 1.0).map_err(err)?;
    let mc = MonteCarloConfig::new(100, 7, EtaMode::UniformUpTo { eta_max: 0.05 }).map_err(err)?;
    let mut runs = Vec::new();
    for (kind, r) in kinds.iter().zip(&reps) {
        let cycle = dd_sequence(*kind, tau, 1.0).map_err(err)?;
        let cfg = PropagationConfig::converged(&cycle);
        runs.push(memory_decay(*kind, *r, &mc, &cfg, tau, 1.0).map_err(err)?);
    }
    let sep = |a: usize, b: usize| {
        let se = (runs[a].run_std_err.powi(2) + runs[b].run_std_err.powi(2)).sqrt();
        (runs[a].run_mean - runs[b].run_mean) / se
    };
    let (s1, s2) = (sep(0, 1), sep(1, 2));
    Ok((
        s1 >= 3.0 && s2 >= 3.0,
        format!(
            "URC {:.5} XY4 {:.5} CPMG {:.5} (reps {:?}); separations {s1:.1}σ, {s2:.1}σ",
            runs[0].run_mean, runs[1].run_mean, runs[2].run_mean, reps
        ),
    ))
}

fn filter_functions() -> Outcome {
    let grid = linear_grid(0.0, 0.5, 0.005);
    let urc = standard_urc(1.0);
    let sq = composite_pulse(CompositeKind::Square, 1.0).map_err(err)?;
    let ff_urc = filter_function(&urc, &grid, &PropagationConfig::initial(&urc)).map_err(err)?;
    let ff_sq = filter_function(&sq, &grid, &PropagationConfig::initial(&sq)).map_err(err)?;
    let zero_ok = [&ff_urc, &ff_sq].iter().all(|f| f.ff.iter().all(|a| a[0] == 0.0));

    let t = TAU;
    let free = PulseProgram::new(
        "free",
        1.0,
        vec![Segment { duration: t, waveform: Waveform::Constant { u: [0.0; 3] } }],
    )
    .map_err(err)?;
    let ff_free = filter_function(&free, &grid, &PropagationConfig::new(64).map_err(err)?).map_err(err)?;
    let mut free_err = 0.0f64;
    for (i, w) in grid.iter().enumerate() {
        let expect = 4.0 * (w * t / 2.0).sin().powi(2);
        for a in 0..3 {
            free_err = free_err.max((ff_free.ff[a][i] - expect).abs());
        }
    }
    let mut low_ok = true;
    let mut ratio = 0.0f64;
    for (i, w) in grid.iter().enumerate() {
        if *w > 0.0 && *w <= 0.1 + 1e-12 {
            low_ok &= ff_urc.ff[1][i] < ff_sq.ff[1][i];
            ratio = ratio.max(ff_urc.ff[1][i] / ff_sq.ff[1][i]);
        }
    }
    Ok((
        zero_ok && free_err <= 1e-8 && low_ok,
        format!("FF(0)=0: {zero_ok}; free-evolution error {free_err:.1e}; max FF_y(URC)/FF_y(SQUARE) on (0,0.1] = {ratio:.2e}"),
    ))
}

fn second_order_fidelity() -> Outcome {
    let sq = composite_pulse(CompositeKind::Square, 1.0).map_err(err)?;
    let t = sq.total_duration();
    let one_step = PropagationConfig::new(1).map_err(err)?;
    let mut closed_err = 0.0f64;
    for eta in [0.01, 0.05, 0.1, 0.2] {
        let noise = NoiseSpec::new(Axis3::Y, eta).map_err(err)?;
        let f = fidelity_second_order(&sq, &noise, 64).map_err(err)?;
        closed_err = closed_err.max((f - (1.0 - eta * eta * t * t / 4.0)).abs());
    }
    let gap = |eta: f64| -> Result<f64, String> {
        let noise = NoiseSpec::new(Axis3::Y, eta).map_err(err)?;
        let exact = gate_fidelity(&UnitaryOp::identity(2), &propagate(&sq, &noise, &one_step)).map_err(err)?;
        Ok((exact - fidelity_second_order(&sq, &noise, 64).map_err(err)?).abs())
    };
    let ratio = gap(0.02)? / gap(0.01)?;
    let ratio_ok = (6.0..=10.0).contains(&ratio);
    Ok((
        closed_err <= 1e-10 && ratio_ok,
        format!("closed-form error {closed_err:.1e}; gap ratio on halving η = {ratio:.3} (required [6, 10])"),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("exact-design identities", exact_design_identities),
        ("curve metrics", curve_metrics),
        ("moment checks", moment_checks),
        ("first-moment cancellation", first_moment_cancellation),
        ("open-path convergence", open_path_convergence),
        ("quadratic-form oracle", appendix_oracle),
        ("gate-robustness ordering", gate_robustness),
        ("memory ordering", memory_ordering),
        ("filter functions", filter_functions),
        ("second-order fidelity", second_order_fidelity),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.2}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
