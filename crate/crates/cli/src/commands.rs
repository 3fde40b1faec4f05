use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;
use udesign::control::{
    composite_pulse, dd_sequence, default_tau, equal_time_repetitions, filter_function,
    memory_decay, noise_averaged_fidelity, standard_urc, EtaMode, MonteCarloConfig,
    PropagationConfig, PulseProgram,
};
use udesign::design::{design_report, SampledEnsemble};
use udesign::sphere::{arc_length, hopf_map, stereographic_project, SpherePoint};

use crate::args::{
    build_curve, build_path, parse_dd_kinds, parse_grid, parse_int_range, parse_pulses, ConstructArgs,
    FfArgs, GateArgs, MemoryArgs, ProjectArgs, Projection, PulseChoice, VerifyArgs, BB1_PHASE_LITERAL,
};
use crate::output::{fmt_f64, RunManifest, Staged};

/// Staged outputs of one command plus the manifest describing it.
pub struct RunOutput {
    pub staged: Staged,
    pub manifest: RunManifest,
}

impl RunOutput {
    /// Stages the manifest next to the primary output and renames every
    /// file into place.
    pub fn commit(mut self) -> Result<Vec<PathBuf>> {
        let primary = PathBuf::from(&self.manifest.output);
        self.staged.add_json(&RunManifest::path_for(&primary), &self.manifest)?;
        let written = self.staged.paths().iter().map(|p| p.to_path_buf()).collect();
        self.staged.commit()?;
        Ok(written)
    }
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    out.with_extension(suffix)
}

fn project_point(p: &SpherePoint, map: Projection) -> Result<[f64; 3]> {
    match map {
        Projection::Stereo => Ok(stereographic_project(p)?),
        Projection::Hopf => {
            let h = hopf_map(p)?;
            let c = h.coords();
            Ok([c[0], c[1], c[2]])
        }
    }
}

pub fn construct(args: &ConstructArgs) -> Result<RunOutput> {
    let mut staged = Staged::default();
    if args.shape.path.is_none() {
        let curve = build_curve(&args.shape)?;
        let n = args.samples.unwrap_or_else(|| curve.default_samples());
        if n == 0 {
            bail!("--samples must be positive");
        }
        let points = curve.sample(n);
        let mut rows = Vec::with_capacity(n);
        for (k, p) in points.iter().enumerate() {
            let s = k as f64 / n as f64;
            let mut row = vec![fmt_f64(s)];
            match args.project {
                Some(map) => {
                    let q = project_point(p, map).with_context(|| format!("sample {k} (s = {s})"))?;
                    row.extend(q.iter().map(|x| fmt_f64(*x)));
                }
                None => row.extend(p.coords().iter().map(|x| fmt_f64(*x))),
            }
            rows.push(row);
        }
        let header: Vec<String> = match args.project {
            Some(_) => vec!["s".into(), "X".into(), "Y".into(), "Z".into()],
            None => std::iter::once("s".to_string())
                .chain((1..=curve.ambient_dim()).map(|i| format!("x{i}")))
                .collect(),
        };
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        staged.add_csv(&args.out, &header, &rows)?;
        staged.add_json(
            &sidecar(&args.out, "json"),
            &json!({
                "kind": "curve",
                "curve": curve,
                "samples": n,
                "projection": args.project,
                "arc_length": arc_length(&curve),
            }),
        )?;
    } else {
        if args.project.is_some() {
            bail!("--project applies to curves only");
        }
        let path = build_path(&args.shape)?;
        let n = args.samples.or(path.min_samples()).unwrap_or(64);
        if n == 0 {
            bail!("--samples must be positive");
        }
        let d = path.dim();
        let mut header = vec!["s".to_string()];
        for i in 0..d {
            for j in 0..d {
                header.push(format!("re_{i}{j}"));
                header.push(format!("im_{i}{j}"));
            }
        }
        let rows: Vec<Vec<String>> = path
            .sample(n)
            .iter()
            .enumerate()
            .map(|(k, u)| {
                let mut row = vec![fmt_f64(k as f64 / n as f64)];
                for z in u.mat().to_row_major() {
                    row.push(fmt_f64(z.re));
                    row.push(fmt_f64(z.im));
                }
                row
            })
            .collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        staged.add_csv(&args.out, &header, &rows)?;
        let mut descriptor = path.descriptor();
        descriptor["samples"] = json!(n);
        staged.add_json(&sidecar(&args.out, "json"), &descriptor)?;
    }
    let manifest = RunManifest::new("construct", args, 0, &args.out)?;
    Ok(RunOutput { staged, manifest })
}

pub fn verify(args: &VerifyArgs) -> Result<RunOutput> {
    if !(args.tol > 0.0) {
        bail!("--tol must be positive");
    }
    let path = build_path(&args.shape)?;
    let n = args.n.or(path.min_samples()).unwrap_or(64);
    if n == 0 {
        bail!("--n must be positive");
    }
    let report = design_report(&SampledEnsemble::from_path(&path, n)?, args.tol)?;
    let mut staged = Staged::default();
    let mut scan_summary = None;
    if let Some(range) = &args.scan {
        let ns = parse_int_range(range)?;
        let mut rows = Vec::with_capacity(ns.len());
        // Smallest scanned N from which every larger scanned N passes.
        let mut designs_from = None;
        for m in ns {
            let r = design_report(&SampledEnsemble::from_path(&path, m)?, args.tol)?;
            match (r.verdict, designs_from) {
                (true, None) => designs_from = Some(m),
                (false, _) => designs_from = None,
                _ => {}
            }
            rows.push(vec![
                m.to_string(),
                fmt_f64(r.frame_potential_t1),
                fmt_f64(r.twirl_deviation),
                r.verdict.to_string(),
            ]);
        }
        let scan_path = args.scan_out.clone().unwrap_or_else(|| sidecar(&args.out, "csv"));
        staged.add_csv(&scan_path, &["n", "frame_potential", "twirl_deviation", "is_design"], &rows)?;
        scan_summary = Some(json!({ "range": range, "output": scan_path, "designs_from_n": designs_from }));
    }
    staged.add_json(
        &args.out,
        &json!({ "path": path.descriptor(), "report": report, "scan": scan_summary }),
    )?;
    let manifest = RunManifest::new("verify", args, 0, &args.out)?;
    Ok(RunOutput { staged, manifest })
}

fn make_pulse(choice: PulseChoice) -> Result<PulseProgram> {
    Ok(match choice {
        PulseChoice::Urc => standard_urc(1.0),
        PulseChoice::Composite(kind) => composite_pulse(kind, 1.0)?,
    })
}

fn propagation_config(pulse: &PulseProgram, steps: Option<usize>) -> Result<PropagationConfig> {
    match steps {
        Some(n) => Ok(PropagationConfig::new(n)?),
        None => Ok(PropagationConfig::converged(pulse)),
    }
}

pub fn simulate_gate(args: &GateArgs) -> Result<RunOutput> {
    let pulses = parse_pulses(&args.pulses)?;
    let etas = parse_grid(&args.eta)?;
    let target = udesign::qmat::UnitaryOp::identity(2);
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut steps = BTreeMap::new();
    for choice in &pulses {
        let pulse = make_pulse(*choice)?;
        let cfg = propagation_config(&pulse, args.steps)?;
        steps.insert(choice.name(), cfg.steps_per_segment);
        for &eta in &etas {
            let mc = MonteCarloConfig::new(args.trials, args.seed, EtaMode::Fixed { eta })?;
            let stats = noise_averaged_fidelity(&pulse, &target, &mc, &cfg)?;
            rows.push(vec![choice.name().to_string(), fmt_f64(eta), fmt_f64(stats.mean), fmt_f64(stats.std_err)]);
            records.push(json!({ "pulse": choice.name(), "eta": eta, "mean_F": stats.mean, "stderr": stats.std_err }));
        }
    }
    let mut staged = Staged::default();
    staged.add_csv(&args.out, &["pulse", "eta", "mean_F", "stderr"], &rows)?;
    staged.add_json(
        &sidecar(&args.out, "json"),
        &json!({
            "metadata": {
                "seed": args.seed,
                "trials": args.trials,
                "steps": steps,
                "pulses": pulses.iter().map(|p| p.name()).collect::<Vec<_>>(),
                "omega": 1.0,
                "target": "identity",
                "bb1_phase": BB1_PHASE_LITERAL,
            },
            "rows": records,
        }),
    )?;
    let manifest = RunManifest::new("simulate gate", args, args.seed, &args.out)?;
    Ok(RunOutput { staged, manifest })
}

pub fn simulate_memory(args: &MemoryArgs) -> Result<RunOutput> {
    let kinds = parse_dd_kinds(&args.kinds)?;
    if args.reps == 0 {
        bail!("--reps must be positive");
    }
    if !(args.etamax >= 0.0) {
        bail!("--etamax must be nonnegative");
    }
    let tau = args.tau.unwrap_or_else(|| default_tau(1.0));
    let reps = equal_time_repetitions(&kinds, args.reps, tau, 1.0)?;
    let mc = MonteCarloConfig::new(args.trials, args.seed, EtaMode::UniformUpTo { eta_max: args.etamax })?;
    let mut rows = Vec::new();
    let mut per_kind = Vec::new();
    for (kind, r) in kinds.iter().zip(&reps) {
        let cycle = dd_sequence(*kind, tau, 1.0)?;
        let cfg = propagation_config(&cycle, args.steps)?;
        let decay = memory_decay(*kind, *r, &mc, &cfg, tau, 1.0)?;
        for (rep, f) in &decay.curve {
            rows.push(vec![kind.name().to_string(), rep.to_string(), fmt_f64(*f)]);
        }
        per_kind.push(json!({
            "kind": kind.name(),
            "repetitions": r,
            "cycle_duration": decay.cycle_duration,
            "total_time": decay.cycle_duration * *r as f64,
            "steps": cfg.steps_per_segment,
            "run_mean": decay.run_mean,
            "run_stderr": decay.run_std_err,
            "curve": decay.curve,
        }));
    }
    let mut staged = Staged::default();
    staged.add_csv(&args.out, &["kind", "repetition", "mean_F"], &rows)?;
    staged.add_json(
        &sidecar(&args.out, "json"),
        &json!({
            "metadata": {
                "seed": args.seed,
                "trials": args.trials,
                "eta_max": args.etamax,
                "tau": tau,
                "omega": 1.0,
                "reference_reps": args.reps,
            },
            "kinds": per_kind,
        }),
    )?;
    let manifest = RunManifest::new("simulate memory", args, args.seed, &args.out)?;
    Ok(RunOutput { staged, manifest })
}

pub fn simulate_ff(args: &FfArgs) -> Result<RunOutput> {
    let pulses = parse_pulses(&args.pulses)?;
    let omegas = parse_grid(&args.omega)?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut steps = BTreeMap::new();
    for choice in &pulses {
        let pulse = make_pulse(*choice)?;
        let cfg = propagation_config(&pulse, args.steps)?;
        steps.insert(choice.name(), cfg.steps_per_segment);
        let ff = filter_function(&pulse, &omegas, &cfg)?;
        for (i, w) in ff.omega.iter().enumerate() {
            rows.push(vec![
                choice.name().to_string(),
                fmt_f64(*w),
                fmt_f64(ff.ff[0][i]),
                fmt_f64(ff.ff[1][i]),
                fmt_f64(ff.ff[2][i]),
            ]);
        }
        records.push(json!({ "pulse": choice.name(), "omega": ff.omega, "FF": ff.ff }));
    }
    let mut staged = Staged::default();
    staged.add_csv(&args.out, &["pulse", "omega", "FF_x", "FF_y", "FF_z"], &rows)?;
    staged.add_json(
        &sidecar(&args.out, "json"),
        &json!({
            "metadata": { "steps": steps, "omega_unit": "Omega", "bb1_phase": BB1_PHASE_LITERAL },
            "pulses": records,
        }),
    )?;
    let manifest = RunManifest::new("simulate ff", args, 0, &args.out)?;
    Ok(RunOutput { staged, manifest })
}

pub fn project(args: &ProjectArgs) -> Result<RunOutput> {
    let mut reader = csv::Reader::from_path(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let xs: Vec<usize> = (1..=4)
        .map(|i| col(&format!("x{i}")).ok_or_else(|| anyhow!("input needs columns x1..x4")))
        .collect::<Result<_>>()?;
    let s_col = col("s");
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let field = |i: usize| -> Result<f64> {
            record
                .get(i)
                .ok_or_else(|| anyhow!("row {}: missing field", line + 1))?
                .trim()
                .parse::<f64>()
                .with_context(|| format!("row {}: not a number", line + 1))
        };
        let coords: Vec<f64> = xs.iter().map(|&i| field(i)).collect::<Result<_>>()?;
        let p = SpherePoint::new(coords).with_context(|| format!("row {}", line + 1))?;
        let q = project_point(&p, args.map).with_context(|| format!("row {}", line + 1))?;
        let mut row = Vec::new();
        if let Some(i) = s_col {
            row.push(fmt_f64(field(i)?));
        }
        row.extend(q.iter().map(|x| fmt_f64(*x)));
        rows.push(row);
    }
    let header: Vec<&str> = if s_col.is_some() { vec!["s", "X", "Y", "Z"] } else { vec!["X", "Y", "Z"] };
    let mut staged = Staged::default();
    staged.add_csv(&args.out, &header, &rows)?;
    let manifest = RunManifest::new("project", args, 0, &args.out)?;
    Ok(RunOutput { staged, manifest })
}

/// Re-executes a manifest, optionally redirecting the primary output.
pub fn rerun(manifest_path: &Path, out: Option<&Path>) -> Result<RunOutput> {
    let mut manifest = RunManifest::load(manifest_path)?;
    if let Some(o) = out {
        manifest.parameters.insert("out".into(), json!(o));
        manifest.parameters.remove("scan_out");
    }
    match manifest.command.as_str() {
        "construct" => construct(&manifest.arguments()?),
        "verify" => verify(&manifest.arguments()?),
        "simulate gate" => simulate_gate(&manifest.arguments()?),
        "simulate memory" => simulate_memory(&manifest.arguments()?),
        "simulate ff" => simulate_ff(&manifest.arguments()?),
        "project" => project(&manifest.arguments()?),
        other => bail!("unknown command '{other}' in manifest"),
    }
}
