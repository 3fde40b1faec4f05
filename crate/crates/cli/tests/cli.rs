use std::path::Path;
use std::process::{Command, Output};

fn udesign(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udesign"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) {
    let out = udesign(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn entries(dir: &Path) -> usize {
    std::fs::read_dir(dir).unwrap().count()
}

#[test]
fn construct_two_axis() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["construct", "--path", "two-axis", "--n1", "z", "--n2", "y", "--samples", "256", "--out", "path.csv"]);
    let csv = read(dir.path(), "path.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 257);
    assert!(lines[0].starts_with("s,re_00,im_00"));
    assert_eq!(lines[1].split(',').nth(1).unwrap(), "1.0000000000000000e0");
    let descriptor: serde_json::Value = serde_json::from_str(&read(dir.path(), "path.json")).unwrap();
    assert_eq!(descriptor["kind"], "two-axis");
    let manifest: serde_json::Value = serde_json::from_str(&read(dir.path(), "path.manifest.json")).unwrap();
    assert_eq!(manifest["command"], "construct");
    assert_eq!(manifest["parameters"]["samples"], 256);
}

#[test]
fn construct_projected_curve_and_hw() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["construct", "--curve", "xi", "--samples", "128", "--project", "stereo", "--out", "xi3d.csv"]);
    let csv = read(dir.path(), "xi3d.csv");
    assert_eq!(csv.lines().count(), 129);
    // ξ(0) = (1, 0, 1, 0)/√2 maps to (1, 0, 1)/√2.
    let first: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((first[1] - r).abs() < 1e-15 && first[2].abs() < 1e-15 && (first[3] - r).abs() < 1e-15);
    ok(dir.path(), &["construct", "--path", "hw", "--d", "3", "--samples", "81", "--out", "hw.csv"]);
    let hw = read(dir.path(), "hw.csv");
    assert_eq!(hw.lines().count(), 82);
    assert_eq!(hw.lines().next().unwrap().split(',').count(), 1 + 2 * 9);
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["verify", "--path", "two-axis", "--n", "4", "--out", "v.json"]);
    let v: serde_json::Value = serde_json::from_str(&read(dir.path(), "v.json")).unwrap();
    assert!((v["report"]["frame_potential_t1"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(v["report"]["verdict"], true);

    ok(dir.path(), &["verify", "--path", "fiber", "--d", "3", "--scan", "5:50", "--out", "fiber.json"]);
    let f: serde_json::Value = serde_json::from_str(&read(dir.path(), "fiber.json")).unwrap();
    assert_eq!(f["scan"]["designs_from_n"], 25);
    let scan = read(dir.path(), "fiber.csv");
    assert_eq!(scan.lines().count(), 47);
    assert!(scan.lines().any(|l| l.starts_with("24,") && l.ends_with(",false")));

    ok(dir.path(), &["verify", "--path", "open", "--target", "Z", "--scan", "8:64", "--out", "open.json"]);
    let fps: Vec<f64> = read(dir.path(), "open.csv")
        .lines()
        .skip(1)
        .filter(|l| ["8,", "16,", "32,", "64,"].iter().any(|p| l.starts_with(p)))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(fps.len(), 4);
    assert!(fps.windows(2).all(|w| w[1] < w[0]));
    assert!(fps[3] - 1.0 <= 1e-3);
}

#[test]
fn simulations_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["simulate", "gate", "--pulses", "urc,square", "--eta", "0,0.1", "--trials", "20", "--seed", "3", "--steps", "300", "--out", "gate.csv"]);
    let gate = read(d, "gate.csv");
    assert_eq!(gate.lines().next().unwrap(), "pulse,eta,mean_F,stderr");
    assert_eq!(gate.lines().count(), 5);
    let meta: serde_json::Value = serde_json::from_str(&read(d, "gate.json")).unwrap();
    assert_eq!(meta["metadata"]["seed"], 3);
    assert_eq!(meta["metadata"]["trials"], 20);

    ok(d, &["rerun", "gate.manifest.json", "--out", "again.csv"]);
    assert_eq!(read(d, "again.csv"), gate);

    let threaded = Command::new(env!("CARGO_BIN_EXE_udesign"))
        .current_dir(d)
        .env("UDESIGN_THREADS", "2")
        .args(["rerun", "gate.manifest.json", "--out", "threads.csv"])
        .output()
        .unwrap();
    assert!(threaded.status.success());
    assert_eq!(read(d, "threads.csv"), gate);

    let manifest = read(d, "gate.manifest.json");
    ok(d, &["rerun", "gate.manifest.json"]);
    assert_eq!(read(d, "gate.csv"), gate);
    assert_eq!(read(d, "gate.manifest.json"), manifest);
}

#[test]
fn memory_and_filter_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["simulate", "memory", "--kinds", "urc,xy4,cpmg", "--reps", "4", "--trials", "5", "--etamax", "0.05", "--seed", "7", "--steps", "300", "--out", "mem.csv"]);
    let mem = read(d, "mem.csv");
    assert_eq!(mem.lines().next().unwrap(), "kind,repetition,mean_F");
    let meta: serde_json::Value = serde_json::from_str(&read(d, "mem.json")).unwrap();
    let reps: Vec<u64> = meta["kinds"].as_array().unwrap().iter().map(|k| k["repetitions"].as_u64().unwrap()).collect();
    assert_eq!(reps, vec![4, 1, 2]);

    ok(d, &["simulate", "ff", "--pulses", "urc,square", "--omega", "0:0.1:0.05", "--steps", "200", "--out", "ff.csv"]);
    let ff = read(d, "ff.csv");
    let lines: Vec<&str> = ff.lines().collect();
    assert_eq!(lines[0], "pulse,omega,FF_x,FF_y,FF_z");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].ends_with("0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0"));
}

#[test]
fn project_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["construct", "--curve", "gamma", "--samples", "16", "--out", "g.csv"]);
    ok(d, &["project", "--input", "g.csv", "--map", "hopf", "--out", "h.csv"]);
    let h = read(d, "h.csv");
    assert_eq!(h.lines().next().unwrap(), "s,X,Y,Z");
    for line in h.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] * v[1] + v[2] * v[2] + v[3] * v[3] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn failures_leave_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases: &[&[&str]] = &[
        &["construct", "--path", "spiral", "--out", "a.csv"],
        &["construct", "--path", "two-axis", "--n1", "z", "--n2", "z", "--out", "a.csv"],
        &["construct", "--path", "two-axis", "--n1", "q", "--out", "a.csv"],
        &["verify", "--path", "fiber", "--d", "9", "--out", "a.json"],
        &["simulate", "gate", "--pulses", "gauss", "--out", "a.csv"],
        &["simulate", "ff", "--omega", "1:0:0.1", "--out", "a.csv"],
    ];
    for args in cases {
        let out = udesign(d, args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    assert_eq!(entries(d), 0);

    std::fs::write(d.join("pole.csv"), "x1,x2,x3,x4\n0,0,0,-1\n").unwrap();
    let out = udesign(d, &["project", "--input", "pole.csv", "--out", "p.csv"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("south pole"));
    assert!(!d.join("p.csv").exists());

    let bad_threads = Command::new(env!("CARGO_BIN_EXE_udesign"))
        .current_dir(d)
        .env("UDESIGN_THREADS", "zero")
        .args(["verify", "--path", "two-axis", "--out", "t.json"])
        .output()
        .unwrap();
    assert!(!bad_threads.status.success());
    assert!(!d.join("t.json").exists());
}
