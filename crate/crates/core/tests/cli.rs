use std::path::Path;
use std::process::{Command, Output};

use boundary_comparison::verify::VerificationReport;

fn bcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcomp"))
        .args(args)
        .output()
        .expect("run bcomp")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_then_verify_disk_passes() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("disk.off");
    let report = dir.path().join("disk.json");
    let o = bcomp(&["generate", "disk", "radius=1", "h=0.08", "--out", p(&mesh)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&mesh).unwrap().starts_with("OFF"));
    let o = bcomp(&["verify", p(&mesh), "--out", p(&report), "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = std::fs::read_to_string(&report).unwrap();
    let r: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.provenance.seed, 3);
    assert!(r.manifold.contains("disk.off"), "{}", r.manifold);
    assert!(text.ends_with('\n'));
}

#[test]
fn warped_descriptor_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let desc = dir.path().join("ball.json");
    assert_eq!(
        code(&bcomp(&["generate", "ball", "n=3", "radius=2", "--out", p(&desc)])),
        0
    );
    let o = bcomp(&["verify", p(&desc)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("hypotheses hold: true"));
}

#[test]
fn saddle_exits_with_hypotheses_code() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("saddle.obj");
    assert_eq!(code(&bcomp(&["generate", "saddle", "h=0.1", "--out", p(&mesh)])), 0);
    assert_eq!(code(&bcomp(&["verify", p(&mesh)])), 2);
}

#[test]
fn stretched_field_exits_with_violation() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("disk.off");
    assert_eq!(code(&bcomp(&["generate", "disk", "h=0.1", "--out", p(&mesh)])), 0);
    let s = boundary_comparison::mesh::load_mesh(&mesh).unwrap();
    let m = boundary_comparison::verify::MeshManifold::new(s).unwrap();
    let field = dir.path().join("r.csv");
    boundary_comparison::mesh::save_field_csv(&m.distance().scaled(1.2), &field).unwrap();
    let o = bcomp(&["verify", p(&mesh), "--field", p(&field)]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&bcomp(&["frobnicate"])), 64);
    assert_eq!(
        code(&bcomp(&["generate", "disk", "h=-1", "--out", "/tmp/never.off"])),
        64
    );
    assert_eq!(
        code(&bcomp(&["generate", "disk", "colour=3", "--out", "/tmp/never.off"])),
        64
    );
    assert_eq!(
        code(&bcomp(&["generate", "ball", "n=2", "--out", "x.json", "--bogus"])),
        64
    );
    let dir = tempfile::tempdir().unwrap();
    let desc = dir.path().join("b.json");
    assert_eq!(code(&bcomp(&["generate", "ball", "--out", p(&desc)])), 0);
    assert_eq!(code(&bcomp(&["verify", p(&desc), "--tol-scale", "-1"])), 64);
}

#[test]
fn malformed_input_exits_65() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.off");
    std::fs::write(&bad, "OFF\n3 1 0\n0 0 0\n1 0 0\n").unwrap();
    assert_eq!(code(&bcomp(&["verify", p(&bad)])), 65);
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[verify]\ngrid_points = \"many\"\n").unwrap();
    let desc = dir.path().join("b.json");
    assert_eq!(code(&bcomp(&["generate", "ball", "--out", p(&desc)])), 0);
    let o = bcomp(&["verify", p(&desc), "--config", p(&cfg)]);
    assert_eq!(code(&o), 65);
    assert!(
        String::from_utf8_lossy(&o.stderr).contains(":2:"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn missing_input_exits_74() {
    assert_eq!(code(&bcomp(&["verify", "/nonexistent/mesh.off"])), 74);
}

#[test]
fn sweep_writes_csv_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("caps");
    let o = bcomp(&[
        "sweep",
        "cylinder_cap",
        "k=1",
        "--from",
        "1",
        "--to",
        "4",
        "--delta-grid",
        "0,0.5",
        "--out",
        p(&prefix),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("caps.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].contains("flat_upper_inner@"), "{}", lines[0]);
    let verdict: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("caps.verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict["verdict"]["bounded_diameter"]["holds"], false);
    assert_eq!(verdict["records"].as_array().unwrap().len(), 4);
}

#[test]
fn report_extracts_series() {
    let dir = tempfile::tempdir().unwrap();
    let desc = dir.path().join("cap.json");
    let report = dir.path().join("cap.report.json");
    let csv = dir.path().join("cap.csv");
    assert_eq!(
        code(&bcomp(&[
            "generate",
            "spherical_cap",
            "k=1",
            "radius=1",
            "--out",
            p(&desc)
        ])),
        0
    );
    assert_eq!(code(&bcomp(&["verify", p(&desc), "--out", p(&report)])), 0);
    assert_eq!(code(&bcomp(&["report", p(&report), "--out", p(&csv)])), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("check,x,measured,bound\n"));
    assert!(text.lines().any(|l| l.starts_with("area_bound,")));
}

#[test]
fn verify_is_deterministic_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("cap.off");
    assert_eq!(
        code(&bcomp(&[
            "generate",
            "sphere_minus_cap",
            "cap=0.5",
            "h=0.08",
            "--out",
            p(&mesh)
        ])),
        0
    );
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(code(&bcomp(&["verify", p(&mesh), "--out", p(&a), "--jobs", "1"])), 0);
    assert_eq!(code(&bcomp(&["verify", p(&mesh), "--out", p(&b), "--jobs", "3"])), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
