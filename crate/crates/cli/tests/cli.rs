use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qlnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlnet"))
        .args(args)
        .output()
        .unwrap()
}

fn example(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    PathBuf::from(format!("{}.{ext}", prefix.display()))
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn spectrum_reports_cycle_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    let o = qlnet(&[
        "spectrum",
        "--net",
        &example("or_and.qln"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("cycle lengths 6,4,3,3"));
    let csv = std::fs::read_to_string(with_ext(&out, "csv")).unwrap();
    assert!(csv.contains("# cycle lengths 6,4,3,3"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 16);
    assert!(with_ext(&out, "svg").exists());
}

#[test]
fn quantum_loop_perturbation_stays_single() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p");
    let o = qlnet(&[
        "perturb",
        "--net",
        &example("loop12.qln"),
        "--hadamard",
        "all",
        "--steps",
        "72",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("max distance 1 class loop-soliton"));
    for ext in ["csv", "pattern.csv", "svg", "pgm"] {
        assert!(with_ext(&out, ext).exists(), "{ext}");
    }
    let csv = std::fs::read_to_string(with_ext(&out, "csv")).unwrap();
    let rows: Vec<&str> = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 73);
    assert!(rows.iter().all(|r| r.split(',').nth(2) == Some("1")));
}

#[test]
fn outputs_regenerate_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a");
    let net = example("chain_on_loop.qln");
    let run = || {
        let o = qlnet(&[
            "perturb",
            "--net",
            &net,
            "--node",
            "2",
            "--hadamard",
            "all",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        ["csv", "pattern.csv", "svg", "pgm"].map(|ext| std::fs::read(with_ext(&out, ext)).unwrap())
    };
    assert_eq!(run(), run());
}

#[test]
fn ensemble_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"sizes":[4,6],"realizations":40,"steps":20,"seed":9,"mode":"CLASSICAL"}"#,
    )
    .unwrap();
    let out = dir.path().join("e");
    let o = qlnet(&[
        "ensemble",
        "--config",
        cfg.to_str().unwrap(),
        "--both",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(with_ext(&out, "csv")).unwrap();
    assert!(csv.contains("# seed 9"));
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        rows[0],
        "n,mode,mean,stderr,timeMax,realizations,steps,seed"
    );
    assert_eq!(rows.len(), 5);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(with_ext(&out, "json")).unwrap()).unwrap();
    assert!(json.is_array() || json.is_object());
}

#[test]
fn render_converts_patterns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p");
    qlnet(&[
        "perturb",
        "--net",
        &example("chain12.qln"),
        "--hadamard",
        "all",
        "--out",
        out.to_str().unwrap(),
    ]);
    let pgm = dir.path().join("r.pgm");
    let o = qlnet(&[
        "render",
        "--input",
        with_ext(&out, "pattern.csv").to_str().unwrap(),
        "--format",
        "pgm",
        "--out",
        pgm.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let body = |p: &Path| -> Vec<String> {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(String::from)
            .collect()
    };
    assert_eq!(body(&pgm), body(&with_ext(&out, "pgm")));
}

#[test]
fn gen_is_deterministic_and_parseable() {
    let a = qlnet(&["gen", "--n", "9", "--seed", "4", "--hadamard", "all"]);
    let b = qlnet(&["gen", "--n", "9", "--seed", "4", "--hadamard", "all"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("g.qln");
    std::fs::write(&net, &a.stdout).unwrap();
    let o = qlnet(&[
        "perturb",
        "--net",
        net.to_str().unwrap(),
        "--out",
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert!(o.status.success());
}

#[test]
fn step_and_cycle_on_the_or_and_network() {
    let o = qlnet(&[
        "step",
        "--net",
        &example("or_and.qln"),
        "--state",
        "0000",
        "--steps",
        "2",
    ]);
    assert_eq!(stdout(&o), "t=0 0000\nt=1 0001\nt=2 0111\n");
    let o = qlnet(&["cycle", "--net", &example("or_and.qln")]);
    assert_eq!(stdout(&o).trim(), "cycles 6,4,3,3");
}

#[test]
fn exit_codes() {
    assert_eq!(qlnet(&["gen", "--n", "0"]).status.code(), Some(1));
    assert_eq!(qlnet(&["nonsense"]).status.code(), Some(1));
    assert_eq!(qlnet(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    // two effective inputs cannot be tracked as a Pauli frame
    let o = qlnet(&[
        "perturb",
        "--net",
        &example("or_and.qln"),
        "--out",
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = qlnet(&[
        "cycle",
        "--net",
        dir.path().join("missing.qln").to_str().unwrap(),
    ]);
    assert_ne!(o.status.code(), Some(0));
}
