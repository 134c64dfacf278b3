use std::process::{Command, Output};

fn gqca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqca"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_names_every_experiment() {
    let o = gqca(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in [
        "domain-walls",
        "choi-eigenvalues",
        "choi-sweep",
        "mass-renorm",
        "color-blindness",
        "stokes",
        "sector-equivalence",
        "schedule-independence",
        "dirac-limit",
        "invisible-pair",
    ] {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(gqca(&["run", "choi-eigenvalues"]).status.code(), Some(0));
    assert_eq!(gqca(&["run", "no-such-thing"]).status.code(), Some(4));
    assert_eq!(
        gqca(&["run", "choi-eigenvalues", "--colour=red"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        gqca(&["run", "schedule-independence", "--n=64"])
            .status
            .code(),
        Some(3)
    );
    // the crossing condition is the one claim that does not hold
    assert_eq!(
        gqca(&["run", "color-blindness", "--trials=10"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn runs_are_deterministic() {
    let a = gqca(&["run", "schedule-independence", "--schedules=5", "--seed=9"]);
    let b = gqca(&["run", "schedule-independence", "--schedules=5", "--seed=9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = gqca(&["run", "choi-sweep", "--n_max=2", "--l_max=3"]);
    let b = gqca(&["run", "choi-sweep", "--n_max=2", "--l_max=3"]);
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    assert!(csv.starts_with("N,L,a,min_eigenvalue\n"));
    // 2 x 2 partitions x 21 points plus the header and four verdict lines
    assert_eq!(csv.lines().count(), 1 + 4 * 21 + 4);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("walls.cfg");
    std::fs::write(
        &cfg,
        "# two walls\ninitial = 0001110000\nsteps = 1\noverlay = none\n",
    )
    .unwrap();
    let o = gqca(&["run", "domain-walls", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "0001110000\n0000100000\n0000100000\n");
    let o = gqca(&[
        "run",
        "domain-walls",
        "--config",
        cfg.to_str().unwrap(),
        "--steps=0",
    ]);
    assert_eq!(stdout(&o), "0001110000\n");
}

#[test]
fn render_text_and_ppm() {
    let o = gqca(&["render", "0011", "--steps", "1", "--overlay", "none"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ppm");
    let b = dir.path().join("b.ppm");
    for p in [&a, &b] {
        let o = gqca(&[
            "render",
            "0011100000",
            "--steps",
            "3",
            "--style",
            "ppm",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert!(bytes.starts_with(b"P6\n"));
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let o = gqca(&["render", "0012", "--steps", "1"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn dirac_limit_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dirac.csv");
    let o = gqca(&["run", "dirac-limit", &format!("--out={}", out.display())]);
    assert!(o.status.success(), "{}", stdout(&o));
    let csv = std::fs::read_to_string(out).unwrap();
    assert!(csv.starts_with("m,eps,grid_points,half_steps,error\n"));
    assert_eq!(csv.lines().count(), 7);
}
