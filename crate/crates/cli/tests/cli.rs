use std::fs;
use std::process::{Command, Output};

fn hkf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkf"))
        .args(args)
        .output()
        .expect("run hkf")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sweep_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        stdout(&hkf(&[
            "sweep",
            "--family",
            "equal-spaced",
            "--ns",
            "12,24,48",
            "--out",
            p.to_str().unwrap(),
        ]));
    }
    let text = fs::read(&a).unwrap();
    assert_eq!(text, fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    assert!(text.starts_with("family,n,agents,mode,freeze_time,steps_run,frozen,wall_time_ms\n"));
    assert!(text.contains("equal-spaced,12,12,exact,11,11,true,0\n"));

    let fit = stdout(&hkf(&["fit", "--in", a.to_str().unwrap()]));
    let b: f64 = fit
        .split_whitespace()
        .find_map(|f| f.strip_prefix("b="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((b - 0.93).abs() < 0.1, "{fit}");
}

#[test]
fn monte_carlo_walk_is_seeded() {
    let run = |seed: &str| {
        let o = hkf(&[
            "walk",
            "--n",
            "6",
            "--t",
            "20",
            "--samples",
            "2000",
            "--seed",
            seed,
        ]);
        assert!(o.status.success());
        (
            String::from_utf8(o.stdout).unwrap(),
            String::from_utf8(o.stderr).unwrap(),
        )
    };
    let first = run("7");
    assert_eq!(first, run("7"));
    assert!(first.0.starts_with("t,h11,sqrt_t,ratio\n1,5/3,1,"));
}

#[test]
fn simulate_writes_exact_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let text = stdout(&hkf(&[
        "simulate",
        "--family",
        "triple",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert!(text.contains("freeze_time=2 clusters=1"), "{text}");
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.contains("2,0,0,1/3\n2,0,1,0\n"));
    assert!(csv.ends_with("# frozen=true freeze_time=2 steps=2\n"));
}

#[test]
fn simulate_reads_configuration_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("line.txt");
    fs::write(&path, "0\n1\n2\n").unwrap();
    let text = stdout(&hkf(&[
        "simulate",
        "--family",
        "file",
        "--file",
        path.to_str().unwrap(),
        "--mode",
        "exact",
    ]));
    assert!(
        text.starts_with("agents=3 mode=exact freeze_time=2 clusters=1"),
        "{text}"
    );
    assert!(!hkf(&["simulate", "--family", "file"]).status.success());
}

#[test]
fn dumbbell_simulation_reports_phase() {
    let text = stdout(&hkf(&[
        "simulate",
        "--family",
        "dumbbell-chain",
        "--n",
        "4",
    ]));
    assert!(text.contains("freeze_time=12"), "{text}");
    assert!(text.contains("cluster contact: true"), "{text}");
}

#[test]
fn delta_accepts_rational_kappa() {
    let text = stdout(&hkf(&["delta", "--n", "3", "--kappa", "1/2", "--t", "1"]));
    assert_eq!(
        text,
        "t,i,delta\n0,1,0\n0,2,0\n0,3,0\n1,1,1/2\n1,2,0\n1,3,1/2\n"
    );
}

#[test]
fn verify_theorem_suite_passes() {
    let text = stdout(&hkf(&["verify", "--suite", "theorem1"]));
    assert_eq!(
        text.lines().filter(|l| l.starts_with("PASS")).count(),
        1,
        "{text}"
    );
    assert!(!hkf(&["verify", "--suite", "nope"]).status.success());
}
