use std::fs;
use std::process::{Command, Output};

fn qigalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qigalab"))
        .args(args)
        .env_remove("QIGALAB_OUT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn schema_fitness_prints_csv() {
    let o = qigalab(&["schema-fitness", "01001", "010*1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "schema,order,defining_length,fitness");
    assert!(lines[1].starts_with("01001*****,5,4,67.87"));
    assert!(lines[2].starts_with("010*1*****,4,4,51.36"));
}

#[test]
fn table2_ranks_the_building_block_first() {
    let o = qigalab(&["table2", "--top", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().nth(1).unwrap().starts_with("01001*****,"));
}

#[test]
fn sampling_dist_half_domain() {
    let o = qigalab(&["sampling-dist", "0++++"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (x, p) = l.split_once(',').unwrap();
            (x.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 32);
    for (i, (_, p)) in rows.iter().enumerate() {
        assert_eq!(*p, if i < 16 { 0.0625 } else { 0.0 });
    }
}

#[test]
fn sampling_dist_accepts_probabilities() {
    let o = qigalab(&["sampling-dist", "1,0.25"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().nth(3).unwrap().split(',').nth(1), Some("0.75"));
}

#[test]
fn propagation_check_passes() {
    let o = qigalab(&["propagation-check", "--instances", "50"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("ok"));
}

#[test]
fn run_experiment_writes_files_and_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = qigalab(&[
            "run-experiment",
            "--runs",
            "2",
            "--seed",
            "7",
            "--schema",
            "01001",
            "--schema",
            "01*01",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in [
        "fig5_fitness.csv",
        "fig6_propagation.csv",
        "fig6_propagation_1.csv",
        "summary.csv",
    ] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap()
        );
    }
    let summary = fs::read_to_string(a.path().join("summary.csv")).unwrap();
    assert!(summary.contains("sga,1,8,"));
    assert!(summary.contains("qiga,0,7,"));
}

#[test]
fn environment_sets_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qigalab"))
        .args(["run-qiga", "--runs", "1"])
        .env("QIGALAB_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("runs/qiga_run00.csv").is_file());
    assert!(!dir.path().join("runs/sga_run00.csv").exists());
}

#[test]
fn config_file_and_running_best() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    fs::write(
        &cfg,
        "[experiment]\nalgorithm = \"sga\"\nreplications = 2\nout = \"res\"\n\n[sga]\nmax_generations = 20\n",
    )
    .unwrap();
    let o = qigalab(&[
        "run-experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--running-best",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let fig5 = fs::read_to_string(dir.path().join("res/fig5_fitness.csv")).unwrap();
    let best: Vec<f64> = fig5
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(best.len(), 21);
    assert!(best.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn errors_exit_nonzero_with_a_diagnostic() {
    for args in [
        &["schema-fitness", "01x"][..],
        &["run-experiment", "--runs", "0", "--out", "/dev/null/x"],
        &["run-experiment", "--knots", "/nonexistent/knots.txt"],
        &["sampling-dist", "01+2"],
        &["table2", "--max-order", "12", "--max-defining-length", "19"],
        &["run-sga", "--algorithm", "qiga"],
        &["run-experiment", "--config", "/nonexistent.toml"],
    ] {
        let o = qigalab(args);
        assert!(!o.status.success(), "{args:?} should fail");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains("error"), "{args:?}: {err}");
    }
    let o = qigalab(&["run-experiment", "--algorithm", "neither"]);
    assert!(!o.status.success());
}
