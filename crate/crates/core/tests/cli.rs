use std::process::{Command, Output};

fn bkdf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bkdf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn bandwidth_for_beta_2_2() {
    let out = bkdf(&[
        "bandwidth",
        "--w",
        "0",
        "--b",
        "2",
        "--kernel",
        "epanechnikov",
        "--n",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("kernel,n,h0"));
    let h0: f64 = lines
        .next()
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert!((h0 - 0.2204556).abs() < 1e-6, "{h0}");
}

#[test]
fn uniform_has_no_optimal_bandwidth() {
    let out = bkdf(&["bandwidth", "--uniform"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no optimal bandwidth"));
}

#[test]
fn k3_satisfies_weak_condition() {
    let out = bkdf(&[
        "check-kernels",
        "--family",
        "k3",
        "--kernel",
        "epanechnikov",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 100);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(bkdf(&["bandwidth", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        bkdf(&["bandwidth", "--w", "0.5", "--b", "3", "--uniform"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bkdf(&["bandwidth", "--w", "0.5", "--b", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bkdf(&["mse-curve", "--w", "0", "--b", "2", "--h", "0.7"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn estimate_reads_data_and_is_proper() {
    let dir = std::env::temp_dir().join(format!("bkdf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let data = dir.join("data.txt");
    std::fs::write(&data, "0.1\n0.35\n\n0.5\n0.52\n0.9\n").unwrap();
    let out = bkdf(&[
        "estimate",
        "--data",
        data.to_str().unwrap(),
        "--a",
        "0",
        "--b",
        "1",
        "--h",
        "0.25",
        "--family",
        "k3",
        "--grid",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 11);
    assert_eq!(values[0], 0.0);
    assert_eq!(values[10], 1.0);
    assert!(values.windows(2).all(|w| w[1] >= w[0]));

    std::fs::write(&data, "0.1\nabc\n").unwrap();
    let bad = bkdf(&[
        "estimate",
        "--data",
        data.to_str().unwrap(),
        "--a",
        "0",
        "--b",
        "1",
        "--h",
        "0.25",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn simulate_is_deterministic_and_writes_files() {
    let dir = std::env::temp_dir().join(format!("bkdf-sim-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.join(name);
        let summary = dir.join(format!("{name}.summary"));
        let status = bkdf(&[
            "simulate",
            "--w",
            "0.75",
            "--b",
            "5",
            "--reps",
            "20",
            "--seed",
            "9",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
            "--summary",
            summary.to_str().unwrap(),
        ]);
        assert_eq!(status.status.code(), Some(0));
        (
            std::fs::read(out).unwrap(),
            std::fs::read_to_string(summary).unwrap(),
        )
    };
    let (first, summary) = run("a.csv", "1");
    let (second, _) = run("b.csv", "3");
    assert_eq!(first, second);
    // 20 replicates × 4 estimators × 3 regions, plus the header.
    assert_eq!(first.iter().filter(|&&c| c == b'\n').count(), 241);
    assert!(summary.starts_with("family,region,count,min,q1,median,q3,max,mean"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn coeffs_and_mise_tables() {
    let coeffs = bkdf(&["coeffs", "--grid", "9"]);
    assert_eq!(coeffs.status.code(), Some(0));
    assert_eq!(stdout(&coeffs).lines().count(), 28);

    let mise = bkdf(&[
        "mise",
        "--d1-at-0",
        "0",
        "--d2-at-0",
        "6",
        "--families",
        "classical,k3",
        "--h",
        "0.1,0.05",
    ]);
    assert_eq!(mise.status.code(), Some(0));
    assert_eq!(stdout(&mise).lines().count(), 5);
}
