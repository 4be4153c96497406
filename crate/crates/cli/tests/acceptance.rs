//! CLI contract: exit codes, artifact determinism, and the redundancy
//! scenario, exercised through the real binary.

use std::path::Path;
use std::process::{Command, Output};

fn heatloop(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatloop"))
        .args(args)
        .current_dir(dir)
        .env_remove("HEATLOOP_OUT")
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .map(|f| if f == "nan" { f64::NAN } else { f.parse().unwrap() })
                .collect()
        })
        .collect();
    (header, rows)
}

#[test]
fn criterion_13_reproduce_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let out_a = tmp.path().join("a");
    let out_b = tmp.path().join("b");
    for out in [&out_a, &out_b] {
        let output = heatloop(
            &["reproduce", "--seed", "42", "--out", out.to_str().unwrap()],
            tmp.path(),
        );
        assert_eq!(code(&output), 0, "{}", String::from_utf8_lossy(&output.stderr));
    }
    let mut names: Vec<_> = std::fs::read_dir(&out_a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 8, "7 datasets plus the manifest");
    for name in names {
        let a = std::fs::read(out_a.join(&name)).unwrap();
        let b = std::fs::read(out_b.join(&name)).unwrap();
        assert_eq!(a, b, "bundle file {name:?} differs between invocations");
    }
    println!("criterion 13 PASS: two reproduce invocations emit identical bytes");
}

#[test]
fn exit_codes_contract() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();

    // 0: default config validates; resolved config echoed.
    let ok = heatloop(&["validate"], dir);
    assert_eq!(code(&ok), 0);
    assert!(String::from_utf8_lossy(&ok.stdout).contains("n_nodes = 216"));

    // 2: out-of-range value, diagnostics name the field.
    std::fs::write(dir.join("bad.toml"), "[flows_kg_s]\nrack = -1.0\n").unwrap();
    let bad = heatloop(&["validate", "--config", "bad.toml"], dir);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("flows_kg_s.rack"));

    // 2: unknown key.
    std::fs::write(dir.join("unknown.toml"), "[flows_kg_s]\nrock = 1.0\n").unwrap();
    assert_eq!(code(&heatloop(&["validate", "--config", "unknown.toml"], dir)), 2);

    // 2: corrupted document.
    std::fs::write(dir.join("corrupt.toml"), "[[[\n").unwrap();
    assert_eq!(code(&heatloop(&["run", "--config", "corrupt.toml"], dir)), 2);

    // 2: --set addressing a nonexistent key.
    assert_eq!(code(&heatloop(&["validate", "--set", "pid.bogus=1"], dir)), 2);

    // 0 and the equilibrium window on the default plant.
    let eq = heatloop(&["equilibrate"], dir);
    assert_eq!(code(&eq), 0);
    let stdout = String::from_utf8_lossy(&eq.stdout).to_string();
    let t_eq: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("T_eq = "))
        .and_then(|rest| rest.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((60.0..=70.0).contains(&t_eq), "T_eq {t_eq}");

    // 4: chiller at a fifth of its capacity runs away.
    std::fs::write(
        dir.join("small_chiller.toml"),
        "[chiller]\npc_max_curve = [[55.0, 1040.0], [57.0, 1200.0], [72.0, 2400.0], [80.0, 3040.0]]\n",
    )
    .unwrap();
    let runaway = heatloop(&["equilibrate", "--config", "small_chiller.toml"], dir);
    assert_eq!(code(&runaway), 4);
    assert!(String::from_utf8_lossy(&runaway.stdout).contains("runaway"));

    // 4: idle cluster never reaches the standby threshold.
    let idle = heatloop(&["equilibrate", "--set", "cluster.load_fraction=0.0"], dir);
    assert_eq!(code(&idle), 4);
    assert!(String::from_utf8_lossy(&idle.stdout).contains("subcritical"));

    // 5: refusing to overwrite artifacts without --force.
    let out = dir.join("sweepdir");
    std::fs::create_dir_all(&out).unwrap();
    std::fs::write(out.join("sweep.csv"), "old").unwrap();
    let conflict = heatloop(
        &["sweep", "--setpoints", "60,65", "--out", out.to_str().unwrap()],
        dir,
    );
    assert_eq!(code(&conflict), 5);
    assert_eq!(std::fs::read_to_string(out.join("sweep.csv")).unwrap(), "old");
    let forced = heatloop(
        &["sweep", "--setpoints", "60,65", "--out", out.to_str().unwrap(), "--force"],
        dir,
    );
    assert_eq!(code(&forced), 0);
    assert_ne!(std::fs::read_to_string(out.join("sweep.csv")).unwrap(), "old");

    println!("exit codes PASS: 0/2/4/5 honored");
}

#[test]
fn run_writes_artifacts_and_audits() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let out = dir.join("run");
    let output = heatloop(
        &[
            "run",
            "--duration",
            "3600",
            "--dt",
            "2",
            "--out",
            out.to_str().unwrap(),
        ],
        dir,
    );
    assert_eq!(code(&output), 0, "{}", String::from_utf8_lossy(&output.stderr));
    assert!(out.join("timeseries_true.csv").exists());
    assert!(out.join("timeseries_noisy.csv").exists());

    let (header, rows) = read_csv(&out.join("timeseries_true.csv"));
    assert_eq!(header[0], "time_s");
    assert_eq!(rows.len(), 1800);

    // Noisy and true series share the schema; temperatures differ, derived
    // power columns do not.
    let (noisy_header, noisy_rows) = read_csv(&out.join("timeseries_noisy.csv"));
    assert_eq!(header, noisy_header);
    let t_col = header.iter().position(|c| c == "t_rack_out_C").unwrap();
    let p_col = header.iter().position(|c| c == "p_electric_W").unwrap();
    assert!(rows[100][t_col] != noisy_rows[100][t_col]);
    assert_eq!(rows[100][p_col], noisy_rows[100][p_col]);
}

#[test]
fn scenario_chiller_failure_engages_central_support() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(
        dir.join("failure.toml"),
        "[[events]]\nat_s = 3600.0\naction = \"disable_chiller\"\n",
    )
    .unwrap();
    let out = dir.join("scenario");
    let output = heatloop(
        &[
            "run",
            "--scenario",
            "failure.toml",
            "--duration",
            "10800",
            "--dt",
            "2",
            "--out",
            out.to_str().unwrap(),
        ],
        dir,
    );
    assert_eq!(code(&output), 0, "{}", String::from_utf8_lossy(&output.stderr));

    let (header, rows) = read_csv(&out.join("timeseries_true.csv"));
    let col = |name: &str| header.iter().position(|c| c == name).unwrap();
    let (i_time, i_q, i_gate, i_pd) = (
        col("time_s"),
        col("q_central_W"),
        col("t_primary_hot_C"),
        col("p_d_W"),
    );
    // The support gate is honored throughout.
    for row in &rows {
        if row[i_q] > 0.0 {
            assert!(row[i_gate] > 20.0, "support active at {} C", row[i_gate]);
        }
    }
    // After the failure the chiller moves no heat and the central circuit
    // picks up the slack.
    let after: Vec<&Vec<f64>> = rows.iter().filter(|r| r[i_time] > 7200.0).collect();
    assert!(after.iter().all(|r| r[i_pd] == 0.0));
    assert!(after.last().unwrap()[i_q] > 10_000.0);
}
