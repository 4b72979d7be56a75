use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fscan(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fscan"));
    cmd.current_dir(dir).args(args).env_remove("FSCAN_WORKERS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().expect("binary runs");
    Run {
        code: status.code().expect("exited normally"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "series.csv", "3,1,7,0,4,1,6,3\n");
    write(d, "sum.json", r#"{"instance": "sum"}"#);
    write(d, "ones.csv", "1,1,1\n1,1,1\n1,1,1\n");
    write(d, "abelian.json", r#"{"instance": "abelian2d"}"#);
    write(d, "glimage.json", r#"{"instance": "glimage"}"#);
    let mut image = String::from("5 4 3\n");
    for k in 0..20 {
        let v = |c: u32| f64::from((k * 7 + c * 3) % 11) / 10.0;
        image.push_str(&format!("{},{},{}\n", v(0), v(1), v(2)));
    }
    write(d, "image.csv", &image);
    dir
}

#[test]
fn golden_sum_prefixes() {
    let dir = workspace();
    let r = fscan(
        dir.path(),
        &["scan1d", "--input", "series.csv", "--config", "sum.json"],
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "0,3,4,11,11,15,16,22,25\n");
}

#[test]
fn empty_interval_is_identity() {
    let dir = workspace();
    let r = fscan(
        dir.path(),
        &[
            "scan1d",
            "--input",
            "series.csv",
            "--config",
            "sum.json",
            "--interval",
            "2",
            "2",
        ],
        &[],
    );
    assert_eq!((r.code, r.stdout.as_str()), (0, "0\n"));

    write(
        dir.path(),
        "mat.json",
        r#"{"instance": "mat", "dim": 3, "seed": 1}"#,
    );
    let r = fscan(
        dir.path(),
        &[
            "scan1d",
            "--input",
            "series.csv",
            "--config",
            "mat.json",
            "--interval",
            "5",
            "5",
        ],
        &[],
    );
    assert_eq!(
        (r.code, r.stdout.as_str()),
        (0, "lift 5 5\n1,0,0\n0,1,0\n0,0,1\n")
    );
}

#[test]
fn interval_aggregate_matches_prefix_difference() {
    let dir = workspace();
    let r = fscan(
        dir.path(),
        &[
            "scan1d",
            "--input",
            "series.csv",
            "--config",
            "sum.json",
            "--interval",
            "2",
            "6",
        ],
        &[],
    );
    // 7 + 0 + 4 + 1
    assert_eq!(r.stdout, "12\n");
}

#[test]
fn abelian_rectangle_of_ones() {
    let dir = workspace();
    let r = fscan(
        dir.path(),
        &[
            "scan2d",
            "--input",
            "ones.csv",
            "--config",
            "abelian.json",
            "--rect",
            "0",
            "3",
            "0",
            "3",
        ],
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.trim().parse::<f64>().unwrap(), 9.0);

    let r = fscan(
        dir.path(),
        &["scan2d", "--input", "ones.csv", "--config", "abelian.json"],
        &[],
    );
    assert_eq!(r.stdout, "0,0,0,0\n0,1,2,3\n0,2,4,6\n0,3,6,9\n");
}

#[test]
fn series_accepts_newlines_and_comments() {
    let dir = workspace();
    write(
        dir.path(),
        "lines.csv",
        "# daily values\n3\n1\n7\n\n0\n4,1\n6 3\n",
    );
    let r = fscan(
        dir.path(),
        &["scan1d", "--input", "lines.csv", "--config", "sum.json"],
        &[],
    );
    assert_eq!(r.stdout, "0,3,4,11,11,15,16,22,25\n");
}

#[test]
fn tensor_and_matrix_blocks() {
    let dir = workspace();
    write(dir.path(), "iss.json", r#"{"instance": "iss", "level": 2}"#);
    let r = fscan(
        dir.path(),
        &[
            "scan1d",
            "--input",
            "series.csv",
            "--config",
            "iss.json",
            "--interval",
            "0",
            "3",
        ],
        &[],
    );
    // x = 3, 1, 7: [1] = 11, [1 1] = 3*1 + 3*7 + 1*7, [2] = 9 + 1 + 49
    assert_eq!(r.stdout, "lift 0 3\n[],1\n[1],11\n[1 1],31\n[2],59\n");

    write(dir.path(), "rot.txt", "2 2\n0 1\n-1 0\n");
    write(dir.path(), "path.csv", "0\n0.25\n1\n");
    write(
        dir.path(),
        "ssm.json",
        r#"{"instance": "ssm", "generators": ["rot.txt"]}"#,
    );
    let r = fscan(
        dir.path(),
        &[
            "scan1d",
            "--input",
            "path.csv",
            "--config",
            "ssm.json",
            "--interval",
            "0",
            "2",
        ],
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "lift 0 2");
    let m: Vec<f64> = lines[1..]
        .iter()
        .flat_map(|l| l.split(','))
        .map(|t| t.parse().unwrap())
        .collect();
    let want = [1f64.cos(), 1f64.sin(), -(1f64.sin()), 1f64.cos()];
    for (a, b) in m.iter().zip(want) {
        assert!((a - b).abs() < 1e-12, "{m:?}");
    }
}

#[test]
fn output_independent_of_workers() {
    let dir = workspace();
    let d = dir.path();
    let series: Vec<String> = (0..300)
        .map(|k| format!("{}", ((k * 37) % 101) as f64 / 97.0 - 0.5))
        .collect();
    write(d, "long.csv", &series.join("\n"));
    write(d, "product.json", r#"{"instance": "product"}"#);
    write(d, "mat.json", r#"{"instance": "mat", "dim": 4, "seed": 9}"#);
    write(d, "iss3.json", r#"{"instance": "iss", "level": 3}"#);
    for cfg in ["product.json", "mat.json", "iss3.json"] {
        let base = fscan(
            d,
            &[
                "scan1d",
                "--input",
                "long.csv",
                "--config",
                cfg,
                "--workers",
                "1",
            ],
            &[],
        );
        assert_eq!(base.code, 0, "{}", base.stderr);
        for w in ["2", "3", "8"] {
            let r = fscan(
                d,
                &[
                    "scan1d",
                    "--input",
                    "long.csv",
                    "--config",
                    cfg,
                    "--workers",
                    w,
                ],
                &[],
            );
            assert!(r.stdout == base.stdout, "{cfg} differs at {w} workers");
        }
        let env = fscan(
            d,
            &["scan1d", "--input", "long.csv", "--config", cfg],
            &[("FSCAN_WORKERS", "5")],
        );
        assert!(
            env.stdout == base.stdout,
            "{cfg} differs with FSCAN_WORKERS"
        );
        let again = fscan(
            d,
            &[
                "scan1d",
                "--input",
                "long.csv",
                "--config",
                cfg,
                "--workers",
                "1",
            ],
            &[],
        );
        assert!(again.stdout == base.stdout, "{cfg} differs across runs");
    }
    let base = fscan(
        d,
        &[
            "scan2d",
            "--input",
            "image.csv",
            "--config",
            "glimage.json",
            "--workers",
            "1",
        ],
        &[],
    );
    assert_eq!(base.code, 0, "{}", base.stderr);
    for w in ["2", "4"] {
        let r = fscan(
            d,
            &[
                "scan2d",
                "--input",
                "image.csv",
                "--config",
                "glimage.json",
                "--workers",
                w,
            ],
            &[],
        );
        assert!(r.stdout == base.stdout, "image scan differs at {w} workers");
    }
}

#[test]
fn image_rectangle_and_prefix_grid() {
    let dir = workspace();
    let d = dir.path();
    let rect = fscan(
        d,
        &[
            "scan2d",
            "--input",
            "image.csv",
            "--config",
            "glimage.json",
            "--rect",
            "0",
            "4",
            "0",
            "3",
        ],
        &[],
    );
    assert_eq!(rect.code, 0, "{}", rect.stderr);
    assert!(rect.stdout.starts_with("lift 0 4 0 3\n"));
    // (n + p) x (n + q) face block
    assert_eq!(rect.stdout.lines().count(), 4);
    assert!(rect
        .stdout
        .lines()
        .skip(1)
        .all(|l| l.split(',').count() == 5));

    let grid = fscan(
        d,
        &["scan2d", "--input", "image.csv", "--config", "glimage.json"],
        &[],
    );
    let full: Vec<&str> = grid.stdout.lines().collect();
    let at = full
        .iter()
        .position(|l| *l == "prefix 4 3")
        .expect("corner prefix");
    // Same aggregate by a different composition order, so equal up to round-off.
    let numbers = |lines: Vec<&str>| -> Vec<f64> {
        lines
            .iter()
            .flat_map(|l| l.split(','))
            .map(|t| t.parse().unwrap())
            .collect()
    };
    let scanned = numbers(full[at + 1..at + 4].to_vec());
    let lifted = numbers(rect.stdout.lines().skip(1).collect());
    assert_eq!(scanned.len(), 15);
    for (a, b) in scanned.iter().zip(&lifted) {
        assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn check_reports_every_axiom() {
    let dir = workspace();
    for cfg in ["glimage.json", "abelian.json"] {
        let r = fscan(
            dir.path(),
            &["check", "--config", cfg, "--samples", "40", "--seed", "3"],
            &[],
        );
        assert_eq!(r.code, 0, "{}", r.stderr);
        let names: Vec<&str> = r
            .stdout
            .lines()
            .map(|l| l.split(' ').next().unwrap())
            .collect();
        assert_eq!(
            names,
            [
                "TAU_HOM",
                "ACT_HOM",
                "ACT_ENDO",
                "EQUI",
                "PEIF",
                "INTERCHANGE",
                "BOUNDARY"
            ]
        );
        for l in r.stdout.lines() {
            let fields: Vec<&str> = l.split(' ').collect();
            assert_eq!(fields.len(), 3, "{l}");
            assert!(fields[1].parse::<f64>().unwrap() < 1e-8, "{l}");
            assert_eq!(fields[2], "0", "{l}");
        }
    }
    write(
        dir.path(),
        "gl322.json",
        r#"{"instance": "glimage", "gl_dims": [3, 2, 2]}"#,
    );
    let r = fscan(
        dir.path(),
        &["check", "--config", "gl322.json", "--samples", "20"],
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn bench_prints_csv() {
    let dir = workspace();
    let r = fscan(
        dir.path(),
        &[
            "bench",
            "--sizes",
            "64,128",
            "--workers",
            "1,2",
            "--dim",
            "3",
        ],
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(
        lines[0],
        "cells,dim,workers,seconds,compositions,compositions_per_second,speedup"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("64,3,1,"));
    assert!(lines[4].starts_with("128,3,2,"));
}

#[test]
fn parse_errors_exit_1() {
    let dir = workspace();
    let d = dir.path();
    write(d, "bad.csv", "1,2\n3,x\n");
    let r = fscan(
        d,
        &["scan1d", "--input", "bad.csv", "--config", "sum.json"],
        &[],
    );
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);

    write(d, "broken.json", r#"{"instance": "sum""#);
    assert_eq!(
        fscan(
            d,
            &["scan1d", "--input", "series.csv", "--config", "broken.json"],
            &[]
        )
        .code,
        1
    );
    assert_eq!(
        fscan(
            d,
            &["scan1d", "--input", "missing.csv", "--config", "sum.json"],
            &[]
        )
        .code,
        1
    );
    assert_eq!(fscan(d, &["frobnicate"], &[]).code, 1);
    assert_eq!(fscan(d, &["scan1d", "--input", "series.csv"], &[]).code, 1);
    let env = fscan(
        d,
        &["scan1d", "--input", "series.csv", "--config", "sum.json"],
        &[("FSCAN_WORKERS", "many")],
    );
    assert_eq!(env.code, 1);

    write(d, "badmat.txt", "2 2\n1 2\n3\n");
    write(
        d,
        "ssm.json",
        r#"{"instance": "ssm", "generators": ["badmat.txt"]}"#,
    );
    let r = fscan(
        d,
        &["scan1d", "--input", "series.csv", "--config", "ssm.json"],
        &[],
    );
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("badmat.txt"), "{}", r.stderr);

    write(d, "short.csv", "2 2 3\n0,0,0\n");
    assert_eq!(
        fscan(
            d,
            &["scan2d", "--input", "short.csv", "--config", "glimage.json"],
            &[]
        )
        .code,
        1
    );
}

#[test]
fn validation_errors_exit_2() {
    let dir = workspace();
    let d = dir.path();
    let r = fscan(
        d,
        &[
            "scan1d",
            "--input",
            "series.csv",
            "--config",
            "sum.json",
            "--interval",
            "3",
            "12",
        ],
        &[],
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("[3, 12]"), "{}", r.stderr);
    let r = fscan(
        d,
        &[
            "scan1d",
            "--input",
            "series.csv",
            "--config",
            "sum.json",
            "--interval",
            "5",
            "2",
        ],
        &[],
    );
    assert_eq!(r.code, 2);

    write(d, "mat.json", r#"{"instance": "mat", "dims": [1, 2, 3]}"#);
    assert_eq!(
        fscan(
            d,
            &["scan1d", "--input", "series.csv", "--config", "mat.json"],
            &[]
        )
        .code,
        2
    );
    write(d, "iss.json", r#"{"instance": "iss"}"#);
    assert_eq!(
        fscan(
            d,
            &["scan1d", "--input", "series.csv", "--config", "iss.json"],
            &[]
        )
        .code,
        2
    );

    let r = fscan(
        d,
        &[
            "scan2d",
            "--input",
            "ones.csv",
            "--config",
            "abelian.json",
            "--rect",
            "0",
            "4",
            "0",
            "1",
        ],
        &[],
    );
    assert_eq!(r.code, 2);
    assert_eq!(
        fscan(
            d,
            &["scan2d", "--input", "series.csv", "--config", "sum.json"],
            &[]
        )
        .code,
        2
    );
    assert_eq!(fscan(d, &["check", "--config", "sum.json"], &[]).code, 2);
    assert_eq!(
        fscan(
            d,
            &[
                "scan1d",
                "--input",
                "series.csv",
                "--config",
                "sum.json",
                "--workers",
                "0"
            ],
            &[]
        )
        .code,
        2
    );

    // generators of different sizes
    write(d, "a2.txt", "2 2\n0 1\n1 0\n");
    write(d, "a3.txt", "3 3\n1 0 0\n0 1 0\n0 0 1\n");
    write(
        d,
        "mixed.json",
        r#"{"instance": "ssm", "generators": ["a2.txt", "a3.txt"]}"#,
    );
    write(d, "pts.csv", "0,0\n1,1\n");
    assert_eq!(
        fscan(
            d,
            &["scan1d", "--input", "pts.csv", "--config", "mixed.json"],
            &[]
        )
        .code,
        2
    );

    // point with the wrong channel count names the point
    write(
        d,
        "one.json",
        r#"{"instance": "ssm", "generators": ["a2.txt"]}"#,
    );
    let r = fscan(
        d,
        &["scan1d", "--input", "pts.csv", "--config", "one.json"],
        &[],
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("point 0"), "{}", r.stderr);
}

#[test]
fn numeric_failures_exit_3() {
    let dir = workspace();
    let d = dir.path();
    write(d, "huge.txt", "1 1\n1e300\n");
    write(
        d,
        "huge.json",
        r#"{"instance": "ssm", "generators": ["huge.txt"]}"#,
    );
    write(d, "jump.csv", "0\n10\n");
    let r = fscan(
        d,
        &["scan1d", "--input", "jump.csv", "--config", "huge.json"],
        &[],
    );
    assert_eq!(r.code, 3, "{}", r.stderr);

    write(
        d,
        "strict.json",
        r#"{"instance": "glimage", "threshold": 0}"#,
    );
    let r = fscan(
        d,
        &["check", "--config", "strict.json", "--samples", "10"],
        &[],
    );
    assert_eq!(r.code, 3);
    assert_eq!(r.stdout.lines().count(), 7, "report is still printed");
}

#[test]
fn help_exits_0() {
    let dir = workspace();
    let r = fscan(dir.path(), &["--help"], &[]);
    assert_eq!(r.code, 0);
    for sub in ["scan1d", "scan2d", "check", "bench"] {
        assert!(r.stdout.contains(sub), "{}", r.stdout);
    }
}
