use std::process::{Command, Output};

use sg_core::address::LevelGraph;
use sg_core::harmonic::{eigen_residual, LevelValues};

fn sg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sg")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = sg(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(text: &str, name: &str) -> Vec<String> {
    let (header, rows) = table(text);
    let k = header.iter().position(|h| h == name).unwrap();
    rows.into_iter().map(|r| r[k].clone()).collect()
}

#[test]
fn level_one_spectrum() {
    let out = stdout(&["spectrum", "--level", "1"]);
    let lambdas = column(&out, "lambda_m");
    let mult = column(&out, "multiplicity");
    let mut all: Vec<f64> = Vec::new();
    for (l, k) in lambdas.iter().zip(&mult) {
        all.extend(std::iter::repeat(l.parse::<f64>().unwrap()).take(k.parse().unwrap()));
    }
    all.sort_by(f64::total_cmp);
    assert_eq!(all, vec![2.0, 5.0, 5.0]);
}

#[test]
fn level_zero_is_empty() {
    let out = stdout(&["spectrum", "--level", "0"]);
    assert_eq!(table(&out).1.len(), 0);
}

#[test]
fn verified_spectrum_has_small_residuals() {
    let out = stdout(&["spectrum", "--level", "2", "--verify"]);
    for r in column(&out, "residual") {
        assert!(r.parse::<f64>().unwrap() < 1e-9);
    }
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["spectrum", "--level", "3", "--series", "six", "--format", "json"])).unwrap();
    let rows = json["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["series"] == "six"));
    assert_eq!(rows.len(), 2);
}

#[test]
fn verify_beyond_dense_cap_is_usage() {
    assert_eq!(sg(&["spectrum", "--level", "7", "--verify"]).status.code(), Some(2));
}

#[test]
fn constant_harmonic_seed() {
    let out = stdout(&["eval", "--seed", "free:0:1,1,1", "--level", "3"]);
    assert!(column(&out, "value").iter().all(|v| v == "1.0"));
}

#[test]
fn six_piece_level_one_values() {
    let out = stdout(&["eval", "--seed", "sixpiece:1:1", "--level", "1"]);
    let (_, rows) = table(&out);
    let got: Vec<(&str, &str)> = rows.iter().map(|r| (r[0].as_str(), r[4].as_str())).collect();
    assert_eq!(
        got,
        [(":0", "0.0"), (":1", "0.0"), (":2", "2.0"), ("0:1", "1.0"), ("0:2", "-1.0"), ("1:2", "-1.0")]
    );
}

/// Values written by `eval` and parsed back satisfy the eigen-equation.
#[test]
fn eval_round_trip() {
    for (seed, m) in [("five:2:3:-+", 5usize), ("six:3:2", 4), ("free:13.5:1,-0.5,2", 5), ("two:1:1:+-+", 6)] {
        let out = stdout(&["eval", "--seed", seed, "--level", &m.to_string()]);
        let values: Vec<f64> = column(&out, "value").iter().map(|v| v.parse().unwrap()).collect();
        let graph = LevelGraph::shared(m).unwrap();
        assert_eq!(column(&out, "vertex"), graph.vertices().iter().map(|v| v.to_string()).collect::<Vec<_>>());
        let json: serde_json::Value = serde_json::from_str(&stdout(&[
            "eval", "--seed", seed, "--level", &m.to_string(), "--format", "json",
        ]))
        .unwrap();
        let lambda_m = json["lambda_m"].as_f64().unwrap();
        let scale = values.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        let r = eigen_residual(&graph, &LevelValues::new(m, values), lambda_m).unwrap();
        assert!(r < 1e-9 * scale, "{seed}: {r:e}");
    }
}

#[test]
fn obj_is_a_height_field() {
    let out = stdout(&["eval", "--seed", "five:1:1", "--level", "2", "--format", "obj"]);
    let v: Vec<&str> = out.lines().filter(|l| l.starts_with("v ")).collect();
    let f: Vec<&str> = out.lines().filter(|l| l.starts_with("f ")).collect();
    assert_eq!((v.len(), f.len()), (15, 9));
    for face in f {
        for k in face.split_whitespace().skip(1) {
            let k: usize = k.parse().unwrap();
            assert!((1..=15).contains(&k));
        }
    }
}

#[test]
fn six_piece_tangent() {
    let out = stdout(&["tangent", "--seed", "sixpiece:1:1", "--word", ":0", "--format", "json", "--verify"]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    let lambda = json["lambda"].as_f64().unwrap();
    let t: Vec<f64> = json["tangents"][0]["triple"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let want = [0.0, lambda / 9.0, -lambda / 9.0];
    for k in 0..3 {
        assert!((t[k] - want[k]).abs() < 1e-7);
    }
    assert!(json["tangents"][0]["deviation"].as_f64().unwrap() < 1e-7);
}

#[test]
fn harmonic_tangent_is_the_boundary() {
    let out = stdout(&["tangent", "--seed", "free:0:0.5,-1,3", "--word", "21:0", "--word", "0:2"]);
    for row in table(&out).1 {
        let t: Vec<f64> = row[1..4].iter().map(|x| x.parse().unwrap()).collect();
        for (x, want) in t.iter().zip([0.5, -1.0, 3.0]) {
            assert!((x - want).abs() < 1e-13, "{row:?}");
        }
    }
}

#[test]
fn tangent_methods_agree() {
    let args = |m: &str| {
        stdout(&["tangent", "--seed", "five:2:2:-", "--word", "12:0", "--word", "0:1", "--method", m])
    };
    let (a, b) = (table(&args("closed")).1, table(&args("pieces")).1);
    for (ra, rb) in a.iter().zip(&b) {
        for k in 1..4 {
            let (x, y): (f64, f64) = (ra[k].parse().unwrap(), rb[k].parse().unwrap());
            assert!((x - y).abs() < 1e-9 * x.abs().max(1.0));
        }
    }
}

#[test]
fn normal_derivative_verifies() {
    let out = stdout(&["normal", "--seed", "free:8:1,0,0", "--verify"]);
    assert_eq!(column(&out, "deviation").len(), 3);
}

#[test]
fn special_tables() {
    let out = stdout(&["special", "--fn", "psi", "--range", "-10:10:201"]);
    let (_, rows) = table(&out);
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[100][0..2], ["0.0", "0.0"]);
    for r in &rows {
        assert!(r[3].parse::<f64>().unwrap() < 1e-10, "{r:?}");
    }
    let out = stdout(&["special", "--fn", "upsilon", "--range", "0:1:2"]);
    assert_eq!(table(&out).1[0][1], "0.5");
}

#[test]
fn special_flags_bad_points_per_row() {
    let out = stdout(&["special", "--fn", "psi", "--range", "0:1000:3"]);
    let status = column(&out, "status");
    assert_eq!(status[0], "ok");
    assert!(status[2].starts_with("domain error"), "{status:?}");
}

#[test]
fn exit_codes() {
    assert_eq!(sg(&["spectrum"]).status.code(), Some(2));
    assert_eq!(sg(&["eval", "--seed", "five:1:3", "--level", "1"]).status.code(), Some(2));
    assert_eq!(sg(&["spectrum", "--level", "1", "--format", "obj"]).status.code(), Some(2));
    assert_eq!(sg(&["eval", "--seed", "five:2:1", "--level", "1"]).status.code(), Some(3));
    assert_eq!(sg(&["tangent", "--seed", "free:3:1,2,3", "--word", ":0", "--method", "pieces"]).status.code(), Some(3));
    // a three-level oracle is nowhere near the limit
    let out = sg(&["tangent", "--seed", "free:20:1,0,0", "--word", "1:2", "--verify", "--oracle-level", "3"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!out.stdout.is_empty());
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("sg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mesh.csv");
    let args = ["eval", "--seed", "two:1:1:-", "--level", "3"];
    let direct = stdout(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert_eq!(stdout(&with_file), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
    std::fs::remove_dir_all(&dir).unwrap();
}
