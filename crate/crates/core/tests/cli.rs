use std::fs;
use std::path::{Path, PathBuf};

use double_rank::cli::{run, FitRecord, EXIT_DATA, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};
use double_rank::fit::{fit_loglog, FitRange};
use double_rank::io::read_curve;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("double-rank").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

const LOWER_MEAN_ANALYTIC: [&str; 6] = [
    "simulate",
    "--world",
    "150000,1.7,1.0",
    "--actor",
    "500,1.5,0.9",
    "--analytic",
];

#[test]
fn membership_fixture() {
    let dir = TempDir::new().unwrap();
    let mut body = String::from("id,citations,actor\n");
    for (i, c) in (0..10).rev().enumerate() {
        let label = if [9, 5, 0].contains(&c) { "inst" } else { "" };
        body.push_str(&format!("p{i},{c},{label}\n"));
    }
    let world = write(dir.path(), "world.csv", &body);
    let r = cli(&[
        "percentiles",
        "--world",
        s(&world),
        "--label",
        "inst",
        "--grid",
        "100,50,20",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out, "percentile,count\n100,3\n50,2\n20,1\n");
}

#[test]
fn two_list_tie_fixture() {
    let dir = TempDir::new().unwrap();
    let world = write(
        dir.path(),
        "world.csv",
        "id,citations\na,5\nb,5\nc,5\nd,5\ne,2\nf,2\ng,2\nh,2\ni,2\nj,2\n",
    );
    let actor = write(dir.path(), "actor.csv", "id,citations\na,5\nb,5\ne,2\n");
    let r = cli(&[
        "percentiles",
        "--world",
        s(&world),
        "--actor",
        s(&actor),
        "--grid",
        "100,30",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out, "percentile,count\n100,3\n30,1.5\n");

    let r = cli(&[
        "percentiles",
        "--world",
        s(&world),
        "--actor",
        s(&actor),
        "--policy",
        "secondary-key",
    ]);
    assert_eq!(r.code, EXIT_USAGE);
    let r = cli(&["percentiles", "--world", s(&world)]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn malformed_csv_reports_the_line() {
    let dir = TempDir::new().unwrap();
    let world = write(dir.path(), "world.csv", "id,citations\na,5\nb,lots\n");
    let r = cli(&["percentiles", "--world", s(&world), "--label", "x"]);
    assert_eq!(r.code, EXIT_DATA);
    assert!(r.err.contains("line 3"), "{}", r.err);

    let bad_header = write(dir.path(), "h.csv", "citations,id\n5,a\n");
    let r = cli(&["percentiles", "--world", s(&bad_header), "--label", "x"]);
    assert_eq!(r.code, EXIT_DATA);
}

#[test]
fn simulate_is_deterministic_and_writes_citations() {
    let dir = TempDir::new().unwrap();
    let cites = dir.path().join("c.csv");
    let args = [
        "simulate",
        "--world",
        "2000,1.7,1.0",
        "--actor",
        "200,1.7,1.0",
        "--seed",
        "9",
        "--discretize",
    ];
    let a = cli(&[&args[..], &["--citations-out", s(&cites)]].concat());
    let b = cli(&args);
    assert_eq!(a.code, EXIT_OK, "{}", a.err);
    assert_eq!(a.out, b.out);
    let text = fs::read_to_string(&cites).unwrap();
    assert!(text.starts_with("id,citations,actor\n"));
    assert_eq!(text.lines().count(), 2001);

    // Re-counting the written list gives the same curve.
    let r = cli(&["percentiles", "--world", s(&cites), "--label", "actor"]);
    assert_eq!(r.out, a.out);
}

#[test]
fn simulate_validation() {
    assert_eq!(
        cli(&["simulate", "--actor", "1,1,1", "--analytic"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        cli(&["simulate", "--world", "10,1.7,1", "--actor", "20,1.7,1"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        cli(&["simulate", "--world", "10.5,1.7,1", "--actor", "2,1.7,1"]).code,
        EXIT_USAGE
    );
}

#[test]
fn fit_of_the_analytic_curve() {
    let dir = TempDir::new().unwrap();
    let curve = dir.path().join("curve.csv");
    assert_eq!(
        cli(&[&LOWER_MEAN_ANALYTIC[..], &["--out", s(&curve)]].concat()).code,
        EXIT_OK
    );
    let r = cli(&[
        "fit",
        "--curve",
        s(&curve),
        "--range",
        "100:0.2",
        "--method",
        "nonlinear",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v = json(&r.out);
    assert_eq!(v["method"], "nonlinear_least_squares");
    assert!(rel(v["coefficient"].as_f64().unwrap(), 1.27) < 0.05);
    assert!((v["exponent"].as_f64().unwrap() - 1.295).abs() < 0.02);
    assert_eq!(v["range"]["low"], 0.2);
    assert_eq!(v["extrapolation_below"], 0.2);
    for key in ["r2_log", "r2_linear", "n_points", "excluded_zero_count"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn two_ranges_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let curve = dir.path().join("curve.csv");
    let r = cli(&[
        "simulate",
        "--world",
        "150000,1.7,1.0",
        "--actor",
        "500,2.2,1.0",
        "--analytic",
        "--out",
        s(&curve),
    ]);
    assert_eq!(r.code, EXIT_OK);
    let r2 = |range: &str| {
        let r = cli(&["fit", "--curve", s(&curve), "--range", range]);
        json(&r.out)["r2_log"].as_f64().unwrap()
    };
    assert!(r2("20:0.2") > r2("100:5"));
}

#[test]
fn fit_errors() {
    let dir = TempDir::new().unwrap();
    let one = write(dir.path(), "one.csv", "percentile,count\n10,3\n");
    assert_eq!(cli(&["fit", "--curve", s(&one)]).code, EXIT_DATA);
    let zeros = write(dir.path(), "z.csv", "percentile,count\n100,1\n10,0\n1,0\n");
    assert_eq!(
        cli(&["fit", "--curve", s(&zeros), "--method", "loglog"]).code,
        EXIT_DATA
    );
    assert_eq!(
        cli(&["fit", "--curve", s(&zeros), "--method", "nonlinear"]).code,
        EXIT_NUMERIC
    );
    let bad = write(dir.path(), "b.csv", "percentile,count\n10,3\n20,4\n");
    assert_eq!(cli(&["fit", "--curve", s(&bad)]).code, EXIT_DATA);
}

#[test]
fn curve_round_trip_refits_identically() {
    let dir = TempDir::new().unwrap();
    let curve_path = dir.path().join("curve.csv");
    let fit_path = dir.path().join("fit.json");
    cli(&[&LOWER_MEAN_ANALYTIC[..], &["--out", s(&curve_path)]].concat());
    cli(&["fit", "--curve", s(&curve_path), "--out", s(&fit_path)]);
    let text = fs::read_to_string(&curve_path).unwrap();
    let curve = read_curve(text.as_bytes()).unwrap();
    let refit = fit_loglog(&curve, FitRange::new(100.0, 0.2).unwrap()).unwrap();
    let record: FitRecord = serde_json::from_str(&fs::read_to_string(&fit_path).unwrap()).unwrap();
    assert!(rel(record.fit.coefficient, refit.coefficient) < 1e-12);
    assert!((record.fit.exponent - refit.exponent).abs() < 1e-12);

    let mut again = Vec::new();
    double_rank::io::write_curve(&curve, &mut again).unwrap();
    assert_eq!(String::from_utf8(again).unwrap(), text);
}

#[test]
fn extend_rows() {
    let dir = TempDir::new().unwrap();
    let rankings = write(
        dir.path(),
        "r.csv",
        "name,field,period,p,p_top50,p_top10,p_top1\n\
         US,all,2004-2011,,,858703,96146\n\
         Nowhere,,,,,10,0\n\
         Switzerland,all,2004-2011,,,49275,5859\n",
    );
    let r = cli(&["extend", "--rankings", s(&rankings)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.err.contains("Nowhere"), "{}", r.err);
    let mut rdr = csv::Reader::from_reader(r.out.as_bytes());
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers,
        [
            "name",
            "field",
            "period",
            "p",
            "p_top50",
            "p_top10",
            "p_top1",
            "alpha",
            "coefficient",
            "p_top0.1",
            "p_top0.01",
            "p_top0.001"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][0], "US");
    assert_eq!(&rows[0][2], "2004-2011");
    for (i, want) in [(9, 10_765.0), (10, 1205.33), (11, 134.96)] {
        assert!(rel(rows[0][i].parse().unwrap(), want) < 0.005);
    }
    assert!(rel(rows[1][11].parse().unwrap(), 9.85) < 0.01);

    let all_bad = write(
        dir.path(),
        "bad.csv",
        "name,field,period,p,p_top50,p_top10,p_top1\nX,,,,,1,5\n",
    );
    assert_eq!(cli(&["extend", "--rankings", s(&all_bad)]).code, EXIT_DATA);
    let r = cli(&[
        "extend",
        "--rankings",
        s(&rankings),
        "--method",
        "regression",
    ]);
    assert_eq!(r.code, EXIT_DATA);
}

#[test]
fn assess_examples() {
    let r = cli(&[
        "assess",
        "--actor",
        "376.42,0.8522",
        "--reference",
        "272.83,1.0689",
        "--at",
        "0.00101",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(rel(json(&r.out)["ratio"]["ratio"].as_f64().unwrap(), 6.16) < 0.01);

    let r = cli(&["assess", "--actor", "7.84,0.99", "--world-n", "17501"]);
    let v = json(&r.out);
    assert!(
        rel(
            v["rank1"]["actor_likelihood"]["value"].as_f64().unwrap(),
            0.0472
        ) < 0.01
    );

    let r = cli(&[
        "assess",
        "--actor",
        "376.42,0.8522",
        "--annual-count",
        "1.1",
    ]);
    assert!((json(&r.out)["nobel_percentile"].as_f64().unwrap() - 0.001_061).abs() < 1e-5);

    assert_eq!(
        cli(&["assess", "--actor", "1,1", "--world-n", "0"]).code,
        EXIT_USAGE
    );
}

#[test]
fn assess_from_fit_files() {
    let dir = TempDir::new().unwrap();
    let curve = dir.path().join("curve.csv");
    let fit = dir.path().join("fit.json");
    cli(&[&LOWER_MEAN_ANALYTIC[..], &["--out", s(&curve)]].concat());
    cli(&[
        "fit",
        "--curve",
        s(&curve),
        "--range",
        "20:0.2",
        "--out",
        s(&fit),
    ]);
    let r = cli(&[
        "assess",
        "--actor-fit",
        s(&fit),
        "--reference",
        "1,1",
        "--at",
        "0.01",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v = json(&r.out);
    assert_eq!(v["actor_estimate"]["extrapolated"], true);

    let junk = write(dir.path(), "junk.json", "{\"coefficient\": 1}");
    assert_eq!(
        cli(&["assess", "--actor-fit", s(&junk), "--at", "1"]).code,
        EXIT_DATA
    );
}

#[test]
fn plotdata_columns_and_residuals() {
    let dir = TempDir::new().unwrap();
    let exact = write(
        dir.path(),
        "e.csv",
        "percentile,count\n100,100\n10,10\n1,1\n0.5,0.5\n",
    );
    let r = cli(&["plotdata", "--curve", s(&exact)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let mut rdr = csv::Reader::from_reader(r.out.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "x",
            "count",
            "fitted",
            "log10_x",
            "log10_count",
            "log10_fitted"
        ]
    );
    for row in rdr.records() {
        let row = row.unwrap();
        let (c, f): (f64, f64) = (row[1].parse().unwrap(), row[2].parse().unwrap());
        assert!(rel(f, c) < 1e-12);
    }

    let curve = dir.path().join("curve.csv");
    let fit = dir.path().join("fit.json");
    cli(&[&LOWER_MEAN_ANALYTIC[..], &["--out", s(&curve)]].concat());
    cli(&[
        "fit",
        "--curve",
        s(&curve),
        "--method",
        "nonlinear",
        "--out",
        s(&fit),
    ]);
    let r = cli(&["plotdata", "--curve", s(&curve), "--fit", s(&fit)]);
    let mut rdr = csv::Reader::from_reader(r.out.as_bytes());
    for row in rdr.records() {
        let row = row.unwrap();
        let x: f64 = row[0].parse().unwrap();
        if x <= 10.0 {
            let d: f64 = row[4].parse::<f64>().unwrap() - row[5].parse::<f64>().unwrap();
            assert!(d.abs() <= 0.05, "x={x} d={d}");
        }
    }

    let empty = write(dir.path(), "empty.csv", "percentile,count\n");
    assert_eq!(cli(&["plotdata", "--curve", s(&empty)]).code, EXIT_DATA);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_double-rank");
    let out = std::process::Command::new(bin)
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let out = std::process::Command::new(bin)
        .args(["fit"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let out = std::process::Command::new(bin)
        .args([
            "simulate",
            "--actor",
            "100,1.7,1.0",
            "--world",
            "150000,1.7,1.0",
            "--analytic",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = String::from_utf8(out.stdout).unwrap();
    let curve = read_curve(text.as_bytes()).unwrap();
    assert!(curve
        .points()
        .iter()
        .all(|p| rel(p.count, p.percentile) < 1e-12));
}
