use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lindley_core::distribution::{cdf, sample_from};
use lindley_core::estimators::g_of_t;
use lindley_core::rng::substream;
use lindley_core::{plugin_pdf, LindleyParam};
use lindley_est::commands::{CurveRecord, FitRecord, RiskRecord, SimulationMetadata, SimulationOutput};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lindley-est"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut v: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    v.sort();
    v
}

#[test]
fn fit_mle_on_small_file() {
    let d = tempfile::tempdir().unwrap();
    let f = write(d.path(), "x.txt", "# three points\n1\n2\n3\n");
    let out = stdout(&run_in(d.path(), &["fit", "--input", &f, "--method", "MLE", "--format", "json"]));
    let recs: Vec<FitRecord> = serde_json::from_str(&out).unwrap();
    assert_eq!(recs.len(), 1);
    assert!((recs[0].theta_hat.unwrap() - 0.7807764).abs() < 1e-7);
}

#[test]
fn fit_all_lists_seven_methods() {
    let d = tempfile::tempdir().unwrap();
    let f = write(d.path(), "x.txt", "0.4\n1.3\n2.2\n0.7\n3.1\n");
    let rows = csv_rows(&stdout(&run_in(d.path(), &["fit", "-i", &f])));
    assert_eq!(rows.len(), 7);
    let umvue = rows.iter().find(|r| r[0] == "UMVUE").unwrap();
    assert_eq!(umvue[6], "functional only, use curve");
    assert!(umvue[2].is_empty());
    for r in rows.iter().filter(|r| r[0] != "UMVUE") {
        assert!(r[2].parse::<f64>().unwrap() > 0.0);
    }
}

#[test]
fn bad_data_exits_with_validation_code() {
    let d = tempfile::tempdir().unwrap();
    let f = write(d.path(), "x.txt", "1.0\n# ok\n0\n2\n");
    let o = run_in(d.path(), &["fit", "-i", &f]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":3:"), "{err}");
    let o = run_in(d.path(), &["fit", "-i", "missing.txt"]);
    assert_eq!(o.status.code(), Some(2));
    let f = write(d.path(), "one.txt", "1.5\n");
    let o = run_in(d.path(), &["fit", "-i", &f, "--method", "LSE"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run_in(d.path(), &["curve", "-i", &f, "--method", "UMVUE", "--grid", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sample_is_deterministic_and_lindley() {
    let d = tempfile::tempdir().unwrap();
    let a = stdout(&run_in(d.path(), &["sample", "--n", "5", "--theta", "1.0", "--seed", "42"]));
    let b = stdout(&run_in(d.path(), &["sample", "--n", "5", "--theta", "1.0", "--seed", "42"]));
    assert_eq!(a, b);
    assert_eq!(a.lines().filter(|l| !l.starts_with('#')).count(), 5);

    let text = stdout(&run_in(d.path(), &["sample", "--n", "10000", "--theta", "1.0", "--seed", "7"]));
    let mut v: Vec<f64> = text.lines().filter(|l| !l.starts_with('#')).map(|l| l.parse().unwrap()).collect();
    v.sort_by(f64::total_cmp);
    let p = LindleyParam::new(1.0).unwrap();
    let n = v.len() as f64;
    let ks = v
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x, p).unwrap();
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 1.628 / n.sqrt(), "{ks}");

    let o = run_in(d.path(), &["sample", "--n", "0", "--theta", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run_in(d.path(), &["sample", "--n", "3", "--theta", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sampled_file_feeds_back_into_fit() {
    let d = tempfile::tempdir().unwrap();
    let o = run_in(d.path(), &["sample", "--n", "200", "--theta", "2", "--seed", "3", "-o", "s.txt"]);
    assert!(o.status.success());
    let out = stdout(&run_in(d.path(), &["fit", "-i", "s.txt", "--method", "mle", "--format", "json"]));
    let recs: Vec<FitRecord> = serde_json::from_str(&out).unwrap();
    assert!((recs[0].theta_hat.unwrap() - 2.0).abs() < 0.4);
}

const MINIMAL: &str = r#"{"theta0": 1.0, "sample_sizes": [15], "replications": 300, "methods": ["MLE"], "master_seed": 11}"#;

#[test]
fn simulate_minimal_config() {
    let d = tempfile::tempdir().unwrap();
    let c = write(d.path(), "cfg.json", MINIMAL);
    let o = run_in(d.path(), &["simulate", "--config", &c, "--output", "r.csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(d.path().join("r.csv")).unwrap();
    assert!(text.starts_with("method,n,x,target,bias,mse,se\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 10);
    assert_eq!(rows.iter().filter(|r| r[3] == "pdf").count(), 5);
    let meta: SimulationMetadata = serde_json::from_str(&fs::read_to_string(d.path().join("r.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta.master_seed, 11);
    assert_eq!(meta.summaries.len(), 2);
    assert_eq!(listing(d.path()), vec!["cfg.json", "r.csv", "r.csv.meta.json"]);
}

#[test]
fn simulate_is_byte_stable_across_thread_counts() {
    let d = tempfile::tempdir().unwrap();
    let c = write(
        d.path(),
        "cfg.json",
        r#"{"theta0": 2.0, "sample_sizes": [5, 12], "replications": 150, "master_seed": 5}"#,
    );
    let mut outputs = Vec::new();
    for threads in ["1", "3", "1"] {
        let o = bin()
            .current_dir(d.path())
            .env("LINDLEY_EST_THREADS", threads)
            .args(["simulate", "-c", &c])
            .output()
            .unwrap();
        outputs.push(stdout(&o));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let o = bin().current_dir(d.path()).env("LINDLEY_EST_THREADS", "zero").args(["simulate", "-c", &c]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_json_round_trips() {
    let d = tempfile::tempdir().unwrap();
    let c = write(d.path(), "cfg.json", MINIMAL);
    let out = stdout(&run_in(d.path(), &["simulate", "-c", &c, "--format", "json"]));
    let parsed: SimulationOutput = serde_json::from_str(&out).unwrap();
    assert_eq!(parsed.report.cells.len(), 10);
    assert_eq!(parsed.report.config.replications, 300);
}

#[test]
fn simulate_rejects_bad_configs() {
    let d = tempfile::tempdir().unwrap();
    let c = write(
        d.path(),
        "cfg.json",
        r#"{"theta0": 1.0, "sample_sizes": [1, 10], "methods": ["UMVUE"], "master_seed": 1}"#,
    );
    let o = run_in(d.path(), &["simulate", "-c", &c, "-o", "r.csv"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("sample_sizes") && err.contains("UMVUE"), "{err}");
    assert!(!d.path().join("r.csv").exists());

    let c = write(d.path(), "cfg2.json", r#"{"theta0": 0, "replications": -4, "colour": 1}"#);
    let err = String::from_utf8_lossy(&run_in(d.path(), &["simulate", "-c", &c]).stderr).to_string();
    for field in ["theta0", "replications", "colour", "sample_sizes", "master_seed"] {
        assert!(err.contains(field), "{field} missing from {err}");
    }
}

#[test]
fn risk_outputs() {
    let d = tempfile::tempdir().unwrap();
    let args = ["risk", "--x", "0", "--theta", "1", "--n", "10", "--target", "cdf", "--estimator", "MLE_PLUGIN", "--format", "json"];
    let rec: RiskRecord = serde_json::from_str(&stdout(&run_in(d.path(), &args))).unwrap();
    assert_eq!((rec.result.bias, rec.result.mse), (0.0, 0.0));

    let rows = csv_rows(&stdout(&run_in(d.path(), &["risk", "--x", "1", "--theta", "1", "--n", "10", "--target", "pdf"])));
    let bias: f64 = rows[0][6].parse().unwrap();
    let mse: f64 = rows[0][7].parse().unwrap();
    assert!(mse >= bias * bias);

    // Monte Carlo oracle for the same query.
    let p = LindleyParam::new(1.0).unwrap();
    let truth = lindley_core::distribution::pdf(1.0, p).unwrap();
    let reps = 200_000;
    let (mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0);
    for r in 0..reps {
        let mut rng = substream(99, r);
        let t: f64 = sample_from(&mut rng, 10, p).unwrap().values().iter().sum();
        let e = plugin_pdf(1.0, g_of_t(t, 10).unwrap()).unwrap() - truth;
        s1 += e;
        s2 += e * e;
        s3 += e.powi(4);
    }
    let n = reps as f64;
    let mc_bias = s1 / n;
    let mc_mse = s2 / n;
    let bias_se = ((mc_mse - mc_bias * mc_bias) / n).sqrt();
    let mse_se = ((s3 / n - mc_mse * mc_mse) / n).sqrt();
    assert!((bias - mc_bias).abs() <= 3.0 * bias_se, "{bias} vs {mc_bias} ± {bias_se}");
    assert!((mse - mc_mse).abs() <= 3.0 * mse_se, "{mse} vs {mc_mse} ± {mse_se}");

    let o = run_in(d.path(), &["risk", "--x", "1", "--theta", "1", "--n", "1", "--target", "pdf", "--estimator", "umvue"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curve_outputs() {
    let d = tempfile::tempdir().unwrap();
    let two = write(d.path(), "two.txt", "1.5\n2.5\n");
    let rows = csv_rows(&stdout(&run_in(d.path(), &["curve", "-i", &two, "--method", "UMVUE", "--grid", "0:6:25"])));
    let mut prev = 0.0;
    for r in &rows {
        let x: f64 = r[0].parse().unwrap();
        let (f, c): (f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        if x >= 4.0 {
            assert_eq!((f, c), (0.0, 1.0));
        }
        assert!(c >= prev);
        prev = c;
    }

    let three = write(d.path(), "three.txt", "1\n2\n3\n");
    let out = stdout(&run_in(d.path(), &["curve", "-i", &three, "--grid", "1", "--theta0", "1", "--format", "json"]));
    let rec: CurveRecord = serde_json::from_str(&out).unwrap();
    let want = plugin_pdf(1.0, 0.7807764064044151).unwrap();
    assert!((rec.points[0].pdf - want).abs() < 1e-9);
    assert!(rec.points[0].pdf_true.is_some());

    let header = stdout(&run_in(d.path(), &["curve", "-i", &three, "--grid", "1,2"]));
    assert!(header.starts_with("x,pdf,cdf\n"));
    let o = run_in(d.path(), &["curve", "-i", &three, "--grid", "1:2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn commands_write_only_the_requested_path() {
    let d = tempfile::tempdir().unwrap();
    let data = write(d.path(), "data.txt", "1\n2\n3\n");
    let c = write(d.path(), "cfg.json", MINIMAL);
    let out = d.path().join("out");
    fs::create_dir(&out).unwrap();
    let o = |name: &str| out.join(name).to_str().unwrap().to_string();
    let runs: [Vec<String>; 5] = [
        vec!["fit".into(), "-i".into(), data.clone(), "-o".into(), o("fit.csv")],
        vec!["sample".into(), "--n".into(), "4".into(), "--theta".into(), "1".into(), "-o".into(), o("s.txt")],
        vec!["simulate".into(), "-c".into(), c.clone(), "-o".into(), o("sim.json"), "--format".into(), "json".into()],
        vec!["risk".into(), "--x".into(), "1".into(), "--theta".into(), "1".into(), "--n".into(), "3".into(), "--target".into(), "cdf".into(), "-o".into(), o("risk.csv")],
        vec!["curve".into(), "-i".into(), data.clone(), "--grid".into(), "0:1:3".into(), "-o".into(), o("curve.csv")],
    ];
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = run_in(d.path(), &args);
        assert!(r.status.success(), "{args:?}: {}", String::from_utf8_lossy(&r.stderr));
        assert!(r.stdout.is_empty());
    }
    assert_eq!(listing(d.path()), vec!["cfg.json", "data.txt", "out"]);
    assert_eq!(listing(&out), vec!["curve.csv", "fit.csv", "risk.csv", "s.txt", "sim.json"]);
}
