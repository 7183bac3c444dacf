use std::path::Path;
use std::process::{Command, Output};

use qdyb_core::qmatrix::eps_bra;
use qdyb_core::{
    build_dj, build_dyn, MatrixDump, ParamsDoc, QContext, Rational, Report, SLnParams, Scalar, WeightPoint,
};
use serde_json::Value;

fn qdyb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdyb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn report(o: &Output) -> Report {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn build_matches_the_library() {
    let o = qdyb(&["build", "--n", "2", "--q", "2/1", "--beta", "1", "--p", "p12=2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let doc = ParamsDoc::from_json(&v["params"].to_string()).unwrap();
    let params: SLnParams<Rational> = doc.to_params().unwrap();
    let p = WeightPoint::parse_assignments(2, "p12=2").unwrap();
    let want = serde_json::to_value(MatrixDump::from_op(&build_dyn(&params, &p).unwrap())).unwrap();
    assert_eq!(v["rhat_p"], want);
    assert_eq!(v["eps_up"]["12"], "6/11");
    assert_eq!(v["eps_up"]["21"], "-43/22");
}

#[test]
fn dj_preset_gives_the_constant_matrix() {
    let o = qdyb(&["build", "--preset", "dj", "--n", "3", "--q", "3/2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let ctx = QContext::new(Rational::from_frac(3, 2).unwrap(), 3).unwrap();
    let want = serde_json::to_value(MatrixDump::from_op(&build_dj(&ctx).op)).unwrap();
    assert_eq!(v["rhat"], want);
    assert_eq!(v["rhat_p"], want);
}

#[test]
fn text_output_lists_entries() {
    let o = qdyb(&["build", "--preset", "dj", "--n", "2", "--format", "text"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("rhat\n"));
    assert!(text.contains("[1,1] [1,1] = 2/1"), "{text}");
}

#[test]
fn poles_exit_with_two() {
    let o = qdyb(&["build", "--n", "2", "--beta", "infinity", "--p", "p12=0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("dynamical pole"), "{}", stderr(&o));
}

#[test]
fn projector_needs_enough_sites() {
    let o = qdyb(&["build", "--preset", "dj", "--n", "3", "--k", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_all_passes() {
    let o = qdyb(&["verify", "all", "--n", "2", "--seed", "7", "--draws", "1", "--points", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = report(&o);
    assert_eq!(r.suite, "all");
    for s in ["params.", "qdybe.", "hecke.", "epsilon.", "qmatrix.", "appendix.", "wznw."] {
        assert!(r.records.iter().any(|x| x.id.starts_with(s)), "no {s} records");
    }
}

#[test]
fn appendix_runs_at_larger_k() {
    let o = qdyb(&["verify", "appendix", "--k", "5", "--draws", "1", "--format", "text"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("suite appendix: Pass"));
}

#[test]
fn corrupted_beta_exits_with_one() {
    let o = qdyb(&["verify", "qdybe", "--corrupt", "beta", "--draws", "1", "--points", "1"]);
    assert_eq!(code(&o), 1);
    let r = report(&o);
    assert!(r.records.iter().any(|x| x.witness.is_some()));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "nonsense"][..],
        &["verify", "params", "--corrupt", "eps-sign"],
        &["verify", "params", "--backend", "prime:7"],
        &["verify", "params", "--n", "1"],
        &["derive"],
        &["build", "--alpha", "standard"],
    ] {
        assert_eq!(code(&qdyb(args)), 2, "{args:?}");
    }
}

#[test]
fn prime_backend_is_marked() {
    let o = qdyb(&["verify", "params", "--backend", "prime", "--draws", "1"]);
    assert_eq!(code(&o), 0);
    assert!(report(&o).records.iter().all(|x| x.probabilistic));
}

#[test]
fn builtin_derivations_replay() {
    let o = qdyb(&["derive", "--builtin", "--n", "2", "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(report(&o).records.len(), 11);
}

#[test]
fn empty_script_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "empty.json", "");
    let o = qdyb(&["derive", &path]);
    assert_eq!(code(&o), 0);
    assert!(report(&o).records.is_empty());
}

#[test]
fn inapplicable_move_names_the_step() {
    let mut d = eps_bra(2);
    d.moves.swap(0, 1);
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.json", &serde_json::to_string(&d).unwrap());
    let o = qdyb(&["derive", &path, "--n", "2"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let r = report(&o);
    let w = r.records[0].witness.clone().unwrap();
    assert!(w.contains("EpsCollapse"), "{w}");
}

#[test]
fn malformed_script_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.json", "{\"name\": 3");
    assert_eq!(code(&qdyb(&["derive", &path])), 2);
}

#[test]
fn wznw_reports_dimensions_and_determinant() {
    let o = qdyb(&["wznw", "--n", "2", "--root", "2", "--p", "p12=1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["d"], serde_json::json!(["-3/2", "1/2"]));
    assert_eq!(v["normalization"]["det"], "-1/1");
    assert_eq!(v["normalization"]["multiplicity_q"], 3);
    assert_eq!(v["normalization"]["multiplicity_minus_qbar"], 1);
    let o = qdyb(&["wznw", "--n", "3", "--weights", "1/2,0,2", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("d_3 = "));
}

#[test]
fn reports_repeat_up_to_timing() {
    let args = ["verify", "epsilon", "--seed", "5", "--draws", "1"];
    let a = report(&qdyb(&args)).to_json_without_timing();
    let b = report(&qdyb(&args)).to_json_without_timing();
    assert_eq!(a, b);
}

#[test]
fn dumped_config_feeds_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = qdyb(&["dump", "config", "--n", "3", "--seed", "4", "--draws", "1", "--points", "1"]);
    assert_eq!(code(&o), 0);
    let path = write(dir.path(), "cfg.json", &stdout(&o));
    let o = qdyb(&["verify", "wznw", "--config", &path]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = report(&o);
    assert_eq!(r.records.iter().filter(|x| x.id.starts_with("wznw.dvec.")).count(), 1);
}

#[test]
fn dumped_params_feed_build_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = qdyb(&["dump", "params", "--n", "3", "--seed", "9"]);
    assert_eq!(code(&o), 0);
    let path = write(dir.path(), "params.json", &stdout(&o));
    let o = qdyb(&["build", "--params", &path]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o)["params"], serde_json::from_str::<Value>(&std::fs::read_to_string(&path).unwrap()).unwrap());
    let o = qdyb(&["verify", "qdybe", "--params", &path, "--draws", "1", "--points", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}
