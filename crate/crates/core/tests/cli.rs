//! End-to-end checks of the command-line surface: exact output shapes,
//! exit codes, determinism, and round-tripping of the JSON formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multidev"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("multidev-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn pioneer_count_exact_output_and_refusal() {
    let out = run(&["pioneer", "count", "--observers", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{\"total\":24,\"top_level\":8}\n");

    let out = run(&["pioneer", "count", "--observers", "3"]);
    assert_eq!(stdout(&out), "{\"total\":352,\"top_level\":192}\n");

    let out = run(&["pioneer", "count", "--observers", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        vec!["pioneer", "enumerate", "--observers", "3", "--top-level-only"],
        vec!["qm", "table", "--rows", "2,3,10"],
        vec!["facets"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?} not deterministic");
    }
}

#[test]
fn enumerate_streams_the_right_number_of_lines() {
    let out = run(&["pioneer", "enumerate", "--observers", "2"]);
    assert_eq!(stdout(&out).lines().count(), 24);
    let out = run(&["pioneer", "enumerate", "--observers", "2", "--top-level-only"]);
    assert_eq!(stdout(&out).lines().count(), 8);
}

#[test]
fn qm_table_rows_and_max_violation() {
    let out = run(&["qm", "table", "--rows", "2,3", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("observers,d_over_pi,value"));
    let row2: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row2[0], "2");
    assert!((row2[1].parse::<f64>().unwrap() - 0.5).abs() < 1e-6);
    assert!((row2[2].parse::<f64>().unwrap() + 0.2071).abs() < 1e-3);

    let out = run(&["qm", "max-violation", "--observers", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["d_over_pi"].as_f64().unwrap() - 0.588).abs() < 2e-3);
    assert!((v["value"].as_f64().unwrap() + 0.333).abs() < 2e-3);
}

#[test]
fn facet_census_has_24_lines() {
    let out = run(&["facets"]);
    assert_eq!(stdout(&out).lines().count(), 24);
    // thread count must not change the output
    let threaded = run(&["facets", "--threads", "2"]);
    assert_eq!(out.stdout, threaded.stdout);
    let single = run(&["facets", "--threads", "1"]);
    assert_eq!(out.stdout, single.stdout);
    // json format wraps the same documents in one array
    let as_json = run(&["facets", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&as_json)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 24);
}

#[test]
fn pioneer_to_inequality_to_eval_round_trip() {
    // CHSH-family spec (S = {{A,B}}), evaluated against the uniform Bell
    // mixture: satisfied with value 1/2
    let spec = write_temp("chsh-spec.json", r#"{"partition":[[0,1]],"family":[[[0,1]]]}"#);
    let out = run(&["ineq", "from-pioneer", "--spec", path_str(&spec)]);
    assert!(out.status.success());
    let ineq_text = stdout(&out);
    let ineq_path = write_temp("chsh-ineq.json", ineq_text.trim());

    let dist = write_temp(
        "uniform-dist.json",
        r#"{"contexts":[
            {"observables":[1,3],"probabilities":["1/4","1/4","1/4","1/4"]},
            {"observables":[1,4],"probabilities":["1/4","1/4","1/4","1/4"]},
            {"observables":[2,3],"probabilities":["1/4","1/4","1/4","1/4"]},
            {"observables":[2,4],"probabilities":["1/4","1/4","1/4","1/4"]}
        ]}"#,
    );
    let out = run(&["ineq", "eval", "--ineq", path_str(&ineq_path), "--dist", path_str(&dist)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], "1/2");
    assert_eq!(v["satisfied"], true);

    // a signalling distribution is refused with exit 2
    let signalling = write_temp(
        "signalling.json",
        r#"{"contexts":[
            {"observables":[1,3],"probabilities":["1/2","1/2","0/1","0/1"]},
            {"observables":[1,4],"probabilities":["1/4","1/4","1/4","1/4"]},
            {"observables":[2,3],"probabilities":["1/4","1/4","1/4","1/4"]},
            {"observables":[2,4],"probabilities":["1/4","1/4","1/4","1/4"]}
        ]}"#,
    );
    let out =
        run(&["ineq", "eval", "--ineq", path_str(&ineq_path), "--dist", path_str(&signalling)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tbic_check_verdicts_and_exit_codes() {
    let space = write_temp(
        "space22.json",
        r#"{"observers":[
            {"id":0,"observables":[{"id":1,"outcomes":2},{"id":2,"outcomes":2}]},
            {"id":1,"observables":[{"id":3,"outcomes":2},{"id":4,"outcomes":2}]}
        ]}"#,
    );
    // the CHSH Γ: labels (σ,ρ) with σ ∈ S* ↔ |ρ| odd for S = {{A,B}}
    let chsh_gamma = {
        use multidev::pioneer;
        let spec =
            pioneer::PioneerSpec::top_level(2, vec![multidev::algebra::ElementSet::full(2)])
                .unwrap();
        let space = multidev::contexts::EventSpace::binary(2);
        let gamma = pioneer::gamma_set(&spec).omni_indices(&space).unwrap();
        serde_json::to_string(&multidev::json::gamma_to_json(&space, &gamma).unwrap()).unwrap()
    };
    let gamma = write_temp("chsh-gamma.json", &chsh_gamma);
    let out = run(&["tbic", "check", "--space", path_str(&space), "--gamma", path_str(&gamma)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "tight");
    assert_eq!(v["nullity"], 1);

    // a singleton Γ is independent: exit 1, verdict not_dependent
    let single = write_temp(
        "single-gamma.json",
        r#"{"members":[[[1,1],[2,1],[3,1],[4,1]]]}"#,
    );
    let out = run(&["tbic", "check", "--space", path_str(&space), "--gamma", path_str(&single)]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "not_dependent");
}

#[test]
fn project_and_md_commands() {
    let space = write_temp(
        "space22p.json",
        r#"{"observers":[
            {"id":0,"observables":[{"id":1,"outcomes":2},{"id":2,"outcomes":2}]},
            {"id":1,"observables":[{"id":3,"outcomes":2},{"id":4,"outcomes":2}]}
        ]}"#,
    );
    let omni = write_temp(
        "omni-uniform.json",
        &format!(
            r#"{{"sizes":[2,2,2,2],"values":[{}]}}"#,
            vec!["\"1/16\""; 16].join(",")
        ),
    );
    let out = run(&["project", "--space", path_str(&space), "--dist", path_str(&omni)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["contexts"][0]["probabilities"][0], "1/4");

    // transform a deterministic distribution, then check its constraints
    let dist = write_temp(
        "point.json",
        r#"{"sizes":[2,2],"values":["1/1","0/1","0/1","0/1"]}"#,
    );
    let out = run(&["md", "transform", "--dist", path_str(&dist)]);
    assert!(out.status.success());
    let table_text = stdout(&out);
    let table = write_temp("table.json", table_text.trim());
    let out = run(&["md", "check", "--table", path_str(&table)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "{\"holds\":true}");

    // an infeasible table is reported with a witness and exit 1
    let mut tj: multidev::json::MultidevTableJson =
        serde_json::from_str(table_text.trim()).unwrap();
    for order in tj.orders.iter_mut() {
        if order.sigma.len() == 2 {
            order.values = vec!["1/2".into(), "-1/2".into(), "-1/2".into(), "1/2".into()];
        }
    }
    let bad = write_temp("bad-table.json", &serde_json::to_string(&tj).unwrap());
    let out = run(&["md", "check", "--table", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["holds"], false);
}

#[test]
fn enumerate_output_feeds_from_pioneer() {
    let out = run(&["pioneer", "enumerate", "--observers", "3", "--top-level-only"]);
    let first = stdout(&out).lines().next().unwrap().to_owned();
    let spec = write_temp("enumerated-spec.json", &first);
    let out = run(&["ineq", "from-pioneer", "--spec", path_str(&spec)]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["constant"], "1/2");
}

#[test]
fn malformed_input_is_a_usage_error() {
    let junk = write_temp("junk.json", "{ not json ");
    let out = run(&["ineq", "from-pioneer", "--spec", path_str(&junk)]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["md", "transform", "--dist", path_str(&junk)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lift_through_the_cli() {
    let spec = write_temp("chsh-spec2.json", r#"{"partition":[[0,1]],"family":[[[0,1]]]}"#);
    let out = run(&["ineq", "from-pioneer", "--spec", path_str(&spec)]);
    let ineq = write_temp("chsh-ineq2.json", stdout(&out).trim());

    let target = write_temp(
        "space33.json",
        r#"{"observers":[
            {"id":0,"observables":[{"id":1,"outcomes":3},{"id":2,"outcomes":3},{"id":3,"outcomes":3}]},
            {"id":1,"observables":[{"id":4,"outcomes":3},{"id":5,"outcomes":3},{"id":6,"outcomes":3}]}
        ]}"#,
    );
    let lift = write_temp(
        "lift.json",
        r#"{"p":[1,4],"q":[2,5],"alpha":[[1,[1]],[2,[1,2]],[4,[1,3]],[5,[1]]]}"#,
    );
    let out = run(&[
        "ineq", "lift", "--ineq", path_str(&ineq), "--space", path_str(&target), "--lift",
        path_str(&lift),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["constant"], "1/2");
    assert!(v["terms"][0]["reference"]["lattice"].is_array());
}
