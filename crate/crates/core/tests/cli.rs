use std::path::{Path, PathBuf};

use contagion::cli::{run, CliError};
use contagion::fixtures;
use contagion::io::{write_network, NetworkFile};
use contagion::NetworkSpec;
use serde_json::Value;
use tempfile::TempDir;

fn call(args: &[&str]) -> Result<String, CliError> {
    let mut out = Vec::new();
    let argv = std::iter::once("contagion").chain(args.iter().copied());
    run(argv, &mut out)?;
    Ok(String::from_utf8(out).unwrap())
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&call(args).unwrap_or_else(|e| panic!("{args:?}: {}", e.message))).unwrap()
}

fn code(args: &[&str]) -> i32 {
    call(args).err().map_or(0, |e| e.code)
}

fn save(dir: &TempDir, name: &str, spec: &NetworkSpec) -> String {
    let path = dir.path().join(name);
    write_network(&path, spec).unwrap();
    path.to_str().unwrap().to_string()
}

fn path_in(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn balance_prints_csv() {
    let dir = TempDir::new().unwrap();
    let five = save(&dir, "five.json", &fixtures::five_banks_uniform());
    let csv = call(&["balance", &five]).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("node,iota,b,e,a,c"));
    assert_eq!(lines.next(), Some("v1,1,2,3.8,4.8,0.48"));

    let single = NetworkSpec::homogeneous(["v"], Vec::<(&str, &str)>::new(), contagion::amount::dec("0.2"), contagion::amount::dec("0.5"), contagion::amount::dec("0"), contagion::amount::dec("10")).unwrap();
    let single = save(&dir, "single.json", &single);
    assert_eq!(call(&["balance", &single]).unwrap(), "node,iota,b,e,a,c\nv,0,0,10,10,2\n");

    let het = fixtures::five_banks_skewed();
    let path = save(&dir, "het.json", &het);
    assert_eq!(call(&["balance", &path]).unwrap(), contagion::io::balance_csv(&het).unwrap());
}

#[test]
fn balance_from_edge_csv() {
    let dir = TempDir::new().unwrap();
    let csv = path_in(&dir, "edges.csv");
    std::fs::write(&csv, "src,dst,weight\nc,b,1\nc,a,1\ne,c,1\nd,c,1\n").unwrap();
    let out = call(&["balance", "--edges", s(&csv), "--external", "5"]).unwrap();
    assert!(out.contains("\nc,2,2,1,3,0.3\n"), "{out}");
}

#[test]
fn invalid_files_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = path_in(&dir, "bad.json");
    let mut file = NetworkFile::from_spec(&fixtures::non_monotone());
    file.gamma = "0.4".into();
    std::fs::write(&bad, serde_json::to_string(&file).unwrap()).unwrap();
    assert_eq!(code(&["balance", s(&bad)]), 2);
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(code(&["balance", s(&bad)]), 2);
    assert_eq!(code(&["balance", s(&path_in(&dir, "missing.json"))]), 1);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn simulate_writes_trace_and_dot() {
    let dir = TempDir::new().unwrap();
    let net = save(&dir, "six.json", &fixtures::non_monotone());
    let trace = path_in(&dir, "trace.json");
    let dot = path_in(&dir, "cascade.dot");
    let out = json(&["simulate", &net, "--shock", "a", "b", "--trace", s(&trace), "--dot", s(&dot)]);
    assert_eq!(out["dead"], true);
    assert_eq!(out["last_step"], 3);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(written, out);
    assert_eq!(out["steps"][1]["failed"], serde_json::json!(["c"]));
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert!(dot.contains("\"d\" [label=\"d\\nt=3\""));

    let all = json(&["simulate", &net, "--shock", "all"]);
    assert_eq!(all["survivors"], serde_json::json!(["d", "e"]));
    assert_eq!(all["dead"], false);

    let one = json(&["simulate", &net, "--shock", "a", "b", "--horizon", "1"]);
    assert_eq!(one["steps"].as_array().unwrap().len(), 1);
    assert_eq!(one["failed"], serde_json::json!(["a", "b"]));

    assert_eq!(code(&["simulate", &net, "--shock", "zz"]), 3);
    assert_eq!(code(&["simulate", &net, "--shock", "a", "--horizon", "0"]), 2);
}

#[test]
fn stab_methods() {
    let dir = TempDir::new().unwrap();
    let net = save(&dir, "six.json", &fixtures::non_monotone());
    let v = json(&["stab", &net]);
    assert_eq!(v["value"], "2/5");
    assert_eq!(v["confirmed"], true);
    assert_eq!(v["shock"], serde_json::json!(["a", "b"]));
    let v = json(&["stab", &net, "--horizon", "2"]);
    assert_eq!(v["value"], "inf");
    assert_eq!(v["status"], "infeasible-infinity");
    assert_eq!(json(&["stab", &net, "--horizon", "2", "--method", "greedy-t2"])["value"], "inf");
    assert_eq!(code(&["stab", &net, "--method", "greedy-t2"]), 4);
    assert_eq!(code(&["stab", &net, "--method", "dp"]), 4);

    let gen = path_in(&dir, "arb");
    call(&["gen", "random-arborescence", "--n", "9", "--seed", "3", "--gamma", "0.1", "--phi", "0.4", "--external", "27", "--out", s(&gen)]).unwrap();
    let arb = format!("{}.json", s(&gen));
    let dp = json(&["stab", &arb, "--method", "dp"]);
    let brute = json(&["stab", &arb, "--method", "brute"]);
    assert_eq!(dp["value"], brute["value"]);
    assert_eq!(dp["method"], "dp-arborescence");
    assert!(dp["lower_bound"].is_string());

    let big = save(&dir, "big.json", &contagion::generate::gen_random_dag(30, 0.2, &contagion::generate::RandomParams::new(contagion::amount::dec("0.1"), contagion::amount::dec("0.4"), contagion::amount::dec("30")), 1).unwrap());
    assert_eq!(code(&["stab", &big]), 4);
    assert_eq!(json(&["stab", &big, "--horizon", "2"])["method"], "greedy-t2");
}

#[test]
fn dual_values() {
    let dir = TempDir::new().unwrap();
    let net = save(&dir, "six.json", &fixtures::non_monotone());
    assert_eq!(json(&["dual", &net, "--kappa", "2"])["value"], "5/2");
    assert_eq!(json(&["dual", &net, "--kappa", "1"])["value"], "4");
    assert_eq!(code(&["dual", &net, "--kappa", "0"]), 2);
    assert_eq!(code(&["dual", &net, "--kappa", "6"]), 2);
    let greedy = json(&["dual", &net, "--kappa", "2", "--method", "greedy"]);
    assert_eq!(greedy["method"], "greedy");

    let chain = NetworkSpec::homogeneous(
        ["a", "b", "c"],
        [("b", "a"), ("c", "b")],
        contagion::amount::dec("0.1"),
        contagion::amount::dec("0.4"),
        contagion::amount::dec("2"),
        contagion::amount::dec("6"),
    )
    .unwrap();
    let chain = save(&dir, "chain.json", &chain);
    assert_eq!(json(&["dual", &chain, "--kappa", "3"])["value"], "1");
}

#[test]
fn gen_reductions_and_determinism() {
    let dir = TempDir::new().unwrap();
    let p3 = path_in(&dir, "p3");
    call(&["gen", "dominating-set", "--graph", "a-b,b-c", "--out", s(&p3)]).unwrap();
    let net = format!("{}.json", s(&p3));
    assert_eq!(json(&["stab", &net, "--horizon", "2"])["value"], "1/3");
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(format!("{}.cert.json", s(&p3))).unwrap()).unwrap();
    assert_eq!(cert["certificate"]["kind"], "dominating-set");
    assert_eq!(cert["source"]["type"], "graph");

    let sets = "S1=u1,u2,u3;S2=u3,u4;S3=u3;S4=u1,u2";
    assert_eq!(code(&["gen", "set-cover", "--sets", sets]), 5);
    let sc = path_in(&dir, "sc");
    call(&["gen", "set-cover", "--sets", sets, "--allow-single-cover", "--out", s(&sc)]).unwrap();
    let v = json(&["stab", &format!("{}.json", s(&sc))]);
    assert_eq!(v["value"], "1/3");
    assert_eq!(v["size"], 3);
    assert_eq!(v["n"], 9);

    let k4 = path_in(&dir, "k4");
    call(&["gen", "node-cover-3reg", "--graph", "a-b,a-c,a-d,b-c,b-d,c-d", "--out", s(&k4)]).unwrap();
    assert_eq!(json(&["stab", &format!("{}.json", s(&k4)), "--horizon", "2"])["size"], 7);
    assert_eq!(code(&["gen", "node-cover-3reg", "--graph", "a-b,b-c"]), 5);

    let mc = json(&["gen", "max-coverage", "--sets", "S1=x,y;S2=y,z", "--kappa", "1"]);
    assert_eq!(mc["nodes"].as_array().unwrap().len(), 5);
    let hg = json(&["gen", "densest-hypergraph", "--hyperedges", "a,b;b,c", "--kappa", "2"]);
    assert_eq!(hg["edges"].as_array().unwrap().len(), 4);
    assert_eq!(code(&["gen", "densest-hypergraph", "--hyperedges", "a,b;b,c,d", "--kappa", "2"]), 5);

    let args = ["gen", "random-arborescence", "--n", "12", "--seed", "7"];
    assert_eq!(call(&args).unwrap(), call(&args).unwrap());
    let a = path_in(&dir, "r1");
    let b = path_in(&dir, "r2");
    call(&["gen", "random-dag", "--n", "10", "--seed", "7", "--out", s(&a)]).unwrap();
    call(&["gen", "random-dag", "--n", "10", "--seed", "7", "--out", s(&b)]).unwrap();
    assert_eq!(
        std::fs::read(format!("{}.json", s(&a))).unwrap(),
        std::fs::read(format!("{}.json", s(&b))).unwrap()
    );
}

#[test]
fn help_and_version_succeed() {
    assert!(call(&["--help"]).unwrap().contains("simulate"));
    assert!(call(&["--version"]).unwrap().starts_with("contagion"));
}
