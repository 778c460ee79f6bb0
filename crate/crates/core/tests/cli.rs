use std::path::PathBuf;
use std::process::{Command, Output};

fn thrackle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thrackle")).args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("thrackle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn gen_validate_classify() {
    let path = tmp("star.json");
    let p = path.to_str().unwrap();
    assert!(thrackle(&["gen", "star-thrackle", "--n", "5", "--out", p]).status.success());
    let v = thrackle(&["validate", "--in", p]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["violations"].as_array().unwrap().len(), 0);
    let c = thrackle(&["classify", "--in", p]);
    assert_eq!(json(&c)["flags"]["is_thrackle"], true);
    let csv = thrackle(&["classify", "--in", p, "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("e,f,relation"));
    assert_eq!(text.lines().count(), 1 + 10);
}

#[test]
fn exit_codes() {
    assert_eq!(thrackle(&["validate"]).status.code(), Some(2));
    assert_eq!(thrackle(&["run", "nope"]).status.code(), Some(2));
    let bad = tmp("bad.json");
    std::fs::write(
        &bad,
        r#"{"version":1,"vertices":[{"id":0,"x":"0","y":"0"},{"id":1,"x":"2","y":"0"},{"id":2,"x":"1","y":"0"}],
            "edges":[{"id":0,"tail":0,"head":1,"points":[["0","0"],["2","0"]]}]}"#,
    )
    .unwrap();
    let v = thrackle(&["validate", "--in", bad.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1), "{}", String::from_utf8_lossy(&v.stderr));
}

#[test]
fn run_and_check() {
    let r = thrackle(&["run", "formula", "--format", "csv"]);
    assert!(r.status.success());
    assert!(String::from_utf8(r.stdout).unwrap().starts_with("suite,seed,instance"));
    let c = thrackle(&["check", "--n", "100", "--t", "2"]);
    assert!(c.status.success());
    assert!((json(&c)["alpha"].as_f64().unwrap() - 1.0468).abs() < 1e-3);
    let d = thrackle(&["ds", "--n", "2", "--s", "3"]);
    assert_eq!(json(&d)["lambda"]["value"], 4);
}

#[test]
fn transforms() {
    let star = tmp("star6.json");
    let s = star.to_str().unwrap();
    thrackle(&["gen", "star", "--k", "6", "--out", s]);
    let split = thrackle(&["transform", "split", "--delta", "2", "--in", s]);
    assert!(split.status.success(), "{}", String::from_utf8_lossy(&split.stderr));
    assert!(json(&split)["certificate"]["vertex_map"].is_object());

    let bip = tmp("bip.json");
    let b = bip.to_str().unwrap();
    thrackle(&["gen", "random-bipartite", "--n", "8", "--m", "9", "--seed", "4", "--out", b]);
    let strip = thrackle(&["transform", "strip", "--in", b]);
    assert_eq!(strip.status.code(), Some(0), "{}", String::from_utf8_lossy(&strip.stderr));
    assert_eq!(json(&strip)["parity_holds"], true);

    let tg = tmp("tangled.json");
    let t = tg.to_str().unwrap();
    thrackle(&["gen", "tangled", "--out", t]);
    let pert = tmp("pert.json");
    assert!(thrackle(&["transform", "perturb", "--in", t, "--out", pert.to_str().unwrap()]).status.success());
    let c = thrackle(&["classify", "--in", pert.to_str().unwrap()]);
    assert_eq!(json(&c)["flags"]["is_tangled_thrackle"], false);

    let dec = thrackle(&["decompose", "--in", b, "--n0", "3"]);
    assert!(dec.status.success(), "{}", String::from_utf8_lossy(&dec.stderr));
    assert_eq!(json(&dec)["conserves_edges"], true);
}

#[test]
fn arrange_and_bisect() {
    let fam = tmp("fam.json");
    let f = fam.to_str().unwrap();
    thrackle(&["gen", "families", "--k", "2", "--out", f]);
    let a = thrackle(&["arrange", "--in", f]);
    assert!(a.status.success());
    assert_eq!(json(&a)["tangency_graph"]["edges"].as_array().unwrap().len(), 4);

    let segs = tmp("segs.json");
    let sp = segs.to_str().unwrap();
    thrackle(&["gen", "segments", "--m", "6", "--out", sp]);
    let a = thrackle(&["arrange", "--in", sp]);
    assert!(a.status.success());
    assert_eq!(json(&a)["euler_holds"], true);

    let g = tmp("g.json");
    std::fs::write(&g, r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[3,0]]}"#).unwrap();
    let b = thrackle(&["bisect", "--in", g.to_str().unwrap(), "--mode", "exact"]);
    assert_eq!(json(&b)["result"]["width"], 2);
}
