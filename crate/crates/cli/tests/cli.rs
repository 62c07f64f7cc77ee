use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Env {
    dir: TempDir,
}

impl Env {
    fn new() -> Self {
        Env {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn cache(&self) -> PathBuf {
        self.dir.path().join("cache")
    }

    fn write(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_fsplit"))
            .args(args)
            .env("FSPLIT_CACHE_DIR", self.cache())
            .output()
            .unwrap()
    }
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}\nstdout: {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn record<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["records"].as_array().unwrap().iter().find(|r| r["id"] == id).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const ALGEBRAS: &str = r#"
{"id": "dual", "kind": "algebra", "payload": "F_2[x]/(x^2)", "expected": {"height": "inf"}}
{"id": "f4", "kind": "algebra", "payload": "F_4", "expected": {"height": 1}}
"#;

#[test]
fn height_of_dual_numbers_is_infinite() {
    let env = Env::new();
    let c = env.write("a.jsonl", ALGEBRAS);
    let out = env.run(&["height", "--corpus", path(&c)]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let dual = record(&r, "dual");
    assert_eq!(dual["result"]["height"], "inf");
    assert_eq!(dual["result"]["certificate"]["reason"], "frobenius-kernel");
    assert!(record(&r, "f4")["result"]["witness"]["phi"].is_object());
}

#[test]
fn fermat_cubic_heights() {
    let env = Env::new();
    let c = env.write(
        "c.jsonl",
        r#"{"id": "f2", "kind": "curve", "payload": {"p": 2, "f": "x^3+y^3+z^3"}}
{"id": "f5", "kind": "curve", "payload": {"p": 5, "f": "x^3+y^3+z^3"}}
{"id": "f7", "kind": "curve", "payload": {"p": 7, "f": "x^3+y^3+z^3"}}"#,
    );
    let out = env.run(&["height", "--corpus", path(&c)]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    for (id, h) in [("f2", 2), ("f5", 2), ("f7", 1)] {
        let rec = record(&r, id);
        assert_eq!(rec["result"]["height"], h, "{id}");
        assert_eq!(rec["result"]["cross_check"]["agree"], true);
    }
}

#[test]
fn empty_corpus_succeeds() {
    let env = Env::new();
    let c = env.write("e.jsonl", "# nothing here\n\n");
    let out = env.run(&["height", "--corpus", path(&c)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["records"].as_array().unwrap().len(), 0);
}

#[test]
fn parse_errors_exit_2_with_line() {
    let env = Env::new();
    let c = env.write("bad.jsonl", "{\"id\": \"a\", \"kind\": \"algebra\", \"payload\": \"F_2\"}\n{\"id\": \"b\", \"kind\": \"algebr\"}\n");
    let out = env.run(&["height", "--corpus", path(&c)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn failing_record_is_isolated() {
    let env = Env::new();
    let c = env.write(
        "mixed.jsonl",
        r#"{"id": "good", "kind": "algebra", "payload": "F_3"}
{"id": "bad-prime", "kind": "algebra", "payload": {"p": 4, "variables": ["x"], "relations": ["x"]}}
{"id": "singular", "kind": "curve", "payload": {"p": 5, "f": "y^2*z - x^3"}}"#,
    );
    let out = env.run(&["height", "--corpus", path(&c)]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(record(&r, "good")["status"], "ok");
    assert_eq!(record(&r, "bad-prime")["error"]["kind"], "InvalidPrime");
    assert_eq!(record(&r, "singular")["error"]["kind"], "NotSmooth");
}

#[test]
fn regression_mismatch_fails_run() {
    let env = Env::new();
    let c = env.write("r.jsonl", r#"{"id": "f2", "kind": "algebra", "payload": "F_2", "expected": {"height": "inf"}}"#);
    let out = env.run(&["height", "--corpus", path(&c)]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(record(&r, "f2")["status"], "fail");
    assert!(record(&r, "f2")["mismatches"][0].as_str().unwrap().starts_with("height"));
}

#[test]
fn reports_are_deterministic() {
    let env = Env::new();
    let c = env.write("a.jsonl", ALGEBRAS);
    let mut a = json(&env.run(&["height", "--corpus", path(&c), "--jobs", "1"]));
    let mut b = json(&env.run(&["height", "--corpus", path(&c), "--jobs", "3"]));
    a.as_object_mut().unwrap().remove("runtime");
    b.as_object_mut().unwrap().remove("runtime");
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn witt_identities_pass() {
    let env = Env::new();
    let out = env.run(&["witt-identities", "--p", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = env.run(&["witt-identities", "--algebra", "F_3[x]/(x^2)", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let rec = &r["records"][0]["result"];
    assert_eq!(rec["ghost_compatible"], true);
    assert_eq!(rec["sequences"][0]["first"]["f_injective"], false);
}

#[test]
fn box_check_pairs_and_caps() {
    let env = Env::new();
    let out = env.run(&["box-check", "--a", "F_2", "--b", "F_2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["records"][0]["result"]["isomorphic"], true);
    let out = env.run(&["box-check", "--a", "F_2[x]/(x^2)", "--b", "F_2[x]/(x^2)", "--n", "2"]);
    let r = json(&out);
    assert_eq!(r["records"][0]["result"]["comparison"]["orders_lhs"], r["records"][0]["result"]["comparison"]["orders_rhs"]);
    assert_eq!(r["records"][0]["result"]["isomorphic"], true);
    let out = env.run(&["box-check", "--a", "F_2", "--b", "F_2", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["records"][0]["status"], "skipped");
    assert_eq!(r["records"][0]["error"]["kind"], "CapExceeded");
}

#[test]
fn product_demo_directions() {
    let env = Env::new();
    let out = env.run(&["product-demo", "--a", "F_4", "--b", "F_2[t]/(t^3-1)", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["records"][0]["result"]["verification"]["passed"], true);

    let out = env.run(&["product-demo", "--a", "F_2[x]/(x^2)", "--b", "F_2[y]/(y^2)", "--n", "2", "--direction", "refute"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["records"][0]["result"]["certificate"]["concurs"], true);

    let out = env.run(&["product-demo", "--a", "F_2[x]/(x^2)", "--b", "F_4", "--n", "2", "--direction", "refute"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["records"][0]["error"]["kind"], "FactorIsSplit");
}

#[test]
fn curve_scan_agrees() {
    let env = Env::new();
    let out = env.run(&["curve-scan", "--p", "2,3", "--count", "4", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["summary"]["ok"], 8);
}

#[test]
fn cache_admin_and_out_file() {
    let env = Env::new();
    let c = env.write("a.jsonl", ALGEBRAS);
    let o1 = env.dir.path().join("one.json");
    let o2 = env.dir.path().join("two.json");
    assert_eq!(env.run(&["height", "--corpus", path(&c), "--out", path(&o1)]).status.code(), Some(0));

    let warm = json(&env.run(&["cache", "warm", "--pmax", "5", "--nmax", "3"]));
    assert_eq!(warm["entries"].as_array().unwrap().len(), 6);
    let show = json(&env.run(&["cache", "show"]));
    assert_eq!(show["entries"][0], serde_json::json!({"p": 2, "n": 2}));
    let clear = json(&env.run(&["cache", "clear"]));
    assert_eq!(clear["removed"], 6);
    assert!(clear["entries"].as_array().unwrap().is_empty());

    assert_eq!(env.run(&["height", "--corpus", path(&c), "--out", path(&o2)]).status.code(), Some(0));
    let strip = |p: &Path| {
        let mut v: Value = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("runtime");
        v
    };
    assert_eq!(strip(&o1), strip(&o2));
}

#[test]
fn corrupt_cache_is_recomputed() {
    let env = Env::new();
    env.run(&["cache", "warm", "--pmax", "2", "--nmax", "2"]);
    let f = env.cache().join("witt-p2-n2.txt");
    fs::write(&f, "garbage").unwrap();
    let out = env.run(&["witt-identities", "--p", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["runtime"]["cache"]["corrupt_recovered"], 1);
}
