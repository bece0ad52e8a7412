use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use multibracket::fixtures;
use multibracket::formats;
use multibracket::semigroup::gen_se;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multibracket"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is a JSON report")
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Self { dir: tempfile::tempdir().unwrap() };
        ws.write("so3.json", &formats::algebra_to_json(&fixtures::so3()));
        ws.write("iso3.json", &formats::algebra_to_json(&fixtures::iso3()));
        ws.write("so4.json", &formats::algebra_to_json(&fixtures::so4()));
        ws.write("gl2.json", &formats::rep_to_json(&fixtures::gl(2)));
        for n in 0..=2 {
            ws.write(&format!("se{n}.json"), &formats::semigroup_to_json(&gen_se(n)));
        }
        ws.write(
            "decomp.json",
            r#"{"subspaces": {"0": [0, 1, 2], "1": [3, 4, 5]},
                "subsets": {"0": [0, 2, 3], "1": [1, 3]},
                "hat": {"0": [3], "1": [3]}}"#,
        );
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) {
        fs::write(self.path(name), text).unwrap();
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.path(name)).unwrap()
    }

    fn run(&self, args: &[&str]) -> Output {
        run(self.dir.path(), args)
    }
}

#[test]
fn validate_semigroup_outcomes() {
    let ws = Workspace::new();
    let ok = ws.run(&["validate-semigroup", "se2.json", "--json"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(report(&ok)["status"], "pass");

    ws.write("bad.json", r#"{"labels": ["a", "b"], "table": [[0, 1], [1, 99]]}"#);
    let bad = ws.run(&["validate-semigroup", "bad.json", "--json"]);
    assert_eq!(code(&bad), 1);
    let r = report(&bad);
    assert_eq!(r["status"], "fail");
    assert_eq!(r["witnesses"][0]["kind"], "NotClosed");
    assert_eq!(r["witnesses"][0]["value"], 99);

    let missing = ws.run(&["validate-semigroup", "missing.json"]);
    assert_eq!(code(&missing), 2);

    ws.write("garbled.json", "{\"labels\": [\"a\"],\n \"table\": [[0,]]}");
    let garbled = ws.run(&["validate-semigroup", "garbled.json", "--json"]);
    assert_eq!(code(&garbled), 2);
    let message = report(&garbled)["message"].as_str().unwrap().to_string();
    assert!(message.contains("line 2"), "{message}");
}

#[test]
fn gen_se_files() {
    let ws = Workspace::new();
    for (n, size) in [(0usize, 2usize), (1, 3), (2, 4)] {
        let name = format!("gen{n}.json");
        assert_eq!(code(&ws.run(&["gen-se", &n.to_string(), "--out", &name])), 0);
        let s = formats::semigroup_from_json(&ws.read(&name)).unwrap();
        assert_eq!(s.order(), size);
    }
    let s2 = formats::semigroup_from_json(&ws.read("gen2.json")).unwrap();
    assert_eq!(s2.table()[3], vec![3, 3, 3, 3]);

    let first = ws.run(&["gen-se", "3"]);
    let second = ws.run(&["gen-se", "3"]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stdout(&first), formats::semigroup_to_json(&gen_se(3)));

    let unwritable = ws.run(&["gen-se", "1", "--out", "no/such/dir/x.json"]);
    assert_eq!(code(&unwritable), 2);
}

#[test]
fn gji_and_expansion_pipeline() {
    let ws = Workspace::new();
    let r = ws.run(&["check-gji", "so3.json", "--json", "--threads", "2"]);
    assert_eq!(code(&r), 0);
    let r = report(&r);
    assert_eq!(r["command"], "check-gji");
    assert_eq!(r["witnesses"].as_array().unwrap().len(), 0);
    assert_eq!(r["stats"]["tuples_checked"], 1);

    assert_eq!(code(&ws.run(&["expand", "so3.json", "se1.json", "--out", "e.json"])), 0);
    assert_eq!(code(&ws.run(&["check-gji", "e.json"])), 0);
    assert_eq!(
        code(&ws.run(&["zero-reduce", "e.json", "--semigroup", "se1.json", "--out", "z.json"])),
        0
    );
    let z = formats::expanded_from_json(&ws.read("z.json"), &gen_se(1)).unwrap();
    assert_eq!(z.algebra().dim(), 6);
    assert_eq!(code(&ws.run(&["check-gji", "z.json"])), 0);

    ws.write("z2.json", &formats::semigroup_to_json(&multibracket::semigroup::cyclic_group(2)));
    assert_eq!(code(&ws.run(&["expand", "so3.json", "z2.json", "--out", "c.json"])), 0);
    assert_eq!(code(&ws.run(&["zero-reduce", "c.json", "--semigroup", "z2.json"])), 1);
}

#[test]
fn broken_algebra_fails_gji_with_witness() {
    let ws = Workspace::new();
    ws.write(
        "broken.json",
        r#"{"basis": ["a", "b", "c"], "order": 2, "entries": [
            {"lower": [0, 1], "upper": 0, "value": "1"},
            {"lower": [0, 2], "upper": 1, "value": "1"}]}"#,
    );
    let r = ws.run(&["check-gji", "broken.json", "--json"]);
    assert_eq!(code(&r), 1);
    let r = report(&r);
    assert_eq!(r["status"], "fail");
    assert_eq!(r["witnesses"][0]["tuple"], serde_json::json!([0, 1, 2]));
}

#[test]
fn split_commands() {
    let ws = Workspace::new();
    assert_eq!(code(&ws.run(&["check-reduction", "iso3.json", "--v0", "0,1,2"])), 0);
    assert_eq!(code(&ws.run(&["check-sub", "iso3.json", "--v0", "0,1,2"])), 0);
    assert_eq!(code(&ws.run(&["reduce", "iso3.json", "--v0", "0,1,2", "--out", "r.json"])), 0);
    let r = formats::algebra_from_json(&ws.read("r.json")).unwrap();
    assert_eq!(r.tensor(), fixtures::so3().tensor());

    let sub = ws.run(&["check-sub", "so3.json", "--v0", "0,1", "--json"]);
    assert_eq!(code(&sub), 1);
    assert_eq!(report(&sub)["witnesses"][0]["upper"], 2);
    assert_eq!(code(&ws.run(&["reduce", "so3.json", "--v0", "0,1"])), 1);
    assert_eq!(code(&ws.run(&["check-sub", "so3.json", "--v0", "0,9"])), 2);
}

#[test]
fn realization_commands() {
    let ws = Workspace::new();
    let r = ws.run(&["verify-identity", "gl2.json", "--n", "2"]);
    assert_eq!(code(&r), 0);
    assert!(stdout(&r).contains("0 violations"), "{}", stdout(&r));

    let sampled = ws.run(&["verify-identity", "gl2.json", "--n", "2", "--trials", "2", "--seed", "7", "--json"]);
    assert_eq!(code(&sampled), 0);
    assert_eq!(report(&sampled)["stats"]["tuples_checked"], 2);

    assert_eq!(code(&ws.run(&["extract", "gl2.json", "--n", "2", "--out", "gl2-alg.json"])), 0);
    assert_eq!(code(&ws.run(&["check-gji", "gl2-alg.json"])), 0);
    assert_eq!(code(&ws.run(&["extract", "gl2.json", "--n", "3"])), 2);

    ws.write(
        "open.json",
        r#"{"size": 2, "generators": [[["0", "1"], ["0", "0"]], [["0", "0"], ["1", "0"]]]}"#,
    );
    let open = ws.run(&["extract", "open.json", "--n", "2", "--json", "--out", "x.json"]);
    assert_eq!(code(&open), 1);
    assert_eq!(report(&open)["witnesses"][0]["kind"], "Closure");
}

#[test]
fn resonance_commands() {
    let ws = Workspace::new();
    let check = ws.run(&["resonance", "check", "so4.json", "se2.json", "decomp.json"]);
    assert_eq!(code(&check), 0);

    assert_eq!(
        code(&ws.run(&["resonance", "build", "so4.json", "se2.json", "decomp.json", "--out", "w.json"])),
        0
    );
    let w = formats::expanded_from_json(&ws.read("w.json"), &gen_se(2)).unwrap();
    assert_eq!(w.algebra().dim(), 15);
    assert_eq!(code(&ws.run(&["check-gji", "w.json"])), 0);

    assert_eq!(
        code(&ws.run(&["resonance", "reduce", "so4.json", "se2.json", "decomp.json", "--out", "rr.json"])),
        0
    );
    let rr = formats::expanded_from_json(&ws.read("rr.json"), &gen_se(2)).unwrap();
    assert_eq!(rr.algebra().dim(), 9);

    let search = ws.run(&["resonance", "search", "so4.json", "se2.json", "decomp.json", "--out", "found.json"]);
    assert_eq!(code(&search), 0);
    let found: Value = serde_json::from_str(&ws.read("found.json")).unwrap();
    assert_eq!(found["complete"], true);
    let wanted = serde_json::json!({"0": [0, 2, 3], "1": [1, 3]});
    assert!(found["decompositions"].as_array().unwrap().iter().any(|d| d["subsets"] == wanted));

    ws.write(
        "bad-decomp.json",
        r#"{"subspaces": {"0": [0, 1, 2], "1": [3, 4, 5]}, "subsets": {"0": [0, 2, 3], "1": [1]}}"#,
    );
    let bad = ws.run(&["resonance", "check", "so4.json", "se2.json", "bad-decomp.json", "--json"]);
    assert_eq!(code(&bad), 1);
    let r = report(&bad);
    assert!(r["witnesses"].as_array().unwrap().iter().any(|w| w["product"] == "l3" && w["missing_from"] == "1"));

    ws.write(
        "bad-hat.json",
        r#"{"subspaces": {"0": [0, 1, 2], "1": [3, 4, 5]},
            "subsets": {"0": [0, 2, 3], "1": [1, 3]}, "hat": {"0": [0]}}"#,
    );
    assert_eq!(code(&ws.run(&["resonance", "reduce", "so4.json", "se2.json", "bad-hat.json"])), 1);

    ws.write(
        "narrow.json",
        r#"{"subspaces": {"0": [0, 1, 2], "1": [3, 4, 5]},
            "closure": [{"parts": ["0", "0"], "targets": ["0"]}]}"#,
    );
    assert_eq!(code(&ws.run(&["resonance", "search", "so4.json", "se2.json", "narrow.json"])), 2);
}

#[test]
fn outputs_are_deterministic() {
    let ws = Workspace::new();
    for _ in 0..2 {
        assert_eq!(code(&ws.run(&["expand", "so4.json", "se2.json", "--out", "a.json"])), 0);
        let first = ws.read("a.json");
        assert_eq!(code(&ws.run(&["expand", "so4.json", "se2.json", "--out", "a.json"])), 0);
        assert_eq!(first, ws.read("a.json"));
    }
    let strip = |o: &Output| {
        let mut r = report(o);
        r["stats"]["wall_time_ms"] = Value::Null;
        r
    };
    let a = ws.run(&["check-gji", "a.json", "--json"]);
    let b = ws.run(&["check-gji", "a.json", "--json"]);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn usage_errors_exit_two() {
    let ws = Workspace::new();
    assert_eq!(code(&ws.run(&[])), 2);
    assert_eq!(code(&ws.run(&["nonsense"])), 2);
    assert_eq!(code(&ws.run(&["verify-identity", "gl2.json"])), 2);
    assert_eq!(code(&ws.run(&["--help"])), 0);
}
