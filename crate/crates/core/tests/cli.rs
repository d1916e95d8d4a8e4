use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mdsc::catalog;
use mdsc::code_model::io::write_code;

fn mdsc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdsc")).args(args).arg("--out").arg(dir).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = mdsc(dir, args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

#[test]
fn grade_from_descriptor() {
    let tmp = tempfile::tempdir().unwrap();
    let code = catalog::md_code_1();
    let desc = write_code(&tmp.path().join("md1"), &code.params, &code.triple).unwrap();
    let mut d: serde_json::Value = serde_json::from_str(&fs::read_to_string(&desc).unwrap()).unwrap();
    d["pstar"] = serde_json::json!([0.5, 0.5]);
    fs::write(&desc, d.to_string()).unwrap();
    let out = tmp.path().join("g");
    ok(&out, &["grade", "--target", "cycle6", "--params", desc.to_str().unwrap(), "--seed", "1"]);
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("P.json")).unwrap()).unwrap();
    for (row, want) in r["P"].as_array().unwrap().iter().zip(&code.probability) {
        for (v, w) in row.as_array().unwrap().iter().zip(want) {
            assert!((v.as_f64().unwrap() - w).abs() < 0.02);
        }
    }
    assert!(fs::read_to_string(out.join("trace.csv")).unwrap().starts_with("iteration,objective,density\n"));

    let o = mdsc(&tmp.path().join("bad"), &["grade", "--catalog", "md1"]);
    assert_eq!(o.status.code(), Some(2));

    let z = tmp.path().join("z");
    ok(&z, &["grade", "--catalog", "md1", "--pstar", "0.5,0.5", "--tmax", "0"]);
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(z.join("P.json")).unwrap()).unwrap();
    assert_eq!(r["P"], serde_json::json!([[0.5, 0.0, 0.0], [0.5, 0.0, 0.0]]));
}

#[test]
fn count_and_forecast() {
    let tmp = tempfile::tempdir().unwrap();
    let s = ok(tmp.path(), &["count", "--catalog", "md2", "--kinds", "cycle8"]);
    assert_eq!(s, "cycle8,206356\n");
    for name in ["md1", "md2", "md6", "md7"] {
        assert_eq!(ok(tmp.path(), &["count", "--catalog", name, "--kinds", "cycle4"]), "cycle4,0\n");
    }
    assert!(!mdsc(tmp.path(), &["count", "--catalog", "md1", "--kinds", ""]).status.success());
    assert!(!mdsc(tmp.path(), &["count", "--catalog", "md1"]).status.success());

    ok(tmp.path(), &["forecast", "--catalog", "md1", "--len", "6"]);
    let f: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("forecast.json")).unwrap()).unwrap();
    for (key, want) in [("estimate", 49_782.0), ("lower", 47_162.0), ("upper", 52_402.0)] {
        assert!((f[key].as_f64().unwrap() / want - 1.0).abs() < 0.01, "{key}");
    }
}

#[test]
fn build_exports() {
    let tmp = tempfile::tempdir().unwrap();
    ok(tmp.path(), &["build", "--catalog", "md7", "--export", "alist"]);
    let a = fs::read_to_string(tmp.path().join("H.alist")).unwrap();
    assert_eq!(a.lines().next().unwrap().split_whitespace().collect::<Vec<_>>(), ["3250", "1300"]);
    let t = tmp.path().join("t");
    ok(&t, &["build", "--catalog", "md7", "--export", "text"]);
    let desc = t.join("code.json");
    assert_eq!(
        ok(&t, &["count", "--code", desc.to_str().unwrap(), "--kinds", "cfg66,cfg68"]),
        "cfg66,0\ncfg68,11775\n"
    );
}

#[test]
fn mcmc_enumerates_then_reuses_cache_and_replays() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let args = ["mcmc", "--catalog", "md1", "--kinds", "cycle6", "--max-iters", "500", "--seed", "7"];
    ok(&a, &args);
    assert!(a.join("objects.bin").exists());
    let first = fs::read_to_string(a.join("Mr.txt")).unwrap();
    ok(&a, &args);
    assert_eq!(fs::read_to_string(a.join("Mr.txt")).unwrap(), first);

    let b = tmp.path().join("b");
    ok(&b, &["replay", a.join("manifest.json").to_str().unwrap()]);
    for f in ["Mr.txt", "init_Mr.txt", "mcmc_trace.csv", "mcmc.json", "manifest.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("mcmc.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 8);
    assert!(report["best_value"].as_f64().unwrap() <= report["initial_value"].as_f64().unwrap());
}

#[test]
fn census_and_fer_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    ok(tmp.path(), &["census", "--config", "8-8"]);
    let c = fs::read_to_string(tmp.path().join("census.csv")).unwrap();
    assert!(c.lines().any(|l| l == "cfg88,14,6,4,120960"));

    let f = tmp.path().join("f");
    ok(&f, &["fer", "--catalog", "md7", "--snr", "2.0", "--frames", "50", "--seed", "3"]);
    let g = tmp.path().join("g");
    ok(&g, &["replay", f.join("manifest.json").to_str().unwrap()]);
    assert_eq!(fs::read(f.join("fer.csv")).unwrap(), fs::read(g.join("fer.csv")).unwrap());
}
