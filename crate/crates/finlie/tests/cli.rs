use std::fs::File;
use std::io::BufReader;
use std::process::Command;

use finlie::pointset::read_pointset;
use serde_json::Value;

fn finlie(args: &[&str]) -> (i32, Vec<Value>) {
    let out = Command::new(env!("CARGO_BIN_EXE_finlie"))
        .args(args)
        .env_remove("FINLIE_BUDGET")
        .output()
        .unwrap();
    let lines = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (out.status.code().unwrap(), lines)
}

/// Records between the config header and the timing footer.
fn body(lines: &[Value]) -> &[Value] {
    assert!(lines[0].get("config").is_some());
    assert!(lines.last().unwrap().get("timing").is_some());
    &lines[1..lines.len() - 1]
}

#[test]
fn order_sl2_z4() {
    let (st, lines) = finlie(&["order", "--preset", "sl2", "--p", "2", "--r", "2", "--n", "1", "--enumerate"]);
    assert_eq!(st, 0);
    let b = body(&lines);
    assert_eq!(b[0]["order"], 48);
    assert_eq!(b[0]["mode"], "formula");
    assert_eq!(b[1]["order"], 48);
    assert_eq!(b[1]["mode"], "exhaustive");
}

#[test]
fn bruhat_worked_example() {
    let (st, lines) = finlie(&["decompose", "--mode", "bruhat", "--element", "[[2,1],[3,0]]"]);
    assert_eq!(st, 0);
    let b = body(&lines);
    assert_eq!(b[0]["w"], "s1");
    let factors = b[1]["factors"].as_array().unwrap();
    let id = serde_json::json!([[[1], [0]], [[0], [1]]]);
    assert_eq!(factors[0]["tag"], "U");
    assert_eq!(factors[0]["elem"], serde_json::json!([[[1], [2]], [[0], [1]]]));
    for f in &factors[2..] {
        assert_eq!(f["elem"], id, "{f}");
    }
}

#[test]
fn inner_product_regular_split() {
    let args = ["inner-product", "--theta", "reg", "--theta-prime", "reg", "--w-twist", "id", "--w-twist-prime", "id"];
    let (st, lines) = finlie(&args);
    assert_eq!(st, 0);
    let rec = &body(&lines)[0];
    assert_eq!(rec["count"], 2);
    let ws: Vec<&str> = rec["witnesses"].as_array().unwrap().iter().map(|w| w["w"].as_str().unwrap()).collect();
    assert_eq!(ws, ["id", "s1"]);
    let (st, lines) = finlie(&["inner-product", "--theta", "reg", "--theta-prime", "triv", "--override"]);
    assert_eq!(st, 0);
    assert_eq!(body(&lines)[0]["count"], 0);
    let (st, _) = finlie(&["inner-product", "--theta", "triv", "--theta-prime", "triv"]);
    assert_eq!(st, 2);
}

#[test]
fn regular_characters() {
    let (st, lines) = finlie(&["chars", "--regular"]);
    assert_eq!(st, 0);
    let b = body(&lines);
    assert_eq!(b.len(), 1);
    assert_eq!(b[0]["certificate_m"], 1);
    let (_, all) = finlie(&["chars"]);
    assert_eq!(body(&all).len(), 2);
}

#[test]
fn output_is_reproducible() {
    let args = ["tori", "--preset", "gl2"];
    let (_, a) = finlie(&args);
    let (_, b) = finlie(&args);
    assert_eq!(body(&a), body(&b));
    assert_eq!(a[0], b[0]);
}

#[test]
fn exit_statuses() {
    assert_eq!(finlie(&["no-such-command"]).0, 2);
    assert_eq!(finlie(&["order", "--kind", "adic"]).0, 2);
    assert_eq!(finlie(&["decompose", "--mode", "iwahori", "--element", "[[1,1],[1,1]]"]).0, 2);
    let (st, lines) = finlie(&["--budget", "10", "order", "--enumerate"]);
    assert_eq!(st, 3);
    assert_eq!(body(&lines).last().unwrap()["status"], 3);
    let out = Command::new(env!("CARGO_BIN_EXE_finlie"))
        .args(["order", "--enumerate"])
        .env("FINLIE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_reports() {
    let (st, lines) = finlie(&["verify", "--suite", "filtration"]);
    assert_eq!(st, 0);
    assert_eq!(body(&lines)[0]["outcome"], "pass");
    assert_eq!(body(&lines)[0]["mode"], "exhaustive");
    let (st, lines) = finlie(&["--r", "3", "verify", "--suite", "rank1-literal"]);
    assert_eq!(st, 1);
    let rec = &body(&lines)[0];
    assert_eq!(rec["outcome"], "fail");
    assert!(rec["witness"].as_str().unwrap().contains("commutator"));
}

#[test]
fn sigma_point_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sigma.txt");
    let (st, lines) = finlie(&["sigma", "--out", path.to_str().unwrap()]);
    assert_eq!(st, 0);
    let rec = &body(&lines)[0];
    let (header, points) = read_pointset(BufReader::new(File::open(&path).unwrap())).unwrap();
    assert_eq!(rec["sigma"], points.len());
    assert_eq!(header.level, 1);
    assert_eq!(header.group.preset, "sl2");
    let cells: u64 = rec["cells"].as_array().unwrap().iter().map(|c| c["count"].as_u64().unwrap()).sum();
    assert_eq!(cells as usize, points.len());
}
