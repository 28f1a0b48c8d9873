use std::path::PathBuf;
use std::process::{Command, Output};

fn topodyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topodyn")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("topodyn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn header<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(topodyn(&["--help"]).status.code(), Some(0));
    assert_eq!(topodyn(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(topodyn(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(topodyn(&["trace", "cat-map"]).status.code(), Some(3));
    let o = topodyn(&["decompose", "no-such-system"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown system"));
    assert_eq!(topodyn(&["decompose", "diag"]).status.code(), Some(3));
    assert_eq!(topodyn(&["demo", "nope"]).status.code(), Some(3));
}

#[test]
fn catalog_lists_systems() {
    let o = topodyn(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["cat-map", "full-2-shift", "north-south"] {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn demos_pass() {
    for name in ["sec5", "ex23"] {
        let o = topodyn(&["demo", name]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert_eq!(header(&stdout(&o), "verdict"), Some("pass"));
    }
}

#[test]
fn two_block_shift_has_two_basic_sets() {
    let o = topodyn(&["decompose", "sft-2block"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(header(&stdout(&o), "basic_sets"), Some("2"));
    let o = topodyn(&["decompose", "sft:110,011,101"]);
    assert_eq!(header(&stdout(&o), "basic_sets"), Some("1"));
}

#[test]
fn saved_pseudo_orbit_traces_identically() {
    let po = scratch("cat.po");
    let a = topodyn(&["trace", "cat-map", "--delta", "1e-3", "--length", "40", "--seed", "7", "--save", po.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    let b = topodyn(&["trace", "cat-map", "--from", po.to_str().unwrap()]);
    assert_eq!(b.status.code(), Some(0));
    let (a, b) = (stdout(&a), stdout(&b));
    for key in ["delta", "seed", "defect_bound", "error_bound", "anchor"] {
        assert_eq!(header(&a, key), header(&b, key), "{key}");
    }
}

#[test]
fn out_writes_the_report_atomically() {
    let path = scratch("report.txt");
    let o = topodyn(&["trace", "full-2-shift", "--delta", "0.1", "--length", "20", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("wrote "));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(header(&text, "report"), Some("trace"));
    assert_eq!(header(&text, "verdict"), Some("pass"));
}

#[test]
fn chain_recurrent_exit_code_follows_verdict() {
    let o = topodyn(&["chain-recurrent", "permutation-3cycles", "--radius", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(header(&stdout(&o), "components"), Some("3"));
    let o = topodyn(&["chain-recurrent", "golden-mean", "--resolution", "6", "--radius", "0.3", "--steps", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(header(&stdout(&o), "verdict"), Some("resolution-limited"));
}

#[test]
fn adjacency_file_lists_every_node() {
    let path = scratch("adj.txt");
    let o = topodyn(&["chain-recurrent", "perm:1,0,2", "--radius", "0.5", "--adjacency", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn shift_recoding_is_stable() {
    let o = topodyn(&["stability", "full-2-shift", "--epsilon", "0.01", "--samples", "40"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(header(&stdout(&o), "mismatches"), Some("0"));
}
