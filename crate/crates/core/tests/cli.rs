use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tannaka-forge"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn code(cmd: &mut Command) -> i32 {
    cmd.output().expect("runs").status.code().expect("exit code")
}

#[test]
fn exit_codes() {
    assert_eq!(code(bin().arg("coend").arg(data("two_lines.txt"))), 0);
    assert_eq!(code(bin().arg("reconstruct").arg(data("grouplike.txt"))), 0);
    assert_eq!(code(bin().arg("reconstruct").arg(data("comatrix2.txt"))), 0);
    assert_eq!(code(bin().arg("recognize").arg(data("one_way.txt"))), 1);
    assert_eq!(code(bin().arg("coend").arg(data("z4_filtered.txt"))), 1);
    assert_eq!(code(bin().args(["mf", "demo", "--p", "2", "--n", "1", "--f", "1", "--objects", "M(0),M(1),M(0)+M(1)"])), 0);
    assert_eq!(code(bin().args(["mf", "demo", "--p", "4", "--n", "1", "--f", "1", "--objects", "M(0)"])), 3);
    assert_eq!(code(bin().args(["mf", "demo", "--p", "2", "--n", "1", "--f", "1", "--objects", "N(0)"])), 3);
    assert_eq!(code(bin().arg("coend").arg(data("missing.txt"))), 3);
    assert_eq!(code(bin().arg("frobnicate")), 3);
}

#[test]
fn parse_errors_exit_3_with_position() {
    let dir = std::env::temp_dir().join(format!("tf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.txt");
    std::fs::write(&path, "ring GR(2^1,1)\nobject A rank 1\nhom A C = [[1]]\n").unwrap();
    let out = bin().arg("coend").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3:1"));
}

#[test]
fn small_budget_is_inconclusive() {
    let out = bin().args(["--budget", "1", "recognize"]).arg(data("full_endo_gr42.txt")).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("INCONCLUSIVE"), "{text}");
    assert_ne!(out.status.code(), Some(0));
    let demo = ["--budget", "1", "mf", "demo", "--p", "2", "--n", "1", "--f", "1", "--objects", "M(0)"];
    assert_eq!(code(bin().args(demo)), 2);
}

#[test]
fn json_report_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("tf-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut digests = Vec::new();
    for k in 0..2 {
        let path = dir.join(format!("r{k}.json"));
        assert_eq!(code(bin().arg("--json").arg(&path).arg("coend").arg(data("mf_tate.txt"))), 0);
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["exit_code"], 0);
        assert_eq!(v["sections"]["coend"]["flat"], true);
        digests.push(v["report_digest"].clone());
    }
    assert_eq!(digests[0], digests[1]);
}
