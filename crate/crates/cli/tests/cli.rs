use std::process::Command;

fn oreset() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oreset"))
}

fn tmp(name: &str) -> std::path::PathBuf {
    let d = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn sl2_uw_run_writes_report_and_poset() {
    let report = tmp("a1_uw.json");
    let out = oreset()
        .args(["verify", "uw", "--type", "A1", "--word", "1", "--all-pairs", "--cutoff", "4", "--report"])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().any(|l| l.split_whitespace().eq(["separation", "pass"])), "{stdout}");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["verdict"], "delegated");
    assert_eq!(json["checks"]["separation"], "pass");
    let dot = std::fs::read_to_string(tmp("a1_uw.poset.dot")).unwrap();
    assert!(dot.starts_with("digraph hprimes_uw"));
    assert!(tmp("a1_uw.poset.json").exists());
}

#[test]
fn config_file_matches_flags() {
    let cfg = tmp("a1_rqg.conf");
    std::fs::write(&cfg, "# SL2, one pair\ntype = A1\ntarget = rqg\npairs = e,e:s1,e\nskew = false\n").unwrap();
    let report = tmp("a1_rqg.json");
    let out = oreset().arg("run").arg(&cfg).arg("--report").arg(&report).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let flags = tmp("a1_rqg_flags.json");
    let out = oreset()
        .args(["verify", "rqg", "--type", "a1", "--pair", "e,e:s1,e", "--no-skew", "--report"])
        .arg(&flags)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let strip = |p: &std::path::Path| {
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    assert_eq!(strip(&report), strip(&flags));
}

#[test]
fn bad_input_exits_with_config_code() {
    let out = oreset().args(["verify", "uw", "--type", "A2", "--word", "1,1", "--all-pairs"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not reduced"));
    let out = oreset().args(["verify", "rqg", "--type", "A2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = oreset().args(["verify", "rqg", "--cartan", "2,-1;-1,2", "--pair", "e,e:s3,e"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
