use std::process::Command;

fn korb() -> Command {
    Command::new(env!("CARGO_BIN_EXE_korb"))
}

fn group_file(name: &str, text: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("korb-bin-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    let p = d.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn binary_exit_codes() {
    let s4 = group_file("s4.grp", "degree 4\n(1 2 3 4)\n(1 2)\n");
    let ok = korb().args(["orbits", "-k", "2", "--group"]).arg(&s4).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("12 tuples"));
    let starved = korb().env("KORB_BUDGET", "10").args(["orbits", "-k", "3", "--group"]).arg(&s4).output().unwrap();
    assert_eq!(starved.status.code(), Some(3));
    let bad = group_file("bad.grp", "degree 2\n(1 3)\n");
    let out = korb().args(["orbits", "-k", "1", "--group"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(korb().arg("frobnicate").output().unwrap().status.code(), Some(2));
    assert_eq!(korb().arg("--help").output().unwrap().status.code(), Some(0));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = ["lemmas", "--suite", "all", "--max-degree", "5", "--samples", "2", "--seed", "7", "--format", "json"];
    let a = korb().args(args).args(["--jobs", "1"]).output().unwrap();
    let b = korb().args(args).args(["--jobs", "2"]).output().unwrap();
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).lines().all(|l| l.starts_with("{\"schema\":1,")));
}
