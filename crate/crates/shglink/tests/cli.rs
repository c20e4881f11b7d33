use std::path::Path;
use std::process::{Command, Output};

fn shglink(args: &[&str], env_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_shglink"));
    cmd.args(args).env_remove("SHGLINK_CONFIG_DIR");
    if let Some(dir) = env_dir {
        cmd.env("SHGLINK_CONFIG_DIR", dir);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn stability_report() {
    let o = shglink(&["stability"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "3.00000000e0");
    assert_eq!(row[2], "1.20000000e1");
    assert_eq!(row[7], "true");
}

#[test]
fn unstable_geometry_exits_with_warning_status() {
    let o = shglink(&["--set", "d=12.5 m", "link"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains(",false,"));
    assert_eq!(shglink(&["--set", "d=12.5 m", "stability"], None).status.code(), Some(2));
}

#[test]
fn usage_and_config_errors_exit_one() {
    for args in [
        &["bogus"][..],
        &["--set", "f=3", "link"],
        &["--set", "nonsense=1 m", "link"],
        &["--set", "l=2 cm", "link"],
        &["fig", "fig9"],
        &["sweep", "--var", "d", "--start", "5", "--stop", "1", "--count", "4"],
        &["sweep", "--var", "d", "--start", "1", "--stop", "5", "--count", "1"],
        &["--config", "/nonexistent/shglink.conf", "link"],
    ] {
        let o = shglink(args, None);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn out_file_and_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("link.jsonl");
    let o = shglink(&["--format", "jsonl", "--out", path.to_str().unwrap(), "link"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["stable"], serde_json::Value::Bool(true));
    assert!(first["P_r_W"].as_f64().unwrap() > 0.0);
}

#[test]
fn config_file_from_env_dir_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("shglink.conf"), "d = 8 m\np_in = 43 W\n").unwrap();
    let via_env = stdout(&shglink(&["link"], Some(dir.path())));
    assert!(via_env.lines().nth(1).unwrap().starts_with("4.30000000e1,8.00000000e0,true"));
    let explicit = dir.path().join("shglink.conf");
    let via_flag = stdout(&shglink(&["--config", explicit.to_str().unwrap(), "link"], None));
    assert_eq!(via_env, via_flag);
    // --set wins over the file.
    let o = stdout(&shglink(&["--set", "d=2m", "link"], Some(dir.path())));
    assert!(o.lines().nth(1).unwrap().starts_with("4.30000000e1,2.00000000e0"));
}

#[test]
fn dumped_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let dump = stdout(&shglink(&["--set", "alpha_air=2e-4 1/m", "config"], None));
    std::fs::write(dir.path().join("shglink.conf"), &dump).unwrap();
    assert_eq!(stdout(&shglink(&["config"], Some(dir.path()))), dump);
}

#[test]
fn sweep_output_independent_of_threads() {
    let run = |t: &str| stdout(&shglink(&["--threads", t, "sweep", "--var", "p_in", "--start", "0 W", "--stop", "120 W", "--count", "97"], None));
    let one = run("1");
    assert_eq!(one.lines().count(), 1 + 97 + 3);
    assert_eq!(one, run("2"));
    assert_eq!(one, run("8"));
}

#[test]
fn figures_emit_headers() {
    let expect = [
        ("fig5", "z_m,w_m,w00_m"),
        ("fig6", "d_m,w_M1_m,w_L1_m,w_L2_m,w_M2_m,warnings"),
        ("fig7", "d_m,P_in_W,P_r_W,spectral_eff_bpsHz,warnings"),
        ("fig8", "P_in_W,d_m,stable,P_r_W,spectral_eff_bpsHz,warnings"),
    ];
    for (name, header) in expect {
        let o = shglink(&["fig", name], None);
        assert!(matches!(o.status.code(), Some(0 | 2)), "{name}");
        assert_eq!(stdout(&o).lines().next().unwrap(), header);
    }
}
