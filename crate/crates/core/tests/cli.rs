use std::process::{Command, Output};

use sixj::analysis::{read_records, OutputFormat, ScanRow};

fn sixj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sixj")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn exact_value() {
    let o = sixj(&["sixj", "--labels", "1,1,1,1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("+sqrt(1/36),1.6666666666666666e-1"));
    let o = sixj(&["sixj", "--labels", "1/2,1/2,1,1,1.5,1/2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("{\"labels\":\"1/2,1/2,1,1,3/2,1/2\""));
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["sixj", "--labels", "1,1,1,1,1,3"][..],
        &["sixj", "--labels", "1,1,1"],
        &["sixj", "--labels", "1,1,1,1,1,0.3"],
        &["scan", "--labels", "1,1,1,1,1,1", "--scales", "5..2"],
        &["fit-dl", "--labels", "1,1,1,1,1,1", "--scales", "8..40", "--window", "1"],
        &["sixj"],
    ] {
        assert_eq!(sixj(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn degenerate_geometry_exits_3() {
    for cmd in ["geom", "asympt", "recursion"] {
        let o = sixj(&[cmd, "--labels", "2,2,2,2,2,4"]);
        assert_eq!(o.status.code(), Some(3), "{cmd}");
    }
}

#[test]
fn scan_to_file_round_trips() {
    let dir = std::env::temp_dir().join(format!("sixj-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (format, name) in [("csv", "scan.csv"), ("json", "scan.jsonl")] {
        let path = dir.join(name);
        let o = sixj(&["scan", "--labels", "1,1,1,1,1,1", "--scales", "1..6,10", "--format", format, "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let rows: Vec<ScanRow> = read_records(format.parse().unwrap(), std::fs::File::open(&path).unwrap()).unwrap();
        assert_eq!(rows.iter().map(|r| r.scale).collect::<Vec<_>>(), [1, 2, 3, 4, 5, 6, 10]);
        let direct = sixj::analysis::scan_asymptotics(&rows[0].labels, &[1], Default::default()).unwrap();
        assert_eq!(rows[0], direct[0]);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fit_and_recursion() {
    let o = sixj(&["fit-dl", "--labels", "1,1,1,1,1,1", "--scales", "8..71", "--window", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("first_scale,last_scale,center,b0,b1,rms_residual"));
    let o = sixj(&["fit-dl", "--labels", "1,1,1,1,1,1", "--scales", "8..39", "--window", "16", "--rows", "--format", "json"]);
    let rows: Vec<ScanRow> = read_records(OutputFormat::Json, o.stdout.as_slice()).unwrap();
    assert!(rows.iter().all(|r| r.b0.is_some()));
    let o = sixj(&["recursion", "--labels", "4,4,4,4,4,4", "--normalization", "with-edge-factors"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(",384,"));
}

#[test]
fn verify_is_deterministic() {
    let a = sixj(&["verify", "--seed", "3", "--trials", "6"]);
    let b = sixj(&["verify", "--seed", "3", "--trials", "6"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let empty = sixj(&["verify", "--trials", "0"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty).trim(), "identity,samples,tolerance,worst,passed");
}
