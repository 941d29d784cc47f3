use std::io::Write;
use std::process::{Command, Output};

fn symcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn exact(args: &[&str]) -> String {
    let o = symcap(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let line = stdout(&o);
    line.split_whitespace().next().unwrap().strip_prefix("exact=").unwrap().to_owned()
}

#[test]
fn compute_examples() {
    assert_eq!(exact(&["compute", "-r", "E(1,4)", "-c", "eh:5"]), "4");
    assert_eq!(exact(&["compute", "-r", "B4(1)", "-c", "gromov"]), "1");
    assert_eq!(exact(&["compute", "-r", "B4(4)xE(3,8)", "-c", "eh:3"]), "7");
    assert_eq!(exact(&["compute", "-r", "E(1/4,1)", "-c", "amean(1/2*gromov, 1/2*neh:2)"]), "3/8");
    let o = symcap(&["compute", "-r", "E(1,4)", "-c", "eh:5"]);
    assert_eq!(stdout(&o).trim(), "exact=4 approx=4.000000000000");
}

#[test]
fn exit_codes() {
    assert_eq!(symcap(&["compute", "-r", "E(1,", "-c", "vol"]).status.code(), Some(2));
    assert_eq!(symcap(&["compute", "-r", "E(1,2)", "-c", "bogus"]).status.code(), Some(2));
    assert_eq!(symcap(&["compute", "-r", "B4(1)+B4(2)", "-c", "eh:2"]).status.code(), Some(3));
    assert_eq!(symcap(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(symcap(&["verify", "nope:3"]).status.code(), Some(2));
    assert_eq!(symcap(&["plotdata", "fi9"]).status.code(), Some(2));
}

#[test]
fn tables() {
    let o = symcap(&["table", "-r", "E(1,4)", "-c", "eh:1..6"]);
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["capacity", "exact", "approx"]);
    let values: Vec<String> = rdr.records().map(|r| r.unwrap()[1].to_owned()).collect();
    assert_eq!(values, ["1", "2", "3", "4", "4", "5"]);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = symcap(&["table", "-r", "P(1,1)", "-c", "vol;neh:6", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("vol,2^(1/2),1.414213562373"), "{text}");
    assert!(text.contains("neh:6,2,"), "{text}");

    let o = symcap(&["table", "-r", "B6(1)", "-c", "neh:1..9"]);
    let text = stdout(&o);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(1) == Some("1")), "{text}");
}

#[test]
fn verify_reports_are_json() {
    for (target, code) in [("limell", 0), ("xk:20", 0), ("ex333:2", 0), ("chekanov", 0), ("cor2ml:2,5", 0), ("lipschitz:7", 0), ("pol:7", 0), ("xk2:12", 0)] {
        let o = symcap(&["verify", target]);
        assert_eq!(o.status.code(), Some(code), "{target}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["verdict"], "pass", "{target}");
        for key in ["checker", "params", "cases", "failures"] {
            assert!(v.get(key).is_some(), "{target} lacks {key}");
        }
    }
}

fn spectrum_file(lines: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(lines.as_bytes()).unwrap();
    f
}

#[test]
fn reconstruct_examples() {
    let e12 = spectrum_file("# E(1,2)\n1\n2\n2\n3\n4\n4\n5\n6\n6\n7\n8\n8\n");
    let run = |f: &tempfile::NamedTempFile, extra: &[&str]| {
        let mut args = vec!["reconstruct", f.path().to_str().unwrap()];
        args.extend_from_slice(extra);
        symcap(&args)
    };
    assert_eq!(stdout(&run(&e12, &["-n", "2"])).trim(), "1, 2");
    let ball = spectrum_file("1\n1\n1\n2\n2\n2\n3\n3\n3\n");
    assert_eq!(stdout(&run(&ball, &["-n", "3"])).trim(), "1, 1, 1");
    let damaged = spectrum_file("2\n2\n3\n4\n4\n5\n6\n6\n7\n8\n8\n");
    assert_eq!(stdout(&run(&damaged, &["-n", "2", "--n0", "1"])).trim(), "1, 2");
    assert_eq!(run(&spectrum_file("1\n2\n"), &["-n", "2"]).status.code(), Some(4));
    assert_eq!(run(&spectrum_file("1\nx\n"), &["-n", "2"]).status.code(), Some(2));
    assert_eq!(run(&spectrum_file("2\n1\n"), &["-n", "2"]).status.code(), Some(2));
    let tagged = spectrum_file("1\n3/2*u1\n2\n3*u1\n3\n9/2*u1\n4\n6*u1\n5\n");
    assert_eq!(stdout(&run(&tagged, &["-n", "2"])).trim(), "1, 3/2*u1");
}

#[test]
fn plot_files() {
    let o = symcap(&["plotdata", "fi2", "--samples", "20"]);
    let text = stdout(&o);
    let rows: Vec<Vec<String>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    assert!(rows.iter().any(|r| r[1] == "2/5") && rows.iter().any(|r| r[2] == "2/5"));
    assert!(rows.iter().any(|r| r[1].is_empty()) && rows.iter().any(|r| r[2].is_empty()));
    assert_eq!(symcap(&["plotdata", "fi1", "--samples", "1"]).status.code(), Some(2));
}
