use std::path::Path;
use std::process::{Command, Output};

fn hypext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypext")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stat(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn render_writes_p5() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("j.pgm");
    let run = hypext(&[
        "render", "--c", "-1", "--window", "-2,2,0,1.5", "--size", "512x384", "--max-iter", "100", "--out",
        path_str(&out),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let bytes = std::fs::read(&out).unwrap();
    let header = b"P5\n512 384\n255\n";
    assert!(bytes.starts_with(header));
    assert_eq!(bytes.len(), header.len() + 512 * 384);
    assert!(stdout(&run).contains("interior_fraction="));
}

#[test]
fn render_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.pgm"), dir.path().join("b.pgm"));
    for p in [&a, &b] {
        let run = hypext(&["render", "--map", "quad:c=-0.75", "--size", "128x64", "--out", path_str(p)]);
        assert!(run.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn half_disk_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("disk.pgm");
    let run = hypext(&["render", "--c", "0", "--out", path_str(&out)]);
    assert!(run.status.success());
    let fraction = stat(&stdout(&run), "interior_fraction");
    assert!((fraction - 0.349).abs() <= 0.01, "{fraction}");
}

#[test]
fn render_csv_and_volume() {
    let dir = tempfile::tempdir().unwrap();
    let slice = dir.path().join("s.csv");
    let run = hypext(&["render", "--c", "-1", "--size", "8x4", "--format", "csv", "--out", path_str(&slice)]);
    assert!(run.status.success());
    let text = std::fs::read_to_string(&slice).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,t,count"));
    assert_eq!(text.lines().count(), 1 + 8 * 4);

    let volume = dir.path().join("v.csv");
    let run = hypext(&[
        "render", "--c", "-1", "--size", "6x5", "--volume", "-0.5,0.5,3", "--format", "csv", "--out",
        path_str(&volume),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let text = std::fs::read_to_string(&volume).unwrap();
    assert_eq!(text.lines().count(), 1 + 6 * 5 * 3);

    let bad = hypext(&["render", "--c", "-1", "--volume", "-0.5,0.5,3", "--out", path_str(&volume)]);
    assert!(!bad.status.success());
}

#[test]
fn invalid_flags_fail_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.pgm");
    for args in [
        vec!["--c", "-1", "--window", "2,-2,0,1"],
        vec!["--c", "-1", "--size", "0x10"],
        vec!["--c", "-1", "--max-iter", "0"],
        vec!["--c", "-1", "--escape-radius", "1"],
        vec!["--c", "1+i"],
        vec!["--map", "rat:num=1;den=0,1"],
    ] {
        let mut full = vec!["render"];
        full.extend(args.iter().copied());
        full.extend(["--out", path_str(&out)]);
        let run = hypext(&full);
        assert!(!run.status.success(), "{args:?}");
        assert!(!run.stderr.is_empty());
        assert!(!out.exists(), "{args:?}");
    }
}

#[test]
fn eval_examples() {
    let run = hypext(&["eval", "--method", "star-square", "--map", "quad:c=0", "--point", "0,0,2"]);
    assert_eq!(stdout(&run).trim(), "0 0 4");
    let run = hypext(&["eval", "--method", "radial", "--map", "rat:num=0,0,1;den=1", "--point", "0,0.5,0"]);
    assert_eq!(stdout(&run).trim(), "-0.5 0 0");
    // A single Möbius factor: the product extension is the Poincaré extension.
    let run = hypext(&["eval", "--method", "product", "--map", "rat:num=0,1;den=1,1", "--point", "0,0,1"]);
    let v: Vec<f64> = stdout(&run).split_whitespace().map(|s| s.parse().unwrap()).collect();
    let expect = [0.5, 0.0, 0.5];
    assert!(v.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-14), "{v:?}");
}

#[test]
fn eval_reports_inadmissible_pairs() {
    let run = hypext(&["eval", "--method", "star-square", "--map", "rat:num=0,0,0,1;den=1", "--point", "0,0,1"]);
    assert!(!run.status.success());
    assert!(String::from_utf8_lossy(&run.stderr).contains("star-square"));
    let run = hypext(&["eval", "--method", "radial", "--map", "quad:c=0", "--point", "1,1,1"]);
    assert!(!run.status.success());
}

#[test]
fn compare_statistics() {
    let run = hypext(&["compare", "--methods", "product,product", "--map", "quad:c=-1", "--samples", "20"]);
    assert_eq!(stat(&stdout(&run), "max_distance"), 0.0);
    let run = hypext(&["compare", "--methods", "product,star-square", "--map", "quad:c=0"]);
    assert!(stat(&stdout(&run), "max_distance") <= 1e-10);
    let args = ["compare", "--methods", "open-book,product", "--map", "bls:theta=0;zeros=0.5,-0.25+0.5i", "--seed", "3"];
    let first = stdout(&hypext(&args));
    let d = stat(&first, "max_distance");
    assert!(d > 0.0 && d.is_finite());
    assert_eq!(first, stdout(&hypext(&args)));
}

#[test]
fn factor_lines() {
    let run = hypext(&["factor", "--map", "rat:num=-1,0,1;den=0,1"]);
    let text = stdout(&run);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "{text}");
    assert!(lines[0].contains("zero=-1 pole=0"), "{text}");
    assert!(lines[1].contains("zero=1 pole=inf"), "{text}");
    assert!(lines[2].starts_with("pairing="));

    let run = hypext(&["factor", "--map", "rat:num=-1,0,1;den=0,1", "--enumerate", "1"]);
    assert_eq!(stdout(&run).matches("# factorization").count(), 1);
    let run = hypext(&["factor", "--map", "rat:num=-1,0,1;den=0,1", "--enumerate", "10"]);
    let count = stdout(&run).matches("# factorization").count();
    assert!((2..=10).contains(&count), "{count}");

    let run = hypext(&["factor", "--map", "rat:num=0,1,1;den=0,1"]);
    assert!(!run.status.success());
}
