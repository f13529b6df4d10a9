//! End-to-end runs through [`crate::execute`].

use serde_json::Value;

use crate::{execute, Outcome};

fn run(args: &[&str]) -> Outcome {
    execute(std::iter::once("kleinian").chain(args.iter().copied()), None)
}

fn run_with_threads(threads: &str, args: &[&str]) -> Outcome {
    execute(std::iter::once("kleinian").chain(args.iter().copied()), Some(threads))
}

fn stdout(o: &Outcome) -> String {
    o.stdout.clone()
}

fn json(o: &Outcome) -> Value {
    assert_eq!(o.code, 0, "stderr: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

#[test]
fn word_poly_specializes() {
    let o = run(&["word", "poly", "--word", "abA", "--beta", "-3"]);
    assert_eq!(o.code, 0);
    assert!(stdout(&o).contains("z^2 + 3z"), "{}", stdout(&o));
    let j = json(&run(&["word", "poly", "--word", "abA", "--beta", "-3", "--json"]));
    assert_eq!(j["specialized"]["coefficients"], serde_json::json!([0, 3, 1]));
}

#[test]
fn every_subcommand_has_versioned_json() {
    let cases: &[&[&str]] = &[
        &["params", "show", "--gamma", "-1.5+0.60666i", "--beta", "-3"],
        &["params", "pair", "--f", "1;1;0;1", "--g", "1;0;-2;1"],
        &["word", "list"],
        &["word", "eval", "--word", "abABa", "--gamma", "0.3+0.2i", "--beta", "-1+0.5i"],
        &["word", "compose", "--outer", "abA", "--inner", "abABa"],
        &["slice", "point", "--beta", "0", "--gamma", "0.5i"],
        &["margulis", "ideal", "--orders", "3,3,3"],
        &["margulis", "triangle", "--orders", "2,3,7", "--angles", "pi/2,pi/7,pi/3"],
        &["margulis", "two22", "--angles", "pi/2,pi/3,pi/7"],
        &["arith", "check", "--poly", "z^4 + 6z^3 + 12z^2 + 9z + 1", "--beta", "-3"],
        &["arith", "discriminant", "--poly", "z^4 + 5z^3 + 7z^2 + 3z + 1", "--fundamental", "-283"],
        &["arith", "schur", "--r", "4"],
        &["arith", "enumerate", "--beta", "-3", "--degree", "2"],
        &["volume", "tube", "--p", "7", "--tau", "0.5", "--r", "0.3"],
        &["volume", "ball", "--r", "1.413", "--order", "60"],
        &["volume", "kill", "--tau", "0.3", "--theta", "1.0", "--p", "2"],
        &["volume", "collar", "--beta-abs", "0.5"],
        &["volume", "high-torsion", "--p", "7"],
        &["tables", "list"],
        &["tables", "verify", "--table", "gamma3"],
        &["tables", "angles"],
    ];
    for args in cases {
        let mut a = args.to_vec();
        a.push("--json");
        let j = json(&run(&a));
        assert_eq!(j["schema_version"], 1, "{args:?}");
        assert!(j["kind"].is_string(), "{args:?}");
    }
}

#[test]
fn known_values_through_the_cli() {
    let j = json(&run(&["margulis", "ideal", "--orders", "3,3,3", "--json"]));
    assert!((j["value"].as_f64().unwrap() - 0.962424).abs() < 5e-5);
    let j = json(&run(&["arith", "discriminant", "--poly", "z^4 + 6z^3 + 12z^2 + 9z + 1", "--fundamental", "-275", "--json"]));
    assert_eq!(j["square_factor"], "1");
    let j = json(&run(&["volume", "collar", "--beta-abs", "0.5", "--json"]));
    assert!((j["cosh_delta"].as_f64().unwrap() - 8f64.sqrt()).abs() < 1e-11);
    let j = json(&run(&["volume", "collar", "--beta-abs", "0.5", "--order6", "--parabolic", "--json"]));
    assert_eq!(j["outcome"]["inconclusive"], "parabolic case");
    let j = json(&run(&["arith", "check", "--poly", "z^4 + 6z^3 + 12z^2 + 9z + 1", "--beta", "-3", "--json"]));
    assert_eq!(j["accepted"], true);
}

#[test]
fn json_floats_have_twelve_significant_digits() {
    let o = run(&["volume", "ball", "--r", "1.413", "--order", "60", "--json"]);
    let text = stdout(&o);
    let line = text.lines().find(|l| l.contains("\"volume\"")).unwrap();
    let digits: String = line.split(':').nth(1).unwrap().chars().filter(|c| c.is_ascii_digit()).collect();
    assert!(digits.trim_start_matches('0').len() <= 12, "{line}");
}

#[test]
fn domain_errors_exit_one_with_json() {
    let o = run(&["word", "poly", "--word", "abab"]);
    assert_eq!(o.code, 1);
    let e: Value = serde_json::from_str(&o.stderr).unwrap();
    assert_eq!(e["schema_version"], 1);
    assert_eq!(e["error"]["kind"], "not_good");
    let o = run(&["volume", "kill", "--tau", "5", "--theta", "0", "--p", "3"]);
    assert_eq!(o.code, 1);
    let o = run(&["tables", "verify", "--table", "nope"]);
    assert_eq!(o.code, 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["slice", "render", "--beta", "0"]).code, 2);
    assert_eq!(run(&["word", "poly", "--word", "abA", "--bogus"]).code, 2);
    assert_eq!(run(&["params", "show", "--gamma", "x+yi", "--beta", "0"]).code, 2);
    assert_eq!(run_with_threads("zero", &["tables", "list"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn riley_render_excludes_unit_disk_and_is_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let mut images = Vec::new();
    for t in ["1", "2", "3"] {
        let out = dir.path().join(format!("r{t}.ppm"));
        let o = run_with_threads(
            t,
            &["slice", "render", "--beta", "0", "--window", "-4,4,-3,3", "--res", "80x60", "--out", out.to_str().unwrap()],
        );
        assert_eq!(o.code, 0, "{}", o.stderr);
        images.push(std::fs::read(&out).unwrap());
        let side: Value = serde_json::from_slice(&std::fs::read(dir.path().join(format!("r{t}.ppm.json"))).unwrap()).unwrap();
        assert_eq!(side["schema_version"], 1);
        assert_eq!(side["spec"]["width"], 80);
    }
    assert!(images.windows(2).all(|w| w[0] == w[1]));
    let img = &images[0];
    let header = b"P6\n80 60\n255\n";
    assert_eq!(&img[..header.len()], header);
    let px = &img[header.len()..];
    // Pixel containing γ ≈ 0.05 + 0.05i sits in D(0, 1): red.
    let (col, row) = (40, 29);
    assert_eq!(&px[3 * (row * 80 + col)..3 * (row * 80 + col) + 3], &[255, 0, 0]);
}

#[test]
fn arith_enumerate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    let o = run(&["arith", "enumerate", "--beta", "-3", "--degree", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("degree,polynomial,coefficients,gamma_re,gamma_im,accepted,checks,reason\n"));
    assert!(csv.lines().any(|l| l.starts_with("1,z + 1,")));
}
