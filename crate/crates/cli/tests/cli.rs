use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lambda-orders")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn compare_fixture(dir: &str, order: &str, algo: &str, right: &str) -> Output {
    let d = fixtures().join(dir);
    let p = |f: &str| d.join(f).to_str().unwrap().to_string();
    run(&["--sig", &p("signature.toml"), "--order", order, "--algo", algo, "compare", &p("left.term"), &p(right)])
}

#[test]
fn compare_prints_one_token() {
    for algo in ["naive", "optimized", "both"] {
        let o = compare_fixture("lambda_literals", "kbo", algo, "right.term");
        assert_eq!((stdout(&o).as_str(), o.status.code()), ("G\n", Some(0)), "{}", stderr(&o));
    }
    let o = compare_fixture("map_recursion", "lpo", "both", "right.term");
    assert_eq!(stdout(&o), "U\n");
    let o = compare_fixture("map_recursion", "kbo", "both", "left.term");
    assert_eq!(stdout(&o), "E\n");
}

#[test]
fn invalid_input_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("sig.toml");
    fs::write(
        &sig,
        "[types]\nkappa = 0\n[symbols]\ndiff = { params = [\"(-> 'a 'b)\", \"(-> 'a 'b)\"], type = \"(-> kappa 'a)\" }\n\
         [coeffs]\ndiff = [2]\n",
    )
    .unwrap();
    let term = dir.path().join("t.term");
    fs::write(&term, "(sym nope () ())").unwrap();
    let (sig, term) = (sig.to_str().unwrap(), term.to_str().unwrap());
    let o = run(&["--sig", sig, "--order", "kbo", "compare", term, term]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("k(diff, i) = 1"), "{}", stderr(&o));

    let good = fixtures().join("lambda_literals/signature.toml");
    let o = run(&["--sig", good.to_str().unwrap(), "compare", term, term]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown symbol 'nope'"), "{}", stderr(&o));

    assert_eq!(run(&["--order", "kbo", "compare", term, term]).status.code(), Some(1));
    assert_eq!(run(&["--algo", "fast", "check"]).status.code(), Some(1));
    assert_eq!(run(&["check", "no_such_property"]).status.code(), Some(1));
}

#[test]
fn check_reports_every_property() {
    let o = run(&["--iters", "20", "--seed", "5", "check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 12 + 10);
    for line in out.lines() {
        assert!(line.starts_with("order=kbo property=") || line.starts_with("order=lpo property="), "{line}");
        assert!(line.ends_with(" failures=0"), "{line}");
    }
    assert_eq!(run(&["--iters", "20", "--seed", "5", "check"]).stdout, o.stdout, "not deterministic");
}

#[test]
fn zero_iterations_give_an_empty_report() {
    let o = run(&["--iters", "0", "check"]);
    assert_eq!((stdout(&o).as_str(), o.status.code()), ("", Some(0)));
}

#[test]
fn injected_oracle_fault_fails_with_2() {
    let o = run(&["--iters", "200", "--order", "lpo", "--inject-oracle-fault", "check", "oracle_equivalence"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.starts_with("order=lpo property=oracle_equivalence trials=200 failures="), "{out}");
    assert!(out.contains("counterexample="), "{out}");
    assert!(!run(&["--help"]).stdout.windows(6).any(|w| w == b"inject"));
}

#[test]
fn check_accepts_a_signature_file() {
    let sig = fixtures().join("enumeration/booleans.toml");
    let o =
        run(&["--sig", sig.to_str().unwrap(), "--order", "lpo", "--iters", "20", "check", "diff", "ground_totality"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn bench_reports_both_algorithms_for_both_orders() {
    let o = run(&["--iters", "10", "bench", "--max-depth", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for order in ["kbo", "lpo"] {
        for family in ["corpus", "nesting"] {
            let line = out.lines().find(|l| l.starts_with(&format!("{family} order={order}"))).expect(family);
            assert!(line.contains("naive_ms=") && line.contains("optimized_ms="), "{line}");
            assert!(line.contains("naive_calls=") && line.contains("optimized_calls="), "{line}");
        }
    }
}
