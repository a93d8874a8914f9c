//! Golden results for the fixtures in the repository's `fixtures/` directory.
//!
//! Each `expected.txt` line reads `ORDER [FILE...] RESULT`. A `.toml` file
//! replaces `signature.toml`, a `.term` file replaces `right.term`.

use std::fs;
use std::path::{Path, PathBuf};

use lambda_orders::cmp::Cmp;
use lambda_orders::config::parse_signature;
use lambda_orders::lambda_order::{compare_using, Algorithm, OrderKind};
use lambda_orders::syntax::parse_term;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn check_dir(dir: &Path) {
    let expected = fs::read_to_string(dir.join("expected.txt")).unwrap();
    for line in expected.lines().filter(|l| !l.trim().is_empty()) {
        let words: Vec<&str> = line.split_whitespace().collect();
        let kind: OrderKind = words[0].parse().unwrap();
        let want: Cmp = words[words.len() - 1].parse().unwrap();
        let mut sig_file = "signature.toml";
        let mut right_file = "right.term";
        for w in &words[1..words.len() - 1] {
            if w.ends_with(".toml") {
                sig_file = w;
            } else {
                right_file = w;
            }
        }
        let p = parse_signature(&fs::read_to_string(dir.join(sig_file)).unwrap(), Some(kind)).unwrap();
        let left = parse_term(&fs::read_to_string(dir.join("left.term")).unwrap(), &p.signature).unwrap();
        let right = parse_term(&fs::read_to_string(dir.join(right_file)).unwrap(), &p.signature).unwrap();
        for algo in [Algorithm::Naive, Algorithm::Optimized] {
            let (got, _) = compare_using(&left, &right, &p, kind, algo).unwrap();
            assert_eq!(got, want, "{}: '{line}' with the {algo} algorithm", dir.display());
            let (back, _) = compare_using(&right, &left, &p, kind, algo).unwrap();
            assert_eq!(back, want.flip(), "{}: '{line}' reversed, {algo}", dir.display());
        }
    }
}

#[test]
fn lambda_literals() {
    check_dir(&fixtures().join("lambda_literals"));
}

#[test]
fn transitivity() {
    check_dir(&fixtures().join("transitivity"));
}

#[test]
fn skolem_parameter() {
    check_dir(&fixtures().join("skolem_parameter"));
}

#[test]
fn map_recursion() {
    check_dir(&fixtures().join("map_recursion"));
}
