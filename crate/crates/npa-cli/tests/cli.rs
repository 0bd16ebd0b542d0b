//! End-to-end checks of the `npa` binary: outputs, determinism, file
//! round-trips, and the exit-code contract (0 ok, 1 usage, 2 validation,
//! 3 cap exceeded).

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn npa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_npa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_file(content: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f.flush().unwrap();
    f
}

fn example_file() -> NamedTempFile {
    let out = npa(&["generate", "example"]);
    assert!(out.status.success());
    write_file(&stdout(&out))
}

const CONST_DPA: &str = "dpa\nalphabet: a b\nstates: p\ninitial: p\noutput: p=1/2\n\
                         trans p a: { p=1 }\ntrans p b: { p=1 }\n";

const FIB_WFA: &str = "wfa\nalphabet: a\nstates: s0 s1\nin: 1 0\nout: 0 1\n\
                       matrix a: row s0: 1 1 ; row s1: 1 0\n";

#[test]
fn eval_worked_example() {
    let f = example_file();
    let path = f.path().to_str().unwrap();

    let out = npa(&["eval", path, "a a", "--min"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/4\n");

    let out = npa(&["eval", path, "a a", "--max"]);
    assert_eq!(stdout(&out), "1\n");

    // Max is the default; the empty word yields the initial output.
    let out = npa(&["eval", path, ""]);
    assert_eq!(stdout(&out), "1\n");

    let out = npa(&["eval", path, "a a", "--min", "--decimal", "3"]);
    assert_eq!(stdout(&out), "1/4\n0.250\n");
}

#[test]
fn generate_is_deterministic_and_roundtrips() {
    let once = stdout(&npa(&["generate", "example"]));
    let twice = stdout(&npa(&["generate", "example"]));
    assert_eq!(once, twice);

    // Parsing the emitted file and re-emitting it is the identity.
    let f = write_file(&once);
    let dual = stdout(&npa(&["generate", "dual", f.path().to_str().unwrap()]));
    let dual_file = write_file(&dual);
    let double = stdout(&npa(&["generate", "dual", dual_file.path().to_str().unwrap()]));
    assert_eq!(double, once);
}

#[test]
fn dual_of_example_swaps_semantics() {
    let f = example_file();
    let dual = stdout(&npa(&["generate", "dual", f.path().to_str().unwrap()]));
    let dual_file = write_file(&dual);
    let out = npa(&["eval", dual_file.path().to_str().unwrap(), "a a", "--max"]);
    assert_eq!(stdout(&out), "3/4\n");
}

#[test]
fn metric_of_identical_files_is_zero() {
    let f = example_file();
    let path = f.path().to_str().unwrap();
    let out = npa(&["metric", path, path, "--c", "1/2", "--kappa", "1/100", "--min"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("horizon: 8\n"), "{text}");
    assert!(text.contains("tail-bound: 1/128\n"), "{text}");
    assert!(text.contains("x: 0\n"), "{text}");
}

#[test]
fn metric_of_constant_automata() {
    let one = write_file(
        "npa\nalphabet: a b\nstates: s\ninitial: s\noutput: s=1\n\
         trans s a: { s=1 }\ntrans s b: { s=1 }\n",
    );
    let zero = write_file(
        "npa\nalphabet: a b\nstates: s\ninitial: s\noutput: s=0\n\
         trans s a: { s=1 }\ntrans s b: { s=1 }\n",
    );
    let out = npa(&[
        "metric",
        one.path().to_str().unwrap(),
        zero.path().to_str().unwrap(),
        "--c",
        "1/2",
        "--kappa",
        "1/100",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    // Truncation of the geometric series with limit 2 at horizon 8.
    assert!(text.contains("x: 255/128\n"), "{text}");
    assert!(text.contains("\"\" 1 0 1 1\n"), "{text}");
}

#[test]
fn metric_threshold_pair_with_satisfied_threshold() {
    let dpa = write_file(CONST_DPA);
    let path = dpa.path().to_str().unwrap();
    let y = write_file(&stdout(&npa(&["generate", "threshold-y", path, "--kappa", "1/2"])));
    let z = write_file(&stdout(&npa(&["generate", "threshold-z", path, "--kappa", "1/2"])));
    for alg in ["--min", "--max"] {
        let out = npa(&[
            "metric",
            y.path().to_str().unwrap(),
            z.path().to_str().unwrap(),
            "--c",
            "1/2",
            "--kappa",
            "1/64",
            alg,
        ]);
        assert!(out.status.success());
        assert!(stdout(&out).contains("x: 0\n"));
    }
}

#[test]
fn threshold_outputs_validate_and_roundtrip() {
    let dpa = write_file(CONST_DPA);
    let path = dpa.path().to_str().unwrap();
    for which in ["threshold-y", "threshold-z"] {
        let text = stdout(&npa(&["generate", which, path, "--kappa", "1/3"]));
        let f = write_file(&text);
        let evald = npa(&["eval", f.path().to_str().unwrap(), "", "--min"]);
        assert_eq!(stdout(&evald), "1/3\n", "{which}");
    }
}

#[test]
fn oracle_check_reports_ok() {
    let f = example_file();
    let out = npa(&["oracle-check", f.path().to_str().unwrap(), "--max-len", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "OK\n");
}

#[test]
fn lrs_subcommands() {
    let out = npa(&["lrs", "eval", "lrs k=2 init=0,1 coeffs=1,1", "10"]);
    assert_eq!(stdout(&out), "55\n");

    let wfa = write_file(FIB_WFA);
    let out = npa(&["lrs", "from-wfa", wfa.path().to_str().unwrap()]);
    assert_eq!(stdout(&out), "lrs k=2 init=0,1 coeffs=1,1\n");

    let out = npa(&["lrs", "zeros", "lrs k=2 init=0,1 coeffs=1,1", "10"]);
    assert_eq!(stdout(&out), "0\n");

    let out = npa(&["lrs", "zeros", "lrs k=1 init=1 coeffs=1", "5"]);
    assert_eq!(stdout(&out), "\n");
}

#[test]
fn exit_codes() {
    // 1: usage — unknown flag, malformed rational, word outside alphabet.
    let f = example_file();
    let path = f.path().to_str().unwrap();
    assert_eq!(npa(&["eval", path, "a", "--bogus"]).status.code(), Some(1));
    assert_eq!(npa(&["eval", path, "a c"]).status.code(), Some(1));
    assert_eq!(
        npa(&["metric", path, path, "--c", "3/2", "--kappa", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        npa(&["lrs", "eval", "not an lrs", "3"]).status.code(),
        Some(1)
    );

    // 2: validation — unreadable file, bad file, alphabet mismatch.
    assert_eq!(npa(&["eval", "/nonexistent", "a"]).status.code(), Some(2));
    let bad = write_file(
        "npa\nalphabet: a\nstates: s\ninitial: s\noutput: s=1\ntrans s a: { s=9/10 }\n",
    );
    assert_eq!(
        npa(&["eval", bad.path().to_str().unwrap(), "a"]).status.code(),
        Some(2)
    );
    let unary = write_file(
        "npa\nalphabet: a\nstates: s\ninitial: s\noutput: s=1\ntrans s a: { s=1 }\n",
    );
    assert_eq!(
        npa(&[
            "metric",
            path,
            unary.path().to_str().unwrap(),
            "--c",
            "1/2",
            "--kappa",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    // Metric needs [0,1]-bounded languages; a wfa file is refused.
    let wfa = write_file(FIB_WFA);
    assert_eq!(
        npa(&[
            "metric",
            wfa.path().to_str().unwrap(),
            wfa.path().to_str().unwrap(),
            "--c",
            "1/2",
            "--kappa",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );

    // 3: cap exceeded.
    assert_eq!(
        npa(&["oracle-check", path, "--max-len", "4", "--cap", "2"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn wfa_eval_via_matrix_product() {
    let wfa = write_file(FIB_WFA);
    let out = npa(&["eval", wfa.path().to_str().unwrap(), "a a a a a a"]);
    assert_eq!(stdout(&out), "8\n");
}
