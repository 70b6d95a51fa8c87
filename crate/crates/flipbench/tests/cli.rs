//! End-to-end runs of the binary: artifact files in, stdout and exit
//! codes out.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flipbench"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn measure_and_count_flip() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.rl", "Flip(eps)\n");
    let out = run(&["measure", f.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/2\n");

    let out = run(&["count", f.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/2\n");

    let g = write(dir.path(), "g.rl", "Flip(0) & Flip(1)\n");
    let out = run(&["measure", g.to_str().unwrap()]);
    assert_eq!(stdout(&out), "1/4\n");
}

#[test]
fn measure_env_binding_and_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.rl", "Flip(x)\n");
    let out = run(&["measure", f.to_str().unwrap(), "--env", "x=01"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/2\n");

    // Unbound variable is a bad artifact.
    let out = run(&["measure", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // A bound of length 12 needs 2^13 - 1 coordinates, over any budget here.
    let big = write(
        dir.path(),
        "big.rl",
        "E z <= x . Flip(z)\n",
    );
    let out = run(&[
        "measure",
        big.to_str().unwrap(),
        "--env",
        "x=111111111111",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout(&out), "infeasible\n");
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.rl", "Flip(\n");
    assert_eq!(run(&["measure", f.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["measure", "/nonexistent/file"]).status.code(), Some(2));

    let p = write(dir.path(), "p.por", "(proj 1 2)\n");
    assert_eq!(
        run(&["por", "run", p.to_str().unwrap(), "--input", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn por_run_and_dist() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "q.por", "(query)\n");
    let out = run(&["por", "run", p.to_str().unwrap(), "--input", "eps", "--seed", "3"]);
    assert!(out.status.success());
    let v = stdout(&out);
    assert!(v == "0\n" || v == "1\n");

    // Same seed, same answer.
    let again = run(&["por", "run", p.to_str().unwrap(), "--input", "eps", "--seed", "3"]);
    assert_eq!(stdout(&again), v);

    let out = run(&["por", "dist", p.to_str().unwrap(), "--input", "eps"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0 1/2^1\n1 1/2^1\n");
}

#[test]
fn compile_chain_and_run_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n);
    let p = write(dir.path(), "q.por", "(comp (succ 1) (query))\n");
    let path = |n: &str| d(n).to_str().unwrap().to_string();

    for (stage, src, dst) in [
        ("por-ra", "q.por", "q.ra"),
        ("ra-la", "q.ra", "q.la"),
        ("la-od", "q.la", "q.od"),
        ("od-stm", "q.od", "q.stm"),
        ("stm-ptm", "q.stm", "q.ptm"),
    ] {
        let out = run(&["compile", stage, &path(src), &path(dst)]);
        assert!(out.status.success(), "stage {stage} failed");
    }
    let _ = p;

    // The oracle-flavor program runs under a seeded oracle.
    let out = run(&["sifp", "run", &path("q.ra"), "--input", "0", "--seed", "1"]);
    assert!(out.status.success());
    let v = stdout(&out);
    assert!(v == "01\n" || v == "11\n", "got {v:?}");

    // The machine artifacts run under a seeded stream.
    let out = run(&["machine", "run", &path("q.od"), "--input", "0", "--seed", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("output 01\n") || text.starts_with("output 11\n"));
    let out2 = run(&["machine", "run", &path("q.od"), "--input", "0", "--seed", "1"]);
    assert_eq!(stdout(&out2), text);
}

#[test]
fn equiv_reports_six_agreeing_stages() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "q.por", "(query)\n");
    let ins = write(dir.path(), "ins.txt", "eps\n0\n1\n00\n");
    let out = run(&[
        "equiv",
        p.to_str().unwrap(),
        "--inputs",
        ins.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("all stages agree: yes"));
    assert_eq!(text.matches("reference").count(), 4);
    assert_eq!(text.matches(" ok").count(), 20);

    // Identical invocations print identical bytes; --jobs does not change
    // the output.
    let again = run(&[
        "equiv",
        p.to_str().unwrap(),
        "--inputs",
        ins.to_str().unwrap(),
        "--jobs",
        "4",
    ]);
    assert_eq!(stdout(&again), text);

    let tsv = run(&[
        "equiv",
        p.to_str().unwrap(),
        "--inputs",
        ins.to_str().unwrap(),
        "--format",
        "tsv",
    ]);
    let ttext = stdout(&tsv);
    assert_eq!(ttext.lines().count(), 24);
    assert!(ttext.lines().all(|l| l.split('\t').count() == 4));
}

#[test]
fn noterratic_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let ins = write(dir.path(), "ins.txt", "eps\n0\n11\n");
    // Always true: every input passes with empty advice.
    let good = write(dir.path(), "good.rl", "x = x\n");
    let out = run(&[
        "noterratic",
        good.to_str().unwrap(),
        "--inputs",
        ins.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).matches(" ok").count(), 3);

    // Measure 1/2 < 2/3 regardless of advice.
    let bad = write(dir.path(), "bad.rl", "Flip(eps) & x = x\n");
    let out = run(&[
        "noterratic",
        bad.to_str().unwrap(),
        "--inputs",
        ins.to_str().unwrap(),
        "--format",
        "tsv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fail"));
}

#[test]
fn pzt_and_pit_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    // (x + y)(x - y) - x^2 + y^2 == 0.
    let zero = write(
        dir.path(),
        "zero.circ",
        "n0 = input 0\nn1 = input 1\nn2 = add n0 n1\nn3 = sub n0 n1\nn4 = mul n2 n3\n\
         n5 = mul n0 n0\nn6 = mul n1 n1\nn7 = sub n4 n5\nn8 = add n7 n6\noutput n8\n",
    );
    let out = run(&["pzt", "test", zero.to_str().unwrap(), "--seed", "7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "accept\n");

    let nonzero = write(
        dir.path(),
        "nz.circ",
        "n0 = input 0\nn1 = const 1\nn2 = add n0 n1\noutput n2\n",
    );
    let out = run(&["pzt", "test", nonzero.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "reject\n");

    // x^2 - y^2 as a product versus as a difference of squares.
    let p1 = write(
        dir.path(),
        "p1.circ",
        "n0 = input 0\nn1 = input 1\nn2 = add n0 n1\nn3 = sub n0 n1\nn4 = mul n2 n3\noutput n4\n",
    );
    let p2 = write(
        dir.path(),
        "p2.circ",
        "n0 = input 0\nn1 = input 1\nn2 = mul n0 n0\nn3 = mul n1 n1\nn4 = sub n2 n3\noutput n4\n",
    );
    let out = run(&["pit", p1.to_str().unwrap(), p2.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "equal\n");

    let out = run(&["pit", p1.to_str().unwrap(), nonzero.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "different\n");
}

#[test]
fn pzt_error_rate_and_primes() {
    let dir = tempfile::tempdir().unwrap();
    let nonzero = write(
        dir.path(),
        "nz.circ",
        "n0 = input 0\nn1 = const 1\nn2 = add n0 n1\noutput n2\n",
    );
    let out = run(&[
        "pzt",
        "error-rate",
        nonzero.to_str().unwrap(),
        "--trials",
        "50",
        "--jobs",
        "4",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("wrong 0"), "got {text}");

    // Chunked seeds match the sequential run exactly.
    let seq = run(&["pzt", "error-rate", nonzero.to_str().unwrap(), "--trials", "50"]);
    assert_eq!(stdout(&seq), text);

    let out = run(&["pzt", "primes", "--m-range", "4..6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "m=4 ok\nm=5 ok\nm=6 ok\n");
}

#[test]
fn machine_fuel_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // A one-state loop that never halts.
    let m = write(
        dir.path(),
        "loop.m",
        "kind on-demand\ntapes 1\nstate a\nstate b\nstart a\nhalt b\noutput-tape 0\n\
         (a, *, #) -> (a, =, S)\n",
    );
    let out = run(&["machine", "run", m.to_str().unwrap(), "--fuel", "100"]);
    assert_eq!(out.status.code(), Some(3));
}
