use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use textclust::rng::{Stream, SEEDING_STREAM};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_textclust"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn cluster_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for out in [&a, &b] {
        let o = run(&[
            "cluster", "--input", p(&data("tiny.mat")), "--rclass", p(&data("tiny.rclass")),
            "--k", "2", "--seed", "42", "--out", p(out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let text = stdout(&o);
        assert!(text.contains("T\t"), "{text}");
        assert!(text.contains("total\t6\t"), "{text}");
    }
    let body = fs::read_to_string(&a).unwrap();
    assert_eq!(body, fs::read_to_string(&b).unwrap());
    assert_eq!(body.lines().count(), 6);
    for line in body.lines() {
        let f: Vec<&str> = line.split(' ').collect();
        assert_eq!(f.len(), 2);
        assert!(f[1] == "0" || f[1] == "1");
    }
}

#[test]
fn baseline_method_runs_and_writes_to_stdout() {
    let o = run(&[
        "cluster", "--input", p(&data("tiny.mat")), "--k", "3", "--seed", "1", "--method", "baseline",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 6);
    assert!(stderr(&o).contains("method\tbaseline"));
}

#[test]
fn angle_fixture_seeds_match_farthest_rule() {
    let seed = (0u64..).find(|&s| Stream::new(s, SEEDING_STREAM).below(4) == 0).unwrap();
    let seed = seed.to_string();
    let o = run(&[
        "cluster", "--input", p(&data("angles.mat")), "--no-tfidf", "--k", "2", "--r", "1", "--seed", &seed,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    // seed 0° then the farthest document, 100°
    assert!(stderr(&o).contains("seeds\t0,3"), "{}", stderr(&o));
    assert_eq!(stdout(&o), "0 0\n1 0\n2 1\n3 1\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["cluster", "--k"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        run(&["cluster", "--input", p(&data("tiny.mat")), "--k", "2", "--method", "kmeans"]).status.code(),
        Some(2)
    );
}

#[test]
fn runtime_errors_exit_one() {
    let o = run(&["cluster", "--input", p(&data("tiny.mat")), "--k", "9"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["cluster", "--input", "/nonexistent.mat", "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn zero_norm_documents_are_reported_or_dropped() {
    let dir = tempfile::tempdir().unwrap();
    let mat = dir.path().join("z.mat");
    // term 1 appears in every document, so document 2 has zero tf-idf norm
    fs::write(&mat, "4 3 7\n1 1 2 1\n1 1 3 1\n1 2\n1 1 2 1\n").unwrap();
    let o = run(&["cluster", "--input", p(&mat), "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("zero-norm"), "{}", stderr(&o));
    assert!(stderr(&o).contains(": 2"), "{}", stderr(&o));

    let o = run(&["cluster", "--input", p(&mat), "--k", "2", "--drop-empty"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let ids: Vec<String> = stdout(&o).lines().map(|l| l.split(' ').next().unwrap().to_owned()).collect();
    assert_eq!(ids, vec!["0", "1", "3"]);
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn eval_reports_weighted_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let mut assignment = String::new();
    let mut labels = String::new();
    for i in 0..16 {
        assignment.push_str(&format!("d{i} {}\n", usize::from(i >= 4)));
        labels.push_str(if i == 3 { "b\n" } else { "a\n" });
    }
    let a = write(dir.path(), "a.txt", &assignment);
    let l = write(dir.path(), "l.rclass", &labels);
    let o = run(&["eval", "--assignment", p(&a), "--rclass", p(&l)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("total\t16\t0.202820\tq=2"), "{}", stdout(&o));

    let o = run(&["eval", "--assignment", p(&a), "--rclass", p(&l), "--csv"]);
    assert!(stdout(&o).ends_with("total,16,0.202820,\n"), "{}", stdout(&o));
}

#[test]
fn eval_pure_single_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let l = write(dir.path(), "l.rclass", "x\nx\ny\ny\n");
    let pure = write(dir.path(), "p.txt", "a 0\nb 0\nc 1\nd 1\n");
    let o = run(&["eval", "--assignment", p(&pure), "--rclass", p(&l)]);
    assert!(stdout(&o).contains("total\t4\t0.000000"), "{}", stdout(&o));

    let single = write(dir.path(), "s.txt", "a 0\nb 0\nc 0\nd 0\n");
    let o = run(&["eval", "--assignment", p(&single), "--rclass", p(&l)]);
    assert!(stdout(&o).contains("total\t4\t1.000000"), "{}", stdout(&o));

    let short = write(dir.path(), "m.txt", "a 0\nb 1\n");
    let o = run(&["eval", "--assignment", p(&short), "--rclass", p(&l)]);
    assert_eq!(o.status.code(), Some(1));
}

fn text_corpus(root: &Path) {
    let docs = [
        ("sport", "s1", "The match ended with a late goal and the crowd cheered the striker."),
        ("sport", "s2", "A penalty goal decided the match; the keeper dived the wrong way."),
        ("sport", "s3", "The striker trained hard before the derby match."),
        ("finance", "f1", "Shares fell as the bank reported weaker quarterly earnings."),
        ("finance", "f2", "The central bank raised interest rates to curb inflation."),
        ("finance", "f3", "Investors sold shares after the earnings warning."),
    ];
    for (class, id, text) in docs {
        fs::create_dir_all(root.join(class)).unwrap();
        fs::write(root.join(class).join(format!("{id}.txt")), text).unwrap();
    }
}

#[test]
fn vectorize_round_trips_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    text_corpus(&corpus);
    let out1 = dir.path().join("v1.mat");
    let out2 = dir.path().join("v2.mat");
    for out in [&out1, &out2] {
        let o = run(&["vectorize", "--corpus", p(&corpus), "--out", p(out)]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for ext in ["", ".rclass", ".rlabel"] {
        let a = fs::read(format!("{}{ext}", out1.display())).unwrap();
        let b = fs::read(format!("{}{ext}", out2.display())).unwrap();
        assert_eq!(a, b, "{ext}");
    }
    let rclass = PathBuf::from(format!("{}.rclass", out1.display()));
    let m: textclust::Matrix = textclust::datasets::load_cluto(&out1, Some(&rclass)).unwrap();
    assert_eq!(m.n_docs(), 6);
    assert_eq!(m.doc_ids, vec!["f1", "f2", "f3", "s1", "s2", "s3"]);
    assert_eq!(m.labels.as_ref().unwrap()[0], "finance");
    for d in &m.docs {
        assert!((d.norm() - 1.0).abs() < 1e-9);
    }

    // clustering the written vectors needs no re-weighting
    let o = run(&["cluster", "--input", p(&out1), "--no-tfidf", "--k", "2", "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("total\t6\t0.000000"), "{}", stderr(&o));
}

#[test]
fn vectorize_without_tfidf_only_normalises() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("raw.mat");
    let o = run(&["vectorize", "--input", p(&data("tiny.mat")), "--no-tfidf", "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m: textclust::Matrix = textclust::datasets::load_cluto(&out, None).unwrap();
    // the last row of tiny.mat is `4 5`: a single term normalises to 1
    assert_eq!(m.docs[5].iter().collect::<Vec<_>>(), vec![(3, 1.0)]);
    // row 0 is `1 3 2 1`: (3, 1) / √10
    let v = m.docs[0].iter().collect::<Vec<_>>();
    assert_eq!(v.len(), 2);
    assert!((v[0].1 - 3.0 / 10f64.sqrt()).abs() < 1e-15);
    assert!((v[1].1 - 1.0 / 10f64.sqrt()).abs() < 1e-15);

    let o = run(&["vectorize", "--input", "/missing.mat", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn vectorize_stopwords() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    text_corpus(&corpus);
    let stop = write(dir.path(), "stop.txt", "the and\nA");
    let with = dir.path().join("s.mat");
    let without = dir.path().join("n.mat");
    assert!(run(&["vectorize", "--corpus", p(&corpus), "--stopwords", p(&stop), "--out", p(&with)]).status.success());
    assert!(run(&["vectorize", "--corpus", p(&corpus), "--out", p(&without)]).status.success());
    let cols = |path: &Path| -> usize {
        fs::read_to_string(path).unwrap().lines().next().unwrap().split(' ').nth(1).unwrap().parse().unwrap()
    };
    assert_eq!(cols(&without) - cols(&with), 2);
}

#[test]
fn bench_writes_paired_csv_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2"].iter().enumerate() {
        let rows = dir.path().join(format!("rows{i}.csv"));
        let summary = dir.path().join(format!("agg{i}.csv"));
        let o = bin()
            .env("TEXTCLUST_THREADS", threads)
            .args([
                "bench", "--synthetic", "--classes", "4", "--docs-per-class", "10", "--k-list", "2,4",
                "--trials", "3", "--seed", "5", "--out", p(&rows), "--summary", p(&summary),
            ])
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push((fs::read(&rows).unwrap(), fs::read(&summary).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);

    let rows = String::from_utf8(outputs[0].0.clone()).unwrap();
    let lines: Vec<&str> = rows.lines().collect();
    assert_eq!(lines.len(), 1 + 2 * 2 * 3);
    assert!(lines[1].starts_with("synthetic,proposed,2,0,5,"));
    assert!(lines[7].starts_with("synthetic,baseline,2,0,5,"));
    let agg = String::from_utf8(outputs[0].1.clone()).unwrap();
    assert_eq!(agg.lines().count(), 1 + 4);
    assert!(agg.contains("synthetic,proposed,4,3,0.000000,0.000000"), "{agg}");
}

#[test]
fn bench_timings_and_failures() {
    let o = run(&[
        "bench", "--input", p(&data("tiny.mat")), "--rclass", p(&data("tiny.rclass")), "--k-list", "2,7", "--trials", "1", "--methods", "proposed",
        "--timings",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().ends_with(",error,wall_time_ms"));
    assert!(lines.next().unwrap().starts_with("tiny,proposed,2,0,0,"));
    assert!(lines.next().unwrap().contains("invalid cluster count"));
    assert!(stderr(&o).contains("run failed"));

    let o = bin()
        .env("TEXTCLUST_THREADS", "0")
        .args(["bench", "--input", p(&data("tiny.mat")), "--rclass", p(&data("tiny.rclass")), "--k-list", "2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
