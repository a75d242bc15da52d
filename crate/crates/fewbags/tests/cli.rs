use std::fs;
use std::path::Path;
use std::process::Command;

use fewbags::cli::{run, BENCH_HEADER};
use fewbags::formats::{parse_gr, parse_td, write_gr, Metadata};
use fewbags_core::decomp::validate_tree;
use fewbags_core::gadgets::{random_partial_ktree, spider};
use fewbags_core::Graph;
use tempfile::TempDir;

fn fewbags(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fewbags")).args(args).output().unwrap();
    let code = out.status.code().unwrap();
    (code, String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

/// Same as [`fewbags`] without spawning a process.
fn inline(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("fewbags").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn put(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn put_graph(dir: &TempDir, name: &str, g: &Graph) -> String {
    put(dir, name, &write_gr(g))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_examples() {
    let dir = TempDir::new().unwrap();
    let star = put_graph(&dir, "star.gr", &Graph::star(3));
    assert_eq!(fewbags(&["solve", &star, "--mode", "path", "--width", "1"]).1, "SIZE 3\n");

    let k3 = put_graph(&dir, "k3.gr", &Graph::complete(3));
    let (code, out, _) = fewbags(&["solve", &k3, "--mode", "path", "--width", "1"]);
    assert_eq!((code, out.as_str()), (1, "INFEASIBLE\n"));

    let k4 = put_graph(&dir, "k4.gr", &Graph::complete(4));
    let (code, out, _) = fewbags(&["solve", &k4, "--mode", "tree", "--width", "3"]);
    assert_eq!((code, out.as_str()), (0, "SIZE 1\n"));
}

#[test]
fn decision_follows_size() {
    let dir = TempDir::new().unwrap();
    let star = put_graph(&dir, "star.gr", &Graph::star(3));
    for (limit, answer) in [("2", "NO"), ("3", "YES"), ("9", "YES")] {
        let (code, out) = inline(&["solve", &star, "--width", "1", "--max-bags", limit]);
        assert_eq!(code, 0);
        assert_eq!(out, format!("SIZE 3\nDECISION {answer}\n"));
    }
    let k3 = put_graph(&dir, "k3.gr", &Graph::complete(3));
    assert_eq!(inline(&["solve", &k3, "--width", "1", "--max-bags", "5"]).1, "INFEASIBLE\nDECISION NO\n");
    assert_eq!(inline(&["solve", &k3, "--width", "1", "--max-bags", "0"]).0, 2);
}

#[test]
fn errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = put(&dir, "bad.gr", "p tw 2 1\n1 1\n");
    let (code, _, err) = fewbags(&["solve", &bad, "--width", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(fewbags(&["solve", "/nonexistent.gr", "--width", "1"]).0, 2);
    assert_eq!(fewbags(&["solve", &bad]).0, 2);
    assert_eq!(fewbags(&["frobnicate"]).0, 2);
    assert_eq!(fewbags(&["--help"]).0, 0);
    let ok = put_graph(&dir, "p3.gr", &Graph::path(3));
    assert_eq!(inline(&["solve", &ok, "--width", "1", "--root", "4"]).0, 2);
    assert_eq!(inline(&["solve", &ok, "--width", "1", "--root", "1,2,3"]).0, 2);
}

#[test]
fn witness_round_trip_in_both_modes() {
    let dir = TempDir::new().unwrap();
    for seed in 0..6 {
        let g = random_partial_ktree(12, 2, 0.7, seed).unwrap();
        let gr = put_graph(&dir, "g.gr", &g);
        for mode in ["path", "tree"] {
            let td = dir.path().join(format!("{seed}-{mode}.td"));
            let (code, out) = inline(&["solve", &gr, "--mode", mode, "--width", "2", "--witness", path_str(&td)]);
            if code == 1 {
                assert_eq!(out, "INFEASIBLE\n");
                assert!(!td.exists());
                continue;
            }
            let size = out.trim().strip_prefix("SIZE ").unwrap().to_owned();
            let (code, verdict) = inline(&["validate", &gr, path_str(&td), "--mode", mode, "--width", "2", "--max-bags", &size]);
            assert_eq!((code, verdict.as_str()), (0, "VALID\n"), "seed {seed} {mode}");
            assert_eq!(parse_td(&fs::read_to_string(&td).unwrap()).unwrap().td.len().to_string(), size);
        }
    }
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let gr = put_graph(&dir, "s.gr", &spider(4, 2));
    let once = |name: &str| {
        let td = dir.path().join(name);
        let out = inline(&["solve", &gr, "--mode", "tree", "--width", "1", "--witness", path_str(&td)]).1;
        (out, fs::read_to_string(td).unwrap())
    };
    assert_eq!(once("a.td"), once("b.td"));
}

#[test]
fn validate_reports_the_clause() {
    let dir = TempDir::new().unwrap();
    let p4 = put_graph(&dir, "p4.gr", &Graph::path(4));
    let wide = put(&dir, "wide.td", "s td 1 4 4\nb 1 1 2 3 4\n");
    let (code, out) = inline(&["validate", &p4, &wide, "--mode", "path", "--width", "2"]);
    assert_eq!((code, out.as_str()), (1, "INVALID: width\n"));

    let star = put_graph(&dir, "star.gr", &Graph::star(3));
    let branching = put(&dir, "b.td", "s td 4 2 4\nb 1 1\nb 2 1 2\nb 3 1 3\nb 4 1 4\n1 2\n1 3\n1 4\n");
    assert_eq!(inline(&["validate", &star, &branching, "--mode", "path", "--width", "1"]).1, "INVALID: not a path\n");
    assert_eq!(inline(&["validate", &star, &branching, "--mode", "tree", "--width", "1"]).1, "VALID\n");
    assert_eq!(inline(&["validate", &star, &branching, "--width", "1", "--max-bags", "3"]).1, "INVALID: size\n");

    let missing = put(&dir, "m.td", "s td 1 2 4\nb 1 1 2\n");
    assert_eq!(inline(&["validate", &star, &missing, "--width", "1"]).1, "INVALID: coverage\n");
    let broken = put(&dir, "x.td", "s td 1 2 4\nb 1 1 9\n");
    assert_eq!(fewbags(&["validate", &star, &broken, "--width", "1"]).0, 2);
}

#[test]
fn generate_families() {
    let dir = TempDir::new().unwrap();
    let out = |name: &str| dir.path().join(name);

    let chain = out("chain.gr");
    assert_eq!(inline(&["generate", "clique-chain", "--capacity", "6", "--w", "5,5", "--out", path_str(&chain)]).0, 0);
    let g = parse_gr(&fs::read_to_string(&chain).unwrap()).unwrap();
    assert_eq!(g.n(), 8);
    let meta: Metadata = serde_json::from_str(&fs::read_to_string(out("chain.json")).unwrap()).unwrap();
    assert_eq!(meta.capacity, Some(6));
    assert_eq!(meta.parts["maximal"].iter().map(Vec::len).collect::<Vec<_>>(), [5, 5]);
    assert_eq!(inline(&["generate", "clique-chain", "--capacity", "6", "--w", "4", "--out", path_str(&chain)]).0, 2);

    let sp = out("spider.gr");
    inline(&["generate", "spider", "--legs", "10", "--len", "3", "--out", path_str(&sp)]);
    assert_eq!(parse_gr(&fs::read_to_string(&sp).unwrap()).unwrap().n(), 31);

    let kt = out("kt.gr");
    let args = ["generate", "partial-ktree", "--n", "15", "--k", "3", "--keep", "0.6", "--seed", "9", "--out", path_str(&kt)];
    inline(&args);
    let first = fs::read_to_string(&kt).unwrap();
    inline(&args);
    assert_eq!(fs::read_to_string(&kt).unwrap(), first);
    assert_eq!(parse_gr(&first).unwrap(), random_partial_ktree(15, 3, 0.6, 9).unwrap());
    assert_eq!(inline(&["generate", "partial-ktree", "--n", "2", "--k", "3", "--out", path_str(&kt)]).0, 2);
}

#[test]
fn hard_instance_pipeline() {
    let dir = TempDir::new().unwrap();
    let tdm = put(&dir, "t.3dm", "p 3dm 2 2\n0 0 0\n1 1 1\n");
    let s3g = dir.path().join("t.s3g");
    assert_eq!(inline(&["generate", "s3g-from-3dm", &tdm, "--out", path_str(&s3g)]).0, 0);
    assert!(fs::read_to_string(&s3g).unwrap().contains("C 10101000"));

    let hard = dir.path().join("h.gr");
    let (code, out) = inline(&["generate", "mspd-hard", path_str(&s3g), "--out", path_str(&hard)]);
    assert_eq!(code, 0);
    assert!(out.contains("capacity 53 = width 52"), "{out}");
    assert!(out.contains("target size 34"), "{out}");
    let meta: Metadata = serde_json::from_str(&fs::read_to_string(dir.path().join("h.json")).unwrap()).unwrap();
    assert_eq!((meta.capacity, meta.width, meta.target_size), (Some(53), Some(52), Some(34)));
    assert_eq!(meta.parts["A.maximal"].len(), 34);
    assert_eq!(meta.parts["A.maximal"].last().unwrap().len(), 40);
}

fn bench_rows(out: &str) -> Vec<Vec<String>> {
    out.lines().skip(1).map(|l| l.split('\t').map(str::to_owned).collect()).collect()
}

#[test]
fn bench_tables() {
    let dir = TempDir::new().unwrap();
    let empty = TempDir::new().unwrap();
    assert_eq!(inline(&["bench", path_str(empty.path()), "--width", "1"]).1, format!("{BENCH_HEADER}\n"));

    for legs in [2, 3, 4] {
        put_graph(&dir, &format!("spider{legs}.gr"), &spider(legs, 3));
    }
    put(&dir, "broken.gr", "p tw 1 1\n1 1\n");
    put(&dir, "notes.txt", "ignored");
    let (code, out) = inline(&["bench", path_str(dir.path()), "--width", "1"]);
    assert_eq!(code, 0);
    let rows = bench_rows(&out);
    assert_eq!(rows.len(), 3);
    let entries: Vec<u64> = rows.iter().map(|r| r[7].parse().unwrap()).collect();
    assert!(entries.windows(2).all(|w| w[0] <= w[1]), "{entries:?}");
    assert!(rows.iter().all(|r| r[1] == "path" && r.len() == 10));

    let plain = bench_rows(&inline(&["bench", path_str(dir.path()), "--width", "1", "--keys", "plain"]).1);
    for (p, c) in plain.iter().zip(&rows) {
        assert_eq!(p[5], c[5]);
        assert!(p[7].parse::<u64>().unwrap() >= c[7].parse::<u64>().unwrap());
    }
    assert_eq!(bench_rows(&inline(&["bench", path_str(dir.path()), "--width", "1", "--both"]).1).len(), 6);
}

#[test]
fn stats_lines() {
    let dir = TempDir::new().unwrap();
    let gr = put_graph(&dir, "s.gr", &spider(3, 2));
    let out = inline(&["solve", &gr, "--mode", "tree", "--width", "1", "--stats"]).1;
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("SIZE 6"));
    let keys: Vec<&str> = lines.map(|l| l.split('=').next().unwrap()).collect();
    assert_eq!(keys, ["memo_entries", "memo_hits", "subproblem_calls", "canon_calls", "candidate_bags_enumerated", "branch_splits_enumerated"]);
}

#[test]
fn user_roots_restrict_the_search() {
    let dir = TempDir::new().unwrap();
    let gr = put_graph(&dir, "p4.gr", &Graph::path(4));
    let td = dir.path().join("w.td");
    let out = inline(&["solve", &gr, "--width", "1", "--root", "3,4", "--witness", path_str(&td)]).1;
    assert_eq!(out, "SIZE 3\n");
    let f = parse_td(&fs::read_to_string(&td).unwrap()).unwrap();
    assert_eq!(f.td.bags.last().unwrap().to_vec(), [2, 3]);
    assert_eq!(validate_tree(&Graph::path(4), &f.td, 1, Some(3)), Ok(()));
}

