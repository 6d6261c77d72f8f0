use std::path::Path;
use std::process::{Command, Output};

fn relspan(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relspan")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_empty_attack_writes_zero_ratio() {
    let d = tempfile::tempdir().unwrap();
    let o = relspan(d.path(), &["eval", "--preset", "path", "--n", "64", "--trials", "1", "--set", "attack_size=0", "--out", "z.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(d.path().join("z.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines[0], "trial,seed,attack,b,bplus,ratio,max_stretch,max_hops,edges,weight,mst,lightness");
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert_eq!((cols[3], cols[4], cols[5]), ("0", "0", "0"));
    assert!(csv.contains("violations=0"));
}

#[test]
fn invalid_instance_exits_2_without_csv() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("bad.txt"), "0 1 2\n1 2 x\n").unwrap();
    let o = relspan(d.path(), &["eval", "--preset", "general", "--instance", "bad.txt", "--out", "bad.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert!(!d.path().join("bad.csv").exists());
}

#[test]
fn generated_partition_covers_verify() {
    let d = tempfile::tempdir().unwrap();
    assert!(relspan(d.path(), &["gen", "instance", "--preset", "tree-metric", "--n", "30", "--out", "g.txt"]).status.success());
    assert!(relspan(d.path(), &["build", "ppc", "--preset", "tree-metric", "--instance", "g.txt", "--eps", "0.0625", "--out", "p.txt"])
        .status
        .success());
    let o = relspan(d.path(), &["verify", "--instance", "g.txt", "--ppc", "p.txt"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn broken_cluster_is_a_padding_violation() {
    let d = tempfile::tempdir().unwrap();
    // Path 0-1-2-3 with unit weights; at delta 2 the pair (1,2) must share a
    // cluster of radius below delta, but every cluster is a singleton.
    std::fs::write(d.path().join("g.txt"), "0 1 1\n1 2 1\n2 3 1\n").unwrap();
    std::fs::write(d.path().join("p.txt"), "2 1 1 0.25\npartition 0\n0: 0\n1: 1\n2: 2\n3: 3\n").unwrap();
    let o = relspan(d.path(), &["verify", "--instance", "g.txt", "--ppc", "p.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("padding violation"), "{}", stdout(&o));
}

#[test]
fn injected_short_edge_is_a_domination_violation() {
    let d = tempfile::tempdir().unwrap();
    assert!(relspan(d.path(), &["gen", "instance", "--preset", "tree-metric", "--n", "16", "--out", "g.txt"]).status.success());
    assert!(relspan(d.path(), &["build", "spanner", "--preset", "tree-metric", "--instance", "g.txt", "--out", "s.txt"])
        .status
        .success());
    let ok = relspan(d.path(), &["verify", "--instance", "g.txt", "--spanner", "s.txt", "--bound", "3"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let text = std::fs::read_to_string(d.path().join("s.txt")).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let last = lines.pop().unwrap();
    let f: Vec<&str> = last.split_whitespace().collect();
    lines.push(format!("{} {} 0.001", f[0], f[1]));
    std::fs::write(d.path().join("s.txt"), lines.join("\n") + "\n").unwrap();
    let bad = relspan(d.path(), &["verify", "--instance", "g.txt", "--spanner", "s.txt"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("domination violation"));
}

#[test]
fn csv_is_byte_stable_across_runs_and_threads() {
    let d = tempfile::tempdir().unwrap();
    let run = |threads: &str, out: &str| {
        let t = format!("threads={threads}");
        let o = relspan(d.path(), &["eval", "--preset", "khst", "--n", "96", "--trials", "5", "--seed", "9", "--set", &t, "--out", out]);
        assert!(o.status.success());
        std::fs::read(d.path().join(out)).unwrap()
    };
    let a = run("1", "a.csv");
    assert_eq!(a, run("1", "b.csv"));
    assert_eq!(a, run("4", "c.csv"));
}

#[test]
fn lower_bound_instance_is_written() {
    let d = tempfile::tempdir().unwrap();
    let o = relspan(d.path(), &["gen", "lb", "--kind", "hst_star_of_stars", "--nu", "0.0625", "--out", "lb.hst"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(d.path().join("lb.hst")).unwrap();
    // 4 x 4 leaves, 4 star centers and the root.
    assert_eq!(text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count(), 16 + 4 + 1);
}
