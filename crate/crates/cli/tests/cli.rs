use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const F7: &str = "G[10,190] F[0,50] *((F[1,50] m1* < m1) && (F[1,50] m1* > m1))";
const F8: &str = "G[10,200] *(F[1,50] m1* <= m1)";

fn stlstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stlstar")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn simulate(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut args = vec!["simulate", "-o", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = stlstar(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn ramp(dir: &Path) -> PathBuf {
    let path = dir.join("ramp.csv");
    fs::write(&path, "time,x\n0,0\n10,10\n").unwrap();
    path
}

#[test]
fn monitor_exit_codes_follow_the_verdict() {
    let dir = TempDir::new().unwrap();
    let run = simulate(dir.path(), "run.csv", &[]);
    let o = stlstar(&["monitor", "-s", run.to_str().unwrap(), "-e", F7]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("SAT\n"));

    let damped = simulate(dir.path(), "damped.csv", &["--alpha0", "2", "--samples", "301"]);
    let both = format!("({F7}) && ({F8})");
    let o = stlstar(&["monitor", "-s", damped.to_str().unwrap(), "-e", &both]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("UNSAT\n"));

    // {t > t*} and its complement meet at the origin
    let o = stlstar(&["monitor", "-s", ramp(dir.path()).to_str().unwrap(), "-e", "x > x*"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("BOUNDARY\nclosed-set membership of (0, 0): true"));
}

#[test]
fn short_signals_and_parse_errors() {
    let dir = TempDir::new().unwrap();
    let short = simulate(dir.path(), "short.csv", &["--t-end", "100"]);
    let s = short.to_str().unwrap();
    let o = stlstar(&["monitor", "-s", s, "-e", F7]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("needs length 290, signal has 100"));

    let o = stlstar(&["monitor", "-s", s, "-e", F7, "--allow-short"]);
    assert!(code(&o) <= 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("may be wrong"));

    let o = stlstar(&["monitor", "-s", s, "-e", "m1 == 3"]);
    assert_eq!(code(&o), 4);
    let o = stlstar(&["monitor", "-s", s, "-e", "G[0,10] q > 1"]);
    assert_eq!(code(&o), 4);
    let o = stlstar(&[
        "monitor",
        "-s",
        dir.path().join("missing.csv").to_str().unwrap(),
        "-e",
        "m1 > 0",
    ]);
    assert_eq!(code(&o), 5);
}

#[test]
fn formula_from_file_and_json_report() {
    let dir = TempDir::new().unwrap();
    let ramp = ramp(dir.path());
    let f = dir.path().join("f.stl");
    fs::write(&f, "F[0,5] x > 3\n").unwrap();
    let o = stlstar(&[
        "monitor",
        "-s",
        ramp.to_str().unwrap(),
        "-f",
        f.to_str().unwrap(),
        "--json",
        "--all-nodes",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "SAT");
    let nodes = v["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 2);
    assert_eq!(nodes[1]["formula"], "true U[0,5] x > 3");
    assert_eq!(nodes[1]["region"]["domain"], 10.0);
    assert!(v["stats"]["polygons_peak"].as_u64().unwrap() >= 1);
}

#[test]
fn text_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let run = simulate(dir.path(), "run.csv", &[]);
    let args = ["monitor", "-s", run.to_str().unwrap(), "-e", F7];
    assert_eq!(stlstar(&args).stdout, stlstar(&args).stdout);
    let a = simulate(dir.path(), "a.csv", &[]);
    let b = simulate(dir.path(), "b.csv", &[]);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn check_reports_required_length() {
    let o = stlstar(&["check", "-e", F7]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("required length: 290\n"));
    let o = stlstar(&["check", "-e", "F[2,1] m1 > 0"]);
    assert_eq!(code(&o), 4);
    let dir = TempDir::new().unwrap();
    let o = stlstar(&["check", "-e", "F[0,20] x > 0", "-s", ramp(dir.path()).to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn render_nodes() {
    let dir = TempDir::new().unwrap();
    let ramp = ramp(dir.path());
    let r = ramp.to_str().unwrap();
    let svg = dir.path().join("root.svg");
    let o = stlstar(&[
        "render",
        "-s",
        r,
        "-e",
        "*(F[0,2] x > x* + 1)",
        "-o",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<polygon"));

    let o = stlstar(&["render", "-s", r, "-e", "*(F[0,2] x > x* + 1)", "--node", "list"]);
    assert_eq!(stdout(&o).lines().count(), 3);

    // an empty set still gets a plot and a legend
    let o = stlstar(&["render", "-s", r, "-e", "x > 100"]);
    let text = stdout(&o);
    assert!(!text.contains("<polygon") && text.contains("0 polygons"));

    let o = stlstar(&["render", "-s", r, "-e", "x > 1", "--node", "9"]);
    assert_eq!(code(&o), 5);
}

#[test]
fn oracle_diff_detects_injected_faults() {
    let dir = TempDir::new().unwrap();
    let run = simulate(dir.path(), "run.csv", &["--t-end", "60", "--samples", "31"]);
    let s = run.to_str().unwrap();
    let f = "G[0,20] *(F[0,30] (m1* + 1 > m3 && m1* - 1 < m3))";
    let o = stlstar(&["oracle-diff", "-s", s, "-e", f, "--delta", "0.25"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = stlstar(&["oracle-diff", "-s", s, "-e", f, "--delta", "0.25", "--inject-fault"]);
    assert_eq!(code(&o), 1);
    let o = stlstar(&["oracle-diff", "-s", s, "-e", f, "--delta", "0"]);
    assert_eq!(code(&o), 64);
}

#[test]
fn refine_splits_segments() {
    let dir = TempDir::new().unwrap();
    let ramp = ramp(dir.path());
    let o = stlstar(&["refine", "-s", ramp.to_str().unwrap(), "--factor", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "time,x\n0,0\n2.5,2.5\n5,5\n7.5,7.5\n10,10\n");
}

#[test]
fn sweep_writes_one_row_per_cell() {
    let dir = TempDir::new().unwrap();
    let grid = dir.path().join("grid.csv");
    fs::write(
        &grid,
        "alpha,alpha0,beta,n,samples\n400,0.2,0.2,2,301\n400,2,0.2,2,301\n",
    )
    .unwrap();
    let formulas = dir.path().join("f.txt");
    fs::write(&formulas, format!("# damped oscillation check\n\n({F7}) && ({F8})\n")).unwrap();
    let out = dir.path().join("verdicts.csv");
    let o = stlstar(&[
        "sweep",
        "--grid",
        grid.to_str().unwrap(),
        "--formulas",
        formulas.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(
        rdr.headers().unwrap(),
        vec!["alpha", "alpha0", "beta", "n", "formula", "verdict", "wall_ms"]
    );
    let verdicts: Vec<String> = rdr.records().map(|r| r.unwrap()[5].to_string()).collect();
    assert_eq!(verdicts, ["SAT", "UNSAT"]);

    fs::write(&grid, "alpha,alpha0,beta,n\n").unwrap();
    let o = stlstar(&[
        "sweep",
        "--grid",
        grid.to_str().unwrap(),
        "--formulas",
        formulas.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&o), "alpha,alpha0,beta,n,formula,verdict,wall_ms\n");
}
