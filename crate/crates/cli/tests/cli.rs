use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use portphase::confluence::{builtin, ConfluenceRep, DualRep, CONFLUENCE_TOL};
use portphase::matrix::{cx, parse_matrix_csv, relative_diff, ComplexMatrix};
use portphase::network::fig4_network;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_portphase")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn identity_has_zero_phases() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("i.csv"), "1,0\n0,1\n").unwrap();
    let o = run(dir.path(), &["phase", "i.csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0 0, Sectorial");

    fs::write(dir.path().join("r.csv"), "1,0\n0,1j\n").unwrap();
    let o = stdout(&run(dir.path(), &["--degrees", "phase", "r.csv"]));
    let (list, class) = o.trim().split_once(", ").unwrap();
    let got: Vec<f64> = list.split(' ').map(|x| x.parse().unwrap()).collect();
    assert_eq!(class, "Sectorial");
    assert!((got[0] - 90.0).abs() < 1e-9 && got[1].abs() < 1e-9, "{got:?}");

    // W is a segment through the origin
    fs::write(dir.path().join("k.csv"), "0,-1\n1,0\n").unwrap();
    assert_eq!(stdout(&run(dir.path(), &["phase", "k.csv"])).trim(), "none, NonSectorial");

    fs::write(dir.path().join("z.csv"), "0,0\n0,0\n").unwrap();
    assert_eq!(stdout(&run(dir.path(), &["phase", "z.csv"])).trim(), "(zero), SemiSectorial");
}

#[test]
fn exit_codes_follow_error_kind() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("bad.csv"), "1,x\n").unwrap();
    fs::write(p.join("a.csv"), "2,1\n1,2\n").unwrap();
    fs::write(p.join("b.csv"), "1,0\n0,1\n").unwrap();
    assert_eq!(run(p, &["phase", "bad.csv"]).status.code(), Some(2));
    assert_eq!(run(p, &["phase", "missing.csv"]).status.code(), Some(2));
    assert_eq!(run(p, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(p, &["connect", "a.csv", "b.csv", "--kind", "warp"]).status.code(), Some(2));
    // hybrid has no default split
    assert_eq!(run(p, &["connect", "a.csv", "b.csv", "--kind", "hybrid"]).status.code(), Some(2));

    let o = run(p, &["connect", "a.csv", "b.csv", "--kind", "series"]);
    assert!(o.status.success());
    let z = parse_matrix_csv(&stdout(&o)).unwrap();
    assert_eq!(z, ComplexMatrix::from_row_slice(2, 2, &[cx(3.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(3.0, 0.0)]));

    // Jc and Jb both at 0: no sign makes the difference sectorial
    fs::write(p.join("c.csv"), "1\n").unwrap();
    fs::write(p.join("one.csv"), "1\n").unwrap();
    let o = run(p, &["subtract", "c.csv", "one.csv", "--kind", "series", "--predict"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("predicted unavailable"));
}

#[test]
fn sweep_csv_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("net.json"), fig4_network(1.0, 1.0, 2.0, 1.0).to_json()).unwrap();
    let o = run(p, &["sweep", "net.json", "--wmin", "0.1", "--wmax", "10", "--ppd", "5", "--out", "s.csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(p.join("s.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega,phi_min_rad,phi_max_rad,class,detour"));
    let mut prev = 0.0;
    let mut n = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 5);
        let w: f64 = f[0].parse().unwrap();
        assert!(w > prev);
        prev = w;
        let (lo, hi): (f64, f64) = (f[1].parse().unwrap(), f[2].parse().unwrap());
        assert!(lo <= hi && lo.abs() <= 1.6 && hi.abs() <= 1.6);
        n += 1;
    }
    assert!(n >= 11);

    let deg = stdout(&run(p, &["--degrees", "sweep", "net.json", "--wmin", "0.1", "--wmax", "10", "--ppd", "5"]));
    assert!(deg.starts_with("omega,phi_min_deg,phi_max_deg"));
}

#[test]
fn confluence_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let rep = builtin::hybrid(3, 1);
    fs::write(p.join("rep.json"), rep.to_json()).unwrap();
    assert_eq!(ConfluenceRep::from_json(&rep.to_json()).unwrap(), rep);

    let o = run(p, &["confluence", "rep.json", "--validate"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("dim 5\n"));

    let o = run(p, &["confluence", "--builtin", "hybrid", "3", "1", "--dual"]);
    let dual = DualRep::from_json(&stdout(&o)).unwrap();
    assert!(portphase::confluence::is_dual_of(&rep, &dual, CONFLUENCE_TOL));
    fs::write(p.join("dual.json"), stdout(&o)).unwrap();

    fs::write(p.join("za.csv"), "2,1,0\n1,2,0\n0,0,1\n").unwrap();
    fs::write(p.join("zb.csv"), "1,0,0\n0,3,1\n0,1,1\n").unwrap();
    let via_rep = stdout(&run(p, &["confluence", "rep.json", "--connect", "za.csv", "zb.csv"]));
    let via_dual = stdout(&run(p, &["confluence", "rep.json", "--dual-file", "dual.json", "--connect", "za.csv", "zb.csv"]));
    let direct = stdout(&run(p, &["connect", "za.csv", "zb.csv", "--kind", "hybrid", "--split", "1"]));
    let [a, b, c] = [via_rep, via_dual, direct].map(|t| parse_matrix_csv(&t).unwrap());
    assert!(relative_diff(&a, &c) < 1e-9 && relative_diff(&b, &c) < 1e-9);

    // axiom (ii) fails: c does not depend on the ports at all
    fs::write(
        p.join("broken.json"),
        ConfluenceRep {
            s: portphase::RealMatrix::zeros(1, 1),
            t: portphase::RealMatrix::zeros(1, 1),
            u: portphase::RealMatrix::from_element(1, 1, 1.0),
            w: portphase::RealMatrix::from_element(1, 1, -1.0),
        }
        .to_json(),
    )
    .unwrap();
    assert_eq!(run(p, &["confluence", "broken.json", "--validate"]).status.code(), Some(4));
}

#[test]
fn verify_reports_and_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--suite", "lemma1", "--trials", "20", "--seed", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("suite lemma1 seed 3") && text.trim_end().ends_with("PASS"));
    assert_eq!(stdout(&run(dir.path(), &["verify", "--suite", "lemma1", "--trials", "20", "--seed", "3"])), text);
    assert_eq!(run(dir.path(), &["verify", "--suite", "nope"]).status.code(), Some(2));
}
