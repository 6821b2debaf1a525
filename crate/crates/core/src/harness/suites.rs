//! Executable property suites. Each trial draws from its own seeded stream,
//! trials run in parallel, and outcomes are folded in trial order, so a
//! report depends only on `(trials, seed)`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::confluence::{builtin, ConfluenceRep, CONFLUENCE_TOL};
use crate::connections::{Connection, ConnectionKind};
use crate::error::{Error, Result};
use crate::harness::generators::{
    random_confluence_with, random_interval, random_nonsingular, random_real, random_sectorial_with, trial_rng,
};
use crate::interval::{wrap_near, PhaseInterval};
use crate::linalg::{pinv, real_rank, schur_complement, DEFAULT_SCHUR_TOL};
use crate::matrix::{cx, format_matrix_csv, relative_diff, to_complex, ComplexMatrix, Partition, RealMatrix};
use crate::phase::{analyze, phases, SectorialTag, ANGLE_TOL, DEFAULT_TOL};
use crate::subtractions::{predict_subtraction_interval, subtract};

/// Widest interval used for matrix trials.
const MAX_WIDTH: f64 = PI - 0.1;

/// Largest port count in matrix trials.
const MAX_PORTS: usize = 6;

/// Relative agreement required between two constructions of one matrix.
pub const ORACLE_TOL: f64 = 1e-8;

/// Relative agreement required under a change of dual representation.
pub const PARAM_TOL: f64 = 1e-9;

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 12] = [
    "lemma1", "lemma2", "lemma3", "lemma4", "lemma5", "lemma6", "prop1", "prop2", "theorem1", "theorem2", "theorem3",
    "theorem4",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub trial: usize,
    /// Generator stream of the trial; `trial_rng(seed, stream)` replays it.
    pub stream: u64,
    pub detail: String,
    /// `(file name, contents)` pairs for replay.
    pub artifacts: Vec<(String, String)>,
}

/// Tallies for one property within a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    pub skipped: usize,
    /// Largest amount by which a checked quantity exceeded its bound
    /// (radians for interval checks, relative error for oracle checks).
    pub worst: f64,
    pub failures: Vec<Failure>,
}

impl Section {
    pub fn failed(&self) -> usize {
        self.failures.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.sections.iter().all(|s| s.failures.is_empty())
    }

    pub fn failed(&self) -> usize {
        self.sections.iter().map(Section::failed).sum()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite {} seed {}", self.suite, self.seed);
        for s in &self.sections {
            let _ = writeln!(
                out,
                "  {:<16} trials {:>6}  passed {:>6}  skipped {:>5}  failed {:>5}  worst {:.3e}",
                s.name,
                s.trials,
                s.passed,
                s.skipped,
                s.failed(),
                s.worst
            );
            for f in s.failures.iter().take(10) {
                let _ = writeln!(out, "    trial {} (seed {} stream {:#x}): {}", f.trial, self.seed, f.stream, f.detail);
            }
            if s.failed() > 10 {
                let _ = writeln!(out, "    ... {} more", s.failed() - 10);
            }
        }
        let _ = writeln!(out, "{}", if self.is_ok() { "PASS" } else { "FAIL" });
        out
    }

    /// Writes each failure's artifacts as `<suite>-<section>-<trial>-<name>`.
    pub fn dump(&self, dir: &Path) -> std::io::Result<usize> {
        fs::create_dir_all(dir)?;
        let mut written = 0;
        for s in &self.sections {
            for f in &s.failures {
                for (name, body) in &f.artifacts {
                    let file = dir.join(format!("{}-{}-{}-{}", self.suite, s.name, f.trial, name));
                    fs::write(file, body)?;
                    written += 1;
                }
            }
        }
        Ok(written)
    }
}

/// Outcome of one trial.
enum Outcome {
    /// Checked; the value is the amount by which the bound was exceeded
    /// (zero or negative when comfortably inside).
    Pass(f64),
    Skip,
    Fail(f64, String, Vec<(String, String)>),
}

fn run_section<F>(name: &str, trials: usize, seed: u64, stream: u64, f: F) -> Section
where
    F: Fn(&mut ChaCha8Rng) -> Outcome + Sync,
{
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, (stream << 32) | k as u64);
            f(&mut rng)
        })
        .collect();
    let mut s = Section { name: name.to_string(), trials, passed: 0, skipped: 0, worst: 0.0, failures: Vec::new() };
    for (trial, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Pass(x) => {
                s.passed += 1;
                s.worst = s.worst.max(x);
            }
            Outcome::Skip => s.skipped += 1,
            Outcome::Fail(x, detail, artifacts) => {
                s.worst = s.worst.max(x);
                let stream = (stream << 32) | trial as u64;
                s.failures.push(Failure { trial, stream, detail, artifacts });
            }
        }
    }
    s
}

fn csv(name: &str, m: &ComplexMatrix) -> (String, String) {
    (format!("{name}.csv"), format_matrix_csv(m))
}

fn describe(j: &PhaseInterval) -> String {
    format!("[{:.9}, {:.9}]", j.lo(), j.hi())
}

/// Checks that `z` is (semi-)sectorial with phases inside `bound`.
fn check_inside(z: &ComplexMatrix, bound: &PhaseInterval, artifacts: Vec<(String, String)>) -> Outcome {
    let a = analyze(z, DEFAULT_TOL);
    if a.class.tag == SectorialTag::NonSectorial || a.phases.is_none() {
        let mut art = artifacts;
        art.push(csv("result", z));
        return Outcome::Fail(f64::INFINITY, format!("result is not semi-sectorial (margin {:.3e})", a.class.margin), art);
    }
    let Some(j) = a.interval() else {
        return Outcome::Pass(0.0);
    };
    let excess = bound.excess(&j);
    if excess <= ANGLE_TOL {
        Outcome::Pass(excess)
    } else {
        let mut art = artifacts;
        art.push(csv("result", z));
        Outcome::Fail(excess, format!("phases {} leave {}", describe(&j), describe(bound)), art)
    }
}

fn sectorial(rng: &mut ChaCha8Rng, n: usize, j: &PhaseInterval) -> ComplexMatrix {
    random_sectorial_with(rng, n, j).expect("interval narrower than pi")
}

fn ports(rng: &mut ChaCha8Rng, lo: usize) -> usize {
    rng.random_range(lo..=MAX_PORTS)
}

// ---------------------------------------------------------------------------
// Single-matrix and two-matrix properties

pub fn check_lemma1(trials: usize, seed: u64) -> Report {
    let s = run_section("sum", trials, seed, 1, |rng| {
        let j = random_interval(rng, MAX_WIDTH);
        let n = ports(rng, 1);
        let (a, b) = (sectorial(rng, n, &j), sectorial(rng, n, &j));
        check_inside(&(&a + &b), &j, vec![csv("za", &a), csv("zb", &b)])
    });
    Report { suite: "lemma1".into(), seed, sections: vec![s] }
}

pub fn check_lemma2(trials: usize, seed: u64) -> Report {
    let s = run_section("pseudo-inverse", trials, seed, 2, |rng| {
        let j = random_interval(rng, MAX_WIDTH);
        let n = ports(rng, 1);
        let c = sectorial(rng, n, &j);
        let inv = pinv(&c);
        let (Ok(p), Ok(q)) = (phases(&c, DEFAULT_TOL), phases(&inv, DEFAULT_TOL)) else {
            return Outcome::Fail(f64::INFINITY, "input or inverse not sectorial".into(), vec![csv("c", &c)]);
        };
        // Phases come sorted descending, so the inverse's list is the
        // negated input list read backwards.
        let err = p
            .phases
            .iter()
            .rev()
            .zip(&q.phases)
            .map(|(x, y)| (wrap_near(*y, -*x) + *x).abs())
            .fold(0.0, f64::max);
        if err <= ANGLE_TOL {
            Outcome::Pass(err)
        } else {
            Outcome::Fail(err, format!("phase mismatch {err:.3e}"), vec![csv("c", &c)])
        }
    });
    Report { suite: "lemma2".into(), seed, sections: vec![s] }
}

pub fn check_lemma3(trials: usize, seed: u64) -> Report {
    let s = run_section("principal", trials, seed, 3, |rng| {
        let j = random_interval(rng, MAX_WIDTH);
        let n = ports(rng, 1);
        let c = sectorial(rng, n, &j);
        let mut idx: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if idx.is_empty() {
            idx.push(rng.random_range(0..n));
        }
        let sub = ComplexMatrix::from_fn(idx.len(), idx.len(), |a, b| c[(idx[a], idx[b])]);
        let jc = analyze(&c, DEFAULT_TOL).interval().expect("sectorial input");
        check_inside(&sub, &jc, vec![csv("c", &c)])
    });
    Report { suite: "lemma3".into(), seed, sections: vec![s] }
}

pub fn check_lemma4(trials: usize, seed: u64) -> Report {
    let s = run_section("congruence", trials, seed, 4, |rng| {
        let j = random_interval(rng, MAX_WIDTH);
        let n = ports(rng, 1);
        let c = sectorial(rng, n, &j);
        let p = random_nonsingular(rng, n, 1e2);
        let d = p.adjoint() * &c * &p;
        let (Some(jc), Some(jd)) = (analyze(&c, DEFAULT_TOL).interval(), analyze(&d, DEFAULT_TOL).interval()) else {
            return Outcome::Fail(f64::INFINITY, "lost sectoriality".into(), vec![csv("c", &c), csv("p", &p)]);
        };
        let jd = jd.aligned_to(jc.mid());
        let err = (jd.lo() - jc.lo()).abs().max((jd.hi() - jc.hi()).abs());
        if err <= ANGLE_TOL {
            Outcome::Pass(err)
        } else {
            Outcome::Fail(err, format!("{} vs {}", describe(&jc), describe(&jd)), vec![csv("c", &c), csv("p", &p)])
        }
    });
    Report { suite: "lemma4".into(), seed, sections: vec![s] }
}

pub fn check_lemma5(trials: usize, seed: u64) -> Report {
    let s = run_section("schur", trials, seed, 5, |rng| {
        let j = random_interval(rng, MAX_WIDTH);
        let n = ports(rng, 2);
        let c = sectorial(rng, n, &j);
        let r = rng.random_range(1..n);
        let jc = analyze(&c, DEFAULT_TOL).interval().expect("sectorial input");
        match schur_complement(&c, Partition::new(r), DEFAULT_SCHUR_TOL) {
            Ok(z) => check_inside(&z, &jc, vec![csv("c", &c)]),
            Err(e) => Outcome::Fail(f64::INFINITY, e.to_string(), vec![csv("c", &c)]),
        }
    });
    Report { suite: "lemma5".into(), seed, sections: vec![s] }
}

pub fn check_lemma6(trials: usize, seed: u64) -> Report {
    let s = run_section("compression", trials, seed, 6, |rng| {
        let j = random_interval(rng, MAX_WIDTH);
        let n = ports(rng, 1);
        let c = sectorial(rng, n, &j);
        let k = rng.random_range(1..=n);
        let jm = crate::harness::generators::random_complex(rng, k, n);
        let jc = analyze(&c, DEFAULT_TOL).interval().expect("sectorial input");
        check_inside(&(&jm * &c * jm.adjoint()), &jc, vec![csv("c", &c), csv("j", &jm)])
    });
    Report { suite: "lemma6".into(), seed, sections: vec![s] }
}

// ---------------------------------------------------------------------------
// Scalar checks

fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.random_range(-3.0..3.0))
}

/// Excess of `phi` over `[lo, hi]` modulo 2pi.
fn scalar_excess(phi: f64, lo: f64, hi: f64) -> f64 {
    let j = PhaseInterval::new(lo, hi).expect("at most pi wide");
    j.excess(&PhaseInterval::point(phi))
}

pub fn check_prop1(trials: usize, seed: u64) -> Report {
    let s = run_section("scalar-sum", trials, seed, 7, |rng| {
        let ta = rng.random_range(-PI..PI);
        let tb = ta + rng.random_range(-PI..PI);
        let za = cx(ta.cos(), ta.sin()) * log_uniform(rng);
        let zb = cx(tb.cos(), tb.sin()) * log_uniform(rng);
        let tc = (za + zb).arg();
        let e = scalar_excess(tc, ta.min(tb), ta.max(tb));
        if e <= ANGLE_TOL {
            Outcome::Pass(e)
        } else {
            Outcome::Fail(e, format!("za={za} zb={zb} arg={tc}"), Vec::new())
        }
    });
    Report { suite: "prop1".into(), seed, sections: vec![s] }
}

pub fn check_prop2(trials: usize, seed: u64) -> Report {
    let s = run_section("scalar-diff", trials, seed, 8, |rng| {
        let tb = rng.random_range(-PI..PI);
        let d = rng.random_range(-2.0 * PI..2.0 * PI);
        let tc = tb + d;
        let zb = cx(tb.cos(), tb.sin()) * log_uniform(rng);
        let zc = cx(tc.cos(), tc.sin()) * log_uniform(rng);
        let shifted = if d >= 0.0 { tb + PI } else { tb - PI };
        let tx = (zc - zb).arg();
        let e = scalar_excess(tx, tc.min(shifted), tc.max(shifted));
        if e <= ANGLE_TOL {
            Outcome::Pass(e)
        } else {
            Outcome::Fail(e, format!("zc={zc} zb={zb} arg={tx}"), Vec::new())
        }
    });
    Report { suite: "prop2".into(), seed, sections: vec![s] }
}

// ---------------------------------------------------------------------------
// Connections, subtractions and confluences

/// Random operands for `kind`, returned as `(Connection, Za, Zb)`.
fn connection_operands(
    rng: &mut ChaCha8Rng,
    kind: ConnectionKind,
    j: &PhaseInterval,
) -> (Connection, ComplexMatrix, ComplexMatrix) {
    match kind {
        ConnectionKind::Shorted | ConnectionKind::Open => {
            let n = ports(rng, 1);
            let r = rng.random_range(1..=n);
            let a = sectorial(rng, n, j);
            (Connection::new(kind, r), a.clone(), a)
        }
        ConnectionKind::Series | ConnectionKind::Parallel => {
            let n = ports(rng, 1);
            (Connection::new(kind, 0), sectorial(rng, n, j), sectorial(rng, n, j))
        }
        ConnectionKind::Hybrid => {
            let n = ports(rng, 1);
            let r = rng.random_range(0..=n);
            (Connection::new(kind, r), sectorial(rng, n, j), sectorial(rng, n, j))
        }
        ConnectionKind::Cascade => {
            let (r, s, t) = cascade_sizes(rng);
            (Connection::new(kind, s), sectorial(rng, r + s, j), sectorial(rng, s + t, j))
        }
        ConnectionKind::CascadeLoad => {
            let n = ports(rng, 2);
            let r = rng.random_range(1..n);
            (Connection::new(kind, r), sectorial(rng, n, j), sectorial(rng, n - r, j))
        }
        ConnectionKind::HybridCascade => {
            let r = rng.random_range(1..=MAX_PORTS / 2);
            let s = rng.random_range(1..=MAX_PORTS - r);
            (Connection::new(kind, s), sectorial(rng, r + s, j), sectorial(rng, s + r, j))
        }
    }
}

/// `(r, s, t)` with `s >= 1`, `r + t >= 1` and both operands at most
/// [`MAX_PORTS`] wide.
fn cascade_sizes(rng: &mut ChaCha8Rng) -> (usize, usize, usize) {
    loop {
        let s = rng.random_range(1..MAX_PORTS);
        let r = rng.random_range(0..=MAX_PORTS - s);
        let t = rng.random_range(0..=MAX_PORTS - s);
        if r + t >= 1 {
            return (r, s, t);
        }
    }
}

pub fn check_theorem1(trials: usize, seed: u64) -> Report {
    let sections = ConnectionKind::ALL
        .iter()
        .enumerate()
        .map(|(i, &kind)| {
            run_section(kind.name(), trials, seed, 100 + i as u64, |rng| {
                let j = random_interval(rng, MAX_WIDTH);
                let (conn, za, zb) = connection_operands(rng, kind, &j);
                let art = vec![csv("za", &za), csv("zb", &zb)];
                match conn.apply(&za, &zb, DEFAULT_SCHUR_TOL) {
                    Ok(z) => check_inside(&z, &j, art),
                    Err(e) => Outcome::Fail(f64::INFINITY, format!("connection failed: {e}"), art),
                }
            })
        })
        .collect();
    Report { suite: "theorem1".into(), seed, sections }
}

pub const SUBTRACTION_KINDS: [ConnectionKind; 5] = [
    ConnectionKind::Series,
    ConnectionKind::Parallel,
    ConnectionKind::Hybrid,
    ConnectionKind::Cascade,
    ConnectionKind::HybridCascade,
];

/// `(Jc, Jb)` whose subtraction hull is narrower than pi: `Jb` is drawn
/// first, a window `H` of width below pi is placed around `Jb + pi`, and
/// `Jc` is a sub-interval of `H`.
fn subtraction_intervals(rng: &mut ChaCha8Rng) -> (PhaseInterval, PhaseInterval) {
    let jb = random_interval(rng, MAX_WIDTH - 0.1);
    let (m, big_m) = (jb.lo() + PI, jb.hi() + PI);
    let h = rng.random_range(jb.width()..=MAX_WIDTH);
    let lo = rng.random_range((big_m - h)..=m);
    let a = rng.random_range(lo..=lo + h);
    let b = rng.random_range(lo..=lo + h);
    let jc = PhaseInterval::new(a.min(b), a.max(b)).expect("inside a window narrower than pi");
    (jc, jb)
}

pub fn check_theorem2(trials: usize, seed: u64) -> Report {
    let sections = SUBTRACTION_KINDS
        .iter()
        .enumerate()
        .map(|(i, &kind)| {
            run_section(kind.name(), trials, seed, 200 + i as u64, |rng| {
                let (jc, jb) = subtraction_intervals(rng);
                let (split, nc, nb) = match kind {
                    ConnectionKind::Cascade => {
                        let t = rng.random_range(1..=MAX_PORTS / 2);
                        let r = rng.random_range(0..=MAX_PORTS - t);
                        (0, r + t, 2 * t)
                    }
                    ConnectionKind::HybridCascade => {
                        let r = rng.random_range(1..=MAX_PORTS / 2);
                        (0, 2 * r, 2 * r)
                    }
                    _ => {
                        let n = ports(rng, 1);
                        (rng.random_range(0..=n), n, n)
                    }
                };
                let zc = sectorial(rng, nc, &jc);
                let zb = sectorial(rng, nb, &jb);
                let art = vec![csv("zc", &zc), csv("zb", &zb)];
                let predicted = match predict_subtraction_interval(&jc, &jb) {
                    Ok(p) => p,
                    Err(e) => return Outcome::Fail(f64::INFINITY, format!("no prediction: {e}"), art),
                };
                match subtract(kind, &zc, &zb, split) {
                    Ok(zx) => check_inside(&zx, &predicted, art),
                    Err(Error::SingularPivot(_)) => Outcome::Skip,
                    Err(e) => Outcome::Fail(f64::INFINITY, format!("subtraction failed: {e}"), art),
                }
            })
        })
        .collect();
    Report { suite: "theorem2".into(), seed, sections }
}

fn oracle_outcome(err: f64, tol: f64, art: Vec<(String, String)>) -> Outcome {
    if err <= tol {
        Outcome::Pass(err)
    } else {
        Outcome::Fail(err, format!("relative difference {err:.3e}"), art)
    }
}

pub fn check_theorem3(trials: usize, seed: u64) -> Report {
    let kinds = [
        ConnectionKind::Series,
        ConnectionKind::Parallel,
        ConnectionKind::Hybrid,
        ConnectionKind::Cascade,
        ConnectionKind::HybridCascade,
    ];
    let mut sections: Vec<Section> = kinds
        .iter()
        .enumerate()
        .map(|(i, &kind)| {
            run_section(kind.name(), trials, seed, 300 + i as u64, |rng| {
                let j = random_interval(rng, MAX_WIDTH);
                let (conn, za, zb) = connection_operands(rng, kind, &j);
                let rep = builtin_for(conn, za.nrows(), zb.nrows());
                let art = vec![csv("za", &za), csv("zb", &zb), ("rep.json".into(), rep.to_json())];
                let direct = match conn.apply(&za, &zb, DEFAULT_SCHUR_TOL) {
                    Ok(z) => z,
                    Err(e) => return Outcome::Fail(f64::INFINITY, format!("direct formula failed: {e}"), art),
                };
                let general = rep.dual(CONFLUENCE_TOL).and_then(|d| d.connect(&za, &zb, DEFAULT_SCHUR_TOL));
                match general {
                    Ok(z) => oracle_outcome(relative_diff(&z, &direct), ORACLE_TOL, art),
                    Err(e) => Outcome::Fail(f64::INFINITY, format!("confluence failed: {e}"), art),
                }
            })
        })
        .collect();

    let trials_param = trials.div_ceil(2);
    sections.push(run_section("parametrization", trials_param, seed, 310, |rng| {
        let n = rng.random_range(1..=4);
        let rep = random_confluence_with(rng, n);
        let j = random_interval(rng, MAX_WIDTH);
        let (za, zb) = (sectorial(rng, n, &j), sectorial(rng, n, &j));
        let art = vec![csv("za", &za), csv("zb", &zb), ("rep.json".into(), rep.to_json())];
        let Ok(d) = rep.dual(CONFLUENCE_TOL) else {
            return Outcome::Fail(f64::INFINITY, "dual failed".into(), art);
        };
        let Ok(z0) = d.connect(&za, &zb, DEFAULT_SCHUR_TOL) else {
            return Outcome::Skip;
        };
        let gamma = random_real(rng, n, n);
        let lambda = well_conditioned_real(rng, n);
        match d.parametrize(&gamma, &lambda).and_then(|p| p.connect(&za, &zb, DEFAULT_SCHUR_TOL)) {
            Ok(z1) => oracle_outcome(relative_diff(&z1, &z0), PARAM_TOL, art),
            Err(e) => Outcome::Fail(f64::INFINITY, format!("parametrized dual failed: {e}"), art),
        }
    }));
    Report { suite: "theorem3".into(), seed, sections }
}

fn well_conditioned_real(rng: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    loop {
        let m = random_real(rng, n, n);
        if crate::linalg::condition_number(&to_complex(&m)) <= 10.0 {
            return m;
        }
    }
}

/// The builtin representation matching a direct connection.
fn builtin_for(conn: Connection, na: usize, nb: usize) -> ConfluenceRep {
    match conn.kind {
        ConnectionKind::Series => builtin::series(na),
        ConnectionKind::Parallel => builtin::parallel(na),
        ConnectionKind::Hybrid => builtin::hybrid(na, conn.split),
        ConnectionKind::Cascade => builtin::cascade(na - conn.split, conn.split, nb - conn.split),
        ConnectionKind::HybridCascade => builtin::hybrid_cascade(na - conn.split, conn.split),
        other => panic!("no builtin representation for {other}"),
    }
}

pub fn check_theorem4(trials: usize, seed: u64) -> Report {
    let s = run_section("general", trials, seed, 400, |rng| {
        let n = rng.random_range(1..=4);
        let rep = random_confluence_with(rng, n);
        let j = random_interval(rng, MAX_WIDTH);
        let (za, zb) = (sectorial(rng, n, &j), sectorial(rng, n, &j));
        let mut art = vec![csv("za", &za), csv("zb", &zb), ("rep.json".into(), rep.to_json())];
        let diag = rep.validate(CONFLUENCE_TOL);
        if !diag.is_valid() || diag.dim < n || diag.dim > 2 * n {
            return Outcome::Fail(f64::INFINITY, format!("bad confluence: {diag:?}"), art);
        }
        let d = match rep.dual(CONFLUENCE_TOL) {
            Ok(d) => d,
            Err(e) => return Outcome::Fail(f64::INFINITY, format!("dual failed: {e}"), art),
        };
        art.push(("dual.json".into(), d.to_json()));
        let Ok(z) = d.connect(&za, &zb, DEFAULT_SCHUR_TOL) else {
            return Outcome::Skip;
        };
        if analyze(&z, DEFAULT_TOL).class.tag == SectorialTag::NonSectorial {
            return Outcome::Skip;
        }
        check_inside(&z, &j, art)
    });
    let dims = run_section("dimension", trials, seed, 401, |rng| {
        let n = rng.random_range(1..=6);
        let rep = random_confluence_with(rng, n);
        let dim = rep.dim();
        let dual_dim = match rep.dual(CONFLUENCE_TOL) {
            Ok(d) => d.as_confluence().dim(),
            Err(_) => 0,
        };
        let rank_ok = real_rank(&rep.stacked(), CONFLUENCE_TOL) >= n;
        if dim >= n && dim <= 2 * n && dim + dual_dim == 3 * n && rank_ok {
            Outcome::Pass(0.0)
        } else {
            Outcome::Fail(1.0, format!("n {n} dim {dim} dual dim {dual_dim}"), vec![("rep.json".into(), rep.to_json())])
        }
    });
    Report { suite: "theorem4".into(), seed, sections: vec![s, dims] }
}

/// Runs a suite by name.
pub fn run_suite(name: &str, trials: usize, seed: u64) -> Result<Report> {
    Ok(match name {
        "lemma1" => check_lemma1(trials, seed),
        "lemma2" => check_lemma2(trials, seed),
        "lemma3" => check_lemma3(trials, seed),
        "lemma4" => check_lemma4(trials, seed),
        "lemma5" => check_lemma5(trials, seed),
        "lemma6" => check_lemma6(trials, seed),
        "prop1" => check_prop1(trials, seed),
        "prop2" => check_prop2(trials, seed),
        "theorem1" => check_theorem1(trials, seed),
        "theorem2" => check_theorem2(trials, seed),
        "theorem3" => check_theorem3(trials, seed),
        "theorem4" => check_theorem4(trials, seed),
        other => return Err(Error::Parse(format!("unknown suite `{other}`; expected one of {}", SUITES.join(", ")))),
    })
}
