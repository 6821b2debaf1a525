//! `portphase`: phases of matrices and n-port networks from the command line.
//!
//! Exit codes: 0 success, 2 bad input, 3 ill-defined or non-existent result,
//! 4 verification failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use portphase::confluence::{builtin, ConfluenceRep, DualRep, CONFLUENCE_TOL};
use portphase::connections::{connect_networks, Connection, ConnectionKind};
use portphase::harness::{run_suite, SUITES};
use portphase::linalg::DEFAULT_SCHUR_TOL;
use portphase::matrix::{cx, format_matrix_csv, format_real, read_matrix_file};
use portphase::network::{
    build_grid, fig14_network, fig4_network, sweep, RationalMatrix, DEFAULT_EPS, DEFAULT_PPD,
};
use portphase::phase::{analyze, PhaseAnalysis, DEFAULT_TOL};
use portphase::subtractions::{predict_subtraction_interval, subtract};
use portphase::{Error, PhaseInterval};

#[derive(Parser)]
#[command(name = "portphase", version, about = "Matrix phases of n-port networks")]
struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print angles in degrees. Files written with --out stay in radians.
    #[arg(long, global = true)]
    degrees: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long, default_value_t = 1e-2)]
    wmin: f64,
    #[arg(long, default_value_t = 1e3)]
    wmax: f64,
    #[arg(long, default_value_t = DEFAULT_PPD)]
    ppd: usize,
    /// Relative radius of the detours around imaginary-axis poles.
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Phases and class of a matrix read from CSV.
    Phase {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Phase bounds of a network over a frequency grid.
    Sweep {
        network: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Connects two matrices, or two networks at one frequency or over a grid.
    Connect {
        a: PathBuf,
        b: Option<PathBuf>,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        split: Option<usize>,
        /// Treat inputs as networks and evaluate at s = j*freq.
        #[arg(long, conflicts_with = "sweep")]
        freq: Option<f64>,
        /// Treat inputs as networks and sweep the result.
        #[arg(long)]
        sweep: bool,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recovers Zx from Zc and Zb.
    Subtract {
        c: PathBuf,
        b: PathBuf,
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        split: usize,
        /// Also print the predicted and computed phase intervals (to stderr).
        #[arg(long)]
        predict: bool,
    },
    /// Confluence operations on a representation file or a builtin.
    Confluence {
        rep: Option<PathBuf>,
        /// Builtin name followed by its sizes, e.g. `--builtin cascade 1 1 1`.
        #[arg(long, num_args = 1.., value_name = "NAME SIZES")]
        builtin: Option<Vec<String>>,
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        validate: bool,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        connect: Option<Vec<PathBuf>>,
        /// Use this dual instead of computing one.
        #[arg(long)]
        dual_file: Option<PathBuf>,
    },
    /// Writes the demo sweeps as CSV files.
    Demo {
        figure: Figure,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Runs property suites.
    Verify {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig5,
    Fig15,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::IllDefined(_)
            | Error::SingularPivot(_)
            | Error::NotExists(_)
            | Error::PoleHit { .. }
            | Error::NotSectorial { .. }
            | Error::NotSemiSectorial { .. }
            | Error::HullTooWide { .. }
            | Error::Overlap
            | Error::NoValidSign => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 2, message: format!("{}: {e}", path.display()) }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("PORTPHASE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Phase { file, tol } => cmd_phase(file, *tol, cli.degrees),
        Command::Sweep { network, grid, out } => cmd_sweep(network, grid, out.as_deref(), cli.degrees),
        Command::Connect { a, b, kind, split, freq, sweep, grid, out } => {
            cmd_connect(a, b.as_deref(), kind, *split, *freq, *sweep, grid, out.as_deref(), cli.degrees)
        }
        Command::Subtract { c, b, kind, split, predict } => cmd_subtract(c, b, kind, *split, *predict, cli.degrees),
        Command::Confluence { rep, builtin, dual, validate, connect, dual_file } => {
            cmd_confluence(rep.as_deref(), builtin.as_deref(), *dual, *validate, connect.as_deref(), dual_file.as_deref())
        }
        Command::Demo { figure, out_dir } => cmd_demo(*figure, out_dir),
        Command::Verify { suite, trials, dump_dir } => cmd_verify(suite, *trials, cli.seed, dump_dir.as_deref()),
    }
}

fn angle(x: f64, degrees: bool) -> String {
    format_real(if degrees { x.to_degrees() } else { x })
}

fn interval_text(j: Option<PhaseInterval>, degrees: bool) -> String {
    match j {
        Some(j) => format!("[{}, {}]", angle(j.lo(), degrees), angle(j.hi(), degrees)),
        None => "none".into(),
    }
}

fn phase_line(a: &PhaseAnalysis, degrees: bool) -> String {
    let list = match &a.phases {
        Some(p) if p.is_empty() => "(zero)".to_string(),
        Some(p) => p.iter().map(|&x| angle(x, degrees)).collect::<Vec<_>>().join(" "),
        None => "none".into(),
    };
    format!("{list}, {}", a.class.tag.name())
}

fn cmd_phase(file: &Path, tol: f64, degrees: bool) -> CmdResult {
    let c = read_matrix_file(file)?;
    println!("{}", phase_line(&analyze(&c, tol), degrees));
    Ok(())
}

fn write_or_print(out: Option<&Path>, file_text: &str, screen_text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, file_text).map_err(|e| io_failure(p, e)),
        None => {
            print!("{screen_text}");
            Ok(())
        }
    }
}

fn cmd_sweep(network: &Path, g: &GridArgs, out: Option<&Path>, degrees: bool) -> CmdResult {
    let z = RationalMatrix::read(network)?;
    let grid = build_grid(&z, g.wmin, g.wmax, g.ppd, g.eps)?;
    let r = sweep(&z, &grid, DEFAULT_TOL);
    write_or_print(out, &r.to_csv(false), &r.to_csv(degrees))
}

/// Split to use when none was given, if the kind has an obvious one.
fn default_split(kind: ConnectionKind, na: usize, nb: usize) -> Option<usize> {
    match kind {
        ConnectionKind::Series | ConnectionKind::Parallel => Some(0),
        ConnectionKind::CascadeLoad => na.checked_sub(nb),
        _ => None,
    }
}

fn resolve_split(kind: ConnectionKind, split: Option<usize>, na: usize, nb: usize) -> Result<usize, Failure> {
    split.or_else(|| default_split(kind, na, nb)).ok_or_else(|| Failure {
        code: 2,
        message: format!("--split is required for `{kind}`"),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_connect(
    a: &Path,
    b: Option<&Path>,
    kind: &str,
    split: Option<usize>,
    freq: Option<f64>,
    do_sweep: bool,
    g: &GridArgs,
    out: Option<&Path>,
    degrees: bool,
) -> CmdResult {
    let kind: ConnectionKind = kind.parse()?;
    let need_b = || -> Result<&Path, Failure> {
        b.ok_or_else(|| Failure { code: 2, message: format!("`{kind}` needs a second input") })
    };
    if freq.is_none() && !do_sweep {
        let za = read_matrix_file(a)?;
        let zb = if kind.is_unary() { za.clone() } else { read_matrix_file(need_b()?)? };
        let conn = Connection::new(kind, resolve_split(kind, split, za.nrows(), zb.nrows())?);
        let zc = conn.apply(&za, &zb, DEFAULT_SCHUR_TOL)?;
        let text = format_matrix_csv(&zc);
        return write_or_print(out, &text, &text);
    }
    let za = RationalMatrix::read(a)?;
    let zb = if kind.is_unary() { za.clone() } else { RationalMatrix::read(need_b()?)? };
    let conn = Connection::new(kind, resolve_split(kind, split, za.n(), zb.n())?);
    if let Some(w) = freq {
        let s = cx(0.0, w);
        let zc = conn.apply(&za.eval(s)?, &zb.eval(s)?, DEFAULT_SCHUR_TOL)?;
        let text = format_matrix_csv(&zc);
        return write_or_print(out, &text, &text);
    }
    let poles = if kind.is_unary() || za.n() != zb.n() { za.clone() } else { za.add(&zb)? };
    let grid = build_grid(&poles, g.wmin, g.wmax, g.ppd, g.eps)?;
    let r = connect_networks(conn, &za, &zb, &grid, DEFAULT_TOL);
    write_or_print(out, &r.to_csv(false), &r.to_csv(degrees))
}

fn cmd_subtract(c: &Path, b: &Path, kind: &str, split: usize, predict: bool, degrees: bool) -> CmdResult {
    let kind: ConnectionKind = kind.parse()?;
    let zc = read_matrix_file(c)?;
    let zb = read_matrix_file(b)?;
    let zx = subtract(kind, &zc, &zb, split)?;
    print!("{}", format_matrix_csv(&zx));
    if predict {
        let jc = analyze(&zc, DEFAULT_TOL).interval();
        let jb = analyze(&zb, DEFAULT_TOL).interval();
        let predicted = match (jc, jb) {
            (Some(jc), Some(jb)) => match predict_subtraction_interval(&jc, &jb) {
                Ok(p) => interval_text(Some(p), degrees),
                Err(e) => format!("unavailable ({e})"),
            },
            _ => "unavailable (an input has no phases)".into(),
        };
        eprintln!("predicted {predicted}");
        eprintln!("computed {}", interval_text(analyze(&zx, DEFAULT_TOL).interval(), degrees));
    }
    Ok(())
}

fn load_rep(rep: Option<&Path>, name: Option<&[String]>) -> Result<ConfluenceRep, Failure> {
    match (rep, name) {
        (Some(p), None) => Ok(ConfluenceRep::read(p)?),
        (None, Some(words)) => {
            let (head, rest) = words.split_first().expect("clap requires one value");
            let sizes = rest
                .iter()
                .map(|w| w.parse::<usize>().map_err(|_| Error::Parse(format!("bad size `{w}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(builtin::by_name(head, &sizes)?)
        }
        _ => Err(Failure { code: 2, message: "give exactly one of a representation file or --builtin".into() }),
    }
}

fn cmd_confluence(
    rep: Option<&Path>,
    name: Option<&[String]>,
    dual: bool,
    validate: bool,
    connect: Option<&[PathBuf]>,
    dual_file: Option<&Path>,
) -> CmdResult {
    let rep = load_rep(rep, name)?;
    if validate {
        let d = rep.validate(CONFLUENCE_TOL);
        println!("dim {}", d.dim);
        println!("axiom-i {} (defect {})", if d.axiom_i { "pass" } else { "fail" }, d.axiom_i_defect);
        println!(
            "axiom-ii {} (residual {})",
            if d.axiom_ii { "pass" } else { "fail" },
            format_real(d.axiom_ii_residual)
        );
        if !d.is_valid() {
            return Err(Failure { code: 4, message: "representation is not a confluence".into() });
        }
    }
    let get_dual = || -> Result<DualRep, Failure> {
        match dual_file {
            Some(p) => Ok(DualRep::read(p)?),
            None => Ok(rep.dual(CONFLUENCE_TOL)?),
        }
    };
    if dual {
        println!("{}", get_dual()?.to_json());
    }
    if let Some(files) = connect {
        let za = read_matrix_file(&files[0])?;
        let zb = read_matrix_file(&files[1])?;
        let zc = get_dual()?.connect(&za, &zb, DEFAULT_SCHUR_TOL)?;
        print!("{}", format_matrix_csv(&zc));
    }
    if !validate && !dual && connect.is_none() {
        return Err(Failure { code: 2, message: "choose --validate, --dual or --connect".into() });
    }
    Ok(())
}

/// Demo frequency range and resolution.
const DEMO_W: (f64, f64) = (1e-2, 1e3);

fn demo_first() -> RationalMatrix {
    fig4_network(1.0, 1.0, 2.0, 1.0)
}

fn demo_second() -> RationalMatrix {
    fig14_network(10.0, 0.2, 1.0, 0.1, 0.5)
}

fn cmd_demo(figure: Figure, dir: &Path) -> CmdResult {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let mut outputs: Vec<(String, portphase::network::SweepResult)> = Vec::new();
    match figure {
        Figure::Fig5 => {
            for gamma in [0.0, 1.0, 10.0] {
                let z = fig4_network(1.0, 1.0, 2.0, gamma);
                let grid = build_grid(&z, DEMO_W.0, DEMO_W.1, DEFAULT_PPD, DEFAULT_EPS)?;
                outputs.push((format!("fig5-gamma{gamma}.csv"), sweep(&z, &grid, DEFAULT_TOL)));
            }
        }
        Figure::Fig15 => {
            let (za, zb) = (demo_first(), demo_second());
            let grid = build_grid(&za.add(&zb)?, DEMO_W.0, DEMO_W.1, DEFAULT_PPD, DEFAULT_EPS)?;
            for conn in demo_connections() {
                let r = connect_networks(conn, &za, &zb, &grid, DEFAULT_TOL);
                outputs.push((format!("fig15-{}.csv", conn.kind), r));
            }
        }
    }
    for (name, r) in &outputs {
        let path = dir.join(name);
        fs::write(&path, r.to_csv(false)).map_err(|e| io_failure(&path, e))?;
        let bounds = match (r.phi_min, r.phi_max) {
            (Some(a), Some(b)) => format!("[{}, {}]", format_real(a), format_real(b)),
            _ => "none".into(),
        };
        println!("{name} points {} bounds {bounds} nonsectorial {} failed {}", r.points.len(), r.nonsectorial, r.failed);
    }
    Ok(())
}

/// The seven connections of the two demo networks.
fn demo_connections() -> [Connection; 7] {
    [
        Connection::new(ConnectionKind::Shorted, 1),
        Connection::new(ConnectionKind::Open, 1),
        Connection::new(ConnectionKind::Series, 0),
        Connection::new(ConnectionKind::Parallel, 0),
        Connection::new(ConnectionKind::Hybrid, 1),
        Connection::new(ConnectionKind::Cascade, 1),
        Connection::new(ConnectionKind::HybridCascade, 1),
    ]
}

fn cmd_verify(suite: &str, trials: usize, seed: u64, dump: Option<&Path>) -> CmdResult {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut failed = 0;
    for name in names {
        let report = run_suite(name, trials, seed)?;
        print!("{}", report.render());
        if let Some(dir) = dump {
            report.dump(dir).map_err(|e| io_failure(dir, e))?;
        }
        failed += report.failed();
    }
    if failed > 0 {
        return Err(Failure { code: 4, message: format!("{failed} failing trials") });
    }
    Ok(())
}
