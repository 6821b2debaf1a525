//! Network connections on per-frequency impedance matrices.
//!
//! Every connection that involves a pseudo-inverse is checked for
//! well-definedness on its pivot: the range and kernel inclusions that make
//! the generalized Schur complement independent of the inverse chosen.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interval::PhaseInterval;
use crate::linalg::{pinv, pivot_compatible, schur_complement};
use crate::matrix::{ensure_same_shape, ensure_square, join, split, ComplexMatrix, Partition};
use crate::network::grid::FrequencyGrid;
use crate::network::rational::{poly, RationalFunction, RationalMatrix};
use crate::network::sweep::{sweep_with, SweepResult};

/// Ports `r+1..n` shorted: `Za / 22`.
pub fn shorted(za: &ComplexMatrix, p: Partition, tol: f64) -> Result<ComplexMatrix> {
    schur_complement(za, p, tol)
}

/// Ports `r+1..n` left open: `Za11`.
pub fn open_ports(za: &ComplexMatrix, p: Partition) -> Result<ComplexMatrix> {
    let n = ensure_square(za, "Za")?;
    p.check(n)?;
    Ok(split(za, p.leading())?.b11)
}

pub fn series(za: &ComplexMatrix, zb: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(za, "Za")?;
    ensure_same_shape(za, zb)?;
    Ok(za + zb)
}

/// `Za (Za + Zb)^+ Zb`.
pub fn parallel(za: &ComplexMatrix, zb: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    ensure_square(za, "Za")?;
    ensure_same_shape(za, zb)?;
    let pivot = za + zb;
    if !pivot_compatible(za, za, &pivot, tol) {
        return Err(Error::IllDefined("Za+Zb singular: parallel connection does not exist".into()));
    }
    Ok(za * pinv(&pivot) * zb)
}

/// Series on the first `r` ports, parallel on the rest. `r = n` is the
/// series connection and `r = 0` the parallel one.
pub fn hybrid(za: &ComplexMatrix, zb: &ComplexMatrix, r: usize, tol: f64) -> Result<ComplexMatrix> {
    let n = ensure_square(za, "Za")?;
    ensure_same_shape(za, zb)?;
    if r > n {
        return Err(Error::InvalidPartition { r, n });
    }
    let a = split(za, r)?;
    let b = split(zb, r)?;
    let pivot = &a.b22 + &b.b22;
    let d12 = &a.b12 - &b.b12;
    let d21 = &a.b21 - &b.b21;
    let top = stack_rows(&d12, &a.b22);
    let left = stack_cols(&d21, &a.b22);
    if !pivot_compatible(&top, &left, &pivot, tol) {
        return Err(Error::IllDefined("Za22+Zb22 singular: hybrid connection does not exist".into()));
    }
    let x = pinv(&pivot);
    let c11 = &a.b11 + &b.b11 - &d12 * &x * &d21;
    let c12 = &a.b12 - &d12 * &x * &a.b22;
    let c21 = &a.b21 - &a.b22 * &x * &d21;
    let c22 = &a.b22 * &x * &b.b22;
    Ok(join(&c11, &c12, &c21, &c22))
}

/// Chains `Za` ((r+s)-port) into `Zb` ((s+t)-port) through `s` shared
/// ports; the result is an (r+t)-port.
pub fn cascade(za: &ComplexMatrix, zb: &ComplexMatrix, s: usize, tol: f64) -> Result<ComplexMatrix> {
    let na = ensure_square(za, "Za")?;
    let nb = ensure_square(zb, "Zb")?;
    if s > na || s > nb {
        return Err(Error::DimMismatch(format!(
            "{s} shared ports between a {na}-port and a {nb}-port"
        )));
    }
    let a = split(za, na - s)?;
    let b = split(zb, s)?;
    let pivot = &a.b22 + &b.b11;
    // Pivot column and row of the augmented matrix [[Za11,0,-Za12],[0,Zb22,Zb21],[-Za21,Zb12,Za22+Zb11]].
    let top = stack_rows(&(-&a.b12), &b.b21);
    let left = stack_cols(&(-&a.b21), &b.b12);
    if !pivot_compatible(&top, &left, &pivot, tol) {
        return Err(Error::IllDefined("Z22+Zb singular: cascade connection does not exist".into()));
    }
    let x = pinv(&pivot);
    let c11 = &a.b11 - &a.b12 * &x * &a.b21;
    let c12 = &a.b12 * &x * &b.b12;
    let c21 = &b.b21 * &x * &a.b21;
    let c22 = &b.b22 - &b.b21 * &x * &b.b12;
    Ok(join(&c11, &c12, &c21, &c22))
}

/// Cascade with `t = 0`: ports `r+1..n` of `Za` terminated by `Zload`.
pub fn cascade_load(
    za: &ComplexMatrix,
    p: Partition,
    zload: &ComplexMatrix,
    tol: f64,
) -> Result<ComplexMatrix> {
    let n = ensure_square(za, "Za")?;
    p.check(n)?;
    let s = n - p.leading();
    let nl = ensure_square(zload, "Zload")?;
    if nl != s {
        return Err(Error::DimMismatch(format!("load must be {s}x{s}, got {nl}x{nl}")));
    }
    cascade(za, zload, s, tol)
}

/// `Za` is an (r+s)-port and `Zb` an (s+r)-port. The first `r` ports of the
/// result are in series with the last `r` ports of `Zb` and the `s` ports are
/// chained; the result is a 2r-port.
pub fn hybrid_cascade(za: &ComplexMatrix, zb: &ComplexMatrix, s: usize, tol: f64) -> Result<ComplexMatrix> {
    let na = ensure_square(za, "Za")?;
    let nb = ensure_square(zb, "Zb")?;
    if s > na || na != nb {
        return Err(Error::DimMismatch(format!(
            "hybrid-cascade needs an (r+s)-port and an (s+r)-port, got {na} and {nb} with s = {s}"
        )));
    }
    let a = split(za, na - s)?;
    let b = split(zb, s)?;
    let pivot = &a.b22 + &b.b11;
    let d12 = &a.b12 - &b.b21;
    let d21 = &a.b21 - &b.b12;
    let top = stack_rows(&d12, &(-&b.b21));
    let left = stack_cols(&d21, &(-&b.b12));
    if !pivot_compatible(&top, &left, &pivot, tol) {
        return Err(Error::IllDefined(
            "Za22+Zb11 singular: hybrid-cascade connection does not exist".into(),
        ));
    }
    let x = pinv(&pivot);
    let c11 = &a.b11 + &b.b22 - &d12 * &x * &d21;
    let c12 = &b.b22 + &d12 * &x * &b.b12;
    let c21 = &b.b22 + &b.b21 * &x * &d21;
    let c22 = &b.b22 - &b.b21 * &x * &b.b12;
    Ok(join(&c11, &c12, &c21, &c22))
}

/// Hull of the input intervals: the phase range every connection output is
/// guaranteed to stay in.
pub fn predict_interval(ja: &PhaseInterval, jb: &PhaseInterval) -> Result<PhaseInterval> {
    ja.hull(jb)
}

pub(crate) fn stack_rows(top: &ComplexMatrix, bottom: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    m.view_mut((0, 0), top.shape()).copy_from(top);
    m.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    m
}

pub(crate) fn stack_cols(left: &ComplexMatrix, right: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(left.nrows(), left.ncols() + right.ncols());
    m.view_mut((0, 0), left.shape()).copy_from(left);
    m.view_mut((0, left.ncols()), right.shape()).copy_from(right);
    m
}

// ---------------------------------------------------------------------------
// Connection descriptors

/// The connection kinds by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConnectionKind {
    Shorted,
    Open,
    Series,
    Parallel,
    Hybrid,
    Cascade,
    CascadeLoad,
    HybridCascade,
}

impl ConnectionKind {
    pub const ALL: [ConnectionKind; 8] = [
        ConnectionKind::Shorted,
        ConnectionKind::Open,
        ConnectionKind::Series,
        ConnectionKind::Parallel,
        ConnectionKind::Hybrid,
        ConnectionKind::Cascade,
        ConnectionKind::CascadeLoad,
        ConnectionKind::HybridCascade,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ConnectionKind::Shorted => "shorted",
            ConnectionKind::Open => "open",
            ConnectionKind::Series => "series",
            ConnectionKind::Parallel => "parallel",
            ConnectionKind::Hybrid => "hybrid",
            ConnectionKind::Cascade => "cascade",
            ConnectionKind::CascadeLoad => "cascade-load",
            ConnectionKind::HybridCascade => "hybrid-cascade",
        }
    }

    /// Whether only the first network takes part.
    pub fn is_unary(&self) -> bool {
        matches!(self, ConnectionKind::Shorted | ConnectionKind::Open)
    }
}

impl fmt::Display for ConnectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConnectionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ConnectionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown connection kind `{s}`")))
    }
}

/// A connection kind together with its split. `split` is the leading
/// partition `r` for shorted/open/hybrid/cascade-load and the number of
/// shared ports `s` for cascade/hybrid-cascade; series and parallel ignore it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Connection {
    pub kind: ConnectionKind,
    pub split: usize,
}

impl Connection {
    pub fn new(kind: ConnectionKind, split: usize) -> Self {
        Connection { kind, split }
    }

    /// Applies the connection; unary kinds ignore `zb`.
    pub fn apply(&self, za: &ComplexMatrix, zb: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
        let p = Partition::new(self.split);
        match self.kind {
            ConnectionKind::Shorted => shorted(za, p, tol),
            ConnectionKind::Open => open_ports(za, p),
            ConnectionKind::Series => series(za, zb),
            ConnectionKind::Parallel => parallel(za, zb, tol),
            ConnectionKind::Hybrid => hybrid(za, zb, self.split, tol),
            ConnectionKind::Cascade => cascade(za, zb, self.split, tol),
            ConnectionKind::CascadeLoad => cascade_load(za, p, zb, tol),
            ConnectionKind::HybridCascade => hybrid_cascade(za, zb, self.split, tol),
        }
    }
}

/// Applies `conn` to two networks at every grid point and sweeps the result.
/// Points where the connection is ill-defined are recorded as failures.
pub fn connect_networks(
    conn: Connection,
    za: &RationalMatrix,
    zb: &RationalMatrix,
    grid: &FrequencyGrid,
    tol: f64,
) -> SweepResult {
    sweep_with(grid, tol, |s| {
        let a = za.eval(s)?;
        let b = if conn.kind.is_unary() { a.clone() } else { zb.eval(s)? };
        conn.apply(&a, &b, tol)
    })
}

/// Exact series connection of two networks (coefficient arithmetic).
pub fn series_networks(za: &RationalMatrix, zb: &RationalMatrix) -> Result<RationalMatrix> {
    za.add(zb)
}

/// Exact parallel connection of two one-ports: `za zb / (za + zb)`.
pub fn parallel_one_ports(za: &RationalFunction, zb: &RationalFunction) -> Result<RationalFunction> {
    // The common factor da db cancels between numerator and denominator.
    let num = poly::mul(&za.num, &zb.num);
    let den = poly::add(&poly::mul(&za.num, &zb.den), &poly::mul(&zb.num, &za.den));
    RationalFunction::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_SCHUR_TOL;
    use crate::matrix::{block_diag, cx, relative_diff};
    use crate::network::fixtures::fig13_resistive;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    const TOL: f64 = DEFAULT_SCHUR_TOL;

    fn real(n: usize, v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_row_slice(n, n, &v.iter().map(|&x| cx(x, 0.0)).collect::<Vec<_>>())
    }

    fn scalar(z: f64, im: f64) -> ComplexMatrix {
        ComplexMatrix::from_element(1, 1, cx(z, im))
    }

    #[test]
    fn shorted_and_open_examples() {
        let a = real(2, &[2.0, 1.0, 0.5, 3.0]);
        let b = real(1, &[4.0]);
        let c = block_diag(&a, &b);
        assert!(relative_diff(&shorted(&c, Partition::new(2), TOL).unwrap(), &a) < 1e-15);
        let (za, _) = fig13_resistive(1.0, 1.0, 1.0, 1.0);
        let s = shorted(&za, Partition::new(1), TOL).unwrap();
        assert!((s[(0, 0)].re - 2.0 / 3.0).abs() < 1e-14);
        let o = open_ports(&za, Partition::new(1)).unwrap();
        assert_eq!(o[(0, 0)], cx(0.75, 0.0));
        assert_eq!(open_ports(&za, Partition::new(2)).unwrap(), za);
        let eye = ComplexMatrix::identity(3, 3);
        assert_eq!(open_ports(&eye, Partition::new(2)).unwrap(), ComplexMatrix::identity(2, 2));
    }

    #[test]
    fn series_and_parallel_examples() {
        let r = scalar(3.0, 0.0);
        assert_eq!(series(&r, &r).unwrap(), scalar(6.0, 0.0));
        let s = series(&scalar(1.0, 0.0), &scalar(0.0, 1.0)).unwrap();
        assert!((s[(0, 0)].arg() - FRAC_PI_4).abs() < 1e-15);
        assert!(matches!(series(&r, &ComplexMatrix::identity(2, 2)), Err(Error::DimMismatch(_))));
        let p = parallel(&r, &r, TOL).unwrap();
        assert!((p[(0, 0)] - cx(1.5, 0.0)).norm() < 1e-14);
        let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![cx(1.0, 0.0), cx(0.0, 1.0)]));
        let p = parallel(&d, &d, TOL).unwrap();
        let want = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![cx(0.5, 0.0), cx(0.0, 0.5)]));
        assert!(relative_diff(&p, &want) < 1e-14);
        // L and C in parallel at resonance: Za + Zb = 0.
        assert!(matches!(parallel(&scalar(0.0, 1.0), &scalar(0.0, -1.0), TOL), Err(Error::IllDefined(_))));
    }

    #[test]
    fn hybrid_limits() {
        let za = real(2, &[2.0, 0.3, -0.1, 1.5]);
        let zb = real(2, &[1.0, 0.2, 0.4, 3.0]);
        assert!(relative_diff(&hybrid(&za, &zb, 2, TOL).unwrap(), &(&za + &zb)) < 1e-14);
        assert!(relative_diff(&hybrid(&za, &zb, 0, TOL).unwrap(), &parallel(&za, &zb, TOL).unwrap()) < 1e-12);
    }

    #[test]
    fn cascade_with_shorting_load() {
        let za = real(3, &[2.0, 0.3, 0.1, 0.2, 1.5, 0.4, -0.1, 0.3, 2.5]);
        let zb = ComplexMatrix::zeros(2, 2);
        let c = cascade(&za, &zb, 1, TOL).unwrap();
        let sh = shorted(&za, Partition::new(2), TOL).unwrap();
        assert!(relative_diff(&c.view((0, 0), (2, 2)).into_owned(), &sh) < 1e-14);
        assert!(matches!(cascade(&za, &zb, 4, TOL), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn fig13_cascade_load_does_not_exist() {
        let (za, rn) = fig13_resistive(1.0, 1.0, 1.0, 1.0);
        let err = cascade_load(&za, Partition::new(1), &real(1, &[rn]), TOL).unwrap_err();
        match err {
            Error::IllDefined(msg) => assert!(msg.contains("Z22+Zb singular")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cascade_load_limits() {
        let za = real(2, &[2.0, 0.5, 0.5, 1.0]);
        let z0 = cascade_load(&za, Partition::new(1), &real(1, &[0.0]), TOL).unwrap();
        assert!(relative_diff(&z0, &shorted(&za, Partition::new(1), TOL).unwrap()) < 1e-14);
        let zinf = cascade_load(&za, Partition::new(1), &real(1, &[1e9]), TOL).unwrap();
        assert!(relative_diff(&zinf, &open_ports(&za, Partition::new(1)).unwrap()) < 1e-6);
    }

    #[test]
    fn hybrid_cascade_zero_partner() {
        let za = real(2, &[2.0, 0.5, 0.3, 1.0]);
        let zb = ComplexMatrix::zeros(2, 2);
        let c = hybrid_cascade(&za, &zb, 1, TOL).unwrap();
        let want = real(2, &[2.0 - 0.5 * 0.3, 0.0, 0.0, 0.0]);
        assert!(relative_diff(&c, &want) < 1e-14);
        assert!(matches!(
            hybrid_cascade(&za, &ComplexMatrix::zeros(3, 3), 1, TOL),
            Err(Error::DimMismatch(_))
        ));
    }

    #[test]
    fn interval_prediction() {
        let p = |a: f64, b: f64| PhaseInterval::new(a, b).unwrap();
        assert_eq!(predict_interval(&p(0.0, 0.0), &p(0.0, 0.0)).unwrap(), p(0.0, 0.0));
        assert_eq!(predict_interval(&p(-FRAC_PI_2, FRAC_PI_2), &p(-FRAC_PI_2, 0.0)).unwrap(), p(-FRAC_PI_2, FRAC_PI_2));
        assert_eq!(predict_interval(&p(-FRAC_PI_4, FRAC_PI_4), &p(0.0, FRAC_PI_2)).unwrap(), p(-FRAC_PI_4, FRAC_PI_2));
        assert!(matches!(predict_interval(&p(-FRAC_PI_2, 0.0), &p(1.0, 2.0)), Err(Error::HullTooWide { .. })));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ConnectionKind::ALL {
            assert_eq!(k.name().parse::<ConnectionKind>().unwrap(), k);
        }
        assert!("star".parse::<ConnectionKind>().is_err());
    }

    #[test]
    fn exact_parallel_one_ports() {
        let r = RationalFunction::constant(2.0);
        let c = RationalFunction::new(vec![1.0], vec![0.0, 1.0]).unwrap();
        let p = parallel_one_ports(&r, &c).unwrap();
        let s = cx(0.0, 0.5);
        let want = 2.0 * (1.0 / s) / (2.0 + 1.0 / s);
        assert!((p.eval(s).unwrap() - want).norm() < 1e-14);
    }
}
