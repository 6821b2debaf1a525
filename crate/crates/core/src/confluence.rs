//! General connections described by confluences.
//!
//! A confluence `G` is the set of admissible current triples `(a, b, c)`,
//! written as `[S T; U W] [a; b] = [c; 0]`. Its complement under the
//! `(+, +, -)` inner product holds the voltages and is written the same way
//! with `(Phi, Psi, Xi, Omega)`. The connected impedance is the Schur
//! complement of `M = D diag(Za, Zb) D^T`, where `D = [Phi Psi; Xi Omega]`.
//!
//! The three port counts may differ: `a` has `na` entries, `b` has `nb` and
//! `c` has `nc`. The number of constraint rows is free.

use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{checked_svd, real_null_space, real_pinv, real_rank, schur_complement, well_defined_schur, DEFAULT_RCOND};
use crate::matrix::{block_diag, ensure_square, to_complex, ComplexMatrix, Partition, RealMatrix};

/// Relative cutoff for rank decisions on representation matrices.
pub const CONFLUENCE_TOL: f64 = 1e-10;

/// `(a, b, c)` with the indefinite inner product `<a1,a2> + <b1,b2> - <c1,c2>`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndefiniteVector {
    pub a: DVector<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
}

pub fn indefinite_inner(x: &IndefiniteVector, y: &IndefiniteVector) -> Result<f64> {
    if x.a.len() != y.a.len() || x.b.len() != y.b.len() || x.c.len() != y.c.len() {
        return Err(Error::DimMismatch(format!(
            "({}, {}, {}) vs ({}, {}, {})",
            x.a.len(),
            x.b.len(),
            x.c.len(),
            y.a.len(),
            y.b.len(),
            y.c.len()
        )));
    }
    Ok(x.a.dot(&y.a) + x.b.dot(&y.b) - x.c.dot(&y.c))
}

fn hstack(l: &RealMatrix, r: &RealMatrix) -> RealMatrix {
    let mut m = RealMatrix::zeros(l.nrows(), l.ncols() + r.ncols());
    m.view_mut((0, 0), l.shape()).copy_from(l);
    m.view_mut((0, l.ncols()), r.shape()).copy_from(r);
    m
}

fn vstack(t: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    let mut m = RealMatrix::zeros(t.nrows() + b.nrows(), t.ncols());
    m.view_mut((0, 0), t.shape()).copy_from(t);
    m.view_mut((t.nrows(), 0), b.shape()).copy_from(b);
    m
}

fn check_layout(s: &RealMatrix, t: &RealMatrix, u: &RealMatrix, w: &RealMatrix, names: [&str; 4]) -> Result<()> {
    let ok = s.nrows() == t.nrows() && u.nrows() == w.nrows() && s.ncols() == u.ncols() && t.ncols() == w.ncols();
    if !ok || s.nrows() == 0 {
        return Err(Error::InvalidConfluence(format!(
            "blocks do not tile: {} {:?}, {} {:?}, {} {:?}, {} {:?}",
            names[0],
            s.shape(),
            names[1],
            t.shape(),
            names[2],
            u.shape(),
            names[3],
            w.shape()
        )));
    }
    Ok(())
}

/// Primal representation `[S T; U W] [a; b] = [c; 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfluenceRep {
    pub s: RealMatrix,
    pub t: RealMatrix,
    pub u: RealMatrix,
    pub w: RealMatrix,
}

/// Dual representation `[Phi Psi; Xi Omega] [alpha; beta] = [gamma; 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualRep {
    pub phi: RealMatrix,
    pub psi: RealMatrix,
    pub xi: RealMatrix,
    pub omega: RealMatrix,
}

/// Outcome of checking the two confluence axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// No `(0, 0, c)` with `c != 0` in `G`.
    pub axiom_i: bool,
    /// Every `c` is reached by some `(a, b)`.
    pub axiom_ii: bool,
    pub dim: usize,
    /// Dimension of `{c : (0, 0, c) in G}`.
    pub axiom_i_defect: usize,
    /// Largest distance of a unit `c` from the reachable set.
    pub axiom_ii_residual: f64,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.axiom_i && self.axiom_ii
    }
}

impl ConfluenceRep {
    pub fn new(s: RealMatrix, t: RealMatrix, u: RealMatrix, w: RealMatrix) -> Result<Self> {
        check_layout(&s, &t, &u, &w, ["S", "T", "U", "W"])?;
        Ok(ConfluenceRep { s, t, u, w })
    }

    pub fn na(&self) -> usize {
        self.s.ncols()
    }

    pub fn nb(&self) -> usize {
        self.t.ncols()
    }

    pub fn nc(&self) -> usize {
        self.s.nrows()
    }

    /// `[S T; U W]`.
    pub fn stacked(&self) -> RealMatrix {
        vstack(&hstack(&self.s, &self.t), &hstack(&self.u, &self.w))
    }

    /// Columns spanning `G` as stacked `(a, b, c)` vectors: the kernel of
    /// `[S T -I; U W 0]`.
    pub fn subspace_basis(&self) -> RealMatrix {
        let nc = self.nc();
        let m = self.u.nrows();
        let mut neg_i = RealMatrix::zeros(nc + m, nc);
        for k in 0..nc {
            neg_i[(k, k)] = -1.0;
        }
        real_null_space(&hstack(&self.stacked(), &neg_i), CONFLUENCE_TOL)
    }

    pub fn dim(&self) -> usize {
        self.subspace_basis().ncols()
    }

    pub fn validate(&self, tol: f64) -> Diagnostics {
        let basis = self.subspace_basis();
        let dim = basis.ncols();
        let ab = basis.rows(0, self.na() + self.nb()).into_owned();
        let axiom_i_defect = dim - real_rank(&ab, tol);

        // Reachable c: the c-rows of the basis must span R^nc.
        let c_rows = basis.rows(self.na() + self.nb(), self.nc()).into_owned();
        let residual = if dim == 0 {
            1.0
        } else {
            let range = crate::linalg::real_range_basis(&c_rows, tol);
            let eye = RealMatrix::identity(self.nc(), self.nc());
            let resid = &eye - &range * range.transpose();
            (0..self.nc()).map(|k| resid.column(k).norm()).fold(0.0, f64::max)
        };
        Diagnostics {
            axiom_i: axiom_i_defect == 0,
            axiom_ii: residual <= tol.sqrt(),
            dim,
            axiom_i_defect,
            axiom_ii_residual: residual,
        }
    }

    /// A dual with the minimum-norm `[Phi Psi]` and an orthonormal null basis
    /// of `[S T; U W]` as the rows of `[Xi Omega]`, zero-padded to
    /// `na + nb - nc` rows so that `D` is square.
    pub fn dual(&self, tol: f64) -> Result<DualRep> {
        let diag = self.validate(tol);
        if !diag.is_valid() {
            return Err(Error::InvalidConfluence(format!(
                "axiom (i) {}, axiom (ii) {} (residual {:.3e})",
                if diag.axiom_i { "holds" } else { "fails" },
                if diag.axiom_ii { "holds" } else { "fails" },
                diag.axiom_ii_residual
            )));
        }
        let (na, nb, nc) = (self.na(), self.nb(), self.nc());
        let a = self.stacked();
        let mut e = RealMatrix::zeros(a.nrows(), nc);
        for k in 0..nc {
            e[(k, k)] = 1.0;
        }
        let mut top = (real_pinv(&a, DEFAULT_RCOND) * e).transpose();
        let null = real_null_space(&a, tol).transpose();
        let rows = na + nb - nc;
        if null.nrows() > rows {
            return Err(Error::InvalidConfluence(format!(
                "null space of [S T; U W] has dimension {} > {rows}",
                null.nrows()
            )));
        }
        let mut bottom = RealMatrix::zeros(rows, na + nb);
        bottom.view_mut((0, 0), null.shape()).copy_from(&null);
        // Round-off entries are cleared so that exact structure stays exact.
        for m in [&mut top, &mut bottom] {
            let cut = 1e-13 * m.amax().max(1.0);
            m.apply(|x| {
                if x.abs() <= cut {
                    *x = 0.0;
                }
            });
        }
        let d = DualRep {
            phi: top.columns(0, na).into_owned(),
            psi: top.columns(na, nb).into_owned(),
            xi: bottom.columns(0, na).into_owned(),
            omega: bottom.columns(na, nb).into_owned(),
        };
        let defect = duality_defect(self, &d);
        if defect > tol.sqrt() * a.norm().max(1.0) {
            return Err(Error::InvalidConfluence(format!("duality product off by {defect:.3e}")));
        }
        Ok(d)
    }

    /// `[I P; 0 Q] [S T; U W]`.
    pub fn parametrize(&self, p: &RealMatrix, q: &RealMatrix) -> Result<Self> {
        let m = self.u.nrows();
        if p.shape() != (self.nc(), m) || q.shape() != (m, m) {
            return Err(Error::DimMismatch(format!(
                "P must be {}x{m} and Q {m}x{m}, got {:?} and {:?}",
                self.nc(),
                p.shape(),
                q.shape()
            )));
        }
        let rank = real_rank(q, CONFLUENCE_TOL);
        if rank < m {
            return Err(Error::RankDeficientParameter { rank, needed: m });
        }
        Ok(ConfluenceRep {
            s: &self.s + p * &self.u,
            t: &self.t + p * &self.w,
            u: q * &self.u,
            w: q * &self.w,
        })
    }

    /// Whether both representations describe the same subspace.
    pub fn same_subspace(&self, other: &ConfluenceRep, tol: f64) -> bool {
        same_span(&self.subspace_basis(), &other.subspace_basis(), tol)
    }

    pub fn to_json(&self) -> String {
        let file = RepFile {
            n: self.nc(),
            s: rows_of(&self.s),
            t: rows_of(&self.t),
            u: rows_of(&self.u),
            w: rows_of(&self.w),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: RepFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let rep = ConfluenceRep::new(
            matrix_of(&f.s, "S")?,
            matrix_of(&f.t, "T")?,
            matrix_of(&f.u, "U")?,
            matrix_of(&f.w, "W")?,
        )?;
        if rep.nc() != f.n {
            return Err(Error::Parse(format!("\"n\" is {} but S has {} rows", f.n, rep.nc())));
        }
        Ok(rep)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&read_text(path)?)
    }
}

impl DualRep {
    pub fn new(phi: RealMatrix, psi: RealMatrix, xi: RealMatrix, omega: RealMatrix) -> Result<Self> {
        check_layout(&phi, &psi, &xi, &omega, ["Phi", "Psi", "Xi", "Omega"])?;
        Ok(DualRep { phi, psi, xi, omega })
    }

    pub fn na(&self) -> usize {
        self.phi.ncols()
    }

    pub fn nb(&self) -> usize {
        self.psi.ncols()
    }

    pub fn nc(&self) -> usize {
        self.phi.nrows()
    }

    /// `D = [Phi Psi; Xi Omega]`.
    pub fn stacked(&self) -> RealMatrix {
        vstack(&hstack(&self.phi, &self.psi), &hstack(&self.xi, &self.omega))
    }

    /// The same matrices read as a primal representation of `G^perp`.
    pub fn as_confluence(&self) -> ConfluenceRep {
        ConfluenceRep {
            s: self.phi.clone(),
            t: self.psi.clone(),
            u: self.xi.clone(),
            w: self.omega.clone(),
        }
    }

    /// `[I Gamma; 0 Lambda] [Phi Psi; Xi Omega]`.
    pub fn parametrize(&self, gamma: &RealMatrix, lambda: &RealMatrix) -> Result<Self> {
        let p = self.as_confluence().parametrize(gamma, lambda)?;
        Ok(DualRep { phi: p.s, psi: p.t, xi: p.u, omega: p.w })
    }

    fn check_ports(&self, za: &ComplexMatrix, zb: &ComplexMatrix) -> Result<()> {
        let na = ensure_square(za, "Za")?;
        let nb = ensure_square(zb, "Zb")?;
        if na != self.na() || nb != self.nb() {
            return Err(Error::DimMismatch(format!(
                "dual expects {}- and {}-ports, got {na} and {nb}",
                self.na(),
                self.nb()
            )));
        }
        Ok(())
    }

    /// `M = D diag(Za, Zb) D^T`.
    pub fn assemble_m(&self, za: &ComplexMatrix, zb: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_ports(za, zb)?;
        let d = to_complex(&self.stacked());
        Ok(&d * block_diag(za, zb) * d.transpose())
    }

    pub fn exists(&self, za: &ComplexMatrix, zb: &ComplexMatrix, tol: f64) -> bool {
        match self.assemble_m(za, zb) {
            Ok(m) => well_defined_schur(&m, Partition::new(self.nc()), tol),
            Err(_) => false,
        }
    }

    /// `Zc = M/22`, split after the first `nc` rows.
    pub fn connect(&self, za: &ComplexMatrix, zb: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
        let m = self.assemble_m(za, zb)?;
        schur_complement(&m, Partition::new(self.nc()), tol).map_err(|e| match e {
            Error::IllDefined(msg) => Error::NotExists(msg),
            other => other,
        })
    }

    /// Factors `D = X [Sigma; 0]` with `X` orthogonal and `Sigma` of full row
    /// rank `k`, and forms the compressed core `Sigma diag(Za, Zb) Sigma^T`.
    pub fn compress(&self, za: &ComplexMatrix, zb: &ComplexMatrix, tol: f64) -> Result<Compressed> {
        self.check_ports(za, zb)?;
        let d = self.stacked();
        if d.nrows() != d.ncols() {
            return Err(Error::DimMismatch(format!("D is {:?}; the factorization needs it square", d.shape())));
        }
        let svd = checked_svd(&d);
        let u = svd.u.expect("u requested");
        let v_t = svd.v_t.expect("v_t requested");
        let s = &svd.singular_values;
        let cut = tol * s.max().max(1.0);
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
        let k = order.iter().filter(|&&i| s[i] > cut).count();
        let n = d.nrows();
        let mut x = RealMatrix::zeros(n, n);
        let mut sigma = RealMatrix::zeros(k, n);
        for (j, &i) in order.iter().enumerate() {
            x.set_column(j, &u.column(i));
            if j < k {
                sigma.set_row(j, &(v_t.row(i) * s[i]));
            }
        }
        let sc = to_complex(&sigma);
        let core = &sc * block_diag(za, zb) * sc.transpose();
        Ok(Compressed { x, sigma, core })
    }

    /// `M/22` computed from the compressed factorization.
    pub fn connect_compressed(&self, za: &ComplexMatrix, zb: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
        let c = self.compress(za, zb, tol)?;
        let n = c.x.nrows();
        let mut padded = ComplexMatrix::zeros(n, n);
        padded.view_mut((0, 0), c.core.shape()).copy_from(&c.core);
        let x = to_complex(&c.x);
        let m = &x * padded * x.transpose();
        schur_complement(&m, Partition::new(self.nc()), tol).map_err(|e| match e {
            Error::IllDefined(msg) => Error::NotExists(msg),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        let file = DualFile {
            n: self.nc(),
            phi: rows_of(&self.phi),
            psi: rows_of(&self.psi),
            xi: rows_of(&self.xi),
            omega: rows_of(&self.omega),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: DualFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let d = DualRep::new(
            matrix_of(&f.phi, "Phi")?,
            matrix_of(&f.psi, "Psi")?,
            matrix_of(&f.xi, "Xi")?,
            matrix_of(&f.omega, "Omega")?,
        )?;
        if d.nc() != f.n {
            return Err(Error::Parse(format!("\"n\" is {} but Phi has {} rows", f.n, d.nc())));
        }
        Ok(d)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&read_text(path)?)
    }
}

/// `D = X [Sigma; 0]` and the core `Sigma diag(Za, Zb) Sigma^T`.
#[derive(Debug, Clone)]
pub struct Compressed {
    pub x: RealMatrix,
    pub sigma: RealMatrix,
    pub core: ComplexMatrix,
}

/// Largest entry of `[S T; U W] D^T - [I 0; 0 0]`.
pub fn duality_defect(rep: &ConfluenceRep, dual: &DualRep) -> f64 {
    let a = rep.stacked();
    let d = dual.stacked();
    if a.ncols() != d.ncols() {
        return f64::INFINITY;
    }
    let mut prod = a * d.transpose();
    for k in 0..rep.nc().min(prod.nrows()).min(prod.ncols()) {
        prod[(k, k)] -= 1.0;
    }
    prod.amax()
}

/// Whether `dual` describes the complement of the subspace described by `rep`.
pub fn is_dual_of(rep: &ConfluenceRep, dual: &DualRep, tol: f64) -> bool {
    match rep.dual(tol) {
        Ok(d) => same_span(&d.as_confluence().subspace_basis(), &dual.as_confluence().subspace_basis(), tol.sqrt()),
        Err(_) => false,
    }
}

fn same_span(a: &RealMatrix, b: &RealMatrix, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    if a.ncols() == 0 {
        return true;
    }
    let pa = a * a.transpose();
    let pb = b * b.transpose();
    (pa - pb).amax() <= tol
}

fn eye(n: usize) -> RealMatrix {
    RealMatrix::identity(n, n)
}

fn zeros(r: usize, c: usize) -> RealMatrix {
    RealMatrix::zeros(r, c)
}

/// `[A 0; 0 B]` for real blocks.
fn rdiag(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    vstack(&hstack(a, &zeros(a.nrows(), b.ncols())), &hstack(&zeros(b.nrows(), a.ncols()), b))
}

/// Built-in representations of the standard connections.
pub mod builtin {
    use super::*;

    pub fn series(n: usize) -> ConfluenceRep {
        ConfluenceRep { s: eye(n), t: zeros(n, n), u: eye(n), w: -eye(n) }
    }

    pub fn parallel(n: usize) -> ConfluenceRep {
        ConfluenceRep { s: eye(n), t: eye(n), u: zeros(n, n), w: zeros(n, n) }
    }

    /// The two-port example mixing series and parallel terminals.
    pub fn new_connection() -> ConfluenceRep {
        let m = RealMatrix::from_row_slice(
            4,
            4,
            &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0, 0.0],
        );
        ConfluenceRep {
            s: m.view((0, 0), (2, 2)).into_owned(),
            t: m.view((0, 2), (2, 2)).into_owned(),
            u: m.view((2, 0), (2, 2)).into_owned(),
            w: m.view((2, 2), (2, 2)).into_owned(),
        }
    }

    /// The dual listed alongside [`new_connection`].
    pub fn new_connection_dual() -> DualRep {
        let phi = RealMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let psi = RealMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        DualRep { phi, psi, xi: zeros(2, 2), omega: zeros(2, 2) }
    }

    /// Series on the first `r` ports, parallel on the rest.
    pub fn hybrid(n: usize, r: usize) -> ConfluenceRep {
        let q = n - r;
        ConfluenceRep {
            s: eye(n),
            t: rdiag(&zeros(r, r), &eye(q)),
            u: rdiag(&eye(r), &zeros(q, q)),
            w: rdiag(&-eye(r), &zeros(q, q)),
        }
    }

    /// `A` is an (r+s)-port, `B` an (s+t)-port; the last `s` ports of `A`
    /// drive the first `s` of `B`, leaving an (r+t)-port.
    pub fn cascade(r: usize, s: usize, t: usize) -> ConfluenceRep {
        ConfluenceRep {
            s: rdiag(&eye(r), &zeros(t, s)),
            t: rdiag(&zeros(r, s), &eye(t)),
            u: hstack(&zeros(s, r), &eye(s)),
            w: hstack(&eye(s), &zeros(s, t)),
        }
    }

    /// `A` is an (r+s)-port and `B` an (s+r)-port; the result has 2r ports.
    pub fn hybrid_cascade(r: usize, s: usize) -> ConfluenceRep {
        ConfluenceRep {
            s: vstack(&hstack(&eye(r), &zeros(r, s)), &hstack(&-eye(r), &zeros(r, s))),
            t: rdiag(&zeros(r, s), &eye(r)),
            u: hstack(&zeros(s, r), &eye(s)),
            w: hstack(&eye(s), &zeros(s, r)),
        }
    }

    /// Looks up a representation by name. `args` carries the sizes:
    /// `series n`, `parallel n`, `new-connection`, `hybrid n r`,
    /// `cascade r s t`, `hybrid-cascade r s`.
    pub fn by_name(name: &str, args: &[usize]) -> Result<ConfluenceRep> {
        let bad = || Error::Parse(format!("wrong sizes {args:?} for builtin `{name}`"));
        match (name, args) {
            ("series", [n]) if *n > 0 => Ok(series(*n)),
            ("parallel", [n]) if *n > 0 => Ok(parallel(*n)),
            ("new-connection", []) => Ok(new_connection()),
            ("hybrid", [n, r]) if *n > 0 && r <= n => Ok(hybrid(*n, *r)),
            ("cascade", [r, s, t]) if r + t > 0 => Ok(cascade(*r, *s, *t)),
            ("hybrid-cascade", [r, s]) if *r > 0 => Ok(hybrid_cascade(*r, *s)),
            ("series" | "parallel" | "new-connection" | "hybrid" | "cascade" | "hybrid-cascade", _) => Err(bad()),
            _ => Err(Error::Parse(format!("unknown builtin `{name}`"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RepFile {
    n: usize,
    #[serde(rename = "S")]
    s: Vec<Vec<f64>>,
    #[serde(rename = "T")]
    t: Vec<Vec<f64>>,
    #[serde(rename = "U")]
    u: Vec<Vec<f64>>,
    #[serde(rename = "W")]
    w: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct DualFile {
    n: usize,
    #[serde(rename = "Phi")]
    phi: Vec<Vec<f64>>,
    #[serde(rename = "Psi")]
    psi: Vec<Vec<f64>>,
    #[serde(rename = "Xi")]
    xi: Vec<Vec<f64>>,
    #[serde(rename = "Omega")]
    omega: Vec<Vec<f64>>,
}

fn rows_of(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix_of(rows: &[Vec<f64>], what: &str) -> Result<RealMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Parse(format!("{what} has ragged rows")));
    }
    Ok(RealMatrix::from_row_iterator(r, c, rows.iter().flatten().copied()))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::builtin::*;
    use super::*;
    use crate::connections;
    use crate::linalg::DEFAULT_SCHUR_TOL;
    use crate::matrix::{cx, relative_diff};
    use crate::network::fixtures::fig13_resistive;

    const TOL: f64 = CONFLUENCE_TOL;

    fn m(n: usize, v: &[(f64, f64)]) -> ComplexMatrix {
        ComplexMatrix::from_row_slice(n, n, &v.iter().map(|&(a, b)| cx(a, b)).collect::<Vec<_>>())
    }

    fn za2() -> ComplexMatrix {
        m(2, &[(2.0, 0.3), (0.2, 0.1), (-0.1, 0.1), (1.5, -0.2)])
    }

    fn zb2() -> ComplexMatrix {
        m(2, &[(1.0, 0.1), (0.3, 0.0), (0.2, 0.0), (2.0, 0.5)])
    }

    #[test]
    fn inner_product() {
        let e = |v: [f64; 2]| DVector::from_column_slice(&v);
        let x = IndefiniteVector { a: e([1.0, 0.0]), b: e([0.0, 0.0]), c: e([0.0, 0.0]) };
        assert_eq!(indefinite_inner(&x, &x).unwrap(), 1.0);
        let y = IndefiniteVector { a: e([0.0, 0.0]), b: e([0.0, 0.0]), c: e([1.0, 0.0]) };
        assert_eq!(indefinite_inner(&y, &y).unwrap(), -1.0);
        let z = IndefiniteVector { a: e([1.0, 2.0]), b: e([0.5, 0.0]), c: e([3.0, 1.0]) };
        assert_eq!(indefinite_inner(&z, &y).unwrap(), -3.0);
        let short = IndefiniteVector { a: DVector::zeros(1), b: e([0.0, 0.0]), c: e([0.0, 0.0]) };
        assert!(matches!(indefinite_inner(&short, &x), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn validation() {
        for rep in [series(2), parallel(3), new_connection(), hybrid(3, 1), cascade(1, 2, 1), hybrid_cascade(2, 1)] {
            let d = rep.validate(TOL);
            assert!(d.is_valid(), "{d:?}");
        }
        let z = zeros(2, 2);
        let d = ConfluenceRep::new(z.clone(), z.clone(), z.clone(), z).unwrap().validate(TOL);
        assert!(d.axiom_i && !d.axiom_ii);
        assert_eq!(series(3).dim(), 3);
        assert_eq!(parallel(3).dim(), 6);
    }

    #[test]
    fn duals_match_listed_ones() {
        let listed_series = DualRep { phi: eye(2), psi: eye(2), xi: zeros(2, 2), omega: zeros(2, 2) };
        assert!(is_dual_of(&series(2), &listed_series, TOL));
        let listed_parallel = DualRep { phi: eye(2), psi: zeros(2, 2), xi: eye(2), omega: -eye(2) };
        assert!(is_dual_of(&parallel(2), &listed_parallel, TOL));
        assert!(is_dual_of(&new_connection(), &new_connection_dual(), TOL));
        assert!(duality_defect(&new_connection(), &new_connection_dual()) == 0.0);
        assert!(!is_dual_of(&series(2), &listed_parallel, TOL));
    }

    #[test]
    fn dual_is_an_involution() {
        for rep in [series(2), new_connection(), cascade(1, 1, 1), hybrid(3, 2)] {
            let d = rep.dual(TOL).unwrap();
            assert!(duality_defect(&rep, &d) < 1e-12);
            let back = d.as_confluence().dual(TOL).unwrap().as_confluence();
            assert!(rep.same_subspace(&back, 1e-9));
        }
    }

    #[test]
    fn parametrization_keeps_subspace() {
        let rep = series(2);
        let p = RealMatrix::from_row_slice(2, 2, &[0.3, -1.0, 2.0, 0.5]);
        let q = RealMatrix::from_row_slice(2, 2, &[1.0, 2.0, -0.5, 1.5]);
        assert!(rep.parametrize(&p, &q).unwrap().same_subspace(&rep, 1e-12));
        assert_eq!(rep.parametrize(&zeros(2, 2), &eye(2)).unwrap(), rep);
        let singular = RealMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(
            rep.parametrize(&p, &singular),
            Err(Error::RankDeficientParameter { rank: 1, needed: 2 })
        ));
        let d = rep.dual(TOL).unwrap();
        let (za, zb) = (za2(), zb2());
        let z0 = d.connect(&za, &zb, DEFAULT_SCHUR_TOL).unwrap();
        let z1 = d.parametrize(&p, &q).unwrap().connect(&za, &zb, DEFAULT_SCHUR_TOL).unwrap();
        assert!(relative_diff(&z0, &z1) < 1e-12);
    }

    #[test]
    fn m_for_scalars() {
        let d = series(1).dual(TOL).unwrap();
        let (za, zb) = (m(1, &[(2.0, 1.0)]), m(1, &[(0.5, -0.3)]));
        let mm = d.assemble_m(&za, &zb).unwrap();
        assert!((mm[(0, 0)] - cx(2.5, 0.7)).norm() < 1e-14);
        assert!(mm[(0, 1)].norm() < 1e-14 && mm[(1, 0)].norm() < 1e-14 && mm[(1, 1)].norm() < 1e-14);
        let zc = d.connect(&za, &zb, DEFAULT_SCHUR_TOL).unwrap();
        assert!((zc[(0, 0)] - cx(2.5, 0.7)).norm() < 1e-14);
        let r = m(1, &[(3.0, 0.0)]);
        let zc = parallel(1).dual(TOL).unwrap().connect(&r, &r, DEFAULT_SCHUR_TOL).unwrap();
        assert!((zc[(0, 0)] - cx(1.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn builtins_match_direct_formulas() {
        let (za, zb) = (za2(), zb2());
        let t = DEFAULT_SCHUR_TOL;
        let cases: Vec<(ConfluenceRep, ComplexMatrix)> = vec![
            (series(2), connections::series(&za, &zb).unwrap()),
            (parallel(2), connections::parallel(&za, &zb, t).unwrap()),
            (hybrid(2, 1), connections::hybrid(&za, &zb, 1, t).unwrap()),
            (cascade(1, 1, 1), connections::cascade(&za, &zb, 1, t).unwrap()),
            (hybrid_cascade(1, 1), connections::hybrid_cascade(&za, &zb, 1, t).unwrap()),
        ];
        for (rep, want) in cases {
            let got = rep.dual(TOL).unwrap().connect(&za, &zb, t).unwrap();
            assert!(relative_diff(&got, &want) < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn new_connection_by_elimination() {
        // Currents: c1 = a1, c2 = b2, a1 = a2 = b1. Voltages: v_c1 = va1 + va2 + vb1,
        // v_c2 = vb2. With a1 = c1 and b2 = c2 the voltages are linear in c.
        let (za, zb) = (za2(), zb2());
        let mut want = ComplexMatrix::zeros(2, 2);
        for k in 0..2 {
            let c = if k == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
            let ia = nalgebra::DVector::from_vec(vec![cx(c[0], 0.0), cx(c[0], 0.0)]);
            let ib = nalgebra::DVector::from_vec(vec![cx(c[0], 0.0), cx(c[1], 0.0)]);
            let va = &za * ia;
            let vb = &zb * ib;
            want[(0, k)] = va[0] + va[1] + vb[0];
            want[(1, k)] = vb[1];
        }
        let got = new_connection().dual(TOL).unwrap().connect(&za, &zb, DEFAULT_SCHUR_TOL).unwrap();
        assert!(relative_diff(&got, &want) < 1e-12);
        let listed = new_connection_dual().connect(&za, &zb, DEFAULT_SCHUR_TOL).unwrap();
        assert!(relative_diff(&listed, &want) < 1e-12);
    }

    #[test]
    fn existence() {
        let (za, rn) = fig13_resistive(1.0, 2.0, 3.0, 4.0);
        let zb = ComplexMatrix::from_element(1, 1, cx(rn, 0.0));
        let d = cascade(1, 1, 0).dual(TOL).unwrap();
        assert!(!d.exists(&za, &zb, DEFAULT_SCHUR_TOL));
        assert!(matches!(d.connect(&za, &zb, DEFAULT_SCHUR_TOL), Err(Error::NotExists(_))));
        assert!(series(2).dual(TOL).unwrap().exists(&za2(), &zb2(), DEFAULT_SCHUR_TOL));
        // Positive semidefinite pairs always connect.
        let psd = m(2, &[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 0.0)]);
        for rep in [series(2), parallel(2), hybrid(2, 1), new_connection()] {
            assert!(rep.dual(TOL).unwrap().exists(&psd, &psd, DEFAULT_SCHUR_TOL));
        }
    }

    #[test]
    fn compressed_matches_direct() {
        let (za, zb) = (za2(), zb2());
        for rep in [series(2), new_connection(), parallel(2)] {
            let d = rep.dual(TOL).unwrap();
            let c = d.compress(&za, &zb, TOL).unwrap();
            assert_eq!(c.sigma.nrows(), real_rank(&d.stacked(), TOL));
            let a = d.connect(&za, &zb, DEFAULT_SCHUR_TOL).unwrap();
            let b = d.connect_compressed(&za, &zb, TOL).unwrap();
            assert!(relative_diff(&a, &b) < 1e-10);
        }
    }

    #[test]
    fn json_round_trip() {
        let rep = cascade(1, 1, 1);
        assert_eq!(ConfluenceRep::from_json(&rep.to_json()).unwrap(), rep);
        let d = new_connection_dual();
        let text = d.to_json();
        assert!(text.contains("\"Phi\"") && text.contains("\"Omega\""));
        assert_eq!(DualRep::from_json(&text).unwrap(), d);
        assert!(matches!(ConfluenceRep::from_json("{\"n\":1}"), Err(Error::Parse(_))));
        let bad = "{\"n\":2,\"S\":[[1]],\"T\":[[0]],\"U\":[[1]],\"W\":[[-1]]}";
        assert!(matches!(ConfluenceRep::from_json(bad), Err(Error::Parse(_))));
    }

    #[test]
    fn builtin_lookup() {
        assert_eq!(builtin::by_name("hybrid", &[3, 1]).unwrap(), hybrid(3, 1));
        assert!(builtin::by_name("cascade", &[1]).is_err());
        assert!(builtin::by_name("zigzag", &[]).is_err());
    }
}
