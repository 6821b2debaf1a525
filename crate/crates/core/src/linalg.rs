//! Pseudo-inverses, numerical rank and generalized Schur complements.

use nalgebra::{ComplexField, DMatrix, Dyn, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{split, ComplexMatrix, Partition, RealMatrix};

/// Relative singular-value cutoff used by [`pinv`].
pub const DEFAULT_RCOND: f64 = 1e-12;

/// Relative residual accepted by the range/kernel inclusion tests.
pub const DEFAULT_SCHUR_TOL: f64 = 1e-8;

/// Full SVD whose factors reproduce `m` to working precision.
///
/// nalgebra's default stopping rule can stop early on clustered spectra, so
/// the product is checked and the SVD redone with a tighter threshold, then
/// on the adjoint.
pub fn checked_svd<T>(m: &DMatrix<T>) -> SVD<T, Dyn, Dyn>
where
    T: ComplexField<RealField = f64>,
{
    let (r, c) = m.shape();
    let tol = 1e-13 * m.norm().max(1.0) * r.max(c).max(1) as f64;
    let resid = |s: &SVD<T, Dyn, Dyn>| {
        let (u, v_t) = (s.u.as_ref().expect("u"), s.v_t.as_ref().expect("v_t"));
        let sig = DMatrix::from_diagonal(&s.singular_values.map(T::from_real));
        (u * sig * v_t - m).norm()
    };
    let first = SVD::new(m.clone(), true, true);
    let mut best_err = resid(&first);
    if best_err <= tol {
        return first;
    }
    let mut best = first;
    if let Some(s) = SVD::try_new(m.clone(), true, true, 1e-17, 10_000) {
        let e = resid(&s);
        if e <= tol {
            return s;
        }
        if e < best_err {
            (best, best_err) = (s, e);
        }
    }
    let t = SVD::new(m.adjoint(), true, true);
    let s = SVD {
        u: t.v_t.as_ref().map(|v| v.adjoint()),
        v_t: t.u.as_ref().map(|u| u.adjoint()),
        singular_values: t.singular_values,
    };
    if resid(&s) < best_err {
        s
    } else {
        best
    }
}

/// Singular values in descending order.
pub fn singular_values(c: &ComplexMatrix) -> Vec<f64> {
    if c.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = checked_svd(c).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Moore-Penrose inverse; singular values at or below
/// `rcond * sigma_max * max(rows, cols)` are treated as zero.
pub fn pseudo_inverse(c: &ComplexMatrix, rcond: f64) -> ComplexMatrix {
    let (m, n) = c.shape();
    if m == 0 || n == 0 {
        return ComplexMatrix::zeros(n, m);
    }
    let svd = checked_svd(c);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let smax = svd.singular_values.max();
    let cutoff = rcond * smax * m.max(n) as f64;
    let mut out = ComplexMatrix::zeros(n, m);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        // out += v_k (1/s) u_k^*
        let vk = v_t.row(k).adjoint();
        let uk = u.column(k).adjoint();
        out += (vk * uk) * Complex64::new(1.0 / s, 0.0);
    }
    out
}

pub fn pinv(c: &ComplexMatrix) -> ComplexMatrix {
    pseudo_inverse(c, DEFAULT_RCOND)
}

/// Orthonormal basis of the column space, rank decided by `rel_tol * sigma_max`.
pub fn range_basis(c: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let (m, n) = c.shape();
    if m == 0 || n == 0 {
        return ComplexMatrix::zeros(m, 0);
    }
    let svd = checked_svd(c);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.max();
    let cols: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > rel_tol * smax && s > 0.0)
        .map(|(k, _)| k)
        .collect();
    let mut q = ComplexMatrix::zeros(m, cols.len());
    for (j, &k) in cols.iter().enumerate() {
        q.set_column(j, &u.column(k));
    }
    q
}

/// 2-norm condition number; infinite for singular or empty-rank input.
pub fn condition_number(c: &ComplexMatrix) -> f64 {
    let s = singular_values(c);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (None, None) => 1.0,
        _ => f64::INFINITY,
    }
}

/// Inverse guarded by a condition-number ceiling.
pub fn guarded_inverse(c: &ComplexMatrix, max_cond: f64, what: &str) -> Result<ComplexMatrix> {
    if c.is_empty() {
        return Ok(c.clone());
    }
    let kappa = condition_number(c);
    if !(kappa <= max_cond) {
        return Err(Error::SingularPivot(format!(
            "{what} has condition number {kappa:.3e}"
        )));
    }
    c.clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularPivot(format!("{what} is singular")))
}

/// Range/kernel inclusion test behind a well-defined Schur complement:
/// `R(m21) ⊆ R(m22)` and `N(m12) ⊇ N(m22)`, both judged by projector residuals.
pub fn pivot_compatible(
    m12: &ComplexMatrix,
    m21: &ComplexMatrix,
    m22: &ComplexMatrix,
    tol: f64,
) -> bool {
    if m22.is_empty() {
        return true;
    }
    let p = pinv(m22);
    let q = m22.nrows();
    let eye = ComplexMatrix::identity(q, q);
    let range_residual = ((&eye - m22 * &p) * m21).norm();
    let kernel_residual = (m12 * (&eye - &p * m22)).norm();
    range_residual <= tol * m21.norm().max(1.0) && kernel_residual <= tol * m12.norm().max(1.0)
}

pub fn well_defined_schur(c: &ComplexMatrix, p: Partition, tol: f64) -> bool {
    if c.nrows() != c.ncols() || p.check(c.nrows()).is_err() {
        return false;
    }
    let b = split(c, p.leading()).expect("checked partition");
    pivot_compatible(&b.b12, &b.b21, &b.b22, tol)
}

/// `C/22 = C11 - C12 C22^+ C21`.
pub fn schur_complement(c: &ComplexMatrix, p: Partition, tol: f64) -> Result<ComplexMatrix> {
    crate::matrix::ensure_square(c, "Schur complement input")?;
    p.check(c.nrows())?;
    let b = split(c, p.leading())?;
    if !pivot_compatible(&b.b12, &b.b21, &b.b22, tol) {
        return Err(Error::IllDefined(
            "range/kernel inclusion fails for the 22 block".into(),
        ));
    }
    Ok(&b.b11 - &b.b12 * pinv(&b.b22) * &b.b21)
}

// ---------------------------------------------------------------------------
// Real helpers for confluence representations

fn real_svd_full(m: &RealMatrix) -> (Vec<f64>, RealMatrix) {
    // Pad with zero rows so that V is square.
    let (r, c) = m.shape();
    let padded = if r < c {
        let mut p = RealMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = checked_svd(&padded);
    let v_t = svd.v_t.expect("v_t requested");
    (svd.singular_values.iter().copied().collect(), v_t)
}

/// Numerical rank of a real matrix with cutoff `rel_tol * max(1, sigma_max)`.
pub fn real_rank(m: &RealMatrix, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let s = checked_svd(m).singular_values;
    let cut = rel_tol * s.max().max(1.0);
    s.iter().filter(|&&x| x > cut).count()
}

/// Orthonormal basis (columns) of the null space of a real matrix.
pub fn real_null_space(m: &RealMatrix, rel_tol: f64) -> RealMatrix {
    let c = m.ncols();
    if c == 0 {
        return RealMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return RealMatrix::identity(c, c);
    }
    let (s, v_t) = real_svd_full(m);
    let cut = rel_tol * s.iter().copied().fold(1.0, f64::max);
    let keep: Vec<usize> = (0..v_t.nrows())
        .filter(|&k| s.get(k).copied().unwrap_or(0.0) <= cut)
        .collect();
    let mut out = RealMatrix::zeros(c, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        out.set_column(j, &v_t.row(k).transpose());
    }
    out
}

/// Moore-Penrose inverse of a real matrix.
pub fn real_pinv(m: &RealMatrix, rcond: f64) -> RealMatrix {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return RealMatrix::zeros(c, r);
    }
    let svd = checked_svd(m);
    let smax = svd.singular_values.max();
    let eps = rcond * smax * r.max(c) as f64;
    svd.pseudo_inverse(eps.max(f64::MIN_POSITIVE))
        .unwrap_or_else(|_| DMatrix::zeros(c, r))
}

/// Orthonormal basis of the column space of a real matrix.
pub fn real_range_basis(m: &RealMatrix, rel_tol: f64) -> RealMatrix {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return RealMatrix::zeros(r, 0);
    }
    let svd = checked_svd(m);
    let u = svd.u.expect("u requested");
    let cut = rel_tol * svd.singular_values.max().max(1.0);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > cut)
        .collect();
    let mut out = RealMatrix::zeros(r, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        out.set_column(j, &u.column(k));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{block_diag, cx, relative_diff};

    fn m(rows: usize, cols: usize, re: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_row_slice(rows, cols, &re.iter().map(|&x| cx(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn clustered_spectrum_pinv_is_exact() {
        // [S T; U W] of a 6-port hybrid split at 5: singular values cluster
        // at the golden ratio and its inverse.
        let a = crate::confluence::builtin::hybrid(6, 5).stacked();
        let p = real_pinv(&a, DEFAULT_RCOND);
        assert!((&a * &p * &a - &a).amax() < 1e-13);
        let c = crate::matrix::to_complex(&a);
        let pc = pinv(&c);
        assert!((&c * &pc * &c - &c).norm() < 1e-12);
    }

    #[test]
    fn pinv_of_identity_and_rank_deficient_diagonal() {
        let eye = ComplexMatrix::identity(3, 3);
        assert!(relative_diff(&pinv(&eye), &eye) < 1e-15);
        let d = m(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        assert!(relative_diff(&pinv(&d), &m(2, 2, &[0.5, 0.0, 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn pinv_column_matches_least_squares() {
        // min ||[1;1] x - y|| is solved by x = (y1 + y2)/2.
        let col = m(2, 1, &[1.0, 1.0]);
        let p = pinv(&col);
        assert_eq!(p.shape(), (1, 2));
        assert!((p[(0, 0)] - cx(0.5, 0.0)).norm() < 1e-15);
        assert!((p[(0, 1)] - cx(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pinv_of_zero_and_empty() {
        let z = ComplexMatrix::zeros(2, 3);
        assert_eq!(pinv(&z), ComplexMatrix::zeros(3, 2));
        assert_eq!(pinv(&ComplexMatrix::zeros(0, 0)).shape(), (0, 0));
    }

    #[test]
    fn schur_of_block_diagonal_is_leading_block() {
        let a = m(2, 2, &[2.0, 1.0, 0.5, 3.0]);
        let b = m(1, 1, &[4.0]);
        let c = block_diag(&a, &b);
        assert!(well_defined_schur(&c, Partition::new(2), DEFAULT_SCHUR_TOL));
        let s = schur_complement(&c, Partition::new(2), DEFAULT_SCHUR_TOL).unwrap();
        assert!(relative_diff(&s, &a) < 1e-15);
    }

    #[test]
    fn kernel_inclusion_violation() {
        let c = m(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert!(!well_defined_schur(&c, Partition::new(1), DEFAULT_SCHUR_TOL));
        assert!(matches!(
            schur_complement(&c, Partition::new(1), DEFAULT_SCHUR_TOL),
            Err(Error::IllDefined(_))
        ));
    }

    #[test]
    fn hermitian_pd_schur() {
        let c = m(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let s = schur_complement(&c, Partition::new(1), DEFAULT_SCHUR_TOL).unwrap();
        assert!((s[(0, 0)] - cx(1.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn guarded_inverse_rejects_singular() {
        let c = m(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(guarded_inverse(&c, 1e12, "pivot"), Err(Error::SingularPivot(_))));
        let ok = guarded_inverse(&m(1, 1, &[4.0]), 1e12, "pivot").unwrap();
        assert!((ok[(0, 0)] - cx(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn real_null_space_of_wide_matrix() {
        let a = RealMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let n = real_null_space(&a, 1e-12);
        assert_eq!(n.ncols(), 2);
        assert!((&a * &n).norm() < 1e-14);
        assert!((n.transpose() * &n - RealMatrix::identity(2, 2)).norm() < 1e-14);
        assert_eq!(real_rank(&a, 1e-12), 1);
    }
}
