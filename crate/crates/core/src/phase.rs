//! Matrix phases, sectoriality and the numerical-range support function.
//!
//! For a rotation angle `theta`, the Hermitian part of `e^{-j theta} C` is
//! `cos(theta) H + sin(theta) K` with `C = H + jK`. Its smallest eigenvalue is
//! the support value of the numerical range in direction `theta`; `C` is
//! sectorial exactly when some direction makes it positive.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interval::{wrap_near, PhaseInterval};
use crate::linalg::range_basis;
use crate::matrix::{cx, ComplexMatrix};

/// Default relative sectoriality tolerance (scaled by `‖C‖_F`).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default angular tolerance for interval membership, radians.
pub const ANGLE_TOL: f64 = 1e-6;

const SCAN_ANGLES: usize = 720;

/// Relative size below which a Hermitian part or eigenvalue counts as zero
/// when resolving boundary structure of the numerical range.
const FLAT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectorialTag {
    Sectorial,
    SemiSectorial,
    NonSectorial,
}

impl SectorialTag {
    /// Short code used in CSV output.
    pub fn code(&self) -> &'static str {
        match self {
            SectorialTag::Sectorial => "S",
            SectorialTag::SemiSectorial => "SS",
            SectorialTag::NonSectorial => "NS",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SectorialTag::Sectorial => "Sectorial",
            SectorialTag::SemiSectorial => "SemiSectorial",
            SectorialTag::NonSectorial => "NonSectorial",
        }
    }
}

/// Classification result. `margin` is the best support value
/// `max_theta lambda_min(theta)` and `angle` the direction attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorialClass {
    pub tag: SectorialTag,
    pub margin: f64,
    pub angle: f64,
}

/// `C = T^* D T` with `D = diag(e^{j phases})`, phases in descending order.
#[derive(Debug, Clone)]
pub struct SectorialDecomposition {
    pub t: ComplexMatrix,
    pub d: ComplexMatrix,
    pub center_angle: f64,
    pub phases: Vec<f64>,
}

impl SectorialDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.t.adjoint() * &self.d * &self.t
    }

    pub fn interval(&self) -> PhaseInterval {
        let n = self.phases.len();
        PhaseInterval::new(self.phases[n - 1], self.phases[0]).expect("sectorial spread below pi")
    }
}

/// `(H, K)` with `H = (C + C^*)/2`, `K = (C - C^*)/(2j)`.
pub fn hermitian_split(c: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let ca = c.adjoint();
    let h = (c + &ca) * cx(0.5, 0.0);
    let k = (c - &ca) * cx(0.0, -0.5);
    (h, k)
}

fn rotated_hermitian(h: &ComplexMatrix, k: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    h * cx(c, 0.0) + k * cx(s, 0.0)
}

fn lambda_min(m: &ComplexMatrix) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// Smallest eigenvalue of the Hermitian part of `e^{-j theta} C`, with a
/// unit eigenvector attaining it.
pub fn numerical_range_support(c: &ComplexMatrix, theta: f64) -> (f64, DVector<Complex64>) {
    let (h, k) = hermitian_split(c);
    let m = rotated_hermitian(&h, &k, theta);
    let eig = SymmetricEigen::new(m);
    let idx = eig.eigenvalues.imin();
    (eig.eigenvalues[idx], eig.eigenvectors.column(idx).into_owned())
}

/// Cholesky attempt on a Hermitian matrix; true when every pivot is a
/// positive real. (The library Cholesky takes complex square roots of
/// negative pivots, so it cannot serve as a definiteness test.)
fn is_positive_definite(m: &ComplexMatrix) -> bool {
    let n = m.nrows();
    let mut l = m.clone();
    for j in 0..n {
        let mut d = l[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        l[(j, j)] = cx(d, 0.0);
        for i in j + 1..n {
            let mut v = l[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / d;
        }
    }
    true
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximizes the support function over the circle.
///
/// A Cholesky scan looks for a positive definite direction first. The
/// positive set is an arc, so its ends are bisected and the maximum is
/// found by golden section inside it. Without a positive direction the best
/// eigenvalue scan point is refined locally.
fn best_support(h: &ComplexMatrix, k: &ComplexMatrix) -> (f64, f64) {
    let pd = |theta: f64| is_positive_definite(&rotated_hermitian(h, k, theta));
    let f = |theta: f64| lambda_min(&rotated_hermitian(h, k, theta));
    let step = TAU / SCAN_ANGLES as f64;

    if let Some(i) = (0..SCAN_ANGLES).find(|&i| pd(i as f64 * step)) {
        let inside = i as f64 * step;
        // Walk outwards over the grid, then bisect the boundary crossings.
        let mut left = inside;
        while inside - left < PI && pd(left - step) {
            left -= step;
        }
        let mut right = inside;
        while right - inside < PI && pd(right + step) {
            right += step;
        }
        let bisect = |mut good: f64, mut bad: f64| {
            for _ in 0..50 {
                let m = 0.5 * (good + bad);
                if pd(m) {
                    good = m;
                } else {
                    bad = m;
                }
            }
            good
        };
        let a = bisect(left, left - step);
        let b = bisect(right, right + step);
        let (theta, val) = golden_max(f, a, b, 1e-12);
        let base = f(inside);
        return if val >= base { (theta, val) } else { (inside, base) };
    }

    let (mut best_i, mut best_v) = (0, f64::NEG_INFINITY);
    for i in 0..SCAN_ANGLES {
        let v = f(i as f64 * step);
        if v > best_v {
            best_i = i;
            best_v = v;
        }
    }
    let center = best_i as f64 * step;
    let (theta, val) = golden_max(f, center - step, center + step, 1e-12);
    if val >= best_v {
        (theta, val)
    } else {
        (center, best_v)
    }
}

/// A numerical range that collapses to a segment has no interior; the
/// origin is then treated as interior when it splits the segment.
fn origin_inside_segment(h: &ComplexMatrix, k: &ComplexMatrix, angle: f64, scale: f64) -> bool {
    let (s, c) = angle.sin_cos();
    let hr = h * cx(c, 0.0) + k * cx(s, 0.0);
    let zero = FLAT_TOL * scale;
    if SymmetricEigen::new(hr).eigenvalues.amax() > zero {
        return false;
    }
    let kr = k * cx(c, 0.0) - h * cx(s, 0.0);
    let l = SymmetricEigen::new(kr).eigenvalues;
    l.min() < -zero && l.max() > zero
}

/// Classifies `C` by the sign of its best support value, relative to
/// `tol * ‖C‖_F`. The zero matrix is semi-sectorial.
pub fn classify(c: &ComplexMatrix, tol: f64) -> SectorialClass {
    assert!(c.is_square(), "classify needs a square matrix");
    let scale = c.norm();
    if c.nrows() == 0 || scale == 0.0 {
        return SectorialClass { tag: SectorialTag::SemiSectorial, margin: 0.0, angle: 0.0 };
    }
    let (h, k) = hermitian_split(c);
    let (angle, margin) = best_support(&h, &k);
    let thr = tol * scale;
    let tag = if margin > thr {
        SectorialTag::Sectorial
    } else if margin >= -thr && !origin_inside_segment(&h, &k, angle, scale) {
        SectorialTag::SemiSectorial
    } else {
        SectorialTag::NonSectorial
    };
    SectorialClass { tag, margin, angle }
}

/// Shifts all phases by the multiple of 2pi that puts their midpoint in
/// `(-pi, pi]`; returns the shift.
fn canonicalize(phases: &mut [f64]) -> f64 {
    if phases.is_empty() {
        return 0.0;
    }
    let lo = phases.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = phases.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    let shift = wrap_near(mid, 0.0) - mid;
    for p in phases.iter_mut() {
        *p += shift;
    }
    shift
}

fn hermitian_power(h: &ComplexMatrix, power: f64) -> ComplexMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let d = ComplexMatrix::from_diagonal(&eig.eigenvalues.map(|l| cx(l.max(0.0).powf(power), 0.0)));
    v * d * v.adjoint()
}

fn decompose_at(c: &ComplexMatrix, theta: f64) -> SectorialDecomposition {
    let (h0, k0) = hermitian_split(c);
    let (s, co) = theta.sin_cos();
    // Hermitian and skew parts of e^{-j theta} C.
    let h = &h0 * cx(co, 0.0) + &k0 * cx(s, 0.0);
    let k = &k0 * cx(co, 0.0) - &h0 * cx(s, 0.0);
    let h_half = hermitian_power(&h, 0.5);
    let h_mhalf = hermitian_power(&h, -0.5);
    let g = &h_mhalf * &k * &h_mhalf;
    let g = (&g + g.adjoint()) * cx(0.5, 0.0);
    let eig = SymmetricEigen::new(g);
    let n = c.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut phases: Vec<f64> = order.iter().map(|&i| theta + eig.eigenvalues[i].atan()).collect();
    let shift = canonicalize(&mut phases);

    let mut t = ComplexMatrix::zeros(n, n);
    for (row, &i) in order.iter().enumerate() {
        let mu = eig.eigenvalues[i];
        let scale = (1.0 + mu * mu).sqrt().sqrt();
        let u = eig.eigenvectors.column(i);
        let r = u.adjoint() * &h_half * cx(scale, 0.0);
        t.set_row(row, &r);
    }
    let d = ComplexMatrix::from_diagonal(&DVector::from_iterator(
        n,
        phases.iter().map(|&p| Complex64::from_polar(1.0, p)),
    ));
    SectorialDecomposition { t, d, center_angle: theta + shift, phases }
}

/// Sectorial decomposition with phases in descending order on the canonical
/// branch (interval midpoint in `(-pi, pi]`).
pub fn phases(c: &ComplexMatrix, tol: f64) -> Result<SectorialDecomposition> {
    let class = classify(c, tol);
    if class.tag != SectorialTag::Sectorial {
        return Err(Error::NotSectorial { margin: class.margin });
    }
    Ok(decompose_at(c, class.angle))
}

fn complex_eigenvalues(m: &ComplexMatrix) -> Vec<Complex64> {
    let n = m.nrows();
    let (_, t) = Schur::new(m.clone()).unpack();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)].norm() > 0.0 {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let tr = a + d;
            let disc = ((a - d) * (a - d) + b * c * 4.0).sqrt();
            out.push((tr + disc) * 0.5);
            out.push((tr - disc) * 0.5);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    out
}

/// Phases of a nonsingular semi-sectorial matrix whose best support
/// direction is `theta0`.
fn boundary_phases(a: &ComplexMatrix, theta0: f64) -> Vec<f64> {
    let r = a.nrows();
    let b = a * Complex64::from_polar(1.0, -theta0);
    let (h, k) = hermitian_split(&b);
    let scale = a.norm();
    let zero = FLAT_TOL * scale;

    // Boundary directions live in the kernel of H.
    let eig = SymmetricEigen::new(h);
    let kernel: Vec<usize> = (0..r).filter(|&i| eig.eigenvalues[i].abs() <= zero).collect();
    let mut n_plus = 0;
    let mut n_minus = 0;
    if !kernel.is_empty() {
        let mut nmat = ComplexMatrix::zeros(r, kernel.len());
        for (j, &i) in kernel.iter().enumerate() {
            nmat.set_column(j, &eig.eigenvectors.column(i));
        }
        let knn = nmat.adjoint() * &k * &nmat;
        let knn = (&knn + knn.adjoint()) * cx(0.5, 0.0);
        for l in SymmetricEigen::new(knn).eigenvalues.iter() {
            if *l > zero {
                n_plus += 1;
            } else if *l < -zero {
                n_minus += 1;
            } else {
                // Jordan-type pair: one phase on each side.
                n_plus += 1;
                n_minus += 1;
            }
        }
    }
    let n_edge = (n_plus + n_minus).min(r);

    // B^{-1} B^* = T^{-1} D^{-2} T, so its eigenvalues are e^{-2j psi}.
    let mut interior = Vec::new();
    if n_edge < r {
        if let Some(binv) = b.clone().try_inverse() {
            let mut lams = complex_eigenvalues(&(binv * b.adjoint()));
            lams.sort_by(|x, y| (x + 1.0).norm().total_cmp(&(y + 1.0).norm()));
            interior = lams[n_edge..].iter().map(|l| theta0 - 0.5 * l.arg()).collect();
        }
    }
    let mut out = interior;
    out.extend(std::iter::repeat_n(theta0 + FRAC_PI_2, n_plus));
    out.extend(std::iter::repeat_n(theta0 - FRAC_PI_2, n_minus));
    out.truncate(r);
    out
}

/// Classification together with the phase list when one exists.
#[derive(Debug, Clone)]
pub struct PhaseAnalysis {
    pub class: SectorialClass,
    /// `None` for non-sectorial input; empty for the zero matrix.
    pub phases: Option<Vec<f64>>,
}

impl PhaseAnalysis {
    pub fn interval(&self) -> Option<PhaseInterval> {
        let p = self.phases.as_ref()?;
        let lo = *p.last()?;
        Some(PhaseInterval::point(lo).hull_unchecked(p[0]))
    }
}

pub fn analyze(c: &ComplexMatrix, tol: f64) -> PhaseAnalysis {
    let class = classify(c, tol);
    let phases = semi_phases_for(c, &class, tol).ok();
    PhaseAnalysis { class, phases }
}

fn semi_phases_for(c: &ComplexMatrix, class: &SectorialClass, tol: f64) -> Result<Vec<f64>> {
    match class.tag {
        SectorialTag::NonSectorial => return Err(Error::NotSemiSectorial { margin: class.margin }),
        SectorialTag::Sectorial => return Ok(decompose_at(c, class.angle).phases),
        SectorialTag::SemiSectorial => {}
    }
    if c.norm() == 0.0 || c.nrows() == 0 {
        return Ok(Vec::new());
    }
    // Semi-sectorial matrices have range(C) = range(C^*), so compressing to
    // the range keeps every nonzero phase.
    let q = range_basis(c, tol);
    let a = q.adjoint() * c * &q;
    let inner = classify(&a, tol);
    let mut out = match inner.tag {
        SectorialTag::Sectorial => decompose_at(&a, inner.angle).phases,
        SectorialTag::SemiSectorial => boundary_phases(&a, inner.angle),
        SectorialTag::NonSectorial => {
            return Err(Error::NotSemiSectorial { margin: inner.margin });
        }
    };
    out.sort_by(|x, y| y.total_cmp(x));
    canonicalize(&mut out);
    Ok(out)
}

/// Phases of a (semi-)sectorial matrix: one per nonzero singular direction,
/// descending, canonical branch. Boundary directions of the numerical range
/// contribute `theta0 ± pi/2`.
pub fn phases_semi(c: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    let class = classify(c, tol);
    semi_phases_for(c, &class, tol)
}

/// `[min phase, max phase]`; `None` for the zero matrix, which lies in
/// every phase set.
pub fn phase_interval(c: &ComplexMatrix, tol: f64) -> Result<Option<PhaseInterval>> {
    let p = phases_semi(c, tol)?;
    match PhaseInterval::from_phases(&p) {
        None => Ok(None),
        Some(j) => j.map(Some),
    }
}

/// Whether the phases of `C` lie in `j` up to `angle_tol` radians.
pub fn in_phase_set(c: &ComplexMatrix, j: &PhaseInterval, angle_tol: f64) -> Result<bool> {
    Ok(match phase_interval(c, DEFAULT_TOL)? {
        None => true,
        Some(p) => j.contains(&p, angle_tol),
    })
}
