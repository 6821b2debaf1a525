//! Real-rational functions and matrices, with coefficients in ascending
//! powers of `s`.

use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{cx, ComplexMatrix};

/// Polynomial helpers on ascending coefficient vectors.
pub mod poly {
    use super::*;

    pub fn trim(mut p: Vec<f64>) -> Vec<f64> {
        while p.len() > 1 && p[p.len() - 1] == 0.0 {
            p.pop();
        }
        if p.is_empty() {
            p.push(0.0);
        }
        p
    }

    pub fn is_zero(p: &[f64]) -> bool {
        p.iter().all(|&c| c == 0.0)
    }

    /// Degree of a trimmed polynomial; the zero polynomial reports 0.
    pub fn degree(p: &[f64]) -> usize {
        p.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
        let n = a.len().max(b.len());
        trim((0..n)
            .map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0))
            .collect())
    }

    pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
        trim(a.iter().map(|&c| c * k).collect())
    }

    pub fn eval(p: &[f64], s: Complex64) -> Complex64 {
        p.iter().rev().fold(cx(0.0, 0.0), |acc, &c| acc * s + c)
    }

    /// `sum |c_k| |s|^k`, the scale against which a value of `p(s)` is judged.
    pub fn magnitude_scale(p: &[f64], s: Complex64) -> f64 {
        let r = s.norm();
        p.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    /// Complex roots via the eigenvalues of the companion matrix.
    pub fn roots(p: &[f64]) -> Vec<Complex64> {
        let p = trim(p.to_vec());
        let d = degree(&p);
        if d == 0 {
            return Vec::new();
        }
        // Roots at the origin are exact; strip them first.
        let zeros = p.iter().position(|&c| c != 0.0).unwrap_or(0);
        let q = &p[zeros..=d];
        let m = q.len() - 1;
        let mut out = vec![cx(0.0, 0.0); zeros];
        if m == 0 {
            return out;
        }
        let lead = q[m];
        let mut comp = DMatrix::<f64>::zeros(m, m);
        for i in 1..m {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..m {
            comp[(i, m - 1)] = -q[i] / lead;
        }
        out.extend(comp.complex_eigenvalues().iter().copied());
        out
    }
}

/// `num(s) / den(s)` with real coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

impl RationalFunction {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        if den.is_empty() || poly::is_zero(&den) {
            return Err(Error::ZeroDenominator);
        }
        if num.iter().chain(den.iter()).any(|c| !c.is_finite()) {
            return Err(Error::Parse("non-finite coefficient".into()));
        }
        let num = if num.is_empty() { vec![0.0] } else { num };
        Ok(RationalFunction { num: poly::trim(num), den: poly::trim(den) })
    }

    pub fn constant(c: f64) -> Self {
        RationalFunction { num: vec![c], den: vec![1.0] }
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        RationalFunction { num: poly::trim(coeffs), den: vec![1.0] }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let d = poly::eval(&self.den, s);
        if d.norm() <= 1e-14 * poly::magnitude_scale(&self.den, s) {
            return Err(Error::PoleHit { re: s.re, im: s.im });
        }
        Ok(poly::eval(&self.num, s) / d)
    }

    pub fn scale(&self, k: f64) -> Self {
        RationalFunction { num: poly::scale(&self.num, k), den: self.den.clone() }
    }

    /// Relative degree `deg(num) - deg(den)`; zero numerators report `None`.
    pub fn excess_degree(&self) -> Option<isize> {
        if poly::is_zero(&self.num) {
            return None;
        }
        Some(poly::degree(&self.num) as isize - poly::degree(&self.den) as isize)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            return RationalFunction { num: poly::add(&self.num, &o.num), den: self.den.clone() };
        }
        RationalFunction {
            num: poly::add(&poly::mul(&self.num, &o.den), &poly::mul(&o.num, &self.den)),
            den: poly::mul(&self.den, &o.den),
        }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.scale(-1.0)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction { num: poly::mul(&self.num, &o.num), den: poly::mul(&self.den, &o.den) }
    }
}

/// Square matrix of rational functions (an impedance matrix `Z(s)`).
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<RationalFunction>,
}

impl RationalMatrix {
    /// Builds from row-major entries.
    pub fn new(n: usize, entries: Vec<RationalFunction>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<RationalFunction>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimMismatch("rational matrix must be square".into()));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn constant(m: &DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimMismatch("rational matrix must be square".into()));
        }
        let n = m.nrows();
        Self::new(n, (0..n * n).map(|k| RationalFunction::constant(m[(k / n, k % n)])).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[RationalFunction] {
        &self.entries
    }

    pub fn eval(&self, s: Complex64) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self.entry(i, j).eval(s)?;
            }
        }
        Ok(out)
    }

    /// Entrywise sum, exact in the coefficients.
    pub fn add(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.n != other.n {
            return Err(Error::DimMismatch(format!("{}-port vs {}-port", self.n, other.n)));
        }
        Ok(RationalMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    /// Congruence `V^T Z V` with a constant real `V` (n x m), exact in the
    /// coefficients.
    pub fn congruence(&self, v: &DMatrix<f64>) -> Result<RationalMatrix> {
        if v.nrows() != self.n {
            return Err(Error::DimMismatch("congruence factor rows".into()));
        }
        let m = v.ncols();
        let mut entries = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                let mut acc = RationalFunction::zero();
                for i in 0..self.n {
                    for j in 0..self.n {
                        let w = v[(i, a)] * v[(j, b)];
                        if w != 0.0 {
                            acc = &acc + &self.entry(i, j).scale(w);
                        }
                    }
                }
                entries.push(acc);
            }
        }
        RationalMatrix::new(m, entries)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: NetworkFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("network file: {e}")))?;
        if raw.entries.len() != raw.n {
            return Err(Error::Parse(format!("expected {} rows, got {}", raw.n, raw.entries.len())));
        }
        let rows = raw
            .entries
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| RationalFunction::new(e.num, e.den))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let file = NetworkFile {
            n: self.n,
            entries: (0..self.n)
                .map(|i| {
                    (0..self.n)
                        .map(|j| {
                            let e = self.entry(i, j);
                            EntryFile { num: e.num.clone(), den: e.den.clone() }
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryFile {
    num: Vec<f64>,
    den: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    n: usize,
    entries: Vec<Vec<EntryFile>>,
}

/// Behaviour of `Z(s)` as `s -> infinity` along the imaginary axis.
#[derive(Debug, Clone, PartialEq)]
pub enum InfinityLimit {
    Finite(ComplexMatrix),
    /// Some entry grows without bound. `degree` is the largest excess degree
    /// and `leading` holds the leading-coefficient ratios of the entries that
    /// attain it (zero elsewhere); those entries grow like
    /// `leading * (j w)^degree`.
    Improper { degree: usize, leading: DMatrix<f64> },
}

/// Probe frequency used in place of infinity for improper networks.
pub const INFINITY_PROBE: f64 = 1e6;

pub fn limit_at_infinity(z: &RationalMatrix) -> InfinityLimit {
    let n = z.n();
    let max_excess = z.entries().iter().filter_map(|e| e.excess_degree()).max().unwrap_or(-1);
    let ratio = |e: &RationalFunction| {
        e.num[poly::degree(&e.num)] / e.den[poly::degree(&e.den)]
    };
    if max_excess > 0 {
        let leading = DMatrix::from_fn(n, n, |i, j| {
            let e = z.entry(i, j);
            if e.excess_degree() == Some(max_excess) {
                ratio(e)
            } else {
                0.0
            }
        });
        return InfinityLimit::Improper { degree: max_excess as usize, leading };
    }
    InfinityLimit::Finite(ComplexMatrix::from_fn(n, n, |i, j| {
        let e = z.entry(i, j);
        if e.excess_degree() == Some(0) {
            cx(ratio(e), 0.0)
        } else {
            cx(0.0, 0.0)
        }
    }))
}

/// Value used for bound purposes at infinity: the exact limit when it
/// exists, otherwise `Z(j * INFINITY_PROBE)`.
pub fn value_at_infinity(z: &RationalMatrix) -> Result<ComplexMatrix> {
    match limit_at_infinity(z) {
        InfinityLimit::Finite(m) => Ok(m),
        InfinityLimit::Improper { .. } => z.eval(cx(0.0, INFINITY_PROBE)),
    }
}

/// Nonnegative `w` with `den(jw) = 0` for some entry, ascending and
/// deduplicated.
pub fn imaginary_axis_poles(z: &RationalMatrix) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for e in z.entries() {
        for r in poly::roots(&e.den) {
            if r.re.abs() <= 1e-9 * r.norm().max(1.0) {
                out.push(r.im.abs());
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.max(1.0));
    out
}
