//! Dense complex matrices, 2x2 block partitions and the matrix CSV format.
//!
//! Matrix files are UTF-8 CSV with one row per matrix row and entries written
//! as `a+bi` / `a-bi`. Several matrices can share a file, separated by blank
//! lines.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix; the carrier for `Z(jw)` and all connection algebra.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Dense real matrix, used by confluence representations.
pub type RealMatrix = DMatrix<f64>;

#[inline]
pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Split of an n-port into its leading `r` ports and the remaining `n - r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partition {
    r: usize,
}

impl Partition {
    pub fn new(r: usize) -> Self {
        Partition { r }
    }

    pub fn leading(&self) -> usize {
        self.r
    }

    /// Checks `1 <= r <= n`.
    pub fn check(&self, n: usize) -> Result<()> {
        if self.r == 0 || self.r > n {
            return Err(Error::InvalidPartition { r: self.r, n });
        }
        Ok(())
    }
}

/// The four blocks of a square matrix split at index `r`.
#[derive(Debug, Clone)]
pub struct Blocks {
    pub b11: ComplexMatrix,
    pub b12: ComplexMatrix,
    pub b21: ComplexMatrix,
    pub b22: ComplexMatrix,
}

/// Splits a square matrix at `r` (`0 <= r <= n`; empty blocks are legal).
pub fn split(m: &ComplexMatrix, r: usize) -> Result<Blocks> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if r > n {
        return Err(Error::InvalidPartition { r, n });
    }
    let q = n - r;
    Ok(Blocks {
        b11: m.view((0, 0), (r, r)).into_owned(),
        b12: m.view((0, r), (r, q)).into_owned(),
        b21: m.view((r, 0), (q, r)).into_owned(),
        b22: m.view((r, r), (q, q)).into_owned(),
    })
}

/// Assembles a 2x2 block matrix. Block shapes must be compatible.
pub fn join(
    b11: &ComplexMatrix,
    b12: &ComplexMatrix,
    b21: &ComplexMatrix,
    b22: &ComplexMatrix,
) -> ComplexMatrix {
    let (r1, c1) = b11.shape();
    let (r2, c2) = b22.shape();
    debug_assert_eq!(b12.shape(), (r1, c2));
    debug_assert_eq!(b21.shape(), (r2, c1));
    let mut m = ComplexMatrix::zeros(r1 + r2, c1 + c2);
    m.view_mut((0, 0), (r1, c1)).copy_from(b11);
    m.view_mut((0, c1), (r1, c2)).copy_from(b12);
    m.view_mut((r1, 0), (r2, c1)).copy_from(b21);
    m.view_mut((r1, c1), (r2, c2)).copy_from(b22);
    m
}

/// Block-diagonal matrix `diag(a, b)`.
pub fn block_diag(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    join(
        a,
        &ComplexMatrix::zeros(a.nrows(), b.ncols()),
        &ComplexMatrix::zeros(b.nrows(), a.ncols()),
        b,
    )
}

pub fn to_complex(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| cx(x, 0.0))
}

/// `‖a - b‖_F / max(‖a‖_F, ‖b‖_F)`, or the absolute difference when both vanish.
pub fn relative_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let d = (a - b).norm();
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

pub fn ensure_square(m: &ComplexMatrix, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimMismatch(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

pub fn ensure_same_shape(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimMismatch(format!(
            "{}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Text formats

/// Shortest round-trip decimal of `x` after rounding to 12 significant digits.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

pub fn format_complex(z: Complex64) -> String {
    let re = format_real(z.re);
    let im = format_real(z.im.abs());
    let sign = if z.im < 0.0 && im != "0" { '-' } else { '+' };
    format!("{re}{sign}{im}i")
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (exponents allowed in both parts).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty matrix entry".into()));
    }
    let bad = || Error::Parse(format!("malformed complex entry `{text}`"));
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| cx(re, 0.0)).map_err(|_| bad());
    };
    // Find the sign that separates the real and imaginary parts: the last
    // '+'/'-' that is not the leading sign and does not follow an exponent.
    let bytes = body.as_bytes();
    let mut cut = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            cut = Some(i);
            break;
        }
    }
    let imag = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    match cut {
        Some(i) => {
            let re = body[..i].parse::<f64>().map_err(|_| bad())?;
            Ok(cx(re, imag(&body[i..])?))
        }
        None => Ok(cx(0.0, imag(body)?)),
    }
}

pub fn format_matrix_csv(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format_complex(m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Parses one or more matrices separated by blank lines.
pub fn parse_matrices_csv(text: &str) -> Result<Vec<ComplexMatrix>> {
    let mut out = Vec::new();
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let flush = |rows: &mut Vec<Vec<Complex64>>, out: &mut Vec<ComplexMatrix>| -> Result<()> {
        if rows.is_empty() {
            return Ok(());
        }
        let ncols = rows[0].len();
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        let nrows = rows.len();
        let flat: Vec<Complex64> = rows.drain(..).flatten().collect();
        out.push(ComplexMatrix::from_row_slice(nrows, ncols, &flat));
        Ok(())
    };
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            flush(&mut rows, &mut out)?;
            continue;
        }
        let row = line.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
        if row.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parse("non-finite matrix entry".into()));
        }
        rows.push(row);
    }
    flush(&mut rows, &mut out)?;
    Ok(out)
}

pub fn parse_matrix_csv(text: &str) -> Result<ComplexMatrix> {
    let mut all = parse_matrices_csv(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(Error::Parse("no matrix found".into())),
        k => Err(Error::Parse(format!("expected one matrix, found {k}"))),
    }
}

pub fn read_matrix_file(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_matrix_csv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_entries_parse() {
        assert_eq!(parse_complex("1.5-0.25i").unwrap(), cx(1.5, -0.25));
        assert_eq!(parse_complex("-2").unwrap(), cx(-2.0, 0.0));
        assert_eq!(parse_complex("3i").unwrap(), cx(0.0, 3.0));
        assert_eq!(parse_complex("-i").unwrap(), cx(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2.5E+2i").unwrap(), cx(1e-3, 250.0));
        assert_eq!(parse_complex(" 0.5 + 1i ").unwrap(), cx(0.5, 1.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_real(-0.0), "0");
        assert_eq!(format_real(2.5), "2.5");
        assert_eq!(format_complex(cx(1.5, -0.25)), "1.5-0.25i");
        assert_eq!(format_complex(cx(1.0, 0.0)), "1+0i");
    }

    #[test]
    fn multi_matrix_file() {
        let text = "1+0i,0+0i\n0+0i,1+0i\n\n2-1i\n";
        let ms = parse_matrices_csv(text).unwrap();
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0], ComplexMatrix::identity(2, 2));
        assert_eq!(ms[1][(0, 0)], cx(2.0, -1.0));
        assert!(parse_matrix_csv(text).is_err());
        assert!(parse_matrices_csv("1,2\n3\n").is_err());
    }

    #[test]
    fn split_and_join_with_empty_blocks() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| cx((3 * i + j) as f64, 0.0));
        for r in 0..=3 {
            let b = split(&m, r).unwrap();
            assert_eq!(join(&b.b11, &b.b12, &b.b21, &b.b22), m);
        }
        assert!(split(&m, 4).is_err());
        assert!(Partition::new(0).check(3).is_err());
        assert!(Partition::new(3).check(3).is_ok());
    }
}
