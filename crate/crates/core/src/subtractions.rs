//! Inverse connections: recover `Zx` from the connected `Zc` and the known
//! partner `Zb`, so that connecting `Zx` with `Zb` gives back `Zc`.
//!
//! Pivots are inverted with a plain inverse behind a condition-number guard;
//! an ill-conditioned pivot is reported rather than regularized.

use std::f64::consts::PI;

use crate::connections::ConnectionKind;
use crate::error::{Error, Result};
use crate::interval::PhaseInterval;
use crate::linalg::guarded_inverse;
use crate::matrix::{ensure_same_shape, ensure_square, join, split, ComplexMatrix};

/// Largest pivot condition number accepted.
pub const MAX_PIVOT_COND: f64 = 1e12;

pub fn series_sub(zc: &ComplexMatrix, zb: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(zc, "Zc")?;
    ensure_same_shape(zc, zb)?;
    Ok(zc - zb)
}

/// `-Zb (Zc - Zb)^{-1} Zc`.
pub fn parallel_sub(zc: &ComplexMatrix, zb: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(zc, "Zc")?;
    ensure_same_shape(zc, zb)?;
    let y = guarded_inverse(&(zc - zb), MAX_PIVOT_COND, "Zc-Zb")?;
    Ok(-(zb * y * zc))
}

pub fn hybrid_sub(zc: &ComplexMatrix, zb: &ComplexMatrix, r: usize) -> Result<ComplexMatrix> {
    let n = ensure_square(zc, "Zc")?;
    ensure_same_shape(zc, zb)?;
    if r > n {
        return Err(Error::InvalidPartition { r, n });
    }
    let c = split(zc, r)?;
    let b = split(zb, r)?;
    let y = guarded_inverse(&(&c.b22 - &b.b22), MAX_PIVOT_COND, "Zc22-Zb22")?;
    let d12 = &c.b12 - &b.b12;
    let d21 = &c.b21 - &b.b21;
    let x11 = &c.b11 - &b.b11 - &d12 * &y * &d21;
    let x12 = &b.b12 - &d12 * &y * &b.b22;
    let x21 = &b.b21 - &b.b22 * &y * &d21;
    let x22 = -(&b.b22 * &y * &c.b22);
    Ok(join(&x11, &x12, &x21, &x22))
}

/// Undoes a cascade whose chained and outer port counts agree: `Zb` is a
/// (t+t)-port and `Zc` an (r+t)-port. Other shapes do not determine `Zx`.
pub fn cascade_sub(zc: &ComplexMatrix, zb: &ComplexMatrix) -> Result<ComplexMatrix> {
    let nc = ensure_square(zc, "Zc")?;
    let nb = ensure_square(zb, "Zb")?;
    if nb % 2 != 0 || nb / 2 > nc {
        return Err(Error::DimMismatch(format!(
            "cascade subtraction needs an even-sized Zb with half its ports at most {nc}, got {nb}"
        )));
    }
    let t = nb / 2;
    let c = split(zc, nc - t)?;
    let b = split(zb, t)?;
    let y = guarded_inverse(&(&c.b22 - &b.b22), MAX_PIVOT_COND, "Zc22-Zb22")?;
    let x11 = &c.b11 - &c.b12 * &y * &c.b21;
    let x12 = -(&c.b12 * &y * &b.b21);
    let x21 = -(&b.b12 * &y * &c.b21);
    let x22 = -&b.b11 - &b.b12 * &y * &b.b21;
    Ok(join(&x11, &x12, &x21, &x22))
}

/// Undoes a hybrid-cascade with `r = s`: `Zc` and `Zb` are both 2r-ports.
pub fn hybrid_cascade_sub(zc: &ComplexMatrix, zb: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = ensure_square(zc, "Zc")?;
    ensure_same_shape(zc, zb)?;
    if n % 2 != 0 {
        return Err(Error::DimMismatch(format!(
            "hybrid-cascade subtraction needs an even port count, got {n}"
        )));
    }
    let r = n / 2;
    let c = split(zc, r)?;
    let b = split(zb, r)?;
    let y = guarded_inverse(&(&c.b22 - &b.b22), MAX_PIVOT_COND, "Zc22-Zb22")?;
    let d12 = &c.b12 - &b.b22;
    let d21 = &c.b21 - &b.b22;
    let x11 = &c.b11 - &b.b22 - &d12 * &y * &d21;
    let x12 = &b.b21 - &d12 * &y * &b.b21;
    let x21 = &b.b12 - &b.b12 * &y * &d21;
    let x22 = -&b.b11 - &b.b12 * &y * &b.b21;
    Ok(join(&x11, &x12, &x21, &x22))
}

/// Dispatches on the connection being undone. `split` is the hybrid
/// partition and is ignored otherwise.
pub fn subtract(kind: ConnectionKind, zc: &ComplexMatrix, zb: &ComplexMatrix, split: usize) -> Result<ComplexMatrix> {
    match kind {
        ConnectionKind::Series => series_sub(zc, zb),
        ConnectionKind::Parallel => parallel_sub(zc, zb),
        ConnectionKind::Hybrid => hybrid_sub(zc, zb, split),
        ConnectionKind::Cascade => cascade_sub(zc, zb),
        ConnectionKind::HybridCascade => hybrid_cascade_sub(zc, zb),
        other => Err(Error::Parse(format!("no subtraction is defined for `{other}`"))),
    }
}

/// Phase range of `Zx` from those of `Zc` and `Zb`: the hull of `Jc` and
/// `Jb ± pi`, with the sign that keeps the hull narrower than pi. When both
/// signs qualify the narrower hull wins, and `+pi` wins a tie.
pub fn predict_subtraction_interval(jc: &PhaseInterval, jb: &PhaseInterval) -> Result<PhaseInterval> {
    if !jc.disjoint_mod_2pi(jb) {
        return Err(Error::Overlap);
    }
    let b = jb.aligned_to(jc.mid());
    let candidate = |sign: f64| {
        let lo = jc.lo().min(b.lo() + sign * PI);
        let hi = jc.hi().max(b.hi() + sign * PI);
        (hi - lo < PI).then_some((lo, hi))
    };
    let pick = match (candidate(1.0), candidate(-1.0)) {
        (Some(p), Some(m)) => {
            if m.1 - m.0 < p.1 - p.0 {
                m
            } else {
                p
            }
        }
        (Some(p), None) => p,
        (None, Some(m)) => m,
        (None, None) => return Err(Error::NoValidSign),
    };
    PhaseInterval::new(pick.0, pick.1)
}
