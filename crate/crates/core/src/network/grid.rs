//! Log-spaced samples of the imaginary axis, indented around axis poles.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::cx;
use crate::network::rational::{imaginary_axis_poles, RationalMatrix};

/// Arc samples per detour.
pub const ARC_SAMPLES: usize = 16;

/// Default relative detour radius.
pub const DEFAULT_EPS: f64 = 1e-6;

/// Default points per decade.
pub const DEFAULT_PPD: usize = 100;

/// When the range starts at 0, the log-spaced part begins this many decades
/// below `w_hi`.
const ZERO_START_DECADES: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    pub points: Vec<Complex64>,
    /// `Im(s)` of each point; nondecreasing.
    pub omega: Vec<f64>,
    /// Whether the point lies on a detour arc.
    pub detour: Vec<bool>,
    pub eps: f64,
}

impl FrequencyGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Plain `jw` samples with no detours.
    pub fn from_omegas(omegas: &[f64]) -> Self {
        FrequencyGrid {
            points: omegas.iter().map(|&w| cx(0.0, w)).collect(),
            omega: omegas.to_vec(),
            detour: vec![false; omegas.len()],
            eps: 0.0,
        }
    }
}

/// `decades * ppd + 1` log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, ppd: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let count = ((decades * ppd as f64).round() as usize).max(1) + 1;
    let step = decades / (count - 1) as f64;
    (0..count)
        .map(|k| {
            if k == count - 1 {
                hi
            } else {
                lo * 10f64.powf(step * k as f64)
            }
        })
        .collect()
}

/// Samples `[w_lo, w_hi]` on the imaginary axis. Samples closer than
/// `eps * max(1, w_p)` to an axis pole `w_p` are replaced by a semicircular
/// detour into the right half plane (a quarter circle at `w_p = 0`).
pub fn build_grid(
    z: &RationalMatrix,
    w_lo: f64,
    w_hi: f64,
    ppd: usize,
    eps: f64,
) -> Result<FrequencyGrid> {
    if !(w_lo.is_finite() && w_hi.is_finite() && w_lo >= 0.0 && w_lo < w_hi) {
        return Err(Error::InvalidRange(format!("need 0 <= w_lo < w_hi, got [{w_lo}, {w_hi}]")));
    }
    if ppd == 0 {
        return Err(Error::InvalidRange("points per decade must be positive".into()));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidRange(format!("indent radius must be positive, got {eps}")));
    }

    let mut base = if w_lo > 0.0 {
        log_space(w_lo, w_hi, ppd)
    } else {
        let start = w_hi * 10f64.powf(-ZERO_START_DECADES);
        let mut v = vec![0.0];
        v.extend(log_space(start, w_hi, ppd));
        v
    };

    let mut samples: Vec<(f64, Complex64, bool)> = Vec::new();
    for wp in imaginary_axis_poles(z) {
        let rho = eps * wp.max(1.0);
        if wp + rho < w_lo || wp - rho > w_hi {
            continue;
        }
        base.retain(|&w| (w - wp).abs() >= rho);
        for k in 0..ARC_SAMPLES {
            let t = (k as f64 + 0.5) / ARC_SAMPLES as f64;
            let phi = if wp == 0.0 { FRAC_PI_2 * t } else { -FRAC_PI_2 + PI * t };
            let s = cx(0.0, wp) + Complex64::from_polar(rho, phi);
            samples.push((s.im, s, true));
        }
    }
    samples.extend(base.into_iter().map(|w| (w, cx(0.0, w), false)));
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));

    Ok(FrequencyGrid {
        omega: samples.iter().map(|p| p.0).collect(),
        points: samples.iter().map(|p| p.1).collect(),
        detour: samples.iter().map(|p| p.2).collect(),
        eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::rational::RationalFunction;

    fn one(num: &[f64], den: &[f64]) -> RationalMatrix {
        RationalMatrix::from_rows(vec![vec![RationalFunction::new(num.to_vec(), den.to_vec()).unwrap()]])
            .unwrap()
    }

    #[test]
    fn plain_grid_count() {
        let z = one(&[1.0], &[1.0]);
        let g = build_grid(&z, 0.1, 10.0, 10, DEFAULT_EPS).unwrap();
        assert_eq!(g.len(), 21);
        assert!(g.points.iter().all(|s| s.re == 0.0));
        assert!((g.omega[0] - 0.1).abs() < 1e-15 && g.omega[20] == 10.0);
        assert!((g.omega[10] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detour_at_origin() {
        let z = one(&[1.0], &[0.0, 1.0]);
        let g = build_grid(&z, 0.0, 10.0, 10, 1e-3).unwrap();
        let arc: Vec<_> = g.points.iter().zip(&g.detour).filter(|(_, d)| **d).map(|(s, _)| *s).collect();
        assert_eq!(arc.len(), ARC_SAMPLES);
        for s in &arc {
            assert!((s.norm() - 1e-3).abs() < 1e-15);
            assert!(s.re > 0.0 && s.im >= 0.0);
        }
        assert!(g.points.iter().all(|s| s.norm() >= 0.5e-3));
        assert!(g.omega.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn detour_around_resonance() {
        let z = one(&[0.0, 1.0], &[4.0, 0.0, 1.0]);
        let g = build_grid(&z, 0.1, 10.0, 100, 1e-4).unwrap();
        let n_arc = g.detour.iter().filter(|d| **d).count();
        assert_eq!(n_arc, ARC_SAMPLES);
        for s in &g.points {
            assert!((s - cx(0.0, 2.0)).norm() >= 0.5 * 2e-4);
            assert!(s.re >= 0.0);
        }
        assert!(g.omega.windows(2).all(|w| w[0] <= w[1]));
        // Every point can be evaluated.
        for s in &g.points {
            assert!(z.eval(*s).is_ok());
        }
    }

    #[test]
    fn bad_ranges() {
        let z = one(&[1.0], &[1.0]);
        assert!(matches!(build_grid(&z, 10.0, 1.0, 10, 1e-6), Err(Error::InvalidRange(_))));
        assert!(matches!(build_grid(&z, -1.0, 1.0, 10, 1e-6), Err(Error::InvalidRange(_))));
        assert!(matches!(build_grid(&z, 1.0, 10.0, 0, 1e-6), Err(Error::InvalidRange(_))));
        assert!(matches!(build_grid(&z, 1.0, 10.0, 10, 0.0), Err(Error::InvalidRange(_))));
    }
}
