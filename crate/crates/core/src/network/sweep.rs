//! Frequency sweeps of phase bounds.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::wrap_near;
use crate::matrix::{format_real, ComplexMatrix};
use crate::network::grid::FrequencyGrid;
use crate::network::rational::RationalMatrix;
use crate::phase::{analyze, SectorialTag};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub omega: f64,
    pub s: Complex64,
    pub detour: bool,
    /// `None` when the matrix could not be formed at this point.
    pub class: Option<SectorialTag>,
    pub margin: f64,
    pub phi_min: Option<f64>,
    pub phi_max: Option<f64>,
    pub error: Option<Error>,
}

impl SweepPoint {
    pub fn class_code(&self) -> &'static str {
        self.class.map(|c| c.code()).unwrap_or("ND")
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        Some((self.phi_min?, self.phi_max?))
    }
}

/// Per-point bounds plus grid-wide extremes. The extremes are taken over the
/// points that have phases; the rest are counted.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub phi_min: Option<f64>,
    pub phi_max: Option<f64>,
    pub nonsectorial: usize,
    pub failed: usize,
}

impl SweepResult {
    /// Extremes over points with `lo <= omega <= hi`.
    pub fn bounds_on(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        extremes(self.points.iter().filter(|p| p.omega >= lo && p.omega <= hi))
    }

    /// Extremes over points with `lo < omega <= hi`.
    pub fn bounds_on_open_left(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        extremes(self.points.iter().filter(|p| p.omega > lo && p.omega <= hi))
    }

    pub fn count_in(&self, lo: f64, hi: f64, tag: SectorialTag) -> usize {
        self.points
            .iter()
            .filter(|p| p.omega >= lo && p.omega <= hi && p.class == Some(tag))
            .count()
    }

    /// CSV with columns `omega, phi_min, phi_max, class, detour`. Angles are
    /// radians unless `degrees` is set; missing bounds are empty fields.
    pub fn to_csv(&self, degrees: bool) -> String {
        let unit = if degrees { "deg" } else { "rad" };
        let mut out = format!("omega,phi_min_{unit},phi_max_{unit},class,detour\n");
        let conv = |x: Option<f64>| match x {
            Some(v) => format_real(if degrees { v.to_degrees() } else { v }),
            None => String::new(),
        };
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                format_real(p.omega),
                conv(p.phi_min),
                conv(p.phi_max),
                p.class_code(),
                u8::from(p.detour)
            );
        }
        out
    }
}

fn extremes<'a>(it: impl Iterator<Item = &'a SweepPoint>) -> Option<(f64, f64)> {
    it.filter_map(|p| p.bounds()).fold(None, |acc, (lo, hi)| match acc {
        None => Some((lo, hi)),
        Some((a, b)) => Some((a.min(lo), b.max(hi))),
    })
}

/// Evaluates `f` at every grid point in parallel and aggregates in grid
/// order, so the result does not depend on scheduling.
///
/// Each point's interval starts on the canonical branch and is then shifted
/// by a multiple of 2pi to stay within pi of the previous point's midpoint,
/// keeping bounds continuous across the `±pi` cut.
pub fn sweep_with<F>(grid: &FrequencyGrid, tol: f64, f: F) -> SweepResult
where
    F: Fn(Complex64) -> Result<ComplexMatrix> + Sync,
{
    let raw: Vec<SweepPoint> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let s = grid.points[i];
            let mut point = SweepPoint {
                omega: grid.omega[i],
                s,
                detour: grid.detour[i],
                class: None,
                margin: f64::NAN,
                phi_min: None,
                phi_max: None,
                error: None,
            };
            match f(s) {
                Err(e) => point.error = Some(e),
                Ok(m) => {
                    let a = analyze(&m, tol);
                    point.class = Some(a.class.tag);
                    point.margin = a.class.margin;
                    if let Some(j) = a.interval() {
                        point.phi_min = Some(j.lo());
                        point.phi_max = Some(j.hi());
                    }
                }
            }
            point
        })
        .collect();

    let mut points = raw;
    let mut prev_mid: Option<f64> = None;
    for p in points.iter_mut() {
        if let (Some(lo), Some(hi)) = (p.phi_min, p.phi_max) {
            let mid = 0.5 * (lo + hi);
            let shift = match prev_mid {
                Some(r) => wrap_near(mid, r) - mid,
                None => 0.0,
            };
            p.phi_min = Some(lo + shift);
            p.phi_max = Some(hi + shift);
            prev_mid = Some(mid + shift);
        }
    }
    debug_assert!(points
        .iter()
        .filter_map(|p| p.bounds())
        .all(|(lo, hi)| hi - lo <= PI + 1e-9));

    let (phi_min, phi_max) = match extremes(points.iter()) {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    let nonsectorial = points.iter().filter(|p| p.class == Some(SectorialTag::NonSectorial)).count();
    let failed = points.iter().filter(|p| p.class.is_none()).count();
    SweepResult { points, phi_min, phi_max, nonsectorial, failed }
}

pub fn sweep(z: &RationalMatrix, grid: &FrequencyGrid, tol: f64) -> SweepResult {
    sweep_with(grid, tol, |s| z.eval(s))
}
