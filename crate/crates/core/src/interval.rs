//! Closed angular intervals of width at most pi, compared modulo 2pi.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on the width bound so that intervals built from computed
/// phases at exactly pi apart are still accepted.
const WIDTH_SLACK: f64 = 1e-12;

/// `[lo, hi]` with `0 <= hi - lo <= pi`, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseInterval {
    lo: f64,
    hi: f64,
}

/// Reduces `phi` by a multiple of 2pi into `(reference - pi, reference + pi]`.
pub fn wrap_near(phi: f64, reference: f64) -> f64 {
    let k = ((phi - reference) / TAU).round();
    let mut out = phi - k * TAU;
    if out <= reference - PI {
        out += TAU;
    } else if out > reference + PI {
        out -= TAU;
    }
    out
}

impl PhaseInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let w = hi - lo;
        if !lo.is_finite() || !hi.is_finite() || !(0.0..=PI + WIDTH_SLACK).contains(&w) {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(PhaseInterval { lo, hi })
    }

    pub fn point(phi: f64) -> Self {
        PhaseInterval { lo: phi, hi: phi }
    }

    /// Smallest interval holding all `phases` as given (no wrapping).
    /// `None` for an empty list.
    pub fn from_phases(phases: &[f64]) -> Option<Result<Self>> {
        if phases.is_empty() {
            return None;
        }
        let lo = phases.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = phases.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Self::new(lo, hi))
    }

    /// `[self.lo, hi]` without the width check; used where the spread is
    /// already known to be at most pi up to rounding.
    pub(crate) fn hull_unchecked(&self, hi: f64) -> Self {
        PhaseInterval { lo: self.lo, hi: hi.max(self.lo) }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Shifted by `turns` full turns.
    pub fn shifted(&self, turns: i32) -> Self {
        let d = TAU * turns as f64;
        PhaseInterval { lo: self.lo + d, hi: self.hi + d }
    }

    /// Representative whose midpoint lies in `(reference - pi, reference + pi]`.
    pub fn aligned_to(&self, reference: f64) -> Self {
        let d = wrap_near(self.mid(), reference) - self.mid();
        PhaseInterval { lo: self.lo + d, hi: self.hi + d }
    }

    /// Representative whose midpoint lies in `(-pi, pi]`.
    pub fn canonical(&self) -> Self {
        self.aligned_to(0.0)
    }

    pub fn contains_angle(&self, phi: f64, tol: f64) -> bool {
        let p = wrap_near(phi, self.mid());
        p >= self.lo - tol && p <= self.hi + tol
    }

    /// `other ⊆ self` modulo 2pi, up to `tol` on both ends.
    pub fn contains(&self, other: &PhaseInterval, tol: f64) -> bool {
        let o = other.aligned_to(self.mid());
        o.lo >= self.lo - tol && o.hi <= self.hi + tol
    }

    /// How far `other` sticks out of `self` (0 when contained).
    pub fn excess(&self, other: &PhaseInterval) -> f64 {
        let o = other.aligned_to(self.mid());
        (self.lo - o.lo).max(o.hi - self.hi).max(0.0)
    }

    /// `[min lo, max hi]` after aligning `other` to `self`.
    pub fn hull(&self, other: &PhaseInterval) -> Result<Self> {
        let o = other.aligned_to(self.mid());
        let lo = self.lo.min(o.lo);
        let hi = self.hi.max(o.hi);
        if hi - lo > PI + WIDTH_SLACK {
            return Err(Error::HullTooWide { width: hi - lo });
        }
        Ok(PhaseInterval { lo, hi })
    }

    /// True when the closed arcs share no point on the circle.
    pub fn disjoint_mod_2pi(&self, other: &PhaseInterval) -> bool {
        let o = other.aligned_to(self.mid());
        (-1..=1).all(|k| {
            let s = o.shifted(k);
            self.lo.max(s.lo) > self.hi.min(s.hi)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn width_bound() {
        assert!(PhaseInterval::new(-FRAC_PI_2, FRAC_PI_2).is_ok());
        assert!(PhaseInterval::new(0.0, PI + 1e-6).is_err());
        assert!(PhaseInterval::new(1.0, 0.0).is_err());
        assert!(PhaseInterval::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn canonical_midpoint() {
        let j = PhaseInterval::new(3.0 * PI, 3.5 * PI).unwrap().canonical();
        assert!((j.lo() + PI).abs() < 1e-12);
        assert!(j.mid() > -PI && j.mid() <= PI);
        let k = PhaseInterval::point(PI).canonical();
        assert_eq!(k.lo(), PI);
    }

    #[test]
    fn containment_wraps() {
        let j = PhaseInterval::new(3.0, 3.5).unwrap();
        assert!(j.contains_angle(3.2 - TAU, 0.0));
        assert!(!j.contains_angle(0.0, 1e-6));
        let inner = PhaseInterval::new(3.1 + TAU, 3.2 + TAU).unwrap();
        assert!(j.contains(&inner, 0.0));
        assert!(j.excess(&inner) == 0.0);
    }

    #[test]
    fn hull_and_disjointness() {
        let a = PhaseInterval::new(-PI / 4.0, PI / 4.0).unwrap();
        let b = PhaseInterval::new(0.0, FRAC_PI_2).unwrap();
        let h = a.hull(&b).unwrap();
        assert_eq!((h.lo(), h.hi()), (-PI / 4.0, FRAC_PI_2));
        let c = PhaseInterval::new(2.0, 3.0).unwrap();
        assert!(matches!(a.hull(&c), Err(Error::HullTooWide { .. })));
        assert!(!a.disjoint_mod_2pi(&b));
        assert!(a.disjoint_mod_2pi(&c));
        // Touching counts as overlap.
        let d = PhaseInterval::new(PI / 4.0, 1.0).unwrap();
        assert!(!a.disjoint_mod_2pi(&d));
        // Overlap only visible across the branch cut.
        let e = PhaseInterval::new(3.0, 3.2).unwrap();
        let f = PhaseInterval::new(-3.2, -3.0).unwrap();
        assert!(!e.disjoint_mod_2pi(&f));
    }
}
