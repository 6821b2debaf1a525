//! Seeded random inputs for the property suites.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::confluence::{ConfluenceRep, CONFLUENCE_TOL};
use crate::error::{Error, Result};
use crate::interval::PhaseInterval;
use crate::linalg::{condition_number, real_null_space, real_rank};
use crate::matrix::{cx, ComplexMatrix, RealMatrix};
use crate::network::rational::{RationalFunction, RationalMatrix};

/// Largest condition number accepted for a random congruence factor.
pub const MAX_FACTOR_COND: f64 = 1e4;

/// Deterministic generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| cx(gaussian(rng), gaussian(rng)))
}

pub fn random_real<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Square complex matrix with condition number at most `max_cond`.
pub fn random_nonsingular<R: Rng + ?Sized>(rng: &mut R, n: usize, max_cond: f64) -> ComplexMatrix {
    loop {
        let t = random_complex(rng, n, n);
        if condition_number(&t) <= max_cond {
            return t;
        }
    }
}

/// Interval with midpoint uniform on the circle and width uniform in
/// `[0, max_width]`; one draw in twenty is a single angle.
pub fn random_interval<R: Rng + ?Sized>(rng: &mut R, max_width: f64) -> PhaseInterval {
    let mid = rng.random_range(-PI..PI);
    let w = if rng.random_bool(0.05) { 0.0 } else { rng.random_range(0.0..=max_width) };
    PhaseInterval::new(mid - 0.5 * w, mid + 0.5 * w).expect("width below pi")
}

/// `T^* D T` with `D = diag(e^{j phi_k})`, `phi_k` uniform in `j` and `T`
/// random with condition number at most [`MAX_FACTOR_COND`].
pub fn random_sectorial_with<R: Rng + ?Sized>(rng: &mut R, n: usize, j: &PhaseInterval) -> Result<ComplexMatrix> {
    if j.width() >= PI {
        return Err(Error::InvalidInterval { lo: j.lo(), hi: j.hi() });
    }
    let t = random_nonsingular(rng, n, MAX_FACTOR_COND);
    let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| {
        let phi = if j.width() == 0.0 { j.lo() } else { rng.random_range(j.lo()..=j.hi()) };
        cx(phi.cos(), phi.sin())
    }));
    Ok(t.adjoint() * d * t)
}

pub fn random_sectorial(n: usize, j: &PhaseInterval, seed: u64) -> Result<ComplexMatrix> {
    random_sectorial_with(&mut ChaCha8Rng::seed_from_u64(seed), n, j)
}

fn one_port<R: Rng + ?Sized>(rng: &mut R, reactive: bool) -> RationalFunction {
    let v = |rng: &mut R| 10f64.powf(rng.random_range(-1.0..1.0));
    if !reactive {
        return RationalFunction::constant(v(rng));
    }
    let (a, b) = (v(rng), v(rng));
    let pick = rng.random_range(0..4);
    let (num, den) = match pick {
        // inductor, capacitor, series R-L, parallel R-C
        0 => (vec![0.0, a], vec![1.0]),
        1 => (vec![1.0], vec![0.0, a]),
        2 => (vec![a, b], vec![1.0]),
        _ => (vec![a], vec![1.0, a * b]),
    };
    RationalFunction::new(num, den).expect("nonzero denominator")
}

/// Passive n-port: `V^T diag(z_k) V` over `n` resistors and `order`
/// reactive one-ports, each lifted by a random real row of `V`.
pub fn random_passive_network_with<R: Rng + ?Sized>(rng: &mut R, n: usize, order: usize) -> RationalMatrix {
    let m = n + order;
    let mut rows = vec![vec![RationalFunction::zero(); m]; m];
    for (k, row) in rows.iter_mut().enumerate() {
        row[k] = one_port(rng, k >= n);
    }
    let diag = RationalMatrix::from_rows(rows).expect("square");
    let v = random_real(rng, m, n);
    diag.congruence(&v).expect("shapes agree")
}

pub fn random_passive_network(n: usize, order: usize, seed: u64) -> RationalMatrix {
    random_passive_network_with(&mut ChaCha8Rng::seed_from_u64(seed), n, order)
}

fn orthonormal_columns<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> RealMatrix {
    let q = random_real(rng, rows, cols).qr().q();
    q.columns(0, cols).into_owned()
}

/// Random confluence on n ports. The `(a, b)` part is a random subspace `H`
/// of dimension `d` in `[n, 2n]`, `c` is a random linear image of it that is
/// onto, and `[U W]` spans the complement of `H` padded with zero rows.
pub fn random_confluence_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ConfluenceRep {
    loop {
        let d = rng.random_range(n..=2 * n);
        let h = orthonormal_columns(rng, 2 * n, d);
        let l = random_real(rng, n, 2 * n);
        if real_rank(&(&l * &h), 1e-6) < n {
            continue;
        }
        let comp = real_null_space(&h.transpose(), CONFLUENCE_TOL).transpose();
        let mut uw = DMatrix::zeros(n, 2 * n);
        uw.view_mut((0, 0), comp.shape()).copy_from(&comp);
        return ConfluenceRep {
            s: l.columns(0, n).into_owned(),
            t: l.columns(n, n).into_owned(),
            u: uw.columns(0, n).into_owned(),
            w: uw.columns(n, n).into_owned(),
        };
    }
}
