use std::f64::consts::FRAC_PI_2;

use portphase::connections::{connect_networks, predict_interval, Connection, ConnectionKind};
use portphase::harness::random_passive_network;
use portphase::matrix::cx;
use portphase::network::{
    build_grid, fig13_resistive, fig14_network, fig4_network, sweep, RationalMatrix, DEFAULT_EPS,
};
use portphase::PhaseInterval;
use portphase::DEFAULT_TOL;

#[test]
fn passive_networks_stay_in_right_half_plane() {
    for seed in 0..10 {
        let z = random_passive_network(3, 4, seed);
        let grid = build_grid(&z, 1e-2, 1e2, 20, DEFAULT_EPS).unwrap();
        let r = sweep(&z, &grid, DEFAULT_TOL);
        assert_eq!(r.nonsectorial + r.failed, 0, "seed {seed}");
        assert!(r.phi_min.unwrap() >= -FRAC_PI_2 - 1e-6 && r.phi_max.unwrap() <= FRAC_PI_2 + 1e-6);
    }
}

#[test]
fn series_of_passive_networks_is_passive() {
    let (za, zb) = (random_passive_network(2, 2, 1), random_passive_network(2, 3, 2));
    let grid = build_grid(&za.add(&zb).unwrap(), 0.0, 1e2, 10, DEFAULT_EPS).unwrap();
    let r = connect_networks(Connection::new(ConnectionKind::Series, 0), &za, &zb, &grid, DEFAULT_TOL);
    assert_eq!(r.failed, 0);
    assert!(r.phi_min.unwrap() >= -FRAC_PI_2 - 1e-6 && r.phi_max.unwrap() <= FRAC_PI_2 + 1e-6);
}

#[test]
fn sweep_is_deterministic_and_ordered() {
    let z = fig4_network(1.0, 1.0, 2.0, 1.0);
    let grid = build_grid(&z, 1e-2, 1e3, 50, DEFAULT_EPS).unwrap();
    let a = sweep(&z, &grid, DEFAULT_TOL);
    assert_eq!(a, sweep(&z, &grid, DEFAULT_TOL));
    assert!(a.points.windows(2).all(|w| w[0].omega < w[1].omega));
    let text = a.to_csv(false);
    assert_eq!(text.lines().count(), a.points.len() + 1);
}

#[test]
fn json_round_trip_keeps_values() {
    let z = fig4_network(1.0, 1.0, 2.0, 10.0);
    let back = RationalMatrix::from_json(&z.to_json()).unwrap();
    let s = cx(0.3, 2.0);
    assert_eq!(z.eval(s).unwrap(), back.eval(s).unwrap());
}

#[test]
fn resistive_load_value() {
    let (za, rn) = fig13_resistive(1.0, 1.0, 1.0, 1.0);
    assert!((za[(1, 1)].re + rn).abs() < 1e-15);
}

#[test]
fn demo_connections_stay_in_hull_of_inputs() {
    let za = fig4_network(1.0, 1.0, 2.0, 1.0);
    let zb = fig14_network(10.0, 0.2, 1.0, 0.1, 0.5);
    let grid = build_grid(&za.add(&zb).unwrap(), 1e-2, 1e3, 20, DEFAULT_EPS).unwrap();
    let (ra, rb) = (sweep(&za, &grid, DEFAULT_TOL), sweep(&zb, &grid, DEFAULT_TOL));
    let kinds = [
        (ConnectionKind::Shorted, 1),
        (ConnectionKind::Open, 1),
        (ConnectionKind::Series, 0),
        (ConnectionKind::Parallel, 0),
        (ConnectionKind::Hybrid, 1),
        (ConnectionKind::Cascade, 1),
        (ConnectionKind::HybridCascade, 1),
    ];
    for (kind, split) in kinds {
        let r = connect_networks(Connection::new(kind, split), &za, &zb, &grid, DEFAULT_TOL);
        let mut checked = 0;
        for (k, p) in r.points.iter().enumerate() {
            let (Some(a), Some(b), Some(c)) = (ra.points[k].bounds(), rb.points[k].bounds(), p.bounds()) else {
                continue;
            };
            // no prediction where an interval or the hull is wider than pi
            let (Ok(ja), Ok(jb), Ok(jc)) =
                (PhaseInterval::new(a.0, a.1), PhaseInterval::new(b.0, b.1), PhaseInterval::new(c.0, c.1))
            else {
                continue;
            };
            // unary kinds only see Za
            let want = if kind.is_unary() { Ok(ja) } else { predict_interval(&ja, &jb) };
            let Ok(want) = want else { continue };
            assert!(want.contains(&jc, 1e-6), "{kind} at w={}: {jc:?} outside {want:?}", p.omega);
            checked += 1;
        }
        assert!(checked > 50, "{kind}: only {checked} points");
    }
}
