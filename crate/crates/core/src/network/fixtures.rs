//! Example networks with closed-form impedance matrices.

use crate::matrix::{cx, ComplexMatrix};
use crate::network::rational::{RationalFunction, RationalMatrix};

fn rf(num: Vec<f64>, den: Vec<f64>) -> RationalFunction {
    RationalFunction::new(num, den).expect("fixture denominators are nonzero")
}

/// Two-port with a resistor, inductor, capacitor and a current source
/// controlled by `V1` with gain `gamma`:
///
/// `Z(s) = 1/(1 + gamma L s) [[Ls, Ls], [(1 - gamma R) Ls, (1 + gamma L s)/(Cs) + Ls + R]]`.
pub fn fig4_network(r: f64, l: f64, c: f64, gamma: f64) -> RationalMatrix {
    let den = vec![1.0, gamma * l];
    let z11 = rf(vec![0.0, l], den.clone());
    let z12 = z11.clone();
    let z21 = rf(vec![0.0, (1.0 - gamma * r) * l], den);
    let z22 = rf(vec![1.0, gamma * l + c * r, c * l], vec![0.0, c, gamma * l * c]);
    RationalMatrix::from_rows(vec![vec![z11, z12], vec![z21, z22]]).expect("2x2")
}

/// Two-port with `Z(s) = 1/(Cs) [[1 + RCs, 1 + kappa Cs], [1 - lambda Ls, 1 - lambda Ls + LCs^2]]`.
pub fn fig14_network(r: f64, l: f64, c: f64, kappa: f64, lambda: f64) -> RationalMatrix {
    let den = vec![0.0, c];
    RationalMatrix::from_rows(vec![
        vec![rf(vec![1.0, r * c], den.clone()), rf(vec![1.0, kappa * c], den.clone())],
        vec![rf(vec![1.0, -lambda * l], den.clone()), rf(vec![1.0, -lambda * l, l * c], den)],
    ])
    .expect("2x2")
}

/// Four-resistor two-port and the negative load resistance `R_N` that makes
/// its cascade-load connection fail to exist (`Z22 + R_N = 0`).
pub fn fig13_resistive(r1: f64, r2: f64, r3: f64, r4: f64) -> (ComplexMatrix, f64) {
    let sum = r1 + r2 + r3 + r4;
    let za = ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            cx((r1 + r3 + r4) * r2 / sum, 0.0),
            cx(r2 * r4 / sum, 0.0),
            cx(r2 * r4 / sum, 0.0),
            cx((r1 + r2 + r3) * r4 / sum, 0.0),
        ],
    );
    (za, -(r1 + r2 + r3) * r4 / sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::relative_diff;

    #[test]
    fn fig4_without_source() {
        // gamma = 0: [[s, s], [s, 1/(2s) + s + 1]].
        let z = fig4_network(1.0, 1.0, 2.0, 0.0);
        for s in [cx(0.0, 0.7), cx(0.3, 2.0)] {
            let want = ComplexMatrix::from_row_slice(2, 2, &[s, s, s, 1.0 / (2.0 * s) + s + 1.0]);
            assert!(relative_diff(&z.eval(s).unwrap(), &want) < 1e-14);
        }
    }

    #[test]
    fn fig4_at_unit_frequency() {
        let z = fig4_network(1.0, 1.0, 2.0, 1.0).eval(cx(0.0, 1.0)).unwrap();
        let j = cx(0.0, 1.0);
        let k = 1.0 / (1.0 + j);
        let z22 = (1.0 + j) / (2.0 * j) + j + 1.0;
        let want = ComplexMatrix::from_row_slice(2, 2, &[k * j, k * j, cx(0.0, 0.0), k * z22]);
        assert!(relative_diff(&z, &want) < 1e-14);
    }

    #[test]
    fn fig14_entry() {
        let z = fig14_network(10.0, 0.2, 1.0, 0.1, 0.5);
        let e = z.entry(0, 0);
        assert_eq!((e.num.as_slice(), e.den.as_slice()), ([1.0, 10.0].as_slice(), [0.0, 1.0].as_slice()));
        let s = cx(0.0, 3.0);
        let want = (1.0 - 0.5 * 0.2 * s + 0.2 * s * s) / s;
        assert!((z.eval(s).unwrap()[(1, 1)] - want).norm() < 1e-14);
    }

    #[test]
    fn fig13_unit_resistors() {
        let (za, rn) = fig13_resistive(1.0, 1.0, 1.0, 1.0);
        let want = ComplexMatrix::from_row_slice(2, 2, &[cx(0.75, 0.0), cx(0.25, 0.0), cx(0.25, 0.0), cx(0.75, 0.0)]);
        assert!(relative_diff(&za, &want) < 1e-15);
        assert_eq!(rn, -0.75);
    }
}
