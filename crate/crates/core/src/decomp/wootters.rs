//! An ensemble attaining the Wootters bound: every member has concurrence
//! `C(rho)`, so its average entanglement equals the entanglement of formation.
//! For `C = 0` the members are product states.

use nalgebra::{DMatrix, DVector};

use super::{Decomposition, WEIGHT_TOL};
use crate::measures::spin_flip_overlaps;
use crate::qmat::{takagi, C64, I};
use crate::states::{DensityMatrix, PureState};

pub fn optimal_ef_ensemble(rho: &DensityMatrix) -> Decomposition {
    let es = rho.eigensystem();
    let weighted: Vec<DVector<C64>> = es
        .values
        .iter()
        .zip(&es.vectors)
        .map(|(l, v)| DVector::from_column_slice(v) * C64::new(l.max(0.0).sqrt(), 0.0))
        .collect();
    let v = DMatrix::from_columns(&weighted);

    // tau = Q diag(lambda) Q^T; the states x_i = (V Q)_i satisfy <x_i|x~_k> = lambda_i delta_ik.
    let (lambda, q) = takagi(&spin_flip_overlaps(rho));
    let x = &v * &q;
    let concurrence = lambda[0] - lambda[1] - lambda[2] - lambda[3];

    let (y, mixing) = if concurrence > 0.0 {
        // y_1 = x_1, y_j = i x_j: <y_i|y~_j> = diag(l1, -l2, -l3, -l4), trace C.
        let mut y = x.clone();
        for j in 1..4 {
            let col = y.column(j) * I;
            y.set_column(j, &col);
        }
        let gram = y.adjoint() * &y;
        let traceless = DMatrix::<f64>::from_fn(4, 4, |r, c| {
            let d = if r == c {
                if r == 0 {
                    lambda[0]
                } else {
                    -lambda[r]
                }
            } else {
                0.0
            };
            d - concurrence * gram[(r, c)].re
        });
        (y, zero_diagonal_rotation(traceless))
    } else {
        // Phases closing the polygon l1 + sum_j e^{i phi_j} l_j = 0 make every
        // member's preconcurrence vanish under the +-1/2 mixing below.
        let phi = closing_phases(&lambda);
        let mut y = x.clone();
        for j in 1..4 {
            let col = y.column(j) * C64::from_polar(1.0, -0.5 * phi[j]);
            y.set_column(j, &col);
        }
        let h = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 1.0, 1.0, 1.0, //
                1.0, 1.0, -1.0, -1.0, //
                1.0, -1.0, 1.0, -1.0, //
                1.0, -1.0, -1.0, 1.0,
            ],
        ) * 0.5;
        (y, h)
    };

    let mut terms = Vec::with_capacity(4);
    for k in 0..4 {
        let mut z = DVector::<C64>::zeros(4);
        for j in 0..4 {
            z += y.column(j) * C64::new(mixing[(k, j)], 0.0);
        }
        let p = z.norm_squared();
        if p > WEIGHT_TOL {
            let amps = [z[0], z[1], z[2], z[3]];
            terms.push((p, PureState::normalized(amps).expect("non-zero member")));
        }
    }
    Decomposition::unchecked(terms)
}

/// Real orthogonal `O` with `(O M O^T)_kk = 0` for a traceless symmetric `M`,
/// built from Givens rotations that zero one diagonal entry at a time.
pub(crate) fn zero_diagonal_rotation(m: DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let scale = m.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300);
    let eps = 1e-15 * scale;
    let mut a = m;
    let mut o = DMatrix::<f64>::identity(n, n);
    for _ in 0..n {
        let Some(i) = (0..n)
            .filter(|&k| a[(k, k)].abs() > eps)
            .max_by(|&p, &q| a[(p, p)].abs().total_cmp(&a[(q, q)].abs()))
        else {
            break;
        };
        let sign = a[(i, i)].signum();
        let Some(j) = (0..n)
            .filter(|&k| k != i && a[(k, k)] * sign < -eps)
            .max_by(|&p, &q| a[(p, p)].abs().total_cmp(&a[(q, q)].abs()))
        else {
            break;
        };
        let (aii, aij, ajj) = (a[(i, i)], a[(i, j)], a[(j, j)]);
        // aii + 2 t aij + t^2 ajj = 0 has real roots because aii ajj < 0.
        let t = (-aij + (aij * aij - aii * ajj).sqrt()) / ajj;
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;
        let mut g = DMatrix::<f64>::identity(n, n);
        g[(i, i)] = c;
        g[(i, j)] = s;
        g[(j, i)] = -s;
        g[(j, j)] = c;
        a = &g * a * g.transpose();
        a[(i, i)] = 0.0;
        o = g * o;
    }
    o
}

/// Angles `phi` (with `phi[0] = 0`) such that `sum_j l_j e^{i phi_j} = 0`,
/// for descending non-negative `l` with `l_0 <= l_1 + l_2 + l_3`.
pub(crate) fn closing_phases(l: &[f64]) -> [f64; 4] {
    let (l1, l2, l3, l4) = (l[0], l[1], l[2], l[3]);
    if l1 <= 0.0 {
        return [0.0; 4];
    }
    // Combine l3 and l4 into one side of length `side`, then close the
    // triangle (l1, l2, side).
    let side = (l1 - l2).clamp(l3 - l4, l3 + l4);
    let u = C64::new(l1, 0.0);
    let a = if l2 > 0.0 {
        let cos = ((side * side - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)).clamp(-1.0, 1.0);
        C64::from_polar(l2, cos.acos())
    } else {
        C64::new(0.0, 0.0)
    };
    let b = -(u + a);
    let (b_len, b_arg) = (b.norm(), b.arg());
    let (phi3, phi4) = if l3 > 0.0 && b_len > 0.0 {
        // l3 e^{i phi3} + l4 e^{i phi4} = b
        let cos = ((b_len * b_len + l3 * l3 - l4 * l4) / (2.0 * b_len * l3)).clamp(-1.0, 1.0);
        let phi3 = b_arg + cos.acos();
        let rest = b - C64::from_polar(l3, phi3);
        (phi3, if l4 > 0.0 { rest.arg() } else { 0.0 })
    } else if l3 > 0.0 {
        (0.0, std::f64::consts::PI)
    } else {
        (0.0, 0.0)
    };
    let phi2 = if l2 > 0.0 { a.arg() } else { 0.0 };
    [0.0, phi2, phi3, phi4]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::ef_unchecked;
    use crate::measures::{ef_wootters, pure_preconcurrence};
    use crate::states::{bell, lambda_state, werner, BellKind};
    use approx::assert_abs_diff_eq;

    fn check_optimal(rho: &DensityMatrix) {
        let d = optimal_ef_ensemble(rho);
        d.check(rho).unwrap();
        let w = ef_wootters(rho);
        for (_, psi) in d.terms() {
            assert_abs_diff_eq!(pure_preconcurrence(psi.amplitudes()).norm(), w.concurrence, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(ef_unchecked(&d).bits(), w.ef.bits(), epsilon = 1e-9);
    }

    #[test]
    fn werner_family() {
        for f in [0.0, 0.25, 0.3, 0.5, 0.51, 0.8, 1.0] {
            check_optimal(&werner(f).unwrap());
        }
    }

    #[test]
    fn lambda_family_and_pure_states() {
        for l in [0.0, 0.2, 0.5, 0.9, 1.0] {
            check_optimal(&lambda_state(l).unwrap());
        }
        check_optimal(&bell(BellKind::PsiPlus).projector());
        check_optimal(&PureState::from_real([0.6, 0.0, 0.0, 0.8]).unwrap().projector());
    }

    #[test]
    fn closing_phases_close_the_polygon() {
        for l in [[0.4, 0.3, 0.2, 0.1], [0.3, 0.3, 0.2, 0.0], [0.25; 4], [0.5, 0.5, 0.0, 0.0], [0.4, 0.4, 0.3, 0.1]] {
            let phi = closing_phases(&l);
            let sum: C64 = l.iter().zip(phi).map(|(x, p)| C64::from_polar(*x, p)).sum();
            assert!(sum.norm() < 1e-14, "{l:?}: {sum}");
        }
    }

    #[test]
    fn zero_diagonal_rotation_works() {
        let m = DMatrix::from_row_slice(4, 4, &[0.5, 0.1, 0.0, 0.2, 0.1, -0.1, 0.3, 0.0, 0.0, 0.3, -0.3, 0.05, 0.2, 0.0, 0.05, -0.1]);
        let o = zero_diagonal_rotation(m.clone());
        let r = &o * m * o.transpose();
        for k in 0..4 {
            assert!(r[(k, k)].abs() < 1e-14);
        }
        let id = &o * o.transpose();
        assert!((id - DMatrix::<f64>::identity(4, 4)).iter().all(|x| x.abs() < 1e-14));
    }
}
