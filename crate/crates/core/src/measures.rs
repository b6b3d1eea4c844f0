//! Pauli analysis, entropies, the relative state of a pure state, and the
//! per-state measures (Wootters EF, PPT).
//!
//! All logarithms are base 2, so entropies are in bits.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qmat::{
    eigh, hermitian_eigensystem, kron, takagi, partial_trace, partial_transpose, pauli, ComplexMatrix,
    Subsystem, C64,
};
use crate::states::{DensityMatrix, PureState};

/// Eigenvalues of sigma below this are treated as its kernel.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Mass of rho inside ker(sigma) above this makes the relative entropy infinite.
pub const OVERLAP_TOL: f64 = 1e-10;
/// Below this polarization length the relative state is built from the Schmidt form.
pub const XI_BRANCH_TOL: f64 = 1e-8;
/// Minimum eigenvalue of the partial transpose still counted as non-negative.
pub const PPT_TOL: f64 = 1e-10;

const CLAMP_TOL: f64 = 1e-10;
const NEGATIVE_RESULT_TOL: f64 = 1e-9;

/// An entropy in bits. Relative entropies may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Entropy(f64);

impl Entropy {
    pub const ZERO: Entropy = Entropy(0.0);
    pub const INFINITE: Entropy = Entropy(f64::INFINITY);

    pub fn bits(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub(crate) fn from_bits(x: f64) -> Self {
        Entropy(x)
    }
}

impl fmt::Display for Entropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("inf")
        }
    }
}

impl serde::Serialize for Entropy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}

/// `x log2 x` with `0 log 0 = 0`.
fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Shannon entropy of `(p, 1 - p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    -(xlogx(p) + xlogx(1.0 - p))
}

/// Single-qubit polarization (Bloch) vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationVector(pub [f64; 3]);

impl PolarizationVector {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `(I + s xi_hat . sigma) / 2` for the unit vector `xi_hat = xi / norm`.
    fn pure_projector(&self, norm: f64, sign: f64) -> ComplexMatrix {
        let mut m = pauli(0);
        for (k, x) in self.0.iter().enumerate() {
            m = m.add(&pauli(k + 1).scale(sign * x / norm)).expect("2x2");
        }
        m.scale(0.5)
    }
}

fn bloch_of(rho2: &ComplexMatrix) -> PolarizationVector {
    let mut xi = [0.0; 3];
    for (k, x) in xi.iter_mut().enumerate() {
        *x = rho2.mul(&pauli(k + 1)).expect("2x2").trace().re;
    }
    PolarizationVector(xi)
}

/// `xi_A = Tr(rho sigma (x) I)` and `xi_B = Tr(rho I (x) sigma)`.
pub fn polarization_vectors(rho: &DensityMatrix) -> (PolarizationVector, PolarizationVector) {
    let m = rho.matrix();
    let ra = partial_trace(m, Subsystem::A).expect("4x4 state");
    let rb = partial_trace(m, Subsystem::B).expect("4x4 state");
    (bloch_of(&ra), bloch_of(&rb))
}

/// Real coefficients of `rho = sum a[mu][nu] sigma_mu (x) sigma_nu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliCoefficients {
    pub a: [[f64; 4]; 4],
}

impl PauliCoefficients {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4);
        for mu in 0..4 {
            for nu in 0..4 {
                let term = kron(&pauli(mu), &pauli(nu)).expect("2x2 factors");
                m = m.add(&term.scale(self.a[mu][nu])).expect("4x4");
            }
        }
        m
    }
}

/// `a[mu][nu] = Tr(rho sigma_mu (x) sigma_nu) / 4`.
pub fn pauli_coefficients(rho: &DensityMatrix) -> PauliCoefficients {
    let mut a = [[0.0; 4]; 4];
    for (mu, row) in a.iter_mut().enumerate() {
        for (nu, x) in row.iter_mut().enumerate() {
            let p = kron(&pauli(mu), &pauli(nu)).expect("2x2 factors");
            *x = 0.25 * rho.matrix().mul(&p).expect("4x4").trace().re;
        }
    }
    PauliCoefficients { a }
}

fn entropy_of_spectrum(values: &[f64]) -> f64 {
    let s: f64 = values
        .iter()
        .map(|&l| if (-CLAMP_TOL..0.0).contains(&l) { 0.0 } else { l })
        .map(|l| -xlogx(l))
        .sum();
    s.max(0.0)
}

/// `-Tr rho log2 rho`
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Entropy {
    Entropy(entropy_of_spectrum(&rho.eigensystem().values))
}

/// `S(rho || sigma) = -S(rho) - sum_k log2(l_k) <v_k|rho|v_k>` over the
/// eigenpairs `(l_k, v_k)` of sigma.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Entropy> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let es = sigma.eigensystem();
    let mut cross = 0.0;
    let mut kernel_mass = 0.0;
    for (l, v) in es.values.iter().zip(&es.vectors) {
        let overlap = rho.matrix().expectation(v).re;
        if *l < SUPPORT_TOL {
            kernel_mass += overlap;
        } else {
            cross -= overlap * l.log2();
        }
    }
    if kernel_mass > OVERLAP_TOL {
        return Ok(Entropy::INFINITE);
    }
    let value = cross - von_neumann_entropy(rho).bits();
    debug_assert!(value >= -NEGATIVE_RESULT_TOL, "relative entropy {value} below zero");
    Ok(Entropy(value.max(0.0)))
}

fn amplitude_matrix(psi: &PureState) -> DMatrix<C64> {
    let [a, b, c, d] = *psi.amplitudes();
    DMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

/// Separable state attached to a pure state: the two-term product mixture
/// along the reduced polarization axes, weighted by `(1 +- |xi|) / 2`.
/// Maximally entangled inputs, where the axes are undefined, go through
/// [`relative_state_schmidt`].
pub fn relative_state_pure(psi: &PureState) -> DensityMatrix {
    let (xi_a, xi_b) = polarization_vectors(&psi.projector());
    let (na, nb) = (xi_a.norm(), xi_b.norm());
    let xi = 0.5 * (na + nb);
    if xi <= XI_BRANCH_TOL {
        return relative_state_schmidt(psi);
    }
    let xi = xi.min(1.0);
    let plus = kron(&xi_a.pure_projector(na, 1.0), &xi_b.pure_projector(nb, 1.0)).expect("2x2");
    let minus = kron(&xi_a.pure_projector(na, -1.0), &xi_b.pure_projector(nb, -1.0)).expect("2x2");
    let r = plus.scale(0.5 * (1.0 + xi)).add(&minus.scale(0.5 * (1.0 - xi))).expect("4x4");
    DensityMatrix::trusted(r)
}

/// Schmidt pinch `sum_i s_i^2 |e_i><e_i| (x) |f_i><f_i|` of
/// `psi = sum_i s_i |e_i> |f_i>`, with the left Schmidt vectors taken from a
/// deterministic eigenbasis of the reduced state of A.
pub fn relative_state_schmidt(psi: &PureState) -> DensityMatrix {
    DensityMatrix::trusted(product_mixture(&schmidt_components(psi)))
}

/// One product term `weight |a><a| (x) |b><b|` of a separable state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductTerm {
    pub weight: f64,
    pub a: [C64; 2],
    pub b: [C64; 2],
}

/// Qubit state with Bloch vector `n` (unit length).
fn bloch_state(n: [f64; 3]) -> [C64; 2] {
    let theta = n[2].clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    [C64::new((0.5 * theta).cos(), 0.0), C64::from_polar((0.5 * theta).sin(), phi)]
}

/// The product terms making up [`relative_state_pure`].
pub fn relative_state_components(psi: &PureState) -> Vec<ProductTerm> {
    let (xi_a, xi_b) = polarization_vectors(&psi.projector());
    let (na, nb) = (xi_a.norm(), xi_b.norm());
    let xi = 0.5 * (na + nb);
    if xi <= XI_BRANCH_TOL {
        return schmidt_components(psi);
    }
    let xi = xi.min(1.0);
    let unit = |v: &PolarizationVector, n: f64, s: f64| v.0.map(|x| s * x / n);
    vec![
        ProductTerm {
            weight: 0.5 * (1.0 + xi),
            a: bloch_state(unit(&xi_a, na, 1.0)),
            b: bloch_state(unit(&xi_b, nb, 1.0)),
        },
        ProductTerm {
            weight: 0.5 * (1.0 - xi),
            a: bloch_state(unit(&xi_a, na, -1.0)),
            b: bloch_state(unit(&xi_b, nb, -1.0)),
        },
    ]
}

fn schmidt_components(psi: &PureState) -> Vec<ProductTerm> {
    let m = amplitude_matrix(psi);
    let (s2, left) = eigh(&(&m * m.adjoint()));
    let mut out = Vec::with_capacity(2);
    for (weight, u) in s2.iter().zip(&left) {
        if *weight <= 1e-300 {
            continue;
        }
        let f = m.transpose() * u.conjugate();
        let fnorm = f.norm();
        if fnorm == 0.0 {
            continue;
        }
        let f = f / C64::new(fnorm, 0.0);
        out.push(ProductTerm {
            weight: *weight,
            a: [u[0], u[1]],
            b: [f[0], f[1]],
        });
    }
    let total: f64 = out.iter().map(|t| t.weight).sum();
    for t in &mut out {
        t.weight /= total;
    }
    out
}

/// `sum_k w_k |a_k><a_k| (x) |b_k><b_k|`
pub fn product_mixture(terms: &[ProductTerm]) -> ComplexMatrix {
    let mut r = ComplexMatrix::zeros(4);
    for t in terms {
        let pa = ComplexMatrix::projector(&t.a).expect("2-vector");
        let pb = ComplexMatrix::projector(&t.b).expect("2-vector");
        r = r.add(&kron(&pa, &pb).expect("2x2").scale(t.weight)).expect("4x4");
    }
    r
}

/// Entanglement of a pure state: entropy of its reduced state.
pub fn ef_pure(psi: &PureState) -> Entropy {
    let m = amplitude_matrix(psi);
    // rho_B = M^T conj(M); its spectrum equals that of M M^dagger.
    let (s2, _) = eigh(&(&m * m.adjoint()));
    Entropy(entropy_of_spectrum(&s2))
}

/// Concurrence and entanglement of formation from the spin-flip construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wootters {
    pub concurrence: f64,
    pub ef: Entropy,
    /// Square roots of the eigenvalues of `rho rho~`, descending.
    pub lambdas: [f64; 4],
}

/// `(sigma_y (x) sigma_y)`, which is real.
pub(crate) fn yy() -> DMatrix<C64> {
    kron(&pauli(2), &pauli(2)).expect("2x2").as_dmatrix().clone()
}

/// `rho~ = (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)`
pub fn spin_flip(rho: &DensityMatrix) -> ComplexMatrix {
    let y = yy();
    let flipped = &y * rho.matrix().as_dmatrix().conjugate() * &y;
    ComplexMatrix::from_dmatrix(flipped).expect("4x4")
}

/// Symmetric matrix `tau_ij = <v_i | v~_j>` over the subnormalized
/// eigenvectors `v_i = sqrt(l_i) e_i` of rho (zero columns included).
pub(crate) fn spin_flip_overlaps(rho: &DensityMatrix) -> DMatrix<C64> {
    let es = rho.eigensystem();
    let cols: Vec<nalgebra::DVector<C64>> = es
        .values
        .iter()
        .zip(&es.vectors)
        .map(|(l, v)| nalgebra::DVector::from_column_slice(v) * C64::new(l.max(0.0).sqrt(), 0.0))
        .collect();
    let v = DMatrix::from_columns(&cols);
    v.adjoint() * yy() * v.conjugate()
}

pub fn ef_wootters(rho: &DensityMatrix) -> Wootters {
    assert_eq!(rho.dim(), 4, "Wootters formula needs a two-qubit state");
    // The Takagi values of tau are the square roots of the eigenvalues of
    // rho rho~, without the precision loss of taking square roots.
    let (sigmas, _) = takagi(&spin_flip_overlaps(rho));
    let mut lambdas = [0.0; 4];
    lambdas.copy_from_slice(&sigmas);
    let concurrence = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Wootters {
        concurrence,
        ef: Entropy(ef_from_concurrence(concurrence)),
        lambdas,
    }
}

/// `h((1 + sqrt(1 - C^2)) / 2)`
pub fn ef_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

/// Minimum eigenvalue of the partial transpose.
pub fn min_partial_transpose_eigenvalue(rho: &DensityMatrix) -> f64 {
    let pt = partial_transpose(rho.matrix()).expect("4x4 state");
    *hermitian_eigensystem(&pt)
        .expect("partial transpose of a Hermitian matrix is Hermitian")
        .values
        .last()
        .expect("non-empty")
}

/// Peres test; exact for two qubits.
pub fn ppt_separable(rho: &DensityMatrix) -> bool {
    min_partial_transpose_eigenvalue(rho) >= -PPT_TOL
}

/// Pure-state concurrence `|<psi| psi~>|`.
#[cfg(test)]
pub(crate) fn pure_preconcurrence(amps: &[C64]) -> C64 {
    let y = yy();
    let v = nalgebra::DVector::from_column_slice(amps);
    (v.adjoint() * &y * v.conjugate())[(0, 0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell, werner, BellKind};
    use approx::assert_abs_diff_eq;

    fn skewed() -> PureState {
        PureState::from_real([0.8f64.sqrt(), 0.0, 0.0, 0.2f64.sqrt()]).unwrap()
    }

    #[test]
    fn polarization_examples() {
        let (a, b) = polarization_vectors(&PureState::basis(0).projector());
        assert_eq!(a.0, [0.0, 0.0, 1.0]);
        assert_eq!(b.0, [0.0, 0.0, 1.0]);
        for k in BellKind::ALL {
            let (a, b) = polarization_vectors(&bell(k).projector());
            assert!(a.norm() < 1e-15 && b.norm() < 1e-15);
        }
        let (a, b) = polarization_vectors(&skewed().projector());
        for v in [a, b] {
            assert_abs_diff_eq!(v.0[2], 0.6, epsilon = 1e-14);
            assert_abs_diff_eq!(v.0[0], 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn pauli_coefficient_examples() {
        let mixed = crate::states::validate_density(&ComplexMatrix::identity(4).scale(0.25), 1e-10).unwrap();
        let a = pauli_coefficients(&mixed).a;
        for mu in 0..4 {
            for nu in 0..4 {
                let want = if mu == 0 && nu == 0 { 0.25 } else { 0.0 };
                assert_abs_diff_eq!(a[mu][nu], want, epsilon = 1e-15);
            }
        }

        // Phi+: direct traces against sigma_mu (x) sigma_nu
        let a = pauli_coefficients(&bell(BellKind::PhiPlus).projector()).a;
        let mut want = [[0.0; 4]; 4];
        want[0][0] = 0.25;
        want[1][1] = 0.25;
        want[2][2] = -0.25;
        want[3][3] = 0.25;
        for mu in 0..4 {
            for nu in 0..4 {
                assert_abs_diff_eq!(a[mu][nu], want[mu][nu], epsilon = 1e-15);
            }
        }

        let a = pauli_coefficients(&PureState::basis(0).projector()).a;
        for mu in 0..4 {
            for nu in 0..4 {
                let want = if (mu == 0 || mu == 3) && (nu == 0 || nu == 3) { 0.25 } else { 0.0 };
                assert_abs_diff_eq!(a[mu][nu], want, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(von_neumann_entropy(&bell(BellKind::PsiPlus).projector()).bits(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(von_neumann_entropy(&werner(0.25).unwrap()).bits(), 2.0, epsilon = 1e-12);
        let want = -0.5 * 0.5f64.log2() - 3.0 * (1.0 / 6.0) * (1.0f64 / 6.0).log2();
        assert_abs_diff_eq!(von_neumann_entropy(&werner(0.5).unwrap()).bits(), want, epsilon = 1e-12);
        assert_abs_diff_eq!(want, 1.79248, epsilon = 1e-5);
    }

    #[test]
    fn relative_entropy_examples() {
        let w = werner(0.7).unwrap();
        assert_abs_diff_eq!(relative_entropy(&w, &w).unwrap().bits(), 0.0, epsilon = 1e-12);

        let s = relative_entropy(&PureState::basis(0).projector(), &PureState::basis(1).projector()).unwrap();
        assert_eq!(s, Entropy::INFINITE);

        let phi = bell(BellKind::PhiPlus);
        let s = relative_entropy(&phi.projector(), &werner(0.25).unwrap()).unwrap();
        assert_abs_diff_eq!(s.bits(), 2.0, epsilon = 1e-12);

        let s = relative_entropy(&phi.projector(), &relative_state_pure(&phi)).unwrap();
        assert_abs_diff_eq!(s.bits(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn relative_entropy_rejects_mixed_dimensions() {
        let q = crate::states::validate_density(&ComplexMatrix::identity(2).scale(0.5), 1e-10).unwrap();
        assert!(relative_entropy(&q, &werner(0.5).unwrap()).is_err());
    }

    #[test]
    fn relative_state_examples() {
        let p00 = PureState::basis(0);
        assert!(relative_state_pure(&p00).matrix().max_abs_diff(p00.projector().matrix()) < 1e-15);

        let r = relative_state_pure(&bell(BellKind::PhiPlus));
        let want = ComplexMatrix::diag(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(r.matrix().max_abs_diff(&want) < 1e-15);
        let r = relative_state_pure(&bell(BellKind::PhiMinus));
        assert!(r.matrix().max_abs_diff(&want) < 1e-15);

        let want = ComplexMatrix::diag(&[0.0, 0.5, 0.5, 0.0]).unwrap();
        for k in [BellKind::PsiPlus, BellKind::PsiMinus] {
            assert!(relative_state_pure(&bell(k)).matrix().max_abs_diff(&want) < 1e-15);
        }

        let r = relative_state_pure(&skewed());
        let want = ComplexMatrix::diag(&[0.8, 0.0, 0.0, 0.2]).unwrap();
        assert!(r.matrix().max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn components_match_relative_state() {
        let states = [
            bell(BellKind::PhiPlus),
            bell(BellKind::PsiMinus),
            skewed(),
            PureState::basis(1),
            PureState::normalized([C64::new(0.3, 0.1), C64::new(-0.2, 0.4), C64::new(0.5, -0.2), C64::new(0.1, 0.6)]).unwrap(),
        ];
        for psi in states {
            let r = relative_state_pure(&psi);
            let c = product_mixture(&relative_state_components(&psi));
            assert!(r.matrix().max_abs_diff(&c) < 1e-14);
        }
    }

    #[test]
    fn ef_pure_examples() {
        assert_abs_diff_eq!(ef_pure(&bell(BellKind::PsiMinus)).bits(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ef_pure(&PureState::basis(2)).bits(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ef_pure(&skewed()).bits(), binary_entropy(0.8), epsilon = 1e-14);
        assert_abs_diff_eq!(ef_pure(&skewed()).bits(), 0.721928, epsilon = 1e-6);
    }

    #[test]
    fn wootters_examples() {
        let w = ef_wootters(&bell(BellKind::PhiPlus).projector());
        assert_abs_diff_eq!(w.concurrence, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.ef.bits(), 1.0, epsilon = 1e-12);

        let w = ef_wootters(&werner(0.5).unwrap());
        assert_abs_diff_eq!(w.concurrence, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.ef.bits(), 0.0, epsilon = 1e-12);

        let w = ef_wootters(&werner(1.0).unwrap());
        assert_abs_diff_eq!(w.concurrence, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.ef.bits(), 1.0, epsilon = 1e-12);

        for f in [0.6, 0.8, 0.95] {
            let w = ef_wootters(&werner(f).unwrap());
            assert_abs_diff_eq!(w.concurrence, 2.0 * f - 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn ppt_examples() {
        assert!(ppt_separable(&PureState::basis(0).projector()));
        assert!(!ppt_separable(&bell(BellKind::PsiPlus).projector()));
        assert!(ppt_separable(&werner(0.4).unwrap()));
        assert!(!ppt_separable(&werner(0.6).unwrap()));
    }
}
