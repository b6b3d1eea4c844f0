//! Dense complex-matrix kernel for one- and two-qubit operators.
//!
//! Everything here works in the computational basis `|00>, |01>, |10>, |11>`
//! with the first tensor factor being subsystem A.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance used to decide whether an input counts as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues closer than this are treated as one degenerate cluster.
const CLUSTER_GAP: f64 = 1e-9;

/// Components below this modulus are ignored when fixing eigenvector phases.
const SIGNIFICANT: f64 = 1e-9;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// A square complex matrix of dimension 2 (one qubit) or 4 (two qubits).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::new(dim, &c)
    }

    pub fn from_dmatrix(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::Dimension {
                expected: inner.nrows(),
                got: inner.ncols(),
            });
        }
        check_dim(inner.nrows())?;
        Ok(Self { inner })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "dimension must be 2 or 4");
        Self {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "dimension must be 2 or 4");
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Result<Self> {
        check_dim(values.len())?;
        let d = DVector::from_iterator(values.len(), values.iter().map(|&x| C64::new(x, 0.0)));
        Ok(Self {
            inner: DMatrix::from_diagonal(&d),
        })
    }

    /// The outer product `|v><v|`.
    pub fn projector(v: &[C64]) -> Result<Self> {
        check_dim(v.len())?;
        let col = DVector::from_column_slice(v);
        Ok(Self {
            inner: &col * col.adjoint(),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    /// Row-major copy of the entries.
    pub fn entries(&self) -> Vec<C64> {
        let n = self.dim();
        (0..n * n).map(|k| self.inner[(k / n, k % n)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.inner.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            inner: self.inner.map(|z| z * s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            inner: &self.inner + &other.inner,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            inner: &self.inner - &other.inner,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            inner: &self.inner * &other.inner,
        })
    }

    /// `<v|M|v>`
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let col = DVector::from_column_slice(v);
        (col.adjoint() * &self.inner * &col)[(0, 0)]
    }

    /// Largest entrywise modulus of `self - other`; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `M - M^dagger`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: 4,
            got: dim,
        })
    }
}

fn same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: a.dim(),
            got: b.dim(),
        })
    }
}

fn expect_dim(m: &ComplexMatrix, dim: usize) -> Result<()> {
    if m.dim() == dim {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: dim,
            got: m.dim(),
        })
    }
}

/// Pauli matrix `sigma_mu`, with `sigma_0` the identity.
pub fn pauli(mu: usize) -> ComplexMatrix {
    let entries = match mu {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -I, I, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli index {mu} out of range"),
    };
    ComplexMatrix {
        inner: DMatrix::from_row_slice(2, 2, &entries),
    }
}

/// Tensor product of two single-qubit operators.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    expect_dim(a, 2)?;
    expect_dim(b, 2)?;
    Ok(ComplexMatrix {
        inner: a.inner.kronecker(&b.inner),
    })
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order and `vectors[k]` belongs to
/// `values[k]`. Within a degenerate cluster the basis is canonical: the
/// standard basis vectors are projected onto the eigenspace in order and
/// orthonormalized. Every vector is phased so its first significant
/// component is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

impl EigenSystem {
    /// `sum_k values[k] |v_k><v_k|`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = DMatrix::zeros(n, n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            let col = DVector::from_column_slice(v);
            out += (&col * col.adjoint()) * C64::new(*lambda, 0.0);
        }
        ComplexMatrix { inner: out }
    }
}

pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<EigenSystem> {
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let (values, vectors) = eigh(&m.inner);
    Ok(EigenSystem {
        values,
        vectors: vectors.into_iter().map(|v| v.as_slice().to_vec()).collect(),
    })
}

/// Deterministic Hermitian eigensolver for any square size. The input is
/// symmetrized before solving.
pub(crate) fn eigh(m: &DMatrix<C64>) -> (Vec<f64>, Vec<DVector<C64>>) {
    let n = m.nrows();
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let raw: Vec<DVector<C64>> = order
        .iter()
        .map(|&k| eig.eigenvectors.column(k).into_owned())
        .collect();

    let mut vectors = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end - 1] - values[end] < CLUSTER_GAP {
            end += 1;
        }
        if end - start == 1 {
            vectors.push(raw[start].clone());
        } else {
            vectors.extend(canonical_basis(&raw[start..end], n));
        }
        start = end;
    }
    for v in &mut vectors {
        fix_phase(v);
    }
    (values, vectors)
}

/// Orthonormal basis of `span(cluster)` built from projected standard basis
/// vectors, taken in index order.
fn canonical_basis(cluster: &[DVector<C64>], n: usize) -> Vec<DVector<C64>> {
    let k = cluster.len();
    let project = |x: &DVector<C64>| -> DVector<C64> {
        let mut out = DVector::zeros(n);
        for v in cluster {
            out += v * v.dotc(x);
        }
        out
    };
    let residual = |mut w: DVector<C64>, chosen: &[DVector<C64>]| -> DVector<C64> {
        for _ in 0..2 {
            for c in chosen {
                let overlap = c.dotc(&w);
                w -= c * overlap;
            }
        }
        w
    };

    let mut chosen: Vec<DVector<C64>> = Vec::with_capacity(k);
    for i in 0..n {
        if chosen.len() == k {
            break;
        }
        let w = residual(project(&DVector::from_fn(n, |r, _| if r == i { ONE } else { ZERO })), &chosen);
        let norm = w.norm();
        if norm > 1e-3 {
            chosen.push(w / C64::new(norm, 0.0));
        }
    }
    // Threshold was too strict for this subspace: fill greedily.
    while chosen.len() < k {
        let best = (0..n)
            .map(|i| residual(project(&DVector::from_fn(n, |r, _| if r == i { ONE } else { ZERO })), &chosen))
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("non-empty basis");
        let norm = best.norm();
        chosen.push(best / C64::new(norm, 0.0));
    }
    chosen
}

pub(crate) fn fix_phase(v: &mut DVector<C64>) {
    if let Some(z) = v.iter().find(|z| z.norm() > SIGNIFICANT).copied() {
        let phase = z.conj() / z.norm();
        *v *= phase;
    }
}

/// Takagi factorization `tau = Q diag(sigma) Q^T` of a complex symmetric
/// matrix, with `Q` unitary and `sigma` non-negative and descending.
///
/// Solved through the real symmetric embedding `[[Re, Im], [Im, -Re]]`,
/// whose positive eigenpairs `(sigma, (x, y))` give the columns `x + iy`.
/// Singular values come out with absolute (not relative-to-square) accuracy.
pub(crate) fn takagi(tau: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = tau.nrows();
    let embed = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, c| {
        let z = tau[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) => z.re,
            (false, false) => -z.re,
            _ => z.im,
        }
    });
    let eig = SymmetricEigen::new((&embed + embed.transpose()) * 0.5);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let scale = tau.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut sigmas = Vec::with_capacity(n);
    let mut cols: Vec<DVector<C64>> = Vec::with_capacity(n);
    for &k in order.iter().take(n) {
        let s = eig.eigenvalues[k];
        if s <= 1e-13 * scale {
            break;
        }
        let v = eig.eigenvectors.column(k);
        let mut q = DVector::from_fn(n, |i, _| C64::new(v[i], v[n + i]));
        // Re-orthonormalize in the complex sense against earlier columns.
        for c in &cols {
            let o = c.dotc(&q);
            q -= c * o;
        }
        let norm = q.norm();
        q /= C64::new(norm, 0.0);
        sigmas.push(s);
        cols.push(q);
    }
    // Kernel: any orthonormal completion works.
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut w = DVector::from_fn(n, |r, _| if r == i { ONE } else { ZERO });
        for _ in 0..2 {
            for c in &cols {
                let o = c.dotc(&w);
                w -= c * o;
            }
        }
        let norm = w.norm();
        if norm > 1e-6 {
            cols.push(w / C64::new(norm, 0.0));
            sigmas.push(0.0);
        }
    }
    (sigmas, DMatrix::from_columns(&cols))
}

/// Which subsystem a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    expect_dim(rho, 4)?;
    let r = &rho.inner;
    let out = match keep {
        Subsystem::B => DMatrix::from_fn(2, 2, |j, l| r[(j, l)] + r[(2 + j, 2 + l)]),
        Subsystem::A => DMatrix::from_fn(2, 2, |i, k| r[(2 * i, 2 * k)] + r[(2 * i + 1, 2 * k + 1)]),
    };
    Ok(ComplexMatrix { inner: out })
}

/// Transpose on the second (B) tensor factor.
pub fn partial_transpose(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    expect_dim(rho, 4)?;
    let r = &rho.inner;
    let out = DMatrix::from_fn(4, 4, |row, col| {
        let (i, j) = (row / 2, row % 2);
        let (k, l) = (col / 2, col % 2);
        r[(2 * i + l, 2 * k + j)]
    });
    Ok(ComplexMatrix { inner: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn phi_plus() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::projector(&[C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)]).unwrap()
    }

    #[test]
    fn kron_identity_and_z() {
        let id = kron(&pauli(0), &pauli(0)).unwrap();
        assert_eq!(id, ComplexMatrix::identity(4));
        let zz = kron(&pauli(3), &pauli(3)).unwrap();
        assert_eq!(zz, ComplexMatrix::diag(&[1.0, -1.0, -1.0, 1.0]).unwrap());
    }

    #[test]
    fn kron_x_x_is_antidiagonal() {
        let xx = kron(&pauli(1), &pauli(1)).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let expected = if r + c == 3 { ONE } else { ZERO };
                assert_eq!(xx.get(r, c), expected);
            }
        }
    }

    #[test]
    fn kron_rejects_wrong_dimension() {
        let err = kron(&ComplexMatrix::identity(4), &pauli(0)).unwrap_err();
        assert!(matches!(err, Error::Dimension { expected: 2, got: 4 }));
    }

    #[test]
    fn eigensystem_of_maximally_mixed() {
        let es = hermitian_eigensystem(&ComplexMatrix::identity(4).scale(0.25)).unwrap();
        for v in &es.values {
            assert_abs_diff_eq!(*v, 0.25, epsilon = 1e-14);
        }
        // fully degenerate: canonical basis is the computational basis
        for (k, v) in es.vectors.iter().enumerate() {
            for (j, z) in v.iter().enumerate() {
                let expected = if j == k { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(z.re, expected, epsilon = 1e-12);
                assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn eigensystem_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eigensystem(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eigensystem_phases_are_canonical() {
        let es = hermitian_eigensystem(&phi_plus()).unwrap();
        assert_abs_diff_eq!(es.values[0], 1.0, epsilon = 1e-14);
        let first = es.vectors[0][0];
        assert!(first.re > 0.0);
        assert_abs_diff_eq!(first.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn takagi_reconstructs_symmetric_matrix() {
        let entries: Vec<C64> = (0..16)
            .map(|k| {
                let (r, c) = (k / 4, k % 4);
                let (lo, hi) = (r.min(c) as f64, r.max(c) as f64);
                C64::new((lo * 1.3 + hi * 0.7).sin(), (lo * 0.4 - hi * 1.1).cos())
            })
            .collect();
        let tau = DMatrix::from_row_slice(4, 4, &entries);
        let (s, q) = takagi(&tau);
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
        let back = &q * DMatrix::from_diagonal(&DVector::from_iterator(4, s.iter().map(|&x| C64::new(x, 0.0)))) * q.transpose();
        assert!((back - &tau).iter().all(|z| z.norm() < 1e-12));
        let unit = q.adjoint() * &q;
        assert!((unit - DMatrix::<C64>::identity(4, 4)).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn takagi_handles_rank_deficiency() {
        let v = DVector::from_column_slice(&[C64::new(0.3, 0.1), C64::new(-0.2, 0.5), ZERO, C64::new(0.4, 0.0)]);
        let tau = &v * v.transpose();
        let (s, q) = takagi(&tau);
        assert!((s[0] - v.norm_squared()).abs() < 1e-14);
        assert!(s[1..].iter().all(|x| *x == 0.0));
        let back = q.column(0) * q.column(0).transpose() * C64::new(s[0], 0.0);
        assert!((back - &tau).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn partial_trace_examples() {
        let rb = partial_trace(&phi_plus(), Subsystem::B).unwrap();
        assert!(rb.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);

        let p00 = ComplexMatrix::diag(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let ra = partial_trace(&p00, Subsystem::A).unwrap();
        assert_eq!(ra, ComplexMatrix::diag(&[1.0, 0.0]).unwrap());

        let (a, d) = (0.8f64.sqrt(), 0.2f64.sqrt());
        let psi = ComplexMatrix::projector(&[C64::new(a, 0.0), ZERO, ZERO, C64::new(d, 0.0)]).unwrap();
        let rb = partial_trace(&psi, Subsystem::B).unwrap();
        assert!(rb.max_abs_diff(&ComplexMatrix::diag(&[0.8, 0.2]).unwrap()) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_qubit_input() {
        assert!(partial_trace(&pauli(0), Subsystem::A).is_err());
    }

    #[test]
    fn partial_transpose_examples() {
        let mixed = ComplexMatrix::identity(4).scale(0.25);
        assert_eq!(partial_transpose(&mixed).unwrap(), mixed);

        let pt = partial_transpose(&phi_plus()).unwrap();
        let es = hermitian_eigensystem(&pt).unwrap();
        assert_abs_diff_eq!(*es.values.last().unwrap(), -0.5, epsilon = 1e-14);

        let ra = ComplexMatrix::from_real(2, &[0.7, 0.2, 0.2, 0.3]).unwrap();
        let rb = ComplexMatrix::new(2, &[ONE.scale(0.6), C64::new(0.1, 0.3), C64::new(0.1, -0.3), ONE.scale(0.4)]).unwrap();
        let pt = partial_transpose(&kron(&ra, &rb).unwrap()).unwrap();
        let rbt = ComplexMatrix::from_dmatrix(rb.as_dmatrix().transpose()).unwrap();
        assert!(pt.max_abs_diff(&kron(&ra, &rbt).unwrap()) < 1e-15);
    }
}
