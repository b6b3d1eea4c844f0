//! Pure-state ensembles of a mixed state and the objectives defined on them.
//!
//! Every ensemble `{p_i, psi_i}` of a rank-`r` state arises from an `m x r`
//! isometry `V` acting on the weighted eigenvectors:
//! `sqrt(p_i) psi_i = sum_j V_ij sqrt(l_j) e_j`. The search in [`search`]
//! walks over such isometries.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::measures::{ef_pure, relative_entropy, relative_state_pure, Entropy};
use crate::qmat::{ComplexMatrix, C64};
use crate::states::{DensityMatrix, PureState};

pub mod search;
pub mod separable;
pub mod simplex;
pub mod wootters;

pub use search::{optimize_ef, optimize_mre, optimize_mre_observed, Evaluation, OptResult, OptimizerConfig};
pub use separable::re_upper_bound;
pub use wootters::optimal_ef_ensemble;

/// Eigenvalues at or below this count as outside the support.
pub const RANK_TOL: f64 = 1e-12;
/// Terms lighter than this are dropped from generated ensembles.
pub const WEIGHT_TOL: f64 = 1e-12;
/// An ensemble must reproduce its state to this entrywise precision.
pub const RESYNTHESIS_TOL: f64 = 1e-9;
const ISOMETRY_TOL: f64 = 1e-10;
const WEIGHT_SUM_TOL: f64 = 1e-10;

/// Weighted pure states `{p_i, psi_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    terms: Vec<(f64, PureState)>,
}

impl Decomposition {
    /// Checks the weights and that `sum_i p_i |psi_i><psi_i|` reproduces `target`.
    pub fn new(terms: Vec<(f64, PureState)>, target: &DensityMatrix) -> Result<Self> {
        let d = Self { terms };
        d.check(target)?;
        Ok(d)
    }

    pub(crate) fn unchecked(terms: Vec<(f64, PureState)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(f64, PureState)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn resynthesize(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4);
        for (p, psi) in &self.terms {
            let proj = ComplexMatrix::projector(psi.amplitudes()).expect("four amplitudes");
            m = m.add(&proj.scale(*p)).expect("4x4");
        }
        m
    }

    pub fn check(&self, target: &DensityMatrix) -> Result<()> {
        if let Some((p, _)) = self.terms.iter().find(|(p, _)| !(*p > 0.0)) {
            return Err(Error::InvalidWeights(format!("ensemble weight {p} is not positive")));
        }
        let total: f64 = self.terms.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!("ensemble weights sum to {total}")));
        }
        let dev = self.resynthesize().max_abs_diff(target.matrix());
        if dev > RESYNTHESIS_TOL {
            return Err(Error::Resynthesis(dev));
        }
        Ok(())
    }
}

/// Eigenpairs with eigenvalue above [`RANK_TOL`], descending.
pub(crate) fn support(rho: &DensityMatrix) -> (Vec<f64>, Vec<DVector<C64>>) {
    let es = rho.eigensystem();
    es.values
        .iter()
        .zip(&es.vectors)
        .filter(|(l, _)| **l > RANK_TOL)
        .map(|(l, v)| (*l, DVector::from_column_slice(v)))
        .unzip()
}

pub fn rank(rho: &DensityMatrix) -> usize {
    support(rho).0.len()
}

/// The spectral ensemble: eigenvectors weighted by their eigenvalues.
pub fn eigendecomposition_ensemble(rho: &DensityMatrix) -> Decomposition {
    let (values, vectors) = support(rho);
    let terms = values
        .iter()
        .zip(&vectors)
        .map(|(l, v)| {
            let amps = [v[0], v[1], v[2], v[3]];
            (*l, PureState::normalized(amps).expect("eigenvectors are non-zero"))
        })
        .collect();
    Decomposition::unchecked(terms)
}

/// Ensemble generated by an `m x r` isometry over the `r` weighted eigenvectors.
pub fn ensemble_from_isometry(rho: &DensityMatrix, v: &DMatrix<C64>) -> Result<Decomposition> {
    let (values, vectors) = support(rho);
    if v.ncols() != values.len() {
        return Err(Error::RankMismatch {
            expected: values.len(),
            got: v.ncols(),
        });
    }
    let gram = v.adjoint() * v;
    let dev = (gram - DMatrix::<C64>::identity(v.ncols(), v.ncols()))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if dev > ISOMETRY_TOL {
        return Err(Error::NotIsometry(dev));
    }
    Ok(isometry_ensemble(&values, &vectors, v))
}

/// [`ensemble_from_isometry`] without the checks.
pub(crate) fn isometry_ensemble(values: &[f64], vectors: &[DVector<C64>], v: &DMatrix<C64>) -> Decomposition {
    let weighted: Vec<DVector<C64>> = values
        .iter()
        .zip(vectors)
        .map(|(l, e)| e * C64::new(l.sqrt(), 0.0))
        .collect();
    let mut terms = Vec::with_capacity(v.nrows());
    for i in 0..v.nrows() {
        let mut amps = [C64::new(0.0, 0.0); 4];
        for (j, w) in weighted.iter().enumerate() {
            let coeff = v[(i, j)];
            for (a, x) in amps.iter_mut().zip(w.iter()) {
                *a += coeff * x;
            }
        }
        let p: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if p > WEIGHT_TOL {
            terms.push((p, PureState::normalized(amps).expect("non-zero")));
        }
    }
    Decomposition::unchecked(terms)
}

/// The `m x r` isometry that generates `d` (inverse of [`ensemble_from_isometry`]).
pub(crate) fn isometry_of(values: &[f64], vectors: &[DVector<C64>], d: &Decomposition, m: usize) -> DMatrix<C64> {
    assert!(m >= d.len(), "isometry needs at least as many rows as terms");
    let mut v = DMatrix::zeros(m, values.len());
    for (i, (p, psi)) in d.terms().iter().enumerate() {
        let amps = DVector::from_column_slice(psi.amplitudes());
        for (j, (l, e)) in values.iter().zip(vectors).enumerate() {
            v[(i, j)] = e.dotc(&amps) * C64::new((p / l).sqrt(), 0.0);
        }
    }
    v
}

/// `R_M = sum_i p_i R(psi_i)` for the pure-state relative states `R`.
pub fn ensemble_relative_state(d: &Decomposition) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4);
    for (p, psi) in d.terms() {
        m = m.add(&relative_state_pure(psi).matrix().scale(*p)).expect("4x4");
    }
    DensityMatrix::trusted(m)
}

/// `S(rho || sum_i p_i R(psi_i))` and the relative state it was measured against.
pub fn mre_of_decomposition(rho: &DensityMatrix, d: &Decomposition) -> Result<(Entropy, DensityMatrix)> {
    d.check(rho)?;
    Ok(mre_unchecked(rho, d))
}

pub(crate) fn mre_unchecked(rho: &DensityMatrix, d: &Decomposition) -> (Entropy, DensityMatrix) {
    let r = ensemble_relative_state(d);
    let value = relative_entropy(rho, &r).expect("both 4x4");
    (value, r)
}

/// Average pure-state entanglement `sum_i p_i E(psi_i)`.
pub fn ef_of_decomposition(rho: &DensityMatrix, d: &Decomposition) -> Result<Entropy> {
    d.check(rho)?;
    Ok(ef_unchecked(d))
}

pub(crate) fn ef_unchecked(d: &Decomposition) -> Entropy {
    Entropy::from_bits(d.terms().iter().map(|(p, psi)| p * ef_pure(psi).bits()).sum())
}
