//! Minimization of an ensemble objective over the decompositions of a state.
//!
//! Ensembles of size `m` are parameterized by unitaries `U = U0 exp(iH)`:
//! the first `r = rank(rho)` columns of `U` form the isometry that generates
//! the ensemble, `U0` is a unitary completion of the isometry of a seed
//! ensemble, and the Hermitian generator `H` carries `m^2` real parameters.
//! Parameters at the origin reproduce the seed exactly.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::simplex::multistart;
use super::{
    ef_unchecked, eigendecomposition_ensemble, isometry_ensemble, isometry_of, mre_unchecked, support,
    wootters::optimal_ef_ensemble, Decomposition,
};
use crate::error::{Error, Result};
use crate::measures::Entropy;
use crate::qmat::{C64, ONE, ZERO};
use crate::states::{DensityMatrix, ExtWernerParams};

/// Largest ensemble the search considers.
pub const MAX_ENSEMBLE: usize = 8;
const INITIAL_STEP: f64 = 0.2;
const RESTART_SPREAD: f64 = 1.0;
const FAMILY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Ensemble size `m`; `None` means `min(2 rank, 8)`.
    pub ensemble_size: Option<usize>,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 2000,
            ensemble_size: None,
            tolerance: 1e-8,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if let Some(m) = self.ensemble_size {
            if m == 0 || m > MAX_ENSEMBLE {
                return Err(Error::Config(format!("ensemble size must be in 1..={MAX_ENSEMBLE}, got {m}")));
            }
        }
        Ok(())
    }
}

/// Where the ensemble a search started from came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedKind {
    /// Spectral decomposition.
    Eigen,
    /// Defining mixture of a recognized Werner-type state.
    Family,
    /// Ensemble attaining the Wootters bound.
    Wootters,
}

impl SeedKind {
    pub fn label(self) -> &'static str {
        match self {
            SeedKind::Eigen => "eigen",
            SeedKind::Family => "family",
            SeedKind::Wootters => "wootters",
        }
    }
}

/// Outcome of a search. `best_value` is an upper bound on the true minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub best_value: Entropy,
    pub best_decomposition: Decomposition,
    /// Objective on the spectral ensemble.
    pub seed_value: Entropy,
    pub evaluations: usize,
    pub converged: bool,
    /// Seed of the restart that produced the winner.
    pub origin: SeedKind,
}

/// One objective evaluation, passed to observers.
#[derive(Debug)]
pub struct Evaluation<'a> {
    pub decomposition: &'a Decomposition,
    pub value: Entropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Objective {
    Mre,
    Ef,
}

impl Objective {
    fn eval(self, rho: &DensityMatrix, d: &Decomposition) -> Entropy {
        match self {
            Objective::Mre => mre_unchecked(rho, d).0,
            Objective::Ef => ef_unchecked(d),
        }
    }
}

/// Minimizes `S(rho || sum_i p_i R(psi_i))` over ensembles of `rho`.
pub fn optimize_mre(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<OptResult> {
    run(rho, cfg, Objective::Mre, &|_| {})
}

/// Like [`optimize_mre`], calling `observer` on every evaluation.
pub fn optimize_mre_observed(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
    observer: &(dyn Fn(&Evaluation) + Sync),
) -> Result<OptResult> {
    run(rho, cfg, Objective::Mre, observer)
}

/// Minimizes the average pure-state entanglement over ensembles of `rho`.
pub fn optimize_ef(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<OptResult> {
    run(rho, cfg, Objective::Ef, &|_| {})
}

/// Seed ensembles: spectral, the family's defining mixture when `rho` is
/// recognized as an extended Werner state, and the Wootters ensemble.
pub fn seed_ensembles(rho: &DensityMatrix) -> Vec<(SeedKind, Decomposition)> {
    let mut seeds = vec![(SeedKind::Eigen, eigendecomposition_ensemble(rho))];
    if let Some(params) = ExtWernerParams::recognize(rho, FAMILY_TOL) {
        if let Ok(d) = Decomposition::new(params.terms(), rho) {
            seeds.push((SeedKind::Family, d));
        }
    }
    let w = optimal_ef_ensemble(rho);
    if w.check(rho).is_ok() {
        seeds.push((SeedKind::Wootters, w));
    }
    seeds
}

/// Completes the columns of `v` (orthonormal) to an `m x m` unitary.
fn complete_unitary(v: &DMatrix<C64>) -> DMatrix<C64> {
    let m = v.nrows();
    let mut cols: Vec<DVector<C64>> = v.column_iter().map(|c| c.into_owned()).collect();
    for i in 0..m {
        if cols.len() == m {
            break;
        }
        let mut w = DVector::from_fn(m, |r, _| if r == i { ONE } else { ZERO });
        for _ in 0..2 {
            for c in &cols {
                let o = c.dotc(&w);
                w -= c * o;
            }
        }
        let norm = w.norm();
        if norm > 1e-6 {
            cols.push(w / C64::new(norm, 0.0));
        }
    }
    DMatrix::from_columns(&cols)
}

/// `exp(iH)` for the Hermitian `H` whose diagonal and upper triangle are
/// read from `theta`.
fn unitary_from_params(theta: &[f64], m: usize) -> DMatrix<C64> {
    let mut h = DMatrix::<C64>::zeros(m, m);
    let mut k = 0;
    for i in 0..m {
        h[(i, i)] = C64::new(theta[k], 0.0);
        k += 1;
    }
    for i in 0..m {
        for j in i + 1..m {
            let z = C64::new(theta[k], theta[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    let eig = SymmetricEigen::new(h);
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, l)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

struct Start {
    base: DMatrix<C64>,
    size: usize,
    origin: SeedKind,
}

fn run(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
    objective: Objective,
    observer: &(dyn Fn(&Evaluation) + Sync),
) -> Result<OptResult> {
    cfg.validate()?;
    let (values, vectors) = support(rho);
    let r = values.len();
    let seeds = seed_ensembles(rho);

    let mut evaluations = 0;
    let mut scored: Vec<(Entropy, SeedKind, Decomposition)> = Vec::with_capacity(seeds.len());
    for (kind, d) in &seeds {
        let value = objective.eval(rho, d);
        observer(&Evaluation {
            decomposition: d,
            value,
        });
        evaluations += 1;
        scored.push((value, *kind, d.clone()));
    }
    let seed_value = scored[0].0;

    // A rank-one state has a single ensemble up to phases.
    if r <= 1 {
        let (value, origin, d) = scored.swap_remove(0);
        return Ok(OptResult {
            best_value: value,
            best_decomposition: d,
            seed_value,
            evaluations,
            converged: true,
            origin,
        });
    }

    let m = cfg
        .ensemble_size
        .unwrap_or((2 * r).min(MAX_ENSEMBLE))
        .clamp(r, MAX_ENSEMBLE);
    let starts_meta: Vec<Start> = seeds
        .iter()
        .map(|(kind, d)| {
            let size = m.max(d.len()).min(MAX_ENSEMBLE);
            let v = isometry_of(&values, &vectors, d, size);
            Start {
                base: complete_unitary(&v),
                size,
                origin: *kind,
            }
        })
        .collect();

    let mut starts = Vec::with_capacity(cfg.restarts);
    let mut start_of = Vec::with_capacity(cfg.restarts);
    for k in 0..cfg.restarts {
        let s = k % starts_meta.len();
        let dim = starts_meta[s].size * starts_meta[s].size;
        let x0 = if k < starts_meta.len() {
            vec![0.0; dim]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            (0..dim)
                .map(|_| RESTART_SPREAD * Distribution::<f64>::sample(&StandardNormal, &mut rng))
                .collect::<Vec<f64>>()
        };
        starts.push(x0);
        start_of.push(s);
    }

    let ensemble_at = |k: usize, theta: &[f64]| -> Decomposition {
        let meta = &starts_meta[start_of[k]];
        let u = &meta.base * unitary_from_params(theta, meta.size);
        let v = u.columns(0, r).into_owned();
        isometry_ensemble(&values, &vectors, &v)
    };
    let f = |k: usize, theta: &[f64]| -> f64 {
        let d = ensemble_at(k, theta);
        let value = objective.eval(rho, &d);
        observer(&Evaluation {
            decomposition: &d,
            value,
        });
        value.bits()
    };
    let found = multistart(&f, &starts, INITIAL_STEP, cfg.max_iterations, cfg.tolerance);
    evaluations += found.evaluations;

    let searched = ensemble_at(found.start_index, &found.best.x);
    let searched_value = objective.eval(rho, &searched);
    let origin = starts_meta[start_of[found.start_index]].origin;

    // Seeds are candidates too, so the result never regresses below them.
    let (best_value, origin, best_decomposition, converged) = scored
        .into_iter()
        .map(|(v, kind, d)| (v, kind, d, false))
        .chain(std::iter::once((searched_value, origin, searched, found.best.converged)))
        .min_by(|a, b| a.0.bits().total_cmp(&b.0.bits()))
        .expect("at least one candidate");

    Ok(OptResult {
        best_value,
        best_decomposition,
        seed_value,
        evaluations,
        converged: converged || found.best.converged,
        origin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{ef_pure, ef_wootters};
    use crate::qmat::ComplexMatrix;
    use crate::states::{bell, validate_density, werner, BellKind, PureState};
    use approx::assert_abs_diff_eq;

    fn quick() -> OptimizerConfig {
        OptimizerConfig {
            restarts: 4,
            max_iterations: 300,
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn unitary_from_params_is_unitary() {
        let theta: Vec<f64> = (0..16).map(|k| (k as f64 * 0.37).sin()).collect();
        let u = unitary_from_params(&theta, 4);
        let id = u.adjoint() * &u;
        assert!((id - DMatrix::<C64>::identity(4, 4)).iter().all(|z| z.norm() < 1e-13));
        let zero = unitary_from_params(&[0.0; 9], 3);
        assert!((zero - DMatrix::<C64>::identity(3, 3)).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        for bad in [
            OptimizerConfig { restarts: 0, ..OptimizerConfig::default() },
            OptimizerConfig { tolerance: 0.0, ..OptimizerConfig::default() },
            OptimizerConfig { ensemble_size: Some(9), ..OptimizerConfig::default() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::Config(_))));
        }
    }

    #[test]
    fn pure_state_gives_its_entanglement() {
        let psi = PureState::from_real([0.6, 0.0, 0.0, 0.8]).unwrap();
        let res = optimize_mre(&psi.projector(), &quick()).unwrap();
        assert_abs_diff_eq!(res.best_value.bits(), ef_pure(&psi).bits(), epsilon = 1e-12);
    }

    #[test]
    fn separable_mixture_reaches_zero() {
        let m = bell(BellKind::PhiPlus)
            .projector()
            .matrix()
            .scale(0.5)
            .add(&bell(BellKind::PsiPlus).projector().matrix().scale(0.5))
            .unwrap();
        let rho = validate_density(&m, 1e-12).unwrap();
        let res = optimize_mre(&rho, &quick()).unwrap();
        assert_abs_diff_eq!(res.seed_value.bits(), 1.0, epsilon = 1e-9);
        assert!(res.best_value.bits() <= 1e-6, "{}", res.best_value.bits());
        res.best_decomposition.check(&rho).unwrap();
    }

    #[test]
    fn werner_one_is_maximal() {
        let res = optimize_mre(&werner(1.0).unwrap(), &quick()).unwrap();
        assert_abs_diff_eq!(res.best_value.bits(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn ef_search_matches_wootters() {
        let d = validate_density(&ComplexMatrix::diag(&[0.5, 0.0, 0.0, 0.5]).unwrap(), 1e-12).unwrap();
        assert!(optimize_ef(&d, &quick()).unwrap().best_value.bits() < 1e-9);
        let res = optimize_ef(&bell(BellKind::PsiMinus).projector(), &quick()).unwrap();
        assert_abs_diff_eq!(res.best_value.bits(), 1.0, epsilon = 1e-12);
        let w = werner(0.8).unwrap();
        let res = optimize_ef(&w, &quick()).unwrap();
        assert!((res.best_value.bits() - ef_wootters(&w).ef.bits()).abs() < 2e-3);
    }

    #[test]
    fn search_is_deterministic_and_never_regresses() {
        let rho = werner(0.7).unwrap();
        let a = optimize_mre(&rho, &quick()).unwrap();
        let b = optimize_mre(&rho, &quick()).unwrap();
        assert_eq!(a, b);
        assert!(a.best_value.bits() <= a.seed_value.bits() + 1e-12);
        assert!(a.best_value.bits() <= ef_wootters(&rho).ef.bits() + 1e-6);
    }
}
