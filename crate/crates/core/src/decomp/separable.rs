//! Direct search over separable states `sum_k q_k |a_k><a_k| (x) |b_k><b_k|`
//! for an upper bound on the relative entropy of entanglement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::search::{seed_ensembles, OptimizerConfig};
use super::simplex::multistart;
use super::ensemble_relative_state;
use crate::error::Result;
use crate::measures::{product_mixture, relative_entropy, relative_state_components, Entropy, ProductTerm};
use crate::qmat::C64;
use crate::states::DensityMatrix;

/// Number of product terms in the search.
pub const PRODUCT_TERMS: usize = 8;
const PARAMS_PER_TERM: usize = 5;
const INITIAL_STEP: f64 = 0.2;

fn qubit(theta: f64, phi: f64) -> [C64; 2] {
    [C64::new((0.5 * theta).cos(), 0.0), C64::from_polar((0.5 * theta).sin(), phi)]
}

fn angles(v: &[C64; 2]) -> (f64, f64) {
    let theta = 2.0 * v[0].norm().clamp(0.0, 1.0).acos();
    (theta, v[1].arg() - v[0].arg())
}

fn decode(x: &[f64]) -> Vec<ProductTerm> {
    let total: f64 = x.chunks(PARAMS_PER_TERM).map(|c| c[0] * c[0]).sum();
    x.chunks(PARAMS_PER_TERM)
        .map(|c| ProductTerm {
            weight: if total > 0.0 { c[0] * c[0] / total } else { 1.0 / PRODUCT_TERMS as f64 },
            a: qubit(c[1], c[2]),
            b: qubit(c[3], c[4]),
        })
        .collect()
}

/// Parameters for `terms` (at most [`PRODUCT_TERMS`]); unused slots get zero weight.
fn encode(terms: &[ProductTerm]) -> Vec<f64> {
    let mut x = vec![0.0; PRODUCT_TERMS * PARAMS_PER_TERM];
    for (t, c) in terms.iter().zip(x.chunks_mut(PARAMS_PER_TERM)) {
        let (ta, pa) = angles(&t.a);
        let (tb, pb) = angles(&t.b);
        c.copy_from_slice(&[t.weight.max(0.0).sqrt(), ta, pa, tb, pb]);
    }
    x
}

fn objective(rho: &DensityMatrix, x: &[f64]) -> Entropy {
    let sigma = DensityMatrix::trusted(product_mixture(&decode(x)));
    relative_entropy(rho, &sigma).expect("both 4x4")
}

/// Upper bound on `min_sigma S(rho || sigma)` over separable `sigma` with at
/// most eight product terms.
///
/// Starts include the product terms of the relative states of the seed
/// ensembles, so the bound never exceeds the seeds' ensemble values.
pub fn re_upper_bound(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<Entropy> {
    cfg.validate()?;
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for (_, d) in seed_ensembles(rho) {
        let terms: Vec<ProductTerm> = d
            .terms()
            .iter()
            .flat_map(|(p, psi)| {
                relative_state_components(psi).into_iter().map(move |t| ProductTerm {
                    weight: p * t.weight,
                    ..t
                })
            })
            .collect();
        if terms.len() <= PRODUCT_TERMS {
            debug_assert!(product_mixture(&terms).max_abs_diff(ensemble_relative_state(&d).matrix()) < 1e-9);
            starts.push(encode(&terms));
        }
    }
    let seeded = starts.len();
    let mut best = starts
        .iter()
        .map(|x| objective(rho, x).bits())
        .fold(f64::INFINITY, f64::min);

    for k in seeded..cfg.restarts.max(seeded) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(k as u64);
        starts.push(
            (0..PRODUCT_TERMS * PARAMS_PER_TERM)
                .map(|_| 2.0 * Distribution::<f64>::sample(&StandardNormal, &mut rng))
                .collect(),
        );
    }
    let f = |_: usize, x: &[f64]| objective(rho, x).bits();
    let found = multistart(&f, &starts, INITIAL_STEP, cfg.max_iterations, cfg.tolerance);
    best = best.min(objective(rho, &found.best.x).bits());
    Ok(Entropy::from_bits(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::ComplexMatrix;
    use crate::states::{bell, validate_density, werner, BellKind};

    fn quick() -> OptimizerConfig {
        OptimizerConfig {
            restarts: 4,
            max_iterations: 400,
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn encode_decode_round_trip() {
        let terms = vec![
            ProductTerm { weight: 0.3, a: qubit(0.4, 1.0), b: qubit(2.0, -0.5) },
            ProductTerm { weight: 0.7, a: qubit(1.2, 0.0), b: qubit(0.1, 3.0) },
        ];
        let back = product_mixture(&decode(&encode(&terms)));
        assert!(back.max_abs_diff(&product_mixture(&terms)) < 1e-14);
    }

    #[test]
    fn separable_inputs_are_near_zero() {
        let d = validate_density(&ComplexMatrix::diag(&[0.5, 0.0, 0.0, 0.5]).unwrap(), 1e-12).unwrap();
        assert!(re_upper_bound(&d, &quick()).unwrap().bits() <= 1e-4);
        assert!(re_upper_bound(&werner(0.4).unwrap(), &quick()).unwrap().bits() <= 1e-3);
    }

    #[test]
    fn bell_state_bound_is_one() {
        let b = re_upper_bound(&bell(BellKind::PhiPlus).projector(), &quick()).unwrap().bits();
        assert!((b - 1.0).abs() <= 1e-3, "{b}");
    }
}
