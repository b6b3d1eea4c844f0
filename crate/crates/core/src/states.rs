//! Validated states and the state families used throughout the crate.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::qmat::{hermitian_eigensystem, ComplexMatrix, EigenSystem, C64, ONE, ZERO};

/// Default validation tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;

/// Pure-state amplitudes must have unit norm to this precision.
pub const NORM_TOL: f64 = 1e-12;

/// A Hermitian, unit-trace, positive-semidefinite matrix of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix.get(row, col)
    }

    pub fn eigensystem(&self) -> EigenSystem {
        hermitian_eigensystem(&self.matrix).expect("validated state is Hermitian")
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: ComplexMatrix::projector(psi.amplitudes()).expect("four amplitudes"),
        }
    }

    /// Wraps a matrix the caller has constructed to be a valid state.
    /// Validity is only checked in debug builds.
    pub(crate) fn trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(validate_density(&matrix, 1e-8).is_ok(), "trusted matrix is not a state");
        Self { matrix }
    }
}

/// Checks `m` is a density matrix within `tol` and wraps it. Nothing is repaired.
pub fn validate_density(m: &ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    let dev = m.hermitian_deviation();
    if dev > tol {
        return Err(Error::NotHermitian(dev));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(Error::Trace(tr.re));
    }
    let es = hermitian_eigensystem(m)?;
    let min = *es.values.last().expect("non-empty spectrum");
    if min < -tol {
        return Err(Error::NegativeEigenvalue(min));
    }
    Ok(DensityMatrix { matrix: m.clone() })
}

/// Normalized two-qubit state `a|00> + b|01> + c|10> + d|11>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amps: [C64; 4],
}

impl PureState {
    pub fn new(amps: [C64; 4]) -> Result<Self> {
        let n2 = norm_sqr(&amps);
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { amps })
    }

    /// Rescales `amps` to unit norm. Fails on the zero vector.
    pub fn normalized(amps: [C64; 4]) -> Result<Self> {
        let n2 = norm_sqr(&amps);
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::NotNormalized(n2));
        }
        let s = 1.0 / n2.sqrt();
        Ok(Self {
            amps: amps.map(|z| z * s),
        })
    }

    pub fn from_real(amps: [f64; 4]) -> Result<Self> {
        Self::new(amps.map(|x| C64::new(x, 0.0)))
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.amps
    }

    /// Product state `|alpha> (x) |beta>` from single-qubit amplitudes.
    pub fn product(alpha: [C64; 2], beta: [C64; 2]) -> Result<Self> {
        Self::normalized([
            alpha[0] * beta[0],
            alpha[0] * beta[1],
            alpha[1] * beta[0],
            alpha[1] * beta[1],
        ])
    }

    /// Computational basis state `|index>` for index in 0..4.
    pub fn basis(index: usize) -> Self {
        let mut amps = [ZERO; 4];
        amps[index] = ONE;
        Self { amps }
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    /// `ad - bc`; zero exactly for product states.
    pub fn determinant(&self) -> C64 {
        let [a, b, c, d] = self.amps;
        a * d - b * c
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

fn norm_sqr(amps: &[C64; 4]) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    /// Ordering used by the extended Werner weights `b1..b4`.
    pub const ALL: [BellKind; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];
}

pub fn bell(kind: BellKind) -> PureState {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let amps = match kind {
        BellKind::PhiPlus => [s, ZERO, ZERO, s],
        BellKind::PhiMinus => [s, ZERO, ZERO, -s],
        BellKind::PsiPlus => [ZERO, s, s, ZERO],
        BellKind::PsiMinus => [ZERO, s, -s, ZERO],
    };
    PureState { amps }
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

/// `F |Psi-><Psi-| + (1-F)/3 (|Psi+><Psi+| + |Phi+><Phi+| + |Phi-><Phi-|)`
pub fn werner(fidelity: f64) -> Result<DensityMatrix> {
    check_unit_interval("F", fidelity)?;
    ext_werner(&ExtWernerParams::werner(fidelity)?)
}

/// `lambda |Phi+><Phi+| + (1 - lambda) |00><00|`
pub fn lambda_state(lambda: f64) -> Result<DensityMatrix> {
    check_unit_interval("lambda", lambda)?;
    let phi = ComplexMatrix::projector(bell(BellKind::PhiPlus).amplitudes())?;
    let zero = ComplexMatrix::projector(PureState::basis(0).amplitudes())?;
    Ok(DensityMatrix::trusted(phi.scale(lambda).add(&zero.scale(1.0 - lambda))?))
}

/// Weights of the extended Werner family: `b` on the Bell states
/// `Phi+, Phi-, Psi+, Psi-` and `c` on `|00>, |01>, |10>, |11>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtWernerParams {
    pub b: [f64; 4],
    pub c: [f64; 4],
}

const WEIGHT_SUM_TOL: f64 = 1e-12;

impl ExtWernerParams {
    pub fn new(b: [f64; 4], c: [f64; 4]) -> Result<Self> {
        let p = Self { b, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(w) = self.b.iter().chain(&self.c).find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidWeights(format!("weight {w} is negative or not finite")));
        }
        let total: f64 = self.b.iter().chain(&self.c).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, expected 1")));
        }
        Ok(())
    }

    /// Werner state as a member of the family.
    pub fn werner(fidelity: f64) -> Result<Self> {
        check_unit_interval("F", fidelity)?;
        let rest = (1.0 - fidelity) / 3.0;
        Ok(Self {
            b: [rest, rest, rest, fidelity],
            c: [0.0; 4],
        })
    }

    /// Recovers family parameters from a matrix, if it has the family's shape.
    ///
    /// The representation is not unique; the one returned puts as much weight
    /// as possible on the Bell states. Werner states map back to
    /// [`ExtWernerParams::werner`].
    pub fn recognize(rho: &DensityMatrix, tol: f64) -> Option<Self> {
        if rho.dim() != 4 {
            return None;
        }
        let m = rho.matrix();
        for r in 0..4 {
            for c in 0..4 {
                let allowed = r == c || r + c == 3;
                let z = m.get(r, c);
                if z.im.abs() > tol || (!allowed && z.re.abs() > tol) {
                    return None;
                }
            }
        }
        let split = |hi: usize, lo: usize| -> Option<(f64, f64, f64, f64)> {
            let (p, q, x) = (m.get(hi, hi).re, m.get(lo, lo).re, m.get(hi, lo).re);
            let s = p.min(q);
            if x.abs() > s + tol {
                return None;
            }
            let plus = (s + x).max(0.0);
            let minus = (s - x).max(0.0);
            Some((plus, minus, (p - s).max(0.0), (q - s).max(0.0)))
        };
        let (b1, b2, c1, c4) = split(0, 3)?;
        let (b3, b4, c2, c3) = split(1, 2)?;
        let mut p = Self {
            b: [b1, b2, b3, b4],
            c: [c1, c2, c3, c4],
        };
        let total: f64 = p.b.iter().chain(&p.c).sum();
        if (total - 1.0).abs() > tol {
            return None;
        }
        for w in p.b.iter_mut().chain(p.c.iter_mut()) {
            *w /= total;
        }
        Some(p)
    }

    /// Non-zero terms of the defining mixture, as (weight, pure state).
    pub fn terms(&self) -> Vec<(f64, PureState)> {
        let bell_terms = self.b.iter().zip(BellKind::ALL).map(|(&w, k)| (w, bell(k)));
        let basis_terms = self.c.iter().enumerate().map(|(i, &w)| (w, PureState::basis(i)));
        bell_terms.chain(basis_terms).filter(|(w, _)| *w > 0.0).collect()
    }
}

/// `sum_i b_i |B_i><B_i| + sum_i c_i |i><i|`
pub fn ext_werner(params: &ExtWernerParams) -> Result<DensityMatrix> {
    params.validate()?;
    let mut m = ComplexMatrix::zeros(4);
    for (w, psi) in params.terms() {
        m = m.add(&ComplexMatrix::projector(psi.amplitudes())?.scale(w))?;
    }
    Ok(DensityMatrix::trusted(m))
}
