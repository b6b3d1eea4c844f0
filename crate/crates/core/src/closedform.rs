//! Closed forms for the Werner and extended Werner families.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::Entropy;
use crate::qmat::ComplexMatrix;
use crate::states::{DensityMatrix, ExtWernerParams};

const SEPARABLE_TOL: f64 = 1e-12;

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

fn check_fidelity(f: f64) -> Result<()> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "F",
            value: f,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

/// `diag((1-F)/3, (1+2F)/6, (1+2F)/6, (1-F)/3)`
pub fn werner_relative_state(f: f64) -> Result<DensityMatrix> {
    check_fidelity(f)?;
    let (outer, inner) = ((1.0 - f) / 3.0, (1.0 + 2.0 * f) / 6.0);
    Ok(DensityMatrix::trusted(ComplexMatrix::diag(&[outer, inner, inner, outer])?))
}

/// `F log F + (1-F)/3 log((1-F)/3) - (1+2F)/3 log((1+2F)/6)` without clamping,
/// evaluated for any `F` in `[0, 1]`.
pub fn werner_mre_raw(f: f64) -> Result<f64> {
    check_fidelity(f)?;
    let rest = (1.0 - f) / 3.0;
    Ok(xlog2x(f) + rest * if rest > 0.0 { rest.log2() } else { 0.0 }
        - (1.0 + 2.0 * f) / 3.0 * ((1.0 + 2.0 * f) / 6.0).log2())
}

/// MRE of the Werner state; zero for `F <= 1/4`.
pub fn werner_mre(f: f64) -> Result<Entropy> {
    let raw = werner_mre_raw(f)?;
    if f <= 0.25 {
        return Ok(Entropy::ZERO);
    }
    Ok(Entropy::from_bits(raw.max(0.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WernerReport {
    #[serde(rename = "F")]
    pub fidelity: f64,
    pub mre: Entropy,
    #[serde(skip)]
    pub relative_state: DensityMatrix,
    pub separable: bool,
}

pub fn werner_report(f: f64) -> Result<WernerReport> {
    Ok(WernerReport {
        fidelity: f,
        mre: werner_mre(f)?,
        relative_state: werner_relative_state(f)?,
        separable: ext_werner_separable(&ExtWernerParams::werner(f)?)?,
    })
}

/// Spectrum of the extended Werner state, as `(v1, v2, v3, v4)` with
/// `v1 <= v2` from the `{|00>, |11>}` block and `v3 <= v4` from `{|01>, |10>}`.
pub fn ext_werner_eigenvalues(p: &ExtWernerParams) -> Result<[f64; 4]> {
    p.validate()?;
    let [b1, b2, b3, b4] = p.b;
    let [c1, c2, c3, c4] = p.c;
    let r1 = (b1 - b2).hypot(c1 - c4);
    let r2 = (b3 - b4).hypot(c2 - c3);
    let (s1, s2) = (b1 + b2 + c1 + c4, b3 + b4 + c2 + c3);
    Ok([0.5 * (s1 - r1), 0.5 * (s1 + r1), 0.5 * (s2 - r2), 0.5 * (s2 + r2)])
}

/// Diagonal of the relative state of the defining mixture.
pub fn ext_werner_relative_diagonal(p: &ExtWernerParams) -> Result<[f64; 4]> {
    p.validate()?;
    let [b1, b2, b3, b4] = p.b;
    let [c1, c2, c3, c4] = p.c;
    Ok([
        0.5 * (b1 + b2 + 2.0 * c1),
        0.5 * (b3 + b4 + 2.0 * c2),
        0.5 * (b3 + b4 + 2.0 * c3),
        0.5 * (b1 + b2 + 2.0 * c4),
    ])
}

/// `sum_a v_a log v_a - sum_k d_k log d_k`, clamped at 0.
pub fn ext_werner_mre(p: &ExtWernerParams) -> Result<Entropy> {
    let v = ext_werner_eigenvalues(p)?;
    let d = ext_werner_relative_diagonal(p)?;
    let value: f64 = v.iter().map(|&x| xlog2x(x)).sum::<f64>() - d.iter().map(|&x| xlog2x(x)).sum::<f64>();
    Ok(Entropy::from_bits(value.max(0.0)))
}

/// Peres condition for the family: both 2x2 blocks of the partial transpose
/// are positive semidefinite.
///
/// `(b1+b2)^2 + 2(b1+b2)(c1+c4) + 4 c1 c4 >= (b3-b4)^2` and
/// `(b3+b4)^2 + 2(b3+b4)(c2+c3) + 4 c2 c3 >= (b1-b2)^2`.
pub fn ext_werner_separable(p: &ExtWernerParams) -> Result<bool> {
    p.validate()?;
    let [b1, b2, b3, b4] = p.b;
    let [c1, c2, c3, c4] = p.c;
    let (s1, s2) = (b1 + b2, b3 + b4);
    let first = s1 * s1 + 2.0 * s1 * (c1 + c4) + 4.0 * c1 * c4 - (b3 - b4).powi(2);
    let second = s2 * s2 + 2.0 * s2 * (c2 + c3) + 4.0 * c2 * c3 - (b1 - b2).powi(2);
    Ok(first >= -SEPARABLE_TOL && second >= -SEPARABLE_TOL)
}

/// The reduced form `(b1+b2)^2 >= (b3-b4)^2 - 4 c1 c4` and
/// `(b3+b4)^2 >= (b1-b2)^2 - 4 c2 c3`, which drops the cross terms of
/// [`ext_werner_separable`]. Both agree when `c = 0`.
pub fn ext_werner_separable_reduced(p: &ExtWernerParams) -> Result<bool> {
    p.validate()?;
    let [b1, b2, b3, b4] = p.b;
    let [c1, c2, c3, c4] = p.c;
    let first = (b1 + b2).powi(2) - (b3 - b4).powi(2) + 4.0 * c1 * c4;
    let second = (b3 + b4).powi(2) - (b1 - b2).powi(2) + 4.0 * c2 * c3;
    Ok(first >= -SEPARABLE_TOL && second >= -SEPARABLE_TOL)
}
