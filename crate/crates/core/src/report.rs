//! Report types behind the `mre` command-line tool.
//!
//! Numbers are rounded to 12 significant digits and infinite entropies are
//! written as the string `"inf"`, so reports diff cleanly between runs.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::closedform::{
    ext_werner_eigenvalues, ext_werner_mre, ext_werner_separable, ext_werner_separable_reduced, werner_mre,
    werner_mre_raw,
};
use crate::decomp::search::{seed_ensembles, SeedKind};
use crate::decomp::{
    mre_of_decomposition, optimize_mre, re_upper_bound, Decomposition, OptResult, OptimizerConfig,
};
use crate::error::{Error, Result};
use crate::measures::{ef_wootters, ppt_separable, von_neumann_entropy, Entropy};
use crate::states::{ext_werner, werner, DensityMatrix, ExtWernerParams};

/// Header of the Werner sweep CSV.
pub const WERNER_CSV_HEADER: &str = "F,mre_closed,mre_pipeline,ef_wootters,ppt";

/// Magnitudes below this are reported as 0.
const ZERO_SNAP: f64 = 1e-14;

/// A reported number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Num {
    fn rounded(self) -> f64 {
        if !self.0.is_finite() {
            return self.0;
        }
        if self.0.abs() < ZERO_SNAP {
            return 0.0;
        }
        format!("{:.11e}", self.0).parse().expect("formatted float parses")
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num(x)
    }
}

impl From<Entropy> for Num {
    fn from(e: Entropy) -> Self {
        Num(e.bits())
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rounded();
        if r.is_infinite() {
            f.write_str(if r > 0.0 { "inf" } else { "-inf" })
        } else {
            write!(f, "{r}")
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = self.rounded();
        if r.is_finite() {
            s.serialize_f64(r)
        } else {
            s.collect_str(self)
        }
    }
}

/// Weights and amplitudes (`[re, im]` pairs) of an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub origin: &'static str,
    pub size: usize,
    pub weights: Vec<Num>,
    pub states: Vec<[[Num; 2]; 4]>,
}

impl EnsembleSummary {
    pub fn new(origin: SeedKind, d: &Decomposition) -> Self {
        Self {
            origin: origin.label(),
            size: d.len(),
            weights: d.terms().iter().map(|(p, _)| Num(*p)).collect(),
            states: d
                .terms()
                .iter()
                .map(|(_, psi)| psi.amplitudes().map(|z| [Num(z.re), Num(z.im)]))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub entropy: Num,
    pub concurrence: Num,
    pub ef_wootters: Num,
    pub mre_seed: Num,
    pub mre_optimized: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re_upper: Option<Num>,
    pub ppt_separable: bool,
    pub ensemble: EnsembleSummary,
}

impl MeasureReport {
    pub const CSV_HEADER: &'static str =
        "entropy,concurrence,ef_wootters,mre_seed,mre_optimized,re_upper,ppt_separable,ensemble_size";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.entropy,
            self.concurrence,
            self.ef_wootters,
            self.mre_seed,
            self.mre_optimized,
            self.re_upper.map(|x| x.to_string()).unwrap_or_default(),
            self.ppt_separable,
            self.ensemble.size
        )
    }
}

/// Options shared by the commands that measure a state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureOptions {
    pub optimizer: OptimizerConfig,
    /// Run the ensemble search; otherwise only the seed ensembles are scored.
    pub optimize: bool,
    pub re_upper: bool,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            optimizer: OptimizerConfig::default(),
            optimize: true,
            re_upper: false,
        }
    }
}

fn best_seed(rho: &DensityMatrix) -> Result<(Entropy, Entropy, SeedKind, Decomposition)> {
    let mut eigen_value = None;
    let mut best: Option<(Entropy, SeedKind, Decomposition)> = None;
    for (kind, d) in seed_ensembles(rho) {
        let (value, _) = mre_of_decomposition(rho, &d)?;
        eigen_value.get_or_insert(value);
        if best.as_ref().map_or(true, |(b, _, _)| value.bits() < b.bits()) {
            best = Some((value, kind, d));
        }
    }
    let (value, kind, d) = best.expect("the spectral seed always exists");
    Ok((eigen_value.expect("spectral seed"), value, kind, d))
}

pub fn measure(rho: &DensityMatrix, opts: &MeasureOptions) -> Result<MeasureReport> {
    opts.optimizer.validate()?;
    let w = ef_wootters(rho);
    let (seed, optimized, origin, ensemble) = if opts.optimize {
        let r = optimize_mre(rho, &opts.optimizer)?;
        (r.seed_value, r.best_value, r.origin, r.best_decomposition)
    } else {
        best_seed(rho)?
    };
    let re_upper = if opts.re_upper {
        Some(re_upper_bound(rho, &opts.optimizer)?.into())
    } else {
        None
    };
    Ok(MeasureReport {
        entropy: von_neumann_entropy(rho).into(),
        concurrence: w.concurrence.into(),
        ef_wootters: w.ef.into(),
        mre_seed: seed.into(),
        mre_optimized: optimized.into(),
        re_upper,
        ppt_separable: ppt_separable(rho),
        ensemble: EnsembleSummary::new(origin, &ensemble),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WernerRow {
    #[serde(rename = "F")]
    pub fidelity: Num,
    pub mre_closed: Num,
    pub mre_pipeline: Num,
    pub ef_wootters: Num,
    pub ppt: bool,
}

impl WernerRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.fidelity, self.mre_closed, self.mre_pipeline, self.ef_wootters, self.ppt
        )
    }
}

/// One row per grid point `from + k step` up to `to`. The pipeline column
/// scores the defining Bell mixture; with `raw`, the closed-form column is
/// not clamped below `F = 1/4`.
pub fn sweep_werner(from: f64, to: f64, step: f64, raw: bool) -> Result<Vec<WernerRow>> {
    if !(0.0..=1.0).contains(&from) || !(0.0..=1.0).contains(&to) || from > to {
        return Err(Error::Config(format!("need 0 <= from <= to <= 1, got from {from}, to {to}")));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Config(format!("step must be positive, got {step}")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|k| {
            let f = (from + k as f64 * step).min(to);
            let rho = werner(f)?;
            let d = Decomposition::new(ExtWernerParams::werner(f)?.terms(), &rho)?;
            let (pipeline, _) = mre_of_decomposition(&rho, &d)?;
            let closed = if raw { werner_mre_raw(f)? } else { werner_mre(f)?.bits() };
            Ok(WernerRow {
                fidelity: Num(f),
                mre_closed: Num(closed),
                mre_pipeline: pipeline.into(),
                ef_wootters: ef_wootters(&rho).ef.into(),
                ppt: ppt_separable(&rho),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtWernerClosedForm {
    pub eigenvalues: [Num; 4],
    pub mre: Num,
    pub separable: bool,
    /// The condition without its cross terms, kept for comparison.
    pub separable_reduced: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtWernerReport {
    pub b: [Num; 4],
    pub c: [Num; 4],
    pub closed_form: ExtWernerClosedForm,
    /// MRE of the defining mixture, computed through the general pipeline.
    pub mre_pipeline: Num,
    pub measure: MeasureReport,
}

pub fn ext_werner_report(p: &ExtWernerParams, opts: &MeasureOptions) -> Result<ExtWernerReport> {
    let rho = ext_werner(p)?;
    let d = Decomposition::new(p.terms(), &rho)?;
    let (pipeline, _) = mre_of_decomposition(&rho, &d)?;
    Ok(ExtWernerReport {
        b: p.b.map(Num),
        c: p.c.map(Num),
        closed_form: ExtWernerClosedForm {
            eigenvalues: ext_werner_eigenvalues(p)?.map(Num),
            mre: ext_werner_mre(p)?.into(),
            separable: ext_werner_separable(p)?,
            separable_reduced: ext_werner_separable_reduced(p)?,
        },
        mre_pipeline: pipeline.into(),
        measure: measure(&rho, opts)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeReport {
    pub seed_value: Num,
    pub best_value: Num,
    pub evaluations: usize,
    pub converged: bool,
    pub ensemble: EnsembleSummary,
}

impl From<&OptResult> for OptimizeReport {
    fn from(r: &OptResult) -> Self {
        Self {
            seed_value: r.seed_value.into(),
            best_value: r.best_value.into(),
            evaluations: r.evaluations,
            converged: r.converged,
            ensemble: EnsembleSummary::new(r.origin, &r.best_decomposition),
        }
    }
}

impl OptimizeReport {
    pub const CSV_HEADER: &'static str = "seed_value,best_value,evaluations,converged,ensemble_size";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.seed_value, self.best_value, self.evaluations, self.converged, self.ensemble.size
        )
    }
}
