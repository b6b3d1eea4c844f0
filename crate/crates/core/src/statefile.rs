//! JSON state files.
//!
//! Two shapes are accepted, with complex numbers written as `[re, im]`:
//!
//! ```json
//! {"pure": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]}
//! {"matrix": [[[0.5, 0], [0, 0], [0, 0], [0.5, 0]], ...]}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qmat::{ComplexMatrix, C64};
use crate::states::{validate_density, DensityMatrix, PureState, DENSITY_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StateFile {
    Pure([[f64; 2]; 4]),
    Matrix([[[f64; 2]; 4]; 4]),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed state file: {0}")]
    Parse(String),
    #[error("invalid state: {0}")]
    Invalid(#[from] crate::Error),
}

impl LoadError {
    /// 2 for unreadable or malformed input, 3 for a well-formed but invalid state.
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Io { .. } | LoadError::Parse(_) => 2,
            LoadError::Invalid(_) => 3,
        }
    }
}

/// A validated state read from a file. Pure inputs keep their amplitudes.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl LoadedState {
    pub fn density(&self) -> DensityMatrix {
        match self {
            LoadedState::Pure(psi) => psi.projector(),
            LoadedState::Mixed(rho) => rho.clone(),
        }
    }
}

fn c(pair: [f64; 2]) -> C64 {
    C64::new(pair[0], pair[1])
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        serde_json::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<LoadedState, LoadError> {
        match self {
            StateFile::Pure(amps) => Ok(LoadedState::Pure(PureState::new(amps.map(c))?)),
            StateFile::Matrix(rows) => {
                let entries: Vec<C64> = rows.iter().flatten().map(|&p| c(p)).collect();
                let m = ComplexMatrix::new(4, &entries)?;
                Ok(LoadedState::Mixed(validate_density(&m, DENSITY_TOL)?))
            }
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        StateFile::Pure(psi.amplitudes().map(|z| [z.re, z.im]))
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        let mut rows = [[[0.0; 2]; 4]; 4];
        for (r, row) in rows.iter_mut().enumerate() {
            for (col, cell) in row.iter_mut().enumerate() {
                let z = rho.get(r, col);
                *cell = [z.re, z.im];
            }
        }
        StateFile::Matrix(rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state files always serialize")
    }
}

/// Reads, parses and validates a state file.
pub fn load(path: &Path) -> Result<LoadedState, LoadError> {
    StateFile::read(path)?.validate()
}
