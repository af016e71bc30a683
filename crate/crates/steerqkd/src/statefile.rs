// Copyright 2026 The steerqkd Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! JSON state files.
//!
//! ```json
//! { "family": "werner", "params": { "omega": 0.8 } }
//! { "family": "gamma", "params": { "q": 0.9, "alpha": 0.25 } }
//! { "family": "bell_diagonal", "params": { "w1": 0.4, "w2": 0.3, "w3": 0.2, "w4": 0.1 } }
//! { "matrix": [[[0.25, 0.0], [0.0, 0.0], ...], ...] }
//! ```
//!
//! `matrix` holds four rows of four `[re, im]` pairs. Bell-diagonal weights
//! refer to `|ψ⁻⟩, |φ⁺⟩, |φ⁻⟩, |ψ⁺⟩` in that order.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use steerqkd_core::families::{make_bell_diagonal, make_gamma, make_werner};
use steerqkd_core::linalg::ComplexMatrix;
use steerqkd_core::num_complex::Complex64;
use steerqkd_core::{BellDiagonalParams, DensityMatrix, GammaParams, WernerParams};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum FamilyName {
    Werner,
    Gamma,
    BellDiagonal,
}

impl FamilyName {
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FamilyName::Werner => &["omega"],
            FamilyName::Gamma => &["q", "alpha"],
            FamilyName::BellDiagonal => &["w1", "w2", "w3", "w4"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, f64>>,
}

impl StateSpec {
    pub fn family(name: FamilyName, params: &[(&str, f64)]) -> Self {
        StateSpec {
            matrix: None,
            family: Some(name),
            params: Some(params.iter().map(|(k, v)| (k.to_string(), *v)).collect()),
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("state file: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }

    pub fn to_state(&self) -> CliResult<DensityMatrix> {
        match (&self.matrix, self.family, &self.params) {
            (Some(rows), None, None) => matrix_state(rows),
            (None, Some(name), Some(params)) => family_state(name, params),
            (None, Some(_), None) => Err(CliError::Parse("field `params` is required with `family`".into())),
            (None, None, _) => Err(CliError::Parse("expected either `matrix` or `family`".into())),
            (Some(_), _, _) => Err(CliError::Parse(
                "`matrix` cannot be combined with `family`/`params`".into(),
            )),
        }
    }
}

fn matrix_state(rows: &[Vec<[f64; 2]>]) -> CliResult<DensityMatrix> {
    if rows.len() != 4 {
        return Err(CliError::Parse(format!(
            "field `matrix`: expected 4 rows, found {}",
            rows.len()
        )));
    }
    let mut data = Vec::with_capacity(16);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != 4 {
            return Err(CliError::Parse(format!(
                "field `matrix[{i}]`: expected 4 entries, found {}",
                row.len()
            )));
        }
        data.extend(row.iter().map(|[re, im]| Complex64::new(*re, *im)));
    }
    DensityMatrix::new(ComplexMatrix::from_vec(4, 4, data)).map_err(|e| CliError::core("field `matrix`", e))
}

fn family_state(name: FamilyName, params: &BTreeMap<String, f64>) -> CliResult<DensityMatrix> {
    let expected = name.param_names();
    if let Some(extra) = params.keys().find(|k| !expected.contains(&k.as_str())) {
        return Err(CliError::Parse(format!(
            "field `params.{extra}`: unknown parameter, expected {expected:?}"
        )));
    }
    let get = |k: &str| {
        params
            .get(k)
            .copied()
            .ok_or_else(|| CliError::Parse(format!("field `params.{k}` is missing")))
    };
    let ctx = |e| CliError::core("field `params`", e);
    Ok(match name {
        FamilyName::Werner => make_werner(&WernerParams::new(get("omega")?).map_err(ctx)?),
        FamilyName::Gamma => make_gamma(&GammaParams::new(get("q")?, get("alpha")?).map_err(ctx)?),
        FamilyName::BellDiagonal => {
            let w = [get("w1")?, get("w2")?, get("w3")?, get("w4")?];
            make_bell_diagonal(&BellDiagonalParams::new(w).map_err(ctx)?)
        }
    })
}
