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

//! Lower end of the useful `q` range of the γ family under a fixed filter.
//!
//! For each `α` the grid `q = 0, s, 2s, …, 1` is scanned downwards from
//! `q = 1`. The range start is the infimum of the run of useful grid points
//! ending at 1, refined by bisection between the last failing point and the
//! first useful one until the bracket is at most `1e-3` wide.

use serde::Serialize;
use steerqkd_core::families::make_gamma;
use steerqkd_core::filtering::modified_protocol_useful;
use steerqkd_core::{Error as CoreError, FilterPair, GammaParams};

use crate::error::{CliError, CliResult};

pub const BISECTION_WIDTH: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub alpha: f64,
    /// `None` when the filtered state is not useful even at `q = 1`.
    pub q_start: Option<f64>,
}

fn useful(f: &FilterPair, q: f64, alpha: f64) -> CliResult<bool> {
    let p = GammaParams::new(q, alpha).map_err(|e| CliError::core("gamma parameters", e))?;
    match modified_protocol_useful(&make_gamma(&p), f) {
        Ok(u) => Ok(u),
        Err(CoreError::FilterAnnihilates { .. }) => Ok(false),
        Err(e) => Err(CliError::core(format!("q = {q}, alpha = {alpha}"), e)),
    }
}

pub fn q_range_start(f: &FilterPair, alpha: f64, q_step: f64) -> CliResult<Option<f64>> {
    if !(q_step > 0.0 && q_step <= 0.5) {
        return Err(CliError::BadRange {
            spec: format!("qstep={q_step}"),
            reason: "q step must lie in (0, 0.5]",
        });
    }
    let n = (1.0 / q_step - 1e-9).ceil() as usize;
    let grid = |k: usize| (k as f64 * q_step).min(1.0);
    if !useful(f, 1.0, alpha)? {
        return Ok(None);
    }
    let mut k = n;
    while k > 0 && useful(f, grid(k - 1), alpha)? {
        k -= 1;
    }
    if k == 0 {
        return Ok(Some(0.0));
    }
    let (mut lo, mut hi) = (grid(k - 1), grid(k));
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if useful(f, mid, alpha)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

pub fn table1(f: &FilterPair, alphas: &[f64], q_step: f64) -> CliResult<Vec<Table1Row>> {
    alphas
        .iter()
        .map(|&alpha| {
            Ok(Table1Row {
                alpha,
                q_start: q_range_start(f, alpha, q_step)?,
            })
        })
        .collect()
}
