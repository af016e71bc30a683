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

//! Family parameter scans emitted as CSV.
//!
//! Grid points come from nested loops over the ranges in the order given,
//! first range outermost. Points are evaluated in parallel and written back
//! in grid order. Floats are written as the shortest decimal that round-trips
//! the value rounded to 10 significant digits; booleans as `0`/`1`.

use std::fmt::Write as _;

use rayon::prelude::*;
use steerqkd_core::families::{make_bell_diagonal, make_gamma, make_werner};
use steerqkd_core::filtering::apply_local_filters;
use steerqkd_core::qber::classify_usefulness;
use steerqkd_core::qstate::{bloch_decompose, tensor_spectrum};
use steerqkd_core::steering::{belldiag_absolutely_chsh_local, steering_verdict};
use steerqkd_core::{BellDiagonalParams, DensityMatrix, Error as CoreError, FilterPair, GammaParams, WernerParams};

use crate::error::{CliError, CliResult};
use crate::statefile::FamilyName;

/// Tolerance for grid endpoints and for `w₄ = 1 − w₁ − w₂ − w₃ ≥ 0`.
const GRID_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RangeSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl RangeSpec {
    /// Parses `name=lo:hi:step`.
    pub fn parse(spec: &str) -> CliResult<Self> {
        let bad = |reason| CliError::BadRange {
            spec: spec.to_string(),
            reason,
        };
        let (name, rest) = spec.split_once('=').ok_or_else(|| bad("expected name=lo:hi:step"))?;
        let parts: Vec<&str> = rest.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(bad("expected name=lo:hi:step"));
        };
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| bad("bounds and step must be numbers"))
        };
        let r = RangeSpec {
            name: name.trim().to_string(),
            lo: num(lo)?,
            hi: num(hi)?,
            step: num(step)?,
        };
        if r.name.is_empty() {
            return Err(bad("missing parameter name"));
        }
        if !(r.lo.is_finite() && r.hi.is_finite()) || r.hi < r.lo {
            return Err(bad("need finite lo <= hi"));
        }
        if !(r.step > 0.0 && r.step.is_finite()) {
            return Err(bad("step must be positive"));
        }
        Ok(r)
    }

    /// `lo + k·step` for `k = 0, 1, …` up to `hi` (inclusive within tolerance).
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + GRID_TOL).floor() as usize;
        (0..=n).map(|k| self.lo + k as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub family: FamilyName,
    pub ranges: Vec<RangeSpec>,
    pub filter: Option<FilterPair>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Flag(bool),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

pub fn format_float(x: f64) -> String {
    let rounded: f64 = format!("{x:.9e}").parse().expect("formatted float parses");
    let s = format!("{rounded}");
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

impl ScanResult {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Num(x) => out.push_str(&format_float(*x)),
                    Cell::Flag(b) => out.push(if *b { '1' } else { '0' }),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

impl ScanSpec {
    fn validate(&self) -> CliResult<()> {
        let expected: Vec<&str> = match self.family {
            FamilyName::BellDiagonal => vec!["w1", "w2", "w3"],
            f => f.param_names().to_vec(),
        };
        let mut got: Vec<&str> = self.ranges.iter().map(|r| r.name.as_str()).collect();
        got.sort_unstable();
        let mut want = expected.clone();
        want.sort_unstable();
        if got != want {
            let mut msg = String::new();
            let _ = write!(msg, "family {:?} needs one range for each of {expected:?}", self.family);
            return Err(CliError::Parse(msg));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for r in &self.ranges {
            let values = r.values();
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        points
    }

    fn param(&self, point: &[f64], name: &str) -> f64 {
        let i = self.ranges.iter().position(|r| r.name == name).expect("validated");
        point[i]
    }

    /// `None` for points outside the family's domain (skipped rows).
    fn state_at(&self, point: &[f64]) -> Option<(DensityMatrix, Option<BellDiagonalParams>)> {
        let p = |n| self.param(point, n);
        match self.family {
            FamilyName::Werner => WernerParams::new(p("omega")).ok().map(|w| (make_werner(&w), None)),
            FamilyName::Gamma => GammaParams::new(p("q"), p("alpha"))
                .ok()
                .map(|g| (make_gamma(&g), None)),
            FamilyName::BellDiagonal => {
                let (w1, w2, w3) = (p("w1"), p("w2"), p("w3"));
                let w4 = 1.0 - w1 - w2 - w3;
                if w4 < -GRID_TOL {
                    return None;
                }
                let b = BellDiagonalParams::new([w1, w2, w3, w4.max(0.0)]).ok()?;
                Some((make_bell_diagonal(&b), Some(b)))
            }
        }
    }

    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = self.ranges.iter().map(|r| r.name.clone()).collect();
        if self.family == FamilyName::BellDiagonal {
            h.push("w4".into());
        }
        h.extend(
            [
                "sigma1",
                "sigma2",
                "sigma3",
                "f3_bound",
                "chsh_bound",
                "q_min",
                "steerable",
                "chsh_violating",
                "useful",
            ]
            .map(String::from),
        );
        if self.family == FamilyName::BellDiagonal {
            h.push("absolutely_local".into());
        }
        if self.filter.is_some() {
            h.extend(["p_succ", "q_min_filtered", "filtered_useful"].map(String::from));
        }
        h
    }

    fn row(&self, point: &[f64]) -> CliResult<Option<Vec<Cell>>> {
        let Some((rho, bd)) = self.state_at(point) else {
            return Ok(None);
        };
        let spec = tensor_spectrum(&bloch_decompose(&rho));
        let steer = steering_verdict(&spec);
        let use_ = classify_usefulness(&spec);
        let mut row: Vec<Cell> = point.iter().map(|&x| Cell::Num(x)).collect();
        if let Some(b) = &bd {
            row.push(Cell::Num(b.weights()[3]));
        }
        row.extend(spec.sigma.map(Cell::Num));
        row.extend([
            Cell::Num(steer.f3_bound),
            Cell::Num(steer.chsh_bound),
            Cell::Num(use_.q_min),
            Cell::Flag(steer.steerable),
            Cell::Flag(steer.chsh_violating),
            Cell::Flag(use_.useful),
        ]);
        if let Some(b) = &bd {
            row.push(Cell::Flag(belldiag_absolutely_chsh_local(b)));
        }
        if let Some(f) = &self.filter {
            match apply_local_filters(&rho, f) {
                Ok(out) => row.extend([
                    Cell::Num(out.p_succ),
                    Cell::Num(out.q_min_filtered),
                    Cell::Flag(out.q_min_filtered < use_.critical_rate),
                ]),
                Err(CoreError::FilterAnnihilates { p_succ }) => {
                    row.extend([Cell::Num(p_succ), Cell::Num(f64::NAN), Cell::Flag(false)])
                }
                Err(e) => return Err(CliError::core("filter", e)),
            }
        }
        Ok(Some(row))
    }

    pub fn run(&self) -> CliResult<ScanResult> {
        self.validate()?;
        let rows: CliResult<Vec<Option<Vec<Cell>>>> = self.grid().par_iter().map(|p| self.row(p)).collect();
        Ok(ScanResult {
            header: self.header(),
            rows: rows?.into_iter().flatten().collect(),
        })
    }
}
