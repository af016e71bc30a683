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

//! Local filtering `M⁽¹⁾ = ε|0⟩⟨0| + |1⟩⟨1|` on each qubit, the heralded
//! post-filter state, and the usefulness test of the filtered protocol.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::qber::{critical_qber, qber_min};
use crate::qstate::{bloch_decompose, tensor_spectrum, DensityMatrix};

/// Success probabilities below this are treated as annihilating the state.
pub const MIN_SUCCESS_PROBABILITY: f64 = 1e-12;

/// Alice's and Bob's filter strengths `(ε₁, ε₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterPair {
    eps1: f64,
    eps2: f64,
}

impl FilterPair {
    pub fn new(eps1: f64, eps2: f64) -> Result<Self> {
        for (name, e) in [("eps1", eps1), ("eps2", eps2)] {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::BadParam { name, value: e });
            }
        }
        Ok(FilterPair { eps1, eps2 })
    }

    pub fn identity() -> Self {
        FilterPair { eps1: 1.0, eps2: 1.0 }
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    /// `M⁽¹⁾_A ⊗ M⁽¹⁾_B`
    pub fn success_operator(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[self.eps1, 1.0]).kron(&ComplexMatrix::from_real_diagonal(&[self.eps2, 1.0]))
    }

    /// The four Kraus products `M⁽ⁱ⁾_A ⊗ M⁽ʲ⁾_B` in order (1,1), (1,2), (2,1), (2,2),
    /// with `M⁽²⁾ = √(I − M⁽¹⁾†M⁽¹⁾) = diag(√(1−ε²), 0)`.
    pub fn branch_operators(&self) -> [ComplexMatrix; 4] {
        let m = |e: f64| {
            [
                ComplexMatrix::from_real_diagonal(&[e, 1.0]),
                ComplexMatrix::from_real_diagonal(&[libm::sqrt(1.0 - e * e), 0.0]),
            ]
        };
        let a = m(self.eps1);
        let b = m(self.eps2);
        [a[0].kron(&b[0]), a[0].kron(&b[1]), a[1].kron(&b[0]), a[1].kron(&b[1])]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome {
    pub filtered_state: DensityMatrix,
    pub p_succ: f64,
    /// Minimum three-setting QBER of the filtered state.
    pub q_min_filtered: f64,
    /// `p_succ × q_min` of the unfiltered state.
    pub literal_keyn_product: f64,
}

fn sandwich(k: &ComplexMatrix, rho: &DensityMatrix) -> ComplexMatrix {
    &(k * rho.matrix()) * &k.dagger()
}

/// Probabilities of the four filter branches; they sum to one.
pub fn branch_probabilities(rho: &DensityMatrix, f: &FilterPair) -> [f64; 4] {
    f.branch_operators().map(|k| sandwich(&k, rho).trace().re)
}

pub fn apply_local_filters(rho: &DensityMatrix, f: &FilterPair) -> Result<FilterOutcome> {
    let unnormalised = sandwich(&f.success_operator(), rho);
    let p_succ = unnormalised.trace().re;
    if p_succ.is_nan() || p_succ < MIN_SUCCESS_PROBABILITY {
        return Err(Error::FilterAnnihilates { p_succ });
    }
    let filtered_state = DensityMatrix::new(unnormalised.scale(1.0 / p_succ))?;
    let q_min_filtered = qber_min(&tensor_spectrum(&bloch_decompose(&filtered_state)));
    let q_min_before = qber_min(&tensor_spectrum(&bloch_decompose(rho)));
    Ok(FilterOutcome {
        filtered_state,
        p_succ,
        q_min_filtered,
        literal_keyn_product: p_succ * q_min_before,
    })
}

/// Whether the filtered state's minimum QBER is below the critical rate.
pub fn modified_protocol_useful(rho: &DensityMatrix, f: &FilterPair) -> Result<bool> {
    Ok(apply_local_filters(rho, f)?.q_min_filtered < critical_qber())
}

/// Grid points `k·step ∈ (0, 1]` used by [`filter_search`].
pub fn filter_grid(grid_step: f64) -> Result<Vec<f64>> {
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(Error::BadParam {
            name: "grid_step",
            value: grid_step,
        });
    }
    let n = libm::floor(1.0 / grid_step + 1e-9) as usize;
    Ok((1..=n).map(|k| (k as f64 * grid_step).min(1.0)).collect())
}

/// All grid filter pairs that make `rho` useful, row-major with ε₁ outer.
/// Pairs whose success probability vanishes are skipped.
pub fn filter_search(rho: &DensityMatrix, grid_step: f64) -> Result<Vec<FilterPair>> {
    let grid = filter_grid(grid_step)?;
    let mut out = Vec::new();
    for &e1 in &grid {
        for &e2 in &grid {
            let f = FilterPair { eps1: e1, eps2: e2 };
            match modified_protocol_useful(rho, &f) {
                Ok(true) => out.push(f),
                Ok(false) | Err(Error::FilterAnnihilates { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}
