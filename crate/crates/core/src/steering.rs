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

//! Three-setting CJWR steering functional, its closed-form maximum, the
//! Horodecki CHSH bound, and Bell-diagonal shortcuts.

use crate::error::Result;
use crate::families::BellDiagonalParams;
use crate::linalg;
use crate::qstate::{bloch_decompose, DensityMatrix, MeasurementTriad, TensorSpectrum};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringVerdict {
    pub f3_bound: f64,
    pub steerable: bool,
    pub chsh_bound: f64,
    pub chsh_violating: bool,
}

/// `(1/√3)|Σₗ ⟨Aₗ⊗Bₗ⟩|` with `⟨Aₗ⊗Bₗ⟩ = âₗ·W b̂ₗ`.
pub fn cjwr_functional(rho: &DensityMatrix, alice: &MeasurementTriad, bob: &MeasurementTriad) -> f64 {
    let w = bloch_decompose(rho).w;
    cjwr_from_correlators(&core::array::from_fn(|l| {
        linalg::bilinear(alice.dir(l), &w, bob.dir(l))
    }))
}

/// CJWR value for three measured correlators.
pub fn cjwr_from_correlators(corr: &[f64; 3]) -> f64 {
    libm::fabs(corr.iter().sum::<f64>()) / SQRT_3
}

/// Maximum of the CJWR functional over all triad pairs, `√Tr(WᵀW)`.
pub fn f3_bound(spec: &TensorSpectrum) -> f64 {
    libm::sqrt(spec.sum_sq())
}

pub fn is_f3_steerable(spec: &TensorSpectrum) -> bool {
    f3_bound(spec) > 1.0
}

/// Bell-diagonal steerability from the weights alone.
///
/// Uses `√(8(Σ_{1≤i≤j≤3} wᵢwⱼ + w₄) − 5) > 1`, whose radicand equals
/// `Σ tᵢᵢ²` of the Bell-diagonal tensor. Negative radicands clamp to zero.
pub fn belldiag_f3_steerable(w: &BellDiagonalParams) -> bool {
    let [w1, w2, w3, w4] = w.weights();
    let pairs = w1 * w1 + w2 * w2 + w3 * w3 + w1 * w2 + w1 * w3 + w2 * w3;
    let radicand = (8.0 * (pairs + w4) - 5.0).max(0.0);
    libm::sqrt(radicand) > 1.0
}

/// Maximal CHSH value `2√(σ₁² + σ₂²)`.
pub fn chsh_bound(spec: &TensorSpectrum) -> f64 {
    2.0 * libm::sqrt(chsh_sum_sq(spec))
}

pub fn is_chsh_violating(spec: &TensorSpectrum) -> bool {
    chsh_sum_sq(spec) > 1.0
}

fn chsh_sum_sq(spec: &TensorSpectrum) -> f64 {
    spec.sigma[0] * spec.sigma[0] + spec.sigma[1] * spec.sigma[1]
}

pub fn steering_verdict(spec: &TensorSpectrum) -> SteeringVerdict {
    SteeringVerdict {
        f3_bound: f3_bound(spec),
        steerable: is_f3_steerable(spec),
        chsh_bound: chsh_bound(spec),
        chsh_violating: is_chsh_violating(spec),
    }
}

/// The absolute-locality functional, maximised over cyclic `(i,j,k)`.
pub fn belldiag_absolute_locality_value(w: &BellDiagonalParams) -> f64 {
    let w = w.weights();
    [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
        .iter()
        .map(|&(i, j, k)| {
            1.0 - 4.0 * (w[i] - w[i] * w[i] - w[i] * w[j] - w[i] * w[k])
                - 2.0 * (w[j] + w[k] - w[j] * w[j] - w[k] * w[k])
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Whether a Bell-diagonal state stays CHSH-local under every global unitary.
pub fn belldiag_absolutely_chsh_local(w: &BellDiagonalParams) -> bool {
    belldiag_absolute_locality_value(w) <= 0.5
}

/// Weights-based entry points validating the simplex first.
pub fn belldiag_f3_steerable_weights(w: [f64; 4]) -> Result<bool> {
    Ok(belldiag_f3_steerable(&BellDiagonalParams::new(w)?))
}

pub fn belldiag_absolutely_chsh_local_weights(w: [f64; 4]) -> Result<bool> {
    Ok(belldiag_absolutely_chsh_local(&BellDiagonalParams::new(w)?))
}
