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

//! Quantum bit error rates for correlated-basis measurements, their minimum
//! over measurement directions, the critical rate separating useful states,
//! and the symmetric-attack key-rate formula.

use crate::error::{Error, Result};
use crate::linalg::{self, Vec3};
use crate::qstate::{BlochForm, MeasurementTriad, TensorSpectrum};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsefulnessVerdict {
    pub q_min: f64,
    pub useful: bool,
    pub critical_rate: f64,
    /// `critical_rate - q_min`; positive exactly when useful.
    pub margin: f64,
}

/// `(1/6)(3 − Σᵢ uᵢ·W vᵢ)` for three correlated basis pairs.
pub fn qber_three_settings(bf: &BlochForm, alice: &MeasurementTriad, bob: &MeasurementTriad) -> f64 {
    let s: f64 = (0..3).map(|i| linalg::bilinear(alice.dir(i), &bf.w, bob.dir(i))).sum();
    (3.0 - s) / 6.0
}

/// `(1/4)(2 − u₁·W v₁ − u₂·W v₂)` for two correlated basis pairs.
pub fn qber_two_settings(bf: &BlochForm, alice: [&Vec3; 2], bob: [&Vec3; 2]) -> f64 {
    let s: f64 = (0..2).map(|i| linalg::bilinear(alice[i], &bf.w, bob[i])).sum();
    (2.0 - s) / 4.0
}

/// Minimum three-setting QBER, `(1/6)(3 − Σ|tᵢᵢ|)`.
pub fn qber_min(spec: &TensorSpectrum) -> f64 {
    (3.0 - spec.abs_sum()) / 6.0
}

/// Minimum two-setting QBER from the two largest singular values.
pub fn qber_min_two_settings(spec: &TensorSpectrum) -> f64 {
    (2.0 - spec.sigma[0] - spec.sigma[1]) / 4.0
}

/// `(3 − √3)/6`, the least QBER any F₃-unsteerable state can reach.
pub fn critical_qber() -> f64 {
    (3.0 - SQRT_3) / 6.0
}

pub fn classify_usefulness(spec: &TensorSpectrum) -> UsefulnessVerdict {
    let q_min = qber_min(spec);
    let critical_rate = critical_qber();
    UsefulnessVerdict {
        q_min,
        useful: spec.abs_sum() > SQRT_3,
        critical_rate,
        margin: critical_rate - q_min,
    }
}

/// The six signed coordinate axes of the qubit MUB operator bases, indexed
/// 1..=6 as `m₁ = ẑ, m₂ = −ẑ, m₃ = x̂, m₄ = −x̂, m₅ = ŷ, m₆ = −ŷ`.
pub const MUB_AXES: [Vec3; 6] = [
    [0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0],
    [1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, -1.0, 0.0],
];

/// Directions chosen by the exhaustive MUB search, as 1-based indices into
/// [`MUB_AXES`] for each of the three correlated slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MubChoice {
    pub alice: [usize; 3],
    pub bob: [usize; 3],
}

impl MubChoice {
    pub fn alice_dirs(&self) -> [Vec3; 3] {
        self.alice.map(|m| MUB_AXES[m - 1])
    }

    pub fn bob_dirs(&self) -> [Vec3; 3] {
        self.bob.map(|m| MUB_AXES[m - 1])
    }
}

/// All 48 ways one party can fill three slots with distinct MUBs: each slot
/// takes a different axis pair (z, x, y) and a sign. Ordered by axis
/// permutation (lexicographic from `(z, x, y)`), then signs with `+` first.
pub fn party_mub_assignments() -> [[usize; 3]; 48] {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = [[0usize; 3]; 48];
    let mut n = 0;
    for perm in PERMS {
        for signs in 0..8usize {
            out[n] = core::array::from_fn(|slot| 2 * perm[slot] + 1 + ((signs >> (2 - slot)) & 1));
            n += 1;
        }
    }
    out
}

/// Exhaustive minimum of `(1/6)(3 − Σ uᵢ'·T vᵢ')` over the 48 × 48 MUB
/// assignments, with `T = diag(spec.signed)`. Returns the first minimiser in
/// enumeration order.
pub fn brute_force_qber_min(spec: &TensorSpectrum) -> (f64, MubChoice) {
    let t = linalg::diag3(&spec.signed);
    let assignments = party_mub_assignments();
    let mut best = f64::INFINITY;
    let mut choice = MubChoice {
        alice: assignments[0],
        bob: assignments[0],
    };
    for alice in &assignments {
        for bob in &assignments {
            let s: f64 = (0..3)
                .map(|i| linalg::bilinear(&MUB_AXES[alice[i] - 1], &t, &MUB_AXES[bob[i] - 1]))
                .sum();
            let q = (3.0 - s) / 6.0;
            if q < best {
                best = q;
                choice = MubChoice {
                    alice: *alice,
                    bob: *bob,
                };
            }
        }
    }
    (best, choice)
}

/// Triads that attain [`qber_min`] for a given correlation tensor: Alice
/// measures along the left singular vectors of `W`, Bob along the right ones,
/// so each correlated pair contributes `uᵢ·W vᵢ = σᵢ`.
pub fn optimal_triads(bf: &BlochForm) -> (MeasurementTriad, MeasurementTriad) {
    let svd = linalg::svd3(&bf.w);
    let alice = MeasurementTriad::from_columns(&svd.u).expect("left singular vectors are orthonormal");
    let bob = MeasurementTriad::from_columns(&svd.v).expect("right singular vectors are orthonormal");
    (alice, bob)
}

/// λ₁₁ implied by an observed CJWR violation together with the usefulness
/// window it must fall in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda11Window {
    /// `√(V² − λ₂₂² − λ₃₃²)`
    pub implied: f64,
    /// Exclusive lower bound `√3 − λ₂₂ − λ₃₃`.
    pub low: f64,
    /// Inclusive upper bound, the unit cap on a tensor component.
    pub high: f64,
}

fn check_violation_inputs(v: f64, lam22: f64, lam33: f64) -> Result<()> {
    if !(v > 0.0 && v <= SQRT_3 + 1e-12) {
        return Err(Error::BadViolation(v));
    }
    for (name, x) in [("lam22", lam22), ("lam33", lam33)] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::BadParam { name, value: x });
        }
    }
    Ok(())
}

/// Given an observed violation `V` and two tensor eigenvalues, decides
/// whether the third, `λ₁₁ = √(V² − λ₂₂² − λ₃₃²)`, certifies usefulness:
/// `√3 − λ₂₂ − λ₃₃ < λ₁₁ ≤ 1`. Returns `None` when the radicand is negative
/// or the chain fails.
pub fn useful_region_given_violation(v: f64, lam22: f64, lam33: f64) -> Result<Option<Lambda11Window>> {
    check_violation_inputs(v, lam22, lam33)?;
    let radicand = v * v - lam22 * lam22 - lam33 * lam33;
    if radicand < 0.0 {
        return Ok(None);
    }
    let implied = libm::sqrt(radicand);
    let window = Lambda11Window {
        implied,
        low: SQRT_3 - lam22 - lam33,
        high: 1.0,
    };
    Ok((window.low < implied && implied <= window.high).then_some(window))
}

/// The asymmetric chain `√3 − λ₁₁ − λ₂₂ < √(V² − λ₂₂² − λ₃₃²) ≤ 1` with λ₁₁
/// set to the implied value. It is weaker than the symmetric window of
/// [`useful_region_given_violation`] and can accept states that are not useful.
pub fn literal_violation_chain(v: f64, lam22: f64, lam33: f64) -> Result<bool> {
    check_violation_inputs(v, lam22, lam33)?;
    let radicand = v * v - lam22 * lam22 - lam33 * lam33;
    if radicand < 0.0 {
        return Ok(false);
    }
    let r = libm::sqrt(radicand);
    Ok(SQRT_3 - r - lam22 < r && r <= 1.0)
}

/// `r_min = 1 + 2Q log₂Q + 2(1−2Q) log₂(1−Q)`, with `Q log₂Q → 0` at `Q = 0`.
pub fn min_secure_key_rate(q: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&q) {
        return Err(Error::BadQber(q));
    }
    let q_log_q = if q == 0.0 { 0.0 } else { q * libm::log2(q) };
    Ok(1.0 + 2.0 * q_log_q + 2.0 * (1.0 - 2.0 * q) * libm::log2(1.0 - q))
}
