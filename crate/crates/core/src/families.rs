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

//! Parametrised state families with closed-form correlation tensors and
//! steerability/usefulness predicates.

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Mat3, Vec3};
use crate::qstate::DensityMatrix;
use crate::steering::belldiag_f3_steerable;

const SQRT_3: f64 = 1.732_050_807_568_877_2;
const SIMPLEX_TOL: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Bell basis in the fixed order `|ψ⁻⟩, |φ⁺⟩, |φ⁻⟩, |ψ⁺⟩`.
pub fn bell_basis() -> [[Complex64; 4]; 4] {
    let h = FRAC_1_SQRT_2;
    let z = c(0.0);
    [
        [z, c(h), c(-h), z],
        [c(h), z, z, c(h)],
        [c(h), z, z, c(-h)],
        [z, c(h), c(h), z],
    ]
}

/// Weights on `|ψ⁻⟩, |φ⁺⟩, |φ⁻⟩, |ψ⁺⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalParams {
    w: [f64; 4],
}

impl BellDiagonalParams {
    pub fn new(w: [f64; 4]) -> Result<Self> {
        let in_range = w
            .iter()
            .all(|x| x.is_finite() && *x >= -SIMPLEX_TOL && *x <= 1.0 + SIMPLEX_TOL);
        let sum: f64 = w.iter().sum();
        if !in_range || libm::fabs(sum - 1.0) > SIMPLEX_TOL {
            return Err(Error::BadWeights);
        }
        Ok(BellDiagonalParams { w })
    }

    /// Completes `w₄ = 1 − w₁ − w₂ − w₃`.
    pub fn from_first_three(w1: f64, w2: f64, w3: f64) -> Result<Self> {
        Self::new([w1, w2, w3, 1.0 - w1 - w2 - w3])
    }

    pub fn weights(&self) -> [f64; 4] {
        self.w
    }

    /// Diagonal of `W` for this weight order. Up to signs and a permutation
    /// its entries are `1 − 2(wᵢ + wⱼ)` for the pairs `i < j ≤ 3`.
    pub fn correlation_diagonal(&self) -> Vec3 {
        let [w1, w2, w3, w4] = self.w;
        [-w1 + w2 - w3 + w4, -w1 - w2 + w3 + w4, -w1 + w2 + w3 - w4]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParams {
    omega: f64,
}

impl WernerParams {
    pub fn new(omega: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&omega) {
            return Err(Error::BadParam {
                name: "omega",
                value: omega,
            });
        }
        Ok(WernerParams { omega })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// The same state written as a Bell-diagonal mixture.
    pub fn to_bell_diagonal(&self) -> BellDiagonalParams {
        let om = self.omega;
        let rest = (1.0 - om) / 4.0;
        BellDiagonalParams {
            w: [(1.0 + 3.0 * om) / 4.0, rest, rest, rest],
        }
    }
}

/// `q|φ⟩⟨φ| + (1−q)|00⟩⟨00|` with `|φ⟩ = cos α|10⟩ + sin α|01⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    q: f64,
    alpha: f64,
}

impl GammaParams {
    /// `q ∈ [0,1]`, `α ∈ [0, π/4]`; out-of-domain angles are rejected, not wrapped.
    pub fn new(q: f64, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::BadParam { name: "q", value: q });
        }
        if !(0.0..=FRAC_PI_4).contains(&alpha) {
            return Err(Error::BadParam {
                name: "alpha",
                value: alpha,
            });
        }
        Ok(GammaParams { q, alpha })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `diag(q sin 2α, q sin 2α, 1 − 2q)`
    pub fn correlation_diagonal(&self) -> Vec3 {
        let s = self.q * libm::sin(2.0 * self.alpha);
        [s, s, 1.0 - 2.0 * self.q]
    }
}

pub fn make_bell_diagonal(p: &BellDiagonalParams) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (wi, psi) in p.w.iter().zip(bell_basis()) {
        if *wi != 0.0 {
            m = &m + &ComplexMatrix::projector(&psi).scale(*wi);
        }
    }
    DensityMatrix::new(m).expect("Bell-diagonal mixture is a state")
}

pub fn make_werner(p: &WernerParams) -> DensityMatrix {
    let singlet = ComplexMatrix::projector(&bell_basis()[0]).scale(p.omega);
    let noise = ComplexMatrix::identity(4).scale((1.0 - p.omega) / 4.0);
    DensityMatrix::new(&singlet + &noise).expect("Werner mixture is a state")
}

pub fn make_gamma(p: &GammaParams) -> DensityMatrix {
    let z = c(0.0);
    let phi = [z, c(libm::sin(p.alpha)), c(libm::cos(p.alpha)), z];
    let mut m = ComplexMatrix::projector(&phi).scale(p.q);
    m[(0, 0)] += c(1.0 - p.q);
    DensityMatrix::new(m).expect("gamma mixture is a state")
}

/// Closed-form tensor of a family member, for cross-checks against the
/// generic Bloch decomposition.
pub fn diagonal_tensor(d: Vec3) -> Mat3 {
    crate::linalg::diag3(&d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyPredicates {
    pub steerable: bool,
    pub useful: bool,
}

/// `2q² sin² 2α + (1 − 2q)² > 1` and `2q sin 2α + |1 − 2q| > √3`.
pub fn gamma_predicates(p: &GammaParams) -> FamilyPredicates {
    let s = libm::sin(2.0 * p.alpha);
    let d = 1.0 - 2.0 * p.q;
    FamilyPredicates {
        steerable: 2.0 * p.q * p.q * s * s + d * d > 1.0,
        useful: 2.0 * p.q * s + libm::fabs(d) > SQRT_3,
    }
}

/// Steerability from the weights-only criterion; usefulness from
/// `Σ_{i<j≤3} |1 − 2(wᵢ + wⱼ)| > √3`.
pub fn belldiag_predicates(p: &BellDiagonalParams) -> FamilyPredicates {
    let w = p.w;
    let pair_sum: f64 = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| libm::fabs(1.0 - 2.0 * (w[i] + w[j])))
        .sum();
    FamilyPredicates {
        steerable: belldiag_f3_steerable(p),
        useful: pair_sum > SQRT_3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qber::classify_usefulness;
    use crate::qstate::{bloch_decompose, tensor_spectrum};
    use crate::steering::is_f3_steerable;

    fn assert_tensor(rho: &DensityMatrix, d: Vec3) {
        let bf = bloch_decompose(rho);
        let want = diagonal_tensor(d);
        for i in 0..3 {
            for j in 0..3 {
                assert!((bf.w[i][j] - want[i][j]).abs() < 1e-12, "{:?} vs {:?}", bf.w, want);
            }
        }
    }

    #[test]
    fn bell_diagonal_examples() {
        let singlet = make_bell_diagonal(&BellDiagonalParams::new([1.0, 0.0, 0.0, 0.0]).unwrap());
        assert!(singlet
            .matrix()
            .approx_eq(make_werner(&WernerParams::new(1.0).unwrap()).matrix(), 1e-15));
        let mixed = make_bell_diagonal(&BellDiagonalParams::new([0.25; 4]).unwrap());
        assert!(mixed
            .matrix()
            .approx_eq(DensityMatrix::maximally_mixed().matrix(), 1e-15));
        let p = BellDiagonalParams::new([0.4, 0.3, 0.2, 0.1]).unwrap();
        assert_tensor(&make_bell_diagonal(&p), [-0.2, -0.4, 0.0]);
        let d = p.correlation_diagonal();
        assert!((d[0] + 0.2).abs() < 1e-15 && (d[1] + 0.4).abs() < 1e-15 && d[2].abs() < 1e-15);
    }

    #[test]
    fn bell_diagonal_rejects_bad_weights() {
        assert_eq!(BellDiagonalParams::new([0.5, 0.5, 0.5, -0.5]), Err(Error::BadWeights));
        assert_eq!(BellDiagonalParams::new([0.5, 0.5, 0.5, 0.5]), Err(Error::BadWeights));
        assert_eq!(
            BellDiagonalParams::new([f64::NAN, 0.0, 0.0, 1.0]),
            Err(Error::BadWeights)
        );
    }

    #[test]
    fn werner_examples() {
        let w1 = make_werner(&WernerParams::new(1.0).unwrap());
        let psi = bell_basis()[0];
        assert!(w1.matrix().approx_eq(&ComplexMatrix::projector(&psi), 1e-15));
        let w0 = make_werner(&WernerParams::new(0.0).unwrap());
        assert!(w0.matrix().approx_eq(DensityMatrix::maximally_mixed().matrix(), 0.0));
        assert_tensor(&make_werner(&WernerParams::new(0.8).unwrap()), [-0.8; 3]);
        assert!(WernerParams::new(1.2).is_err());
    }

    #[test]
    fn gamma_examples() {
        let bell = make_gamma(&GammaParams::new(1.0, FRAC_PI_4).unwrap());
        assert!(bell
            .matrix()
            .approx_eq(&ComplexMatrix::projector(&bell_basis()[3]), 1e-15));
        let prod = make_gamma(&GammaParams::new(0.0, 0.3).unwrap());
        assert_tensor(&prod, [0.0, 0.0, 1.0]);
        let s = tensor_spectrum(&bloch_decompose(&make_gamma(&GammaParams::new(0.9, 0.25).unwrap())));
        let s2 = 0.9 * 0.5f64.sin();
        assert!((s.sigma[0] - 0.8).abs() < 1e-12);
        assert!((s.sigma[1] - s2).abs() < 1e-12 && (s.sigma[2] - s2).abs() < 1e-12);
        assert!((s2 - 0.43148).abs() < 1e-5);
    }

    #[test]
    fn gamma_rejects_out_of_domain_angle() {
        assert!(GammaParams::new(0.5, 0.8).is_err());
        assert!(GammaParams::new(0.5, -0.1).is_err());
        assert!(GammaParams::new(1.1, 0.1).is_err());
    }

    #[test]
    fn gamma_predicate_examples() {
        let p = GammaParams::new(0.9, 0.25).unwrap();
        assert_eq!(
            gamma_predicates(&p),
            FamilyPredicates {
                steerable: true,
                useful: false
            }
        );
        assert!(!gamma_predicates(&GammaParams::new(0.5, 0.2).unwrap()).steerable);
        let bell = GammaParams::new(1.0, FRAC_PI_4).unwrap();
        assert_eq!(
            gamma_predicates(&bell),
            FamilyPredicates {
                steerable: true,
                useful: true
            }
        );
    }

    #[test]
    fn belldiag_predicate_examples() {
        let w = WernerParams::new(0.99).unwrap().to_bell_diagonal();
        assert_eq!(
            belldiag_predicates(&w),
            FamilyPredicates {
                steerable: true,
                useful: true
            }
        );
        let mixed = BellDiagonalParams::new([0.25; 4]).unwrap();
        assert_eq!(
            belldiag_predicates(&mixed),
            FamilyPredicates {
                steerable: false,
                useful: false
            }
        );
        let p = BellDiagonalParams::new([0.4, 0.3, 0.2, 0.1]).unwrap();
        assert_eq!(
            belldiag_predicates(&p),
            FamilyPredicates {
                steerable: false,
                useful: false
            }
        );
    }

    #[test]
    fn predicates_match_pipeline_on_examples() {
        for (q, a) in [(0.9, 0.25), (0.5, 0.2), (0.95, 0.7), (0.3, 0.1)] {
            let p = GammaParams::new(q, a).unwrap();
            let spec = tensor_spectrum(&bloch_decompose(&make_gamma(&p)));
            let pred = gamma_predicates(&p);
            assert_eq!(pred.steerable, is_f3_steerable(&spec));
            assert_eq!(pred.useful, classify_usefulness(&spec).useful);
        }
    }
}
