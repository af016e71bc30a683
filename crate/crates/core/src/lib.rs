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

//! Steering-based analysis of two-qubit states for entanglement-based key
//! distribution.
//!
//! Given a two-qubit density matrix the crate computes its Bloch form and
//! correlation-tensor spectrum, decides three-setting (F₃) CJWR steerability,
//! the minimum quantum bit error rate over three correlated MUB pairs and
//! whether that rate beats the critical value `(3 − √3)/6` ("useful" states).
//! Local filtering can be applied to rescue useless states, and a seeded
//! Monte Carlo simulator runs the sifting protocol to check the closed forms.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod families;
pub mod filtering;
pub mod linalg;
pub mod protocol;
pub mod qber;
pub mod qstate;
pub mod sample;
pub mod steering;

pub use num_complex;

pub use error::{Error, Result};
pub use families::{BellDiagonalParams, GammaParams, WernerParams};
pub use filtering::{FilterOutcome, FilterPair};
pub use linalg::{ComplexMatrix, Mat3, Vec3};
pub use protocol::{ProtocolConfig, RoundRecord, SimulationReport};
pub use qber::UsefulnessVerdict;
pub use qstate::{BlochForm, DensityMatrix, MeasurementTriad, TensorSpectrum};
pub use steering::SteeringVerdict;
