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

use thiserror::Error;

/// Errors raised by the analysis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(&'static str),

    /// The assembled matrix has a negative eigenvalue below the PSD tolerance.
    #[error("Bloch parameters do not describe a state (min eigenvalue {min_eigenvalue:.3e})")]
    NotAState { min_eigenvalue: f64 },

    #[error("measurement direction is not a unit vector (|v| = {norm})")]
    InvalidDirection { norm: f64 },

    #[error("measurement triad is not orthonormal")]
    InvalidTriad,

    #[error("Bell-diagonal weights must lie in [0,1] and sum to 1")]
    BadWeights,

    #[error("parameter `{name}` = {value} is out of range")]
    BadParam { name: &'static str, value: f64 },

    #[error("violation {0} is outside (0, sqrt(3)]")]
    BadViolation(f64),

    #[error("error rate {0} is outside [0, 1/2]")]
    BadQber(f64),

    #[error("filter success probability {p_succ:.3e} is below 1e-12")]
    FilterAnnihilates { p_succ: f64 },

    #[error("degenerate protocol configuration: {0}")]
    DegenerateConfig(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
