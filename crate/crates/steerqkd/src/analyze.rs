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

use serde::Serialize;
use steerqkd_core::qber::{classify_usefulness, min_secure_key_rate, qber_min_two_settings};
use steerqkd_core::qstate::{bloch_decompose, tensor_spectrum};
use steerqkd_core::steering::steering_verdict;
use steerqkd_core::{DensityMatrix, Mat3, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub a_vec: Vec3,
    pub b_vec: Vec3,
    pub w: Mat3,
    pub sigma: Vec3,
    pub signed_diagonal: Vec3,
    pub f3_bound: f64,
    pub f3_steerable: bool,
    pub chsh_bound: f64,
    pub chsh_violating: bool,
    pub q_min: f64,
    pub q_min_two_settings: f64,
    pub critical_rate: f64,
    pub margin: f64,
    pub useful: bool,
    pub key_rate_at_q_min: Option<f64>,
    pub ppt: bool,
}

pub fn analyze(rho: &DensityMatrix) -> AnalysisReport {
    let bf = bloch_decompose(rho);
    let spec = tensor_spectrum(&bf);
    let steer = steering_verdict(&spec);
    let use_ = classify_usefulness(&spec);
    AnalysisReport {
        a_vec: bf.a_vec,
        b_vec: bf.b_vec,
        w: bf.w,
        sigma: spec.sigma,
        signed_diagonal: spec.signed,
        f3_bound: steer.f3_bound,
        f3_steerable: steer.steerable,
        chsh_bound: steer.chsh_bound,
        chsh_violating: steer.chsh_violating,
        q_min: use_.q_min,
        q_min_two_settings: qber_min_two_settings(&spec),
        critical_rate: use_.critical_rate,
        margin: use_.margin,
        useful: use_.useful,
        key_rate_at_q_min: min_secure_key_rate(use_.q_min).ok(),
        ppt: rho.is_ppt(),
    }
}
