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
use steerqkd_core::protocol::run_protocol;
use steerqkd_core::qber::optimal_triads;
use steerqkd_core::qstate::bloch_decompose;
use steerqkd_core::{DensityMatrix, FilterPair, ProtocolConfig, SimulationReport, Vec3};

use crate::error::{CliError, CliResult};
use crate::statefile::StateSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub state: StateSpec,
    pub rounds: u64,
    pub seed: u64,
    pub test_fraction: f64,
    pub filter: Option<[f64; 2]>,
    pub rng: &'static str,
    pub alice_triad: [Vec3; 3],
    pub bob_triad: [Vec3; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportJson {
    pub rounds: u64,
    pub kept_count: u64,
    pub sifted_count: u64,
    pub disclosed_count: u64,
    pub empirical_qber: f64,
    pub empirical_cjwr: f64,
    pub correlators: [f64; 3],
    pub correlator_counts: [u64; 3],
    pub p_succ_empirical: Option<f64>,
    pub raw_key_length: usize,
    pub raw_key_mismatches: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_key_alice: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_key_bob: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationOutput {
    pub config: ConfigEcho,
    pub report: ReportJson,
}

fn bits(key: &[u8]) -> String {
    key.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

/// Runs the protocol with Alice and Bob measuring along the optimal triads of
/// the state actually measured (the filtered one when a filter is given).
pub fn simulate(
    state: &StateSpec,
    rounds: u64,
    seed: u64,
    test_fraction: f64,
    filter: Option<FilterPair>,
    with_keys: bool,
) -> CliResult<SimulationOutput> {
    let rho = state.to_state()?;
    let measured = match &filter {
        Some(f) => {
            steerqkd_core::filtering::apply_local_filters(&rho, f)
                .map_err(|e| CliError::core("filter", e))?
                .filtered_state
        }
        None => rho.clone(),
    };
    let (alice, bob) = optimal_triads(&bloch_decompose(&measured));
    let mut cfg = ProtocolConfig::new(rounds, seed, alice, bob).with_test_fraction(test_fraction);
    if let Some(f) = filter {
        cfg = cfg.with_filter(f);
    }
    let report = run(&rho, &cfg)?;
    Ok(SimulationOutput {
        config: ConfigEcho {
            state: state.clone(),
            rounds,
            seed,
            test_fraction,
            filter: filter.map(|f| [f.eps1(), f.eps2()]),
            rng: "ChaCha8 (rand_chacha), seed_from_u64",
            alice_triad: *alice.dirs(),
            bob_triad: *bob.dirs(),
        },
        report: ReportJson {
            rounds: report.rounds,
            kept_count: report.kept_count,
            sifted_count: report.sifted_count,
            disclosed_count: report.disclosed_count,
            empirical_qber: report.empirical_qber,
            empirical_cjwr: report.empirical_cjwr,
            correlators: report.correlators,
            correlator_counts: report.correlator_counts,
            p_succ_empirical: report.p_succ_empirical,
            raw_key_length: report.raw_key_alice.len(),
            raw_key_mismatches: report.key_mismatches(),
            raw_key_alice: with_keys.then(|| bits(&report.raw_key_alice)),
            raw_key_bob: with_keys.then(|| bits(&report.raw_key_bob)),
        },
    })
}

fn run(rho: &DensityMatrix, cfg: &ProtocolConfig) -> CliResult<SimulationReport> {
    run_protocol(rho, cfg).map_err(|e| CliError::core("simulation", e))
}
