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

//! Seeded Monte Carlo simulation of the entanglement-based protocol.
//!
//! Every round draws from a single ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`, in this order:
//!
//! 1. filter herald (only when a filter is configured): `u < p_succ` keeps the round;
//! 2. Alice's basis index, then Bob's, each uniform on `{0, 1, 2}`;
//! 3. one uniform `u` selecting the outcome pair by inverse CDF over
//!    `p(0,0), p(0,1), p(1,0), p(1,1)` in that order.
//!
//! A uniform `f64` is `(next_u64() >> 11) · 2⁻⁵³`. A basis index is
//! `x mod 3` for the first `x = next_u64()` below the largest multiple of 3
//! not exceeding `2⁶⁴ − 1` (rejection sampling, no modulo bias).
//!
//! Sifted rounds are those with matching basis indices. The first
//! `⌈test_fraction · sifted⌉` of them are disclosed to estimate the QBER;
//! the rest form the raw keys. Correlators `⟨Aₗ⊗Bₗ⟩` use every sifted round
//! measured in basis pair `(l, l)`.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::families::{make_bell_diagonal, BellDiagonalParams};
use crate::filtering::{apply_local_filters, FilterPair};
use crate::qber::{classify_usefulness, UsefulnessVerdict};
use crate::qstate::{
    bloch_decompose, outcome_distribution_from_bloch, tensor_spectrum, DensityMatrix, MeasurementTriad,
};
use crate::steering::{belldiag_absolutely_chsh_local, cjwr_from_correlators, steering_verdict, SteeringVerdict};

pub const DEFAULT_TEST_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub rounds: u64,
    pub seed: u64,
    pub alice_triad: MeasurementTriad,
    pub bob_triad: MeasurementTriad,
    /// Fraction of sifted rounds disclosed for parameter estimation, in (0, 1).
    pub test_fraction: f64,
    pub filter: Option<FilterPair>,
}

impl ProtocolConfig {
    pub fn new(rounds: u64, seed: u64, alice_triad: MeasurementTriad, bob_triad: MeasurementTriad) -> Self {
        ProtocolConfig {
            rounds,
            seed,
            alice_triad,
            bob_triad,
            test_fraction: DEFAULT_TEST_FRACTION,
            filter: None,
        }
    }

    pub fn with_test_fraction(mut self, f: f64) -> Self {
        self.test_fraction = f;
        self
    }

    pub fn with_filter(mut self, filter: FilterPair) -> Self {
        self.filter = Some(filter);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::DegenerateConfig("rounds must be at least 1"));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::BadParam {
                name: "test_fraction",
                value: self.test_fraction,
            });
        }
        Ok(())
    }
}

/// One protocol round. When `kept` is false the filter failed and the
/// remaining fields are zero. `sifted ⟺ kept ∧ alice_basis = bob_basis`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundRecord {
    pub alice_basis: u8,
    pub bob_basis: u8,
    pub alice_outcome: u8,
    pub bob_outcome: u8,
    pub kept: bool,
    pub sifted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub rounds: u64,
    pub kept_count: u64,
    pub sifted_count: u64,
    pub disclosed_count: u64,
    pub empirical_qber: f64,
    pub empirical_cjwr: f64,
    pub correlators: [f64; 3],
    pub correlator_counts: [u64; 3],
    pub raw_key_alice: Vec<u8>,
    pub raw_key_bob: Vec<u8>,
    /// Fraction of heralded rounds; present only when filtering.
    pub p_succ_empirical: Option<f64>,
}

impl SimulationReport {
    /// Number of positions where the undisclosed raw keys differ.
    pub fn key_mismatches(&self) -> usize {
        self.raw_key_alice
            .iter()
            .zip(&self.raw_key_bob)
            .filter(|(a, b)| a != b)
            .count()
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn basis_index(rng: &mut ChaCha8Rng) -> u8 {
    // 2⁶⁴ − 1 is a multiple of 3, so only u64::MAX itself is rejected.
    const ZONE: u64 = u64::MAX;
    loop {
        let x = rng.next_u64();
        if x < ZONE {
            return (x % 3) as u8;
        }
    }
}

/// Iterator over the rounds of one run. Produced by [`rounds`].
#[derive(Debug, Clone)]
pub struct RoundSampler {
    rng: ChaCha8Rng,
    /// Cumulative outcome probabilities per `(alice_basis, bob_basis)`.
    cdf: [[[f64; 3]; 3]; 3],
    p_succ: Option<f64>,
    remaining: u64,
}

impl Iterator for RoundSampler {
    type Item = RoundRecord;

    fn next(&mut self) -> Option<RoundRecord> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        if let Some(p) = self.p_succ {
            if uniform(&mut self.rng) >= p {
                return Some(RoundRecord {
                    alice_basis: 0,
                    bob_basis: 0,
                    alice_outcome: 0,
                    bob_outcome: 0,
                    kept: false,
                    sifted: false,
                });
            }
        }
        let x = basis_index(&mut self.rng);
        let y = basis_index(&mut self.rng);
        let u = uniform(&mut self.rng);
        let cdf = &self.cdf[x as usize][y as usize];
        let k = cdf.iter().position(|&c| u < c).unwrap_or(3) as u8;
        Some(RoundRecord {
            alice_basis: x,
            bob_basis: y,
            alice_outcome: k >> 1,
            bob_outcome: k & 1,
            kept: true,
            sifted: x == y,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, usize::try_from(self.remaining).ok())
    }
}

/// The measured state (after filtering, if configured) and its success probability.
fn measured_state(rho: &DensityMatrix, cfg: &ProtocolConfig) -> Result<(DensityMatrix, Option<f64>)> {
    match &cfg.filter {
        Some(f) => {
            let out = apply_local_filters(rho, f)?;
            Ok((out.filtered_state, Some(out.p_succ)))
        }
        None => Ok((rho.clone(), None)),
    }
}

/// Round-by-round sampler for `(rho, cfg)`.
pub fn rounds(rho: &DensityMatrix, cfg: &ProtocolConfig) -> Result<RoundSampler> {
    cfg.validate()?;
    let (state, p_succ) = measured_state(rho, cfg)?;
    let bf = bloch_decompose(&state);
    let mut cdf = [[[0.0; 3]; 3]; 3];
    for (x, row) in cdf.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            let p = outcome_distribution_from_bloch(&bf, cfg.alice_triad.dir(x), cfg.bob_triad.dir(y))?;
            let c0 = p[0][0];
            let c1 = c0 + p[0][1];
            let c2 = c1 + p[1][0];
            *cell = [c0, c1, c2];
        }
    }
    Ok(RoundSampler {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        cdf,
        p_succ,
        remaining: cfg.rounds,
    })
}

pub fn run_protocol(rho: &DensityMatrix, cfg: &ProtocolConfig) -> Result<SimulationReport> {
    let sampler = rounds(rho, cfg)?;
    let filtering = sampler.p_succ.is_some();

    let mut kept_count = 0u64;
    let mut sifted: Vec<(u8, u8)> = Vec::new();
    let mut corr_sum = [0i64; 3];
    let mut corr_n = [0u64; 3];
    for r in sampler {
        if !r.kept {
            continue;
        }
        kept_count += 1;
        if r.sifted {
            let l = r.alice_basis as usize;
            corr_n[l] += 1;
            corr_sum[l] += if r.alice_outcome == r.bob_outcome { 1 } else { -1 };
            sifted.push((r.alice_outcome, r.bob_outcome));
        }
    }

    let sifted_count = sifted.len() as u64;
    if sifted_count == 0 {
        return Err(Error::DegenerateConfig("no sifted rounds to disclose"));
    }
    let disclosed = (libm::ceil(cfg.test_fraction * sifted_count as f64) as usize).clamp(1, sifted.len());
    let mismatches = sifted[..disclosed].iter().filter(|(a, b)| a != b).count();
    let correlators: [f64; 3] = core::array::from_fn(|l| {
        if corr_n[l] == 0 {
            0.0
        } else {
            corr_sum[l] as f64 / corr_n[l] as f64
        }
    });
    let (raw_key_alice, raw_key_bob) = sifted[disclosed..].iter().copied().unzip();

    Ok(SimulationReport {
        rounds: cfg.rounds,
        kept_count,
        sifted_count,
        disclosed_count: disclosed as u64,
        empirical_qber: mismatches as f64 / disclosed as f64,
        empirical_cjwr: cjwr_from_correlators(&correlators),
        correlators,
        correlator_counts: corr_n,
        raw_key_alice,
        raw_key_bob,
        p_succ_empirical: filtering.then(|| kept_count as f64 / cfg.rounds as f64),
    })
}

/// Analytic verdicts for a Bell-diagonal source together with a simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct UntrustedSourceDemo {
    pub steering: SteeringVerdict,
    pub usefulness: UsefulnessVerdict,
    pub absolutely_local: bool,
    pub report: SimulationReport,
}

pub fn untrusted_source_demo(w: &BellDiagonalParams, cfg: &ProtocolConfig) -> Result<UntrustedSourceDemo> {
    let rho = make_bell_diagonal(w);
    let spec = tensor_spectrum(&bloch_decompose(&rho));
    Ok(UntrustedSourceDemo {
        steering: steering_verdict(&spec),
        usefulness: classify_usefulness(&spec),
        absolutely_local: belldiag_absolutely_chsh_local(w),
        report: run_protocol(&rho, cfg)?,
    })
}

/// Bell-diagonal grid points (`w₁, w₂, w₃` multiples of `step`) that are
/// absolutely CHSH-local yet useful, in lexicographic order.
pub fn untrusted_source_candidates(step: f64) -> Result<Vec<BellDiagonalParams>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::BadParam {
            name: "step",
            value: step,
        });
    }
    let n = libm::floor(1.0 / step + 1e-9) as usize;
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=(n - i) {
            for k in 0..=(n - i - j) {
                let (w1, w2, w3) = (i as f64 * step, j as f64 * step, k as f64 * step);
                let w4 = (1.0 - w1 - w2 - w3).max(0.0);
                let Ok(p) = BellDiagonalParams::new([w1, w2, w3, w4]) else {
                    continue;
                };
                let spec = tensor_spectrum(&bloch_decompose(&make_bell_diagonal(&p)));
                if belldiag_absolutely_chsh_local(&p) && classify_usefulness(&spec).useful {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}
