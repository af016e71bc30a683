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

//! Random instances for property checks and scans: Haar-like rotations and
//! local unitaries, random mixed states, and uniform simplex points.

use num_complex::Complex64;
use rand_core::RngCore;

use crate::linalg::{ComplexMatrix, Mat3, Vec3};
use crate::qstate::{DensityMatrix, MeasurementTriad};

/// Uniform on `[0, 1)` with 53 random bits.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal via Box–Muller.
pub fn normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

fn unit_quaternion<R: RngCore + ?Sized>(rng: &mut R) -> [f64; 4] {
    loop {
        let q: [f64; 4] = core::array::from_fn(|_| normal(rng));
        let n = libm::sqrt(q.iter().map(|x| x * x).sum());
        if n > 1e-12 {
            return q.map(|x| x / n);
        }
    }
}

/// Uniformly distributed point on the unit sphere.
pub fn unit_vector<R: RngCore + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v: Vec3 = core::array::from_fn(|_| normal(rng));
        let n = crate::linalg::norm(&v);
        if n > 1e-12 {
            return v.map(|x| x / n);
        }
    }
}

/// Haar-random proper rotation from a uniform unit quaternion.
pub fn rotation<R: RngCore + ?Sized>(rng: &mut R) -> Mat3 {
    let [w, x, y, z] = unit_quaternion(rng);
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

/// Random orthonormal triad; half the time left-handed.
pub fn triad<R: RngCore + ?Sized>(rng: &mut R) -> MeasurementTriad {
    let mut r = rotation(rng);
    if rng.next_u32() & 1 == 1 {
        for row in r.iter_mut() {
            row[2] = -row[2];
        }
    }
    MeasurementTriad::from_columns(&r).expect("rotation columns are orthonormal")
}

/// Haar-random element of SU(2).
pub fn su2<R: RngCore + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let [a, b, c, d] = unit_quaternion(rng);
    let alpha = Complex64::new(a, b);
    let beta = Complex64::new(c, d);
    ComplexMatrix::from_vec(2, 2, alloc::vec![alpha, -beta.conj(), beta, alpha.conj()])
}

/// Random full-rank mixed state `GG†/Tr(GG†)` with Gaussian `G`.
pub fn mixed_state<R: RngCore + ?Sized>(rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_vec(
        4,
        4,
        (0..16).map(|_| Complex64::new(normal(rng), normal(rng))).collect(),
    );
    let m = &g * &g.dagger();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr)).expect("Wishart matrix is a state")
}

/// Random pure state.
pub fn pure_state<R: RngCore + ?Sized>(rng: &mut R) -> DensityMatrix {
    let v: [Complex64; 4] = core::array::from_fn(|_| Complex64::new(normal(rng), normal(rng)));
    let n = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
    DensityMatrix::from_pure(&v.map(|z| z / n)).expect("normalised vector")
}

/// Uniform point on the probability simplex with four vertices.
pub fn simplex4<R: RngCore + ?Sized>(rng: &mut R) -> [f64; 4] {
    let e: [f64; 4] = core::array::from_fn(|_| -libm::log(1.0 - uniform(rng)));
    let s: f64 = e.iter().sum();
    let mut w = e.map(|x| x / s);
    w[3] = 1.0 - w[0] - w[1] - w[2];
    w
}
