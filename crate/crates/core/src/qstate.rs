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

//! Two-qubit states, their Bloch decomposition and correlation-tensor spectrum,
//! and Born-rule outcome distributions for joint projective measurements.
//!
//! Pauli convention: σ₁ = X, σ₂ = Y, σ₃ = Z in the computational basis, and
//! the two-qubit basis index of `|ab⟩` is `2a + b` (qubit A is the left factor).

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, Mat3, Vec3, DEFAULT_TOL};

/// Tolerance on `|Tr ρ - 1|` and Hermiticity for accepted states.
pub const STATE_TOL: f64 = DEFAULT_TOL;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-9;
/// Hermiticity defect that is treated as rounding noise and symmetrized away.
pub const SYMMETRIZE_TOL: f64 = 1e-8;
/// Tolerance on unit length and orthogonality of measurement directions.
pub const DIRECTION_TOL: f64 = 1e-9;

const PROB_NOISE: f64 = -1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The three Pauli matrices `[X, Y, Z]`.
pub fn paulis() -> [ComplexMatrix; 3] {
    let z0 = c(0.0, 0.0);
    [
        ComplexMatrix::from_vec(2, 2, alloc::vec![z0, c(1.0, 0.0), c(1.0, 0.0), z0]),
        ComplexMatrix::from_vec(2, 2, alloc::vec![z0, c(0.0, -1.0), c(0.0, 1.0), z0]),
        ComplexMatrix::from_vec(2, 2, alloc::vec![c(1.0, 0.0), z0, z0, c(-1.0, 0.0)]),
    ]
}

/// `n·σ⃗` for a real 3-vector.
pub fn pauli_dot(n: &Vec3) -> ComplexMatrix {
    let [x, y, z] = *n;
    ComplexMatrix::from_vec(2, 2, alloc::vec![c(z, 0.0), c(x, -y), c(x, y), c(-z, 0.0)])
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `mat` as a 4×4 density matrix.
    ///
    /// A Hermiticity defect up to [`SYMMETRIZE_TOL`] is treated as input noise
    /// and removed by taking the Hermitian part before the remaining checks.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.rows() != 4 || mat.cols() != 4 {
            return Err(Error::InvalidState("matrix must be 4x4"));
        }
        if mat.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("matrix has non-finite entries"));
        }
        let defect = mat.hermiticity_defect();
        let mat = if defect <= STATE_TOL {
            mat
        } else if defect <= SYMMETRIZE_TOL {
            mat.hermitian_part()
        } else {
            return Err(Error::InvalidState("matrix is not Hermitian"));
        };
        let tr = mat.trace();
        if libm::fabs(tr.re - 1.0) > STATE_TOL || libm::fabs(tr.im) > STATE_TOL {
            return Err(Error::InvalidState("trace is not 1"));
        }
        let min_ev = mat.hermitian_eigenvalues()[0];
        if min_ev < PSD_TOL {
            return Err(Error::InvalidState("matrix is not positive semidefinite"));
        }
        Ok(DensityMatrix { mat })
    }

    /// `|ψ⟩⟨ψ|` for a normalised 4-component state vector.
    pub fn from_pure(psi: &[Complex64; 4]) -> Result<Self> {
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if libm::fabs(n - 1.0) > STATE_TOL {
            return Err(Error::InvalidState("state vector is not normalised"));
        }
        Self::new(ComplexMatrix::projector(psi))
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            mat: ComplexMatrix::identity(4).scale(0.25),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.mat.hermitian_eigenvalues()
    }

    /// `Tr[ρ O]`
    pub fn expectation(&self, op: &ComplexMatrix) -> Complex64 {
        (&self.mat * op).trace()
    }

    pub fn partial_transpose_b(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        out[(2 * a + b, 2 * a2 + b2)] = self.mat[(2 * a + b2, 2 * a2 + b)];
                    }
                }
            }
        }
        out
    }

    /// Positive-partial-transpose test, which for two qubits decides separability.
    pub fn is_ppt(&self) -> bool {
        self.partial_transpose_b().hermitian_eigenvalues()[0] >= PSD_TOL
    }

    /// `(L_a ⊗ L_b) ρ (L_a ⊗ L_b)†` for single-qubit unitaries.
    pub fn local_unitary(&self, la: &ComplexMatrix, lb: &ComplexMatrix) -> Result<Self> {
        let l = la.kron(lb);
        Self::new(&(&l * &self.mat) * &l.dagger())
    }
}

/// Local Bloch vectors and correlation tensor `W` of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochForm {
    pub a_vec: Vec3,
    pub b_vec: Vec3,
    /// `w[j1][j2] = Tr[ρ σ_j1 ⊗ σ_j2]`
    pub w: Mat3,
}

impl BlochForm {
    pub fn new(a_vec: Vec3, b_vec: Vec3, w: Mat3) -> Self {
        BlochForm { a_vec, b_vec, w }
    }

    /// Zero local vectors and the given correlation tensor.
    pub fn from_correlations(w: Mat3) -> Self {
        BlochForm {
            a_vec: [0.0; 3],
            b_vec: [0.0; 3],
            w,
        }
    }
}

/// Singular values of `W` and a signed diagonal form consistent with `det W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorSpectrum {
    /// Descending singular values.
    pub sigma: Vec3,
    /// Diagonal `(t₁₁, t₂₂, t₃₃)` with `|tᵢᵢ|` a permutation of `sigma` and
    /// `sign(t₁₁t₂₂t₃₃) = sign(det W)`.
    pub signed: Vec3,
}

impl TensorSpectrum {
    /// Spectrum of `diag(t)` keeping the given signs and order in `signed`.
    pub fn from_signed_diagonal(t: Vec3) -> Self {
        let mut sigma = t.map(libm::fabs);
        sigma.sort_by(|a, b| b.total_cmp(a));
        TensorSpectrum { sigma, signed: t }
    }

    /// `Σ σᵢ = Σ |tᵢᵢ|`
    pub fn abs_sum(&self) -> f64 {
        self.sigma.iter().sum()
    }

    /// `Σ σᵢ² = Tr(WᵀW)`
    pub fn sum_sq(&self) -> f64 {
        self.sigma.iter().map(|s| s * s).sum()
    }
}

/// Three pairwise orthonormal measurement directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementTriad {
    dirs: [Vec3; 3],
}

impl MeasurementTriad {
    pub fn new(dirs: [Vec3; 3]) -> Result<Self> {
        for d in &dirs {
            check_unit(d)?;
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                if libm::fabs(linalg::dot(&dirs[i], &dirs[j])) > DIRECTION_TOL {
                    return Err(Error::InvalidTriad);
                }
            }
        }
        Ok(MeasurementTriad { dirs })
    }

    /// `(x̂, ŷ, ẑ)`
    pub fn coordinate() -> Self {
        MeasurementTriad {
            dirs: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// `(-x̂, -ŷ, -ẑ)`
    pub fn anti_coordinate() -> Self {
        MeasurementTriad::coordinate().negated()
    }

    /// The columns of an orthogonal matrix.
    pub fn from_columns(m: &Mat3) -> Result<Self> {
        Self::new(core::array::from_fn(|j| [m[0][j], m[1][j], m[2][j]]))
    }

    pub fn negated(&self) -> Self {
        MeasurementTriad {
            dirs: self.dirs.map(|d| linalg::scale3(&d, -1.0)),
        }
    }

    pub fn dirs(&self) -> &[Vec3; 3] {
        &self.dirs
    }

    pub fn dir(&self, i: usize) -> &Vec3 {
        &self.dirs[i]
    }
}

fn check_unit(v: &Vec3) -> Result<()> {
    let n = linalg::norm(v);
    if !n.is_finite() || libm::fabs(n - 1.0) > DIRECTION_TOL {
        return Err(Error::InvalidDirection { norm: n });
    }
    Ok(())
}

pub fn bloch_decompose(rho: &DensityMatrix) -> BlochForm {
    let p = paulis();
    let i2 = ComplexMatrix::identity(2);
    let a_vec: Vec3 = core::array::from_fn(|i| rho.expectation(&p[i].kron(&i2)).re);
    let b_vec: Vec3 = core::array::from_fn(|i| rho.expectation(&i2.kron(&p[i])).re);
    let w: Mat3 = core::array::from_fn(|i| core::array::from_fn(|j| rho.expectation(&p[i].kron(&p[j])).re));
    BlochForm { a_vec, b_vec, w }
}

/// Assembles `ρ = ¼(I⊗I + a⃗·σ⃗⊗I + I⊗b⃗·σ⃗ + Σ wᵢⱼ σᵢ⊗σⱼ)` and validates it.
pub fn reconstruct_state(bf: &BlochForm) -> Result<DensityMatrix> {
    let p = paulis();
    let i2 = ComplexMatrix::identity(2);
    let mut m = ComplexMatrix::identity(4);
    m = &m + &pauli_dot(&bf.a_vec).kron(&i2);
    m = &m + &i2.kron(&pauli_dot(&bf.b_vec));
    for i in 0..3 {
        for j in 0..3 {
            if bf.w[i][j] != 0.0 {
                m = &m + &p[i].kron(&p[j]).scale(bf.w[i][j]);
            }
        }
    }
    let m = m.scale(0.25);
    let min_ev = m.hermitian_eigenvalues()[0];
    if min_ev < PSD_TOL {
        return Err(Error::NotAState { min_eigenvalue: min_ev });
    }
    DensityMatrix::new(m)
}

pub fn tensor_spectrum(bf: &BlochForm) -> TensorSpectrum {
    let sigma = linalg::svd3(&bf.w).sigma;
    let det = linalg::det3(&bf.w);
    let sign = if det < 0.0 { -1.0 } else { 1.0 };
    TensorSpectrum {
        sigma,
        signed: [sigma[0], sigma[1], sign * sigma[2]],
    }
}

/// Born-rule probabilities `p[a][b]` for Alice measuring `u·σ⃗` and Bob `v·σ⃗`,
/// with outcome 0 the +1 eigenvalue.
pub fn joint_outcome_distribution(rho: &DensityMatrix, u: &Vec3, v: &Vec3) -> Result<[[f64; 2]; 2]> {
    check_unit(u)?;
    check_unit(v)?;
    outcome_distribution_from_bloch(&bloch_decompose(rho), u, v)
}

/// Same as [`joint_outcome_distribution`] from a precomputed Bloch form:
/// `p(a,b) = ¼(1 + (-1)ᵃ u·a⃗ + (-1)ᵇ v·b⃗ + (-1)ᵃ⁺ᵇ uᵀWv)`.
pub fn outcome_distribution_from_bloch(bf: &BlochForm, u: &Vec3, v: &Vec3) -> Result<[[f64; 2]; 2]> {
    check_unit(u)?;
    check_unit(v)?;
    let ua = linalg::dot(u, &bf.a_vec);
    let vb = linalg::dot(v, &bf.b_vec);
    let uwv = linalg::bilinear(u, &bf.w, v);
    let mut p = [[0.0; 2]; 2];
    for (a, row) in p.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            let sa = if a == 0 { 1.0 } else { -1.0 };
            let sb = if b == 0 { 1.0 } else { -1.0 };
            let x = 0.25 * (1.0 + sa * ua + sb * vb + sa * sb * uwv);
            if x < PROB_NOISE {
                return Err(Error::InvalidState("negative outcome probability"));
            }
            *cell = x.clamp(0.0, 1.0);
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_werner, WernerParams};
    use core::f64::consts::FRAC_1_SQRT_2;

    fn singlet() -> DensityMatrix {
        let h = FRAC_1_SQRT_2;
        DensityMatrix::from_pure(&[c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]).unwrap()
    }

    fn assert_mat3(w: &Mat3, want: &Mat3, tol: f64) {
        for i in 0..3 {
            for j in 0..3 {
                assert!((w[i][j] - want[i][j]).abs() <= tol, "{w:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn singlet_bloch_form() {
        let bf = bloch_decompose(&singlet());
        assert_eq!(bf.a_vec, [0.0; 3]);
        assert_eq!(bf.b_vec, [0.0; 3]);
        assert_mat3(&bf.w, &linalg::diag3(&[-1.0, -1.0, -1.0]), 1e-12);
    }

    #[test]
    fn maximally_mixed_bloch_form() {
        let bf = bloch_decompose(&DensityMatrix::maximally_mixed());
        assert_eq!(bf, BlochForm::from_correlations([[0.0; 3]; 3]));
    }

    #[test]
    fn werner_bloch_form() {
        let rho = make_werner(&WernerParams::new(0.8).unwrap());
        assert_mat3(&bloch_decompose(&rho).w, &linalg::diag3(&[-0.8; 3]), 1e-12);
    }

    #[test]
    fn reconstruct_singlet_and_mixed() {
        let rho = reconstruct_state(&BlochForm::from_correlations(linalg::diag3(&[-1.0; 3]))).unwrap();
        assert!(rho.matrix().approx_eq(singlet().matrix(), 1e-12));
        let mixed = reconstruct_state(&BlochForm::from_correlations([[0.0; 3]; 3])).unwrap();
        assert!(mixed.matrix().approx_eq(DensityMatrix::maximally_mixed().matrix(), 0.0));
    }

    #[test]
    fn reconstruct_rejects_unphysical_tensor() {
        // diag(1,1,1): the Bell-diagonal weight on the singlet would be -1/2.
        let err = reconstruct_state(&BlochForm::from_correlations(linalg::diag3(&[1.0; 3]))).unwrap_err();
        match err {
            Error::NotAState { min_eigenvalue } => assert!((min_eigenvalue + 0.5).abs() < 1e-12),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn density_matrix_validation() {
        let mut m = ComplexMatrix::identity(4).scale(0.25);
        m[(0, 1)] = c(1e-9, 0.0);
        // small asymmetry is symmetrized
        let rho = DensityMatrix::new(m.clone()).unwrap();
        assert!(rho.matrix().hermiticity_defect() == 0.0);
        m[(0, 1)] = c(1e-3, 0.0);
        assert_eq!(
            DensityMatrix::new(m).unwrap_err(),
            Error::InvalidState("matrix is not Hermitian")
        );
        assert_eq!(
            DensityMatrix::new(ComplexMatrix::identity(4).scale(0.3)).unwrap_err(),
            Error::InvalidState("trace is not 1")
        );
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        let neg = ComplexMatrix::from_real_diagonal(&[0.6, 0.6, 0.6, -0.8]);
        assert_eq!(
            DensityMatrix::new(neg).unwrap_err(),
            Error::InvalidState("matrix is not positive semidefinite")
        );
    }

    #[test]
    fn spectrum_of_singlet() {
        let s = tensor_spectrum(&bloch_decompose(&singlet()));
        for x in s.sigma {
            assert!((x - 1.0).abs() < 1e-12);
        }
        assert!(s.signed.iter().product::<f64>() < 0.0);
    }

    #[test]
    fn spectrum_from_signed_diagonal_keeps_order() {
        let s = TensorSpectrum::from_signed_diagonal([-0.2, 0.9, 0.5]);
        assert_eq!(s.sigma, [0.9, 0.5, 0.2]);
        assert_eq!(s.signed, [-0.2, 0.9, 0.5]);
    }

    #[test]
    fn outcome_distribution_examples() {
        let z = [0.0, 0.0, 1.0];
        let p = joint_outcome_distribution(&singlet(), &z, &z).unwrap();
        assert!(p[0][0].abs() < 1e-12 && p[1][1].abs() < 1e-12);
        assert!((p[0][1] - 0.5).abs() < 1e-12 && (p[1][0] - 0.5).abs() < 1e-12);

        let p = joint_outcome_distribution(&DensityMatrix::maximally_mixed(), &[1.0, 0.0, 0.0], &z).unwrap();
        assert!(p.iter().flatten().all(|x| (x - 0.25).abs() < 1e-15));

        let rho = make_werner(&WernerParams::new(0.8).unwrap());
        let p = joint_outcome_distribution(&rho, &z, &z).unwrap();
        assert!((p[0][0] - 0.05).abs() < 1e-12 && (p[1][1] - 0.05).abs() < 1e-12);
        assert!((p[0][1] - 0.45).abs() < 1e-12 && (p[1][0] - 0.45).abs() < 1e-12);
    }

    #[test]
    fn outcome_distribution_rejects_non_unit() {
        let err = joint_outcome_distribution(&singlet(), &[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidDirection { .. }));
    }

    #[test]
    fn triad_validation() {
        assert!(MeasurementTriad::new([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]).is_err());
        assert!(MeasurementTriad::new([[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).is_err());
        assert!(MeasurementTriad::new([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]]).is_ok());
    }

    #[test]
    fn ppt_distinguishes_singlet_from_mixed() {
        assert!(!singlet().is_ppt());
        assert!(DensityMatrix::maximally_mixed().is_ppt());
        assert!(make_werner(&WernerParams::new(1.0 / 3.0).unwrap()).is_ppt());
        assert!(!make_werner(&WernerParams::new(0.34).unwrap()).is_ppt());
    }
}
