//! Schmidt decomposition of discretized joint spectra and the purity of the
//! heralded photon.
//!
//! A JSA matrix `F` factors as `F = scale * sum_k b_k q_k r_k^T` with
//! orthonormal signal modes `q_k` (columns of `U`) and idler modes `r_k`
//! (conjugated columns of `V` in `F = U S V^H`). The coefficients are the
//! singular values rescaled so that `sum b_k^2 = 1`, and the heralded purity is
//! `sum b_k^4`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jsa::{JointAmplitude, SpectralGrid};
use crate::linalg::{CMatrix, RMatrix};

/// Coefficients smaller than this fraction of the largest are dropped.
pub const COEFFICIENT_CUTOFF: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtResult {
    /// Normalized Schmidt coefficients, descending.
    pub coefficients: Vec<f64>,
    /// Signal modes as columns, one per retained coefficient.
    pub signal_modes: CMatrix,
    /// Idler modes as columns, one per retained coefficient.
    pub idler_modes: CMatrix,
    pub purity: f64,
    /// Frobenius norm of the decomposed matrix.
    pub scale: f64,
}

impl SchmidtResult {
    pub fn schmidt_number(&self) -> f64 {
        1.0 / self.purity
    }

    /// `scale * sum_k b_k q_k r_k^T`.
    pub fn reconstruct(&self) -> CMatrix {
        let (n, k) = self.signal_modes.shape();
        let m = self.idler_modes.rows();
        CMatrix::from_fn(n, m, |r, c| {
            (0..k)
                .map(|i| {
                    self.coefficients[i] * self.signal_modes[(r, i)] * self.idler_modes[(c, i)]
                })
                .sum::<Complex64>()
                * self.scale
        })
    }
}

/// Normalizes singular values and applies the cutoff.
fn coefficients_from_singular(sv: &[f64]) -> Result<(Vec<f64>, f64)> {
    let total: f64 = sv.iter().map(|s| s * s).sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::ZeroMatrix);
    }
    let largest = sv.iter().copied().fold(0.0, f64::max);
    let norm = total.sqrt();
    let mut coeffs: Vec<f64> = sv
        .iter()
        .filter(|&&s| s > COEFFICIENT_CUTOFF * largest)
        .map(|s| s / norm)
        .collect();
    coeffs.sort_by(|a, b| b.total_cmp(a));
    let purity = coeffs.iter().map(|b| b.powi(4)).sum();
    Ok((coeffs, purity))
}

pub fn schmidt_decompose(matrix: &CMatrix) -> Result<SchmidtResult> {
    let scale = matrix.norm_sqr().sqrt();
    if !(scale > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    let svd = matrix.to_faer().thin_svd().map_err(|_| Error::Svd)?;
    let s = svd.S().column_vector();
    let sv: Vec<f64> = (0..s.nrows()).map(|i| s[i].re).collect();
    let (coefficients, purity) = coefficients_from_singular(&sv)?;
    let k = coefficients.len();
    // faer returns singular values in non-increasing order; keep the leading k.
    let u = svd.U();
    let v = svd.V();
    let signal_modes = CMatrix::from_fn(matrix.rows(), k, |r, c| u[(r, c)]);
    let idler_modes = CMatrix::from_fn(matrix.cols(), k, |r, c| v[(r, c)].conj());
    Ok(SchmidtResult {
        coefficients,
        signal_modes,
        idler_modes,
        purity,
        scale,
    })
}

/// Singular values of a complex matrix. Real-valued input takes the cheaper
/// real decomposition.
pub fn singular_values(matrix: &CMatrix) -> Result<Vec<f64>> {
    if matrix.is_real() {
        return singular_values_real(&matrix.map(|z| z.re));
    }
    matrix.to_faer().singular_values().map_err(|_| Error::Svd)
}

pub fn singular_values_real(matrix: &RMatrix) -> Result<Vec<f64>> {
    matrix.to_faer().singular_values().map_err(|_| Error::Svd)
}

/// Heralded purity `sum b_k^4` from singular values only.
pub fn purity(matrix: &CMatrix) -> Result<f64> {
    Ok(coefficients_from_singular(&singular_values(matrix)?)?.1)
}

/// The purity formula applied to a real matrix standing in for the JSA,
/// typically the JSI or its square root.
pub fn purity_like(matrix: &RMatrix) -> Result<f64> {
    Ok(coefficients_from_singular(&singular_values_real(matrix)?)?.1)
}

/// Reduced density matrix of the heralded signal photon on the grid, with
/// unit trace: `rho = F F^H dws dwi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    pub grid: SpectralGrid,
    pub values: CMatrix,
}

impl DensityMatrix {
    pub fn trace(&self) -> Complex64 {
        (0..self.values.rows()).map(|k| self.values[(k, k)]).sum()
    }

    /// `Tr[rho^2]`, which for Hermitian rho is the sum of `|rho_mn|^2`.
    pub fn purity(&self) -> f64 {
        self.values.norm_sqr()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.values.rows();
        let mut err: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                err = err.max((self.values[(r, c)] - self.values[(c, r)].conj()).norm());
            }
        }
        err
    }
}

pub fn heralded_density(j: &JointAmplitude) -> Result<DensityMatrix> {
    let mut values = j.values.mul_adjoint(&j.values);
    let trace: f64 = (0..values.rows()).map(|k| values[(k, k)].re).sum();
    if !(trace > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    values.scale(1.0 / trace);
    Ok(DensityMatrix {
        grid: j.grid,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn gram_error(m: &CMatrix) -> f64 {
        let k = m.cols();
        let mut err: f64 = 0.0;
        for a in 0..k {
            for b in 0..k {
                let dot: Complex64 = (0..m.rows()).map(|r| m[(r, a)].conj() * m[(r, b)]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                err = err.max((dot - want).norm());
            }
        }
        err
    }

    #[test]
    fn rank_one_is_pure() {
        let q = [1.0, 2.0, -0.5];
        let r = [0.3, -1.0, 2.0, 0.1];
        let m = CMatrix::from_fn(3, 4, |i, j| c(q[i] * r[j]));
        let s = schmidt_decompose(&m).unwrap();
        assert_eq!(s.coefficients.len(), 1);
        assert_relative_eq!(s.coefficients[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.purity, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn scaled_unitary_is_maximally_mixed() {
        let m = CMatrix::from_vec(2, 2, vec![c(0.5), c(0.5), c(0.5), c(-0.5)]);
        let s = schmidt_decompose(&m).unwrap();
        for b in &s.coefficients {
            assert_relative_eq!(*b, 0.5f64.sqrt(), epsilon = 1e-12);
        }
        assert_relative_eq!(s.purity, 0.5, epsilon = 1e-12);
        assert_relative_eq!(purity(&m).unwrap(), 0.5, epsilon = 1e-12);
        // Dropping the sign makes the matrix rank one.
        assert_relative_eq!(purity_like(&m.abs()).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_matrix_is_an_error() {
        assert!(matches!(
            schmidt_decompose(&CMatrix::zeros(3, 3)),
            Err(Error::ZeroMatrix)
        ));
        assert!(matches!(
            purity_like(&RMatrix::zeros(2, 2)),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (rows, cols) in [(6, 6), (9, 5), (40, 40)] {
            let m = random_matrix(&mut rng, rows, cols);
            let s = schmidt_decompose(&m).unwrap();
            let back = s.reconstruct();
            let diff: f64 = m
                .as_slice()
                .iter()
                .zip(back.as_slice())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff / s.scale < 1e-8, "reconstruction error {diff}");
            assert!(gram_error(&s.signal_modes) < 1e-8);
            assert!(gram_error(&s.idler_modes) < 1e-8);
            let total: f64 = s.coefficients.iter().map(|b| b * b).sum();
            assert_relative_eq!(total, 1.0, epsilon = 1e-10);
            let k = s.coefficients.len() as f64;
            assert!(s.purity >= 1.0 / k - 1e-12 && s.purity <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn density_matrix_trace_and_purity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid = SpectralGrid::new(12, 3.0, 1.0, 1.0).unwrap();
        let mut j = JointAmplitude::from_values(grid, random_matrix(&mut rng, 12, 12)).unwrap();
        j.normalize().unwrap();
        let rho = heralded_density(&j).unwrap();
        assert_relative_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
        assert!(rho.trace().im.abs() < 1e-12);
        assert!(rho.hermiticity_error() < 1e-12);
        assert_relative_eq!(rho.purity(), purity(&j.values).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn separable_jsa_gives_projector() {
        let grid = SpectralGrid::new(8, 3.0, 1.0, 1.0).unwrap();
        let m = CMatrix::from_fn(8, 8, |i, j| {
            c((-(i as f64 - 3.5).powi(2)).exp() * (j as f64 + 1.0))
        });
        let mut j = JointAmplitude::from_values(grid, m).unwrap();
        j.normalize().unwrap();
        let rho = heralded_density(&j).unwrap();
        assert_relative_eq!(rho.purity(), 1.0, epsilon = 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn purity_invariances(seed in any::<u64>(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
            prop_assume!(re.abs() + im.abs() > 1e-3);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, 10, 10);
            let p = purity(&m).unwrap();
            let factor = Complex64::new(re, im);
            let scaled = m.map(|z| z * factor);
            prop_assert!((purity(&scaled).unwrap() - p).abs() < 1e-10);
            prop_assert!((purity(&m.transpose()).unwrap() - p).abs() < 1e-10);
            let reversed = CMatrix::from_fn(10, 10, |r, c| m[(9 - r, 9 - c)]);
            prop_assert!((purity(&reversed).unwrap() - p).abs() < 1e-10);
        }
    }
}
