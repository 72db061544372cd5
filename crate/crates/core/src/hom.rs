//! Hong-Ou-Mandel interference between heralded photons from two identical,
//! independent sources.
//!
//! With `rho` the heralded single-photon density matrix on the grid and
//! `D(tau) = diag(exp(i w_m tau))`, the coincidence probability is
//! `P(tau) = (1 - Tr[rho D rho D^H]) / 2`. Because the grid is uniform the
//! trace only depends on the diagonal offsets of `|rho_mn|^2`, which makes each
//! delay an O(N) sum.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jsa::JointAmplitude;
use crate::schmidt::{heralded_density, purity};

/// Fraction of the scan, split over both ends, averaged for the wing level.
pub const WING_FRACTION: f64 = 0.05;
pub const DEFAULT_DELAY_POINTS: usize = 201;
/// Half-width of the default scan in coherence times `1 / FWHM`.
pub const DEFAULT_DELAY_SPAN: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomPattern {
    pub delays: Vec<f64>,
    pub coincidence_prob: Vec<f64>,
    pub n_min: f64,
    pub n_max: f64,
    pub visibility: f64,
}

impl HomPattern {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["delay_s", "coincidence_prob"])?;
        for (t, p) in self.delays.iter().zip(&self.coincidence_prob) {
            w.write_record([format!("{t:.9e}"), format!("{p:.12e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// 201 delays spanning +-10 coherence times of the mean marginal bandwidth.
pub fn default_delays(j: &JointAmplitude) -> Result<Vec<f64>> {
    let fwhm = j.mean_marginal_fwhm()?;
    let span = DEFAULT_DELAY_SPAN / fwhm;
    let n = DEFAULT_DELAY_POINTS;
    Ok((0..n)
        .map(|k| -span + 2.0 * span * k as f64 / (n - 1) as f64)
        .collect())
}

fn check_normalized(j: &JointAmplitude) -> Result<()> {
    let n2 = j.norm_sqr();
    if !j.normalized || (n2 - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(n2.sqrt()));
    }
    Ok(())
}

pub fn hom_pattern(j: &JointAmplitude, delays: &[f64]) -> Result<HomPattern> {
    check_normalized(j)?;
    if delays.is_empty() {
        return Err(Error::invalid("delay scan is empty"));
    }
    let rho = heralded_density(j)?.values;
    let n = rho.rows();
    // offsets[d] = sum over n - m = d of |rho_mn|^2; symmetric in d.
    let offsets: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|d| (0..n - d).map(|m| rho[(m, m + d)].norm_sqr()).sum())
        .collect();
    let step = j.grid.step();
    let coincidence_prob: Vec<f64> = delays
        .par_iter()
        .map(|&tau| {
            let overlap = offsets[0]
                + 2.0
                    * offsets[1..]
                        .iter()
                        .enumerate()
                        .map(|(k, s)| s * ((k + 1) as f64 * step * tau).cos())
                        .sum::<f64>();
            0.5 * (1.0 - overlap)
        })
        .collect();

    let n_min = 0.5 * (1.0 - offsets[0] - 2.0 * offsets[1..].iter().sum::<f64>());
    let n_max = wing_level(delays, &coincidence_prob);
    if !(n_max > 0.0) {
        return Err(Error::Degenerate("coincidence wing level is zero".into()));
    }
    Ok(HomPattern {
        delays: delays.to_vec(),
        coincidence_prob,
        n_min,
        n_max,
        visibility: 1.0 - n_min / n_max,
    })
}

/// Mean of the outermost points, half from each end of the scan.
fn wing_level(delays: &[f64], prob: &[f64]) -> f64 {
    let mut order: Vec<usize> = (0..delays.len()).collect();
    order.sort_by(|&a, &b| delays[a].total_cmp(&delays[b]));
    let per_side = ((WING_FRACTION * delays.len() as f64 / 2.0).round() as usize).max(1);
    let per_side = per_side.min(delays.len().div_ceil(2));
    let mut picked: Vec<usize> = order[..per_side].to_vec();
    picked.extend_from_slice(&order[delays.len() - per_side..]);
    picked.sort_unstable();
    picked.dedup();
    picked.iter().map(|&k| prob[k]).sum::<f64>() / picked.len() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VisibilityCheck {
    pub visibility: f64,
    pub purity: f64,
    pub difference: f64,
}

/// Visibility on the default delay scan next to the Schmidt purity.
pub fn visibility_check(j: &JointAmplitude) -> Result<VisibilityCheck> {
    let pattern = hom_pattern(j, &default_delays(j)?)?;
    let p = purity(&j.values)?;
    Ok(VisibilityCheck {
        visibility: pattern.visibility,
        purity: p,
        difference: (pattern.visibility - p).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jsa::{build_jsa, SpectralGrid};
    use crate::linalg::CMatrix;
    use crate::spectral::{PmfSpec, PulseSpec};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn gaussian_jsa(kw2: f64, n: usize) -> JointAmplitude {
        let pulse = PulseSpec::gaussian(1.0, 10.0)
            .unwrap()
            .with_chirp(kw2)
            .unwrap();
        let pmf = PmfSpec::gaussian_symmetric(1.0).unwrap();
        let grid = SpectralGrid::degenerate(n, 16.0, 10.0).unwrap();
        build_jsa(&pulse, &pmf, &grid).unwrap()
    }

    /// Direct trace with explicit matrices, for comparison with the offset sums.
    fn brute_force(j: &JointAmplitude, tau: f64) -> f64 {
        let rho = heralded_density(j).unwrap().values;
        let det = j.grid.detunings();
        let n = rho.rows();
        let mut t = Complex64::new(0.0, 0.0);
        for m in 0..n {
            for k in 0..n {
                let phase = Complex64::from_polar(1.0, (det[k] - det[m]) * tau);
                t += rho[(m, k)] * rho[(k, m)] * phase;
            }
        }
        0.5 * (1.0 - t.re)
    }

    #[test]
    fn separable_source_gives_full_dip() {
        let j = gaussian_jsa(0.0, 120);
        let pattern = hom_pattern(&j, &default_delays(&j).unwrap()).unwrap();
        assert_relative_eq!(pattern.visibility, 1.0, epsilon = 1e-6);
        assert!(pattern.n_min.abs() < 1e-9);
        assert_relative_eq!(pattern.n_max, 0.5, epsilon = 1e-3);
        assert_relative_eq!(pattern.coincidence_prob[0], 0.5, epsilon = 1e-3);
        assert_relative_eq!(
            *pattern.coincidence_prob.last().unwrap(),
            0.5,
            epsilon = 1e-3
        );
    }

    #[test]
    fn offset_sums_match_explicit_trace() {
        let j = gaussian_jsa(1.5, 40);
        let delays = [-2.0, -0.3, 0.0, 0.7, 3.1];
        let p = hom_pattern(&j, &delays).unwrap();
        for (k, &tau) in delays.iter().enumerate() {
            assert_relative_eq!(p.coincidence_prob[k], brute_force(&j, tau), epsilon = 1e-12);
        }
    }

    #[test]
    fn symmetric_in_delay() {
        let j = gaussian_jsa(2.0, 60);
        let d = default_delays(&j).unwrap();
        let p = hom_pattern(&j, &d).unwrap();
        let n = d.len();
        for k in 0..n {
            assert_relative_eq!(
                p.coincidence_prob[k],
                p.coincidence_prob[n - 1 - k],
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn visibility_equals_purity_for_chirped_gaussians() {
        let j = gaussian_jsa(2.0, 200);
        let v = visibility_check(&j).unwrap();
        assert!(v.difference < 1e-3, "{v:?}");
        assert!(v.purity < 0.95);
    }

    #[test]
    fn two_mode_toy_is_half_mixed() {
        let grid = SpectralGrid::new(2, 2.0, 5.0, 5.0).unwrap();
        let c = |x: f64| Complex64::new(x, 0.0);
        let values = CMatrix::from_vec(2, 2, vec![c(0.5), c(0.5), c(0.5), c(-0.5)]);
        let mut j = JointAmplitude::from_values(grid, values).unwrap();
        j.normalize().unwrap();
        // Wing level of a two-bin comb is not 1/2, so compare the dip depth only.
        let p = hom_pattern(&j, &[0.0]).unwrap();
        assert_relative_eq!(p.n_min, 0.25, epsilon = 1e-12);
        assert_relative_eq!(purity(&j.values).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn rejects_unnormalized_input() {
        let grid = SpectralGrid::new(4, 2.0, 5.0, 5.0).unwrap();
        let j = JointAmplitude::from_values(
            grid,
            CMatrix::from_fn(4, 4, |_, _| Complex64::new(3.0, 0.0)),
        )
        .unwrap();
        assert!(matches!(
            hom_pattern(&j, &[0.0]),
            Err(Error::NotNormalized(_))
        ));
    }
}
