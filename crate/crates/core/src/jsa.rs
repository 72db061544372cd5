//! Discretized joint spectral amplitudes and intensities.

use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, RMatrix};
use crate::spectral::{PmfSpec, PulseSpec};

/// Uniform frequency grid shared by the signal and idler axes.
///
/// Bin centers sit at `center + (k - (n - 1)/2) * range / n`, so the grid is
/// symmetric about the center and the bins tile exactly `range`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub n_bins: usize,
    /// Total span of each axis, rad/s.
    pub range: f64,
    pub center_s: f64,
    pub center_i: f64,
    /// Range divided by the mean marginal photon FWHM, when known.
    pub zeta: Option<f64>,
}

impl SpectralGrid {
    pub fn new(n_bins: usize, range: f64, center_s: f64, center_i: f64) -> Result<SpectralGrid> {
        if n_bins < 2 {
            return Err(Error::invalid(format!(
                "grid needs at least 2 bins, got {n_bins}"
            )));
        }
        if !(range > 0.0 && range.is_finite()) {
            return Err(Error::invalid("grid range must be positive"));
        }
        Ok(SpectralGrid {
            n_bins,
            range,
            center_s,
            center_i,
            zeta: None,
        })
    }

    /// Degenerate grid centered at half the pump frequency.
    pub fn degenerate(n_bins: usize, range: f64, pump_center: f64) -> Result<SpectralGrid> {
        Self::new(n_bins, range, 0.5 * pump_center, 0.5 * pump_center)
    }

    /// Grid spanning `zeta` photon bandwidths.
    pub fn with_zeta(
        n_bins: usize,
        zeta: f64,
        photon_fwhm: f64,
        pump_center: f64,
    ) -> Result<SpectralGrid> {
        if !(zeta > 0.0 && photon_fwhm > 0.0) {
            return Err(Error::invalid("zeta and photon bandwidth must be positive"));
        }
        let mut g = Self::degenerate(n_bins, zeta * photon_fwhm, pump_center)?;
        g.zeta = Some(zeta);
        Ok(g)
    }

    pub fn step(&self) -> f64 {
        self.range / self.n_bins as f64
    }

    pub fn bin_area(&self) -> f64 {
        self.step() * self.step()
    }

    /// Bin-center detunings from the axis center.
    pub fn detunings(&self) -> Vec<f64> {
        let half = (self.n_bins as f64 - 1.0) / 2.0;
        let step = self.step();
        (0..self.n_bins).map(|k| (k as f64 - half) * step).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhotonAxis {
    Signal,
    Idler,
}

/// Sampled joint spectral amplitude; rows are signal bins, columns idler bins.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointAmplitude {
    pub grid: SpectralGrid,
    pub values: CMatrix,
    pub normalized: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointIntensity {
    pub grid: SpectralGrid,
    pub values: RMatrix,
}

/// Samples `pef * pmf` on `grid` without normalizing.
pub fn build_jsa_unnormalized(
    pulse: &PulseSpec,
    pmf: &PmfSpec,
    grid: &SpectralGrid,
) -> JointAmplitude {
    let det = grid.detunings();
    let n = grid.n_bins;
    let values = match pmf {
        PmfSpec::Custom(_) => {
            let mut m = pmf.sample(&det, &det);
            m.as_mut_slice()
                .par_chunks_mut(n)
                .enumerate()
                .for_each(|(r, row)| {
                    for (c, v) in row.iter_mut().enumerate() {
                        *v *= pulse.value(det[r], det[c]);
                    }
                });
            m
        }
        _ => {
            let mut data = vec![Complex64::default(); n * n];
            data.par_chunks_mut(n).enumerate().for_each(|(r, row)| {
                for (c, v) in row.iter_mut().enumerate() {
                    *v = pulse.value(det[r], det[c]) * pmf.value(det[r], det[c]);
                }
            });
            CMatrix::from_vec(n, n, data)
        }
    };
    JointAmplitude {
        grid: *grid,
        values,
        normalized: false,
    }
}

/// Samples `pef * pmf` on `grid` and normalizes so that `sum |f|^2 dws dwi = 1`.
pub fn build_jsa(pulse: &PulseSpec, pmf: &PmfSpec, grid: &SpectralGrid) -> Result<JointAmplitude> {
    let mut j = build_jsa_unnormalized(pulse, pmf, grid);
    j.normalize()?;
    Ok(j)
}

impl JointAmplitude {
    pub fn from_values(grid: SpectralGrid, values: CMatrix) -> Result<JointAmplitude> {
        if values.shape() != (grid.n_bins, grid.n_bins) {
            return Err(Error::invalid(format!(
                "matrix shape {:?} does not match a {}-bin grid",
                values.shape(),
                grid.n_bins
            )));
        }
        Ok(JointAmplitude {
            grid,
            values,
            normalized: false,
        })
    }

    /// Discrete L2 norm squared, `sum |f|^2 dws dwi`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.norm_sqr() * self.grid.bin_area()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n2 = self.norm_sqr();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::ZeroMatrix);
        }
        self.values.scale(1.0 / n2.sqrt());
        self.normalized = true;
        Ok(())
    }

    /// Same amplitude scaled so that `sum |f|^2 = 1` with no bin measure.
    pub fn counting_normalized(&self) -> Result<CMatrix> {
        let n2 = self.values.norm_sqr();
        if !(n2 > 0.0) {
            return Err(Error::ZeroMatrix);
        }
        let mut m = self.values.clone();
        m.scale(1.0 / n2.sqrt());
        Ok(m)
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .as_slice()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Marginal spectral intensity along `axis`, integrated over the other axis.
    pub fn marginal(&self, axis: PhotonAxis) -> Vec<f64> {
        self.to_intensity().marginal(axis)
    }

    /// FWHM of the marginal intensity, linearly interpolated between bins.
    pub fn marginal_fwhm(&self, axis: PhotonAxis) -> Result<f64> {
        fwhm_of_samples(&self.marginal(axis), self.grid.step())
    }

    pub fn mean_marginal_fwhm(&self) -> Result<f64> {
        Ok(0.5
            * (self.marginal_fwhm(PhotonAxis::Signal)? + self.marginal_fwhm(PhotonAxis::Idler)?))
    }

    pub fn to_intensity(&self) -> JointIntensity {
        JointIntensity {
            grid: self.grid,
            values: self.values.map(|z| z.norm_sqr()),
        }
    }

    /// Writes the amplitude as CSV. The first row holds idler bin-center
    /// frequencies (each repeated for its re/im column pair), the second row
    /// labels the parts, and every further row starts with the signal
    /// bin-center frequency.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let det = self.grid.detunings();
        let mut head = vec!["omega_s\\omega_i".to_owned()];
        let mut parts = vec!["part".to_owned()];
        for d in &det {
            let f = (self.grid.center_i + d).to_string();
            head.push(f.clone());
            head.push(f);
            parts.push("re".into());
            parts.push("im".into());
        }
        w.write_record(&head)?;
        w.write_record(&parts)?;
        for (r, row) in self.values.rows_iter().enumerate() {
            let mut rec = vec![(self.grid.center_s + det[r]).to_string()];
            for z in row {
                rec.push(z.re.to_string());
                rec.push(z.im.to_string());
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

impl JointIntensity {
    pub fn marginal(&self, axis: PhotonAxis) -> Vec<f64> {
        let n = self.grid.n_bins;
        let dw = self.grid.step();
        match axis {
            PhotonAxis::Signal => self
                .values
                .rows_iter()
                .map(|r| r.iter().sum::<f64>() * dw)
                .collect(),
            PhotonAxis::Idler => (0..n)
                .map(|c| (0..n).map(|r| self.values[(r, c)]).sum::<f64>() * dw)
                .collect(),
        }
    }

    /// Element-wise square root, the magnitude of the underlying amplitude.
    pub fn sqrt(&self) -> RMatrix {
        self.values.sqrt()
    }

    /// Writes the intensity as a single real block: first row idler
    /// frequencies, first column signal frequencies.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let det = self.grid.detunings();
        let mut head = vec!["omega_s\\omega_i".to_owned()];
        head.extend(det.iter().map(|d| (self.grid.center_i + d).to_string()));
        w.write_record(&head)?;
        for (r, row) in self.values.rows_iter().enumerate() {
            let mut rec = vec![(self.grid.center_s + det[r]).to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn to_intensity(j: &JointAmplitude) -> JointIntensity {
    j.to_intensity()
}

/// FWHM of a single-peaked sampled profile with uniform spacing `step`.
pub(crate) fn fwhm_of_samples(samples: &[f64], step: f64) -> Result<f64> {
    let n = samples.len();
    let (peak, &max) = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(Error::ZeroMatrix)?;
    if !(max > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    if peak == 0 || peak == n - 1 {
        return Err(Error::SpectralRangeTooSmall(
            "marginal peaks at the grid edge".into(),
        ));
    }
    let half = 0.5 * max;
    let mut left = None;
    for k in (0..peak).rev() {
        if samples[k] < half {
            let (a, b) = (samples[k], samples[k + 1]);
            left = Some(k as f64 + (half - a) / (b - a));
            break;
        }
    }
    let mut right = None;
    for k in peak + 1..n {
        if samples[k] < half {
            let (a, b) = (samples[k - 1], samples[k]);
            right = Some((k - 1) as f64 + (a - half) / (a - b));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => Ok((r - l) * step),
        _ => Err(Error::SpectralRangeTooSmall(
            "marginal does not fall to half maximum inside the grid".into(),
        )),
    }
}
