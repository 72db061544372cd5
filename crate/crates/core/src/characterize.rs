//! Purity studies over the analytic source models: width-ratio and chirp
//! sweeps, spectral range and resolution scans, Poissonian counting noise on
//! measured intensities, and fabrication errors in poled crystals.
//!
//! Analytic models are evaluated in units where the pump's Gaussian-equivalent
//! spectral width is 1. Grids are sized by `zeta`, the spectral range in units
//! of the marginal photon intensity FWHM.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{crystal_length_for_pulse, GroupData};
use crate::error::{Error, Result};
use crate::jsa::{build_jsa, JointAmplitude, JointIntensity, SpectralGrid};
use crate::linalg::RMatrix;
use crate::poling::{
    inject_missed_domains_with, inject_overpoling, inject_wall_jitter_with, DomainStructure,
    PolingMethod, QpmConfig,
};
use crate::schmidt::{purity, purity_like};
use crate::spectral::{optimal_xi, PefShape, PmfShape, PmfSpec, PulseSpec, WidthParam};

/// Pump center used by the normalized models. Only labels the grid.
pub const MODEL_PUMP_CENTER: f64 = 100.0;
/// Converged grid used when none is given.
pub const DEFAULT_ZETA: f64 = 40.0;
pub const DEFAULT_BINS: usize = 400;
/// High-accuracy reference grid and its cheaper stand-in.
pub const REFERENCE_GRID: (f64, usize) = (630.0, 3000);
pub const FAST_REFERENCE_GRID: (f64, usize) = (100.0, 1000);

pub const XI_SEARCH_BRACKET: (f64, f64) = (0.5, 2.5);
pub const XI_TOLERANCE: f64 = 1e-3;

/// Symmetric group-velocity-matched source with analytic PEF and PMF.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub pef: PefShape,
    pub pmf: PmfShape,
    pub xi: f64,
    pub kw2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PurityPoint {
    pub purity: f64,
    pub purity_like_jsi: f64,
    pub purity_like_sqrt_jsi: f64,
}

impl Model {
    pub fn new(pef: PefShape, pmf: PmfShape, xi: f64) -> Model {
        Model {
            pef,
            pmf,
            xi,
            kw2: 0.0,
        }
    }

    /// The model at its tabulated separability-optimal `xi`.
    pub fn optimal(pef: PefShape, pmf: PmfShape) -> Model {
        Self::new(pef, pmf, optimal_xi(pef, pmf))
    }

    pub fn with_xi(self, xi: f64) -> Model {
        Model { xi, ..self }
    }

    pub fn with_chirp(self, kw2: f64) -> Model {
        Model { kw2, ..self }
    }

    pub fn pulse(&self) -> Result<PulseSpec> {
        let width = WidthParam::GaussianSigma(1.0)
            .convert(self.pef.family())
            .value();
        PulseSpec::new(self.pef, width, MODEL_PUMP_CENTER)?.with_chirp(self.kw2)
    }

    pub fn pmf_spec(&self) -> Result<PmfSpec> {
        PmfSpec::from_xi(self.pmf, self.xi, &self.pulse()?)
    }

    /// FWHM of the marginal photon intensity, from quadrature of the
    /// continuous model rather than from a grid.
    pub fn marginal_fwhm(&self) -> Result<f64> {
        let pulse = self.pulse()?;
        let pmf = self.pmf_spec()?;
        let w = pulse.amplitude_fwhm();
        let points = 4001;
        let span = 20.0 * w;
        let du = 2.0 * span / (points - 1) as f64;
        let pump: Vec<(f64, f64)> = (0..points)
            .map(|k| {
                let u = -span + k as f64 * du;
                (u, pulse.envelope(u).powi(2))
            })
            .collect();
        let marginal = |ws: f64| -> f64 {
            pump.iter()
                .map(|&(u, a2)| a2 * pmf.value(ws, u - ws).norm_sqr())
                .sum::<f64>()
                * du
        };
        let half = 0.5 * marginal(0.0);
        if !(half > 0.0) {
            return Err(Error::ZeroMatrix);
        }
        let step = 0.02 * w;
        let mut hi = step;
        while marginal(hi) >= half {
            hi += step;
            if hi > span {
                return Err(Error::Degenerate(
                    "marginal does not fall to half maximum".into(),
                ));
            }
        }
        let mut lo = hi - step;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if marginal(mid) >= half {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo + hi)
    }

    pub fn grid(&self, zeta: f64, n_bins: usize) -> Result<SpectralGrid> {
        SpectralGrid::with_zeta(n_bins, zeta, self.marginal_fwhm()?, MODEL_PUMP_CENTER)
    }

    pub fn jsa(&self, zeta: f64, n_bins: usize) -> Result<JointAmplitude> {
        build_jsa(&self.pulse()?, &self.pmf_spec()?, &self.grid(zeta, n_bins)?)
    }

    pub fn purity(&self, zeta: f64, n_bins: usize) -> Result<f64> {
        purity(&self.jsa(zeta, n_bins)?.values)
    }

    /// Purity and both intensity-based stand-ins on one grid.
    pub fn evaluate(&self, zeta: f64, n_bins: usize) -> Result<PurityPoint> {
        evaluate_jsa(&self.jsa(zeta, n_bins)?)
    }
}

pub fn evaluate_jsa(j: &JointAmplitude) -> Result<PurityPoint> {
    let jsi = j.to_intensity();
    Ok(PurityPoint {
        purity: purity(&j.values)?,
        purity_like_jsi: purity_like(&jsi.values)?,
        purity_like_sqrt_jsi: purity_like(&jsi.sqrt())?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiOptimum {
    pub xi: f64,
    pub purity: f64,
}

/// Golden-section search for the purity-maximizing `xi` over
/// [`XI_SEARCH_BRACKET`].
pub fn optimize_xi(pef: PefShape, pmf: PmfShape, zeta: f64, n_bins: usize) -> Result<XiOptimum> {
    let model = Model::new(pef, pmf, 1.0);
    let f = |xi: f64| model.with_xi(xi).purity(zeta, n_bins);
    golden_maximize(f, XI_SEARCH_BRACKET.0, XI_SEARCH_BRACKET.1, XI_TOLERANCE)
        .map(|(xi, purity)| XiOptimum { xi, purity })
}

fn golden_maximize(
    f: impl Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (fa, fb) = (f(a)?, f(b)?);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    if fc.max(fd) <= fa.max(fb) {
        return Err(Error::Bracket(format!(
            "interior values {fc:.6}, {fd:.6} do not exceed the endpoints {fa:.6}, {fb:.6} on [{a}, {b}]"
        )));
    }
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

/// Provenance written next to every sweep.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub model: Option<Model>,
    pub zeta: Option<f64>,
    pub n_bins: Option<usize>,
    pub seed: Option<u64>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: String,
    pub values: Vec<f64>,
    pub points: Vec<PurityPoint>,
    pub meta: SweepMeta,
}

impl SweepResult {
    pub fn purities(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.purity).collect()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record([
            self.axis.as_str(),
            "purity",
            "purity_like_jsi",
            "purity_like_sqrt_jsi",
        ])?;
        for (v, p) in self.values.iter().zip(&self.points) {
            w.write_record([
                fmt_num(*v),
                fmt_num(p.purity),
                fmt_num(p.purity_like_jsi),
                fmt_num(p.purity_like_sqrt_jsi),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

/// Fixed-precision text used in every CSV so reruns are byte-identical.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.10e}")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn sweep(
    axis: &str,
    values: &[f64],
    meta: SweepMeta,
    eval: impl Fn(f64) -> Result<PurityPoint> + Sync,
) -> Result<SweepResult> {
    let points = values
        .par_iter()
        .map(|&v| eval(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        axis: axis.to_owned(),
        values: values.to_vec(),
        points,
        meta,
    })
}

pub fn sweep_xi(model: Model, xi_values: &[f64], zeta: f64, n_bins: usize) -> Result<SweepResult> {
    let meta = SweepMeta {
        model: Some(model),
        zeta: Some(zeta),
        n_bins: Some(n_bins),
        ..Default::default()
    };
    sweep("xi", xi_values, meta, |xi| {
        model.with_xi(xi).evaluate(zeta, n_bins)
    })
}

/// Purity against chirp, each shape pair at its tabulated optimal `xi`.
pub fn sweep_chirp(
    pef: PefShape,
    pmf: PmfShape,
    kw2_values: &[f64],
    zeta: f64,
    n_bins: usize,
) -> Result<SweepResult> {
    let model = Model::optimal(pef, pmf);
    let meta = SweepMeta {
        model: Some(model),
        zeta: Some(zeta),
        n_bins: Some(n_bins),
        ..Default::default()
    };
    sweep("kw2", kw2_values, meta, |k| {
        model.with_chirp(k).evaluate(zeta, n_bins)
    })
}

pub fn sweep_spectral_range(
    model: Model,
    zeta_values: &[f64],
    n_bins: usize,
) -> Result<SweepResult> {
    let meta = SweepMeta {
        model: Some(model),
        n_bins: Some(n_bins),
        ..Default::default()
    };
    sweep("zeta", zeta_values, meta, |z| model.evaluate(z, n_bins))
}

pub fn sweep_resolution(model: Model, n_values: &[usize], zeta: f64) -> Result<SweepResult> {
    let meta = SweepMeta {
        model: Some(model),
        zeta: Some(zeta),
        ..Default::default()
    };
    let values: Vec<f64> = n_values.iter().map(|&n| n as f64).collect();
    sweep("n_bins", &values, meta, |n| {
        model.evaluate(zeta, n as usize)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PurityMap {
    pub model: Model,
    pub zeta: Vec<f64>,
    pub n_bins: Vec<usize>,
    /// `purity[i][j]` at `n_bins[i]`, `zeta[j]`.
    pub purity: Vec<Vec<f64>>,
}

impl PurityMap {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["n_bins", "zeta", "purity"])?;
        for (i, n) in self.n_bins.iter().enumerate() {
            for (j, z) in self.zeta.iter().enumerate() {
                w.write_record([n.to_string(), fmt_num(*z), fmt_num(self.purity[i][j])])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub fn purity_map(model: Model, zeta_values: &[f64], n_values: &[usize]) -> Result<PurityMap> {
    let cells: Vec<(usize, f64)> = n_values
        .iter()
        .flat_map(|&n| zeta_values.iter().map(move |&z| (n, z)))
        .collect();
    let fwhm = model.marginal_fwhm()?;
    let (pulse, pmf) = (model.pulse()?, model.pmf_spec()?);
    // Largest grids first so the pool is not left waiting on one straggler.
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by_key(|&k| std::cmp::Reverse(cells[k].0));
    let mut values = vec![0.0; cells.len()];
    let computed = order
        .par_iter()
        .map(|&k| {
            let (n, z) = cells[k];
            let grid = SpectralGrid::with_zeta(n, z, fwhm, MODEL_PUMP_CENTER)?;
            Ok((k, purity(&build_jsa(&pulse, &pmf, &grid)?.values)?))
        })
        .collect::<Result<Vec<_>>>()?;
    for (k, p) in computed {
        values[k] = p;
    }
    let purity = values
        .chunks(zeta_values.len())
        .map(<[f64]>::to_vec)
        .collect();
    Ok(PurityMap {
        model,
        zeta: zeta_values.to_vec(),
        n_bins: n_values.to_vec(),
        purity,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferencePurity {
    pub zeta: f64,
    pub n_bins: usize,
    pub purity: f64,
}

fn reference_cache() -> &'static Mutex<HashMap<String, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<String, f64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Purity on the high-accuracy grid, or the cheaper one when `fast`.
/// Computed at most once per process for each model and grid.
pub fn reference_purity(model: Model, fast: bool) -> Result<ReferencePurity> {
    let (zeta, n_bins) = if fast {
        FAST_REFERENCE_GRID
    } else {
        REFERENCE_GRID
    };
    let key = format!("{model:?}/{zeta}/{n_bins}");
    if let Some(&p) = reference_cache().lock().expect("cache poisoned").get(&key) {
        return Ok(ReferencePurity {
            zeta,
            n_bins,
            purity: p,
        });
    }
    let p = model.purity(zeta, n_bins)?;
    reference_cache()
        .lock()
        .expect("cache poisoned")
        .insert(key, p);
    Ok(ReferencePurity {
        zeta,
        n_bins,
        purity: p,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingPoint {
    /// Mean counts in the brightest bin.
    pub max_counts: f64,
    /// Mean counts summed over all bins.
    pub expected_total_counts: f64,
    pub mean: f64,
    pub std: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingStudy {
    /// `purity_like` of the noiseless square-root intensity.
    pub deterministic: f64,
    pub points: Vec<CountingPoint>,
    pub seed: u64,
}

impl CountingStudy {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record([
            "max_counts",
            "expected_total_counts",
            "mean",
            "std",
            "trials",
            "deterministic",
        ])?;
        for p in &self.points {
            w.write_record([
                fmt_num(p.max_counts),
                fmt_num(p.expected_total_counts),
                fmt_num(p.mean),
                fmt_num(p.std),
                p.trials.to_string(),
                fmt_num(self.deterministic),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// RNG for one work item: the master seed with a stream per item, so results
/// do not depend on scheduling.
pub fn item_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Purity-like parameter of `sqrt(counts)` with Poissonian counts whose mean
/// in the brightest bin is `max_counts`.
pub fn jsi_counting_montecarlo(
    jsi: &JointIntensity,
    max_counts_values: &[f64],
    trials: usize,
    seed: u64,
) -> Result<CountingStudy> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    if let Some(m) = max_counts_values
        .iter()
        .find(|&&m| !(m >= 1.0 && m.is_finite()))
    {
        return Err(Error::invalid(format!(
            "max counts must be at least 1, got {m}"
        )));
    }
    let peak = jsi.values.as_slice().iter().copied().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    let total: f64 = jsi.values.as_slice().iter().sum::<f64>() / peak;
    let deterministic = purity_like(&jsi.sqrt())?;
    let (rows, cols) = jsi.values.shape();
    let mut points = Vec::with_capacity(max_counts_values.len());
    for (ip, &max_counts) in max_counts_values.iter().enumerate() {
        let means: Vec<f64> = jsi
            .values
            .as_slice()
            .iter()
            .map(|v| max_counts * v / peak)
            .collect();
        let samples = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = item_rng(seed, ((ip as u64) << 32) | t as u64);
                let counts: Vec<f64> = means
                    .iter()
                    .map(|&lambda| {
                        if lambda > 0.0 {
                            Poisson::new(lambda)
                                .expect("positive mean")
                                .sample(&mut rng)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                purity_like(&RMatrix::from_vec(rows, cols, counts).sqrt())
            })
            .collect::<Result<Vec<f64>>>()?;
        let (mean, std) = mean_std(&samples);
        points.push(CountingPoint {
            max_counts,
            expected_total_counts: max_counts * total,
            mean,
            std,
            trials,
        });
    }
    Ok(CountingStudy {
        deterministic,
        points,
        seed,
    })
}

/// Mean and sample standard deviation.
pub fn mean_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (mean, 0.0);
    }
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Imperfection {
    /// Level is the fractional growth of inverted segments.
    OverPoling,
    /// Level is the wall displacement standard deviation in units of `l_c`.
    WallJitter,
    /// Level is the fraction of inverted domains left unpoled.
    MissedDomains,
}

impl std::str::FromStr for Imperfection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "over-poling" | "overpoling" => Ok(Imperfection::OverPoling),
            "wall-jitter" | "jitter" => Ok(Imperfection::WallJitter),
            "missed-domains" | "missed" => Ok(Imperfection::MissedDomains),
            other => Err(Error::invalid(format!("unknown imperfection '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImperfectionPoint {
    pub method: PolingMethod,
    pub level: f64,
    pub purity_mean: f64,
    pub purity_std: f64,
    /// Peak |JSA| relative to the unperturbed periodic crystal.
    pub amplitude_mean: f64,
    pub amplitude_std: f64,
    pub clamp_events: usize,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolingStudy {
    pub kind: Imperfection,
    pub seed: u64,
    pub points: Vec<ImperfectionPoint>,
}

impl PolingStudy {
    pub fn point(&self, method: PolingMethod, level: f64) -> Option<&ImperfectionPoint> {
        self.points
            .iter()
            .find(|p| p.method == method && (p.level - level).abs() < 1e-12)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record([
            "method",
            "level",
            "purity_mean",
            "purity_std",
            "amplitude_mean",
            "amplitude_std",
            "clamp_events",
            "trials",
        ])?;
        for p in &self.points {
            w.write_record([
                p.method.to_string(),
                fmt_num(p.level),
                fmt_num(p.purity_mean),
                fmt_num(p.purity_std),
                fmt_num(p.amplitude_mean),
                fmt_num(p.amplitude_std),
                p.clamp_events.to_string(),
                p.trials.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Monte Carlo of one fabrication error over several crystals. Over-poling is
/// deterministic and runs a single trial per level.
pub fn poling_errors(
    config: &QpmConfig,
    structures: &[DomainStructure],
    kind: Imperfection,
    levels: &[f64],
    trials: usize,
    seed: u64,
) -> Result<PolingStudy> {
    if structures.is_empty() {
        return Err(Error::invalid("no structures to perturb"));
    }
    let reference = structures
        .iter()
        .find(|s| s.method() == PolingMethod::Periodic)
        .unwrap_or(&structures[0]);
    let reference_peak = config.peak_amplitude(reference);
    if !(reference_peak > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    let trials = if kind == Imperfection::OverPoling {
        1
    } else {
        trials.max(1)
    };
    let mut items = Vec::new();
    for (is, _) in structures.iter().enumerate() {
        for (il, _) in levels.iter().enumerate() {
            for t in 0..trials {
                items.push((is, il, t));
            }
        }
    }
    let results = items
        .par_iter()
        .map(|&(is, il, t)| {
            let base = &structures[is];
            let level = levels[il];
            let stream = (((is as u64) << 16 | il as u64) << 32) | t as u64;
            let mut rng = item_rng(seed, stream);
            let (perturbed, clamps) = match kind {
                Imperfection::OverPoling => (inject_overpoling(base, level)?, 0),
                Imperfection::WallJitter => {
                    let j =
                        inject_wall_jitter_with(base, level * base.coherence_length(), &mut rng)?;
                    (j.structure, j.clamp_events)
                }
                Imperfection::MissedDomains => {
                    (inject_missed_domains_with(base, level, &mut rng)?, 0)
                }
            };
            let p = config.purity(&perturbed)?;
            let a = config.peak_amplitude(&perturbed) / reference_peak;
            Ok((p, a, clamps))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut points = Vec::new();
    for (is, s) in structures.iter().enumerate() {
        for (il, &level) in levels.iter().enumerate() {
            let start = (is * levels.len() + il) * trials;
            let chunk = &results[start..start + trials];
            let ps: Vec<f64> = chunk.iter().map(|r| r.0).collect();
            let amps: Vec<f64> = chunk.iter().map(|r| r.1).collect();
            let (purity_mean, purity_std) = mean_std(&ps);
            let (amplitude_mean, amplitude_std) = mean_std(&amps);
            points.push(ImperfectionPoint {
                method: s.method(),
                level,
                purity_mean,
                purity_std,
                amplitude_mean,
                amplitude_std,
                clamp_events: chunk.iter().map(|r| r.2).sum(),
                trials,
            });
        }
    }
    Ok(PolingStudy { kind, seed, points })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrystalLengthPoint {
    pub duration: f64,
    pub length: f64,
}

/// Separability-optimal crystal length against pump intensity FWHM for a sinc
/// phase-matched crystal.
pub fn crystal_length_curve(
    pef: PefShape,
    group: &GroupData,
    durations: &[f64],
) -> Result<Vec<CrystalLengthPoint>> {
    durations
        .iter()
        .map(|&duration| {
            Ok(CrystalLengthPoint {
                duration,
                length: crystal_length_for_pulse(duration, pef, PmfShape::Sinc, group)?,
            })
        })
        .collect()
}

/// Every PEF/PMF pair in table order.
pub const SHAPE_PAIRS: [(PefShape, PmfShape); 4] = [
    (PefShape::Gaussian, PmfShape::Gaussian),
    (PefShape::Sech, PmfShape::Gaussian),
    (PefShape::Gaussian, PmfShape::Sinc),
    (PefShape::Sech, PmfShape::Sinc),
];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn marginal_fwhm_matches_quadrature_oracle() {
        // Independent 2D quadrature of the continuous models.
        let cases = [
            (PefShape::Sech, PmfShape::Sinc, 1.0, 1.1879),
            (PefShape::Sech, PmfShape::Sinc, 1.26, 1.3595),
            (PefShape::Gaussian, PmfShape::Sinc, 1.13, 1.2451),
            (PefShape::Gaussian, PmfShape::Sinc, 1.26, 1.3297),
        ];
        for (pef, pmf, xi, want) in cases {
            let got = Model::new(pef, pmf, xi).marginal_fwhm().unwrap();
            assert_relative_eq!(got, want, max_relative = 2e-3);
        }
        // Gaussian x Gaussian at xi = 1 factorizes into exp(-2 ws^2 - 2 wi^2).
        let gg = Model::new(PefShape::Gaussian, PmfShape::Gaussian, 1.0)
            .marginal_fwhm()
            .unwrap();
        assert_relative_eq!(gg, (2.0 * 2f64.ln()).sqrt(), max_relative = 1e-6);
    }

    #[test]
    fn gaussian_pair_is_separable_at_unit_xi() {
        let p = Model::new(PefShape::Gaussian, PmfShape::Gaussian, 1.0)
            .evaluate(20.0, 120)
            .unwrap();
        assert_relative_eq!(p.purity, 1.0, epsilon = 1e-9);
        assert_relative_eq!(p.purity_like_jsi, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn golden_search_finds_parabola_peak() {
        let (x, fx) = golden_maximize(|x| Ok(1.0 - (x - 1.234).powi(2)), 0.5, 2.5, 1e-6).unwrap();
        assert_relative_eq!(x, 1.234, epsilon = 1e-5);
        assert_relative_eq!(fx, 1.0, epsilon = 1e-9);
        assert!(matches!(
            golden_maximize(|x| Ok(x), 0.0, 1.0, 1e-3),
            Err(Error::Bracket(_))
        ));
    }

    #[test]
    fn counting_rejects_bad_input() {
        let j = Model::optimal(PefShape::Sech, PmfShape::Sinc)
            .jsa(10.0, 20)
            .unwrap();
        let jsi = j.to_intensity();
        assert!(jsi_counting_montecarlo(&jsi, &[0.5], 10, 1).is_err());
        assert!(jsi_counting_montecarlo(&jsi, &[10.0], 0, 1).is_err());
    }

    #[test]
    fn counting_is_seed_deterministic() {
        let jsi = Model::optimal(PefShape::Sech, PmfShape::Sinc)
            .jsa(10.0, 30)
            .unwrap()
            .to_intensity();
        let a = jsi_counting_montecarlo(&jsi, &[5.0, 50.0], 40, 17).unwrap();
        let b = jsi_counting_montecarlo(&jsi, &[5.0, 50.0], 40, 17).unwrap();
        let c = jsi_counting_montecarlo(&jsi, &[5.0, 50.0], 40, 18).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.points[0].mean, c.points[0].mean);
    }

    #[test]
    fn mean_std_small_cases() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_relative_eq!(m, 2.5);
        assert_relative_eq!(s, (5.0f64 / 3.0).sqrt());
    }

    #[test]
    fn sweep_csv_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let model = Model::optimal(PefShape::Gaussian, PmfShape::Sinc);
        let run = |name: &str| {
            let s = sweep_xi(model, &[0.8, 1.13, 1.5], 20.0, 60).unwrap();
            let path = dir.path().join(name);
            s.write_csv(&path).unwrap();
            std::fs::read(path).unwrap()
        };
        let a = run("a.csv");
        assert_eq!(a, run("b.csv"));
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("xi,purity,purity_like_jsi,purity_like_sqrt_jsi\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
