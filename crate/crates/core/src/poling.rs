//! Poled crystal structures and the phase matching they produce.
//!
//! A structure is an ordered list of domains of width `w_j` and orientation
//! `s_j = +-1`, laid end to end from `z = 0`. Its phase-matching function is
//! `phi(dk) = sum_j s_j w_j sinc(dk w_j / 2) exp(i dk z_j)` with `z_j` the
//! domain center.

use std::f64::consts::{FRAC_2_PI, PI};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dispersion::{wavelength_to_omega, GroupData, Material, ThreeWave};
use crate::error::{Error, Result};
use crate::jsa::{build_jsa_unnormalized, SpectralGrid};
use crate::linalg::CMatrix;
use crate::spectral::{sinc, CustomPmf, PmfSpec, PulseSpec};

/// Narrowest domain left by wall jitter, in units of the coherence length.
pub const MIN_JITTER_WIDTH: f64 = 1e-3;

/// Below this `|dk| L` the grid evaluation falls back to the direct sum.
const WALL_FORM_THRESHOLD: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolingMethod {
    Periodic,
    DutyCycle,
    DomainOrientation,
    Unpoled,
}

impl fmt::Display for PolingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolingMethod::Periodic => "periodic",
            PolingMethod::DutyCycle => "duty-cycle",
            PolingMethod::DomainOrientation => "domain-orientation",
            PolingMethod::Unpoled => "unpoled",
        })
    }
}

impl FromStr for PolingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "periodic" => Ok(PolingMethod::Periodic),
            "duty-cycle" => Ok(PolingMethod::DutyCycle),
            "domain-orientation" => Ok(PolingMethod::DomainOrientation),
            "unpoled" => Ok(PolingMethod::Unpoled),
            other => Err(Error::invalid(format!("unknown poling method '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    /// Width in meters.
    pub width: f64,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainStructure {
    domains: Vec<Domain>,
    coherence_length: f64,
    method: PolingMethod,
    seed: Option<u64>,
}

impl DomainStructure {
    pub fn new(
        domains: Vec<Domain>,
        coherence_length: f64,
        method: PolingMethod,
    ) -> Result<DomainStructure> {
        if domains.is_empty() {
            return Err(Error::invalid("domain structure is empty"));
        }
        if !(coherence_length > 0.0 && coherence_length.is_finite()) {
            return Err(Error::invalid("coherence length must be positive"));
        }
        for (k, d) in domains.iter().enumerate() {
            if !(d.width > 0.0 && d.width.is_finite()) {
                return Err(Error::invalid(format!(
                    "domain {k} has non-positive width {}",
                    d.width
                )));
            }
            if d.sign != 1 && d.sign != -1 {
                return Err(Error::invalid(format!("domain {k} has sign {}", d.sign)));
            }
        }
        Ok(DomainStructure {
            domains,
            coherence_length,
            method,
            seed: None,
        })
    }

    fn with_domains(&self, domains: Vec<Domain>) -> Result<DomainStructure> {
        let mut d = DomainStructure::new(domains, self.coherence_length, self.method)?;
        d.seed = self.seed;
        Ok(d)
    }

    /// A single-orientation crystal of the given length.
    pub fn unpoled(length: f64, coherence_length: f64) -> Result<DomainStructure> {
        Self::new(
            vec![Domain {
                width: length,
                sign: 1,
            }],
            coherence_length,
            PolingMethod::Unpoled,
        )
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn coherence_length(&self) -> f64 {
        self.coherence_length
    }

    /// Poling period `2 l_c`.
    pub fn period(&self) -> f64 {
        2.0 * self.coherence_length
    }

    pub fn method(&self) -> PolingMethod {
        self.method
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn widths(&self) -> Vec<f64> {
        self.domains.iter().map(|d| d.width).collect()
    }

    pub fn signs(&self) -> Vec<i8> {
        self.domains.iter().map(|d| d.sign).collect()
    }

    pub fn length(&self) -> f64 {
        self.domains.iter().map(|d| d.width).sum()
    }

    /// Wall positions `x_0 = 0 < x_1 < ... < x_N = L`.
    pub fn walls(&self) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.domains.len() + 1);
        let mut acc = 0.0;
        x.push(0.0);
        for d in &self.domains {
            acc += d.width;
            x.push(acc);
        }
        x
    }

    /// Domain centers `z_j`.
    pub fn positions(&self) -> Vec<f64> {
        let walls = self.walls();
        walls.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Nonlinearity sign `g(z)`; zero outside the crystal.
    pub fn g(&self, z: f64) -> f64 {
        if z < 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for d in &self.domains {
            acc += d.width;
            if z < acc {
                return d.sign as f64;
            }
        }
        if z == acc {
            self.domains.last().map_or(0.0, |d| d.sign as f64)
        } else {
            0.0
        }
    }

    /// Concatenation `self` followed by `other`.
    pub fn concat(&self, other: &DomainStructure) -> Result<DomainStructure> {
        let mut domains = self.domains.clone();
        domains.extend_from_slice(&other.domains);
        self.with_domains(domains)
    }

    /// Coefficients of `exp(i dk x_w)` in `i dk phi(dk)`, one per wall.
    fn wall_coefficients(&self) -> Vec<f64> {
        let n = self.domains.len();
        let mut c = Vec::with_capacity(n + 1);
        c.push(-(self.domains[0].sign as f64));
        for j in 1..n {
            c.push((self.domains[j - 1].sign - self.domains[j].sign) as f64);
        }
        c.push(self.domains[n - 1].sign as f64);
        c
    }

    /// Writes the pattern file: header comments followed by `width_um sign`
    /// lines.
    pub fn write_pattern(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "# l_c_um={}", self.coherence_length * 1e6)?;
        writeln!(f, "# method={}", self.method)?;
        match self.seed {
            Some(s) => writeln!(f, "# seed={s}")?,
            None => writeln!(f, "# seed=none")?,
        }
        for d in &self.domains {
            writeln!(f, "{} {}", d.width * 1e6, d.sign)?;
        }
        f.flush()?;
        Ok(())
    }

    pub fn read_pattern(path: &Path) -> Result<DomainStructure> {
        let reader = BufReader::new(std::fs::File::open(path)?);
        let parse_err = |line: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut l_c = None;
        let mut method = PolingMethod::Periodic;
        let mut seed = None;
        let mut domains = Vec::new();
        for (k, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = k + 1;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(h) = t.strip_prefix('#') {
                let Some((key, value)) = h.trim().split_once('=') else {
                    continue;
                };
                let value = value.trim();
                match key.trim() {
                    "l_c_um" => {
                        let v: f64 = value.parse().map_err(|_| {
                            parse_err(lineno, format!("bad coherence length '{value}'"))
                        })?;
                        l_c = Some(v * 1e-6);
                    }
                    "method" => {
                        method = value
                            .parse()
                            .map_err(|e: Error| parse_err(lineno, e.to_string()))?
                    }
                    "seed" if value != "none" => {
                        seed = Some(
                            value
                                .parse()
                                .map_err(|_| parse_err(lineno, format!("bad seed '{value}'")))?,
                        )
                    }
                    _ => {}
                }
                continue;
            }
            let mut parts = t.split_whitespace();
            let (Some(w), Some(s), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_err(lineno, "expected 'width_um sign'".into()));
            };
            let width: f64 = w
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad width '{w}'")))?;
            let sign: i8 = s
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad sign '{s}'")))?;
            domains.push(Domain {
                width: width * 1e-6,
                sign,
            });
        }
        let l_c = l_c.ok_or_else(|| parse_err(0, "missing '# l_c_um=' header".into()))?;
        let mut d = DomainStructure::new(domains, l_c, method)?;
        d.seed = seed;
        Ok(d)
    }
}

/// `phi(dk)` for each requested mismatch, by direct summation over domains.
pub fn pmf_from_domains(d: &DomainStructure, dk_values: &[f64]) -> Vec<Complex64> {
    let positions = d.positions();
    dk_values
        .iter()
        .map(|&dk| {
            d.domains
                .iter()
                .zip(&positions)
                .map(|(dom, &z)| {
                    let amp = dom.sign as f64 * dom.width * sinc(0.5 * dk * dom.width);
                    Complex64::from_polar(amp, dk * z)
                })
                .sum()
        })
        .collect()
}

/// `phi` via the wall form `sum_w c_w exp(i dk x_w) / (i dk)`. Exact for
/// `dk != 0` but loses relative accuracy as `dk L -> 0`.
pub fn pmf_from_walls(d: &DomainStructure, dk: f64) -> Complex64 {
    let c = d.wall_coefficients();
    let s: Complex64 = d
        .walls()
        .iter()
        .zip(&c)
        .filter(|(_, &cw)| cw != 0.0)
        .map(|(&x, &cw)| Complex64::from_polar(cw, dk * x))
        .sum();
    s / Complex64::new(0.0, dk)
}

/// The PMF sampled at `dk(ws_m, wi_n)` on the outer product of detunings.
///
/// With a linear mismatch, `exp(i dk x)` factors into a signal part and an idler
/// part, so the whole grid is one matrix product over walls.
pub fn pmf_on_grid(d: &DomainStructure, group: &GroupData, ws: &[f64], wi: &[f64]) -> CMatrix {
    let walls = d.walls();
    let coeffs = d.wall_coefficients();
    let active: Vec<(f64, f64)> = walls
        .iter()
        .zip(&coeffs)
        .filter(|(_, &c)| c != 0.0)
        .map(|(&x, &c)| (x, c))
        .collect();
    let (a_s, a_i) = (group.signal_slope(), group.idler_slope());
    let u = faer::Mat::from_fn(ws.len(), active.len(), |m, w| {
        let (x, c) = active[w];
        Complex64::from_polar(c, (group.dk0 + a_s * ws[m]) * x)
    });
    let v = faer::Mat::from_fn(wi.len(), active.len(), |n, w| {
        Complex64::from_polar(1.0, a_i * wi[n] * active[w].0)
    });
    let p = &u * v.transpose();
    let length = d.length();
    let mut out = CMatrix::zeros(ws.len(), wi.len());
    let mut direct = Vec::new();
    for m in 0..ws.len() {
        for n in 0..wi.len() {
            let dk = group.delta_k(ws[m], wi[n]);
            if (dk * length).abs() < WALL_FORM_THRESHOLD {
                direct.push((m, n, dk));
            } else {
                out[(m, n)] = p[(m, n)] / Complex64::new(0.0, dk);
            }
        }
    }
    if !direct.is_empty() {
        let dks: Vec<f64> = direct.iter().map(|t| t.2).collect();
        for ((m, n, _), val) in direct.into_iter().zip(pmf_from_domains(d, &dks)) {
            out[(m, n)] = val;
        }
    }
    out
}

pub fn make_periodic(coherence_length: f64, n_domains: usize) -> Result<DomainStructure> {
    if n_domains < 2 {
        return Err(Error::invalid(format!(
            "periodic poling needs at least 2 domains, got {n_domains}"
        )));
    }
    let domains = (0..n_domains)
        .map(|j| Domain {
            width: coherence_length,
            sign: if j % 2 == 0 { 1 } else { -1 },
        })
        .collect();
    DomainStructure::new(domains, coherence_length, PolingMethod::Periodic)
}

/// Desired local nonlinearity amplitude along the crystal, peak 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmplitudeProfile {
    Constant,
    /// `exp(-(z - center)^2 / (2 sigma^2))`; a negative center means the middle
    /// of whatever crystal the profile is applied to.
    Gaussian {
        sigma: f64,
        center: f64,
    },
}

impl AmplitudeProfile {
    /// Gaussian profile centered on the crystal.
    pub fn gaussian(sigma: f64) -> AmplitudeProfile {
        AmplitudeProfile::Gaussian {
            sigma,
            center: -1.0,
        }
    }

    /// Gaussian whose phase matching has the same amplitude FWHM as a periodic
    /// crystal of length `periodic_length`.
    pub fn matched_to_periodic(periodic_length: f64) -> AmplitudeProfile {
        let kappa = 0.5 * periodic_length;
        let sigma_dk = crate::spectral::WidthParam::SincKappa(kappa)
            .convert(crate::spectral::WidthFamily::Gaussian)
            .value();
        Self::gaussian(1.0 / sigma_dk)
    }

    pub fn value(&self, z: f64, length: f64) -> f64 {
        match *self {
            AmplitudeProfile::Constant => 1.0,
            AmplitudeProfile::Gaussian { sigma, center } => {
                let c = if center < 0.0 { 0.5 * length } else { center };
                (-(z - c).powi(2) / (2.0 * sigma * sigma)).exp()
            }
        }
    }

    /// `int_0^z value`, in closed form.
    pub fn integral(&self, z: f64, length: f64) -> f64 {
        match *self {
            AmplitudeProfile::Constant => z,
            AmplitudeProfile::Gaussian { sigma, center } => {
                let c = if center < 0.0 { 0.5 * length } else { center };
                let s = sigma * std::f64::consts::SQRT_2;
                0.5 * sigma * (2.0 * PI).sqrt() * (libm::erf((z - c) / s) - libm::erf(-c / s))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            AmplitudeProfile::Constant => Ok(()),
            AmplitudeProfile::Gaussian { sigma, .. } if sigma > 0.0 && sigma.is_finite() => Ok(()),
            AmplitudeProfile::Gaussian { sigma, .. } => Err(Error::invalid(format!(
                "profile width must be positive, got {sigma}"
            ))),
        }
    }
}

/// Duty-cycle modulated poling: period `m` holds a `+1` domain of width
/// `delta_m Lambda` centered at `m Lambda + Lambda / 4`, with
/// `sin(pi delta_m) = target(z_m)`. Neighbouring `-1` gaps merge.
pub fn make_duty_cycle(
    coherence_length: f64,
    n_periods: usize,
    target: &AmplitudeProfile,
) -> Result<DomainStructure> {
    if n_periods < 1 {
        return Err(Error::invalid(
            "duty-cycle poling needs at least one period",
        ));
    }
    target.validate()?;
    let period = 2.0 * coherence_length;
    let length = n_periods as f64 * period;
    let mut walls: Vec<(f64, f64)> = Vec::with_capacity(n_periods);
    for m in 0..n_periods {
        let zc = (m as f64 + 0.25) * period;
        let a = target.value((m as f64 + 0.5) * period, length);
        if !(0.0..=1.0 + 1e-12).contains(&a) {
            return Err(Error::invalid(format!(
                "target amplitude {a} outside [0, 1]"
            )));
        }
        let delta = a.min(1.0).asin() / PI;
        let half = 0.5 * delta * period;
        if half > 0.0 {
            walls.push((zc - half, zc + half));
        }
    }
    let mut domains = Vec::with_capacity(2 * walls.len() + 1);
    let mut cursor = 0.0;
    for (lo, hi) in walls {
        if lo - cursor > 1e-9 * coherence_length {
            domains.push(Domain {
                width: lo - cursor,
                sign: -1,
            });
        }
        domains.push(Domain {
            width: hi - lo.max(cursor),
            sign: 1,
        });
        cursor = hi;
    }
    if length - cursor > 0.0 {
        domains.push(Domain {
            width: length - cursor,
            sign: -1,
        });
    }
    DomainStructure::new(domains, coherence_length, PolingMethod::DutyCycle)
}

/// Fixed-width domains whose orientations are picked one at a time so the
/// running PMF at the phase-matching point follows the integral of the target.
pub fn make_domain_orientation(
    coherence_length: f64,
    n_domains: usize,
    target: &AmplitudeProfile,
) -> Result<DomainStructure> {
    if n_domains < 2 {
        return Err(Error::invalid(format!(
            "domain orientation needs at least 2 domains, got {n_domains}"
        )));
    }
    target.validate()?;
    let w = coherence_length;
    let length = n_domains as f64 * w;
    let dk = PI / w;
    // Each domain contributes +-w (2/pi) exp(i dk z_j); a perfectly growing
    // sum points along the first domain's phase, i.
    let mut sum = Complex64::new(0.0, 0.0);
    let mut domains = Vec::with_capacity(n_domains);
    for j in 0..n_domains {
        let z = (j as f64 + 0.5) * w;
        let step = Complex64::from_polar(w * FRAC_2_PI, dk * z);
        let want = Complex64::new(0.0, FRAC_2_PI * target.integral((j + 1) as f64 * w, length));
        let plus = sum + step;
        let minus = sum - step;
        let sign = if (plus - want).norm() <= (minus - want).norm() {
            1
        } else {
            -1
        };
        sum = if sign == 1 { plus } else { minus };
        domains.push(Domain { width: w, sign });
    }
    DomainStructure::new(domains, coherence_length, PolingMethod::DomainOrientation)
}

/// Grows every `+1` domain by `fraction` of its own width at its trailing
/// wall, shrinking the domain that follows it (the one before it for the last
/// domain). Crystal length and domain count are unchanged, and inside a run of
/// inverted domains only the wall at the run's end moves.
pub fn inject_overpoling(d: &DomainStructure, fraction: f64) -> Result<DomainStructure> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::invalid(format!(
            "over-poling fraction {fraction} outside [0, 1]"
        )));
    }
    if fraction == 0.0 {
        return Ok(d.clone());
    }
    let n = d.domains.len();
    let mut widths = d.widths();
    for (j, dom) in d.domains.iter().enumerate() {
        if dom.sign != 1 {
            continue;
        }
        let donor = if j + 1 < n {
            j + 1
        } else if j > 0 {
            j - 1
        } else {
            continue;
        };
        let grow = fraction * dom.width;
        widths[j] += grow;
        widths[donor] -= grow;
    }
    if let Some(j) = widths.iter().position(|&w| !(w > 0.0)) {
        return Err(Error::invalid(format!(
            "over-poling by {fraction} collapses domain {j}"
        )));
    }
    let domains = d
        .domains
        .iter()
        .zip(widths)
        .map(|(dom, width)| Domain {
            width,
            sign: dom.sign,
        })
        .collect();
    d.with_domains(domains)
}

fn rebuild(doms: &[Domain], walls: &[f64]) -> Vec<Domain> {
    doms.iter()
        .enumerate()
        .map(|(j, dom)| Domain {
            width: walls[j + 1] - walls[j],
            sign: dom.sign,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jittered {
    pub structure: DomainStructure,
    /// Walls moved to keep every domain at least the minimum width.
    pub clamp_events: usize,
}

/// Displaces every interior wall by an independent `N(0, sigma)` draw.
pub fn inject_wall_jitter(d: &DomainStructure, sigma: f64, seed: u64) -> Result<Jittered> {
    inject_wall_jitter_with(d, sigma, &mut ChaCha8Rng::seed_from_u64(seed)).map(|mut j| {
        j.structure.seed = Some(seed);
        j
    })
}

pub fn inject_wall_jitter_with(
    d: &DomainStructure,
    sigma: f64,
    rng: &mut impl rand::Rng,
) -> Result<Jittered> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!(
            "jitter width must be non-negative, got {sigma}"
        )));
    }
    let mut walls = d.walls();
    let n = walls.len() - 1;
    if sigma == 0.0 || n < 2 {
        return Ok(Jittered {
            structure: d.clone(),
            clamp_events: 0,
        });
    }
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    for x in walls.iter_mut().take(n).skip(1) {
        *x += normal.sample(rng);
    }
    let min_w = MIN_JITTER_WIDTH * d.coherence_length;
    let length = walls[n];
    let mut clamp_events = 0;
    for j in 1..n {
        let lo = walls[j - 1] + min_w;
        let hi = length - (n - j) as f64 * min_w;
        let clamped = walls[j].clamp(lo, hi);
        if clamped != walls[j] {
            clamp_events += 1;
            walls[j] = clamped;
        }
    }
    let structure = d.with_domains(rebuild(&d.domains, &walls))?;
    Ok(Jittered {
        structure,
        clamp_events,
    })
}

/// Flips a random `miss_fraction` of the `+1` domains back to `-1`.
pub fn inject_missed_domains(
    d: &DomainStructure,
    miss_fraction: f64,
    seed: u64,
) -> Result<DomainStructure> {
    let mut out =
        inject_missed_domains_with(d, miss_fraction, &mut ChaCha8Rng::seed_from_u64(seed))?;
    out.seed = Some(seed);
    Ok(out)
}

pub fn inject_missed_domains_with(
    d: &DomainStructure,
    miss_fraction: f64,
    rng: &mut impl rand::Rng,
) -> Result<DomainStructure> {
    if !(0.0..=1.0).contains(&miss_fraction) {
        return Err(Error::invalid(format!(
            "missed-domain fraction {miss_fraction} outside [0, 1]"
        )));
    }
    let poled: Vec<usize> = (0..d.len()).filter(|&j| d.domains[j].sign == 1).collect();
    let count = (miss_fraction * poled.len() as f64).round() as usize;
    let mut domains = d.domains.clone();
    for k in index::sample(rng, poled.len(), count) {
        domains[poled[k]].sign = -1;
    }
    d.with_domains(domains)
}

/// `max |JSA(test)| / max |JSA(reference)|` without normalization.
pub fn peak_amplitude_ratio(
    test: &DomainStructure,
    reference: &DomainStructure,
    config: &QpmConfig,
) -> Result<f64> {
    let r = config.peak_amplitude(reference);
    if !(r > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    Ok(config.peak_amplitude(test) / r)
}

/// `|phi(dk)|` sampled over a wide mismatch interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PmfSurvey {
    pub dk: Vec<f64>,
    pub amplitude: Vec<f64>,
}

pub fn pmf_survey(
    d: &DomainStructure,
    dk_min: f64,
    dk_max: f64,
    points: usize,
) -> Result<PmfSurvey> {
    if points < 2 || !(dk_max > dk_min) {
        return Err(Error::invalid(
            "survey needs an increasing interval and at least 2 points",
        ));
    }
    let step = (dk_max - dk_min) / (points - 1) as f64;
    let dk: Vec<f64> = (0..points).map(|k| dk_min + k as f64 * step).collect();
    let amplitude = pmf_from_domains(d, &dk)
        .into_iter()
        .map(|z| z.norm())
        .collect();
    Ok(PmfSurvey { dk, amplitude })
}

impl PmfSurvey {
    /// Largest amplitude within `halfwidth` of `center`.
    pub fn peak_near(&self, center: f64, halfwidth: f64) -> f64 {
        self.dk
            .iter()
            .zip(&self.amplitude)
            .filter(|(&k, _)| (k - center).abs() <= halfwidth)
            .map(|(_, &a)| a)
            .fold(0.0, f64::max)
    }

    /// Location of the largest amplitude.
    pub fn argmax(&self) -> f64 {
        let (k, _) = self
            .amplitude
            .iter()
            .enumerate()
            .fold(
                (0, f64::MIN),
                |best, (k, &a)| if a > best.1 { (k, a) } else { best },
            );
        self.dk[k]
    }

    /// Mean amplitude at least `guard` away from every multiple of `pi / l_c`.
    pub fn background(&self, coherence_length: f64, guard: f64) -> f64 {
        let unit = PI / coherence_length;
        let (sum, n) = self
            .dk
            .iter()
            .zip(&self.amplitude)
            .filter(|(&k, _)| {
                let r = k / unit;
                (r - r.round()).abs() * unit > guard
            })
            .fold((0.0, 0usize), |(s, n), (_, &a)| (s + a, n + 1));
        if n == 0 {
            0.0
        } else {
            sum / n as f64
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["dk_per_m", "abs_pmf_m"])?;
        for (k, a) in self.dk.iter().zip(&self.amplitude) {
            w.write_record([format!("{k:.9e}"), format!("{a:.9e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Pump, grid and crystal dispersion shared by poling comparisons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QpmConfig {
    pub pulse: PulseSpec,
    pub grid: SpectralGrid,
    pub group: GroupData,
    pub coherence_length: f64,
}

impl QpmConfig {
    /// KTP type-II near 791 nm: Gaussian pump at 2.38e15 rad/s with width
    /// 4.5e11 rad/s, 100 bins over 7e12 rad/s, l_c = 23.05 um.
    pub fn ktp_default() -> Result<QpmConfig> {
        let omega_p = 2.38e15;
        let pulse = PulseSpec::gaussian(4.5e11, omega_p)?;
        let grid = SpectralGrid::degenerate(100, 7.0e12, omega_p)?;
        let lambda_p = crate::dispersion::omega_to_wavelength(omega_p);
        debug_assert!((wavelength_to_omega(lambda_p) - omega_p).abs() < 1.0);
        let mut group =
            GroupData::from_material(&Material::ktp(), ThreeWave::ktp_type2_degenerate(lambda_p))?;
        let coherence_length = 23.05e-6;
        group.dk0 = group.dk0.signum() * PI / coherence_length;
        Ok(QpmConfig {
            pulse,
            grid,
            group,
            coherence_length,
        })
    }

    pub fn pmf(&self, d: &DomainStructure) -> PmfSpec {
        PmfSpec::Custom(CustomPmf::new(d.clone(), self.group))
    }

    pub fn peak_amplitude(&self, d: &DomainStructure) -> f64 {
        build_jsa_unnormalized(&self.pulse, &self.pmf(d), &self.grid).max_abs()
    }

    pub fn purity(&self, d: &DomainStructure) -> Result<f64> {
        let j = build_jsa_unnormalized(&self.pulse, &self.pmf(d), &self.grid);
        crate::schmidt::purity(&j.values)
    }
}

/// Domain counts used for the three methods at `l_c = 23.05 um`.
pub const PERIODIC_DOMAINS: usize = 1320;
pub const DUTY_CYCLE_PERIODS: usize = 800;
pub const ORIENTATION_DOMAINS: usize = 2000;

/// Periodic, duty-cycle and domain-orientation crystals with equal photon
/// bandwidth.
pub fn standard_structures(coherence_length: f64) -> Result<[DomainStructure; 3]> {
    let periodic = make_periodic(coherence_length, PERIODIC_DOMAINS)?;
    let target = AmplitudeProfile::matched_to_periodic(periodic.length());
    Ok([
        periodic,
        make_duty_cycle(coherence_length, DUTY_CYCLE_PERIODS, &target)?,
        make_domain_orientation(coherence_length, ORIENTATION_DOMAINS, &target)?,
    ])
}
