//! Pump envelope (PEF) and phase-matching (PMF) function families.
//!
//! Detunings `ws`, `wi` are offsets in rad/s from the central signal and
//! idler frequencies. The PEF depends only on `ws + wi`; the symmetric PMF
//! families depend only on `ws - wi`.

use std::f64::consts::{FRAC_PI_4, LN_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, LazyLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::GroupData;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::poling::{self, DomainStructure};

/// `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Positive root of `sinc(x) = 1/2`.
pub fn sinc_half_max() -> f64 {
    static ROOT: LazyLock<f64> = LazyLock::new(|| {
        let mut x = 1.9_f64;
        for _ in 0..50 {
            let f = x.sin() / x - 0.5;
            let df = (x * x.cos() - x.sin()) / (x * x);
            let step = f / df;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        x
    });
    *ROOT
}

fn gaussian_fwhm_factor() -> f64 {
    2.0 * (2.0 * LN_2).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PefShape {
    Gaussian,
    Sech,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PmfShape {
    Gaussian,
    Sinc,
}

impl PefShape {
    pub fn family(self) -> WidthFamily {
        match self {
            PefShape::Gaussian => WidthFamily::Gaussian,
            PefShape::Sech => WidthFamily::Sech,
        }
    }
}

impl PmfShape {
    pub fn family(self) -> WidthFamily {
        match self {
            PmfShape::Gaussian => WidthFamily::Gaussian,
            PmfShape::Sinc => WidthFamily::Sinc,
        }
    }
}

macro_rules! shape_text {
    ($ty:ty { $($variant:ident => $text:literal),+ }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$variant => $text),+ })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().as_str() {
                    $($text => Ok(Self::$variant),)+
                    other => Err(Error::invalid(format!("unknown shape '{other}'"))),
                }
            }
        }
    };
}

shape_text!(PefShape { Gaussian => "gaussian", Sech => "sech" });
shape_text!(PmfShape { Gaussian => "gaussian", Sinc => "sinc" });

/// Separability-optimal width ratio `xi = sigma_PMF / sigma_PEF` for each
/// PEF/PMF pair in the symmetric group-velocity-matched regime.
pub fn optimal_xi(pef: PefShape, pmf: PmfShape) -> f64 {
    match (pef, pmf) {
        (PefShape::Gaussian, PmfShape::Gaussian) => 1.00,
        (PefShape::Sech, PmfShape::Gaussian) => 1.12,
        (PefShape::Gaussian, PmfShape::Sinc) => 1.13,
        (PefShape::Sech, PmfShape::Sinc) => 1.26,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WidthFamily {
    Gaussian,
    Sech,
    Sinc,
}

/// Width parameter of one analytic family, in its natural units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum WidthParam {
    /// `exp(-x^2 / (2 sigma^2))`, sigma in rad/s.
    GaussianSigma(f64),
    /// `sech(pi tau x / 2)`, tau in s.
    SechTau(f64),
    /// `sinc(kappa x)`, kappa in s.
    SincKappa(f64),
}

impl WidthParam {
    pub fn family(&self) -> WidthFamily {
        match self {
            WidthParam::GaussianSigma(_) => WidthFamily::Gaussian,
            WidthParam::SechTau(_) => WidthFamily::Sech,
            WidthParam::SincKappa(_) => WidthFamily::Sinc,
        }
    }

    /// Full width at half maximum of the amplitude profile, rad/s.
    pub fn amplitude_fwhm(&self) -> f64 {
        match *self {
            WidthParam::GaussianSigma(s) => gaussian_fwhm_factor() * s,
            WidthParam::SechTau(t) => 4.0 * 2f64.acosh() / (PI * t),
            WidthParam::SincKappa(k) => 2.0 * sinc_half_max() / k,
        }
    }

    pub fn from_amplitude_fwhm(family: WidthFamily, fwhm: f64) -> WidthParam {
        match family {
            WidthFamily::Gaussian => WidthParam::GaussianSigma(fwhm / gaussian_fwhm_factor()),
            WidthFamily::Sech => WidthParam::SechTau(4.0 * 2f64.acosh() / (PI * fwhm)),
            WidthFamily::Sinc => WidthParam::SincKappa(2.0 * sinc_half_max() / fwhm),
        }
    }

    /// Parameter of `family` with the same amplitude FWHM.
    pub fn convert(&self, family: WidthFamily) -> WidthParam {
        Self::from_amplitude_fwhm(family, self.amplitude_fwhm())
    }

    pub fn value(&self) -> f64 {
        match *self {
            WidthParam::GaussianSigma(v) | WidthParam::SechTau(v) | WidthParam::SincKappa(v) => v,
        }
    }
}

/// Pump pulse description.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub shape: PefShape,
    /// sigma_PEF (rad/s) for Gaussian pumps, tau (s) for sech pumps.
    pub width: f64,
    /// Central pump angular frequency, rad/s.
    pub center_freq: f64,
    /// Dimensionless quadratic spectral phase `k w^2`; 0 is transform-limited.
    pub chirp_kw2: f64,
}

impl PulseSpec {
    pub fn new(shape: PefShape, width: f64, center_freq: f64) -> Result<PulseSpec> {
        PulseSpec {
            shape,
            width,
            center_freq,
            chirp_kw2: 0.0,
        }
        .validated()
    }

    pub fn gaussian(sigma: f64, center_freq: f64) -> Result<PulseSpec> {
        Self::new(PefShape::Gaussian, sigma, center_freq)
    }

    pub fn sech(tau: f64, center_freq: f64) -> Result<PulseSpec> {
        Self::new(PefShape::Sech, tau, center_freq)
    }

    /// Builds a pulse from the FWHM of its temporal intensity profile.
    ///
    /// Gaussian: `|E(t)|^2 = exp(-sigma^2 t^2)`, FWHM `2 sqrt(ln 2) / sigma`.
    /// Sech: `|E(t)|^2 = sech^2(t / tau)`, FWHM `2 acosh(sqrt 2) tau`.
    pub fn from_intensity_fwhm(
        shape: PefShape,
        duration: f64,
        center_freq: f64,
    ) -> Result<PulseSpec> {
        if !(duration > 0.0) {
            return Err(Error::invalid("pulse duration must be positive"));
        }
        let width = match shape {
            PefShape::Gaussian => 2.0 * LN_2.sqrt() / duration,
            PefShape::Sech => duration / (2.0 * 2f64.sqrt().acosh()),
        };
        Self::new(shape, width, center_freq)
    }

    pub fn with_chirp(mut self, kw2: f64) -> Result<PulseSpec> {
        self.chirp_kw2 = kw2;
        self.validated()
    }

    fn validated(self) -> Result<PulseSpec> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::invalid(format!(
                "pulse width must be positive, got {}",
                self.width
            )));
        }
        if !(self.center_freq > 0.0) {
            return Err(Error::invalid("pump center frequency must be positive"));
        }
        if !(self.chirp_kw2 >= 0.0 && self.chirp_kw2.is_finite()) {
            return Err(Error::invalid("chirp k w^2 must be non-negative"));
        }
        Ok(self)
    }

    pub fn width_param(&self) -> WidthParam {
        match self.shape {
            PefShape::Gaussian => WidthParam::GaussianSigma(self.width),
            PefShape::Sech => WidthParam::SechTau(self.width),
        }
    }

    /// Spectral amplitude FWHM `w` of the envelope in `ws + wi`.
    pub fn amplitude_fwhm(&self) -> f64 {
        self.width_param().amplitude_fwhm()
    }

    /// sigma of the Gaussian PEF with the same amplitude FWHM.
    pub fn gaussian_equivalent_sigma(&self) -> f64 {
        self.width_param().convert(WidthFamily::Gaussian).value()
    }

    /// Quadratic phase coefficient `k` (s^2) recovered from `k w^2`.
    pub fn chirp_k(&self) -> f64 {
        let w = self.amplitude_fwhm();
        self.chirp_kw2 / (w * w)
    }

    /// Transform-limited envelope magnitude at pump detuning `u = ws + wi`.
    pub fn envelope(&self, u: f64) -> f64 {
        match self.shape {
            PefShape::Gaussian => (-u * u / (2.0 * self.width * self.width)).exp(),
            PefShape::Sech => 1.0 / (0.5 * PI * self.width * u).cosh(),
        }
    }

    pub fn value(&self, ws: f64, wi: f64) -> Complex64 {
        let u = ws + wi;
        let mag = self.envelope(u);
        if self.chirp_kw2 == 0.0 {
            Complex64::new(mag, 0.0)
        } else {
            Complex64::from_polar(mag, -self.chirp_k() * u * u)
        }
    }
}

pub fn pef_value(pulse: &PulseSpec, ws: f64, wi: f64) -> Complex64 {
    pulse.value(ws, wi)
}

/// Phase matching generated by a poled crystal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CustomPmf {
    pub domains: Arc<DomainStructure>,
    pub group: GroupData,
}

impl CustomPmf {
    pub fn new(domains: DomainStructure, group: GroupData) -> CustomPmf {
        CustomPmf {
            domains: Arc::new(domains),
            group,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PmfSpec {
    /// `exp(-(sin(theta) ws - cos(theta) wi)^2 / sigma^2)`.
    Gaussian {
        sigma: f64,
        theta: f64,
    },
    /// `sinc(kappa (ws - wi))`, oriented at 45 degrees.
    Sinc {
        kappa: f64,
    },
    Custom(CustomPmf),
}

impl PmfSpec {
    /// Symmetric Gaussian `exp(-(ws - wi)^2 / (2 sigma^2))`.
    pub fn gaussian_symmetric(sigma: f64) -> Result<PmfSpec> {
        Self::gaussian(sigma, FRAC_PI_4)
    }

    pub fn gaussian(sigma: f64, theta: f64) -> Result<PmfSpec> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid("PMF sigma must be positive"));
        }
        Ok(PmfSpec::Gaussian { sigma, theta })
    }

    pub fn sinc(kappa: f64) -> Result<PmfSpec> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::invalid("PMF kappa must be positive"));
        }
        Ok(PmfSpec::Sinc { kappa })
    }

    /// Symmetric PMF of `shape` whose width is `xi` times the pump's
    /// Gaussian-equivalent width.
    pub fn from_xi(shape: PmfShape, xi: f64, pulse: &PulseSpec) -> Result<PmfSpec> {
        if !(xi > 0.0) {
            return Err(Error::invalid("xi must be positive"));
        }
        let sigma = xi * pulse.gaussian_equivalent_sigma();
        match WidthParam::GaussianSigma(sigma).convert(shape.family()) {
            WidthParam::GaussianSigma(s) => Self::gaussian_symmetric(s),
            WidthParam::SincKappa(k) => Self::sinc(k),
            WidthParam::SechTau(_) => unreachable!("PMF families are gaussian or sinc"),
        }
    }

    pub fn shape(&self) -> Option<PmfShape> {
        match self {
            PmfSpec::Gaussian { .. } => Some(PmfShape::Gaussian),
            PmfSpec::Sinc { .. } => Some(PmfShape::Sinc),
            PmfSpec::Custom(_) => None,
        }
    }

    /// Amplitude FWHM along `ws - wi` for the symmetric analytic families.
    pub fn amplitude_fwhm(&self) -> Option<f64> {
        match *self {
            PmfSpec::Gaussian { sigma, theta } if (theta - FRAC_PI_4).abs() < 1e-12 => {
                Some(WidthParam::GaussianSigma(sigma).amplitude_fwhm())
            }
            PmfSpec::Sinc { kappa } => Some(WidthParam::SincKappa(kappa).amplitude_fwhm()),
            _ => None,
        }
    }

    pub fn value(&self, ws: f64, wi: f64) -> Complex64 {
        match self {
            PmfSpec::Gaussian { sigma, theta } => {
                let x = theta.sin() * ws - theta.cos() * wi;
                Complex64::new((-x * x / (sigma * sigma)).exp(), 0.0)
            }
            PmfSpec::Sinc { kappa } => Complex64::new(sinc(kappa * (ws - wi)), 0.0),
            PmfSpec::Custom(c) => {
                poling::pmf_from_domains(&c.domains, &[c.group.delta_k(ws, wi)])[0]
            }
        }
    }

    /// Samples the PMF on the outer product of detuning axes.
    pub fn sample(&self, ws: &[f64], wi: &[f64]) -> CMatrix {
        match self {
            PmfSpec::Custom(c) => poling::pmf_on_grid(&c.domains, &c.group, ws, wi),
            _ => CMatrix::from_fn(ws.len(), wi.len(), |r, col| self.value(ws[r], wi[col])),
        }
    }
}

pub fn pmf_value(pmf: &PmfSpec, ws: f64, wi: f64) -> Complex64 {
    pmf.value(ws, wi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(lo) > 0.0) == (f(mid) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn peak_normalized() {
        for shape in [PefShape::Gaussian, PefShape::Sech] {
            let p = PulseSpec::new(shape, 1.3, 1.0)
                .unwrap()
                .with_chirp(2.0)
                .unwrap();
            assert_relative_eq!(p.value(0.0, 0.0).re, 1.0);
            assert_eq!(p.value(0.0, 0.0).im, 0.0);
        }
    }

    #[test]
    fn gaussian_half_max() {
        let s = 2.0;
        let p = PulseSpec::gaussian(s, 1.0).unwrap();
        let u = (2.0 * LN_2).sqrt() * s;
        assert_relative_eq!(p.value(0.3 * u, 0.7 * u).norm(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn chirped_sech_at_half_width() {
        let p = PulseSpec::sech(0.8, 1.0).unwrap().with_chirp(2.0).unwrap();
        let w = p.amplitude_fwhm();
        let k = 2.0 / (w * w);
        let v = p.value(w / 4.0, w / 4.0);
        assert_relative_eq!(v.norm(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(v.arg(), -k * (w / 2.0).powi(2), epsilon = 1e-12);
    }

    #[test]
    fn sinc_pmf_points() {
        let pmf = PmfSpec::sinc(0.5).unwrap();
        assert_relative_eq!(pmf.value(1.3, 1.3).re, 1.0);
        assert!(pmf.value(PI / 0.5, 0.0).re.abs() < 1e-15);
    }

    #[test]
    fn oriented_gaussian_pmf() {
        let sigma = 1.7;
        let pmf = PmfSpec::gaussian(sigma, PI / 3.0).unwrap();
        let want = (-(PI / 3.0).sin().powi(2)).exp();
        assert_relative_eq!(pmf.value(sigma, 0.0).re, want, epsilon = 1e-14);
    }

    #[test]
    fn width_constants() {
        let sigma = 3.0;
        let tau = WidthParam::GaussianSigma(sigma)
            .convert(WidthFamily::Sech)
            .value();
        assert!((tau * sigma - 0.712).abs() < 1e-3, "{}", tau * sigma);
        let kappa = 2.5;
        let s = WidthParam::SincKappa(kappa)
            .convert(WidthFamily::Gaussian)
            .value();
        assert!((s * kappa - 1.61).abs() < 1e-2);
        let t = WidthParam::SincKappa(kappa)
            .convert(WidthFamily::Sech)
            .value();
        assert!((t / kappa - 0.442).abs() < 1e-3);
        // xi ~ 1.40 sigma_PMF tau ~ 2.26 tau / kappa
        assert!((1.0 / (tau * sigma) - 1.40).abs() < 5e-3);
        assert!((s * kappa / (tau * sigma) - 2.26).abs() < 5e-3);
        let back = WidthParam::SechTau(tau)
            .convert(WidthFamily::Gaussian)
            .value();
        assert_relative_eq!(back, sigma, max_relative = 1e-12);
    }

    #[test]
    fn numeric_fwhm_matches_closed_form() {
        let cases = [
            (
                WidthParam::GaussianSigma(1.3),
                Box::new(|x: f64| (-x * x / (2.0 * 1.69)).exp()) as Box<dyn Fn(f64) -> f64>,
            ),
            (
                WidthParam::SechTau(0.7),
                Box::new(|x: f64| 1.0 / (0.5 * PI * 0.7 * x).cosh()),
            ),
            (WidthParam::SincKappa(2.2), Box::new(|x: f64| sinc(2.2 * x))),
        ];
        for (param, f) in cases {
            let half = bisect(|x| f(x) - 0.5, 1e-9, param.amplitude_fwhm());
            assert_relative_eq!(2.0 * half, param.amplitude_fwhm(), max_relative = 1e-9);
        }
    }

    #[test]
    fn intensity_fwhm_conversions() {
        let p = PulseSpec::from_intensity_fwhm(PefShape::Sech, 1.0, 1.0).unwrap();
        let t = 2.0 * 2f64.sqrt().acosh() * p.width;
        assert_relative_eq!(t, 1.0, epsilon = 1e-15);
        let g = PulseSpec::from_intensity_fwhm(PefShape::Gaussian, 2.0, 1.0).unwrap();
        // |E(t)|^2 = exp(-sigma^2 t^2) is one half at t = 1.
        assert_relative_eq!((-(g.width * 1.0f64).powi(2)).exp(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn invalid_pulses_rejected() {
        assert!(PulseSpec::gaussian(0.0, 1.0).is_err());
        assert!(PulseSpec::sech(1.0, -1.0).is_err());
        assert!(PulseSpec::sech(1.0, 1.0).unwrap().with_chirp(-0.1).is_err());
        assert!(PmfSpec::sinc(0.0).is_err());
    }

    #[test]
    fn from_xi_sets_width_ratio() {
        let p = PulseSpec::sech(0.9, 1.0).unwrap();
        let pmf = PmfSpec::from_xi(PmfShape::Sinc, 1.26, &p).unwrap();
        let ratio = pmf.amplitude_fwhm().unwrap() / p.amplitude_fwhm();
        assert_relative_eq!(ratio, 1.26, max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn chirp_is_pure_phase(ws in -5.0..5.0f64, wi in -5.0..5.0f64, kw2 in 0.0..10.0f64) {
            let p = PulseSpec::sech(0.8, 1.0).unwrap();
            let c = p.with_chirp(kw2).unwrap();
            prop_assert!((p.value(ws, wi).norm() - c.value(ws, wi).norm()).abs() < 1e-14);
        }

        #[test]
        fn pef_depends_on_sum_pmf_on_difference(ws in -5.0..5.0f64, wi in -5.0..5.0f64, d in -3.0..3.0f64) {
            let p = PulseSpec::gaussian(1.1, 1.0).unwrap().with_chirp(1.5).unwrap();
            prop_assert!((p.value(ws, wi) - p.value(ws + d, wi - d)).norm() < 1e-12);
            for pmf in [PmfSpec::sinc(0.7).unwrap(), PmfSpec::gaussian_symmetric(1.2).unwrap()] {
                prop_assert!((pmf.value(ws, wi) - pmf.value(ws + d, wi + d)).norm() < 1e-12);
            }
        }
    }
}
