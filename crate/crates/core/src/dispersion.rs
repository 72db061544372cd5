//! Material dispersion: Sellmeier refractive indices, group velocities,
//! phase mismatch and the derived quantities used to size crystals and
//! estimate pump chirp.
//!
//! All public quantities are SI: wavelengths and lengths in metres, angular
//! frequencies in rad/s, inverse group velocities in s/m. Sellmeier tables
//! are written in micrometres as they appear in the literature.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{optimal_xi, PefShape, PmfShape, PulseSpec, WidthParam};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Relative deviation of `v_p^-1` from `(v_s^-1 + v_i^-1)/2` accepted as
/// symmetric group-velocity matching.
pub const SYMMETRIC_GVM_TOLERANCE: f64 = 1e-2;

/// Relative finite-difference step for first derivatives of k(w).
const FIRST_DERIVATIVE_STEP: f64 = 1e-5;
/// Relative step for second derivatives. Smaller steps lose digits to
/// cancellation in k(w + h) - 2k(w) + k(w - h).
const SECOND_DERIVATIVE_STEP: f64 = 1e-3;

const BUILTIN_TABLE: &str = include_str!("../data/materials.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
    /// Isotropic media (glasses).
    Iso,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
            Axis::Iso => "iso",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            "iso" => Ok(Axis::Iso),
            other => Err(Error::invalid(format!("unknown axis '{other}'"))),
        }
    }
}

/// One additive term of a Sellmeier expansion of n^2, wavelength in um.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SellmeierTerm {
    /// `A`
    Constant(f64),
    /// `B l^2 / (l^2 - C)`
    Pole { strength: f64, resonance_um2: f64 },
    /// `B / (l^2 - C)`
    Resonance { strength: f64, resonance_um2: f64 },
    /// `-D l^2`
    Infrared(f64),
}

impl SellmeierTerm {
    fn eval(&self, l2: f64) -> f64 {
        match *self {
            SellmeierTerm::Constant(a) => a,
            SellmeierTerm::Pole {
                strength,
                resonance_um2,
            } => strength * l2 / (l2 - resonance_um2),
            SellmeierTerm::Resonance {
                strength,
                resonance_um2,
            } => strength / (l2 - resonance_um2),
            SellmeierTerm::Infrared(d) => -d * l2,
        }
    }

    fn to_text(self) -> String {
        match self {
            SellmeierTerm::Constant(a) => format!("const:{a}"),
            SellmeierTerm::Pole {
                strength,
                resonance_um2,
            } => format!("pole:{strength},{resonance_um2}"),
            SellmeierTerm::Resonance {
                strength,
                resonance_um2,
            } => format!("resonance:{strength},{resonance_um2}"),
            SellmeierTerm::Infrared(d) => format!("ir:{d}"),
        }
    }

    fn parse(s: &str) -> std::result::Result<Self, String> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| format!("term '{s}' lacks a ':'"))?;
        let nums = args
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        match (kind, nums.as_slice()) {
            ("const", [a]) => Ok(SellmeierTerm::Constant(*a)),
            ("pole", [b, c]) => Ok(SellmeierTerm::Pole {
                strength: *b,
                resonance_um2: *c,
            }),
            ("resonance", [b, c]) => Ok(SellmeierTerm::Resonance {
                strength: *b,
                resonance_um2: *c,
            }),
            ("ir", [d]) => Ok(SellmeierTerm::Infrared(*d)),
            _ => Err(format!("malformed term '{s}'")),
        }
    }
}

/// Sellmeier data for one polarization axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisDispersion {
    pub axis: Axis,
    pub terms: Vec<SellmeierTerm>,
    /// Valid wavelength interval, micrometres.
    pub range_um: (f64, f64),
}

impl AxisDispersion {
    fn n_squared(&self, wavelength_um: f64) -> f64 {
        let l2 = wavelength_um * wavelength_um;
        self.terms.iter().map(|t| t.eval(l2)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    pub axes: Vec<AxisDispersion>,
}

impl Material {
    /// Looks up one of the compiled-in materials: `KTP`, `N-BK7`, `fused-silica`.
    pub fn builtin(name: &str) -> Result<Material> {
        MaterialLibrary::builtin().get(name).cloned()
    }

    pub fn ktp() -> Material {
        Self::builtin("KTP").expect("builtin table contains KTP")
    }

    pub fn n_bk7() -> Material {
        Self::builtin("N-BK7").expect("builtin table contains N-BK7")
    }

    pub fn fused_silica() -> Material {
        Self::builtin("fused-silica").expect("builtin table contains fused silica")
    }

    /// Non-dispersive medium with index `n` everywhere in `range_um`.
    pub fn constant(name: &str, n: f64, range_um: (f64, f64)) -> Material {
        Material {
            name: name.to_owned(),
            axes: vec![AxisDispersion {
                axis: Axis::Iso,
                terms: vec![SellmeierTerm::Constant(n * n)],
                range_um,
            }],
        }
    }

    pub fn axis(&self, axis: Axis) -> Result<&AxisDispersion> {
        self.axes
            .iter()
            .find(|a| a.axis == axis)
            .ok_or_else(|| Error::MissingAxis {
                material: self.name.clone(),
                axis: axis.to_string(),
            })
    }

    fn check_range(&self, data: &AxisDispersion, wavelength_um: f64) -> Result<()> {
        let (lo, hi) = data.range_um;
        // Allow for rounding in unit conversions at the table edges.
        let slack = 1e-9 * hi;
        if !(wavelength_um >= lo - slack && wavelength_um <= hi + slack) {
            return Err(Error::OutOfRange {
                material: format!("{} ({}-axis)", self.name, data.axis),
                wavelength_um,
                min_um: lo,
                max_um: hi,
            });
        }
        Ok(())
    }

    /// Refractive index at a vacuum wavelength in metres.
    pub fn refractive_index(&self, wavelength: f64, axis: Axis) -> Result<f64> {
        let data = self.axis(axis)?;
        let um = wavelength * 1e6;
        self.check_range(data, um)?;
        Ok(data.n_squared(um).sqrt())
    }

    /// Wavenumber k(w) = w n(w) / c.
    pub fn wavenumber(&self, omega: f64, axis: Axis) -> Result<f64> {
        let n = self.refractive_index(omega_to_wavelength(omega), axis)?;
        Ok(omega * n / SPEED_OF_LIGHT)
    }

    /// dk/dw at angular frequency `omega`, using a relative step `rel_step`
    /// with one Richardson extrapolation.
    pub fn dk_domega(&self, omega: f64, axis: Axis, rel_step: f64) -> Result<f64> {
        let k = |w: f64| self.wavenumber(w, axis);
        let central = |h: f64| -> Result<f64> { Ok((k(omega + h)? - k(omega - h)?) / (2.0 * h)) };
        let h = rel_step * omega;
        let coarse = central(h)?;
        let fine = central(h / 2.0)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }

    /// d^2k/dw^2 (group velocity dispersion, s^2/m).
    pub fn d2k_domega2(&self, omega: f64, axis: Axis, rel_step: f64) -> Result<f64> {
        let k = |w: f64| self.wavenumber(w, axis);
        let k0 = k(omega)?;
        let second =
            |h: f64| -> Result<f64> { Ok((k(omega + h)? - 2.0 * k0 + k(omega - h)?) / (h * h)) };
        let h = rel_step * omega;
        let coarse = second(h)?;
        let fine = second(h / 2.0)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }

    /// Group delay dispersion per unit length at a wavelength, s^2/m.
    pub fn group_velocity_dispersion(&self, wavelength: f64, axis: Axis) -> Result<f64> {
        self.d2k_domega2(
            wavelength_to_omega(wavelength),
            axis,
            SECOND_DERIVATIVE_STEP,
        )
    }
}

pub fn wavelength_to_omega(wavelength: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / wavelength
}

pub fn omega_to_wavelength(omega: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / omega
}

/// Inverse group velocity `v^-1 = dk/dw = (n + w dn/dw)/c` at a vacuum wavelength.
pub fn group_velocity_inverse(material: &Material, wavelength: f64, axis: Axis) -> Result<f64> {
    material.dk_domega(wavelength_to_omega(wavelength), axis, FIRST_DERIVATIVE_STEP)
}

/// A collection of materials, usually the compiled-in table or one loaded
/// from a data file of the same format.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MaterialLibrary {
    pub materials: Vec<Material>,
}

impl MaterialLibrary {
    pub fn builtin() -> MaterialLibrary {
        Self::parse(BUILTIN_TABLE, Path::new("<builtin>")).expect("builtin material table parses")
    }

    pub fn load(path: &Path) -> Result<MaterialLibrary> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path)
    }

    pub fn get(&self, name: &str) -> Result<&Material> {
        self.materials
            .iter()
            .find(|m| m.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::invalid(format!("unknown material '{name}'")))
    }

    pub fn parse(text: &str, origin: &Path) -> Result<MaterialLibrary> {
        let mut lib = MaterialLibrary::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: String| Error::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                message,
            };
            let (mut name, mut axis, mut range, mut terms) = (None, None, None, None);
            for field in line.split_whitespace() {
                let (key, value) = field
                    .split_once('=')
                    .ok_or_else(|| perr(format!("expected key=value, got '{field}'")))?;
                match key {
                    "material" => name = Some(value.to_owned()),
                    "axis" => axis = Some(value.parse::<Axis>().map_err(|e| perr(e.to_string()))?),
                    "range_um" => {
                        let (lo, hi) = value
                            .split_once(',')
                            .ok_or_else(|| perr("range_um needs two values".into()))?;
                        let lo: f64 = lo
                            .parse()
                            .map_err(|_| perr(format!("bad range '{value}'")))?;
                        let hi: f64 = hi
                            .parse()
                            .map_err(|_| perr(format!("bad range '{value}'")))?;
                        if !(lo > 0.0 && hi > lo) {
                            return Err(perr(format!("empty range '{value}'")));
                        }
                        range = Some((lo, hi));
                    }
                    "terms" => {
                        terms = Some(
                            value
                                .split(';')
                                .map(SellmeierTerm::parse)
                                .collect::<std::result::Result<Vec<_>, _>>()
                                .map_err(perr)?,
                        )
                    }
                    other => return Err(perr(format!("unknown key '{other}'"))),
                }
            }
            let name = name.ok_or_else(|| perr("missing material".into()))?;
            let data = AxisDispersion {
                axis: axis.ok_or_else(|| perr("missing axis".into()))?,
                terms: terms.ok_or_else(|| perr("missing terms".into()))?,
                range_um: range.ok_or_else(|| perr("missing range_um".into()))?,
            };
            match lib.materials.iter_mut().find(|m| m.name == name) {
                Some(m) => m.axes.push(data),
                None => lib.materials.push(Material {
                    name,
                    axes: vec![data],
                }),
            }
        }
        Ok(lib)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# pdc material table v1\n");
        for m in &self.materials {
            for a in &m.axes {
                let terms: Vec<String> = a.terms.iter().map(|t| t.to_text()).collect();
                out.push_str(&format!(
                    "material={} axis={} range_um={},{} terms={}\n",
                    m.name,
                    a.axis,
                    a.range_um.0,
                    a.range_um.1,
                    terms.join(";")
                ));
            }
        }
        out
    }
}

/// Group-velocity data of a pump/signal/idler configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupData {
    pub v_p_inv: f64,
    pub v_s_inv: f64,
    pub v_i_inv: f64,
    /// Phase mismatch at the central frequencies, 1/m.
    pub dk0: f64,
}

/// Polarization axes and wavelengths of the three interacting fields.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeWave {
    pub pump: (Axis, f64),
    pub signal: (Axis, f64),
    pub idler: (Axis, f64),
}

impl ThreeWave {
    /// Degenerate type-II in KTP: pump and signal on y, idler on z.
    pub fn ktp_type2_degenerate(pump_wavelength: f64) -> ThreeWave {
        ThreeWave {
            pump: (Axis::Y, pump_wavelength),
            signal: (Axis::Y, 2.0 * pump_wavelength),
            idler: (Axis::Z, 2.0 * pump_wavelength),
        }
    }
}

impl GroupData {
    pub fn new(v_p_inv: f64, v_s_inv: f64, v_i_inv: f64, dk0: f64) -> GroupData {
        GroupData {
            v_p_inv,
            v_s_inv,
            v_i_inv,
            dk0,
        }
    }

    pub fn from_material(material: &Material, waves: ThreeWave) -> Result<GroupData> {
        let (ap, lp) = waves.pump;
        let (as_, ls) = waves.signal;
        let (ai, li) = waves.idler;
        let (wp, ws, wi) = (
            wavelength_to_omega(lp),
            wavelength_to_omega(ls),
            wavelength_to_omega(li),
        );
        if ((ws + wi) - wp).abs() > 1e-9 * wp {
            return Err(Error::invalid(
                "signal and idler frequencies must sum to the pump frequency",
            ));
        }
        Ok(GroupData {
            v_p_inv: group_velocity_inverse(material, lp, ap)?,
            v_s_inv: group_velocity_inverse(material, ls, as_)?,
            v_i_inv: group_velocity_inverse(material, li, ai)?,
            dk0: material.wavenumber(wp, ap)?
                - material.wavenumber(ws, as_)?
                - material.wavenumber(wi, ai)?,
        })
    }

    /// Coefficient of the signal detuning in the linearized phase mismatch.
    pub fn signal_slope(&self) -> f64 {
        self.v_p_inv - self.v_s_inv
    }

    /// Coefficient of the idler detuning in the linearized phase mismatch.
    pub fn idler_slope(&self) -> f64 {
        self.v_p_inv - self.v_i_inv
    }

    /// Linearized phase mismatch at detunings `(ws, wi)`.
    pub fn delta_k(&self, ws: f64, wi: f64) -> f64 {
        self.dk0 + self.idler_slope() * wi + self.signal_slope() * ws
    }

    pub fn symmetric_deviation(&self) -> f64 {
        (self.v_p_inv - 0.5 * (self.v_s_inv + self.v_i_inv)).abs() / self.v_p_inv.abs()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric_deviation() < SYMMETRIC_GVM_TOLERANCE
    }

    /// Coherence length `pi / |dk0|`.
    pub fn coherence_length(&self) -> f64 {
        PI / self.dk0.abs()
    }

    pub fn theta(&self) -> Result<f64> {
        gvm_angle(self)
    }

    pub fn swapped(&self) -> GroupData {
        GroupData {
            v_s_inv: self.v_i_inv,
            v_i_inv: self.v_s_inv,
            ..*self
        }
    }
}

/// Orientation of the phase-matching function, `tan(theta) = -(v_p^-1 - v_s^-1)/(v_p^-1 - v_i^-1)`,
/// in `(-pi/2, pi/2]`.
pub fn gvm_angle(group: &GroupData) -> Result<f64> {
    let num = -group.signal_slope();
    let den = group.idler_slope();
    if num == 0.0 && den == 0.0 {
        return Err(Error::Degenerate(
            "pump, signal and idler group velocities coincide; the PMF has no orientation".into(),
        ));
    }
    if den == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let theta = (num / den).atan();
    // atan returns -pi/2 only in the limit; keep the half-open interval.
    Ok(if theta <= -FRAC_PI_2 {
        FRAC_PI_2
    } else {
        theta
    })
}

/// Dimensionless chirp `k w^2` acquired by `pulse` after `length` of
/// `material`, with `k` half the group delay dispersion and `w` the spectral
/// amplitude FWHM of the pump envelope.
pub fn chirp_parameter(
    material: &Material,
    axis: Axis,
    length: f64,
    pulse: &PulseSpec,
) -> Result<f64> {
    if length < 0.0 {
        return Err(Error::invalid("propagation length must be non-negative"));
    }
    let gdd = length * material.d2k_domega2(pulse.center_freq, axis, SECOND_DERIVATIVE_STEP)?;
    let k = 0.5 * gdd;
    let w = pulse.amplitude_fwhm();
    Ok(k * w * w)
}

/// Length of an unpoled or periodically poled crystal whose sinc PMF has the
/// separability-optimal width for a pump of temporal intensity FWHM `duration`.
pub fn crystal_length_for_pulse(
    duration: f64,
    pef: PefShape,
    pmf: PmfShape,
    group: &GroupData,
) -> Result<f64> {
    if pmf != PmfShape::Sinc {
        return Err(Error::invalid(
            "crystal length fixes the PMF width only for sinc phase matching",
        ));
    }
    if !group.is_symmetric() {
        return Err(Error::invalid(format!(
            "group data is not symmetric-GVM (deviation {:.3e})",
            group.symmetric_deviation()
        )));
    }
    if !(duration > 0.0) {
        return Err(Error::invalid("pulse duration must be positive"));
    }
    let pulse = PulseSpec::from_intensity_fwhm(pef, duration, 1.0)?;
    let sigma_pef = pulse.gaussian_equivalent_sigma();
    let xi = optimal_xi(pef, pmf);
    let kappa = match WidthParam::GaussianSigma(xi * sigma_pef).convert(PmfShape::Sinc.family()) {
        WidthParam::SincKappa(k) => k,
        _ => unreachable!("sinc conversion yields kappa"),
    };
    Ok(2.0 * kappa / group.idler_slope().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Golden indices from an independent evaluation of the tabulated formulas.
    const N_KTP_Y_791NM: f64 = 1.757_232_318_887_727_7;
    const N_BK7_400NM: f64 = 1.530_848_538_249_299_3;

    #[test]
    fn golden_indices() {
        let ktp = Material::ktp();
        assert_relative_eq!(
            ktp.refractive_index(791e-9, Axis::Y).unwrap(),
            N_KTP_Y_791NM,
            max_relative = 1e-12
        );
        let bk7 = Material::n_bk7();
        assert_relative_eq!(
            bk7.refractive_index(400e-9, Axis::Iso).unwrap(),
            N_BK7_400NM,
            max_relative = 1e-12
        );
    }

    #[test]
    fn out_of_range_is_an_error() {
        let err = Material::ktp()
            .refractive_index(10e-6, Axis::Y)
            .unwrap_err();
        match err {
            Error::OutOfRange { material, .. } => assert!(material.contains("KTP")),
            e => panic!("unexpected error {e}"),
        }
        assert!(Material::ktp().refractive_index(791e-9, Axis::Iso).is_err());
    }

    #[test]
    fn indices_exceed_one_across_ranges() {
        for m in MaterialLibrary::builtin().materials {
            for a in &m.axes {
                let (lo, hi) = a.range_um;
                for i in 0..100 {
                    let um = lo + (hi - lo) * i as f64 / 99.0;
                    let n = m.refractive_index(um * 1e-6, a.axis).unwrap();
                    assert!(n > 1.0, "{} {} at {um} um: {n}", m.name, a.axis);
                }
            }
        }
    }

    #[test]
    fn constant_material_group_index_is_phase_index() {
        let m = Material::constant("toy", 1.5, (0.2, 5.0));
        let v = group_velocity_inverse(&m, 800e-9, Axis::Iso).unwrap();
        assert_relative_eq!(v, 1.5 / SPEED_OF_LIGHT, max_relative = 1e-9);
    }

    #[test]
    fn group_velocity_stable_under_step_halving() {
        let ktp = Material::ktp();
        let w = wavelength_to_omega(791e-9);
        let a = ktp.dk_domega(w, Axis::Y, FIRST_DERIVATIVE_STEP).unwrap();
        let b = ktp
            .dk_domega(w, Axis::Y, FIRST_DERIVATIVE_STEP / 2.0)
            .unwrap();
        assert!(((a - b) / a).abs() < 1e-6);
    }

    #[test]
    fn central_differences_converge_quadratically() {
        let ktp = Material::ktp();
        let w = wavelength_to_omega(791e-9);
        let k = |x: f64| ktp.wavenumber(x, Axis::Y).unwrap();
        let reference = ktp.dk_domega(w, Axis::Y, 1e-4).unwrap();
        let plain = |h: f64| (k(w + h * w) - k(w - h * w)) / (2.0 * h * w);
        let e1 = (plain(4e-2) - reference).abs();
        let e2 = (plain(2e-2) - reference).abs();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn ktp_type2_791_is_symmetric() {
        let g = GroupData::from_material(&Material::ktp(), ThreeWave::ktp_type2_degenerate(791e-9))
            .unwrap();
        assert!(g.symmetric_deviation() < 1e-2);
        assert!(g.is_symmetric());
        assert_relative_eq!(g.theta().unwrap(), PI / 4.0, epsilon = 1e-2);
        // Quasi-phase-matching period close to 46 um.
        assert!((2.0 * g.coherence_length() - 46.1e-6).abs() < 0.2e-6);
    }

    #[test]
    fn gvm_angle_special_cases() {
        let g = GroupData::new(2.0, 1.0, 3.0, 0.0);
        assert_relative_eq!(gvm_angle(&g).unwrap(), PI / 4.0, epsilon = 1e-15);
        let g = GroupData::new(2.0, 2.0, 3.0, 0.0);
        assert_eq!(gvm_angle(&g).unwrap(), 0.0);
        let g = GroupData::new(2.0, 1.0, 2.0, 0.0);
        assert_eq!(gvm_angle(&g).unwrap(), FRAC_PI_2);
        assert!(gvm_angle(&GroupData::new(2.0, 2.0, 2.0, 0.0)).is_err());
    }

    #[test]
    fn library_text_roundtrip() {
        let lib = MaterialLibrary::builtin();
        let again = MaterialLibrary::parse(&lib.to_text(), Path::new("x")).unwrap();
        assert_eq!(lib, again);
    }

    #[test]
    fn library_parse_errors_report_line() {
        let err = MaterialLibrary::parse(
            "# header\nmaterial=a axis=q range_um=1,2 terms=const:1\n",
            Path::new("t"),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(MaterialLibrary::parse(
            "material=a axis=x range_um=2,1 terms=const:1",
            Path::new("t")
        )
        .is_err());
        assert!(MaterialLibrary::parse(
            "material=a axis=x range_um=1,2 terms=pole:1",
            Path::new("t")
        )
        .is_err());
    }
}
