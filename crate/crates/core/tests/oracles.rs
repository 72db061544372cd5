//! Grid results checked against closed forms and hand-rolled references that
//! share no code with the library.

use std::f64::consts::{LN_2, PI};

use pdc_core::characterize::Model;
use pdc_core::dispersion::{chirp_parameter, wavelength_to_omega, Axis, Material};
use pdc_core::spectral::PulseSpec;
use pdc_core::{PefShape, PmfShape};

/// Purity of `f(x, y) = exp(-a x^2 - a y^2 - 2 c x y)` from Gaussian integrals
/// over the heralded density matrix, for complex `a`, `c` with `Re a > |Re c|`.
fn gaussian_state_purity(a: (f64, f64), c: (f64, f64)) -> f64 {
    let r = a.0;
    let (cr, ci) = c;
    let c2_re = cr * cr - ci * ci;
    let c_abs2 = cr * cr + ci * ci;
    let p = 2.0 * r - c2_re / r;
    let q = c_abs2 / r;
    let trace = 2.0 * r - 2.0 * cr * cr / r;
    trace / (p * p - q * q).sqrt()
}

/// Gaussian pump of unit sigma with chirp `kw2`, Gaussian PMF of width `xi`.
fn gg_closed_form(xi: f64, kw2: f64) -> f64 {
    let w = 2.0 * (2.0 * LN_2).sqrt();
    let k = kw2 / (w * w);
    // exp(-alpha u^2 - beta v^2), u = x + y, v = x - y
    let alpha = (0.5, k);
    let beta = 0.5 / (xi * xi);
    gaussian_state_purity((alpha.0 + beta, alpha.1), (alpha.0 - beta, alpha.1))
}

#[test]
fn closed_form_is_sane() {
    assert!((gg_closed_form(1.0, 0.0) - 1.0).abs() < 1e-12);
    // Unchirped Gaussian with ratio xi: P = 2 xi / (1 + xi^2).
    for xi in [0.5, 0.8, 1.7] {
        let want = 2.0 * xi / (1.0 + xi * xi);
        assert!((gg_closed_form(xi, 0.0) - want).abs() < 1e-12);
    }
}

#[test]
fn gaussian_grid_purity_matches_closed_form() {
    for &(xi, kw2) in &[
        (1.0, 0.0),
        (0.6, 0.0),
        (1.5, 0.0),
        (1.0, 1.0),
        (1.0, 2.1),
        (0.8, 3.0),
    ] {
        let grid = Model::new(PefShape::Gaussian, PmfShape::Gaussian, xi)
            .with_chirp(kw2)
            .purity(40.0, 300)
            .unwrap();
        let exact = gg_closed_form(xi, kw2);
        assert!(
            (grid - exact).abs() < 2e-4,
            "xi {xi} kw2 {kw2}: grid {grid} closed form {exact}"
        );
    }
}

const C: f64 = 299_792_458.0;

/// Sellmeier index with wavelength in metres and `cs` in um^2.
fn sellmeier(bs: [f64; 3], cs: [f64; 3], lambda: f64) -> f64 {
    let l2 = (lambda * 1e6).powi(2);
    let n2 = 1.0 + (0..3).map(|i| bs[i] * l2 / (l2 - cs[i])).sum::<f64>();
    n2.sqrt()
}

/// GDD per metre from the wavelength-domain form, `lambda^3 / (2 pi c^2) n''`.
fn gvd_from_lambda(n: impl Fn(f64) -> f64, lambda: f64) -> f64 {
    let h = 2e-9;
    let d2 = (-n(lambda + 2.0 * h) + 16.0 * n(lambda + h) - 30.0 * n(lambda)
        + 16.0 * n(lambda - h)
        - n(lambda - 2.0 * h))
        / (12.0 * h * h);
    lambda.powi(3) / (2.0 * PI * C * C) * d2
}

fn sech_amplitude_fwhm_from_duration(duration: f64) -> f64 {
    // sech^2(t / tau) in time, sech(pi tau w / 2) in frequency
    let tau = duration / (2.0 * 2f64.sqrt().acosh());
    4.0 * 2f64.acosh() / (PI * tau)
}

#[test]
fn chirp_parameter_matches_wavelength_domain_reference() {
    let bk7 = |l: f64| {
        sellmeier(
            [1.03961212, 0.231792344, 1.01046945],
            [0.00600069867, 0.0200179144, 103.560653],
            l,
        )
    };
    let silica = |l: f64| {
        sellmeier(
            [0.6961663, 0.4079426, 0.8974794],
            [
                0.0684043f64.powi(2),
                0.1162414f64.powi(2),
                9.896161f64.powi(2),
            ],
            l,
        )
    };
    let lambda = 400e-9;
    let cases: [(Material, &dyn Fn(f64) -> f64, f64, f64); 3] = [
        (Material::n_bk7(), &bk7, 0.01, 50e-15),
        (Material::n_bk7(), &bk7, 0.01, 200e-15),
        (Material::fused_silica(), &silica, 0.30, 200e-15),
    ];
    for (m, n, len, dur) in cases {
        let w = sech_amplitude_fwhm_from_duration(dur);
        let want = 0.5 * gvd_from_lambda(n, lambda) * len * w * w;
        let pulse =
            PulseSpec::from_intensity_fwhm(PefShape::Sech, dur, wavelength_to_omega(lambda))
                .unwrap();
        let got = chirp_parameter(&m, Axis::Iso, len, &pulse).unwrap();
        assert!(
            (got / want - 1.0).abs() < 5e-3,
            "{}: library {got} reference {want}",
            m.name
        );
    }
}
