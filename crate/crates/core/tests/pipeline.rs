//! End-to-end runs through the poled-crystal path: build a domain layout,
//! save and reload it, evaluate the PMF two ways, then purity and HOM.

use pdc_core::hom::{default_delays, hom_pattern};
use pdc_core::jsa::build_jsa;
use pdc_core::poling::{
    pmf_from_domains, pmf_from_walls, standard_structures, DomainStructure, QpmConfig,
};
use pdc_core::schmidt::purity;
use proptest::prelude::*;

#[test]
fn pattern_round_trip_keeps_purity() {
    let config = QpmConfig::ktp_default().unwrap();
    let dir = tempfile::tempdir().unwrap();
    for d in standard_structures(config.coherence_length).unwrap() {
        let path = dir.path().join(format!("{:?}.txt", d.method()));
        d.write_pattern(&path).unwrap();
        let back = DomainStructure::read_pattern(&path).unwrap();
        assert_eq!(back.signs(), d.signs());
        for (a, b) in back.widths().iter().zip(d.widths()) {
            assert!((a - b).abs() <= 1e-12 * b, "width {a} vs {b}");
        }
        let (p0, p1) = (config.purity(&d).unwrap(), config.purity(&back).unwrap());
        assert!((p0 - p1).abs() < 1e-9, "{:?}: {p0} vs {p1}", d.method());
    }
}

#[test]
fn apodized_crystals_are_purer_than_periodic() {
    let config = QpmConfig::ktp_default().unwrap();
    let [periodic, duty, orient] = standard_structures(config.coherence_length).unwrap();
    let p = config.purity(&periodic).unwrap();
    let pd = config.purity(&duty).unwrap();
    let po = config.purity(&orient).unwrap();
    assert!(p < 0.86, "periodic {p}");
    assert!(
        pd > p + 0.08 && po > p + 0.08,
        "periodic {p} duty {pd} orientation {po}"
    );
}

#[test]
fn hom_visibility_tracks_purity_for_poled_crystal() {
    let config = QpmConfig::ktp_default().unwrap();
    let [_, _, orient] = standard_structures(config.coherence_length).unwrap();
    let j = build_jsa(&config.pulse, &config.pmf(&orient), &config.grid).unwrap();
    let p = purity(&j.values).unwrap();
    let pattern = hom_pattern(&j, &default_delays(&j).unwrap()).unwrap();
    assert!(
        (pattern.visibility - p).abs() < 1e-3,
        "V {} P {p}",
        pattern.visibility
    );
    assert!(pattern
        .coincidence_prob
        .iter()
        .all(|&c| (-1e-12..=0.5 + 1e-12).contains(&c)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Domain sums and the wall-only form are two routes to the same integral.
    #[test]
    fn pmf_domain_and_wall_forms_agree(dk_scale in -1.0..3.0f64) {
        let config = QpmConfig::ktp_default().unwrap();
        let lc = config.coherence_length;
        let [periodic, duty, _] = standard_structures(lc).unwrap();
        let dk = dk_scale * std::f64::consts::PI / lc;
        for d in [&periodic, &duty] {
            let a = pmf_from_domains(d, &[dk])[0];
            let b = pmf_from_walls(d, dk);
            let scale = d.length();
            prop_assert!((a - b).norm() <= 1e-9 * scale, "{a} vs {b}");
        }
    }
}
