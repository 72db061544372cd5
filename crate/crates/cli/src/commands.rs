use std::path::{Path, PathBuf};

use pdc_core::characterize::{
    crystal_length_curve, fmt_num, jsi_counting_montecarlo, optimize_xi, poling_errors, purity_map,
    reference_purity, sweep_chirp, sweep_resolution, sweep_spectral_range, sweep_xi, write_json,
    Imperfection, Model, DEFAULT_BINS, DEFAULT_ZETA, SHAPE_PAIRS,
};
use pdc_core::hom::{hom_pattern, DEFAULT_DELAY_POINTS, DEFAULT_DELAY_SPAN};
use pdc_core::poling::{pmf_survey, standard_structures, DomainStructure, QpmConfig};
use pdc_core::{build_jsa, purity, JointAmplitude, PefShape, PmfShape};
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

type Outputs = Result<Vec<PathBuf>, CliError>;

pub fn run(mut cfg: RunConfig) -> Outputs {
    std::fs::create_dir_all(&cfg.out)?;
    let mut files = match cfg.command.as_str() {
        "table1" => table1(&mut cfg),
        "xi-sweep" => xi_sweep(&mut cfg),
        "crystal-length" => crystal_length(&mut cfg),
        "chirp-sweep" => chirp_sweep(&mut cfg),
        "poling-errors" => poling(&mut cfg),
        "pmf-survey" => survey(&mut cfg),
        "range-sweep" => range_sweep(&mut cfg),
        "resolution-sweep" => resolution_sweep(&mut cfg),
        "purity-map" => map(&mut cfg),
        "jsi-counts" => counts(&mut cfg),
        "hom" => hom(&mut cfg),
        other => Err(CliError::Usage(format!("unknown command '{other}'"))),
    }?;
    files.push(cfg.write()?);
    Ok(files)
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("{name} must be positive, got {x}")))
    }
}

fn grid_of(cfg: &mut RunConfig, zeta: f64, bins: usize) -> Result<(f64, usize), CliError> {
    let zeta = positive("--zeta", *cfg.zeta.get_or_insert(zeta))?;
    let bins = *cfg.bins.get_or_insert(bins);
    if bins < 2 {
        return Err(CliError::Usage(format!(
            "--bins must be at least 2, got {bins}"
        )));
    }
    Ok((zeta, bins))
}

/// Shape pairs selected by `--pef` / `--pmf`; all four when neither is given.
fn pairs(cfg: &RunConfig) -> Result<Vec<(PefShape, PmfShape)>, CliError> {
    let pmf = cfg.pmf_shape()?;
    Ok(SHAPE_PAIRS
        .into_iter()
        .filter(|(e, m)| cfg.pef.is_none_or(|p| p == *e) && pmf.is_none_or(|p| p == *m))
        .collect())
}

fn single_model(cfg: &mut RunConfig) -> Result<Model, CliError> {
    let pef = *cfg.pef.get_or_insert(PefShape::Sech);
    let pmf = match cfg.pmf_shape()? {
        Some(p) => p,
        None => {
            cfg.pmf = Some(PmfShape::Sinc.to_string());
            PmfShape::Sinc
        }
    };
    let mut model = Model::optimal(pef, pmf);
    model.xi = positive("--xi", *cfg.xi.get_or_insert(model.xi))?;
    let kw2 = *cfg.kw2.get_or_insert(0.0);
    if !kw2.is_finite() {
        return Err(CliError::Usage("--kw2 must be finite".into()));
    }
    Ok(model.with_chirp(kw2))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
        .collect()
}

fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![b];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

fn pair_tag(pef: PefShape, pmf: PmfShape) -> String {
    format!("{pef}_{pmf}")
}

fn write_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut text = header.join(",");
    text.push('\n');
    for r in rows {
        text.push_str(&r.join(","));
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn table1(cfg: &mut RunConfig) -> Outputs {
    let (zeta, bins) = grid_of(cfg, DEFAULT_ZETA, DEFAULT_BINS)?;
    let mut rows = Vec::new();
    for (pef, pmf) in pairs(cfg)? {
        let opt = optimize_xi(pef, pmf, zeta, bins)?;
        rows.push(vec![
            pef.to_string(),
            pmf.to_string(),
            fmt_num(opt.xi),
            fmt_num(opt.purity),
        ]);
    }
    let path = cfg.out.join("table1.csv");
    write_rows(&path, &["pef", "pmf", "xi", "purity"], &rows)?;
    Ok(vec![path])
}

fn xi_sweep(cfg: &mut RunConfig) -> Outputs {
    let (zeta, bins) = grid_of(cfg, DEFAULT_ZETA, DEFAULT_BINS)?;
    let values = cfg
        .values
        .get_or_insert_with(|| linspace(0.2, 3.0, 57))
        .clone();
    let mut files = Vec::new();
    for (pef, pmf) in pairs(cfg)? {
        let s = sweep_xi(Model::new(pef, pmf, 1.0), &values, zeta, bins)?;
        files.extend(write_sweep(
            &cfg.out,
            &format!("xi_sweep_{}", pair_tag(pef, pmf)),
            &s,
            cfg.seed,
        )?);
    }
    Ok(files)
}

fn write_sweep(
    out: &Path,
    stem: &str,
    sweep: &pdc_core::SweepResult,
    seed: u64,
) -> Result<Vec<PathBuf>, CliError> {
    let mut sweep = sweep.clone();
    sweep.meta.seed = Some(seed);
    let csv = out.join(format!("{stem}.csv"));
    let json = out.join(format!("{stem}.json"));
    sweep.write_csv(&csv)?;
    sweep.write_json(&json)?;
    Ok(vec![csv, json])
}

fn crystal_length(cfg: &mut RunConfig) -> Outputs {
    let fs = cfg
        .values
        .get_or_insert_with(|| linspace(50.0, 1000.0, 39))
        .clone();
    let durations: Vec<f64> = fs.iter().map(|t| t * 1e-15).collect();
    let group = QpmConfig::ktp_default()?.group;
    let shapes: Vec<PefShape> = match cfg.pef {
        Some(p) => vec![p],
        None => vec![PefShape::Gaussian, PefShape::Sech],
    };
    if let Some(PmfShape::Gaussian) = cfg.pmf_shape()? {
        return Err(CliError::Usage(
            "crystal-length applies to sinc phase matching only".into(),
        ));
    }
    let mut rows = Vec::new();
    for pef in shapes {
        for p in crystal_length_curve(pef, &group, &durations)? {
            rows.push(vec![
                pef.to_string(),
                fmt_num(p.duration),
                fmt_num(p.length),
            ]);
        }
    }
    let path = cfg.out.join("crystal_length.csv");
    write_rows(&path, &["pef", "duration_s", "length_m"], &rows)?;
    Ok(vec![path])
}

fn chirp_sweep(cfg: &mut RunConfig) -> Outputs {
    let (zeta, bins) = grid_of(cfg, DEFAULT_ZETA, DEFAULT_BINS)?;
    let values = cfg
        .values
        .get_or_insert_with(|| linspace(0.0, 4.0, 41))
        .clone();
    let mut files = Vec::new();
    for (pef, pmf) in pairs(cfg)? {
        let s = sweep_chirp(pef, pmf, &values, zeta, bins)?;
        files.extend(write_sweep(
            &cfg.out,
            &format!("chirp_sweep_{}", pair_tag(pef, pmf)),
            &s,
            cfg.seed,
        )?);
    }
    Ok(files)
}

fn default_levels(kind: Imperfection) -> Vec<f64> {
    match kind {
        Imperfection::OverPoling => linspace(0.0, 0.15, 7),
        Imperfection::WallJitter => linspace(0.0, 0.12, 7),
        Imperfection::MissedDomains => linspace(0.0, 0.2, 9),
    }
}

fn kind_tag(kind: Imperfection) -> &'static str {
    match kind {
        Imperfection::OverPoling => "over_poling",
        Imperfection::WallJitter => "wall_jitter",
        Imperfection::MissedDomains => "missed_domains",
    }
}

fn poling(cfg: &mut RunConfig) -> Outputs {
    let config = QpmConfig::ktp_default()?;
    let structures: Vec<DomainStructure> = match cfg.custom_structure()? {
        Some(d) => vec![d],
        None => standard_structures(config.coherence_length)?.to_vec(),
    };
    let kinds = match cfg.imperfection()? {
        Some(k) => vec![k],
        None => {
            if cfg.levels.is_some() {
                return Err(CliError::Usage("--levels needs a single --kind".into()));
            }
            cfg.kind = Some("all".into());
            vec![
                Imperfection::OverPoling,
                Imperfection::WallJitter,
                Imperfection::MissedDomains,
            ]
        }
    };
    let trials = *cfg.trials.get_or_insert(100);
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let mut files = Vec::new();
    for kind in kinds {
        let levels = match &cfg.levels {
            Some(l) => l.clone(),
            None => default_levels(kind),
        };
        if let Some(bad) = levels.iter().find(|l| !(**l >= 0.0)) {
            return Err(CliError::Usage(format!(
                "imperfection levels must be non-negative, got {bad}"
            )));
        }
        let study = poling_errors(&config, &structures, kind, &levels, trials, cfg.seed)?;
        let stem = format!("poling_{}", kind_tag(kind));
        let csv = cfg.out.join(format!("{stem}.csv"));
        study.write_csv(&csv)?;
        let json = cfg.out.join(format!("{stem}.json"));
        write_json(&json, &study)?;
        files.extend([csv, json]);
    }
    Ok(files)
}

fn survey(cfg: &mut RunConfig) -> Outputs {
    let config = QpmConfig::ktp_default()?;
    let lc = config.coherence_length;
    let structures: Vec<DomainStructure> = match cfg.custom_structure()? {
        Some(d) => vec![d],
        None => {
            let mut v = standard_structures(lc)?.to_vec();
            v.push(DomainStructure::unpoled(v[0].length(), lc)?);
            v
        }
    };
    let points = *cfg.points.get_or_insert(5001);
    let lo = *cfg.dk_min.get_or_insert(-1.0);
    let hi = *cfg.dk_max.get_or_insert(4.0);
    if points < 2 || !(hi > lo) {
        return Err(CliError::Usage(
            "survey needs --dk-max > --dk-min and at least 2 points".into(),
        ));
    }
    let mut files = Vec::new();
    for d in &structures {
        let unit = std::f64::consts::PI / d.coherence_length();
        let s = pmf_survey(d, lo * unit, hi * unit, points)?;
        let csv = cfg.out.join(format!("pmf_survey_{}.csv", d.method()));
        s.write_csv(&csv)?;
        let pattern = cfg.out.join(format!("domains_{}.txt", d.method()));
        d.write_pattern(&pattern)?;
        files.extend([csv, pattern]);
    }
    Ok(files)
}

fn range_sweep(cfg: &mut RunConfig) -> Outputs {
    let model = single_model(cfg)?;
    let zetas = cfg
        .values
        .get_or_insert_with(|| geomspace(2.0, 200.0, 41))
        .clone();
    let sizes = cfg.sizes.get_or_insert_with(|| vec![30, 150]).clone();
    let mut files = Vec::new();
    for n in sizes {
        let s = sweep_spectral_range(model, &zetas, n)?;
        files.extend(write_sweep(
            &cfg.out,
            &format!("range_sweep_n{n}"),
            &s,
            cfg.seed,
        )?);
    }
    Ok(files)
}

fn resolution_sweep(cfg: &mut RunConfig) -> Outputs {
    let model = single_model(cfg)?;
    let zetas = cfg.values.get_or_insert_with(|| vec![10.0, 40.0]).clone();
    let sizes = cfg
        .sizes
        .get_or_insert_with(|| (1..=40).map(|k| 10 * k).collect())
        .clone();
    let mut files = Vec::new();
    for zeta in zetas {
        let s = sweep_resolution(model, &sizes, zeta)?;
        files.extend(write_sweep(
            &cfg.out,
            &format!("resolution_sweep_zeta{zeta}"),
            &s,
            cfg.seed,
        )?);
    }
    Ok(files)
}

#[derive(Serialize)]
struct Reference {
    model: Model,
    zeta: f64,
    n_bins: usize,
    purity: f64,
}

fn map(cfg: &mut RunConfig) -> Outputs {
    let model = single_model(cfg)?;
    let zeta_max = positive("--zeta-max", *cfg.zeta_max.get_or_insert(630.0))?;
    let n_max = *cfg.n_max.get_or_insert(3000);
    let zp = *cfg.zeta_points.get_or_insert(12);
    let np = *cfg.n_points.get_or_insert(10);
    if n_max < 10 || zeta_max <= 2.0 || zp < 1 || np < 1 {
        return Err(CliError::Usage(
            "purity map needs --n-max >= 10, --zeta-max > 2 and at least one point per axis".into(),
        ));
    }
    let zetas = geomspace(2.0, zeta_max, zp);
    let mut sizes: Vec<usize> = geomspace(10.0, n_max as f64, np)
        .iter()
        .map(|n| n.round() as usize)
        .collect();
    sizes.dedup();
    let m = purity_map(model, &zetas, &sizes)?;
    let csv = cfg.out.join("purity_map.csv");
    m.write_csv(&csv)?;
    let r = reference_purity(model, cfg.fast)?;
    let json = cfg.out.join("purity_map_reference.json");
    write_json(
        &json,
        &Reference {
            model,
            zeta: r.zeta,
            n_bins: r.n_bins,
            purity: r.purity,
        },
    )?;
    Ok(vec![csv, json])
}

fn counts(cfg: &mut RunConfig) -> Outputs {
    let model = single_model(cfg)?;
    let (zeta, bins) = grid_of(cfg, 10.0, 100)?;
    let max_counts = cfg
        .max_counts
        .get_or_insert_with(|| geomspace(1.0, 1.0e4, 17))
        .clone();
    let trials = *cfg.trials.get_or_insert(1000);
    let jsi = model.jsa(zeta, bins)?.to_intensity();
    let study = jsi_counting_montecarlo(&jsi, &max_counts, trials, cfg.seed)?;
    let csv = cfg.out.join("jsi_counts.csv");
    study.write_csv(&csv)?;
    let json = cfg.out.join("jsi_counts.json");
    write_json(&json, &study)?;
    Ok(vec![csv, json])
}

#[derive(Serialize)]
struct HomSummary<'a> {
    visibility: f64,
    purity: f64,
    n_min: f64,
    n_max: f64,
    config: &'a RunConfig,
}

fn hom(cfg: &mut RunConfig) -> Outputs {
    let (jsa, tag): (JointAmplitude, String) = match cfg.custom_structure()? {
        Some(d) => {
            let q = QpmConfig::ktp_default()?;
            (
                build_jsa(&q.pulse, &q.pmf(&d), &q.grid)?,
                format!("custom_{}", d.method()),
            )
        }
        None => {
            let model = single_model(cfg)?;
            let (zeta, bins) = grid_of(cfg, DEFAULT_ZETA, DEFAULT_BINS)?;
            let tag = format!("{}_kw2_{}", pair_tag(model.pef, model.pmf), model.kw2);
            (model.jsa(zeta, bins)?, tag)
        }
    };
    let n = *cfg.points.get_or_insert(DEFAULT_DELAY_POINTS);
    if n < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let span = DEFAULT_DELAY_SPAN / jsa.mean_marginal_fwhm()?;
    let delays = linspace(-span, span, n);
    let pattern = hom_pattern(&jsa, &delays)?;
    let csv = cfg.out.join(format!("hom_{tag}.csv"));
    pattern.write_csv(&csv)?;
    let json = cfg.out.join(format!("hom_{tag}.json"));
    write_json(
        &json,
        &HomSummary {
            visibility: pattern.visibility,
            purity: purity(&jsa.values)?,
            n_min: pattern.n_min,
            n_max: pattern.n_max,
            config: &*cfg,
        },
    )?;
    Ok(vec![csv, json])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_helpers() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        let g = geomspace(1.0, 100.0, 3);
        assert!((g[1] - 10.0).abs() < 1e-12 && (g[2] - 100.0).abs() < 1e-9);
        assert_eq!(geomspace(2.0, 5.0, 1), vec![5.0]);
    }

    #[test]
    fn pair_selection() {
        let mut cfg = RunConfig::default();
        assert_eq!(pairs(&cfg).unwrap().len(), 4);
        cfg.pef = Some(PefShape::Sech);
        assert_eq!(pairs(&cfg).unwrap().len(), 2);
        cfg.pmf = Some("sinc".into());
        assert_eq!(pairs(&cfg).unwrap(), vec![(PefShape::Sech, PmfShape::Sinc)]);
    }
}
