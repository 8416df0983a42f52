//! The four subcommands. Each writes its artifacts under the output directory
//! and prints the paths it wrote.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use resonorm::bifurcation::rescale::{rescale, RescaledModel, Scaling};
use resonorm::bifurcation::{
    boundary_curves, boundary_curves_csv, classify_row, connection_curve, diagram_svg, linspace, DomainGrid,
    ModelHamiltonian,
};
use resonorm::homology::Variant;
use resonorm::levelset::{
    contour_samples, contours_csv, contours_svg, critical_energies, symmetry_defect, vertex_residual, ContourSet,
    GridSpec, PlanarHamiltonian, Samples, ScaledPlanar, NEIGHBOR_OFFSET,
};
use resonorm::normalform::{interpolate, simplify_autonomous, simplify_family, validate_shape};
use resonorm::verify::Suite;
use resonorm::{GradingScheme, ResonantSeries};

use crate::config::RunConfig;
use crate::error::CliError;

/// Writes `contents` to `out/<dir>/<name>` and reports the path.
fn emit(out: &Path, dir: &str, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let dir = out.join(dir);
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    println!("wrote {}", path.display());
    Ok(path)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

/// `b₀`, which must be given explicitly for `n = 6` and is ignored otherwise.
fn model_b0(cfg: &RunConfig, n: u32) -> Result<f64, CliError> {
    match (n, cfg.b0) {
        (6, Some(b0)) => Ok(b0),
        (6, None) => Err(CliError::Input("n = 6 needs --b0".into())),
        (_, b0) => Ok(b0.unwrap_or(1.0)),
    }
}

fn family_tag(n: u32, b0: f64) -> String {
    if n == 6 {
        format!("n6_b0{b0}")
    } else {
        format!("n{n}")
    }
}

pub fn normalize(cfg: &RunConfig) -> Result<(), CliError> {
    let input = cfg.input.as_ref().ok_or_else(|| CliError::Input("normalize needs an input series file".into()))?;
    let text = std::fs::read_to_string(input).map_err(|e| CliError::io(input, e))?;
    let series = ResonantSeries::from_json(&text).map_err(|e| match e {
        resonorm::Error::Parse(m) => resonorm::Error::Parse(format!("{}: {m}", input.display())),
        other => other,
    })?;
    let n = series.n();
    if let Some(want) = cfg.n {
        if want != n {
            return Err(CliError::Input(format!("--n {want} disagrees with the series order {n}")));
        }
    }
    let variant = match cfg.variant.as_deref() {
        None | Some("standard") => Variant::Standard,
        Some("alt-n6") => Variant::AltN6,
        Some(other) => return Err(CliError::Input(format!("unknown variant {other:?} (expected standard or alt-n6)"))),
    };
    let family = series.scheme().is_family();
    let h = if cfg.map.unwrap_or(false) {
        if family {
            return Err(CliError::Input("--map applies to autonomous series only".into()));
        }
        let g = series.regrade(GradingScheme::PolyOrder);
        interpolate(&g, g.truncation())?
    } else {
        series
    };
    let natural = if family { GradingScheme::family_for(n) } else { GradingScheme::autonomous_for(n) };
    let truncation = cfg.truncation.unwrap_or_else(|| h.regrade(natural).truncation());
    let nf = if family {
        simplify_family(&h, truncation, variant)?
    } else {
        simplify_autonomous(&h, truncation, variant)?
    };
    let shape = validate_shape(&nf);
    if !shape.passed() {
        let names: Vec<&str> = shape.failures().iter().map(|c| c.name.as_str()).collect();
        return Err(CliError::Verification(format!("normal form fails its shape checks: {}", names.join(", "))));
    }
    let stem = input.file_stem().map_or("series".into(), |s| s.to_string_lossy().into_owned());
    let out = cfg.out_dir();
    let mut json = nf.to_json();
    json.push('\n');
    emit(&out, "normalforms", &format!("{stem}.nf.json"), &json)?;
    emit(&out, "normalforms", &format!("{stem}.nf.txt"), &nf.table())?;
    Ok(())
}

pub fn bifurcate(cfg: &RunConfig) -> Result<(), CliError> {
    let n = cfg.require_n()?;
    let b0 = model_b0(cfg, n)?;
    ModelHamiltonian::new(n, 0.0, 0.0, b0)?;
    let (lo, hi, steps) = cfg.nu_range()?;
    let (w, h) = cfg.grid((100, 100))?;

    let curves = boundary_curves(n, b0, lo, hi, steps)?;
    let reach = curves.iter().map(|c| c.delta_exact.abs()).fold(0.0, f64::max);
    let reach = if reach > 0.0 { 1.25 * reach } else { 0.01 };
    let deltas = linspace(-reach, reach, w);
    let nus = linspace(lo, hi, h);
    let labels = nus.par_iter().map(|&nu| classify_row(n, b0, nu, &deltas)).collect::<Result<Vec<_>, _>>()?;
    let grid = DomainGrid { deltas, nus, labels };

    let connection: Vec<(f64, f64)> = linspace(lo, hi, steps + 1)
        .par_iter()
        .filter_map(|&nu| connection_curve(n, nu, b0).ok().map(|d| (nu, d)))
        .collect();
    let mut connection_csv = String::from("nu,delta\n");
    for (nu, d) in &connection {
        connection_csv.push_str(&format!("{nu},{d}\n"));
    }

    let tag = family_tag(n, b0);
    let out = cfg.out_dir();
    emit(&out, "curves", &format!("boundaries_{tag}.csv"), &boundary_curves_csv(&curves))?;
    emit(&out, "curves", &format!("connection_{tag}.csv"), &connection_csv)?;
    emit(&out, "grids", &format!("domains_{tag}.csv"), &grid.to_csv())?;
    emit(&out, "figures", &format!("bifurcation_{tag}.svg"), &diagram_svg(n, b0, &grid, &curves))?;
    Ok(())
}

/// The planar Hamiltonian selected by the configuration, with a file tag.
fn planar_model(cfg: &RunConfig) -> Result<(Box<dyn PlanarHamiltonian>, String), CliError> {
    let Some(name) = &cfg.scaled else {
        let n = cfg.require_n()?;
        let b0 = model_b0(cfg, n)?;
        let delta = cfg.delta.ok_or_else(|| CliError::Input("levels needs --delta".into()))?;
        let nu = cfg.nu.ok_or_else(|| CliError::Input("levels needs --nu".into()))?;
        let model = ModelHamiltonian::new(n, delta, nu, b0)?;
        return Ok((Box::new(model), format!("{}_delta{delta}_nu{nu}", family_tag(n, b0))));
    };
    let scaling = Scaling::from_name(name)?;
    let n = cfg.n.unwrap_or(if scaling == Scaling::N6 { 6 } else { 5 });
    let expected = match scaling {
        Scaling::Outer | Scaling::Cubic => Some(5),
        Scaling::N6 => Some(6),
        _ => None,
    };
    if expected.is_some_and(|e| e != n) {
        return Err(CliError::Input(format!("the {name} scaling applies to n = {}", expected.unwrap_or(n))));
    }
    let model = match (scaling, cfg.delta, cfg.nu) {
        (Scaling::Outer, _, _) => RescaledModel::outer_limit(),
        (Scaling::Cubic, None, None) => RescaledModel::cubic_limit(resonorm::bifurcation::rescale::cubic_connection()?),
        (_, Some(delta), Some(nu)) => rescale(&ModelHamiltonian::new(n, delta, nu, model_b0(cfg, n)?)?, scaling)?,
        _ => return Err(CliError::Input(format!("the {name} scaling needs --delta and --nu"))),
    };
    let planar = ScaledPlanar::new(model)?;
    let tag = match scaling {
        Scaling::Outer => "scaled_outer".to_string(),
        _ => format!("scaled_{name}_a{}", model.a),
    };
    Ok((Box::new(planar), tag))
}

#[derive(Serialize)]
struct LevelReport {
    level: f64,
    critical: bool,
    polylines: usize,
    closed: usize,
    vertices: usize,
    /// Largest `|h − level|` at a vertex over the spread of `h` in its cell.
    residual_cells: f64,
    /// In cell diagonals.
    symmetry_defect: f64,
}

#[derive(Serialize)]
struct LevelsReport<'a> {
    order: u32,
    grid: GridSpec,
    critical_energies: &'a [f64],
    levels: Vec<LevelReport>,
}

pub fn levels(cfg: &RunConfig) -> Result<(), CliError> {
    let (model, tag) = planar_model(cfg)?;
    let h = model.as_ref();
    let (w, ny) = cfg.grid((512, 512))?;
    let grid = GridSpec::auto(h, w, ny)?;
    let samples = Samples::new(h, grid);
    let (lo, hi) = samples.range();

    let energies = critical_energies(h);
    let offset = NEIGHBOR_OFFSET * (hi - lo);
    let mut wanted: Vec<(f64, bool)> = Vec::new();
    for &e in &energies {
        wanted.push((e, true));
        if cfg.neighbors.unwrap_or(false) {
            wanted.push((e - offset, false));
            wanted.push((e + offset, false));
        }
    }
    if !cfg.critical.unwrap_or(false) {
        match &cfg.levels {
            Some(list) => wanted.extend(list.iter().map(|&l| (l, false))),
            None => wanted.extend((1..10).map(|k| (lo + (hi - lo) * k as f64 / 10.0, false))),
        }
    }
    wanted.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    wanted.dedup_by(|a, b| a.0 == b.0);
    if energies.is_empty() {
        eprintln!("note: the model has no saddle, so there is no critical level set");
    }

    let sets: Vec<ContourSet> = wanted
        .par_iter()
        .map(|&(level, critical)| ContourSet { critical, ..contour_samples(h, &samples, level) })
        .collect();
    let reports = sets
        .par_iter()
        .map(|s| LevelReport {
            level: s.level,
            critical: s.critical,
            polylines: s.polylines.len(),
            closed: s.polylines.iter().filter(|p| p.closed).count(),
            vertices: s.vertex_count(),
            residual_cells: vertex_residual(h, s, &samples).1,
            symmetry_defect: symmetry_defect(s, h.order(), grid),
        })
        .collect();
    let report = LevelsReport { order: h.order(), grid, critical_energies: &energies, levels: reports };

    let out = cfg.out_dir();
    emit(&out, "curves", &format!("levels_{tag}.csv"), &contours_csv(&sets))?;
    emit(&out, "figures", &format!("levels_{tag}.svg"), &contours_svg(&sets, grid, &tag))?;
    emit(&out, "reports", &format!("levels_{tag}.json"), &to_json(&report))?;
    Ok(())
}

#[derive(Serialize)]
struct OutcomeRecord<'a> {
    suite: &'a str,
    name: &'a str,
    passed: bool,
    detail: &'a str,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    suite: &'a str,
    seed: u64,
    passed: bool,
    outcomes: Vec<OutcomeRecord<'a>>,
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let name = cfg.suite.as_deref().unwrap_or("all");
    let suites: Vec<Suite> = if name == "all" { Suite::ALL.to_vec() } else { vec![Suite::from_name(name)?] };
    let seed = cfg.seed.unwrap_or(0);
    let results = suites.par_iter().map(|s| s.run(seed)).collect::<Result<Vec<_>, _>>()?;

    let mut records = Vec::new();
    for (suite, outcomes) in suites.iter().zip(&results) {
        for o in outcomes {
            println!("{} {}/{}: {}", if o.passed { "PASS" } else { "FAIL" }, suite.name(), o.name, o.detail);
            records.push(OutcomeRecord { suite: suite.name(), name: &o.name, passed: o.passed, detail: &o.detail });
        }
    }
    let failed: Vec<String> =
        records.iter().filter(|r| !r.passed).map(|r| format!("{}/{}", r.suite, r.name)).collect();
    let report = VerifyReport { suite: name, seed, passed: failed.is_empty(), outcomes: records };
    emit(&cfg.out_dir(), "reports", &format!("verify_{name}.json"), &to_json(&report))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{} check(s) failed: {}", failed.len(), failed.join(", "))))
    }
}
