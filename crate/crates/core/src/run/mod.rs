//! Command runner behind the `ghm` binary.
//!
//! A [`RunConfig`] names one subcommand, a map source and the numerical
//! parameters. [`execute`] writes `config.json` (the resolved configuration)
//! and the subcommand outputs into `out`. With a fixed seed every CSV and
//! JSON output is byte-identical across runs and across `threads` settings:
//! all parallel work uses per-item random streams and order-independent
//! reductions.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::expansion::{beta_mu_estimate, coverage_partition, refinement_change};
use crate::geometry::{graph_points, point, StripRegion};
use crate::io::{self, SvgCanvas};
use crate::map::{load_map_spec_file, validate_hyperbolicity, FamilyParams, GhmMap};
use crate::stats::{clt_diagnostic, correlation_series, push_cloud, CloudOptions, Observable};
use crate::symbolic::{attractor_cells, manifold_approx, refine_strip, Word};
use crate::transfer::{sobolev_diagnostic, spectral_gap, stationary_density, ulam_matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Validate,
    Strips,
    Manifolds,
    Attractor,
    Density,
    Gap,
    Vexp,
    Stats,
}

impl FromStr for Command {
    type Err = GhmError;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_owned()))
            .map_err(|_| GhmError::InvalidParameter(format!("unknown subcommand {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapSource {
    Family(FamilyParams),
    Spec(PathBuf),
}

impl MapSource {
    pub fn load(&self) -> Result<GhmMap> {
        match self {
            MapSource::Family(p) => p.build(),
            MapSource::Spec(path) => load_map_spec_file(path),
        }
    }

    fn resolved(&self) -> Result<Self> {
        Ok(match self {
            MapSource::Family(p) => MapSource::Family(p.resolved()?),
            other => other.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub map: MapSource,
    /// Grid resolution `m` for histograms, Ulam matrices and cell sets.
    pub grid: usize,
    /// Refinement depth for strips, manifolds and attractor cells.
    pub depth: usize,
    pub mu: f64,
    pub n_max: usize,
    pub seed: u64,
    /// Cone-check samples per branch (`validate`) or per cell (`density`, `gap`).
    pub samples: Option<usize>,
    pub points: usize,
    pub steps: Vec<usize>,
    /// Restricts `strips` to one word, e.g. `1,2,1`.
    pub word: Option<String>,
    pub x_res: usize,
    pub angle_res: usize,
    pub num_eigs: usize,
    pub tol: f64,
    pub orbit_len: usize,
    pub observable: String,
    pub render: bool,
    /// Worker threads; `None` uses all cores. Outputs do not depend on it.
    pub threads: Option<usize>,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(command: Command, map: MapSource, out: impl Into<PathBuf>) -> Self {
        Self {
            command,
            map,
            grid: 64,
            depth: 6,
            mu: 0.25,
            n_max: 4,
            seed: 0,
            samples: None,
            points: 100_000,
            steps: vec![1, 15],
            word: None,
            x_res: 16,
            angle_res: 16,
            num_eigs: 6,
            tol: 1e-12,
            orbit_len: 1_000_000,
            observable: "coord_x".into(),
            render: false,
            threads: None,
            out: out.into(),
        }
    }
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    kind: &'a str,
    message: String,
}

/// Runs `config`, converting a failure into `error.json` and exit code 1.
pub fn run_and_report(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(()) => 0,
        Err(e) => {
            let doc = ErrorDoc {
                kind: e.kind(),
                message: e.to_string(),
            };
            let json = serde_json::to_string_pretty(&doc).unwrap_or_default();
            let _ = io::write_text(config.out.join("error.json"), &(json.clone() + "\n"));
            eprintln!("{json}");
            1
        }
    }
}

pub fn execute(config: &RunConfig) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| GhmError::InvalidParameter(e.to_string()))?;
    pool.install(|| execute_here(config))
}

fn execute_here(config: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&config.out)?;
    let resolved = RunConfig {
        map: config.map.resolved()?,
        ..config.clone()
    };
    write_json(&config.out, "config.json", &resolved)?;
    let map = config.map.load()?;
    let out = &config.out;
    match config.command {
        Command::Validate => validate(&map, config, out),
        Command::Strips => strips(&map, config, out),
        Command::Manifolds => manifolds(&map, config, out),
        Command::Attractor => attractor(&map, config, out),
        Command::Density => density(&map, config, out),
        Command::Gap => gap(&map, config, out),
        Command::Vexp => vexp(&map, config, out),
        Command::Stats => stats(&map, config, out),
    }
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    io::write_text(dir.join(name), &(serde_json::to_string_pretty(value)? + "\n"))
}

fn validate(map: &GhmMap, c: &RunConfig, out: &Path) -> Result<()> {
    let report = validate_hyperbolicity(map, c.samples.unwrap_or(10_000), c.seed);
    write_json(out, "cone_report.json", &report)?;
    if report.is_valid() {
        Ok(())
    } else {
        Err(GhmError::NotHyperbolic(format!(
            "{} H1, {} H2 and {} ratio violations",
            report.h1_violations, report.h2_violations, report.ratio_violations
        )))
    }
}

const MAX_WORDS: usize = 4096;

fn all_words(map: &GhmMap, len: usize) -> Result<Vec<Vec<usize>>> {
    let total = (map.len() as f64).powi(len as i32);
    if total > MAX_WORDS as f64 {
        return Err(GhmError::InvalidParameter(format!(
            "{total} words of length {len} exceed the limit {MAX_WORDS}; lower --depth or pass --word"
        )));
    }
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| {
                map.ids().into_iter().map(move |id| {
                    let mut w = w.clone();
                    w.push(id);
                    w
                })
            })
            .collect();
    }
    Ok(words)
}

fn word_tag(symbols: &[usize]) -> String {
    symbols.iter().map(usize::to_string).collect::<Vec<_>>().join("-")
}

#[derive(Serialize)]
struct StripSummary {
    word: String,
    orientation: &'static str,
    width: f64,
}

fn strip_rows(csv: &mut String, tag: &str, strip: &StripRegion) {
    for (edge, graph) in [("lower", strip.lower()), ("upper", strip.upper())] {
        for p in graph_points(graph, strip.orientation()) {
            csv.push_str(&format!("{tag},{edge},{},{}\n", p.x, p.y));
        }
    }
}

fn strips(map: &GhmMap, c: &RunConfig, out: &Path) -> Result<()> {
    let words = match &c.word {
        Some(w) => vec![w.parse::<Word>()?.symbols().to_vec()],
        None => all_words(map, c.depth)?,
    };
    let mut summary = Vec::new();
    let mut canvas = SvgCanvas::default();
    for (name, stable) in [("stable", true), ("unstable", false)] {
        let mut csv = String::from("word,edge,x,y\n");
        for symbols in &words {
            let word = if stable {
                Word::stable(symbols)?
            } else {
                Word::unstable(symbols)?
            };
            let strip = refine_strip(map, &word)?;
            let tag = word_tag(symbols);
            strip_rows(&mut csv, &tag, &strip);
            if c.render {
                canvas.polygon(&strip.outline(), if stable { "#1f77b4" } else { "#d62728" }, 0.35);
            }
            summary.push(StripSummary {
                word: tag,
                orientation: name,
                width: strip.width(),
            });
        }
        io::write_text(out.join(format!("strips_{name}.csv")), &csv)?;
    }
    write_json(out, "strips.json", &summary)?;
    if c.render {
        canvas.save(out.join("strips.svg"))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ManifoldSummary {
    word: String,
    orientation: &'static str,
    strip_width: f64,
    vertices: usize,
}

fn manifolds(map: &GhmMap, c: &RunConfig, out: &Path) -> Result<()> {
    let mut summary = Vec::new();
    let mut csv = String::from("word,orientation,x,y\n");
    let mut canvas = SvgCanvas::default();
    for b in map.branches() {
        canvas.polygon(&b.image().outline(), "#cccccc", 0.4);
    }
    for id in map.ids() {
        for (name, stable) in [("stable", true), ("unstable", false)] {
            let word = if stable {
                Word::stable(&[id])?
            } else {
                Word::unstable(&[id])?
            };
            let approx = manifold_approx(map, &word, c.depth)?;
            let points = approx.points();
            for p in &points {
                csv.push_str(&format!("{id},{name},{},{}\n", p.x, p.y));
            }
            canvas.polyline(&points, if stable { "#1f77b4" } else { "#d62728" }, 2.0);
            summary.push(ManifoldSummary {
                word: id.to_string(),
                orientation: name,
                strip_width: approx.strip_width,
                vertices: points.len(),
            });
        }
    }
    io::write_text(out.join("manifolds.csv"), &csv)?;
    write_json(out, "manifolds.json", &summary)?;
    canvas.save(out.join("manifolds.svg"))
}

#[derive(Serialize)]
struct AttractorSummary {
    steps: Vec<usize>,
    nudges: usize,
    cells_depth: usize,
    cell_area_fraction: f64,
    mass_outside_cells: Vec<f64>,
}

fn attractor(map: &GhmMap, c: &RunConfig, out: &Path) -> Result<()> {
    let iterations = c.steps.iter().copied().max().unwrap_or(0);
    let mut options = CloudOptions::new(c.points, iterations, c.seed, c.grid);
    options.snapshot_steps = c.steps.clone();
    options.keep_points = c.points.min(20_000);
    let cloud = push_cloud(map, &options)?;
    let cells = attractor_cells(map, c.depth, c.grid)?;
    io::write_text(out.join("cells.csv"), &io::cells_csv(&cells))?;
    let mut mass_outside = Vec::new();
    for snap in &cloud.snapshots {
        let stem = format!("snapshot_{}", snap.step);
        io::write_text(out.join(format!("{stem}.csv")), &io::density_csv(&snap.histogram))?;
        mass_outside.push(snap.histogram.mass_outside(cells.mask()));
        let mut canvas = SvgCanvas::default();
        for b in map.branches() {
            canvas.polygon(&b.image().outline(), "#dddddd", 0.5);
        }
        canvas.dots(&snap.points, "#222222", 0.6);
        canvas.save(out.join(format!("{stem}.svg")))?;
        if c.render {
            io::write_heatmap_png(&snap.histogram, 512, out.join(format!("{stem}.png")))?;
        }
    }
    write_json(
        out,
        "attractor.json",
        &AttractorSummary {
            steps: c.steps.clone(),
            nudges: cloud.nudges,
            cells_depth: c.depth,
            cell_area_fraction: cells.area_fraction(),
            mass_outside_cells: mass_outside,
        },
    )?;
    if c.render {
        let mut canvas = SvgCanvas::default();
        canvas.cells(&cells, "#2ca02c", 0.8);
        canvas.save(out.join("cells.svg"))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct DensitySummary {
    m: usize,
    samples_per_cell: usize,
    residual: f64,
    iterations: usize,
    start_spread: f64,
    unique: bool,
    mu: f64,
    sobolev_seminorm: f64,
}

fn density(map: &GhmMap, c: &RunConfig, out: &Path) -> Result<()> {
    let samples = c.samples.unwrap_or(64);
    let p = ulam_matrix(map, c.grid, samples, c.seed)?;
    let s = stationary_density(&p, c.tol)?;
    let sobolev = sobolev_diagnostic(&s.density, c.mu)?;
    io::write_text(out.join("density.csv"), &io::density_csv(&s.density))?;
    io::write_text(out.join("ulam.csv"), &io::ulam_csv(&p))?;
    write_json(
        out,
        "density.json",
        &DensitySummary {
            m: c.grid,
            samples_per_cell: samples,
            residual: s.residual,
            iterations: s.iterations,
            start_spread: s.start_spread,
            unique: s.unique,
            mu: c.mu,
            sobolev_seminorm: sobolev,
        },
    )?;
    if c.render {
        let mut canvas = SvgCanvas::default();
        canvas.density(&s.density);
        canvas.save(out.join("density.svg"))?;
        io::write_heatmap_png(&s.density, 512, out.join("density.png"))?;
    }
    Ok(())
}

fn gap(map: &GhmMap, c: &RunConfig, out: &Path) -> Result<()> {
    let p = ulam_matrix(map, c.grid, c.samples.unwrap_or(64), c.seed)?;
    let report = spectral_gap(&p, c.num_eigs)?;
    write_json(out, "spectral_report.json", &report)
}

fn vexp(map: &GhmMap, c: &RunConfig, out: &Path) -> Result<()> {
    let mut report = beta_mu_estimate(map, c.mu, c.n_max, c.x_res, c.angle_res)?;
    report.refinement_change = Some(refinement_change(map, c.mu, c.x_res, c.angle_res)?);
    write_json(out, "expansion_report.json", &report)?;
    io::write_text(out.join("expansion_field.csv"), &io::expansion_field_csv(&report))?;
    let pieces = coverage_partition(map, c.grid);
    write_json(out, "coverage.json", &pieces)?;
    io::write_text(out.join("coverage.csv"), &io::coverage_csv(&pieces))?;
    if c.render {
        let palette = [
            "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
        ];
        let w = 1.0 / c.grid as f64;
        let mut canvas = SvgCanvas::default();
        for piece in &pieces {
            let color = palette[(piece.theta.len() * 3 + piece.theta[0]) % palette.len()];
            for s in &piece.spans {
                canvas.rect(s.column as f64 * w, s.y0, w, s.y1 - s.y0, color, 0.7);
            }
            let (xm, ym) = (
                0.5 * (piece.x_interval[0] + piece.x_interval[1]),
                0.5 * (piece.y_interval[0] + piece.y_interval[1]),
            );
            let theta: Vec<String> = piece.theta.iter().map(usize::to_string).collect();
            canvas.label(point(xm, ym), &format!("{{{}}}", theta.join(",")));
        }
        canvas.save(out.join("coverage.svg"))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct StatsSummary {
    observable: String,
    orbit_len: usize,
    correlation: crate::stats::CorrelationSeries,
    clt: crate::stats::CltReport,
}

fn stats(map: &GhmMap, c: &RunConfig, out: &Path) -> Result<()> {
    let f: Observable = c.observable.parse()?;
    let series = correlation_series(map, &f, &f, c.n_max.max(8), c.orbit_len, 1000, c.seed)?;
    let block = (c.orbit_len / 1000).clamp(10, 10_000);
    let clt = clt_diagnostic(map, &f, block, c.samples.unwrap_or(1000), c.seed)?;
    io::write_text(out.join("correlation.csv"), &io::correlation_csv(&series))?;
    write_json(
        out,
        "stats.json",
        &StatsSummary {
            observable: f.name(),
            orbit_len: c.orbit_len,
            correlation: series,
            clt,
        },
    )
}

/// Parses counts written as integers or in float notation (`1e6`).
pub fn parse_count(s: &str) -> Result<usize> {
    if let Ok(v) = s.parse::<usize>() {
        return Ok(v);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| GhmError::InvalidParameter(format!("not a count: {s:?}")))?;
    if v >= 0.0 && v.fract() == 0.0 && v < 1e15 {
        Ok(v as usize)
    } else {
        Err(GhmError::InvalidParameter(format!("not a count: {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_float_notation() {
        assert_eq!(parse_count("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_count("15").unwrap(), 15);
        assert!(parse_count("1.5").is_err());
    }

    #[test]
    fn command_names() {
        assert_eq!("vexp".parse::<Command>().unwrap(), Command::Vexp);
        assert!("plot".parse::<Command>().is_err());
    }

    #[test]
    fn words_enumerate_in_lexicographic_order() {
        let map = crate::map::baker_map();
        let w = all_words(&map, 2).unwrap();
        assert_eq!(w, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
    }
}
