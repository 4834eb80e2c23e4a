//! Campaign orchestration: seeding, the realization loop, pooled statistics
//! and result files.

mod config;
mod presets;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::CampaignConfig;
pub use presets::FigurePreset;

use crate::error::{Error, Result};
use crate::mac::{EntrantVariant, MacAssignment};
use crate::phy::{evaluate, ThroughputReport};
use crate::propagation::LinkTable;
use crate::scenario::{
    generate_indoor_indoor, generate_indoor_outdoor, generate_outdoor_outdoor, NetworkRealization, Population,
    ScenarioKind,
};
use crate::seed::realization_seed;
use crate::spectrum::{assign_channels, build_cs_graph};

pub const FORMAT_VERSION: &str = "1";
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Reports of one (variant, entrant count) point of one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationPoint {
    pub variant: EntrantVariant,
    pub n_entrant: usize,
    pub reports: Vec<ThroughputReport>,
}

/// The deployment of a realization with the largest swept entrant count.
pub fn generate_realization(config: &CampaignConfig, seed: u64) -> Result<NetworkRealization> {
    let n_e = config.max_entrants();
    let r = match config.scenario {
        ScenarioKind::IndoorIndoor | ScenarioKind::IndoorIndoorNoWalls => generate_indoor_indoor(
            seed,
            config.legacy_aps(),
            n_e,
            config.scenario == ScenarioKind::IndoorIndoor,
            &config.indoor,
        ),
        ScenarioKind::IndoorOutdoor => {
            generate_indoor_outdoor(seed, config.legacy_density_per_km2.unwrap_or(0.0), n_e, &config.outdoor)
        }
        ScenarioKind::OutdoorOutdoor => generate_outdoor_outdoor(seed, config.legacy_aps(), n_e, &config.outdoor),
    };
    r.map_err(|e| e.with_seed(seed))
}

/// Every (variant, sweep point) of one realization.
///
/// The deployment is generated once at the largest entrant count; smaller
/// sweep points use its entrant prefix, so the same legacy APs and the same
/// first entrants appear at every point.
pub fn run_realization(config: &CampaignConfig, seed: u64) -> Result<Vec<RealizationPoint>> {
    let run = || -> Result<Vec<RealizationPoint>> {
        let realization = generate_realization(config, seed)?;
        let links = LinkTable::new(&realization, &config.propagation);
        let mut points = Vec::with_capacity(config.variants.len() * config.entrant_sweep.len());
        for &variant in &config.variants {
            let assignment = MacAssignment::for_variant(variant, &config.mac);
            let plan = assign_channels(&links, config.channel_scheme, &assignment);
            for &n in &config.entrant_sweep {
                let sub = plan.truncated(realization.n_legacy + n);
                let graph = build_cs_graph(&realization, &sub, &assignment, &links);
                let reports = evaluate(&graph, &assignment, &links, &config.phy, &config.mac)?;
                points.push(RealizationPoint {
                    variant,
                    n_entrant: n,
                    reports,
                });
            }
        }
        Ok(points)
    };
    run().map_err(|e| e.with_seed(seed))
}

/// Pooled throughput samples of one (variant, sweep point, population).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub variant: EntrantVariant,
    pub n_entrant: usize,
    pub population: Population,
    pub realizations: usize,
    /// `None` when no AP of the population exists at this point.
    pub median_mbps: Option<f64>,
    /// Every AP throughput across all realizations, ascending.
    pub samples_mbps: Vec<f64>,
}

impl PointResult {
    fn from_samples(
        variant: EntrantVariant,
        n_entrant: usize,
        population: Population,
        realizations: usize,
        mut samples: Vec<f64>,
    ) -> Self {
        samples.sort_by(f64::total_cmp);
        PointResult {
            variant,
            n_entrant,
            population,
            realizations,
            median_mbps: median_sorted(&samples),
            samples_mbps: samples,
        }
    }

    /// Empirical CDF as (value, P[X ≤ value]) at each distinct sample value.
    pub fn cdf(&self) -> Vec<(f64, f64)> {
        empirical_cdf(&self.samples_mbps)
    }
}

/// Median of an ascending sample; the mean of the two middle values for an
/// even count.
pub fn median_sorted(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    if n == 0 {
        return None;
    }
    Some(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    })
}

/// Empirical CDF of an ascending sample at its distinct values.
pub fn empirical_cdf(sorted: &[f64]) -> Vec<(f64, f64)> {
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let p = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 = p,
            _ => out.push((v, p)),
        }
    }
    out
}

/// Pooled outcome of a range of realizations of one campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub format_version: String,
    pub code_version: String,
    pub config: CampaignConfig,
    pub first_realization: u64,
    pub realization_count: usize,
    /// Sorted by variant order of the config, then entrant count, then
    /// population.
    pub points: Vec<PointResult>,
    /// Per-realization reports, kept only on request.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<Vec<Vec<RealizationPoint>>>,
}

/// Runner settings that do not change results.
#[derive(Clone, Copy, Default)]
pub struct RunOptions<'a> {
    /// Keep every per-realization report in the result.
    pub retain_reports: bool,
    /// Called with the number of finished realizations.
    pub progress: Option<&'a (dyn Fn(usize) + Sync)>,
}

type PointKey = (usize, usize, Population);

/// All realizations of the campaign.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    run_campaign_range(config, 0, config.realization_count(), RunOptions::default())
}

/// Realizations `first .. first + count`, executed on `config.workers`
/// threads. Results do not depend on the worker count.
pub fn run_campaign_range(
    config: &CampaignConfig,
    first: u64,
    count: usize,
    options: RunOptions<'_>,
) -> Result<CampaignResult> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::config(format!("field `workers`: {e}")))?;
    let variant_index = |v: EntrantVariant| config.variants.iter().position(|&w| w == v).unwrap_or(usize::MAX);
    let empty = || {
        let mut pooled: BTreeMap<PointKey, Vec<f64>> = BTreeMap::new();
        for vi in 0..config.variants.len() {
            for &n in &config.entrant_sweep {
                for pop in [Population::Legacy, Population::Entrant] {
                    pooled.insert((vi, n, pop), Vec::new());
                }
            }
        }
        pooled
    };
    let done = AtomicUsize::new(0);
    // samples are sorted before any statistic, so the pooling order of the
    // parallel reduction does not matter
    let (pooled, raw) = pool.install(|| {
        (0..count as u64)
            .into_par_iter()
            .map(|k| {
                let seed = realization_seed(config.master_seed, first + k);
                let points = run_realization(config, seed)?;
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                if let Some(progress) = options.progress {
                    progress(finished);
                }
                Ok((k, points))
            })
            .try_fold(
                || (empty(), Vec::new()),
                |(mut pooled, mut raw), item: Result<(u64, Vec<RealizationPoint>)>| {
                    let (k, points) = item?;
                    for p in &points {
                        let vi = variant_index(p.variant);
                        for r in &p.reports {
                            pooled
                                .get_mut(&(vi, p.n_entrant, r.population))
                                .expect("every point is pre-registered")
                                .push(r.throughput_mbps);
                        }
                    }
                    if options.retain_reports {
                        raw.push((k, points));
                    }
                    Ok::<_, Error>((pooled, raw))
                },
            )
            .try_reduce(
                || (empty(), Vec::new()),
                |(mut a, mut ra), (b, rb)| {
                    for (key, samples) in b {
                        a.get_mut(&key).expect("same keys").extend(samples);
                    }
                    ra.extend(rb);
                    Ok((a, ra))
                },
            )
    })?;
    let raw = options.retain_reports.then(|| {
        let mut raw = raw;
        raw.sort_by_key(|(k, _)| *k);
        raw.into_iter().map(|(_, pts)| pts).collect()
    });
    let points = pooled
        .into_iter()
        .map(|((vi, n, pop), samples)| PointResult::from_samples(config.variants[vi], n, pop, count, samples))
        .collect();
    Ok(CampaignResult {
        format_version: FORMAT_VERSION.to_string(),
        code_version: CODE_VERSION.to_string(),
        config: config.clone(),
        first_realization: first,
        realization_count: count,
        points,
        raw,
    })
}

impl CampaignResult {
    pub fn point(&self, variant: EntrantVariant, n_entrant: usize, population: Population) -> Option<&PointResult> {
        self.points
            .iter()
            .find(|p| p.variant == variant && p.n_entrant == n_entrant && p.population == population)
    }

    pub fn median(&self, variant: EntrantVariant, n_entrant: usize, population: Population) -> Option<f64> {
        self.point(variant, n_entrant, population).and_then(|p| p.median_mbps)
    }

    /// Samples of a population pooled over every variant and sweep point.
    pub fn pooled_samples(&self, population: Population, variant: Option<EntrantVariant>) -> Vec<f64> {
        let mut all: Vec<f64> = self
            .points
            .iter()
            .filter(|p| p.population == population && variant.is_none_or(|v| v == p.variant))
            .flat_map(|p| p.samples_mbps.iter().copied())
            .collect();
        all.sort_by(f64::total_cmp);
        all
    }

    /// The result restricted to one entrant count.
    pub fn sweep_point(&self, n_entrant: usize) -> CampaignResult {
        let mut config = self.config.clone();
        config.entrant_sweep = vec![n_entrant];
        CampaignResult {
            config,
            points: self
                .points
                .iter()
                .filter(|p| p.n_entrant == n_entrant)
                .cloned()
                .collect(),
            raw: self.raw.as_ref().map(|raw| {
                raw.iter()
                    .map(|pts| pts.iter().filter(|p| p.n_entrant == n_entrant).cloned().collect())
                    .collect()
            }),
            ..self.clone()
        }
    }

    /// Combine with a result over the adjacent realization range of the same
    /// campaign.
    pub fn merge(&self, other: &CampaignResult) -> Result<CampaignResult> {
        if self.config != other.config {
            return Err(Error::config("cannot merge results of different campaigns"));
        }
        let (lo, hi) = if self.first_realization <= other.first_realization {
            (self, other)
        } else {
            (other, self)
        };
        if lo.first_realization + lo.realization_count as u64 != hi.first_realization {
            return Err(Error::config(format!(
                "realization ranges {}+{} and {}+{} are not adjacent",
                lo.first_realization, lo.realization_count, hi.first_realization, hi.realization_count
            )));
        }
        let count = lo.realization_count + hi.realization_count;
        let points = lo
            .points
            .iter()
            .zip(&hi.points)
            .map(|(a, b)| {
                let mut samples = a.samples_mbps.clone();
                samples.extend_from_slice(&b.samples_mbps);
                PointResult::from_samples(a.variant, a.n_entrant, a.population, count, samples)
            })
            .collect();
        let raw = match (&lo.raw, &hi.raw) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(CampaignResult {
            format_version: lo.format_version.clone(),
            code_version: lo.code_version.clone(),
            config: lo.config.clone(),
            first_realization: lo.first_realization,
            realization_count: count,
            points,
            raw,
        })
    }

    /// Write as JSON. The file is written under a temporary name and renamed,
    /// so readers never see a partial result.
    pub fn persist(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("json.partial");
        {
            let file = fs::File::create(&tmp)?;
            let mut w = std::io::BufWriter::new(file);
            serde_json::to_writer(&mut w, self)?;
            w.flush()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CampaignResult> {
        let text = fs::read_to_string(path)?;
        let header: VersionHeader = serde_json::from_str(&text)?;
        if header.format_version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: header.format_version,
                expected: FORMAT_VERSION.to_string(),
            });
        }
        Ok(serde_json::from_str(&text)?)
    }

    /// Median CSV: `sweep,population,mac,median_mbps`, one row per point.
    /// An optional first comment line carries a generation timestamp.
    pub fn write_median_csv<W: Write>(&self, mut out: W, timestamp: Option<&str>) -> Result<()> {
        if let Some(ts) = timestamp {
            writeln!(out, "# generated {ts}")?;
        }
        write_median_rows(&self.points, out)
    }
}

#[derive(Deserialize)]
struct VersionHeader {
    format_version: String,
}

/// Median CSV rows of several results, header included.
pub fn write_median_rows<'a, W: Write>(points: impl IntoIterator<Item = &'a PointResult>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["sweep", "population", "mac", "median_mbps"])
        .map_err(io)?;
    for p in points {
        let median = p.median_mbps.map(|m| format!("{m}")).unwrap_or_default();
        w.write_record([
            p.n_entrant.to_string().as_str(),
            p.population.name(),
            p.variant.name(),
            median.as_str(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
