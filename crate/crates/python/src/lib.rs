//! Python bindings: run campaigns from TOML or a figure preset and read back
//! medians, samples and CDFs.

use coexsim::montecarlo::empirical_cdf;
use coexsim::{CampaignConfig, CampaignResult, EntrantVariant, Error, FigurePreset, Population};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::Domain(_) | Error::VersionMismatch { .. } => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Pooled result of one campaign.
#[pyclass(name = "CampaignRun", module = "pycoexsim", frozen)]
struct PyCampaignRun {
    inner: CampaignResult,
}

#[pymethods]
impl PyCampaignRun {
    #[getter]
    fn name(&self) -> String {
        self.inner.config.name.clone()
    }

    #[getter]
    fn realizations(&self) -> usize {
        self.inner.realization_count
    }

    #[getter]
    fn sweep(&self) -> Vec<usize> {
        self.inner.config.entrant_sweep.clone()
    }

    /// Rows `(sweep, population, mac, median_mbps)`; the median is None
    /// where a point has no APs.
    fn medians(&self) -> Vec<(usize, &'static str, &'static str, Option<f64>)> {
        self.inner
            .points
            .iter()
            .map(|p| (p.n_entrant, p.population.name(), p.variant.name(), p.median_mbps))
            .collect()
    }

    /// Sorted AP throughputs (Mbps) of one point.
    fn samples(&self, mac: &str, sweep: usize, population: &str) -> PyResult<Vec<f64>> {
        let variant: EntrantVariant = mac.parse().map_err(to_py)?;
        let population: Population = population.parse().map_err(to_py)?;
        self.inner
            .point(variant, sweep, population)
            .map(|p| p.samples_mbps.clone())
            .ok_or_else(|| PyValueError::new_err(format!("no point {mac} at {sweep} entrants")))
    }

    /// `(throughput_mbps, cumulative_prob)` pairs of one point.
    fn cdf(&self, mac: &str, sweep: usize, population: &str) -> PyResult<Vec<(f64, f64)>> {
        Ok(empirical_cdf(&self.samples(mac, sweep, population)?))
    }

    /// Median CSV text, without timestamp.
    fn median_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        self.inner.write_median_csv(&mut buf, None).map_err(to_py)?;
        String::from_utf8(buf).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.persist(path.as_ref()).map_err(to_py)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        CampaignResult::load(path.as_ref())
            .map(|inner| PyCampaignRun { inner })
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "CampaignRun(name={:?}, realizations={}, points={})",
            self.inner.config.name,
            self.inner.realization_count,
            self.inner.points.len()
        )
    }
}

fn apply(config: &mut CampaignConfig, realizations: Option<usize>, seed: Option<u64>, workers: Option<usize>) {
    if let Some(r) = realizations {
        config.realizations = Some(r);
    }
    if let Some(s) = seed {
        config.master_seed = s;
    }
    if let Some(w) = workers {
        config.workers = w;
    }
}

fn execute(py: Python<'_>, config: CampaignConfig) -> PyResult<PyCampaignRun> {
    config.validate().map_err(to_py)?;
    let inner = py.detach(|| coexsim::run_campaign(&config)).map_err(to_py)?;
    Ok(PyCampaignRun { inner })
}

/// Run the campaign described by a TOML document.
#[pyfunction]
#[pyo3(signature = (config_toml, realizations=None, seed=None, workers=None))]
fn run(
    py: Python<'_>,
    config_toml: &str,
    realizations: Option<usize>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> PyResult<PyCampaignRun> {
    let mut config = CampaignConfig::from_toml(config_toml).map_err(to_py)?;
    apply(&mut config, realizations, seed, workers);
    execute(py, config)
}

/// Run every campaign of a figure preset.
#[pyfunction]
#[pyo3(signature = (name, realizations=None, seed=None, workers=None))]
fn run_preset(
    py: Python<'_>,
    name: &str,
    realizations: Option<usize>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> PyResult<Vec<PyCampaignRun>> {
    let preset: FigurePreset = name.parse().map_err(to_py)?;
    preset
        .campaigns()
        .into_iter()
        .map(|mut c| {
            apply(&mut c, realizations, seed, workers);
            execute(py, c)
        })
        .collect()
}

/// Resolved TOML with every default filled in; raises ValueError when
/// invalid.
#[pyfunction]
fn validate(config_toml: &str) -> PyResult<String> {
    let config = CampaignConfig::from_toml(config_toml).map_err(to_py)?;
    config.to_toml().map_err(to_py)
}

/// TOML of each campaign of a preset.
#[pyfunction]
fn preset_configs(name: &str) -> PyResult<Vec<String>> {
    let preset: FigurePreset = name.parse().map_err(to_py)?;
    preset.campaigns().iter().map(|c| c.to_toml().map_err(to_py)).collect()
}

#[pyfunction]
fn variants() -> Vec<&'static str> {
    EntrantVariant::ALL.iter().map(|v| v.name()).collect()
}

#[pyfunction]
fn presets() -> Vec<&'static str> {
    FigurePreset::ALL.iter().map(|p| p.name()).collect()
}

#[pymodule]
fn pycoexsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCampaignRun>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_preset, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(preset_configs, m)?)?;
    m.add_function(wrap_pyfunction!(variants, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    Ok(())
}
