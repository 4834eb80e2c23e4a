use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mac::{EntrantVariant, MacOptions};
use crate::phy::PhyProfiles;
use crate::propagation::PropagationProfile;
use crate::scenario::{indoor_count, IndoorLayout, OutdoorLayout, ScenarioKind};
use crate::spectrum::ChannelScheme;

/// One campaign: a deployment, a channel scheme, a set of entrant variants
/// and a sweep over the entrant count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub scenario: ScenarioKind,
    pub channel_scheme: ChannelScheme,
    /// Legacy AP count (indoor/indoor, outdoor/outdoor).
    #[serde(default)]
    pub legacy_count: Option<usize>,
    /// Legacy AP density in APs/km² (indoor/outdoor).
    #[serde(default)]
    pub legacy_density_per_km2: Option<f64>,
    pub entrant_sweep: Vec<usize>,
    #[serde(default = "all_variants")]
    pub variants: Vec<EntrantVariant>,
    /// Defaults to 3000 for indoor/indoor geometries, 1500 otherwise.
    #[serde(default)]
    pub realizations: Option<usize>,
    #[serde(default)]
    pub master_seed: u64,
    /// Worker threads; 0 uses every core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub indoor: IndoorLayout,
    #[serde(default)]
    pub outdoor: OutdoorLayout,
    #[serde(default)]
    pub propagation: PropagationProfile,
    #[serde(default)]
    pub mac: MacOptions,
    #[serde(default)]
    pub phy: PhyProfiles,
}

fn default_name() -> String {
    "custom".to_string()
}

fn all_variants() -> Vec<EntrantVariant> {
    EntrantVariant::ALL.to_vec()
}

impl CampaignConfig {
    pub fn new(scenario: ScenarioKind, channel_scheme: ChannelScheme, entrant_sweep: Vec<usize>) -> Self {
        CampaignConfig {
            name: default_name(),
            scenario,
            channel_scheme,
            legacy_count: None,
            legacy_density_per_km2: None,
            entrant_sweep,
            variants: all_variants(),
            realizations: None,
            master_seed: 0,
            workers: 0,
            indoor: IndoorLayout::default(),
            outdoor: OutdoorLayout::default(),
            propagation: PropagationProfile::default(),
            mac: MacOptions::default(),
            phy: PhyProfiles::default(),
        }
    }

    /// Parse TOML; errors name the offending field path.
    pub fn from_toml(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| Error::config(e.to_string()))?;
        let cfg: CampaignConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let msg = inner.message().to_string();
            Error::config(format!("field `{path}`: {msg}"))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::config(e.to_string()))
    }

    pub fn realization_count(&self) -> usize {
        self.realizations.unwrap_or(match self.scenario {
            ScenarioKind::IndoorIndoor | ScenarioKind::IndoorIndoorNoWalls => 3000,
            _ => 1500,
        })
    }

    pub fn max_entrants(&self) -> usize {
        self.entrant_sweep.iter().copied().max().unwrap_or(0)
    }

    /// Legacy AP count of every realization.
    pub fn legacy_aps(&self) -> usize {
        match self.scenario {
            ScenarioKind::IndoorOutdoor => indoor_count(self.legacy_density_per_km2.unwrap_or(0.0), &self.outdoor),
            _ => self.legacy_count.unwrap_or(0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realization_count() == 0 {
            return Err(Error::config("field `realizations`: must be at least 1"));
        }
        if self.entrant_sweep.is_empty() {
            return Err(Error::config("field `entrant_sweep`: must not be empty"));
        }
        if self.variants.is_empty() {
            return Err(Error::config("field `variants`: must not be empty"));
        }
        let mut sweep = self.entrant_sweep.clone();
        sweep.sort_unstable();
        sweep.dedup();
        if sweep.len() != self.entrant_sweep.len() {
            return Err(Error::config("field `entrant_sweep`: duplicate entries"));
        }
        let mut seen = self.variants.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.variants.len() {
            return Err(Error::config("field `variants`: duplicate entries"));
        }
        match self.scenario {
            ScenarioKind::IndoorOutdoor => {
                match self.legacy_density_per_km2 {
                    Some(d) if d >= 0.0 && d.is_finite() => {}
                    Some(d) => {
                        return Err(Error::config(format!(
                            "field `legacy_density_per_km2`: must be nonnegative, got {d}"
                        )))
                    }
                    None => {
                        return Err(Error::config(
                            "field `legacy_density_per_km2`: required for indoor-outdoor",
                        ))
                    }
                }
                if self.legacy_count.is_some() {
                    return Err(Error::config(
                        "field `legacy_count`: indoor-outdoor takes a density instead",
                    ));
                }
            }
            _ => {
                if self.legacy_count.is_none() {
                    return Err(Error::config(format!(
                        "field `legacy_count`: required for {}",
                        self.scenario.name()
                    )));
                }
                if self.legacy_density_per_km2.is_some() {
                    return Err(Error::config(format!(
                        "field `legacy_density_per_km2`: not used by {}",
                        self.scenario.name()
                    )));
                }
            }
        }
        if matches!(
            self.scenario,
            ScenarioKind::IndoorIndoor | ScenarioKind::IndoorIndoorNoWalls
        ) {
            let b = self.indoor.building();
            b.validate()?;
            let total = self.legacy_aps() + self.max_entrants();
            if total > b.apartment_count() {
                return Err(Error::config(format!(
                    "field `entrant_sweep`: {total} APs exceed the {} apartments of the building",
                    b.apartment_count()
                )));
            }
        } else {
            self.outdoor.validate()?;
        }
        self.propagation.validate()?;
        self.mac.validate()?;
        self.phy.validate()?;
        Ok(())
    }

    /// Notes on densities outside the studied ranges.
    pub fn density_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self.scenario {
            ScenarioKind::IndoorIndoor | ScenarioKind::IndoorIndoorNoWalls => {
                let area = self.indoor.area().area() * 1e-6;
                for &n in &self.entrant_sweep {
                    let d = (self.legacy_aps() + n) as f64 / area;
                    if !(600.0..=6100.0).contains(&d) {
                        out.push(format!("{n} entrants: {d:.0} APs/km² outside the 600-6000 band"));
                    }
                }
            }
            ScenarioKind::IndoorOutdoor => {
                let d = self.legacy_density_per_km2.unwrap_or(0.0);
                if !(500.0..=5000.0).contains(&d) {
                    out.push(format!("legacy density {d} APs/km² outside 500-5000"));
                }
                let area = self.outdoor.area().area() * 1e-6;
                let hi = self.max_entrants() as f64 / area;
                if hi > 160.0 {
                    out.push(format!("entrant density up to {hi:.0} APs/km² exceeds 150"));
                }
            }
            ScenarioKind::OutdoorOutdoor => {}
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_toml() {
        let cfg = CampaignConfig::from_toml(
            r#"
scenario = "indoor-indoor"
channel_scheme = "sense"
legacy_count = 10
entrant_sweep = [1, 2, 3]
variants = ["lte-lbt-62", "lte-always-on"]
realizations = 5
"#,
        )
        .unwrap();
        assert_eq!(cfg.variants.len(), 2);
        assert_eq!(cfg.realization_count(), 5);
        let round = CampaignConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(round, cfg);
    }

    #[test]
    fn negative_count_names_field() {
        let err = CampaignConfig::from_toml(
            "scenario = \"indoor-indoor\"\nchannel_scheme = \"sense\"\nlegacy_count = -3\nentrant_sweep = [1]\n",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("legacy_count"), "{err}");
    }

    #[test]
    fn unknown_variant_suggests() {
        let err = CampaignConfig::from_toml(
            "scenario = \"indoor-indoor\"\nchannel_scheme = \"sense\"\nlegacy_count = 1\nentrant_sweep = [1]\nvariants = [\"lte-adaptive\"]\n",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("variants") && err.contains("lte-adaptive-dc"), "{err}");
    }

    #[test]
    fn default_realizations_by_scenario() {
        let a = CampaignConfig::new(ScenarioKind::IndoorIndoor, ChannelScheme::Sense, vec![1]);
        let b = CampaignConfig::new(ScenarioKind::OutdoorOutdoor, ChannelScheme::Sense, vec![1]);
        assert_eq!(a.realization_count(), 3000);
        assert_eq!(b.realization_count(), 1500);
    }
}
