//! Campaign setups of the published figures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CampaignConfig;
use crate::error::{Error, Result};
use crate::scenario::ScenarioKind;
use crate::spectrum::ChannelScheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FigurePreset {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 5] = [
        FigurePreset::Fig3,
        FigurePreset::Fig4,
        FigurePreset::Fig5,
        FigurePreset::Fig6,
        FigurePreset::Fig7,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigurePreset::Fig3 => "fig3",
            FigurePreset::Fig4 => "fig4",
            FigurePreset::Fig5 => "fig5",
            FigurePreset::Fig6 => "fig6",
            FigurePreset::Fig7 => "fig7",
        }
    }

    /// The campaigns behind the figure, each fully specified.
    pub fn campaigns(&self) -> Vec<CampaignConfig> {
        let one_to_ten: Vec<usize> = (1..=10).collect();
        let named = |name: &str, mut c: CampaignConfig| {
            c.name = name.to_string();
            c
        };
        let counted = |kind, scheme, legacy, sweep: &[usize]| {
            let mut c = CampaignConfig::new(kind, scheme, sweep.to_vec());
            c.legacy_count = Some(legacy);
            c
        };
        match self {
            FigurePreset::Fig3 => vec![named(
                "fig3",
                counted(ScenarioKind::IndoorIndoor, ChannelScheme::Sense, 10, &one_to_ten),
            )],
            FigurePreset::Fig4 => vec![named(
                "fig4",
                counted(ScenarioKind::IndoorIndoor, ChannelScheme::Sense, 10, &one_to_ten),
            )],
            FigurePreset::Fig5 => vec![
                named(
                    "fig5-walls",
                    counted(
                        ScenarioKind::IndoorIndoor,
                        ChannelScheme::SingleChannel,
                        10,
                        &one_to_ten,
                    ),
                ),
                named(
                    "fig5-no-walls",
                    counted(
                        ScenarioKind::IndoorIndoorNoWalls,
                        ChannelScheme::SingleChannel,
                        10,
                        &one_to_ten,
                    ),
                ),
            ],
            FigurePreset::Fig6 => {
                let mut io = CampaignConfig::new(
                    ScenarioKind::IndoorOutdoor,
                    ChannelScheme::SingleChannel,
                    (1..=10).map(|k| 2 * k).collect(),
                );
                io.legacy_density_per_km2 = Some(5000.0);
                vec![
                    named("fig6-indoor-outdoor", io),
                    named(
                        "fig6-outdoor-outdoor",
                        counted(
                            ScenarioKind::OutdoorOutdoor,
                            ChannelScheme::SingleChannel,
                            10,
                            &one_to_ten,
                        ),
                    ),
                ]
            }
            FigurePreset::Fig7 => vec![named(
                "fig7",
                counted(
                    ScenarioKind::IndoorIndoorNoWalls,
                    ChannelScheme::SingleChannel,
                    1,
                    &one_to_ten,
                ),
            )],
        }
    }
}

impl fmt::Display for FigurePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigurePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigurePreset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<&str> = FigurePreset::ALL.iter().map(|p| p.name()).collect();
            Error::config(format!("unknown preset `{s}`; valid presets: {}", names.join(", ")))
        })
    }
}
