//! Time-domain sharing: air-time shares, duty-cycle slot vacancy, LBT MAC
//! efficiency and the frame loss of LBT transmitters next to duty-cycled ones.

mod bianchi;
mod timing;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bianchi::{bianchi_tau, efficiency_of, solve_tau, tau_map, Backoff, CW_MAX, CW_MIN};
pub use timing::{frame_times, FrameTimes, FrameTiming};

use crate::error::{Error, Result};
use crate::phy::PhyKind;
use crate::scenario::Population;
use crate::spectrum::CsGraph;

/// Time-sharing mechanism of one population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MacVariant {
    Lbt { cs_threshold_dbm: f64 },
    AlwaysOn,
    Fixed50Coordinated,
    Fixed50Uncoordinated,
    AdaptiveDutyCycle,
    IdealTdma,
}

impl MacVariant {
    pub fn is_lbt(&self) -> bool {
        matches!(self, MacVariant::Lbt { .. })
    }

    /// Slotted duty-cycle family (fixed 50%, adaptive, ideal TDMA).
    pub fn is_duty_cycle(&self) -> bool {
        matches!(
            self,
            MacVariant::Fixed50Coordinated
                | MacVariant::Fixed50Uncoordinated
                | MacVariant::AdaptiveDutyCycle
                | MacVariant::IdealTdma
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacMechanism {
    pub variant: MacVariant,
    /// Duty-cycle ON-duration.
    pub slot_duration_ms: f64,
}

pub const DEFAULT_SLOT_MS: f64 = 100.0;

impl MacMechanism {
    pub fn new(variant: MacVariant) -> Self {
        MacMechanism {
            variant,
            slot_duration_ms: DEFAULT_SLOT_MS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let MacVariant::Lbt { cs_threshold_dbm } = self.variant {
            if !(-100.0..=-30.0).contains(&cs_threshold_dbm) {
                return Err(Error::config(format!(
                    "LBT threshold {cs_threshold_dbm} dBm outside [-100, -30]"
                )));
            }
        }
        if !(self.slot_duration_ms > 0.0) {
            return Err(Error::config(format!(
                "slot duration must be positive, got {} ms",
                self.slot_duration_ms
            )));
        }
        Ok(())
    }
}

/// The eight entrant PHY/MAC combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum EntrantVariant {
    WifiLbt82,
    WifiLbt62,
    LteAlwaysOn,
    LteLbt62,
    LteFixed50Coordinated,
    LteFixed50Uncoordinated,
    LteAdaptiveDutyCycle,
    LteIdealTdma,
}

impl EntrantVariant {
    pub const ALL: [EntrantVariant; 8] = [
        EntrantVariant::WifiLbt82,
        EntrantVariant::WifiLbt62,
        EntrantVariant::LteAlwaysOn,
        EntrantVariant::LteLbt62,
        EntrantVariant::LteFixed50Coordinated,
        EntrantVariant::LteFixed50Uncoordinated,
        EntrantVariant::LteAdaptiveDutyCycle,
        EntrantVariant::LteIdealTdma,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EntrantVariant::WifiLbt82 => "wifi-lbt-82",
            EntrantVariant::WifiLbt62 => "wifi-lbt-62",
            EntrantVariant::LteAlwaysOn => "lte-always-on",
            EntrantVariant::LteLbt62 => "lte-lbt-62",
            EntrantVariant::LteFixed50Coordinated => "lte-fixed50-coord",
            EntrantVariant::LteFixed50Uncoordinated => "lte-fixed50-uncoord",
            EntrantVariant::LteAdaptiveDutyCycle => "lte-adaptive-dc",
            EntrantVariant::LteIdealTdma => "lte-ideal-tdma",
        }
    }

    pub fn phy(&self) -> PhyKind {
        match self {
            EntrantVariant::WifiLbt82 | EntrantVariant::WifiLbt62 => PhyKind::Dot11n,
            _ => PhyKind::Lte,
        }
    }

    pub fn mac(&self) -> MacVariant {
        match self {
            EntrantVariant::WifiLbt82 => MacVariant::Lbt {
                cs_threshold_dbm: -82.0,
            },
            EntrantVariant::WifiLbt62 | EntrantVariant::LteLbt62 => MacVariant::Lbt {
                cs_threshold_dbm: -62.0,
            },
            EntrantVariant::LteAlwaysOn => MacVariant::AlwaysOn,
            EntrantVariant::LteFixed50Coordinated => MacVariant::Fixed50Coordinated,
            EntrantVariant::LteFixed50Uncoordinated => MacVariant::Fixed50Uncoordinated,
            EntrantVariant::LteAdaptiveDutyCycle => MacVariant::AdaptiveDutyCycle,
            EntrantVariant::LteIdealTdma => MacVariant::IdealTdma,
        }
    }

    /// Closest valid name for diagnostics: most shared `-`-separated words,
    /// then smallest edit distance.
    pub fn suggest(input: &str) -> &'static str {
        let lowered = input.trim().to_ascii_lowercase();
        let words: Vec<&str> = lowered.split('-').filter(|w| !w.is_empty()).collect();
        EntrantVariant::ALL
            .iter()
            .map(|v| {
                let shared = v.name().split('-').filter(|w| words.contains(w)).count();
                (
                    std::cmp::Reverse(shared),
                    strsim::levenshtein(&lowered, v.name()),
                    v.name(),
                )
            })
            .min()
            .map(|(_, _, n)| n)
            .unwrap_or("lte-lbt-62")
    }

    fn unknown(input: &str) -> String {
        format!(
            "unknown entrant variant `{input}` (did you mean `{}`?)",
            EntrantVariant::suggest(input)
        )
    }
}

impl fmt::Display for EntrantVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntrantVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EntrantVariant::ALL
            .iter()
            .copied()
            .find(|v| v.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::config(EntrantVariant::unknown(s)))
    }
}

impl TryFrom<String> for EntrantVariant {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse().map_err(|_| EntrantVariant::unknown(&s))
    }
}

impl From<EntrantVariant> for String {
    fn from(v: EntrantVariant) -> String {
        v.name().to_string()
    }
}

/// Detection thresholds (dBm). Legacy Wi-Fi defers to preamble-decodable
/// 802.11n transmitters at `wifi_dbm` and to anything else at
/// `other_technology_dbm`. Entrants that do not sense before transmitting
/// still detect neighbours (for adaptation and channel selection) at
/// `duty_cycle_detect_dbm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CsThresholds {
    pub wifi_dbm: f64,
    pub other_technology_dbm: f64,
    pub duty_cycle_detect_dbm: f64,
}

impl Default for CsThresholds {
    fn default() -> Self {
        CsThresholds {
            wifi_dbm: -82.0,
            other_technology_dbm: -62.0,
            duty_cycle_detect_dbm: -62.0,
        }
    }
}

/// How many LBT frames fit in one duty-cycle slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum FramesPerSlotRule {
    /// Use a fixed LBT frame exchange duration (µs).
    Constant { t_s_us: f64 },
    /// Derive the exchange duration from the frame timing at a reference
    /// 802.11n rate.
    FromFrameTimes { reference_rate_mbps: f64 },
}

impl Default for FramesPerSlotRule {
    fn default() -> Self {
        FramesPerSlotRule::Constant { t_s_us: 419.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MacOptions {
    pub slot_duration_ms: f64,
    pub frames_per_slot: FramesPerSlotRule,
    pub timing: FrameTiming,
    pub thresholds: CsThresholds,
}

impl Default for MacOptions {
    fn default() -> Self {
        MacOptions {
            slot_duration_ms: DEFAULT_SLOT_MS,
            frames_per_slot: FramesPerSlotRule::default(),
            timing: FrameTiming::default(),
            thresholds: CsThresholds::default(),
        }
    }
}

impl MacOptions {
    pub fn validate(&self) -> Result<()> {
        self.timing.validate()?;
        if !(self.slot_duration_ms > 0.0) {
            return Err(Error::config("mac.slot_duration_ms must be positive"));
        }
        match self.frames_per_slot {
            FramesPerSlotRule::Constant { t_s_us } if !(t_s_us > 0.0) => {
                Err(Error::config("mac.frames_per_slot.t_s_us must be positive"))
            }
            FramesPerSlotRule::FromFrameTimes { reference_rate_mbps } if !(reference_rate_mbps > 0.0) => Err(
                Error::config("mac.frames_per_slot.reference_rate_mbps must be positive"),
            ),
            _ => Ok(()),
        }
    }

    /// Frames per slot `m` under the configured rule.
    pub fn frames_per_slot(&self) -> Result<u32> {
        let t_s = match self.frames_per_slot {
            FramesPerSlotRule::Constant { t_s_us } => t_s_us,
            FramesPerSlotRule::FromFrameTimes { reference_rate_mbps } => {
                frame_times(PhyKind::Dot11n, reference_rate_mbps, &self.timing)?.t_s
            }
        };
        frames_per_slot(self.slot_duration_ms * 1000.0, t_s)
    }
}

/// MAC and PHY of both populations. The legacy population always runs
/// 802.11n LBT.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacAssignment {
    pub legacy: MacMechanism,
    pub legacy_phy: PhyKind,
    pub entrant: MacMechanism,
    pub entrant_phy: PhyKind,
    pub thresholds: CsThresholds,
}

impl MacAssignment {
    pub fn for_variant(variant: EntrantVariant, options: &MacOptions) -> Self {
        MacAssignment {
            legacy: MacMechanism {
                variant: MacVariant::Lbt {
                    cs_threshold_dbm: options.thresholds.wifi_dbm,
                },
                slot_duration_ms: options.slot_duration_ms,
            },
            legacy_phy: PhyKind::Dot11n,
            entrant: MacMechanism {
                variant: variant.mac(),
                slot_duration_ms: options.slot_duration_ms,
            },
            entrant_phy: variant.phy(),
            thresholds: options.thresholds,
        }
    }

    pub fn phy_of(&self, population: Population) -> PhyKind {
        match population {
            Population::Legacy => self.legacy_phy,
            Population::Entrant => self.entrant_phy,
        }
    }

    /// Received-power threshold (dBm) above which an AP of `observer`
    /// detects a transmitter of `target`.
    pub fn detection_threshold(&self, observer: Population, target: Population) -> f64 {
        let t = &self.thresholds;
        match observer {
            Population::Legacy => {
                if self.phy_of(target) == PhyKind::Dot11n {
                    t.wifi_dbm
                } else {
                    t.other_technology_dbm
                }
            }
            Population::Entrant => match self.entrant.variant {
                MacVariant::Lbt { cs_threshold_dbm } => cs_threshold_dbm,
                _ => t.duty_cycle_detect_dbm,
            },
        }
    }
}

/// Time-domain factors of one AP's throughput.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AirTimeBreakdown {
    pub s: f64,
    pub coll: f64,
    pub air_time: f64,
    /// Slot vacancy probability; only defined for legacy APs next to a
    /// slotted (non-LBT) entrant population.
    pub f_dut: Option<f64>,
}

fn share(graph: &CsGraph, ap: usize) -> f64 {
    1.0 / (1 + graph.legacy_in_range(ap).len() + graph.entrant_in_range(ap).len()) as f64
}

/// Probability that a duty-cycle slot is free of entrant transmissions
/// within the CS range of legacy AP `x`. `None` when the entrants use LBT.
pub fn f_dut(x: usize, graph: &CsGraph, entrant: MacVariant) -> Option<f64> {
    let b = graph.entrant_in_range(x);
    if entrant.is_lbt() {
        return None;
    }
    if b.is_empty() {
        return Some(1.0);
    }
    let value = match entrant {
        MacVariant::AlwaysOn => 0.0,
        MacVariant::Fixed50Coordinated => 0.5,
        MacVariant::Fixed50Uncoordinated => 0.5f64.powi(b.len() as i32),
        MacVariant::AdaptiveDutyCycle => b.iter().map(|&y| 1.0 - share(graph, y as usize)).product(),
        MacVariant::IdealTdma => {
            let a = graph.legacy_in_range(x).len() as f64;
            (1.0 + a) / (1.0 + a + b.len() as f64)
        }
        MacVariant::Lbt { .. } => unreachable!(),
    };
    Some(value)
}

/// Long-run fraction of channel time obtained by `ap`.
pub fn air_time(ap: usize, graph: &CsGraph, assignment: &MacAssignment) -> f64 {
    let entrant = assignment.entrant.variant;
    if graph.is_legacy(ap) {
        match f_dut(ap, graph, entrant) {
            None => share(graph, ap),
            Some(f) => f / (1 + graph.legacy_in_range(ap).len()) as f64,
        }
    } else {
        match entrant {
            MacVariant::AlwaysOn => 1.0,
            MacVariant::Fixed50Coordinated | MacVariant::Fixed50Uncoordinated => 0.5,
            _ => share(graph, ap),
        }
    }
}

/// Fraction of legacy AP `x`'s frames lost at duty-cycle slot boundaries.
pub fn collision_degradation(x: usize, graph: &CsGraph, entrant: MacVariant, m: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain("frames per slot must be at least 1"));
    }
    let b = graph.entrant_in_range(x);
    if b.is_empty() {
        return Ok(0.0);
    }
    let inv_m = 1.0 / m as f64;
    Ok(match entrant {
        MacVariant::Fixed50Coordinated | MacVariant::Fixed50Uncoordinated => inv_m,
        MacVariant::AdaptiveDutyCycle => {
            let vacant_next: f64 = b
                .iter()
                .map(|&z| {
                    let z = z as usize;
                    let others = graph.legacy_in_range(z).len() + graph.entrant_in_range(z).len();
                    // an entrant with no neighbours transmits every slot
                    if others == 0 {
                        0.0
                    } else {
                        1.0 - 1.0 / others as f64
                    }
                })
                .product();
            inv_m * (1.0 - vacant_next)
        }
        MacVariant::IdealTdma | MacVariant::AlwaysOn | MacVariant::Lbt { .. } => 0.0,
    })
}

/// `m = floor(slot / T_s)`, at least 1.
pub fn frames_per_slot(slot_duration_us: f64, t_s_us: f64) -> Result<u32> {
    if !(t_s_us > 0.0) || !(slot_duration_us > 0.0) {
        return Err(Error::domain(format!(
            "slot ({slot_duration_us} µs) and frame exchange ({t_s_us} µs) must be positive"
        )));
    }
    Ok(((slot_duration_us / t_s_us).floor() as u32).max(1))
}

/// APs contending by LBT with `x`: `x` itself, then its in-range legacy
/// APs, then its in-range entrants when the entrants also run LBT.
pub fn lbt_contenders(x: usize, graph: &CsGraph, entrant: MacVariant) -> Vec<usize> {
    let mut out = Vec::with_capacity(1 + graph.legacy_in_range(x).len() + graph.entrant_in_range(x).len());
    out.push(x);
    out.extend(graph.legacy_in_range(x).iter().map(|&z| z as usize));
    if entrant.is_lbt() {
        out.extend(graph.entrant_in_range(x).iter().map(|&z| z as usize));
    }
    out
}

/// MAC efficiency of LBT AP `x`, averaging frame timing over its LBT
/// contenders. `frames[i]` holds AP `i`'s timing (None for non-LBT APs).
pub fn mac_efficiency(
    x: usize,
    graph: &CsGraph,
    entrant: MacVariant,
    frames: &[Option<FrameTimes>],
    sigma_us: f64,
) -> Result<f64> {
    let set: Vec<FrameTimes> = lbt_contenders(x, graph, entrant)
        .into_iter()
        .filter_map(|z| frames[z])
        .collect();
    efficiency_of(&set, sigma_us)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frames_per_slot_constants() {
        assert_eq!(frames_per_slot(10_000.0, 419.0).unwrap(), 23);
        assert_eq!(frames_per_slot(100_000.0, 419.0).unwrap(), 238);
        assert_eq!(frames_per_slot(300.0, 419.0).unwrap(), 1);
        assert!(frames_per_slot(10_000.0, 0.0).is_err());
    }

    #[test]
    fn computed_frame_rule() {
        let opts = MacOptions {
            slot_duration_ms: 10.0,
            frames_per_slot: FramesPerSlotRule::FromFrameTimes {
                reference_rate_mbps: 32.5,
            },
            ..MacOptions::default()
        };
        let t_s = frame_times(PhyKind::Dot11n, 32.5, &opts.timing).unwrap().t_s;
        assert_eq!(opts.frames_per_slot().unwrap(), (10_000.0 / t_s).floor() as u32);
        assert_eq!(MacOptions::default().frames_per_slot().unwrap(), 238);
    }

    #[test]
    fn variant_names_round_trip() {
        for v in EntrantVariant::ALL {
            assert_eq!(v.name().parse::<EntrantVariant>().unwrap(), v);
        }
        let err = "lte-adaptive".parse::<EntrantVariant>().unwrap_err().to_string();
        assert!(err.contains("lte-adaptive-dc"), "{err}");
        assert_eq!(EntrantVariant::suggest("wifi-lbt82"), "wifi-lbt-82");
        assert_eq!(EntrantVariant::suggest("lte-tdma"), "lte-ideal-tdma");
        assert_eq!(EntrantVariant::suggest("LTE-adaptive"), "lte-adaptive-dc");
    }

    #[test]
    fn lbt_threshold_range_checked() {
        let bad = MacMechanism::new(MacVariant::Lbt {
            cs_threshold_dbm: -20.0,
        });
        assert!(bad.validate().is_err());
        assert!(MacMechanism::new(MacVariant::AlwaysOn).validate().is_ok());
    }

    #[test]
    fn detection_thresholds_by_phy() {
        let opts = MacOptions::default();
        let wifi = MacAssignment::for_variant(EntrantVariant::WifiLbt62, &opts);
        assert_eq!(wifi.detection_threshold(Population::Legacy, Population::Entrant), -82.0);
        assert_eq!(wifi.detection_threshold(Population::Entrant, Population::Legacy), -62.0);
        let lte = MacAssignment::for_variant(EntrantVariant::LteAlwaysOn, &opts);
        assert_eq!(lte.detection_threshold(Population::Legacy, Population::Entrant), -62.0);
        assert_eq!(lte.detection_threshold(Population::Legacy, Population::Legacy), -82.0);
        assert_eq!(lte.detection_threshold(Population::Entrant, Population::Legacy), -62.0);
    }
}
