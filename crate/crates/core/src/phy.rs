//! Interference aggregation, SINR, auto-rate and throughput composition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mac::{self, AirTimeBreakdown, FrameTimes, MacAssignment, MacOptions, MacVariant};
use crate::propagation::LinkTable;
use crate::scenario::Population;
use crate::spectrum::CsGraph;

/// Thermal noise density, dBm/Hz.
pub const THERMAL_NOISE_DBM_HZ: f64 = -174.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhyKind {
    Dot11n,
    Lte,
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateStep {
    pub min_sinr_db: f64,
    pub efficiency_bps_hz: f64,
}

/// SINR (dB) to spectral efficiency (bps/Hz).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RateMapping {
    /// Highest step whose threshold the SINR reaches.
    Steps { steps: Vec<RateStep> },
    /// `alpha * log2(1 + SINR)` capped at `rho_max`, zero below `min_sinr_db`.
    TruncatedLog { alpha: f64, rho_max: f64, min_sinr_db: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoRateProfile {
    pub phy: PhyKind,
    pub noise_figure_db: f64,
    pub bandwidth_hz: f64,
    pub mapping: RateMapping,
}

impl AutoRateProfile {
    /// Single-stream 20 MHz 802.11n rates 6.5..65 Mbps; thresholds follow the
    /// receiver-sensitivity spacing of the MCS set above the noise floor.
    pub fn dot11n() -> Self {
        let table = [
            (4.0, 6.5),
            (7.0, 13.0),
            (9.0, 19.5),
            (12.0, 26.0),
            (16.0, 39.0),
            (20.0, 52.0),
            (21.0, 58.5),
            (22.0, 65.0),
        ];
        AutoRateProfile {
            phy: PhyKind::Dot11n,
            noise_figure_db: 15.0,
            bandwidth_hz: 20e6,
            mapping: RateMapping::Steps {
                steps: table
                    .iter()
                    .map(|&(t, mbps)| RateStep {
                        min_sinr_db: t,
                        efficiency_bps_hz: mbps / 20.0,
                    })
                    .collect(),
            },
        }
    }

    pub fn lte() -> Self {
        AutoRateProfile {
            phy: PhyKind::Lte,
            noise_figure_db: 9.0,
            bandwidth_hz: 20e6,
            mapping: RateMapping::TruncatedLog {
                alpha: 0.75,
                rho_max: 4.32,
                min_sinr_db: -10.0,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::config("rate profile bandwidth must be positive"));
        }
        match &self.mapping {
            RateMapping::Steps { steps } => {
                if steps.is_empty() {
                    return Err(Error::config("rate step table is empty"));
                }
                for w in steps.windows(2) {
                    if !(w[1].min_sinr_db > w[0].min_sinr_db && w[1].efficiency_bps_hz >= w[0].efficiency_bps_hz) {
                        return Err(Error::config(
                            "rate steps must have increasing thresholds and nondecreasing efficiency",
                        ));
                    }
                }
                if steps.iter().any(|s| !(s.efficiency_bps_hz >= 0.0)) {
                    return Err(Error::config("rate step efficiency must be nonnegative"));
                }
            }
            RateMapping::TruncatedLog { alpha, rho_max, .. } => {
                if !(*alpha > 0.0 && *rho_max > 0.0) {
                    return Err(Error::config("truncated-log alpha and rho_max must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Noise power over the channel bandwidth, dBm.
    pub fn noise_dbm(&self) -> f64 {
        THERMAL_NOISE_DBM_HZ + 10.0 * self.bandwidth_hz.log10() + self.noise_figure_db
    }

    pub fn bandwidth_mhz(&self) -> f64 {
        self.bandwidth_hz / 1e6
    }

    /// Lowest PHY rate (Mbps) the profile can use.
    pub fn min_rate_mbps(&self) -> f64 {
        match &self.mapping {
            RateMapping::Steps { steps } => steps[0].efficiency_bps_hz * self.bandwidth_mhz(),
            RateMapping::TruncatedLog { alpha, min_sinr_db, .. } => {
                alpha * (1.0 + 10f64.powf(min_sinr_db / 10.0)).log2() * self.bandwidth_mhz()
            }
        }
    }
}

/// Rate profiles of the two PHYs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhyProfiles {
    pub dot11n: AutoRateProfile,
    pub lte: AutoRateProfile,
}

impl Default for PhyProfiles {
    fn default() -> Self {
        PhyProfiles {
            dot11n: AutoRateProfile::dot11n(),
            lte: AutoRateProfile::lte(),
        }
    }
}

impl PhyProfiles {
    pub fn get(&self, phy: PhyKind) -> &AutoRateProfile {
        match phy {
            PhyKind::Dot11n => &self.dot11n,
            PhyKind::Lte => &self.lte,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.dot11n.validate()?;
        self.lte.validate()?;
        if self.dot11n.phy != PhyKind::Dot11n || self.lte.phy != PhyKind::Lte {
            return Err(Error::config("phy profiles are keyed by their own PHY kind"));
        }
        Ok(())
    }
}

/// Spectral efficiency (bps/Hz) at `sinr_db`.
pub fn auto_rate(sinr_db: f64, profile: &AutoRateProfile) -> f64 {
    match &profile.mapping {
        RateMapping::Steps { steps } => steps
            .iter()
            .rev()
            .find(|s| sinr_db >= s.min_sinr_db)
            .map_or(0.0, |s| s.efficiency_bps_hz),
        RateMapping::TruncatedLog {
            alpha,
            rho_max,
            min_sinr_db,
        } => {
            if sinr_db.is_nan() || sinr_db < *min_sinr_db {
                0.0
            } else {
                (alpha * (1.0 + 10f64.powf(sinr_db / 10.0)).log2()).min(*rho_max)
            }
        }
    }
}

/// Interference at a user, split by the population causing it (mW).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Interference {
    pub legacy_mw: f64,
    pub entrant_mw: f64,
}

impl Interference {
    pub fn total_mw(&self) -> f64 {
        self.legacy_mw + self.entrant_mw
    }
}

/// Weight of an in-range entrant `z` at an entrant user: in-range
/// duty-cycled entrants are not deferred to, so they overlap.
fn in_range_entrant_weight(entrant: MacVariant, air_time_z: f64) -> f64 {
    match entrant {
        MacVariant::AlwaysOn | MacVariant::Fixed50Coordinated => 1.0,
        MacVariant::Fixed50Uncoordinated => 0.5,
        MacVariant::AdaptiveDutyCycle => air_time_z,
        MacVariant::Lbt { .. } | MacVariant::IdealTdma => 0.0,
    }
}

/// Interference at the user of AP `ap`. Co-channel APs outside `ap`'s CS
/// range interfere weighted by their air time; in-range entrants add to
/// entrant users when they are duty-cycled.
pub fn interference_at_user(
    ap: usize,
    graph: &CsGraph,
    assignment: &MacAssignment,
    links: &LinkTable<'_>,
    air_time: &[f64],
) -> Interference {
    let entrant = assignment.entrant.variant;
    let serving_is_legacy = graph.is_legacy(ap);
    let mut out = Interference::default();
    for z in graph.co_channel_aps(ap) {
        let in_range = graph.detects(ap, z);
        let weight = if graph.is_legacy(z) {
            if in_range {
                continue;
            }
            air_time[z]
        } else if !in_range {
            air_time[z]
        } else if serving_is_legacy {
            continue;
        } else {
            in_range_entrant_weight(entrant, air_time[z])
        };
        if weight == 0.0 {
            continue;
        }
        let p = weight * links.rx_mw(z, ap);
        if graph.is_legacy(z) {
            out.legacy_mw += p;
        } else {
            out.entrant_mw += p;
        }
    }
    out
}

/// `P L^-1 / (N + I)` in dB.
pub fn sinr_db(rx_power_dbm: f64, interference: &Interference, profile: &AutoRateProfile) -> f64 {
    let signal = dbm_to_mw(rx_power_dbm);
    let noise = dbm_to_mw(profile.noise_dbm());
    mw_to_dbm(signal / (noise + interference.total_mw()))
}

/// `S × COLL × AirTime × ρ × B` in Mbps.
pub fn throughput(breakdown: &AirTimeBreakdown, rho_bps_hz: f64, bandwidth_mhz: f64) -> f64 {
    breakdown.s * breakdown.coll * breakdown.air_time * rho_bps_hz * bandwidth_mhz
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThroughputReport {
    pub ap: usize,
    pub population: Population,
    pub channel: u16,
    pub sinr_db: f64,
    pub rho_bps_hz: f64,
    pub breakdown: AirTimeBreakdown,
    pub bandwidth_mhz: f64,
    pub throughput_mbps: f64,
}

/// Downlink throughput of every AP in the graph.
pub fn evaluate(
    graph: &CsGraph,
    assignment: &MacAssignment,
    links: &LinkTable<'_>,
    phy: &PhyProfiles,
    mac_options: &MacOptions,
) -> Result<Vec<ThroughputReport>> {
    let n = graph.len();
    let r = links.realization();
    let entrant = assignment.entrant.variant;
    let m = mac_options.frames_per_slot()?;

    let air: Vec<f64> = (0..n).map(|i| mac::air_time(i, graph, assignment)).collect();

    let mut sinr = Vec::with_capacity(n);
    let mut rho = Vec::with_capacity(n);
    for i in 0..n {
        let profile = phy.get(assignment.phy_of(r.population(i)));
        let interference = interference_at_user(i, graph, assignment, links, &air);
        let s = sinr_db(r.aps[i].tx_power_dbm - links.ap_user(i, i), &interference, profile);
        sinr.push(s);
        rho.push(auto_rate(s, profile));
    }

    let lbt = |i: usize| graph.is_legacy(i) || entrant.is_lbt();
    let mut frames: Vec<Option<FrameTimes>> = vec![None; n];
    for i in (0..n).filter(|&i| lbt(i)) {
        let kind = assignment.phy_of(r.population(i));
        let profile = phy.get(kind);
        let mut rate = rho[i] * profile.bandwidth_mhz();
        if rate <= 0.0 {
            // a link below the lowest MCS still occupies the medium at the
            // lowest rate
            rate = mac_options.timing.r_wifi_min_mbps;
        }
        frames[i] = Some(mac::frame_times(kind, rate, &mac_options.timing)?);
    }

    let mut reports = Vec::with_capacity(n);
    for i in 0..n {
        let population = r.population(i);
        let s = if lbt(i) {
            mac::mac_efficiency(i, graph, entrant, &frames, mac_options.timing.sigma_us)?
        } else {
            1.0
        };
        let (coll, f_dut) = if graph.is_legacy(i) {
            let coll = if entrant.is_duty_cycle() {
                1.0 - mac::collision_degradation(i, graph, entrant, m)?
            } else {
                1.0
            };
            (coll, mac::f_dut(i, graph, entrant))
        } else {
            (1.0, None)
        };
        let breakdown = AirTimeBreakdown {
            s,
            coll,
            air_time: air[i],
            f_dut,
        };
        let bandwidth_mhz = phy.get(assignment.phy_of(population)).bandwidth_mhz();
        reports.push(ThroughputReport {
            ap: i,
            population,
            channel: graph.channel(i),
            sinr_db: sinr[i],
            rho_bps_hz: rho[i],
            breakdown,
            bandwidth_mhz,
            throughput_mbps: throughput(&breakdown, rho[i], bandwidth_mhz),
        });
    }
    Ok(reports)
}
