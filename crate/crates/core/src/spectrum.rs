//! Channel assignment and the carrier-sense graph.

use std::io::Write;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mac::MacAssignment;
use crate::propagation::LinkTable;
use crate::scenario::{NetworkRealization, Population};
use crate::seed::{indexed_rng, stream_rng, Stream};

pub const INDOOR_CHANNELS: u16 = 19;
pub const OUTDOOR_CHANNELS: u16 = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelScheme {
    Random,
    Sense,
    SingleChannel,
}

impl ChannelScheme {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelScheme::Random => "random",
            ChannelScheme::Sense => "sense",
            ChannelScheme::SingleChannel => "single-channel",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelPlan {
    pub scheme: ChannelScheme,
    pub channels_indoor: u16,
    /// Outdoor-eligible channels are `0..channels_outdoor`, a subset of the
    /// indoor ones.
    pub channels_outdoor: u16,
    /// Channel of each AP, by AP index.
    pub assignment: Vec<u16>,
}

impl ChannelPlan {
    pub fn channel(&self, ap: usize) -> u16 {
        self.assignment[ap]
    }

    /// The plan restricted to the first `n` APs.
    pub fn truncated(&self, n: usize) -> ChannelPlan {
        ChannelPlan {
            assignment: self.assignment[..n].to_vec(),
            ..self.clone()
        }
    }
}

fn eligible(indoor: bool) -> u16 {
    if indoor {
        INDOOR_CHANNELS
    } else {
        OUTDOOR_CHANNELS
    }
}

/// Legacy channels first (uniform, one per AP), then entrants by `scheme`.
///
/// Each entrant draws from its own stream and senses only legacy APs, so an
/// entrant's channel does not depend on how many other entrants exist.
pub fn assign_channels(links: &LinkTable<'_>, scheme: ChannelScheme, assignment: &MacAssignment) -> ChannelPlan {
    let r = links.realization();
    let n = r.aps.len();
    let mut channels = vec![0u16; n];
    if scheme != ChannelScheme::SingleChannel {
        let mut rng = stream_rng(r.seed, Stream::LegacyChannels);
        for (i, ap) in r.aps[..r.n_legacy].iter().enumerate() {
            channels[i] = rng.random_range(0..eligible(ap.indoor));
        }
        let threshold = assignment.detection_threshold(Population::Entrant, Population::Legacy);
        for e in r.n_legacy..n {
            let ap = &r.aps[e];
            let mut rng = indexed_rng(r.seed, Stream::EntrantChannels, (e - r.n_legacy) as u64);
            let count = eligible(ap.indoor);
            channels[e] = match scheme {
                ChannelScheme::Random => rng.random_range(0..count),
                ChannelScheme::Sense => {
                    let mut detected = vec![0usize; count as usize];
                    for z in 0..r.n_legacy {
                        let ch = channels[z];
                        if ch < count && r.aps[z].tx_power_dbm - links.ap_ap(e, z) >= threshold {
                            detected[ch as usize] += 1;
                        }
                    }
                    let fewest = *detected.iter().min().expect("at least one channel");
                    let candidates: Vec<u16> = (0..count).filter(|&c| detected[c as usize] == fewest).collect();
                    *candidates.choose(&mut rng).expect("nonempty")
                }
                ChannelScheme::SingleChannel => unreachable!(),
            };
        }
    }
    ChannelPlan {
        scheme,
        channels_indoor: INDOOR_CHANNELS,
        channels_outdoor: OUTDOOR_CHANNELS,
        assignment: channels,
    }
}

/// Who detects whom on the same channel.
///
/// For AP `i`, `legacy_in_range(i)` is `A_x` (legacy `i`) or `C_y`
/// (entrant `i`) and `entrant_in_range(i)` is `B_x` or `D_y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsGraph {
    n_legacy: usize,
    channel: Vec<u16>,
    legacy_in_range: Vec<Vec<u32>>,
    entrant_in_range: Vec<Vec<u32>>,
}

impl CsGraph {
    /// Graph from explicit detection sets.
    pub fn from_sets(
        n_legacy: usize,
        channel: Vec<u16>,
        legacy_in_range: Vec<Vec<u32>>,
        entrant_in_range: Vec<Vec<u32>>,
    ) -> Result<CsGraph> {
        let n = channel.len();
        if legacy_in_range.len() != n || entrant_in_range.len() != n || n_legacy > n {
            return Err(Error::domain("CS graph set lists must match the AP count"));
        }
        for i in 0..n {
            let ok_l = legacy_in_range[i]
                .iter()
                .all(|&z| (z as usize) < n_legacy && z as usize != i);
            let ok_e = entrant_in_range[i]
                .iter()
                .all(|&z| (z as usize) >= n_legacy && (z as usize) < n && z as usize != i);
            if !ok_l || !ok_e {
                return Err(Error::domain(format!(
                    "CS sets of AP {i} reference the wrong population"
                )));
            }
        }
        let sorted = |mut sets: Vec<Vec<u32>>| {
            for s in &mut sets {
                s.sort_unstable();
                s.dedup();
            }
            sets
        };
        Ok(CsGraph {
            n_legacy,
            channel,
            legacy_in_range: sorted(legacy_in_range),
            entrant_in_range: sorted(entrant_in_range),
        })
    }

    pub fn len(&self) -> usize {
        self.channel.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channel.is_empty()
    }

    pub fn n_legacy(&self) -> usize {
        self.n_legacy
    }

    pub fn is_legacy(&self, ap: usize) -> bool {
        ap < self.n_legacy
    }

    pub fn channel(&self, ap: usize) -> u16 {
        self.channel[ap]
    }

    pub fn co_channel(&self, a: usize, b: usize) -> bool {
        self.channel[a] == self.channel[b]
    }

    pub fn legacy_in_range(&self, ap: usize) -> &[u32] {
        &self.legacy_in_range[ap]
    }

    pub fn entrant_in_range(&self, ap: usize) -> &[u32] {
        &self.entrant_in_range[ap]
    }

    pub fn detects(&self, x: usize, z: usize) -> bool {
        let set = if z < self.n_legacy {
            &self.legacy_in_range[x]
        } else {
            &self.entrant_in_range[x]
        };
        set.binary_search(&(z as u32)).is_ok()
    }

    /// APs sharing AP `x`'s channel, `x` excluded, ascending.
    pub fn co_channel_aps(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let ch = self.channel[x];
        (0..self.len()).filter(move |&z| z != x && self.channel[z] == ch)
    }

    /// Debug dump: one row per AP with its in-range sets.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["ap", "population", "channel", "legacy_in_range", "entrant_in_range"])
            .map_err(io)?;
        let join = |v: &[u32]| v.iter().map(|z| z.to_string()).collect::<Vec<_>>().join(" ");
        for i in 0..self.len() {
            let pop = if self.is_legacy(i) { "legacy" } else { "entrant" };
            w.write_record(&[
                i.to_string(),
                pop.to_string(),
                self.channel[i].to_string(),
                join(&self.legacy_in_range[i]),
                join(&self.entrant_in_range[i]),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `z` is in the CS range of `x` iff co-channel and
/// `P_z - L(x, z) >= threshold of x toward z's technology`.
pub fn build_cs_graph(
    realization: &NetworkRealization,
    plan: &ChannelPlan,
    assignment: &MacAssignment,
    links: &LinkTable<'_>,
) -> CsGraph {
    let n = plan.assignment.len().min(realization.aps.len());
    let mut legacy_in_range = vec![Vec::new(); n];
    let mut entrant_in_range = vec![Vec::new(); n];

    let mut by_channel: Vec<Vec<usize>> = vec![Vec::new(); INDOOR_CHANNELS.max(plan.channels_indoor) as usize];
    for i in 0..n {
        let ch = plan.channel(i) as usize;
        if ch >= by_channel.len() {
            by_channel.resize(ch + 1, Vec::new());
        }
        by_channel[ch].push(i);
    }
    for group in &by_channel {
        for &x in group {
            let px = realization.population(x);
            for &z in group {
                if z == x {
                    continue;
                }
                let pz = realization.population(z);
                let threshold = assignment.detection_threshold(px, pz);
                if realization.aps[z].tx_power_dbm - links.ap_ap(x, z) >= threshold {
                    match pz {
                        Population::Legacy => legacy_in_range[x].push(z as u32),
                        Population::Entrant => entrant_in_range[x].push(z as u32),
                    }
                }
            }
        }
    }
    CsGraph {
        n_legacy: realization.n_legacy,
        channel: plan.assignment[..n].to_vec(),
        legacy_in_range,
        entrant_in_range,
    }
}
