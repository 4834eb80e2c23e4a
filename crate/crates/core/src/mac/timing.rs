use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phy::PhyKind;

/// 802.11n (5 GHz, no RTS/CTS) timing constants. Durations in microseconds,
/// sizes in bits, rates in Mbps (so bits / Mbps yields microseconds).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FrameTiming {
    pub sigma_us: f64,
    pub sifs_us: f64,
    pub difs_us: f64,
    pub phy_header_us: f64,
    pub ack_bits: f64,
    pub mac_header_bits: f64,
    pub msdu_bits: f64,
    pub r_wifi_min_mbps: f64,
    pub lte_subframe_us: f64,
}

impl Default for FrameTiming {
    fn default() -> Self {
        FrameTiming {
            sigma_us: 9.0,
            sifs_us: 16.0,
            difs_us: 34.0,
            phy_header_us: 40.0,
            ack_bits: 112.0,
            mac_header_bits: 112.0,
            msdu_bits: 1500.0 * 8.0,
            r_wifi_min_mbps: 6.5,
            lte_subframe_us: 1000.0,
        }
    }
}

impl FrameTiming {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("sigma_us", self.sigma_us),
            ("sifs_us", self.sifs_us),
            ("difs_us", self.difs_us),
            ("phy_header_us", self.phy_header_us),
            ("ack_bits", self.ack_bits),
            ("mac_header_bits", self.mac_header_bits),
            ("msdu_bits", self.msdu_bits),
            ("r_wifi_min_mbps", self.r_wifi_min_mbps),
            ("lte_subframe_us", self.lte_subframe_us),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("timing.{name} must be positive, got {v}")));
            }
        }
        if (self.difs_us - (self.sifs_us + 2.0 * self.sigma_us)).abs() > 1e-9 {
            return Err(Error::config(format!(
                "timing.difs_us ({}) must equal sifs_us + 2 * sigma_us ({})",
                self.difs_us,
                self.sifs_us + 2.0 * self.sigma_us
            )));
        }
        Ok(())
    }
}

/// Frame duration, channel busy time on success, and on collision (µs).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameTimes {
    pub t_f: f64,
    pub t_s: f64,
    pub t_c: f64,
}

/// Frame timing of an LBT transmitter. 802.11n frames scale with the PHY
/// rate; LTE-PHY frames last one subframe regardless of rate.
pub fn frame_times(phy: PhyKind, rate_mbps: f64, timing: &FrameTiming) -> Result<FrameTimes> {
    match phy {
        PhyKind::Dot11n => {
            if !(rate_mbps > 0.0) || !rate_mbps.is_finite() {
                return Err(Error::domain(format!(
                    "802.11n frame rate must be positive, got {rate_mbps} Mbps"
                )));
            }
            let t_f = timing.phy_header_us + (timing.mac_header_bits + timing.msdu_bits) / rate_mbps;
            let t_s =
                t_f + timing.difs_us + timing.sifs_us + timing.phy_header_us + timing.ack_bits / timing.r_wifi_min_mbps;
            let t_c = t_f + timing.difs_us;
            Ok(FrameTimes { t_f, t_s, t_c })
        }
        PhyKind::Lte => {
            let t_f = timing.lte_subframe_us;
            Ok(FrameTimes {
                t_f,
                t_s: t_f + timing.difs_us,
                t_c: t_f + timing.difs_us,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lte_frame_is_one_subframe() {
        let ft = frame_times(PhyKind::Lte, 86.4, &FrameTiming::default()).unwrap();
        assert_eq!(ft.t_f, 1000.0);
        assert_eq!(ft.t_s, 1034.0);
        assert_eq!(ft.t_c, 1034.0);
    }

    #[test]
    fn dot11n_frame_at_32_5_mbps() {
        let ft = frame_times(PhyKind::Dot11n, 32.5, &FrameTiming::default()).unwrap();
        // 40 + (112 + 12000) / 32.5
        assert!((ft.t_f - 412.676_923_076_923).abs() < 1e-9);
        // + 34 + 16 + 40 + 112 / 6.5
        assert!((ft.t_s - 519.907_692_307_692).abs() < 1e-9);
        assert!((ft.t_c - (ft.t_f + 34.0)).abs() < 1e-12);
    }

    #[test]
    fn collision_never_longer_than_success() {
        let timing = FrameTiming::default();
        for rate in [6.5, 13.0, 19.5, 26.0, 39.0, 52.0, 58.5, 65.0, 600.0] {
            let ft = frame_times(PhyKind::Dot11n, rate, &timing).unwrap();
            assert!(ft.t_c <= ft.t_s);
        }
        let lte = frame_times(PhyKind::Lte, 1.0, &timing).unwrap();
        assert!(lte.t_c <= lte.t_s);
    }

    #[test]
    fn nonpositive_rate_rejected() {
        assert!(matches!(
            frame_times(PhyKind::Dot11n, 0.0, &FrameTiming::default()),
            Err(Error::Domain(_))
        ));
        assert!(frame_times(PhyKind::Dot11n, -3.0, &FrameTiming::default()).is_err());
    }

    #[test]
    fn difs_identity_enforced() {
        assert!(FrameTiming::default().validate().is_ok());
        let bad = FrameTiming {
            difs_us: 30.0,
            ..FrameTiming::default()
        };
        assert!(bad.validate().is_err());
    }
}
