//! Saturated binary-exponential-backoff model: per-slot transmission
//! probability and the resulting MAC efficiency of an LBT transmitter.

use std::collections::HashMap;
use std::sync::OnceLock;

use parking_lot::RwLock;

use super::timing::FrameTimes;
use crate::error::{Error, Result};

pub const CW_MIN: u32 = 15;
pub const CW_MAX: u32 = 1023;

const DAMPING: f64 = 0.5;
const TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 100_000;

/// Backoff parameters: minimum window `W = CW_min + 1` and number of
/// doubling stages `m` with `CW_max + 1 = W * 2^m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Backoff {
    pub window: f64,
    pub stages: u32,
}

impl Backoff {
    pub fn from_contention_windows(cw_min: u32, cw_max: u32) -> Result<Backoff> {
        let w = cw_min + 1;
        let ratio = (cw_max + 1) / w;
        if w == 0 || !(cw_max + 1).is_multiple_of(w) || !ratio.is_power_of_two() {
            return Err(Error::config(format!(
                "CW_max + 1 ({}) must be CW_min + 1 ({w}) times a power of two",
                cw_max + 1
            )));
        }
        Ok(Backoff {
            window: w as f64,
            stages: ratio.trailing_zeros(),
        })
    }
}

impl Default for Backoff {
    fn default() -> Self {
        // 1024 = 16 * 2^6
        Backoff {
            window: (CW_MIN + 1) as f64,
            stages: 6,
        }
    }
}

/// Right-hand side of the fixed point `tau = g(tau)` for `n` stations.
///
/// Written as `2 / (1 + W + p W sum_{i<m} (2p)^i)`, which has no removable
/// singularity at `p = 1/2`.
pub fn tau_map(tau: f64, n: usize, backoff: &Backoff) -> f64 {
    let p = 1.0 - (1.0 - tau).powi(n as i32 - 1);
    let mut geometric = 0.0;
    let mut term = 1.0;
    for _ in 0..backoff.stages {
        geometric += term;
        term *= 2.0 * p;
    }
    2.0 / (1.0 + backoff.window + p * backoff.window * geometric)
}

/// Solve the fixed point by damped iteration.
pub fn solve_tau(n: usize, backoff: &Backoff) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("station count must be at least 1"));
    }
    let mut tau = 2.0 / (backoff.window + 1.0);
    for _ in 0..MAX_ITERATIONS {
        let g = tau_map(tau, n, backoff);
        if (tau - g).abs() < TOLERANCE {
            return Ok(tau);
        }
        tau = (1.0 - DAMPING) * tau + DAMPING * g;
    }
    Err(Error::Numeric(format!(
        "backoff fixed point for n = {n} did not converge in {MAX_ITERATIONS} iterations"
    )))
}

fn tau_cache() -> &'static RwLock<HashMap<usize, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoized transmission probability for `n` contending stations with the
/// 802.11 5 GHz contention windows (15 / 1023).
pub fn bianchi_tau(n: usize) -> Result<f64> {
    if let Some(&tau) = tau_cache().read().get(&n) {
        return Ok(tau);
    }
    let tau = solve_tau(n, &Backoff::default())?;
    // Concurrent fills compute the same value.
    tau_cache().write().insert(n, tau);
    Ok(tau)
}

/// Fraction of time the channel carries successful payload for a set of
/// contenders with the given (per-station) frame times.
///
/// `frames` holds the contender set of the AP under evaluation, itself
/// included; its length is the station count `n`.
pub fn efficiency_of(frames: &[FrameTimes], sigma_us: f64) -> Result<f64> {
    let n = frames.len();
    if n == 0 {
        return Err(Error::domain("efficiency needs at least one contender"));
    }
    let mean = |f: fn(&FrameTimes) -> f64| frames.iter().map(f).sum::<f64>() / n as f64;
    let t_f = mean(|ft| ft.t_f);
    let t_s = mean(|ft| ft.t_s);
    let t_c = mean(|ft| ft.t_c);
    let tau = bianchi_tau(n)?;
    let t_c_slots = t_c / sigma_us;
    let idle = 1.0 - tau;
    let overhead =
        sigma_us * (t_c_slots - idle.powi(n as i32) * (t_c_slots - 1.0)) / (n as f64 * tau * idle.powi(n as i32 - 1));
    let s = t_f / (t_s - t_c + overhead);
    Ok(clamp_efficiency(s))
}

fn clamp_efficiency(s: f64) -> f64 {
    if s.is_nan() || s <= 0.0 {
        f64::MIN_POSITIVE
    } else {
        s.min(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mac::timing::{frame_times, FrameTiming};
    use crate::phy::PhyKind;

    #[test]
    fn stages_follow_from_windows() {
        let b = Backoff::from_contention_windows(CW_MIN, CW_MAX).unwrap();
        assert_eq!(b, Backoff::default());
        assert!(Backoff::from_contention_windows(15, 1000).is_err());
    }

    #[test]
    fn single_station_closed_form() {
        let tau = bianchi_tau(1).unwrap();
        assert!((tau - 2.0 / 17.0).abs() < 1e-12);
    }

    #[test]
    fn tau_strictly_decreasing_and_converged() {
        let b = Backoff::default();
        let mut prev = f64::INFINITY;
        for n in 1..=100 {
            let tau = bianchi_tau(n).unwrap();
            assert!((tau - tau_map(tau, n, &b)).abs() < 1e-12, "residual at n={n}");
            assert!(tau < prev, "tau not decreasing at n={n}");
            prev = tau;
        }
    }

    #[test]
    fn large_station_counts_converge() {
        for n in [1_000, 5_000, 10_000] {
            let tau = bianchi_tau(n).unwrap();
            assert!(tau > 0.0 && tau < 1.0);
        }
        assert!(bianchi_tau(0).is_err());
    }

    #[test]
    fn isolated_lte_lbt_efficiency() {
        // n = 1 collapses to T_f / (T_s + sigma (1/tau - 1)) = 1000 / 1101.5
        let ft = frame_times(PhyKind::Lte, 1.0, &FrameTiming::default()).unwrap();
        let s = efficiency_of(&[ft], 9.0).unwrap();
        assert!((s - 1000.0 / 1101.5).abs() < 1e-12);
    }

    #[test]
    fn efficiency_decreasing_beyond_two_contenders() {
        let timing = FrameTiming::default();
        for ft in [
            frame_times(PhyKind::Lte, 1.0, &timing).unwrap(),
            frame_times(PhyKind::Dot11n, 65.0, &timing).unwrap(),
            frame_times(PhyKind::Dot11n, 6.5, &timing).unwrap(),
        ] {
            let mut prev = 1.0;
            for n in 1..=20 {
                let s = efficiency_of(&vec![ft; n], timing.sigma_us).unwrap();
                assert!(s > 0.0 && s < 1.0);
                // short frames waste more idle backoff alone than with a
                // second contender, so the trend starts at n = 2
                assert!(n <= 2 || s < prev, "n={n}: {s} !< {prev}");
                prev = s;
            }
        }
    }
}
