//! Independent reference implementations used by the integration tests and
//! the acceptance harness. Nothing here calls the library code it checks.
#![allow(dead_code)]

use coexsim::geometry::Point3;
use coexsim::mac::{FrameTimes, MacVariant};
use coexsim::scenario::Building;
use coexsim::CsGraph;
use rand::Rng;

/// Random detection sets over `n_legacy + n_entrant` APs on one channel.
pub fn random_graph<R: Rng>(rng: &mut R, n_legacy: usize, n_entrant: usize, density: f64) -> CsGraph {
    let n = n_legacy + n_entrant;
    let mut legacy = vec![Vec::new(); n];
    let mut entrant = vec![Vec::new(); n];
    for x in 0..n {
        for z in 0..n {
            if z != x && rng.random_bool(density) {
                if z < n_legacy {
                    legacy[x].push(z as u32);
                } else {
                    entrant[x].push(z as u32);
                }
            }
        }
    }
    CsGraph::from_sets(n_legacy, vec![0; n], legacy, entrant).expect("well-formed sets")
}

fn in_range_count(g: &CsGraph, z: usize) -> usize {
    g.legacy_in_range(z).len() + g.entrant_in_range(z).len()
}

/// Slot-level duty-cycle simulator.
pub mod slots {
    use super::*;

    /// Transmission pattern of every entrant over `t` consecutive slots.
    /// Adaptive entrants pick one slot in each period of
    /// `1 + |C| + |D|` slots; fixed-50% entrants use one of every two slots
    /// (the same one for all when coordinated); ideal TDMA entrants get
    /// disjoint slots of one frame shared with the legacy APs in range.
    pub struct Pattern {
        /// `on[e][t]` for entrant index `e` (AP `n_legacy + e`).
        pub on: Vec<Vec<bool>>,
        /// Period length of each entrant.
        pub period: Vec<usize>,
    }

    pub fn simulate<R: Rng>(g: &CsGraph, variant: MacVariant, t: usize, rng: &mut R) -> Pattern {
        let nl = g.n_legacy();
        let ne = g.len() - nl;
        let mut on = vec![vec![false; t]; ne];
        let mut period = vec![1; ne];
        let coordinated_phase = rng.random_range(0..2);
        for e in 0..ne {
            let y = nl + e;
            match variant {
                MacVariant::AlwaysOn => on[e].iter_mut().for_each(|s| *s = true),
                MacVariant::Fixed50Coordinated | MacVariant::Fixed50Uncoordinated => {
                    period[e] = 2;
                    let mut start = 0;
                    while start < t {
                        let pick = if variant == MacVariant::Fixed50Coordinated {
                            coordinated_phase
                        } else {
                            rng.random_range(0..2)
                        };
                        if start + pick < t {
                            on[e][start + pick] = true;
                        }
                        start += 2;
                    }
                }
                MacVariant::AdaptiveDutyCycle => {
                    let k = 1 + in_range_count(g, y);
                    period[e] = k;
                    let mut start = 0;
                    while start < t {
                        let pick = rng.random_range(0..k);
                        if start + pick < t {
                            on[e][start + pick] = true;
                        }
                        start += k;
                    }
                }
                MacVariant::IdealTdma | MacVariant::Lbt { .. } => {}
            }
        }
        Pattern { on, period }
    }

    /// Fraction of slots free of every entrant in `B_x`.
    pub fn vacancy(g: &CsGraph, x: usize, p: &Pattern) -> (f64, f64) {
        let nl = g.n_legacy();
        let b: Vec<usize> = g.entrant_in_range(x).iter().map(|&z| z as usize - nl).collect();
        let t = p.on.first().map_or(0, |v| v.len());
        let free = (0..t).filter(|&s| b.iter().all(|&e| !p.on[e][s])).count();
        let f = free as f64 / t as f64;
        (f, (f * (1.0 - f) / t as f64).sqrt())
    }

    /// Ideal TDMA: one frame of `1 + |A_x| + |B_x|` slots dealt out at
    /// random to `x`, its legacy neighbours and its entrant neighbours.
    pub fn tdma_vacancy<R: Rng>(g: &CsGraph, x: usize, frames: usize, rng: &mut R) -> f64 {
        let a = g.legacy_in_range(x).len();
        let b = g.entrant_in_range(x).len();
        let len = 1 + a + b;
        let mut free = 0;
        for _ in 0..frames {
            let mut owners: Vec<bool> = (0..len).map(|i| i > a).collect();
            for i in (1..len).rev() {
                let j = rng.random_range(0..=i);
                owners.swap(i, j);
            }
            free += owners.iter().filter(|&&entrant| !entrant).count();
        }
        free as f64 / (frames * len) as f64
    }

    /// Estimate of P(next slot occupied | current slot vacant) by entrants
    /// of `B_x`. With `interior` only transitions strictly inside the
    /// current period of every entrant in `B_x` are used.
    pub fn next_occupied(g: &CsGraph, x: usize, p: &Pattern, interior: bool) -> Option<(f64, f64)> {
        let nl = g.n_legacy();
        let b: Vec<usize> = g.entrant_in_range(x).iter().map(|&z| z as usize - nl).collect();
        let t = p.on.first().map_or(0, |v| v.len());
        let (mut trials, mut hits) = (0usize, 0usize);
        for s in 0..t.saturating_sub(1) {
            if interior && b.iter().any(|&e| s % p.period[e] == p.period[e] - 1) {
                continue;
            }
            if b.iter().any(|&e| p.on[e][s]) {
                continue;
            }
            trials += 1;
            if b.iter().any(|&e| p.on[e][s + 1]) {
                hits += 1;
            }
        }
        if trials == 0 {
            return None;
        }
        let q = hits as f64 / trials as f64;
        Some((q, (q * (1.0 - q) / trials as f64).sqrt()))
    }
}

/// Literal transcription of the throughput-parameter and interference
/// tables for one channel.
pub mod tables {
    use super::*;

    fn a_size(g: &CsGraph, z: usize) -> f64 {
        g.legacy_in_range(z).len() as f64
    }

    fn b_size(g: &CsGraph, z: usize) -> f64 {
        g.entrant_in_range(z).len() as f64
    }

    /// Vacancy probability of legacy `x` next to slotted entrants.
    pub fn f_dut(g: &CsGraph, x: usize, variant: MacVariant) -> f64 {
        let bx = g.entrant_in_range(x);
        if bx.is_empty() {
            return 1.0;
        }
        match variant {
            MacVariant::AlwaysOn => 0.0,
            MacVariant::Fixed50Coordinated => 0.5,
            MacVariant::Fixed50Uncoordinated => (0..bx.len()).fold(1.0, |acc, _| acc * 0.5),
            MacVariant::AdaptiveDutyCycle => bx.iter().fold(1.0, |acc, &y| {
                let y = y as usize;
                acc * (1.0 - 1.0 / (1.0 + a_size(g, y) + b_size(g, y)))
            }),
            MacVariant::IdealTdma => (1.0 + a_size(g, x)) / (1.0 + a_size(g, x) + bx.len() as f64),
            MacVariant::Lbt { .. } => panic!("no vacancy for LBT entrants"),
        }
    }

    /// `(I^M, I^N)` at the user of AP `x` (legacy) or `y` (entrant).
    /// `received_mw[z]` is `P_z / L(user, z)`.
    pub fn interference(g: &CsGraph, ap: usize, variant: MacVariant, received_mw: &[f64]) -> (f64, f64) {
        let nl = g.n_legacy();
        let ch = g.channel(ap);
        let legacy_set: Vec<usize> = (0..nl).filter(|&z| g.channel(z) == ch && z != ap).collect();
        let entrant_set: Vec<usize> = (nl..g.len()).filter(|&z| g.channel(z) == ch && z != ap).collect();
        let in_legacy = |z: usize| g.legacy_in_range(ap).contains(&(z as u32));
        let in_entrant = |z: usize| g.entrant_in_range(ap).contains(&(z as u32));
        let lbt = variant.is_lbt();
        let tdma = variant == MacVariant::IdealTdma;

        // legacy interferers outside the CS range: same row in both tables
        let mut i_m = 0.0;
        for &z in legacy_set.iter().filter(|&&z| !in_legacy(z)) {
            i_m += if lbt || tdma {
                received_mw[z] / (1.0 + a_size(g, z) + b_size(g, z))
            } else {
                f_dut(g, z, variant) * received_mw[z] / (1.0 + a_size(g, z))
            };
        }

        let air = |z: usize| 1.0 / (1.0 + a_size(g, z) + b_size(g, z));
        let mut i_n = 0.0;
        let serving_legacy = ap < nl;
        for &z in &entrant_set {
            let inside = in_entrant(z);
            let term = match (variant, inside, serving_legacy) {
                (_, true, true) => 0.0,
                (MacVariant::Lbt { .. }, false, _) => received_mw[z] * air(z),
                (MacVariant::Lbt { .. }, true, false) => 0.0,
                (MacVariant::AlwaysOn, _, _) => received_mw[z],
                (MacVariant::AdaptiveDutyCycle, _, _) => received_mw[z] * air(z),
                (MacVariant::IdealTdma, false, _) => received_mw[z] * air(z),
                (MacVariant::IdealTdma, true, false) => 0.0,
                (MacVariant::Fixed50Coordinated, false, _) => received_mw[z] / 2.0,
                (MacVariant::Fixed50Coordinated, true, false) => received_mw[z],
                (MacVariant::Fixed50Uncoordinated, _, _) => received_mw[z] / 2.0,
            };
            i_n += term;
        }
        (i_m, i_n)
    }
}

/// Saturated CSMA/CA with binary exponential backoff, event by event.
pub mod csma {
    use super::*;

    /// How waiting stations treat a busy medium.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Countdown {
        /// Counters freeze during transmissions and resume afterwards.
        Freeze,
        /// Every contention slot, idle or busy, advances every waiting
        /// counter by one.
        EverySlot,
    }

    /// Fraction of time carrying successful payload.
    pub fn efficiency<R: Rng>(
        countdown: Countdown,
        frames: &[FrameTimes],
        sigma_us: f64,
        window: u32,
        stages: u32,
        events: usize,
        rng: &mut R,
    ) -> f64 {
        let n = frames.len();
        let mut stage = vec![0u32; n];
        let draw = |stage: u32, rng: &mut R| rng.random_range(0..window << stage);
        let mut counter: Vec<u32> = (0..n).map(|_| draw(0, rng)).collect();
        let (mut time, mut payload) = (0.0, 0.0);
        let mut transmitters = Vec::with_capacity(n);
        for _ in 0..events {
            transmitters.clear();
            transmitters.extend((0..n).filter(|&i| counter[i] == 0));
            match transmitters.len() {
                0 => {
                    time += sigma_us;
                    counter.iter_mut().for_each(|c| *c -= 1);
                }
                1 => {
                    let i = transmitters[0];
                    time += frames[i].t_s;
                    payload += frames[i].t_f;
                    stage[i] = 0;
                    counter[i] = draw(0, rng);
                    if countdown == Countdown::EverySlot {
                        for (j, c) in counter.iter_mut().enumerate() {
                            if j != i {
                                *c -= 1;
                            }
                        }
                    }
                }
                _ => {
                    time += transmitters.iter().map(|&i| frames[i].t_c).fold(0.0, f64::max);
                    if countdown == Countdown::EverySlot {
                        for (j, c) in counter.iter_mut().enumerate() {
                            if !transmitters.contains(&j) {
                                *c -= 1;
                            }
                        }
                    }
                    for &i in &transmitters {
                        stage[i] = (stage[i] + 1).min(stages);
                        counter[i] = draw(stage[i], rng);
                    }
                }
            }
        }
        payload / time
    }
}

/// Crossing counts by sphere tracing through the apartment grid.
pub mod raymarch {
    use super::*;

    const NUDGE: f64 = 1e-9;

    fn cell(b: &Building, p: &Point3) -> Option<(i64, i64, i64)> {
        let a = &b.apartment;
        let (x, y, z) = (p.x - b.origin_x, p.y - b.origin_y, p.z);
        let (w, d, h) = (
            a.width_m * b.columns as f64,
            a.depth_m * b.rows as f64,
            a.height_m * b.floors as f64,
        );
        if x < 0.0 || y < 0.0 || z < 0.0 || x > w || y > d || z > h {
            return None;
        }
        Some((
            ((x / a.width_m).floor() as i64).min(b.columns as i64 - 1),
            ((y / a.depth_m).floor() as i64).min(b.rows as i64 - 1),
            ((z / a.height_m).floor() as i64).min(b.floors as i64 - 1),
        ))
    }

    /// Distance from `p` to the nearest surface the march must not skip:
    /// the building box when outside, the current cell's faces inside.
    fn safe_step(b: &Building, p: &Point3) -> f64 {
        let a = &b.apartment;
        let lo = [b.origin_x, b.origin_y, 0.0];
        let hi = [
            b.origin_x + a.width_m * b.columns as f64,
            b.origin_y + a.depth_m * b.rows as f64,
            a.height_m * b.floors as f64,
        ];
        let q = [p.x, p.y, p.z];
        match cell(b, p) {
            None => {
                let mut s = 0.0;
                for k in 0..3 {
                    let d = (lo[k] - q[k]).max(q[k] - hi[k]).max(0.0);
                    s += d * d;
                }
                s.sqrt()
            }
            Some((i, j, f)) => {
                let size = [a.width_m, a.depth_m, a.height_m];
                let idx = [i as f64, j as f64, f as f64];
                (0..3)
                    .map(|k| {
                        let c0 = lo[k] + idx[k] * size[k];
                        (q[k] - c0).min(c0 + size[k] - q[k])
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// `(walls, floors, external)` along `a -> b`.
    pub fn crossings(a: &Point3, b: &Point3, building: &Building) -> (u32, u32, u32) {
        let len = a.distance(b);
        let mut t = 0.0;
        let mut prev = cell(building, a);
        let (mut walls, mut floors, mut external) = (0u32, 0u32, 0u32);
        while t < len {
            let p = a.lerp(b, t / len);
            let step = safe_step(building, &p).max(NUDGE);
            t = (t + step).min(len);
            let cur = cell(building, &a.lerp(b, t / len));
            match (prev, cur) {
                (Some(u), Some(v)) => {
                    walls += (u.0 - v.0).unsigned_abs() as u32 + (u.1 - v.1).unsigned_abs() as u32;
                    floors += (u.2 - v.2).unsigned_abs() as u32;
                }
                (None, Some(_)) | (Some(_), None) => external += 1,
                (None, None) => {}
            }
            prev = cur;
        }
        (walls, floors, external)
    }
}
