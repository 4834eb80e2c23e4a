//! Path loss and shadowing between nodes: multi-wall-and-floor loss inside
//! buildings, street-canyon / over-rooftop loss outdoors, and the cascade of
//! the two across building shells.

use std::cell::Cell;
use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{clip_interval, Point3};
use crate::scenario::{Building, NetworkRealization};
use crate::seed::{pair_key, SplitMix64};

const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Shadowing samples are truncated at this many standard deviations.
const SHADOW_TRUNCATION: f64 = 6.0;

/// Street-canyon LOS model: free space up to the breakpoint
/// `4 h_tx h_rx / λ`, slope 40 dB/decade beyond it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LosModel {
    pub tx_height_m: f64,
    pub rx_height_m: f64,
}

impl Default for LosModel {
    fn default() -> Self {
        LosModel {
            tx_height_m: 10.0,
            rx_height_m: 1.5,
        }
    }
}

/// Site-general over-rooftop NLOS fit
/// `10 α log10(d) + β + 10 γ log10(f_GHz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NlosModel {
    pub alpha: f64,
    pub beta_db: f64,
    pub gamma: f64,
}

impl Default for NlosModel {
    fn default() -> Self {
        NlosModel {
            alpha: 4.39,
            beta_db: -6.27,
            gamma: 2.30,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagationProfile {
    pub carrier_freq_ghz: f64,
    /// Loss at 1 m; free-space loss at the carrier when unset.
    pub l0_db: Option<f64>,
    pub indoor_exponent: f64,
    pub wall_first_db: f64,
    pub wall_next_db: f64,
    pub floor_first_db: f64,
    pub floor_next_db: f64,
    pub entry_loss_db: f64,
    pub shadow_sigma_indoor_db: f64,
    pub shadow_sigma_other_db: f64,
    pub los: LosModel,
    pub nlos: NlosModel,
}

impl Default for PropagationProfile {
    fn default() -> Self {
        PropagationProfile {
            carrier_freq_ghz: 5.0,
            l0_db: None,
            indoor_exponent: 2.0,
            wall_first_db: 16.0,
            wall_next_db: 14.0,
            floor_first_db: 29.0,
            floor_next_db: 24.0,
            entry_loss_db: 19.1,
            shadow_sigma_indoor_db: 4.0,
            shadow_sigma_other_db: 7.0,
            los: LosModel::default(),
            nlos: NlosModel::default(),
        }
    }
}

impl PropagationProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_freq_ghz > 0.0) || !(self.indoor_exponent > 0.0) {
            return Err(Error::config(
                "propagation.carrier_freq_ghz and indoor_exponent must be positive",
            ));
        }
        let nonneg = [
            ("wall_first_db", self.wall_first_db),
            ("wall_next_db", self.wall_next_db),
            ("floor_first_db", self.floor_first_db),
            ("floor_next_db", self.floor_next_db),
            ("entry_loss_db", self.entry_loss_db),
            ("shadow_sigma_indoor_db", self.shadow_sigma_indoor_db),
            ("shadow_sigma_other_db", self.shadow_sigma_other_db),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0) {
                return Err(Error::config(format!(
                    "propagation.{name} must be nonnegative, got {v}"
                )));
            }
        }
        if !(self.los.tx_height_m > 0.0 && self.los.rx_height_m > 0.0) {
            return Err(Error::config("propagation.los heights must be positive"));
        }
        Ok(())
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / (self.carrier_freq_ghz * 1e9)
    }

    /// Loss at the 1 m reference distance.
    pub fn l0(&self) -> f64 {
        self.l0_db
            .unwrap_or_else(|| 20.0 * (4.0 * std::f64::consts::PI / self.wavelength_m()).log10())
    }

    pub fn breakpoint_m(&self) -> f64 {
        4.0 * self.los.tx_height_m * self.los.rx_height_m / self.wavelength_m()
    }

    /// Same profile with internal walls made transparent.
    pub fn without_internal_walls(&self) -> Self {
        PropagationProfile {
            wall_first_db: 0.0,
            wall_next_db: 0.0,
            ..*self
        }
    }
}

/// Plane crossings of a segment through building geometry.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossings {
    pub walls: u32,
    pub floors: u32,
    pub external_walls: u32,
}

impl std::ops::Add for Crossings {
    type Output = Crossings;

    fn add(self, o: Crossings) -> Crossings {
        Crossings {
            walls: self.walls + o.walls,
            floors: self.floors + o.floors,
            external_walls: self.external_walls + o.external_walls,
        }
    }
}

/// Internal grid planes `origin + k * size`, `k in 1..count`, strictly
/// between `a` and `b`.
fn planes_between(a: f64, b: f64, origin: f64, size: f64, count: u32) -> u32 {
    if count < 2 {
        return 0;
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let k_min = (((lo - origin) / size).floor() as i64 + 1).max(1);
    let k_max = (((hi - origin) / size).ceil() as i64 - 1).min(count as i64 - 1);
    (k_max - k_min + 1).max(0) as u32
}

/// Clip parameters of the open segment `a -> b` inside the building box.
fn clip_building(a: &Point3, b: &Point3, building: &Building) -> Option<(f64, f64)> {
    let (lo, hi) = building.box_bounds();
    clip_interval(a, b, &lo, &hi, 3).filter(|(t0, t1)| t1 > t0)
}

/// Crossings of the open segment `a -> b` with one building. Shell faces
/// (outer walls and roof) count as external walls; a plane touched only at
/// an endpoint is not crossed.
pub fn count_crossings_in(a: &Point3, b: &Point3, building: &Building) -> Crossings {
    let Some((t0, t1)) = clip_building(a, b, building) else {
        return Crossings::default();
    };
    let (p, q) = (a.lerp(b, t0), a.lerp(b, t1));
    let apt = &building.apartment;
    let walls = planes_between(p.x, q.x, building.origin_x, apt.width_m, building.columns)
        + planes_between(p.y, q.y, building.origin_y, apt.depth_m, building.rows);
    let floors = planes_between(p.z, q.z, 0.0, apt.height_m, building.floors);
    let external_walls = (t0 > 0.0) as u32 + (t1 < 1.0) as u32;
    Crossings {
        walls,
        floors,
        external_walls,
    }
}

/// Crossings summed over all buildings.
pub fn count_crossings(a: &Point3, b: &Point3, buildings: &[Building]) -> Crossings {
    buildings
        .iter()
        .map(|bl| count_crossings_in(a, b, bl))
        .fold(Crossings::default(), |acc, c| acc + c)
}

fn check_distance(d: f64) -> Result<()> {
    if d.is_nan() || d <= 0.0 {
        return Err(Error::domain(format!("distance must be positive, got {d} m")));
    }
    Ok(())
}

/// Multi-wall-and-floor loss.
pub fn mwf_loss(distance_m: f64, walls: u32, floors: u32, profile: &PropagationProfile) -> Result<f64> {
    check_distance(distance_m)?;
    let wall = if walls == 0 {
        0.0
    } else {
        profile.wall_first_db + profile.wall_next_db * (walls - 1) as f64
    };
    let floor = if floors == 0 {
        0.0
    } else {
        profile.floor_first_db + profile.floor_next_db * (floors - 1) as f64
    };
    Ok(profile.l0() + 10.0 * profile.indoor_exponent * distance_m.log10() + wall + floor)
}

/// Outdoor loss and whether the distance was raised to the 1 m validity
/// floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutdoorLoss {
    pub loss_db: f64,
    pub clamped: bool,
}

fn los_loss(d: f64, profile: &PropagationProfile) -> f64 {
    let rbp = profile.breakpoint_m();
    if d <= rbp {
        profile.l0() + 20.0 * d.log10()
    } else {
        profile.l0() + 20.0 * rbp.log10() + 40.0 * (d / rbp).log10()
    }
}

/// Street-canyon LOS or over-rooftop NLOS loss. The NLOS value never falls
/// below the LOS value at the same distance.
pub fn outdoor_loss(distance_m: f64, los: bool, profile: &PropagationProfile) -> Result<OutdoorLoss> {
    if distance_m.is_nan() || distance_m < 0.0 {
        return Err(Error::domain(format!(
            "distance must be nonnegative, got {distance_m} m"
        )));
    }
    let clamped = distance_m < 1.0;
    let d = distance_m.max(1.0);
    let l_los = los_loss(d, profile);
    let loss_db = if los {
        l_los
    } else {
        let n = &profile.nlos;
        let fit = 10.0 * n.alpha * d.log10() + n.beta_db + 10.0 * n.gamma * profile.carrier_freq_ghz.log10();
        fit.max(l_los)
    };
    Ok(OutdoorLoss { loss_db, clamped })
}

/// A link endpoint: position plus the building it is inside, if any.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub position: Point3,
    pub building: Option<usize>,
}

/// Median (shadowing-free) loss of a link with its geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianLoss {
    pub distance_m: f64,
    pub crossings: Crossings,
    /// LOS state of the outdoor part, if the link has one.
    pub outdoor_los: Option<bool>,
    pub loss_db: f64,
    /// A sub-model distance was raised to 1 m.
    pub clamped: bool,
}

/// True when the 2-D projection of `a -> b` misses every footprint except
/// those listed in `skip`.
pub fn line_of_sight(a: &Point3, b: &Point3, buildings: &[Building], skip: [Option<usize>; 2]) -> bool {
    buildings
        .iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(&Some(*i)))
        .all(|(_, bl)| !bl.footprint().intersects_segment(a, b))
}

fn mwf_clamped(d: f64, walls: u32, floors: u32, profile: &PropagationProfile) -> (f64, bool) {
    let loss = mwf_loss(d.max(1.0), walls, floors, profile).expect("distance clamped positive");
    (loss, d < 1.0)
}

/// Median loss between two endpoints. Indoor legs use MWF up to the point
/// where the segment leaves (enters) the endpoint's building, each shell
/// crossing adds the entry loss, and the remaining outdoor leg uses the
/// outdoor model; buildings in between only block line of sight.
pub fn median_loss(a: &Endpoint, b: &Endpoint, buildings: &[Building], profile: &PropagationProfile) -> MedianLoss {
    let (pa, pb) = (&a.position, &b.position);
    let distance_m = pa.distance(pb);

    if let (Some(ba), Some(bb)) = (a.building, b.building) {
        if ba == bb {
            let c = count_crossings_in(pa, pb, &buildings[ba]);
            let (loss_db, clamped) = mwf_clamped(distance_m, c.walls, c.floors, profile);
            return MedianLoss {
                distance_m,
                crossings: Crossings { external_walls: 0, ..c },
                outdoor_los: None,
                loss_db,
                clamped,
            };
        }
    }

    let mut loss_db = 0.0;
    let mut clamped = false;
    let mut crossings = Crossings::default();
    let mut t_start = 0.0;
    let mut t_end = 1.0;
    if let Some(k) = a.building {
        let c = count_crossings_in(pa, pb, &buildings[k]);
        let t_exit = clip_building(pa, pb, &buildings[k]).map_or(0.0, |(_, t1)| t1);
        let (l, cl) = mwf_clamped(distance_m * t_exit, c.walls, c.floors, profile);
        loss_db += l + profile.entry_loss_db;
        clamped |= cl;
        crossings = crossings + Crossings { external_walls: 1, ..c };
        t_start = t_exit;
    }
    if let Some(k) = b.building {
        let c = count_crossings_in(pa, pb, &buildings[k]);
        let t_entry = clip_building(pa, pb, &buildings[k]).map_or(1.0, |(t0, _)| t0);
        let (l, cl) = mwf_clamped(distance_m * (1.0 - t_entry), c.walls, c.floors, profile);
        loss_db += l + profile.entry_loss_db;
        clamped |= cl;
        crossings = crossings + Crossings { external_walls: 1, ..c };
        t_end = t_entry;
    }
    let (qa, qb) = (pa.lerp(pb, t_start), pa.lerp(pb, t_end));
    let los = line_of_sight(&qa, &qb, buildings, [a.building, b.building]);
    let out = outdoor_loss(distance_m * (t_end - t_start).max(0.0), los, profile).expect("nonnegative distance");
    loss_db += out.loss_db;
    MedianLoss {
        distance_m,
        crossings,
        outdoor_los: Some(los),
        loss_db,
        clamped: clamped || out.clamped,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinkKind {
    /// Both endpoints inside the same building.
    IndoorSameBuilding,
    Other,
}

impl LinkKind {
    pub fn of(a: &Endpoint, b: &Endpoint) -> LinkKind {
        match (a.building, b.building) {
            (Some(x), Some(y)) if x == y => LinkKind::IndoorSameBuilding,
            _ => LinkKind::Other,
        }
    }

    pub fn sigma_db(&self, profile: &PropagationProfile) -> f64 {
        match self {
            LinkKind::IndoorSameBuilding => profile.shadow_sigma_indoor_db,
            LinkKind::Other => profile.shadow_sigma_other_db,
        }
    }
}

/// One zero-mean log-normal shadowing draw (dB).
pub fn sample_shadowing<R: Rng + ?Sized>(rng: &mut R, kind: LinkKind, profile: &PropagationProfile) -> f64 {
    let sigma = kind.sigma_db(profile);
    if sigma == 0.0 {
        return 0.0;
    }
    Normal::new(0.0, sigma).expect("validated sigma").sample(rng)
}

/// Shadowing shared by both directions of the node pair `(a, b)` in the
/// realization with `seed`; truncated at six standard deviations.
pub fn pair_shadowing(seed: u64, a: u64, b: u64, kind: LinkKind, profile: &PropagationProfile) -> f64 {
    let mut rng = SplitMix64::new(pair_key(seed, a, b));
    let z: f64 = StandardNormal.sample(&mut rng);
    z.clamp(-SHADOW_TRUNCATION, SHADOW_TRUNCATION) * kind.sigma_db(profile)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub from: u64,
    pub to: u64,
    pub distance_m: f64,
    pub walls_crossed: u32,
    pub floors_crossed: u32,
    pub external_walls_crossed: u32,
    pub median_loss_db: f64,
    pub shadowing_db: f64,
    pub total_loss_db: f64,
}

/// Node of a realization: AP `i` has id `2i`, its user `2i + 1`.
pub fn node_endpoint(realization: &NetworkRealization, id: u64) -> Result<Endpoint> {
    let index = (id / 2) as usize;
    if index >= realization.aps.len() {
        return Err(Error::domain(format!("node {id} does not exist")));
    }
    Ok(if id.is_multiple_of(2) {
        let ap = &realization.aps[index];
        Endpoint {
            position: ap.position,
            building: ap.building,
        }
    } else {
        let u = &realization.users[index];
        Endpoint {
            position: u.position,
            building: u.building,
        }
    })
}

/// Effective profile of a realization (walls zeroed when it has none).
pub fn effective_profile(realization: &NetworkRealization, profile: &PropagationProfile) -> PropagationProfile {
    if realization.internal_walls() {
        *profile
    } else {
        profile.without_internal_walls()
    }
}

/// Full link budget between two nodes.
pub fn link_budget(
    realization: &NetworkRealization,
    from: u64,
    to: u64,
    profile: &PropagationProfile,
) -> Result<LinkBudget> {
    let profile = effective_profile(realization, profile);
    let a = node_endpoint(realization, from)?;
    let b = node_endpoint(realization, to)?;
    let m = median_loss(&a, &b, &realization.buildings, &profile);
    let shadowing_db = pair_shadowing(realization.seed, from, to, LinkKind::of(&a, &b), &profile);
    Ok(LinkBudget {
        from,
        to,
        distance_m: m.distance_m.max(1.0),
        walls_crossed: m.crossings.walls,
        floors_crossed: m.crossings.floors,
        external_walls_crossed: m.crossings.external_walls,
        median_loss_db: m.loss_db,
        shadowing_db,
        total_loss_db: m.loss_db + shadowing_db,
    })
}

/// Lazily filled AP->AP and AP->user total losses of one realization.
///
/// Indices are AP indices of the realization; a table built for a
/// realization also serves its entrant prefixes.
pub struct LinkTable<'a> {
    realization: &'a NetworkRealization,
    profile: PropagationProfile,
    n: usize,
    ap_ap: Vec<Cell<f64>>,
    ap_user: Vec<Cell<f64>>,
    rx_mw: Vec<Cell<f64>>,
}

impl<'a> LinkTable<'a> {
    pub fn new(realization: &'a NetworkRealization, profile: &PropagationProfile) -> Self {
        let n = realization.aps.len();
        LinkTable {
            realization,
            profile: effective_profile(realization, profile),
            n,
            ap_ap: (0..n * n).map(|_| Cell::new(f64::NAN)).collect(),
            ap_user: (0..n * n).map(|_| Cell::new(f64::NAN)).collect(),
            rx_mw: (0..n * n).map(|_| Cell::new(f64::NAN)).collect(),
        }
    }

    pub fn realization(&self) -> &NetworkRealization {
        self.realization
    }

    fn compute(&self, a: Endpoint, id_a: u64, b: Endpoint, id_b: u64) -> f64 {
        let m = median_loss(&a, &b, &self.realization.buildings, &self.profile);
        m.loss_db + pair_shadowing(self.realization.seed, id_a, id_b, LinkKind::of(&a, &b), &self.profile)
    }

    fn ap_endpoint(&self, i: usize) -> Endpoint {
        let ap = &self.realization.aps[i];
        Endpoint {
            position: ap.position,
            building: ap.building,
        }
    }

    /// Total loss (dB) between APs `i` and `j`.
    pub fn ap_ap(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let cell = &self.ap_ap[lo * self.n + hi];
        let v = cell.get();
        if !v.is_nan() {
            return v;
        }
        let v = self.compute(self.ap_endpoint(lo), 2 * lo as u64, self.ap_endpoint(hi), 2 * hi as u64);
        cell.set(v);
        v
    }

    /// Total loss (dB) from AP `ap` to the user served by AP `user`.
    pub fn ap_user(&self, ap: usize, user: usize) -> f64 {
        let cell = &self.ap_user[ap * self.n + user];
        let v = cell.get();
        if !v.is_nan() {
            return v;
        }
        let u = &self.realization.users[user];
        let b = Endpoint {
            position: u.position,
            building: u.building,
        };
        let v = self.compute(self.ap_endpoint(ap), 2 * ap as u64, b, u.id);
        cell.set(v);
        v
    }
}

impl LinkTable<'_> {
    /// Power (mW) received from AP `ap` at the user served by AP `user`.
    pub fn rx_mw(&self, ap: usize, user: usize) -> f64 {
        let cell = &self.rx_mw[user * self.n + ap];
        let v = cell.get();
        if !v.is_nan() {
            return v;
        }
        let v = 10f64.powf((self.realization.aps[ap].tx_power_dbm - self.ap_user(ap, user)) / 10.0);
        cell.set(v);
        v
    }
}

/// Write every AP->AP and AP->user link budget as CSV.
pub fn write_link_dump<W: Write>(realization: &NetworkRealization, profile: &PropagationProfile, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record([
        "from",
        "to",
        "distance_m",
        "walls",
        "floors",
        "median_db",
        "shadow_db",
        "total_db",
    ])
    .map_err(io)?;
    let n = realization.aps.len() as u64;
    for ap in 0..n {
        let targets = (0..n)
            .filter(|&j| j != ap)
            .map(|j| 2 * j)
            .chain((0..n).map(|j| 2 * j + 1));
        for to in targets {
            let lb = link_budget(realization, 2 * ap, to, profile)?;
            w.write_record(&[
                lb.from.to_string(),
                lb.to.to_string(),
                format!("{:.3}", lb.distance_m),
                lb.walls_crossed.to_string(),
                lb.floors_crossed.to_string(),
                format!("{:.3}", lb.median_loss_db),
                format!("{:.3}", lb.shadowing_db),
                format!("{:.3}", lb.total_loss_db),
            ])
            .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ApartmentSize;

    fn stripe() -> Building {
        Building {
            origin_x: 5.0,
            origin_y: 5.0,
            columns: 10,
            rows: 2,
            floors: 1,
            apartment: ApartmentSize::default(),
        }
    }

    #[test]
    fn free_space_anchor() {
        let p = PropagationProfile::default();
        assert!((p.l0() - 46.42).abs() < 0.01, "{}", p.l0());
        assert_eq!(mwf_loss(1.0, 0, 0, &p).unwrap(), p.l0());
        assert!(mwf_loss(0.0, 0, 0, &p).is_err());
    }

    #[test]
    fn wall_and_floor_increments() {
        let p = PropagationProfile::default();
        let base = mwf_loss(12.0, 0, 0, &p).unwrap();
        assert!((mwf_loss(12.0, 2, 0, &p).unwrap() - base - 30.0).abs() < 1e-12);
        assert!((mwf_loss(12.0, 1, 1, &p).unwrap() - base - 45.0).abs() < 1e-12);
        assert!((mwf_loss(12.0, 0, 3, &p).unwrap() - base - 77.0).abs() < 1e-12);
    }

    #[test]
    fn same_and_adjacent_apartment() {
        let b = stripe();
        let a = Point3::new(7.0, 7.0, 1.0);
        assert_eq!(
            count_crossings_in(&a, &Point3::new(13.0, 12.0, 2.0), &b),
            Crossings::default()
        );
        let c = count_crossings_in(&a, &Point3::new(17.0, 9.0, 1.5), &b);
        assert_eq!(
            c,
            Crossings {
                walls: 1,
                floors: 0,
                external_walls: 0
            }
        );
    }

    #[test]
    fn indoor_to_outdoor_crossing() {
        let b = stripe();
        // from apartment column 2 straight out through the -y shell
        let c = count_crossings_in(&Point3::new(27.0, 21.0, 1.0), &Point3::new(27.0, -10.0, 1.0), &b);
        assert_eq!(
            c,
            Crossings {
                walls: 1,
                floors: 0,
                external_walls: 1
            }
        );
    }

    #[test]
    fn endpoint_on_plane_not_counted() {
        let b = stripe();
        let c = count_crossings_in(&Point3::new(15.0, 7.0, 1.0), &Point3::new(24.0, 7.0, 1.0), &b);
        assert_eq!(c.walls, 0);
    }

    #[test]
    fn los_doubling_adds_six_db() {
        let p = PropagationProfile::default();
        let l1 = outdoor_loss(50.0, true, &p).unwrap().loss_db;
        let l2 = outdoor_loss(100.0, true, &p).unwrap().loss_db;
        assert!((l2 - l1 - 20.0 * 2f64.log10()).abs() < 1e-9);
        let near = outdoor_loss(0.3, true, &p).unwrap();
        assert!(near.clamped);
        assert_eq!(near.loss_db, p.l0());
        assert!(outdoor_loss(100.0, false, &p).unwrap().loss_db > l2);
        assert!(outdoor_loss(-1.0, true, &p).is_err());
    }

    #[test]
    fn cascade_composes() {
        let p = PropagationProfile::default();
        let buildings = vec![stripe()];
        // 1 m inside the -y shell, outdoor node 10 m beyond it
        let indoor = Endpoint {
            position: Point3::new(27.0, 6.0, 1.5),
            building: Some(0),
        };
        let outdoor = Endpoint {
            position: Point3::new(27.0, -5.0, 1.5),
            building: None,
        };
        let m = median_loss(&indoor, &outdoor, &buildings, &p);
        let expect = mwf_loss(1.0, 0, 0, &p).unwrap() + 19.1 + outdoor_loss(10.0, true, &p).unwrap().loss_db;
        assert!((m.loss_db - expect).abs() < 1e-9);
        assert_eq!(m.crossings.external_walls, 1);
        let back = median_loss(&outdoor, &indoor, &buildings, &p);
        assert!((back.loss_db - m.loss_db).abs() < 1e-9);
    }

    #[test]
    fn shadowing_statistics() {
        let p = PropagationProfile::default();
        let mut rng = SplitMix64::new(99);
        let n = 1_000_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let v = sample_shadowing(&mut rng, LinkKind::IndoorSameBuilding, &p);
            s += v;
            s2 += v * v;
        }
        let mean = s / n as f64;
        let sd = (s2 / n as f64 - mean * mean).sqrt();
        assert!(mean.abs() < 0.05, "{mean}");
        assert!((sd - 4.0).abs() < 0.05, "{sd}");
    }

    #[test]
    fn pair_shadowing_symmetric() {
        let p = PropagationProfile::default();
        let a = pair_shadowing(5, 2, 9, LinkKind::Other, &p);
        assert_eq!(a, pair_shadowing(5, 9, 2, LinkKind::Other, &p));
    }
}
