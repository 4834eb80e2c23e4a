//! Deployment geometries: the dual-stripe building, randomly placed
//! apartment blocks with outdoor sites, and the node placements on top.
//!
//! Node order in every realization is `[legacy..., entrants...]`, and every
//! entrant is drawn from its own random stream, so the realization with `n`
//! entrants is exactly the `n`-entrant prefix of a larger one.

use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point3, Rect};
use crate::seed::{indexed_rng, stream_rng, Stream};

pub const INDOOR_TX_POWER_DBM: f64 = 23.0;
pub const OUTDOOR_TX_POWER_DBM: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Population {
    Legacy,
    Entrant,
}

impl Population {
    pub fn name(&self) -> &'static str {
        match self {
            Population::Legacy => "legacy",
            Population::Entrant => "entrant",
        }
    }
}

impl std::str::FromStr for Population {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "legacy" => Ok(Population::Legacy),
            "entrant" => Ok(Population::Entrant),
            other => Err(Error::config(format!(
                "unknown population `{other}` (valid: legacy, entrant)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    IndoorIndoor,
    IndoorIndoorNoWalls,
    IndoorOutdoor,
    OutdoorOutdoor,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::IndoorIndoor => "indoor-indoor",
            ScenarioKind::IndoorIndoorNoWalls => "indoor-indoor-no-walls",
            ScenarioKind::IndoorOutdoor => "indoor-outdoor",
            ScenarioKind::OutdoorOutdoor => "outdoor-outdoor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApartmentSize {
    pub width_m: f64,
    pub depth_m: f64,
    pub height_m: f64,
}

impl Default for ApartmentSize {
    fn default() -> Self {
        ApartmentSize {
            width_m: 10.0,
            depth_m: 10.0,
            height_m: 3.0,
        }
    }
}

/// A block of identical apartments, `columns` along x, `rows` along y,
/// `floors` stacked from ground level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Building {
    pub origin_x: f64,
    pub origin_y: f64,
    pub columns: u32,
    pub rows: u32,
    pub floors: u32,
    pub apartment: ApartmentSize,
}

/// Apartment address inside a building.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Apartment {
    pub column: u32,
    pub row: u32,
    pub floor: u32,
}

impl Building {
    pub fn validate(&self) -> Result<()> {
        let a = &self.apartment;
        if !(a.width_m > 0.0 && a.depth_m > 0.0 && a.height_m > 0.0) {
            return Err(Error::config("apartment dimensions must be strictly positive"));
        }
        if self.columns == 0 || self.rows == 0 || self.floors == 0 {
            return Err(Error::config("building needs at least one column, row and floor"));
        }
        Ok(())
    }

    pub fn footprint(&self) -> Rect {
        Rect {
            min_x: self.origin_x,
            min_y: self.origin_y,
            max_x: self.origin_x + self.columns as f64 * self.apartment.width_m,
            max_y: self.origin_y + self.rows as f64 * self.apartment.depth_m,
        }
    }

    pub fn height(&self) -> f64 {
        self.floors as f64 * self.apartment.height_m
    }

    pub fn apartment_count(&self) -> usize {
        (self.columns * self.rows * self.floors) as usize
    }

    /// Apartment by linear index (column fastest, then row, then floor).
    pub fn apartment(&self, index: usize) -> Apartment {
        let index = index as u32;
        let per_floor = self.columns * self.rows;
        Apartment {
            column: index % self.columns,
            row: (index % per_floor) / self.columns,
            floor: index / per_floor,
        }
    }

    pub(crate) fn box_bounds(&self) -> ([f64; 3], [f64; 3]) {
        let f = self.footprint();
        ([f.min_x, f.min_y, 0.0], [f.max_x, f.max_y, self.height()])
    }

    /// True when `p` lies in the closed building volume.
    pub fn contains(&self, p: &Point3) -> bool {
        self.footprint().contains(p.x, p.y) && p.z >= 0.0 && p.z <= self.height()
    }

    /// Apartment holding `p`, if `p` is inside the building.
    pub fn apartment_at(&self, p: &Point3) -> Option<Apartment> {
        if !self.contains(p) {
            return None;
        }
        let a = &self.apartment;
        let cell = |v: f64, origin: f64, size: f64, count: u32| {
            (((v - origin) / size).floor() as i64).clamp(0, count as i64 - 1) as u32
        };
        Some(Apartment {
            column: cell(p.x, self.origin_x, a.width_m, self.columns),
            row: cell(p.y, self.origin_y, a.depth_m, self.rows),
            floor: cell(p.z, 0.0, a.height_m, self.floors),
        })
    }

    /// Uniform point in the interior of an apartment.
    pub fn sample_in<R: Rng + ?Sized>(&self, apt: Apartment, rng: &mut R) -> Point3 {
        let a = &self.apartment;
        let x0 = self.origin_x + apt.column as f64 * a.width_m;
        let y0 = self.origin_y + apt.row as f64 * a.depth_m;
        let z0 = apt.floor as f64 * a.height_m;
        Point3::new(
            x0 + rng.random::<f64>() * a.width_m,
            y0 + rng.random::<f64>() * a.depth_m,
            z0 + rng.random::<f64>() * a.height_m,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessPoint {
    /// Node id, `2 * index`.
    pub id: u64,
    pub population: Population,
    pub position: Point3,
    pub tx_power_dbm: f64,
    pub indoor: bool,
    /// Building holding an indoor AP.
    pub building: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserTerminal {
    /// Node id, `2 * ap_index + 1`.
    pub id: u64,
    pub serving_ap: usize,
    pub position: Point3,
    pub indoor: bool,
    pub building: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRealization {
    pub seed: u64,
    pub kind: ScenarioKind,
    pub area: Rect,
    pub buildings: Vec<Building>,
    /// Legacy APs first, then entrants. `users[i]` is served by `aps[i]`.
    pub aps: Vec<AccessPoint>,
    pub users: Vec<UserTerminal>,
    pub n_legacy: usize,
}

impl NetworkRealization {
    pub fn n_entrant(&self) -> usize {
        self.aps.len() - self.n_legacy
    }

    pub fn internal_walls(&self) -> bool {
        self.kind != ScenarioKind::IndoorIndoorNoWalls
    }

    pub fn population(&self, ap: usize) -> Population {
        if ap < self.n_legacy {
            Population::Legacy
        } else {
            Population::Entrant
        }
    }

    /// The same deployment restricted to its first `n` entrants.
    pub fn with_entrants(&self, n: usize) -> Result<NetworkRealization> {
        if n > self.n_entrant() {
            return Err(Error::config(format!(
                "realization has {} entrants, {n} requested",
                self.n_entrant()
            )));
        }
        let total = self.n_legacy + n;
        Ok(NetworkRealization {
            seed: self.seed,
            kind: self.kind,
            area: self.area,
            buildings: self.buildings.clone(),
            aps: self.aps[..total].to_vec(),
            users: self.users[..total].to_vec(),
            n_legacy: self.n_legacy,
        })
    }

    /// Deployment density in APs per km² over the study area.
    pub fn density_per_km2(&self) -> f64 {
        self.aps.len() as f64 / (self.area.area() * 1e-6)
    }
}

/// Single building of apartments with a margin around it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IndoorLayout {
    pub columns: u32,
    pub rows: u32,
    pub floors: u32,
    pub apartment: ApartmentSize,
    pub margin_m: f64,
}

impl Default for IndoorLayout {
    fn default() -> Self {
        IndoorLayout {
            columns: 10,
            rows: 2,
            floors: 1,
            apartment: ApartmentSize::default(),
            margin_m: 5.0,
        }
    }
}

impl IndoorLayout {
    pub fn building(&self) -> Building {
        Building {
            origin_x: self.margin_m,
            origin_y: self.margin_m,
            columns: self.columns,
            rows: self.rows,
            floors: self.floors,
            apartment: self.apartment,
        }
    }

    pub fn area(&self) -> Rect {
        let b = self.building().footprint();
        Rect {
            min_x: 0.0,
            min_y: 0.0,
            max_x: b.max_x + self.margin_m,
            max_y: b.max_y + self.margin_m,
        }
    }
}

/// Study area with random apartment blocks and outdoor AP sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutdoorLayout {
    pub width_m: f64,
    pub depth_m: f64,
    pub buildings: usize,
    pub columns_min: u32,
    pub columns_max: u32,
    pub rows: u32,
    pub floors_min: u32,
    pub floors_max: u32,
    pub apartment: ApartmentSize,
    /// Minimum clearance between building footprints.
    pub street_gap_m: f64,
    pub min_site_separation_m: f64,
    /// AP height when the area holds no buildings.
    pub mast_height_m: f64,
    pub user_radius_m: f64,
    pub user_height_m: f64,
    /// Number of candidate outdoor sites. Defaults to the number needed.
    pub sites: Option<usize>,
    /// Measured sites (`x_m,y_m` CSV) used instead of random ones.
    pub sites_csv: Option<PathBuf>,
    pub max_attempts: usize,
}

impl Default for OutdoorLayout {
    fn default() -> Self {
        OutdoorLayout {
            width_m: 346.0,
            depth_m: 389.0,
            buildings: 30,
            columns_min: 3,
            columns_max: 10,
            rows: 2,
            floors_min: 3,
            floors_max: 5,
            apartment: ApartmentSize::default(),
            street_gap_m: 5.0,
            min_site_separation_m: 20.0,
            mast_height_m: 10.0,
            user_radius_m: 50.0,
            user_height_m: 1.5,
            sites: None,
            sites_csv: None,
            max_attempts: 1000,
        }
    }
}

impl OutdoorLayout {
    pub fn area(&self) -> Rect {
        Rect {
            min_x: 0.0,
            min_y: 0.0,
            max_x: self.width_m,
            max_y: self.depth_m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width_m > 0.0 && self.depth_m > 0.0) {
            return Err(Error::config("outdoor area dimensions must be positive"));
        }
        if self.columns_min == 0 || self.columns_min > self.columns_max {
            return Err(Error::config("outdoor columns range is empty"));
        }
        if self.floors_min == 0 || self.floors_min > self.floors_max || self.rows == 0 {
            return Err(Error::config("outdoor floors range is empty or rows is 0"));
        }
        if !(self.user_radius_m > 0.0) || self.user_height_m < 0.0 {
            return Err(Error::config("user radius must be positive and height nonnegative"));
        }
        if self.max_attempts == 0 {
            return Err(Error::config("max_attempts must be at least 1"));
        }
        Ok(())
    }
}

fn place_indoor<R: Rng + ?Sized>(buildings: &[Building], slot: (usize, usize), rng: &mut R) -> (Point3, Point3) {
    let b = &buildings[slot.0];
    let apt = b.apartment(slot.1);
    (b.sample_in(apt, rng), b.sample_in(apt, rng))
}

fn make_pair(
    index: usize,
    population: Population,
    ap: Point3,
    user: Point3,
    building: Option<usize>,
    power: f64,
) -> (AccessPoint, UserTerminal) {
    (
        AccessPoint {
            id: 2 * index as u64,
            population,
            position: ap,
            tx_power_dbm: power,
            indoor: building.is_some(),
            building,
        },
        UserTerminal {
            id: 2 * index as u64 + 1,
            serving_ap: index,
            position: user,
            indoor: building.is_some(),
            building,
        },
    )
}

/// Dual-stripe building, every AP with its user in one apartment.
pub fn generate_indoor_indoor(
    seed: u64,
    n_legacy: usize,
    n_entrant: usize,
    internal_walls: bool,
    layout: &IndoorLayout,
) -> Result<NetworkRealization> {
    let building = layout.building();
    building.validate()?;
    let apartments = building.apartment_count();
    if n_legacy + n_entrant > apartments {
        return Err(Error::config(format!(
            "{} APs requested but the building has only {apartments} apartments",
            n_legacy + n_entrant
        )));
    }
    let mut order: Vec<usize> = (0..apartments).collect();
    order.shuffle(&mut stream_rng(seed, Stream::LegacyPlacement));
    let buildings = vec![building];

    let mut aps = Vec::with_capacity(n_legacy + n_entrant);
    let mut users = Vec::with_capacity(n_legacy + n_entrant);
    for i in 0..n_legacy + n_entrant {
        let (population, stream, k) = if i < n_legacy {
            (Population::Legacy, Stream::LegacyPlacement, i)
        } else {
            (Population::Entrant, Stream::EntrantPlacement, i - n_legacy)
        };
        let mut rng = indexed_rng(seed, stream, k as u64);
        let (ap, user) = place_indoor(&buildings, (0, order[i]), &mut rng);
        let (a, u) = make_pair(i, population, ap, user, Some(0), INDOOR_TX_POWER_DBM);
        aps.push(a);
        users.push(u);
    }
    Ok(NetworkRealization {
        seed,
        kind: if internal_walls {
            ScenarioKind::IndoorIndoor
        } else {
            ScenarioKind::IndoorIndoorNoWalls
        },
        area: layout.area(),
        buildings,
        aps,
        users,
        n_legacy,
    })
}

/// Randomly sized, non-overlapping apartment blocks inside the area.
pub fn generate_buildings(seed: u64, layout: &OutdoorLayout) -> Result<Vec<Building>> {
    layout.validate()?;
    let mut rng = stream_rng(seed, Stream::Buildings);
    let area = layout.area();
    let mut buildings: Vec<Building> = Vec::with_capacity(layout.buildings);
    for k in 0..layout.buildings {
        let mut placed = false;
        for _ in 0..layout.max_attempts {
            let length = rng.random_range(layout.columns_min..=layout.columns_max);
            let floors = rng.random_range(layout.floors_min..=layout.floors_max);
            let (columns, rows) = if rng.random::<bool>() {
                (length, layout.rows)
            } else {
                (layout.rows, length)
            };
            let w = columns as f64 * layout.apartment.width_m;
            let d = rows as f64 * layout.apartment.depth_m;
            if w > area.width() || d > area.depth() {
                continue;
            }
            let candidate = Building {
                origin_x: rng.random::<f64>() * (area.width() - w),
                origin_y: rng.random::<f64>() * (area.depth() - d),
                columns,
                rows,
                floors,
                apartment: layout.apartment,
            };
            let grown = candidate.footprint().inflate(layout.street_gap_m);
            if buildings.iter().all(|b| !grown.overlaps(&b.footprint())) {
                buildings.push(candidate);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::generation(format!(
                "could not place building {} of {} after {} attempts",
                k + 1,
                layout.buildings,
                layout.max_attempts
            )));
        }
    }
    Ok(buildings)
}

fn outside_buildings(buildings: &[Building], x: f64, y: f64) -> bool {
    buildings.iter().all(|b| !b.footprint().contains(x, y))
}

/// Roof level of the nearest building, or the mast height without buildings.
fn site_height(buildings: &[Building], x: f64, y: f64, mast: f64) -> f64 {
    buildings
        .iter()
        .map(|b| (b.footprint().distance_to(x, y), b.height()))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, h)| h)
        .unwrap_or(mast)
}

/// Uniform outdoor sites with a minimum pairwise separation.
pub fn generate_sites(
    seed: u64,
    count: usize,
    buildings: &[Building],
    layout: &OutdoorLayout,
) -> Result<Vec<(f64, f64)>> {
    let mut rng = stream_rng(seed, Stream::Sites);
    let area = layout.area();
    let mut sites: Vec<(f64, f64)> = Vec::with_capacity(count);
    for k in 0..count {
        let mut placed = false;
        for _ in 0..layout.max_attempts {
            let x = area.min_x + rng.random::<f64>() * area.width();
            let y = area.min_y + rng.random::<f64>() * area.depth();
            let separated = sites
                .iter()
                .all(|&(sx, sy)| (sx - x).hypot(sy - y) >= layout.min_site_separation_m);
            if separated && outside_buildings(buildings, x, y) {
                sites.push((x, y));
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::generation(format!(
                "could not place outdoor site {} of {count} after {} attempts",
                k + 1,
                layout.max_attempts
            )));
        }
    }
    Ok(sites)
}

/// Outdoor user within `user_radius_m` of the AP, outside every footprint
/// and inside the area.
fn place_outdoor_user<R: Rng + ?Sized>(
    ap: (f64, f64),
    buildings: &[Building],
    layout: &OutdoorLayout,
    rng: &mut R,
) -> Result<Point3> {
    let area = layout.area();
    for _ in 0..layout.max_attempts {
        let r = layout.user_radius_m * rng.random::<f64>().sqrt();
        let phi = rng.random::<f64>() * std::f64::consts::TAU;
        let (x, y) = (ap.0 + r * phi.cos(), ap.1 + r * phi.sin());
        if area.contains(x, y) && outside_buildings(buildings, x, y) {
            return Ok(Point3::new(x, y, layout.user_height_m));
        }
    }
    Err(Error::generation(format!(
        "no outdoor user position near ({:.1}, {:.1}) after {} attempts",
        ap.0, ap.1, layout.max_attempts
    )))
}

fn resolve_sites(seed: u64, needed: usize, buildings: &[Building], layout: &OutdoorLayout) -> Result<Vec<(f64, f64)>> {
    match &layout.sites_csv {
        Some(path) => {
            let mut sites = load_outdoor_sites(path)?;
            if sites.len() < needed {
                return Err(Error::config(format!(
                    "{} lists {} sites, {needed} needed",
                    path.display(),
                    sites.len()
                )));
            }
            sites.shuffle(&mut stream_rng(seed, Stream::Sites));
            Ok(sites)
        }
        None => {
            let count = layout.sites.unwrap_or(needed);
            if count < needed {
                return Err(Error::config(format!(
                    "{needed} outdoor APs requested but only {count} sites configured"
                )));
            }
            generate_sites(seed, count, buildings, layout)
        }
    }
}

fn outdoor_pair(
    seed: u64,
    index: usize,
    population: Population,
    stream: Stream,
    k: usize,
    site: (f64, f64),
    buildings: &[Building],
    layout: &OutdoorLayout,
) -> Result<(AccessPoint, UserTerminal)> {
    let mut rng = indexed_rng(seed, stream, k as u64);
    let z = site_height(buildings, site.0, site.1, layout.mast_height_m);
    let user = place_outdoor_user(site, buildings, layout, &mut rng)?;
    Ok(make_pair(
        index,
        population,
        Point3::new(site.0, site.1, z),
        user,
        None,
        OUTDOOR_TX_POWER_DBM,
    ))
}

/// Number of indoor APs at `density` over the area, rounded.
pub fn indoor_count(density_per_km2: f64, layout: &OutdoorLayout) -> usize {
    (density_per_km2 * layout.area().area() * 1e-6).round() as usize
}

/// Legacy APs indoors at a density, entrant APs on outdoor sites.
pub fn generate_indoor_outdoor(
    seed: u64,
    indoor_density_per_km2: f64,
    n_outdoor: usize,
    layout: &OutdoorLayout,
) -> Result<NetworkRealization> {
    if !(indoor_density_per_km2 >= 0.0) {
        return Err(Error::config("indoor density must be nonnegative"));
    }
    let buildings = generate_buildings(seed, layout)?;
    let n_legacy = indoor_count(indoor_density_per_km2, layout);
    let slots: Vec<(usize, usize)> = buildings
        .iter()
        .enumerate()
        .flat_map(|(b, bl)| (0..bl.apartment_count()).map(move |a| (b, a)))
        .collect();
    if n_legacy > 0 && slots.is_empty() {
        return Err(Error::config("indoor APs requested but the layout has no buildings"));
    }

    let mut rng = stream_rng(seed, Stream::LegacyPlacement);
    let chosen: Vec<(usize, usize)> = if n_legacy <= slots.len() {
        slots.choose_multiple(&mut rng, n_legacy).copied().collect()
    } else {
        (0..n_legacy).map(|_| slots[rng.random_range(0..slots.len())]).collect()
    };

    let mut aps = Vec::with_capacity(n_legacy + n_outdoor);
    let mut users = Vec::with_capacity(n_legacy + n_outdoor);
    for (i, &slot) in chosen.iter().enumerate() {
        let mut rng = indexed_rng(seed, Stream::LegacyPlacement, i as u64);
        let (ap, user) = place_indoor(&buildings, slot, &mut rng);
        let (a, u) = make_pair(i, Population::Legacy, ap, user, Some(slot.0), INDOOR_TX_POWER_DBM);
        aps.push(a);
        users.push(u);
    }

    let sites = resolve_sites(seed, n_outdoor, &buildings, layout)?;
    for k in 0..n_outdoor {
        let (a, u) = outdoor_pair(
            seed,
            n_legacy + k,
            Population::Entrant,
            Stream::EntrantPlacement,
            k,
            sites[k],
            &buildings,
            layout,
        )?;
        aps.push(a);
        users.push(u);
    }
    Ok(NetworkRealization {
        seed,
        kind: ScenarioKind::IndoorOutdoor,
        area: layout.area(),
        buildings,
        aps,
        users,
        n_legacy,
    })
}

/// Both populations on outdoor sites, partitioned at random.
pub fn generate_outdoor_outdoor(
    seed: u64,
    n_legacy: usize,
    n_entrant: usize,
    layout: &OutdoorLayout,
) -> Result<NetworkRealization> {
    let buildings = generate_buildings(seed, layout)?;
    let needed = n_legacy + n_entrant;
    let mut sites = resolve_sites(seed, needed, &buildings, layout)?;
    if layout.sites_csv.is_none() {
        let mut rng = stream_rng(seed, Stream::SiteAssignment);
        sites.shuffle(&mut rng);
    }
    let mut aps = Vec::with_capacity(needed);
    let mut users = Vec::with_capacity(needed);
    for i in 0..needed {
        let (population, stream, k) = if i < n_legacy {
            (Population::Legacy, Stream::LegacyPlacement, i)
        } else {
            (Population::Entrant, Stream::EntrantPlacement, i - n_legacy)
        };
        let (a, u) = outdoor_pair(seed, i, population, stream, k, sites[i], &buildings, layout)?;
        aps.push(a);
        users.push(u);
    }
    Ok(NetworkRealization {
        seed,
        kind: ScenarioKind::OutdoorOutdoor,
        area: layout.area(),
        buildings,
        aps,
        users,
        n_legacy,
    })
}

#[derive(Debug, Deserialize)]
struct SiteRow {
    x_m: f64,
    y_m: f64,
}

/// Read outdoor sites from a `x_m,y_m` CSV file.
pub fn load_outdoor_sites(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })?;
    let mut sites = Vec::new();
    for row in reader.deserialize::<SiteRow>() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        if !(row.x_m.is_finite() && row.y_m.is_finite()) {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: sites.len() as u64 + 2,
                message: "coordinates must be finite".into(),
            });
        }
        sites.push((row.x_m, row.y_m));
    }
    if sites.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "no sites listed".into(),
        });
    }
    Ok(sites)
}
