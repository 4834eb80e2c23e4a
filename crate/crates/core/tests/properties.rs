mod common;

use std::collections::HashSet;

use coexsim::geometry::Point3;
use coexsim::mac::{self, MacVariant};
use coexsim::montecarlo::{empirical_cdf, median_sorted};
use coexsim::phy::{auto_rate, AutoRateProfile};
use coexsim::propagation::{count_crossings_in, mwf_loss, outdoor_loss, PropagationProfile};
use coexsim::scenario::{ApartmentSize, Building};
use coexsim::seed::realization_seed;
use coexsim::{CsGraph, EntrantVariant, MacAssignment, MacOptions};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_strategy() -> impl Strategy<Value = CsGraph> {
    (1usize..=4, 0usize..=4, any::<u64>(), 0.0f64..1.0).prop_map(|(nl, ne, seed, density)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        common::random_graph(&mut rng, nl, ne, density)
    })
}

fn slotted() -> impl Strategy<Value = MacVariant> {
    prop_oneof![
        Just(MacVariant::AlwaysOn),
        Just(MacVariant::Fixed50Coordinated),
        Just(MacVariant::Fixed50Uncoordinated),
        Just(MacVariant::AdaptiveDutyCycle),
        Just(MacVariant::IdealTdma),
    ]
}

fn building() -> impl Strategy<Value = Building> {
    (1u32..6, 1u32..4, 1u32..5, 3.0f64..12.0, 3.0f64..12.0, 2.5f64..4.0).prop_map(|(c, r, f, w, d, h)| Building {
        origin_x: 0.0,
        origin_y: 0.0,
        columns: c,
        rows: r,
        floors: f,
        apartment: ApartmentSize {
            width_m: w,
            depth_m: d,
            height_m: h,
        },
    })
}

fn point() -> impl Strategy<Value = Point3> {
    (-30.0f64..80.0, -30.0f64..50.0, 0.0f64..18.0).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

proptest! {
    #[test]
    fn vacancy_is_a_probability(g in graph_strategy(), v in slotted()) {
        for x in 0..g.n_legacy() {
            let f = mac::f_dut(x, &g, v).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            if g.entrant_in_range(x).is_empty() {
                prop_assert_eq!(f, 1.0);
            }
        }
    }

    #[test]
    fn collision_loss_bounded_by_one_frame(g in graph_strategy(), v in slotted(), m in 1u32..500) {
        for x in 0..g.n_legacy() {
            let r = mac::collision_degradation(x, &g, v, m).unwrap();
            prop_assert!(r >= 0.0 && r <= 1.0 / m as f64 + 1e-15);
        }
    }

    #[test]
    fn air_time_in_unit_interval(g in graph_strategy(), k in 0usize..8) {
        let asg = MacAssignment::for_variant(EntrantVariant::ALL[k], &MacOptions::default());
        for ap in 0..g.len() {
            let a = mac::air_time(ap, &g, &asg);
            prop_assert!((0.0..=1.0).contains(&a));
        }
    }

    #[test]
    fn crossings_are_symmetric(b in building(), p in point(), q in point()) {
        prop_assert_eq!(count_crossings_in(&p, &q, &b), count_crossings_in(&q, &p, &b));
    }

    #[test]
    fn crossings_match_ray_march(b in building(), p in point(), q in point()) {
        let c = count_crossings_in(&p, &q, &b);
        prop_assert_eq!((c.walls, c.floors, c.external_walls), common::raymarch::crossings(&p, &q, &b));
    }

    #[test]
    fn indoor_loss_grows_with_obstacles(d in 1.0f64..200.0, walls in 0u32..6, floors in 0u32..4) {
        let p = PropagationProfile::default();
        let base = mwf_loss(d, walls, floors, &p).unwrap();
        prop_assert!(mwf_loss(d * 1.5, walls, floors, &p).unwrap() > base);
        prop_assert!(mwf_loss(d, walls + 1, floors, &p).unwrap() > base);
        prop_assert!(mwf_loss(d, walls, floors + 1, &p).unwrap() > base);
    }

    #[test]
    fn blocked_paths_lose_at_least_as_much(d in 1.0f64..3000.0) {
        let p = PropagationProfile::default();
        prop_assert!(outdoor_loss(d, false, &p).unwrap().loss_db >= outdoor_loss(d, true, &p).unwrap().loss_db);
    }

    #[test]
    fn rates_monotone_in_sinr(a in -30.0f64..60.0, b in -30.0f64..60.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for p in [AutoRateProfile::dot11n(), AutoRateProfile::lte()] {
            prop_assert!(auto_rate(lo, &p) <= auto_rate(hi, &p));
        }
    }

    #[test]
    fn cdf_nondecreasing_and_complete(mut xs in prop::collection::vec(0.0f64..100.0, 1..200)) {
        xs.sort_by(f64::total_cmp);
        let cdf = empirical_cdf(&xs);
        prop_assert!(cdf.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
        prop_assert_eq!(cdf.last().unwrap().1, 1.0);
        let m = median_sorted(&xs).unwrap();
        let at = xs.iter().filter(|&&x| x <= m).count() as f64 / xs.len() as f64;
        prop_assert!(at >= 0.5);
    }

    #[test]
    fn symmetric_sample_median_is_centre(c in -50.0f64..50.0, offs in prop::collection::vec(0.0f64..10.0, 0..50)) {
        let mut xs: Vec<f64> = offs.iter().flat_map(|&o| [c - o, c + o]).collect();
        xs.push(c);
        xs.sort_by(f64::total_cmp);
        prop_assert!((median_sorted(&xs).unwrap() - c).abs() < 1e-12);
    }
}

#[test]
fn realization_seeds_do_not_collide() {
    for master in [0u64, 1, 0xDEAD_BEEF] {
        let seeds: HashSet<u64> = (0..1_000_000u64).map(|i| realization_seed(master, i)).collect();
        assert_eq!(seeds.len(), 1_000_000);
    }
}
