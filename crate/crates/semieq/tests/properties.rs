use std::sync::OnceLock;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semieq::flags::to_flags;
use semieq::io::{from_json, to_json};
use semieq::iso::verify_isomorphism;
use semieq::reps::{self, RepParams};
use semieq::search::find_isomorphism;
use semieq::{canonical_form, dual, isomorphism, MapType, PolygonalMap};

struct Sample {
    ty: MapType,
    params: RepParams,
    map: PolygonalMap,
}

/// Every map that builds from an admissible tuple on at most 30 vertices.
fn pool() -> &'static [Sample] {
    static POOL: OnceLock<Vec<Sample>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::new();
        for ty in MapType::ALL {
            for n in 1..=30 {
                for p in reps::all_admissible(ty, n) {
                    if let Ok(b) = reps::build(ty, p) {
                        out.push(Sample { ty, params: p, map: b.map });
                    }
                }
            }
        }
        out
    })
}

fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}

#[test]
fn pool_covers_many_types() {
    let types: std::collections::BTreeSet<_> = pool().iter().map(|s| s.ty).collect();
    assert!(types.len() >= 8, "{types:?}");
}

#[test]
fn every_built_map_is_on_the_klein_bottle() {
    for s in pool() {
        assert!(s.map.klein_report(s.ty).ok(), "{} {}", s.ty, s.params);
        assert_eq!(Some(s.map.n_vertices()), reps::vertex_count(s.ty, s.params));
        assert!(to_flags(&s.map).check_axioms());
    }
}

#[test]
fn folded_square_cap_on_four_has_no_dual() {
    // with l = 4 two quadrangles of the folded cap share two edges
    let m = reps::build(MapType::T3342, RepParams::Mobius { variant: reps::Variant::Plain, l: 4, t: 6 }).unwrap().map;
    assert!(dual(&m).is_err());
    assert!(dual(&reps::build_planar(MapType::T3342, 4, 6, 0).unwrap()).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn canonical_form_ignores_labels(i in 0..1000usize, seed in any::<u64>()) {
        let s = &pool()[i % pool().len()];
        let p = s.map.relabel(&shuffled(s.map.n_vertices(), seed));
        prop_assert_eq!(canonical_form(&s.map), canonical_form(&p));
        let phi = isomorphism(&s.map, &p).expect("relabeled copy is isomorphic");
        prop_assert!(verify_isomorphism(&s.map, &p, &phi));
    }

    #[test]
    fn search_finds_relabelings(i in 0..1000usize, seed in any::<u64>()) {
        let s = &pool()[i % pool().len()];
        let p = s.map.relabel(&shuffled(s.map.n_vertices(), seed));
        let phi = find_isomorphism(&s.map, &p).expect("search must find the relabeling");
        prop_assert!(verify_isomorphism(&s.map, &p, &phi));
    }

    #[test]
    fn json_round_trip_keeps_the_class(i in 0..1000usize, seed in any::<u64>()) {
        let s = &pool()[i % pool().len()];
        let m = s.map.relabel(&shuffled(s.map.n_vertices(), seed));
        let text = to_json(&m, s.ty, Some(s.params));
        let back = from_json(&text).unwrap();
        prop_assert_eq!(back.map_type, s.ty);
        prop_assert_eq!(back.rep, Some(s.params));
        prop_assert_eq!(canonical_form(&back.map), canonical_form(&s.map));
        prop_assert_eq!(to_json(&back.map, back.map_type, back.rep), text);
    }

    #[test]
    fn duals_respect_isomorphism(i in 0..1000usize, seed in any::<u64>()) {
        let s = &pool()[i % pool().len()];
        let p = s.map.relabel(&shuffled(s.map.n_vertices(), seed));
        // faces meeting in two edges leave no dual; relabeling cannot change that
        let (d1, d2) = match (dual(&s.map), dual(&p)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(_), Err(_)) => return Ok(()),
            _ => return Err(TestCaseError::fail("dual exists for only one labeling")),
        };
        prop_assert_eq!(d1.n_vertices(), s.map.n_faces());
        prop_assert_eq!(canonical_form(&d1), canonical_form(&d2));
        prop_assert_eq!(canonical_form(&dual(&d1).unwrap()), canonical_form(&s.map));
    }

    #[test]
    fn flag_orbit_is_everything(i in 0..1000usize) {
        let s = &pool()[i % pool().len()];
        let fs = to_flags(&s.map);
        prop_assert_eq!(fs.len(), 4 * s.map.n_edges());
        prop_assert!(fs.check_axioms());
        prop_assert_eq!(fs.orbit(0).len(), fs.len());
    }
}
