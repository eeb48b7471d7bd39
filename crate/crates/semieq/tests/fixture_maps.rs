//! Checks against two hand-written maps: K(7,4,1) drawn as a labelled grid,
//! and a three-row Möbius closure given by its face list.

use std::collections::{BTreeMap, HashMap};

use semieq::flags::to_flags;
use semieq::io::from_json;
use semieq::reps::{build_mobius, build_planar, Variant};
use semieq::walkers::{classify_strip, is_two_sided, trace, PathRule, StripKind};
use semieq::{are_isomorphic, canonical_form, dual, MapType, PolygonalMap, Vertex};

fn fixture(name: &str) -> PolygonalMap {
    let path = format!("{}/tests/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    from_json(&std::fs::read_to_string(path).unwrap()).unwrap().map
}

// Grid labels: v1..v7 = 0..6, w = 7..13, x = 14..20, u = 21..27.
fn v(i: usize) -> Vertex {
    i - 1
}
fn w(i: usize) -> Vertex {
    6 + i
}
fn x(i: usize) -> Vertex {
    13 + i
}

#[test]
fn grid_counts() {
    let m = fixture("twisted_7_4_1");
    assert_eq!((m.n_vertices(), m.n_edges(), m.n_faces()), (28, 84, 56));
    assert_eq!(m.euler_characteristic(), 0);
    assert!(!m.is_orientable());
    assert!(m.is_semi_equivelar(MapType::T36));
    assert!(!m.is_semi_equivelar(MapType::T44));
    let fs = to_flags(&m);
    assert_eq!(fs.len(), 336);
    assert!(fs.check_axioms());
}

#[test]
fn grid_link_of_v1() {
    let m = fixture("twisted_7_4_1");
    let link = m.vertex_link(v(1));
    let mut nb = link.neighbors.clone();
    nb.sort();
    // w1 and the diagonal w2 above; v2 and v7 along the row; from the top row
    // (where v1 sits between v2 and v7 read backwards) the u-row neighbours
    let mut want = vec![v(2), v(7), w(1), w(2), 21, 22];
    want.sort();
    assert_eq!(nb, want);
}

#[test]
fn grid_is_the_twisted_cylinder() {
    let m = fixture("twisted_7_4_1");
    let built = build_planar(MapType::T36, 7, 4, 1).unwrap();
    assert!(are_isomorphic(&m, &built));
    assert!(semieq::search::find_isomorphism(&m, &built).is_some());
}

#[test]
fn grid_type_a_cycle_through_x_row() {
    let m = fixture("twisted_7_4_1");
    let walk = trace(&m, PathRule::A, (x(1), x(2))).unwrap();
    assert!(walk.simple);
    assert_eq!(walk.vertices, (1..=7).map(x).collect::<Vec<_>>());
}

#[test]
fn grid_type_a_closed_walk_visits_each_vertex_twice() {
    let m = fixture("twisted_7_4_1");
    let walk = trace(&m, PathRule::A, (v(1), w(1))).unwrap();
    assert!(!walk.simple);
    assert_eq!(walk.vertices.len(), 56);
    assert_eq!(&walk.vertices[..4], &[v(1), w(1), x(1), 21]);
    let mut seen: HashMap<Vertex, usize> = HashMap::new();
    for &a in &walk.vertices {
        *seen.entry(a).or_default() += 1;
    }
    assert_eq!(seen.len(), 28);
    assert!(seen.values().all(|&c| c == 2));
}

#[test]
fn grid_double_dual() {
    let m = fixture("twisted_7_4_1");
    let d = dual(&m).unwrap();
    assert!(d.is_semi_equivelar(MapType::T63));
    assert_eq!(d.n_vertices(), 56);
    assert_eq!(canonical_form(&dual(&d).unwrap()), canonical_form(&m));
}

// Möbius pair labels: u1..u7 = 0..6, w = 7..13, x = 14..20.

#[test]
fn mobius_pair_is_the_three_row_mobius_closure() {
    let m = fixture("mobius_pair_7_3");
    assert_eq!((m.n_vertices(), m.n_faces()), (21, 42));
    assert!(m.klein_report(MapType::T36).ok());
    let built = build_mobius(MapType::T36, Variant::Plain, 7, 3).unwrap();
    assert!(are_isomorphic(&m, &built));
    // four rows give 28 vertices, so that closure cannot be this map
    let four = build_mobius(MapType::T36, Variant::Plain, 7, 4).unwrap();
    assert_eq!(four.n_vertices(), 28);
    assert!(!are_isomorphic(&m, &four));
}

#[test]
fn mobius_pair_u_cycle_bounds_a_triangle_mobius_strip() {
    let m = fixture("mobius_pair_7_3");
    let c: Vec<Vertex> = (0..7).collect();
    assert!(is_two_sided(&m, &c).unwrap());
    let cls = classify_strip(&m, &c).unwrap();
    assert_eq!(cls.kind, StripKind::CylinderPlusMobius);
    assert_eq!(cls.mobius_content, Some(BTreeMap::from([(3, 7)])));
    assert_eq!(cls.face_content, BTreeMap::from([(3, 21)]));
    // the last boundary cycle is C itself
    assert_eq!(cls.boundary_cycles.last().unwrap().len(), 7);
}

#[test]
fn mobius_pair_x_cycle_is_a_cylinder() {
    let m = fixture("mobius_pair_7_3");
    let c: Vec<Vertex> = (14..21).collect();
    let cls = classify_strip(&m, &c).unwrap();
    assert_eq!(cls.kind, StripKind::Cylinder);
    assert_eq!(cls.face_content, BTreeMap::from([(3, 28)]));
    assert_eq!(cls.boundary_cycles.len(), 2);
}
