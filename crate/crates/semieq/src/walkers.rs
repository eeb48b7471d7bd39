//! Distinguished paths through a map and the strips of faces around cycles.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::map::{PolygonalMap, Vertex};
use crate::reps::{self, RepParams};
use crate::types::{canonical_cycle, MapType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathRule {
    /// {3^6}: leave through the neighbour opposite the one you came from.
    A,
    /// {4^4}: the same, on degree four.
    B,
    /// {3^3,4^2}: triangles on one side, quadrangles on the other.
    A1,
    /// {3^3,4^2}: alternate the quad-quad edge with the first fan edge.
    A2,
    /// Mirror image of A2: alternate with the second fan edge.
    A3,
    /// {3^2,4,3,4}: split the link into a triangle and a quadrangle on one
    /// side, two adjacent triangles and a quadrangle on the other.
    B1,
}

impl PathRule {
    pub const ALL: [PathRule; 6] = [PathRule::A, PathRule::B, PathRule::A1, PathRule::A2, PathRule::A3, PathRule::B1];

    pub fn map_type(self) -> MapType {
        match self {
            PathRule::A => MapType::T36,
            PathRule::B => MapType::T44,
            PathRule::A1 | PathRule::A2 | PathRule::A3 => MapType::T3342,
            PathRule::B1 => MapType::T32434,
        }
    }

    /// Rules defined for a map type.
    pub fn for_type(t: MapType) -> &'static [PathRule] {
        match t {
            MapType::T36 => &[PathRule::A],
            MapType::T44 => &[PathRule::B],
            MapType::T3342 => &[PathRule::A1, PathRule::A2, PathRule::A3],
            MapType::T32434 => &[PathRule::B1],
            _ => &[],
        }
    }
}

impl FromStr for PathRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A" => PathRule::A,
            "B" => PathRule::B,
            "A1" => PathRule::A1,
            "A2" => PathRule::A2,
            "A3" => PathRule::A3,
            "B1" => PathRule::B1,
            other => return Err(format!("unknown path rule `{other}`")),
        })
    }
}

impl fmt::Display for PathRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WalkError {
    #[error("rule {rule} does not apply at vertex {vertex} entered from {from}")]
    RuleInapplicable { rule: PathRule, vertex: Vertex, from: Vertex },
    #[error("{0}")]
    NotACycle(String),
    #[error("no constructor metadata for this map: {0}")]
    MetadataMissing(String),
}

/// A maximal walk, stopped when its first directed edge comes round again.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    /// Vertices in order; the walk closes from the last back to the first.
    pub vertices: Vec<Vertex>,
    pub simple: bool,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn pos(list: &[Vertex], v: Vertex) -> usize {
    list.iter().position(|&x| x == v).expect("vertex in link")
}

/// True when the stored link orientations at v and w disagree across vw.
pub fn edge_twist(m: &PolygonalMap, v: Vertex, w: Vertex) -> bool {
    let (lv, lw) = (m.vertex_link(v), m.vertex_link(w));
    let after_w = lv.faces[pos(&lv.neighbors, w)];
    let pv = pos(&lw.neighbors, v);
    let before_v = lw.faces[(pv + lw.degree() - 1) % lw.degree()];
    after_w != before_v
}

/// Neighbours of v read in the given orientation, with the sizes of the
/// faces between consecutive entries.
fn oriented_link(m: &PolygonalMap, v: Vertex, forward: bool) -> (Vec<Vertex>, Vec<usize>) {
    let link = m.vertex_link(v);
    let d = link.degree();
    let sizes: Vec<usize> = link.faces.iter().map(|&f| m.face(f).len()).collect();
    if forward {
        (link.neighbors.clone(), sizes)
    } else {
        // reversed: neighbour i' = n[d-1-i], face between i' and i'+1 is f[d-2-i]
        let nb: Vec<Vertex> = (0..d).map(|i| link.neighbors[d - 1 - i]).collect();
        let fs: Vec<usize> = (0..d).map(|i| sizes[(2 * d - 2 - i) % d]).collect();
        (nb, fs)
    }
}

fn step(m: &PolygonalMap, rule: PathRule, prev: Vertex, cur: Vertex, forward: bool) -> Result<Vertex, WalkError> {
    let bad = || WalkError::RuleInapplicable { rule, vertex: cur, from: prev };
    let (nb, sizes) = oriented_link(m, cur, forward);
    let d = nb.len();
    let p = nb.iter().position(|&x| x == prev).ok_or_else(bad)?;
    let at = |i: usize| nb[i % d];
    // face between neighbour i and i+1
    let face = |i: usize| sizes[i % d];
    match rule {
        PathRule::A | PathRule::B => {
            let (deg, gon) = if rule == PathRule::A { (6, 3) } else { (4, 4) };
            if d != deg || sizes.iter().any(|&s| s != gon) {
                return Err(bad());
            }
            Ok(at(p + d / 2))
        }
        PathRule::A1 => {
            // the two neighbours where triangles meet quadrangles
            let splits: Vec<usize> = (0..d).filter(|&i| face(i + d - 1) != face(i)).collect();
            if d != 5 || splits.len() != 2 || !splits.contains(&p) {
                return Err(bad());
            }
            Ok(nb[if splits[0] == p { splits[1] } else { splits[0] }])
        }
        PathRule::A2 | PathRule::A3 => {
            // read as (QQ, s1, X1, X2, s2): quads on QQ-s1 and s2-QQ
            let qq = (0..d).find(|&i| face(i + d - 1) == 4 && face(i) == 4).filter(|_| d == 5).ok_or_else(bad)?;
            let fan = if rule == PathRule::A2 { at(qq + 2) } else { at(qq + 3) };
            if prev == nb[qq] {
                Ok(fan)
            } else if prev == fan {
                Ok(nb[qq])
            } else {
                Err(bad())
            }
        }
        PathRule::B1 => {
            if d != 5 {
                return Err(bad());
            }
            // leave at two steps either way; keep the side that is one
            // triangle and one quadrangle, opposite two adjacent triangles
            // and a quadrangle
            let fits = |short_from: usize| {
                let short = [face(short_from), face(short_from + 1)];
                let long = [face(short_from + 2), face(short_from + 3), face(short_from + 4)];
                short.contains(&3)
                    && short.contains(&4)
                    && long.iter().filter(|&&s| s == 3).count() == 2
                    && (long[0] == 4 || long[2] == 4)
            };
            let fwd = fits(p);
            let back = fits(p + d - 2);
            match (fwd, back) {
                (true, false) => Ok(at(p + 2)),
                (false, true) => Ok(at(p + d - 2)),
                _ => Err(bad()),
            }
        }
    }
}

/// Follows `rule` from the directed edge (u, v) until that directed edge
/// comes round again.
///
/// The orientation-sensitive rules (A2, A3) carry a reading direction along
/// the walk, starting from the stored link order at u.
pub fn trace(m: &PolygonalMap, rule: PathRule, start: (Vertex, Vertex)) -> Result<Walk, WalkError> {
    let (u, v) = start;
    if u >= m.n_vertices() || v >= m.n_vertices() || !m.has_edge(u, v) {
        return Err(WalkError::NotACycle(format!("{u}-{v} is not an edge")));
    }
    let mut vertices = vec![u];
    let (mut prev, mut cur) = (u, v);
    let mut forward = !edge_twist(m, u, v);
    // a walk can use at most every directed edge once
    let bound = 2 * m.n_edges() + 1;
    for _ in 0..bound {
        vertices.push(cur);
        let next = step(m, rule, prev, cur, forward)?;
        if edge_twist(m, cur, next) {
            forward = !forward;
        }
        prev = cur;
        cur = next;
        if (prev, cur) == start {
            vertices.pop();
            let mut seen = HashSet::new();
            let simple = vertices.iter().all(|&x| seen.insert(x));
            return Ok(Walk { vertices, simple });
        }
    }
    unreachable!("deterministic walk on finitely many directed edges must return to its start")
}

/// Every walk of `rule` in m, one per class of directed starting edges.
pub fn all_walks(m: &PolygonalMap, rule: PathRule) -> Vec<Walk> {
    let mut covered: HashSet<(Vertex, Vertex)> = HashSet::new();
    let mut out = Vec::new();
    for (a, b) in m.edge_list() {
        for e in [(a, b), (b, a)] {
            if covered.contains(&e) {
                continue;
            }
            if let Ok(w) = trace(m, rule, e) {
                let k = w.vertices.len();
                for i in 0..k {
                    covered.insert((w.vertices[i], w.vertices[(i + 1) % k]));
                }
                out.push(w);
            }
        }
    }
    out
}

fn check_cycle(m: &PolygonalMap, c: &[Vertex]) -> Result<(), WalkError> {
    if c.len() < 3 {
        return Err(WalkError::NotACycle(format!("{} vertices", c.len())));
    }
    let mut seen = HashSet::new();
    for (i, &v) in c.iter().enumerate() {
        if v >= m.n_vertices() || !seen.insert(v) {
            return Err(WalkError::NotACycle(format!("vertex {v} repeats or is out of range")));
        }
        let w = c[(i + 1) % c.len()];
        if !m.has_edge(v, w) {
            return Err(WalkError::NotACycle(format!("{v}-{w} is not an edge")));
        }
    }
    Ok(())
}

/// Carries one side of c once around; returns the faces seen on that side
/// and whether the side came back to itself.
fn transport_side(m: &PolygonalMap, c: &[Vertex]) -> (Vec<usize>, bool) {
    let k = c.len();
    let start = m.edge_sides(c[0], c[1]).expect("edge")[0].0;
    let mut side = start;
    let mut faces = Vec::new();
    for step in 0..k {
        let i = step % k;
        // side is the face beside edge c[i] c[i+1]; move it to c[i+1]
        let (cur, nxt) = (c[(i + 1) % k], c[(i + 2) % k]);
        let link = m.vertex_link(cur);
        let d = link.degree();
        let (pu, pw) = (pos(&link.neighbors, c[i]), pos(&link.neighbors, nxt));
        let arc_a: Vec<usize> = (0..(pu + d - pw) % d).map(|j| link.faces[(pw + j) % d]).collect();
        let arc_b: Vec<usize> = (0..(pw + d - pu) % d).map(|j| link.faces[(pu + j) % d]).collect();
        // arc_a ends next to prev, arc_b starts next to prev
        let (arc, out) = if arc_a.last() == Some(&side) {
            let o = arc_a[0];
            (arc_a, o)
        } else {
            let o = *arc_b.last().unwrap();
            (arc_b, o)
        };
        faces.extend(arc);
        side = out;
    }
    (faces, side == start)
}

/// Whether a simple cycle is two-sided, by carrying a side once around it.
pub fn is_two_sided(m: &PolygonalMap, c: &[Vertex]) -> Result<bool, WalkError> {
    check_cycle(m, c)?;
    Ok(transport_side(m, c).1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StripKind {
    Cylinder,
    #[serde(rename = "mobius")]
    MobiusStrip,
    #[serde(rename = "cylinder_mobius")]
    CylinderPlusMobius,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripClassification {
    pub kind: StripKind,
    /// Boundary walks of the strip. For a cylinder glued to a Möbius strip
    /// this is the outer boundary walk followed by the gluing cycle.
    #[serde(rename = "boundary")]
    pub boundary_cycles: Vec<Vec<Vertex>>,
    /// Face sizes of the strip with multiplicities.
    #[serde(rename = "faces")]
    pub face_content: BTreeMap<usize, usize>,
    /// Face sizes on the Möbius side of the cycle, for cylinder plus Möbius.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mobius_content: Option<BTreeMap<usize, usize>>,
}

fn content(m: &PolygonalMap, faces: impl IntoIterator<Item = usize>) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for f in faces {
        *out.entry(m.face(f).len()).or_insert(0) += 1;
    }
    out
}

/// Whether the faces in `set` can be oriented coherently across the edges
/// they share.
pub(crate) fn faces_orientable(m: &PolygonalMap, set: &HashSet<usize>) -> bool {
    let mut sign: HashMap<usize, i8> = HashMap::new();
    for &f0 in set {
        if sign.contains_key(&f0) {
            continue;
        }
        sign.insert(f0, 1);
        let mut queue = VecDeque::from([f0]);
        while let Some(f) = queue.pop_front() {
            let face = m.face(f);
            let k = face.len();
            for i in 0..k {
                let (a, b) = (face[i], face[(i + 1) % k]);
                for (g, j) in m.edge_sides(a, b).unwrap() {
                    if g == f || !set.contains(&g) {
                        continue;
                    }
                    let other = m.face(g);
                    // same stored direction on the shared edge means opposite orientations
                    let same_dir = other[j] == a;
                    let want = if same_dir { -sign[&f] } else { sign[&f] };
                    match sign.get(&g) {
                        Some(&s) if s != want => return false,
                        Some(_) => {}
                        None => {
                            sign.insert(g, want);
                            queue.push_back(g);
                        }
                    }
                }
            }
        }
    }
    true
}

/// Boundary walks of the union of faces in `set`, found by pairing the
/// boundary edges at each vertex across sectors of the set.
pub(crate) fn boundary_walks(m: &PolygonalMap, set: &HashSet<usize>) -> Vec<Vec<Vertex>> {
    let boundary = |a: Vertex, b: Vertex| {
        let sides = m.edge_sides(a, b).unwrap();
        set.contains(&sides[0].0) != set.contains(&sides[1].0)
    };
    // at vertex v, each boundary edge vx is paired with the boundary edge at
    // the other end of its sector
    let mut pair: HashMap<(Vertex, Vertex), Vertex> = HashMap::new();
    let mut verts: Vec<Vertex> = set.iter().flat_map(|&f| m.face(f).to_vec()).collect();
    verts.sort_unstable();
    verts.dedup();
    for &v in &verts {
        let link = m.vertex_link(v);
        let d = link.degree();
        let inside: Vec<bool> = link.faces.iter().map(|f| set.contains(f)).collect();
        for i in 0..d {
            // a sector starts at neighbour i when face i is in and face i-1 is out
            if inside[i] && !inside[(i + d - 1) % d] {
                let mut j = i;
                while inside[j % d] {
                    j += 1;
                }
                let (a, b) = (link.neighbors[i], link.neighbors[j % d]);
                debug_assert!(boundary(v, a) && boundary(v, b));
                pair.insert((v, a), b);
                pair.insert((v, b), a);
            }
        }
    }
    let mut used: HashSet<(Vertex, Vertex)> = HashSet::new();
    let mut walks = Vec::new();
    let mut edges: Vec<(Vertex, Vertex)> = m.edge_list().into_iter().filter(|&(a, b)| boundary(a, b)).collect();
    edges.sort_unstable();
    for (a, b) in edges {
        if used.contains(&(a.min(b), a.max(b))) {
            continue;
        }
        let mut walk = vec![a];
        let (mut prev, mut cur) = (a, b);
        loop {
            used.insert((prev.min(cur), prev.max(cur)));
            let next = pair[&(cur, prev)];
            if (cur, next) == (a, b) {
                break;
            }
            walk.push(cur);
            prev = cur;
            cur = next;
        }
        walks.push(walk);
    }
    walks
}

/// Classifies the union of faces meeting the cycle c.
///
/// A one-sided c gives a Möbius strip. A two-sided c whose faces cannot be
/// oriented coherently gives a cylinder with a Möbius strip attached along
/// c. Anything else is a cylinder.
pub fn classify_strip(m: &PolygonalMap, c: &[Vertex]) -> Result<StripClassification, WalkError> {
    check_cycle(m, c)?;
    let on_c: HashSet<Vertex> = c.iter().copied().collect();
    let set: HashSet<usize> =
        (0..m.n_faces()).filter(|&f| m.face(f).iter().any(|v| on_c.contains(v))).collect();
    let face_content = content(m, set.iter().copied());
    let walks = boundary_walks(m, &set);
    let (one_side, two_sided) = transport_side(m, c);
    if !two_sided {
        return Ok(StripClassification {
            kind: StripKind::MobiusStrip,
            boundary_cycles: walks,
            face_content,
            mobius_content: None,
        });
    }
    if faces_orientable(m, &set) {
        return Ok(StripClassification { kind: StripKind::Cylinder, boundary_cycles: walks, face_content, mobius_content: None });
    }
    // find the side that does not orient: that is the Möbius strip on c
    let left: HashSet<usize> = one_side.into_iter().collect();
    let right: HashSet<usize> = set.iter().copied().filter(|f| !left.contains(f)).collect();
    let mobius = if faces_orientable(m, &left) { right } else { left };
    let mut boundary_cycles: Vec<Vec<Vertex>> =
        walks.into_iter().filter(|w| canonical_cycle(w) != canonical_cycle(c)).collect();
    boundary_cycles.push(c.to_vec());
    Ok(StripClassification {
        kind: StripKind::CylinderPlusMobius,
        boundary_cycles,
        face_content,
        mobius_content: Some(content(m, mobius)),
    })
}

/// The shortest one-sided cycle inside `within`, ties broken by the
/// smallest rotation of the vertex sequence. Sidedness here comes from the
/// twist of link orientations along edges.
pub fn one_sided_core(m: &PolygonalMap, within: &[Vertex]) -> Option<Vec<Vertex>> {
    let inside: HashSet<Vertex> = within.iter().copied().collect();
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    let mut sorted: Vec<Vertex> = within.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &s in &sorted {
        // BFS on (vertex, parity of twists so far)
        let mut parent: HashMap<(Vertex, bool), (Vertex, bool)> = HashMap::new();
        let mut queue = VecDeque::from([(s, false)]);
        parent.insert((s, false), (s, false));
        while let Some((v, par)) = queue.pop_front() {
            if (v, par) == (s, true) {
                break;
            }
            let mut nbrs = m.vertex_link(v).neighbors.clone();
            nbrs.sort_unstable();
            for w in nbrs {
                if !inside.contains(&w) {
                    continue;
                }
                let st = (w, par ^ edge_twist(m, v, w));
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(st) {
                    e.insert((v, par));
                    queue.push_back(st);
                }
            }
        }
        if !parent.contains_key(&(s, true)) {
            continue;
        }
        let mut path = Vec::new();
        let mut st = (s, true);
        loop {
            let p = parent[&st];
            path.push(p.0);
            if p == (s, false) {
                break;
            }
            st = p;
        }
        path.reverse();
        let mut seen = HashSet::new();
        if path.len() < 3 || !path.iter().all(|&x| seen.insert(x)) {
            continue;
        }
        let key = canonical_cycle(&path);
        let better = match &best {
            None => true,
            Some((len, k)) => (path.len(), &key) < (*len, k),
        };
        if better {
            best = Some((path.len(), key));
        }
    }
    best.map(|(_, k)| k)
}

/// Rows known to the constructor for a map built from p, followed by the
/// one-sided cores of any Möbius caps.
pub fn row_cycles(m: &PolygonalMap, p: RepParams) -> Result<Vec<Vec<Vertex>>, WalkError> {
    let ty = m
        .hint()
        .or_else(|| m.detect_type())
        .ok_or_else(|| WalkError::MetadataMissing("map has no semi-equivelar type".into()))?;
    let built = reps::build_unchecked(ty, p).map_err(|e| WalkError::MetadataMissing(e.to_string()))?;
    if built.map.n_vertices() != m.n_vertices() || built.map.normalized_faces() != m.normalized_faces() {
        return Err(WalkError::MetadataMissing(format!("map was not built from {p}")));
    }
    let mut out = built.rows;
    out.extend(built.cores);
    Ok(out)
}
