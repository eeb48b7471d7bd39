//! Polygonal maps given by their faces.

use std::collections::{HashMap, VecDeque};

use crate::types::{canonical_cycle, MapType};

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("face {face} has fewer than 3 vertices")]
    FaceTooSmall { face: usize },
    #[error("face {face} refers to vertex {vertex}, but n = {n}")]
    VertexOutOfRange { face: usize, vertex: Vertex, n: usize },
    #[error("face {face} repeats vertex {vertex}")]
    DuplicateVertexInFace { face: usize, vertex: Vertex },
    #[error("edge {u}-{v} lies on {sides} face sides instead of 2")]
    EdgeNotTwoSided { u: Vertex, v: Vertex, sides: usize },
    #[error("vertex {vertex} is not reachable from vertex 0")]
    Disconnected { vertex: Vertex },
    #[error("link of vertex {vertex} is not a single cycle")]
    LinkNotSingleCycle { vertex: Vertex },
}

/// A closed surface map with faces stored as cyclic vertex sequences.
///
/// Values of this type have passed every validity check, so the accessors
/// below never fail.
#[derive(Debug, Clone)]
pub struct PolygonalMap {
    n: usize,
    faces: Vec<Vec<Vertex>>,
    hint: Option<MapType>,
    /// For each undirected edge (lo, hi): the two (face, position) sides,
    /// where position i means the edge faces[f][i] -> faces[f][i+1].
    edges: HashMap<(Vertex, Vertex), [(usize, usize); 2]>,
    links: Vec<VertexLink>,
}

/// The faces around a vertex in cyclic order. Entry i is the face between
/// `neighbors[i]` and `neighbors[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLink {
    pub center: Vertex,
    pub neighbors: Vec<Vertex>,
    pub faces: Vec<usize>,
}

impl VertexLink {
    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    /// Alternating (neighbor, face) pairs.
    pub fn cycle(&self) -> impl Iterator<Item = (Vertex, usize)> + '_ {
        self.neighbors.iter().copied().zip(self.faces.iter().copied())
    }
}

fn edge_key(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl PolygonalMap {
    pub fn from_faces(n: usize, faces: Vec<Vec<Vertex>>) -> Result<Self, MapError> {
        if n < 3 {
            return Err(MapError::Degenerate(format!("{n} vertices")));
        }
        if faces.is_empty() {
            return Err(MapError::Degenerate("empty face list".into()));
        }
        for (fi, f) in faces.iter().enumerate() {
            if f.len() < 3 {
                return Err(MapError::FaceTooSmall { face: fi });
            }
            let mut seen = Vec::with_capacity(f.len());
            for &v in f {
                if v >= n {
                    return Err(MapError::VertexOutOfRange { face: fi, vertex: v, n });
                }
                if seen.contains(&v) {
                    return Err(MapError::DuplicateVertexInFace { face: fi, vertex: v });
                }
                seen.push(v);
            }
        }

        let mut sides: HashMap<(Vertex, Vertex), Vec<(usize, usize)>> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                sides.entry(edge_key(a, b)).or_default().push((fi, i));
            }
        }
        let mut edges = HashMap::with_capacity(sides.len());
        let mut bad: Vec<_> = sides.iter().filter(|(_, s)| s.len() != 2).collect();
        bad.sort();
        if let Some((&(u, v), s)) = bad.first() {
            return Err(MapError::EdgeNotTwoSided { u, v, sides: s.len() });
        }
        for (k, s) in sides {
            edges.insert(k, [s[0], s[1]]);
        }

        // connectivity of the edge graph
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges.keys() {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(MapError::Disconnected { vertex: v });
        }

        let links = (0..n)
            .map(|v| walk_link(v, &faces, &edges))
            .collect::<Result<Vec<_>, _>>()?;

        Ok(PolygonalMap { n, faces, hint: None, edges, links })
    }

    pub fn with_hint(mut self, t: MapType) -> Self {
        self.hint = Some(t);
        self
    }

    pub fn hint(&self) -> Option<MapType> {
        self.hint
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Vec<Vertex>] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &[Vertex] {
        &self.faces[f]
    }

    /// Sorted list of undirected edges.
    pub fn edge_list(&self) -> Vec<(Vertex, Vertex)> {
        let mut e: Vec<_> = self.edges.keys().copied().collect();
        e.sort_unstable();
        e
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.edges.contains_key(&edge_key(a, b))
    }

    /// The two (face, position) sides of edge a-b.
    pub fn edge_sides(&self, a: Vertex, b: Vertex) -> Option<[(usize, usize); 2]> {
        self.edges.get(&edge_key(a, b)).copied()
    }

    pub fn vertex_link(&self, v: Vertex) -> &VertexLink {
        &self.links[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.links[v].degree()
    }

    /// Face sizes around v, canonical under rotation and reflection.
    pub fn face_sequence_at(&self, v: Vertex) -> Vec<usize> {
        let sizes: Vec<usize> = self.links[v].faces.iter().map(|&f| self.faces[f].len()).collect();
        canonical_cycle(&sizes)
    }

    pub fn is_semi_equivelar(&self, t: MapType) -> bool {
        let want = canonical_cycle(t.signature());
        (0..self.n).all(|v| self.face_sequence_at(v) == want)
    }

    /// The type shared by all vertices, if any.
    pub fn detect_type(&self) -> Option<MapType> {
        MapType::ALL.into_iter().find(|&t| self.is_semi_equivelar(t))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Tries to orient every face consistently, flipping faces as needed.
    pub fn is_orientable(&self) -> bool {
        // +1 keeps the stored order, -1 reverses it
        let mut sign = vec![0i8; self.faces.len()];
        sign[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(f) = queue.pop_front() {
            let face = &self.faces[f];
            for i in 0..face.len() {
                let (a, b) = (face[i], face[(i + 1) % face.len()]);
                let [s0, s1] = self.edges[&edge_key(a, b)];
                let (g, j) = if s0 == (f, i) { s1 } else { s0 };
                // in g the edge runs g[j] -> g[j+1]; same direction as a -> b?
                let same = self.faces[g][j] == a;
                let want = if same { -sign[f] } else { sign[f] };
                if sign[g] == 0 {
                    sign[g] = want;
                    queue.push_back(g);
                } else if sign[g] != want {
                    return false;
                }
            }
        }
        true
    }

    /// Faces rotated to start at their smallest vertex, list sorted.
    pub fn normalized_faces(&self) -> Vec<Vec<Vertex>> {
        let mut out: Vec<Vec<Vertex>> = self
            .faces
            .iter()
            .map(|f| {
                let i = (0..f.len()).min_by_key(|&i| f[i]).unwrap_or(0);
                f[i..].iter().chain(&f[..i]).copied().collect()
            })
            .collect();
        out.sort();
        out
    }

    /// The same map with vertex v renamed to perm[v].
    pub fn relabel(&self, perm: &[Vertex]) -> PolygonalMap {
        let faces = self
            .faces
            .iter()
            .map(|f| f.iter().map(|&v| perm[v]).collect())
            .collect();
        let mut m = PolygonalMap::from_faces(self.n, faces).expect("relabeling keeps validity");
        m.hint = self.hint;
        m
    }

    /// Full Klein-bottle check for a declared type.
    pub fn klein_report(&self, t: MapType) -> KleinReport {
        KleinReport {
            euler: self.euler_characteristic(),
            orientable: self.is_orientable(),
            semi_equivelar: self.is_semi_equivelar(t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KleinReport {
    pub euler: i64,
    pub orientable: bool,
    pub semi_equivelar: bool,
}

impl KleinReport {
    pub fn ok(&self) -> bool {
        self.euler == 0 && !self.orientable && self.semi_equivelar
    }
}

/// Walks the corners at v. Each corner (prev, v, next) of a face joins two
/// neighbors; the link is a single cycle when these joins chain up into one
/// loop through every corner.
fn walk_link(
    v: Vertex,
    faces: &[Vec<Vertex>],
    edges: &HashMap<(Vertex, Vertex), [(usize, usize); 2]>,
) -> Result<VertexLink, MapError> {
    // corner of face f at v: (face, neighbor before, neighbor after)
    let mut corners: Vec<(usize, Vertex, Vertex)> = Vec::new();
    for (fi, f) in faces.iter().enumerate() {
        if let Some(i) = f.iter().position(|&x| x == v) {
            let k = f.len();
            corners.push((fi, f[(i + k - 1) % k], f[(i + 1) % k]));
        }
    }
    let bad = MapError::LinkNotSingleCycle { vertex: v };
    if corners.len() < 3 {
        return Err(bad);
    }
    // every edge at v is two-sided, so each neighbor closes exactly two corners
    let mut by_neighbor: HashMap<Vertex, Vec<usize>> = HashMap::new();
    for (ci, &(_, a, b)) in corners.iter().enumerate() {
        by_neighbor.entry(a).or_default().push(ci);
        by_neighbor.entry(b).or_default().push(ci);
    }
    debug_assert!(by_neighbor.keys().all(|&u| edges.contains_key(&edge_key(u, v))));
    if by_neighbor.values().any(|c| c.len() != 2) {
        return Err(bad);
    }
    let mut neighbors = Vec::with_capacity(corners.len());
    let mut link_faces = Vec::with_capacity(corners.len());
    let mut used = vec![false; corners.len()];
    let (mut ci, mut at) = (0usize, corners[0].1);
    for _ in 0..corners.len() {
        if used[ci] {
            return Err(bad);
        }
        used[ci] = true;
        let (f, a, b) = corners[ci];
        let next = if a == at { b } else { a };
        neighbors.push(at);
        link_faces.push(f);
        at = next;
        let pair = &by_neighbor[&at];
        ci = if pair[0] == ci { pair[1] } else { pair[0] };
    }
    if at != neighbors[0] || ci != 0 {
        return Err(bad);
    }
    Ok(VertexLink { center: v, neighbors, faces: link_faces })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn tetrahedron() -> PolygonalMap {
        PolygonalMap::from_faces(4, vec![vec![0, 1, 2], vec![0, 3, 1], vec![1, 3, 2], vec![0, 2, 3]])
            .unwrap()
    }

    /// Square grid on the torus, rows identified without a twist.
    pub fn square_torus(r: usize, s: usize) -> PolygonalMap {
        let id = |i: usize, j: usize| (i % s) * r + (j % r);
        let faces = (0..s)
            .flat_map(|i| (0..r).map(move |j| vec![id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j)]))
            .collect();
        PolygonalMap::from_faces(r * s, faces).unwrap()
    }

    #[test]
    fn tetrahedron_basics() {
        let t = tetrahedron();
        assert_eq!(t.euler_characteristic(), 2);
        assert!(t.is_orientable());
        assert_eq!(t.face_sequence_at(0), vec![3, 3, 3]);
        assert_eq!(t.n_edges(), 6);
    }

    #[test]
    fn two_tetrahedra_are_disconnected() {
        let mut faces = tetrahedron().faces().to_vec();
        faces.extend(tetrahedron().faces().iter().map(|f| f.iter().map(|v| v + 4).collect::<Vec<_>>()));
        assert!(matches!(PolygonalMap::from_faces(8, faces), Err(MapError::Disconnected { .. })));
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(matches!(PolygonalMap::from_faces(2, vec![vec![0, 1, 0]]), Err(MapError::Degenerate(_))));
        assert!(matches!(PolygonalMap::from_faces(5, vec![]), Err(MapError::Degenerate(_))));
    }

    #[test]
    fn structural_errors() {
        let open = vec![vec![0, 1, 2], vec![0, 2, 3]];
        assert!(matches!(PolygonalMap::from_faces(4, open), Err(MapError::EdgeNotTwoSided { .. })));
        let dup = vec![vec![0, 1, 1]];
        assert!(matches!(
            PolygonalMap::from_faces(3, dup),
            Err(MapError::DuplicateVertexInFace { face: 0, vertex: 1 })
        ));
        // two tetrahedra glued at one vertex: closed, connected, but vertex 0 has two link cycles
        let mut faces = tetrahedron().faces().to_vec();
        let map = |v: usize| if v == 0 { 0 } else { v + 3 };
        faces.extend(tetrahedron().faces().iter().map(|f| f.iter().map(|&v| map(v)).collect::<Vec<_>>()));
        assert!(matches!(
            PolygonalMap::from_faces(7, faces),
            Err(MapError::LinkNotSingleCycle { vertex: 0 })
        ));
    }

    #[test]
    fn torus_grid() {
        let m = square_torus(4, 3);
        assert_eq!(m.euler_characteristic(), 0);
        assert!(m.is_orientable());
        assert_eq!(m.face_sequence_at(5), vec![4, 4, 4, 4]);
        assert!(m.is_semi_equivelar(MapType::T44));
    }

    #[test]
    fn wheel_link() {
        // hexagonal wheel closed by a cone on the rim: an octahedron-like sphere
        let mut faces: Vec<Vec<usize>> = (0..6).map(|i| vec![0, 1 + i, 1 + (i + 1) % 6]).collect();
        faces.extend((0..6).map(|i| vec![7, 1 + (i + 1) % 6, 1 + i]));
        let m = PolygonalMap::from_faces(8, faces).unwrap();
        let l = m.vertex_link(0);
        assert_eq!(l.degree(), 6);
        let mut ns = l.neighbors.clone();
        ns.sort();
        assert_eq!(ns, vec![1, 2, 3, 4, 5, 6]);
        for w in l.neighbors.windows(2) {
            assert!(m.has_edge(w[0], w[1]));
        }
    }
}
