//! Isomorphism by backtracking over vertex bijections.
//!
//! This shares nothing with the flag-based canonical form: it maps a root
//! vertex, then repeatedly aligns the link of a mapped vertex with the link of
//! its image, trying every rotation and reflection that agrees with degrees,
//! face sizes and the partial map.

use crate::iso::verify_isomorphism;
use crate::map::{PolygonalMap, Vertex};

const UNSET: usize = usize::MAX;

struct Search<'a> {
    a: &'a PolygonalMap,
    b: &'a PolygonalMap,
    fwd: Vec<Vertex>,
    back: Vec<Vertex>,
    seq_a: Vec<Vec<usize>>,
    seq_b: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn assign(&mut self, v: Vertex, w: Vertex, trail: &mut Vec<Vertex>) -> bool {
        if self.fwd[v] == w {
            return true;
        }
        if self.fwd[v] != UNSET || self.back[w] != UNSET {
            return false;
        }
        if self.a.degree(v) != self.b.degree(w) || self.seq_a[v] != self.seq_b[w] {
            return false;
        }
        self.fwd[v] = w;
        self.back[w] = v;
        trail.push(v);
        true
    }

    fn undo(&mut self, trail: &[Vertex]) {
        for &v in trail {
            self.back[self.fwd[v]] = UNSET;
            self.fwd[v] = UNSET;
        }
    }

    /// Aligns link(v) with link(fwd[v]) with the given shift and direction.
    fn align(&mut self, v: Vertex, shift: usize, flip: bool, trail: &mut Vec<Vertex>) -> bool {
        let la = self.a.vertex_link(v).clone();
        let lb = self.b.vertex_link(self.fwd[v]).clone();
        let d = la.degree();
        for i in 0..d {
            // neighbor i of la goes to neighbor j of lb; face i goes to the face between
            let (j, fj) = if flip {
                let j = (shift + d - i) % d;
                (j, (j + d - 1) % d)
            } else {
                let j = (shift + i) % d;
                (j, j)
            };
            if self.a.face(la.faces[i]).len() != self.b.face(lb.faces[fj]).len() {
                return false;
            }
            if !self.assign(la.neighbors[i], lb.neighbors[j], trail) {
                return false;
            }
        }
        true
    }

    fn solve(&mut self, frontier: Vec<Vertex>, done: &mut Vec<bool>) -> bool {
        let Some(pos) = frontier.iter().position(|&v| !done[v]) else {
            return self.fwd.iter().all(|&x| x != UNSET) && verify_isomorphism(self.a, self.b, &self.fwd);
        };
        let v = frontier[pos];
        let d = self.a.degree(v);
        done[v] = true;
        for flip in [false, true] {
            for shift in 0..d {
                let mut trail = Vec::new();
                if self.align(v, shift, flip, &mut trail) {
                    let mut next = frontier.clone();
                    next.extend(trail.iter().copied());
                    if self.solve(next, done) {
                        return true;
                    }
                }
                self.undo(&trail);
            }
        }
        done[v] = false;
        false
    }
}

/// Searches for a face-preserving vertex bijection from a to b.
pub fn find_isomorphism(a: &PolygonalMap, b: &PolygonalMap) -> Option<Vec<Vertex>> {
    let n = a.n_vertices();
    if n != b.n_vertices() || a.n_edges() != b.n_edges() || a.n_faces() != b.n_faces() {
        return None;
    }
    let seq_a: Vec<_> = (0..n).map(|v| a.face_sequence_at(v)).collect();
    let seq_b: Vec<_> = (0..n).map(|v| b.face_sequence_at(v)).collect();
    let mut s = Search { a, b, fwd: vec![UNSET; n], back: vec![UNSET; n], seq_a, seq_b };
    for w in 0..n {
        let mut trail = Vec::new();
        if s.assign(0, w, &mut trail) {
            let mut done = vec![false; n];
            if s.solve(vec![0], &mut done) {
                return Some(s.fwd);
            }
        }
        s.undo(&trail);
    }
    None
}
