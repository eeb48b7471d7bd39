//! Canonical forms, isomorphism witnesses and duals.

use std::collections::HashSet;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::flags::{to_flags, FlagSystem};
use crate::map::{MapError, PolygonalMap, Vertex};

/// Relabeling-invariant encoding of a map: the smallest breadth-first code of
/// the flag graph over all admissible start flags.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    code: Vec<u32>,
}

impl CanonicalForm {
    pub fn as_slice(&self) -> &[u32] {
        &self.code
    }

    pub fn bytes(&self) -> Vec<u8> {
        self.code.iter().flat_map(|x| x.to_le_bytes()).collect()
    }

    /// SHA-256 of the code, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.bytes()))
    }
}

/// Flags numbered in discovery order from `start`; entry x is the number of flag x.
fn bfs_numbering(fs: &FlagSystem, start: usize) -> Vec<u32> {
    let mut num = vec![u32::MAX; fs.len()];
    let mut order = Vec::with_capacity(fs.len());
    num[start] = 0;
    order.push(start);
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for s in &fs.s {
            let y = s[x] as usize;
            if num[y] == u32::MAX {
                num[y] = order.len() as u32;
                order.push(y);
            }
        }
        i += 1;
    }
    num
}

/// Writes the code from `start` into `out`, giving up as soon as it exceeds
/// `bound`. Returns true when the full code was written and is < bound.
fn code_from(fs: &FlagSystem, start: usize, bound: Option<&[u32]>, out: &mut Vec<u32>, num: &mut [u32], order: &mut Vec<usize>) -> bool {
    out.clear();
    order.clear();
    num.fill(u32::MAX);
    num[start] = 0;
    order.push(start);
    let mut smaller = bound.is_none();
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for s in &fs.s {
            let y = s[x] as usize;
            if num[y] == u32::MAX {
                num[y] = order.len() as u32;
                order.push(y);
            }
            let c = num[y];
            if !smaller {
                let b = bound.unwrap()[out.len()];
                if c > b {
                    return false;
                }
                if c < b {
                    smaller = true;
                }
            }
            out.push(c);
        }
        i += 1;
    }
    smaller
}

/// Start flags worth trying: those on the smallest faces at vertices of the
/// smallest degree. The choice depends only on the isomorphism class.
fn start_flags(m: &PolygonalMap, fs: &FlagSystem) -> Vec<usize> {
    let key = |x: usize| (m.face(fs.face[x]).len(), m.degree(fs.vertex[x]));
    let best = (0..fs.len()).map(key).min().unwrap_or((0, 0));
    (0..fs.len()).filter(|&x| key(x) == best).collect()
}

fn canonical_with_start(m: &PolygonalMap, fs: &FlagSystem) -> (CanonicalForm, usize) {
    let starts = start_flags(m, fs);
    let chunk = (starts.len() / rayon::current_num_threads().max(1)).max(16);
    let (code, start) = starts
        .par_chunks(chunk)
        .map(|group| {
            let mut best: Option<(Vec<u32>, usize)> = None;
            let mut buf = Vec::with_capacity(3 * fs.len());
            let mut num = vec![0u32; fs.len()];
            let mut order = Vec::with_capacity(fs.len());
            for &x in group {
                let bound = best.as_ref().map(|(c, _)| c.as_slice());
                if code_from(fs, x, bound, &mut buf, &mut num, &mut order) {
                    best = Some((buf.clone(), x));
                }
            }
            best.expect("non-empty group")
        })
        .min()
        .expect("at least one flag");
    (CanonicalForm { code }, start)
}

pub fn canonical_form(m: &PolygonalMap) -> CanonicalForm {
    canonical_with_start(m, &to_flags(m)).0
}

/// A vertex bijection sending faces to faces, or None.
pub fn isomorphism(m1: &PolygonalMap, m2: &PolygonalMap) -> Option<Vec<Vertex>> {
    if m1.n_vertices() != m2.n_vertices() || m1.n_edges() != m2.n_edges() || m1.n_faces() != m2.n_faces() {
        return None;
    }
    let (f1, f2) = (to_flags(m1), to_flags(m2));
    let (c1, x1) = canonical_with_start(m1, &f1);
    let (c2, x2) = canonical_with_start(m2, &f2);
    if c1 != c2 {
        return None;
    }
    let (n1, n2) = (bfs_numbering(&f1, x1), bfs_numbering(&f2, x2));
    let mut by_num = vec![0usize; f2.len()];
    for (x, &k) in n2.iter().enumerate() {
        by_num[k as usize] = x;
    }
    let mut phi = vec![usize::MAX; m1.n_vertices()];
    for (x, &k) in n1.iter().enumerate() {
        let y = by_num[k as usize];
        let (a, b) = (f1.vertex[x], f2.vertex[y]);
        if phi[a] == usize::MAX {
            phi[a] = b;
        } else if phi[a] != b {
            return None;
        }
    }
    verify_isomorphism(m1, m2, &phi).then_some(phi)
}

pub fn are_isomorphic(m1: &PolygonalMap, m2: &PolygonalMap) -> bool {
    isomorphism(m1, m2).is_some()
}

/// Checks that phi is a bijection carrying the face set of m1 onto that of m2.
pub fn verify_isomorphism(m1: &PolygonalMap, m2: &PolygonalMap, phi: &[Vertex]) -> bool {
    let n = m1.n_vertices();
    if phi.len() != n || m2.n_vertices() != n || m1.n_faces() != m2.n_faces() {
        return false;
    }
    let mut hit = vec![false; n];
    for &v in phi {
        if v >= n || hit[v] {
            return false;
        }
        hit[v] = true;
    }
    let target: HashSet<Vec<Vertex>> = m2.faces().iter().map(|f| cyclic_key(f)).collect();
    m1.faces().iter().all(|f| {
        let img: Vec<Vertex> = f.iter().map(|&v| phi[v]).collect();
        target.contains(&cyclic_key(&img))
    })
}

/// Face as a cyclic sequence up to rotation and reversal.
pub fn cyclic_key(f: &[Vertex]) -> Vec<Vertex> {
    crate::types::canonical_cycle(f)
}

/// Vertices of the dual are the faces of m; faces of the dual are the links.
pub fn dual(m: &PolygonalMap) -> Result<PolygonalMap, MapError> {
    let faces = (0..m.n_vertices()).map(|v| m.vertex_link(v).faces.clone()).collect();
    PolygonalMap::from_faces(m.n_faces(), faces)
}
