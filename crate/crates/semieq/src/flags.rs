//! Flag systems: one flag per (vertex, edge, face) incidence.

use crate::map::{PolygonalMap, Vertex};

/// Three fixed-point-free involutions on 4E flags.
///
/// Flag (f, i, side) sits at corner i of face f; side 0 uses the edge to the
/// next corner, side 1 the edge to the previous one.
#[derive(Debug, Clone)]
pub struct FlagSystem {
    pub s: [Vec<u32>; 3],
    pub vertex: Vec<Vertex>,
    pub face: Vec<usize>,
}

impl FlagSystem {
    pub fn len(&self) -> usize {
        self.vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex.is_empty()
    }

    /// True when all three maps are fixed-point-free involutions, s0 and s2
    /// commute and the flag graph is connected.
    pub fn check_axioms(&self) -> bool {
        let n = self.len();
        for s in &self.s {
            if (0..n).any(|x| s[x] as usize == x || s[s[x] as usize] as usize != x) {
                return false;
            }
        }
        let (s0, s2) = (&self.s[0], &self.s[2]);
        if (0..n).any(|x| s0[s2[x] as usize] != s2[s0[x] as usize]) {
            return false;
        }
        self.orbit(0).len() == n
    }

    /// Flags reachable from `start` under the three involutions.
    pub fn orbit(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut out = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for s in &self.s {
                let y = s[x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }
}

pub fn to_flags(m: &PolygonalMap) -> FlagSystem {
    let faces = m.faces();
    let mut offset = Vec::with_capacity(faces.len());
    let mut total = 0;
    for f in faces {
        offset.push(total);
        total += 2 * f.len();
    }
    let id = |f: usize, i: usize, side: usize| offset[f] + 2 * i + side;
    let mut s0 = vec![0u32; total];
    let mut s1 = vec![0u32; total];
    let mut s2 = vec![0u32; total];
    let mut vertex = vec![0; total];
    let mut face = vec![0; total];
    for (f, fv) in faces.iter().enumerate() {
        let k = fv.len();
        for i in 0..k {
            let next = (i + 1) % k;
            for side in 0..2 {
                let x = id(f, i, side);
                vertex[x] = fv[i];
                face[x] = f;
                s1[x] = id(f, i, 1 - side) as u32;
            }
            // edge fv[i] - fv[next]: flag (f,i,0) at fv[i], flag (f,next,1) at fv[next]
            s0[id(f, i, 0)] = id(f, next, 1) as u32;
            s0[id(f, next, 1)] = id(f, i, 0) as u32;
            let sides = m.edge_sides(fv[i], fv[next]).expect("edge present");
            let (g, j) = if sides[0] == (f, i) { sides[1] } else { sides[0] };
            let gv = m.face(g);
            let gnext = (j + 1) % gv.len();
            // in g the edge runs gv[j] -> gv[gnext]
            let (here, there) = if gv[j] == fv[i] {
                (id(g, j, 0), id(g, gnext, 1))
            } else {
                (id(g, gnext, 1), id(g, j, 0))
            };
            s2[id(f, i, 0)] = here as u32;
            s2[id(f, next, 1)] = there as u32;
        }
    }
    FlagSystem { s: [s0, s1, s2], vertex, face }
}
