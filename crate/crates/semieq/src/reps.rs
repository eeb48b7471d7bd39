//! Twisted-cylinder K(r,s,k) and Möbius-pair K(l,t) constructions.
//!
//! Every type is laid out as cyclic rows of vertices joined by strips of
//! faces. A strip is a per-type stencil between a lower row `lo` and an upper
//! row `hi`, optionally with interior vertices of its own. Planar closures
//! glue the last strip to row 0 read backwards from column k. Möbius caps
//! are either a strip folded onto itself by a glide, or a strip hanging off a
//! core row of half length whose two sheets are identified.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::map::{MapError, PolygonalMap, Vertex};
use crate::types::{canonical_cycle, MapType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Strips folded by a glide, or a core row for the kagome-like types.
    Plain,
    M36,
    M312,
    /// One folded cap and one core-row cap.
    Mixed,
    M34,
    M46,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::M36 => "m36",
            Variant::M312 => "m312",
            Variant::Mixed => "mixed",
            Variant::M34 => "m34",
            Variant::M46 => "m46",
        }
    }

    /// Closure variants a type supports; empty when it has no Möbius form.
    pub fn allowed(t: MapType) -> &'static [Variant] {
        match t {
            MapType::T36 | MapType::T63 | MapType::T3342 | MapType::T4612 => &[Variant::Plain],
            MapType::T3636 => &[Variant::M36, Variant::Plain, Variant::Mixed],
            MapType::T3122 => &[Variant::M312, Variant::Plain, Variant::Mixed],
            MapType::T3464 => &[Variant::M34, Variant::M46],
            MapType::T44 | MapType::T32434 | MapType::T488 | MapType::T346 => &[],
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "plain" => Variant::Plain,
            "m36" | "mm36" => Variant::M36,
            "m312" | "mm312" => Variant::M312,
            "mixed" => Variant::Mixed,
            "m34" => Variant::M34,
            "m46" => Variant::M46,
            other => return Err(format!("unknown closure variant `{other}`")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RepParams {
    Planar { r: usize, s: usize, k: usize },
    Mobius { variant: Variant, l: usize, t: usize },
}

impl fmt::Display for RepParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepParams::Planar { r, s, k } => write!(f, "planar:{r},{s},{k}"),
            RepParams::Mobius { variant, l, t } => write!(f, "mobius:{variant},{l},{t}"),
        }
    }
}

impl FromStr for RepParams {
    type Err = String;

    /// `planar:r,s,k` or `mobius:variant,l,t`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| format!("expected kind:args, got `{s}`"))?;
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        let num = |x: &str| x.parse::<usize>().map_err(|_| format!("`{x}` is not a count"));
        match (kind.trim(), parts.as_slice()) {
            ("planar", [r, s, k]) => Ok(RepParams::Planar { r: num(r)?, s: num(s)?, k: num(k)? }),
            ("mobius", [v, l, t]) => Ok(RepParams::Mobius { variant: v.parse()?, l: num(l)?, t: num(t)? }),
            _ => Err(format!("cannot parse representation `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub clause: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    pub violated: Vec<Violation>,
}

impl fmt::Display for AdmissibilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.admissible {
            return f.write_str("admissible");
        }
        let msgs: Vec<String> = self.violated.iter().map(|v| format!("{} violated ({})", v.message, v.clause)).collect();
        f.write_str(&msgs.join("; "))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RepError {
    #[error("inadmissible parameters: {0}")]
    Inadmissible(AdmissibilityVerdict),
    #[error("closure failed for {params}: {reason}")]
    ClosureFailure { params: RepParams, reason: String },
}

struct Clauses(Vec<Violation>);

impl Clauses {
    fn need(&mut self, ok: bool, clause: &str, message: &str) {
        if !ok {
            self.0.push(Violation { clause: clause.into(), message: message.into() });
        }
    }

    fn verdict(self) -> AdmissibilityVerdict {
        AdmissibilityVerdict { admissible: self.0.is_empty(), violated: self.0 }
    }
}

/// Checks the stated existence conditions for the representation,
/// clause by clause and as literally as they are stated.
pub fn admissible(ty: MapType, p: RepParams) -> AdmissibilityVerdict {
    let mut c = Clauses(Vec::new());
    if ty == MapType::T346 {
        c.need(false, "non-existence", "no map of type {3^4,6} exists");
        return c.verdict();
    }
    match p {
        RepParams::Planar { r, s, k } => {
            c.need(r >= 1 && s >= 1, "shape", "r ≥ 1 and s ≥ 1");
            c.need(k < r.max(1), "k", "0 ≤ k ≤ r−1");
            planar_clauses(&mut c, ty, r, s, k);
        }
        RepParams::Mobius { variant, l, t } => {
            if !Variant::allowed(ty).contains(&variant) {
                let msg = if Variant::allowed(ty).is_empty() {
                    format!("{} has no Möbius-pair form", ty.symbol())
                } else {
                    format!("variant {variant} is not one of the closures allowed for {}", ty.symbol())
                };
                c.need(false, "variant", &msg);
                return c.verdict();
            }
            mobius_clauses(&mut c, ty, variant, l, t);
        }
    }
    c.verdict()
}

fn planar_clauses(c: &mut Clauses, ty: MapType, r: usize, s: usize, k: usize) {
    let n = r * s;
    match ty {
        MapType::T36 | MapType::T63 | MapType::T44 => {
            c.need(n >= 9, "i", "rs ≥ 9");
            c.need(r >= 3, "ii", "r ≥ 3");
            c.need(s >= 3, "iii", "s ≥ 3");
        }
        MapType::T3342 => {
            c.need(n >= 12, "i", "rs ≥ 12");
            c.need(r >= 3, "ii", "r ≥ 3");
            c.need(s >= 4, "iii", "s ≥ 4");
        }
        MapType::T32434 => {
            c.need(n >= 12, "i", "rs ≥ 12");
            c.need(r >= 4, "ii", "r ≥ 4");
            c.need(r % 2 == 0, "iii", "2 | r");
            c.need(s >= 3, "iv", "s ≥ 3");
            c.need(s % 2 == 1, "v", "2 ∤ s");
            c.need(k % 2 == 0, "vi", "k even");
        }
        MapType::T488 => {
            c.need(n >= 24, "i", "rs ≥ 24");
            c.need(r % 4 == 0, "ii", "4 | r");
            c.need(s >= 3, "iii", "s ≥ 3");
            c.need(r >= 8, "iv", "r ≥ 8");
            if s % 2 == 1 {
                c.need(k % 4 == 3, "v", "k ≡ 3 (mod 4) for odd s");
            } else {
                c.need(s >= 4, "vi", "s ≥ 4 for even s");
                c.need(k % 4 == 2, "vi", "k ≡ 2 (mod 4) for even s");
            }
        }
        MapType::T3636 => {
            c.need(3 * n >= 54, "i", "(3/2)rs ≥ 27");
            c.need(s >= 3, "ii", "s ≥ 3");
            c.need(r % 2 == 0, "iii", "2 | r");
            c.need(r >= 6, "iv", "r ≥ 6");
            c.need(k % 2 == 1, "v", "k odd");
        }
        MapType::T3122 => {
            c.need(r % 4 == 0, "ii", "4 | r");
            c.need((3 * n) % 2 == 0 && (3 * n / 2) % 6 == 0, "iii", "6 | n");
            c.need(s >= 3, "iv", "s ≥ 3");
            c.need(r >= 12, "v", "r ≥ 12");
            c.need(k % 4 == 2, "vi", "k ≡ 2 (mod 4)");
        }
        MapType::T4612 => {
            c.need(n >= 48, "i", "n = rs ≥ 48");
            c.need(s % 2 == 0, "ii", "2 | s");
            c.need(r % 6 == 0, "iii", "6 | r");
            c.need(s >= 4, "iv", "s ≥ 4");
            c.need(n % 12 == 0, "v", "12 | n");
            c.need(r >= 12, "vi", "r ≥ 12");
            c.need(k % 6 == 4, "vii", "k ≡ 4 (mod 6)");
        }
        MapType::T3464 => {
            c.need(n >= 24, "i", "n = rs ≥ 24");
            c.need(r % 3 == 0, "ii", "3 | r");
            c.need(s % 2 == 0, "iii", "2 | s");
            c.need(s >= 4, "iv", "s ≥ 4");
            c.need(r >= 6, "v", "r ≥ 6");
            c.need(k % 3 == 2, "vi", "k ≡ 2 (mod 3)");
        }
        MapType::T346 => unreachable!(),
    }
}

fn mobius_clauses(c: &mut Clauses, ty: MapType, v: Variant, l: usize, t: usize) {
    match (ty, v) {
        (MapType::T36 | MapType::T63, _) => {
            c.need(t * l >= 10, "i", "tl ≥ 10");
            c.need(t >= 2, "ii", "t ≥ 2");
            c.need(l % 2 == 1 && l >= 5, "iii", "2 ∤ l and l ≥ 5");
        }
        (MapType::T3342, _) => {
            c.need(t * l >= 10, "i", "tl ≥ 10");
            c.need(t >= 2 && t % 2 == 0, "ii", "t ≥ 2 and 2 | t");
            c.need(t != 2 || l >= 5, "iii", "l ≥ 5 if t = 2");
            c.need(t < 4 || l >= 4, "iv", "l ≥ 4 if t ≥ 4");
        }
        (MapType::T3636, Variant::M36) => {
            c.need(t >= 2, "1", "t ≥ 2");
            c.need(l % 4 == 0 && l >= 12, "1", "4 | l and l ≥ 12");
        }
        (MapType::T3636, Variant::Plain) => {
            c.need(t >= 1, "2", "t ≥ 1");
            c.need(l % 2 == 0 && l >= 10, "2", "2 | l and l ≥ 10");
        }
        (MapType::T3636, _) => {
            c.need(t >= 1, "3", "t ≥ 1");
            c.need(l % 4 == 0 && l >= 12, "3", "4 | l and l ≥ 12");
        }
        (MapType::T3122, Variant::M312) => {
            c.need(t >= 2, "1", "t ≥ 2");
            c.need(l % 8 == 0 && l >= 24, "1", "8 | l and l ≥ 24");
        }
        (MapType::T3122, Variant::Plain) => {
            c.need(t >= 1, "2", "t ≥ 1");
            c.need(l % 4 == 0 && l >= 20, "2", "4 | l and l ≥ 20");
        }
        (MapType::T3122, _) => {
            c.need(t >= 1, "3", "t ≥ 1");
            c.need(l % 4 == 0 && l >= 24, "3", "4 | l and l ≥ 24");
        }
        (MapType::T4612, _) => {
            c.need(t >= 2, "i", "t ≥ 2");
            c.need(t % 2 == 0, "ii", "2 | t");
            c.need(l % 12 == 0 && l >= 24, "iii", "12 | l and l ≥ 24");
        }
        (MapType::T3464, Variant::M34) => {
            c.need(t >= 2, "1", "t ≥ 2");
            c.need(l >= 9 && (l - 3) % 6 == 0, "1", "6 | (l−3) and l ≥ 9");
        }
        (MapType::T3464, _) => {
            c.need(t >= 2, "2", "t ≥ 2");
            c.need(l % 6 == 0 && l >= 12, "2", "6 | l and l ≥ 12");
        }
        _ => unreachable!("variant list checked by caller"),
    }
}

/// Vertex count given by the stated formula, when it is a whole number.
pub fn stated_vertex_count(ty: MapType, p: RepParams) -> Option<usize> {
    match p {
        RepParams::Planar { r, s, .. } => match ty {
            MapType::T3636 | MapType::T3122 => (r * s % 2 == 0).then(|| 3 * r * s / 2),
            MapType::T63 => Some(2 * r * s),
            _ => Some(r * s),
        },
        RepParams::Mobius { variant, l, t } => match (ty, variant) {
            (MapType::T3636 | MapType::T3122, Variant::M36 | Variant::M312) => {
                (l % 2 == 0).then(|| 3 * t * l / 2 + l / 2).filter(|_| (t * l) % 2 == 0)
            }
            (MapType::T3636 | MapType::T3122, Variant::Plain) => Some(l * (t + 2)),
            (MapType::T3636 | MapType::T3122, _) => (l % 4 == 0).then(|| l * t + 5 * l / 4),
            (MapType::T63, _) => Some(2 * t * l),
            _ => Some(t * l),
        },
    }
}

/// Vertex count of the map this module builds for p, when p is buildable in
/// shape (row length a multiple of the strip period).
pub fn vertex_count(ty: MapType, p: RepParams) -> Option<usize> {
    let base = if ty == MapType::T63 { MapType::T36 } else { ty };
    let per = period(base);
    let mids = |len: usize| mids_per_strip(base, len);
    let count = match p {
        RepParams::Planar { r, s, .. } => {
            if r % per != 0 {
                return None;
            }
            r * s + s * mids(r)
        }
        RepParams::Mobius { variant, l, t } => {
            if l % per != 0 || t == 0 {
                return None;
            }
            let (bottom, top) = caps(base, variant, l)?;
            let cap = |c: Cap| match c {
                Cap::Fold(_) => mids(l) / 2,
                Cap::Core(_) => l / 2 + mids(l),
            };
            t * l + (t - 1) * mids(l) + cap(bottom) + cap(top)
        }
    };
    Some(if ty == MapType::T63 { 2 * count } else { count })
}

/// Canonical twist label: 0 when k or k + r is even, else 1.
pub fn reduce_k(ty: MapType, r: usize, s: usize, k: usize) -> Result<usize, RepError> {
    let v = admissible(ty, RepParams::Planar { r, s, k });
    if !v.admissible {
        return Err(RepError::Inadmissible(v));
    }
    Ok(if k % 2 == 0 || (k + r) % 2 == 0 { 0 } else { 1 })
}

/// One parameter tuple per expected isomorphism class with n vertices.
///
/// Planar tuples keep, for each (r, s) and each reduced twist class, the
/// smallest admissible k in that class. Möbius tuples are determined by
/// (variant, l) at fixed n.
pub fn canonical_reps(ty: MapType, n: usize) -> Vec<RepParams> {
    let mut out = Vec::new();
    for p in all_admissible(ty, n) {
        match p {
            RepParams::Planar { r, s, k } => {
                let class = reduce_k(ty, r, s, k).expect("admissible");
                let seen = out.iter().any(|q| match *q {
                    RepParams::Planar { r: r2, s: s2, k: k2 } => {
                        r2 == r && s2 == s && reduce_k(ty, r, s, k2).ok() == Some(class)
                    }
                    _ => false,
                });
                if !seen {
                    out.push(p);
                }
            }
            RepParams::Mobius { .. } => out.push(p),
        }
    }
    out
}

/// Every admissible tuple (all k) whose built map has n vertices.
pub fn all_admissible(ty: MapType, n: usize) -> Vec<RepParams> {
    let mut out = Vec::new();
    if ty == MapType::T346 || n == 0 {
        return out;
    }
    for r in 1..=n {
        for s in 1..=n {
            if r * s > 2 * n {
                break;
            }
            for k in 0..r {
                let p = RepParams::Planar { r, s, k };
                if vertex_count(ty, p) == Some(n) && admissible(ty, p).admissible {
                    out.push(p);
                }
            }
        }
    }
    for &variant in Variant::allowed(ty) {
        for l in 1..=n {
            for t in 1..=n {
                let p = RepParams::Mobius { variant, l, t };
                match vertex_count(ty, p) {
                    Some(m) if m == n => {
                        if admissible(ty, p).admissible {
                            out.push(p);
                        }
                    }
                    Some(m) if m > n => break,
                    _ => {}
                }
            }
        }
    }
    out
}

/// A constructed map together with what the constructor knows about it.
#[derive(Debug, Clone)]
pub struct Built {
    pub map: PolygonalMap,
    pub map_type: MapType,
    pub params: RepParams,
    /// The boundary-parallel rows in order.
    pub rows: Vec<Vec<Vertex>>,
    /// One-sided core cycles of the Möbius caps (empty for planar builds).
    pub cores: Vec<Vec<Vertex>>,
}

pub fn build(ty: MapType, p: RepParams) -> Result<Built, RepError> {
    let v = admissible(ty, p);
    if !v.admissible {
        return Err(RepError::Inadmissible(v));
    }
    build_unchecked(ty, p)
}

pub fn build_planar(ty: MapType, r: usize, s: usize, k: usize) -> Result<PolygonalMap, RepError> {
    build(ty, RepParams::Planar { r, s, k }).map(|b| b.map)
}

pub fn build_mobius(ty: MapType, variant: Variant, l: usize, t: usize) -> Result<PolygonalMap, RepError> {
    build(ty, RepParams::Mobius { variant, l, t }).map(|b| b.map)
}

/// Builds without the admissibility check; the validator is the only judge.
pub fn build_unchecked(ty: MapType, p: RepParams) -> Result<Built, RepError> {
    let fail = |reason: String| RepError::ClosureFailure { params: p, reason };
    if ty == MapType::T346 {
        return Err(fail("no strip stencil exists for {3^4,6}".into()));
    }
    if ty == MapType::T63 {
        let base = build_unchecked(MapType::T36, p)?;
        let d = crate::iso::dual(&base.map).map_err(|e| fail(e.to_string()))?.with_hint(MapType::T63);
        check(&d, ty).map_err(fail)?;
        return Ok(Built { map: d, map_type: ty, params: p, rows: Vec::new(), cores: Vec::new() });
    }
    let raw = match p {
        RepParams::Planar { r, s, k } => planar_faces(ty, r, s, k),
        RepParams::Mobius { variant, l, t } => mobius_faces(ty, variant, l, t),
    }
    .map_err(fail)?;
    let map = PolygonalMap::from_faces(raw.n, raw.faces).map_err(|e| fail(e.to_string()))?.with_hint(ty);
    check(&map, ty).map_err(fail)?;
    let cores = raw
        .caps
        .iter()
        .map(|cap| crate::walkers::one_sided_core(&map, cap))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| fail("no one-sided core found in a cap".into()))?;
    Ok(Built { map, map_type: ty, params: p, rows: raw.rows, cores })
}

fn check(m: &PolygonalMap, ty: MapType) -> Result<(), String> {
    let rep = m.klein_report(ty);
    if rep.ok() {
        Ok(())
    } else {
        Err(format!(
            "result is not a {} map on the Klein bottle (χ = {}, orientable = {}, semi-equivelar = {})",
            ty.symbol(),
            rep.euler,
            rep.orientable,
            rep.semi_equivelar
        ))
    }
}

// ---------------------------------------------------------------------------
// strip stencils

/// Columns per repeat of the row pattern.
fn period(ty: MapType) -> usize {
    match ty {
        MapType::T32434 | MapType::T3636 => 2,
        MapType::T3464 => 3,
        MapType::T488 | MapType::T3122 => 4,
        MapType::T4612 => 6,
        _ => 1,
    }
}

/// Number of distinct strip kinds; strips alternate through them.
fn kinds(ty: MapType) -> usize {
    match ty {
        MapType::T3342 | MapType::T32434 | MapType::T4612 | MapType::T3464 => 2,
        _ => 1,
    }
}

/// Column offset between the top-row origin of the stencils and the column k
/// is measured from. For {4,8^2} the vertical path drifts two columns per
/// strip; for {3,12^2} and {4,6,12} the path starts one column over.
fn origin_shift(ty: MapType, s: usize) -> usize {
    match ty {
        MapType::T488 => 2 * s,
        MapType::T3122 | MapType::T4612 => 1,
        _ => 0,
    }
}

fn mids_per_strip(ty: MapType, r: usize) -> usize {
    match ty {
        MapType::T3636 | MapType::T3122 => r / 2,
        _ => 0,
    }
}

fn strip(ty: MapType, kind: usize, lo: &[Vertex], hi: &[Vertex], mids: &[Vertex]) -> Vec<Vec<Vertex>> {
    let r = lo.len() as isize;
    let a = |i: isize| lo[i.rem_euclid(r) as usize];
    let b = |i: isize| hi[i.rem_euclid(r) as usize];
    let m = |j: isize| mids[j.rem_euclid(mids.len().max(1) as isize) as usize];
    let mut out = Vec::new();
    match (ty, kind) {
        (MapType::T36, _) | (MapType::T3342, 0) => {
            for j in 0..r {
                out.push(vec![a(j), a(j + 1), b(j + 1)]);
                out.push(vec![a(j), b(j + 1), b(j)]);
            }
        }
        (MapType::T44, _) | (MapType::T3342, _) => {
            for j in 0..r {
                out.push(vec![a(j), a(j + 1), b(j + 1), b(j)]);
            }
        }
        (MapType::T32434, _) => {
            // kind 0 splits odd cells along hi[c]-lo[c+1], kind 1 even cells along lo[c]-hi[c+1]
            for c in 0..r {
                let split = (c % 2 == 1) == (kind == 0);
                if !split {
                    out.push(vec![a(c), a(c + 1), b(c + 1), b(c)]);
                } else if kind == 0 {
                    out.push(vec![a(c), a(c + 1), b(c)]);
                    out.push(vec![a(c + 1), b(c + 1), b(c)]);
                } else {
                    out.push(vec![a(c), a(c + 1), b(c + 1)]);
                    out.push(vec![a(c), b(c + 1), b(c)]);
                }
            }
        }
        (MapType::T3636, _) => {
            for j in 0..r / 2 {
                out.push(vec![a(2 * j), a(2 * j + 1), m(j)]);
                out.push(vec![m(j), b(2 * j - 1), b(2 * j)]);
                out.push(vec![a(2 * j + 1), a(2 * j + 2), m(j + 1), b(2 * j + 1), b(2 * j), m(j)]);
            }
        }
        (MapType::T488, _) => {
            for p in 0..r / 4 {
                let q = 4 * p;
                out.push(vec![a(q + 2), a(q + 3), b(q + 1), b(q)]);
                out.push(vec![a(q + 3), a(q + 4), a(q + 5), a(q + 6), b(q + 4), b(q + 3), b(q + 2), b(q + 1)]);
            }
        }
        (MapType::T3122, _) => {
            // mids come in pairs: 2j sits under the lower triangle side, 2j+1 over the upper
            let lo_m = |j: isize| m(2 * j);
            let hi_m = |j: isize| m(2 * j + 1);
            for j in 0..r / 4 {
                let q = 4 * j;
                out.push(vec![a(q + 1), a(q + 2), lo_m(j)]);
                out.push(vec![hi_m(j), b(q - 1), b(q)]);
                out.push(vec![
                    a(q + 2),
                    a(q + 3),
                    a(q + 4),
                    a(q + 5),
                    lo_m(j + 1),
                    hi_m(j + 1),
                    b(q + 3),
                    b(q + 2),
                    b(q + 1),
                    b(q),
                    hi_m(j),
                    lo_m(j),
                ]);
            }
        }
        (MapType::T3464, 0) => {
            for j in 0..r / 3 {
                let q = 3 * j;
                out.push(vec![a(q + 1), b(q + 2), b(q + 3)]);
                out.push(vec![a(q + 2), a(q + 3), b(q + 4)]);
                out.push(vec![a(q), a(q + 1), b(q + 2), b(q + 1)]);
                out.push(vec![a(q + 1), a(q + 2), b(q + 4), b(q + 3)]);
            }
        }
        (MapType::T3464, _) => {
            for j in 0..r / 3 {
                let q = 3 * j;
                out.push(vec![a(q), a(q + 1), a(q + 2), b(q + 2), b(q + 1), b(q)]);
                out.push(vec![a(q + 2), a(q + 3), b(q + 3), b(q + 2)]);
            }
        }
        (MapType::T4612, 0) => {
            for j in 0..r / 6 {
                let q = 6 * j;
                out.push(vec![a(q + 2), a(q + 3), b(q + 7), b(q + 6), b(q + 5), b(q + 4)]);
                out.push(vec![a(q + 4), a(q + 5), a(q + 6), a(q + 7), b(q + 9), b(q + 8)]);
                out.push(vec![a(q + 1), a(q + 2), b(q + 4), b(q + 3)]);
                out.push(vec![a(q + 3), a(q + 4), b(q + 8), b(q + 7)]);
            }
        }
        (MapType::T4612, _) => {
            for j in 0..r / 6 {
                let q = 6 * j;
                let mut g: Vec<Vertex> = (0..6).map(|i| a(q + i)).collect();
                g.extend((0..6).rev().map(|i| b(q + i)));
                out.push(g);
                out.push(vec![a(q + 5), a(q + 6), b(q + 6), b(q + 5)]);
            }
        }
        (MapType::T63 | MapType::T346, _) => unreachable!("no stencil"),
    }
    out
}

// ---------------------------------------------------------------------------
// assembly

struct Raw {
    n: usize,
    faces: Vec<Vec<Vertex>>,
    rows: Vec<Vec<Vertex>>,
    /// Vertex sets of the Möbius caps, for locating their cores.
    caps: Vec<Vec<Vertex>>,
}

#[derive(Default)]
struct Alloc {
    next: usize,
}

impl Alloc {
    fn take(&mut self, k: usize) -> Vec<Vertex> {
        let out = (self.next..self.next + k).collect();
        self.next += k;
        out
    }
}

fn planar_faces(ty: MapType, r: usize, s: usize, k: usize) -> Result<Raw, String> {
    if r == 0 || s == 0 || r % period(ty) != 0 {
        return Err(format!("row length {r} is not a positive multiple of the strip period {}", period(ty)));
    }
    let mut alloc = Alloc::default();
    let mut rows = Vec::with_capacity(s);
    let mut mids = Vec::with_capacity(s);
    for _ in 0..s {
        rows.push(alloc.take(r));
        mids.push(alloc.take(mids_per_strip(ty, r)));
    }
    // row s is row 0 read backwards from the column where the vertical path lands
    let land = (k + origin_shift(ty, s)) % r;
    let top: Vec<Vertex> = (0..r).map(|c| rows[0][(land + r - c % r) % r]).collect();
    let mut faces = Vec::new();
    for y in 0..s {
        let hi = if y + 1 < s { &rows[y + 1] } else { &top };
        faces.extend(strip(ty, y % kinds(ty), &rows[y], hi, &mids[y]));
    }
    Ok(Raw { n: alloc.next, faces, rows, caps: Vec::new() })
}

#[derive(Clone, Copy, Debug)]
enum Cap {
    /// The strip of this kind folded onto itself by a glide.
    Fold(usize),
    /// A strip of this kind between a core row of half length and the boundary.
    Core(usize),
}

impl Cap {
    fn kind(self) -> usize {
        match self {
            Cap::Fold(k) | Cap::Core(k) => k,
        }
    }
}

/// (bottom, top) caps for a closure variant.
fn caps(ty: MapType, v: Variant, l: usize) -> Option<(Cap, Cap)> {
    Some(match (ty, v) {
        (MapType::T36, Variant::Plain) => (Cap::Fold(0), Cap::Fold(0)),
        (MapType::T3342, Variant::Plain) => {
            let k = if l % 2 == 1 { 0 } else { 1 };
            (Cap::Fold(k), Cap::Fold(k))
        }
        (MapType::T3636, Variant::M36) | (MapType::T3122, Variant::M312) => (Cap::Fold(0), Cap::Fold(0)),
        (MapType::T3636 | MapType::T3122, Variant::Plain) => (Cap::Core(0), Cap::Core(0)),
        (MapType::T3636 | MapType::T3122, Variant::Mixed) => (Cap::Fold(0), Cap::Core(0)),
        (MapType::T4612, Variant::Plain) => (Cap::Fold(1), Cap::Fold(1)),
        (MapType::T3464, Variant::M34) => (Cap::Fold(0), Cap::Fold(0)),
        (MapType::T3464, Variant::M46) => (Cap::Fold(1), Cap::Fold(1)),
        _ => return None,
    })
}

fn mobius_faces(ty: MapType, v: Variant, l: usize, t: usize) -> Result<Raw, String> {
    let (bottom, top) = caps(ty, v, l).ok_or_else(|| format!("{} has no {v} closure", ty.symbol()))?;
    if l == 0 || t == 0 || l % period(ty) != 0 {
        return Err(format!("cycle length {l} is not a positive multiple of the strip period {}", period(ty)));
    }
    let nk = kinds(ty);
    let mut alloc = Alloc::default();
    let mut rows = Vec::with_capacity(t);
    let mut faces = Vec::new();
    for y in 0..t {
        rows.push(alloc.take(l));
        if y > 0 {
            let mids = alloc.take(mids_per_strip(ty, l));
            let kind = (bottom.kind() + y) % nk;
            faces.extend(strip(ty, kind, &rows[y - 1], &rows[y], &mids));
        }
    }
    let mut uf_pairs = Vec::new();
    let mut cap_sets = Vec::new();
    for (cap, below) in [(bottom, true), (top, false)] {
        let edge = if below { &rows[0] } else { &rows[t - 1] };
        let before = alloc.next;
        let (cap_faces, pairs) = match cap {
            Cap::Fold(kind) => fold_cap(ty, kind, edge, below, &mut alloc)?,
            Cap::Core(kind) => (core_cap(ty, kind, edge, below, &mut alloc), Vec::new()),
        };
        let mut set: Vec<Vertex> = edge.clone();
        set.extend(before..alloc.next);
        cap_sets.push(set);
        faces.extend(cap_faces);
        uf_pairs.extend(pairs);
    }
    // merge glide-identified vertices and renumber densely
    let mut uf = UnionFind::new(alloc.next);
    for (a, b) in uf_pairs {
        uf.union(a, b);
    }
    let mut label = vec![usize::MAX; alloc.next];
    let mut n = 0;
    for v in 0..alloc.next {
        let root = uf.find(v);
        if label[root] == usize::MAX {
            label[root] = n;
            n += 1;
        }
        label[v] = label[root];
    }
    let relabel = |f: &[Vertex]| f.iter().map(|&x| label[x]).collect::<Vec<_>>();
    let mut seen = std::collections::HashSet::new();
    let faces: Vec<Vec<Vertex>> = faces
        .iter()
        .map(|f| relabel(f))
        .filter(|f| seen.insert(canonical_cycle(f)))
        .collect();
    let rows = rows.iter().map(|r| relabel(r)).collect();
    let caps = cap_sets
        .iter()
        .map(|s| {
            let mut v = relabel(s);
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    Ok(Raw { n, faces, rows, caps })
}

fn shifted(row: &[Vertex], by: usize) -> Vec<Vertex> {
    let l = row.len();
    (0..l).map(|i| row[(i + by) % l]).collect()
}

/// Folds the strip of `kind` next to `edge` by the first glide shift under
/// which its faces pair up exactly. Returns the faces and the identified
/// interior vertex pairs.
#[allow(clippy::type_complexity)]
fn fold_cap(
    ty: MapType,
    kind: usize,
    edge: &[Vertex],
    below: bool,
    alloc: &mut Alloc,
) -> Result<(Vec<Vec<Vertex>>, Vec<(Vertex, Vertex)>), String> {
    let l = edge.len();
    let mids = alloc.take(mids_per_strip(ty, l));
    for sigma in 1..l {
        let other = shifted(edge, sigma);
        let faces = if below {
            strip(ty, kind, &other, edge, &mids)
        } else {
            strip(ty, kind, edge, &other, &mids)
        };
        if let Some(pairs) = pair_faces(&faces, &mids) {
            if folded_edges_ok(&faces, &pairs, edge) {
                return Ok((faces, pairs));
            }
        }
    }
    Err(format!("no glide shift folds the cap strip on a cycle of length {l}"))
}

/// Matches the faces two by two, up to the interior vertices; fails unless
/// every face has exactly one partner and every interior vertex exactly one
/// twin, with no face meeting a vertex twice after the identification.
fn pair_faces(faces: &[Vec<Vertex>], mids: &[Vertex]) -> Option<Vec<(Vertex, Vertex)>> {
    const MARK: Vertex = usize::MAX;
    let is_mid = |v: Vertex| mids.binary_search(&v).is_ok();
    let mut groups: HashMap<Vec<Vertex>, Vec<usize>> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        let masked: Vec<Vertex> = f.iter().map(|&v| if is_mid(v) { MARK } else { v }).collect();
        groups.entry(canonical_cycle(&masked)).or_default().push(i);
    }
    let mut twin: HashMap<Vertex, Vertex> = HashMap::new();
    let mut pairs = Vec::new();
    for idx in groups.values() {
        if idx.len() != 2 {
            return None;
        }
        let (f, g) = (&faces[idx[0]], &faces[idx[1]]);
        let aligned = align(f, g, &is_mid)?;
        for (&x, &y) in f.iter().zip(&aligned) {
            if is_mid(x) {
                if x == y {
                    return None;
                }
                for (p, q) in [(x, y), (y, x)] {
                    match twin.insert(p, q) {
                        Some(old) if old != q => return None,
                        _ => {}
                    }
                }
                pairs.push((x, y));
            }
        }
    }
    if twin.len() != mids.len() {
        return None;
    }
    // after identification no face may repeat a vertex
    let root = |v: Vertex| twin.get(&v).map_or(v, |&w| v.min(w));
    for f in faces {
        let mut vs: Vec<Vertex> = f.iter().map(|&v| root(v)).collect();
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
    }
    Some(pairs)
}

/// After the identification, the boundary row must carry one cap face side
/// per edge and every other cap edge two.
fn folded_edges_ok(faces: &[Vec<Vertex>], pairs: &[(Vertex, Vertex)], edge: &[Vertex]) -> bool {
    let root: HashMap<Vertex, Vertex> = pairs.iter().flat_map(|&(a, b)| [(a, a.min(b)), (b, a.min(b))]).collect();
    let r = |v: Vertex| root.get(&v).copied().unwrap_or(v);
    let mut seen = std::collections::HashSet::new();
    let mut sides: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for f in faces {
        let g: Vec<Vertex> = f.iter().map(|&v| r(v)).collect();
        if !seen.insert(canonical_cycle(&g)) {
            continue;
        }
        for i in 0..g.len() {
            let (a, b) = (g[i], g[(i + 1) % g.len()]);
            *sides.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let l = edge.len();
    let row: std::collections::HashSet<(Vertex, Vertex)> =
        (0..l).map(|i| (edge[i].min(edge[(i + 1) % l]), edge[i].max(edge[(i + 1) % l]))).collect();
    sides.iter().all(|(e, &k)| k == if row.contains(e) { 1 } else { 2 }) && row.iter().all(|e| sides.contains_key(e))
}

/// g rotated or reflected so that it agrees with f outside interior vertices.
fn align(f: &[Vertex], g: &[Vertex], is_mid: &impl Fn(Vertex) -> bool) -> Option<Vec<Vertex>> {
    let k = g.len();
    let mut rev = g.to_vec();
    rev.reverse();
    for base in [g.to_vec(), rev] {
        for s in 0..k {
            let cand: Vec<Vertex> = (0..k).map(|i| base[(i + s) % k]).collect();
            let ok = f.iter().zip(&cand).all(|(&x, &y)| match (is_mid(x), is_mid(y)) {
                (true, true) => true,
                (false, false) => x == y,
                _ => false,
            });
            if ok {
                return Some(cand);
            }
        }
    }
    None
}

fn core_cap(ty: MapType, kind: usize, edge: &[Vertex], below: bool, alloc: &mut Alloc) -> Vec<Vec<Vertex>> {
    let l = edge.len();
    let core = alloc.take(l / 2);
    let mids = alloc.take(mids_per_strip(ty, l));
    let doubled: Vec<Vertex> = (0..l).map(|i| core[i % core.len().max(1)]).collect();
    if below {
        strip(ty, kind, &doubled, edge, &mids)
    } else {
        strip(ty, kind, edge, &doubled, &mids)
    }
}

/// Attempts a {3^4,6} closure: the K(r,s,k) triangulation with every vertex
/// (c + step*y + offset) ≡ 0 (mod 7) of the fundamental rectangle replaced by a
/// hexagon. `step` is 2 or 4, the two chiral choices.
pub fn snub_closure_attempt(r: usize, s: usize, k: usize, step: usize, offset: usize) -> Result<PolygonalMap, MapError> {
    let id = |y: usize, c: usize| y * r + c % r;
    // neighbor of (y, c) in the K(r,s,k) triangulation, rows wrapping with the twist
    let at = |y: isize, c: isize| -> Vertex {
        let (ri, si) = (r as isize, s as isize);
        if y < 0 {
            // row -1 is row s-1 seen from below row 0: (s, c) ~ (0, k-c), so (-1, c) ~ (s-1, k-c)
            id((si - 1) as usize, (k as isize - c).rem_euclid(ri) as usize)
        } else if y >= si {
            id(0, (k as isize - c).rem_euclid(ri) as usize)
        } else {
            id(y as usize, c.rem_euclid(ri) as usize)
        }
    };
    let removed = |y: usize, c: usize| (c + step * y + offset) % 7 == 0;
    let mut faces = Vec::new();
    let mut gone = vec![false; r * s];
    for y in 0..s {
        for c in 0..r {
            gone[id(y, c)] = removed(y, c);
        }
    }
    for y in 0..s as isize {
        for c in 0..r as isize {
            let tris = [
                [at(y, c), at(y, c + 1), at(y + 1, c + 1)],
                [at(y, c), at(y + 1, c + 1), at(y + 1, c)],
            ];
            for t in tris {
                if t.iter().all(|&v| !gone[v]) {
                    faces.push(t.to_vec());
                }
            }
            if gone[at(y, c)] {
                let ring = [(0, 1), (1, 1), (1, 0), (0, -1), (-1, -1), (-1, 0)];
                faces.push(ring.iter().map(|&(dy, dc)| at(y + dy, c + dc)).collect());
            }
        }
    }
    // renumber the surviving vertices
    let mut label = vec![usize::MAX; r * s];
    let mut n = 0;
    for v in 0..r * s {
        if !gone[v] {
            label[v] = n;
            n += 1;
        }
    }
    let mut out = Vec::with_capacity(faces.len());
    for f in faces {
        if f.iter().any(|&v| gone[v]) {
            return Err(MapError::Degenerate("two hexagon centres are adjacent".into()));
        }
        out.push(f.iter().map(|&v| label[v]).collect());
    }
    PolygonalMap::from_faces(n, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_round_trip() {
        for p in [
            RepParams::Planar { r: 7, s: 4, k: 1 },
            RepParams::Mobius { variant: Variant::M34, l: 9, t: 3 },
        ] {
            assert_eq!(p.to_string().parse::<RepParams>().unwrap(), p);
        }
        let json = serde_json::to_string(&RepParams::Planar { r: 3, s: 3, k: 0 }).unwrap();
        assert_eq!(json, r#"{"kind":"planar","r":3,"s":3,"k":0}"#);
    }

    #[test]
    fn stated_count_examples() {
        assert!(admissible(MapType::T36, RepParams::Planar { r: 3, s: 3, k: 0 }).admissible);
        let v = admissible(MapType::T36, RepParams::Planar { r: 2, s: 5, k: 0 });
        assert!(!v.admissible);
        assert!(v.violated.iter().any(|x| x.message == "r ≥ 3"));
        assert!(admissible(MapType::T36, RepParams::Mobius { variant: Variant::Plain, l: 5, t: 2 }).admissible);
        assert!(!admissible(MapType::T346, RepParams::Planar { r: 7, s: 7, k: 0 }).admissible);
    }

    #[test]
    fn reduce_k_examples() {
        assert_eq!(reduce_k(MapType::T36, 7, 4, 5).unwrap(), 0);
        assert_eq!(reduce_k(MapType::T36, 6, 4, 3).unwrap(), 1);
        assert_eq!(reduce_k(MapType::T44, 6, 4, 2).unwrap(), 0);
    }

    #[test]
    fn small_builds() {
        let m = build_planar(MapType::T36, 3, 3, 0).unwrap();
        assert_eq!((m.n_vertices(), m.n_edges(), m.n_faces()), (9, 27, 18));
        let m = build_planar(MapType::T36, 7, 4, 1).unwrap();
        assert_eq!(m.n_vertices(), 28);
        let m = build_mobius(MapType::T36, Variant::Plain, 5, 2).unwrap();
        assert_eq!(m.n_vertices(), 10);
    }

    #[test]
    fn canonical_reps_examples() {
        assert!(canonical_reps(MapType::T346, 30).is_empty());
        assert!(canonical_reps(MapType::T36, 8).is_empty());
        assert_eq!(canonical_reps(MapType::T36, 12).len(), 3);
    }
}
