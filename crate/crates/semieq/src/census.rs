//! Counting formulas, enumeration by construction, and their reconciliation.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::iso::canonical_form;
use crate::map::PolygonalMap;
use crate::reps::{self, RepParams, Variant};
use crate::types::MapType;

pub const DEFAULT_BUDGET: usize = 120;

/// Largest n the enumerator will touch: SEMIEQ_BUDGET if set, else 120.
pub fn budget_from_env() -> usize {
    std::env::var("SEMIEQ_BUDGET").ok().and_then(|s| s.trim().parse().ok()).filter(|&b| b >= 1).unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CensusError {
    #[error("n = {n} is above the enumeration budget {budget}")]
    BudgetExceeded { n: usize, budget: usize },
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn count(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    (1..=n).filter(|&m| pred(m)).count()
}

/// Number of tuples (l, m) with the m-condition and 0 ≤ l ≤ n/div(m) − 1.
fn count_l(n: usize, pred: impl Fn(usize) -> bool, div: impl Fn(usize) -> usize) -> usize {
    (1..=n).filter(|&m| pred(m)).map(|m| n / div(m)).sum()
}

/// The closed-form number of maps of type t on n vertices, clause by clause
/// as the counting formula states it.
pub fn formula_count(t: MapType, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    match t {
        MapType::T36 => {
            let planar: usize = (1..=2).map(|i| i * count(n, |m| m >= 3 && n >= 3 * m && gcd(n, 2 * m) == i * m)).sum();
            planar + count(n, |m| m >= 2 && n % m == 0 && n >= 5 * m && gcd(n, 2 * m) == m)
        }
        MapType::T44 => (1..=2).map(|i| i * count(n, |m| m >= 3 && n >= 3 * m && gcd(n, 2 * m) == i * m)).sum(),
        MapType::T63 => {
            if n % 2 == 0 {
                formula_count(MapType::T36, n / 2)
            } else {
                0
            }
        }
        MapType::T3342 => {
            // the inner set does not depend on i, as written
            let inner = count(n, |m| m >= 4 && m % 2 == 0 && n >= 3 * m && gcd(n, 2 * m) == m);
            let planar: usize = (1..=2).map(|i| i * inner).sum();
            planar + count(n, |m| m >= 5 && n == 2 * m) + count(n, |m| m >= 4 && n >= 4 * m && n % (2 * m) == 0)
        }
        MapType::T32434 => count(n, |m| m >= 3 && m % 2 == 1 && n % (2 * m) == 0 && n >= 12),
        MapType::T488 => {
            let even = count_l(n, |m| m >= 3 && m % 2 == 0 && n >= 8 * m && n % (4 * m) == 0, |m| 4 * m);
            let odd = count_l(n, |m| m >= 3 && m % 2 == 1 && n >= 8 * m && n % (4 * m) == 0, |m| 4 * m);
            even + odd
        }
        MapType::T3636 => {
            count_l(n, |m| m >= 3 && n % (3 * m) == 0 && n >= 9 * m, |m| 3 * m)
                + count(n, |m| m >= 2 && n % (6 * m + 2) == 0 && n >= 6 * (3 * m + 1))
                + count(n, |m| m >= 1 && n % (2 * (m + 2)) == 0 && n >= 10 * (m + 2))
                + count(n, |m| m >= 1 && n % (4 * m + 5) == 0 && n >= 12 * (4 * m + 5))
        }
        MapType::T3122 => {
            count_l(n, |m| m >= 3 && n % (3 * m) == 0 && n >= 9 * m, |m| 6 * m)
                + count(n, |m| m >= 2 && n % (4 * (3 * m + 1)) == 0 && n >= 12 * (3 * m + 1))
                + count(n, |m| m >= 1 && n % (4 * (m + 2)) == 0 && n >= 20 * (m + 2))
                + count(n, |m| m >= 1 && n % (4 * m + 5) == 0 && n >= 24 * (4 * m + 5))
        }
        MapType::T346 => 0,
        MapType::T4612 => {
            count_l(n, |m| m >= 4 && m % 2 == 0 && n % (6 * m) == 0 && n >= 12 * m, |m| 6 * m)
                + count(n, |m| m >= 2 && m % 2 == 0 && n % (12 * m) == 0 && n >= 24 * m)
        }
        MapType::T3464 => {
            count_l(n, |m| m >= 4 && m % 2 == 0 && n % (3 * m) == 0 && n >= 6 * m, |m| 3 * m)
                + count(n, |m| m >= 2 && n >= 9 * m && (n - 3 * m) % (6 * m) == 0)
                + count(n, |m| m >= 2 && n % (6 * m) == 0 && n >= 12 * m)
        }
    }
}

/// One unit of the counting formula, tied to the parameters it stands for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    /// Which term of the formula produced it, e.g. "planar" or "mobius:m36".
    pub term: String,
    pub params: RepParams,
}

/// The k values a planar slot of weight w stands for: the w smallest
/// admissible twists, padded with the next raw k when too few exist.
fn planar_slots(t: MapType, r: usize, s: usize, w: usize, out: &mut Vec<Slot>) {
    let adm: Vec<usize> = (0..r).filter(|&k| reps::admissible(t, RepParams::Planar { r, s, k }).admissible).collect();
    for i in 0..w {
        let k = adm.get(i).copied().unwrap_or(i);
        out.push(Slot { term: "planar".into(), params: RepParams::Planar { r, s, k } });
    }
}

fn mobius_slot(variant: Variant, l: usize, t: usize, out: &mut Vec<Slot>) {
    out.push(Slot { term: format!("mobius:{variant}"), params: RepParams::Mobius { variant, l, t } });
}

/// The formula's units as parameter tuples. There are exactly
/// formula_count(t, n) of them; m is read as the number of rows (or t), and
/// n/m as the row length, with the representation's own vertex count
/// deciding the row length for the kagome-like types.
pub fn formula_slots(ty: MapType, n: usize) -> Vec<Slot> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    match ty {
        MapType::T36 | MapType::T44 => {
            for m in 1..=n {
                for i in 1..=2 {
                    if m >= 3 && n >= 3 * m && gcd(n, 2 * m) == i * m {
                        planar_slots(ty, n / m, m, i, &mut out);
                    }
                }
                if ty == MapType::T36 && m >= 2 && n % m == 0 && n >= 5 * m && gcd(n, 2 * m) == m {
                    mobius_slot(Variant::Plain, n / m, m, &mut out);
                }
            }
        }
        MapType::T63 => {
            if n % 2 == 0 {
                out = formula_slots(MapType::T36, n / 2);
            }
        }
        MapType::T3342 => {
            for m in 1..=n {
                if m >= 4 && m % 2 == 0 && n >= 3 * m && gcd(n, 2 * m) == m {
                    planar_slots(ty, n / m, m, 3, &mut out);
                }
                if m >= 5 && n == 2 * m {
                    mobius_slot(Variant::Plain, m, 2, &mut out);
                }
                if m >= 4 && n >= 4 * m && n % (2 * m) == 0 {
                    mobius_slot(Variant::Plain, m, n / m, &mut out);
                }
            }
        }
        MapType::T32434 => {
            for m in 1..=n {
                if m >= 3 && m % 2 == 1 && n % (2 * m) == 0 && n >= 12 {
                    planar_slots(ty, n / m, m, 1, &mut out);
                }
            }
        }
        MapType::T488 => {
            for m in 1..=n {
                if m >= 3 && n >= 8 * m && n % (4 * m) == 0 {
                    planar_slots(ty, n / m, m, n / (4 * m), &mut out);
                }
            }
        }
        MapType::T3636 | MapType::T3122 => {
            let kagome = ty == MapType::T3636;
            let (fold, div) = if kagome { (Variant::M36, 3) } else { (Variant::M312, 6) };
            for m in 1..=n {
                if m >= 3 && n % (3 * m) == 0 && n >= 9 * m {
                    // n = 3rs/2 with s = m
                    planar_slots(ty, 2 * n / (3 * m), m, n / (div * m), &mut out);
                }
                // n = (3/2)tl + l/2 with t = m
                let folded = if kagome {
                    n % (6 * m + 2) == 0 && n >= 6 * (3 * m + 1)
                } else {
                    n % (4 * (3 * m + 1)) == 0 && n >= 12 * (3 * m + 1)
                };
                if m >= 2 && folded {
                    mobius_slot(fold, 2 * n / (3 * m + 1), m, &mut out);
                }
                // n = l(t + 2)
                let plain = if kagome {
                    n % (2 * (m + 2)) == 0 && n >= 10 * (m + 2)
                } else {
                    n % (4 * (m + 2)) == 0 && n >= 20 * (m + 2)
                };
                if plain {
                    mobius_slot(Variant::Plain, n / (m + 2), m, &mut out);
                }
                // n = l(t + 5/4)
                let bound = if kagome { 12 } else { 24 };
                if n % (4 * m + 5) == 0 && n >= bound * (4 * m + 5) {
                    mobius_slot(Variant::Mixed, 4 * n / (4 * m + 5), m, &mut out);
                }
            }
        }
        MapType::T346 => {}
        MapType::T4612 => {
            for m in 1..=n {
                if m >= 4 && m % 2 == 0 && n % (6 * m) == 0 && n >= 12 * m {
                    planar_slots(ty, n / m, m, n / (6 * m), &mut out);
                }
                if m >= 2 && m % 2 == 0 && n % (12 * m) == 0 && n >= 24 * m {
                    mobius_slot(Variant::Plain, n / m, m, &mut out);
                }
            }
        }
        MapType::T3464 => {
            for m in 1..=n {
                if m >= 4 && m % 2 == 0 && n % (3 * m) == 0 && n >= 6 * m {
                    planar_slots(ty, n / m, m, n / (3 * m), &mut out);
                }
                if m >= 2 && n >= 9 * m && (n - 3 * m) % (6 * m) == 0 {
                    mobius_slot(Variant::M34, n / m, m, &mut out);
                }
                if m >= 2 && n % (6 * m) == 0 && n >= 12 * m {
                    mobius_slot(Variant::M46, n / m, m, &mut out);
                }
            }
        }
    }
    out
}

/// One isomorphism class found by construction.
#[derive(Debug, Clone)]
pub struct ClassRep {
    pub digest: String,
    pub params: RepParams,
    pub map: PolygonalMap,
    /// Every admissible tuple at n that built into this class.
    pub members: Vec<RepParams>,
}

/// Builds every admissible tuple at n and keeps one map per canonical form,
/// in order of first appearance.
pub fn enumerate_classes(t: MapType, n: usize, budget: usize) -> Result<Vec<ClassRep>, CensusError> {
    if n > budget {
        return Err(CensusError::BudgetExceeded { n, budget });
    }
    let tuples = reps::all_admissible(t, n);
    let built: Vec<(RepParams, PolygonalMap, String)> = tuples
        .par_iter()
        .filter_map(|&p| {
            let b = reps::build(t, p).ok()?;
            let d = canonical_form(&b.map).digest();
            Some((p, b.map, d))
        })
        .collect();
    let mut classes: Vec<ClassRep> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for (p, map, digest) in built {
        match index.get(&digest) {
            Some(&i) => classes[i].members.push(p),
            None => {
                index.insert(digest.clone(), classes.len());
                classes.push(ClassRep { digest, params: p, map, members: vec![p] });
            }
        }
    }
    Ok(classes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two formula units that build the same map.
    SharedDigest { a: RepParams, b: RepParams, digest: String },
    /// A constructed class that no formula unit builds.
    Unslotted { digest: String, params: RepParams },
    /// A formula unit whose tuple does not build a map on n vertices.
    Unbuildable { params: RepParams, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub n: usize,
    pub formula: usize,
    pub classes: usize,
    pub verdict: Verdict,
    /// Canonical digest and representative tuple of each constructed class.
    pub class_reps: Vec<(String, RepParams)>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub format: String,
    #[serde(rename = "type")]
    pub map_type: String,
    pub version: String,
    pub entries: Vec<CensusEntry>,
}

/// Compares formula and construction at one n, explaining any difference.
pub fn census_entry(t: MapType, n: usize, budget: usize) -> Result<CensusEntry, CensusError> {
    let classes = enumerate_classes(t, n, budget)?;
    let formula = formula_count(t, n);
    let slots = formula_slots(t, n);
    debug_assert_eq!(slots.len(), formula);
    let mut witnesses = Vec::new();
    let mut slot_digest: BTreeMap<String, RepParams> = BTreeMap::new();
    for s in &slots {
        match reps::build(t, s.params) {
            Ok(b) if b.map.n_vertices() == n => {
                let d = canonical_form(&b.map).digest();
                if let Some(&a) = slot_digest.get(&d) {
                    witnesses.push(Witness::SharedDigest { a, b: s.params, digest: d });
                } else {
                    slot_digest.insert(d, s.params);
                }
            }
            Ok(b) => witnesses.push(Witness::Unbuildable {
                params: s.params,
                reason: format!("builds a map on {} vertices, not {n}", b.map.n_vertices()),
            }),
            Err(e) => witnesses.push(Witness::Unbuildable { params: s.params, reason: e.to_string() }),
        }
    }
    for c in &classes {
        if !slot_digest.contains_key(&c.digest) {
            witnesses.push(Witness::Unslotted { digest: c.digest.clone(), params: c.params });
        }
    }
    let verdict = if formula == classes.len() { Verdict::Match } else { Verdict::Mismatch };
    Ok(CensusEntry {
        n,
        formula,
        classes: classes.len(),
        verdict,
        class_reps: classes.iter().map(|c| (c.digest.clone(), c.params)).collect(),
        witnesses,
    })
}

/// Census over a range of n, one independent job per n.
pub fn concordance(t: MapType, ns: impl IntoIterator<Item = usize>, budget: usize) -> Result<CensusReport, CensusError> {
    let ns: Vec<usize> = ns.into_iter().collect();
    let entries = ns.par_iter().map(|&n| census_entry(t, n, budget)).collect::<Result<Vec<_>, _>>()?;
    Ok(CensusReport {
        format: "semieq-census/1".into(),
        map_type: t.name().into(),
        version: crate::VERSION.into(),
        entries,
    })
}

/// The smallest n ≤ limit at which some admissible tuple or formula unit exists.
pub fn smallest_admissible_n(t: MapType, how_many: usize, limit: usize) -> Vec<usize> {
    (1..=limit)
        .filter(|&n| !reps::all_admissible(t, n).is_empty() || formula_count(t, n) > 0)
        .take(how_many)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        assert_eq!(formula_count(MapType::T346, 30), 0);
        assert_eq!(formula_count(MapType::T36, 8), 0);
        assert_eq!(formula_count(MapType::T36, 12), 3);
        assert_eq!(formula_count(MapType::T63, 24), formula_count(MapType::T36, 12));
    }

    #[test]
    fn slots_match_formula() {
        for t in MapType::ALL {
            for n in 1..=150 {
                assert_eq!(formula_slots(t, n).len(), formula_count(t, n), "{} n={n}", t.symbol());
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(enumerate_classes(MapType::T36, 200, 120).unwrap_err(), CensusError::BudgetExceeded { n: 200, budget: 120 });
        assert!(enumerate_classes(MapType::T346, 42, 120).unwrap().is_empty());
    }

    #[test]
    fn small_census() {
        let e = census_entry(MapType::T36, 12, 120).unwrap();
        assert_eq!(e.formula, 3);
        assert_eq!(e.verdict == Verdict::Match, e.formula == e.classes);
    }
}
