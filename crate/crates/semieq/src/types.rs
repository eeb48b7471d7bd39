use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The eleven vertex types of semi-equivelar maps on the Klein bottle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MapType {
    T36,
    T44,
    T63,
    T3342,
    T32434,
    T3636,
    T346,
    T488,
    T3122,
    T4612,
    T3464,
}

impl MapType {
    pub const ALL: [MapType; 11] = [
        MapType::T36,
        MapType::T44,
        MapType::T63,
        MapType::T3342,
        MapType::T32434,
        MapType::T3636,
        MapType::T346,
        MapType::T488,
        MapType::T3122,
        MapType::T4612,
        MapType::T3464,
    ];

    /// Cyclic face sequence around every vertex.
    pub fn signature(self) -> &'static [usize] {
        match self {
            MapType::T36 => &[3, 3, 3, 3, 3, 3],
            MapType::T44 => &[4, 4, 4, 4],
            MapType::T63 => &[6, 6, 6],
            MapType::T3342 => &[3, 3, 3, 4, 4],
            MapType::T32434 => &[3, 3, 4, 3, 4],
            MapType::T3636 => &[3, 6, 3, 6],
            MapType::T346 => &[3, 3, 3, 3, 6],
            MapType::T488 => &[4, 8, 8],
            MapType::T3122 => &[3, 12, 12],
            MapType::T4612 => &[4, 6, 12],
            MapType::T3464 => &[3, 4, 6, 4],
        }
    }

    /// Dotted CLI name, e.g. `3.3.4.4` for three triangles and two squares.
    pub fn name(self) -> &'static str {
        match self {
            MapType::T36 => "3.6",
            MapType::T44 => "4.4",
            MapType::T63 => "6.3",
            MapType::T3342 => "3.3.4.4",
            MapType::T32434 => "3.3.4.3.4",
            MapType::T3636 => "3.6.3.6",
            MapType::T346 => "3.4.6",
            MapType::T488 => "4.8.8",
            MapType::T3122 => "3.12.12",
            MapType::T4612 => "4.6.12",
            MapType::T3464 => "3.4.6.4",
        }
    }

    /// Exponent notation, e.g. `{3^3,4^2}`.
    pub fn symbol(self) -> &'static str {
        match self {
            MapType::T36 => "{3^6}",
            MapType::T44 => "{4^4}",
            MapType::T63 => "{6^3}",
            MapType::T3342 => "{3^3,4^2}",
            MapType::T32434 => "{3^2,4,3,4}",
            MapType::T3636 => "{3,6,3,6}",
            MapType::T346 => "{3^4,6}",
            MapType::T488 => "{4,8^2}",
            MapType::T3122 => "{3,12^2}",
            MapType::T4612 => "{4,6,12}",
            MapType::T3464 => "{3,4,6,4}",
        }
    }

    /// Vertex degree.
    pub fn degree(self) -> usize {
        self.signature().len()
    }

    pub fn from_sequence(seq: &[usize]) -> Option<MapType> {
        let want = canonical_cycle(seq);
        MapType::ALL
            .into_iter()
            .find(|t| canonical_cycle(t.signature()) == want)
    }
}

impl fmt::Display for MapType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown map type `{0}`")]
pub struct UnknownType(pub String);

impl FromStr for MapType {
    type Err = UnknownType;

    /// Accepts the dotted names, exponent forms such as `3^4.6` or `3-4.6`,
    /// and fully expanded sequences such as `3.3.3.3.6`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}');
        if let Some(found) = MapType::ALL.into_iter().find(|m| m.name() == t) {
            return Ok(found);
        }
        let mut seq = Vec::new();
        for tok in t.split(['.', ',']) {
            let (base, exp) = match tok.split_once(['^', '-']) {
                Some((b, e)) => (b, e),
                None => (tok, "1"),
            };
            let base: usize = base.parse().map_err(|_| UnknownType(s.to_string()))?;
            let exp: usize = exp.parse().map_err(|_| UnknownType(s.to_string()))?;
            seq.extend(std::iter::repeat_n(base, exp));
        }
        MapType::from_sequence(&seq).ok_or_else(|| UnknownType(s.to_string()))
    }
}

/// Smallest rotation or reflection of a cyclic sequence.
pub fn canonical_cycle<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    let n = seq.len();
    let mut best: Option<Vec<T>> = None;
    let mut rev: Vec<T> = seq.to_vec();
    rev.reverse();
    for base in [seq.to_vec(), rev] {
        for i in 0..n {
            let cand: Vec<T> = base[i..].iter().chain(&base[..i]).cloned().collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for t in MapType::ALL {
            assert_eq!(t.name().parse::<MapType>().unwrap(), t);
            assert_eq!(t.symbol().parse::<MapType>().unwrap(), t);
        }
    }

    #[test]
    fn aliases() {
        assert_eq!("3-4.6".parse::<MapType>().unwrap(), MapType::T346);
        assert_eq!("3.3.3.3.6".parse::<MapType>().unwrap(), MapType::T346);
        assert_eq!("4.3.4.3.3".parse::<MapType>().unwrap(), MapType::T32434);
        assert_eq!("3^3.4^2".parse::<MapType>().unwrap(), MapType::T3342);
        assert!("5.5.5".parse::<MapType>().is_err());
    }

    #[test]
    fn canonical_cycle_handles_reflection() {
        assert_eq!(canonical_cycle(&[4, 3, 3, 4, 3]), vec![3, 3, 4, 3, 4]);
        assert_eq!(canonical_cycle(&[12, 3, 12]), vec![3, 12, 12]);
        assert_eq!(canonical_cycle(&[6, 4, 12]), vec![4, 6, 12]);
    }
}
