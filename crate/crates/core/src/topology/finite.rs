//! Finite topological spaces given by their lattice of open sets.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported number of points; open sets are stored as bitmasks.
pub const MAX_POINTS: usize = 16;

/// A subset of a finite space, as a bitmask over point indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiniteSet(pub u32);

impl FiniteSet {
    pub fn contains(self, x: usize) -> bool {
        x < 32 && self.0 >> x & 1 == 1
    }

    pub fn is_subset(self, other: FiniteSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn points(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    pub fn from_points(points: impl IntoIterator<Item = usize>) -> FiniteSet {
        FiniteSet(points.into_iter().fold(0, |m, p| m | 1 << p))
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points()).finish()
    }
}

impl Serialize for FiniteSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.points())
    }
}

impl<'de> Deserialize<'de> for FiniteSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<FiniteSet, D::Error> {
        let pts = Vec::<usize>::deserialize(deserializer)?;
        if let Some(p) = pts.iter().find(|&&p| p >= MAX_POINTS) {
            return Err(serde::de::Error::custom(format!("point {p} out of range")));
        }
        Ok(FiniteSet::from_points(pts))
    }
}

/// A topology on `{0, .., n-1}`: the full list of open sets, sorted, including
/// the empty set and the whole space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteTopology {
    label: String,
    n: usize,
    opens: Vec<FiniteSet>,
}

impl FiniteTopology {
    /// Builds a topology from a family of open sets, adding the empty set and the
    /// whole space. Fails unless the family is closed under unions and intersections.
    pub fn new(label: impl Into<String>, n: usize, opens: impl IntoIterator<Item = FiniteSet>) -> Result<Self> {
        if n == 0 || n > MAX_POINTS {
            return Err(Error::Parse(format!("finite space needs 1..={MAX_POINTS} points, got {n}")));
        }
        let full = FiniteSet((1u32 << n) - 1);
        let mut all: Vec<FiniteSet> = opens.into_iter().collect();
        if let Some(bad) = all.iter().find(|s| !s.is_subset(full)) {
            return Err(Error::Parse(format!("open set {bad:?} has points outside 0..{n}")));
        }
        all.push(FiniteSet(0));
        all.push(full);
        all.sort();
        all.dedup();
        for a in &all {
            for b in &all {
                if all.binary_search(&FiniteSet(a.0 | b.0)).is_err()
                    || all.binary_search(&FiniteSet(a.0 & b.0)).is_err()
                {
                    return Err(Error::Parse(format!(
                        "family is not a topology: {a:?} and {b:?} are not closed under union/intersection"
                    )));
                }
            }
        }
        Ok(FiniteTopology { label: label.into(), n, opens: all })
    }

    /// Parses a lattice spec: `point`, `sierpinski`, `discrete:<n>`, `indiscrete:<n>`,
    /// or `<n>:<open>;<open>;...` with each open a comma-separated point list.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        match spec {
            "point" => return Self::new(spec, 1, []),
            "sierpinski" => return Self::new(spec, 2, [FiniteSet(0b01)]),
            _ => {}
        }
        let parse_n = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad point count in finite space spec {spec:?}")))
        };
        if let Some(n) = spec.strip_prefix("discrete:") {
            let n = parse_n(n)?;
            if n == 0 || n > 8 {
                return Err(Error::Parse(format!("discrete spaces support 1..=8 points, got {n}")));
            }
            return Self::new(spec, n, (0..1u32 << n).map(FiniteSet));
        }
        if let Some(n) = spec.strip_prefix("indiscrete:") {
            return Self::new(spec, parse_n(n)?, []);
        }
        let (n, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown finite space spec {spec:?}")))?;
        let n = parse_n(n)?;
        let mut opens = Vec::new();
        for part in rest.split(';') {
            let part = part.trim().trim_start_matches('{').trim_end_matches('}');
            let mut set = FiniteSet(0);
            for p in part.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let p = p
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad point {p:?} in {spec:?}")))?;
                if p >= n {
                    return Err(Error::Parse(format!("point {p} out of range in {spec:?}")));
                }
                set.0 |= 1 << p;
            }
            opens.push(set);
        }
        Self::new(spec, n, opens)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> FiniteSet {
        FiniteSet((1u32 << self.n) - 1)
    }

    /// All open sets, including the empty set.
    pub fn opens(&self) -> &[FiniteSet] {
        &self.opens
    }

    pub fn nonempty_opens(&self) -> impl Iterator<Item = FiniteSet> + '_ {
        self.opens.iter().copied().filter(|s| !s.is_empty())
    }

    pub fn is_open(&self, s: FiniteSet) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    /// The smallest open set containing `x`: the intersection of all its open neighborhoods.
    pub fn minimal_open(&self, x: usize) -> FiniteSet {
        self.opens
            .iter()
            .filter(|s| s.contains(x))
            .fold(self.full(), |acc, s| FiniteSet(acc.0 & s.0))
    }

    /// Nonempty open sets contained in `within`.
    pub fn opens_within(&self, within: FiniteSet) -> impl Iterator<Item = FiniteSet> + '_ {
        self.nonempty_opens().filter(move |s| s.is_subset(within))
    }

    /// Largest open subset of `s` (its interior).
    pub fn interior(&self, s: FiniteSet) -> FiniteSet {
        self.opens_within(s).fold(FiniteSet(0), |acc, o| FiniteSet(acc.0 | o.0))
    }

    /// Opens meeting every nonempty open set.
    pub fn dense_opens(&self) -> Vec<FiniteSet> {
        self.nonempty_opens()
            .filter(|d| self.nonempty_opens().all(|u| d.0 & u.0 != 0))
            .collect()
    }

    /// Every topology on `{0, .., n-1}` (labelled numerically); n must be small.
    pub fn all_on(n: usize) -> Vec<FiniteTopology> {
        assert!((1..=4).contains(&n), "exhaustive enumeration only for 1..=4 points");
        let full = (1u32 << n) - 1;
        // candidate opens other than the empty set and the whole space
        let middle: Vec<u32> = (1..full).collect();
        let mut out = Vec::new();
        for choice in 0u64..1 << middle.len() {
            let mut fam = vec![FiniteSet(0), FiniteSet(full)];
            fam.extend(
                middle
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| choice >> i & 1 == 1)
                    .map(|(_, &m)| FiniteSet(m)),
            );
            let closed = fam.iter().all(|a| {
                fam.iter()
                    .all(|b| fam.contains(&FiniteSet(a.0 | b.0)) && fam.contains(&FiniteSet(a.0 & b.0)))
            });
            if closed {
                let spec = fam
                    .iter()
                    .filter(|s| !s.is_empty())
                    .map(|s| s.points().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
                    .collect::<Vec<_>>()
                    .join(";");
                let label = format!("{n}:{spec}");
                out.push(FiniteTopology::new(label, n, fam).expect("closed family"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_counts() {
        // Known counts of labelled topologies on 1, 2, 3 points.
        assert_eq!(FiniteTopology::all_on(1).len(), 1);
        assert_eq!(FiniteTopology::all_on(2).len(), 4);
        assert_eq!(FiniteTopology::all_on(3).len(), 29);
    }

    #[test]
    fn parse_presets_and_explicit() {
        let s = FiniteTopology::parse("sierpinski").unwrap();
        assert_eq!(s.opens(), &[FiniteSet(0), FiniteSet(1), FiniteSet(3)]);
        let e = FiniteTopology::parse("2:0;0,1").unwrap();
        assert_eq!(e.opens(), s.opens());
        assert_eq!(FiniteTopology::parse("discrete:3").unwrap().opens().len(), 8);
        assert_eq!(FiniteTopology::parse("indiscrete:3").unwrap().opens().len(), 2);
        assert!(FiniteTopology::parse("3:0;1").is_err(), "{{0}} ∪ {{1}} missing");
        assert!(FiniteTopology::parse("2:5").is_err());
        assert!(FiniteTopology::parse("nonsense").is_err());
    }

    #[test]
    fn labels_of_enumerated_topologies_reparse() {
        for t in FiniteTopology::all_on(3) {
            let again = FiniteTopology::parse(t.label()).unwrap();
            assert_eq!(again.opens(), t.opens());
        }
    }

    #[test]
    fn minimal_open_is_intersection_of_neighborhoods() {
        for t in FiniteTopology::all_on(3) {
            for x in 0..3 {
                let m = t.minimal_open(x);
                assert!(t.is_open(m) && m.contains(x));
                for u in t.nonempty_opens().filter(|u| u.contains(x)) {
                    assert!(m.is_subset(u));
                }
            }
        }
    }
}
