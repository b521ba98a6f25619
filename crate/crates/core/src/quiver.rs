//! Finite quivers and their paths.
//!
//! Paths compose left to right: `p.compose(q)` is "first `p`, then `q`" and
//! exists only when the target of `p` is the source of `q`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An arrow handle. It carries its endpoints so that paths are self-describing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowId {
    index: u32,
    source: u32,
    target: u32,
}

impl ArrowId {
    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn source(self) -> VertexId {
        VertexId(self.source)
    }

    pub fn target(self) -> VertexId {
        VertexId(self.target)
    }

    pub fn is_loop(self) -> bool {
        self.source == self.target
    }

    /// The same arrow in the opposite quiver.
    pub fn reversed(self) -> ArrowId {
        ArrowId {
            index: self.index,
            source: self.target,
            target: self.source,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertex_names: Vec<String>,
    arrow_names: Vec<String>,
    arrows: Vec<ArrowId>,
    vertex_lookup: HashMap<String, VertexId>,
    arrow_lookup: HashMap<String, ArrowId>,
}

impl Quiver {
    /// Builds a quiver from vertex names and `(arrow, source, target)` triples.
    pub fn new<V, A>(vertices: V, arrows: A) -> Result<Quiver>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let vertex_names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertex_names.is_empty() {
            return Err(Error::InvalidArgument("a quiver needs at least one vertex".into()));
        }
        let mut vertex_lookup = HashMap::new();
        for (i, name) in vertex_names.iter().enumerate() {
            if vertex_lookup.insert(name.clone(), VertexId(i as u32)).is_some() {
                return Err(Error::Semantic {
                    token: name.clone(),
                    message: "duplicate vertex".into(),
                });
            }
        }
        let mut arrow_names = Vec::new();
        let mut handles = Vec::new();
        let mut arrow_lookup = HashMap::new();
        for (name, s, t) in arrows {
            let lookup = |v: &str| {
                vertex_lookup.get(v).copied().ok_or_else(|| Error::Semantic {
                    token: v.to_string(),
                    message: format!("unknown endpoint of arrow {name}"),
                })
            };
            let (s, t) = (lookup(&s)?, lookup(&t)?);
            if name.strip_prefix("e_").is_some_and(|v| vertex_lookup.contains_key(v)) {
                return Err(Error::Semantic {
                    token: name,
                    message: "arrow name clashes with an idempotent".into(),
                });
            }
            let handle = ArrowId {
                index: handles.len() as u32,
                source: s.0,
                target: t.0,
            };
            if arrow_lookup.insert(name.clone(), handle).is_some() {
                return Err(Error::Semantic {
                    token: name,
                    message: "duplicate arrow".into(),
                });
            }
            arrow_names.push(name);
            handles.push(handle);
        }
        Ok(Quiver {
            vertex_names,
            arrow_names,
            arrows: handles,
            vertex_lookup,
            arrow_lookup,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn arrow_at(&self, index: usize) -> ArrowId {
        self.arrows[index]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrow_names[a.index()]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_lookup.get(name).copied()
    }

    pub fn arrow(&self, name: &str) -> Option<ArrowId> {
        self.arrow_lookup.get(name).copied()
    }

    pub fn arrows_from(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows.iter().copied().filter(move |a| a.source() == v)
    }

    pub fn arrows_into(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows.iter().copied().filter(move |a| a.target() == v)
    }

    /// Same vertices and arrow names, every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        let mut q = self.clone();
        q.arrows = self.arrows.iter().map(|a| a.reversed()).collect();
        q.arrow_lookup = q.arrow_names.iter().cloned().zip(q.arrows.iter().copied()).collect();
        q
    }

    /// Drops one arrow; returns the smaller quiver and the old-to-new arrow map.
    pub fn without_arrow(&self, removed: ArrowId) -> (Quiver, Vec<Option<ArrowId>>) {
        let kept: Vec<(String, String, String)> = self
            .arrows
            .iter()
            .filter(|a| **a != removed)
            .map(|a| {
                (
                    self.arrow_name(*a).to_string(),
                    self.vertex_name(a.source()).to_string(),
                    self.vertex_name(a.target()).to_string(),
                )
            })
            .collect();
        let q = Quiver::new(self.vertex_names.clone(), kept).expect("subquiver of a valid quiver");
        let map = self
            .arrows
            .iter()
            .map(|a| {
                if *a == removed {
                    None
                } else {
                    q.arrow(self.arrow_name(*a))
                }
            })
            .collect();
        (q, map)
    }

    /// Parses `a*b*c` (or `e_<vertex>`) into a path.
    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix("e_") {
            if let Some(v) = self.vertex(v) {
                return Ok(Path::trivial(v));
            }
        }
        let mut arrows = Vec::new();
        for name in text.split('*') {
            let name = name.trim();
            let a = self.arrow(name).ok_or_else(|| Error::Semantic {
                token: name.to_string(),
                message: "unknown arrow".into(),
            })?;
            arrows.push(a);
        }
        Path::from_arrows(arrows).ok_or_else(|| Error::Semantic {
            token: text.to_string(),
            message: "arrows do not compose".into(),
        })
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.is_trivial() {
            return format!("e_{}", self.vertex_name(p.source()));
        }
        let names: Vec<&str> = p.arrows().iter().map(|a| self.arrow_name(*a)).collect();
        names.join("*")
    }

    /// Every path of length at most `max_len`, shortest first.
    pub fn paths_up_to(&self, max_len: usize) -> Vec<Path> {
        let mut out: Vec<Path> = self.vertices().map(Path::trivial).collect();
        let mut frontier = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for a in self.arrows_from(p.target()) {
                    next.push(p.compose(&Path::from_arrow(a)).expect("composable"));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

/// A path in a quiver. The empty arrow list is the trivial path at `source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    source: VertexId,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Path {
        Path {
            source: v,
            arrows: Vec::new(),
        }
    }

    pub fn from_arrow(a: ArrowId) -> Path {
        Path {
            source: a.source(),
            arrows: vec![a],
        }
    }

    /// `None` when the list is empty or consecutive arrows do not compose.
    pub fn from_arrows(arrows: Vec<ArrowId>) -> Option<Path> {
        let first = arrows.first()?;
        if arrows.windows(2).any(|w| w[0].target() != w[1].source()) {
            return None;
        }
        Some(Path {
            source: first.source(),
            arrows,
        })
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.arrows.last().map_or(self.source, |a| a.target())
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn contains_arrow(&self, a: ArrowId) -> bool {
        self.arrows.contains(&a)
    }

    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.target() != other.source {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.len() + other.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            source: self.source,
            arrows,
        })
    }

    /// Vertex visited after `i` arrows, `0 <= i <= len`.
    pub fn vertex_at(&self, i: usize) -> VertexId {
        if i == 0 {
            self.source
        } else {
            self.arrows[i - 1].target()
        }
    }

    /// The subpath made of arrows `start..end`.
    pub fn subpath(&self, start: usize, end: usize) -> Path {
        debug_assert!(start <= end && end <= self.len());
        Path {
            source: self.vertex_at(start),
            arrows: self.arrows[start..end].to_vec(),
        }
    }

    /// The path in the opposite quiver traversing the same arrows backwards.
    pub fn reversed(&self) -> Path {
        Path {
            source: self.target(),
            arrows: self.arrows.iter().rev().map(|a| a.reversed()).collect(),
        }
    }

    /// Start positions at which `self` occurs inside `v`, left to right.
    pub fn positions_in(&self, v: &Path) -> Vec<usize> {
        if self.is_trivial() {
            return (0..=v.len()).filter(|&i| v.vertex_at(i) == self.source).collect();
        }
        if self.len() > v.len() {
            return Vec::new();
        }
        (0..=v.len() - self.len())
            .filter(|&i| v.arrows[i..i + self.len()] == self.arrows[..])
            .collect()
    }

    pub fn divides(&self, v: &Path) -> bool {
        if self.is_trivial() {
            return (0..=v.len()).any(|i| v.vertex_at(i) == self.source);
        }
        self.len() <= v.len() && v.arrows.windows(self.len()).any(|w| w == &self.arrows[..])
    }

    /// Leftmost factorisation `v = left * self * right`, if any.
    pub fn leftmost_division(&self, v: &Path) -> Option<(Path, Path)> {
        let i = if self.is_trivial() {
            (0..=v.len()).find(|&i| v.vertex_at(i) == self.source)?
        } else if self.len() > v.len() {
            return None;
        } else {
            v.arrows.windows(self.len()).position(|w| w == &self.arrows[..])?
        };
        Some((v.subpath(0, i), v.subpath(i + self.len(), v.len())))
    }
}

/// All factorisations `v = left * u * right`, ordered left to right.
pub fn divides(u: &Path, v: &Path) -> Vec<(Path, Path)> {
    u.positions_in(v)
        .into_iter()
        .map(|i| (v.subpath(0, i), v.subpath(i + u.len(), v.len())))
        .collect()
}

/// All `(u, v)` with `t * v = u * s`, where a non-trivial suffix of `t` is a
/// prefix of `s`, `|u| < |t|`, `|v| < |s|`, and `u`, `v` are not both trivial.
///
/// In words: `s` overlaps with `t` from the left. Ordered by increasing `|u|`.
pub fn overlaps_right(s: &Path, t: &Path) -> Vec<(Path, Path)> {
    let mut out = Vec::new();
    if s.is_trivial() || t.is_trivial() {
        return out;
    }
    let max = s.len().min(t.len());
    for k in (1..=max).rev() {
        if k == s.len() && k == t.len() {
            continue;
        }
        if t.arrows[t.len() - k..] == s.arrows[..k] {
            out.push((t.subpath(0, t.len() - k), s.subpath(k, s.len())));
        }
    }
    out
}

impl Ord for Path {
    fn cmp(&self, other: &Path) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Path) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "e{}", self.source.0);
        }
        let parts: Vec<String> = self.arrows.iter().map(|a| format!("a{}", a.index)).collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_quiver() -> Quiver {
        Quiver::new(["1"], [("l".into(), "1".into(), "1".into())]).unwrap()
    }

    fn chain() -> Quiver {
        let arrows = [("theta", "9", "1"), ("alpha", "1", "2"), ("beta", "2", "3")]
            .map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string()));
        Quiver::new(["1", "2", "3", "9"], arrows).unwrap()
    }

    #[test]
    fn compose_identity_and_mismatch() {
        let q = chain();
        let alpha = q.parse_path("alpha").unwrap();
        let theta = q.parse_path("theta").unwrap();
        let e1 = q.parse_path("e_1").unwrap();
        assert_eq!(e1.compose(&alpha), Some(alpha.clone()));
        let ta = theta.compose(&alpha).unwrap();
        assert_eq!(q.path_name(&ta), "theta*alpha");
        assert_eq!(q.vertex_name(ta.source()), "9");
        assert_eq!(q.vertex_name(ta.target()), "2");
        assert!(alpha.compose(&theta).is_none());
    }

    #[test]
    fn division_positions() {
        let q = loop_quiver();
        let l = q.parse_path("l").unwrap();
        let lll = q.parse_path("l*l*l").unwrap();
        assert_eq!(divides(&l, &lll).len(), 3);
        let p = q.parse_path("l*l").unwrap();
        let d = divides(&p, &p);
        assert_eq!(d, vec![(Path::trivial(VertexId(0)), Path::trivial(VertexId(0)))]);
    }

    #[test]
    fn self_overlap_of_square_loop() {
        let q = loop_quiver();
        let ll = q.parse_path("l*l").unwrap();
        let l = q.parse_path("l").unwrap();
        assert_eq!(overlaps_right(&ll, &ll), vec![(l.clone(), l)]);
    }

    #[test]
    fn prefix_inclusion_counts_as_overlap() {
        let q = chain();
        let alpha = q.parse_path("alpha").unwrap();
        let ab = q.parse_path("alpha*beta").unwrap();
        let beta = q.parse_path("beta").unwrap();
        assert_eq!(overlaps_right(&ab, &alpha), vec![(Path::trivial(alpha.source()), beta)]);
    }

    #[test]
    fn rejects_unknown_endpoint_and_duplicates() {
        let bad = Quiver::new(["1"], [("a".into(), "1".into(), "2".into())]);
        assert!(matches!(bad, Err(Error::Semantic { .. })));
        let dup = Quiver::new(["1", "1"], Vec::new());
        assert!(dup.is_err());
        assert!(Quiver::new(Vec::<String>::new(), Vec::new()).is_err());
    }

    #[test]
    fn reversal_round_trip() {
        let q = chain();
        let p = q.parse_path("theta*alpha*beta").unwrap();
        let r = p.reversed();
        assert_eq!(r.source(), p.target());
        assert_eq!(r.reversed(), p);
    }
}
