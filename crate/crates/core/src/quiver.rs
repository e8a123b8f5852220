//! Finite quivers (directed multigraphs with labelled arrows).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct RawQuiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

/// A finite quiver. Vertex and arrow ids are opaque strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawQuiver", into = "RawQuiver")]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vindex: HashMap<String, usize>,
    // (source index, target index) per arrow
    ends: Vec<(usize, usize)>,
}

impl TryFrom<RawQuiver> for Quiver {
    type Error = crate::error::Error;
    fn try_from(r: RawQuiver) -> Result<Self> {
        Quiver::new(r.vertices, r.arrows)
    }
}

impl From<Quiver> for RawQuiver {
    fn from(q: Quiver) -> Self {
        RawQuiver { vertices: q.vertices, arrows: q.arrows }
    }
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut vindex = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(validation!("duplicate vertex id {v:?}"));
            }
        }
        let mut seen = BTreeSet::new();
        let mut ends = Vec::with_capacity(arrows.len());
        for a in &arrows {
            if !seen.insert(a.id.clone()) {
                return Err(validation!("duplicate arrow id {:?}", a.id));
            }
            let s = *vindex
                .get(&a.from)
                .ok_or_else(|| validation!("arrow {:?} starts at unknown vertex {:?}", a.id, a.from))?;
            let t = *vindex
                .get(&a.to)
                .ok_or_else(|| validation!("arrow {:?} ends at unknown vertex {:?}", a.id, a.to))?;
            ends.push((s, t));
        }
        Ok(Quiver { vertices, arrows, vindex, ends })
    }

    /// Builds a quiver from `(id, from, to)` triples.
    pub fn from_triples<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        Quiver::new(
            vertices.iter().map(|v| v.as_ref().to_string()).collect(),
            arrows
                .iter()
                .map(|(id, f, t)| Arrow {
                    id: id.as_ref().to_string(),
                    from: f.as_ref().to_string(),
                    to: t.as_ref().to_string(),
                })
                .collect(),
        )
    }

    /// Linear orientation `1 -> 2 -> ... -> n`.
    pub fn linear_a(n: usize) -> Self {
        let vs: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (1..n)
            .map(|i| Arrow { id: format!("a{i}"), from: i.to_string(), to: (i + 1).to_string() })
            .collect();
        Quiver::new(vs, arrows).expect("linear quiver is valid")
    }

    /// `D_n` with branch vertices 1, 2 attached to 3 and the tail 3 -> 4 -> ... -> n.
    /// Arrows point away from the leaves 1 and 2.
    pub fn d_type(n: usize) -> Self {
        assert!(n >= 4);
        let vs: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut arrows = vec![
            Arrow { id: "a1".into(), from: "1".into(), to: "3".into() },
            Arrow { id: "a2".into(), from: "2".into(), to: "3".into() },
        ];
        for i in 3..n {
            arrows.push(Arrow { id: format!("a{i}"), from: i.to_string(), to: (i + 1).to_string() });
        }
        Quiver::new(vs, arrows).expect("D quiver is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vindex.get(id).copied()
    }

    /// `(source, target)` vertex indices of every arrow, in arrow order.
    pub fn arrow_ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { id: a.id.clone(), from: a.to.clone(), to: a.from.clone() })
            .collect();
        Quiver::new(self.vertices.clone(), arrows).expect("opposite of a valid quiver is valid")
    }

    /// Undirected neighbour lists (with multiplicity).
    pub fn underlying_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(s, t) in &self.ends {
            adj[s].push(t);
            if s != t {
                adj[t].push(s);
            }
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let adj = self.underlying_adjacency();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Kahn's algorithm. `None` when the quiver has an oriented cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        let mut out = vec![Vec::new(); n];
        for &(s, t) in &self.ends {
            indeg[t] += 1;
            out[s].push(t);
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&u) = ready.iter().next() {
            ready.remove(&u);
            order.push(u);
            for &w in &out[u] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    pub fn is_tree(&self) -> bool {
        !self.vertices.is_empty() && self.is_connected() && self.arrows.len() + 1 == self.vertices.len()
    }

    /// Distances in the underlying graph from `v`.
    pub fn distances_from(&self, v: usize) -> Vec<Option<usize>> {
        let adj = self.underlying_adjacency();
        let mut dist = vec![None; self.vertices.len()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn classify(&self) -> Classification {
        let connected = self.is_connected();
        let acyclic = self.is_acyclic();
        let tree = self.is_tree();
        let dynkin = if tree { dynkin_type_of_tree(self) } else { None };
        Classification { connected, acyclic, tree, dynkin }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DynkinFamily {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DynkinType {
    pub family: DynkinFamily,
    pub rank: usize,
}

impl DynkinType {
    pub fn positive_roots(&self) -> usize {
        let n = self.rank;
        match self.family {
            DynkinFamily::A => n * (n + 1) / 2,
            DynkinFamily::D => n * (n - 1),
            DynkinFamily::E => match n {
                6 => 36,
                7 => 63,
                8 => 120,
                _ => unreachable!("E_n only for n = 6, 7, 8"),
            },
        }
    }

    /// Coxeter number.
    pub fn coxeter_number(&self) -> usize {
        2 * self.positive_roots() / self.rank
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub connected: bool,
    pub acyclic: bool,
    pub tree: bool,
    pub dynkin: Option<DynkinType>,
}

fn dynkin_type_of_tree(q: &Quiver) -> Option<DynkinType> {
    let n = q.vertex_count();
    let adj = q.underlying_adjacency();
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    if adj.iter().any(|a| a.len() > 3) || branch.len() > 1 {
        return None;
    }
    let Some(&center) = branch.first() else {
        return Some(DynkinType { family: DynkinFamily::A, rank: n });
    };
    // arm lengths from the branch vertex
    let mut arms: Vec<usize> = adj[center]
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (center, start, 1);
            loop {
                let next = adj[cur].iter().copied().find(|&w| w != prev);
                match next {
                    Some(w) => {
                        prev = cur;
                        cur = w;
                        len += 1;
                    }
                    None => break len,
                }
            }
        })
        .collect();
    arms.sort_unstable();
    let family = match arms.as_slice() {
        [1, 1, _] => DynkinFamily::D,
        [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => DynkinFamily::E,
        _ => return None,
    };
    Some(DynkinType { family, rank: n })
}

/// Quiver automorphism-free comparison helper: vertex bijections `self -> other`
/// that carry the arrow multiset onto the arrow multiset.
pub fn vertex_isomorphisms(a: &Quiver, b: &Quiver) -> Vec<Vec<usize>> {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.arrow_count() != b.arrow_count() {
        return Vec::new();
    }
    let count = |q: &Quiver| {
        let mut m: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &e in q.arrow_ends() {
            *m.entry(e).or_default() += 1;
        }
        m
    };
    let ca = count(a);
    let cb = count(b);
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        i: usize,
        n: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ca: &BTreeMap<(usize, usize), usize>,
        cb: &BTreeMap<(usize, usize), usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == n {
            let ok = ca.iter().all(|(&(s, t), &m)| cb.get(&(map[s], map[t])) == Some(&m));
            if ok {
                out.push(map.clone());
            }
            return;
        }
        for j in 0..n {
            if used[j] {
                continue;
            }
            map[i] = j;
            // partial check on edges among assigned vertices
            let consistent = ca.iter().all(|(&(s, t), &m)| {
                if s > i || t > i {
                    return true;
                }
                cb.get(&(map[s], map[t])) == Some(&m)
            });
            if consistent {
                used[j] = true;
                rec(i + 1, n, map, used, ca, cb, out);
                used[j] = false;
            }
        }
        map[i] = usize::MAX;
    }
    rec(0, n, &mut map, &mut used, &ca, &cb, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cyclic_example() -> Quiver {
        Quiver::from_triples(
            &["1", "2", "3", "4"],
            &[
                ("beta", "2", "1"),
                ("epsilon", "1", "4"),
                ("alpha", "4", "2"),
                ("gamma", "4", "3"),
                ("delta", "3", "1"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn classify_cluster_tilted_d4_quiver() {
        let c = cyclic_example().classify();
        assert!(c.connected);
        assert!(!c.acyclic);
        assert!(!c.tree);
        assert_eq!(c.dynkin, None);
    }

    #[test]
    fn classify_linear_a3() {
        let c = Quiver::linear_a(3).classify();
        assert!(c.acyclic && c.tree && c.connected);
        assert_eq!(c.dynkin, Some(DynkinType { family: DynkinFamily::A, rank: 3 }));
    }

    #[test]
    fn classify_acyclic_triangle() {
        let q = Quiver::from_triples(&["1", "2", "3"], &[("a", "2", "1"), ("b", "3", "2"), ("c", "3", "1")]).unwrap();
        let c = q.classify();
        assert!(c.acyclic && c.connected && !c.tree);
        assert_eq!(c.dynkin, None);
    }

    #[test]
    fn classify_d_and_e() {
        assert_eq!(Quiver::d_type(5).classify().dynkin.unwrap().family, DynkinFamily::D);
        let e6 = Quiver::from_triples(
            &["1", "2", "3", "4", "5", "6"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4"), ("d", "4", "5"), ("e", "6", "3")],
        )
        .unwrap();
        let t = e6.classify().dynkin.unwrap();
        assert_eq!((t.family, t.rank, t.positive_roots()), (DynkinFamily::E, 6, 36));
        // Euclidean D~4: star with four arms
        let star = Quiver::from_triples(
            &["c", "1", "2", "3", "4"],
            &[("a", "1", "c"), ("b", "2", "c"), ("d", "3", "c"), ("e", "4", "c")],
        )
        .unwrap();
        assert!(star.classify().tree);
        assert_eq!(star.classify().dynkin, None);
    }

    #[test]
    fn malformed_quivers_are_rejected() {
        assert!(Quiver::from_triples(&["1", "1"], &[]).is_err());
        assert!(Quiver::from_triples(&["1"], &[("a", "1", "2")]).is_err());
        assert!(Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("a", "2", "1")]).is_err());
    }

    #[test]
    fn multiple_arrows_are_allowed() {
        let k = Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
        let c = k.classify();
        assert!(c.acyclic && !c.tree && c.dynkin.is_none());
    }

    #[test]
    fn json_round_trip() {
        let q = cyclic_example();
        let s = serde_json::to_string(&q).unwrap();
        assert!(s.starts_with("{\"vertices\":[\"1\""));
        let back: Quiver = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<Quiver>(r#"{"vertices":["1"],"arrows":[{"id":"a","from":"1","to":"9"}]}"#).is_err());
    }

    #[test]
    fn isomorphisms_found() {
        let q = cyclic_example();
        // the only nontrivial automorphism swaps the two 3-cycles
        assert_eq!(vertex_isomorphisms(&q, &q).len(), 2);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn arb_quiver() -> impl Strategy<Value = Quiver> {
            (1usize..7).prop_flat_map(|n| {
                proptest::collection::vec((0..n, 0..n), 0..(2 * n)).prop_map(move |es| {
                    let vs: Vec<String> = (0..n).map(|i| i.to_string()).collect();
                    let arrows = es
                        .into_iter()
                        .enumerate()
                        .map(|(k, (s, t))| Arrow { id: format!("x{k}"), from: s.to_string(), to: t.to_string() })
                        .collect();
                    Quiver::new(vs, arrows).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn classification_is_orientation_independent(q in arb_quiver()) {
                let a = q.classify();
                let b = q.opposite().classify();
                prop_assert_eq!(a.tree, b.tree);
                prop_assert_eq!(a.dynkin, b.dynkin);
                prop_assert_eq!(a.acyclic, b.acyclic);
            }

            #[test]
            fn dynkin_implies_tree_implies_acyclic(q in arb_quiver()) {
                let c = q.classify();
                if c.dynkin.is_some() { prop_assert!(c.tree); }
                if c.tree { prop_assert!(c.acyclic); }
            }
        }
    }
}
