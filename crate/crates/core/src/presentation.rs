//! Quivers with relations: truncated path spaces, ideal closure and
//! equivalence of presentations up to isomorphism and arrow rescaling.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{validation, Result};
use crate::linalg::{rat, rat_from_str, rat_to_string, Rat, Subspace};
use crate::quiver::{vertex_isomorphisms, Quiver};

/// A linear combination of paths; each path is a list of arrow ids in
/// composition order (`[a, b]` is `a` followed by `b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Rat, Vec<String>)>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    coeff: String,
    path: Vec<String>,
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<RawTerm> =
            self.terms.iter().map(|(c, p)| RawTerm { coeff: rat_to_string(c), path: p.clone() }).collect();
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<RawTerm>::deserialize(d)?;
        let terms = raw
            .into_iter()
            .map(|t| {
                rat_from_str(&t.coeff)
                    .map(|c| (c, t.path))
                    .ok_or_else(|| serde::de::Error::custom(format!("bad coefficient {}", t.coeff)))
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(Relation { terms })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (c, p)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if !a.is_one() {
                write!(f, "{}*", rat_to_string(&a))?;
            }
            f.write_str(&p.join("."))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn new(quiver: Quiver, relations: Vec<Relation>) -> Result<Self> {
        let p = Presentation { quiver, relations };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.relations {
            for (_, path) in &r.terms {
                if path.len() < 2 {
                    return Err(validation!("relation term {path:?} has length below 2"));
                }
                self.arrow_path(path)?;
            }
        }
        Ok(())
    }

    fn arrow_path(&self, ids: &[String]) -> Result<Vec<usize>> {
        let q = &self.quiver;
        let idx: Vec<usize> = ids
            .iter()
            .map(|a| q.arrows().iter().position(|x| &x.id == a).ok_or_else(|| validation!("unknown arrow {a}")))
            .collect::<Result<_>>()?;
        for w in idx.windows(2) {
            if q.arrow_ends()[w[0]].1 != q.arrow_ends()[w[1]].0 {
                return Err(validation!("path {ids:?} is not composable"));
            }
        }
        Ok(idx)
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.to_string()).collect()
    }
}

/// Paths of lengths `lo..=hi` in a quiver, ordered by length then arrow ids.
#[derive(Clone, Debug)]
pub struct PathSpace {
    pub lo: usize,
    pub hi: usize,
    pub paths: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

pub fn paths_of_length(q: &Quiver, len: usize) -> Vec<Vec<usize>> {
    let ends = q.arrow_ends();
    let mut order: Vec<usize> = (0..ends.len()).collect();
    order.sort_by(|&a, &b| q.arrows()[a].id.cmp(&q.arrows()[b].id));
    let mut cur: Vec<Vec<usize>> = if len == 0 { vec![] } else { order.iter().map(|&a| vec![a]).collect() };
    for _ in 1..len {
        let mut next = Vec::new();
        for p in &cur {
            let end = ends[*p.last().unwrap()].1;
            for &a in &order {
                if ends[a].0 == end {
                    let mut r = p.clone();
                    r.push(a);
                    next.push(r);
                }
            }
        }
        cur = next;
    }
    cur
}

impl PathSpace {
    pub fn new(q: &Quiver, lo: usize, hi: usize, cap: usize) -> Result<Self> {
        let mut paths = Vec::new();
        for l in lo..=hi {
            paths.extend(paths_of_length(q, l));
            if paths.len() > cap {
                return Err(crate::error::Error::Resource(format!("more than {cap} paths up to length {hi}")));
            }
        }
        let index = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(PathSpace { lo, hi, paths, index })
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn position(&self, p: &[usize]) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Multiplies by an arrow on the left or right; terms leaving the
    /// space are dropped (they lie in the truncation).
    pub fn mul_arrow(&self, q: &Quiver, v: &[Rat], arrow: usize, left: bool) -> Vec<Rat> {
        let ends = q.arrow_ends();
        let mut out = vec![Rat::zero(); self.dim()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &self.paths[i];
            let ok = if left { ends[arrow].1 == ends[p[0]].0 } else { ends[*p.last().unwrap()].1 == ends[arrow].0 };
            if !ok {
                continue;
            }
            let mut np = Vec::with_capacity(p.len() + 1);
            if left {
                np.push(arrow);
                np.extend_from_slice(p);
            } else {
                np.extend_from_slice(p);
                np.push(arrow);
            }
            if let Some(j) = self.position(&np) {
                out[j] += c;
            }
        }
        out
    }

    /// Two-sided ideal generated by `gens` inside the truncated space.
    pub fn ideal_closure(&self, q: &Quiver, gens: &[Vec<Rat>]) -> Subspace {
        let mut s = Subspace::spanned_by(self.dim(), gens);
        let mut frontier: Vec<Vec<Rat>> = s.rows().to_vec();
        while let Some(v) = frontier.pop() {
            for a in 0..q.arrow_count() {
                for left in [true, false] {
                    let w = self.mul_arrow(q, &v, a, left);
                    if s.insert(w.clone()) {
                        frontier.push(w);
                    }
                }
            }
        }
        s
    }

    /// `J*K + K*J` for a subspace `K` of the truncated space.
    pub fn arrow_multiples(&self, q: &Quiver, k: &[Vec<Rat>]) -> Subspace {
        let mut s = Subspace::new(self.dim());
        for v in k {
            for a in 0..q.arrow_count() {
                s.insert(self.mul_arrow(q, v, a, true));
                s.insert(self.mul_arrow(q, v, a, false));
            }
        }
        s
    }

    pub fn vector_of(&self, q: &Quiver, r: &Relation) -> Result<Vec<Rat>> {
        let mut v = vec![Rat::zero(); self.dim()];
        for (c, ids) in &r.terms {
            let p: Vec<usize> = ids
                .iter()
                .map(|a| q.arrows().iter().position(|x| &x.id == a).ok_or_else(|| validation!("unknown arrow {a}")))
                .collect::<Result<_>>()?;
            if let Some(i) = self.position(&p) {
                v[i] += c;
            }
        }
        Ok(v)
    }

    pub fn relation_of(&self, q: &Quiver, v: &[Rat]) -> Relation {
        let mut terms: Vec<(Rat, Vec<String>)> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.clone(), self.paths[i].iter().map(|&a| q.arrows()[a].id.clone()).collect()))
            .collect();
        if let Some(lead) = terms.first().map(|t| t.0.clone()) {
            for t in terms.iter_mut() {
                t.0 = &t.0 / &lead;
            }
        }
        Relation { terms }
    }
}

/// Minimal generators of the ideal spanned by `kernel`: a complement of
/// `J*K + K*J` chosen greedily along the echelon basis.
pub fn minimal_generators(space: &PathSpace, q: &Quiver, kernel: &Subspace) -> Vec<Relation> {
    let mut span = space.arrow_multiples(q, kernel.rows());
    let mut out = Vec::new();
    for row in kernel.rows() {
        if span.insert(row.clone()) {
            out.push(space.relation_of(q, row));
        }
    }
    out
}

pub const MAX_COMPARE_LENGTH: usize = 10;

/// Smallest length `L` with every path of length `L` in the ideal, capped.
pub fn nilpotency_bound(p: &Presentation) -> usize {
    let q = &p.quiver;
    let max_rel = p.relations.iter().flat_map(|r| r.terms.iter().map(|t| t.1.len())).max().unwrap_or(2);
    for l in max_rel.max(2)..=MAX_COMPARE_LENGTH {
        if paths_of_length(q, l).is_empty() {
            return l;
        }
        let Ok(space) = PathSpace::new(q, 2, l, 200_000) else { return l };
        let gens: Vec<Vec<Rat>> = p.relations.iter().map(|r| space.vector_of(q, r).unwrap()).collect();
        let ideal = space.ideal_closure(q, &gens);
        let all_top = paths_of_length(q, l).iter().all(|path| {
            let mut v = vec![Rat::zero(); space.dim()];
            v[space.position(path).unwrap()] = Rat::one();
            ideal.contains(&v)
        });
        if all_top {
            return l;
        }
    }
    MAX_COMPARE_LENGTH
}

/// Arrow bijections compatible with a vertex bijection.
fn arrow_bijections(a: &Quiver, b: &Quiver, vmap: &[usize]) -> Vec<Vec<usize>> {
    let ea = a.arrow_ends();
    let eb = b.arrow_ends();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; eb.len()];
    fn go(ea: &[(usize, usize)], eb: &[(usize, usize)], vmap: &[usize], cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == ea.len() {
            out.push(cur.clone());
            return;
        }
        let (s, t) = ea[cur.len()];
        for j in 0..eb.len() {
            if !used[j] && eb[j] == (vmap[s], vmap[t]) {
                used[j] = true;
                cur.push(j);
                go(ea, eb, vmap, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    go(ea, eb, vmap, &mut cur, &mut used, &mut out);
    out
}

/// Whether two presentations define isomorphic algebras through a quiver
/// isomorphism with arrows rescaled by signs.
pub fn equivalent(p1: &Presentation, p2: &Presentation) -> bool {
    equivalence_witness(p1, p2).is_some()
}

/// The arrow map (ids of `p1` to ids of `p2`) and signs realizing the equivalence.
pub fn equivalence_witness(p1: &Presentation, p2: &Presentation) -> Option<BTreeMap<String, (String, i64)>> {
    let (q1, q2) = (&p1.quiver, &p2.quiver);
    if q1.vertex_count() != q2.vertex_count() || q1.arrow_count() != q2.arrow_count() {
        return None;
    }
    let len = nilpotency_bound(p1).max(nilpotency_bound(p2));
    let space = PathSpace::new(q2, 2, len, 200_000).ok()?;
    let gens2: Vec<Vec<Rat>> = p2.relations.iter().map(|r| space.vector_of(q2, r).unwrap()).collect();
    let target = space.ideal_closure(q2, &gens2);
    let n_arrows = q1.arrow_count();
    if n_arrows > 16 {
        return None;
    }
    for vmap in vertex_isomorphisms(q1, q2) {
        for amap in arrow_bijections(q1, q2, &vmap) {
            for signs in 0u32..(1 << n_arrows) {
                let sign = |a: usize| if signs >> a & 1 == 1 { -1 } else { 1 };
                let mut gens = Vec::new();
                for r in &p1.relations {
                    let mut v = vec![Rat::zero(); space.dim()];
                    for (c, ids) in &r.terms {
                        let mut s = 1;
                        let mut path = Vec::new();
                        for id in ids {
                            let a = q1.arrows().iter().position(|x| &x.id == id).unwrap();
                            s *= sign(a);
                            path.push(amap[a]);
                        }
                        if let Some(i) = space.position(&path) {
                            v[i] += c * rat(s);
                        }
                    }
                    gens.push(v);
                }
                let mine = space.ideal_closure(q2, &gens);
                if mine.same_span(&target) {
                    return Some(
                        (0..n_arrows)
                            .map(|a| (q1.arrows()[a].id.clone(), (q2.arrows()[amap[a]].id.clone(), sign(a))))
                            .collect(),
                    );
                }
            }
        }
    }
    None
}

/// Cheap isomorphism invariants used to bucket presentations before the exact test.
pub fn invariant_key(p: &Presentation) -> (usize, usize, Vec<(usize, usize)>, usize, Vec<usize>) {
    let q = &p.quiver;
    let mut degrees: Vec<(usize, usize)> = (0..q.vertex_count())
        .map(|v| {
            let out = q.arrow_ends().iter().filter(|e| e.0 == v).count();
            let inn = q.arrow_ends().iter().filter(|e| e.1 == v).count();
            (inn, out)
        })
        .collect();
    degrees.sort();
    let len = nilpotency_bound(p);
    let mut dims = Vec::new();
    if let Ok(space) = PathSpace::new(q, 2, len, 200_000) {
        let gens: Vec<Vec<Rat>> = p.relations.iter().map(|r| space.vector_of(q, r).unwrap()).collect();
        let ideal = space.ideal_closure(q, &gens);
        dims.push(ideal.dim());
        dims.push(space.dim());
    }
    (q.vertex_count(), q.arrow_count(), degrees, p.relations.len(), dims)
}

/// Keeps the first presentation of each equivalence class, in input order.
pub fn dedup(ps: Vec<Presentation>) -> Vec<Presentation> {
    let mut out: Vec<(Presentation, _)> = Vec::new();
    for p in ps {
        let key = invariant_key(&p);
        if !out.iter().any(|(o, k)| *k == key && equivalent(o, &p)) {
            out.push((p, key));
        }
    }
    out.into_iter().map(|(p, _)| p).collect()
}

pub fn relation(terms: &[(i64, &[&str])]) -> Relation {
    Relation { terms: terms.iter().map(|(c, p)| (rat(*c), p.iter().map(|s| s.to_string()).collect())).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic() -> Quiver {
        Quiver::from_triples(
            &["1", "2", "3", "4"],
            &[("beta", "2", "1"), ("eps", "1", "4"), ("alpha", "4", "2"), ("gamma", "4", "3"), ("delta", "3", "1")],
        )
        .unwrap()
    }

    fn cyclic_presentation() -> Presentation {
        Presentation::new(
            cyclic(),
            vec![
                relation(&[(1, &["alpha", "beta"]), (-1, &["gamma", "delta"])]),
                relation(&[(1, &["beta", "eps"])]),
                relation(&[(1, &["delta", "eps"])]),
                relation(&[(1, &["eps", "alpha"])]),
                relation(&[(1, &["eps", "gamma"])]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn relabelled_and_resigned_presentations_are_equivalent() {
        let p = cyclic_presentation();
        // relabel arrows and vertices, flip the sign of the commutativity relation
        let q = Quiver::from_triples(
            &["a", "b", "c", "d"],
            &[("x1", "b", "a"), ("x2", "a", "d"), ("x3", "d", "b"), ("x4", "d", "c"), ("x5", "c", "a")],
        )
        .unwrap();
        let p2 = Presentation::new(
            q,
            vec![
                relation(&[(1, &["x3", "x1"]), (1, &["x4", "x5"])]),
                relation(&[(1, &["x5", "x2"])]),
                relation(&[(1, &["x1", "x2"])]),
                relation(&[(1, &["x2", "x4"])]),
                relation(&[(2, &["x2", "x3"])]),
            ],
        )
        .unwrap();
        assert!(equivalent(&p, &p2));
        assert!(equivalent(&p2, &p));
        // dropping a zero relation changes the ideal
        let mut p3 = p2.clone();
        p3.relations.pop();
        assert!(!equivalent(&p, &p3));
        assert_eq!(dedup(vec![p.clone(), p2, p3]).len(), 2);
    }

    #[test]
    fn nilpotency_of_cyclic_example() {
        // the longest nonzero path is alpha.beta of length 2 (times nothing), so length 3 vanishes
        assert_eq!(nilpotency_bound(&cyclic_presentation()), 3);
    }

    #[test]
    fn display_and_serde() {
        let r = relation(&[(1, &["alpha", "beta"]), (-1, &["gamma", "delta"])]);
        assert_eq!(r.to_string(), "alpha.beta - gamma.delta");
        let s = serde_json::to_string(&r).unwrap();
        let back: Relation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert!(Presentation::new(cyclic(), vec![relation(&[(1, &["beta", "alpha"])])]).is_err());
        assert!(Presentation::new(cyclic(), vec![relation(&[(1, &["beta"])])]).is_err());
    }
}
