//! Presections, local sections, sections and local slices as executable
//! predicates on a finite translation quiver, plus exhaustive enumeration.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};
use crate::translation::{TqKind, TranslationQuiver};

/// Three-valued answer: windows are truncations of infinite quivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    True,
    False,
    BoundaryIndeterminate,
}

impl Verdict {
    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::BoundaryIndeterminate => "boundary-indeterminate",
        })
    }
}

/// A set of points of a host translation quiver.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SliceCandidate {
    pub points: BTreeSet<String>,
}

impl SliceCandidate {
    pub fn new<S: AsRef<str>, I: IntoIterator<Item = S>>(ids: I) -> Self {
        SliceCandidate { points: ids.into_iter().map(|s| s.as_ref().to_string()).collect() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.points.contains(id)
    }

    fn resolve(&self, g: &TranslationQuiver) -> Result<BTreeSet<usize>> {
        if self.points.is_empty() {
            return Err(validation!("empty slice candidate"));
        }
        self.points.iter().map(|p| g.require(p)).collect()
    }

    pub(crate) fn from_indices(g: &TranslationQuiver, s: &BTreeSet<usize>) -> Self {
        SliceCandidate { points: s.iter().map(|&i| g.id(i).to_string()).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    Presection,
    LocalSection,
    Section,
    LocalSlice,
}

pub fn check(g: &TranslationQuiver, s: &SliceCandidate, p: Predicate) -> Result<Verdict> {
    match p {
        Predicate::Presection => is_presection(g, s),
        Predicate::LocalSection => is_local_section(g, s),
        Predicate::Section => is_section(g, s),
        Predicate::LocalSlice => is_local_slice(g, s),
    }
}

pub fn is_presection(g: &TranslationQuiver, s: &SliceCandidate) -> Result<Verdict> {
    let set = s.resolve(g)?;
    Ok(presection_idx(g, &set))
}

pub fn is_local_section(g: &TranslationQuiver, s: &SliceCandidate) -> Result<Verdict> {
    let set = s.resolve(g)?;
    Ok(local_section_idx(g, &set))
}

pub fn is_section(g: &TranslationQuiver, s: &SliceCandidate) -> Result<Verdict> {
    let set = s.resolve(g)?;
    Ok(section_idx(g, &set))
}

pub fn is_local_slice(g: &TranslationQuiver, s: &SliceCandidate) -> Result<Verdict> {
    let rank = g.rank_hint().ok_or_else(|| validation!("translation quiver carries no rank hint"))?;
    let set = s.resolve(g)?;
    Ok(local_slice_idx(g, &set, rank))
}

pub(crate) fn local_slice_idx(g: &TranslationQuiver, set: &BTreeSet<usize>, rank: usize) -> Verdict {
    match local_section_idx(g, set) {
        Verdict::True => Verdict::from_bool(set.len() == rank),
        v => v,
    }
}

fn all_interior(g: &TranslationQuiver, set: &BTreeSet<usize>) -> bool {
    set.iter().all(|&i| g.is_interior(i))
}

pub(crate) fn is_connected_idx(g: &TranslationQuiver, set: &BTreeSet<usize>) -> bool {
    let Some(&start) = set.iter().next() else { return false };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for w in g.neighbours(u) {
            if set.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == set.len()
}

/// (P1) and (P2) plus connectedness.
pub(crate) fn presection_idx(g: &TranslationQuiver, set: &BTreeSet<usize>) -> Verdict {
    if !all_interior(g, set) {
        return Verdict::BoundaryIndeterminate;
    }
    if !is_connected_idx(g, set) {
        return Verdict::False;
    }
    for &x in set {
        // (P1)
        for &y in g.succ(x) {
            if !set.contains(&y) && !g.tau(y).is_some_and(|t| set.contains(&t)) {
                return Verdict::False;
            }
        }
        // (P2)
        for &w in g.pred(x) {
            if !set.contains(&w) && !g.tau_inv(w).is_some_and(|t| set.contains(&t)) {
                return Verdict::False;
            }
        }
    }
    Verdict::True
}

/// Points outside `set` from which `set` can be reached along a path whose
/// intermediate points all lie outside `set`.
fn reaches_set(g: &TranslationQuiver, set: &BTreeSet<usize>) -> HashSet<usize> {
    let mut out = HashSet::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &y in set {
        for &p in g.pred(y) {
            if !set.contains(&p) && out.insert(p) {
                queue.push_back(p);
            }
        }
    }
    while let Some(u) = queue.pop_front() {
        for &p in g.pred(u) {
            if !set.contains(&p) && out.insert(p) {
                queue.push_back(p);
            }
        }
    }
    out
}

/// Searches for a sectional path leaving `set` and re-entering it.
fn sectional_escape(g: &TranslationQuiver, set: &BTreeSet<usize>) -> Verdict {
    let useful = reaches_set(g, set);
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut touched_frontier = false;
    for &x in set {
        for &y in g.succ(x) {
            if useful.contains(&y) && seen.insert((x, y)) {
                queue.push_back((x, y));
            }
        }
    }
    while let Some((prev, cur)) = queue.pop_front() {
        if !g.is_interior(cur) {
            touched_frontier = true;
        }
        for &next in g.succ(cur) {
            if g.tau(next) == Some(prev) {
                continue;
            }
            if set.contains(&next) {
                return Verdict::False;
            }
            if useful.contains(&next) && seen.insert((cur, next)) {
                queue.push_back((cur, next));
            }
        }
    }
    if touched_frontier && can_reenter(g) {
        Verdict::BoundaryIndeterminate
    } else {
        Verdict::True
    }
}

pub(crate) fn local_section_idx(g: &TranslationQuiver, set: &BTreeSet<usize>) -> Verdict {
    match presection_idx(g, set) {
        Verdict::True => sectional_escape(g, set),
        v => v,
    }
}

/// (S3): no path leaves `set` and comes back.
fn convex_idx(g: &TranslationQuiver, set: &BTreeSet<usize>) -> Verdict {
    let back = reaches_set(g, set);
    let mut fwd = HashSet::new();
    let mut queue = VecDeque::new();
    for &x in set {
        for &y in g.succ(x) {
            if set.contains(&y) {
                continue;
            }
            if back.contains(&y) {
                return Verdict::False;
            }
            if fwd.insert(y) {
                queue.push_back(y);
            }
        }
    }
    while let Some(u) = queue.pop_front() {
        for &y in g.succ(u) {
            if set.contains(&y) {
                continue;
            }
            if back.contains(&y) {
                return Verdict::False;
            }
            if fwd.insert(y) {
                queue.push_back(y);
            }
        }
    }
    // a hidden path would leave through a frontier point and re-enter through another
    let leaves = fwd.iter().any(|&u| !g.is_interior(u));
    let enters = back.iter().any(|&u| !g.is_interior(u));
    if can_reenter(g) && leaves && enters {
        Verdict::BoundaryIndeterminate
    } else {
        Verdict::True
    }
}

/// In a window of ZQ arrows never lower the level, so a path that leaves
/// the window cannot come back.
fn can_reenter(g: &TranslationQuiver) -> bool {
    g.kind() != TqKind::ZqWindow
}

fn induced_acyclic(g: &TranslationQuiver, set: &BTreeSet<usize>) -> bool {
    // Kahn on the induced subquiver
    let mut indeg: std::collections::HashMap<usize, usize> = set.iter().map(|&v| (v, 0)).collect();
    for &x in set {
        for &y in g.succ(x) {
            if set.contains(&y) {
                *indeg.get_mut(&y).unwrap() += 1;
            }
        }
    }
    let mut ready: Vec<usize> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
    let mut done = 0;
    while let Some(u) = ready.pop() {
        done += 1;
        for &y in g.succ(u) {
            if let Some(d) = indeg.get_mut(&y) {
                *d -= 1;
                if *d == 0 {
                    ready.push(y);
                }
            }
        }
    }
    done == set.len()
}

pub(crate) fn section_idx(g: &TranslationQuiver, set: &BTreeSet<usize>) -> Verdict {
    if !all_interior(g, set) {
        return Verdict::BoundaryIndeterminate;
    }
    if !is_connected_idx(g, set) || !induced_acyclic(g, set) {
        return Verdict::False;
    }
    // (S2) relative to the component containing the set
    let comp = g.component_of(*set.iter().next().unwrap());
    let orbits: BTreeSet<&str> = comp.iter().map(|&i| g.point(i).orbit.as_str()).collect();
    let hit: Vec<&str> = set.iter().map(|&i| g.point(i).orbit.as_str()).collect();
    let hit_set: BTreeSet<&str> = hit.iter().copied().collect();
    if hit.len() != hit_set.len() || hit_set != orbits {
        return Verdict::False;
    }
    convex_idx(g, set)
}

/// Connected subsets of `size` among interior points (ESU enumeration).
pub(crate) fn connected_subsets(g: &TranslationQuiver, size: usize, mut visit: impl FnMut(&BTreeSet<usize>)) {
    if size == 0 {
        return;
    }
    let allowed: Vec<bool> = (0..g.len()).map(|i| g.is_interior(i)).collect();
    let nbrs: Vec<BTreeSet<usize>> =
        (0..g.len()).map(|i| g.neighbours(i).filter(|&w| allowed[w] && w != i).collect()).collect();

    fn extend(
        sub: &mut BTreeSet<usize>,
        ext: BTreeSet<usize>,
        root: usize,
        size: usize,
        nbrs: &[BTreeSet<usize>],
        visit: &mut dyn FnMut(&BTreeSet<usize>),
    ) {
        if sub.len() == size {
            visit(sub);
            return;
        }
        let mut ext = ext;
        while let Some(&w) = ext.iter().next() {
            ext.remove(&w);
            let mut next = ext.clone();
            for &u in &nbrs[w] {
                if u > root && !sub.contains(&u) && !sub.iter().any(|&s| nbrs[s].contains(&u)) {
                    next.insert(u);
                }
            }
            sub.insert(w);
            extend(sub, next, root, size, nbrs, visit);
            sub.remove(&w);
        }
    }

    for v in 0..g.len() {
        if !allowed[v] {
            continue;
        }
        let mut sub = BTreeSet::from([v]);
        let ext: BTreeSet<usize> = nbrs[v].iter().copied().filter(|&u| u > v).collect();
        extend(&mut sub, ext, v, size, &nbrs, &mut visit);
    }
}

pub const MAX_ENUMERATION_RANK: usize = 8;

/// Every local slice of `g` over interior points, sorted lexicographically.
pub fn enumerate_local_slices(g: &TranslationQuiver) -> Result<Vec<SliceCandidate>> {
    let rank = g.rank_hint().ok_or_else(|| validation!("translation quiver carries no rank hint"))?;
    if rank > MAX_ENUMERATION_RANK {
        return Err(Error::Resource(format!("rank {rank} exceeds the enumeration cap {MAX_ENUMERATION_RANK}")));
    }
    let mut out = BTreeSet::new();
    connected_subsets(g, rank, |s| {
        if local_slice_idx(g, s, rank).is_true() {
            out.insert(SliceCandidate::from_indices(g, s));
        }
    });
    Ok(out.into_iter().collect())
}

/// Every connected set of rank many interior points with its local-slice verdict.
pub fn candidate_verdicts(g: &TranslationQuiver) -> Result<Vec<(SliceCandidate, Verdict)>> {
    let rank = g.rank_hint().ok_or_else(|| validation!("translation quiver carries no rank hint"))?;
    if rank > MAX_ENUMERATION_RANK {
        return Err(Error::Resource(format!("rank {rank} exceeds the enumeration cap {MAX_ENUMERATION_RANK}")));
    }
    let mut out = Vec::new();
    connected_subsets(g, rank, |s| out.push((SliceCandidate::from_indices(g, s), local_slice_idx(g, s, rank))));
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Local slices containing the point `m`.
pub fn local_slices_through(g: &TranslationQuiver, m: &str) -> Result<Vec<SliceCandidate>> {
    g.require(m)?;
    Ok(enumerate_local_slices(g)?.into_iter().filter(|s| s.contains(m)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;
    use crate::translation::{build_zq, synthetic_tube, zq_id};

    fn cand(ids: &[&str]) -> SliceCandidate {
        SliceCandidate::new(ids.iter().copied())
    }

    #[test]
    fn level_slice_is_a_section() {
        let q = Quiver::d_type(5);
        let g = build_zq(&q, -3, 3).unwrap();
        let s = SliceCandidate::new(q.vertices().iter().map(|v| zq_id(0, v)));
        assert_eq!(is_section(&g, &s).unwrap(), Verdict::True);
        assert_eq!(is_local_section(&g, &s).unwrap(), Verdict::True);
        assert_eq!(is_presection(&g, &s).unwrap(), Verdict::True);
        assert_eq!(is_local_slice(&g, &s).unwrap(), Verdict::True);
    }

    #[test]
    fn disconnected_pair_is_not_presection() {
        let g = build_zq(&Quiver::linear_a(3), -3, 3).unwrap();
        assert_eq!(is_presection(&g, &cand(&["0:1", "0:3"])).unwrap(), Verdict::False);
    }

    #[test]
    fn boundary_points_are_indeterminate() {
        let g = build_zq(&Quiver::linear_a(2), 0, 3).unwrap();
        assert_eq!(is_presection(&g, &cand(&["0:1", "0:2"])).unwrap(), Verdict::BoundaryIndeterminate);
        assert!(is_presection(&g, &cand(&[])).is_err());
    }

    /// Oracle: enumerate every path of the window by DFS and test sectional
    /// convexity literally.
    fn brute_sectionally_convex(g: &TranslationQuiver, s: &BTreeSet<usize>) -> bool {
        fn dfs(g: &TranslationQuiver, s: &BTreeSet<usize>, path: &mut Vec<usize>, ok: &mut bool) {
            let last = *path.last().unwrap();
            if path.len() > 1 && s.contains(&last) {
                if path[1..path.len() - 1].iter().any(|p| !s.contains(p)) && g.is_sectional_idx(path) {
                    *ok = false;
                }
            }
            if path.len() > 12 {
                return;
            }
            for &n in g.succ(last) {
                path.push(n);
                dfs(g, s, path, ok);
                path.pop();
            }
        }
        let mut ok = true;
        for &x in s {
            dfs(g, s, &mut vec![x], &mut ok);
        }
        ok
    }

    #[test]
    fn a3_local_section_matches_path_oracle() {
        let g = build_zq(&Quiver::linear_a(3), -3, 3).unwrap();
        let s = cand(&["0:1", "0:3", "1:2"]);
        let set: BTreeSet<usize> = s.points.iter().map(|p| g.require(p).unwrap()).collect();
        // computed by exhaustive path enumeration: the set is not even connected
        assert!(!is_connected_idx(&g, &set));
        assert_eq!(is_local_section(&g, &s).unwrap(), Verdict::False);
        // a connected non-section with a sectional escape: {0:1, 0:2, 1:1}
        let s2 = cand(&["0:1", "0:2", "1:1"]);
        let set2: BTreeSet<usize> = s2.points.iter().map(|p| g.require(p).unwrap()).collect();
        let presec = is_presection(&g, &s2).unwrap();
        let local = is_local_section(&g, &s2).unwrap();
        assert_eq!(local.is_true(), presec.is_true() && brute_sectionally_convex(&g, &set2));
    }

    #[test]
    fn oracle_agrees_on_all_small_connected_sets() {
        let g = build_zq(&Quiver::linear_a(3), -4, 4).unwrap();
        for k in 1..=4 {
            connected_subsets(&g, k, |s| {
                if s.iter().all(|&i| g.point(i).level.abs() <= 1) {
                    let presec = presection_idx(&g, s).is_true();
                    let local = local_section_idx(&g, s).is_true();
                    assert_eq!(local, presec && brute_sectionally_convex(&g, s));
                }
            });
        }
    }

    #[test]
    fn tube_ray_is_presection_not_local_slice() {
        let t = synthetic_tube(2, 6).unwrap();
        // a ray segment is not interior-closed: (P1) pushes it to the top row
        let ray = cand(&["t0.1", "t0.2", "t0.3"]);
        assert_eq!(is_presection(&t, &ray).unwrap(), Verdict::False);
        // the full interior ray up to the frontier is indeterminate, never true
        let full = cand(&["t0.1", "t0.2", "t0.3", "t0.4", "t0.5", "t0.6"]);
        assert_eq!(is_presection(&t, &full).unwrap(), Verdict::BoundaryIndeterminate);
        assert!(enumerate_local_slices(&t).unwrap().is_empty());
    }

    #[test]
    fn esu_enumerates_each_connected_set_once() {
        let g = build_zq(&Quiver::linear_a(3), -2, 2).unwrap();
        for k in 1..=4 {
            let mut seen = BTreeSet::new();
            let mut count = 0;
            connected_subsets(&g, k, |s| {
                count += 1;
                assert!(is_connected_idx(&g, s));
                seen.insert(s.clone());
            });
            assert_eq!(count, seen.len());
            // brute force over all k-subsets of interior points
            let interior: Vec<usize> = (0..g.len()).filter(|&i| g.is_interior(i)).collect();
            let mut brute = 0;
            let n = interior.len();
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let s: BTreeSet<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| interior[b]).collect();
                if is_connected_idx(&g, &s) {
                    brute += 1;
                }
            }
            assert_eq!(count, brute);
        }
    }

    #[test]
    fn small_local_section_is_not_local_slice() {
        let q = Quiver::d_type(4);
        let g = build_zq(&q, -3, 3).unwrap();
        let s = SliceCandidate::new(["0:1", "0:3", "0:4"]);
        // three points cannot be a local slice in rank four
        assert_ne!(is_local_slice(&g, &s).unwrap(), Verdict::True);
        assert!(is_local_slice(&g.clone().with_rank_hint(None), &s).is_err());
    }
}
