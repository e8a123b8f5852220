//! Lifting local slices to sections of `ZQ`, the canonical slice image of an
//! injective slice, and the construction of a section through a point that
//! avoids a forbidden set.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::algebra::ClusterTiltedAlgebra;
use crate::derived::DerivedModel;
use crate::error::{validation, Error, Result};
use crate::modules::{annihilator_unchecked, tau_t_positions};
use crate::slices::{local_slice_idx, section_idx, SliceCandidate, Verdict};
use crate::translation::{zq_id, TranslationQuiver};

/// All window points whose F-orbit meets `positions`.
pub fn f_translates(m: &DerivedModel, positions: &[String]) -> Result<BTreeSet<usize>> {
    let reps: BTreeSet<usize> = positions.iter().map(|p| m.point(p)).collect::<Result<_>>()?;
    Ok((0..m.window.len()).filter(|&i| m.fd_representative(i).is_ok_and(|(r, _)| reps.contains(&r))).collect())
}

/// The forbidden set of the algebra: every F-translate of a `tau T` position.
pub fn forbidden_set(alg: &ClusterTiltedAlgebra) -> Result<BTreeSet<usize>> {
    f_translates(alg.cat.model(), &tau_t_positions(alg)?)
}

/// A connected preimage of a local slice in the derived window.
pub fn lift_local_slice(alg: &ClusterTiltedAlgebra, modq: &TranslationQuiver, slice: &SliceCandidate) -> Result<SliceCandidate> {
    let rank = alg.rank();
    let set: BTreeSet<usize> = slice.points.iter().map(|p| modq.require(p)).collect::<Result<_>>()?;
    if local_slice_idx(modq, &set, rank) != Verdict::True {
        return Err(validation!("not a local slice"));
    }
    let m = alg.cat.model();
    let g = &m.window;
    let first = slice.points.iter().next().unwrap();
    let mut lifted: BTreeMap<String, usize> = BTreeMap::from([(first.clone(), m.point(first)?)]);
    let mut queue = VecDeque::from([first.clone()]);
    while let Some(s) = queue.pop_front() {
        let sq = modq.require(&s)?;
        let here = lifted[&s];
        for t in modq.neighbours(sq) {
            let tid = modq.id(t).to_string();
            if !slice.contains(&tid) || lifted.contains_key(&tid) {
                continue;
            }
            let target = m.point(&tid)?;
            let found = g
                .succ(here)
                .iter()
                .chain(g.pred(here))
                .copied()
                .find(|&w| m.fd_representative(w).is_ok_and(|(r, _)| r == target))
                .ok_or_else(|| Error::AlgorithmFailure(format!("no lift of the edge {s} - {tid}")))?;
            lifted.insert(tid.clone(), found);
            queue.push_back(tid);
        }
    }
    let pts: BTreeSet<usize> = lifted.values().copied().collect();
    if pts.len() != rank || lifted.len() != slice.len() {
        return Err(Error::AlgorithmFailure("lift does not have rank many points".into()));
    }
    if section_idx(g, &pts) != Verdict::True {
        return Err(Error::AlgorithmFailure("lift is not a section".into()));
    }
    let bad = forbidden_set(alg)?;
    if pts.iter().any(|p| bad.contains(p)) {
        return Err(Error::AlgorithmFailure("lift meets a translate of tau T".into()));
    }
    Ok(SliceCandidate::from_indices(g, &pts))
}

/// Image of the injective slice, for tilting objects given by modules.
pub fn canonical_slice_image(alg: &ClusterTiltedAlgebra, modq: &TranslationQuiver) -> Result<SliceCandidate> {
    let m = alg.cat.model();
    if alg.tilting.summands.iter().any(|s| !m.module_range.contains(s)) {
        return Err(validation!("tilting object has summands outside the module range"));
    }
    let deleted = tau_t_positions(alg)?;
    let image = SliceCandidate::new(m.inj_pos.values());
    if image.points.iter().any(|p| deleted.contains(p)) {
        return Err(Error::AlgorithmFailure("an injective position is deleted".into()));
    }
    let set: BTreeSet<usize> = image.points.iter().map(|p| modq.require(p)).collect::<Result<_>>()?;
    if local_slice_idx(modq, &set, alg.rank()) != Verdict::True {
        return Err(Error::AlgorithmFailure("image of the injective slice is not a local slice".into()));
    }
    Ok(image)
}

/// Grade-one arrows of the algebra.
pub fn grade_one_arrows(alg: &ClusterTiltedAlgebra) -> BTreeSet<String> {
    alg.arrows.iter().filter(|a| a.grade == 1).map(|a| a.id.clone()).collect()
}

/// Checks that the annihilator of the canonical image is generated by the
/// grade-one arrows and has the dimension of the grade-one part.
pub fn canonical_grade_rule(alg: &ClusterTiltedAlgebra, modq: &TranslationQuiver) -> Result<(bool, usize, usize)> {
    let s = canonical_slice_image(alg, modq)?;
    let ann = annihilator_unchecked(alg, &s)?;
    let gens: BTreeSet<String> = ann.arrow_generators.iter().cloned().collect();
    Ok((gens == grade_one_arrows(alg), ann.dim, alg.grade_one_dim()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairRound {
    pub d: usize,
    pub nearest: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairRun {
    pub section: SliceCandidate,
    pub rounds: Vec<RepairRound>,
}

fn section_points(m: &DerivedModel, level: &[i64]) -> Result<BTreeSet<usize>> {
    m.quiver
        .vertices()
        .iter()
        .zip(level)
        .map(|(v, &l)| {
            let i = m.point(&zq_id(l, v)).map_err(|_| Error::Boundary(format!("section leaves the window at {v}")))?;
            if !m.window.is_interior(i) {
                return Err(Error::Boundary(format!("section reaches the frontier at {}", m.window.id(i))));
            }
            Ok(i)
        })
        .collect()
}

/// Moves a section through `target` off the forbidden set, pushing the far
/// side of the nearest forbidden points by `tau` or `tau^-1`.
pub fn section_through_avoiding(m: &DerivedModel, target: usize, forbidden: &BTreeSet<usize>) -> Result<RepairRun> {
    let q = &m.quiver;
    if !q.is_tree() {
        return Err(Error::Unsupported("section repair needs a tree quiver".into()));
    }
    if forbidden.contains(&target) {
        return Err(validation!("target point is forbidden"));
    }
    let g = &m.window;
    let tp = g.point(target);
    let vm = q.vertex_index(&tp.orbit).ok_or_else(|| validation!("target orbit is not a vertex"))?;
    let n = q.vertex_count();
    let adj = q.underlying_adjacency();
    let dist = q.distances_from(vm);
    let mut level = vec![tp.level; n];
    let mut rounds: Vec<RepairRound> = Vec::new();
    let cap = n * n;
    loop {
        let pts = section_points(m, &level)?;
        if section_idx(g, &pts) != Verdict::True {
            return Err(Error::AlgorithmFailure("intermediate set is not a section".into()));
        }
        let hits: Vec<usize> = (0..n).filter(|&v| forbidden.contains(&g.require(&zq_id(level[v], &q.vertices()[v])).unwrap())).collect();
        if hits.is_empty() {
            return Ok(RepairRun { section: SliceCandidate::from_indices(g, &pts), rounds });
        }
        if rounds.len() >= cap {
            return Err(Error::AlgorithmFailure(format!("no avoiding section after {cap} rounds")));
        }
        let d = hits.iter().map(|&v| dist[v].unwrap()).min().unwrap();
        if rounds.last().is_some_and(|r| r.d >= d) {
            return Err(Error::AlgorithmFailure("distance to the forbidden set did not grow".into()));
        }
        let nearest: Vec<usize> = hits.iter().copied().filter(|&v| dist[v] == Some(d)).collect();
        rounds.push(RepairRound { d, nearest: nearest.iter().map(|&v| zq_id(level[v], &q.vertices()[v])).collect() });
        for &nv in &nearest {
            let np = g.require(&zq_id(level[nv], &q.vertices()[nv]))?;
            for t in [g.tau(np), g.tau_inv(np)].into_iter().flatten() {
                if forbidden.contains(&t) {
                    return Err(Error::AlgorithmFailure(format!("a translate of {} is forbidden", g.id(np))));
                }
            }
            let l = *adj[nv].iter().find(|&&w| dist[w] == Some(d - 1)).unwrap();
            let lp = g.require(&zq_id(level[l], &q.vertices()[l]))?;
            let step = if g.has_arrow(lp, np) { -1 } else { 1 };
            // far side of the edge l - nv
            let mut side = vec![nv];
            let mut seen = BTreeSet::from([nv, l]);
            let mut k = 0;
            while k < side.len() {
                let v = side[k];
                k += 1;
                for &w in &adj[v] {
                    if seen.insert(w) {
                        side.push(w);
                    }
                }
            }
            for v in side {
                level[v] += step;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::cluster::ClusterCategory;
    use crate::derived::build_model;
    use crate::modules::mod_b_quiver;
    use crate::quiver::Quiver;

    #[test]
    fn empty_forbidden_set_keeps_the_level_slice() {
        let m = build_model(&Quiver::d_type(4)).unwrap();
        let x = m.point("1:2").unwrap();
        let run = section_through_avoiding(&m, x, &BTreeSet::new()).unwrap();
        assert!(run.rounds.is_empty());
        assert_eq!(run.section, SliceCandidate::new(["1:1", "1:2", "1:3", "1:4"]));
    }

    #[test]
    fn repair_and_lift_on_d4() {
        let m = build_model(&Quiver::d_type(4)).unwrap();
        let c = ClusterCategory::new(&m);
        for t in c.enumerate_tilting().unwrap() {
            let alg = build_algebra(&c, &t).unwrap();
            let modq = mod_b_quiver(&alg).unwrap();
            let bad = forbidden_set(&alg).unwrap();
            for p in modq.points() {
                let x = m.point(&p.id).unwrap();
                let run = section_through_avoiding(&m, x, &bad).unwrap();
                let image: BTreeSet<usize> =
                    run.section.points.iter().map(|s| m.fd_representative(m.point(s).unwrap()).unwrap().0).collect();
                let image = SliceCandidate::from_indices(&m.window, &image);
                let set: BTreeSet<usize> = image.points.iter().map(|s| modq.require(s).unwrap()).collect();
                assert_eq!(local_slice_idx(&modq, &set, 4), Verdict::True);
                assert!(image.contains(&p.id));
                let lifted = lift_local_slice(&alg, &modq, &image).unwrap();
                assert_eq!(lifted.len(), 4);
            }
        }
    }

    #[test]
    fn canonical_image_of_hereditary_case_is_the_injective_slice() {
        let m = build_model(&Quiver::d_type(4)).unwrap();
        let c = ClusterCategory::new(&m);
        let alg = build_algebra(&c, &c.projective_object()).unwrap();
        let modq = mod_b_quiver(&alg).unwrap();
        let s = canonical_slice_image(&alg, &modq).unwrap();
        assert_eq!(s, SliceCandidate::new(m.inj_pos.values()));
        assert_eq!(lift_local_slice(&alg, &modq, &s).unwrap(), s);
        assert_eq!(canonical_grade_rule(&alg, &modq).unwrap(), (true, 0, 0));
    }

    #[test]
    fn non_tree_is_unsupported() {
        // D4 model exists, but repairing on a quiver that is not a tree must be rejected
        let m = build_model(&Quiver::linear_a(3)).unwrap();
        let mut bad = m.clone();
        bad.quiver = Quiver::from_triples(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")]).unwrap();
        assert!(matches!(section_through_avoiding(&bad, 0, &BTreeSet::new()), Err(Error::Unsupported(_))));
    }
}
