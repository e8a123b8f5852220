//! The cluster category as the orbit category of the derived model under F.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::derived::{hammock, DerivedModel};
use crate::error::{validation, Error, Result};
use crate::mesh::MeshCategory;

/// Graded dimensions `dim Hom(X, F^i Y)` with the range of `i` scanned.
/// Outside `scanned` the targets are provably outside the hammock of `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterHom {
    pub grades: BTreeMap<i64, usize>,
    pub scanned: (i64, i64),
}

impl ClusterHom {
    pub fn total(&self) -> usize {
        self.grades.values().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TiltingObject {
    pub summands: BTreeSet<String>,
}

pub const MAX_TILTING_RANK: usize = 6;

pub struct ClusterCategory<'m> {
    pub mesh: MeshCategory<'m>,
    pub domain: Vec<usize>,
}

impl<'m> ClusterCategory<'m> {
    pub fn new(model: &'m DerivedModel) -> Self {
        ClusterCategory { mesh: MeshCategory::new(model), domain: model.fundamental_domain().into_iter().collect() }
    }

    pub fn model(&self) -> &'m DerivedModel {
        self.mesh.model
    }

    /// `Hom(X, F^i Y)` for all `i`, certified by leaving the hammock of `X`
    /// on both sides.
    pub fn cluster_hom(&self, x: usize, y: usize) -> Result<ClusterHom> {
        let m = self.model();
        let h = &m.heights;
        let support = hammock(&m.window, h, x)?;
        let top = (0..support.len()).filter(|&z| support[z] > 0).map(|z| h[z]).max().unwrap();
        let bottom = h[x];
        let mut grades = BTreeMap::new();
        let mut lo = 0i64;
        let mut hi = 0i64;
        let probe = |i: i64| -> Result<usize> {
            m.f_power(y, i).map_err(|_| Error::Resource(format!("window too small to scan grade {i}; enlarge it")))
        };
        // downwards until below x
        let mut i = 0;
        loop {
            let yi = probe(i)?;
            if h[yi] < bottom {
                lo = lo.min(i + 1);
                break;
            }
            if h[yi] <= top {
                let d = self.mesh.hom_dim(x, yi).map_err(|e| match e {
                    Error::Boundary(s) => Error::Resource(s),
                    other => other,
                })?;
                if d > 0 {
                    grades.insert(i, d);
                }
            }
            lo = i;
            i -= 1;
        }
        let mut i = 1;
        loop {
            let yi = probe(i)?;
            if h[yi] > top {
                break;
            }
            if h[yi] >= bottom {
                let d = self.mesh.hom_dim(x, yi)?;
                if d > 0 {
                    grades.insert(i, d);
                }
            }
            hi = i;
            i += 1;
        }
        Ok(ClusterHom { grades, scanned: (lo, hi) })
    }

    pub fn ext1_dim(&self, x: usize, y: usize) -> Result<usize> {
        let sy = self.model().apply(&self.model().shift, y)?;
        Ok(self.cluster_hom(x, sy)?.total())
    }

    pub fn resolve(&self, t: &TiltingObject) -> Result<Vec<usize>> {
        let fd: BTreeSet<usize> = self.domain.iter().copied().collect();
        t.summands
            .iter()
            .map(|s| {
                let i = self.model().point(s)?;
                if fd.contains(&i) {
                    Ok(i)
                } else {
                    Err(validation!("{s} is not in the fundamental domain"))
                }
            })
            .collect()
    }

    pub fn is_tilting(&self, t: &TiltingObject) -> Result<bool> {
        let pts = self.resolve(t)?;
        if pts.len() != self.model().rank() {
            return Ok(false);
        }
        for &a in &pts {
            for &b in &pts {
                if self.ext1_dim(a, b)? > 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn compatibility(&self) -> Result<Vec<Vec<bool>>> {
        let n = self.domain.len();
        let mut ok = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                ok[i][j] = self.ext1_dim(self.domain[i], self.domain[j])? == 0;
            }
        }
        Ok(ok)
    }

    fn to_object(&self, idx: &[usize]) -> TiltingObject {
        TiltingObject {
            summands: idx.iter().map(|&i| self.model().window.id(self.domain[i]).to_string()).collect(),
        }
    }

    fn check_rank(&self) -> Result<usize> {
        let r = self.model().rank();
        if r > MAX_TILTING_RANK {
            return Err(Error::Resource(format!("rank {r} exceeds the tilting enumeration cap {MAX_TILTING_RANK}")));
        }
        Ok(r)
    }

    /// Tilting objects as cliques of size rank in the Ext-compatibility graph.
    pub fn enumerate_tilting(&self) -> Result<Vec<TiltingObject>> {
        let r = self.check_rank()?;
        let ok = self.compatibility()?;
        let n = self.domain.len();
        let verts: Vec<usize> = (0..n).filter(|&i| ok[i][i]).collect();
        let mut out = BTreeSet::new();
        let mut clique = Vec::new();
        fn grow(
            cand: &[usize],
            clique: &mut Vec<usize>,
            r: usize,
            ok: &[Vec<bool>],
            out: &mut BTreeSet<Vec<usize>>,
        ) {
            if clique.len() == r {
                out.insert(clique.clone());
                return;
            }
            if clique.len() + cand.len() < r {
                return;
            }
            for (k, &v) in cand.iter().enumerate() {
                let rest: Vec<usize> = cand[k + 1..].iter().copied().filter(|&w| ok[v][w] && ok[w][v]).collect();
                clique.push(v);
                grow(&rest, clique, r, ok, out);
                clique.pop();
            }
        }
        grow(&verts, &mut clique, r, &ok, &mut out);
        let mut objs: Vec<TiltingObject> = out.iter().map(|c| self.to_object(c)).collect();
        objs.sort();
        Ok(objs)
    }

    /// Every rank-subset of the fundamental domain passed through `is_tilting`.
    pub fn naive_tilting(&self) -> Result<Vec<TiltingObject>> {
        let r = self.check_rank()?;
        let n = self.domain.len();
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..r).collect();
        if r > n {
            return Ok(out);
        }
        loop {
            let t = self.to_object(&idx);
            if self.is_tilting(&t)? {
                out.push(t);
            }
            // next combination
            let mut k = r;
            while k > 0 && idx[k - 1] == n - r + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..r {
                idx[j] = idx[j - 1] + 1;
            }
        }
        out.sort();
        Ok(out)
    }

    /// The projectives of `mod kQ`.
    pub fn projective_object(&self) -> TiltingObject {
        TiltingObject { summands: self.model().proj_pos.values().cloned().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::build_model;
    use crate::quiver::Quiver;

    #[test]
    fn a2_cluster_hom_table() {
        let m = build_model(&Quiver::linear_a(2)).unwrap();
        let c = ClusterCategory::new(&m);
        let d = &c.domain;
        assert_eq!(d.len(), 5);
        let table: Vec<Vec<usize>> =
            d.iter().map(|&x| d.iter().map(|&y| c.cluster_hom(x, y).unwrap().total()).collect()).collect();
        // AR quiver of the orbit category is a 5-cycle P1 -> P2 -> I1 -> P1[1] -> P2[1] -> P1
        // and each object maps only to itself and its successor
        let expect = vec![
            vec![1, 1, 0, 0, 0],
            vec![0, 1, 1, 0, 0],
            vec![0, 0, 1, 1, 0],
            vec![0, 0, 0, 1, 1],
            vec![1, 0, 0, 0, 1],
        ];
        let names: Vec<&str> = d.iter().map(|&i| m.window.id(i)).collect();
        assert_eq!(names, ["0:1", "0:2", "1:1", "1:2", "2:1"]);
        assert_eq!(table, expect);
        for &x in d {
            assert!(c.cluster_hom(x, x).unwrap().grades[&0] >= 1);
        }
    }

    #[test]
    fn ext_symmetry_and_rigidity() {
        for q in [Quiver::linear_a(2), Quiver::linear_a(3), Quiver::d_type(4)] {
            let m = build_model(&q).unwrap();
            let c = ClusterCategory::new(&m);
            for &x in &c.domain {
                assert_eq!(c.ext1_dim(x, x).unwrap(), 0);
                for &y in &c.domain {
                    assert_eq!(c.ext1_dim(x, y).unwrap(), c.ext1_dim(y, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn module_homs_live_in_grades_zero_and_one() {
        let m = build_model(&Quiver::d_type(4)).unwrap();
        let c = ClusterCategory::new(&m);
        for x in m.module_points() {
            for y in m.module_points() {
                let h = c.cluster_hom(x, y).unwrap();
                assert!(h.grades.keys().all(|&i| i == 0 || i == 1), "{h:?}");
            }
        }
    }

    #[test]
    fn tilting_counts() {
        for (q, n) in [(Quiver::linear_a(2), 5), (Quiver::linear_a(3), 14), (Quiver::d_type(4), 50)] {
            let m = build_model(&q).unwrap();
            let c = ClusterCategory::new(&m);
            let fast = c.enumerate_tilting().unwrap();
            assert_eq!(fast.len(), n);
            assert!(fast.iter().all(|t| t.summands.len() == m.rank()));
            assert!(c.is_tilting(&c.projective_object()).unwrap());
        }
    }
}
