//! The endomorphism algebra `B` of a tilting object in the cluster category,
//! presented by a quiver with relations.
//!
//! A basis element with `src = y`, `tgt = x` and grade `i` is a morphism
//! `T_y -> F^i T_x` of the derived category; it lies in `e_x B e_y` and an
//! arrow `x -> y` of the quiver is such an element. The product `a * b` of
//! `a` in `e_x B e_y` and `b` in `e_y B e_z` is the composite
//! `F^i(a) . b` where `i` is the grade of `b`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::{ClusterCategory, TiltingObject};
use crate::error::{validation, Error, Result};
use crate::derived::RawModel;
use crate::linalg::{axpy, is_zero, rat_to_string, unit, zeros, Rat, Subspace};
use crate::mesh::MorphismVector;
use crate::presentation::{minimal_generators, paths_of_length, PathSpace, Presentation};
use crate::quiver::{Arrow, Quiver};

pub const PATH_CAP: usize = 200_000;
pub const MAX_RELATION_LENGTH: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisElem {
    /// Summand index of the source of the morphism.
    pub src: usize,
    /// Summand index of the target of the morphism.
    pub tgt: usize,
    pub grade: i64,
    /// Index in the path basis of `Hom(T_src, F^grade T_tgt)`.
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowLift {
    pub id: String,
    /// Quiver vertices `from -> to`, i.e. a morphism `T_to -> F^grade T_from`.
    pub from: usize,
    pub to: usize,
    pub grade: i64,
    pub element: usize,
}

pub struct ClusterTiltedAlgebra<'c, 'm> {
    pub cat: &'c ClusterCategory<'m>,
    pub tilting: TiltingObject,
    /// Summand points in the window, in the order of `tilting.summands`.
    pub summands: Vec<usize>,
    pub basis: Vec<BasisElem>,
    index: HashMap<BasisElem, usize>,
    /// `table[a][b]` is `a * b` in the basis, or `None` when the idempotents do not match.
    table: Vec<Vec<Option<Vec<Rat>>>>,
    pub identities: Vec<usize>,
    pub arrows: Vec<ArrowLift>,
    pub quiver: Quiver,
    pub relations: Vec<crate::presentation::Relation>,
    pub relation_length: usize,
}

impl<'c, 'm> ClusterTiltedAlgebra<'c, 'm> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn element_index(&self, e: &BasisElem) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// The derived-category morphism underlying a basis element.
    pub fn morphism(&self, b: usize) -> Result<MorphismVector> {
        let e = &self.basis[b];
        let m = self.cat.model();
        let t = m.f_power(self.summands[e.tgt], e.grade)?;
        self.cat.mesh.basis_vector(self.summands[e.src], t, e.k)
    }

    /// Coordinates of a morphism `T_src -> F^grade T_tgt`.
    fn coords(&self, src: usize, tgt: usize, grade: i64, mv: &MorphismVector) -> Vec<Rat> {
        let mut out = zeros(self.dim());
        for (k, c) in mv.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[self.index[&BasisElem { src, tgt, grade, k }]] = c.clone();
            }
        }
        out
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> Option<&[Rat]> {
        self.table[a][b].as_deref()
    }

    pub fn mul(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        let mut out = zeros(self.dim());
        for (a, ca) in u.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in v.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                if let Some(p) = &self.table[a][b] {
                    axpy(&mut out, &(ca * cb), p);
                }
            }
        }
        out
    }

    /// Image of a path of arrows (indices into `arrows`) in `B`.
    pub fn eval_path(&self, path: &[usize]) -> Vec<Rat> {
        let mut v = unit(self.dim(), self.arrows[path[0]].element);
        for &a in &path[1..] {
            v = self.mul(&v, &unit(self.dim(), self.arrows[a].element));
        }
        v
    }

    pub fn presentation(&self) -> Presentation {
        Presentation { quiver: self.quiver.clone(), relations: self.relations.clone() }
    }

    /// The radical: everything except the identities.
    pub fn radical_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|b| !self.identities.contains(b)).collect()
    }

    pub fn radical_square(&self) -> Subspace {
        let rad = self.radical_basis();
        let mut s = Subspace::new(self.dim());
        for &a in &rad {
            for &b in &rad {
                if let Some(p) = &self.table[a][b] {
                    s.insert(p.clone());
                }
            }
        }
        s
    }

    /// Total dimension of the grade-1 part: `sum dim Hom(T_y, F T_x)`.
    pub fn grade_one_dim(&self) -> usize {
        self.basis.iter().filter(|e| e.grade == 1).count()
    }

    pub fn vertex_name(&self, x: usize) -> &str {
        &self.quiver.vertices()[x]
    }

    /// Nonzero structure constants `(a, b, a * b)`, coefficients as exact strings.
    pub fn structure_constants(&self) -> Vec<StructureConstant> {
        let mut out = Vec::new();
        for (a, row) in self.table.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let Some(v) = v else { continue };
                let terms: Vec<(usize, String)> =
                    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, rat_to_string(c))).collect();
                if !terms.is_empty() {
                    out.push(StructureConstant { a, b, product: terms });
                }
            }
        }
        out
    }

    pub fn record(&self) -> AlgebraRecord {
        AlgebraRecord {
            model: self.cat.model().to_raw(),
            tilting: self.tilting.clone(),
            basis: self.basis.clone(),
            structure: self.structure_constants(),
            arrows: self.arrows.clone(),
            presentation: self.presentation(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstant {
    pub a: usize,
    pub b: usize,
    pub product: Vec<(usize, String)>,
}

/// Serializable form of an algebra. Loading rebuilds it from `model` and
/// `tilting` and requires every other field to match.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraRecord {
    pub model: RawModel,
    pub tilting: TiltingObject,
    pub basis: Vec<BasisElem>,
    pub structure: Vec<StructureConstant>,
    pub arrows: Vec<ArrowLift>,
    pub presentation: Presentation,
}

pub fn build_algebra<'c, 'm>(cat: &'c ClusterCategory<'m>, t: &TiltingObject) -> Result<ClusterTiltedAlgebra<'c, 'm>> {
    if !cat.is_tilting(t)? {
        return Err(validation!("not a tilting object"));
    }
    let summands = cat.resolve(t)?;
    let r = summands.len();
    let mut basis = Vec::new();
    for src in 0..r {
        for tgt in 0..r {
            let h = cat.cluster_hom(summands[src], summands[tgt])?;
            for (&grade, &d) in &h.grades {
                for k in 0..d {
                    basis.push(BasisElem { src, tgt, grade, k });
                }
            }
        }
    }
    basis.sort();
    let index: HashMap<BasisElem, usize> = basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut alg = ClusterTiltedAlgebra {
        cat,
        tilting: t.clone(),
        summands,
        basis,
        index,
        table: Vec::new(),
        identities: Vec::new(),
        arrows: Vec::new(),
        quiver: Quiver::new(Vec::new(), Vec::new())?,
        relations: Vec::new(),
        relation_length: 0,
    };
    let n = alg.dim();

    for x in 0..r {
        let e = BasisElem { src: x, tgt: x, grade: 0, k: 0 };
        let i = *alg.index.get(&e).ok_or_else(|| Error::AlgorithmFailure("summand without identity".into()))?;
        if alg.basis.iter().filter(|b| b.src == x && b.tgt == x).count() != 1 {
            return Err(Error::AlgorithmFailure(format!("End of summand {x} is not one-dimensional")));
        }
        alg.identities.push(i);
    }

    // structure constants: a in e_x B e_y, b in e_y B e_z
    let morphs: Vec<MorphismVector> = (0..n).map(|b| alg.morphism(b)).collect::<Result<_>>()?;
    let mut table = vec![vec![None; n]; n];
    for a in 0..n {
        for b in 0..n {
            let (ea, eb) = (&alg.basis[a], &alg.basis[b]);
            if ea.src != eb.tgt {
                continue;
            }
            let grade = ea.grade + eb.grade;
            let fa = cat.mesh.transport_f_power(&morphs[a], eb.grade)?;
            let prod = cat.mesh.compose(&morphs[b], &fa)?;
            let v = if prod.coeffs.is_empty() || is_zero(&prod.coeffs) {
                zeros(n)
            } else {
                if !alg.index.contains_key(&BasisElem { src: eb.src, tgt: ea.tgt, grade, k: 0 }) {
                    return Err(Error::AlgorithmFailure("product leaves the graded basis".into()));
                }
                alg.coords(eb.src, ea.tgt, grade, &prod)
            };
            table[a][b] = Some(v);
        }
    }
    alg.table = table;

    // arrows: homogeneous basis elements completing rad^2 blockwise
    let rad2 = alg.radical_square();
    let mut blocks: BTreeMap<(usize, usize, i64), Vec<usize>> = BTreeMap::new();
    for b in alg.radical_basis() {
        let e = &alg.basis[b];
        blocks.entry((e.tgt, e.src, e.grade)).or_default().push(b);
    }
    let mut lifts = Vec::new();
    for ((from, to, grade), elems) in blocks {
        let mut span = Subspace::new(n);
        for row in rad2.rows() {
            // rad^2 is spanned by homogeneous products, so its rows restricted to the block span the block part
            let in_block: Vec<Rat> = (0..n).map(|i| if elems.contains(&i) { row[i].clone() } else { Rat::zero() }).collect();
            span.insert(in_block);
        }
        for &b in &elems {
            if span.insert(unit(n, b)) {
                lifts.push((from, to, grade, b));
            }
        }
    }
    let vertices: Vec<String> = (0..r).map(|x| (x + 1).to_string()).collect();
    let mut arrows = Vec::new();
    for (k, &(from, to, grade, element)) in lifts.iter().enumerate() {
        let id = format!("a{}", k + 1);
        alg.arrows.push(ArrowLift { id: id.clone(), from, to, grade, element });
        arrows.push(Arrow { id, from: vertices[from].clone(), to: vertices[to].clone() });
    }
    alg.quiver = Quiver::new(vertices, arrows)?;
    check_rad_ideal(&alg, &rad2)?;
    let (rels, len) = relations_of(&alg.quiver, |p| alg.eval_path(p), None)?;
    alg.relations = rels;
    alg.relation_length = len;
    Ok(alg)
}

fn check_rad_ideal(alg: &ClusterTiltedAlgebra, rad2: &Subspace) -> Result<()> {
    // rad is closed under multiplication by B, and the arrows generate rad modulo rad^2
    let n = alg.dim();
    let mut rad = Subspace::new(n);
    for b in alg.radical_basis() {
        rad.insert(unit(n, b));
    }
    for a in 0..n {
        for &b in &alg.radical_basis() {
            for (x, y) in [(a, b), (b, a)] {
                if let Some(p) = alg.mul_basis(x, y) {
                    if !rad.contains(p) {
                        return Err(Error::AlgorithmFailure("radical is not an ideal".into()));
                    }
                }
            }
        }
    }
    let mut gen = rad2.clone();
    for a in &alg.arrows {
        gen.insert(unit(n, a.element));
    }
    if gen.dim() != rad.dim() {
        return Err(Error::AlgorithmFailure("arrows do not generate the radical".into()));
    }
    Ok(())
}

/// Minimal relations of `kQ -> A` where `eval` sends a path to a vector and
/// `modulo` optionally reduces images. Returns the relations and the first
/// length at which every path vanishes.
pub fn relations_of(
    q: &Quiver,
    eval: impl Fn(&[usize]) -> Vec<Rat>,
    modulo: Option<&Subspace>,
) -> Result<(Vec<crate::presentation::Relation>, usize)> {
    let image = |p: &[usize]| {
        let mut v = eval(p);
        if let Some(s) = modulo {
            s.reduce(&mut v);
        }
        v
    };
    let mut top = 1;
    loop {
        top += 1;
        if top > MAX_RELATION_LENGTH {
            return Err(Error::Resource(format!("paths do not vanish up to length {MAX_RELATION_LENGTH}")));
        }
        let paths = paths_of_length(q, top);
        if paths.iter().all(|p| is_zero(&image(p))) {
            break;
        }
    }
    let space = PathSpace::new(q, 2, top, PATH_CAP)?;
    let kernel = kernel_in(&space, &image);
    Ok((minimal_generators(&space, q, &kernel), top))
}

/// Kernel of the evaluation map on a truncated path space.
pub fn kernel_in(space: &PathSpace, image: &dyn Fn(&[usize]) -> Vec<Rat>) -> Subspace {
    let cols: Vec<Vec<Rat>> = space.paths.iter().map(|p| image(p)).collect();
    let m = cols.first().map_or(0, |c| c.len());
    let k = crate::linalg::kernel_of_columns(&cols, m);
    Subspace::spanned_by(space.dim(), &k)
}

impl<'c, 'm> ClusterTiltedAlgebra<'c, 'm> {
    /// Checks associativity on every composable triple of basis elements.
    pub fn check_associative(&self) -> bool {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = &self.table[a][b] else { continue };
                for c in 0..n {
                    if self.table[b][c].is_none() {
                        continue;
                    }
                    let left = self.mul(ab, &unit(n, c));
                    let right = self.mul(&unit(n, a), self.table[b][c].as_ref().unwrap());
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn identity_acts_trivially(&self) -> bool {
        let n = self.dim();
        (0..n).all(|b| {
            let e = &self.basis[b];
            let left = self.mul(&unit(n, self.identities[e.tgt]), &unit(n, b));
            let right = self.mul(&unit(n, b), &unit(n, self.identities[e.src]));
            left == unit(n, b) && right == unit(n, b) && !left.iter().any(|c| c != &Rat::zero() && c != &Rat::one())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::build_model;
    use crate::presentation::{equivalent, relation};

    #[test]
    fn hereditary_case_has_no_relations() {
        for q in [Quiver::linear_a(3), Quiver::d_type(4)] {
            let m = build_model(&q).unwrap();
            let c = ClusterCategory::new(&m);
            let alg = build_algebra(&c, &c.projective_object()).unwrap();
            assert!(alg.relations.is_empty());
            assert!(alg.arrows.iter().all(|a| a.grade == 0));
            assert_eq!(alg.quiver.arrow_count(), q.arrow_count());
            assert!(crate::quiver::vertex_isomorphisms(&alg.quiver, &q).len() + crate::quiver::vertex_isomorphisms(&alg.quiver, &q.opposite()).len() > 0);
            assert!(alg.check_associative());
            assert!(alg.identity_acts_trivially());
        }
    }

    #[test]
    fn a2_algebras_from_independent_end_table() {
        let m = build_model(&Quiver::linear_a(2)).unwrap();
        let c = ClusterCategory::new(&m);
        for t in c.enumerate_tilting().unwrap() {
            let alg = build_algebra(&c, &t).unwrap();
            // End table: dimension = sum of total cluster-hom dimensions between summands
            let pts = c.resolve(&t).unwrap();
            let expect: usize = pts.iter().flat_map(|&a| pts.iter().map(move |&b| (a, b))).map(|(a, b)| c.cluster_hom(a, b).unwrap().total()).sum();
            assert_eq!(alg.dim(), expect);
            // every A2 cluster-tilted algebra is the path algebra of A2
            assert_eq!(alg.dim(), 3);
            assert_eq!(alg.quiver.arrow_count(), 1);
            assert!(alg.relations.is_empty());
        }
    }

    #[test]
    fn d4_contains_the_cyclic_example() {
        let m = build_model(&Quiver::d_type(4)).unwrap();
        let c = ClusterCategory::new(&m);
        let target = Presentation::new(
            Quiver::from_triples(
                &["1", "2", "3", "4"],
                &[("beta", "2", "1"), ("eps", "1", "4"), ("alpha", "4", "2"), ("gamma", "4", "3"), ("delta", "3", "1")],
            )
            .unwrap(),
            vec![
                relation(&[(1, &["alpha", "beta"]), (-1, &["gamma", "delta"])]),
                relation(&[(1, &["beta", "eps"])]),
                relation(&[(1, &["delta", "eps"])]),
                relation(&[(1, &["eps", "alpha"])]),
                relation(&[(1, &["eps", "gamma"])]),
            ],
        )
        .unwrap();
        let mut found = 0;
        for t in c.enumerate_tilting().unwrap() {
            let alg = build_algebra(&c, &t).unwrap();
            assert!(alg.check_associative());
            if equivalent(&alg.presentation(), &target) {
                found += 1;
            }
        }
        assert!(found >= 1);
    }
}
