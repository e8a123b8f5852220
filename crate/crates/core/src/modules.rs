//! Modules over a cluster-tilted algebra: the Auslander-Reiten quiver,
//! module structures `Hom(T, M)`, annihilators of slices and the tilted
//! quotients they cut out.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{kernel_in, relations_of, ClusterTiltedAlgebra, PATH_CAP};
use crate::error::{validation, Error, Result};
use crate::linalg::{kernel_of_columns, solve_columns, unit, zeros, Rat, Subspace};
use crate::presentation::{dedup, equivalent, PathSpace, Presentation};
use crate::quiver::{Arrow, Quiver};
use crate::slices::{enumerate_local_slices, is_local_slice, SliceCandidate, Verdict};
use crate::translation::TranslationQuiver;

/// Positions `tau T_x` in the cluster quiver, as fundamental-domain ids.
pub fn tau_t_positions(alg: &ClusterTiltedAlgebra) -> Result<Vec<String>> {
    let m = alg.cat.model();
    alg.summands
        .iter()
        .map(|&t| {
            let tt = m.window.tau(t).ok_or_else(|| Error::Boundary("tau of a summand leaves the window".into()))?;
            let (r, _) = m.fd_representative(tt)?;
            Ok(m.window.id(r).to_string())
        })
        .collect()
}

/// `Gamma(mod B)`: the cluster quiver with the points `tau T_x` deleted.
pub fn mod_b_quiver(alg: &ClusterTiltedAlgebra) -> Result<TranslationQuiver> {
    let c = alg.cat.model().cluster_quiver()?;
    let gone = tau_t_positions(alg)?;
    Ok(c.delete_points(&gone)?.with_rank_hint(Some(alg.rank())))
}

/// The right `B`-module `Hom(T, S)` with one matrix per basis element of `B`.
#[derive(Clone, Debug)]
pub struct ModuleAction {
    pub point: usize,
    /// `(summand, grade)` blocks with their dimensions.
    pub blocks: Vec<(usize, i64, usize)>,
    pub dim: usize,
    pub dim_vector: Vec<usize>,
    /// `matrices[b][j]` is the image of the `j`-th basis vector under `b`.
    pub matrices: Vec<Vec<Vec<Rat>>>,
}

impl ModuleAction {
    pub fn act(&self, b: usize, v: &[Rat]) -> Vec<Rat> {
        let mut out = zeros(self.dim);
        for (c, col) in v.iter().zip(&self.matrices[b]) {
            crate::linalg::axpy(&mut out, c, col);
        }
        out
    }

    pub fn flattened(&self, b: usize) -> Vec<Rat> {
        self.matrices[b].iter().flatten().cloned().collect()
    }
}

pub fn module_action(alg: &ClusterTiltedAlgebra, point: &str) -> Result<ModuleAction> {
    let m = alg.cat.model();
    if tau_t_positions(alg)?.iter().any(|p| p == point) {
        return Err(validation!("{point} is a deleted position"));
    }
    let s = m.point(point)?;
    if !alg.cat.domain.contains(&s) {
        return Err(validation!("{point} is not in the fundamental domain"));
    }
    let mesh = &alg.cat.mesh;
    let mut blocks = Vec::new();
    let mut offset = BTreeMap::new();
    let mut dim = 0;
    let mut dim_vector = vec![0; alg.rank()];
    for (x, &t) in alg.summands.iter().enumerate() {
        for (&i, &d) in &alg.cat.cluster_hom(t, s)?.grades {
            offset.insert((x, i), dim);
            blocks.push((x, i, d));
            dim += d;
            dim_vector[x] += d;
        }
    }
    // basis morphisms of each block
    let mut vecs = Vec::new();
    for &(x, i, d) in &blocks {
        let target = m.f_power(s, i)?;
        for k in 0..d {
            vecs.push((x, i, mesh.basis_vector(alg.summands[x], target, k)?));
        }
    }
    let mut matrices = Vec::with_capacity(alg.dim());
    for b in 0..alg.dim() {
        let e = &alg.basis[b];
        let mor = alg.morphism(b)?;
        let mut cols = Vec::with_capacity(dim);
        for (x, i, v) in &vecs {
            let mut col = zeros(dim);
            if *x == e.tgt {
                let moved = mesh.transport_f_power(v, e.grade)?;
                let prod = mesh.compose(&mor, &moved)?;
                if !prod.is_zero() {
                    let off = offset.get(&(e.src, i + e.grade)).ok_or_else(|| {
                        Error::AlgorithmFailure(format!("action of a basis element leaves the grades of {point}"))
                    })?;
                    for (k, c) in prod.coeffs.iter().enumerate() {
                        col[off + k] = c.clone();
                    }
                }
            }
            cols.push(col);
        }
        matrices.push(cols);
    }
    Ok(ModuleAction { point: s, blocks, dim, dim_vector, matrices })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnIdeal {
    pub slice: SliceCandidate,
    #[serde(skip)]
    pub ideal: Option<Subspace>,
    pub dim: usize,
    pub arrow_generators: Vec<String>,
    /// Dimension of the two-sided ideal generated by the arrow generators.
    pub generated_dim: usize,
    #[serde(skip)]
    pub generator_elements: Vec<Vec<Rat>>,
}

impl AnnIdeal {
    pub fn ideal(&self) -> &Subspace {
        self.ideal.as_ref().expect("ideal present")
    }

    pub fn generated_by_arrows(&self) -> bool {
        self.generated_dim == self.dim
    }
}

/// Block of `rad^2` inside `e_x B e_y`.
fn rad2_block(alg: &ClusterTiltedAlgebra, rad2: &Subspace, x: usize, y: usize) -> Vec<Vec<Rat>> {
    rad2.rows()
        .iter()
        .filter(|row| {
            row.iter().enumerate().all(|(i, c)| c.is_zero() || (alg.basis[i].tgt == x && alg.basis[i].src == y))
        })
        .cloned()
        .collect()
}

pub fn two_sided_ideal(alg: &ClusterTiltedAlgebra, gens: &[Vec<Rat>]) -> Subspace {
    let n = alg.dim();
    let mut s = Subspace::spanned_by(n, gens);
    let mut todo: Vec<Vec<Rat>> = s.rows().to_vec();
    while let Some(v) = todo.pop() {
        for b in 0..n {
            let e = unit(n, b);
            for w in [alg.mul(&e, &v), alg.mul(&v, &e)] {
                if s.insert(w.clone()) {
                    todo.push(w);
                }
            }
        }
    }
    s
}

/// Annihilator of the modules of a local slice of `Gamma(mod B)`.
pub fn annihilator(alg: &ClusterTiltedAlgebra, modq: &TranslationQuiver, slice: &SliceCandidate) -> Result<AnnIdeal> {
    if is_local_slice(modq, slice)? != Verdict::True {
        return Err(validation!("not a local slice"));
    }
    annihilator_unchecked(alg, slice)
}

pub fn annihilator_unchecked(alg: &ClusterTiltedAlgebra, slice: &SliceCandidate) -> Result<AnnIdeal> {
    let actions: Vec<ModuleAction> = slice.points.iter().map(|p| module_action(alg, p)).collect::<Result<_>>()?;
    let n = alg.dim();
    let phi: Vec<Vec<Rat>> = (0..n).map(|b| actions.iter().flat_map(|a| a.flattened(b)).collect()).collect();
    let m = phi.first().map_or(0, |v| v.len());
    let ideal = Subspace::spanned_by(n, &kernel_of_columns(&phi, m));

    let rad2 = alg.radical_square();
    let mut arrow_generators = Vec::new();
    let mut generator_elements = Vec::new();
    for a in &alg.arrows {
        let block = rad2_block(alg, &rad2, a.from, a.to);
        let cols: Vec<Vec<Rat>> = block
            .iter()
            .map(|r| {
                let mut acc = zeros(m);
                for (i, c) in r.iter().enumerate() {
                    crate::linalg::axpy(&mut acc, c, &phi[i]);
                }
                acc
            })
            .collect();
        let target: Vec<Rat> = phi[a.element].iter().map(|c| -c.clone()).collect();
        if let Some(coef) = solve_columns(&cols, &target) {
            let mut g = unit(n, a.element);
            for (c, r) in coef.iter().zip(&block) {
                crate::linalg::axpy(&mut g, c, r);
            }
            debug_assert!(ideal.contains(&g));
            arrow_generators.push(a.id.clone());
            generator_elements.push(g);
        }
    }
    let generated = two_sided_ideal(alg, &generator_elements);
    if !ideal.contains_subspace(&generated) {
        return Err(Error::AlgorithmFailure("ideal generated by annihilating arrows leaves the annihilator".into()));
    }
    Ok(AnnIdeal {
        slice: slice.clone(),
        dim: ideal.dim(),
        ideal: Some(ideal),
        arrow_generators,
        generated_dim: generated.dim(),
        generator_elements,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TiltedQuotient {
    pub presentation: Presentation,
    /// Both kernel computations span the same ideal.
    pub routes_agree: bool,
}

/// `B / Ann` presented on the quiver of `B` minus the annihilating arrows.
pub fn tilted_quotient(alg: &ClusterTiltedAlgebra, ann: &AnnIdeal) -> Result<TiltedQuotient> {
    let kept: Vec<usize> =
        (0..alg.arrows.len()).filter(|&k| !ann.arrow_generators.contains(&alg.arrows[k].id)).collect();
    let arrows: Vec<Arrow> = kept.iter().map(|&k| alg.quiver.arrows()[k].clone()).collect();
    let q = Quiver::new(alg.quiver.vertices().to_vec(), arrows)?;
    let eval = |p: &[usize]| -> Vec<Rat> {
        let mapped: Vec<usize> = p.iter().map(|&a| kept[a]).collect();
        alg.eval_path(&mapped)
    };
    if q.arrow_count() == 0 {
        return Ok(TiltedQuotient { presentation: Presentation::new(q, Vec::new())?, routes_agree: true });
    }
    let (rels, top) = relations_of(&q, eval, Some(ann.ideal()))?;
    // route one: kernel modulo Ann; route two: kernel in B itself, closed up as an ideal
    let space = PathSpace::new(&q, 2, top, PATH_CAP)?;
    let ideal = ann.ideal();
    let k1 = kernel_in(&space, &|p: &[usize]| {
        let mut v = eval(p);
        ideal.reduce(&mut v);
        v
    });
    let k2 = kernel_in(&space, &eval);
    let k2 = space.ideal_closure(&q, k2.rows());
    // the truncation at `top` adds every path of that length to both sides
    let mut k2_full = k2.clone();
    for p in crate::presentation::paths_of_length(&q, top) {
        k2_full.insert(unit(space.dim(), space.position(&p).unwrap()));
    }
    let routes_agree = k1.same_span(&k2_full);
    Ok(TiltedQuotient { presentation: Presentation::new(q, rels)?, routes_agree })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Realization {
    /// Each local slice with the index of its presentation.
    pub slices: Vec<(SliceCandidate, usize)>,
    pub presentations: Vec<Presentation>,
}

pub fn realizing_tilted_algebras(alg: &ClusterTiltedAlgebra) -> Result<Realization> {
    let modq = mod_b_quiver(alg)?;
    let mut all = Vec::new();
    for s in enumerate_local_slices(&modq)? {
        let ann = annihilator_unchecked(alg, &s)?;
        let tq = tilted_quotient(alg, &ann)?;
        all.push((s, tq.presentation));
    }
    let presentations = dedup(all.iter().map(|(_, p)| p.clone()).collect());
    let slices = all
        .into_iter()
        .map(|(s, p)| {
            let k = presentations.iter().position(|o| equivalent(o, &p)).expect("deduplicated class");
            (s, k)
        })
        .collect();
    Ok(Realization { slices, presentations })
}

/// Total dimension of every module on the quiver.
pub fn dimension_table(alg: &ClusterTiltedAlgebra) -> Result<BTreeMap<String, Vec<usize>>> {
    let modq = mod_b_quiver(alg)?;
    modq.points().iter().map(|p| Ok((p.id.clone(), module_action(alg, &p.id)?.dim_vector))).collect()
}

pub fn deleted_set(alg: &ClusterTiltedAlgebra) -> Result<BTreeSet<String>> {
    Ok(tau_t_positions(alg)?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::cluster::ClusterCategory;
    use crate::derived::build_model;

    #[test]
    fn modules_are_right_modules_and_projectives_sit_at_summands() {
        let m = build_model(&Quiver::d_type(4)).unwrap();
        let c = ClusterCategory::new(&m);
        let tilts = c.enumerate_tilting().unwrap();
        for t in tilts.iter().step_by(7) {
            let alg = build_algebra(&c, t).unwrap();
            let modq = mod_b_quiver(&alg).unwrap();
            assert_eq!(modq.len(), 12);
            for p in modq.points() {
                let a = module_action(&alg, &p.id).unwrap();
                for x in 0..alg.dim() {
                    for y in 0..alg.dim() {
                        let Some(xy) = alg.mul_basis(x, y) else { continue };
                        for j in 0..a.dim {
                            let v = unit(a.dim, j);
                            // (v . x) . y = v . (x y)
                            let lhs = a.act(y, &a.act(x, &v));
                            let mut rhs = zeros(a.dim);
                            for (b, cb) in xy.iter().enumerate() {
                                crate::linalg::axpy(&mut rhs, cb, &a.act(b, &v));
                            }
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
            for (x, s) in t.summands.iter().enumerate() {
                let a = module_action(&alg, s).unwrap();
                let e = alg.identities[x];
                // the idempotent of x acts as identity on the e_x block
                let v = a.blocks.iter().position(|b| b.0 == x && b.1 == 0).unwrap();
                let j: usize = a.blocks[..v].iter().map(|b| b.2).sum();
                assert_eq!(a.act(e, &unit(a.dim, j)), unit(a.dim, j));
            }
            assert!(module_action(&alg, &tau_t_positions(&alg).unwrap()[0]).is_err());
        }
    }

    #[test]
    fn hereditary_case() {
        let m = build_model(&Quiver::linear_a(3)).unwrap();
        let c = ClusterCategory::new(&m);
        let alg = build_algebra(&c, &c.projective_object()).unwrap();
        let modq = mod_b_quiver(&alg).unwrap();
        let pts: BTreeSet<String> = modq.points().iter().map(|p| p.id.clone()).collect();
        assert_eq!(pts, m.module_range);
        let inj = SliceCandidate::new(m.inj_pos.values());
        let ann = annihilator(&alg, &modq, &inj).unwrap();
        assert_eq!(ann.dim, 0);
        let r = realizing_tilted_algebras(&alg).unwrap();
        assert_eq!(r.presentations.len(), 1);
    }
}
