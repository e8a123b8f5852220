//! Hom spaces of the mesh category of a `ZQ` window.
//!
//! For a source `x` the spaces `Hom(x, z)` are built point by point in
//! increasing height: `Hom(x, z)` is the sum of `Hom(x, w)` over arrows
//! `w -> z` modulo the image of `Hom(x, tau z)` under the mesh at `z`. Basis
//! elements are genuine paths from `x`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::derived::{hammock, DerivedModel};
use crate::error::{validation, Error, Result};
use crate::linalg::{axpy, is_zero, zeros, Rat, Subspace};
use crate::translation::{LevelShift, TranslationQuiver};

pub const DEFAULT_CAP: usize = 1_000_000;

/// An element of `Hom(source, target)` in the path basis of that space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorphismVector {
    pub source: usize,
    pub target: usize,
    pub coeffs: Vec<Rat>,
}

impl MorphismVector {
    pub fn is_zero(&self) -> bool {
        is_zero(&self.coeffs)
    }

    pub fn scaled(&self, c: &Rat) -> MorphismVector {
        MorphismVector { source: self.source, target: self.target, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &MorphismVector) -> Result<MorphismVector> {
        if (self.source, self.target) != (other.source, other.target) {
            return Err(validation!("adding morphisms with different endpoints"));
        }
        let mut coeffs = self.coeffs.clone();
        axpy(&mut coeffs, &Rat::one(), &other.coeffs);
        Ok(MorphismVector { source: self.source, target: self.target, coeffs })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSpace {
    pub source: String,
    pub target: String,
    /// Basis paths as point id sequences, source first.
    pub basis: Vec<Vec<String>>,
    pub dim: usize,
}

/// All Hom spaces out of one source point.
#[derive(Debug)]
struct Cone {
    dims: Vec<usize>,
    basis: Vec<Vec<Vec<usize>>>,
    /// For an arrow `w -> z`, the columns of `Hom(x, w) -> Hom(x, z)`.
    maps: HashMap<(usize, usize), Vec<Vec<Rat>>>,
}

#[derive(Clone, Debug)]
enum ConeError {
    Boundary(String),
    Resource(String),
    Failure(String),
}

impl From<ConeError> for Error {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::Boundary(s) => Error::Boundary(s),
            ConeError::Resource(s) => Error::Resource(s),
            ConeError::Failure(s) => Error::AlgorithmFailure(s),
        }
    }
}

type Slot = Arc<OnceLock<Result<Arc<Cone>, ConeError>>>;

/// The mesh category over a derived model, with a per-source memo table.
pub struct MeshCategory<'m> {
    pub model: &'m DerivedModel,
    cap: usize,
    cache: Mutex<HashMap<usize, Slot>>,
}

impl<'m> MeshCategory<'m> {
    pub fn new(model: &'m DerivedModel) -> Self {
        Self::with_cap(model, DEFAULT_CAP)
    }

    pub fn with_cap(model: &'m DerivedModel, cap: usize) -> Self {
        MeshCategory { model, cap, cache: Mutex::new(HashMap::new()) }
    }

    pub fn window(&self) -> &TranslationQuiver {
        &self.model.window
    }

    fn cone(&self, x: usize) -> Result<Arc<Cone>> {
        let slot = {
            let mut c = self.cache.lock().expect("mesh cache poisoned");
            c.entry(x).or_default().clone()
        };
        slot.get_or_init(|| build_cone(&self.model.window, &self.model.heights, x, self.cap).map(Arc::new))
            .clone()
            .map_err(Error::from)
    }

    fn check_interior(&self, y: usize) -> Result<()> {
        if y >= self.window().len() {
            return Err(validation!("point index {y} out of range"));
        }
        if !self.window().is_interior(y) {
            return Err(Error::Boundary(format!("{} is on the window frontier", self.window().id(y))));
        }
        Ok(())
    }

    /// Dimension of `Hom(x, y)`; the cone it comes from has been checked
    /// against the knitting recursion.
    pub fn hom_dim(&self, x: usize, y: usize) -> Result<usize> {
        self.check_interior(x)?;
        self.check_interior(y)?;
        Ok(self.cone(x)?.dims[y])
    }

    pub fn hom_basis(&self, x: usize, y: usize) -> Result<HomSpace> {
        self.check_interior(x)?;
        self.check_interior(y)?;
        let c = self.cone(x)?;
        let g = self.window();
        Ok(HomSpace {
            source: g.id(x).to_string(),
            target: g.id(y).to_string(),
            basis: c.basis[y].iter().map(|p| p.iter().map(|&i| g.id(i).to_string()).collect()).collect(),
            dim: c.dims[y],
        })
    }

    pub fn basis_paths(&self, x: usize, y: usize) -> Result<Vec<Vec<usize>>> {
        self.check_interior(x)?;
        Ok(self.cone(x)?.basis[y].clone())
    }

    pub fn identity(&self, x: usize) -> Result<MorphismVector> {
        self.check_interior(x)?;
        Ok(MorphismVector { source: x, target: x, coeffs: vec![Rat::one()] })
    }

    pub fn zero(&self, x: usize, y: usize) -> Result<MorphismVector> {
        Ok(MorphismVector { source: x, target: y, coeffs: zeros(self.hom_dim(x, y)?) })
    }

    pub fn basis_vector(&self, x: usize, y: usize, k: usize) -> Result<MorphismVector> {
        let mut v = self.zero(x, y)?;
        if k >= v.coeffs.len() {
            return Err(validation!("basis index {k} out of range"));
        }
        v.coeffs[k] = Rat::one();
        Ok(v)
    }

    /// Pushes a morphism `x -> w` along the path `w = p[0] -> p[1] -> ...`.
    fn push(&self, cone: &Cone, mut v: Vec<Rat>, path: &[usize]) -> Result<Vec<Rat>> {
        for win in path.windows(2) {
            let (w, z) = (win[0], win[1]);
            let Some(cols) = cone.maps.get(&(w, z)) else {
                if !self.window().has_arrow(w, z) {
                    return Err(validation!("{} -> {} is not an arrow", self.window().id(w), self.window().id(z)));
                }
                // both spaces vanish
                v = zeros(cone.dims[z]);
                continue;
            };
            let mut out = zeros(cone.dims[z]);
            for (c, col) in v.iter().zip(cols) {
                axpy(&mut out, c, col);
            }
            v = out;
        }
        Ok(v)
    }

    /// Class of a path given as a point sequence.
    pub fn class_of_path(&self, path: &[usize]) -> Result<MorphismVector> {
        let (&x, &y) = (path.first().ok_or_else(|| validation!("empty path"))?, path.last().unwrap());
        self.check_interior(x)?;
        for &p in path {
            self.check_interior(p)?;
        }
        let cone = self.cone(x)?;
        let coeffs = self.push(&cone, vec![Rat::one()], path)?;
        Ok(MorphismVector { source: x, target: y, coeffs })
    }

    /// `g` after `f`, for `f: x -> y` and `g: y -> z`.
    pub fn compose(&self, f: &MorphismVector, g: &MorphismVector) -> Result<MorphismVector> {
        if f.target != g.source {
            return Err(validation!(
                "cannot compose: {} != {}",
                self.window().id(f.target),
                self.window().id(g.source)
            ));
        }
        let cone = self.cone(f.source)?;
        let paths = self.cone(g.source)?.basis[g.target].clone();
        let mut out = zeros(cone.dims[g.target]);
        for (d, p) in g.coeffs.iter().zip(&paths) {
            if d.is_zero() {
                continue;
            }
            let pushed = self.push(&cone, f.coeffs.clone(), p)?;
            axpy(&mut out, d, &pushed);
        }
        Ok(MorphismVector { source: f.source, target: g.target, coeffs: out })
    }

    /// Image of a morphism under a level-shift automorphism of the window.
    pub fn transport(&self, phi: &LevelShift, f: &MorphismVector) -> Result<MorphismVector> {
        let src = self.model.apply(phi, f.source)?;
        let tgt = self.model.apply(phi, f.target)?;
        self.check_interior(src)?;
        self.check_interior(tgt)?;
        let paths = self.cone(f.source)?.basis[f.target].clone();
        let cone = self.cone(src)?;
        let mut out = zeros(cone.dims[tgt]);
        for (c, p) in f.coeffs.iter().zip(&paths) {
            if c.is_zero() {
                continue;
            }
            let image: Vec<usize> = p.iter().map(|&i| self.model.apply(phi, i)).collect::<Result<_>>()?;
            let v = self.push(&cone, vec![Rat::one()], &image)?;
            axpy(&mut out, c, &v);
        }
        Ok(MorphismVector { source: src, target: tgt, coeffs: out })
    }

    pub fn transport_f(&self, f: &MorphismVector) -> Result<MorphismVector> {
        self.transport(&self.model.f, f)
    }

    /// `F^k` applied to a morphism.
    pub fn transport_f_power(&self, f: &MorphismVector, k: i64) -> Result<MorphismVector> {
        let step = if k >= 0 { self.model.f.clone() } else { self.model.f.inverse() };
        let mut cur = f.clone();
        for _ in 0..k.unsigned_abs() {
            cur = self.transport(&step, &cur)?;
        }
        Ok(cur)
    }
}

fn build_cone(g: &TranslationQuiver, heights: &[i64], x: usize, cap: usize) -> Result<Cone, ConeError> {
    let oracle = hammock(g, heights, x).map_err(|e| ConeError::Boundary(e.to_string()))?;
    let cone = cone_dp(g, heights, x, cap)?;
    for (z, (&d, &o)) in cone.dims.iter().zip(&oracle).enumerate() {
        if d != o {
            return Err(ConeError::Failure(format!(
                "knitting gives dim Hom({}, {}) = {o} but linear algebra gives {d}",
                g.id(x),
                g.id(z)
            )));
        }
    }
    Ok(cone)
}

/// Dimensions of `Hom(x, -)` from linear algebra on paths modulo mesh
/// relations alone, with no reference to the knitting recursion.
pub fn mesh_rank_dims(g: &TranslationQuiver, heights: &[i64], x: usize, cap: usize) -> Result<Vec<usize>> {
    Ok(cone_dp(g, heights, x, cap)?.dims)
}

fn cone_dp(g: &TranslationQuiver, heights: &[i64], x: usize, cap: usize) -> Result<Cone, ConeError> {
    let n = g.len();
    let mut dims = vec![0usize; n];
    let mut basis: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    let mut maps: HashMap<(usize, usize), Vec<Vec<Rat>>> = HashMap::new();
    dims[x] = 1;
    basis[x] = vec![vec![x]];

    let mut order: Vec<usize> = (0..n).filter(|&z| heights[z] > heights[x]).collect();
    order.sort_by_key(|&z| heights[z]);
    let max_step = g.arrows().iter().map(|&(a, b)| heights[b] - heights[a]).max().unwrap_or(1);
    let mut last_nonzero = heights[x];

    for z in order {
        if heights[z] - last_nonzero > max_step {
            break;
        }
        let preds: Vec<usize> = g.pred(z).iter().copied().filter(|&w| dims[w] > 0).collect();
        let offsets: Vec<usize> = preds
            .iter()
            .scan(0usize, |acc, &w| {
                let o = *acc;
                *acc += dims[w];
                Some(o)
            })
            .collect();
        let ambient: usize = preds.iter().map(|&w| dims[w]).sum();
        if ambient == 0 {
            continue;
        }
        if ambient > cap {
            return Err(ConeError::Resource(format!("Hom space at {} exceeds the cap {cap}", g.id(z))));
        }
        // mesh relations from Hom(x, tau z)
        let mut rel = Subspace::new(ambient);
        if let Some(t) = g.tau(z).filter(|&t| dims[t] > 0) {
            for b in 0..dims[t] {
                let mut r = zeros(ambient);
                for (k, &w) in preds.iter().enumerate() {
                    if let Some(cols) = maps.get(&(t, w)) {
                        for (i, c) in cols[b].iter().enumerate() {
                            r[offsets[k] + i] += c;
                        }
                    }
                }
                rel.insert(r);
            }
        }
        let free = rel.free_columns();
        dims[z] = free.len();
        if dims[z] > 0 {
            last_nonzero = heights[z];
            if !g.is_interior(z) {
                return Err(ConeError::Boundary(format!("Hom from {} reaches frontier point {}", g.id(x), g.id(z))));
            }
        }
        let col_pos: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        basis[z] = free
            .iter()
            .map(|&c| {
                let k = offsets.iter().rposition(|&o| o <= c).unwrap();
                let mut p = basis[preds[k]][c - offsets[k]].clone();
                p.push(z);
                p
            })
            .collect();
        for (k, &w) in preds.iter().enumerate() {
            let cols: Vec<Vec<Rat>> = (0..dims[w])
                .map(|b| {
                    let mut u = zeros(ambient);
                    u[offsets[k] + b] = Rat::one();
                    rel.reduce(&mut u);
                    let mut out = zeros(dims[z]);
                    for (c, val) in u.into_iter().enumerate() {
                        if !val.is_zero() {
                            out[col_pos[&c]] = val;
                        }
                    }
                    out
                })
                .collect();
            maps.insert((w, z), cols);
        }
    }
    Ok(Cone { dims, basis, maps })
}

/// Independent dimension of `Hom(x, y)`: all paths from `x` to `y` modulo
/// the span of every mesh relation padded by paths on both sides.
pub fn path_space_dim(g: &TranslationQuiver, x: usize, y: usize, cap: usize) -> Result<usize> {
    fn paths_between(g: &TranslationQuiver, x: usize, y: usize, reach: &[bool], cap: usize) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut stack = vec![vec![x]];
        while let Some(p) = stack.pop() {
            let last = *p.last().unwrap();
            if last == y {
                out.push(p);
                if out.len() > cap {
                    return Err(Error::Resource(format!("more than {cap} paths")));
                }
                continue;
            }
            for &n in g.succ(last) {
                if reach[n] {
                    let mut q = p.clone();
                    q.push(n);
                    stack.push(q);
                }
            }
        }
        Ok(out)
    }
    // points from which y is reachable
    let mut reach = vec![false; g.len()];
    reach[y] = true;
    let mut stack = vec![y];
    while let Some(u) = stack.pop() {
        for &p in g.pred(u) {
            if !reach[p] {
                reach[p] = true;
                stack.push(p);
            }
        }
    }
    if !reach[x] {
        return Ok(0);
    }
    let all = paths_between(g, x, y, &reach, cap)?;
    let index: HashMap<&[usize], usize> = all.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let mut mesh = Subspace::new(all.len());
    let mut from_x = vec![false; g.len()];
    for p in &all {
        for &q in p {
            from_x[q] = true;
        }
    }
    for z in 0..g.len() {
        let Some(t) = g.tau(z) else { continue };
        if !from_x[t] || !from_x[z] {
            continue;
        }
        let heads = paths_between(g, x, t, &{
            let mut r = vec![false; g.len()];
            for p in &all {
                for (k, &q) in p.iter().enumerate() {
                    if q == t {
                        for &s in &p[..=k] {
                            r[s] = true;
                        }
                    }
                }
            }
            r
        }, cap)?;
        let tails = paths_between(g, z, y, &reach, cap)?;
        let middles: Vec<usize> = g.succ(t).iter().copied().filter(|w| g.pred(z).contains(w)).collect();
        for h in &heads {
            for tl in &tails {
                let mut v = zeros(all.len());
                for &w in &middles {
                    let mut p = h.clone();
                    p.push(w);
                    p.extend_from_slice(tl);
                    if let Some(&i) = index.get(p.as_slice()) {
                        v[i] += Rat::one();
                    }
                }
                mesh.insert(v);
            }
        }
    }
    Ok(all.len() - mesh.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::build_model;
    use crate::quiver::Quiver;
    use crate::translation::zq_id;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn a2_module_hom_table() {
        let m = build_model(&Quiver::linear_a(2)).unwrap();
        let cat = MeshCategory::new(&m);
        let g = &m.window;
        let pts = ["0:1", "0:2", "1:1"];
        // computed by the path-space oracle; P1 -> P2 -> I1
        let expect = [[1, 1, 0], [0, 1, 1], [0, 0, 1]];
        for (i, a) in pts.iter().enumerate() {
            for (j, b) in pts.iter().enumerate() {
                let (x, y) = (g.require(a).unwrap(), g.require(b).unwrap());
                assert_eq!(cat.hom_dim(x, y).unwrap(), expect[i][j], "{a} -> {b}");
                assert_eq!(path_space_dim(g, x, y, DEFAULT_CAP).unwrap(), expect[i][j]);
            }
        }
    }

    #[test]
    fn identity_and_tau_vanishing() {
        let m = build_model(&Quiver::d_type(4)).unwrap();
        let cat = MeshCategory::new(&m);
        for x in m.fundamental_domain() {
            assert_eq!(cat.hom_dim(x, x).unwrap(), 1);
            assert_eq!(cat.hom_basis(x, x).unwrap().basis, vec![vec![m.window.id(x).to_string()]]);
            if let Some(t) = m.window.tau(x) {
                if m.window.is_interior(t) {
                    assert_eq!(cat.hom_dim(x, t).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn mesh_composes_to_zero() {
        let m = build_model(&Quiver::linear_a(3)).unwrap();
        let cat = MeshCategory::new(&m);
        let g = &m.window;
        let z = g.require(&zq_id(1, "2")).unwrap();
        let t = g.tau(z).unwrap();
        let mut sum = cat.zero(t, z).unwrap();
        for &w in g.succ(t) {
            if g.pred(z).contains(&w) {
                sum = sum.add(&cat.class_of_path(&[t, w, z]).unwrap()).unwrap();
            }
        }
        assert!(sum.is_zero());
    }

    fn random_morphism(cat: &MeshCategory, rng: &mut ChaCha8Rng, x: usize, y: usize) -> MorphismVector {
        let d = cat.hom_dim(x, y).unwrap();
        MorphismVector {
            source: x,
            target: y,
            coeffs: (0..d).map(|_| crate::linalg::rat(rng.gen_range(-3..=3))).collect(),
        }
    }

    #[test]
    fn composition_is_associative_and_unital() {
        let m = build_model(&Quiver::d_type(4)).unwrap();
        let cat = MeshCategory::new(&m);
        let pts: Vec<usize> = m.fundamental_domain().into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        for _ in 0..400 {
            let (a, b, c, d) = (pts[rng.gen_range(0..pts.len())], pts[rng.gen_range(0..pts.len())], pts[rng.gen_range(0..pts.len())], pts[rng.gen_range(0..pts.len())]);
            let f = random_morphism(&cat, &mut rng, a, b);
            let g = random_morphism(&cat, &mut rng, b, c);
            let h = random_morphism(&cat, &mut rng, c, d);
            let left = cat.compose(&cat.compose(&f, &g).unwrap(), &h).unwrap();
            let right = cat.compose(&f, &cat.compose(&g, &h).unwrap()).unwrap();
            assert_eq!(left, right);
            assert_eq!(cat.compose(&cat.identity(a).unwrap(), &f).unwrap(), f);
            assert_eq!(cat.compose(&f, &cat.identity(b).unwrap()).unwrap(), f);
            if !f.is_zero() && !g.is_zero() {
                checked += 1;
            }
        }
        assert!(checked > 10);
        let e = cat.identity(pts[0]).unwrap();
        assert!(cat.compose(&e, &cat.identity(pts[1]).unwrap()).is_err() || pts[0] == pts[1]);
    }

    #[test]
    fn transport_respects_identity_composition_and_dimension() {
        let m = build_model(&Quiver::d_type(4)).unwrap();
        let cat = MeshCategory::new(&m);
        let pts: Vec<usize> = m.fundamental_domain().into_iter().collect();
        for &x in &pts {
            let fx = m.f_power(x, 1).unwrap();
            assert_eq!(cat.transport_f(&cat.identity(x).unwrap()).unwrap(), cat.identity(fx).unwrap());
            for &y in &pts {
                let fy = m.f_power(y, 1).unwrap();
                assert_eq!(cat.hom_dim(x, y).unwrap(), cat.hom_dim(fx, fy).unwrap());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let (a, b, c) = (pts[rng.gen_range(0..pts.len())], pts[rng.gen_range(0..pts.len())], pts[rng.gen_range(0..pts.len())]);
            let f = random_morphism(&cat, &mut rng, a, b);
            let g = random_morphism(&cat, &mut rng, b, c);
            let lhs = cat.transport_f(&cat.compose(&f, &g).unwrap()).unwrap();
            let rhs = cat.compose(&cat.transport_f(&f).unwrap(), &cat.transport_f(&g).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let back = cat.transport_f_power(&cat.transport_f(&f).unwrap(), -1).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn frontier_queries_fail() {
        let m = build_model(&Quiver::linear_a(2)).unwrap();
        let cat = MeshCategory::new(&m);
        let edge = m.window.require(&zq_id(m.bounds.0, "1")).unwrap();
        assert!(matches!(cat.hom_dim(edge, edge), Err(Error::Boundary(_))));
    }

    #[test]
    fn cap_is_enforced() {
        let m = build_model(&Quiver::d_type(4)).unwrap();
        let cat = MeshCategory::with_cap(&m, 1);
        let x = m.window.require(&zq_id(0, "3")).unwrap();
        assert!(matches!(cat.hom_dim(x, x), Err(Error::Resource(_))));
    }
}
