//! Exact linear algebra over the rationals.
//!
//! Everything here is dense and small: Hom spaces, structure constants and
//! module actions in this crate rarely exceed a few dozen dimensions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zeros(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

pub fn is_zero(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Rat], c: &Rat, v: &[Rat]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn scale(v: &mut [Rat], c: &Rat) {
    for x in v.iter_mut() {
        *x *= c;
    }
}

/// A subspace of `Rat^len` kept in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    len: usize,
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(len: usize) -> Self {
        Subspace { len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by<'a, I: IntoIterator<Item = &'a Vec<Rat>>>(len: usize, vs: I) -> Self {
        let mut s = Subspace::new(len);
        for v in vs {
            s.insert(v.clone());
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains(&col)
    }

    /// Reduces `v` modulo the subspace; the result vanishes on every pivot column.
    pub fn reduce(&self, v: &mut [Rat]) {
        debug_assert_eq!(v.len(), self.len);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = -v[p].clone();
                axpy(v, &c, row);
            }
        }
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero(&w)
    }

    /// Adds `v` to the span. Returns `true` when the dimension grew.
    pub fn insert(&mut self, mut v: Vec<Rat>) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        scale(&mut v, &inv);
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = -row[p].clone();
                axpy(row, &c, &v);
            }
        }
        // keep rows sorted by pivot so output is canonical
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn same_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// Columns that are not pivots; a quotient basis of the ambient space.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.len).filter(|c| !self.is_pivot(*c)).collect()
    }
}

/// Rank of a list of row vectors.
pub fn rank(rows: &[Vec<Rat>], len: usize) -> usize {
    Subspace::spanned_by(len, rows).dim()
}

/// Basis of `{x : sum_k x_k * cols[k] = 0}` where each column has length `m`.
pub fn kernel_of_columns(cols: &[Vec<Rat>], m: usize) -> Vec<Vec<Rat>> {
    let n = cols.len();
    // rows of the augmented system [col_k | e_k]; eliminate on the first m coordinates
    let mut rows: Vec<Vec<Rat>> = cols
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut r = c.clone();
            r.extend(unit(n, k));
            r
        })
        .collect();
    let mut out = Vec::new();
    let mut used = vec![false; n];
    for col in 0..m {
        let Some(piv) = (0..n).find(|&i| !used[i] && !rows[i][col].is_zero()) else {
            continue;
        };
        used[piv] = true;
        let inv = rows[piv][col].recip();
        let prow = rows[piv].clone();
        for i in 0..n {
            if i != piv && !rows[i][col].is_zero() {
                let c = -(&rows[i][col] * &inv);
                axpy(&mut rows[i], &c, &prow);
            }
        }
    }
    for (i, r) in rows.into_iter().enumerate() {
        if !used[i] {
            debug_assert!(is_zero(&r[..m]));
            out.push(r[m..].to_vec());
        }
    }
    // canonical form
    let s = Subspace::spanned_by(n, &out);
    s.rows().to_vec()
}

/// Solves `sum_k x_k * cols[k] = target`, returning one solution if any.
pub fn solve_columns(cols: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let m = target.len();
    let n = cols.len();
    // reduce target against the column space while tracking combinations
    let mut basis: Vec<(Vec<Rat>, Vec<Rat>, usize)> = Vec::new(); // (vector, combination, pivot)
    for (k, c) in cols.iter().enumerate() {
        let mut v = c.clone();
        let mut comb = unit(n, k);
        for (bv, bc, p) in &basis {
            if !v[*p].is_zero() {
                let f = -v[*p].clone();
                axpy(&mut v, &f, bv);
                axpy(&mut comb, &f, bc);
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[p].recip();
            scale(&mut v, &inv);
            scale(&mut comb, &inv);
            basis.push((v, comb, p));
        }
    }
    let mut t = target.to_vec();
    let mut x = zeros(n);
    for (bv, bc, p) in &basis {
        if !t[*p].is_zero() {
            let f = t[*p].clone();
            let nf = -f.clone();
            axpy(&mut t, &nf, bv);
            axpy(&mut x, &f, bc);
        }
    }
    debug_assert_eq!(t.len(), m);
    if is_zero(&t) {
        Some(x)
    } else {
        None
    }
}

/// Canonical string form of a rational, `p` or `p/q`.
pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn subspace_reduces_to_normal_form() {
        let mut s = Subspace::new(3);
        assert!(s.insert(v(&[1, 1, 0])));
        assert!(s.insert(v(&[0, 2, 2])));
        assert!(!s.insert(v(&[1, 3, 2])));
        assert_eq!(s.dim(), 2);
        let mut w = v(&[5, 0, 1]);
        s.reduce(&mut w);
        let mut again = w.clone();
        s.reduce(&mut again);
        assert_eq!(w, again);
        assert!(s.contains(&v(&[1, -1, -2])));
    }

    #[test]
    fn kernel_and_solve() {
        // columns (1,0), (0,1), (1,1)
        let cols = vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let k = kernel_of_columns(&cols, 2);
        assert_eq!(k.len(), 1);
        let mut acc = zeros(2);
        for (c, col) in k[0].iter().zip(&cols) {
            axpy(&mut acc, c, col);
        }
        assert!(is_zero(&acc));
        let x = solve_columns(&cols, &v(&[3, 4])).unwrap();
        let mut acc = zeros(2);
        for (c, col) in x.iter().zip(&cols) {
            axpy(&mut acc, c, col);
        }
        assert_eq!(acc, v(&[3, 4]));
        assert!(solve_columns(&[v(&[1, 1])], &v(&[1, 0])).is_none());
    }

    #[test]
    fn rational_strings_round_trip() {
        for s in ["0", "-3", "7/2", "-1/9"] {
            assert_eq!(rat_to_string(&rat_from_str(s).unwrap()), s);
        }
        assert!(rat_from_str("1/0").is_none());
    }
}
