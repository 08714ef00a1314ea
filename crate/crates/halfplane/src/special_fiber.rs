//! Line bundles on a truncated special fiber: the union of the components ℙ_s
//! over the vertices s of a ball, glued at the marked points of its edges.
//!
//! Sections on ℙ_s are homogeneous polynomials of degree k = k_{parity(s)} in
//! the monomial basis X^{k−j}Y^j. The gluing matrix B has one row per edge
//! (parent u, child v) with entries ev_{pt_u} on u's block and −ev_{pt_v} on
//! v's block; all gluing scalars are 1.

use crate::arith::linalg::{kernel_basis, rank, Echelon, Matrix};
use crate::arith::{Fe, FiniteField};
use crate::bt_tree::{p1_coords, Ball};
use crate::bundles::BundleClass;
use crate::error::{Error, Result};
use serde::Serialize;

pub const MAX_DEGREE: i64 = 100_000;
pub const MAX_COLUMNS: usize = 20_000_000;
/// Largest dense matrix (rows × cols) built for explicit bases.
pub const MAX_DENSE_ENTRIES: usize = 50_000_000;

pub fn sym_dim(k: i64) -> usize {
    (k + 1).max(0) as usize
}

pub fn h1_p1(k: i64) -> usize {
    (-k - 1).max(0) as usize
}

/// Evaluation functional of Sym^k at the point with homogeneous coordinates (x, y).
pub fn eval_functional(field: &FiniteField, k: i64, x: Fe, y: Fe) -> Vec<Fe> {
    let k = k.max(-1);
    (0..=k).map(|j| field.mul(field.pow(x, (k - j) as u64), field.pow(y, j as u64))).collect()
}

#[derive(Debug)]
pub struct GluingComplex<'a> {
    pub ball: &'a Ball,
    pub field: &'a FiniteField,
    /// degree on parity-0 and parity-1 components
    pub degrees: [i64; 2],
    pub dims: Vec<usize>,
    pub offsets: Vec<usize>,
    pub cols: usize,
}

pub fn build_complex<'a>(l: &BundleClass, ball: &'a Ball, field: &'a FiniteField) -> Result<GluingComplex<'a>> {
    build_complex_degrees([l.k0, l.k1], ball, field)
}

pub fn build_complex_degrees<'a>(degrees: [i64; 2], ball: &'a Ball, field: &'a FiniteField) -> Result<GluingComplex<'a>> {
    if ball.is_empty() {
        return Err(Error::Precondition("empty ball".into()));
    }
    if degrees.iter().any(|k| k.abs() > MAX_DEGREE) {
        return Err(Error::Resource(format!("degree beyond {MAX_DEGREE}")));
    }
    if field.p() != ball.p {
        return Err(Error::Config(format!("coefficient field has characteristic {} but the tree has p = {}", field.p(), ball.p)));
    }
    let dims: Vec<usize> = (0..ball.len()).map(|i| sym_dim(degrees[ball.parity(i) as usize])).collect();
    let mut offsets = Vec::with_capacity(dims.len());
    let mut cols = 0usize;
    for &d in &dims {
        offsets.push(cols);
        cols += d;
    }
    if cols > MAX_COLUMNS {
        return Err(Error::Resource(format!("{cols} columns exceed the cap {MAX_COLUMNS}")));
    }
    Ok(GluingComplex { ball, field, degrees, dims, offsets, cols })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyResult {
    pub h0_dim: usize,
    pub h1_dim: usize,
    /// kernel vectors of B in concatenated vertex-block coordinates
    pub h0_basis: Option<Vec<Vec<Fe>>>,
    pub euler: i64,
}

impl GluingComplex<'_> {
    pub fn rows(&self) -> usize {
        self.ball.edges.len()
    }

    pub fn degree_of(&self, v: usize) -> i64 {
        self.degrees[self.ball.parity(v) as usize]
    }

    /// ev at the marked point `pt` on the block of vertex v.
    pub fn functional(&self, v: usize, pt: u32) -> Vec<Fe> {
        let (x, y) = p1_coords(self.ball.p, pt);
        let f = self.field;
        eval_functional(f, self.degree_of(v), f.from_int(x as i64), f.from_int(y as i64))
    }

    /// Rank of B with the blocks of masked vertices removed, by eliminating
    /// leaf-first along the tree.
    ///
    /// Processing a vertex after all its children, the rows supported only on
    /// its own block are collected in an echelon basis. The child part of the
    /// parent edge is reduced against that basis: if something survives, the
    /// row carries a fresh pivot in the child block; otherwise a combination
    /// of rows is supported on the parent block alone and is handed upward.
    pub fn rank_masked(&self, masked: Option<&[bool]>) -> usize {
        let f = self.field;
        let n = self.ball.len();
        let live = |v: usize| masked.is_none_or(|m| !m[v]) && self.dims[v] > 0;
        let mut pending: Vec<Vec<Vec<Fe>>> = vec![vec![]; n];
        let mut total = 0;
        for v in (0..n).rev() {
            let mut ech = Echelon::new();
            for row in std::mem::take(&mut pending[v]) {
                ech.insert(f, row);
            }
            total += ech.rank();
            let Some(e) = self.ball.parent_edge[v] else { continue };
            let edge = self.ball.edges[e];
            let survived = if live(v) {
                let mut b = self.functional(v, edge.pt_child);
                ech.reduce(f, &mut b);
                b.iter().any(|&x| x != 0)
            } else {
                false
            };
            if survived {
                total += 1;
            } else if live(edge.parent) {
                pending[edge.parent].push(self.functional(edge.parent, edge.pt_parent));
            }
        }
        total
    }

    pub fn rank(&self) -> usize {
        self.rank_masked(None)
    }

    pub fn h1_local(&self) -> usize {
        (0..self.ball.len()).map(|v| h1_p1(self.degree_of(v))).sum()
    }

    pub fn dense(&self) -> Result<Matrix> {
        if self.rows().saturating_mul(self.cols) > MAX_DENSE_ENTRIES {
            return Err(Error::Resource(format!("dense gluing matrix {}×{} is too large", self.rows(), self.cols)));
        }
        let f = self.field;
        let mut m = Matrix::zeros(self.rows(), self.cols);
        for (r, e) in self.ball.edges.iter().enumerate() {
            for (j, x) in self.functional(e.parent, e.pt_parent).into_iter().enumerate() {
                m.set(r, self.offsets[e.parent] + j, x);
            }
            for (j, x) in self.functional(e.child, e.pt_child).into_iter().enumerate() {
                m.set(r, self.offsets[e.child] + j, f.neg(x));
            }
        }
        Ok(m)
    }

    pub fn cohomology(&self, with_basis: bool) -> Result<CohomologyResult> {
        let rk = self.rank();
        let h0 = self.cols - rk;
        let h1 = (self.rows() - rk) + self.h1_local();
        let h0_basis = if with_basis { Some(kernel_basis(self.field, &self.dense()?)) } else { None };
        Ok(CohomologyResult { h0_dim: h0, h1_dim: h1, h0_basis, euler: h0 as i64 - h1 as i64 })
    }

    /// Σ_v dim Γ(ℙ_s) − |edges| − Σ_v dim H¹(ℙ_s).
    pub fn euler_expected(&self) -> i64 {
        self.cols as i64 - self.rows() as i64 - self.h1_local() as i64
    }

    /// Dimension of the cokernel of Bᵀ: vertex-block duals modulo the image of
    /// the edge duals, computed on the transposed dense matrix.
    pub fn dual_presentation_dim(&self) -> Result<usize> {
        let bt = self.dense()?.transpose();
        Ok(self.cols - rank(self.field, &bt))
    }
}

/// Image of H⁰ on ball(R_big) restricted to the blocks of ball(R_small).
/// Sections vanishing on the inner blocks are the kernel of B with those
/// columns deleted.
pub fn restriction_image_dim(cx: &GluingComplex, r_small: u32) -> Result<usize> {
    if r_small + 1 > cx.ball.radius {
        return Err(Error::Precondition(format!("inner radius {r_small} must be below {}", cx.ball.radius)));
    }
    let mask: Vec<bool> = cx.ball.depth.iter().map(|&d| d <= r_small).collect();
    let h0 = cx.cols - cx.rank();
    let outer_cols: usize = (0..cx.ball.len()).filter(|&v| !mask[v]).map(|v| cx.dims[v]).sum();
    let vanishing_inside = outer_cols - cx.rank_masked(Some(&mask));
    Ok(h0 - vanishing_inside)
}

/// Which case of the filtration description a pair of orders falls in.
pub fn filtration_case(k0: i64, k1: i64, q: i64) -> u8 {
    let big = |k: i64| k >= q + 1;
    let small = |k: i64| (0..=q).contains(&k);
    let neg = |k: i64| k <= -1;
    match () {
        _ if big(k0) && big(k1) => 1,
        _ if small(k0) && small(k1) => 2,
        _ if (small(k0) && big(k1)) || (small(k1) && big(k0)) => 3,
        _ if neg(k0) && neg(k1) => 4,
        _ if (neg(k0) && small(k1)) || (neg(k1) && small(k0)) => 5,
        _ => 6,
    }
}

/// Dimensions predicted on the truncation for cases 1, 4 and 6, else None.
///
/// In case 6 with k_i < 0 ≤ q < k_{i+1}, only parity-(i+1) blocks carry
/// sections and each must vanish at the marked points of all its ball edges;
/// a vertex with deg(v) ball edges contributes k_{i+1} + 1 − deg(v), which is
/// k_{i+1} − q at interior vertices.
pub fn predicted_dims(cx: &GluingComplex) -> Option<(usize, usize)> {
    let [k0, k1] = cx.degrees;
    let q = cx.ball.p as i64;
    let euler = cx.euler_expected();
    match filtration_case(k0, k1, q) {
        1 => {
            let h0 = euler;
            Some((h0 as usize, 0))
        }
        4 => Some((0, (-euler) as usize)),
        6 => {
            let hi = if k0 >= 0 { 0u8 } else { 1u8 };
            let k = cx.degrees[hi as usize];
            let h0: i64 = (0..cx.ball.len())
                .filter(|&v| cx.ball.parity(v) == hi)
                .map(|v| k + 1 - cx.ball.degree(v) as i64)
                .sum();
            Some((h0 as usize, (h0 - euler) as usize))
        }
        _ => None,
    }
}

/// Evaluation of Sym^k at every point of ℙ¹(F_q), one row per point
/// (the q finite points λ ↦ (λ, 1), then ∞ ↦ (1, 0)).
pub fn eval_matrix(field: &FiniteField, k: i64) -> Matrix {
    let mut rows: Vec<Vec<Fe>> = field.elements().map(|l| eval_functional(field, k, l, 1)).collect();
    rows.push(eval_functional(field, k, 1, 0));
    Matrix::from_rows(&rows)
}

/// (X^qY − XY^q)·X^{k−q−1−j}Y^j for j = 0..k−q−1, in Sym^k coordinates.
pub fn eval_kernel_basis(k: i64, q: u64, field: &FiniteField) -> Vec<Vec<Fe>> {
    let q = q as i64;
    if k < q + 1 {
        return vec![];
    }
    let dim = (k + 1) as usize;
    (0..=(k - q - 1))
        .map(|j| {
            let mut v = vec![0; dim];
            // X^q·Y times X^{k−q−1−j}Y^j has Y-exponent j + 1
            v[(j + 1) as usize] = 1;
            v[(j + q) as usize] = field.neg(1);
            v
        })
        .collect()
}

/// Whether the polynomial with Sym^k coordinates v is divisible by X^qY − XY^q.
pub fn divisible_by_vanishing_poly(field: &FiniteField, v: &[Fe], q: u64) -> bool {
    // dehomogenize at X = 1: c(y) = Σ v_j y^j must be divisible by y − y^q,
    // i.e. vanish at every element of F_q, and the degree-k form must also
    // vanish at ∞ (coefficient of Y^k zero)
    let q = q as usize;
    let k = v.len() as i64 - 1;
    if k < q as i64 + 1 {
        return v.iter().all(|&x| x == 0);
    }
    // long division of c(y) by (y − y^q), which has the −y^q leading term
    let mut rem: Vec<Fe> = v.to_vec();
    for top in (q..rem.len()).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        // subtract c·(−1)·y^{top−q}·(y − y^q) = −c·y^{top−q+1} + c·y^{top}
        rem[top] = 0;
        let idx = top - q + 1;
        rem[idx] = field.add(rem[idx], c);
    }
    rem.iter().all(|&x| x == 0) && v[k as usize] == 0
}

#[derive(Debug, Clone, Serialize)]
pub struct CohomologyJson {
    pub p: u32,
    pub f: u32,
    pub k0: i64,
    pub k1: i64,
    pub radius: u32,
    pub h0: usize,
    pub h1: usize,
    pub euler: i64,
    pub gauge_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h0_basis: Option<Vec<Vec<Fe>>>,
}

pub const CSV_HEADER: &str = "p,f,k0,k1,r,radius,h0,h1,euler,seed";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bt_tree::Tree;

    fn dims(p: u32, k0: i64, k1: i64, r: u32, seed: u64) -> (usize, usize) {
        let t = Tree::new(p).unwrap();
        let f = FiniteField::new(p, 1).unwrap();
        let ball = t.ball(t.s1(), r, seed).unwrap();
        let cx = build_complex_degrees([k0, k1], &ball, &f).unwrap();
        let c = cx.cohomology(false).unwrap();
        (c.h0_dim, c.h1_dim)
    }

    #[test]
    fn matrix_shapes() {
        let t = Tree::new(3).unwrap();
        let f = FiniteField::new(3, 1).unwrap();
        let ball = t.ball(t.s1(), 1, 0).unwrap();
        let shape = |k0, k1| {
            let cx = build_complex_degrees([k0, k1], &ball, &f).unwrap();
            (cx.rows(), cx.cols)
        };
        assert_eq!(shape(0, 0), (4, 5));
        assert_eq!(shape(1, 1), (4, 10));
        assert_eq!(shape(-1, -1), (4, 0));
    }

    #[test]
    fn small_examples() {
        assert_eq!(dims(3, 1, 1, 1, 0), (6, 0));
        assert_eq!(dims(3, -1, -1, 1, 0), (0, 4));
        assert_eq!(dims(3, -2, 4, 1, 0), (1, 4));
    }

    #[test]
    fn peeling_rank_matches_dense_rank() {
        let f = FiniteField::new(3, 1).unwrap();
        let t = Tree::new(3).unwrap();
        for seed in [0, 5] {
            for r in 0..=3 {
                let ball = t.ball(t.s0(), r, seed).unwrap();
                for k0 in -2..=7 {
                    for k1 in -2..=7 {
                        let cx = build_complex_degrees([k0, k1], &ball, &f).unwrap();
                        assert_eq!(cx.rank(), rank(&f, &cx.dense().unwrap()), "k=({k0},{k1}) R={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn basis_is_in_the_kernel() {
        let t = Tree::new(3).unwrap();
        let f = FiniteField::new(3, 1).unwrap();
        let ball = t.ball(t.s1(), 2, 0).unwrap();
        let cx = build_complex_degrees([2, 4], &ball, &f).unwrap();
        let c = cx.cohomology(true).unwrap();
        let b = c.h0_basis.unwrap();
        assert_eq!(b.len(), c.h0_dim);
        let m = cx.dense().unwrap();
        assert!(b.iter().all(|v| m.apply(&f, v).iter().all(|&x| x == 0)));
    }

    #[test]
    fn eval_kernels() {
        let f = FiniteField::new(3, 1).unwrap();
        assert!(eval_kernel_basis(2, 3, &f).is_empty());
        assert_eq!(kernel_basis(&f, &eval_matrix(&f, 5)).len(), 2);
        let b = eval_kernel_basis(4, 3, &f);
        assert_eq!(b, vec![vec![0, 1, 0, 2, 0]]);
        assert!(eval_matrix(&f, 4).apply(&f, &b[0]).iter().all(|&x| x == 0));
        assert!(divisible_by_vanishing_poly(&f, &b[0], 3));
        assert!(!divisible_by_vanishing_poly(&f, &[1, 0, 0, 0, 0], 3));
    }

    #[test]
    fn restriction_and_predictions() {
        let t = Tree::new(3).unwrap();
        let f = FiniteField::new(3, 1).unwrap();
        let ball = t.ball(t.s1(), 3, 0).unwrap();
        let cx = build_complex_degrees([3, -2], &ball, &f).unwrap();
        assert_eq!(restriction_image_dim(&cx, 2).unwrap(), 0);
        let cx = build_complex_degrees([1, 1], &ball, &f).unwrap();
        assert!(restriction_image_dim(&cx, 2).unwrap() > 0);
        let ball1 = t.ball(t.s1(), 1, 0).unwrap();
        let cx = build_complex_degrees([-2, 4], &ball1, &f).unwrap();
        assert_eq!(predicted_dims(&cx), Some((1, 4)));
        let cx = build_complex_degrees([4, 4], &ball1, &f).unwrap();
        assert_eq!(predicted_dims(&cx).unwrap().1, 0);
        assert_eq!(cx.cohomology(false).unwrap().h1_dim, 0);
    }
}
