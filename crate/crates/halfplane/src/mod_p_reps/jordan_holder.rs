//! The principal series Ind_{IZ}^{G°Z} μ_{r,r+k} modelled on functions on
//! ℙ¹(F_p), and intertwiners found by linear algebra.

use super::{eval_row, m2_det, sym_matrix, M2};
use crate::arith::linalg::{kernel_basis, rank, Matrix};
use crate::arith::{Fe, FiniteField};
use crate::bt_tree::p1_of_vector;
use crate::error::{Error, Result};
use serde::Serialize;

/// Generators of GL₂(F_p): a torus element, a unipotent and the Weyl element.
pub fn generators(f: &FiniteField) -> Vec<M2> {
    vec![[f.primitive(), 0, 0, 1], [1, 1, 0, 1], [0, 1, 1, 0]]
}

fn point(p: u32, pt: u32) -> (u32, u32) {
    crate::bt_tree::p1_coords(p, pt)
}

/// (g·F)(ℓ) = det(g)^r c^k F(ℓ') where adj(g)·ℓ̂ = c·ℓ̂' on normalized representatives.
pub fn fun_p1_matrix(f: &FiniteField, k: usize, r: i64, g: &M2) -> Matrix {
    let p = f.p();
    let [a, b, c, d] = *g;
    let det = f.pow_i(m2_det(p, g), r);
    let mut m = Matrix::zeros(p as usize + 1, p as usize + 1);
    for l in 0..=p {
        let (x, y) = point(p, l);
        // adj(g) = [[d, −b], [−c, a]]
        let nx = f.sub(f.mul(d, x), f.mul(b, y));
        let ny = f.sub(f.mul(a, y), f.mul(c, x));
        let l2 = p1_of_vector(p, nx, ny);
        let (x2, y2) = point(p, l2);
        let scale = if y2 == 1 { ny } else { f.div(nx, x2).unwrap() };
        m.set(l as usize, l2 as usize, f.mul(det, f.pow(scale, k as u64)));
    }
    m
}

/// All X with X·S_g = D_g·X for every g, subject to L·X = 0 and X·C = 0.
pub fn intertwiners(
    f: &FiniteField,
    src: &[Matrix],
    dst: &[Matrix],
    left: Option<&Matrix>,
    right: Option<&Matrix>,
) -> Vec<Matrix> {
    assert_eq!(src.len(), dst.len());
    let (sd, dd) = (src[0].rows, dst[0].rows);
    let var = |i: usize, j: usize| i * sd + j;
    let mut rows: Vec<Vec<Fe>> = vec![];
    for (s, d) in src.iter().zip(dst) {
        for i in 0..dd {
            for j in 0..sd {
                let mut row = vec![0; dd * sd];
                for l in 0..sd {
                    row[var(i, l)] = f.add(row[var(i, l)], s.get(l, j));
                }
                for l in 0..dd {
                    row[var(l, j)] = f.sub(row[var(l, j)], d.get(i, l));
                }
                rows.push(row);
            }
        }
    }
    if let Some(lm) = left {
        for a in 0..lm.rows {
            for j in 0..sd {
                let mut row = vec![0; dd * sd];
                for i in 0..dd {
                    row[var(i, j)] = lm.get(a, i);
                }
                rows.push(row);
            }
        }
    }
    if let Some(cm) = right {
        for i in 0..dd {
            for b in 0..cm.cols {
                let mut row = vec![0; dd * sd];
                for j in 0..sd {
                    row[var(i, j)] = cm.get(j, b);
                }
                rows.push(row);
            }
        }
    }
    kernel_basis(f, &Matrix::from_rows(&rows))
        .into_iter()
        .map(|v| Matrix { rows: dd, cols: sd, data: v })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct JordanHolderReport {
    pub p: u32,
    pub k: usize,
    pub r: i64,
    pub sub_dim: usize,
    pub sub_is_subrep: bool,
    pub quotient_dim: usize,
    /// dimension of the space of equivariant maps onto Sym^{p−1−k} ⊗ det^{r+k} killing the sub
    pub intertwiner_dim: usize,
    pub intertwiner_surjective: bool,
}

impl JordanHolderReport {
    pub fn ok(&self) -> bool {
        self.sub_is_subrep
            && self.sub_dim == self.k + 1
            && self.quotient_dim == self.p as usize - self.k
            && self.intertwiner_dim == 1
            && self.intertwiner_surjective
    }
}

/// 0 → Sym^k⊗det^r → Fun(ℙ¹(F_p)) → Sym^{p−1−k}⊗det^{r+k} → 0, checked on generators.
pub fn jordan_holder_check(p: u32, k: usize, r: i64) -> Result<JordanHolderReport> {
    let f = FiniteField::new(p, 1)?;
    if k as u32 > p - 1 {
        return Err(Error::Config(format!("k={k} outside [0, {}]", p - 1)));
    }
    let gens = generators(&f);
    let eval = Matrix::from_rows(
        &(0..=p)
            .map(|l| {
                let (x, y) = point(p, l);
                eval_row(&f, k, x, y)
            })
            .collect::<Vec<_>>(),
    );
    let fun: Vec<Matrix> = gens.iter().map(|g| fun_p1_matrix(&f, k, r, g)).collect();
    let sub: Vec<Matrix> = gens.iter().map(|g| sym_matrix(&f, k, r, g)).collect();
    let sub_is_subrep = fun.iter().zip(&sub).all(|(fg, sg)| fg.mul(&f, &eval) == eval.mul(&f, sg));
    let sub_dim = rank(&f, &eval);

    let kq = p as usize - 1 - k;
    let quot: Vec<Matrix> = gens.iter().map(|g| sym_matrix(&f, kq, r + k as i64, g)).collect();
    let maps = intertwiners(&f, &fun, &quot, None, Some(&eval));
    let intertwiner_surjective = maps.first().is_some_and(|m| rank(&f, m) == kq + 1);
    Ok(JordanHolderReport {
        p,
        k,
        r,
        sub_dim,
        sub_is_subrep,
        quotient_dim: p as usize + 1 - sub_dim,
        intertwiner_dim: maps.len(),
        intertwiner_surjective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_series_is_a_representation() {
        let p = 5;
        let f = FiniteField::new(p, 1).unwrap();
        let gens = generators(&f);
        for k in 0..p as usize {
            for a in &gens {
                for b in &gens {
                    let ab = super::super::m2_mul(p, a, b);
                    let lhs = fun_p1_matrix(&f, k, 2, &ab);
                    let rhs = fun_p1_matrix(&f, k, 2, a).mul(&f, &fun_p1_matrix(&f, k, 2, b));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn sequences_split_as_expected() {
        for p in [3u32, 5] {
            for k in 0..p as usize {
                for r in 0..(p as i64 - 1) {
                    let rep = jordan_holder_check(p, k, r).unwrap();
                    assert!(rep.ok(), "{rep:?}");
                }
            }
        }
        let triv = jordan_holder_check(3, 0, 0).unwrap();
        assert_eq!((triv.sub_dim, triv.quotient_dim), (1, 3));
    }

    #[test]
    fn wrong_twist_has_no_intertwiner() {
        // p=5, k=1: the quotient is Sym³⊗det^{r+1}, not Sym³⊗det^r
        let f = FiniteField::new(5, 1).unwrap();
        let gens = generators(&f);
        let fun: Vec<Matrix> = gens.iter().map(|g| fun_p1_matrix(&f, 1, 0, g)).collect();
        let wrong: Vec<Matrix> = gens.iter().map(|g| sym_matrix(&f, 3, 0, g)).collect();
        assert!(intertwiners(&f, &fun, &wrong, None, None).is_empty());
    }
}
