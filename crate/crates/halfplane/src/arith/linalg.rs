//! Dense matrices over a finite field: row reduction, rank, kernels, solving.

use super::field::{Fe, FiniteField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn from_cols(cols: &[Vec<Fe>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, f: &FiniteField, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut s = 0;
                for (c, &x) in v.iter().enumerate() {
                    let a = self.get(r, c);
                    if a != 0 && x != 0 {
                        s = f.add(s, f.mul(a, x));
                    }
                }
                s
            })
            .collect()
    }

    pub fn scale(&self, f: &FiniteField, s: Fe) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f.mul(x, s)).collect() }
    }

    pub fn sub(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(f: &FiniteField, m: &mut Matrix) -> Vec<usize> {
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
        if pr != r {
            for j in 0..m.cols {
                m.data.swap(pr * m.cols + j, r * m.cols + j);
            }
        }
        let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
        for j in c..m.cols {
            let v = m.get(r, j);
            m.set(r, j, f.mul(v, inv));
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c);
            if factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for j in c..m.cols {
                let v = m.get(r, j);
                if v != 0 {
                    let cur = m.get(i, j);
                    m.set(i, j, f.add(cur, f.mul(nf, v)));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &FiniteField, m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(f, &mut a).len()
}

/// Basis of the right null space {x : M x = 0}.
pub fn kernel_basis(f: &FiniteField, m: &Matrix) -> Vec<Vec<Fe>> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = vec![];
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; m.cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(a.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Some x with M x = b, if one exists.
pub fn solve(f: &FiniteField, m: &Matrix, b: &[Fe]) -> Option<Vec<Fe>> {
    assert_eq!(b.len(), m.rows);
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug.set(r, c, m.get(r, c));
        }
        aug.set(r, m.cols, b[r]);
    }
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![0; m.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(r, m.cols);
    }
    Some(x)
}

/// Incremental echelon basis used to reduce vectors against a growing span.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<Fe>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce v against the stored rows (each normalized with pivot 1).
    pub fn reduce(&self, f: &FiniteField, v: &mut [Fe]) {
        for (pc, row) in &self.rows {
            let c = v[*pc];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &y) in v.iter_mut().zip(row) {
                    if y != 0 {
                        *x = f.add(*x, f.mul(nc, y));
                    }
                }
            }
        }
    }

    /// Insert v; returns true if it enlarged the span.
    pub fn insert(&mut self, f: &FiniteField, mut v: Vec<Fe>) -> bool {
        self.reduce(f, &mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else { return false };
        let inv = f.inv(v[pc]).unwrap();
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push((pc, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_and_identity_kernels() {
        let f = FiniteField::new(3, 1).unwrap();
        let z = Matrix::zeros(2, 2);
        let k = kernel_basis(&f, &z);
        assert_eq!(k, vec![vec![1, 0], vec![0, 1]]);
        assert!(kernel_basis(&f, &Matrix::identity(3)).is_empty());
    }

    // Independent oracle: rank by counting nonzero rows after plain forward
    // elimination with explicit row operations on i64 mod p.
    fn rank_oracle(p: i64, rows: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<i64>> = rows.to_vec();
        let ncols = a[0].len();
        let mut rank = 0;
        for c in 0..ncols {
            let Some(pr) = (rank..a.len()).find(|&r| a[r][c].rem_euclid(p) != 0) else { continue };
            a.swap(rank, pr);
            for r in rank + 1..a.len() {
                let num = a[r][c];
                let den = a[rank][c];
                for j in 0..ncols {
                    a[r][j] = (a[r][j] * den - a[rank][j] * num).rem_euclid(p);
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn random_10x6_over_f3_matches_oracle() {
        let f = FiniteField::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows: Vec<Vec<i64>> = (0..10)
                .map(|_| (0..6).map(|_| if rng.gen_bool(0.3) { rng.gen_range(0..3) } else { 0 }).collect())
                .collect();
            let m = Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| x as Fe).collect()).collect::<Vec<_>>());
            let k = kernel_basis(&f, &m);
            assert_eq!(6 - k.len(), rank_oracle(3, &rows));
            for v in &k {
                assert!(m.apply(&f, v).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn solve_and_echelon_agree() {
        let f = FiniteField::new(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let rows: Vec<Vec<Fe>> = (0..4).map(|_| (0..5).map(|_| rng.gen_range(0..25)).collect()).collect();
            let m = Matrix::from_rows(&rows);
            let x: Vec<Fe> = (0..5).map(|_| rng.gen_range(0..25)).collect();
            let b = m.apply(&f, &x);
            let y = solve(&f, &m, &b).expect("consistent");
            assert_eq!(m.apply(&f, &y), b);
            let mut e = Echelon::new();
            for r in &rows {
                e.insert(&f, r.clone());
            }
            assert_eq!(e.rank(), rank(&f, &m));
        }
    }
}
