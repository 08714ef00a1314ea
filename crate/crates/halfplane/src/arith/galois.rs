//! Galois rings GR(p^N, d) = (Z/p^N)[x]/(lift of the residue modulus): the
//! truncated Witt vectors of F_{p^d}.

use super::field::{Fe, FiniteField};
use crate::error::{Error, Result};
use std::sync::Arc;

pub const MAX_PRECISION: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaloisRingElement(pub Vec<u64>);

pub type Gr = GaloisRingElement;

#[derive(Debug, Clone)]
pub struct GaloisRing {
    field: Arc<FiniteField>,
    n: u32,
    pn: u64,
    /// monic modulus lifted with coefficients in [0, p), leading 1 omitted
    modulus: Vec<u64>,
}

impl GaloisRing {
    pub fn new(field: Arc<FiniteField>, n: u32) -> Result<Self> {
        if n == 0 || n > MAX_PRECISION {
            return Err(Error::Config(format!("precision N={n} outside 1..={MAX_PRECISION}")));
        }
        let pn = (field.p() as u64).pow(n);
        let modulus = field.modulus().iter().map(|&c| c as u64).collect();
        Ok(GaloisRing { field, n, pn, modulus })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn precision(&self) -> u32 {
        self.n
    }
    fn d(&self) -> usize {
        self.field.degree() as usize
    }
    pub fn p(&self) -> u64 {
        self.field.p() as u64
    }

    pub fn zero(&self) -> Gr {
        GaloisRingElement(vec![0; self.d()])
    }
    pub fn one(&self) -> Gr {
        self.int(1)
    }
    pub fn int(&self, x: i64) -> Gr {
        let mut v = vec![0; self.d()];
        v[0] = x.rem_euclid(self.pn as i64) as u64;
        GaloisRingElement(v)
    }

    pub fn add(&self, a: &Gr, b: &Gr) -> Gr {
        GaloisRingElement(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.pn).collect())
    }
    pub fn neg(&self, a: &Gr) -> Gr {
        GaloisRingElement(a.0.iter().map(|x| (self.pn - x) % self.pn).collect())
    }
    pub fn sub(&self, a: &Gr, b: &Gr) -> Gr {
        self.add(a, &self.neg(b))
    }
    pub fn scalar_mul(&self, s: i64, a: &Gr) -> Gr {
        let s = s.rem_euclid(self.pn as i64) as u64;
        GaloisRingElement(a.0.iter().map(|x| x * s % self.pn).collect())
    }

    pub fn mul(&self, a: &Gr, b: &Gr) -> Gr {
        let d = self.d();
        let m = self.pn;
        let mut r = vec![0u64; 2 * d - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % m;
            }
        }
        // reduce by the monic modulus: x^d = -sum c_i x^i
        for top in (d..2 * d - 1).rev() {
            let c = r[top];
            if c == 0 {
                continue;
            }
            r[top] = 0;
            for (i, &mi) in self.modulus.iter().enumerate() {
                let idx = top - d + i;
                r[idx] = (r[idx] + (m - c) * mi) % m;
            }
        }
        r.truncate(d);
        GaloisRingElement(r)
    }

    pub fn pow(&self, a: &Gr, mut e: u64) -> Gr {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub fn reduce(&self, a: &Gr) -> Fe {
        let p = self.p();
        let c: Vec<u32> = a.0.iter().map(|&x| (x % p) as u32).collect();
        self.field.from_coeffs(&c)
    }

    /// Naive lift of a residue: coefficients taken in [0, p).
    pub fn lift(&self, y: Fe) -> Gr {
        GaloisRingElement(self.field.coeffs(y).into_iter().map(|c| c as u64).collect())
    }

    /// Teichmüller representative: the unique root of unity (or 0) reducing to y,
    /// obtained as any lift raised to the power q^{N-1}.
    pub fn teichmuller(&self, y: Fe) -> Gr {
        let q = self.field.order() as u64;
        let e = q.pow(self.n - 1);
        self.pow(&self.lift(y), e)
    }

    /// p-adic valuation (N for zero).
    pub fn valuation(&self, a: &Gr) -> u32 {
        let p = self.p();
        let mut v = self.n;
        for &c in &a.0 {
            if c != 0 {
                let mut c = c;
                let mut k = 0;
                while c % p == 0 {
                    c /= p;
                    k += 1;
                }
                v = v.min(k);
            }
        }
        v
    }

    pub fn is_unit(&self, a: &Gr) -> bool {
        self.reduce(a) != 0
    }

    /// Inverse of a unit by Newton iteration from the residue inverse.
    pub fn inv(&self, a: &Gr) -> Option<Gr> {
        let r = self.field.inv(self.reduce(a))?;
        let mut z = self.lift(r);
        let two = self.int(2);
        for _ in 0..self.n {
            z = self.mul(&z, &self.sub(&two, &self.mul(a, &z)));
        }
        Some(z)
    }

    /// Teichmüller digits t_0..t_{N-1} with a = sum p^j [t_j].
    pub fn teichmuller_digits(&self, a: &Gr) -> Vec<Fe> {
        let p = self.p();
        let mut rem = a.clone();
        let mut digits = vec![];
        for _ in 0..self.n {
            let t = self.reduce(&rem);
            digits.push(t);
            let diff = self.sub(&rem, &self.teichmuller(t));
            // exact division by p of the integer representatives
            rem = GaloisRingElement(diff.0.iter().map(|&c| c / p).collect());
        }
        digits
    }

    fn from_digits(&self, digits: &[Fe]) -> Gr {
        let mut acc = self.zero();
        let mut pj: i64 = 1;
        for &t in digits {
            acc = self.add(&acc, &self.scalar_mul(pj, &self.teichmuller(t)));
            pj *= self.p() as i64;
        }
        acc
    }

    /// Ring Frobenius: sum p^j [t_j] ↦ sum p^j [t_j^p].
    pub fn sigma(&self, a: &Gr) -> Gr {
        let p = self.p();
        let d: Vec<Fe> = self.teichmuller_digits(a).into_iter().map(|t| self.field.pow(t, p)).collect();
        self.from_digits(&d)
    }

    pub fn sigma_inv(&self, a: &Gr) -> Gr {
        let d: Vec<Fe> =
            self.teichmuller_digits(a).into_iter().map(|t| self.field.inv_frobenius(t, 1).unwrap()).collect();
        self.from_digits(&d)
    }

    pub fn is_zero(&self, a: &Gr) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, d: u32, n: u32) -> GaloisRing {
        GaloisRing::new(Arc::new(FiniteField::new(p, d).unwrap()), n).unwrap()
    }

    #[test]
    fn teichmuller_is_fixed_by_q_power_and_multiplicative() {
        for n in 1..=4 {
            let r = ring(3, 2, n);
            let q = 9;
            for y in r.field().elements() {
                let t = r.teichmuller(y);
                assert_eq!(r.reduce(&t), y);
                assert_eq!(r.pow(&t, q), t);
                for z in [1, 4, 7] {
                    let lhs = r.mul(&t, &r.teichmuller(z));
                    assert_eq!(lhs, r.teichmuller(r.field().mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn sigma_is_a_ring_automorphism_lifting_frobenius() {
        let r = ring(5, 2, 3);
        let elems: Vec<Gr> = (0..30).map(|i| GaloisRingElement(vec![(i * 37 + 11) % 125, (i * 53 + 2) % 125])).collect();
        for a in &elems {
            assert_eq!(r.reduce(&r.sigma(a)), r.field().pow(r.reduce(a), 5));
            assert_eq!(r.sigma_inv(&r.sigma(a)), *a);
            for b in elems.iter().take(5) {
                assert_eq!(r.sigma(&r.mul(a, b)), r.mul(&r.sigma(a), &r.sigma(b)));
                assert_eq!(r.sigma(&r.add(a, b)), r.add(&r.sigma(a), &r.sigma(b)));
            }
        }
        for y in r.field().elements() {
            assert_eq!(r.sigma(&r.teichmuller(y)), r.teichmuller(r.field().pow(y, 5)));
        }
        // Z/p^N is fixed
        assert_eq!(r.sigma(&r.int(17)), r.int(17));
    }

    #[test]
    fn unit_inverse() {
        let r = ring(3, 2, 4);
        let a = GaloisRingElement(vec![5, 12]);
        let ai = r.inv(&a).unwrap();
        assert_eq!(r.mul(&a, &ai), r.one());
        assert!(r.inv(&r.int(3)).is_none());
    }
}
