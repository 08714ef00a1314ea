//! Exact rational numbers viewed p-adically, and 2×2 matrices over them.
//!
//! Entries are kept as reduced fractions of `i128`, so p-adic units such as
//! 1/2 are representable exactly; valuations are read off by factoring p.

use crate::error::{Error, Result};
use std::fmt;

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of a modulo m (a coprime to m).
pub fn inv_mod_i128(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m))
}

pub fn ipow(p: u32, e: u32) -> i128 {
    (p as i128).pow(e)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rat {
    num: i128,
    den: i128,
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Rat {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Rat { num: s * num / g, den: s * den / g }
    }
    pub fn int(n: i128) -> Self {
        Rat { num: n, den: 1 }
    }
    pub fn zero() -> Self {
        Rat::int(0)
    }
    pub fn one() -> Self {
        Rat::int(1)
    }
    /// p^e for any integer e.
    pub fn p_pow(p: u32, e: i32) -> Self {
        if e >= 0 {
            Rat::int(ipow(p, e as u32))
        } else {
            Rat::new(1, ipow(p, (-e) as u32))
        }
    }
    pub fn num(&self) -> i128 {
        self.num
    }
    pub fn den(&self) -> i128 {
        self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
    pub fn add(self, o: Rat) -> Rat {
        let g = gcd(self.den, o.den);
        let l = self.den / g;
        Rat::new(self.num * (o.den / g) + o.num * l, l * o.den)
    }
    pub fn neg(self) -> Rat {
        Rat { num: -self.num, den: self.den }
    }
    pub fn sub(self, o: Rat) -> Rat {
        self.add(o.neg())
    }
    pub fn mul(self, o: Rat) -> Rat {
        let g1 = gcd(self.num, o.den).max(1);
        let g2 = gcd(o.num, self.den).max(1);
        Rat::new((self.num / g1) * (o.num / g2), (self.den / g2) * (o.den / g1))
    }
    pub fn inv(self) -> Option<Rat> {
        if self.num == 0 {
            None
        } else {
            Some(Rat::new(self.den, self.num))
        }
    }
    pub fn div(self, o: Rat) -> Option<Rat> {
        o.inv().map(|i| self.mul(i))
    }

    /// p-adic valuation; `None` for zero.
    pub fn valuation(&self, p: u32) -> Option<i32> {
        if self.num == 0 {
            return None;
        }
        let p = p as i128;
        let mut v = 0;
        let mut n = self.num;
        while n % p == 0 {
            n /= p;
            v += 1;
        }
        let mut d = self.den;
        while d % p == 0 {
            d /= p;
            v -= 1;
        }
        Some(v)
    }

    /// Residue modulo p^e of an element of Z_(p); errors if not p-integral.
    pub fn mod_p_pow(&self, p: u32, e: u32) -> Result<i128> {
        let m = ipow(p, e);
        if e == 0 {
            return Ok(0);
        }
        if self.den % p as i128 == 0 {
            return Err(Error::Invariant(format!("{self:?} is not {p}-integral")));
        }
        let di = inv_mod_i128(self.den, m).expect("denominator coprime to p");
        Ok((self.num.rem_euclid(m) * di).rem_euclid(m))
    }
}

/// A 2×2 matrix [[a, b], [c, d]] acting on column vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PadicMatrix2x2 {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

pub type PMat = PadicMatrix2x2;

impl PadicMatrix2x2 {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        PadicMatrix2x2 { a, b, c, d }
    }
    pub fn from_ints(a: i128, b: i128, c: i128, d: i128) -> Self {
        Self::new(Rat::int(a), Rat::int(b), Rat::int(c), Rat::int(d))
    }
    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }
    pub fn scalar(s: Rat) -> Self {
        Self::new(s, Rat::zero(), Rat::zero(), s)
    }
    /// diag(1, p).
    pub fn alpha(p: u32) -> Self {
        Self::from_ints(1, 0, 0, p as i128)
    }
    /// [[0, 1], [p, 0]], swapping the two standard vertices.
    pub fn w(p: u32) -> Self {
        Self::from_ints(0, 1, p as i128, 0)
    }
    pub fn det(&self) -> Rat {
        self.a.mul(self.d).sub(self.b.mul(self.c))
    }
    pub fn mul(&self, o: &PMat) -> PMat {
        PMat::new(
            self.a.mul(o.a).add(self.b.mul(o.c)),
            self.a.mul(o.b).add(self.b.mul(o.d)),
            self.c.mul(o.a).add(self.d.mul(o.c)),
            self.c.mul(o.b).add(self.d.mul(o.d)),
        )
    }
    pub fn scale(&self, s: Rat) -> PMat {
        PMat::new(self.a.mul(s), self.b.mul(s), self.c.mul(s), self.d.mul(s))
    }
    pub fn inverse(&self) -> Result<PMat> {
        let di = self.det().inv().ok_or(Error::Singular)?;
        Ok(PMat::new(self.d.mul(di), self.b.neg().mul(di), self.c.neg().mul(di), self.a.mul(di)))
    }
    pub fn entries(&self) -> [Rat; 4] {
        [self.a, self.b, self.c, self.d]
    }
    /// Minimal valuation of the entries (None for the zero matrix).
    pub fn min_valuation(&self, p: u32) -> Option<i32> {
        self.entries().iter().filter_map(|e| e.valuation(p)).min()
    }
    /// Whether all entries are in Z_(p) and the determinant is a p-adic unit.
    pub fn in_gl2_zp(&self, p: u32) -> bool {
        self.entries().iter().all(|e| e.valuation(p).is_none_or(|v| v >= 0)) && self.det().valuation(p) == Some(0)
    }
    /// Reduction mod p of a matrix with p-integral entries, as integers in [0,p).
    pub fn reduce_mod_p(&self, p: u32) -> Result<[u32; 4]> {
        let mut out = [0u32; 4];
        for (o, e) in out.iter_mut().zip(self.entries()) {
            *o = e.mod_p_pow(p, 1)? as u32;
        }
        Ok(out)
    }
}

/// Elementary-divisor valuations (a, b), a <= b, of a nonsingular matrix:
/// a is the least entry valuation and a + b the valuation of the determinant.
pub fn smith_valuations(m: &PMat, p: u32) -> Result<(i32, i32)> {
    let vdet = m.det().valuation(p).ok_or(Error::Singular)?;
    let a = m.min_valuation(p).ok_or(Error::Singular)?;
    Ok((a, vdet - a))
}

/// Factor m = p^e · h1 · diag(1, p^n) · h2 with h1, h2 ∈ GL2(Z_(p)).
/// Returns (e, n, h1, h2). Row/column operations only divide by p-adic units.
pub fn cartan_decompose(m: &PMat, p: u32) -> Result<(i32, i32, PMat, PMat)> {
    let (e, b) = smith_valuations(m, p)?;
    let n = b - e;
    let s = Rat::p_pow(p, -e);
    let m0 = m.scale(s);
    // pick an entry of valuation 0 and bring it to the top-left corner
    let ents = m0.entries();
    let idx = (0..4).find(|&i| ents[i].valuation(p) == Some(0)).expect("unit entry after scaling");
    let swap = PMat::from_ints(0, 1, 1, 0);
    let (l, r) = match idx {
        0 => (PMat::identity(), PMat::identity()),
        1 => (PMat::identity(), swap),
        2 => (swap, PMat::identity()),
        _ => (swap, swap),
    };
    // m1 = l · m0 · r has a unit in the corner
    let m1 = l.mul(&m0).mul(&r);
    let u = m1.a;
    // clear below and to the right of the corner
    let row_op = PMat::new(Rat::one(), Rat::zero(), m1.c.div(u).unwrap().neg(), Rat::one());
    let col_op = PMat::new(Rat::one(), m1.b.div(u).unwrap().neg(), Rat::zero(), Rat::one());
    let m2 = row_op.mul(&m1).mul(&col_op);
    // m2 = diag(u, d'), d' = p^n · unit
    let dprime = m2.d;
    let unit = dprime.mul(Rat::p_pow(p, -n));
    let diag_units = PMat::new(u, Rat::zero(), Rat::zero(), unit);
    // m0 = l^{-1} row_op^{-1} diag(1,p^n) diag_units col_op^{-1} r^{-1}
    let h1 = l.inverse()?.mul(&row_op.inverse()?);
    let h2 = diag_units.mul(&col_op.inverse()?).mul(&r.inverse()?);
    Ok((e, n, h1, h2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let a = Rat::new(2, 6);
        assert_eq!(a, Rat::new(1, 3));
        assert_eq!(a.add(Rat::new(1, 6)), Rat::new(1, 2));
        assert_eq!(Rat::new(18, 5).valuation(3), Some(2));
        assert_eq!(Rat::new(5, 9).valuation(3), Some(-2));
        assert_eq!(Rat::new(1, 2).mod_p_pow(3, 2).unwrap(), 5);
    }

    #[test]
    fn smith_examples() {
        let p = 3;
        assert_eq!(smith_valuations(&PMat::identity(), p).unwrap(), (0, 0));
        assert_eq!(smith_valuations(&PMat::alpha(p), p).unwrap(), (0, 1));
        assert_eq!(smith_valuations(&PMat::from_ints(9, 3, 0, 1), p).unwrap(), (0, 2));
        assert!(smith_valuations(&PMat::from_ints(1, 2, 2, 4), p).is_err());
    }

    #[test]
    fn cartan_factorization_recomposes() {
        let p = 5;
        for m in [
            PMat::from_ints(25, 7, 3, 1),
            PMat::from_ints(0, 1, 5, 0),
            PMat::new(Rat::new(1, 5), Rat::int(2), Rat::new(3, 25), Rat::new(1, 2)),
        ] {
            let (e, n, h1, h2) = cartan_decompose(&m, p).unwrap();
            assert!(h1.in_gl2_zp(p) && h2.in_gl2_zp(p));
            let diag = PMat::new(Rat::one(), Rat::zero(), Rat::zero(), Rat::p_pow(p, n));
            let back = h1.mul(&diag).mul(&h2).scale(Rat::p_pow(p, e));
            assert_eq!(back, m);
        }
    }
}
