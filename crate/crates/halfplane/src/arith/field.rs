//! Finite fields F_{p^d} with log/exp tables.
//!
//! An element is encoded as the integer whose base-p digits are the
//! coefficients of its polynomial representative (constant term lowest), so the
//! prime field sits inside as 0..p.

use crate::error::{Error, Result};

pub type Fe = u32;

/// Largest field order we are willing to tabulate.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    d: u32,
    order: u32,
    /// Monic modulus, coefficients c_0..c_{d-1} (leading 1 implicit).
    modulus: Vec<u32>,
    exp: Vec<Fe>,
    log: Vec<u32>,
    pow_p: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

// Dense polynomials over F_p, lowest coefficient first, used only while
// searching for the modulus and a primitive element.
fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut r: Vec<u32> = r.into_iter().map(|x| x as u32).collect();
    poly_rem(&mut r, m, p);
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn poly_rem(a: &mut Vec<u32>, m: &[u32], p: u32) {
    poly_trim(a);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while a.len() > dm {
        let top = a.len() - 1;
        let c = a[top] as u64 * lead_inv % p as u64;
        for (i, &mi) in m.iter().enumerate() {
            let idx = top - dm + i;
            a[idx] = ((a[idx] as u64 + (p as u64 - c) * mi as u64) % p as u64) as u32;
        }
        poly_trim(a);
    }
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        poly_rem(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn poly_powmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut r = vec![1u32];
    let mut b = base.to_vec();
    poly_rem(&mut b, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = poly_mulmod(&r, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    r
}

/// Rabin-style test: m of degree d is irreducible iff gcd(x^{p^j} - x, m) = 1
/// for every j <= d/2 (the full-degree condition x^{p^d} = x is implied for
/// squarefree m with no factor of degree <= d/2).
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let d = m.len() - 1;
    if d == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let mut xp = x.clone();
    for _ in 1..=d / 2 {
        xp = poly_powmod(&xp, p as u64, m, p);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(m, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree d, comparing the
/// coefficient vector (c_{d-1}, ..., c_0) as a base-p integer.
pub fn smallest_irreducible(p: u32, d: u32) -> Vec<u32> {
    let count = (p as u64).pow(d);
    for code in 0..count {
        // code's base-p digits, most significant = c_{d-1}
        let mut coeffs = vec![0u32; d as usize + 1];
        let mut c = code;
        for i in 0..d as usize {
            coeffs[i] = (c % p as u64) as u32;
            c /= p as u64;
        }
        coeffs[d as usize] = 1;
        if d > 1 && coeffs[0] == 0 {
            continue;
        }
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn factor_distinct(mut n: u64) -> Vec<u64> {
    let mut fs = vec![];
    let mut i = 2;
    while i * i <= n {
        if n % i == 0 {
            fs.push(i);
            while n % i == 0 {
                n /= i;
            }
        }
        i += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    fs
}

impl FiniteField {
    pub fn new(p: u32, d: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Config(format!("{p} is not prime")));
        }
        if d == 0 {
            return Err(Error::Config("extension degree must be >= 1".into()));
        }
        let order = (p as u64)
            .checked_pow(d)
            .filter(|&o| o <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::Resource(format!("field of order {p}^{d} too large")))?;
        let modulus = smallest_irreducible(p, d);
        let order32 = order as u32;
        let to_poly = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(d as usize);
            let mut x = x;
            for _ in 0..d {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let from_poly = |v: &[u32]| -> u32 {
            let mut x = 0u32;
            for &c in v.iter().rev() {
                x = x * p + c;
            }
            x
        };
        // smallest primitive element by encoding
        let n1 = order - 1;
        let primes = factor_distinct(n1);
        let mut gen = 0u32;
        for cand in 1..order32 {
            let g = to_poly(cand);
            let ok = primes.iter().all(|&r| {
                let mut v = poly_powmod(&g, n1 / r, &modulus, p);
                poly_trim(&mut v);
                v != vec![1]
            });
            if ok {
                gen = cand;
                break;
            }
        }
        let mut exp = vec![0u32; n1 as usize];
        let mut log = vec![0u32; order as usize];
        let g = to_poly(gen);
        let mut cur = vec![1u32];
        for i in 0..n1 as usize {
            let mut c = cur.clone();
            c.resize(d as usize, 0);
            let e = from_poly(&c);
            exp[i] = e;
            log[e as usize] = i as u32;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }
        let pow_p = (0..d).map(|i| p.pow(i)).collect();
        Ok(FiniteField { p, d, order: order32, modulus: modulus[..d as usize].to_vec(), exp, log, pow_p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.d
    }
    pub fn order(&self) -> u32 {
        self.order
    }
    /// Coefficients c_0..c_{d-1} of the monic modulus (leading 1 omitted).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn zero(&self) -> Fe {
        0
    }
    pub fn one(&self) -> Fe {
        1
    }
    pub fn primitive(&self) -> Fe {
        if self.order == 2 {
            1
        } else {
            self.exp[1]
        }
    }
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.order
    }

    pub fn from_int(&self, x: i64) -> Fe {
        x.rem_euclid(self.p as i64) as Fe
    }

    /// Polynomial coefficients (c_0 first) of an element.
    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.d as usize);
        let mut x = x;
        for _ in 0..self.d {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        let mut x = 0;
        for i in (0..self.d as usize).rev() {
            x = x * self.p + c.get(i).copied().unwrap_or(0) % self.p;
        }
        x
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.d == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut r = 0;
        for i in 0..self.d as usize {
            let s = (a % self.p + b % self.p) % self.p;
            r += s * self.pow_p[i];
            a /= self.p;
            b /= self.p;
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.d == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let mut r = 0;
        for i in 0..self.d as usize {
            let c = a % self.p;
            r += ((self.p - c) % self.p) * self.pow_p[i];
            a /= self.p;
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.d == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as Fe;
        }
        let n1 = self.order - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n1 { s - n1 } else { s }) as usize]
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return None;
        }
        let n1 = self.order - 1;
        let l = self.log[a as usize];
        Some(self.exp[((n1 - l) % n1) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n1 = (self.order - 1) as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % n1)) % n1) as usize]
    }

    /// a^e for a signed exponent; a must be nonzero when e < 0.
    pub fn pow_i(&self, a: Fe, e: i64) -> Fe {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            let n1 = (self.order - 1) as i64;
            self.pow(a, e.rem_euclid(n1) as u64)
        }
    }

    pub fn log_of(&self, a: Fe) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    fn check_f(&self, f: u32) -> Result<()> {
        if f == 0 || self.d % f != 0 {
            return Err(Error::Config(format!("f={f} does not divide the degree {}", self.d)));
        }
        Ok(())
    }

    /// x ↦ x^q with q = p^f.
    pub fn frobenius(&self, x: Fe, f: u32) -> Result<Fe> {
        self.check_f(f)?;
        Ok(self.pow(x, (self.p as u64).pow(f)))
    }

    /// The unique z with z^q = x, computed as x^{q^{(d/f)-1}}.
    pub fn inv_frobenius(&self, x: Fe, f: u32) -> Result<Fe> {
        self.check_f(f)?;
        let q = (self.p as u64).pow(f);
        let mut z = x;
        for _ in 0..(self.d / f - 1) {
            z = self.pow(z, q);
        }
        Ok(z)
    }

    /// Whether x lies in the subfield F_{p^e} (x^{p^e} = x).
    pub fn in_subfield(&self, x: Fe, e: u32) -> bool {
        let mut z = x;
        for _ in 0..e {
            z = self.pow(z, self.p as u64);
        }
        z == x
    }

    /// Square classes are only meaningful in odd characteristic.
    pub fn is_square(&self, x: Fe) -> bool {
        x == 0 || self.log[x as usize] % 2 == 0
    }
}
