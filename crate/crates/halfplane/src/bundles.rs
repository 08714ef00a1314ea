//! Order, weight and type calculus for [G]₂-equivariant line bundles on the
//! special fiber, modelled by quadruples (a, r, k₀, k₁).
//!
//! A class is pinned down by its orders k_i at the two standard components and
//! by its restriction to ℙ_{s₁}, which is δ_a ⊗ det^r ⊗ 𝒪(k₁). Tensor product
//! is componentwise: orders add, a multiplies, r adds modulo q−1.

use crate::arith::{Fe, FiniteField};
use crate::error::{Error, Result};
use serde::Serialize;

/// A smooth character of [G]₂ trivial on 1+p𝒪: det^t on 𝒪^* and a on p²·id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Character {
    pub t: u64,
    pub a: Fe,
}

impl Character {
    pub fn trivial() -> Self {
        Character { t: 0, a: 1 }
    }

    pub fn legendre(q: u64) -> Self {
        Character { t: (q - 1) / 2, a: 1 }
    }

    pub fn compose(&self, o: &Character, q: u64, field: &FiniteField) -> Character {
        Character { t: (self.t + o.t) % (q - 1), a: field.mul(self.a, o.a) }
    }

    pub fn pow(&self, e: i64, q: u64, field: &FiniteField) -> Character {
        let m = (q - 1) as i64;
        Character { t: (self.t as i64 * e).rem_euclid(m) as u64, a: field.pow_i(self.a, e) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BundleClass {
    pub q: u64,
    pub chi: Character,
    pub k0: i64,
    pub k1: i64,
}

impl BundleClass {
    pub fn new(q: u64, a: Fe, r: i64, k0: i64, k1: i64) -> Self {
        BundleClass { q, chi: Character { t: r.rem_euclid(q as i64 - 1) as u64, a }, k0, k1 }
    }

    /// Exponent of det on the restriction to ℙ_{s₁}; the one on ℙ_{s₀} is r + k₁.
    pub fn r(&self) -> u64 {
        self.chi.t
    }

    pub fn r0(&self) -> u64 {
        (self.chi.t as i64 + self.k1).rem_euclid(self.q as i64 - 1) as u64
    }

    pub fn orders(&self) -> (i64, i64) {
        (self.k0, self.k1)
    }

    pub fn order(&self, i: usize) -> i64 {
        if i == 0 {
            self.k0
        } else {
            self.k1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Omega0,
    Omega1,
    L0,
    L1,
    OmegaLog,
}

pub const GENERATORS: [Generator; 5] =
    [Generator::Omega0, Generator::Omega1, Generator::L0, Generator::L1, Generator::OmegaLog];

/// A product ω₀^e₀ ⊗ ω₁^e₁ ⊗ 𝓛₀^e₂ ⊗ 𝓛₁^e₃ ⊗ Ω¹(log)^e₄ ⊗ 𝒪(χ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorWord {
    pub exps: [i64; 5],
    pub chi: Character,
}

impl GeneratorWord {
    pub fn unit() -> Self {
        GeneratorWord { exps: [0; 5], chi: Character::trivial() }
    }

    pub fn generator(g: Generator) -> Self {
        let mut w = Self::unit();
        w.exps[GENERATORS.iter().position(|&x| x == g).unwrap()] = 1;
        w
    }

    pub fn character(chi: Character) -> Self {
        GeneratorWord { exps: [0; 5], chi }
    }

    pub fn mul(&self, o: &GeneratorWord, q: u64, field: &FiniteField) -> Self {
        let mut exps = self.exps;
        for (e, x) in exps.iter_mut().zip(o.exps) {
            *e += x;
        }
        GeneratorWord { exps, chi: self.chi.compose(&o.chi, q, field) }
    }

    pub fn pow(&self, e: i64, q: u64, field: &FiniteField) -> Self {
        GeneratorWord { exps: self.exps.map(|x| x * e), chi: self.chi.pow(e, q, field) }
    }
}

/// Orders (ord_{s₀}, ord_{s₁}) of each generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrderTable {
    pub q: u64,
    pub omega0: (i64, i64),
    pub omega1: (i64, i64),
    pub l0: (i64, i64),
    pub l1: (i64, i64),
    pub omega_log: (i64, i64),
}

impl OrderTable {
    pub fn closed_form(q: u64) -> Self {
        let q = q as i64;
        OrderTable { q: q as u64, omega0: (-1, q), omega1: (q, -1), l0: (1, -1), l1: (-1, 1), omega_log: (q - 1, q - 1) }
    }

    pub fn get(&self, g: Generator) -> (i64, i64) {
        match g {
            Generator::Omega0 => self.omega0,
            Generator::Omega1 => self.omega1,
            Generator::L0 => self.l0,
            Generator::L1 => self.l1,
            Generator::OmegaLog => self.omega_log,
        }
    }
}

/// Solve [[a, b], [c, d]]·(x, y) = (e, f) over the integers.
fn solve_2x2_int(m: [[i64; 2]; 2], rhs: [i64; 2]) -> Result<(i64, i64)> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0 {
        return Err(Error::Invariant("singular order system".into()));
    }
    let nx = rhs[0] * m[1][1] - m[0][1] * rhs[1];
    let ny = m[0][0] * rhs[1] - rhs[0] * m[1][0];
    if nx % det != 0 || ny % det != 0 {
        return Err(Error::Invariant("order system has no integral solution".into()));
    }
    Ok((nx / det, ny / det))
}

/// Recover the generator order table from the divisor degrees of the Π- and
/// F-vanishing loci (q+1 and q²+1 points per component) and the Raynaud
/// relations between 𝓛₀ and 𝓛₁.
pub fn solve_order_systems(q: u64) -> Result<OrderTable> {
    if q < 3 {
        return Err(Error::Config(format!("q must be at least 3, got {q}")));
    }
    let qi = q as i64;
    // x = ord_{s₀} ω₀, y = ord_{s₀} ω₁:
    //   −x + y = q + 1,  −x + q·y = q² + 1
    let (x, y) = solve_2x2_int([[-1, 1], [-1, qi]], [qi + 1, qi * qi + 1])?;
    // a = ord_{s_i} 𝓛_i, b = ord_{s_i} 𝓛_{i+1}:  a + b = 0,  a − q·b = q + 1
    let (a, b) = solve_2x2_int([[1, 1], [1, -qi]], [0, qi + 1])?;
    // exchanging the two standard vertices swaps indices
    let omega0 = (x, y);
    let omega1 = (y, x);
    let l0 = (a, b);
    let l1 = (b, a);
    Ok(OrderTable { q, omega0, omega1, l0, l1, omega_log: (omega0.0 + omega1.0, omega0.1 + omega1.1) })
}

/// Character attached to each generator. ω₀ and 𝓛₀ are normalized to the
/// trivial character; the others follow from ω₁ ≅ ω₀ ⊗ 𝓛₀^{q+1}(leg),
/// 𝓛₀ ≅ 𝓛₁^{−1}(leg) and Ω¹(log) ≅ ω₀ ⊗ ω₁.
pub fn generator_character(g: Generator, q: u64) -> Character {
    match g {
        Generator::Omega0 | Generator::L0 => Character::trivial(),
        Generator::Omega1 | Generator::L1 | Generator::OmegaLog => Character::legendre(q),
    }
}

pub fn orders(w: &GeneratorWord, q: u64) -> (i64, i64) {
    let t = OrderTable::closed_form(q);
    let mut k = (0, 0);
    for (g, e) in GENERATORS.iter().zip(w.exps) {
        let (a, b) = t.get(*g);
        k.0 += e * a;
        k.1 += e * b;
    }
    k
}

pub fn evaluate(w: &GeneratorWord, q: u64, field: &FiniteField) -> BundleClass {
    let (k0, k1) = orders(w, q);
    let mut chi = w.chi;
    for (g, e) in GENERATORS.iter().zip(w.exps) {
        chi = chi.compose(&generator_character(*g, q).pow(e, q, field), q, field);
    }
    BundleClass { q, chi, k0, k1 }
}

pub fn weight(l: &BundleClass) -> Result<i64> {
    let s = l.k0 + l.k1;
    let m = l.q as i64 - 1;
    if s % m != 0 {
        return Err(Error::Invariant(format!("k0 + k1 = {s} is not divisible by q − 1 = {m}")));
    }
    Ok(-s / m)
}

fn omega_order(i: usize, j: usize, q: u64) -> i64 {
    let t = OrderTable::closed_form(q);
    let o = if i == 0 { t.omega0 } else { t.omega1 };
    if j == 0 {
        o.0
    } else {
        o.1
    }
}

/// t_{i,j} = ord_{s_j}(L) + ord_{s_j}(ω_i)·w(L).
pub fn type_of(l: &BundleClass, i: usize, j: usize) -> Result<i64> {
    Ok(l.order(j) + omega_order(i, j, l.q) * weight(l)?)
}

/// L = ω_i^{e} ⊗ 𝓛_j^{t} ⊗ 𝒪(χ) with e = −w(L); returns (e, t, χ).
pub fn decompose(l: &BundleClass, i: usize, j: usize, field: &FiniteField) -> Result<(i64, i64, Character)> {
    let w = weight(l)?;
    let t = type_of(l, i, j)?;
    let omega = if i == 0 { Generator::Omega0 } else { Generator::Omega1 };
    let line = if j == 0 { Generator::L0 } else { Generator::L1 };
    let q = l.q;
    let removed = generator_character(omega, q)
        .pow(-w, q, field)
        .compose(&generator_character(line, q).pow(t, q, field), q, field);
    let chi = l.chi.compose(&removed.pow(-1, q, field), q, field);
    Ok((-w, t, chi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Positivity {
    Positive,
    Negative,
    Mixed,
}

pub fn positivity_class(l: &BundleClass) -> Positivity {
    match (l.k0 >= 0, l.k1 >= 0) {
        (true, true) => Positivity::Positive,
        (false, false) => Positivity::Negative,
        _ => Positivity::Mixed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VanishingPrediction {
    #[serde(rename = "H0_zero")]
    H0Zero,
    #[serde(rename = "H1_zero")]
    H1Zero,
    #[serde(rename = "none")]
    None,
    #[serde(rename = "indeterminate")]
    Indeterminate,
}

/// Vanishing predicted on the whole special fiber. Classes with an order
/// equal to −1 sit on the boundary where the H¹ statement and the filtration
/// description disagree, so no prediction is made there.
pub fn predict_vanishing(l: &BundleClass) -> VanishingPrediction {
    let (k0, k1) = (l.k0, l.k1);
    let q = l.q as i64;
    if k0.min(k1) == -1 {
        return VanishingPrediction::Indeterminate;
    }
    if k0 < 0 && k1 < 0 {
        return VanishingPrediction::H0Zero;
    }
    if k0 >= 0 && k1 >= 0 {
        return VanishingPrediction::H1Zero;
    }
    let small = |k: i64| (0..=q).contains(&k);
    if (small(k0) && k1 < 0) || (small(k1) && k0 < 0) {
        return VanishingPrediction::H0Zero;
    }
    VanishingPrediction::None
}

#[derive(Debug, Serialize)]
pub struct Types {
    pub t00: i64,
    pub t01: i64,
    pub t10: i64,
    pub t11: i64,
}

#[derive(Debug, Serialize)]
pub struct BundleInfo {
    pub q: u64,
    pub chi: Character,
    pub r: u64,
    pub k0: i64,
    pub k1: i64,
    pub weight: i64,
    pub types: Types,
    pub positivity: Positivity,
    pub vanishing_prediction: VanishingPrediction,
}

pub fn bundle_info(l: &BundleClass) -> Result<BundleInfo> {
    Ok(BundleInfo {
        q: l.q,
        chi: l.chi,
        r: l.r(),
        k0: l.k0,
        k1: l.k1,
        weight: weight(l)?,
        types: Types {
            t00: type_of(l, 0, 0)?,
            t01: type_of(l, 0, 1)?,
            t10: type_of(l, 1, 0)?,
            t11: type_of(l, 1, 1)?,
        },
        positivity: positivity_class(l),
        vanishing_prediction: predict_vanishing(l),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    fn f(q: u32) -> FiniteField {
        let p = (2..=q).find(|p| q % p == 0).unwrap();
        let d = (1..).find(|&d| p.pow(d) == q).unwrap();
        FiniteField::new(p, d).unwrap()
    }

    #[test]
    fn generator_orders() {
        for q in [3, 5, 9] {
            let ev = |w: GeneratorWord| orders(&w, q);
            assert_eq!(ev(GeneratorWord::generator(Omega0)), (-1, q as i64));
            let fld = f(q as u32);
            let l0l1 = GeneratorWord::generator(L0).mul(&GeneratorWord::generator(L1), q, &fld);
            assert_eq!(ev(l0l1), (0, 0));
            let ks = GeneratorWord::generator(Omega0).mul(&GeneratorWord::generator(Omega1), q, &fld);
            assert_eq!(ev(ks), (q as i64 - 1, q as i64 - 1));
            assert_eq!(ev(ks), ev(GeneratorWord::generator(OmegaLog)));
        }
    }

    #[test]
    fn weights_and_types() {
        let q = 3;
        let fld = f(3);
        let ev = |g| evaluate(&GeneratorWord::generator(g), q, &fld);
        assert_eq!(weight(&ev(Omega0)).unwrap(), -1);
        assert_eq!(weight(&ev(L0)).unwrap(), 0);
        assert_eq!(weight(&ev(OmegaLog)).unwrap(), -2);
        for j in 0..2 {
            assert_eq!(type_of(&ev(Omega0), 0, j).unwrap(), 0);
        }
        assert_eq!(type_of(&ev(L0), 1, 0).unwrap(), 1);
        assert_eq!(type_of(&ev(OmegaLog), 0, 0).unwrap(), q as i64 + 1);
        assert!(weight(&BundleClass::new(3, 1, 0, 1, 0)).is_err());
    }

    #[test]
    fn decompositions_match_the_character_relations() {
        let q = 5;
        let fld = f(5);
        let ev = |g| evaluate(&GeneratorWord::generator(g), q, &fld);
        assert_eq!(decompose(&ev(Omega1), 0, 0, &fld).unwrap(), (1, 6, Character::legendre(q)));
        assert_eq!(decompose(&ev(L1), 0, 0, &fld).unwrap(), (0, -1, Character::legendre(q)));
    }

    #[test]
    fn positivity_and_vanishing() {
        let b = |k0, k1| BundleClass::new(3, 1, 0, k0, k1);
        assert_eq!(positivity_class(&b(1, 1)), Positivity::Positive);
        assert_eq!(positivity_class(&b(-1, 3)), Positivity::Mixed);
        assert_eq!(positivity_class(&b(-1, -1)), Positivity::Negative);
        assert_eq!(predict_vanishing(&b(-2, -2)), VanishingPrediction::H0Zero);
        assert_eq!(predict_vanishing(&b(1, 1)), VanishingPrediction::H1Zero);
        assert_eq!(predict_vanishing(&b(3, -2)), VanishingPrediction::H0Zero);
        assert_eq!(predict_vanishing(&b(-2, 3)), VanishingPrediction::H0Zero);
        assert_eq!(predict_vanishing(&b(-1, 5)), VanishingPrediction::Indeterminate);
        assert_eq!(predict_vanishing(&b(6, -4)), VanishingPrediction::None);
    }

    #[test]
    fn solved_table_matches_closed_form() {
        for q in [3, 5, 7, 9, 25, 49] {
            assert_eq!(solve_order_systems(q).unwrap(), OrderTable::closed_form(q));
        }
        assert!(solve_order_systems(2).is_err());
    }
}
