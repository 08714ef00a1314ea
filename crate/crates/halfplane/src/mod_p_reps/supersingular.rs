//! Truncated supersingular quotients V_i/T·V_{i+1} and the matching between
//! positive weight −1 bundle classes and supersingular parameters.

use super::{InducedElement, InducedRep, WeightSigma};
use crate::arith::linalg::Echelon;
use crate::arith::{Fe, FiniteField};
use crate::bt_tree::Tree;
use crate::bundles::{positivity_class, weight, BundleClass, Positivity};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::collections::{HashMap, HashSet};

/// dim V_i^{≤R} − rank T(V_{i+1}^{≤R−1}) on the ball of radius R around s₁.
pub fn supersingular_quotient_dim(i: u8, sigma: &WeightSigma, radius: u32) -> Result<usize> {
    if radius < 1 {
        return Err(Error::Precondition("the truncation radius must be at least 1".into()));
    }
    if i > 1 {
        return Err(Error::Config(format!("parity must be 0 or 1, got {i}")));
    }
    let rep = InducedRep::new(sigma.clone())?;
    let ball = rep.tree.ball(rep.tree.s1(), radius, 0)?;
    let d = sigma.dim();
    let mut offset = HashMap::new();
    for (idx, v) in ball.vertices.iter().enumerate() {
        if ball.parity(idx) == i {
            offset.insert(*v, offset.len() * d);
        }
    }
    let total = offset.len() * d;
    let f = sigma.field();
    let mut ech = Echelon::new();
    for (idx, v) in ball.vertices.iter().enumerate() {
        if ball.parity(idx) == i || ball.depth[idx] + 1 > radius {
            continue;
        }
        for j in 0..d {
            let mut w = vec![0; d];
            w[j] = 1;
            let t = rep.t_apply(&InducedElement::single(*v, w), &ball)?;
            let mut vec = vec![0; total];
            for (u, wu) in &t.terms {
                let o = offset[u];
                vec[o..o + d].copy_from_slice(wu);
            }
            ech.insert(f, vec);
        }
    }
    Ok(total - ech.rank())
}

/// π^i_{a,k,r}: a ∈ F_{p^m}^*, r mod p−1, k ∈ [0, p−1], parity i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SupersingularParams {
    pub a: Fe,
    pub r: i64,
    pub k: usize,
    pub i: u8,
}

impl SupersingularParams {
    /// Representative with i = 1, using π⁰_{a,k,r} ≅ π¹_{a,p−1−k,r+k}.
    pub fn normal_form(&self, p: u32) -> Self {
        let m = p as i64 - 1;
        if self.i == 1 {
            SupersingularParams { r: self.r.rem_euclid(m), ..*self }
        } else {
            SupersingularParams { a: self.a, r: (self.r + self.k as i64).rem_euclid(m), k: p as usize - 1 - self.k, i: 1 }
        }
    }
}

/// The class attached to H⁰ of L = (a, r₁, k₀, k₁): π¹ with k = k₁ and r = −(r₁ + k₁).
pub fn bundle_to_supersingular(l: &BundleClass) -> Result<SupersingularParams> {
    if positivity_class(l) != Positivity::Positive || weight(l)? != -1 {
        return Err(Error::Precondition(format!("({}, {}) is not positive of weight −1", l.k0, l.k1)));
    }
    let m = l.q as i64 - 1;
    Ok(SupersingularParams { a: l.chi.a, r: (-(l.r() as i64) - l.k1).rem_euclid(m), k: l.k1 as usize, i: 1 })
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationReport {
    pub p: u32,
    pub m: u32,
    pub bundle_classes: usize,
    pub supersingular_classes: usize,
    pub injective: bool,
    pub surjective: bool,
    /// random classes whose images were recomputed and compared
    pub sampled_pairs: usize,
    pub samples_distinct: bool,
}

impl EnumerationReport {
    pub fn ok(&self) -> bool {
        self.injective && self.surjective && self.bundle_classes == self.supersingular_classes && self.samples_distinct
    }
}

/// Enumerates positive weight −1 classes over F_{p^m} and matches them with supersingular normal forms.
pub fn enumerate_and_match(p: u32, m: u32, seed: u64) -> Result<EnumerationReport> {
    Tree::new(p)?;
    let field = FiniteField::new(p, m)?;
    let q = p as u64;
    let units: Vec<Fe> = field.elements().filter(|&x| x != 0).collect();
    let mut bundles = vec![];
    for &a in &units {
        for r in 0..(p as i64 - 1) {
            for k0 in 0..p as i64 {
                bundles.push(BundleClass::new(q, a, r, k0, p as i64 - 1 - k0));
            }
        }
    }
    let mut normal_forms = HashSet::new();
    for &a in &units {
        for r in 0..(p as i64 - 1) {
            for k in 0..p as usize {
                for i in 0..2 {
                    normal_forms.insert(SupersingularParams { a, r, k, i }.normal_form(p));
                }
            }
        }
    }
    let images: Vec<SupersingularParams> = bundles.iter().map(bundle_to_supersingular).collect::<Result<_>>()?;
    let distinct: HashSet<_> = images.iter().copied().collect();
    let injective = distinct.len() == images.len();
    let surjective = distinct == normal_forms;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut samples_distinct = true;
    let sampled_pairs = 100;
    for _ in 0..sampled_pairs {
        let (x, y) = (rng.gen_range(0..bundles.len()), rng.gen_range(0..bundles.len()));
        let same = bundle_to_supersingular(&bundles[x])? == bundle_to_supersingular(&bundles[y])?;
        samples_distinct &= same == (x == y);
    }
    Ok(EnumerationReport {
        p,
        m,
        bundle_classes: bundles.len(),
        supersingular_classes: normal_forms.len(),
        injective,
        surjective,
        sampled_pairs,
        samples_distinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_dims_small() {
        let s = WeightSigma::new(3, 1, 0).unwrap();
        assert_eq!(supersingular_quotient_dim(1, &s, 1).unwrap(), 2);
        assert!(supersingular_quotient_dim(1, &s, 0).is_err());
        for k in 0..3 {
            let s = WeightSigma::new(3, k, 0).unwrap();
            for i in 0..2 {
                let dims: Vec<usize> = (1..=4).map(|r| supersingular_quotient_dim(i, &s, r).unwrap()).collect();
                assert!(dims.windows(2).all(|w| w[0] <= w[1]), "k={k} i={i} {dims:?}");
                assert!(dims[3] > dims[1] && dims[2] > dims[0], "k={k} i={i} {dims:?}");
            }
        }
    }

    #[test]
    fn counts_match() {
        let r = enumerate_and_match(3, 1, 0).unwrap();
        assert!(r.ok() && r.bundle_classes == 12, "{r:?}");
        let r = enumerate_and_match(5, 1, 0).unwrap();
        assert!(r.ok() && r.bundle_classes == 80, "{r:?}");
    }

    #[test]
    fn normal_form_identification() {
        let x = SupersingularParams { a: 1, r: 1, k: 0, i: 0 }.normal_form(5);
        assert_eq!(x, SupersingularParams { a: 1, r: 1, k: 4, i: 1 });
        assert_eq!(x.normal_form(5), x);
    }
}
