//! Cartier modules of special formal 𝒪_D-modules at points y ≠ ∞ of a
//! component of the special fiber, over K = ℚ_p.
//!
//! The module is free of rank 4 over the Galois ring W = GR(p^N, m), graded
//! M = M₀ ⊕ M₁, with ordered basis (x₀₀, x₁₀, x₀₁, x₁₁) where x_{j,k} lies in
//! degree k. Operators are stored as 4×4 matrices whose columns are images of
//! the basis vectors. F is σ-semilinear and V is σ⁻¹-semilinear, so
//! F(Σ c_j x_j) = Fr·σ(c) and V(Σ c_j x_j) = Ve·σ⁻¹(c).

use crate::arith::galois::{GaloisRing, GaloisRingElement as Gr};
use crate::arith::{Fe, FiniteField};
use crate::error::{Error, Result};
use serde::Serialize;
use std::sync::Arc;

pub const DEFAULT_PRECISION: u32 = 2;

/// Index of x_{j,k} in the ordered basis.
pub fn basis_index(j: usize, k: usize) -> usize {
    2 * (k % 2) + (j % 2)
}

fn degree_of(idx: usize) -> usize {
    idx / 2
}

/// Square matrix over a Galois ring, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrMatrix {
    pub n: usize,
    pub data: Vec<Gr>,
}

impl GrMatrix {
    pub fn zeros(ring: &GaloisRing, n: usize) -> Self {
        GrMatrix { n, data: vec![ring.zero(); n * n] }
    }
    pub fn scalar(ring: &GaloisRing, n: usize, s: &Gr) -> Self {
        let mut m = Self::zeros(ring, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }
    pub fn get(&self, r: usize, c: usize) -> &Gr {
        &self.data[r * self.n + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: Gr) {
        self.data[r * self.n + c] = v;
    }
    pub fn mul(&self, ring: &GaloisRing, o: &GrMatrix) -> GrMatrix {
        let n = self.n;
        let mut out = Self::zeros(ring, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..n {
                    let cur = out.get(i, j).clone();
                    out.set(i, j, ring.add(&cur, &ring.mul(a, o.get(k, j))));
                }
            }
        }
        out
    }
    pub fn map(&self, f: impl Fn(&Gr) -> Gr) -> GrMatrix {
        GrMatrix { n: self.n, data: self.data.iter().map(f).collect() }
    }
    pub fn apply(&self, ring: &GaloisRing, v: &[Gr]) -> Vec<Gr> {
        (0..self.n)
            .map(|r| (0..self.n).fold(ring.zero(), |acc, c| ring.add(&acc, &ring.mul(self.get(r, c), &v[c]))))
            .collect()
    }
    pub fn reduce(&self, ring: &GaloisRing) -> Vec<Fe> {
        self.data.iter().map(|x| ring.reduce(x)).collect()
    }
}

/// Elementary-divisor valuations of a square matrix over a Galois ring; a
/// zero divisor is reported as the precision N.
pub fn smith_valuations_gr(ring: &GaloisRing, m: &GrMatrix) -> Vec<u32> {
    let n = m.n;
    let p = ring.p();
    let cap = ring.precision();
    let mut a = m.clone();
    let mut out = vec![];
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    while !rows.is_empty() {
        let mut best: Option<(u32, usize, usize)> = None;
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                let v = ring.valuation(a.get(r, c));
                if best.is_none_or(|b| v < b.0) {
                    best = Some((v, ri, ci));
                }
            }
        }
        let (v, ri, ci) = best.unwrap();
        out.push(v);
        let (pr, pc) = (rows[ri], cols[ci]);
        rows.remove(ri);
        cols.remove(ci);
        if v >= cap {
            out.extend(std::iter::repeat_n(cap, rows.len()));
            break;
        }
        // pivot = p^v·u
        let unit_part = Gr(a.get(pr, pc).0.iter().map(|&x| x / p.pow(v)).collect());
        let uinv = ring.inv(&unit_part).expect("unit after removing p-power");
        for &r in &rows {
            let e = a.get(r, pc).clone();
            if ring.is_zero(&e) {
                continue;
            }
            let e_div = Gr(e.0.iter().map(|&x| x / p.pow(v)).collect());
            let factor = ring.mul(&e_div, &uinv);
            for &c in cols.iter().chain(std::iter::once(&pc)) {
                let cur = a.get(r, c).clone();
                let sub = ring.mul(&factor, a.get(pr, c));
                a.set(r, c, ring.sub(&cur, &sub));
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone)]
pub struct CartierPoint {
    pub ring: GaloisRing,
    pub y: Fe,
    pub i: usize,
    pub pi: GrMatrix,
    pub fr: GrMatrix,
    pub ve: GrMatrix,
}

/// The Cartier module at y with critical index i, over W(F_{p^m}) truncated
/// at precision n. Only q = p is supported (f = 1).
pub fn build_cartier_point(field: Arc<FiniteField>, f: u32, y: Fe, i: usize, n: u32) -> Result<CartierPoint> {
    if f != 1 {
        return Err(Error::Unsupported(format!("Cartier modules are only built over Q_p (f = 1), got f = {f}")));
    }
    if i > 1 {
        return Err(Error::Config(format!("critical index must be 0 or 1, got {i}")));
    }
    let fld = field.clone();
    let ring = GaloisRing::new(field, n)?;
    let p = ring.int(fld.p() as i64);
    let one = ring.one();
    let ty = ring.teichmuller(y);
    let ty_q = ring.teichmuller(fld.frobenius(y, 1)?);
    let ty_inv_q = ring.teichmuller(fld.inv_frobenius(y, 1)?);
    let i1 = 1 - i;
    let (x0i, x1i, x0j, x1j) = (basis_index(0, i), basis_index(1, i), basis_index(0, i1), basis_index(1, i1));
    let build = |last: &Gr| {
        let mut m = GrMatrix::zeros(&ring, 4);
        // x_{0,i} ↦ p·x_{0,i+1} − [y]·x_{1,i+1}
        m.set(x0j, x0i, p.clone());
        m.set(x1j, x0i, ring.neg(&ty));
        // x_{1,i} ↦ x_{1,i+1}
        m.set(x1j, x1i, one.clone());
        // x_{1,i+1} ↦ p·x_{1,i}
        m.set(x1i, x1j, p.clone());
        // x_{0,i+1} ↦ x_{0,i} + last·x_{1,i}
        m.set(x0i, x0j, one.clone());
        m.set(x1i, x0j, last.clone());
        m
    };
    let pi = build(&ty);
    let fr = build(&ty_q);
    let ve = build(&ty_inv_q);
    Ok(CartierPoint { ring, y, i, pi, fr, ve })
}

impl CartierPoint {
    pub fn field(&self) -> &FiniteField {
        self.ring.field()
    }

    pub fn apply_pi(&self, v: &[Gr]) -> Vec<Gr> {
        self.pi.apply(&self.ring, v)
    }
    pub fn apply_f(&self, v: &[Gr]) -> Vec<Gr> {
        let s: Vec<Gr> = v.iter().map(|c| self.ring.sigma(c)).collect();
        self.fr.apply(&self.ring, &s)
    }
    pub fn apply_v(&self, v: &[Gr]) -> Vec<Gr> {
        let s: Vec<Gr> = v.iter().map(|c| self.ring.sigma_inv(c)).collect();
        self.ve.apply(&self.ring, &s)
    }

    /// Matrix of F∘V, which is linear: Fr·σ(Ve).
    pub fn fv_matrix(&self) -> GrMatrix {
        self.fr.mul(&self.ring, &self.ve.map(|x| self.ring.sigma(x)))
    }
    /// Matrix of V∘F: Ve·σ⁻¹(Fr).
    pub fn vf_matrix(&self) -> GrMatrix {
        self.ve.mul(&self.ring, &self.fr.map(|x| self.ring.sigma_inv(x)))
    }

    pub fn p_times_identity(&self) -> GrMatrix {
        GrMatrix::scalar(&self.ring, 4, &self.ring.int(self.field().p() as i64))
    }

    /// Every operator raises the degree by one.
    pub fn is_graded(&self) -> bool {
        [&self.pi, &self.fr, &self.ve].iter().all(|m| {
            (0..4).all(|r| (0..4).all(|c| degree_of(r) != degree_of(c) || self.ring.is_zero(m.get(r, c))))
        })
    }

    /// V x ≡ 0 mod p^N forces x ≡ 0 mod p^{N−1}: every elementary divisor of
    /// Ve has valuation at most 1.
    pub fn v_injective_truncated(&self) -> bool {
        smith_valuations_gr(&self.ring, &self.ve).iter().all(|&v| v <= 1)
    }

    pub fn check_axioms(&self) -> AxiomReport {
        let pid = self.p_times_identity();
        AxiomReport {
            pi_squared: self.pi.mul(&self.ring, &self.pi) == pid,
            fv: self.fv_matrix() == pid,
            vf: self.vf_matrix() == pid,
            graded: self.is_graded(),
            v_injective: self.v_injective_truncated(),
        }
    }

    /// F(λx) = σ(λ)F(x) and V(λx) = σ⁻¹(λ)V(x) for λ = [t] and the given x.
    pub fn check_semilinearity(&self, t: Fe, x: &[Gr]) -> bool {
        let r = &self.ring;
        let lam = r.teichmuller(t);
        let lx: Vec<Gr> = x.iter().map(|c| r.mul(&lam, c)).collect();
        let f_lhs = self.apply_f(&lx);
        let f_rhs: Vec<Gr> = self.apply_f(x).iter().map(|c| r.mul(&r.sigma(&lam), c)).collect();
        let v_lhs = self.apply_v(&lx);
        let v_rhs: Vec<Gr> = self.apply_v(x).iter().map(|c| r.mul(&r.sigma_inv(&lam), c)).collect();
        // composites as semilinear maps on an actual vector
        let pv: Vec<Gr> = x.iter().map(|c| r.scalar_mul(self.field().p() as i64, c)).collect();
        f_lhs == f_rhs && v_lhs == v_rhs && self.apply_f(&self.apply_v(x)) == pv && self.apply_v(&self.apply_f(x)) == pv
    }

    /// Scalars of Π_* and F_* on the Lie quotients, read off the matrices:
    /// the image of x_{0,i+1} in M_i/(V M_{i+1} + pM_i), which is spanned by
    /// the class of x_{1,i}.
    pub fn lie_scalars_from_matrices(&self) -> LieMapScalars {
        let fld = self.field();
        let i = self.i;
        let (x0i, x1i, x0j) = (basis_index(0, i), basis_index(1, i), basis_index(0, 1 - i));
        let r = &self.ring;
        // V x_{0,i+1} mod p = v0·x_{0,i} + v1·x_{1,i} with v0 a unit
        let v0 = r.reduce(self.ve.get(x0i, x0j));
        let v1 = r.reduce(self.ve.get(x1i, x0j));
        let slope = fld.div(v1, v0).expect("V x_{0,i+1} has unit x_{0,i} coordinate");
        let project = |m: &GrMatrix| {
            let c0 = r.reduce(m.get(x0i, x0j));
            let c1 = r.reduce(m.get(x1i, x0j));
            fld.sub(c1, fld.mul(slope, c0))
        };
        LieMapScalars { pi_scalar: project(&self.pi), f_scalar: project(&self.fr) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub pi_squared: bool,
    pub fv: bool,
    pub vf: bool,
    pub graded: bool,
    pub v_injective: bool,
}

impl AxiomReport {
    pub fn all(&self) -> bool {
        self.pi_squared && self.fv && self.vf && self.graded && self.v_injective
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LieMapScalars {
    pub pi_scalar: Fe,
    pub f_scalar: Fe,
}

/// (y − y^{1/q}, y^q − y^{1/q}) in F_{q^m}, q = p^f.
pub fn lie_map_scalars(field: &FiniteField, f: u32, y: Fe) -> Result<LieMapScalars> {
    let yq = field.frobenius(y, f)?;
    let yiq = field.inv_frobenius(y, f)?;
    Ok(LieMapScalars { pi_scalar: field.sub(y, yiq), f_scalar: field.sub(yq, yiq) })
}

#[derive(Debug, Clone, Serialize)]
pub struct VanishingScan {
    pub p: u32,
    pub f: u32,
    pub m: u32,
    pub field_size: u32,
    pub pi_zero_count: usize,
    pub f_zero_count: usize,
    /// zeros of the Π scalar are exactly F_q
    pub pi_zeros_are_fq: bool,
    /// zeros of the F scalar are exactly F_{q^m} ∩ F_{q²}
    pub f_zeros_are_fq2: bool,
    /// whether the matrix-derived scalars agree with the closed forms (f = 1 only)
    pub matrices_agree: Option<bool>,
}

impl VanishingScan {
    pub fn ok(&self) -> bool {
        self.pi_zeros_are_fq && self.f_zeros_are_fq2 && self.matrices_agree != Some(false)
    }
}

/// Exhaustive scan of the Lie scalars over F_{q^m}.
pub fn vanishing_scan(p: u32, f: u32, m: u32) -> Result<VanishingScan> {
    if m == 0 || m > 4 {
        return Err(Error::Config(format!("extension degree m must be in 1..=4, got {m}")));
    }
    let field = Arc::new(FiniteField::new(p, f * m)?);
    let mut pi_zero = 0;
    let mut f_zero = 0;
    let mut pi_ok = true;
    let mut f_ok = true;
    let mut agree = true;
    for y in field.elements() {
        let s = lie_map_scalars(&field, f, y)?;
        let in_fq = field.in_subfield(y, f);
        let in_fq2 = field.in_subfield(y, 2 * f);
        pi_zero += (s.pi_scalar == 0) as usize;
        f_zero += (s.f_scalar == 0) as usize;
        pi_ok &= (s.pi_scalar == 0) == in_fq;
        f_ok &= (s.f_scalar == 0) == in_fq2;
        if f == 1 {
            for i in 0..2 {
                let pt = build_cartier_point(field.clone(), 1, y, i, 1)?;
                agree &= pt.lie_scalars_from_matrices() == s;
            }
        }
    }
    Ok(VanishingScan {
        p,
        f,
        m,
        field_size: field.order(),
        pi_zero_count: pi_zero,
        f_zero_count: f_zero,
        pi_zeros_are_fq: pi_ok,
        f_zeros_are_fq2: f_ok,
        matrices_agree: (f == 1).then_some(agree),
    })
}

/// Element u + εv of F[ε]/(ε²).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dual {
    pub u: Fe,
    pub v: Fe,
}

impl Dual {
    fn add(self, o: Dual, f: &FiniteField) -> Dual {
        Dual { u: f.add(self.u, o.u), v: f.add(self.v, o.v) }
    }
    fn mul(self, o: Dual, f: &FiniteField) -> Dual {
        Dual { u: f.mul(self.u, o.u), v: f.add(f.mul(self.u, o.v), f.mul(self.v, o.u)) }
    }
    fn inv(self, f: &FiniteField) -> Option<Dual> {
        let ui = f.inv(self.u)?;
        Some(Dual { u: ui, v: f.neg(f.mul(self.v, f.mul(ui, ui))) })
    }
    fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }
}

type DualVec = [Dual; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Twist {
    None,
    Sigma,
    SigmaInv,
}

/// The reductions mod p of Π, F, V acting on (M/pM) ⊗ F[ε], with ε fixed.
pub struct EpsilonOperators<'a> {
    field: &'a FiniteField,
    pi: Vec<Fe>,
    fr: Vec<Fe>,
    ve: Vec<Fe>,
    y: Fe,
    i: usize,
}

impl<'a> EpsilonOperators<'a> {
    pub fn new(pt: &'a CartierPoint) -> Self {
        EpsilonOperators {
            field: pt.field(),
            pi: pt.pi.reduce(&pt.ring),
            fr: pt.fr.reduce(&pt.ring),
            ve: pt.ve.reduce(&pt.ring),
            y: pt.y,
            i: pt.i,
        }
    }

    fn apply(&self, m: &[Fe], tw: Twist, x: &DualVec) -> DualVec {
        let f = self.field;
        let t = |c: Fe| match tw {
            Twist::None => c,
            Twist::Sigma => f.frobenius(c, 1).unwrap(),
            Twist::SigmaInv => f.inv_frobenius(c, 1).unwrap(),
        };
        let mut out = [Dual { u: 0, v: 0 }; 4];
        for (r, o) in out.iter_mut().enumerate() {
            for c in 0..4 {
                let a = m[r * 4 + c];
                if a != 0 {
                    let xc = Dual { u: t(x[c].u), v: t(x[c].v) };
                    *o = o.add(Dual { u: a, v: 0 }.mul(xc, f), f);
                }
            }
        }
        out
    }

    /// e_j(b) for j = i (degree i) or j = i+1.
    pub fn e(&self, j: usize, b: Fe) -> DualVec {
        let f = self.field;
        let i = self.i;
        let mut x = [Dual { u: 0, v: 0 }; 4];
        if j % 2 == i {
            // V x_{0,i+1} + εb·x_{1,i} = x_{0,i} + (y^{1/q} + εb)·x_{1,i}
            x[basis_index(0, i)] = Dual { u: 1, v: 0 };
            x[basis_index(1, i)] = Dual { u: f.inv_frobenius(self.y, 1).unwrap(), v: b };
        } else {
            // V x_{1,i} + εb·x_{0,i+1} = x_{1,i+1} + εb·x_{0,i+1}
            x[basis_index(1, 1 - i)] = Dual { u: 1, v: 0 };
            x[basis_index(0, 1 - i)] = Dual { u: 0, v: b };
        }
        x
    }

    /// Whether w lies in the F[ε]-line spanned by g (g has a unit coordinate).
    fn in_line(&self, w: &DualVec, g: &DualVec) -> bool {
        let f = self.field;
        if w.iter().all(|x| x.is_zero()) {
            return true;
        }
        let k = g.iter().position(|x| x.u != 0).expect("generator reduces to a nonzero vector");
        let c = w[k].mul(g[k].inv(f).unwrap(), f);
        (0..4).all(|r| c.mul(g[r], f) == w[r])
    }

    /// Stability of D = F[ε]e_i(a0) ⊕ F[ε]e_{i+1}(a1) under Π[ε], V[ε], F[ε].
    pub fn stable(&self, a0: Fe, a1: Fe) -> StabilityReport {
        let d = [self.e(self.i, a0), self.e(self.i + 1, a1)];
        // operators raise the degree, so e_i maps into the line of e_{i+1} and back
        let check = |m: &[Fe], tw: Twist| {
            self.in_line(&self.apply(m, tw, &d[0]), &d[1]) && self.in_line(&self.apply(m, tw, &d[1]), &d[0])
        };
        StabilityReport {
            pi: check(&self.pi, Twist::None),
            v: check(&self.ve, Twist::SigmaInv),
            f: check(&self.fr, Twist::Sigma),
        }
    }

    /// Image of x_{0,i+1} under Π (or F) in M_i ⊗ F[ε] / F[ε]e_i(a), as a
    /// multiple u + εv of the class of x_{1,i}.
    pub fn lie_image(&self, branch: LieBranch, a: Fe) -> Dual {
        let f = self.field;
        let i = self.i;
        let mut x = [Dual { u: 0, v: 0 }; 4];
        x[basis_index(0, 1 - i)] = Dual { u: 1, v: 0 };
        let img = match branch {
            LieBranch::Pi => self.apply(&self.pi, Twist::None, &x),
            LieBranch::Frobenius => self.apply(&self.fr, Twist::Sigma, &x),
        };
        let g = self.e(i, a);
        // subtract c0·e_i(a) to kill the x_{0,i} coordinate (g has u = 1 there)
        let c0 = img[basis_index(0, i)];
        let neg = Dual { u: f.neg(c0.u), v: f.neg(c0.v) };
        img[basis_index(1, i)].add(neg.mul(g[basis_index(1, i)], f), f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub pi: bool,
    pub v: bool,
    pub f: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LieBranch {
    Pi,
    Frobenius,
}

/// For the deformation D = F[ε]e_i(a) ⊕ F[ε]e_{i+1}(0), the induced map on
/// the Lie quotient sends x_{0,i+1} to u + εv times x_{1,i}; returns (u, v).
/// The Π branch needs y ∈ F_q, the F branch y ∈ F_{q²}.
pub fn deformation_lie_scalar(pt: &CartierPoint, branch: LieBranch, a: Fe) -> Result<(Fe, Fe)> {
    let fld = pt.field();
    let ok = match branch {
        LieBranch::Pi => fld.in_subfield(pt.y, 1),
        LieBranch::Frobenius => fld.in_subfield(pt.y, 2),
    };
    if !ok {
        return Err(Error::Precondition(format!("y = {} is not a vanishing point for the {branch:?} branch", pt.y)));
    }
    let d = EpsilonOperators::new(pt).lie_image(branch, a);
    Ok((d.u, d.v))
}

#[derive(Debug, Clone, Serialize)]
pub struct DeformationClassification {
    pub y: Fe,
    pub y_in_fq: bool,
    /// number of free parameters (a₀, a₁)
    pub dimension: usize,
    /// every sampled (a₀, a₁) was Π[ε]-stable exactly when predicted
    pub pi_stability_matches: bool,
    /// every Π[ε]-stable sample is also V[ε]- and F[ε]-stable
    pub v_f_stable: bool,
    pub samples: usize,
}

/// Graded deformations of the Hodge filtration at y. A pair (a₀, a₁) is
/// Π[ε]-stable iff (y − y^{1/q})·a₁ = 0.
pub fn classify_deformations(pt: &CartierPoint, samples: &[(Fe, Fe)]) -> DeformationClassification {
    let fld = pt.field();
    let ops = EpsilonOperators::new(pt);
    let y_in_fq = fld.in_subfield(pt.y, 1);
    let c = fld.sub(pt.y, fld.inv_frobenius(pt.y, 1).unwrap());
    let mut pi_match = true;
    let mut vf = true;
    for &(a0, a1) in samples {
        let predicted = fld.mul(c, a1) == 0;
        let s = ops.stable(a0, a1);
        pi_match &= s.pi == predicted;
        if s.pi {
            vf &= s.v && s.f;
        }
    }
    DeformationClassification {
        y: pt.y,
        y_in_fq,
        dimension: if y_in_fq { 2 } else { 1 },
        pi_stability_matches: pi_match,
        v_f_stable: vf,
        samples: samples.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(p: u32, m: u32, y: Fe, i: usize, n: u32) -> CartierPoint {
        build_cartier_point(Arc::new(FiniteField::new(p, m).unwrap()), 1, y, i, n).unwrap()
    }

    #[test]
    fn y_zero_specializes_the_table() {
        let pt = point(3, 2, 0, 0, 2);
        let r = &pt.ring;
        // Π x₀₀ = 3·x₀₁, Π x₀₁ = x₀₀
        assert_eq!(*pt.pi.get(basis_index(0, 1), basis_index(0, 0)), r.int(3));
        assert!(r.is_zero(pt.pi.get(basis_index(1, 1), basis_index(0, 0))));
        assert_eq!(*pt.pi.get(basis_index(0, 0), basis_index(0, 1)), r.one());
        assert!(r.is_zero(pt.pi.get(basis_index(1, 0), basis_index(0, 1))));
    }

    #[test]
    fn axioms_hold_at_all_precisions() {
        for p in [3, 5] {
            for n in 1..=4 {
                for y in [0, 1, 2, 7] {
                    for i in 0..2 {
                        let pt = point(p, 2, y, i, n);
                        assert!(pt.check_axioms().all(), "p={p} n={n} y={y} i={i}: {:?}", pt.check_axioms());
                    }
                }
            }
        }
    }

    #[test]
    fn non_prime_residue_base_is_unsupported() {
        let f = Arc::new(FiniteField::new(3, 2).unwrap());
        assert!(matches!(build_cartier_point(f, 2, 1, 0, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn smith_over_galois_ring() {
        let r = GaloisRing::new(Arc::new(FiniteField::new(3, 1).unwrap()), 3).unwrap();
        let mut m = GrMatrix::zeros(&r, 2);
        m.set(0, 0, r.int(3));
        m.set(0, 1, r.int(1));
        m.set(1, 0, r.int(9));
        m.set(1, 1, r.int(3));
        // det = 0 mod 27 with unit content: divisors (0, N)
        assert_eq!(smith_valuations_gr(&r, &m), vec![0, 3]);
    }

    #[test]
    fn lie_scalars_examples() {
        let f = FiniteField::new(3, 2).unwrap();
        for y in f.elements() {
            let s = lie_map_scalars(&f, 1, y).unwrap();
            if f.in_subfield(y, 1) {
                assert_eq!((s.pi_scalar, s.f_scalar), (0, 0));
            } else {
                assert!(s.pi_scalar != 0 && s.f_scalar == 0);
            }
        }
    }

    #[test]
    fn scans() {
        let s = vanishing_scan(3, 1, 4).unwrap();
        assert_eq!((s.pi_zero_count, s.f_zero_count), (3, 9));
        assert!(s.ok());
        let s = vanishing_scan(5, 1, 2).unwrap();
        assert_eq!(s.f_zero_count, 25);
        assert!(s.ok());
        // q = 9 through the closed forms only
        let s = vanishing_scan(3, 2, 2).unwrap();
        assert_eq!((s.pi_zero_count, s.f_zero_count), (9, 81));
    }

    #[test]
    fn first_order_deformations() {
        let pt = point(3, 2, 1, 0, 2);
        assert_eq!(deformation_lie_scalar(&pt, LieBranch::Pi, 0).unwrap(), (0, 0));
        // −ε·a with a = 1
        assert_eq!(deformation_lie_scalar(&pt, LieBranch::Pi, 1).unwrap(), (0, 2));
        let fld = pt.field();
        let y = (0..9).find(|&y| !fld.in_subfield(y, 1)).unwrap();
        let pt2 = point(3, 2, y, 1, 2);
        assert!(deformation_lie_scalar(&pt2, LieBranch::Pi, 1).is_err());
        let (u, v) = deformation_lie_scalar(&pt2, LieBranch::Frobenius, 4).unwrap();
        assert_eq!((u, v), (0, fld.neg(4)));
    }

    #[test]
    fn deformation_families() {
        let f = Arc::new(FiniteField::new(3, 2).unwrap());
        let all: Vec<(Fe, Fe)> = (0..9).flat_map(|a| (0..9).map(move |b| (a, b))).collect();
        for y in 0..9 {
            let pt = build_cartier_point(f.clone(), 1, y, 0, 2).unwrap();
            let c = classify_deformations(&pt, &all);
            assert!(c.pi_stability_matches && c.v_f_stable);
            assert_eq!(c.dimension, if f.in_subfield(y, 1) { 2 } else { 1 });
        }
    }
}
