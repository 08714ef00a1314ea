//! Compactly induced mod-p representations cind_{G°Z}^G σ on the tree, the
//! Hecke functions φ_n and the operator T.
//!
//! σ = Sym^k ⊗ det^r acts on homogeneous polynomials of degree k in X, Y
//! (basis X^{k−j}Y^j, index j) by (σ(g)P)(v) = det(g)^r P(adj(g)·v) for column
//! vectors v. With this convention a section evaluated at the marked point
//! (λ, 1) transforms correctly under chart changes, and the Hecke projector U
//! keeps the Y^k coefficient. The center acts through σ with p·id acting
//! trivially.
//!
//! Induced elements are stored in the canonical charts rep(v) of the tree:
//! a term (v, w) stands for [rep(v), w].

mod jordan_holder;
mod phi_tilde;
mod supersingular;

pub use jordan_holder::{fun_p1_matrix, intertwiners, jordan_holder_check, JordanHolderReport};
pub use phi_tilde::{phi_tilde, PhiTildeReport};
pub use supersingular::{
    bundle_to_supersingular, enumerate_and_match, supersingular_quotient_dim, EnumerationReport,
    SupersingularParams,
};

use crate::arith::linalg::Matrix;
use crate::arith::padic::{cartan_decompose, PMat, Rat};
use crate::arith::{Fe, FiniteField};
use crate::bt_tree::{Ball, Tree, Vertex};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

/// 2×2 matrix over F_p as [a, b, c, d].
pub type M2 = [u32; 4];

pub fn m2_mul(p: u32, x: &M2, y: &M2) -> M2 {
    let p = p as u64;
    let f = |a: u32, b: u32, c: u32, d: u32| ((a as u64 * b as u64 + c as u64 * d as u64) % p) as u32;
    [
        f(x[0], y[0], x[1], y[2]),
        f(x[0], y[1], x[1], y[3]),
        f(x[2], y[0], x[3], y[2]),
        f(x[2], y[1], x[3], y[3]),
    ]
}

pub fn m2_det(p: u32, x: &M2) -> u32 {
    let p = p as u64;
    ((x[0] as u64 * x[3] as u64 % p + p - x[1] as u64 * x[2] as u64 % p) % p) as u32
}

pub fn m2_inv(p: u32, x: &M2) -> Option<M2> {
    let d = m2_det(p, x);
    if d == 0 {
        return None;
    }
    let di = crate::arith::padic::inv_mod_i128(d as i128, p as i128)? as u64;
    let s = |v: u32| (v as u64 * di % p as u64) as u32;
    let n = |v: u32| (p - v) % p;
    Some([s(x[3]), s(n(x[1])), s(n(x[2])), s(x[0])])
}

/// Multiply two homogeneous polynomials given by Y-exponent coefficient vectors.
fn poly_mul(f: &FiniteField, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

/// The matrix of Sym^k ⊗ det^r at g ∈ GL₂(F_p); column j is the image of X^{k−j}Y^j.
pub fn sym_matrix(f: &FiniteField, k: usize, r: i64, g: &M2) -> Matrix {
    let [a, b, c, d] = *g;
    let neg = |x: u32| f.neg(x);
    // adj(g)·(X, Y) = (dX − bY, −cX + aY)
    let lx = [d, neg(b)];
    let ly = [neg(c), a];
    let det = f.pow_i(m2_det(f.p(), g), r);
    let mut m = Matrix::zeros(k + 1, k + 1);
    for j in 0..=k {
        let mut poly = vec![1];
        for _ in 0..k - j {
            poly = poly_mul(f, &poly, &lx);
        }
        for _ in 0..j {
            poly = poly_mul(f, &poly, &ly);
        }
        for (i, &x) in poly.iter().enumerate() {
            m.set(i, j, f.mul(det, x));
        }
    }
    m
}

/// Row vector of the evaluation P ↦ P(x, y) in the monomial basis.
pub fn eval_row(f: &FiniteField, k: usize, x: Fe, y: Fe) -> Vec<Fe> {
    (0..=k).map(|j| f.mul(f.pow(x, (k - j) as u64), f.pow(y, j as u64))).collect()
}

/// A Serre weight Sym^k ⊗ det^r of GL₂(F_p), inflated to G°Z with p·id ↦ 1.
#[derive(Debug, Clone)]
pub struct WeightSigma {
    pub k: usize,
    pub r: i64,
    field: Arc<FiniteField>,
}

impl WeightSigma {
    pub fn new(p: u32, k: usize, r: i64) -> Result<Self> {
        Self::over(p, 1, k, r)
    }

    /// The same weight with coefficients extended to F_{p^m}.
    pub fn over(p: u32, m: u32, k: usize, r: i64) -> Result<Self> {
        let field = Arc::new(FiniteField::new(p, m)?);
        if k as u32 > p - 1 {
            return Err(Error::Config(format!("weight k={k} outside [0, {}]", p - 1)));
        }
        Ok(WeightSigma { k, r: r.rem_euclid(p as i64 - 1), field })
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }
    pub fn dim(&self) -> usize {
        self.k + 1
    }
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn matrix_mod_p(&self, g: &M2) -> Matrix {
        sym_matrix(&self.field, self.k, self.r, g)
    }

    /// σ(h) for h ∈ G°Z: strip the power of p and reduce mod p.
    pub fn sigma(&self, h: &PMat) -> Result<Matrix> {
        let p = self.p();
        let e = h.min_valuation(p).ok_or(Error::Singular)?;
        let h0 = h.scale(Rat::p_pow(p, -e));
        if !h0.in_gl2_zp(p) {
            return Err(Error::Invariant(format!("{h:?} is not in G°Z")));
        }
        Ok(self.matrix_mod_p(&h0.reduce_mod_p(p)?))
    }

    /// U: keeps the coefficient of Y^k.
    pub fn u_projector(&self) -> Matrix {
        let mut u = Matrix::zeros(self.dim(), self.dim());
        u.set(self.k, self.k, 1);
        u
    }

    /// φ_n(g): σ(h₁) U σ(h₂) when g ∈ p^e h₁ αⁿ h₂, zero off that double coset.
    pub fn hecke_phi(&self, g: &PMat, n: u32) -> Result<Matrix> {
        let p = self.p();
        let (_, m, h1, h2) = cartan_decompose(g, p)?;
        if m != n as i32 {
            return Ok(Matrix::zeros(self.dim(), self.dim()));
        }
        let f = &*self.field;
        if n == 0 {
            return self.sigma(&h1.mul(&h2));
        }
        Ok(self.sigma(&h1)?.mul(f, &self.u_projector()).mul(f, &self.sigma(&h2)?))
    }
}

pub fn mat_add(f: &FiniteField, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(&x, &y)| f.add(x, y)).collect() }
}

/// A finitely supported element of cind_{G°Z}^G σ in canonical charts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InducedElement {
    pub terms: BTreeMap<Vertex, Vec<Fe>>,
}

impl InducedElement {
    pub fn zero() -> Self {
        Self::default()
    }
    pub fn single(v: Vertex, w: Vec<Fe>) -> Self {
        let mut e = Self::zero();
        e.terms.insert(v, w);
        e.prune();
        e
    }
    pub fn add_term(&mut self, f: &FiniteField, v: Vertex, w: &[Fe]) {
        let slot = self.terms.entry(v).or_insert_with(|| vec![0; w.len()]);
        for (s, &x) in slot.iter_mut().zip(w) {
            *s = f.add(*s, x);
        }
    }
    pub fn add(&self, f: &FiniteField, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, w) in &other.terms {
            out.add_term(f, *v, w);
        }
        out.prune();
        out
    }
    pub fn scale(&self, f: &FiniteField, s: Fe) -> Self {
        let mut out = Self::zero();
        for (v, w) in &self.terms {
            out.terms.insert(*v, w.iter().map(|&x| f.mul(x, s)).collect());
        }
        out.prune();
        out
    }
    pub fn sub(&self, f: &FiniteField, other: &Self) -> Self {
        self.add(f, &other.scale(f, f.neg(1)))
    }
    fn prune(&mut self) {
        self.terms.retain(|_, w| w.iter().any(|&x| x != 0));
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn support(&self) -> Vec<Vertex> {
        self.terms.keys().copied().collect()
    }
}

/// cind_{G°Z}^G σ together with the tree it lives on.
#[derive(Debug, Clone)]
pub struct InducedRep {
    pub tree: Tree,
    pub sigma: WeightSigma,
    /// φ₁(x_λ⁻¹) for the q+1 coset representatives x_λ of G°ZαG°/G°Z
    t_kernels: Vec<Matrix>,
}

impl InducedRep {
    pub fn new(sigma: WeightSigma) -> Result<Self> {
        let tree = Tree::new(sigma.p())?;
        let t_kernels = (0..=sigma.p())
            .map(|pt| sigma.hecke_phi(&tree.neighbor_rep(pt).inverse()?, 1))
            .collect::<Result<Vec<_>>>()?;
        Ok(InducedRep { tree, sigma, t_kernels })
    }

    fn f(&self) -> &FiniteField {
        self.sigma.field()
    }

    /// Re-express [g, w] (g arbitrary) in the canonical chart of g·s₁.
    pub fn normalize(&self, g: &PMat, w: &[Fe]) -> Result<(Vertex, Vec<Fe>)> {
        let u = self.tree.canonical(g)?;
        let h = self.tree.rep(&u).inverse()?.mul(g);
        Ok((u, self.sigma.sigma(&h)?.apply(self.f(), w)))
    }

    /// The element Σ [charts[i], w_i] given in arbitrary charts.
    pub fn from_charts(&self, terms: &[(PMat, Vec<Fe>)]) -> Result<InducedElement> {
        let mut out = InducedElement::zero();
        for (g, w) in terms {
            let (u, w) = self.normalize(g, w)?;
            out.add_term(self.f(), u, &w);
        }
        out.prune();
        Ok(out)
    }

    pub fn act(&self, g: &PMat, x: &InducedElement) -> Result<InducedElement> {
        if g.det().is_zero() {
            return Err(Error::Singular);
        }
        let mut out = InducedElement::zero();
        for (v, w) in &x.terms {
            let (u, w) = self.normalize(&g.mul(&self.tree.rep(v)), w)?;
            out.add_term(self.f(), u, &w);
        }
        out.prune();
        Ok(out)
    }

    /// T[g, w] = Σ_λ [g x_λ, φ₁(x_λ⁻¹) w], with no window check.
    pub fn t_apply_unchecked(&self, x: &InducedElement) -> Result<InducedElement> {
        let f = self.f();
        let mut out = InducedElement::zero();
        for (v, w) in &x.terms {
            let g = self.tree.rep(v);
            for pt in 0..=self.tree.p() {
                let w1 = self.t_kernels[pt as usize].apply(f, w);
                let (u, w2) = self.normalize(&g.mul(&self.tree.neighbor_rep(pt)), &w1)?;
                out.add_term(f, u, &w2);
            }
        }
        out.prune();
        Ok(out)
    }

    /// T restricted to elements supported in the interior of the window.
    pub fn t_apply(&self, x: &InducedElement, window: &Ball) -> Result<InducedElement> {
        for v in x.terms.keys() {
            match window.get(v) {
                Some(i) if window.is_interior(i) => {}
                _ => return Err(Error::Window(format!("{} is not interior to the window", v.to_string(window.p)))),
            }
        }
        self.t_apply_unchecked(x)
    }

    pub fn t_power(&self, n: u32, x: &InducedElement) -> Result<InducedElement> {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.t_apply_unchecked(&y)?;
        }
        Ok(y)
    }

    /// Canonical representatives of G°Zαⁿ G°/G°Z: charts of the vertices at distance n.
    pub fn coset_reps(&self, n: u32) -> Result<Vec<PMat>> {
        let ball = self.tree.ball(self.tree.s1(), n, 0)?;
        Ok(ball
            .vertices
            .iter()
            .zip(&ball.depth)
            .filter(|(_, &d)| d == n)
            .map(|(v, _)| self.tree.rep(v))
            .collect())
    }

    /// T_n[g, w] = Σ_y [g y, φ_n(y⁻¹) w] over y ∈ G°ZαⁿG°/G°Z.
    pub fn t_n_apply(&self, n: u32, x: &InducedElement) -> Result<InducedElement> {
        let f = self.f();
        let reps = self.coset_reps(n)?;
        let kernels =
            reps.iter().map(|y| self.sigma.hecke_phi(&y.inverse()?, n)).collect::<Result<Vec<_>>>()?;
        let mut out = InducedElement::zero();
        for (v, w) in &x.terms {
            let g = self.tree.rep(v);
            for (y, k) in reps.iter().zip(&kernels) {
                let (u, w2) = self.normalize(&g.mul(y), &k.apply(f, w))?;
                out.add_term(f, u, &w2);
            }
        }
        out.prune();
        Ok(out)
    }

    /// (φ_m * φ_n)(g) = Σ_{x ∈ G/G°Z} φ_m(x) φ_n(x⁻¹g); φ_m vanishes off distance m.
    pub fn convolve(&self, m: u32, n: u32, g: &PMat) -> Result<Matrix> {
        let f = self.f();
        let mut acc = Matrix::zeros(self.sigma.dim(), self.sigma.dim());
        for x in self.coset_reps(m)? {
            let a = self.sigma.hecke_phi(&x, m)?;
            let b = self.sigma.hecke_phi(&x.inverse()?.mul(g), n)?;
            acc = mat_add(f, &acc, &a.mul(f, &b));
        }
        Ok(acc)
    }

    /// T_n as a polynomial in T: Tⁿ − Tⁿ⁻² when k = 0, Tⁿ otherwise.
    pub fn t_n_via_recurrence(&self, n: u32, x: &InducedElement) -> Result<InducedElement> {
        let tn = self.t_power(n, x)?;
        if self.sigma.k == 0 && n >= 2 {
            Ok(tn.sub(self.f(), &self.t_power(n - 2, x)?))
        } else {
            Ok(tn)
        }
    }
}

/// Outcome of the Hecke recurrence checks.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RecurrenceReport {
    pub p: u32,
    pub k: usize,
    pub n_max: u32,
    /// φ₁*φ₁ = φ₂ + [k=0]φ₀ at the sampled group elements
    pub convolution_ok: bool,
    /// T_n f agrees with the polynomial in T for every sampled f and n
    pub operator_ok: bool,
}

impl RecurrenceReport {
    pub fn ok(&self) -> bool {
        self.convolution_ok && self.operator_ok
    }
}

/// Checks the recurrence for T_n (n ≤ n_max ≤ 4) on test elements built from `seed`.
pub fn verify_recurrence(p: u32, k: usize, r: i64, n_max: u32, seed: u64) -> Result<RecurrenceReport> {
    use rand::{Rng, SeedableRng};
    if n_max > 4 {
        return Err(Error::Config("recurrence is checked for n ≤ 4".into()));
    }
    let rep = InducedRep::new(WeightSigma::new(p, k, r)?)?;
    let f = rep.sigma.field();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let alpha_pow = |n: u32| PMat::new(Rat::one(), Rat::zero(), Rat::zero(), Rat::p_pow(p, n as i32));

    // the convolution identity evaluated on αⁿ and on random elements of small double cosets
    let mut tests = vec![];
    for n in 0..=3 {
        tests.push(alpha_pow(n));
        for _ in 0..3 {
            let h1 = rep.tree.random_stabilizer(&mut rng);
            let h2 = rep.tree.random_stabilizer(&mut rng);
            tests.push(h1.mul(&alpha_pow(n)).mul(&h2));
        }
    }
    let mut convolution_ok = true;
    for g in &tests {
        let lhs = rep.convolve(1, 1, g)?;
        let mut rhs = rep.sigma.hecke_phi(g, 2)?;
        if k == 0 {
            rhs = mat_add(f, &rhs, &rep.sigma.hecke_phi(g, 0)?);
        }
        convolution_ok &= lhs == rhs;
    }

    let mut operator_ok = true;
    let s1 = rep.tree.s1();
    let starts = [s1, rep.tree.s0(), rep.tree.neighbors(&rep.tree.s0())[1]];
    for v in starts {
        let w: Vec<Fe> = (0..=k).map(|_| rng.gen_range(0..p)).collect();
        let x = InducedElement::single(v, w);
        for n in 0..=n_max {
            operator_ok &= rep.t_n_apply(n, &x)? == rep.t_n_via_recurrence(n, &x)?;
        }
    }
    Ok(RecurrenceReport { p, k, n_max, convolution_ok, operator_ok })
}

/// Support, parity, degree–support and equivariance checks of T on a window.
#[derive(Debug, Clone, serde::Serialize)]
pub struct HeckeReport {
    pub p: u32,
    pub k: usize,
    pub r: i64,
    pub window: u32,
    pub recurrence_ok: bool,
    pub equivariance_trials: usize,
    pub equivariance_ok: bool,
    /// supp(Tf) is exactly the set of neighbors for a generic single-vertex f
    pub support_ok: bool,
    /// T moves single-vertex supports to the opposite parity, T² preserves it
    pub parity_ok: bool,
    /// max distance of supp(P(T)f) equals deg P for random P of degree ≤ 3
    pub degree_support_ok: bool,
}

impl HeckeReport {
    pub fn ok(&self) -> bool {
        self.recurrence_ok && self.equivariance_ok && self.support_ok && self.parity_ok && self.degree_support_ok
    }
}

/// Runs the Hecke checks for Sym^k⊗det^r with coefficients in F_{p²}, where
/// generic vectors exist (over F_p the q+1 coordinate functionals of T can
/// cover every vector).
pub fn hecke_verify(p: u32, k: usize, r: i64, window: u32, trials: usize, seed: u64) -> Result<HeckeReport> {
    use rand::{Rng, SeedableRng};
    if window < 4 {
        return Err(Error::Window(format!("the Hecke checks need a window of radius ≥ 4, got {window}")));
    }
    let recurrence_ok = verify_recurrence(p, k, r, 4, seed)?.ok();
    let rep = InducedRep::new(WeightSigma::over(p, 2, k, r)?)?;
    let f = rep.sigma.field();
    let tree = &rep.tree;
    let ball = tree.ball(tree.s1(), window, 0)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let generic = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Fe> { (0..=k).map(|_| rng.gen_range(1..f.order())).collect() };
    let dist = |v: &Vertex| tree.distance(&tree.s1(), v);

    // generic vectors are tried a few times; a miss on all of them is a failure
    let mut support_ok = false;
    for _ in 0..5 {
        let x = InducedElement::single(tree.s1(), generic(&mut rng));
        let mut nb = tree.neighbors(&tree.s1());
        nb.sort();
        if rep.t_apply(&x, &ball)?.support() == nb {
            support_ok = true;
            break;
        }
    }

    let mut parity_ok = true;
    for v in [tree.s1(), tree.s0(), tree.neighbors(&tree.s0())[0]] {
        let x = InducedElement::single(v, generic(&mut rng));
        let t1 = rep.t_apply(&x, &ball)?;
        let t2 = rep.t_apply(&t1, &ball)?;
        parity_ok &= t1.support().iter().all(|u| tree.parity(u) != tree.parity(&v));
        parity_ok &= t2.support().iter().all(|u| tree.parity(u) == tree.parity(&v));
    }

    let mut degree_support_ok = true;
    for d in 0..=3u32 {
        let mut hit = false;
        for _ in 0..5 {
            let coeffs: Vec<Fe> =
                (0..=d).map(|j| if j == d { rng.gen_range(1..f.order()) } else { rng.gen_range(0..f.order()) }).collect();
            let x = InducedElement::single(tree.s1(), generic(&mut rng));
            let mut acc = x.scale(f, coeffs[0]);
            let mut power = x.clone();
            for &c in &coeffs[1..] {
                power = rep.t_apply(&power, &ball)?;
                acc = acc.add(f, &power.scale(f, c));
            }
            if acc.support().iter().map(dist).max() == Some(d) {
                hit = true;
                break;
            }
        }
        degree_support_ok &= hit;
    }

    // g·f and T(g·f) stay inside the window: f sits at s₁ and one neighbor,
    // g moves s₁ by at most two steps
    let mut equivariance_ok = true;
    let x = InducedElement::single(tree.s1(), generic(&mut rng))
        .add(f, &InducedElement::single(tree.s0(), generic(&mut rng)));
    for _ in 0..trials {
        let mut g = tree.random_stabilizer(&mut rng);
        for _ in 0..rng.gen_range(0..=2) {
            let pt = rng.gen_range(0..=p);
            g = g.mul(&tree.neighbor_rep(pt)).mul(&tree.random_stabilizer(&mut rng));
        }
        if rng.gen_bool(0.5) {
            g = g.scale(Rat::p_pow(p, rng.gen_range(-2..=2)));
        }
        let gx = rep.act(&g, &x)?;
        equivariance_ok &= rep.t_apply(&gx, &ball)? == rep.act(&g, &rep.t_apply(&x, &ball)?)?;
    }
    Ok(HeckeReport {
        p,
        k,
        r: rep.sigma.r,
        window,
        recurrence_ok,
        equivariance_trials: trials,
        equivariance_ok,
        support_ok,
        parity_ok,
        degree_support_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_g(tree: &Tree, rng: &mut ChaCha8Rng, steps: usize) -> PMat {
        let mut g = tree.random_stabilizer(rng);
        for _ in 0..steps {
            let pt = rng.gen_range(0..=tree.p());
            g = g.mul(&tree.neighbor_rep(pt)).mul(&tree.random_stabilizer(rng));
        }
        g
    }

    #[test]
    fn sym_is_a_representation() {
        let p = 5;
        let f = FiniteField::new(p, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..p as usize {
            for _ in 0..10 {
                let mut g = || loop {
                    let m: M2 = [rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p)];
                    if m2_det(p, &m) != 0 {
                        break m;
                    }
                };
                let (a, b) = (g(), g());
                let lhs = sym_matrix(&f, k, 3, &m2_mul(p, &a, &b));
                let rhs = sym_matrix(&f, k, 3, &a).mul(&f, &sym_matrix(&f, k, 3, &b));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn hecke_phi_basics() {
        let p = 3;
        let s = WeightSigma::new(p, 2, 1).unwrap();
        for n in 1..4 {
            let a = PMat::new(Rat::one(), Rat::zero(), Rat::zero(), Rat::p_pow(p, n));
            assert_eq!(s.hecke_phi(&a, n as u32).unwrap(), s.u_projector());
            assert!(s.hecke_phi(&PMat::from_ints(1, 1, 0, 2), n as u32).unwrap().is_zero());
        }
        assert!(s.hecke_phi(&PMat::from_ints(1, 2, 2, 4), 1).is_err());
    }

    #[test]
    fn hecke_phi_is_bi_equivariant() {
        // φ(h₁ g h₂) = σ(h₁) φ(g) σ(h₂): independent of the factorization chosen
        let p = 3;
        let tree = Tree::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = WeightSigma::new(p, 2, 1).unwrap();
        let f = s.field();
        for _ in 0..20 {
            let g = random_g(&tree, &mut rng, 2);
            let (_, n, _, _) = cartan_decompose(&g, p).unwrap();
            let h1 = tree.random_stabilizer(&mut rng);
            let h2 = tree.random_stabilizer(&mut rng);
            let lhs = s.hecke_phi(&h1.mul(&g).mul(&h2), n as u32).unwrap();
            let rhs = s.sigma(&h1).unwrap().mul(f, &s.hecke_phi(&g, n as u32).unwrap()).mul(f, &s.sigma(&h2).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn trivial_weight_t_is_adjacency() {
        let p = 3;
        let rep = InducedRep::new(WeightSigma::new(p, 0, 0).unwrap()).unwrap();
        let ball = rep.tree.ball(rep.tree.s1(), 2, 0).unwrap();
        let x = InducedElement::single(rep.tree.s1(), vec![1]);
        let y = rep.t_apply(&x, &ball).unwrap();
        assert_eq!(y.terms.len(), 4);
        assert!(y.terms.values().all(|w| w == &vec![1]));
        let far = InducedElement::single(ball.vertices[ball.len() - 1], vec![1]);
        assert!(matches!(rep.t_apply(&far, &ball), Err(Error::Window(_))));
    }

    #[test]
    fn action_and_t_are_compatible() {
        let p = 3;
        let tree = Tree::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 0..p as usize {
            let rep = InducedRep::new(WeightSigma::new(p, k, 1).unwrap()).unwrap();
            let x = InducedElement::single(tree.s0(), (0..=k).map(|j| (j as u32 + 1) % p).collect());
            assert_eq!(rep.act(&PMat::identity(), &x).unwrap(), x);
            for _ in 0..8 {
                let g = random_g(&tree, &mut rng, 2);
                let h = random_g(&tree, &mut rng, 1);
                let lhs = rep.act(&g, &rep.act(&h, &x).unwrap()).unwrap();
                assert_eq!(lhs, rep.act(&g.mul(&h), &x).unwrap());
                let tg = rep.t_apply_unchecked(&rep.act(&g, &x).unwrap()).unwrap();
                assert_eq!(tg, rep.act(&g, &rep.t_apply_unchecked(&x).unwrap()).unwrap());
            }
            // T is odd: it swaps the parity components
            let y = rep.t_apply_unchecked(&x).unwrap();
            assert!(y.support().iter().all(|v| tree.parity(v) != tree.parity(&tree.s0())));
        }
    }

    #[test]
    fn hecke_checks_pass() {
        for k in 0..3 {
            let r = hecke_verify(3, k, 1, 4, 5, 2).unwrap();
            assert!(r.ok(), "{r:?}");
        }
        assert!(matches!(hecke_verify(3, 0, 0, 3, 1, 0), Err(Error::Window(_))));
    }

    #[test]
    fn recurrence_small_cases() {
        for p in [3, 5] {
            for k in [0, 1, p as usize - 1] {
                let rep = verify_recurrence(p, k, 0, 3, 1).unwrap();
                assert!(rep.ok(), "{rep:?}");
            }
        }
    }
}
