//! The acceptance suite: one exact check per criterion, each with a pinned
//! runtime budget. Shared by the integration test target and `selftest`.

use crate::arith::galois::Gr;
use crate::arith::linalg::{kernel_basis, rank, Matrix};
use crate::arith::FiniteField;
use crate::bt_tree::{Ball, Tree};
use crate::bundles::{solve_order_systems, BundleClass, OrderTable};
use crate::cartier::{build_cartier_point, deformation_lie_scalar, vanishing_scan, LieBranch};
use crate::error::Result;
use crate::mod_p_reps::{enumerate_and_match, hecke_verify, phi_tilde};
use crate::special_fiber::{
    build_complex_degrees, divisible_by_vanishing_poly, eval_kernel_basis, eval_matrix, filtration_case,
    predicted_dims, restriction_image_dim, GluingComplex,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;
use std::time::Instant;

/// Largest dense gluing matrix the Euler check row-reduces directly.
const DENSE_VERTEX_LIMIT: usize = 200;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    /// the exact check held and the runtime stayed within budget
    pub passed: bool,
    pub check_ok: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2}. {} ({} ms / {} ms): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.limit_ms,
            self.detail
        )
    }
}

type Check = fn() -> Result<(bool, String)>;

pub const CRITERIA: [(u32, &str, u128, Check); 11] = [
    (1, "generator order tables", 1_000, order_tables),
    (2, "Cartier module axioms", 5_000, cartier_axioms),
    (3, "vanishing loci of the Lie maps", 10_000, vanishing_loci),
    (4, "evaluation kernels", 5_000, evaluation_kernels),
    (5, "Euler identity", 60_000, euler_identity),
    (6, "truncated vanishing", 60_000, truncated_vanishing),
    (7, "filtration case 6", 30_000, filtration_case_six),
    (8, "Hecke identities", 120_000, hecke_identities),
    (9, "phi-tilde is a multiple of T", 120_000, phi_tilde_mechanism),
    (10, "bundle / supersingular bijection", 5_000, bijection_count),
    (11, "chart invariance", 120_000, chart_invariance),
];

pub fn run(id: u32) -> Option<CriterionResult> {
    let &(id, name, limit_ms, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (check_ok, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let elapsed_ms = start.elapsed().as_millis();
    Some(CriterionResult { id, name, passed: check_ok && elapsed_ms <= limit_ms, check_ok, detail, elapsed_ms, limit_ms })
}

/// Runs every criterion; `force_fail` marks one as failed regardless.
pub fn run_all(force_fail: Option<u32>) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|c| {
            let mut r = run(c.0).expect("listed criterion");
            if force_fail == Some(r.id) {
                r.passed = false;
                r.detail = format!("forced failure; {}", r.detail);
            }
            r
        })
        .collect()
}

fn order_tables() -> Result<(bool, String)> {
    let mut ok = true;
    let mut n = 0;
    for p in [3u64, 5, 7] {
        for f in [1, 2] {
            let q = p.pow(f) as i64;
            let t = solve_order_systems(q as u64)?;
            let expected = OrderTable {
                q: q as u64,
                omega0: (-1, q),
                omega1: (q, -1),
                l0: (1, -1),
                l1: (-1, 1),
                omega_log: (q - 1, q - 1),
            };
            ok &= t == expected && t == OrderTable::closed_form(q as u64);
            n += 1;
        }
    }
    Ok((ok, format!("{n} tables solved, all equal to the closed form")))
}

fn random_gr(ring: &crate::arith::GaloisRing, rng: &mut ChaCha8Rng) -> Gr {
    let order = ring.field().order();
    let a = ring.teichmuller(rng.gen_range(0..order));
    let b = ring.teichmuller(rng.gen_range(0..order));
    ring.add(&a, &ring.scalar_mul(ring.p() as i64, &b))
}

fn cartier_axioms() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ok = true;
    let mut checked = 0;
    for p in [3u32, 5] {
        let field = Arc::new(FiniteField::new(p, 2)?);
        for _ in 0..50 {
            let y = rng.gen_range(0..field.order());
            for i in 0..2 {
                let pt = build_cartier_point(field.clone(), 1, y, i, 2)?;
                ok &= pt.check_axioms().all();
                let x: Vec<Gr> = (0..4).map(|_| random_gr(&pt.ring, &mut rng)).collect();
                ok &= pt.check_semilinearity(rng.gen_range(0..field.order()), &x);
                checked += 1;
            }
        }
    }
    Ok((ok, format!("{checked} points (p ∈ {{3,5}}, N=2, m=2): Π², FV, VF = p, grading and semilinearity")))
}

fn vanishing_loci() -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = vec![];
    for q in [3u32, 5] {
        let s = vanishing_scan(q, 1, 4)?;
        ok &= s.ok() && s.pi_zero_count == q as usize && s.f_zero_count == (q * q) as usize;
        detail.push(format!("q={q}: |F_q⁴|={} Π-zeros={} F-zeros={}", s.field_size, s.pi_zero_count, s.f_zero_count));
        // first-order term −εa at every y ∈ F_q
        let field = Arc::new(FiniteField::new(q, 2)?);
        for y in field.elements().filter(|&y| field.in_subfield(y, 1)) {
            for i in 0..2 {
                let pt = build_cartier_point(field.clone(), 1, y, i, 2)?;
                for a in field.elements().filter(|&a| a != 0) {
                    ok &= deformation_lie_scalar(&pt, LieBranch::Pi, a)? == (0, field.neg(a));
                }
            }
        }
    }
    Ok((ok, format!("{}; deformation coefficient −a at all y ∈ F_q", detail.join(", "))))
}

fn evaluation_kernels() -> Result<(bool, String)> {
    let mut ok = true;
    let mut n = 0;
    for (p, d) in [(3u32, 1u32), (5, 1), (3, 2)] {
        let field = FiniteField::new(p, d)?;
        let q = field.order() as i64;
        for k in 0..=2 * q + 2 {
            let m = eval_matrix(&field, k);
            let dim = (k + 1) as usize - rank(&field, &m);
            let expected = (k - q).max(0) as usize;
            let basis = eval_kernel_basis(k, q as u64, &field);
            let in_kernel = basis.iter().all(|v| m.apply(&field, v).iter().all(|&x| x == 0));
            let independent = basis.is_empty() || rank(&field, &Matrix::from_rows(&basis)) == basis.len();
            let oracle_divisible = kernel_basis(&field, &m).iter().all(|v| divisible_by_vanishing_poly(&field, v, q as u64));
            ok &= dim == expected && basis.len() == expected && in_kernel && independent && oracle_divisible;
            ok &= basis.iter().all(|v| divisible_by_vanishing_poly(&field, v, q as u64));
            n += 1;
        }
    }
    Ok((ok, format!("{n} (q, k) pairs with q ∈ {{3,5,9}}, 0 ≤ k ≤ 2q+2")))
}

/// Random orders with k0 + k1 divisible by q − 1.
fn random_orders(rng: &mut ChaCha8Rng, q: i64) -> (i64, i64) {
    let k0 = rng.gen_range(-8..=2 * q + 2);
    loop {
        let k1 = rng.gen_range(-8..=2 * q + 2);
        if (k0 + k1).rem_euclid(q - 1) == 0 {
            return (k0, k1);
        }
    }
}

fn h1_via(cx: &GluingComplex, rank: usize) -> usize {
    cx.rows() - rank + cx.h1_local()
}

fn euler_identity() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    let (mut dense, mut recharted) = (0, 0);
    for p in [3u32, 5] {
        let tree = Tree::new(p)?;
        let field = FiniteField::new(p, 1)?;
        let balls: Vec<(Ball, Ball)> = (1..=4)
            .map(|r| Ok((tree.ball(tree.s1(), r, 0)?, tree.ball(tree.s1(), r, 17)?)))
            .collect::<Result<_>>()?;
        for _ in 0..50 {
            let (k0, k1) = random_orders(&mut rng, p as i64);
            for (ball, other) in &balls {
                let cx = build_complex_degrees([k0, k1], ball, &field)?;
                let h0 = cx.cohomology(false)?.h0_dim;
                // h¹ from an independent rank: dense elimination when small,
                // otherwise the peeling rank in different charts
                let h1 = if ball.len() <= DENSE_VERTEX_LIMIT {
                    dense += 1;
                    h1_via(&cx, rank(&field, &cx.dense()?))
                } else {
                    recharted += 1;
                    let cy = build_complex_degrees([k0, k1], other, &field)?;
                    h1_via(&cy, cy.rank())
                };
                ok &= h0 as i64 - h1 as i64 == cx.euler_expected();
            }
        }
    }
    Ok((ok, format!("100 classes × R ∈ 1..=4 ({dense} with dense h¹, {recharted} re-charted)")))
}

fn truncated_vanishing() -> Result<(bool, String)> {
    let mut ok = true;
    let mut counts = [0usize; 3];
    for p in [3u32, 5] {
        let q = p as i64;
        let tree = Tree::new(p)?;
        let field = FiniteField::new(p, 1)?;
        let balls: Vec<Ball> = (1..=5).map(|r| tree.ball(tree.s1(), r, 0)).collect::<Result<_>>()?;
        for k0 in -8..=2 * q + 2 {
            for k1 in -8..=2 * q + 2 {
                if (k0 + k1).rem_euclid(q - 1) != 0 || k0 == -1 || k1 == -1 {
                    continue;
                }
                for r in 1..=4usize {
                    let ball = &balls[r - 1];
                    if k0 < 0 && k1 < 0 {
                        let cx = build_complex_degrees([k0, k1], ball, &field)?;
                        ok &= cx.cohomology(false)?.h0_dim == 0;
                        counts[0] += 1;
                    } else if k0 >= 0 && k1 >= 0 {
                        let cx = build_complex_degrees([k0, k1], ball, &field)?;
                        ok &= cx.cohomology(false)?.h1_dim == 0;
                        counts[1] += 1;
                    } else if (0..=q).contains(&k0.max(k1)) {
                        let cx = build_complex_degrees([k0, k1], &balls[r], &field)?;
                        ok &= restriction_image_dim(&cx, r as u32)? == 0;
                        counts[2] += 1;
                    }
                }
            }
        }
    }
    Ok((ok, format!("h⁰=0 in {} cases, h¹=0 in {}, zero restriction in {}", counts[0], counts[1], counts[2])))
}

fn filtration_case_six() -> Result<(bool, String)> {
    let p = 3u32;
    let q = p as i64;
    let tree = Tree::new(p)?;
    let field = FiniteField::new(p, 1)?;
    let mut ok = true;
    let mut rows = vec![];
    for r in 1..=3 {
        let ball = tree.ball(tree.s1(), r, 0)?;
        for big in [4i64, 6] {
            for neg in [-2i64, -4] {
                for hi in 0..2u8 {
                    let degrees = if hi == 0 { [big, neg] } else { [neg, big] };
                    let cx = build_complex_degrees(degrees, &ball, &field)?;
                    if filtration_case(degrees[0], degrees[1], q) != 6 {
                        ok = false;
                        continue;
                    }
                    let got = cx.cohomology(false)?;
                    let (h0, h1) = predicted_dims(&cx).unwrap_or((usize::MAX, usize::MAX));
                    // n_{i+1}(R)·(k−q) over interior vertices, plus k at each leaf
                    let interior = (0..ball.len()).filter(|&v| ball.parity(v) == hi && ball.is_interior(v)).count() as i64;
                    let leaves = (0..ball.len()).filter(|&v| ball.parity(v) == hi && !ball.is_interior(v)).count() as i64;
                    let by_count = interior * (big - q) + leaves * big;
                    ok &= got.h0_dim == h0 && got.h1_dim == h1 && got.h0_dim as i64 == by_count;
                    if neg == -2 && hi == 1 {
                        rows.push(format!("R={r} k={big}: h⁰={}", got.h0_dim));
                    }
                }
            }
        }
    }
    Ok((ok, rows.join(", ")))
}

fn hecke_identities() -> Result<(bool, String)> {
    let mut ok = true;
    let mut n = 0;
    for p in [3u32, 5] {
        for k in 0..p as usize {
            let rep = hecke_verify(p, k, 1, 4, 20, 100 + k as u64)?;
            ok &= rep.ok();
            n += 1;
        }
    }
    Ok((ok, format!("{n} weights: recurrence to n=4, support, parity, degree–support, 20 equivariance trials each")))
}

fn phi_tilde_reports(seed: u64) -> Result<Vec<(i64, i64, i64, crate::mod_p_reps::PhiTildeReport)>> {
    let tree = Tree::new(3)?;
    let ball = tree.ball(tree.s1(), 3, seed)?;
    let mut out = vec![];
    for (k0, k1) in [(0, 2), (1, 1), (2, 0)] {
        for r in 0..2 {
            out.push((k0, k1, r, phi_tilde(&BundleClass::new(3, 1, r, k0, k1), &ball)?));
        }
    }
    Ok(out)
}

fn phi_tilde_mechanism() -> Result<(bool, String)> {
    let mut ok = true;
    let mut lambdas = vec![];
    for (k0, k1, r, rep) in phi_tilde_reports(0)? {
        ok &= rep.ok();
        lambdas.push(format!("({k0},{k1},r={r}) λ={}", rep.lambda.map_or("none".into(), |l| l.to_string())));
    }
    // dual presentation on the smaller windows as well
    let tree = Tree::new(3)?;
    let field = FiniteField::new(3, 1)?;
    for r in 1..=3 {
        let ball = tree.ball(tree.s1(), r, 0)?;
        for (k0, k1) in [(0, 2), (1, 1), (2, 0)] {
            let cx = build_complex_degrees([k0, k1], &ball, &field)?;
            ok &= cx.dual_presentation_dim()? == cx.cohomology(false)?.h0_dim;
        }
    }
    Ok((ok, lambdas.join(", ")))
}

fn bijection_count() -> Result<(bool, String)> {
    let a = enumerate_and_match(3, 1, 0)?;
    let b = enumerate_and_match(5, 1, 0)?;
    let ok = a.ok() && b.ok() && a.bundle_classes == 12 && b.bundle_classes == 80;
    Ok((ok, format!("p=3: {} ↔ {}, p=5: {} ↔ {}", a.bundle_classes, a.supersingular_classes, b.bundle_classes, b.supersingular_classes)))
}

/// Dimensions from criteria 5–7 and the φ̃ scalars of criterion 9 under one chart seed.
fn gauge_fingerprint(seed: u64) -> Result<Vec<i64>> {
    let p = 3u32;
    let tree = Tree::new(p)?;
    let field = FiniteField::new(p, 1)?;
    let mut out = vec![];
    for r in [2u32, 3] {
        let ball = tree.ball(tree.s1(), r, seed)?;
        let outer = tree.ball(tree.s1(), r + 1, seed)?;
        for degrees in [[2, 0], [1, 1], [-2, -2], [4, -2], [-2, 6], [3, -3], [5, 3], [0, -2]] {
            let cx = build_complex_degrees(degrees, &ball, &field)?;
            let c = cx.cohomology(false)?;
            out.extend([c.h0_dim as i64, c.h1_dim as i64, c.euler]);
            let cy = build_complex_degrees(degrees, &outer, &field)?;
            out.push(restriction_image_dim(&cy, r)? as i64);
        }
    }
    for (_, _, _, rep) in phi_tilde_reports(seed)? {
        out.push(rep.lambda.map_or(-1, |l| l as i64));
        out.push(rep.ok() as i64);
    }
    Ok(out)
}

fn chart_invariance() -> Result<(bool, String)> {
    let base = gauge_fingerprint(0)?;
    let mut ok = true;
    for seed in 1..=20 {
        ok &= gauge_fingerprint(seed)? == base;
    }
    Ok((ok, format!("{} quantities identical across 20 chart seeds", base.len())))
}
