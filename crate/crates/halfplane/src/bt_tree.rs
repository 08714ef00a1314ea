//! The Bruhat–Tits tree of PGL₂(ℚ_p).
//!
//! A vertex is the homothety class of the lattice spanned by the columns of a
//! matrix, normalized to [[p^n, b], [0, 1]] with b a rational with p-power
//! denominator reduced modulo p^n. The standard vertices are s₁ = [Z_p²] and
//! s₀ = [Z_p ⊕ pZ_p] = α·s₁ with α = diag(1, p).
//!
//! Edges at a vertex with chart g are labelled by ℙ¹(F_p): the label λ ∈ F_p
//! marks the neighbor g·[[p, λ], [0, 1]]·s₁ (the line through (λ, 1) in
//! M/pM) and ∞ marks g·α·s₁ (the line through (1, 0)).

use crate::arith::padic::{inv_mod_i128, ipow, smith_valuations, PMat, Rat};
use crate::arith::field::is_prime;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

/// Default cap on the number of vertices of a ball.
pub const DEFAULT_MAX_BALL: usize = 250_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub n: i32,
    /// b = b_num / p^b_k with 0 <= b_num < p^(n + b_k) and p ∤ b_num unless b_k = 0
    pub b_num: i128,
    pub b_k: u32,
}

impl Vertex {
    pub fn to_string(&self, p: u32) -> String {
        format!("{p}^{}:{}/{p}^{}", self.n, self.b_num, self.b_k)
    }
}

/// A point of ℙ¹(F_p): values 0..p are finite, `p` itself is ∞.
pub type P1 = u32;

/// Normalized homogeneous coordinates (last nonzero coordinate 1).
pub fn p1_coords(p: u32, pt: P1) -> (u32, u32) {
    if pt == p {
        (1, 0)
    } else {
        (pt, 1)
    }
}

/// The point of ℙ¹(F_p) through a nonzero vector.
pub fn p1_of_vector(p: u32, x: u32, y: u32) -> P1 {
    let (x, y) = (x % p, y % p);
    if y == 0 {
        assert!(x != 0, "zero vector has no line");
        p
    } else {
        let yi = inv_mod_i128(y as i128, p as i128).unwrap() as u64;
        ((x as u64 * yi) % p as u64) as u32
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tree {
    p: u32,
}

impl Tree {
    pub fn new(p: u32) -> Result<Self> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::Config(format!("p must be an odd prime, got {p}")));
        }
        Ok(Tree { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s1(&self) -> Vertex {
        Vertex { n: 0, b_num: 0, b_k: 0 }
    }

    pub fn s0(&self) -> Vertex {
        Vertex { n: -1, b_num: 0, b_k: 0 }
    }

    /// Normal form of the class of the lattice spanned by the columns of m.
    pub fn canonical(&self, m: &PMat) -> Result<Vertex> {
        let p = self.p;
        if m.det().is_zero() {
            return Err(Error::Singular);
        }
        let (mut a, mut b, mut c, mut d) = (m.a, m.b, m.c, m.d);
        let vc = c.valuation(p);
        let vd = d.valuation(p);
        let swap = match (vc, vd) {
            (_, None) => true,
            (Some(x), Some(y)) => x < y,
            (None, Some(_)) => false,
        };
        if swap {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut c, &mut d);
        }
        // col1 -= (c/d) col2, then divide by d
        let t = c.div(d).unwrap();
        let a1 = a.sub(t.mul(b));
        let top_left = a1.div(d).unwrap();
        let b0 = b.div(d).unwrap();
        let n = top_left.valuation(p).expect("nonsingular");
        Ok(self.reduce_b(n, b0))
    }

    fn reduce_b(&self, n: i32, b0: Rat) -> Vertex {
        let p = self.p;
        let Some(vb) = b0.valuation(p) else { return Vertex { n, b_num: 0, b_k: 0 } };
        let k = (-vb).max(0);
        if n + k <= 0 {
            return Vertex { n, b_num: 0, b_k: 0 };
        }
        let scaled = b0.mul(Rat::p_pow(p, k));
        let mut num = scaled.mod_p_pow(p, (n + k) as u32).unwrap();
        let mut k = k as u32;
        while k > 0 && num % p as i128 == 0 {
            num /= p as i128;
            k -= 1;
        }
        if num == 0 {
            k = 0;
        }
        Vertex { n, b_num: num, b_k: k }
    }

    /// [[p^n, b], [0, 1]].
    pub fn rep(&self, v: &Vertex) -> PMat {
        PMat::new(
            Rat::p_pow(self.p, v.n),
            Rat::new(v.b_num, ipow(self.p, v.b_k)),
            Rat::zero(),
            Rat::one(),
        )
    }

    pub fn act(&self, g: &PMat, v: &Vertex) -> Result<Vertex> {
        self.canonical(&g.mul(&self.rep(v)))
    }

    pub fn distance(&self, u: &Vertex, v: &Vertex) -> u32 {
        let m = self.rep(u).inverse().unwrap().mul(&self.rep(v));
        let (a, b) = smith_valuations(&m, self.p).unwrap();
        (b - a) as u32
    }

    /// 0 for the orbit of s₀ (even distance to s₀), 1 for the orbit of s₁.
    pub fn parity(&self, v: &Vertex) -> u8 {
        // the distance to s₁ has the parity of n
        if v.n.rem_euclid(2) == 0 {
            1
        } else {
            0
        }
    }

    /// Coset representative of the neighbor labelled `pt` at s₁.
    pub fn neighbor_rep(&self, pt: P1) -> PMat {
        if pt == self.p {
            PMat::alpha(self.p)
        } else {
            PMat::from_ints(self.p as i128, pt as i128, 0, 1)
        }
    }

    /// Neighbors of the vertex g·s₁ indexed by ℙ¹(F_p) through the chart g.
    pub fn neighbors_in_chart(&self, g: &PMat) -> Vec<Vertex> {
        (0..=self.p).map(|pt| self.canonical(&g.mul(&self.neighbor_rep(pt))).unwrap()).collect()
    }

    /// The p+1 neighbors of v, labelled through the canonical chart rep(v).
    pub fn neighbors(&self, v: &Vertex) -> Vec<Vertex> {
        self.neighbors_in_chart(&self.rep(v))
    }

    /// A random element of GL₂(Z_p) with small integer entries; its
    /// determinant is a p-adic unit, possibly different from ±1.
    pub fn random_stabilizer<R: Rng>(&self, rng: &mut R) -> PMat {
        let p = self.p as i128;
        let a = rng.gen_range(-2 * p..=2 * p);
        let b = rng.gen_range(-2 * p..=2 * p);
        let u = loop {
            let u = rng.gen_range(1..=2 * p);
            if u % p != 0 {
                break u;
            }
        };
        let mut g = PMat::from_ints(1, a, 0, 1).mul(&PMat::from_ints(1, 0, b, 1)).mul(&PMat::from_ints(u, 0, 0, 1));
        if rng.gen_bool(0.5) {
            g = g.mul(&PMat::from_ints(0, 1, 1, 0));
        }
        g
    }

    pub fn ball(&self, center: Vertex, radius: u32, chart_seed: u64) -> Result<Ball> {
        self.ball_with_cap(center, radius, chart_seed, DEFAULT_MAX_BALL)
    }

    pub fn ball_with_cap(&self, center: Vertex, radius: u32, chart_seed: u64, cap: usize) -> Result<Ball> {
        let expected = ball_size(self.p as u64, radius);
        if expected.is_none_or(|n| n > cap as u64) {
            return Err(Error::Resource(format!("ball of radius {radius} for p={} exceeds {cap} vertices", self.p)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(chart_seed);
        let chart_for = |v: &Vertex, rng: &mut ChaCha8Rng| -> PMat {
            let base = self.rep(v);
            if chart_seed == 0 {
                base
            } else {
                base.mul(&self.random_stabilizer(rng))
            }
        };
        let mut ball = Ball {
            p: self.p,
            center,
            radius,
            chart_seed,
            vertices: vec![center],
            index: HashMap::from([(center, 0)]),
            depth: vec![0],
            parent: vec![None],
            charts: vec![chart_for(&center, &mut rng)],
            edges: vec![],
            neighbor_idx: vec![],
            parent_edge: vec![None],
        };
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let nbrs = self.neighbors_in_chart(&ball.charts[i]);
            let mut slots = vec![None; nbrs.len()];
            for (pt, nb) in nbrs.iter().enumerate() {
                if let Some(&j) = ball.index.get(nb) {
                    slots[pt] = Some(j);
                    if Some(j) == ball.parent[i] {
                        let e = ball.parent_edge[i].unwrap();
                        ball.edges[e].pt_child = pt as P1;
                    }
                    continue;
                }
                if ball.depth[i] == radius {
                    continue;
                }
                let j = ball.vertices.len();
                ball.vertices.push(*nb);
                ball.index.insert(*nb, j);
                ball.depth.push(ball.depth[i] + 1);
                ball.parent.push(Some(i));
                ball.charts.push(chart_for(nb, &mut rng));
                ball.edges.push(Edge { parent: i, child: j, pt_parent: pt as P1, pt_child: u32::MAX });
                ball.parent_edge.push(Some(ball.edges.len() - 1));
                slots[pt] = Some(j);
                queue.push_back(j);
            }
            ball.neighbor_idx.push(slots);
        }
        debug_assert!(ball.edges.iter().all(|e| e.pt_child != u32::MAX));
        Ok(ball)
    }
}

/// 1 + (q+1)(q^R − 1)/(q − 1), or None on overflow.
pub fn ball_size(q: u64, radius: u32) -> Option<u64> {
    let qr = q.checked_pow(radius)?;
    Some(1 + (q + 1) * (qr - 1) / (q - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub parent: usize,
    pub child: usize,
    /// marked point of this edge on the parent's component
    pub pt_parent: P1,
    /// marked point of this edge on the child's component
    pub pt_child: P1,
}

/// A truncated ball of the tree, as a BFS subtree with charts and marked points.
#[derive(Debug, Clone)]
pub struct Ball {
    pub p: u32,
    pub center: Vertex,
    pub radius: u32,
    pub chart_seed: u64,
    pub vertices: Vec<Vertex>,
    pub index: HashMap<Vertex, usize>,
    pub depth: Vec<u32>,
    pub parent: Vec<Option<usize>>,
    /// g_v with g_v·s₁ = v
    pub charts: Vec<PMat>,
    pub edges: Vec<Edge>,
    /// for each vertex, the ball index of the neighbor at each ℙ¹ label
    pub neighbor_idx: Vec<Vec<Option<usize>>>,
    pub parent_edge: Vec<Option<usize>>,
}

#[derive(Debug, Serialize)]
pub struct BallJson {
    pub p: u32,
    pub center: String,
    pub radius: u32,
    pub chart_seed: u64,
    pub vertices: Vec<String>,
    pub parities: Vec<u8>,
    pub edges: Vec<[usize; 2]>,
    pub marked_points: Vec<[u32; 2]>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
    pub fn is_interior(&self, i: usize) -> bool {
        self.depth[i] < self.radius
    }
    /// Number of ball edges at vertex i.
    pub fn degree(&self, i: usize) -> usize {
        self.neighbor_idx[i].iter().filter(|x| x.is_some()).count()
    }
    pub fn parity(&self, i: usize) -> u8 {
        Tree { p: self.p }.parity(&self.vertices[i])
    }
    pub fn get(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }
    pub fn to_json(&self) -> BallJson {
        BallJson {
            p: self.p,
            center: self.center.to_string(self.p),
            radius: self.radius,
            chart_seed: self.chart_seed,
            vertices: self.vertices.iter().map(|v| v.to_string(self.p)).collect(),
            parities: (0..self.len()).map(|i| self.parity(i)).collect(),
            edges: self.edges.iter().map(|e| [e.parent, e.child]).collect(),
            marked_points: self.edges.iter().map(|e| [e.pt_parent, e.pt_child]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_vertices_and_w() {
        let t = Tree::new(3).unwrap();
        let w = PMat::w(3);
        assert_eq!(t.act(&w, &t.s0()).unwrap(), t.s1());
        assert_eq!(t.act(&w, &t.s1()).unwrap(), t.s0());
        assert_eq!(t.act(&PMat::alpha(3), &t.s1()).unwrap(), t.s0());
        assert_eq!(t.distance(&t.s0(), &t.s1()), 1);
        assert_eq!(t.parity(&t.s0()), 0);
        assert_eq!(t.parity(&t.s1()), 1);
        let v = t.canonical(&PMat::from_ints(9, 3, 0, 1)).unwrap();
        assert_eq!(t.distance(&t.s1(), &v), 2);
    }

    #[test]
    fn neighbors_of_s1() {
        let t = Tree::new(3).unwrap();
        let nb = t.neighbors(&t.s1());
        assert_eq!(nb.len(), 4);
        let set: std::collections::HashSet<_> = nb.iter().collect();
        assert_eq!(set.len(), 4);
        for v in &nb {
            assert_eq!(t.distance(&t.s1(), v), 1);
            assert_eq!(t.parity(v), 0);
            assert!(t.neighbors(v).contains(&t.s1()));
        }
        assert_eq!(nb[3], t.s0());
    }

    #[test]
    fn canonical_form_is_idempotent_and_negative_n_reduces() {
        let t = Tree::new(5).unwrap();
        let v = t.canonical(&PMat::new(Rat::new(1, 25), Rat::new(7, 125), Rat::zero(), Rat::one())).unwrap();
        assert_eq!(v.n, -2);
        // 7/125 mod 5^-2: 7/125 - 1/25·k ... numerator taken mod 5^(n+k) = 5
        assert_eq!((v.b_num, v.b_k), (2, 3));
        assert_eq!(t.canonical(&t.rep(&v)).unwrap(), v);
    }

    #[test]
    fn ball_counts() {
        let t3 = Tree::new(3).unwrap();
        let b0 = t3.ball(t3.s1(), 0, 0).unwrap();
        assert_eq!((b0.len(), b0.edges.len()), (1, 0));
        let b2 = t3.ball(t3.s1(), 2, 0).unwrap();
        assert_eq!((b2.len(), b2.edges.len()), (17, 16));
        let t5 = Tree::new(5).unwrap();
        assert_eq!(t5.ball(t5.s1(), 1, 0).unwrap().len(), 7);
        assert!(matches!(t3.ball_with_cap(t3.s1(), 6, 0, 100), Err(Error::Resource(_))));
    }
}
