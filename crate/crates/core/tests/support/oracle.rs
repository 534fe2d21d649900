//! Brute-force reference implementations, deliberately independent of the
//! library's search code. Only usable on small inputs.
#![allow(dead_code)]

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Small graph as bitmask adjacency over vertices 0..n (n <= 20).
#[derive(Debug, Clone)]
pub struct MaskGraph {
    pub adj: Vec<u32>,
}

impl MaskGraph {
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut adj = vec![0u32; n];
        for &(u, v) in edges {
            if u != v {
                adj[u as usize] |= 1 << v;
                adj[v as usize] |= 1 << u;
            }
        }
        MaskGraph { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }
}

/// ⌈num·(s-1)/den⌉ in integers.
pub fn need(num: u64, den: u64, size: usize) -> u64 {
    (num * (size as u64 - 1)).div_ceil(den)
}

pub fn is_dense(g: &MaskGraph, mask: u32, num: u64, den: u64, min_size: usize) -> bool {
    let size = mask.count_ones() as usize;
    if size < min_size || size < 2 {
        return false;
    }
    let req = need(num, den, size);
    (0..g.n()).filter(|v| mask >> v & 1 == 1).all(|v| (g.adj[v] & mask).count_ones() as u64 >= req)
}

/// Every γ-dense vertex set with no γ-dense proper superset, as sorted
/// vertex lists, in ascending mask order.
pub fn maximal_quasi_cliques(g: &MaskGraph, num: u64, den: u64, min_size: usize) -> Vec<Vec<u32>> {
    let n = g.n();
    let full = 1usize << n;
    let dense: Vec<bool> = (0..full)
        .map(|m| is_dense(g, m as u32, num, den, min_size))
        .collect();
    // above[m]: some strict superset of m is dense.
    let mut above = vec![false; full];
    for m in (0..full).rev() {
        for v in 0..n {
            if m >> v & 1 == 0 {
                let sup = m | 1 << v;
                if dense[sup] || above[sup] {
                    above[m] = true;
                    break;
                }
            }
        }
    }
    (0..full)
        .filter(|&m| dense[m] && !above[m])
        .map(|m| (0..n as u32).filter(|v| m >> v & 1 == 1).collect())
        .collect()
}

/// (min inner degree, |Q| - 1).
pub fn density_parts(g: &MaskGraph, q: &[u32]) -> (u64, u64) {
    let mask: u32 = q.iter().map(|v| 1u32 << v).sum();
    let min = q
        .iter()
        .map(|&v| (g.adj[v as usize] & mask).count_ones() as u64)
        .min()
        .unwrap_or(0);
    (min, q.len() as u64 - 1)
}

/// Size descending, density descending, vertex list ascending.
pub fn reference_order(g: &MaskGraph, a: &[u32], b: &[u32]) -> Ordering {
    let (an, ad) = density_parts(g, a);
    let (bn, bd) = density_parts(g, b);
    b.len()
        .cmp(&a.len())
        .then_with(|| (bn * ad).cmp(&(an * bd)))
        .then_with(|| a.cmp(b))
}

/// Exact C(α, β) ρ^β (1-ρ)^(α-β) with ρ = p/q.
pub fn exact_binomial(alpha: u64, beta: u64, p: u64, q: u64) -> BigRational {
    let mut c = BigUint::one();
    for i in 0..beta {
        c = c * BigUint::from(alpha - i) / BigUint::from(i + 1);
    }
    let num = BigUint::from(p).pow(beta as u32) * BigUint::from(q - p).pow((alpha - beta) as u32);
    let den = BigUint::from(q).pow(alpha as u32);
    BigRational::new((c * num).into(), den.into())
}

pub fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    r.to_f64().expect("finite")
}

/// Exact analytical bound Σ_{α>=z} p(α) Σ_{β>=z} F(α, β, ρ) with
/// ρ = (σ-1)/(n-1), from a degree sequence.
pub fn exact_bound(degrees: &[usize], sigma: u64, z: u64) -> BigRational {
    let n = degrees.len() as u64;
    let mut total = BigRational::zero();
    for &d in degrees {
        let alpha = d as u64;
        if alpha < z {
            continue;
        }
        for beta in z..=alpha {
            total += exact_binomial(alpha, beta, sigma - 1, n - 1);
        }
    }
    total / BigRational::from_integer(n.into())
}
