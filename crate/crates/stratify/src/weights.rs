//! Weights of the maximal torus of SL(n+1) on degree-d forms.
//!
//! Weights live in the sum-zero hyperplane of Q^{n+1}; the symmetric group acts
//! by permuting coordinates and the inner product is the standard dot product.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rational::{q, qi, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    pub n: usize,
    pub d: usize,
    pub monomials: Vec<Vec<usize>>,
    pub weights: Vec<Vec<Q>>,
}

#[derive(Serialize, Deserialize)]
struct WeightSystemWire {
    n: usize,
    d: usize,
    monomials: Vec<Vec<usize>>,
}

impl Serialize for WeightSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightSystemWire { n: self.n, d: self.d, monomials: self.monomials.clone() }.serialize(s)
    }
}

impl WeightSystem {
    /// Dimension of the torus Lie algebra.
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Exponent vectors of length `vars` summing to `d`, in lexicographically decreasing order
/// (so `x0^d` comes first).
pub fn monomials(vars: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(vars: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == vars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(vars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if vars == 0 {
        return out;
    }
    rec(vars, d, &mut Vec::with_capacity(vars), &mut out);
    out
}

/// `alpha_I = I - d/(n+1) (1,...,1)`.
pub fn monomial_weight(exponents: &[usize], d: usize) -> Vec<Q> {
    let shift = q(d as i64, exponents.len() as i64);
    exponents.iter().map(|&e| qi(e as i64) - &shift).collect()
}

pub fn hypersurface_weights(n: usize, d: usize) -> Result<WeightSystem> {
    if n < 1 || d < 1 {
        return Err(invalid!("hypersurface weights need n >= 1 and d >= 1, got n={n}, d={d}"));
    }
    let monomials = monomials(n + 1, d);
    let weights = monomials.iter().map(|m| monomial_weight(m, d)).collect();
    Ok(WeightSystem { n, d, monomials, weights })
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
