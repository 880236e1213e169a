//! Instability index sets: closest points to the origin of convex hulls of weight subsets.
//!
//! Candidates come from affinely independent subsets of at most `rank + 1` weights
//! (Caratheodory). For each subset the barycentric coordinates of the projection of the
//! origin onto its affine span are the first-row cofactors of the bordered Gram system,
//! computed fraction-free in `i128` on weights scaled to integers.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::orbits::NormalRep;
use crate::rational::{dot, fmt_q, lcm_of_denominators, Q};
use crate::weights::{binomial, WeightSystem};

pub const DEFAULT_CANDIDATE_BUDGET: usize = 10_000_000;

/// How chamber representatives and `dim G/P` are computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupModel {
    /// SL(m) acting through its diagonal torus; chamber = weakly decreasing entries.
    SpecialLinear,
    /// A torus: trivial Weyl group, every parabolic is the whole group.
    Torus,
    /// Rank-one group with a single positive root along `positive`; chamber is `beta . positive >= 0`.
    RankOne { positive: Vec<Q> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Nonemptiness {
    NotDeclared,
    DeclaredNonempty,
    DeclaredEmpty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaStratum {
    pub beta: Vec<Q>,
    pub norm2: Q,
    pub support: Vec<usize>,
    pub n_beta: usize,
    pub dim_g_mod_p: usize,
    pub codim_expected: i64,
    pub nonemptiness: Nonemptiness,
}

impl BetaStratum {
    pub fn is_zero(&self) -> bool {
        self.beta.iter().all(Zero::is_zero)
    }

    /// Number of weights on or above the wall, `#{alpha : alpha.beta >= |beta|^2}`.
    pub fn upper_count(&self, total: usize) -> usize {
        total - self.n_beta
    }
}

impl Serialize for BetaStratum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BetaStratum", 7)?;
        st.serialize_field("beta", &self.beta.iter().map(fmt_q).collect::<Vec<_>>())?;
        st.serialize_field("norm2", &fmt_q(&self.norm2))?;
        st.serialize_field("support", &self.support)?;
        st.serialize_field("n_beta", &self.n_beta)?;
        st.serialize_field("dim_g_mod_p", &self.dim_g_mod_p)?;
        st.serialize_field("codim_expected", &self.codim_expected)?;
        st.serialize_field("nonemptiness", &self.nonemptiness)?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weyl {
    FullSymmetric,
    Trivial,
}

pub fn instability_index_set(ws: &WeightSystem, weyl: Weyl) -> Result<Vec<BetaStratum>> {
    let model = match weyl {
        Weyl::FullSymmetric => GroupModel::SpecialLinear,
        Weyl::Trivial => GroupModel::Torus,
    };
    index_set(&ws.weights, ws.rank(), &model, DEFAULT_CANDIDATE_BUDGET)
}

pub fn normal_rep_strata(rep: &NormalRep, model: &GroupModel) -> Result<Vec<BetaStratum>> {
    if matches!(model, GroupModel::SpecialLinear) {
        return Err(invalid!("normal-slice strata use a torus or rank-one group model"));
    }
    index_set(&rep.weights, rep.torus_rank, model, DEFAULT_CANDIDATE_BUDGET)
}

/// The full index set with per-stratum data, sorted by `(norm2, beta)`.
pub fn index_set(
    weights: &[Vec<Q>],
    rank: usize,
    model: &GroupModel,
    budget: usize,
) -> Result<Vec<BetaStratum>> {
    if weights.is_empty() {
        return Err(invalid!("weight list is empty"));
    }
    let betas = candidate_betas(weights, rank, model, budget)?;
    let mut out: Vec<BetaStratum> = betas.into_iter().map(|b| stratum_data(b, weights, model)).collect();
    out.sort_by(|a, b| a.norm2.cmp(&b.norm2).then_with(|| a.beta.cmp(&b.beta)));
    Ok(out)
}

pub fn stratum_data(beta: Vec<Q>, weights: &[Vec<Q>], model: &GroupModel) -> BetaStratum {
    let norm2 = dot(&beta, &beta);
    let mut support = Vec::new();
    let mut n_beta = 0;
    for (i, a) in weights.iter().enumerate() {
        match dot(a, &beta).cmp(&norm2) {
            std::cmp::Ordering::Equal => support.push(i),
            std::cmp::Ordering::Less => n_beta += 1,
            std::cmp::Ordering::Greater => {}
        }
    }
    let dim_g_mod_p = parabolic_codim(&beta, model);
    BetaStratum {
        codim_expected: n_beta as i64 - dim_g_mod_p as i64,
        beta,
        norm2,
        support,
        n_beta,
        dim_g_mod_p,
        nonemptiness: Nonemptiness::NotDeclared,
    }
}

/// `dim G/P_beta`: the number of positive roots pairing positively with `beta`.
pub fn parabolic_codim(beta: &[Q], model: &GroupModel) -> usize {
    match model {
        GroupModel::SpecialLinear => {
            let mut c = 0;
            for i in 0..beta.len() {
                for j in i + 1..beta.len() {
                    if beta[i] > beta[j] {
                        c += 1;
                    }
                }
            }
            c
        }
        GroupModel::Torus => 0,
        GroupModel::RankOne { .. } => usize::from(beta.iter().any(|x| !x.is_zero())),
    }
}

pub fn chamber_rep(mut beta: Vec<Q>, model: &GroupModel) -> Vec<Q> {
    match model {
        GroupModel::SpecialLinear => {
            beta.sort_by(|a, b| b.cmp(a));
            beta
        }
        GroupModel::Torus => beta,
        GroupModel::RankOne { positive } => {
            if dot(&beta, positive).is_negative() {
                beta.iter().map(|x| -x).collect()
            } else {
                beta
            }
        }
    }
}

pub fn subset_count(n: usize, max_size: usize) -> usize {
    (1..=max_size.min(n)).map(|s| binomial(n, s)).fold(0usize, |a, b| a.saturating_add(b))
}

fn overflow() -> Error {
    Error::Resource("integer overflow in fraction-free projection; weights too large".into())
}

/// Bareiss determinant; `None` on overflow.
fn det_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a[i][j].checked_mul(a[k][k])?;
                let y = a[i][k].checked_mul(a[k][j])?;
                a[i][j] = x.checked_sub(y)? / prev;
            }
        }
        prev = a[k][k];
    }
    sign.checked_mul(a[n - 1][n - 1])
}

/// Barycentric numerators `c_j` and denominator `D` for the projection of the origin onto
/// the affine span of `subset`; `Ok(None)` when the subset is affinely dependent.
fn projection_cofactors(gram: &[Vec<i128>], subset: &[usize]) -> Result<Option<(Vec<i128>, i128)>> {
    let k = subset.len() - 1;
    let p0 = subset[0];
    // rows i = 1..k of the bordered system: a_ij = p_j . (p_i - p_0)
    let rows: Vec<Vec<i128>> = (1..=k)
        .map(|i| {
            subset
                .iter()
                .map(|&pj| gram[pj][subset[i]].checked_sub(gram[pj][p0]).ok_or_else(overflow))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut cof = Vec::with_capacity(k + 1);
    let mut denom: i128 = 0;
    for j in 0..=k {
        let minor: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
            .collect();
        let d = det_i128(minor).ok_or_else(overflow)?;
        let c = if j % 2 == 0 { d } else { -d };
        denom = denom.checked_add(c).ok_or_else(overflow)?;
        cof.push(c);
    }
    if denom == 0 {
        return Ok(None);
    }
    Ok(Some((cof, denom)))
}

struct Scaled {
    ints: Vec<Vec<i128>>,
    gram: Vec<Vec<i128>>,
    scale: BigInt,
}

fn scale_weights(weights: &[Vec<Q>]) -> Result<Scaled> {
    let scale = lcm_of_denominators(weights.iter().flatten());
    let ints = weights
        .iter()
        .map(|w| {
            w.iter()
                .map(|x| (x * Q::from_integer(scale.clone())).to_integer().to_i128().ok_or_else(overflow))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let n = ints.len();
    let mut gram = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in i..n {
            let mut acc: i128 = 0;
            for (a, b) in ints[i].iter().zip(&ints[j]) {
                acc = acc.checked_add(a.checked_mul(*b).ok_or_else(overflow)?).ok_or_else(overflow)?;
            }
            gram[i][j] = acc;
            gram[j][i] = acc;
        }
    }
    Ok(Scaled { ints, gram, scale })
}

/// Calls `f` on every `size`-subset of `lo..n` prefixed by `prefix`.
fn for_each_subset(
    n: usize,
    size: usize,
    lo: usize,
    cur: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if size == 0 {
        return f(cur);
    }
    for i in lo..=n - size {
        cur.push(i);
        for_each_subset(n, size - 1, i + 1, cur, f)?;
        cur.pop();
    }
    Ok(())
}

fn candidate_betas(
    weights: &[Vec<Q>],
    rank: usize,
    model: &GroupModel,
    budget: usize,
) -> Result<BTreeSet<Vec<Q>>> {
    let n = weights.len();
    let max_size = (rank + 1).min(n);
    let count = subset_count(n, max_size);
    if count > budget {
        return Err(Error::Resource(format!(
            "{count} candidate subsets exceed the budget of {budget}"
        )));
    }
    let sc = scale_weights(weights)?;
    let dim = weights[0].len();
    let scale_q = Q::from_integer(sc.scale.clone());

    let per_first: Vec<Result<HashSet<Vec<Q>>>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut found: HashSet<Vec<Q>> = HashSet::new();
            let mut seen_scaled: HashSet<(Vec<i128>, i128)> = HashSet::new();
            for size in 1..=max_size {
                if first + size > n {
                    break;
                }
                let mut cur = vec![first];
                let mut visit = |subset: &[usize]| -> Result<()> {
                    let Some((cof, den)) = projection_cofactors(&sc.gram, subset)? else {
                        return Ok(());
                    };
                    let positive = den > 0;
                    if cof.iter().any(|&c| c != 0 && (c > 0) != positive) {
                        return Ok(());
                    }
                    let mut num = vec![0i128; dim];
                    for (&c, &p) in cof.iter().zip(subset) {
                        for (x, w) in num.iter_mut().zip(&sc.ints[p]) {
                            *x = x.checked_add(c.checked_mul(*w).ok_or_else(overflow)?).ok_or_else(overflow)?;
                        }
                    }
                    if !seen_scaled.insert((num.clone(), den)) {
                        return Ok(());
                    }
                    let beta: Vec<Q> = num
                        .iter()
                        .map(|&x| Q::new(BigInt::from(x), BigInt::from(den)) / &scale_q)
                        .collect();
                    found.insert(chamber_rep(beta, model));
                    Ok(())
                };
                for_each_subset(n, size - 1, first + 1, &mut cur, &mut visit)?;
            }
            Ok(found)
        })
        .collect();
    let mut all = BTreeSet::new();
    for r in per_first {
        all.extend(r?);
    }
    Ok(all)
}

/// Exhaustive closest point of `conv(points)` to the origin, by projecting onto the affine
/// span of every affinely independent subset and keeping projections inside the hull.
/// Independent of [`index_set`]: it works over `Q` with a Gram system on difference vectors.
pub fn closest_point(points: &[Vec<Q>]) -> Result<Vec<Q>> {
    if points.is_empty() {
        return Err(invalid!("closest_point needs at least one point"));
    }
    let n = points.len();
    // Caratheodory inside the affine hull of the points
    let mut diffs: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    let affine_dim = crate::orbits::rank(&mut diffs);
    let mut best: Option<(Q, Vec<Q>)> = None;
    let max_size = (affine_dim + 1).min(n);
    for size in 1..=max_size {
        let mut cur = Vec::new();
        let mut visit = |subset: &[usize]| -> Result<()> {
            if let Some(x) = affine_projection_in_hull(points, subset) {
                let nn = dot(&x, &x);
                if best.as_ref().map_or(true, |(b, _)| nn < *b) {
                    best = Some((nn, x));
                }
            }
            Ok(())
        };
        for_each_subset(n, size, 0, &mut cur, &mut visit)?;
    }
    Ok(best.expect("singletons always yield a candidate").1)
}

/// `p0 + sum mu_i (p_i - p0)` orthogonal to every difference; `None` if dependent or outside.
fn affine_projection_in_hull(points: &[Vec<Q>], subset: &[usize]) -> Option<Vec<Q>> {
    let p0 = &points[subset[0]];
    let diffs: Vec<Vec<Q>> = subset[1..]
        .iter()
        .map(|&i| points[i].iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let k = diffs.len();
    let mut m: Vec<Vec<Q>> = (0..k)
        .map(|i| {
            let mut row: Vec<Q> = (0..k).map(|j| dot(&diffs[i], &diffs[j])).collect();
            row.push(-dot(&diffs[i], p0));
            row
        })
        .collect();
    let mu = solve_rational(&mut m)?;
    let total = mu.iter().fold(Q::zero(), |a, x| a + x);
    if mu.iter().any(|x| x.is_negative()) || total > Q::from_integer(1.into()) {
        return None;
    }
    let mut x = p0.clone();
    for (c, d) in mu.iter().zip(&diffs) {
        for (xi, di) in x.iter_mut().zip(d) {
            *xi += c * di;
        }
    }
    Some(x)
}

/// Gauss-Jordan on an augmented `k x (k+1)` matrix; `None` when singular.
fn solve_rational(m: &mut [Vec<Q>]) -> Option<Vec<Q>> {
    let k = m.len();
    for col in 0..k {
        let piv = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=k {
                    let t = &m[col][c] * &f;
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[k].clone()).collect())
}

/// Number of elements of `set` in the coordinate-permutation orbit of `beta`.
pub fn weyl_fiber_count(beta: &[Q], m: usize, set: &[Vec<Q>]) -> Result<usize> {
    if beta.len() != m {
        return Err(invalid!("vector has {} coordinates, expected {m}", beta.len()));
    }
    if !set.iter().any(|b| b.as_slice() == beta) {
        return Err(invalid!("vector is not a member of the index set"));
    }
    let mut key = beta.to_vec();
    key.sort();
    Ok(set
        .iter()
        .filter(|b| {
            let mut s = (*b).clone();
            s.sort();
            s == key
        })
        .count())
}

/// Strata whose weight sets `{alpha : alpha.beta >= |beta|^2}` are maximal under inclusion,
/// compared up to coordinate permutations that preserve the weight list.
pub fn maximal_upper_sets(
    strata: &[BetaStratum],
    weights: &[Vec<Q>],
    permutations: &[Vec<usize>],
) -> Vec<usize> {
    let uppers: Vec<BTreeSet<usize>> = strata
        .iter()
        .map(|s| {
            weights
                .iter()
                .enumerate()
                .filter(|(_, a)| dot(a, &s.beta) >= s.norm2)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let index_of = |w: &Vec<Q>| weights.iter().position(|x| x == w);
    // weight-index permutations induced by coordinate permutations
    let induced: Vec<Vec<usize>> = permutations
        .iter()
        .filter_map(|p| {
            weights
                .iter()
                .map(|w| index_of(&p.iter().map(|&i| w[i].clone()).collect()))
                .collect::<Option<Vec<usize>>>()
        })
        .collect();
    let orbit_of = |u: &BTreeSet<usize>| -> Vec<BTreeSet<usize>> {
        induced.iter().map(|perm| u.iter().map(|&i| perm[i]).collect()).collect()
    };
    let nonzero: Vec<usize> = (0..strata.len()).filter(|&i| !strata[i].is_zero()).collect();
    nonzero
        .iter()
        .copied()
        .filter(|&i| {
            !nonzero.iter().any(|&j| {
                j != i
                    && uppers[j].len() > uppers[i].len()
                    && orbit_of(&uppers[j]).iter().any(|o| uppers[i].is_subset(o))
            })
        })
        .collect()
}

pub fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

pub fn min_nonzero_codim(strata: &[BetaStratum]) -> Option<i64> {
    strata.iter().filter(|s| !s.is_zero()).map(|s| s.codim_expected).min()
}
