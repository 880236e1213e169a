//! Kirwan-method bookkeeping: semistable series, blowup main and extra terms, the shifted
//! polynomial behind intersection-cohomology corrections, and point-blowup corrections.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rational::{fmt_q, qi, Q};
use crate::series::{gf_expand, lincomb, projective_space, BettiTable, TruncatedSeries};

/// One unstable stratum, `t^{2 codim}` times `series`, counted with weight `1/weyl_share`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumContribution {
    pub codim: usize,
    pub weyl_share: usize,
    pub series: TruncatedSeries,
    pub provenance: String,
}

impl StratumContribution {
    pub fn new(codim: usize, weyl_share: usize, series: TruncatedSeries, provenance: impl Into<String>) -> Result<Self> {
        if codim == 0 || weyl_share == 0 {
            return Err(invalid!("stratum needs codim >= 1 and weyl share >= 1"));
        }
        let provenance = provenance.into();
        if provenance.trim().is_empty() {
            return Err(invalid!("stratum contribution without provenance"));
        }
        Ok(StratumContribution { codim, weyl_share, series, provenance })
    }
}

/// `sum (1/w) t^{2d} S` over the items, truncated at `order`. Items beyond `order` drop out.
fn weighted_sum(items: &[StratumContribution], order: usize, use_share: bool) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::zero(order);
    for it in items {
        let shift = 2 * it.codim;
        if shift > order {
            continue;
        }
        if it.series.order() + shift < order {
            return Err(invalid!(
                "stratum series known to t^{} cannot be shifted to order {order}",
                it.series.order()
            ));
        }
        let c = if use_share { Q::new(1.into(), (it.weyl_share as i64).into()) } else { qi(1) };
        acc = lincomb(&[(qi(1), 0, &acc), (c, shift, &it.series)])?;
    }
    Ok(acc)
}

/// `P(P^N) prod (1 - t^{2i})^{-1} - sum t^{2d} S_beta`, truncated at `order`.
pub fn semistable_series(
    ambient_dim: usize,
    bsl_exponents: &[usize],
    strata: &[StratumContribution],
    order: usize,
) -> Result<TruncatedSeries> {
    let factors: Vec<(usize, usize)> = bsl_exponents.iter().map(|&i| (2 * i, 1)).collect();
    if bsl_exponents.contains(&0) {
        return Err(invalid!("classifying-space exponents must be positive"));
    }
    let equivariant = &projective_space(ambient_dim, order) * &gf_expand(&factors, order)?;
    let unstable = weighted_sum(strata, order, false)?;
    Ok(&equivariant - &unstable)
}

/// `p (t^2 + t^4 + ... + t^{2(r-1)})`, truncated.
pub fn main_term(p_n_z: &TruncatedSeries, normal_rank: usize, order: usize) -> Result<TruncatedSeries> {
    if normal_rank < 2 {
        return Err(invalid!("main term needs a normal slice of rank at least 2"));
    }
    let ladder = projective_space(normal_rank - 2, order).shift(2).truncate_at_most(order);
    Ok((p_n_z * &ladder).truncate_at_most(order))
}

/// `sum (1/w) t^{2d} S`; non-integral totals mean a Weyl orbit was only partly listed.
pub fn extra_term(items: &[StratumContribution], order: usize) -> Result<TruncatedSeries> {
    let s = weighted_sum(items, order, true)?;
    if let Some((d, c)) = s.coeffs().iter().enumerate().find(|(_, c)| !crate::rational::is_integer(c)) {
        return Err(Error::Check(format!("extra term has coefficient {} at t^{d}; an orbit is incomplete", fmt_q(c))));
    }
    Ok(s)
}

/// Degree `q` gets `ip[q-2]` for `2 <= q <= c` and `ip[q]` for `q > c`, with `c` the complex
/// dimension of the table.
pub fn b_shift(ip: &BettiTable, order: usize) -> Result<TruncatedSeries> {
    if !crate::series::duality_check(ip).passed {
        return Err(Error::Check("b_shift input is not duality-symmetric".into()));
    }
    let c = ip.complex_dim();
    let b = ip.betti();
    let coeffs: Vec<Q> = (0..=order)
        .map(|q| {
            let v = if q < 2 {
                0
            } else if q <= c {
                b[q - 2]
            } else {
                b.get(q).copied().unwrap_or(0)
            };
            qi(v)
        })
        .collect();
    Ok(TruncatedSeries::new(coeffs, order))
}

/// Correction added to the intersection cohomology of a variety of dimension `n` when a point
/// is blown up to a divisor with Betti numbers `e`: `e_{2n-q}` below the middle, `e_q` from it.
pub fn blowup_correction(exceptional: &BettiTable, n: usize) -> Result<TruncatedSeries> {
    if n == 0 || exceptional.complex_dim() != n - 1 {
        return Err(invalid!(
            "exceptional divisor of dimension {} does not fit a blowup of dimension {n}",
            exceptional.complex_dim()
        ));
    }
    let e = exceptional.betti();
    let order = 2 * n;
    let mut c = vec![qi(0); order + 1];
    for q in 2..=(2 * n).saturating_sub(2) {
        let idx = if q < n { 2 * n - q } else { q };
        c[q] = qi(e[idx]);
    }
    Ok(TruncatedSeries::new(c, order))
}
