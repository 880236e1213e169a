//! Tangent spaces to orbits of forms and the weights of normal slices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rational::{dot, fmt_q, parse_q, qi, Q};
use crate::weights::monomials;

/// Sparse polynomial in `nvars` variables; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<usize>, Q>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Q::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<usize>, c: Q) {
        debug_assert_eq!(exps.len(), self.nvars);
        let slot = self.terms.entry(exps).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn coeff(&self, exps: &[usize]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    /// Common total degree, or `None` if the polynomial is zero or not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<usize>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * qi(e[i] as i64));
            }
        }
        out
    }

    pub fn mul_var(&self, j: usize) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[j] += 1;
            out.terms.insert(f, c.clone());
        }
        out
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                let g: Vec<usize> = e.iter().zip(f).map(|(a, b)| a + b).collect();
                out.add_term(g, c * d);
            }
        }
        out
    }

    /// `x -> g x`: returns `F(g x)` where `g` acts on column vectors of coordinates.
    pub fn compose_linear(&self, g: &[Vec<Q>]) -> MultiPoly {
        let n = self.nvars;
        let images: Vec<MultiPoly> = (0..n)
            .map(|i| {
                let mut p = Self::zero(n);
                for j in 0..n {
                    if !g[i][j].is_zero() {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        p.add_term(e, g[i][j].clone());
                    }
                }
                p
            })
            .collect();
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let mut term = Self::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&images[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Plain-text form `x0*x1*x2 + 3/2*x3^3 - x4^3`.
    pub fn parse(text: &str, nvars: usize) -> Result<MultiPoly> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut pieces = Vec::new();
        let mut cur = String::new();
        for (i, ch) in cleaned.chars().enumerate() {
            let has_body = cur.chars().any(|c| c != '+' && c != '-');
            if (ch == '+' || ch == '-') && i > 0 && has_body && !cur.ends_with('^') && !cur.ends_with('*') {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        pieces.push(cur);
        let mut out = Self::zero(nvars);
        for piece in pieces {
            let body = piece.trim_start_matches(['+', '-']);
            let neg = piece[..piece.len() - body.len()].matches('-').count() % 2 == 1;
            let mut coef = Q::one();
            let mut exps = vec![0usize; nvars];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in term {piece:?}")));
                }
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, pow) = match rest.split_once('^') {
                        Some((a, b)) => (a, b),
                        None => (rest, "1"),
                    };
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable in {factor:?}")))?;
                    let pow: usize = pow
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                    if idx >= nvars {
                        return Err(Error::Parse(format!("variable x{idx} out of range for {nvars} variables")));
                    }
                    exps[idx] += pow;
                } else {
                    coef *= parse_q(factor)?;
                }
            }
            if neg {
                coef = -coef;
            }
            out.add_term(exps, coef);
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // largest exponent vector first, matching the monomial order of the weight tables
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("x{i}") } else { format!("x{i}^{p}") })
                .collect();
            match (a.is_one(), vars.is_empty()) {
                (_, true) => write!(f, "{}", fmt_q(&a))?,
                (true, false) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{}*{}", fmt_q(&a), vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Entry `(i, j)` is `x_j * dF/dx_i`: the derivative of `F` along the flow of `E_ij`.
pub fn df_matrix(f: &MultiPoly) -> Vec<Vec<MultiPoly>> {
    let n = f.nvars();
    (0..n)
        .map(|i| {
            let d = f.derivative(i);
            (0..n).map(|j| d.mul_var(j)).collect()
        })
        .collect()
}

/// Rank of the span of the coefficient vectors of `polys`.
pub fn span_rank(polys: &[MultiPoly]) -> usize {
    let mut index: HashMap<&Vec<usize>, usize> = HashMap::new();
    for p in polys {
        for e in p.terms.keys() {
            let next = index.len();
            index.entry(e).or_insert(next);
        }
    }
    let mut rows: Vec<Vec<Q>> = polys
        .iter()
        .map(|p| {
            let mut r = vec![Q::zero(); index.len()];
            for (e, c) in &p.terms {
                r[index[e]] = c.clone();
            }
            r
        })
        .collect();
    rank(&mut rows)
}

pub fn rank(rows: &mut [Vec<Q>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = rows[r][col].recip();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = &rows[i][col] * &inv;
                for c in col..ncols {
                    let t = &rows[r][c] * &f;
                    rows[i][c] -= t;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Number of independent linear relations among the entries of the DF matrix.
pub fn df_relation_count(f: &MultiPoly) -> usize {
    let entries: Vec<MultiPoly> = df_matrix(f).into_iter().flatten().collect();
    entries.len() - span_rank(&entries)
}

/// Weights of the normal slice of an orbit under a torus of the stabilizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalRep {
    /// Weight vectors in ambient torus coordinates.
    pub weights: Vec<Vec<Q>>,
    pub torus_rank: usize,
}

impl NormalRep {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

impl Serialize for NormalRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("NormalRep", 3)?;
        let w: Vec<Vec<String>> = self.weights.iter().map(|v| v.iter().map(fmt_q).collect()).collect();
        st.serialize_field("weights", &w)?;
        st.serialize_field("torus_rank", &self.torus_rank)?;
        st.serialize_field("dim", &self.dim())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSplit {
    /// Weights of the tangent space to the orbit cone, with multiplicity.
    pub tangent: Vec<Vec<Q>>,
    pub normal: NormalRep,
    /// Weights of all degree-d monomials.
    pub ambient: Vec<Vec<Q>>,
}

/// Orthogonal projection of `e_i - (1/m)(1,...,1)` onto the span of `basis`, for each `i`.
pub fn coordinate_weights(basis: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let m = basis.first().map(Vec::len).ok_or_else(|| invalid!("empty torus basis"))?;
    let k = basis.len();
    let gram: Vec<Vec<Q>> = (0..k).map(|a| (0..k).map(|b| dot(&basis[a], &basis[b])).collect()).collect();
    let mean = Q::new(1.into(), (m as i64).into());
    (0..m)
        .map(|i| {
            let v: Vec<Q> = (0..m).map(|j| if i == j { Q::one() - &mean } else { -mean.clone() }).collect();
            let mut aug: Vec<Vec<Q>> = gram
                .iter()
                .zip(basis)
                .map(|(row, b)| {
                    let mut r = row.clone();
                    r.push(dot(b, &v));
                    r
                })
                .collect();
            let coeffs = solve_square(&mut aug).ok_or_else(|| invalid!("torus basis is linearly dependent"))?;
            let mut out = vec![Q::zero(); m];
            for (c, b) in coeffs.iter().zip(basis) {
                for (o, x) in out.iter_mut().zip(b) {
                    *o += c * x;
                }
            }
            Ok(out)
        })
        .collect()
}

fn solve_square(m: &mut [Vec<Q>]) -> Option<Vec<Q>> {
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
    Some(m.iter().map(|r| r[k].clone()).collect())
}

fn monomial_torus_weight(exps: &[usize], coord: &[Vec<Q>]) -> Vec<Q> {
    let dim = coord[0].len();
    let mut w = vec![Q::zero(); dim];
    for (e, c) in exps.iter().zip(coord) {
        if *e > 0 {
            let k = qi(*e as i64);
            for (wi, ci) in w.iter_mut().zip(c) {
                *wi += &k * ci;
            }
        }
    }
    w
}

fn poly_weight(p: &MultiPoly, coord: &[Vec<Q>]) -> Result<Option<Vec<Q>>> {
    let mut it = p.terms.keys().map(|e| monomial_torus_weight(e, coord));
    let Some(w) = it.next() else { return Ok(None) };
    if it.any(|x| x != w) {
        return Err(Error::Check(format!("{p} is not an eigenvector of the torus")));
    }
    Ok(Some(w))
}

/// Splits the degree-d weight multiset into tangent and normal parts at `F`.
pub fn normal_rep_of(
    f: &MultiPoly,
    coord_weights: &[Vec<Q>],
    extra_tangents: &[MultiPoly],
    torus_rank: usize,
) -> Result<OrbitSplit> {
    let n = f.nvars();
    if coord_weights.len() != n {
        return Err(invalid!("{} coordinate weights for {n} variables", coord_weights.len()));
    }
    let d = f.homogeneous_degree().ok_or_else(|| invalid!("form is zero or not homogeneous"))?;
    poly_weight(f, coord_weights)?;
    let mut gens: Vec<MultiPoly> = df_matrix(f).into_iter().flatten().filter(|p| !p.is_zero()).collect();
    for e in extra_tangents {
        if e.homogeneous_degree() != Some(d) {
            return Err(invalid!("extra tangent {e} is not homogeneous of degree {d}"));
        }
        gens.push(e.clone());
    }
    let mut blocks: BTreeMap<Vec<Q>, Vec<MultiPoly>> = BTreeMap::new();
    for g in gens {
        let w = poly_weight(&g, coord_weights)?.expect("nonzero generator");
        blocks.entry(w).or_default().push(g);
    }
    let mut ambient_count: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
    let mut ambient = Vec::new();
    for m in monomials(n, d) {
        let w = monomial_torus_weight(&m, coord_weights);
        *ambient_count.entry(w.clone()).or_default() += 1;
        ambient.push(w);
    }
    let mut tangent = Vec::new();
    let mut normal = Vec::new();
    for (w, total) in &ambient_count {
        let r = blocks.get(w).map_or(0, |g| span_rank(g));
        tangent.extend(std::iter::repeat(w.clone()).take(r));
        normal.extend(std::iter::repeat(w.clone()).take(total - r));
    }
    Ok(OrbitSplit { tangent, normal: NormalRep { weights: normal, torus_rank }, ambient })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SemiInvariance {
    Scalar { lambda: String },
    Failure { reason: String },
}

/// `F(g x) = lambda F(x)` exactly, or a failure naming the first mismatched monomial.
pub fn check_semiinvariant(f: &MultiPoly, g: &[Vec<Q>]) -> SemiInvariance {
    let n = f.nvars();
    if g.len() != n || g.iter().any(|r| r.len() != n) {
        return SemiInvariance::Failure { reason: format!("matrix is not {n}x{n}") };
    }
    let mut rows = g.to_vec();
    if rank(&mut rows) < n {
        return SemiInvariance::Failure { reason: "matrix is singular".into() };
    }
    let h = f.compose_linear(g);
    let Some((e0, c0)) = f.terms.iter().next() else {
        return SemiInvariance::Failure { reason: "zero form".into() };
    };
    let lambda = h.coeff(e0) / c0;
    let expected = f.scale(&lambda);
    if h == expected && !lambda.is_zero() {
        return SemiInvariance::Scalar { lambda: fmt_q(&lambda) };
    }
    let diff = h.add(&expected.scale(&-Q::one()));
    let (e, c) = diff.terms.iter().next_back().expect("nonzero difference");
    SemiInvariance::Failure {
        reason: format!(
            "coefficient of monomial {:?} differs by {} from lambda = {}",
            e,
            fmt_q(c),
            fmt_q(&lambda)
        ),
    }
}
