//! Hermitian lattices over the Eisenstein integers and their underlying even Z-lattices.
//!
//! Conventions: `<x, y> = x^* G y` is linear in the second slot; the Z-form is
//! `(x, y) = -(2/3) Re <x, y>` on the basis `e_0, w e_0, e_1, w e_1, ...`, so a hermitian
//! norm of 3 is a Z-norm of -2.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::invariants::{abelian_quotient_betti, close_group, wreath_symmetrize_table, FiniteMatrixGroup};
use crate::rational::{fmt_q, qi, Q};
use crate::ring::{adjoint, determinant, mat_mul, EisInt, Mat, QOmega};
use crate::series::BettiTable;

const THETA: EisInt = EisInt::THETA;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisLattice {
    pub gram: Mat<EisInt>,
}

impl EisLattice {
    /// Checks the hermitian and theta-valued conditions.
    pub fn new(gram: Mat<EisInt>) -> Result<Self> {
        let n = gram.len();
        for i in 0..n {
            if gram[i].len() != n {
                return Err(invalid!("Gram matrix is not square"));
            }
            for j in 0..n {
                if gram[i][j] != gram[j][i].conj() {
                    return Err(invalid!("Gram matrix is not hermitian at ({i},{j})"));
                }
                if gram[i][j].div_exact(THETA).is_none() {
                    return Err(invalid!("entry ({i},{j}) = {} is not divisible by theta", gram[i][j]));
                }
            }
            if gram[i][i].b != 0 || gram[i][i].a % 3 != 0 {
                return Err(invalid!("diagonal entry {i} is not a multiple of 3"));
            }
        }
        Ok(EisLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// The chain lattice with `3` on the diagonal and `theta` just above it.
    pub fn chain(n: usize) -> Self {
        let mut g = vec![vec![EisInt::ZERO; n]; n];
        for i in 0..n {
            g[i][i] = EisInt::new(3, 0);
            if i + 1 < n {
                g[i][i + 1] = THETA;
                g[i + 1][i] = THETA.conj();
            }
        }
        EisLattice { gram: g }
    }

    /// The indefinite hyperbolic plane with off-diagonal `theta`.
    pub fn hyperbolic() -> Self {
        EisLattice { gram: vec![vec![EisInt::ZERO, THETA], vec![THETA.conj(), EisInt::ZERO]] }
    }

    pub fn direct_sum(parts: &[EisLattice]) -> Self {
        let n: usize = parts.iter().map(EisLattice::rank).sum();
        let mut g = vec![vec![EisInt::ZERO; n]; n];
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    g[off + i][off + j] = p.gram[i][j];
                }
            }
            off += p.rank();
        }
        EisLattice { gram: g }
    }

    /// Parses sums like `E1+2E4`, `3E1` or `H`, where `En` is the chain lattice of rank n.
    pub fn parse(expr: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for term in expr.split('+').map(str::trim) {
            let split = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
            let (mult, name) = term.split_at(split);
            let mult: usize = if mult.is_empty() {
                1
            } else {
                mult.parse().map_err(|_| Error::Parse(format!("bad multiplicity in {term:?}")))?
            };
            let lat = match name {
                "H" => EisLattice::hyperbolic(),
                _ => {
                    let k: usize = name
                        .strip_prefix('E')
                        .and_then(|k| k.parse().ok())
                        .filter(|&k| k >= 1)
                        .ok_or_else(|| Error::Parse(format!("unknown lattice {name:?}")))?;
                    EisLattice::chain(k)
                }
            };
            parts.extend(std::iter::repeat(lat).take(mult));
        }
        if parts.is_empty() {
            return Err(Error::Parse("empty lattice expression".into()));
        }
        Ok(EisLattice::direct_sum(&parts))
    }

    pub fn inner(&self, x: &[EisInt], y: &[EisInt]) -> EisInt {
        let mut acc = EisInt::ZERO;
        for i in 0..x.len() {
            for j in 0..y.len() {
                acc = acc + x[i].conj() * self.gram[i][j] * y[j];
            }
        }
        acc
    }

    /// `<x, x>`, always an integer.
    pub fn norm(&self, x: &[EisInt]) -> i64 {
        self.inner(x, x).a
    }

    pub fn determinant(&self) -> EisInt {
        determinant(&self.gram)
    }
}

/// Even integral lattice given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZLattice {
    pub gram: Vec<Vec<i64>>,
}

impl ZLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        for i in 0..n {
            if gram[i].len() != n {
                return Err(invalid!("Gram matrix is not square"));
            }
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(invalid!("Gram matrix is not symmetric"));
                }
            }
        }
        Ok(ZLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut acc = 0;
        for i in 0..x.len() {
            if x[i] != 0 {
                for j in 0..y.len() {
                    acc += x[i] * self.gram[i][j] * y[j];
                }
            }
        }
        acc
    }

    pub fn gram_q(&self) -> Mat<Q> {
        self.gram.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.gram_q()).to_integer()
    }

    pub fn direct_sum(parts: &[ZLattice]) -> ZLattice {
        let n: usize = parts.iter().map(ZLattice::rank).sum();
        let mut g = vec![vec![0; n]; n];
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    g[off + i][off + j] = p.gram[i][j];
                }
            }
            off += p.rank();
        }
        ZLattice { gram: g }
    }

    pub fn negated(&self) -> ZLattice {
        ZLattice { gram: self.gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect() }
    }

    /// +1 for positive definite, -1 for negative definite, 0 otherwise.
    pub fn definiteness(&self) -> i32 {
        let pivots = ldl_pivots(&self.gram_q());
        match pivots {
            Some(d) if d.iter().all(Signed::is_positive) => 1,
            Some(d) if d.iter().all(Signed::is_negative) => -1,
            _ => 0,
        }
    }
}

/// Pivots of the symmetric Gaussian elimination without pivoting, or `None` on a zero pivot.
fn ldl_pivots(g: &Mat<Q>) -> Option<Vec<Q>> {
    ldl(g).map(|(d, _)| d)
}

/// `x^T G x = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2`.
fn ldl(g: &Mat<Q>) -> Option<(Vec<Q>, Mat<Q>)> {
    let n = g.len();
    let mut a = g.clone();
    let mut d = Vec::with_capacity(n);
    let mut mu = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        let p = a[i][i].clone();
        if p.is_zero() {
            return None;
        }
        for j in i + 1..n {
            mu[i][j] = &a[i][j] / &p;
        }
        for j in i + 1..n {
            for k in i + 1..n {
                let t = &mu[i][j] * &a[i][k];
                a[j][k] -= t;
            }
        }
        d.push(p);
    }
    Some((d, mu))
}

/// Integral vectors with `x^T G x <= bound` for positive definite `G` (Fincke-Pohst).
pub fn short_vectors(lat: &ZLattice, bound: i64) -> Result<Vec<(Vec<i64>, i64)>> {
    if lat.definiteness() != 1 {
        return Err(invalid!("short vector search needs a positive definite lattice"));
    }
    let (d, mu) = ldl(&lat.gram_q()).expect("definite");
    let n = lat.rank();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fn rec(
        i: usize,
        budget: Q,
        d: &[Q],
        mu: &Mat<Q>,
        x: &mut Vec<i64>,
        lat: &ZLattice,
        out: &mut Vec<(Vec<i64>, i64)>,
    ) {
        let n = x.len();
        let center: Q = -(i + 1..n).fold(Q::zero(), |acc, j| acc + &mu[i][j] * qi(x[j]));
        let fits = |v: i64| {
            let t = qi(v) - &center;
            &d[i] * &t * &t <= budget
        };
        let start = center.floor().to_integer().to_i64().expect("small center");
        let mut lo = start;
        while fits(lo - 1) {
            lo -= 1;
        }
        let mut hi = start;
        while fits(hi + 1) {
            hi += 1;
        }
        for v in lo..=hi {
            if !fits(v) {
                continue;
            }
            x[i] = v;
            let t = qi(v) - &center;
            let rest = &budget - &d[i] * &t * &t;
            if i == 0 {
                let norm = lat.pair(x, x);
                out.push((x.clone(), norm));
            } else {
                rec(i - 1, rest, d, mu, x, lat, out);
            }
        }
        x[i] = 0;
    }
    if n > 0 {
        rec(n - 1, qi(bound), &d, &mu, &mut x, lat, &mut out);
    }
    out.sort();
    Ok(out)
}

/// All vectors of Z-norm `-2` (negative definite) or `+2` (positive definite), sorted.
pub fn enumerate_roots(lat: &ZLattice) -> Result<Vec<Vec<i64>>> {
    let sign = lat.definiteness();
    if sign == 0 {
        return Err(invalid!("root enumeration needs a definite lattice"));
    }
    let pos = if sign == 1 { lat.clone() } else { lat.negated() };
    Ok(short_vectors(&pos, 2)?.into_iter().filter(|(_, n)| *n == 2).map(|(v, _)| v).collect())
}

/// Underlying Z-lattice with basis `e_0, w e_0, e_1, w e_1, ...`.
pub fn z_form(lat: &EisLattice) -> Result<ZLattice> {
    let n = lat.rank();
    let powers = [EisInt::ONE, EisInt::OMEGA];
    let mut g = vec![vec![0i64; 2 * n]; 2 * n];
    for i in 0..n {
        for a in 0..2 {
            for j in 0..n {
                for b in 0..2 {
                    let h = powers[a].conj() * lat.gram[i][j] * powers[b];
                    let tr = h.twice_re();
                    if tr % 3 != 0 {
                        return Err(invalid!("Z-form is not integral"));
                    }
                    g[2 * i + a][2 * j + b] = -tr / 3;
                }
            }
        }
    }
    ZLattice::new(g)
}

pub fn eis_to_z(v: &[EisInt]) -> Vec<i64> {
    v.iter().flat_map(|x| [x.a, x.b]).collect()
}

pub fn z_to_eis(v: &[i64]) -> Vec<EisInt> {
    v.chunks(2).map(|c| EisInt::new(c[0], c[1])).collect()
}

/// Multiplication by `w` on Z-coordinates.
pub fn rho(v: &[i64]) -> Vec<i64> {
    eis_to_z(&z_to_eis(v).into_iter().map(|x| EisInt::OMEGA * x).collect::<Vec<_>>())
}

/// Eisenstein vectors of hermitian norm 3, via the Z-roots of the underlying lattice.
pub fn eisenstein_roots(lat: &EisLattice) -> Result<Vec<Vec<EisInt>>> {
    let roots = enumerate_roots(&z_form(lat)?)?;
    let out: Vec<Vec<EisInt>> = roots.iter().map(|r| z_to_eis(r)).collect();
    for r in &out {
        if lat.norm(r) != 3 {
            return Err(Error::Check("a Z-root does not have hermitian norm 3".into()));
        }
    }
    Ok(out)
}

/// `x -> x - (1 - w) (<r, x> / <r, r>) r` as a matrix acting on column vectors.
pub fn triflection(lat: &EisLattice, r: &[EisInt]) -> Result<Mat<EisInt>> {
    let n = lat.rank();
    let nr = lat.norm(r);
    if nr != 3 {
        return Err(invalid!("triflection needs a vector of norm 3, got {nr}"));
    }
    // row vector r^* G
    let rg: Vec<EisInt> = (0..n)
        .map(|j| (0..n).fold(EisInt::ZERO, |acc, i| acc + r[i].conj() * lat.gram[i][j]))
        .collect();
    let c = EisInt::ONE - EisInt::OMEGA;
    let mut m = vec![vec![EisInt::ZERO; n]; n];
    for i in 0..n {
        for j in 0..n {
            let t = (c * r[i] * rg[j])
                .div_exact(EisInt::new(3, 0))
                .ok_or_else(|| Error::Check("triflection is not integral".into()))?;
            m[i][j] = if i == j { EisInt::ONE - t } else { -t };
        }
    }
    Ok(m)
}

pub fn preserves_form(lat: &EisLattice, m: &Mat<EisInt>) -> bool {
    mat_mul(&mat_mul(&adjoint(m), &lat.gram), m) == lat.gram
}

/// Group generated by all triflections, each checked to have order 3 and preserve the form.
pub fn weyl_group(lat: &EisLattice, cap: usize) -> Result<FiniteMatrixGroup<EisInt>> {
    let mut gens: BTreeSet<Mat<EisInt>> = BTreeSet::new();
    let id = crate::ring::identity::<EisInt>(lat.rank());
    for r in eisenstein_roots(lat)? {
        let t = triflection(lat, &r)?;
        let t3 = mat_mul(&mat_mul(&t, &t), &t);
        if t == id || t3 != id || !preserves_form(lat, &t) {
            return Err(Error::Check("triflection fails the order-3 or isometry check".into()));
        }
        gens.insert(t);
    }
    if gens.is_empty() {
        return Ok(FiniteMatrixGroup::trivial(lat.rank()));
    }
    close_group(&gens.into_iter().collect::<Vec<_>>(), cap)
}

/// Full isometry group of a definite lattice, by backtracking over images of the basis.
pub fn isometry_group(lat: &EisLattice, cap: usize) -> Result<FiniteMatrixGroup<EisInt>> {
    let n = lat.rank();
    let z = z_form(lat)?;
    let sign = z.definiteness();
    if sign == 0 {
        return Err(invalid!("isometry groups are computed only for definite lattices"));
    }
    let pos = if sign == 1 { z.clone() } else { z.negated() };
    let max_norm = (0..n).map(|i| lat.gram[i][i].a.abs()).max().unwrap_or(0);
    // hermitian norm h corresponds to Z-norm 2h/3 on the positive side
    let pool: Vec<Vec<EisInt>> = short_vectors(&pos, 2 * max_norm / 3)?
        .into_iter()
        .map(|(v, _)| z_to_eis(&v))
        .collect();
    let candidates: Vec<Vec<&Vec<EisInt>>> = (0..n)
        .map(|i| pool.iter().filter(|v| lat.norm(v) == lat.gram[i][i].a).collect())
        .collect();
    let mut images: Vec<&Vec<EisInt>> = Vec::with_capacity(n);
    let mut found: Vec<Mat<EisInt>> = Vec::new();
    fn rec<'a>(
        lat: &EisLattice,
        candidates: &[Vec<&'a Vec<EisInt>>],
        images: &mut Vec<&'a Vec<EisInt>>,
        found: &mut Vec<Mat<EisInt>>,
        cap: usize,
    ) -> Result<()> {
        let k = images.len();
        let n = candidates.len();
        if k == n {
            if found.len() >= cap {
                return Err(Error::Resource(format!("isometry group exceeds cap {cap}")));
            }
            found.push((0..n).map(|i| (0..n).map(|j| images[j][i]).collect()).collect());
            return Ok(());
        }
        for &c in &candidates[k] {
            if (0..k).all(|j| lat.inner(images[j], c) == lat.gram[j][k]) {
                images.push(c);
                rec(lat, candidates, images, found, cap)?;
                images.pop();
            }
        }
        Ok(())
    }
    rec(lat, &candidates, &mut images, &mut found, cap)?;
    found.sort_by_key(crate::invariants::encode_matrix);
    Ok(FiniteMatrixGroup { dim: n, generators: Vec::new(), elements: found })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    /// Nontrivial invariant factors, increasing.
    pub invariant_factors: Vec<BigInt>,
    /// `q(g) = (g, g)` reduced into `(-2, 0]`, one per generator.
    pub q_values: Vec<Q>,
    /// Generator lifts in the dual, in lattice coordinates.
    pub generators: Vec<Vec<Q>>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().fold(BigInt::one(), |a, b| a * b)
    }
}

impl Serialize for DiscriminantGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DiscriminantGroup", 3)?;
        st.serialize_field("invariant_factors", &self.invariant_factors.iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
        st.serialize_field("q_values", &self.q_values.iter().map(fmt_q).collect::<Vec<_>>())?;
        let gens: Vec<Vec<String>> = self.generators.iter().map(|g| g.iter().map(fmt_q).collect()).collect();
        st.serialize_field("generators", &gens)?;
        st.end()
    }
}

/// Reduces a rational into `(-2, 0]` modulo 2.
pub fn mod_two(x: &Q) -> Q {
    let two = qi(2);
    let k = (x / &two).ceil();
    x - &two * k
}

/// Smith normal form `U A V = D` over the integers.
pub fn smith_normal_form(a: &[Vec<i64>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    let mut d: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let eye = |k: usize| -> Vec<Vec<BigInt>> {
        (0..k).map(|i| (0..k).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
    };
    let mut u = eye(n);
    let mut v = eye(m);
    let mut t = 0;
    while t < n.min(m) {
        // choose the smallest nonzero entry of the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..m {
                if !d[i][j].is_zero() && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..n {
            let q = d[i][t].div_floor(&d[t][t]);
            if !q.is_zero() {
                for j in 0..m {
                    let x = &q * &d[t][j];
                    d[i][j] -= x;
                }
                for j in 0..n {
                    let x = &q * &u[t][j];
                    u[i][j] -= x;
                }
            }
            clean &= d[i][t].is_zero();
        }
        for j in t + 1..m {
            let q = d[t][j].div_floor(&d[t][t]);
            if !q.is_zero() {
                for i in 0..n {
                    let x = &q * &d[i][t];
                    d[i][j] -= x;
                }
                for i in 0..m {
                    let x = &q * &v[i][t];
                    v[i][j] -= x;
                }
            }
            clean &= d[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // divisibility condition: fold a non-divisible entry into the pivot row
        let bad = (t + 1..n).flat_map(|i| (t + 1..m).map(move |j| (i, j))).find(|&(i, j)| !(&d[i][j] % &d[t][t]).is_zero());
        if let Some((i, _)) = bad {
            for j in 0..m {
                let x = d[i][j].clone();
                d[t][j] += x;
            }
            for j in 0..n {
                let x = u[i][j].clone();
                u[t][j] += x;
            }
            continue;
        }
        if d[t][t].is_negative() {
            for j in 0..m {
                d[t][j] = -d[t][j].clone();
            }
            for j in 0..n {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    (u, d, v)
}

pub fn discriminant_form(lat: &ZLattice) -> Result<DiscriminantGroup> {
    let n = lat.rank();
    let (_, d, v) = smith_normal_form(&lat.gram);
    if (0..n).any(|i| d[i][i].is_zero()) {
        return Err(invalid!("Gram matrix is degenerate"));
    }
    let g = lat.gram_q();
    let mut out = DiscriminantGroup { invariant_factors: Vec::new(), q_values: Vec::new(), generators: Vec::new() };
    for k in 0..n {
        if d[k][k].is_one() {
            continue;
        }
        // the dual is V D^{-1} Z^n, so column k of V over d_k is a generator lift
        let lift: Vec<Q> = (0..n).map(|i| Q::new(v[i][k].clone(), d[k][k].clone())).collect();
        let gl: Vec<Q> = (0..n).map(|i| (0..n).fold(Q::zero(), |a, j| a + &g[i][j] * &lift[j])).collect();
        let qv = lift.iter().zip(&gl).fold(Q::zero(), |a, (x, y)| a + x * y);
        out.invariant_factors.push(d[k][k].clone());
        out.q_values.push(mod_two(&qv));
        out.generators.push(lift);
    }
    Ok(out)
}

/// Positive generator of the ideal `(v, L)`.
pub fn divisibility(v: &[i64], lat: &ZLattice) -> Result<i64> {
    if v.len() != lat.rank() || v.iter().all(|&x| x == 0) {
        return Err(invalid!("divisibility needs a nonzero vector of the lattice"));
    }
    Ok((0..lat.rank()).fold(0i64, |g, i| {
        let e: Vec<i64> = (0..lat.rank()).map(|j| (i == j) as i64).collect();
        g.gcd(&lat.pair(v, &e))
    }))
}

/// Normalized generator of the ideal `<v, L>` in the Eisenstein integers, where `L` is the
/// Z-span of `basis` (rational Eisenstein coordinates) and is assumed stable under `w`.
pub fn eisenstein_divisibility(lat: &EisLattice, v: &[EisInt], basis: &[Vec<QOmega>]) -> Result<EisInt> {
    let n = lat.rank();
    let mut g = EisInt::ZERO;
    for b in basis {
        let mut acc = QOmega::zero();
        for i in 0..n {
            for j in 0..n {
                let c = v[i].conj() * lat.gram[i][j];
                acc = acc.add(&QOmega::new(qi(c.a), qi(c.b)).mul(&b[j]));
            }
        }
        let (a, bb) = (crate::rational::to_i64(&acc.a), crate::rational::to_i64(&acc.b));
        let (Some(a), Some(bb)) = (a, bb) else {
            return Err(Error::Check("pairing with the lattice is not integral".into()));
        };
        g = g.gcd(EisInt::new(a, bb));
    }
    if g == EisInt::ZERO {
        return Err(invalid!("vector is orthogonal to the lattice"));
    }
    Ok(g)
}

/// Rational Z-coordinates `(a_0, b_0, a_1, b_1, ...)` read as Eisenstein coordinates.
pub fn q_to_eis(v: &[Q]) -> Vec<QOmega> {
    v.chunks(2).map(|c| QOmega::new(c[0].clone(), c[1].clone())).collect()
}

/// An overlattice in a chosen basis, remembered in the coordinates of the original lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedLattice {
    pub lattice: ZLattice,
    /// Rows are the new basis vectors in old coordinates.
    pub basis: Vec<Vec<Q>>,
    pub index: BigInt,
}

impl GluedLattice {
    /// Coordinates in the new basis of a vector given in old coordinates, if it lies in the lattice.
    pub fn coordinates(&self, old: &[Q]) -> Option<Vec<i64>> {
        let n = self.basis.len();
        // solve x B = old
        let mut aug: Vec<Vec<Q>> = (0..n)
            .map(|j| {
                let mut r: Vec<Q> = (0..n).map(|i| self.basis[i][j].clone()).collect();
                r.push(old[j].clone());
                r
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, p);
            let inv = aug[col][col].recip();
            for x in aug[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..=n {
                        let t = &aug[col][c] * &f;
                        aug[r][c] -= t;
                    }
                }
            }
        }
        aug.iter().map(|r| crate::rational::to_i64(&r[n])).collect()
    }
}

fn pair_q(g: &Mat<Q>, x: &[Q], y: &[Q]) -> Q {
    let mut acc = Q::zero();
    for i in 0..x.len() {
        if !x[i].is_zero() {
            for j in 0..y.len() {
                acc += &x[i] * &g[i][j] * &y[j];
            }
        }
    }
    acc
}

/// Row-style Hermite reduction to a basis of the integer row span.
fn row_basis(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut basis = Vec::new();
    for col in 0..n {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&r| rows[r][col].abs()).expect("nonempty");
            for &r in &nz {
                if r != p {
                    let q = rows[r][col].div_floor(&rows[p][col]);
                    for c in 0..n {
                        let x = &q * &rows[p][c];
                        rows[r][c] -= x;
                    }
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            basis.push(rows.remove(p));
        }
    }
    basis
}

/// Adjoins glue vectors (rational, old coordinates) after checking they are isotropic dual vectors.
pub fn glue_overlattice(lat: &ZLattice, glue: &[Vec<Q>]) -> Result<GluedLattice> {
    let n = lat.rank();
    let g = lat.gram_q();
    for (k, v) in glue.iter().enumerate() {
        if v.len() != n {
            return Err(invalid!("glue vector {k} has the wrong length"));
        }
        for i in 0..n {
            let e: Vec<Q> = (0..n).map(|j| qi((i == j) as i64)).collect();
            if !crate::rational::is_integer(&pair_q(&g, &e, v)) {
                return Err(Error::Check(format!("glue vector {k} is not in the dual lattice")));
            }
        }
        let qv = pair_q(&g, v, v);
        if !mod_two(&qv).is_zero() {
            return Err(Error::Check(format!("glue vector {k} is not isotropic: q = {}", fmt_q(&mod_two(&qv)))));
        }
        for (l, w) in glue.iter().enumerate().skip(k + 1) {
            if !crate::rational::is_integer(&pair_q(&g, v, w)) {
                return Err(Error::Check(format!("glue vectors {k} and {l} pair non-integrally")));
            }
        }
    }
    let den = crate::rational::lcm_of_denominators(glue.iter().flatten());
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { den.clone() } else { BigInt::zero() }).collect())
        .collect();
    for v in glue {
        rows.push(v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect());
    }
    let b = row_basis(rows, n);
    let basis: Vec<Vec<Q>> = b.iter().map(|r| r.iter().map(|x| Q::new(x.clone(), den.clone())).collect()).collect();
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let x = pair_q(&g, &basis[i], &basis[j]);
            gram[i][j] = crate::rational::to_i64(&x).ok_or_else(|| Error::Check("glued lattice is not integral".into()))?;
        }
    }
    let new = ZLattice::new(gram)?;
    if !new.is_even() {
        return Err(Error::Check("glued lattice is not even".into()));
    }
    let det_b = determinant(&basis);
    let index = (det_b.recip()).abs();
    if !crate::rational::is_integer(&index) {
        return Err(Error::Check("glued lattice does not contain the original".into()));
    }
    Ok(GluedLattice { lattice: new, basis, index: index.to_integer() })
}

/// The glued sum of three copies of the rank-3 chain lattice, with everything needed to verify
/// the norm-3, divisibility-3 vector in its sum with the hyperbolic plane.
#[derive(Clone, Debug, Serialize)]
pub struct TripleGlueReport {
    pub z_norm: i64,
    pub z_divisibility: i64,
    pub glued_index: String,
    pub glued_even: bool,
    pub glued_discriminant: DiscriminantGroup,
    pub difference_norm: i64,
    pub difference_divisibility: i64,
    pub difference_primitive: bool,
    pub hermitian_difference_norm: i64,
    pub w_hermitian_norm: i64,
    pub w_z_norm: i64,
    /// Z-divisibility in the glued lattice plus the Z-form of the hyperbolic plane.
    pub w_divisibility: i64,
    /// Eisenstein divisibility of `v1 - v2` in the glued lattice, normalized.
    pub eisenstein_difference_divisibility: EisInt,
    /// Eisenstein divisibility of `w`; a generator 3 means the orthogonal complement is unimodular.
    pub eisenstein_w_divisibility: EisInt,
}

/// A norm -12 vector of divisibility 3 in the underlying lattice of the rank-3 chain lattice.
pub fn find_glue_vector(e6: &ZLattice) -> Result<Vec<i64>> {
    let pos = e6.negated();
    short_vectors(&pos, 12)?
        .into_iter()
        .find(|(v, n)| *n == 12 && divisibility(v, e6).ok() == Some(3))
        .map(|(v, _)| v)
        .ok_or_else(|| Error::Check("no norm -12 vector of divisibility 3".into()))
}

pub fn triple_glue_report() -> Result<TripleGlueReport> {
    let e3 = EisLattice::chain(3);
    let e6 = z_form(&e3)?;
    let z = find_glue_vector(&e6)?;
    let z_div = divisibility(&z, &e6)?;
    let three = ZLattice::direct_sum(&[e6.clone(), e6.clone(), e6.clone()]);
    let embed = |k: usize, v: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; 18];
        out[6 * k..6 * k + 6].copy_from_slice(v);
        out
    };
    let diag: Vec<Q> = (0..18).map(|i| Q::new(z[i % 6].into(), 3.into())).collect();
    let glued = glue_overlattice(&three, &[diag])?;
    let disc = discriminant_form(&glued.lattice)?;
    let diff: Vec<i64> = embed(0, &z).iter().zip(embed(1, &z)).map(|(a, b)| a - b).collect();
    let diff_q: Vec<Q> = diff.iter().map(|&x| qi(x)).collect();
    let diff_new = glued.coordinates(&diff_q).ok_or_else(|| Error::Check("z1 - z2 is not in the glued lattice".into()))?;
    let diff_norm = glued.lattice.pair(&diff_new, &diff_new);
    let diff_div = divisibility(&diff_new, &glued.lattice)?;
    let primitive = diff_new.iter().fold(0i64, |g, x| g.gcd(x)) == 1;
    // z_i = -theta v_i over the Eisenstein integers
    let ze = z_to_eis(&z);
    let v: Vec<EisInt> = ze
        .iter()
        .map(|x| x.div_exact(THETA).map(|y| -y))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Check("glue vector is not divisible by theta".into()))?;
    let three_e = EisLattice::direct_sum(&[e3.clone(), e3.clone(), e3.clone()]);
    let mut vdiff = vec![EisInt::ZERO; 9];
    vdiff[..3].copy_from_slice(&v);
    for i in 0..3 {
        vdiff[3 + i] = -v[i];
    }
    let herm_diff = three_e.norm(&vdiff);
    // u in the hyperbolic plane with <u, u> = -3
    let h = EisLattice::hyperbolic();
    let small: Vec<EisInt> = (-2..=2).flat_map(|a| (-2..=2).map(move |b| EisInt::new(a, b))).collect();
    let u = small
        .iter()
        .flat_map(|&x| small.iter().map(move |&y| vec![x, y]))
        .find(|u| h.norm(u) == -3)
        .ok_or_else(|| Error::Check("no norm -3 vector in the hyperbolic plane".into()))?;
    let total = EisLattice::direct_sum(&[three_e.clone(), h]);
    let mut w = vdiff.clone();
    w.extend(u.iter().map(|&x| THETA * x));
    let w_herm = total.norm(&w);
    // Z-model: glued lattice plus the Z-form of the hyperbolic plane
    let hz = z_form(&EisLattice::hyperbolic())?;
    let wz = eis_to_z(&w);
    let w_old: Vec<Q> = wz[..18].iter().map(|&x| qi(x)).collect();
    let mut w_new = glued
        .coordinates(&w_old)
        .ok_or_else(|| Error::Check("w is not in the glued lattice".into()))?;
    w_new.extend_from_slice(&wz[18..]);
    let model = ZLattice::direct_sum(&[glued.lattice.clone(), hz]);
    let glued_eis: Vec<Vec<QOmega>> = glued.basis.iter().map(|b| q_to_eis(b)).collect();
    let eis_diff_div = eisenstein_divisibility(&three_e, &vdiff, &glued_eis)?;
    let mut total_basis: Vec<Vec<QOmega>> = glued_eis
        .iter()
        .map(|b| b.iter().cloned().chain([QOmega::zero(), QOmega::zero()]).collect())
        .collect();
    for k in 0..2 {
        for unit in [QOmega::one(), QOmega::new(qi(0), qi(1))] {
            let mut b = vec![QOmega::zero(); 11];
            b[9 + k] = unit;
            total_basis.push(b);
        }
    }
    let eis_w_div = eisenstein_divisibility(&total, &w, &total_basis)?;
    Ok(TripleGlueReport {
        z_norm: e6.pair(&z, &z),
        z_divisibility: z_div,
        glued_index: glued.index.to_string(),
        glued_even: glued.lattice.is_even(),
        glued_discriminant: disc,
        difference_norm: diff_norm,
        difference_divisibility: diff_div,
        difference_primitive: primitive,
        hermitian_difference_norm: herm_diff,
        w_hermitian_norm: w_herm,
        w_z_norm: model.pair(&w_new, &w_new),
        w_divisibility: divisibility(&w_new, &model)?,
        eisenstein_difference_divisibility: eis_diff_div,
        eisenstein_w_divisibility: eis_w_div,
    })
}

/// Which finite group acts on a boundary factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorGroup {
    Weyl,
    Isometry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryFactor {
    pub lattice: String,
    pub group: FactorGroup,
    /// Identical copies permuted by the symmetric group.
    #[serde(default = "one_copy")]
    pub copies: usize,
}

fn one_copy() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub factors: Vec<BoundaryFactor>,
    /// Extra Künneth factors given directly by Betti tables.
    #[serde(default)]
    pub extra: Vec<BettiTable>,
    /// Symmetries recorded as acting trivially; they do not change the table.
    #[serde(default)]
    pub trivial_symmetries: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub factor_tables: Vec<BettiTable>,
    pub group_orders: Vec<usize>,
    pub table: BettiTable,
    pub trivial_symmetries: Vec<String>,
}

/// TOML, or JSON when the text opens with `{`.
fn parse_structured<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
    } else {
        toml::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
    }
}

pub fn parse_boundary_spec(text: &str) -> Result<BoundarySpec> {
    parse_structured(text, "boundary spec")
}

/// Exactly one of the two Gram matrices; Eisenstein entries are `[a, b]` for `a + b w`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    eisenstein_gram: Option<Vec<Vec<(i64, i64)>>>,
    z_gram: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug)]
pub enum AnyLattice {
    Eisenstein(EisLattice),
    Z(ZLattice),
}

impl AnyLattice {
    /// A lattice expression such as `E1+2E4`, or the contents of a lattice file.
    pub fn parse_expression_or_file(text: &str) -> Result<Self> {
        let t = text.trim_start();
        if t.starts_with('{') || t.contains('=') {
            let f: LatticeFile = parse_structured(text, "lattice file")?;
            match (f.eisenstein_gram, f.z_gram) {
                (Some(g), None) => {
                    let gram = g.into_iter().map(|r| r.into_iter().map(|(a, b)| EisInt::new(a, b)).collect()).collect();
                    Ok(AnyLattice::Eisenstein(EisLattice::new(gram)?))
                }
                (None, Some(g)) => Ok(AnyLattice::Z(ZLattice::new(g)?)),
                _ => Err(Error::Parse("lattice file needs exactly one of eisenstein_gram and z_gram".into())),
            }
        } else {
            Ok(AnyLattice::Eisenstein(EisLattice::parse(text.trim())?))
        }
    }

    /// The underlying Z-lattice (the real form for Eisenstein input).
    pub fn z(&self) -> Result<ZLattice> {
        match self {
            AnyLattice::Eisenstein(l) => z_form(l),
            AnyLattice::Z(l) => Ok(l.clone()),
        }
    }
}

pub fn boundary_betti(spec: &BoundarySpec, cap: usize) -> Result<BoundaryReport> {
    let mut tables = Vec::new();
    let mut orders = Vec::new();
    let mut total = BettiTable::point();
    for f in &spec.factors {
        let lat = EisLattice::parse(&f.lattice)?;
        let group = match f.group {
            FactorGroup::Weyl => weyl_group(&lat, cap)?,
            FactorGroup::Isometry => isometry_group(&lat, cap)?,
        };
        let t = abelian_quotient_betti(&group, &lat.gram)?;
        if !t.odd_vanishes() {
            return Err(Error::Check(format!("quotient by the group of {} has odd cohomology", f.lattice)));
        }
        let sym = if f.copies > 1 { wreath_symmetrize_table(&t, f.copies)? } else { t.clone() };
        if f.copies == 0 {
            return Err(invalid!("factor {} has zero copies", f.lattice));
        }
        orders.push(group.order());
        tables.push(t);
        total = total.product(&sym);
    }
    for e in &spec.extra {
        total = total.product(e);
    }
    Ok(BoundaryReport {
        factor_tables: tables,
        group_orders: orders,
        table: total,
        trivial_symmetries: spec.trivial_symmetries.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::DEFAULT_GROUP_CAP;

    /// Box enumeration with bounds |x_i| <= sqrt(2 (G^-1)_ii), used only as an oracle.
    fn box_roots(lat: &ZLattice) -> Vec<Vec<i64>> {
        let pos = if lat.definiteness() == 1 { lat.clone() } else { lat.negated() };
        let n = pos.rank();
        let g = pos.gram_q();
        let det = determinant(&g);
        let bounds: Vec<i64> = (0..n)
            .map(|i| {
                let minor: Mat<Q> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (0..n).filter(|&c| c != i).map(|c| g[r][c].clone()).collect())
                    .collect();
                let inv_ii = determinant(&minor) / &det;
                let mut b = 0i64;
                while qi((b + 1) * (b + 1)) <= qi(2) * &inv_ii {
                    b += 1;
                }
                b
            })
            .collect();
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        fn rec(i: usize, x: &mut Vec<i64>, bounds: &[i64], pos: &ZLattice, out: &mut Vec<Vec<i64>>) {
            if i == x.len() {
                if pos.pair(x, x) == 2 {
                    out.push(x.clone());
                }
                return;
            }
            for v in -bounds[i]..=bounds[i] {
                x[i] = v;
                rec(i + 1, x, bounds, pos, out);
            }
            x[i] = 0;
        }
        rec(0, &mut x, &bounds, &pos, &mut out);
        out.sort();
        out
    }

    #[test]
    fn z_forms_of_the_basic_lattices() {
        let a2 = z_form(&EisLattice::chain(1)).unwrap();
        assert_eq!(a2.gram, vec![vec![-2, 1], vec![1, -2]]);
        let h = z_form(&EisLattice::hyperbolic()).unwrap();
        assert!(h.is_even());
        assert_eq!(h.determinant(), BigInt::from(1));
        assert_eq!(h.definiteness(), 0);
        let e8 = z_form(&EisLattice::chain(4)).unwrap();
        assert!(e8.is_even());
        assert_eq!(e8.determinant(), BigInt::from(1));
        assert_eq!(e8.definiteness(), -1);
    }

    #[test]
    fn determinant_relation() {
        for n in 1..=4 {
            let l = EisLattice::chain(n);
            let d = l.determinant();
            assert_eq!(d.b, 0);
            let z = z_form(&l).unwrap();
            assert_eq!(z.determinant() * BigInt::from(3i64.pow(n as u32)), BigInt::from(d.a * d.a));
        }
    }

    #[test]
    fn root_counts_match_box_oracle() {
        for (n, count) in [(1, 6), (2, 24), (3, 72)] {
            let z = z_form(&EisLattice::chain(n)).unwrap();
            let roots = enumerate_roots(&z).unwrap();
            assert_eq!(roots.len(), count);
            assert_eq!(roots, box_roots(&z));
        }
        let e8 = z_form(&EisLattice::chain(4)).unwrap();
        assert_eq!(enumerate_roots(&e8).unwrap().len(), 240);
        assert!(enumerate_roots(&z_form(&EisLattice::hyperbolic()).unwrap()).is_err());
    }

    #[test]
    fn rho_is_an_isometry_of_order_three() {
        let z = z_form(&EisLattice::chain(3)).unwrap();
        for r in enumerate_roots(&z).unwrap() {
            let r1 = rho(&r);
            assert_eq!(z.pair(&r1, &r1), -2);
            assert_eq!(rho(&rho(&r1)), r);
            assert_ne!(r1, r);
        }
    }

    #[test]
    fn triflections() {
        let l = EisLattice::chain(2);
        for r in eisenstein_roots(&l).unwrap() {
            let t = triflection(&l, &r).unwrap();
            assert!(preserves_form(&l, &t));
            let t3 = mat_mul(&mat_mul(&t, &t), &t);
            assert_eq!(t3, crate::ring::identity(2));
        }
        assert!(triflection(&l, &[EisInt::ONE, EisInt::ONE]).is_err());
    }

    #[test]
    fn small_groups() {
        let e1 = EisLattice::chain(1);
        assert_eq!(weyl_group(&e1, DEFAULT_GROUP_CAP).unwrap().order(), 3);
        assert_eq!(isometry_group(&e1, DEFAULT_GROUP_CAP).unwrap().order(), 6);
        let e3 = EisLattice::chain(3);
        assert_eq!(weyl_group(&e3, DEFAULT_GROUP_CAP).unwrap().order(), 648);
        assert_eq!(isometry_group(&e3, DEFAULT_GROUP_CAP).unwrap().order(), 1296);
        let t = EisLattice::parse("3E1").unwrap();
        assert_eq!(isometry_group(&t, DEFAULT_GROUP_CAP).unwrap().order(), 1296);
    }

    #[test]
    fn discriminants() {
        let e6 = z_form(&EisLattice::chain(3)).unwrap();
        let d = discriminant_form(&e6).unwrap();
        assert_eq!(d.invariant_factors, vec![BigInt::from(3)]);
        assert_eq!(d.q_values, vec![Q::new((-4).into(), 3.into())]);
        let e8 = z_form(&EisLattice::chain(4)).unwrap();
        assert!(discriminant_form(&e8).unwrap().invariant_factors.is_empty());
        let a2 = z_form(&EisLattice::chain(1)).unwrap();
        assert_eq!(discriminant_form(&a2).unwrap().q_values, vec![Q::new((-2).into(), 3.into())]);
        assert!(discriminant_form(&ZLattice::new(vec![vec![2, 2], vec![2, 2]]).unwrap()).is_err());
    }

    #[test]
    fn smith_form_is_a_factorization() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let (u, d, v) = smith_normal_form(&a);
        let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
            (0..x.len())
                .map(|i| (0..y[0].len()).map(|j| (0..y.len()).fold(BigInt::zero(), |s, k| s + &x[i][k] * &y[k][j])).collect())
                .collect()
        };
        assert_eq!(mul(&mul(&u, &big), &v), d);
        let diag: Vec<i64> = (0..3).map(|i| d[i][i].to_i64().unwrap()).collect();
        assert_eq!(diag, vec![2, 6, 12]);
    }

    #[test]
    fn glue_checks() {
        let e6 = z_form(&EisLattice::chain(3)).unwrap();
        let z = find_glue_vector(&e6).unwrap();
        assert_eq!(e6.pair(&z, &z), -12);
        let three = ZLattice::direct_sum(&[e6.clone(), e6.clone(), e6.clone()]);
        let mut single = vec![Q::zero(); 18];
        for i in 0..6 {
            single[i] = Q::new(z[i].into(), 3.into());
        }
        assert!(matches!(glue_overlattice(&three, &[single]), Err(Error::Check(_))));
        let same = glue_overlattice(&e6, &[]).unwrap();
        assert_eq!(same.index, BigInt::from(1));
        assert_eq!(same.lattice, e6);
    }

    #[test]
    fn triple_glue_facts() {
        let r = triple_glue_report().unwrap();
        assert_eq!((r.z_norm, r.z_divisibility), (-12, 3));
        assert_eq!(r.glued_index, "3");
        assert!(r.glued_even);
        assert_eq!(r.glued_discriminant.invariant_factors, vec![BigInt::from(3)]);
        assert_eq!((r.difference_norm, r.difference_divisibility, r.difference_primitive), (-24, 3, true));
        assert_eq!(r.hermitian_difference_norm, 12);
        assert_eq!((r.w_hermitian_norm, r.w_z_norm), (3, -2));
        let three = EisInt::new(3, 0);
        assert_eq!((r.eisenstein_difference_divisibility, r.eisenstein_w_divisibility), (three, three));
        // a norm-3 vector with unimodular complement pairs to 1 with something over Z
        assert_eq!(r.w_divisibility, 1);
    }

    fn factor(lattice: &str, group: FactorGroup, copies: usize) -> BoundaryFactor {
        BoundaryFactor { lattice: lattice.into(), group, copies }
    }

    #[test]
    fn boundary_tables() {
        let spec = |factors| BoundarySpec { factors, extra: vec![], trivial_symmetries: vec![] };
        let two_a5 = boundary_betti(
            &spec(vec![factor("E1", FactorGroup::Weyl, 1), factor("E4", FactorGroup::Weyl, 2)]),
            DEFAULT_GROUP_CAP,
        )
        .unwrap();
        assert_eq!(two_a5.table.even(), vec![1, 2, 3, 4, 5, 5, 4, 3, 2, 1]);
        assert_eq!(two_a5.group_orders, vec![3, 155520]);
        assert_eq!(two_a5.factor_tables[1].even(), vec![1, 1, 1, 1, 1]);
        let three_d4 = boundary_betti(&spec(vec![factor("E3", FactorGroup::Weyl, 3)]), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(three_d4.table.even(), vec![1, 1, 2, 3, 3, 3, 3, 2, 1, 1]);
        let three_a2 = boundary_betti(&spec(vec![factor("3E1", FactorGroup::Isometry, 1)]), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(three_a2.table.even(), vec![1, 1, 1, 1]);
        assert_eq!(three_a2.group_orders, vec![1296]);
    }

    #[test]
    fn weyl_group_of_rank_four_is_the_full_isometry_group() {
        let e4 = EisLattice::chain(4);
        let w = weyl_group(&e4, DEFAULT_GROUP_CAP).unwrap();
        let o = isometry_group(&e4, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(w.order(), 155520);
        assert_eq!(w.elements, o.elements);
    }

    #[test]
    fn parse_lattices() {
        assert_eq!(EisLattice::parse("E1+2E4").unwrap().rank(), 9);
        assert_eq!(EisLattice::parse("3E3").unwrap().rank(), 9);
        assert!(EisLattice::parse("E0").is_err());
        assert!(EisLattice::parse("F2").is_err());
        assert!(EisLattice::new(vec![vec![EisInt::new(1, 0)]]).is_err());
        assert!(EisLattice::new(EisLattice::chain(4).gram).is_ok());
    }
}
