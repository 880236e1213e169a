//! Finite matrix groups: closure, Molien series, invariants of abelian-variety quotients,
//! and symmetrization of Poincaré polynomials under small symmetric groups.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::rational::{qi, Q};
use crate::ring::{adjoint, charpoly, determinant, identity, is_square, mat_mul, Mat, QOmega, Ring};
use crate::series::{BettiTable, TruncatedSeries};

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;
pub const CACHE_ENV: &str = "STRATIFY_CACHE";

/// Elements are distinct and sorted by their encoded text, so equal groups compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMatrixGroup<T: Ring> {
    pub dim: usize,
    pub generators: Vec<Mat<T>>,
    pub elements: Vec<Mat<T>>,
}

impl<T: Ring> FiniteMatrixGroup<T> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn trivial(dim: usize) -> Self {
        FiniteMatrixGroup { dim, generators: Vec::new(), elements: vec![identity(dim)] }
    }
}

impl<T: Ring> Serialize for FiniteMatrixGroup<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FiniteMatrixGroup", 3)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("order", &self.order())?;
        let gens: Vec<String> = self.generators.iter().map(encode_matrix).collect();
        st.serialize_field("generators", &gens)?;
        st.end()
    }
}

/// Rows separated by `;`, entries by spaces.
pub fn encode_matrix<T: Ring>(m: &Mat<T>) -> String {
    m.iter()
        .map(|r| r.iter().map(Ring::encode).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn decode_matrix<T: Ring>(s: &str) -> Result<Mat<T>> {
    s.split(';')
        .map(|r| r.split_whitespace().map(T::decode).collect::<Result<Vec<T>>>())
        .collect()
}

fn validate_generators<T: Ring>(gens: &[Mat<T>]) -> Result<usize> {
    let dim = gens.first().map(Vec::len).ok_or_else(|| invalid!("no generators"))?;
    for g in gens {
        if g.len() != dim || !is_square(g) {
            return Err(invalid!("generators must be square of common size {dim}"));
        }
        if determinant(g).is_zero() {
            return Err(invalid!("generator {} is singular", encode_matrix(g)));
        }
    }
    Ok(dim)
}

/// A JSON list of square matrices with integer or `"p/q"` entries.
pub fn parse_rational_generators(text: &str) -> Result<Vec<Mat<Q>>> {
    let v: Vec<Vec<Vec<serde_json::Value>>> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("generators: {e}")))?;
    v.iter()
        .map(|m| {
            m.iter()
                .map(|row| {
                    row.iter()
                        .map(|x| match x {
                            serde_json::Value::Number(n) => {
                                n.as_i64().map(qi).ok_or_else(|| Error::Parse(format!("non-integer entry {n}")))
                            }
                            serde_json::Value::String(s) => crate::rational::parse_q(s),
                            other => Err(Error::Parse(format!("bad matrix entry {other}"))),
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Breadth-first multiplicative closure; a finite monoid of invertible matrices is a group.
pub fn close_group<T: Ring>(generators: &[Mat<T>], cap: usize) -> Result<FiniteMatrixGroup<T>> {
    let cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    close_group_cached(generators, cap, cache.as_deref())
}

pub fn close_group_cached<T: Ring>(
    generators: &[Mat<T>],
    cap: usize,
    cache_dir: Option<&Path>,
) -> Result<FiniteMatrixGroup<T>> {
    let dim = validate_generators(generators)?;
    let path = cache_dir.map(|d| d.join(format!("group-{}.txt", cache_key(generators))));
    if let Some(p) = &path {
        if let Some(g) = load_cached(p, dim, generators, cap) {
            return Ok(g);
        }
    }
    let id = identity::<T>(dim);
    let mut seen: HashSet<Mat<T>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = mat_mul(&x, g);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::Resource(format!("group closure exceeds cap {cap}")));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut keyed: Vec<(String, Mat<T>)> = seen.into_iter().map(|m| (encode_matrix(&m), m)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    if let Some(p) = &path {
        let text: String = keyed.iter().map(|(k, _)| format!("{k}\n")).collect();
        // the cache is an optimization; a failed write is not an error
        let _ = p.parent().map(fs::create_dir_all);
        let _ = fs::write(p, text);
    }
    Ok(FiniteMatrixGroup {
        dim,
        generators: generators.to_vec(),
        elements: keyed.into_iter().map(|(_, m)| m).collect(),
    })
}

fn cache_key<T: Ring>(generators: &[Mat<T>]) -> String {
    let mut h = Sha256::new();
    h.update(std::any::type_name::<T>().as_bytes());
    for g in generators {
        h.update(encode_matrix(g).as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

fn load_cached<T: Ring>(path: &Path, dim: usize, gens: &[Mat<T>], cap: usize) -> Option<FiniteMatrixGroup<T>> {
    let text = fs::read_to_string(path).ok()?;
    let elements: Vec<Mat<T>> = text.lines().map(decode_matrix).collect::<Result<_>>().ok()?;
    if elements.len() > cap || elements.iter().any(|m| m.len() != dim || !is_square(m)) {
        return None;
    }
    // cheap sanity: sorted, distinct, contains the identity and every generator
    let keys: Vec<String> = elements.iter().map(encode_matrix).collect();
    if keys.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    let set: HashSet<&Mat<T>> = elements.iter().collect();
    if !set.contains(&identity(dim)) || gens.iter().any(|g| !set.contains(g)) {
        return None;
    }
    Some(FiniteMatrixGroup { dim, generators: gens.to_vec(), elements })
}

/// Multiplicity of each characteristic polynomial over the group.
fn charpoly_classes<T: Ring>(group: &FiniteMatrixGroup<T>) -> Vec<(Vec<T>, usize)> {
    let counts = group
        .elements
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<Vec<T>, usize>, m| {
            *acc.entry(charpoly(m)).or_default() += 1;
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let mut out: Vec<_> = counts.into_iter().collect();
    out.sort();
    out
}

/// Power series inverse of a polynomial with constant term 1, to `len` coefficients.
fn invert_unit_poly(p: &[QOmega], len: usize) -> Vec<QOmega> {
    let mut inv = vec![QOmega::zero(); len];
    if len == 0 {
        return inv;
    }
    inv[0] = QOmega::one();
    for k in 1..len {
        let mut acc = QOmega::zero();
        for j in 1..=k.min(p.len() - 1) {
            acc = acc.add(&p[j].mul(&inv[k - j]));
        }
        inv[k] = QOmega::zero().sub(&acc);
    }
    inv
}

/// `|G|^{-1} sum det(1 - t^g M)^{-1}` modulo `t^order`.
pub fn molien<T: Ring>(group: &FiniteMatrixGroup<T>, generator_degree: usize, order: usize) -> Result<TruncatedSeries> {
    if generator_degree == 0 || generator_degree % 2 == 1 {
        return Err(invalid!("generator degree must be a positive even integer, got {generator_degree}"));
    }
    let len = order / generator_degree + 1;
    let mut total = vec![QOmega::zero(); len];
    for (cp, count) in charpoly_classes(group) {
        // det(1 - sM) has the characteristic coefficients in increasing degree
        let p: Vec<QOmega> = cp.iter().map(Ring::to_q_omega).collect();
        let c = qi(count as i64);
        for (t, x) in total.iter_mut().zip(invert_unit_poly(&p, len)) {
            *t = t.add(&x.scale(&c));
        }
    }
    let n = qi(group.order() as i64);
    let mut coeffs = vec![qi(0); order + 1];
    for (j, x) in total.iter().enumerate() {
        let v = x
            .as_rational()
            .ok_or_else(|| Error::Check(format!("Molien coefficient {j} is not rational")))?;
        coeffs[j * generator_degree] = v / &n;
    }
    Ok(TruncatedSeries::new(coeffs, order))
}

/// `M^* H M = H` for every element.
pub fn check_unitary<T: Ring>(group: &FiniteMatrixGroup<T>, form: &Mat<T>) -> Result<()> {
    for m in &group.elements {
        if &mat_mul(&mat_mul(&adjoint(m), form), m) != form {
            return Err(Error::Check(format!("{} does not preserve the hermitian form", encode_matrix(m))));
        }
    }
    Ok(())
}

/// Betti numbers of `E^k / G` for `E` the elliptic curve with an order-3 automorphism,
/// from the averaged bigraded character `det(1 + sM) det(1 + t conj(M))`.
pub fn abelian_quotient_betti<T: Ring>(group: &FiniteMatrixGroup<T>, form: &Mat<T>) -> Result<BettiTable> {
    let k = group.dim;
    check_unitary(group, form)?;
    let mut h = vec![vec![QOmega::zero(); k + 1]; k + 1];
    for (cp, count) in charpoly_classes(group) {
        // e_p = (-1)^p c_p
        let e: Vec<QOmega> = cp
            .iter()
            .enumerate()
            .map(|(p, c)| {
                let x = c.to_q_omega();
                if p % 2 == 1 { QOmega::zero().sub(&x) } else { x }
            })
            .collect();
        let c = qi(count as i64);
        for p in 0..=k {
            for q in 0..=k {
                h[p][q] = h[p][q].add(&e[p].mul(&e[q].conj()).scale(&c));
            }
        }
    }
    let n = qi(group.order() as i64);
    let mut betti = vec![0i64; 2 * k + 1];
    for p in 0..=k {
        for q in 0..=k {
            let v = h[p][q]
                .as_rational()
                .map(|x| x / &n)
                .filter(crate::rational::is_integer)
                .ok_or_else(|| Error::Check(format!("invariant dimension h^({p},{q}) is not an integer")))?;
            betti[p + q] += crate::rational::to_i64(&v).expect("integer");
        }
    }
    BettiTable::new(k, betti)
}

/// Cycle index of `S_n` (`n` = 2 or 3) applied to a series with only even terms.
pub fn wreath_symmetrize(p: &TruncatedSeries, n: usize) -> Result<TruncatedSeries> {
    if !p.odd_part_vanishes() {
        return Err(invalid!("symmetrization needs vanishing odd coefficients"));
    }
    let p2 = p.substitute_power(2).truncate_at_most(p.order());
    match n {
        2 => Ok((&(p * p) + &p2).scale(&Q::new(1.into(), 2.into()))),
        3 => {
            let p3 = p.substitute_power(3).truncate_at_most(p.order());
            let sum = &(&(&(p * p) * p) + &(&(p * &p2)).scale(&qi(3))) + &p3.scale(&qi(2));
            Ok(sum.scale(&Q::new(1.into(), 6.into())))
        }
        _ => Err(invalid!("symmetrization is implemented for n = 2 or 3, got {n}")),
    }
}

/// Betti table of the symmetric quotient of an `n`-fold product.
pub fn wreath_symmetrize_table(table: &BettiTable, n: usize) -> Result<BettiTable> {
    let dim = table.complex_dim() * n;
    let p = TruncatedSeries::new(table.poincare().coeffs().to_vec(), 2 * dim + 1);
    BettiTable::from_polynomial(&wreath_symmetrize(&p, n)?, dim)
}
