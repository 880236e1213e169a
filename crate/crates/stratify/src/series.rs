//! Truncated power series over exact rationals and Betti tables.
//!
//! Every series carries its truncation order explicitly. Binary operations
//! truncate to the smaller of the two orders, so a result never claims more
//! precision than its inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::rational::{fmt_q, qi, to_i64, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    // len == order + 1
    coeffs: Vec<Q>,
}

impl TruncatedSeries {
    /// Pads with zeros or drops terms above `order`.
    pub fn new(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.resize(order + 1, Q::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| qi(c)).collect(), order)
    }

    /// Coefficients given only at even degrees; odd degrees are zero.
    pub fn from_even(even: &[i64], order: usize) -> Self {
        let mut c = vec![Q::zero(); order + 1];
        for (i, &v) in even.iter().enumerate() {
            if 2 * i <= order {
                c[2 * i] = qi(v);
            }
        }
        TruncatedSeries { coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, Q::one(), order)
    }

    pub fn monomial(degree: usize, c: Q, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Zero above the truncation order is not known, so this returns `None` there.
    pub fn coeff(&self, degree: usize) -> Option<&Q> {
        self.coeffs.get(degree)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Lowers the truncation order; asking for a higher order is an error.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(invalid!(
                "cannot raise truncation order from {} to {}",
                self.order(),
                order
            ));
        }
        Ok(TruncatedSeries { coeffs: self.coeffs[..=order].to_vec() })
    }

    /// Truncates to `min(order, self.order())`.
    pub fn truncate_at_most(&self, order: usize) -> Self {
        let o = order.min(self.order());
        TruncatedSeries { coeffs: self.coeffs[..=o].to_vec() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplication by `t^k`. The order grows by `k`: the low coefficients are known zeros.
    pub fn shift(&self, k: usize) -> Self {
        let mut c = vec![Q::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs: c }
    }

    /// `P(t^k)`, valid to order `k * order + k - 1`, kept at `k * order`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let order = k * self.order();
        let mut c = vec![Q::zero(); order + 1];
        for (d, x) in self.coeffs.iter().enumerate() {
            c[k * d] = x.clone();
        }
        TruncatedSeries { coeffs: c }
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(invalid!("series with zero constant term is not invertible"));
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out: Vec<Q> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for d in 1..=n {
            let mut acc = Q::zero();
            for j in 1..=d {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[d - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn is_nonpositive(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_positive())
    }

    pub fn odd_part_vanishes(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    /// Integer coefficients, or an error naming the first non-integral degree.
    pub fn to_i64s(&self) -> Result<Vec<i64>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(d, c)| {
                to_i64(c).ok_or_else(|| {
                    Error::Check(format!("coefficient of t^{d} is not an integer: {}", fmt_q(c)))
                })
            })
            .collect()
    }

    /// Coefficients at even degrees only.
    pub fn even_coeffs(&self) -> Vec<Q> {
        self.coeffs.iter().step_by(2).cloned().collect()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let body = match d {
                0 => fmt_q(&a),
                _ => {
                    let mono = if d == 1 { "t".to_string() } else { format!("t^{d}") };
                    if a.is_one() {
                        mono
                    } else {
                        format!("{}{}", fmt_q(&a), mono)
                    }
                }
            };
            write!(f, "{body}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " mod t^{}", self.order() + 1)
    }
}

fn zip_min<'a>(a: &'a TruncatedSeries, b: &'a TruncatedSeries) -> (usize, &'a [Q], &'a [Q]) {
    let o = a.order().min(b.order());
    (o, &a.coeffs[..=o], &b.coeffs[..=o])
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let (_, a, b) = zip_min(self, rhs);
        TruncatedSeries { coeffs: a.iter().zip(b).map(|(x, y)| x + y).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let (_, a, b) = zip_min(self, rhs);
        TruncatedSeries { coeffs: a.iter().zip(b).map(|(x, y)| x - y).collect() }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let (o, a, b) = zip_min(self, rhs);
        let mut c = vec![Q::zero(); o + 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[..=o - i].iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        TruncatedSeries { coeffs: c }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[derive(Serialize, Deserialize)]
struct SeriesWire {
    order: usize,
    terms: Vec<(usize, serde_json::Value, serde_json::Value)>,
}

fn int_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

fn int_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| (d, int_to_json(c.numer()), int_to_json(c.denom())))
            .collect();
        SeriesWire { order: self.order(), terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = SeriesWire::deserialize(d)?;
        let mut s = TruncatedSeries::zero(w.order);
        for (deg, n, den) in w.terms {
            let n = int_from_json(&n).ok_or_else(|| D::Error::custom("bad numerator"))?;
            let den = int_from_json(&den).ok_or_else(|| D::Error::custom("bad denominator"))?;
            if den.is_zero() || deg > w.order {
                return Err(D::Error::custom("term out of range or zero denominator"));
            }
            s.coeffs[deg] = Q::new(n, den);
        }
        Ok(s)
    }
}

/// `prod (1 - t^k)^(-e)` truncated at `order`.
pub fn gf_expand(factors: &[(usize, usize)], order: usize) -> Result<TruncatedSeries> {
    let mut out = vec![BigInt::zero(); order + 1];
    out[0] = BigInt::one();
    for &(k, e) in factors {
        if k == 0 || e == 0 {
            return Err(invalid!("generating-function factor needs k >= 1 and e >= 1, got ({k},{e})"));
        }
        // multiplying by 1/(1-t^k) is a running sum with stride k
        for _ in 0..e {
            for d in k..=order {
                let prev = out[d - k].clone();
                out[d] += prev;
            }
        }
    }
    Ok(TruncatedSeries { coeffs: out.into_iter().map(Q::from_integer).collect() })
}

/// Poincare polynomial of complex projective space of dimension `n`, truncated.
pub fn projective_space(n: usize, order: usize) -> TruncatedSeries {
    let mut c = vec![Q::zero(); order + 1];
    for j in 0..=n {
        if 2 * j <= order {
            c[2 * j] = Q::one();
        }
    }
    TruncatedSeries { coeffs: c }
}

/// `sum c_i t^{s_i} S_i`; the result is valid up to the least `order(S_i) + s_i`.
pub fn lincomb(terms: &[(Q, usize, &TruncatedSeries)]) -> Result<TruncatedSeries> {
    let order = terms
        .iter()
        .map(|(_, s, x)| x.order() + s)
        .min()
        .ok_or_else(|| invalid!("lincomb needs at least one term"))?;
    let mut acc = TruncatedSeries::zero(order);
    for (c, s, x) in terms {
        for (d, v) in x.coeffs.iter().enumerate() {
            if d + s > order {
                break;
            }
            if !v.is_zero() {
                acc.coeffs[d + s] += c * v;
            }
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BettiTable {
    complex_dim: usize,
    // indices 0..=2n
    betti: Vec<i64>,
}

impl BettiTable {
    pub fn new(complex_dim: usize, betti: Vec<i64>) -> Result<Self> {
        if betti.len() != 2 * complex_dim + 1 {
            return Err(invalid!(
                "Betti table of complex dimension {complex_dim} needs {} entries, got {}",
                2 * complex_dim + 1,
                betti.len()
            ));
        }
        Ok(BettiTable { complex_dim, betti })
    }

    /// Table with the given even-degree Betti numbers and vanishing odd ones.
    pub fn from_even(even: &[i64]) -> Result<Self> {
        if even.is_empty() {
            return Err(invalid!("empty Betti table"));
        }
        let n = even.len() - 1;
        let mut b = vec![0; 2 * n + 1];
        for (i, &v) in even.iter().enumerate() {
            b[2 * i] = v;
        }
        Self::new(n, b)
    }

    pub fn point() -> Self {
        BettiTable { complex_dim: 0, betti: vec![1] }
    }

    pub fn complex_dim(&self) -> usize {
        self.complex_dim
    }

    pub fn betti(&self) -> &[i64] {
        &self.betti
    }

    pub fn even(&self) -> Vec<i64> {
        self.betti.iter().step_by(2).copied().collect()
    }

    pub fn odd(&self) -> Vec<i64> {
        self.betti.iter().skip(1).step_by(2).copied().collect()
    }

    pub fn odd_vanishes(&self) -> bool {
        self.odd().iter().all(|&b| b == 0)
    }

    /// Connected spaces have `b_0 = 1`; this is a flag, not an invariant.
    pub fn is_connected(&self) -> bool {
        self.betti[0] == 1
    }

    pub fn poincare(&self) -> TruncatedSeries {
        TruncatedSeries::from_ints(&self.betti, 2 * self.complex_dim)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(j, b)| if j % 2 == 0 { *b } else { -*b })
            .sum()
    }

    /// Kunneth product.
    pub fn product(&self, other: &BettiTable) -> BettiTable {
        let n = self.complex_dim + other.complex_dim;
        let mut b = vec![0i64; 2 * n + 1];
        for (i, x) in self.betti.iter().enumerate() {
            for (j, y) in other.betti.iter().enumerate() {
                b[i + j] += x * y;
            }
        }
        BettiTable { complex_dim: n, betti: b }
    }

    /// Reads a duality-complete polynomial of degree `2n` as a table.
    pub fn from_polynomial(p: &TruncatedSeries, complex_dim: usize) -> Result<Self> {
        let top = 2 * complex_dim;
        if p.order() < top {
            return Err(invalid!("polynomial known only to t^{}, need t^{top}", p.order()));
        }
        if p.coeffs()[top + 1..].iter().any(|c| !c.is_zero()) {
            return Err(invalid!("polynomial has terms above degree {top}"));
        }
        Self::new(complex_dim, p.truncate(top)?.to_i64s()?)
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if self.odd_vanishes() {
            write!(f, "({})", show(&self.even()))
        } else {
            write!(f, "even ({}) odd ({})", show(&self.even()), show(&self.odd()))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TableWire {
    complex_dim: usize,
    even: Vec<i64>,
    odd: Vec<i64>,
}

impl Serialize for BettiTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableWire { complex_dim: self.complex_dim, even: self.even(), odd: self.odd() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = TableWire::deserialize(d)?;
        let n = w.complex_dim;
        if w.even.len() != n + 1 || w.odd.len() != n {
            return Err(D::Error::custom("even/odd lists do not match complex_dim"));
        }
        let mut b = vec![0; 2 * n + 1];
        for (i, v) in w.even.iter().enumerate() {
            b[2 * i] = *v;
        }
        for (i, v) in w.odd.iter().enumerate() {
            b[2 * i + 1] = *v;
        }
        Ok(BettiTable { complex_dim: n, betti: b })
    }
}

/// Completes a prefix known through degree `n` to a Poincare-symmetric table of dimension `n`.
pub fn duality_complete(prefix: &TruncatedSeries, n: usize) -> Result<BettiTable> {
    if prefix.order() < n {
        return Err(invalid!(
            "prefix known only to t^{}, need t^{n} for complex dimension {n}",
            prefix.order()
        ));
    }
    let low = prefix.truncate(n)?.to_i64s()?;
    let mut b = vec![0i64; 2 * n + 1];
    for j in 0..=n {
        b[j] = low[j];
        b[2 * n - j] = low[j];
    }
    // coefficients beyond n that the prefix does know must agree with the mirror
    for d in n + 1..=prefix.order() {
        let expected = if d <= 2 * n { qi(b[d]) } else { Q::zero() };
        let got = &prefix.coeffs()[d];
        if *got != expected {
            return Err(Error::Check(format!(
                "prefix coefficient {} at t^{d} breaks duality (mirror value {})",
                fmt_q(got),
                fmt_q(&expected)
            )));
        }
    }
    BettiTable::new(n, b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DualityViolation {
    Negative { degree: usize, value: i64 },
    Asymmetric { low: usize, high: usize, low_value: i64, high_value: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub passed: bool,
    pub first_violation: Option<DualityViolation>,
}

/// Structured duality and nonnegativity check; never fails.
pub fn duality_check(table: &BettiTable) -> DualityReport {
    let n2 = 2 * table.complex_dim;
    for j in 0..=n2 {
        let b = table.betti[j];
        if b < 0 {
            return DualityReport {
                passed: false,
                first_violation: Some(DualityViolation::Negative { degree: j, value: b }),
            };
        }
        if j < n2 - j && b != table.betti[n2 - j] {
            return DualityReport {
                passed: false,
                first_violation: Some(DualityViolation::Asymmetric {
                    low: j,
                    high: n2 - j,
                    low_value: b,
                    high_value: table.betti[n2 - j],
                }),
            };
        }
    }
    DualityReport { passed: true, first_violation: None }
}

/// Parses `1 + t^2 - 3/2t^4 + 2*t^6`.
pub fn parse_polynomial(text: &str, order: usize) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::zero(order);
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.strip_prefix('+').unwrap_or(&term)),
        };
        let (coef, deg) = match body.find('t') {
            None => (crate::rational::parse_q(body)?, 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let c = if c.is_empty() { Q::one() } else { crate::rational::parse_q(c)? };
                let rest = &body[pos + 1..];
                let d = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|r| r.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent in term {term:?}")))?
                };
                (c, d)
            }
        };
        if deg <= order {
            s.coeffs[deg] += coef * qi(sign);
        }
    }
    Ok(s)
}
