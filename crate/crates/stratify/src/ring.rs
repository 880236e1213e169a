//! Scalar rings for exact matrix groups: the rationals and the Eisenstein integers.

use std::fmt::{self, Debug};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, qi, Q};

/// Commutative ring with an exact embedding into `Q(omega)` and a complex conjugation.
pub trait Ring: Clone + Eq + Ord + Hash + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn to_q_omega(&self) -> QOmega;
    /// Stable text form, round-tripped by `decode`.
    fn encode(&self) -> String;
    fn decode(s: &str) -> Result<Self>;
}

impl Ring for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn to_q_omega(&self) -> QOmega {
        QOmega::new(self.clone(), Zero::zero())
    }
    fn encode(&self) -> String {
        fmt_q(self)
    }
    fn decode(s: &str) -> Result<Self> {
        parse_q(s)
    }
}

/// `a + b*omega` with `omega^2 + omega + 1 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EisInt {
    pub a: i64,
    pub b: i64,
}

impl EisInt {
    pub const ZERO: EisInt = EisInt { a: 0, b: 0 };
    pub const ONE: EisInt = EisInt { a: 1, b: 0 };
    pub const OMEGA: EisInt = EisInt { a: 0, b: 1 };
    /// `omega - omega^2 = 1 + 2 omega`, of norm 3.
    pub const THETA: EisInt = EisInt { a: 1, b: 2 };

    pub const fn new(a: i64, b: i64) -> Self {
        EisInt { a, b }
    }

    pub fn conj(self) -> Self {
        EisInt { a: self.a - self.b, b: -self.b }
    }

    /// `|a + b omega|^2 = a^2 - ab + b^2`.
    pub fn norm(self) -> i64 {
        self.a * self.a - self.a * self.b + self.b * self.b
    }

    /// Real part `a - b/2`, doubled to stay integral.
    pub fn twice_re(self) -> i64 {
        2 * self.a - self.b
    }

    /// Exact quotient, or `None` when `other` does not divide `self`.
    pub fn div_exact(self, other: EisInt) -> Option<EisInt> {
        let n = other.norm();
        if n == 0 {
            return None;
        }
        let p = self * other.conj();
        (p.a % n == 0 && p.b % n == 0).then(|| EisInt::new(p.a / n, p.b / n))
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// Quotient rounded coordinatewise; the remainder has norm below that of `other`.
    pub fn div_round(self, other: EisInt) -> EisInt {
        let n = other.norm();
        let p = self * other.conj();
        let round = |x: i64| (2 * x + n).div_euclid(2 * n);
        EisInt::new(round(p.a), round(p.b))
    }

    /// The associate with argument in `[0, pi/3)`, i.e. `a > b >= 0`; zero stays zero.
    pub fn normalized(self) -> EisInt {
        let mut x = self;
        for _ in 0..6 {
            if x.a > x.b && x.b >= 0 {
                return x;
            }
            x = x * EisInt::new(1, 1);
        }
        x
    }

    /// Normalized generator of the ideal `(self, other)`.
    pub fn gcd(self, other: EisInt) -> EisInt {
        let (mut x, mut y) = (self, other);
        while y != EisInt::ZERO {
            let r = x - x.div_round(y) * y;
            x = y;
            y = r;
        }
        x.normalized()
    }
}

impl Add for EisInt {
    type Output = EisInt;
    fn add(self, o: EisInt) -> EisInt {
        EisInt::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for EisInt {
    type Output = EisInt;
    fn sub(self, o: EisInt) -> EisInt {
        EisInt::new(self.a - o.a, self.b - o.b)
    }
}

impl Mul for EisInt {
    type Output = EisInt;
    fn mul(self, o: EisInt) -> EisInt {
        let bd = self.b * o.b;
        EisInt::new(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)
    }
}

impl Neg for EisInt {
    type Output = EisInt;
    fn neg(self) -> EisInt {
        EisInt::new(-self.a, -self.b)
    }
}

impl fmt::Display for EisInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}w"),
            (a, b) if b < 0 => write!(f, "{a}{b}w"),
            (a, b) => write!(f, "{a}+{b}w"),
        }
    }
}

impl Ring for EisInt {
    fn zero() -> Self {
        EisInt::ZERO
    }
    fn one() -> Self {
        EisInt::ONE
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
    fn conj(&self) -> Self {
        EisInt::conj(*self)
    }
    fn to_q_omega(&self) -> QOmega {
        QOmega::new(qi(self.a), qi(self.b))
    }
    fn encode(&self) -> String {
        format!("{},{}", self.a, self.b)
    }
    fn decode(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not an Eisenstein integer: {s:?}"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        Ok(EisInt::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
    }
}

/// Element `a + b*omega` of the field `Q(omega)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QOmega {
    pub a: Q,
    pub b: Q,
}

impl QOmega {
    pub fn new(a: Q, b: Q) -> Self {
        QOmega { a, b }
    }

    pub fn zero() -> Self {
        QOmega::new(qi(0), qi(0))
    }

    pub fn one() -> Self {
        QOmega::new(qi(1), qi(0))
    }

    pub fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }

    pub fn add(&self, o: &Self) -> Self {
        QOmega::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        QOmega::new(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let bd = &self.b * &o.b;
        QOmega::new(&self.a * &o.a - &bd, &self.a * &o.b + &self.b * &o.a - &bd)
    }

    pub fn scale(&self, c: &Q) -> Self {
        QOmega::new(&self.a * c, &self.b * c)
    }

    pub fn conj(&self) -> Self {
        QOmega::new(&self.a - &self.b, -&self.b)
    }

    /// The rational value, if the omega part vanishes.
    pub fn as_rational(&self) -> Option<Q> {
        Zero::is_zero(&self.b).then(|| self.a.clone())
    }
}

pub type Mat<T> = Vec<Vec<T>>;

pub fn identity<T: Ring>(n: usize) -> Mat<T> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

pub fn mat_mul<T: Ring>(x: &Mat<T>, y: &Mat<T>) -> Mat<T> {
    let n = x.len();
    let m = y.first().map_or(0, Vec::len);
    let inner = y.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = T::zero();
                    for k in 0..inner {
                        if !x[i][k].is_zero() && !y[k][j].is_zero() {
                            acc = acc.add(&x[i][k].mul(&y[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<T: Ring>(x: &Mat<T>, v: &[T]) -> Vec<T> {
    x.iter()
        .map(|row| row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b))))
        .collect()
}

/// Conjugate transpose.
pub fn adjoint<T: Ring>(x: &Mat<T>) -> Mat<T> {
    let n = x.len();
    let m = x.first().map_or(0, Vec::len);
    (0..m).map(|j| (0..n).map(|i| x[i][j].conj()).collect()).collect()
}

pub fn is_square<T>(x: &Mat<T>) -> bool {
    x.iter().all(|r| r.len() == x.len())
}

/// Coefficients `[1, c1, ..., cn]` of `det(x I - M)`, by the division-free Berkowitz recursion.
pub fn charpoly<T: Ring>(m: &Mat<T>) -> Vec<T> {
    let n = m.len();
    if n == 0 {
        return vec![T::one()];
    }
    if n == 1 {
        return vec![T::one(), m[0][0].neg()];
    }
    let a = &m[0][0];
    let row: Vec<T> = m[0][1..].to_vec();
    let col: Vec<T> = m[1..].iter().map(|r| r[0].clone()).collect();
    let sub: Mat<T> = m[1..].iter().map(|r| r[1..].to_vec()).collect();
    // first column of the Toeplitz factor: 1, -a, -R C, -R A C, ...
    let mut diags = vec![T::one(), a.neg()];
    let mut v = col;
    for k in 0..n - 1 {
        let rv = row.iter().zip(&v).fold(T::zero(), |acc, (x, y)| acc.add(&x.mul(y)));
        diags.push(rv.neg());
        if k + 1 < n - 1 {
            v = mat_vec(&sub, &v);
        }
    }
    let inner = charpoly(&sub);
    (0..=n)
        .map(|i| {
            (0..n.min(i + 1)).fold(T::zero(), |acc, j| acc.add(&diags[i - j].mul(&inner[j])))
        })
        .collect()
}

pub fn determinant<T: Ring>(m: &Mat<T>) -> T {
    let c = charpoly(m);
    let d = c.last().cloned().unwrap_or_else(T::one);
    if m.len() % 2 == 1 {
        d.neg()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    /// Leibniz expansion, used only as an oracle.
    fn leibniz<T: Ring>(m: &Mat<T>) -> T {
        let n = m.len();
        let perms = crate::strata::all_permutations(n);
        let mut acc = T::zero();
        for p in perms {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            let mut term = T::one();
            for (i, &pi) in p.iter().enumerate() {
                term = term.mul(&m[i][pi]);
            }
            acc = if inv % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    #[test]
    fn eisenstein_gcd() {
        let three = EisInt::new(3, 0);
        assert_eq!(EisInt::THETA.gcd(three), EisInt::THETA.normalized());
        assert_eq!(three.gcd(EisInt::new(6, 9)), three);
        assert_eq!(EisInt::new(0, 3).gcd(EisInt::new(-3, -3)), three);
        assert_eq!(EisInt::new(2, 0).gcd(three), EisInt::ONE);
        for x in [EisInt::new(5, -7), EisInt::new(-2, 3), EisInt::OMEGA] {
            let n = x.normalized();
            assert!(n.a > n.b && n.b >= 0);
            assert!((n.div_exact(x).unwrap()).is_unit());
        }
    }

    #[test]
    fn eisenstein_arithmetic() {
        let w = EisInt::OMEGA;
        assert_eq!(w * w * w, EisInt::ONE);
        assert_eq!(w * w + w + EisInt::ONE, EisInt::ZERO);
        assert_eq!(EisInt::THETA.norm(), 3);
        assert_eq!(EisInt::THETA * EisInt::THETA.conj(), EisInt::new(3, 0));
        assert_eq!((EisInt::ONE - w) * EisInt::THETA, EisInt::new(3, 3));
        assert_eq!(EisInt::new(3, 3).div_exact(EisInt::ONE - w), Some(EisInt::THETA));
        assert_eq!(EisInt::ONE.div_exact(EisInt::THETA), None);
        assert_eq!(EisInt::decode(&EisInt::new(-2, 5).encode()).unwrap(), EisInt::new(-2, 5));
    }

    #[test]
    fn charpoly_matches_leibniz() {
        let m: Mat<Q> = vec![
            vec![qi(2), qi(-1), q(1, 2), qi(0)],
            vec![qi(3), qi(0), qi(1), qi(4)],
            vec![qi(0), qi(5), qi(-2), qi(1)],
            vec![q(-1, 3), qi(1), qi(1), qi(1)],
        ];
        assert_eq!(determinant(&m), leibniz(&m));
        let cp = charpoly(&m);
        assert_eq!(cp[0], qi(1));
        assert_eq!(cp[1], -(qi(2) + qi(0) + qi(-2) + qi(1)));
        let e: Mat<EisInt> = vec![
            vec![EisInt::new(1, 1), EisInt::new(0, 2), EisInt::new(-1, 0)],
            vec![EisInt::new(2, -1), EisInt::new(0, 0), EisInt::new(1, 3)],
            vec![EisInt::new(0, 1), EisInt::new(-2, 1), EisInt::new(1, 0)],
        ];
        assert_eq!(determinant(&e), leibniz(&e));
    }
}
