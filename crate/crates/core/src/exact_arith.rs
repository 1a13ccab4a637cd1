//! Exact scalars: arbitrary-precision rationals and elements of cyclotomic
//! fields `Q(zeta_N)`.
//!
//! A [`Cyclotomic`] of order `N` is stored in the power basis
//! `1, zeta, ..., zeta^(phi(N)-1)` reduced modulo the `N`-th cyclotomic
//! polynomial, so two elements of the same order are equal exactly when
//! their coefficient vectors agree. Elements of different orders are
//! promoted to the field of order `lcm(M, N)` before combining.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Ascending integer coefficients of the `n`-th cyclotomic polynomial.
///
/// Computed by exact division of `x^n - 1` by the product of `Phi_d` over the
/// proper divisors `d` of `n`.
///
/// # Panics
/// Panics if `n == 0`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    phi_cached(n).as_ref().clone()
}

fn phi_cached(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &phi_cached(d));
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// Exact quotient of integer polynomials, the divisor being monic.
fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dc) in den.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

pub fn euler_phi(n: u64) -> usize {
    phi_cached(n).len() - 1
}

/// Reduce a raw polynomial in `zeta_N` to the canonical residue mod `Phi_N`.
fn reduce(order: u64, raw: Vec<Rational>) -> Vec<Rational> {
    let n = order as usize;
    let phi = phi_cached(order);
    let deg = phi.len() - 1;
    // zeta^N = 1 first, so the long division below runs over at most N terms.
    let mut folded = vec![Rational::zero(); n.max(deg)];
    for (i, c) in raw.into_iter().enumerate() {
        if !c.is_zero() {
            folded[i % n] += c;
        }
    }
    for i in (deg..folded.len()).rev() {
        if folded[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut folded[i]);
        let shift = i - deg;
        for (j, &pc) in phi.iter().enumerate().take(deg) {
            if pc != 0 {
                folded[shift + j] -= &c * BigInt::from(pc);
            }
        }
    }
    folded.truncate(deg);
    folded
}

/// Element of the cyclotomic field `Q(zeta_order)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![r] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// Build an element from raw power-basis coefficients (any length); the
    /// result is reduced modulo `Phi_order`.
    pub fn from_coeffs(order: u64, raw: Vec<Rational>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Cyclotomic { order, coeffs: reduce(order, raw) }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// True when every non-constant coefficient vanishes.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Embed into `Q(zeta_target)` using `zeta_order = zeta_target^(target/order)`.
    /// Rational elements embed into every order.
    pub fn promote(&self, target: u64) -> Cyclotomic {
        if target == self.order {
            return self.clone();
        }
        if self.is_rational() {
            let mut coeffs = vec![Rational::zero(); euler_phi(target)];
            coeffs[0] = self.coeffs[0].clone();
            return Cyclotomic { order: target, coeffs };
        }
        assert!(
            target.is_multiple_of(self.order),
            "cannot promote order {} to {}",
            self.order,
            target
        );
        let step = (target / self.order) as usize;
        let mut raw = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        Cyclotomic::from_coeffs(target, raw)
    }

    /// Collapse to order 1 when the value is rational; otherwise unchanged.
    pub fn simplify(self) -> Cyclotomic {
        if self.order != 1 && self.is_rational() {
            Cyclotomic::from_rational(self.coeffs[0].clone())
        } else {
            self
        }
    }

    fn common_order(a: &Cyclotomic, b: &Cyclotomic) -> u64 {
        if a.order == b.order || b.is_rational() {
            a.order
        } else if a.is_rational() {
            b.order
        } else {
            a.order.lcm(&b.order)
        }
    }

    pub fn scale(&self, r: &Rational) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on the
    /// representative polynomial and `Phi_order` over `Q`.
    pub fn inverse(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            let inv = self.coeffs[0].recip();
            let mut coeffs = vec![Rational::zero(); self.coeffs.len()];
            coeffs[0] = inv;
            return Ok(Cyclotomic { order: self.order, coeffs });
        }
        let modulus: Vec<Rational> = phi_cached(self.order)
            .iter()
            .map(|&c| int(c))
            .collect();
        // invariant: s * a == r (mod modulus)
        let (mut r0, mut r1) = (modulus, trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since Phi_N is irreducible and self != 0.
        debug_assert!(!r1.is_empty(), "cyclotomic gcd vanished");
        let c = r1[0].recip();
        let raw = s1.into_iter().map(|x| x * &c).collect();
        Ok(Cyclotomic::from_coeffs(self.order, raw))
    }

    /// Complex conjugation `zeta -> zeta^(N-1)`.
    pub fn conj(&self) -> Cyclotomic {
        let n = self.order as usize;
        let mut raw = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[(n - i) % n] += c;
        }
        Cyclotomic::from_coeffs(self.order, raw)
    }

    pub fn pow(&self, e: u64) -> Cyclotomic {
        let mut acc = Cyclotomic::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The constant coefficient, provided the element lies in `Q`.
    pub fn to_rational(&self) -> Result<Rational> {
        if self.is_rational() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotRational {
                order: self.order,
                coeffs: self
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(i, c)| *i > 0 && !c.is_zero())
                    .map(|(i, c)| (i, c.to_string()))
                    .collect(),
            })
        }
    }
}

/// `zeta_n^k` reduced mod `Phi_n`.
pub fn root_of_unity(n: u64, k: i64) -> Cyclotomic {
    assert!(n >= 1, "root of unity of order 0");
    let e = k.rem_euclid(n as i64) as usize;
    let mut raw = vec![Rational::zero(); e + 1];
    raw[e] = Rational::one();
    Cyclotomic::from_coeffs(n, raw)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let order = Cyclotomic::common_order(self, other);
        if self.order == order && other.order == order {
            return self.coeffs == other.coeffs;
        }
        if self.is_rational() && other.is_rational() {
            return self.coeffs[0] == other.coeffs[0];
        }
        self.promote(order).coeffs == other.promote(order).coeffs
    }
}

impl Eq for Cyclotomic {}

impl From<Rational> for Cyclotomic {
    fn from(r: Rational) -> Self {
        Cyclotomic::from_rational(r)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Cyclotomic::from_int(n)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let order = Cyclotomic::common_order(self, rhs);
        let a = self.promote(order);
        let b = rhs.promote(order);
        Cyclotomic {
            order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if rhs.is_rational() {
            return self.scale(&rhs.coeffs[0]);
        }
        if self.is_rational() {
            return rhs.scale(&self.coeffs[0]);
        }
        let order = Cyclotomic::common_order(self, rhs);
        let a = self.promote(order);
        let b = rhs.promote(order);
        let mut raw = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        Cyclotomic::from_coeffs(order, raw)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

/// `[N; c0, c1, ...]`, or the bare rational when the value lies in `Q`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.coeffs[0]);
        }
        write!(f, "[{};", self.order)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{c}")?;
        }
        write!(f, "]")
    }
}

// Dense univariate helpers over Q for the extended Euclidean algorithm.
// Polynomials are ascending coefficient vectors without trailing zeros.

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].recip();
    if rem.len() < b.len() {
        return (Vec::new(), trim(rem));
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] * &lead;
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                rem[i + j] -= &c * bc;
            }
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    Rational::from_integer(acc)
}

/// `C(n, k)` for `n >= 0`, as an integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Integer value of a rational, or an error carrying its printed form.
pub fn to_integer(r: &Rational) -> Result<BigInt> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::NotInteger(r.to_string()))
    }
}
