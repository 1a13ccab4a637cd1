//! Truncated multivariate polynomial rings `K[x_1..x_r] / (x_i^{b_i})` with
//! cyclotomic coefficients. These model the rational Chow rings of products of
//! (weighted) projective spaces, where every variable is nilpotent.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_arith::{factorial, int, Cyclotomic, Rational};

/// Variables with their nilpotency bounds (`x^bound = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedRingSpec {
    variables: Vec<String>,
    bounds: Vec<u32>,
}

pub type Ring = Arc<GradedRingSpec>;

impl GradedRingSpec {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, u32)>) -> Ring {
        let (variables, bounds): (Vec<String>, Vec<u32>) =
            vars.into_iter().map(|(v, b)| (v.into(), b)).unzip();
        assert!(bounds.iter().all(|&b| b >= 1), "nilpotency bounds must be positive");
        Arc::new(GradedRingSpec { variables, bounds })
    }

    /// `Q[t] / t^bound`.
    pub fn univariate(name: &str, bound: u32) -> Ring {
        Self::new([(name, bound)])
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn arity(&self) -> usize {
        self.bounds.len()
    }

    /// Largest total degree carrying a nonzero monomial.
    pub fn top_degree(&self) -> u32 {
        self.bounds.iter().map(|b| b - 1).sum()
    }

    fn admits(&self, exps: &[u32]) -> bool {
        exps.len() == self.bounds.len() && exps.iter().zip(&self.bounds).all(|(e, b)| e < b)
    }
}

/// Element of a truncated graded ring. Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct GradedPoly {
    ring: Ring,
    terms: BTreeMap<Vec<u32>, Cyclotomic>,
}

impl GradedPoly {
    pub fn zero(ring: &Ring) -> Self {
        GradedPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, c: Cyclotomic) -> Self {
        let mut p = Self::zero(ring);
        p.insert(vec![0; ring.arity()], c);
        p
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Cyclotomic::one())
    }

    pub fn from_rational(ring: &Ring, r: Rational) -> Self {
        Self::constant(ring, Cyclotomic::from_rational(r))
    }

    /// The generator `x_index`.
    pub fn variable(ring: &Ring, index: usize) -> Self {
        let mut exps = vec![0; ring.arity()];
        exps[index] = 1;
        Self::monomial(ring, exps, Cyclotomic::one())
    }

    /// `c * x^exps`; zero if the exponent vector exceeds a bound.
    pub fn monomial(ring: &Ring, exps: Vec<u32>, c: Cyclotomic) -> Self {
        assert_eq!(exps.len(), ring.arity(), "exponent vector length");
        let mut p = Self::zero(ring);
        if ring.admits(&exps) {
            p.insert(exps, c);
        }
        p
    }

    fn insert(&mut self, exps: Vec<u32>, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Cyclotomic)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Cyclotomic {
        self.coefficient_of(&vec![0; self.ring.arity()])
    }

    /// Stored coefficient of `x^monomial`, zero when absent.
    pub fn coefficient_of(&self, monomial: &[u32]) -> Cyclotomic {
        self.terms.get(monomial).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    /// Coefficient of the top monomial `prod x_i^(b_i - 1)`.
    pub fn top_coefficient(&self) -> Cyclotomic {
        let top: Vec<u32> = self.ring.bounds.iter().map(|b| b - 1).collect();
        self.coefficient_of(&top)
    }

    fn check_ring(&self, other: &GradedPoly) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::SpecMismatch(format!(
                "{:?} vs {:?}",
                self.ring.variables, other.ring.variables
            )))
        }
    }

    pub fn checked_add(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product with truncation: monomials past a nilpotency bound are dropped.
    pub fn checked_mul(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.check_ring(other)?;
        let mut out = GradedPoly::zero(&self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if self.ring.admits(&exps) {
                    out.insert(exps, ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Cyclotomic) -> GradedPoly {
        let mut out = GradedPoly::zero(&self.ring);
        for (e, v) in &self.terms {
            out.insert(e.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> GradedPoly {
        self.scale(&Cyclotomic::from_rational(r.clone()))
    }

    /// Multiply each homogeneous component of total degree `k` by `f(k)`.
    pub fn scale_by_degree(&self, f: impl Fn(u32) -> Rational) -> GradedPoly {
        let mut out = GradedPoly::zero(&self.ring);
        for (e, v) in &self.terms {
            let k: u32 = e.iter().sum();
            out.insert(e.clone(), v.scale(&f(k)));
        }
        out
    }

    /// Homogeneous component of total degree `k`.
    pub fn degree_part(&self, k: u32) -> GradedPoly {
        let mut out = GradedPoly::zero(&self.ring);
        for (e, v) in &self.terms {
            if e.iter().sum::<u32>() == k {
                out.insert(e.clone(), v.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> GradedPoly {
        let mut acc = GradedPoly::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `x` into the univariate series `sum coeffs[k] x^k`;
    /// `x` must be nilpotent (zero constant term) so the sum is finite.
    pub fn compose_series(coeffs: &[Rational], x: &GradedPoly) -> Result<GradedPoly> {
        let c0 = x.constant_term();
        if !c0.is_zero() {
            return Err(Error::NonzeroConstantTerm(c0.to_string()));
        }
        let mut out = GradedPoly::zero(&x.ring);
        let mut power = GradedPoly::one(&x.ring);
        for c in coeffs {
            if power.is_zero() {
                break;
            }
            out = &out + &power.scale_rational(c);
            power = &power * x;
        }
        Ok(out)
    }
}

/// `exp(x)` for nilpotent `x`.
pub fn exp_nilpotent(x: &GradedPoly) -> Result<GradedPoly> {
    let n = x.ring.top_degree() + 1;
    let coeffs: Vec<Rational> = (0..n).map(|k| factorial(k).recip()).collect();
    GradedPoly::compose_series(&coeffs, x)
}

/// Coefficients `b_0..b_{len-1}` of `s / (1 - e^{-s})`, obtained by inverting
/// `(1 - e^{-s}) / s = sum_k (-1)^k s^k / (k+1)!` in `Q[s]/s^len`.
pub fn todd_series(len: u32) -> Vec<Rational> {
    let ring = GradedRingSpec::univariate("s", len.max(1));
    let s = GradedPoly::variable(&ring, 0);
    let mut denom = GradedPoly::zero(&ring);
    let mut power = GradedPoly::one(&ring);
    for k in 0..len {
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        denom = &denom + &power.scale_rational(&(sign / factorial(k + 1)));
        power = &power * &s;
    }
    let inv = invert_unit(&denom).expect("constant term is 1");
    (0..len)
        .map(|k| inv.coefficient_of(&[k]).to_rational().expect("rational series"))
        .collect()
}

/// `x / (1 - e^{-x})` for nilpotent `x`.
pub fn todd_factor(x: &GradedPoly) -> Result<GradedPoly> {
    let coeffs = todd_series(x.ring.top_degree() + 1);
    GradedPoly::compose_series(&coeffs, x)
}

/// Inverse of a polynomial with invertible constant term `c`, computed as
/// `c^{-1} sum_k (1 - p/c)^k`.
pub fn invert_unit(p: &GradedPoly) -> Result<GradedPoly> {
    let c = p.constant_term();
    if c.is_zero() {
        return Err(Error::NotAUnit);
    }
    let c_inv = c.inverse()?;
    let q = &GradedPoly::one(&p.ring) - &p.scale(&c_inv);
    let mut out = GradedPoly::zero(&p.ring);
    let mut power = GradedPoly::one(&p.ring);
    while !power.is_zero() {
        out = &out + &power;
        power = &power * &q;
    }
    Ok(out.scale(&c_inv))
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl<'a> Add<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.checked_add(rhs).expect("ring mismatch in addition")
    }
}

impl<'a> Sub<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.checked_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // graded order: low total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), std::cmp::Reverse((*e).clone())));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let negative = c.is_rational() && c.coeffs()[0] < Rational::zero();
            let c = if negative { -c } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .zip(&self.ring.variables)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{c}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;

    fn t_ring(bound: u32) -> (Ring, GradedPoly) {
        let r = GradedRingSpec::univariate("t", bound);
        let t = GradedPoly::variable(&r, 0);
        (r, t)
    }

    fn poly(ring: &Ring, coeffs: &[Rational]) -> GradedPoly {
        let mut out = GradedPoly::zero(ring);
        for (k, c) in coeffs.iter().enumerate() {
            out = &out
                + &GradedPoly::monomial(ring, vec![k as u32], Cyclotomic::from_rational(c.clone()));
        }
        out
    }

    #[test]
    fn product_in_chow_ring_of_p12() {
        let (r, _) = t_ring(2);
        let a = poly(&r, &[int(1), int(1)]);
        let b = poly(&r, &[int(1), rat(3, 2)]);
        let p = &a * &b;
        assert_eq!(p, poly(&r, &[int(1), rat(5, 2)]));
        assert_eq!(p.coefficient_of(&[1]), Cyclotomic::from_rational(rat(5, 2)));
        assert_eq!(GradedPoly::one(&r).coefficient_of(&[1]), Cyclotomic::zero());
    }

    #[test]
    fn nilpotent_square_vanishes() {
        let (_, x) = t_ring(2);
        assert!((&x * &x).is_zero());
    }

    #[test]
    fn three_hyperplanes() {
        let r = GradedRingSpec::new([("H1", 3), ("H2", 3), ("H3", 3)]);
        let one = GradedPoly::one(&r);
        let h: Vec<_> = (0..3).map(|i| GradedPoly::variable(&r, i)).collect();
        let p = &(&(&one + &h[0]) * &(&one + &h[1])) * &(&one + &h[2]);
        let top = p.degree_part(3);
        assert_eq!(top, GradedPoly::monomial(&r, vec![1, 1, 1], Cyclotomic::one()));
        let sq = (&h[0] + &h[1]).pow(2);
        assert_eq!(sq.coefficient_of(&[1, 1, 0]), Cyclotomic::from_int(2));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let (_, t) = t_ring(2);
        let (_, u) = t_ring(3);
        assert!(matches!(t.checked_mul(&u), Err(Error::SpecMismatch(_))));
        assert!(matches!(t.checked_add(&u), Err(Error::SpecMismatch(_))));
    }

    #[test]
    fn exp_examples() {
        let (r, t) = t_ring(3);
        assert_eq!(exp_nilpotent(&GradedPoly::zero(&r)).unwrap(), GradedPoly::one(&r));
        assert_eq!(exp_nilpotent(&t).unwrap(), poly(&r, &[int(1), int(1), rat(1, 2)]));
        let m = rat(7, 3);
        let e = exp_nilpotent(&t.scale_rational(&m)).unwrap();
        assert_eq!(e, poly(&r, &[int(1), m.clone(), &m * &m / int(2)]));
        let bad = &GradedPoly::one(&r) + &t;
        assert!(matches!(exp_nilpotent(&bad), Err(Error::NonzeroConstantTerm(_))));
    }

    #[test]
    fn todd_examples() {
        let (r2, t2) = t_ring(2);
        assert_eq!(todd_factor(&t2).unwrap(), poly(&r2, &[int(1), rat(1, 2)]));
        let (r3, t3) = t_ring(3);
        assert_eq!(todd_factor(&t3).unwrap(), poly(&r3, &[int(1), rat(1, 2), rat(1, 12)]));
        let two_t = t3.scale_rational(&int(2));
        assert_eq!(todd_factor(&two_t).unwrap(), poly(&r3, &[int(1), int(1), rat(1, 3)]));
        assert!(todd_factor(&GradedPoly::one(&r3)).is_err());
    }

    #[test]
    fn todd_series_bernoulli_values() {
        let b = todd_series(7);
        assert_eq!(b, vec![int(1), rat(1, 2), rat(1, 12), int(0), rat(-1, 720), int(0), rat(1, 30240)]);
    }

    #[test]
    fn invert_unit_examples() {
        let (r, t) = t_ring(3);
        assert_eq!(invert_unit(&GradedPoly::one(&r)).unwrap(), GradedPoly::one(&r));
        let p = &GradedPoly::one(&r) + &t;
        assert_eq!(invert_unit(&p).unwrap(), poly(&r, &[int(1), int(-1), int(1)]));
        let (r2, t2) = t_ring(2);
        let q = &GradedPoly::from_rational(&r2, int(2)) + &t2;
        assert_eq!(invert_unit(&q).unwrap(), poly(&r2, &[rat(1, 2), rat(-1, 4)]));
        assert_eq!(invert_unit(&t), Err(Error::NotAUnit));
    }

    #[test]
    fn display() {
        let (r, t) = t_ring(3);
        let p = &GradedPoly::from_rational(&r, int(9)) + &t.scale_rational(&int(-27));
        assert_eq!(p.to_string(), "9 - 27*t");
    }
}
