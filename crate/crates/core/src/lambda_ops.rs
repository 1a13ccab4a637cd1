//! Lambda-ring operations on Chern characters.
//!
//! Everything is expressed through `ch` alone: Adams operations scale the
//! degree-`k` part by `m^k`, which yields the power sums of the exponential
//! Chern roots, and Newton's identities turn those into exterior powers.

use crate::error::{Error, Result};
use crate::exact_arith::{int, Cyclotomic, Rational};
use crate::series::{exp_nilpotent, GradedPoly, Ring};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

/// Chern character of a (possibly virtual) bundle; the constant term is the rank.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernCharacter {
    value: GradedPoly,
}

impl ChernCharacter {
    pub fn new(value: GradedPoly) -> Self {
        ChernCharacter { value }
    }

    /// `ch` of a line bundle with first Chern class `c1`.
    pub fn line_bundle(c1: &GradedPoly) -> Result<Self> {
        Ok(ChernCharacter { value: exp_nilpotent(c1)? })
    }

    /// The trivial bundle of rank `r`.
    pub fn trivial(ring: &Ring, r: i64) -> Self {
        ChernCharacter { value: GradedPoly::from_rational(ring, int(r)) }
    }

    /// `ch(T P^n) = (n+1) e^H - 1` from the Euler sequence, `H = x_var`.
    pub fn tangent_projective(ring: &Ring, var: usize, n: u32) -> Self {
        let h = GradedPoly::variable(ring, var);
        let e = exp_nilpotent(&h).expect("H is nilpotent");
        let value = &e.scale_rational(&int(n as i64 + 1)) - &GradedPoly::one(ring);
        ChernCharacter { value }
    }

    pub fn value(&self) -> &GradedPoly {
        &self.value
    }

    pub fn into_value(self) -> GradedPoly {
        self.value
    }

    pub fn rank(&self) -> Cyclotomic {
        self.value.constant_term()
    }

    /// Rank as a nonnegative integer, as required of an honest bundle.
    pub fn integer_rank(&self) -> Result<u64> {
        let r = self.rank();
        let q = r.to_rational().map_err(|_| Error::NonIntegerRank(r.to_string()))?;
        if !q.is_integer() || q.is_negative() {
            return Err(Error::NonIntegerRank(q.to_string()));
        }
        q.to_integer()
            .to_u64()
            .ok_or_else(|| Error::NonIntegerRank(q.to_string()))
    }

    pub fn add(&self, other: &ChernCharacter) -> ChernCharacter {
        ChernCharacter { value: &self.value + &other.value }
    }

    /// `ch` of the tensor product.
    pub fn tensor(&self, other: &ChernCharacter) -> ChernCharacter {
        ChernCharacter { value: &self.value * &other.value }
    }
}

/// Component carrying a single eigenvalue of the twisting element.
#[derive(Clone, Debug)]
pub struct EigenSummand {
    pub base: ChernCharacter,
    pub eigenvalue: Cyclotomic,
}

/// `ch(psi^m E)`: the degree-`k` part is scaled by `m^k`.
pub fn adams(c: &ChernCharacter, m: i64) -> ChernCharacter {
    let m = BigInt::from(m);
    ChernCharacter {
        value: c.value.scale_by_degree(|k| Rational::from_integer(m.pow(k))),
    }
}

/// `ch(E*)`: odd-degree parts change sign.
pub fn dualize(c: &ChernCharacter) -> ChernCharacter {
    adams(c, -1)
}

/// `ch(Lambda^p E)` through Newton's identities
/// `e_q = (1/q) sum_{j=1..q} (-1)^{j-1} e_{q-j} psi^j`.
pub fn exterior_power_ch(c: &ChernCharacter, p: usize) -> Result<ChernCharacter> {
    Ok(exterior_powers(c, p)?.pop().expect("at least e_0"))
}

/// `[ch(Lambda^0 E), ..., ch(Lambda^p E)]`.
pub fn exterior_powers(c: &ChernCharacter, p: usize) -> Result<Vec<ChernCharacter>> {
    let rank = c.integer_rank()?;
    if p as u64 > rank {
        return Err(Error::RankTooSmall { rank: rank as i64, power: p });
    }
    let ring = c.value.ring().clone();
    let power_sums: Vec<GradedPoly> = (1..=p).map(|j| adams(c, j as i64).value).collect();
    let mut e: Vec<GradedPoly> = vec![GradedPoly::one(&ring)];
    for q in 1..=p {
        let mut acc = GradedPoly::zero(&ring);
        for j in 1..=q {
            let term = &e[q - j] * &power_sums[j - 1];
            acc = if j % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale_rational(&Rational::new(1.into(), (q as i64).into())));
    }
    Ok(e.into_iter().map(ChernCharacter::new).collect())
}

/// `lambda_{-1}(E*) = sum_p (-1)^p Lambda^p E*` for an honest bundle `E`.
pub fn lambda_minus_one_dual(c: &ChernCharacter) -> Result<ChernCharacter> {
    let r = c.integer_rank()? as usize;
    let ring = c.value.ring().clone();
    let mut acc = GradedPoly::zero(&ring);
    for (p, ext) in exterior_powers(&dualize(c), r)?.into_iter().enumerate() {
        acc = if p % 2 == 0 { &acc + &ext.value } else { &acc - &ext.value };
    }
    Ok(ChernCharacter::new(acc))
}

/// `ch(t_h lambda_{-1}(N*))` for `N = sum_j E_j (x) chi_j`, where `chi_j(h)`
/// is the summand's eigenvalue `zeta_j`:
/// `prod_j sum_p (-zeta_j^{-1})^p ch(Lambda^p E_j*)`.
pub fn twisted_euler_class(ring: &Ring, summands: &[EigenSummand]) -> Result<ChernCharacter> {
    let mut out = GradedPoly::one(ring);
    for s in summands {
        let r = s.base.integer_rank()? as usize;
        let twist = -&s.eigenvalue.inverse()?;
        let mut factor = GradedPoly::zero(ring);
        let mut coeff = Cyclotomic::one();
        for ext in exterior_powers(&dualize(&s.base), r)? {
            factor = &factor + &ext.value.scale(&coeff);
            coeff = &coeff * &twist;
        }
        out = out.checked_mul(&factor)?;
    }
    Ok(ChernCharacter::new(out))
}
