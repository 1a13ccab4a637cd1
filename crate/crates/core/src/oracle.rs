//! Brute-force Euler characteristics that need no localization.
//!
//! For nonnegative twists only `H^0` survives on these stacks, so `chi` is a
//! count of invariant sections: weighted monomials of the right degree on
//! `P(w)`, or the group-average of traces on `(P^n)^k`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{binomial, Rational};
use crate::stacks::{PermutationGroup, PermutationQuotientStack, WeightedProjectiveStack};

/// `#{a in Z_{>=0}^{n+1} : sum a_i w_i = l}` by direct enumeration.
pub fn weighted_monomial_count(weights: &[u64], l: i64) -> Result<u64> {
    if l < 0 {
        return Err(Error::InvalidRange { twist: l });
    }
    fn count(weights: &[u64], remaining: u64) -> u64 {
        match weights.split_first() {
            None => u64::from(remaining == 0),
            Some((&w, rest)) => (0..=remaining / w).map(|a| count(rest, remaining - a * w)).sum(),
        }
    }
    Ok(count(weights, l as u64))
}

/// `dim H^0((P^n)^k, O(m)^{⊠k})^G = (1/|G|) sum_g D^{c(g)}` with
/// `D = C(m+n, n)` and `c(g)` the number of cycles of `g`.
pub fn burnside_invariant_dimension(stack: &PermutationQuotientStack, m: i64) -> Result<BigInt> {
    if m < 0 {
        return Err(Error::InvalidRange { twist: m });
    }
    let d = binomial(m as u64 + stack.n() as u64, stack.n() as u64);
    let group = stack.group();
    let sum: BigInt = group.elements().iter().map(|g| d.pow(g.cycle_count() as u32)).sum();
    let order = BigInt::from(group.order());
    debug_assert!((&sum % &order).is_zero(), "Burnside average is not integral");
    Ok(sum / order)
}

/// Degree-`m` monomials in `n + 1` variables, as exponent vectors.
fn monomials(vars: usize, m: u32) -> Vec<Vec<u32>> {
    if vars == 1 {
        return vec![vec![m]];
    }
    (0..=m)
        .rev()
        .flat_map(|a| {
            monomials(vars - 1, m - a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

/// Same dimension counted as the number of `G`-orbits on the monomial basis
/// of `Sym^m(C^{n+1})^{⊗k}`, which `G` permutes. Exponential in `k`; meant for
/// small cross-checks only.
pub fn invariant_dimension_by_orbits(n: u32, group: &PermutationGroup, m: u32) -> u64 {
    let basis = monomials(n as usize + 1, m);
    let k = group.degree();
    let total = basis.len().pow(k as u32);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut orbits = 0;
    for code in 0..total {
        let mut tuple = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            tuple.push(c % basis.len());
            c /= basis.len();
        }
        if seen.contains(&tuple) {
            continue;
        }
        orbits += 1;
        for g in group.elements() {
            let mut image = vec![0; k];
            for (i, &b) in tuple.iter().enumerate() {
                image[g.images()[i]] = b;
            }
            seen.insert(image);
        }
    }
    orbits
}

/// Exact engine/oracle comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    #[serde(serialize_with = "crate::oracle::ser_rational")]
    pub engine: Rational,
    #[serde(serialize_with = "crate::oracle::ser_rational")]
    pub oracle: Rational,
    pub agree: bool,
    pub note: &'static str,
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn compare(engine: Rational, oracle: Rational) -> OracleReport {
    let agree = engine == oracle;
    OracleReport { engine, oracle, agree, note: "oracle valid for twist >= 0" }
}

/// Stacks exercised by `check` and by the acceptance suite.
#[derive(Clone, Debug)]
pub enum BatteryCase {
    Wps(WeightedProjectiveStack),
    Pqs(PermutationQuotientStack),
}

impl std::fmt::Display for BatteryCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BatteryCase::Wps(s) => write!(f, "{s}"),
            BatteryCase::Pqs(s) => write!(f, "{s}"),
        }
    }
}

/// Weighted projective stacks with weights up to `(3,4,5,7)` and permutation
/// quotients up to `S4` on `(P^1)^4`.
pub fn standard_battery() -> Vec<BatteryCase> {
    let weight_lists: &[&[u64]] = &[
        &[1],
        &[1, 1],
        &[1, 2],
        &[2, 3],
        &[4, 6],
        &[1, 1, 1],
        &[1, 1, 2],
        &[1, 2, 3],
        &[2, 2, 3],
        &[1, 3, 5],
        &[3, 4, 5],
        &[1, 1, 1, 1],
        &[3, 4, 5, 7],
    ];
    let mut out: Vec<BatteryCase> = weight_lists
        .iter()
        .map(|w| BatteryCase::Wps(WeightedProjectiveStack::new(w.to_vec()).expect("valid weights")))
        .collect();
    let groups: Vec<(u32, usize, PermutationGroup)> = vec![
        (1, 1, PermutationGroup::trivial(1)),
        (2, 1, PermutationGroup::trivial(1)),
        (1, 2, PermutationGroup::symmetric(2, 2).expect("S2")),
        (2, 2, PermutationGroup::symmetric(2, 2).expect("S2")),
        (3, 2, PermutationGroup::symmetric(2, 2).expect("S2")),
        (1, 3, PermutationGroup::cyclic(3, 3).expect("Z3")),
        (1, 3, PermutationGroup::symmetric(3, 3).expect("S3")),
        (2, 3, PermutationGroup::cyclic(3, 3).expect("Z3")),
        (2, 3, PermutationGroup::symmetric(3, 3).expect("S3")),
        (1, 4, PermutationGroup::cyclic(4, 4).expect("Z4")),
        (1, 4, PermutationGroup::symmetric(4, 4).expect("S4")),
        (2, 4, PermutationGroup::cyclic(2, 4).expect("Z2")),
    ];
    out.extend(groups.into_iter().map(|(n, k, g)| {
        BatteryCase::Pqs(PermutationQuotientStack::new(n, k, g).expect("valid quotient"))
    }));
    out
}
