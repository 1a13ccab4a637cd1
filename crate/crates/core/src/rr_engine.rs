//! Localized Hirzebruch-Riemann-Roch.
//!
//! For a weighted projective stack the Euler characteristic of `xi^l` is a sum
//! over the roots of unity `h` with nonempty fixed locus `P(w_I)`:
//!
//! ```text
//! chi = sum_h  h^l * deg[ e^{lt} * Td(P(w_I)) / ch(t_h lambda_{-1}(N*)) ]
//! ```
//!
//! where `deg` reads the top coefficient of `Q(zeta)[t]/t^{|I|}` and divides
//! by `prod_{i in I} w_i`. For `[(P^n)^k / G]` the sum runs over group
//! elements with weight `1/|G|`; the fixed locus of `g` is a product of
//! diagonals, one `P^n` per cycle.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::exact_arith::{factorial, int, to_integer, Cyclotomic, Rational};
use crate::lambda_ops::{twisted_euler_class, ChernCharacter, EigenSummand};
use crate::series::{exp_nilpotent, invert_unit, todd_factor, GradedPoly, GradedRingSpec, Ring};
use crate::stacks::{
    fixed_data_pqs, fixed_data_wps, sectors_pqs, support_wps, Permutation, PermutationQuotientStack,
    PqsSector, Sector, WeightedProjectiveStack, WpsSector,
};

/// One localization summand.
#[derive(Clone, Debug)]
pub struct SectorContribution {
    pub sector: Sector,
    pub value: Cyclotomic,
    pub integrand: Option<GradedPoly>,
}

/// `deg` on `P(w)`: the coefficient of `t^{dim}` divided by `prod w_i`.
pub fn integrate_wps(p: &GradedPoly, fixed_weights: &[u64]) -> Cyclotomic {
    let top = p.ring().bounds()[0] - 1;
    debug_assert_eq!(top as usize + 1, fixed_weights.len());
    let prod: u64 = fixed_weights.iter().product();
    p.coefficient_of(&[top]).scale(&Rational::new(BigInt::one(), BigInt::from(prod)))
}

/// `prod_i todd(w_i t)`, the Todd class of `P(w)` from its Euler sequence.
fn todd_wps(ring: &Ring, weights: &[u64]) -> Result<GradedPoly> {
    let t = GradedPoly::variable(ring, 0);
    let mut out = GradedPoly::one(ring);
    for &w in weights {
        out = &out * &todd_factor(&t.scale_rational(&int(w as i64)))?;
    }
    Ok(out)
}

/// `Td(fixed) / ch(t_h lambda_{-1}(N*))` on the fixed sub-stack of `sector`.
fn wps_localized_todd(stack: &WeightedProjectiveStack, sector: &WpsSector) -> Result<(Ring, GradedPoly)> {
    let data = fixed_data_wps(stack, sector);
    let ring = GradedRingSpec::univariate("t", data.fixed_weights.len() as u32);
    let t = GradedPoly::variable(&ring, 0);
    let normals = data
        .normal_weights
        .iter()
        .map(|&w| {
            Ok(EigenSummand {
                base: ChernCharacter::line_bundle(&t.scale_rational(&int(w as i64)))?,
                eigenvalue: sector.root.power(w as i64),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let euler = twisted_euler_class(&ring, &normals)?;
    let inv = invert_unit(euler.value())?;
    let td = todd_wps(&ring, &data.fixed_weights)?;
    Ok((ring, &td * &inv))
}

/// Full integrand `h^l e^{lt} Td / ch(t_h lambda_{-1}(N*))` for the bundle `xi^l`.
pub fn integrand_wps(stack: &WeightedProjectiveStack, sector: &WpsSector, l: i64) -> Result<GradedPoly> {
    let (ring, core) = wps_localized_todd(stack, sector)?;
    let t = GradedPoly::variable(&ring, 0);
    let ch = exp_nilpotent(&t.scale_rational(&int(l)))?.scale(&sector.root.power(l));
    Ok(&ch * &core)
}

pub fn sector_value_wps(stack: &WeightedProjectiveStack, sector: &WpsSector, l: i64) -> Result<Cyclotomic> {
    let integrand = integrand_wps(stack, sector, l)?;
    Ok(integrate_wps(&integrand, &fixed_data_wps(stack, sector).fixed_weights))
}

/// Per-sector values of `chi(P(w), xi^l)` in `(order, exponent)` order.
pub fn sector_contributions_wps(stack: &WeightedProjectiveStack, l: i64) -> Result<Vec<SectorContribution>> {
    support_wps(stack)
        .into_iter()
        .map(|sector| {
            let integrand = integrand_wps(stack, &sector, l)?;
            let value = integrate_wps(&integrand, &fixed_data_wps(stack, &sector).fixed_weights);
            Ok(SectorContribution { sector: Sector::Wps(sector), value, integrand: Some(integrand) })
        })
        .collect()
}

/// Sum of sector values; must be an integer.
fn exact_total<'a>(values: impl Iterator<Item = &'a Cyclotomic>, scale: &Rational) -> Result<Rational> {
    let sum = values.fold(Cyclotomic::zero(), |acc, v| &acc + v);
    let total = sum.to_rational()? * scale;
    to_integer(&total)?;
    Ok(total)
}

pub fn euler_characteristic_wps(stack: &WeightedProjectiveStack, l: i64) -> Result<Rational> {
    let contributions = sector_contributions_wps(stack, l)?;
    exact_total(contributions.iter().map(|c| &c.value), &Rational::one())
}

/// Todd class of `P^n` in the variable `var`: `todd(H)^{n+1}`.
fn todd_projective(ring: &Ring, var: usize, n: u32) -> Result<GradedPoly> {
    Ok(todd_factor(&GradedPoly::variable(ring, var))?.pow(n + 1))
}

/// Integrand on `(P^n)^{#cycles}` for the bundle `O(m)^{⊠k}`.
pub fn integrand_pqs(stack: &PermutationQuotientStack, sector: &PqsSector, m: i64) -> Result<GradedPoly> {
    let n = stack.n();
    let cycles = fixed_data_pqs(sector);
    let ring = GradedRingSpec::new((0..cycles.len()).map(|c| (format!("H{}", c + 1), n + 1)));
    let mut out = GradedPoly::one(&ring);
    for (c, cycle) in cycles.iter().enumerate() {
        let h = GradedPoly::variable(&ring, c);
        let restricted = exp_nilpotent(&h.scale_rational(&int(cycle.length as i64 * m)))?;
        let tangent = ChernCharacter::tangent_projective(&ring, c, n);
        let normals: Vec<EigenSummand> = cycle
            .normal_eigenvalues
            .iter()
            .map(|z| EigenSummand { base: tangent.clone(), eigenvalue: z.value() })
            .collect();
        let euler = twisted_euler_class(&ring, &normals)?;
        let factor = &(&restricted * &todd_projective(&ring, c, n)?) * &invert_unit(euler.value())?;
        out = &out * &factor;
    }
    Ok(out)
}

/// Plain integral over the fixed variety; the `1/|G|` weight is applied by the totals.
pub fn sector_value_pqs(stack: &PermutationQuotientStack, sector: &PqsSector, m: i64) -> Result<Cyclotomic> {
    Ok(integrand_pqs(stack, sector, m)?.top_coefficient())
}

pub fn sector_contributions_pqs(stack: &PermutationQuotientStack, m: i64) -> Result<Vec<SectorContribution>> {
    sectors_pqs(stack)
        .into_iter()
        .map(|sector| {
            let integrand = integrand_pqs(stack, &sector, m)?;
            let value = integrand.top_coefficient();
            Ok(SectorContribution { sector: Sector::Pqs(sector), value, integrand: Some(integrand) })
        })
        .collect()
}

fn group_weight(stack: &PermutationQuotientStack) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(stack.group().order()))
}

pub fn euler_characteristic_pqs(stack: &PermutationQuotientStack, m: i64) -> Result<Rational> {
    let contributions = sector_contributions_pqs(stack, m)?;
    exact_total(contributions.iter().map(|c| &c.value), &group_weight(stack))
}

/// Dense univariate polynomial with rational coefficients, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct nodes, via
    /// Newton divided differences.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Self {
        let n = points.len();
        let xs: Vec<&Rational> = points.iter().map(|(x, _)| x).collect();
        let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
            }
        }
        // Horner on the Newton form.
        let mut acc: Vec<Rational> = Vec::new();
        for i in (0..n).rev() {
            // acc = acc * (x - x_i) + dd[i]
            let mut next = vec![Rational::zero(); acc.len() + 1];
            for (j, c) in acc.iter().enumerate() {
                next[j + 1] += c;
                next[j] -= c * xs[i];
            }
            next[0] += &dd[i];
            acc = next;
        }
        Self::new(acc)
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag} ")?;
                    }
                    if k == 1 {
                        write!(f, "m")?;
                    } else {
                        write!(f, "m^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `chi([(P^n)^k/G], O(m)^{⊠k})` as a polynomial in `m`, interpolated at
/// `m = 0..=n*k`.
pub fn chi_polynomial_pqs(stack: &PermutationQuotientStack) -> Result<RationalPolynomial> {
    let points = (0..=stack.dimension() as i64)
        .map(|m| Ok((int(m), euler_characteristic_pqs(stack, m)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalPolynomial::interpolate(&points))
}

/// Sectors of one cycle type with their combined, `1/|G|`-weighted value.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassValue {
    pub cycle_type: Vec<usize>,
    pub elements: Vec<Permutation>,
    pub value: Rational,
}

impl ClassValue {
    pub fn label(&self) -> String {
        cycle_type_label(&self.cycle_type)
    }
}

/// `3 1 1` style label of a cycle type, written with exponents: `3 1^2`.
pub fn cycle_type_label(cycle_type: &[usize]) -> String {
    let mut counts: BTreeMap<std::cmp::Reverse<usize>, usize> = BTreeMap::new();
    for &l in cycle_type {
        *counts.entry(std::cmp::Reverse(l)).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(std::cmp::Reverse(l), c)| if c == 1 { l.to_string() } else { format!("{l}^{c}") })
        .collect::<Vec<_>>()
        .join(" ")
}

fn aggregate_by_cycle_type(
    stack: &PermutationQuotientStack,
    contributions: &[SectorContribution],
) -> Result<Vec<ClassValue>> {
    let mut groups: BTreeMap<Vec<usize>, (Vec<Permutation>, Cyclotomic)> = BTreeMap::new();
    for c in contributions {
        let Sector::Pqs(s) = &c.sector else {
            unreachable!("permutation sectors only")
        };
        let entry = groups
            .entry(s.element.cycle_type())
            .or_insert_with(|| (Vec::new(), Cyclotomic::zero()));
        entry.0.push(s.element.clone());
        entry.1 = &entry.1 + &c.value;
    }
    let weight = group_weight(stack);
    groups
        .into_iter()
        .map(|(cycle_type, (elements, sum))| {
            Ok(ClassValue { cycle_type, elements, value: sum.to_rational()? * &weight })
        })
        .collect()
}

/// Per-cycle-type pieces of `chi`, cycle types ascending (identity first).
pub fn class_aggregation_pqs(stack: &PermutationQuotientStack, m: i64) -> Result<Vec<ClassValue>> {
    aggregate_by_cycle_type(stack, &sector_contributions_pqs(stack, m)?)
}

/// Each cycle-type piece as a polynomial in `m`.
pub fn class_polynomials_pqs(stack: &PermutationQuotientStack) -> Result<Vec<(Vec<usize>, RationalPolynomial)>> {
    let samples = (0..=stack.dimension() as i64)
        .map(|m| Ok((m, class_aggregation_pqs(stack, m)?)))
        .collect::<Result<Vec<_>>>()?;
    let classes = &samples[0].1;
    Ok(classes
        .iter()
        .enumerate()
        .map(|(i, class)| {
            let points: Vec<_> = samples.iter().map(|(m, cv)| (int(*m), cv[i].value.clone())).collect();
            (class.cycle_type.clone(), RationalPolynomial::interpolate(&points))
        })
        .collect())
}

/// Todd class of the coarse space of `P(w)` in the basis `[W_k]`, where
/// `W_k` is the image of `V(x_0, ..., x_{k-1})` for ascending weights.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarseToddClass {
    pub weights: Vec<u64>,
    pub coefficients: Vec<Rational>,
    pub sectors: Vec<(WpsSector, Vec<Cyclotomic>)>,
}

impl CoarseToddClass {
    pub fn basis_labels(&self) -> Vec<String> {
        (0..self.weights.len())
            .map(|k| {
                if k == 0 {
                    "W0".to_string()
                } else {
                    format!("W{k}")
                }
            })
            .collect()
    }

    /// Human description of `W_k`.
    pub fn basis_descriptions(&self) -> Vec<String> {
        (0..self.weights.len())
            .map(|k| {
                if k == 0 {
                    "fundamental class".to_string()
                } else {
                    let xs: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
                    format!("V({})", xs.join(","))
                }
            })
            .collect()
    }

    /// `stack-degree` of the lift of `[W_k]`: the multiple of `t^k` that
    /// pushes forward to `[W_k]`, namely `prod_{i<k} w_i * gcd(w_k, .., w_n)`.
    fn lift_factor(weights: &[u64], k: usize) -> Rational {
        let prod: u64 = weights[..k].iter().product();
        let g = weights[k..].iter().fold(0u64, |a, &b| a.gcd(&b));
        int((prod * g) as i64)
    }

    /// `int_coarse ch(O(l)) td` computed on the stack by the projection
    /// formula; meaningful when `O(l)` descends to a line bundle on the
    /// coarse space.
    pub fn pair_with_line_bundle(&self, l: i64) -> Rational {
        let n = self.weights.len() - 1;
        let prod: u64 = self.weights.iter().product();
        let mut acc = Rational::zero();
        for (k, c) in self.coefficients.iter().enumerate() {
            let lifted = c * Self::lift_factor(&self.weights, k);
            let e = (n - k) as u32;
            let ch = Rational::from_integer(BigInt::from(l).pow(e)) / factorial(e);
            acc += lifted * ch;
        }
        acc / int(prod as i64)
    }
}

/// Push each sector's `Td(fixed) / ch(t_h lambda_{-1}(N*))` forward to the
/// coarse space and sum.
pub fn coarse_todd_wps(stack: &WeightedProjectiveStack) -> Result<CoarseToddClass> {
    let weights = stack.weights().to_vec();
    let n = stack.dimension();
    let mut totals = vec![Cyclotomic::zero(); n + 1];
    let mut per_sector = Vec::new();
    for sector in support_wps(stack) {
        let data = fixed_data_wps(stack, &sector);
        let (_, class) = wps_localized_todd(stack, &sector)?;
        let codim0 = data.normal_weights.len();
        // i_*(t^j) = prod_{normal} w * t^{codim0 + j} in the stack Chow ring
        let embed: u64 = data.normal_weights.iter().product();
        let mut coeffs = vec![Cyclotomic::zero(); n + 1];
        for j in 0..data.fixed_weights.len() {
            let c = class.coefficient_of(&[j as u32]);
            let codim = codim0 + j;
            let push = int(embed as i64) / CoarseToddClass::lift_factor(&weights, codim);
            coeffs[codim] = c.scale(&push);
        }
        for (tot, c) in totals.iter_mut().zip(&coeffs) {
            *tot = &*tot + c;
        }
        per_sector.push((sector, coeffs));
    }
    let coefficients = totals.iter().map(Cyclotomic::to_rational).collect::<Result<Vec<_>>>()?;
    Ok(CoarseToddClass { weights, coefficients, sectors: per_sector })
}
