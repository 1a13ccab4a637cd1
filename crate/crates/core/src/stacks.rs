//! Stack descriptors and their sectors.
//!
//! Two families are supported: weighted projective stacks `P(w_0, ..., w_n)`
//! (quotients of `A^{n+1} - 0` by `C*`) and permutation quotients
//! `[(P^n)^k / G]` for a group `G` of permutations of the factors. A sector
//! is one summand of the localization formula: a root of unity `h` with its
//! nonempty fixed locus, or a group element with its cycle decomposition.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact_arith::{root_of_unity, Cyclotomic};

/// `zeta_order^exponent`, stored with `gcd(order, exponent) = 1` and
/// `0 <= exponent < order`; the identity is `(1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootOfUnity {
    pub order: u64,
    pub exponent: u64,
}

impl RootOfUnity {
    pub fn new(order: u64, exponent: i64) -> Self {
        assert!(order >= 1);
        let e = exponent.rem_euclid(order as i64) as u64;
        let g = e.gcd(&order);
        RootOfUnity { order: order / g, exponent: e / g }
    }

    pub fn identity() -> Self {
        RootOfUnity { order: 1, exponent: 0 }
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// `h^p` as a cyclotomic number.
    pub fn power(&self, p: i64) -> Cyclotomic {
        root_of_unity(self.order, self.exponent as i64 * p)
    }

    pub fn inverse(&self) -> Self {
        RootOfUnity::new(self.order, -(self.exponent as i64))
    }

    pub fn value(&self) -> Cyclotomic {
        self.power(1)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.order, self.exponent)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedProjectiveStack {
    weights: Vec<u64>,
}

impl WeightedProjectiveStack {
    /// Weights are sorted ascending; `P(w)` does not depend on their order.
    pub fn new(mut weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidStack("weighted projective stack needs at least one weight".into()));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidStack("weights must be positive".into()));
        }
        weights.sort_unstable();
        Ok(WeightedProjectiveStack { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn dimension(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weight_sum(&self) -> u64 {
        self.weights.iter().sum()
    }
}

impl fmt::Display for WeightedProjectiveStack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "P({})", w.join(","))
    }
}

/// Permutation of `{0, .., k-1}` in one-line notation (`images[i]` is the image of `i`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation { images: (0..k).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let distinct: BTreeSet<_> = images.iter().copied().collect();
        if distinct.len() != k || images.iter().any(|&i| i >= k) {
            return Err(Error::NotAGroup(format!("{images:?} is not a permutation")));
        }
        Ok(Permutation { images })
    }

    /// Build from cycles over 0-based points.
    pub fn from_cycles(k: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..k).collect();
        let mut seen = BTreeSet::new();
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if p >= k {
                    return Err(Error::NotAGroup(format!("point {} exceeds degree {k}", p + 1)));
                }
                if !seen.insert(p) {
                    return Err(Error::NotAGroup(format!("point {} repeated in cycle notation", p + 1)));
                }
                images[p] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self` after `other`: `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// All cycles including fixed points, each starting at its least point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in descending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }
}

/// Cycle notation with 1-based points; the identity prints as `(1)`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "(1)");
        }
        let spaced = self.images.len() > 9;
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(if spaced { " " } else { "" }))?;
        }
        Ok(())
    }
}

/// Parse one permutation in cycle notation, e.g. `(12)(34)`, `(1)` or `()`.
/// Points are single digits unless separated by spaces.
pub fn parse_permutation(k: usize, text: &str) -> Result<Permutation> {
    let text = text.trim();
    let bad = || Error::NotAGroup(format!("cannot parse permutation '{text}'"));
    let mut cycles = Vec::new();
    let mut rest = text;
    if rest.is_empty() {
        return Err(bad());
    }
    while !rest.is_empty() {
        let body_end = rest.find(')').ok_or_else(bad)?;
        if !rest.starts_with('(') {
            return Err(bad());
        }
        let body = rest[1..body_end].trim();
        let points: Vec<usize> = if body.contains(' ') {
            body.split_whitespace()
                .map(|s| s.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            body.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        if points.contains(&0) {
            return Err(bad());
        }
        let cycle: Vec<usize> = points.into_iter().map(|p| p - 1).collect();
        if cycle.len() > 1 {
            cycles.push(cycle);
        } else if let Some(&p) = cycle.first() {
            if p >= k {
                return Err(Error::NotAGroup(format!("point {} exceeds degree {k}", p + 1)));
            }
        }
        rest = rest[body_end + 1..].trim_start();
    }
    Permutation::from_cycles(k, &cycles)
}

/// Finite group of permutations of `{0, .., k-1}`, given by its full element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationGroup {
    degree: usize,
    elements: Vec<Permutation>,
    name: Option<String>,
}

impl PermutationGroup {
    /// Validates that the elements form a group; stores them in word order.
    pub fn new(degree: usize, elements: Vec<Permutation>) -> Result<Self> {
        let set: BTreeSet<Permutation> = elements.into_iter().collect();
        if let Some(p) = set.iter().find(|p| p.degree() != degree) {
            return Err(Error::NotAGroup(format!("{p} has degree {} instead of {degree}", p.degree())));
        }
        if !set.contains(&Permutation::identity(degree)) {
            return Err(Error::NotAGroup("identity is missing".into()));
        }
        for a in &set {
            if !set.contains(&a.inverse()) {
                return Err(Error::NotAGroup(format!("inverse of {a} is missing")));
            }
            for b in &set {
                let ab = a.compose(b);
                if !set.contains(&ab) {
                    return Err(Error::NotAGroup(format!("product {a}*{b} = {ab} is missing")));
                }
            }
        }
        Ok(PermutationGroup { degree, elements: set.into_iter().collect(), name: None })
    }

    /// Closure of a generating set.
    pub fn generated_by(degree: usize, generators: &[Permutation]) -> Result<Self> {
        let mut set: BTreeSet<Permutation> = BTreeSet::new();
        set.insert(Permutation::identity(degree));
        let mut frontier: Vec<Permutation> = set.iter().cloned().collect();
        while let Some(p) = frontier.pop() {
            for g in generators {
                if g.degree() != degree {
                    return Err(Error::NotAGroup(format!("generator {g} has wrong degree")));
                }
                let q = g.compose(&p);
                if set.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        Self::new(degree, set.into_iter().collect())
    }

    fn named(mut self, name: String) -> Self {
        self.name = Some(name);
        self
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, vec![Permutation::identity(degree)])
            .expect("trivial group")
            .named("1".into())
    }

    /// `Z_j` generated by the cycle `(1 2 ... j)` acting on the first `j` of `degree` points.
    pub fn cyclic(j: usize, degree: usize) -> Result<Self> {
        if j == 0 || j > degree {
            return Err(Error::NotAGroup(format!("Z{j} does not act on {degree} points")));
        }
        let gens = if j > 1 {
            vec![Permutation::from_cycles(degree, &[(0..j).collect()])?]
        } else {
            vec![]
        };
        Ok(Self::generated_by(degree, &gens)?.named(format!("Z{j}")))
    }

    /// `S_j` on the first `j` of `degree` points.
    pub fn symmetric(j: usize, degree: usize) -> Result<Self> {
        if j == 0 || j > degree {
            return Err(Error::NotAGroup(format!("S{j} does not act on {degree} points")));
        }
        let mut gens = Vec::new();
        if j > 1 {
            gens.push(Permutation::from_cycles(degree, &[vec![0, 1]])?);
            gens.push(Permutation::from_cycles(degree, &[(0..j).collect()])?);
        }
        Ok(Self::generated_by(degree, &gens)?.named(format!("S{j}")))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Size of the centralizer of `g` in this group.
    pub fn centralizer_order(&self, g: &Permutation) -> usize {
        self.elements.iter().filter(|x| x.compose(g) == g.compose(x)).count()
    }

    /// Conjugacy class of `g` in this group, in word order.
    pub fn conjugacy_class(&self, g: &Permutation) -> Vec<Permutation> {
        let class: BTreeSet<Permutation> =
            self.elements.iter().map(|x| x.compose(g).compose(&x.inverse())).collect();
        class.into_iter().collect()
    }
}

impl fmt::Display for PermutationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{n}"),
            None => {
                let e: Vec<String> = self.elements.iter().map(ToString::to_string).collect();
                write!(f, "{{{}}}", e.join(","))
            }
        }
    }
}

/// `[(P^n)^k / G]` with `G` permuting the factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationQuotientStack {
    n: u32,
    k: usize,
    group: PermutationGroup,
}

impl PermutationQuotientStack {
    pub fn new(n: u32, k: usize, group: PermutationGroup) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidStack("need n >= 1 and k >= 1".into()));
        }
        if group.degree() != k {
            return Err(Error::InvalidStack(format!(
                "group acts on {} points but there are {k} factors",
                group.degree()
            )));
        }
        Ok(PermutationQuotientStack { n, k, group })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }

    pub fn dimension(&self) -> usize {
        self.n as usize * self.k
    }
}

impl fmt::Display for PermutationQuotientStack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[(P^{})^{}/{}]", self.n, self.k, self.group)
    }
}

/// The bundle `xi^exponent` on a weighted projective stack.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharacterBundle {
    pub exponent: i64,
}

/// `O(m)^{⊠k}` on `(P^n)^k` with the permutation linearization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxLineBundle {
    pub m: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpsSector {
    pub root: RootOfUnity,
    /// Indices `i` (into the sorted weights) with `h^{w_i} = 1`.
    pub fixed: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PqsSector {
    pub element: Permutation,
    pub cycles: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sector {
    Wps(WpsSector),
    Pqs(PqsSector),
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sector::Wps(s) => write!(f, "{}", s.root),
            Sector::Pqs(s) => write!(f, "{}", s.element),
        }
    }
}

/// One sector per distinct root of unity in the union of `mu_{w_i}`, sorted by
/// `(order, exponent)`.
pub fn support_wps(stack: &WeightedProjectiveStack) -> Vec<WpsSector> {
    let mut roots = BTreeSet::new();
    for &w in stack.weights() {
        for k in 0..w {
            roots.insert(RootOfUnity::new(w, k as i64));
        }
    }
    roots
        .into_iter()
        .map(|root| {
            let fixed = stack
                .weights()
                .iter()
                .enumerate()
                .filter(|(_, &w)| (w * root.exponent) % root.order == 0)
                .map(|(i, _)| i)
                .collect();
            WpsSector { root, fixed }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpsFixedData {
    pub fixed_weights: Vec<u64>,
    pub normal_weights: Vec<u64>,
}

/// Fixed sub-stack `P(w_i : i in I)` and normal characters `xi^{w_j}`, `j not in I`.
pub fn fixed_data_wps(stack: &WeightedProjectiveStack, sector: &WpsSector) -> WpsFixedData {
    let (fixed, normal): (Vec<_>, Vec<_>) = stack
        .weights()
        .iter()
        .enumerate()
        .partition(|(i, _)| sector.fixed.contains(i));
    WpsFixedData {
        fixed_weights: fixed.into_iter().map(|(_, &w)| w).collect(),
        normal_weights: normal.into_iter().map(|(_, &w)| w).collect(),
    }
}

/// Laurent polynomial in `xi` with integer coefficients, keyed by exponent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    pub terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn one() -> Self {
        LaurentPoly { terms: BTreeMap::from([(0, 1)]) }
    }

    /// `1 - xi^{-w}`.
    pub fn one_minus_inverse_power(w: i64) -> Self {
        LaurentPoly { terms: BTreeMap::from([(0, 1), (-w, -1)]) }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *terms.entry(ea + eb).or_insert(0) += ca * cb;
            }
        }
        terms.retain(|_, c| *c != 0);
        LaurentPoly { terms }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if *c < 0 { "-" } else { "+" };
            if i == 0 {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (*e, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => write!(f, "xi^{e}")?,
                _ => write!(f, "{a}*xi^{e}")?,
            }
        }
        Ok(())
    }
}

/// `prod_i (1 - xi^{-w_i})`, the Euler class of the representation `A^{n+1}`;
/// it generates the relation ideal of `K_0(P(w))` in `Z[xi, xi^{-1}]`.
pub fn k_relation_wps(stack: &WeightedProjectiveStack) -> LaurentPoly {
    stack
        .weights()
        .iter()
        .fold(LaurentPoly::one(), |acc, &w| acc.mul(&LaurentPoly::one_minus_inverse_power(w as i64)))
}

/// One sector per group element, in word order.
pub fn sectors_pqs(stack: &PermutationQuotientStack) -> Vec<PqsSector> {
    stack
        .group()
        .elements()
        .iter()
        .map(|g| PqsSector { element: g.clone(), cycles: g.cycles() })
        .collect()
}

/// Restriction data along one cycle of a permutation sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleData {
    /// Cycle length `d`; the bundle restricts to `O(d*m)` with trivial character.
    pub length: usize,
    /// Eigenvalues `zeta_d^j`, `j = 1..d-1`, each carried by a copy of `T P^n`.
    pub normal_eigenvalues: Vec<RootOfUnity>,
}

pub fn fixed_data_pqs(sector: &PqsSector) -> Vec<CycleData> {
    sector
        .cycles
        .iter()
        .map(|c| {
            let d = c.len();
            CycleData {
                length: d,
                normal_eigenvalues: (1..d).map(|j| RootOfUnity::new(d as u64, j as i64)).collect(),
            }
        })
        .collect()
}
