//! Spectra of finite point sets.
//!
//! A finite set `B` is a spectrum of a finite set `G` when the exponentials
//! `e_b`, `b in B`, form an orthogonal basis of `L^2` of the counting
//! measure on `G`. In dimension `|G|` this is equivalent to `|B| = |G|`
//! together with pairwise orthogonality, i.e. the matrix
//! `exp(2 pi i b g) / sqrt|G|` being unitary.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exactmath::{
    format_rational, rational, rational_to_f64, root_sum_is_zero, Rational, ResidueMultiset,
};

/// Largest common denominator accepted by the exact orthogonality test.
const MAX_ORDER: u64 = 1 << 24;

/// Finite set of rationals, sorted ascending without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinitePointSet {
    points: Vec<Rational>,
}

impl FinitePointSet {
    pub fn new(points: impl IntoIterator<Item = Rational>) -> Self {
        let mut points: Vec<Rational> = points.into_iter().collect();
        points.sort();
        points.dedup();
        FinitePointSet { points }
    }

    pub fn from_integers(values: impl IntoIterator<Item = i64>) -> Self {
        Self::new(values.into_iter().map(|v| rational(v, 1)))
    }

    /// The set `(1/p) A`.
    pub fn scaled_integers(set: &IntSet, p: u64) -> Self {
        Self::new(set.iter().map(|a| rational(a, p as i64)))
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.points.binary_search(r).is_ok()
    }

    pub fn min(&self) -> Option<&Rational> {
        self.points.first()
    }

    pub fn translated(&self, c: &Rational) -> Self {
        FinitePointSet {
            points: self.points.iter().map(|x| x + c).collect(),
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self::new(self.points.iter().map(|x| x * c))
    }

    /// Translate so that the minimum is 0.
    pub fn canonical(&self) -> Self {
        match self.min() {
            Some(m) => self.translated(&-m.clone()),
            None => self.clone(),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.points.iter().map(format_rational).collect()
    }
}

impl fmt::Display for FinitePointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

/// Finite set of integers, sorted ascending without duplicates.
#[derive(
    Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntSet {
    elements: Vec<i64>,
}

impl IntSet {
    pub fn new(elements: impl IntoIterator<Item = i64>) -> Self {
        let mut elements: Vec<i64> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        IntSet { elements }
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.elements.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, v: i64) -> bool {
        self.elements.binary_search(&v).is_ok()
    }

    pub fn min(&self) -> Option<i64> {
        self.elements.first().copied()
    }

    pub fn translated(&self, c: i64) -> Self {
        IntSet {
            elements: self.elements.iter().map(|x| x + c).collect(),
        }
    }

    /// Translate so that the minimum is 0.
    pub fn canonical(&self) -> Self {
        self.translated(-self.min().unwrap_or(0))
    }
}

impl From<Vec<i64>> for IntSet {
    fn from(v: Vec<i64>) -> Self {
        IntSet::new(v)
    }
}

impl From<IntSet> for Vec<i64> {
    fn from(s: IntSet) -> Self {
        s.elements
    }
}

impl<const N: usize> From<[i64; N]> for IntSet {
    fn from(v: [i64; N]) -> Self {
        IntSet::new(v)
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elements.iter().join(", "))
    }
}

/// Exact test of `sum_{g in G} exp(2 pi i d g) == 0` for rational `d`.
pub fn exponential_sum_vanishes(g: &FinitePointSet, d: &Rational) -> bool {
    let products: Vec<Rational> = g.points().iter().map(|x| x * d).collect();
    let order = products
        .iter()
        .fold(BigInt::from(1), |acc, r| acc.lcm(r.denom()));
    let m = order
        .to_u64()
        .filter(|&m| m <= MAX_ORDER)
        .unwrap_or_else(|| panic!("common denominator {order} too large for exact test"));
    let big_m = BigInt::from(m);
    let exponents = products.iter().map(|r| {
        let scaled = r.numer() * (&big_m / r.denom());
        scaled.mod_floor(&big_m).to_i64().expect("reduced below modulus")
    });
    let e = ResidueMultiset::new(m, exponents).expect("positive modulus");
    root_sum_is_zero(&e)
}

/// Whether `b` is a spectrum for `g`.
///
/// # Panics
/// When a pairwise common denominator exceeds `2^24`.
pub fn is_spectrum(g: &FinitePointSet, b: &FinitePointSet) -> bool {
    if g.len() != b.len() {
        return false;
    }
    b.points()
        .iter()
        .tuple_combinations()
        .all(|(x, y)| exponential_sum_vanishes(g, &(x - y)))
}

/// Floating defect of the spectral pair: largest entry of
/// `|H H* / |G| - I|` with `H[b][g] = exp(2 pi i b g)`. Returns infinity
/// for mismatched cardinalities.
pub fn hadamard_defect(g: &FinitePointSet, b: &FinitePointSet) -> f64 {
    if g.len() != b.len() {
        return f64::INFINITY;
    }
    let n = g.len() as f64;
    let gf: Vec<f64> = g.points().iter().map(rational_to_f64).collect();
    let bf: Vec<f64> = b.points().iter().map(rational_to_f64).collect();
    let mut worst = 0.0f64;
    for (i, x) in bf.iter().enumerate() {
        for (j, y) in bf.iter().enumerate() {
            let s: Complex64 = gf
                .iter()
                .map(|&t| Complex64::from_polar(1.0, 2.0 * PI * (x - y) * t))
                .sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s / n - target).norm());
        }
    }
    worst
}

fn check_base(g: &FinitePointSet, p: u64) -> Result<()> {
    if g.is_empty() {
        return Err(invalid("base set is empty"));
    }
    if g.len() as u64 != p {
        return Err(invalid(format!(
            "base set has {} points but p = {p}",
            g.len()
        )));
    }
    Ok(())
}

/// All nonzero `d` with `|d| <= d_max` such that `(1/p){0, d}` is orthogonal
/// for `G`, i.e. `sum_{g in G} exp(2 pi i g d / p) == 0`.
pub fn admissible_differences(g: &FinitePointSet, p: u64, d_max: u64) -> Result<BTreeSet<i64>> {
    check_base(g, p)?;
    let d_max = d_max as i64;
    Ok((-d_max..=d_max)
        .into_par_iter()
        .filter(|&d| d != 0 && exponential_sum_vanishes(g, &rational(d, p as i64)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect())
}

/// All `A` in `{0, ..., n_max}` with `0 in A`, `|A| = p` and `(1/p) A` a
/// spectrum of `G`, in lexicographic order.
///
/// Candidates are added in ascending order; a candidate survives only if its
/// difference with every chosen element is admissible.
pub fn enumerate_spectra(g: &FinitePointSet, p: u64, n_max: u64) -> Result<Vec<IntSet>> {
    check_base(g, p)?;
    let n_max = n_max as usize;
    let allowed: Vec<bool> = {
        let mut v = vec![false; n_max + 1];
        let diffs = admissible_differences(g, p, n_max as u64)?;
        for d in diffs.into_iter().filter(|&d| d > 0) {
            v[d as usize] = true;
        }
        v
    };
    let p = p as usize;
    if p == 1 {
        return Ok(vec![IntSet::from([0])]);
    }
    let branches: Vec<Vec<IntSet>> = (1..=n_max)
        .into_par_iter()
        .filter(|&c| allowed[c])
        .map(|c| {
            let mut out = Vec::new();
            let mut chosen = vec![0usize, c];
            extend_spectrum(&allowed, p, n_max, &mut chosen, &mut out);
            out
        })
        .collect();
    Ok(branches.into_iter().flatten().collect())
}

fn extend_spectrum(
    allowed: &[bool],
    p: usize,
    n_max: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<IntSet>,
) {
    if chosen.len() == p {
        out.push(IntSet::new(chosen.iter().map(|&c| c as i64)));
        return;
    }
    let last = *chosen.last().expect("chosen starts with 0");
    // leave room for the remaining picks
    let remaining = p - chosen.len();
    if n_max < last + remaining {
        return;
    }
    for c in last + 1..=n_max {
        if chosen.iter().all(|&a| allowed[c - a]) {
            chosen.push(c);
            extend_spectrum(allowed, p, n_max, chosen, out);
            chosen.pop();
        }
    }
}

/// Exhaustive oracle for [`enumerate_spectra`]: every `p`-subset of
/// `{0, ..., n_max}` containing 0, filtered by [`is_spectrum`].
pub fn brute_force_spectra(g: &FinitePointSet, p: u64, n_max: u64) -> Result<Vec<IntSet>> {
    const GUARD: u128 = 10_000_000;
    if p == 0 {
        return Err(invalid("p must be positive"));
    }
    let k = (p - 1) as u128;
    let n = n_max as u128;
    if n < k {
        return Ok(Vec::new());
    }
    let mut count: u128 = 1;
    for i in 0..k {
        count = count * (n - i) / (i + 1);
        if count > GUARD {
            return Err(Error::ResourceLimit(format!(
                "C({n_max}, {}) exceeds {GUARD} candidate sets",
                p - 1
            )));
        }
    }
    let mut found: Vec<IntSet> = (1..=n_max as i64)
        .combinations((p - 1) as usize)
        .map(|rest| IntSet::new(std::iter::once(0).chain(rest)))
        .filter(|a| is_spectrum(g, &FinitePointSet::scaled_integers(a, p)))
        .collect();
    found.sort();
    Ok(found)
}
