use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{verify_omega_tiling, Interval, IntervalUnion};
use crate::error::{invalid, Error, Result};
use crate::exactmath::{format_rational, rational, rem_rational, Rational};
use crate::spectra::{is_spectrum, FinitePointSet, IntSet};
use crate::tilings::{tiles_cyclic, PeriodicSet};

/// `Lambda = base + pZ` with `base` in `[0, p)` containing 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicSpectrum {
    base: FinitePointSet,
    period: u64,
}

impl PeriodicSpectrum {
    pub fn new(base: FinitePointSet, period: u64) -> Result<Self> {
        validate_base(&base, period)?;
        Ok(PeriodicSpectrum { base, period })
    }

    pub fn base(&self) -> &FinitePointSet {
        &self.base
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let p = rational(self.period as i64, 1);
        self.base.contains(&rem_rational(x, &p))
    }

    /// All elements in `[lo, hi]`, ascending.
    pub fn elements_between(&self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        let p = rational(self.period as i64, 1);
        let first = (lo / &p).floor().to_integer();
        let last = (hi / &p).floor().to_integer();
        let mut out = Vec::new();
        let mut k = first;
        while k <= last {
            let shift = Rational::from_integer(k.clone()) * &p;
            for g in self.base.points() {
                let x = g + &shift;
                if &x >= lo && &x <= hi {
                    out.push(x);
                }
            }
            k += 1;
        }
        out
    }

    /// Smallest `q = p/j` with `Lambda + q = Lambda`, `j` ranging over
    /// divisors of `|base|` that also keep the representation invariant.
    ///
    /// Any period of `Lambda` divides `p` in the sense `p = j q` with `j`
    /// integral, and `j` must divide `|base|`.
    pub fn minimal_period(&self) -> Rational {
        let n = self.base.len() as u64;
        let p = rational(self.period as i64, 1);
        (1..=n)
            .rev()
            .filter(|j| n.is_multiple_of(*j))
            .map(|j| &p / rational(j as i64, 1))
            .find(|q| self.base.points().iter().all(|g| self.contains(&(g + q))))
            .unwrap_or(p)
    }
}

fn validate_base(gamma: &FinitePointSet, p: u64) -> Result<()> {
    if p == 0 {
        return Err(invalid("period p must be positive"));
    }
    if gamma.len() as u64 != p {
        return Err(invalid(format!(
            "base set has {} points, expected p = {p}",
            gamma.len()
        )));
    }
    if !gamma.contains(&Rational::zero()) {
        return Err(invalid("base set must contain 0"));
    }
    let top = rational(p as i64, 1);
    if gamma.points().iter().any(|g| g.is_negative() || g >= &top) {
        return Err(invalid(format!("base set must lie in [0, {p})")));
    }
    Ok(())
}

/// A cell of `[0, 1/p)` together with the constant fiber on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCell {
    pub cell: Interval,
    pub fiber: IntSet,
}

/// Partition of `[0, 1/p)` into cells on which `Omega_x` is constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberDecomposition {
    p: u64,
    cells: Vec<FiberCell>,
}

impl FiberDecomposition {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn cells(&self) -> &[FiberCell] {
        &self.cells
    }

    /// Groups the cells by fiber: the sets `{x in [0, 1/p) : Omega_x = S}`.
    pub fn by_fiber(&self) -> BTreeMap<IntSet, Vec<Interval>> {
        let mut map: BTreeMap<IntSet, Vec<Interval>> = BTreeMap::new();
        for c in &self.cells {
            map.entry(c.fiber.clone()).or_default().push(c.cell.clone());
        }
        map
    }

    pub fn distinct_fibers(&self) -> Vec<IntSet> {
        self.by_fiber().into_keys().collect()
    }
}

/// `Omega_x = {k : x + k/p in Omega}`.
pub fn fiber_at(omega: &IntervalUnion, p: u64, x: &Rational) -> IntSet {
    let pr = rational(p as i64, 1);
    let mut ks = Vec::new();
    for iv in omega.intervals() {
        // x + k/p in [a, b)  <=>  ceil((a - x) p) <= k < ceil((b - x) p)
        let lo = ((iv.start() - x) * &pr).ceil().to_integer();
        let hi = ((iv.end() - x) * &pr).ceil().to_integer();
        let (lo, hi) = (
            lo.to_i64().expect("fiber index fits i64"),
            hi.to_i64().expect("fiber index fits i64"),
        );
        ks.extend(lo..hi);
    }
    IntSet::new(ks)
}

/// Fiber decomposition of `Omega` relative to `(1/p)Z`.
pub fn fibers(omega: &IntervalUnion, p: u64) -> Result<FiberDecomposition> {
    if p == 0 {
        return Err(invalid("p must be positive"));
    }
    let width = rational(1, p as i64);
    let mut cuts: Vec<Rational> = std::iter::once(Rational::zero())
        .chain(omega.endpoints().map(|e| rem_rational(e, &width)))
        .collect();
    cuts.sort();
    cuts.dedup();
    cuts.push(width);
    let cells = cuts
        .windows(2)
        .map(|w| {
            let cell = Interval::new(w[0].clone(), w[1].clone()).expect("cuts strictly increase");
            let fiber = fiber_at(omega, p, &cell.midpoint());
            FiberCell { cell, fiber }
        })
        .collect();
    Ok(FiberDecomposition { p, cells })
}

/// Whether almost every point of the line is covered exactly `p` times by
/// `Omega + (1/p)Z`.
pub fn is_p_tile(omega: &IntervalUnion, p: u64) -> Result<bool> {
    let dec = fibers(omega, p)?;
    let ok = dec.cells.iter().all(|c| c.fiber.len() as u64 == p);
    debug_assert!(!ok || omega.measure().is_one());
    Ok(ok)
}

/// Decides whether `Gamma + pZ` is a spectrum of `Omega`: exactly when
/// `(1/p) Omega_x` is a spectrum of `Gamma` on every cell.
pub fn spectral_verdict(omega: &IntervalUnion, gamma: &FinitePointSet, p: u64) -> Result<bool> {
    validate_base(gamma, p)?;
    let fibers = fibers(omega, p)?.distinct_fibers();
    Ok(fibers
        .par_iter()
        .all(|f| is_spectrum(gamma, &FinitePointSet::scaled_integers(f, p))))
}

/// `Omega = union_i ([r_i, r_{i+1}) + (1/p) A_i)` for rational breakpoints
/// `0 = r_1 < ... < r_{n+1} = 1/p`.
pub fn build_omega(p: u64, family: &[IntSet], breakpoints: &[Rational]) -> Result<IntervalUnion> {
    if p == 0 {
        return Err(invalid("p must be positive"));
    }
    if family.is_empty() {
        return Err(invalid("family is empty"));
    }
    if breakpoints.len() != family.len() + 1 {
        return Err(invalid(format!(
            "expected {} breakpoints for {} family members, got {}",
            family.len() + 1,
            family.len(),
            breakpoints.len()
        )));
    }
    if !breakpoints[0].is_zero() {
        return Err(invalid("first breakpoint must be 0"));
    }
    let width = rational(1, p as i64);
    if breakpoints[family.len()] != width {
        return Err(invalid(format!("last breakpoint must be 1/{p}")));
    }
    if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("breakpoints must be strictly increasing"));
    }
    if let Some((i, a)) = family.iter().enumerate().find(|(_, a)| a.len() as u64 != p) {
        return Err(invalid(format!(
            "family member #{i} {a} has {} elements, expected {p}",
            a.len()
        )));
    }
    let pieces = family.iter().zip(breakpoints.windows(2)).flat_map(|(a, w)| {
        let base = Interval::new(w[0].clone(), w[1].clone()).expect("checked increasing");
        a.iter()
            .map(move |k| base.translated(&rational(k, p as i64)))
            .collect::<Vec<_>>()
    });
    let omega = IntervalUnion::union_of(pieces);
    debug_assert!(omega.measure().is_one());
    Ok(omega)
}

/// A verified tiling of the line by `Omega` with translation set
/// `(1/p)(R + mZ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaTiling {
    pub omega: IntervalUnion,
    pub p: u64,
    pub complement: PeriodicSet,
}

impl OmegaTiling {
    /// Period of the translation set, `m/p`.
    pub fn translation_period(&self) -> Rational {
        rational(self.complement.period() as i64, self.p as i64)
    }

    pub fn recheck(&self) -> bool {
        verify_omega_tiling(&self.omega, self.p, &self.complement)
    }
}

/// Assembles the tiling of the line from a complement shared by all fibers:
/// if every `Omega_x` tiles `Z` by `R + mZ` then `Omega` tiles the line by
/// `(1/p)(R + mZ)`.
pub fn assemble_tiling(omega: &IntervalUnion, p: u64, complement: &PeriodicSet) -> Result<OmegaTiling> {
    let dec = fibers(omega, p)?;
    for c in dec.cells() {
        if !tiles_cyclic(&c.fiber, complement.residues(), complement.period()) {
            return Err(Error::NotACommonComplement {
                cell: c.cell.to_string(),
                fiber: c.fiber.elements().to_vec(),
                residues: complement.residues().elements().to_vec(),
                period: complement.period(),
            });
        }
    }
    let tiling = OmegaTiling {
        omega: omega.clone(),
        p,
        complement: complement.clone(),
    };
    if !tiling.recheck() {
        return Err(invalid(format!(
            "assembled translation set (1/{p})({} + {}Z) does not partition the line (period {})",
            complement.residues(),
            complement.period(),
            format_rational(&tiling.translation_period())
        )));
    }
    Ok(tiling)
}
