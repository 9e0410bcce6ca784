//! Finite unions of half-open rational intervals.
//!
//! Everything about such a set `Omega` relative to a period `1/p` is
//! decided on finitely many cells: between consecutive endpoint residues
//! mod `1/p` the fiber `{k : x + k/p in Omega}` is constant.

mod fibers;
mod gram;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exactmath::{format_rational, parse_rational, rational, rem_rational, Rational};
use crate::tilings::PeriodicSet;

pub use fibers::{
    assemble_tiling, build_omega, fibers, is_p_tile, spectral_verdict, FiberCell,
    FiberDecomposition, OmegaTiling, PeriodicSpectrum,
};
pub use gram::{
    gram_entry, gram_entry_rational, period_identity_residual, truncated_gram, GramSummary,
};

/// Half-open interval `[start, end)` with `start < end`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    start: Rational,
    end: Rational,
}

impl Interval {
    pub fn new(start: Rational, end: Rational) -> Result<Self> {
        if start >= end {
            return Err(invalid(format!(
                "empty interval [{}, {})",
                format_rational(&start),
                format_rational(&end)
            )));
        }
        Ok(Interval { start, end })
    }

    pub fn start(&self) -> &Rational {
        &self.start
    }

    pub fn end(&self) -> &Rational {
        &self.end
    }

    pub fn length(&self) -> Rational {
        &self.end - &self.start
    }

    pub fn midpoint(&self) -> Rational {
        (&self.start + &self.end) / rational(2, 1)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.start <= x && x < &self.end
    }

    pub fn translated(&self, c: &Rational) -> Self {
        Interval {
            start: &self.start + c,
            end: &self.end + c,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{})",
            format_rational(&self.start),
            format_rational(&self.end)
        )
    }
}

/// Disjoint union of half-open intervals, sorted, with touching intervals
/// merged. Equal sets have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    /// Builds the union of pairwise disjoint intervals; overlapping input is
    /// rejected.
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        let mut sorted = intervals;
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0].end > w[1].start) {
            return Err(invalid(format!("intervals {} and {} overlap", w[0], w[1])));
        }
        Ok(Self::merged(sorted))
    }

    /// Union of arbitrary, possibly overlapping, intervals.
    pub fn union_of(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut sorted: Vec<Interval> = intervals.into_iter().collect();
        sorted.sort();
        Self::merged(sorted)
    }

    fn merged(sorted: Vec<Interval>) -> Self {
        let mut out: Vec<Interval> = Vec::with_capacity(sorted.len());
        for iv in sorted {
            match out.last_mut() {
                Some(last) if iv.start <= last.end => {
                    if iv.end > last.end {
                        last.end = iv.end;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalUnion { intervals: out }
    }

    pub fn from_pairs(pairs: &[RationalPair]) -> Result<Self> {
        let ivs = pairs
            .iter()
            .map(|&((an, ad), (bn, bd))| Interval::new(rational(an, ad), rational(bn, bd)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ivs)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, iv| acc + iv.length())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let idx = self.intervals.partition_point(|iv| &iv.start <= x);
        idx > 0 && self.intervals[idx - 1].contains(x)
    }

    /// `(inf, sup)` of the set.
    pub fn extent(&self) -> Option<(&Rational, &Rational)> {
        Some((&self.intervals.first()?.start, &self.intervals.last()?.end))
    }

    pub fn endpoints(&self) -> impl Iterator<Item = &Rational> {
        self.intervals.iter().flat_map(|iv| [&iv.start, &iv.end])
    }

    pub fn translated(&self, c: &Rational) -> Self {
        IntervalUnion {
            intervals: self.intervals.iter().map(|iv| iv.translated(c)).collect(),
        }
    }

    /// `c * Omega` for `c > 0`.
    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        if !c.is_positive() {
            return Err(invalid("scale factor must be positive"));
        }
        Ok(IntervalUnion {
            intervals: self
                .intervals
                .iter()
                .map(|iv| Interval {
                    start: &iv.start * c,
                    end: &iv.end * c,
                })
                .collect(),
        })
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.intervals.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{}", self.to_strings().join(";"))
    }
}

impl Serialize for IntervalUnion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalUnion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        items.join(";").parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `"[a,b);[c,d)"`; `""` and `"{}"` denote the empty set.
impl std::str::FromStr for IntervalUnion {
    type Err = crate::Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "{}" {
            return Ok(IntervalUnion::default());
        }
        let bad = |item: &str, reason: &str| crate::Error::Parse {
            field: "omega".to_string(),
            reason: format!("{reason} in {item:?}; expected half-open \"[a,b)\""),
        };
        let intervals = text
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|item| {
                let inner = item
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| bad(item, "missing brackets"))?;
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| bad(item, "missing comma"))?;
                Interval::new(
                    parse_rational("omega", a)?,
                    parse_rational("omega", b)?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        IntervalUnion::new(intervals)
    }
}

/// `((start_num, start_den), (end_num, end_den))`.
pub type RationalPair = ((i64, i64), (i64, i64));

pub fn measure(omega: &IntervalUnion) -> Rational {
    omega.measure()
}

/// Rescales `Omega` to measure 1; returns the rescaled set and the original
/// measure. A spectrum `Lambda` of `Omega` becomes `scale * Lambda` for the
/// rescaled set.
pub fn normalize(omega: &IntervalUnion) -> Result<(IntervalUnion, Rational)> {
    let scale = omega.measure();
    if scale.is_zero() {
        return Err(invalid("cannot normalize an empty set"));
    }
    Ok((omega.scaled(&scale.recip())?, scale))
}

/// Whether `k` divides `n`: the minimal period `k/N` of a spectrum of an
/// integer-endpoint set of measure `N` must satisfy this.
pub fn divisibility_check(n: u64, k: u64) -> bool {
    k != 0 && n.is_multiple_of(k)
}

/// Exact check that the translates `Omega + t`, `t in (1/p)(R + mZ)`,
/// partition the line up to endpoints.
///
/// All translates are folded into the fundamental domain `[0, m/p)`; the
/// pieces must be pairwise disjoint with total length `m/p`.
pub fn verify_omega_tiling(omega: &IntervalUnion, p: u64, t: &PeriodicSet) -> bool {
    if p == 0 {
        return false;
    }
    let period = rational(t.period() as i64, p as i64);
    let mut pieces: Vec<(Rational, Rational)> = Vec::new();
    for r in t.residues().iter() {
        let shift = rational(r, p as i64);
        for iv in omega.intervals() {
            let len = iv.length();
            if len > period {
                return false;
            }
            let a = rem_rational(&(iv.start() + &shift), &period);
            let b = &a + &len;
            if b <= period {
                pieces.push((a, b));
            } else {
                pieces.push((Rational::zero(), &b - &period));
                pieces.push((a, period.clone()));
            }
        }
    }
    pieces.sort();
    let disjoint = pieces.windows(2).all(|w| w[0].1 <= w[1].0);
    let total = pieces
        .iter()
        .fold(Rational::zero(), |acc, (a, b)| acc + (b - a));
    disjoint && total == period
}

pub(crate) fn is_in_lattice(x: &Rational, p: u64) -> bool {
    (x * rational(p as i64, 1)).denom().is_one()
}
