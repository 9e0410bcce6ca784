//! Tilings of the integers by finite sets with periodic complements.
//!
//! `A (+) (R + mZ) = Z` holds iff the elements of `A` are distinct mod `m`
//! and `(A mod m) (+) R = Z_m`, so every question here is a finite exact
//! cover over the cyclic group `Z_m`.

use std::ops::Range;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectra::IntSet;

/// The set `R + mZ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicSet {
    residues: IntSet,
    period: u64,
}

impl PeriodicSet {
    pub fn new(residues: impl IntoIterator<Item = i64>, period: u64) -> Result<Self> {
        if period == 0 {
            return Err(invalid("period must be positive"));
        }
        let raw: Vec<i64> = residues.into_iter().collect();
        let residues = IntSet::new(raw.iter().copied());
        if residues.len() != raw.len() {
            return Err(invalid("residues must be distinct"));
        }
        if let Some(r) = residues.iter().find(|&r| r < 0 || r >= period as i64) {
            return Err(invalid(format!("residue {r} outside [0, {period})")));
        }
        Ok(PeriodicSet { residues, period })
    }

    pub fn residues(&self) -> &IntSet {
        &self.residues
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn contains(&self, z: i64) -> bool {
        self.residues.contains(z.rem_euclid(self.period as i64))
    }
}

/// Whether `A (+) (R + mZ) = Z`.
pub fn tiles_cyclic(a: &IntSet, r: &IntSet, m: u64) -> bool {
    if m == 0 || (a.len() as u128) * (r.len() as u128) != m as u128 {
        return false;
    }
    let mi = m as i64;
    if r.iter().any(|x| x < 0 || x >= mi) {
        return false;
    }
    let mut covered = vec![false; m as usize];
    for x in a.iter() {
        for t in r.iter() {
            let z = (x + t).rem_euclid(mi) as usize;
            if std::mem::replace(&mut covered[z], true) {
                return false;
            }
        }
    }
    // |A||R| = m placements without collision cover everything
    true
}

pub fn is_tiling_of_z(a: &IntSet, t: &PeriodicSet) -> bool {
    a.len() as u128 * t.residues().len() as u128 == t.period() as u128
        && tiles_cyclic(a, t.residues(), t.period())
}

/// A verified tiling `A (+) T = Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingCertificate {
    pub tile: IntSet,
    pub complement: PeriodicSet,
    /// One full period of integers on which every point was checked to have
    /// exactly one representation `a + t`.
    pub checked_window: Range<i64>,
}

impl TilingCertificate {
    /// Certifies the tiling, or returns `None` when it fails.
    pub fn certify(tile: &IntSet, complement: &PeriodicSet) -> Option<Self> {
        let start = tile.min().unwrap_or(0);
        let cert = TilingCertificate {
            tile: tile.clone(),
            complement: complement.clone(),
            checked_window: start..start + complement.period() as i64,
        };
        (is_tiling_of_z(tile, complement) && cert.recheck()).then_some(cert)
    }

    /// Direct count of representations over the checked window; the window
    /// spans one period, so this is a full check.
    pub fn recheck(&self) -> bool {
        self.checked_window.end - self.checked_window.start == self.complement.period() as i64
            && self.checked_window.clone().all(|z| {
                self.tile
                    .iter()
                    .filter(|&a| self.complement.contains(z - a))
                    .count()
                    == 1
            })
    }
}

/// Cooperative wall-clock limit for the backtracking searches.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchBudget {
    pub deadline: Option<Instant>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget { deadline: None }
    }

    pub fn until(deadline: Instant) -> Self {
        SearchBudget {
            deadline: Some(deadline),
        }
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Outcome of a bounded common-complement search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommonSearch {
    Found(PeriodicSet),
    /// Every period up to the bound was searched exhaustively.
    Exhausted,
    TimedOut,
}

/// Joint exact cover of `Z_m` by several tiles sharing one translation set.
struct JointCover<'a> {
    m: i64,
    tiles: Vec<Vec<i64>>,
    covered: Vec<Vec<bool>>,
    chosen: Vec<i64>,
    budget: &'a SearchBudget,
    nodes: u64,
    timed_out: bool,
}

impl<'a> JointCover<'a> {
    /// `None` when some tile has a repeated residue mod `m`.
    fn new(family: &[IntSet], m: u64, budget: &'a SearchBudget) -> Option<Self> {
        let mi = m as i64;
        let mut tiles = Vec::with_capacity(family.len());
        for a in family {
            let mut res: Vec<i64> = a.iter().map(|x| x.rem_euclid(mi)).collect();
            res.sort_unstable();
            res.dedup();
            if res.len() != a.len() {
                return None;
            }
            tiles.push(res);
        }
        Some(JointCover {
            m: mi,
            covered: vec![vec![false; m as usize]; tiles.len()],
            tiles,
            chosen: Vec::new(),
            budget,
            nodes: 0,
            timed_out: false,
        })
    }

    fn fits(&self, t: i64) -> bool {
        self.tiles.iter().zip(&self.covered).all(|(tile, cov)| {
            tile.iter()
                .all(|&a| !cov[(a + t).rem_euclid(self.m) as usize])
        })
    }

    fn set(&mut self, t: i64, value: bool) {
        for (tile, cov) in self.tiles.iter().zip(self.covered.iter_mut()) {
            for &a in tile {
                cov[(a + t).rem_euclid(self.m) as usize] = value;
            }
        }
        if value {
            self.chosen.push(t);
        } else {
            self.chosen.pop();
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes % 4096 == 1 && self.budget.expired() {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn candidates(&self, u: i64) -> Vec<i64> {
        let mut ts: Vec<i64> = self.tiles[0]
            .iter()
            .map(|&a| (u - a).rem_euclid(self.m))
            .collect();
        ts.sort_unstable();
        ts
    }

    fn next_uncovered(&self, from: usize) -> Option<usize> {
        (from..self.m as usize).find(|&z| !self.covered[0][z])
    }

    /// Visits every complement containing 0; `visit` returns `false` to stop.
    fn run(&mut self, visit: &mut dyn FnMut(&[i64]) -> bool) {
        if !self.fits(0) {
            return;
        }
        self.set(0, true);
        self.descend(0, visit);
        self.set(0, false);
    }

    fn descend(&mut self, from: usize, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        if self.tick() {
            return false;
        }
        let Some(u) = self.next_uncovered(from) else {
            return visit(&self.chosen);
        };
        for t in self.candidates(u as i64) {
            if self.fits(t) {
                self.set(t, true);
                let go_on = self.descend(u, visit);
                self.set(t, false);
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

/// Every `R` in `[0, m)` with `0 in R` such that `A (+) (R + mZ) = Z`, in
/// lexicographic order. Empty when `|A|` does not divide `m` or `A` repeats
/// a residue mod `m`.
pub fn find_complements(a: &IntSet, m: u64) -> Vec<IntSet> {
    if m == 0 || a.is_empty() || !m.is_multiple_of(a.len() as u64) {
        return Vec::new();
    }
    let budget = SearchBudget::unlimited();
    let Some(mut search) = JointCover::new(std::slice::from_ref(a), m, &budget) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    search.run(&mut |r| {
        out.push(IntSet::new(r.iter().copied()));
        true
    });
    out.sort();
    out
}

fn check_family(family: &[IntSet]) -> Result<usize> {
    let first = family
        .first()
        .ok_or_else(|| invalid("family is empty"))?;
    let p = first.len();
    if p == 0 {
        return Err(invalid("family members must be nonempty"));
    }
    if let Some((i, a)) = family.iter().enumerate().find(|(_, a)| a.len() != p) {
        return Err(invalid(format!(
            "family member #{i} has {} elements, expected {p}",
            a.len()
        )));
    }
    Ok(p)
}

/// Smallest-period common complement `(R, m)` with `0 in R` and `m <= m_max`.
pub fn find_common_complement(family: &[IntSet], m_max: u64) -> Result<Option<PeriodicSet>> {
    match find_common_complement_within(family, m_max, &SearchBudget::unlimited())? {
        CommonSearch::Found(t) => Ok(Some(t)),
        _ => Ok(None),
    }
}

/// [`find_common_complement`] under a wall-clock budget.
///
/// Periods are searched concurrently; the result for the smallest period
/// that admits a complement wins, so the answer does not depend on
/// scheduling.
pub fn find_common_complement_within(
    family: &[IntSet],
    m_max: u64,
    budget: &SearchBudget,
) -> Result<CommonSearch> {
    let p = check_family(family)? as u64;
    let timed_out = AtomicBool::new(false);
    let periods: Vec<u64> = (1..=m_max / p).map(|k| k * p).collect();
    let found = periods.into_par_iter().find_map_first(|m| {
        let mut search = JointCover::new(family, m, budget)?;
        let mut hit = None;
        search.run(&mut |r| {
            hit = Some(r.to_vec());
            false
        });
        if search.timed_out {
            timed_out.store(true, Ordering::Relaxed);
        }
        hit.map(|r| PeriodicSet::new(r, m).expect("search keeps residues in range"))
    });
    Ok(match found {
        Some(t) => CommonSearch::Found(t),
        None if timed_out.load(Ordering::Relaxed) => CommonSearch::TimedOut,
        None => CommonSearch::Exhausted,
    })
}
