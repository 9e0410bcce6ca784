//! Seeded generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use spectile::exactmath::{rational, Rational};
use spectile::intervals::{build_omega, IntervalUnion};
use spectile::spectra::{enumerate_spectra, FinitePointSet, IntSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ints(v: &[i64]) -> FinitePointSet {
    FinitePointSet::from_integers(v.iter().copied())
}

pub fn pts(v: &[(i64, i64)]) -> FinitePointSet {
    FinitePointSet::new(v.iter().map(|&(n, d)| rational(n, d)))
}

/// Strictly increasing rationals `0 = r_1 < ... < r_{n+1} = 1/p`.
pub fn random_breakpoints(rng: &mut impl Rng, p: u64, n: usize) -> Vec<Rational> {
    let den = 4 * n as i64 * p as i64 * rng.gen_range(1..=3);
    // choose n-1 distinct interior numerators in (0, den/p)
    let top = den / p as i64;
    let mut interior: Vec<i64> = (1..top).collect();
    interior.shuffle(rng);
    let mut chosen: Vec<i64> = interior.into_iter().take(n - 1).collect();
    chosen.sort_unstable();
    std::iter::once(0)
        .chain(chosen)
        .chain(std::iter::once(top))
        .map(|k| rational(k, den))
        .collect()
}

/// A base set `Gamma` with `p` points together with its integer spectra.
pub struct SpectralBase {
    pub p: u64,
    pub gamma: FinitePointSet,
    pub spectra: Vec<IntSet>,
}

pub fn known_bases(n_max: u64) -> Vec<SpectralBase> {
    let cases: Vec<(u64, FinitePointSet)> = vec![
        (1, ints(&[0])),
        (2, ints(&[0, 1])),
        (2, pts(&[(0, 1), (1, 3)])),
        (2, pts(&[(0, 1), (3, 2)])),
        (3, ints(&[0, 1, 2])),
        (4, ints(&[0, 1, 2, 3])),
        (4, pts(&[(0, 1), (1, 2), (1, 1), (3, 2)])),
        (4, pts(&[(0, 1), (1, 2), (2, 1), (5, 2)])),
        (3, pts(&[(0, 1), (2, 3), (4, 3)])),
    ];
    cases
        .into_iter()
        .map(|(p, gamma)| {
            let spectra = enumerate_spectra(&gamma, p, n_max).unwrap();
            SpectralBase { p, gamma, spectra }
        })
        .filter(|b| !b.spectra.is_empty())
        .collect()
}

/// Random `Gamma` in `[0, p)` containing 0 with small denominators; only
/// those with at least one spectrum in `[0, n_max]` are returned.
pub fn random_bases(rng: &mut impl Rng, count: usize, n_max: u64) -> Vec<SpectralBase> {
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 20_000 {
        attempts += 1;
        let p: u64 = rng.gen_range(2..=4);
        let den: i64 = *[1, 2, 3, 4].choose(rng).unwrap();
        let mut pool: Vec<i64> = (1..p as i64 * den).collect();
        pool.shuffle(rng);
        let gamma = FinitePointSet::new(
            std::iter::once(0)
                .chain(pool.into_iter().take(p as usize - 1))
                .map(|k| rational(k, den)),
        );
        let spectra = enumerate_spectra(&gamma, p, n_max).unwrap();
        if !spectra.is_empty() {
            out.push(SpectralBase { p, gamma, spectra });
        }
    }
    out
}

/// A spectral instance `(Omega, Gamma, p)` built from a random sub-family.
pub struct SpectralInstance {
    pub p: u64,
    pub gamma: FinitePointSet,
    pub family: Vec<IntSet>,
    pub breakpoints: Vec<Rational>,
    pub omega: IntervalUnion,
}

pub fn instance_from(rng: &mut impl Rng, base: &SpectralBase, max_members: usize) -> SpectralInstance {
    let n = rng.gen_range(1..=max_members);
    let family: Vec<IntSet> = (0..n)
        .map(|_| base.spectra.choose(rng).unwrap().clone())
        .collect();
    let breakpoints = random_breakpoints(rng, base.p, n);
    let omega = build_omega(base.p, &family, &breakpoints).unwrap();
    SpectralInstance {
        p: base.p,
        gamma: base.gamma.clone(),
        family,
        breakpoints,
        omega,
    }
}

/// The fixed corpus of spectral instances used by the verdict cross-checks.
pub fn spectral_corpus() -> Vec<SpectralInstance> {
    let mut rng = rng(0x5eed_0001);
    let mut bases = known_bases(12);
    bases.extend(random_bases(&mut rng, 12, 12));
    let mut out = Vec::new();
    for base in &bases {
        for _ in 0..4 {
            out.push(instance_from(&mut rng, base, 3));
        }
    }
    out
}
