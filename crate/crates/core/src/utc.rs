//! The two end-to-end experiments.
//!
//! [`utc_verify`] checks one instance of the universal tiling question:
//! given a `p`-point set `Gamma`, every integer spectrum `(1/p) A` found
//! within the search bound must tile `Z` with one common complement.
//!
//! [`roundtrip`] goes through the line: it glues a family of spectra into
//! an interval union `Omega`, confirms `Gamma + pZ` is a spectrum of
//! `Omega`, finds a common complement for the fibers, assembles the tiling
//! of the line and projects it back onto every family member.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exactmath::Rational;
use crate::intervals::{
    assemble_tiling, build_omega, fibers, spectral_verdict, IntervalUnion, OmegaTiling,
    PeriodicSpectrum,
};
use crate::spectra::{enumerate_spectra, is_spectrum, FinitePointSet, IntSet};
use crate::tilings::{
    find_common_complement_within, is_tiling_of_z, CommonSearch, PeriodicSet, SearchBudget,
    TilingCertificate,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UtcVerdict {
    VerifiedWithCertificate,
    InconclusiveNoComplementInBounds,
    NoSpectraInBounds,
}

impl UtcVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            UtcVerdict::VerifiedWithCertificate => "verified-with-certificate",
            UtcVerdict::InconclusiveNoComplementInBounds => "inconclusive-no-complement-in-bounds",
            UtcVerdict::NoSpectraInBounds => "no-spectra-in-bounds",
        }
    }
}

#[derive(Debug, Clone)]
pub struct UtcReport {
    pub p: u64,
    pub gamma: FinitePointSet,
    pub n_max: u64,
    pub m_max: u64,
    pub spectra_found: Vec<IntSet>,
    pub verdict: UtcVerdict,
    pub certificate: Option<PeriodicSet>,
    /// The complement search hit the wall-clock budget before exhausting
    /// every period.
    pub timed_out: bool,
    pub elapsed: Duration,
}

impl UtcReport {
    /// Re-checks the certificate against every family member.
    pub fn recheck(&self) -> bool {
        match (&self.verdict, &self.certificate) {
            (UtcVerdict::VerifiedWithCertificate, Some(t)) => self
                .spectra_found
                .iter()
                .all(|a| TilingCertificate::certify(a, t).is_some_and(|c| c.recheck())),
            (UtcVerdict::VerifiedWithCertificate, None) => false,
            (_, cert) => cert.is_none(),
        }
    }
}

pub fn utc_verify(p: u64, gamma: &FinitePointSet, n_max: u64, m_max: u64) -> Result<UtcReport> {
    utc_verify_within(p, gamma, n_max, m_max, None)
}

/// [`utc_verify`] with an optional wall-clock limit on the complement
/// search. Exhausting the limit yields an inconclusive report.
pub fn utc_verify_within(
    p: u64,
    gamma: &FinitePointSet,
    n_max: u64,
    m_max: u64,
    time_limit: Option<Duration>,
) -> Result<UtcReport> {
    let started = Instant::now();
    PeriodicSpectrum::new(gamma.clone(), p)?;
    let budget = match time_limit {
        Some(d) => SearchBudget::until(started + d),
        None => SearchBudget::unlimited(),
    };
    let spectra_found = enumerate_spectra(gamma, p, n_max)?;
    let mut report = UtcReport {
        p,
        gamma: gamma.clone(),
        n_max,
        m_max,
        spectra_found,
        verdict: UtcVerdict::NoSpectraInBounds,
        certificate: None,
        timed_out: false,
        elapsed: Duration::ZERO,
    };
    if !report.spectra_found.is_empty() {
        match find_common_complement_within(&report.spectra_found, m_max, &budget)? {
            CommonSearch::Found(t) => {
                report.verdict = UtcVerdict::VerifiedWithCertificate;
                report.certificate = Some(t);
            }
            CommonSearch::Exhausted => {
                report.verdict = UtcVerdict::InconclusiveNoComplementInBounds;
            }
            CommonSearch::TimedOut => {
                report.verdict = UtcVerdict::InconclusiveNoComplementInBounds;
                report.timed_out = true;
            }
        }
    }
    if !report.recheck() {
        return Err(invalid(
            "internal: complement failed independent re-verification",
        ));
    }
    report.elapsed = started.elapsed();
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct RoundTripReport {
    pub p: u64,
    pub gamma: FinitePointSet,
    pub family: Vec<IntSet>,
    pub breakpoints: Vec<Rational>,
    pub m_max: u64,
    pub omega: IntervalUnion,
    pub spectral_ok: bool,
    pub omega_tiling: Option<OmegaTiling>,
    pub projected_complement: Option<PeriodicSet>,
    pub consistency: bool,
}

/// Builds `Omega` from the family, then checks in turn: `Gamma + pZ` is a
/// spectrum of `Omega`; the fibers share a complement `(R, m)` with
/// `m <= m_max`; `Omega` tiles the line by `(1/p)(R + mZ)`; and `R + mZ`
/// tiles `Z` with every family member.
pub fn roundtrip(
    p: u64,
    gamma: &FinitePointSet,
    family: &[IntSet],
    breakpoints: &[Rational],
    m_max: u64,
) -> Result<RoundTripReport> {
    PeriodicSpectrum::new(gamma.clone(), p)?;
    for (index, a) in family.iter().enumerate() {
        if !is_spectrum(gamma, &FinitePointSet::scaled_integers(a, p)) {
            return Err(Error::InvalidFamily {
                index,
                set: a.elements().to_vec(),
            });
        }
    }
    let omega = build_omega(p, family, breakpoints)?;
    let spectral_ok = spectral_verdict(&omega, gamma, p)?;
    let fiber_family = fibers(&omega, p)?.distinct_fibers();
    let found = match find_common_complement_within(&fiber_family, m_max, &SearchBudget::unlimited())? {
        CommonSearch::Found(t) => Some(t),
        _ => None,
    };
    let omega_tiling = match &found {
        Some(t) => Some(assemble_tiling(&omega, p, t)?),
        None => None,
    };
    let projected_ok = found
        .as_ref()
        .is_some_and(|t| family.iter().all(|a| is_tiling_of_z(a, t)));
    let consistency =
        spectral_ok && projected_ok && omega_tiling.as_ref().is_some_and(OmegaTiling::recheck);
    Ok(RoundTripReport {
        p,
        gamma: gamma.clone(),
        family: family.to_vec(),
        breakpoints: breakpoints.to_vec(),
        m_max,
        omega,
        spectral_ok,
        omega_tiling,
        projected_complement: found,
        consistency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;

    fn ints(v: &[i64]) -> FinitePointSet {
        FinitePointSet::from_integers(v.iter().copied())
    }

    #[test]
    fn utc_examples() {
        let r = utc_verify(2, &ints(&[0, 1]), 5, 8).unwrap();
        assert_eq!(r.verdict, UtcVerdict::VerifiedWithCertificate);
        assert_eq!(r.spectra_found.len(), 3);
        assert_eq!(r.certificate, Some(PeriodicSet::new([0], 2).unwrap()));

        let r = utc_verify(4, &ints(&[0, 1, 2, 3]), 7, 8).unwrap();
        assert_eq!(r.verdict, UtcVerdict::VerifiedWithCertificate);
        assert_eq!(r.spectra_found.len(), 8);
        assert_eq!(r.certificate, Some(PeriodicSet::new([0], 4).unwrap()));
        assert!(r.recheck());
    }

    #[test]
    fn utc_third_example_is_decided_by_the_oracle() {
        // 1 + exp(2 pi i d / 6) = 0 iff d = 3 mod 6, so within n_max = 6 the
        // only spectrum is {0, 3}, and it tiles by 2Z.
        let g = FinitePointSet::new([rational(0, 1), rational(1, 3)]);
        let oracle = crate::spectra::brute_force_spectra(&g, 2, 6).unwrap();
        assert_eq!(oracle, vec![IntSet::from([0, 3])]);
        let r = utc_verify(2, &g, 6, 6).unwrap();
        assert_eq!(r.spectra_found, oracle);
        assert_eq!(r.verdict, UtcVerdict::VerifiedWithCertificate);
        assert_eq!(r.certificate, Some(PeriodicSet::new([0], 2).unwrap()));
    }

    #[test]
    fn utc_no_spectra_and_inconclusive() {
        let g = FinitePointSet::new([rational(0, 1), rational(1, 3)]);
        let r = utc_verify(2, &g, 2, 6).unwrap();
        assert_eq!(r.verdict, UtcVerdict::NoSpectraInBounds);
        assert!(r.certificate.is_none());

        // m_max below p: nothing to search
        let r = utc_verify(2, &ints(&[0, 1]), 5, 1).unwrap();
        assert_eq!(r.verdict, UtcVerdict::InconclusiveNoComplementInBounds);
        assert!(!r.timed_out);
    }

    #[test]
    fn utc_validates_gamma() {
        assert!(utc_verify(2, &ints(&[1, 2]), 5, 8).is_err());
        assert!(utc_verify(3, &ints(&[0, 1]), 5, 8).is_err());
    }

    #[test]
    fn roundtrip_examples() {
        let fam = [IntSet::from([0, 1]), IntSet::from([0, 3])];
        let bps = [rational(0, 1), rational(1, 4), rational(1, 2)];
        let r = roundtrip(2, &ints(&[0, 1]), &fam, &bps, 4).unwrap();
        assert_eq!(r.omega.to_string(), "[0,3/4);[7/4,2)");
        assert!(r.spectral_ok);
        assert_eq!(r.projected_complement, Some(PeriodicSet::new([0], 2).unwrap()));
        let t = r.omega_tiling.as_ref().unwrap();
        assert_eq!(t.translation_period(), rational(1, 1));
        assert!(r.consistency);

        let r = roundtrip(1, &ints(&[0]), &[IntSet::from([0])], &[rational(0, 1), rational(1, 1)], 1)
            .unwrap();
        assert_eq!(r.omega.to_string(), "[0,1)");
        assert!(r.consistency);
    }

    #[test]
    fn roundtrip_rejects_non_spectra() {
        let fam = [IntSet::from([0, 1]), IntSet::from([0, 2])];
        let bps = [rational(0, 1), rational(1, 4), rational(1, 2)];
        let err = roundtrip(2, &ints(&[0, 1]), &fam, &bps, 4).unwrap_err();
        assert_eq!(err, Error::InvalidFamily { index: 1, set: vec![0, 2] });
    }

    #[test]
    fn roundtrip_without_complement_is_not_consistent() {
        let fam = [IntSet::from([0, 1]), IntSet::from([0, 3])];
        let bps = [rational(0, 1), rational(1, 4), rational(1, 2)];
        let r = roundtrip(2, &ints(&[0, 1]), &fam, &bps, 1).unwrap();
        assert!(r.spectral_ok);
        assert!(r.projected_complement.is_none());
        assert!(!r.consistency);
    }
}
