//! Job descriptions and their execution into certificate documents.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::format::{canonical_json, parse_point_set, sha256_hex, to_value};
use crate::error::{invalid, Error, Result};
use crate::exactmath::{format_rational, parse_rational, rational, Rational};
use crate::intervals::{
    build_omega, fibers, spectral_verdict, truncated_gram, verify_omega_tiling, IntervalUnion,
    PeriodicSpectrum,
};
use crate::spectra::{
    admissible_differences, brute_force_spectra, enumerate_spectra, hadamard_defect,
    is_spectrum, FinitePointSet, IntSet,
};
use crate::tilings::{find_common_complement, find_complements, tiles_cyclic, PeriodicSet};
use crate::utc::{roundtrip, utc_verify_within, UtcVerdict};

pub const SCHEMA_VERSION: u64 = 1;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// One unit of work. Rationals are carried as exact `"n/d"` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum JobSpec {
    CheckSpectrum {
        gamma: Vec<String>,
        b: Vec<String>,
    },
    EnumSpectra {
        p: u64,
        gamma: Vec<String>,
        n_max: u64,
        #[serde(default)]
        oracle: bool,
    },
    FindComplement {
        family: Vec<IntSet>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m_max: Option<u64>,
    },
    UtcVerify {
        p: u64,
        gamma: Vec<String>,
        n_max: u64,
        m_max: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        time_limit_secs: Option<u64>,
    },
    BuildOmega {
        p: u64,
        family: Vec<IntSet>,
        breakpoints: Vec<String>,
    },
    VerifyOmega {
        omega: IntervalUnion,
        #[serde(default = "one")]
        p: u64,
        t_residues: Vec<i64>,
        t_period: u64,
    },
    Roundtrip {
        p: u64,
        gamma: Vec<String>,
        family: Vec<IntSet>,
        breakpoints: Vec<String>,
        m_max: u64,
    },
    GramCheck {
        omega: IntervalUnion,
        gamma: Vec<String>,
        p: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bound: Option<String>,
        #[serde(default = "default_tolerance")]
        tolerance: f64,
    },
}

fn one() -> u64 {
    1
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// A job file: the job itself plus an optional output path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobFile {
    #[serde(flatten)]
    pub job: JobSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<std::path::PathBuf>,
}

/// Process exit status of a job.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    /// Verified or true verdict.
    Success = 0,
    /// Malformed input or violated preconditions.
    InvalidInput = 1,
    /// Bounded search found nothing; not a refutation.
    Inconclusive = 2,
    /// Definite negative verdict.
    Negative = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            ExitStatus::Success
        } else {
            ExitStatus::Negative
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: ExitStatus,
    /// Full certificate document.
    pub certificate: Value,
    pub summary: String,
}

fn strings(points: &FinitePointSet) -> Vec<String> {
    points.to_strings()
}

fn rationals(field: &str, items: &[String]) -> Result<Vec<Rational>> {
    items.iter().map(|s| parse_rational(field, s)).collect()
}

fn complement_json(t: &PeriodicSet) -> Value {
    json!({ "residues": t.residues(), "period": t.period() })
}

fn require_positive(field: &str, v: u64) -> Result<()> {
    if v == 0 {
        return Err(Error::Parse {
            field: field.to_string(),
            reason: "must be positive".to_string(),
        });
    }
    Ok(())
}

impl JobSpec {
    pub fn command(&self) -> &'static str {
        match self {
            JobSpec::CheckSpectrum { .. } => "check-spectrum",
            JobSpec::EnumSpectra { .. } => "enum-spectra",
            JobSpec::FindComplement { .. } => "find-complement",
            JobSpec::UtcVerify { .. } => "utc-verify",
            JobSpec::BuildOmega { .. } => "build-omega",
            JobSpec::VerifyOmega { .. } => "verify-omega",
            JobSpec::Roundtrip { .. } => "roundtrip",
            JobSpec::GramCheck { .. } => "gram-check",
        }
    }

    /// Validates every field and rewrites rationals and sets in canonical
    /// form, so equal jobs hash equally.
    pub fn canonicalize(&self) -> Result<JobSpec> {
        let canon_points = |field: &str, v: &[String]| -> Result<Vec<String>> {
            Ok(strings(&parse_point_set(field, v)?))
        };
        let canon_list = |field: &str, v: &[String]| -> Result<Vec<String>> {
            Ok(rationals(field, v)?.iter().map(format_rational).collect())
        };
        Ok(match self {
            JobSpec::CheckSpectrum { gamma, b } => JobSpec::CheckSpectrum {
                gamma: canon_points("gamma", gamma)?,
                b: canon_points("b", b)?,
            },
            JobSpec::EnumSpectra { p, gamma, n_max, oracle } => {
                require_positive("p", *p)?;
                JobSpec::EnumSpectra {
                    p: *p,
                    gamma: canon_points("gamma", gamma)?,
                    n_max: *n_max,
                    oracle: *oracle,
                }
            }
            JobSpec::FindComplement { family, m, m_max } => {
                match (m, m_max) {
                    (Some(m), None) => require_positive("m", *m)?,
                    (None, Some(mm)) => require_positive("m_max", *mm)?,
                    _ => {
                        return Err(Error::Parse {
                            field: "m".to_string(),
                            reason: "give exactly one of m or m_max".to_string(),
                        })
                    }
                }
                if m.is_some() && family.len() != 1 {
                    return Err(Error::Parse {
                        field: "family".to_string(),
                        reason: "listing complements for a fixed m takes exactly one set"
                            .to_string(),
                    });
                }
                JobSpec::FindComplement {
                    family: family.clone(),
                    m: *m,
                    m_max: *m_max,
                }
            }
            JobSpec::UtcVerify { p, gamma, n_max, m_max, time_limit_secs } => {
                require_positive("p", *p)?;
                require_positive("m_max", *m_max)?;
                JobSpec::UtcVerify {
                    p: *p,
                    gamma: canon_points("gamma", gamma)?,
                    n_max: *n_max,
                    m_max: *m_max,
                    time_limit_secs: *time_limit_secs,
                }
            }
            JobSpec::BuildOmega { p, family, breakpoints } => {
                require_positive("p", *p)?;
                JobSpec::BuildOmega {
                    p: *p,
                    family: family.clone(),
                    breakpoints: canon_list("breakpoints", breakpoints)?,
                }
            }
            JobSpec::VerifyOmega { omega, p, t_residues, t_period } => {
                require_positive("p", *p)?;
                require_positive("t_period", *t_period)?;
                let t = PeriodicSet::new(t_residues.iter().copied(), *t_period).map_err(|e| {
                    Error::Parse {
                        field: "t_residues".to_string(),
                        reason: e.to_string(),
                    }
                })?;
                JobSpec::VerifyOmega {
                    omega: omega.clone(),
                    p: *p,
                    t_residues: t.residues().elements().to_vec(),
                    t_period: *t_period,
                }
            }
            JobSpec::Roundtrip { p, gamma, family, breakpoints, m_max } => {
                require_positive("p", *p)?;
                require_positive("m_max", *m_max)?;
                JobSpec::Roundtrip {
                    p: *p,
                    gamma: canon_points("gamma", gamma)?,
                    family: family.clone(),
                    breakpoints: canon_list("breakpoints", breakpoints)?,
                    m_max: *m_max,
                }
            }
            JobSpec::GramCheck { omega, gamma, p, bound, tolerance } => {
                require_positive("p", *p)?;
                if !(tolerance.is_finite() && *tolerance > 0.0) {
                    return Err(Error::Parse {
                        field: "tolerance".to_string(),
                        reason: "must be a positive number".to_string(),
                    });
                }
                let bound = match bound {
                    Some(b) => {
                        let r = parse_rational("bound", b)?;
                        if r <= rational(0, 1) {
                            return Err(Error::Parse {
                                field: "bound".to_string(),
                                reason: "must be positive".to_string(),
                            });
                        }
                        Some(format_rational(&r))
                    }
                    None => None,
                };
                JobSpec::GramCheck {
                    omega: omega.clone(),
                    gamma: canon_points("gamma", gamma)?,
                    p: *p,
                    bound,
                    tolerance: *tolerance,
                }
            }
        })
    }

    /// Runs the job. Errors are input errors (exit status 1).
    pub fn execute(&self) -> Result<Outcome> {
        let job = self.canonicalize()?;
        let job_value = to_value(&job);
        let input_hash = sha256_hex(canonical_json(&job_value).as_bytes());
        let started = Instant::now();
        let (status, verdict, result, summary) = job.evaluate()?;
        let elapsed = started.elapsed();
        let certificate = json!({
            "schema_version": SCHEMA_VERSION,
            "command": job.command(),
            "job": job_value,
            "input_hash": input_hash,
            "verdict": verdict,
            "result": result,
            "timing": { "elapsed_seconds": round_seconds(elapsed) },
        });
        Ok(Outcome {
            status,
            certificate,
            summary,
        })
    }

    fn evaluate(&self) -> Result<(ExitStatus, String, Value, String)> {
        Ok(match self {
            JobSpec::CheckSpectrum { gamma, b } => {
                let g = parse_point_set("gamma", gamma)?;
                let b = parse_point_set("b", b)?;
                let ok = is_spectrum(&g, &b);
                let defect = hadamard_defect(&g, &b);
                (
                    ExitStatus::from_bool(ok),
                    ok.to_string(),
                    json!({
                        "is_spectrum": ok,
                        "float_defect": if defect.is_finite() { json!(defect) } else { Value::Null },
                    }),
                    format!("{b} is {}a spectrum of {g}", if ok { "" } else { "not " }),
                )
            }
            JobSpec::EnumSpectra { p, gamma, n_max, oracle } => {
                let g = parse_point_set("gamma", gamma)?;
                let spectra = enumerate_spectra(&g, *p, *n_max)?;
                let diffs = admissible_differences(&g, *p, *n_max)?;
                let mut result = json!({
                    "spectra": spectra,
                    "count": spectra.len(),
                    "admissible_differences": diffs,
                });
                let mut status = ExitStatus::Success;
                if *oracle {
                    let brute = brute_force_spectra(&g, *p, *n_max)?;
                    let agrees = brute == spectra;
                    result["oracle_agrees"] = json!(agrees);
                    status = ExitStatus::from_bool(agrees);
                }
                (
                    status,
                    "listed".to_string(),
                    result,
                    format!(
                        "{} spectra (1/{p})A of {g} with A in [0, {n_max}]",
                        spectra.len()
                    ),
                )
            }
            JobSpec::FindComplement { family, m, m_max } => match (m, m_max) {
                (Some(m), _) => {
                    let found = find_complements(&family[0], *m);
                    let status = if found.is_empty() {
                        ExitStatus::Inconclusive
                    } else {
                        ExitStatus::Success
                    };
                    (
                        status,
                        if found.is_empty() { "none-with-period" } else { "found" }.to_string(),
                        json!({ "complements": found, "period": m }),
                        format!("{} complements of {} with period {m}", found.len(), family[0]),
                    )
                }
                (None, Some(m_max)) => match find_common_complement(family, *m_max)? {
                    Some(t) => (
                        ExitStatus::Success,
                        "found".to_string(),
                        json!({ "complement": complement_json(&t) }),
                        format!(
                            "common complement {} + {}Z for {} sets",
                            t.residues(),
                            t.period(),
                            family.len()
                        ),
                    ),
                    None => (
                        ExitStatus::Inconclusive,
                        "inconclusive-no-complement-in-bounds".to_string(),
                        json!({ "complement": Value::Null }),
                        format!("no common complement with period <= {m_max}"),
                    ),
                },
                (None, None) => unreachable!("canonicalize requires m or m_max"),
            },
            JobSpec::UtcVerify { p, gamma, n_max, m_max, time_limit_secs } => {
                let g = parse_point_set("gamma", gamma)?;
                let report = utc_verify_within(
                    *p,
                    &g,
                    *n_max,
                    *m_max,
                    time_limit_secs.map(Duration::from_secs),
                )?;
                let status = match report.verdict {
                    UtcVerdict::VerifiedWithCertificate => ExitStatus::Success,
                    _ => ExitStatus::Inconclusive,
                };
                (
                    status,
                    report.verdict.as_str().to_string(),
                    json!({
                        "spectra_found": report.spectra_found,
                        "family_size": report.spectra_found.len(),
                        "certificate": report.certificate.as_ref().map(complement_json),
                        "timed_out": report.timed_out,
                    }),
                    format!(
                        "UTC({p}) for {g}: {} spectra, {}",
                        report.spectra_found.len(),
                        match &report.certificate {
                            Some(t) => format!("common complement {} + {}Z", t.residues(), t.period()),
                            None => report.verdict.as_str().to_string(),
                        }
                    ),
                )
            }
            JobSpec::BuildOmega { p, family, breakpoints } => {
                let bps = rationals("breakpoints", breakpoints)?;
                let omega = build_omega(*p, family, &bps)?;
                let dec = fibers(&omega, *p)?;
                let cells: Vec<Value> = dec
                    .cells()
                    .iter()
                    .map(|c| json!({ "cell": c.cell.to_string(), "fiber": c.fiber }))
                    .collect();
                (
                    ExitStatus::Success,
                    "built".to_string(),
                    json!({
                        "omega": omega,
                        "measure": format_rational(&omega.measure()),
                        "fibers": cells,
                    }),
                    format!("Omega = {omega}"),
                )
            }
            JobSpec::VerifyOmega { omega, p, t_residues, t_period } => {
                let t = PeriodicSet::new(t_residues.iter().copied(), *t_period)?;
                let ok = verify_omega_tiling(omega, *p, &t);
                (
                    ExitStatus::from_bool(ok),
                    ok.to_string(),
                    json!({
                        "tiles": ok,
                        "translation_period": format_rational(&rational(*t_period as i64, *p as i64)),
                    }),
                    format!(
                        "{omega} {} the line by (1/{p})({} + {t_period}Z)",
                        if ok { "tiles" } else { "does not tile" },
                        t.residues()
                    ),
                )
            }
            JobSpec::Roundtrip { p, gamma, family, breakpoints, m_max } => {
                let g = parse_point_set("gamma", gamma)?;
                let bps = rationals("breakpoints", breakpoints)?;
                let r = roundtrip(*p, &g, family, &bps, *m_max)?;
                let status = if r.consistency {
                    ExitStatus::Success
                } else if r.spectral_ok && r.projected_complement.is_none() {
                    ExitStatus::Inconclusive
                } else {
                    ExitStatus::Negative
                };
                let verdict = match status {
                    ExitStatus::Success => "consistent",
                    ExitStatus::Inconclusive => "inconclusive-no-complement-in-bounds",
                    _ => "inconsistent",
                };
                (
                    status,
                    verdict.to_string(),
                    json!({
                        "omega": r.omega,
                        "spectral_ok": r.spectral_ok,
                        "projected_complement": r.projected_complement.as_ref().map(complement_json),
                        "omega_tiles": r.omega_tiling.as_ref().map(|t| t.recheck()),
                        "translation_period": r.omega_tiling.as_ref().map(|t| format_rational(&t.translation_period())),
                        "consistency": r.consistency,
                    }),
                    format!("Omega = {}: {verdict}", r.omega),
                )
            }
            JobSpec::GramCheck { omega, gamma, p, bound, tolerance } => {
                let g = parse_point_set("gamma", gamma)?;
                let spectrum = PeriodicSpectrum::new(g.clone(), *p)?;
                let bound = match bound {
                    Some(b) => parse_rational("bound", b)?,
                    None => rational(3 * *p as i64, 1),
                };
                let exact = spectral_verdict(omega, &g, *p)?;
                let gram = truncated_gram(omega, &spectrum, &bound);
                let float_ok = gram.within(*tolerance);
                let contradiction = exact && !float_ok;
                (
                    ExitStatus::from_bool(exact && float_ok),
                    exact.to_string(),
                    json!({
                        "exact_spectral": exact,
                        "bound": format_rational(&bound),
                        "gram_size": gram.size,
                        "max_off_diagonal": gram.max_off_diagonal,
                        "max_diagonal_deviation": gram.max_diagonal_deviation,
                        "float_within_tolerance": float_ok,
                        "contradiction": contradiction,
                    }),
                    format!(
                        "{g} + {p}Z {} a spectrum of {omega}; Gram off-diagonal max {:.3e}",
                        if exact { "is" } else { "is not" },
                        gram.max_off_diagonal
                    ),
                )
            }
        })
    }
}

fn round_seconds(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e6
}

/// Outcome of re-loading a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recheck {
    pub hash_ok: bool,
    pub canonical: bool,
    pub same_result: bool,
    pub independent_ok: bool,
}

impl Recheck {
    pub fn ok(&self) -> bool {
        self.hash_ok && self.canonical && self.same_result && self.independent_ok
    }
}

/// Re-verifies a certificate document produced by [`JobSpec::execute`].
pub fn recheck_certificate(text: &str) -> Result<Recheck> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        field: "certificate".to_string(),
        reason: e.to_string(),
    })?;
    if doc["schema_version"] != json!(SCHEMA_VERSION) {
        return Err(invalid(format!(
            "unsupported schema_version {}",
            doc["schema_version"]
        )));
    }
    let job: JobSpec = serde_json::from_value(doc["job"].clone()).map_err(|e| Error::Parse {
        field: "job".to_string(),
        reason: e.to_string(),
    })?;
    let hash = sha256_hex(canonical_json(&doc["job"]).as_bytes());
    let hash_ok = doc["input_hash"] == json!(hash) && to_value(&job.canonicalize()?) == doc["job"];
    let canonical = canonical_json(&doc) == text;
    let again = job.execute()?;
    let same_result = again.certificate["verdict"] == doc["verdict"]
        && again.certificate["result"] == doc["result"];
    let independent_ok = independent_check(&job, &doc["result"])?;
    Ok(Recheck {
        hash_ok,
        canonical,
        same_result,
        independent_ok,
    })
}

fn stored_complement(v: &Value) -> Result<Option<PeriodicSet>> {
    if v.is_null() {
        return Ok(None);
    }
    let residues: Vec<i64> = serde_json::from_value(v["residues"].clone())
        .map_err(|e| invalid(format!("certificate residues: {e}")))?;
    let period = v["period"]
        .as_u64()
        .ok_or_else(|| invalid("certificate period"))?;
    Ok(Some(PeriodicSet::new(residues, period)?))
}

/// Checks the stored claim directly, without re-running the search.
fn independent_check(job: &JobSpec, result: &Value) -> Result<bool> {
    Ok(match job {
        JobSpec::UtcVerify { .. } => {
            let family: Vec<IntSet> = serde_json::from_value(result["spectra_found"].clone())
                .map_err(|e| invalid(format!("spectra_found: {e}")))?;
            match stored_complement(&result["certificate"])? {
                Some(t) => family
                    .iter()
                    .all(|a| tiles_cyclic(a, t.residues(), t.period())),
                None => true,
            }
        }
        JobSpec::FindComplement { family, m_max: Some(_), .. } => {
            match stored_complement(&result["complement"])? {
                Some(t) => family
                    .iter()
                    .all(|a| tiles_cyclic(a, t.residues(), t.period())),
                None => true,
            }
        }
        JobSpec::FindComplement { family, m: Some(m), .. } => {
            let found: Vec<IntSet> = serde_json::from_value(result["complements"].clone())
                .map_err(|e| invalid(format!("complements: {e}")))?;
            found.iter().all(|r| tiles_cyclic(&family[0], r, *m))
        }
        JobSpec::Roundtrip { p, .. } => {
            let omega: IntervalUnion = serde_json::from_value(result["omega"].clone())
                .map_err(|e| invalid(format!("omega: {e}")))?;
            match stored_complement(&result["projected_complement"])? {
                Some(t) => verify_omega_tiling(&omega, *p, &t) == (result["omega_tiles"] == json!(true)),
                None => true,
            }
        }
        JobSpec::EnumSpectra { gamma, p, .. } => {
            let g = parse_point_set("gamma", gamma)?;
            let spectra: Vec<IntSet> = serde_json::from_value(result["spectra"].clone())
                .map_err(|e| invalid(format!("spectra: {e}")))?;
            spectra
                .iter()
                .all(|a| is_spectrum(&g, &FinitePointSet::scaled_integers(a, *p)))
        }
        _ => true,
    })
}
