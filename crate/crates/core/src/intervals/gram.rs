use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{is_in_lattice, IntervalUnion};
use crate::error::{invalid, Result};
use crate::exactmath::{rational, rational_to_f64, rem_rational, Rational};
use crate::intervals::PeriodicSpectrum;

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Normalized inner product `<e_l, e_l'>` in `L^2(Omega)`:
/// `(1/|Omega|) sum_i (e(mu b_i) - e(mu a_i)) / (2 pi i mu)`, `mu = l - l'`.
///
/// Each term is evaluated as `e(mu (a+b)/2) (b-a) sinc(pi mu (b-a))`, which
/// is the same quantity without the cancellation near `mu = 0`. Returns 1
/// when `l = l'` and NaN for empty `Omega`.
pub fn gram_entry(omega: &IntervalUnion, lambda: f64, lambda_prime: f64) -> Complex64 {
    let mu = lambda - lambda_prime;
    let measure = rational_to_f64(&omega.measure());
    if mu == 0.0 {
        return if measure > 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(f64::NAN, f64::NAN)
        };
    }
    let sum: Complex64 = omega
        .intervals()
        .iter()
        .map(|iv| {
            let a = rational_to_f64(iv.start());
            let b = rational_to_f64(iv.end());
            let len = rational_to_f64(&iv.length());
            Complex64::from_polar(len * sinc(PI * mu * len), PI * mu * (a + b))
        })
        .sum();
    sum / measure
}

/// [`gram_entry`] for rational frequencies, with phases reduced exactly
/// mod 1 before conversion to floating point.
pub fn gram_entry_rational(omega: &IntervalUnion, lambda: &Rational, lambda_prime: &Rational) -> Complex64 {
    let mu = lambda - lambda_prime;
    let measure = rational_to_f64(&omega.measure());
    let one = rational(1, 1);
    let half = rational(1, 2);
    let sum: Complex64 = omega
        .intervals()
        .iter()
        .map(|iv| {
            let len = iv.length();
            let turns = rem_rational(&(&mu * (iv.start() + iv.end()) * &half), &one);
            let lenf = rational_to_f64(&len);
            let muf = rational_to_f64(&mu);
            Complex64::from_polar(
                lenf * sinc(PI * muf * lenf),
                2.0 * PI * rational_to_f64(&turns),
            )
        })
        .sum();
    sum / measure
}

/// `|g(l + p, l') - ((l - l')/(l + p - l')) g(l, l')|` where `g` is
/// [`gram_entry`]; zero in exact arithmetic when every endpoint of `Omega`
/// lies in `(1/p)Z`.
pub fn period_identity_residual(omega: &IntervalUnion, p: u64, lambda: f64, lambda_prime: f64) -> Result<f64> {
    if p == 0 {
        return Err(invalid("p must be positive"));
    }
    if let Some(e) = omega.endpoints().find(|e| !is_in_lattice(e, p)) {
        return Err(invalid(format!(
            "endpoint {} is not in (1/{p})Z",
            crate::exactmath::format_rational(e)
        )));
    }
    let shifted = lambda + p as f64;
    if shifted == lambda_prime {
        return Err(invalid("lambda + p must differ from lambda'"));
    }
    let ratio = (lambda - lambda_prime) / (shifted - lambda_prime);
    let lhs = gram_entry(omega, shifted, lambda_prime);
    let rhs = gram_entry(omega, lambda, lambda_prime) * ratio;
    Ok((lhs - rhs).norm())
}

/// Deviation of the truncated Gram matrix of `{e_l : l in Lambda, |l| <= bound}`
/// from the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GramSummary {
    pub size: usize,
    pub max_off_diagonal: f64,
    pub max_diagonal_deviation: f64,
}

impl GramSummary {
    pub fn within(&self, tolerance: f64) -> bool {
        self.max_off_diagonal < tolerance && self.max_diagonal_deviation < tolerance
    }
}

pub fn truncated_gram(omega: &IntervalUnion, spectrum: &PeriodicSpectrum, bound: &Rational) -> GramSummary {
    let freqs = spectrum.elements_between(&-bound.clone(), bound);
    let rows: Vec<(f64, f64)> = freqs
        .par_iter()
        .enumerate()
        .map(|(i, l)| {
            let mut off = 0.0f64;
            let mut diag = 0.0f64;
            for (j, l2) in freqs.iter().enumerate() {
                let g = gram_entry_rational(omega, l, l2);
                if i == j {
                    diag = diag.max((g - Complex64::new(1.0, 0.0)).norm());
                } else {
                    off = off.max(g.norm());
                }
            }
            (off, diag)
        })
        .collect();
    GramSummary {
        size: freqs.len(),
        max_off_diagonal: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        max_diagonal_deviation: rows.iter().map(|r| r.1).fold(0.0, f64::max),
    }
}
