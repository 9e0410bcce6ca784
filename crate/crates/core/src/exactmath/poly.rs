use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};

/// Dense integer polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] += BigInt::one();
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Division by a monic divisor, returning `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d = divisor
            .degree()
            .ok_or_else(|| invalid("division by the zero polynomial"))?;
        if !divisor.leading().is_some_and(One::is_one) {
            return Err(invalid("divisor must be monic"));
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let q = std::mem::take(&mut rem[i]);
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs[..d].iter().enumerate() {
                if !c.is_zero() {
                    rem[i - d + j] -= &q * c;
                }
            }
            quot[i - d] = q;
        }
        rem.truncate(d);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Remainder of a raw coefficient vector upon division by a monic polynomial.
    pub(crate) fn rem_is_zero(mut coeffs: Vec<BigInt>, divisor: &Self) -> bool {
        let d = divisor.coeffs.len() - 1;
        for i in (d..coeffs.len()).rev() {
            let q = std::mem::take(&mut coeffs[i]);
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs[..d].iter().enumerate() {
                if !c.is_zero() {
                    coeffs[i - d + j] -= &q * c;
                }
            }
        }
        coeffs.iter().take(d).all(Zero::is_zero)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{a}x^{k}")?,
            }
        }
        Ok(())
    }
}

fn cache() -> &'static RwLock<HashMap<u64, Arc<IntPolynomial>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<IntPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `m`-th cyclotomic polynomial, computed as
/// `(x^m - 1) / prod_{d | m, d < m} Phi_d` and memoized for the process.
pub fn cyclotomic_poly(m: u64) -> Result<Arc<IntPolynomial>> {
    if m == 0 {
        return Err(invalid("cyclotomic order must be positive"));
    }
    if let Some(p) = cache().read().expect("cyclotomic cache poisoned").get(&m) {
        return Ok(Arc::clone(p));
    }
    let mut divisor = IntPolynomial::from_i64(&[1]);
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        divisor = divisor.mul(&*cyclotomic_poly(d)?);
    }
    let (phi, rem) = IntPolynomial::x_pow_minus_one(m as usize).div_rem_monic(&divisor)?;
    debug_assert!(rem.is_zero());
    let phi = Arc::new(phi);
    cache()
        .write()
        .expect("cyclotomic cache poisoned")
        .entry(m)
        .or_insert_with(|| Arc::clone(&phi));
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn totient(m: u64) -> u64 {
        (1..=m).filter(|k| num_integer::gcd(*k, m) == 1).count() as u64
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic_poly(1).unwrap(), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(2).unwrap(), IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(*cyclotomic_poly(4).unwrap(), IntPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(*cyclotomic_poly(6).unwrap(), IntPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(
            *cyclotomic_poly(12).unwrap(),
            IntPolynomial::from_i64(&[1, 0, -1, 0, 1])
        );
    }

    #[test]
    fn phi_105_has_a_coefficient_minus_two() {
        let phi = cyclotomic_poly(105).unwrap();
        assert_eq!(phi.degree(), Some(48));
        assert!(phi.coeffs().iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn zero_order_is_rejected() {
        assert!(cyclotomic_poly(0).is_err());
    }

    #[test]
    fn divides_x_m_minus_one_and_degrees_sum_to_m() {
        for m in 1..=200u64 {
            let phi = cyclotomic_poly(m).unwrap();
            assert_eq!(phi.degree(), Some(totient(m) as usize), "deg Phi_{m}");
            let (_, rem) = IntPolynomial::x_pow_minus_one(m as usize)
                .div_rem_monic(&phi)
                .unwrap();
            assert!(rem.is_zero(), "Phi_{m} does not divide x^{m} - 1");
            let total: usize = (1..=m)
                .filter(|d| m % d == 0)
                .map(|d| cyclotomic_poly(d).unwrap().degree().unwrap())
                .sum();
            assert_eq!(total as u64, m);
        }
    }

    #[test]
    fn display() {
        assert_eq!(cyclotomic_poly(6).unwrap().to_string(), "x^2 - x + 1");
        assert_eq!(cyclotomic_poly(1).unwrap().to_string(), "x - 1");
    }
}
