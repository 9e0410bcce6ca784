use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;

use super::poly::cyclotomic_poly;
use crate::error::{invalid, Result};

/// Multiset of exponents of `zeta_m = exp(2 pi i / m)`, stored reduced mod `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueMultiset {
    modulus: u64,
    entries: Vec<u64>,
}

impl ResidueMultiset {
    /// Builds the multiset, reducing every exponent into `[0, m)`.
    pub fn new(modulus: u64, exponents: impl IntoIterator<Item = i64>) -> Result<Self> {
        if modulus == 0 {
            return Err(invalid("residue modulus must be positive"));
        }
        let m = modulus as i64;
        let mut entries: Vec<u64> = exponents
            .into_iter()
            .map(|e| e.rem_euclid(m) as u64)
            .collect();
        entries.sort_unstable();
        Ok(ResidueMultiset { modulus, entries })
    }

    /// Like [`ResidueMultiset::new`] but rejects exponents outside `[0, m)`.
    pub fn from_residues(modulus: u64, residues: &[u64]) -> Result<Self> {
        if let Some(r) = residues.iter().find(|&&r| r >= modulus) {
            return Err(invalid(format!("residue {r} outside [0, {modulus})")));
        }
        Self::new(modulus, residues.iter().map(|&r| r as i64))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multiplies the underlying sum by `zeta_m^c`.
    pub fn shifted(&self, c: i64) -> Self {
        Self::new(self.modulus, self.entries.iter().map(|&e| e as i64 + c))
            .expect("modulus already validated")
    }

    /// Mask polynomial reduced modulo `x^m - 1`: coefficient `k` is the
    /// multiplicity of residue `k`.
    pub fn mask_coefficients(&self) -> Vec<BigInt> {
        let mut counts = vec![0u64; self.modulus as usize];
        for &e in &self.entries {
            counts[e as usize] += 1;
        }
        counts.into_iter().map(BigInt::from).collect()
    }
}

/// Decides `sum_{e in E} zeta_m^e == 0` exactly.
///
/// The sum vanishes iff `Phi_m` divides the mask polynomial, since `Phi_m`
/// is the minimal polynomial of `zeta_m` over the rationals.
pub fn root_sum_is_zero(e: &ResidueMultiset) -> bool {
    if e.is_empty() {
        return true;
    }
    let phi = cyclotomic_poly(e.modulus()).expect("modulus is positive");
    super::IntPolynomial::rem_is_zero(e.mask_coefficients(), &phi)
}

/// Floating evaluation of the same sum.
pub fn root_sum_value(e: &ResidueMultiset) -> Complex64 {
    let m = e.modulus() as f64;
    e.entries()
        .iter()
        .map(|&k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(m: u64, e: &[i64]) -> ResidueMultiset {
        ResidueMultiset::new(m, e.iter().copied()).unwrap()
    }

    #[test]
    fn zero_test_examples() {
        assert!(root_sum_is_zero(&ms(2, &[0, 1])));
        assert!(!root_sum_is_zero(&ms(4, &[0, 1])));
        assert!(root_sum_is_zero(&ms(6, &[0, 1, 2, 3, 4, 5])));
        assert!(root_sum_value(&ms(6, &[0, 1, 2, 3, 4, 5])).norm() < 1e-12);
    }

    #[test]
    fn empty_sum_vanishes() {
        assert!(root_sum_is_zero(&ms(7, &[])));
        assert_eq!(root_sum_value(&ms(7, &[])), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn float_values() {
        let one = root_sum_value(&ms(1, &[0]));
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(root_sum_value(&ms(4, &[0, 2])).norm() < 1e-15);
        assert!(root_sum_value(&ms(3, &[0, 1, 2])).norm() < 1e-15);
    }

    #[test]
    fn multiplicities_count() {
        // 2 + 2 zeta_2 = 0, but 2 + zeta_2 = 1
        assert!(root_sum_is_zero(&ms(2, &[0, 0, 1, 1])));
        assert!(!root_sum_is_zero(&ms(2, &[0, 0, 1])));
        // 1 + zeta_6^2 + zeta_6^4 = 0 (an embedded triangle)
        assert!(root_sum_is_zero(&ms(6, &[0, 2, 4])));
        // triangle plus antipodal pair
        assert!(root_sum_is_zero(&ms(30, &[0, 10, 20, 3, 18])));
        assert!(!root_sum_is_zero(&ms(30, &[0, 10, 20, 3, 17])));
    }

    #[test]
    fn exponents_are_reduced() {
        let e = ms(4, &[-1, 5, 8]);
        assert_eq!(e.entries(), &[0, 1, 3]);
        assert!(ResidueMultiset::from_residues(4, &[4]).is_err());
        assert!(ResidueMultiset::new(0, [1]).is_err());
    }
}
