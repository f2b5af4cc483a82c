use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rug::Rational;

use super::{ComplexRational, DensePolynomial};
use crate::error::{Error, Result};
use crate::numerics::ComplexBall;

/// A polynomial available through approximations of any accuracy.
///
/// Approximations are requested for the normalized polynomial `2^-s p`,
/// where `s = scale_exponent()` is fixed for the lifetime of the oracle and
/// chosen so that the normalized coefficients have modulus of order one. An
/// `l`-bit request therefore asks for `l` bits relative to the size of the
/// coefficients, which is what the counting test needs.
pub trait OraclePolynomial: Send + Sync {
    fn degree(&self) -> usize;

    fn scale_exponent(&self) -> u32;

    /// Approximation of `2^-s p` whose coefficient radii are all at most `2^-l`.
    fn scaled(&self, l: u32) -> Result<Arc<DensePolynomial>>;

    /// `true` if the polynomial is known to have real coefficients.
    fn is_real(&self) -> bool;

    /// Approximation of `p` itself with coefficient radii at most `2^-l`.
    fn approximate(&self, l: u32) -> Result<DensePolynomial> {
        let s = self.scale_exponent();
        Ok(self.scaled(l + s)?.mul_2exp(s as i32))
    }
}

/// Oracle for a polynomial with exact complex rational coefficients.
pub struct ExactOracle {
    coeffs: Vec<ComplexRational>,
    scale: u32,
    real: bool,
    cache: Mutex<HashMap<u32, Arc<DensePolynomial>>>,
}

fn magnitude_bits(x: &Rational) -> u32 {
    let c = Rational::from(x.abs_ref()).ceil();
    c.numer().significant_bits()
}

impl ExactOracle {
    pub fn new(mut coeffs: Vec<ComplexRational>) -> Result<Self> {
        while coeffs.last().is_some_and(|(re, im)| *re == 0 && *im == 0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "the zero polynomial has no roots to cluster".into(),
            ));
        }
        let scale = coeffs
            .iter()
            .map(|(re, im)| magnitude_bits(re).max(magnitude_bits(im)))
            .max()
            .unwrap_or(0);
        let real = coeffs.iter().all(|(_, im)| *im == 0);
        Ok(ExactOracle {
            coeffs,
            scale,
            real,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<Self> {
        ExactOracle::new(
            coeffs
                .iter()
                .map(|&c| (Rational::from(c), Rational::new()))
                .collect(),
        )
    }

    pub fn coefficients(&self) -> &[ComplexRational] {
        &self.coeffs
    }
}

impl OraclePolynomial for ExactOracle {
    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn scale_exponent(&self) -> u32 {
        self.scale
    }

    fn scaled(&self, l: u32) -> Result<Arc<DensePolynomial>> {
        let mut cache = self.cache.lock().expect("oracle cache poisoned");
        if let Some(p) = cache.get(&l) {
            return Ok(Arc::clone(p));
        }
        // normalized components are at most one in modulus, so l + 2 bits
        // leave a rounding error of at most 2^-(l+2) per component
        let prec = l + 2;
        let balls = self
            .coeffs
            .iter()
            .map(|(re, im)| {
                let re = Rational::from(re >> self.scale);
                let im = Rational::from(im >> self.scale);
                ComplexBall::from_rationals(&re, &im, prec)
            })
            .collect();
        let p = Arc::new(DensePolynomial::new(balls));
        cache.insert(l, Arc::clone(&p));
        Ok(p)
    }

    fn is_real(&self) -> bool {
        self.real
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Mag;

    #[test]
    fn integer_polynomials_are_exact_at_any_precision() {
        let o = ExactOracle::from_integers(&[5, -3, 0, 1]).unwrap();
        for l in [1, 10, 53, 400] {
            assert!(o.approximate(l).unwrap().max_radius().is_zero());
            assert!(o.scaled(l).unwrap().max_radius().is_zero());
        }
        assert_eq!(o.degree(), 3);
        assert!(o.is_real());
    }

    #[test]
    fn radii_respect_requested_precision() {
        let o = ExactOracle::new(vec![
            (Rational::from((1, 3)), Rational::from((-2, 7))),
            (Rational::from((1000, 3)), Rational::new()),
            (Rational::from(1), Rational::new()),
        ])
        .unwrap();
        for l in [8, 53, 200] {
            let p = o.approximate(l).unwrap();
            assert!(p.max_radius() <= Mag::pow2(-(l as i64)));
            assert!(p.contains_coeffs(o.coefficients()));
        }
        assert!(!o.is_real());
    }

    #[test]
    fn approximations_are_nested() {
        let o = ExactOracle::new(vec![
            (Rational::from((1, 7)), Rational::from((1, 11))),
            (Rational::from((22, 7)), Rational::new()),
        ])
        .unwrap();
        let lo = o.approximate(50).unwrap();
        let hi = o.approximate(200).unwrap();
        assert!(lo.overlaps(&hi));
    }

    #[test]
    fn rejects_zero_polynomial() {
        assert!(ExactOracle::from_integers(&[0, 0]).is_err());
    }
}
