//! Dense polynomials with ball coefficients and polynomial oracles.

mod oracle;
mod parse;
pub(crate) mod transform;

use rug::{Float, Rational};

use crate::numerics::{ComplexBall, Mag};

pub use oracle::{ExactOracle, OraclePolynomial};
pub use parse::{parse_polynomial, parse_rational};

/// Exact complex rational, used for polynomial coefficients given exactly.
pub type ComplexRational = (Rational, Rational);

/// A polynomial `sum a_k z^k` whose coefficients are complex balls, stored
/// in ascending degree order.
///
/// Exactly-zero leading coefficients are trimmed on construction, so the
/// degree is `len - 1`. A leading ball that merely contains zero is kept.
#[derive(Clone, Debug)]
pub struct DensePolynomial {
    coeffs: Vec<ComplexBall>,
}

fn is_exact_zero(b: &ComplexBall) -> bool {
    b.re().is_zero() && b.im().is_zero() && b.rad().is_zero()
}

impl DensePolynomial {
    pub fn new(mut coeffs: Vec<ComplexBall>) -> Self {
        while coeffs.len() > 1 && is_exact_zero(coeffs.last().unwrap()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ComplexBall::zero(64));
        }
        DensePolynomial { coeffs }
    }

    /// Rounds exact rational coefficients to `prec` bits.
    pub fn from_rationals(coeffs: &[ComplexRational], prec: u32) -> Self {
        DensePolynomial::new(
            coeffs
                .iter()
                .map(|(re, im)| ComplexBall::from_rationals(re, im, prec))
                .collect(),
        )
    }

    /// Exact polynomial with small integer coefficients.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        DensePolynomial::new(
            coeffs
                .iter()
                .map(|&c| ComplexBall::from_i64(c, 64))
                .collect(),
        )
    }

    pub fn one(prec: u32) -> Self {
        DensePolynomial::new(vec![ComplexBall::one(prec)])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ComplexBall] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &ComplexBall {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<ComplexBall> {
        self.coeffs
    }

    /// Largest coefficient radius.
    pub fn max_radius(&self) -> Mag {
        self.coeffs
            .iter()
            .fold(Mag::ZERO, |acc, c| acc.max(c.rad()))
    }

    /// Upper bound of the largest coefficient modulus.
    pub fn max_abs(&self) -> Mag {
        self.coeffs
            .iter()
            .fold(Mag::ZERO, |acc, c| acc.max(c.abs_upper()))
    }

    /// `true` when every coefficient is an exact real number.
    pub fn is_exact_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im().is_zero())
    }

    pub fn mul_2exp(&self, e: i32) -> Self {
        DensePolynomial {
            coeffs: self.coeffs.iter().map(|c| c.mul_2exp(e)).collect(),
        }
    }

    /// Horner evaluation; the result contains `p(x)` for every member
    /// polynomial `p` and every `x` in `z`.
    pub fn evaluate(&self, z: &ComplexBall, prec: u32) -> ComplexBall {
        let mut acc = self.coeffs[self.degree()].round_to(prec);
        for c in self.coeffs[..self.degree()].iter().rev() {
            acc = acc.mul(z, prec).add(c, prec);
        }
        acc
    }

    pub fn derivative(&self, prec: u32) -> Self {
        if self.degree() == 0 {
            return DensePolynomial::new(vec![ComplexBall::zero(prec)]);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let f = ComplexBall::from_i64(k as i64 + 1, 64);
                c.mul(&f, prec)
            })
            .collect();
        DensePolynomial::new(coeffs)
    }

    /// Encloses `p(c + r z)`.
    pub fn taylor_shift_scale(&self, c: &ComplexBall, r: &Float, prec: u32) -> Self {
        assert!(*r > 0, "scaling factor must be positive");
        let mut coeffs = self.coeffs.clone();
        let extra = if c.rad().is_zero() {
            None
        } else {
            Some(transform::center_perturbation(&coeffs, c))
        };
        transform::shift_in_place(&mut coeffs, c.re(), c.im(), prec);
        if let Some(extra) = extra {
            for (b, e) in coeffs.iter_mut().zip(extra) {
                b.add_rad(e);
            }
        }
        transform::scale_in_place(&mut coeffs, r, prec);
        DensePolynomial { coeffs }
    }

    /// Root-squaring: the result's roots are the squares of the roots of `self`.
    pub fn graeffe(&self, prec: u32) -> Self {
        let mut out = Vec::new();
        let mut scratch = transform::GraeffeScratch::new(prec);
        transform::graeffe_into(&self.coeffs, &mut out, prec, &mut scratch);
        DensePolynomial { coeffs: out }
    }

    /// `true` when every coefficient ball contains the matching exact value.
    pub fn contains_coeffs(&self, exact: &[ComplexRational]) -> bool {
        let n = self.coeffs.len().max(exact.len());
        (0..n).all(|k| {
            let zero = (Rational::new(), Rational::new());
            let (re, im) = exact.get(k).unwrap_or(&zero);
            match self.coeffs.get(k) {
                Some(b) => b.contains_point(re, im),
                None => *re == 0 && *im == 0,
            }
        })
    }

    /// Coefficientwise overlap of two ball polynomials of equal length.
    pub fn overlaps(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a.overlaps(b))
    }
}
