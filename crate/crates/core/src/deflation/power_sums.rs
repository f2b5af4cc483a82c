//! Newton identities between the coefficients of a polynomial and the power
//! sums `p_s = sum mult(a) a^s` of its roots.

use crate::error::{Error, Result};
use crate::numerics::{ComplexBall, Mag};
use crate::polynomial::{DensePolynomial, OraclePolynomial};

/// Enclosures of the power sums `p_1, ..., p_n` of a root multiset.
#[derive(Clone, Debug)]
pub struct PowerSumVector {
    values: Vec<ComplexBall>,
}

impl PowerSumVector {
    pub fn new(values: Vec<ComplexBall>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput(
                "a power sum vector holds at least p_1".into(),
            ));
        }
        Ok(PowerSumVector { values })
    }

    /// `values()[s - 1]` encloses `p_s`.
    pub fn values(&self) -> &[ComplexBall] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [ComplexBall] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_radius(&self) -> Mag {
        self.values
            .iter()
            .fold(Mag::ZERO, |acc, v| acc.max(v.rad()))
    }

    fn precision(&self) -> u32 {
        self.values.iter().map(|v| v.prec()).max().unwrap_or(64)
    }
}

/// Power sums of the roots of `p` from its coefficients, at `wp` bits.
fn newton_forward(p: &DensePolynomial, n: usize, wp: u32) -> Option<Vec<ComplexBall>> {
    let d = p.degree();
    let c = p.coeff(d);
    let lead = if *c.re() == 1 && c.im().is_zero() && c.rad().is_zero() {
        ComplexBall::one(wp)
    } else {
        c.inv(wp)?
    };
    // a[i] = coefficient of z^(d - i) of the monic polynomial
    let a: Vec<ComplexBall> = (1..=n).map(|i| p.coeff(d - i).mul(&lead, wp)).collect();
    let mut ps: Vec<ComplexBall> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = a[k - 1].mul(&ComplexBall::from_i64(k as i64, 64), wp);
        for i in 1..k {
            acc.add_assign(&a[i - 1].mul(&ps[k - i - 1], wp));
        }
        ps.push(acc.neg());
    }
    Some(ps)
}

/// `l`-bit approximations of the first `n` power sums of all the roots of `p`.
///
/// The oracle precision grows until every radius is at most `2^-l`.
pub fn coeffs_to_power_sums(p: &dyn OraclePolynomial, n: usize, l: u32) -> Result<PowerSumVector> {
    let d = p.degree();
    if n == 0 || n > d {
        return Err(Error::InvalidInput(format!(
            "power sums p_1..p_{n} requested for a polynomial of degree {d}"
        )));
    }
    let target = Mag::pow2(-(l as i64));
    let mut extra = 64u32;
    for _ in 0..64 {
        let wp = l + extra;
        let poly = p.approximate(wp)?;
        if let Some(ps) = newton_forward(&poly, n, wp) {
            let v = PowerSumVector::new(ps)?;
            let rad = v.max_radius();
            if rad <= target {
                return Ok(v);
            }
            let deficit = (rad.log2_ceil() + l as i64).max(1) as u32;
            extra += deficit + 16;
        } else {
            extra *= 2;
        }
    }
    Err(Error::NoConvergence(l))
}

/// The monic polynomial of degree `d` whose roots have the power sums
/// `ps[0..d]`, with `-ceil(log2 r)` for its largest coefficient radius `r`
/// (`i64::MAX` when exact).
pub fn power_sums_to_coeffs(ps: &PowerSumVector, d: usize) -> Result<(DensePolynomial, i64)> {
    if d > ps.len() {
        return Err(Error::InvalidInput(format!(
            "{} power sums cannot determine a polynomial of degree {d}",
            ps.len()
        )));
    }
    let wp = ps.precision();
    let p = ps.values();
    // e_k = (1/k) sum_{i=1..k} (-1)^(i-1) e_(k-i) p_i
    let mut e: Vec<ComplexBall> = vec![ComplexBall::one(wp)];
    for k in 1..=d {
        let mut acc = ComplexBall::zero(wp);
        for i in 1..=k {
            let t = e[k - i].mul(&p[i - 1], wp);
            if i % 2 == 1 {
                acc.add_assign(&t);
            } else {
                acc.add_assign(&t.neg());
            }
        }
        e.push(acc.div_u64(k as u64, wp));
    }
    // coefficient of z^(d-k) is (-1)^k e_k
    let coeffs: Vec<ComplexBall> = (0..=d)
        .map(|j| {
            let k = d - j;
            if k.is_multiple_of(2) {
                e[k].clone()
            } else {
                e[k].neg()
            }
        })
        .collect();
    let q = DensePolynomial::new(coeffs);
    let rad = q.max_radius();
    let bits = if rad.is_zero() {
        i64::MAX
    } else {
        -rad.log2_ceil()
    };
    Ok((q, bits))
}
