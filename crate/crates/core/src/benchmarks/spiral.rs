use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{ComplexBall, Mag};
use crate::polynomial::{DensePolynomial, OraclePolynomial};

/// Roots `(k/d) exp(4 k pi i / d)`, `k = 1..=d`, as balls at `prec` bits.
fn spiral_roots(d: usize, prec: u32) -> Vec<ComplexBall> {
    let wp = prec + 16;
    let pi = Float::with_val(wp, Constant::Pi);
    // |theta| < 13 and three roundings give an argument error below
    // 2^(6-wp); sin and cos are correctly rounded and the modulus k/d <= 1
    // adds two more roundings.
    let err = Mag::pow2(8 - wp as i64);
    (1..=d)
        .map(|k| {
            let theta = Float::with_val(wp, &pi * (4 * k) as u64) / d as u64;
            let (s, c) = theta.sin_cos(Float::new(wp));
            let re = Float::with_val(wp, c * k as u64) / d as u64;
            let im = Float::with_val(wp, s * k as u64) / d as u64;
            ComplexBall::from_parts(re, im, err)
        })
        .collect()
}

/// Product `prod (z - r)` over the given roots.
fn from_roots(roots: &[ComplexBall], prec: u32) -> DensePolynomial {
    let mut c = vec![ComplexBall::one(prec)];
    for r in roots {
        let mut next = Vec::with_capacity(c.len() + 1);
        next.push(c[0].mul(r, prec).neg());
        for j in 1..c.len() {
            next.push(c[j - 1].sub(&c[j].mul(r, prec), prec));
        }
        next.push(c[c.len() - 1].clone());
        c = next;
    }
    DensePolynomial::new(c)
}

/// `prod_{k=1..d} (z - (k/d) exp(4 k pi i / d))` with coefficient radii at most `2^-l`.
pub fn spiral(d: usize, l: u32) -> Result<DensePolynomial> {
    SpiralOracle::new(d)?.approximate(l)
}

/// Oracle for the spiral polynomial of degree `d`.
pub struct SpiralOracle {
    degree: usize,
    scale: u32,
    cache: Mutex<HashMap<u32, Arc<DensePolynomial>>>,
}

impl SpiralOracle {
    pub fn new(d: usize) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidInput("spiral needs d >= 1".into()));
        }
        // |coefficients| <= prod (1 + k/d)
        let bound = (1..=d).fold(Mag::from_f64(1.0), |acc, k| {
            acc.mul(Mag::from_f64(1.0 + k as f64 / d as f64))
        });
        Ok(SpiralOracle {
            degree: d,
            scale: bound.log2_ceil().max(0) as u32,
            cache: Mutex::new(HashMap::new()),
        })
    }
}

impl OraclePolynomial for SpiralOracle {
    fn degree(&self) -> usize {
        self.degree
    }

    fn scale_exponent(&self) -> u32 {
        self.scale
    }

    fn scaled(&self, l: u32) -> Result<Arc<DensePolynomial>> {
        let mut cache = self.cache.lock().expect("oracle cache poisoned");
        if let Some(p) = cache.get(&l) {
            return Ok(Arc::clone(p));
        }
        let target = Mag::pow2(-(l as i64));
        let bits = usize::BITS - self.degree.leading_zeros();
        let mut prec = l + self.scale + 2 * bits + 16;
        loop {
            let roots = spiral_roots(self.degree, prec);
            let p = from_roots(&roots, prec).mul_2exp(-(self.scale as i32));
            if p.max_radius() <= target {
                let p = Arc::new(p);
                cache.insert(l, Arc::clone(&p));
                return Ok(p);
            }
            prec += prec / 2;
        }
    }

    fn is_real(&self) -> bool {
        self.degree == 1
    }
}
