//! Independent root finder for validation: Aberth iteration followed by
//! a posteriori inclusion discs.
//!
//! For pairwise distinct approximations `z_i` of the roots of a degree-`d`
//! polynomial with leading coefficient `a`, all roots lie in the union of
//! the discs `D(z_i, d |w_i|)` with `w_i = p(z_i) / (a prod_{j != i} (z_i - z_j))`,
//! and every connected component made of `k` discs holds exactly `k` roots.

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{ComplexBall, Mag};
use crate::polynomial::DensePolynomial;

const MAX_DEGREE: usize = 64;

fn exact(z: &ComplexBall) -> ComplexBall {
    let mut z = z.clone();
    z.set_rad(Mag::ZERO);
    z
}

fn initial_guesses(p: &DensePolynomial, prec: u32) -> Vec<ComplexBall> {
    let d = p.degree();
    // Fujiwara-style bound 2 max |a_(d-k) / a_d|^(1/k)
    let lead = p.coeff(d).center_abs().to_f64().max(f64::MIN_POSITIVE);
    let radius = (1..=d)
        .map(|k| (p.coeff(d - k).center_abs().to_f64() / lead).powf(1.0 / k as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 2.0;
    (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            ComplexBall::exact(
                Float::with_val(prec, radius * t.cos()),
                Float::with_val(prec, radius * t.sin()),
            )
        })
        .collect()
}

fn aberth(p: &DensePolynomial, prec: u32) -> Result<Vec<ComplexBall>> {
    let d = p.degree();
    let dp = p.derivative(prec);
    let mut z = initial_guesses(p, prec);
    let one = ComplexBall::one(prec);
    let mut best = Mag::INF;
    let mut stale = 0;
    for _ in 0..(20 * d + 4 * prec as usize) {
        let mut biggest = Mag::ZERO;
        for i in 0..d {
            let v = exact(&p.evaluate(&z[i], prec));
            if v.re().is_zero() && v.im().is_zero() {
                continue;
            }
            let dv = exact(&dp.evaluate(&z[i], prec));
            let newton = match v.div(&dv, prec) {
                Some(n) => exact(&n),
                None => ComplexBall::exact(Float::with_val(prec, 1e-3), Float::new(prec)),
            };
            let mut s = ComplexBall::zero(prec);
            for j in (0..d).filter(|&j| j != i) {
                let diff = exact(&z[i].sub(&z[j], prec));
                if let Some(inv) = diff.inv(prec) {
                    s.add_assign(&exact(&inv));
                }
            }
            let denom = exact(&one.sub(&newton.mul(&exact(&s), prec), prec));
            let w = match newton.div(&denom, prec) {
                Some(w) => exact(&w),
                None => newton,
            };
            biggest = biggest.max(w.center_abs());
            z[i] = exact(&z[i].sub(&w, prec));
            if !z[i].re().is_finite() || !z[i].im().is_finite() {
                return Err(Error::NoConvergence(prec));
            }
        }
        if biggest.is_zero() {
            break;
        }
        if biggest < best.mul_2exp(-1) {
            best = biggest;
            stale = 0;
        } else {
            stale += 1;
            // at the noise floor, or converging linearly to a multiple root
            if stale >= 8 && biggest <= Mag::pow2(-(prec as i64) / 4) {
                break;
            }
        }
    }
    Ok(z)
}

/// All roots of `p` with multiplicities: one ball per cluster of
/// approximations whose inclusion discs connect, holding as many roots as
/// the cluster has members. Fails when the approximations do not separate.
pub fn oracle_roots(p: &DensePolynomial, prec: u32) -> Result<Vec<(ComplexBall, usize)>> {
    let d = p.degree();
    if d > MAX_DEGREE {
        return Err(Error::InvalidInput(format!(
            "the validation root finder handles degrees up to {MAX_DEGREE}"
        )));
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    if p.coeff(d).contains_zero() {
        return Err(Error::InvalidInput("leading coefficient may vanish".into()));
    }
    let z = aberth(p, prec)?;

    // inclusion radii d |w_i|, evaluated in ball arithmetic so that they
    // hold for every member of `p`
    let mut radii = Vec::with_capacity(d);
    for i in 0..d {
        let mut den = p.coeff(d).clone();
        for j in (0..d).filter(|&j| j != i) {
            den = den.mul(&z[i].sub(&z[j], prec), prec);
        }
        let w = p
            .evaluate(&z[i], prec)
            .div(&den, prec)
            .ok_or(Error::NoConvergence(prec))?;
        radii.push(w.abs_upper().mul_u64(d as u64));
    }

    // connected components of the union of discs
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..d {
        for j in i + 1..d {
            let gap = z[i].sub(&z[j], prec).center_abs_lower();
            if gap <= radii[i].add(radii[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; d];
    for i in 0..d {
        let r = find(&mut parent, i);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(i);
    }
    let out = groups
        .into_iter()
        .map(|g| {
            let c = exact(&z[g[0]]);
            let reach = g.iter().fold(Mag::ZERO, |acc, &i| {
                acc.max(z[i].sub(&c, prec).abs_upper().add(radii[i]))
            });
            let mut ball = c;
            ball.set_rad(reach);
            (ball, g.len())
        })
        .collect();
    Ok(out)
}
