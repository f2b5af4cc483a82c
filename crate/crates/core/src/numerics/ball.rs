use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::{AddAssignRound, AssignRound};
use rug::{Float, Rational};

use super::Mag;

/// Relative rounding unit used in aggregated error bounds: one ulp at
/// precision `prec`, i.e. twice the round-to-nearest unit roundoff.
pub fn unit_roundoff(prec: u32) -> Mag {
    Mag::pow2(1 - prec as i64)
}

/// A complex number enclosure: every value within distance `rad` of
/// `re + i im` belongs to the ball.
///
/// Centers are rounded to nearest at the working precision passed to each
/// operation; every rounding error is added to the radius, which is itself
/// rounded upward, so results always contain the exact value of the
/// operation applied to any members of the inputs.
#[derive(Clone)]
pub struct ComplexBall {
    re: Float,
    im: Float,
    rad: Mag,
}

fn assign_err(dst: &mut Float, ord: Ordering) -> Mag {
    Mag::rounding(dst, ord)
}

impl ComplexBall {
    pub fn zero(prec: u32) -> Self {
        ComplexBall {
            re: Float::new(prec),
            im: Float::new(prec),
            rad: Mag::ZERO,
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        let (re, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = Mag::rounding(&re, ord);
        ComplexBall {
            re,
            im: Float::new(prec),
            rad,
        }
    }

    /// Exact ball around `re + i im` with radius zero.
    pub fn exact(re: Float, im: Float) -> Self {
        ComplexBall {
            re,
            im,
            rad: Mag::ZERO,
        }
    }

    pub fn from_parts(re: Float, im: Float, rad: Mag) -> Self {
        ComplexBall { re, im, rad }
    }

    /// Rounds an exact complex rational to `prec` bits.
    pub fn from_rationals(re: &Rational, im: &Rational, prec: u32) -> Self {
        let (fre, o1) = Float::with_val_round(prec, re, Round::Nearest);
        let (fim, o2) = Float::with_val_round(prec, im, Round::Nearest);
        let rad = Mag::rounding(&fre, o1).add(Mag::rounding(&fim, o2));
        ComplexBall {
            re: fre,
            im: fim,
            rad,
        }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn set_rad(&mut self, rad: Mag) {
        self.rad = rad;
    }

    pub fn add_rad(&mut self, extra: Mag) {
        self.rad = self.rad.add(extra);
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Float, &mut Float, &mut Mag) {
        (&mut self.re, &mut self.im, &mut self.rad)
    }

    /// Splits the ball into its center coordinates and radius.
    pub fn into_parts(self) -> (Float, Float, Mag) {
        (self.re, self.im, self.rad)
    }

    /// Upper bound of the center modulus.
    pub fn center_abs(&self) -> Mag {
        Mag::hypot(Mag::from_float(&self.re), Mag::from_float(&self.im))
    }

    /// Lower bound of the center modulus.
    pub fn center_abs_lower(&self) -> Mag {
        let a = Mag::from_float_lower(&self.re);
        let b = Mag::from_float_lower(&self.im);
        // max(|a|,|b|) <= hypot(a,b)
        a.max(b).max(
            a.mul_lower(a)
                .add_lower(b.mul_lower(b))
                .sqrt()
                .mul_lower(Mag::from_f64(1.0 - 1e-15)),
        )
    }

    /// Upper bound of `|z|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        self.center_abs().add(self.rad)
    }

    /// Lower bound of `|z|` over the ball (zero if the ball contains zero).
    pub fn abs_lower(&self) -> Mag {
        self.center_abs_lower().sub_lower(self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    /// `true` when the ball is exactly a real number (zero radius and imaginary part).
    pub fn is_exact_real(&self) -> bool {
        self.rad.is_zero() && self.im.is_zero()
    }

    pub fn neg(&self) -> Self {
        ComplexBall {
            re: -self.re.clone(),
            im: -self.im.clone(),
            rad: self.rad,
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: -self.im.clone(),
            rad: self.rad,
        }
    }

    /// Exact multiplication by `2^e`.
    pub fn mul_2exp(&self, e: i32) -> Self {
        let mut out = self.clone();
        out.re <<= e;
        out.im <<= e;
        out.rad = out.rad.mul_2exp(e as i64);
        out
    }

    /// Rounds the center to `prec` bits, absorbing the error into the radius.
    pub fn round_to(&self, prec: u32) -> Self {
        let mut out = self.clone();
        let o1 = out.re.set_prec_round(prec, Round::Nearest);
        let o2 = out.im.set_prec_round(prec, Round::Nearest);
        out.rad = out
            .rad
            .add(Mag::rounding(&out.re, o1))
            .add(Mag::rounding(&out.im, o2));
        out
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        let mut re = Float::new(prec);
        let mut im = Float::new(prec);
        let e1 = {
            let o = re.assign_round(&self.re + &other.re, Round::Nearest);
            assign_err(&mut re, o)
        };
        let e2 = {
            let o = im.assign_round(&self.im + &other.im, Round::Nearest);
            assign_err(&mut im, o)
        };
        ComplexBall {
            re,
            im,
            rad: self.rad.add(other.rad).add(e1).add(e2),
        }
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        let mut re = Float::new(prec);
        let mut im = Float::new(prec);
        let e1 = {
            let o = re.assign_round(&self.re - &other.re, Round::Nearest);
            assign_err(&mut re, o)
        };
        let e2 = {
            let o = im.assign_round(&self.im - &other.im, Round::Nearest);
            assign_err(&mut im, o)
        };
        ComplexBall {
            re,
            im,
            rad: self.rad.add(other.rad).add(e1).add(e2),
        }
    }

    /// In-place `self += other`, keeping the precision of `self`.
    pub fn add_assign(&mut self, other: &Self) {
        let o1 = self.re.add_assign_round(&other.re, Round::Nearest);
        let e1 = Mag::rounding(&self.re, o1);
        let o2 = self.im.add_assign_round(&other.im, Round::Nearest);
        let e2 = Mag::rounding(&self.im, o2);
        self.rad = self.rad.add(other.rad).add(e1).add(e2);
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        let mut t1 = Float::new(prec);
        let mut t2 = Float::new(prec);
        let mut re = Float::new(prec);
        let mut im = Float::new(prec);
        let mut err = Mag::ZERO;

        let o = t1.assign_round(&self.re * &other.re, Round::Nearest);
        err = err.add(Mag::rounding(&t1, o));
        let o = t2.assign_round(&self.im * &other.im, Round::Nearest);
        err = err.add(Mag::rounding(&t2, o));
        let o = re.assign_round(&t1 - &t2, Round::Nearest);
        err = err.add(Mag::rounding(&re, o));

        let o = t1.assign_round(&self.re * &other.im, Round::Nearest);
        err = err.add(Mag::rounding(&t1, o));
        let o = t2.assign_round(&self.im * &other.re, Round::Nearest);
        err = err.add(Mag::rounding(&t2, o));
        let o = im.assign_round(&t1 + &t2, Round::Nearest);
        err = err.add(Mag::rounding(&im, o));

        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            err
        } else {
            self.center_abs()
                .mul(other.rad)
                .add(other.center_abs().mul(self.rad))
                .add(self.rad.mul(other.rad))
                .add(err)
        };
        ComplexBall { re, im, rad }
    }

    pub fn sqr(&self, prec: u32) -> Self {
        self.mul(self, prec)
    }

    /// `self^k` by repeated squaring; `k = 0` gives one.
    pub fn pow(&self, k: u32, prec: u32) -> Self {
        let mut acc = ComplexBall::one(prec);
        let mut base = self.round_to(prec.max(self.prec()));
        let mut k = k;
        let mut first = true;
        while k > 0 {
            if k & 1 == 1 {
                acc = if first {
                    base.clone()
                } else {
                    acc.mul(&base, prec)
                };
                first = false;
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr(prec);
            }
        }
        acc
    }

    /// Multiplication by an exact or inexact real ball `x` given as a float and radius.
    pub fn mul_real(&self, x: &Float, xrad: Mag, prec: u32) -> Self {
        let mut re = Float::new(prec);
        let mut im = Float::new(prec);
        let o = re.assign_round(&self.re * x, Round::Nearest);
        let e1 = Mag::rounding(&re, o);
        let o = im.assign_round(&self.im * x, Round::Nearest);
        let e2 = Mag::rounding(&im, o);
        let ax = Mag::from_float(x);
        let rad = self
            .rad
            .mul(ax)
            .add(self.center_abs().mul(xrad))
            .add(self.rad.mul(xrad))
            .add(e1)
            .add(e2);
        ComplexBall { re, im, rad }
    }

    /// Division by a positive integer.
    pub fn div_u64(&self, k: u64, prec: u32) -> Self {
        assert!(k > 0, "division by zero");
        let mut re = Float::new(prec);
        let mut im = Float::new(prec);
        let o = re.assign_round(&self.re / k, Round::Nearest);
        let e1 = Mag::rounding(&re, o);
        let o = im.assign_round(&self.im / k, Round::Nearest);
        let e2 = Mag::rounding(&im, o);
        ComplexBall {
            re,
            im,
            rad: self.rad.div(Mag::from_f64(k as f64)).add(e1).add(e2),
        }
    }

    /// `1/self`, or `None` when the ball contains zero.
    pub fn inv(&self, prec: u32) -> Option<Self> {
        let lower = self.center_abs_lower();
        if lower <= self.rad || lower.is_zero() {
            return None;
        }
        let wp = prec + 16;
        let mut n = Float::with_val(wp, self.re.square_ref());
        n += Float::with_val(wp, self.im.square_ref());
        let re = Float::with_val(prec, &self.re / &n);
        let im = -Float::with_val(prec, &self.im / &n);
        // relative error of the computed center is below 8 ulps at `prec`
        let inv_abs = Mag::from_f64(1.0).div(lower);
        let center_err = inv_abs.mul(unit_roundoff(prec)).mul_u64(8);
        let rad = if self.rad.is_zero() {
            center_err
        } else {
            // |1/b - 1/c| <= r / (|c| (|c| - r))
            let denom = lower.mul_lower(lower.sub_lower(self.rad));
            self.rad.div(denom).add(center_err)
        };
        Some(ComplexBall { re, im, rad })
    }

    pub fn div(&self, other: &Self, prec: u32) -> Option<Self> {
        Some(self.mul(&other.inv(prec + 8)?, prec))
    }

    /// Exact rational value of the center.
    pub fn center_rational(&self) -> (Rational, Rational) {
        (
            self.re.to_rational().expect("finite center"),
            self.im.to_rational().expect("finite center"),
        )
    }

    /// Exact containment test of a rational point.
    pub fn contains_point(&self, re: &Rational, im: &Rational) -> bool {
        if !self.rad.is_finite() {
            return true;
        }
        let (cr, ci) = self.center_rational();
        let dr = Rational::from(re - &cr);
        let di = Rational::from(im - &ci);
        let d2 = Rational::from(dr.square_ref()) + Rational::from(di.square_ref());
        let r = self.rad.to_float().to_rational().expect("finite radius");
        d2 <= Rational::from(r.square_ref())
    }

    /// `true` when the two balls share at least one point.
    pub fn overlaps(&self, other: &Self) -> bool {
        if !self.rad.is_finite() || !other.rad.is_finite() {
            return true;
        }
        let (ar, ai) = self.center_rational();
        let (br, bi) = other.center_rational();
        let dr = Rational::from(&ar - &br);
        let di = Rational::from(&ai - &bi);
        let d2 = Rational::from(dr.square_ref()) + Rational::from(di.square_ref());
        let r = self.rad.to_float().to_rational().unwrap()
            + other.rad.to_float().to_rational().unwrap();
        d2 <= Rational::from(r.square_ref())
    }

    /// `true` when `other` lies entirely within `self`.
    pub fn contains(&self, other: &Self) -> bool {
        if !self.rad.is_finite() {
            return true;
        }
        if !other.rad.is_finite() || other.rad > self.rad {
            return false;
        }
        let (ar, ai) = self.center_rational();
        let (br, bi) = other.center_rational();
        let dr = Rational::from(&ar - &br);
        let di = Rational::from(&ai - &bi);
        let d2 = Rational::from(dr.square_ref()) + Rational::from(di.square_ref());
        let slack = self.rad.to_float().to_rational().unwrap()
            - other.rad.to_float().to_rational().unwrap();
        d2 <= Rational::from(slack.square_ref())
    }
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:.20e} + {:.20e}i) +/- {:.3e}",
            self.re.to_f64(),
            self.im.to_f64(),
            self.rad.to_f64()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ball(re: f64, im: f64, rad: f64, prec: u32) -> ComplexBall {
        ComplexBall::from_parts(
            Float::with_val(prec, re),
            Float::with_val(prec, im),
            Mag::from_f64(rad),
        )
    }

    fn random_ball(rng: &mut ChaCha8Rng, prec: u32) -> ComplexBall {
        let re = Float::with_val(prec, rng.gen_range(-4.0..4.0)) / 3u32;
        let im = Float::with_val(prec, rng.gen_range(-4.0..4.0)) / 7u32;
        let rad = Mag::from_f64(rng.gen_range(0.0..0.1));
        ComplexBall::from_parts(re, im, rad)
    }

    /// A random exact point of the ball: center plus a rational offset of
    /// modulus at most the radius.
    fn sample(b: &ComplexBall, rng: &mut ChaCha8Rng) -> (Rational, Rational) {
        let (cr, ci) = b.center_rational();
        let r = b.rad().to_float().to_rational().unwrap();
        loop {
            let u = Rational::from_f64(rng.gen_range(-1.0..1.0)).unwrap();
            let v = Rational::from_f64(rng.gen_range(-1.0..1.0)).unwrap();
            let n = Rational::from(u.square_ref()) + Rational::from(v.square_ref());
            if n <= 1 {
                return (cr + u * &r, ci + v * &r);
            }
        }
    }

    fn cmul(a: &(Rational, Rational), b: &(Rational, Rational)) -> (Rational, Rational) {
        (
            Rational::from(&a.0 * &b.0) - Rational::from(&a.1 * &b.1),
            Rational::from(&a.0 * &b.1) + Rational::from(&a.1 * &b.0),
        )
    }

    #[test]
    fn exact_integer_addition() {
        let a = ComplexBall::from_i64(1, 53);
        let b = ComplexBall::from_i64(2, 53);
        let s = a.add(&b, 53);
        assert_eq!(s.re().to_f64(), 3.0);
        assert!(s.rad().is_zero());
    }

    #[test]
    fn opposite_balls_sum_to_small_ball_at_zero() {
        let a = ball(1.0, 0.0, 2f64.powi(-10), 53);
        let b = ball(-1.0, 0.0, 2f64.powi(-10), 53);
        let s = a.add(&b, 53);
        assert!(s.re().is_zero());
        assert!(s.rad().to_f64() <= 2f64.powi(-9) * (1.0 + 1e-12));
    }

    #[test]
    fn products_of_exact_values() {
        let p = ComplexBall::from_i64(2, 53).mul(&ComplexBall::from_i64(3, 53), 53);
        assert_eq!(p.re().to_f64(), 6.0);
        assert!(p.rad().is_zero());

        let z = ball(0.0, 0.0, 1.0, 53);
        let q = z.mul(&z, 53);
        assert!(q.re().is_zero() && q.im().is_zero());
        assert!(q.rad().to_f64() <= 1.0 + 1e-12);
    }

    #[test]
    fn powers() {
        let c = ComplexBall::from_i64(2, 53).pow(3, 53);
        assert_eq!(c.re().to_f64(), 8.0);
        assert!(c.rad().is_zero());
        let i = ComplexBall::exact(Float::new(53), Float::with_val(53, 1));
        let p = i.pow(4, 53);
        assert_eq!(p.re().to_f64(), 1.0);
        assert!(p.im().is_zero());
        assert!(p.rad().is_zero());
    }

    #[test]
    fn sampled_inclusion_of_add_mul_pow() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_ball(&mut rng, 128);
            let b = random_ball(&mut rng, 128);
            let sum = a.add(&b, 128);
            let prod = a.mul(&b, 128);
            let cube = a.pow(3, 128);
            for _ in 0..50 {
                let x = sample(&a, &mut rng);
                let y = sample(&b, &mut rng);
                let s = (Rational::from(&x.0 + &y.0), Rational::from(&x.1 + &y.1));
                assert!(sum.contains_point(&s.0, &s.1));
                let p = cmul(&x, &y);
                assert!(prod.contains_point(&p.0, &p.1));
                let c = cmul(&cmul(&x, &x), &x);
                assert!(cube.contains_point(&c.0, &c.1));
            }
        }
    }

    #[test]
    fn inverse_and_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let b = ComplexBall::from_parts(
                Float::with_val(100, rng.gen_range(0.5..2.0)),
                Float::with_val(100, rng.gen_range(-2.0..2.0)),
                Mag::from_f64(1e-3),
            );
            let inv = b.inv(100).unwrap();
            for _ in 0..20 {
                let x = sample(&b, &mut rng);
                let n = Rational::from(x.0.square_ref()) + Rational::from(x.1.square_ref());
                let re = Rational::from(&x.0 / &n);
                let im = -Rational::from(&x.1 / &n);
                assert!(inv.contains_point(&re, &im));
            }
        }
        assert!(ball(0.0, 0.0, 0.1, 53).inv(53).is_none());
        let q = ComplexBall::from_i64(6, 53)
            .div(&ComplexBall::from_i64(3, 53), 53)
            .unwrap();
        assert!(q.contains_point(&Rational::from(2), &Rational::from(0)));
    }

    #[test]
    fn higher_precision_never_disjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = random_ball(&mut rng, 300);
            let b = random_ball(&mut rng, 300);
            let lo = a.round_to(40).mul(&b.round_to(40), 40);
            let hi = a.mul(&b, 300);
            assert!(lo.overlaps(&hi));
        }
    }

    #[test]
    fn determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_ball(&mut rng, 90);
        let b = random_ball(&mut rng, 90);
        let x = a.mul(&b, 90).add(&a, 90);
        let y = a.mul(&b, 90).add(&a, 90);
        assert_eq!(x.re(), y.re());
        assert_eq!(x.im(), y.im());
        assert_eq!(x.rad(), y.rad());
    }
}
