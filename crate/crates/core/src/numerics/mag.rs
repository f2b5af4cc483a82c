//! Low-precision magnitude bounds with an unbounded exponent.
//!
//! A [`Mag`] stores `man * 2^exp` with `man` in `[0.5, 1)` (or zero, or
//! infinity). Every operation rounds in a documented direction: the plain
//! operations (`add`, `mul`, ...) return upper bounds, the `*_lower`
//! variants return lower bounds. Radii of balls are always upper bounds.

use std::cmp::Ordering;

use rug::Float;

/// Relative inflation applied after each f64 operation. Round-to-nearest
/// f64 arithmetic has relative error at most 2^-53, so `x * UP` after an
/// operation is an upper bound of the exact result.
const UP: f64 = 1.0 + 1.0 / (1u64 << 50) as f64;
const DOWN: f64 = 1.0 - 1.0 / (1u64 << 50) as f64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mag {
    man: f64,
    exp: i64,
}

/// Splits a finite positive `x` into `(m, e)` with `x = m * 2^e`, `m` in `[0.5, 1)`.
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x > 0.0);
    let bits = x.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        // subnormal
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let man = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (man, raw - 1022)
}

fn quotient(a: f64, b: f64, round: f64) -> f64 {
    let q = a / b;
    if q.mul_add(b, -a) == 0.0 {
        q
    } else {
        q * round
    }
}

fn ldexp(x: f64, e: i64) -> f64 {
    // only used with |e| small enough to stay within the normal range
    x * 2f64.powi(e as i32)
}

// `add`, `mul` and `div` round upward, unlike the operator traits.
#[allow(clippy::should_implement_trait)]
impl Mag {
    pub const ZERO: Mag = Mag { man: 0.0, exp: 0 };
    pub const INF: Mag = Mag {
        man: f64::INFINITY,
        exp: 0,
    };

    fn norm(man: f64, exp: i64) -> Mag {
        if man == 0.0 {
            Mag::ZERO
        } else if !man.is_finite() {
            Mag::INF
        } else {
            let (m, e) = frexp(man);
            Mag {
                man: m,
                exp: exp + e,
            }
        }
    }

    /// Exact conversion of a nonnegative finite f64; negative inputs use `|x|`.
    pub fn from_f64(x: f64) -> Mag {
        if x.is_nan() {
            return Mag::INF;
        }
        Mag::norm(x.abs(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag {
            man: 0.5,
            exp: e + 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.man.is_finite()
    }

    /// Upper bound of `|x|`.
    pub fn from_float(x: &Float) -> Mag {
        if x.is_zero() {
            return Mag::ZERO;
        }
        if !x.is_finite() {
            return Mag::INF;
        }
        let (m, e) = x.to_f64_exp();
        Mag::norm(m.abs() * UP, e as i64)
    }

    /// Lower bound of `|x|`.
    pub fn from_float_lower(x: &Float) -> Mag {
        if x.is_zero() || x.is_nan() {
            return Mag::ZERO;
        }
        if x.is_infinite() {
            return Mag::INF;
        }
        let (m, e) = x.to_f64_exp();
        Mag::norm(m.abs() * DOWN, e as i64)
    }

    /// One unit in the last place of `x` at its own precision, an upper bound
    /// for the error of a single correctly rounded operation producing `x`.
    pub fn ulp(x: &Float) -> Mag {
        match x.get_exp() {
            Some(e) => Mag::pow2(e as i64 - x.prec() as i64),
            None => Mag::ZERO,
        }
    }

    /// Adds the rounding error of an MPFR operation whose ternary value is `ord`.
    pub fn rounding(x: &Float, ord: Ordering) -> Mag {
        if ord == Ordering::Equal {
            Mag::ZERO
        } else {
            Mag::ulp(x)
        }
    }

    fn combine(a: Mag, b: Mag, round: f64) -> Mag {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if !a.is_finite() || !b.is_finite() {
            return Mag::INF;
        }
        let (hi, lo) = if a.exp >= b.exp { (a, b) } else { (b, a) };
        let shift = hi.exp - lo.exp;
        if shift > 100 {
            return Mag::norm(hi.man * round, hi.exp);
        }
        Mag::norm((hi.man + ldexp(lo.man, -shift)) * round, hi.exp)
    }

    pub fn add(self, other: Mag) -> Mag {
        Mag::combine(self, other, UP)
    }

    pub fn add_lower(self, other: Mag) -> Mag {
        Mag::combine(self, other, DOWN)
    }

    /// Lower bound of `max(self - other, 0)`.
    pub fn sub_lower(self, other: Mag) -> Mag {
        if other.is_zero() {
            return self;
        }
        if self <= other || !self.is_finite() {
            return if self.is_finite() {
                Mag::ZERO
            } else {
                Mag::INF
            };
        }
        let shift = self.exp - other.exp;
        if shift > 100 {
            return Mag::norm(self.man * DOWN, self.exp);
        }
        let d = self.man - ldexp(other.man, -shift);
        if d <= 0.0 {
            return Mag::ZERO;
        }
        Mag::norm(d * DOWN, self.exp)
    }

    fn product(self, other: Mag, round: f64) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        if !self.is_finite() || !other.is_finite() {
            return Mag::INF;
        }
        let p = self.man * other.man;
        // exact products (e.g. powers of two) are not inflated
        let m = if self.man.mul_add(other.man, -p) == 0.0 {
            p
        } else {
            p * round
        };
        Mag::norm(m, self.exp + other.exp)
    }

    pub fn mul(self, other: Mag) -> Mag {
        self.product(other, UP)
    }

    pub fn mul_lower(self, other: Mag) -> Mag {
        self.product(other, DOWN)
    }

    /// Upper bound of `self / other`; infinite when `other` is zero.
    pub fn div(self, other: Mag) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        if other.is_zero() || !self.is_finite() {
            return Mag::INF;
        }
        if !other.is_finite() {
            return Mag::ZERO;
        }
        Mag::norm(quotient(self.man, other.man, UP), self.exp - other.exp)
    }

    /// Lower bound of `self / other`.
    pub fn div_lower(self, other: Mag) -> Mag {
        if self.is_zero() || !other.is_finite() {
            return Mag::ZERO;
        }
        if other.is_zero() || !self.is_finite() {
            return Mag::INF;
        }
        Mag::norm(quotient(self.man, other.man, DOWN), self.exp - other.exp)
    }

    pub fn mul_2exp(self, e: i64) -> Mag {
        if self.is_zero() || !self.is_finite() {
            self
        } else {
            Mag {
                man: self.man,
                exp: self.exp + e,
            }
        }
    }

    /// Multiplication by a small nonnegative integer.
    pub fn mul_u64(self, k: u64) -> Mag {
        self.mul(Mag::from_f64(k as f64))
    }

    pub fn pow(self, k: u32) -> Mag {
        let mut acc = Mag::from_f64(1.0);
        let mut base = self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    pub fn sqrt(self) -> Mag {
        if self.is_zero() || !self.is_finite() {
            return self;
        }
        let (m, e) = if self.exp % 2 == 0 {
            (self.man, self.exp)
        } else {
            (self.man * 2.0, self.exp - 1)
        };
        Mag::norm(m.sqrt() * UP, e / 2)
    }

    /// Upper bound of `sqrt(a^2 + b^2)`.
    pub fn hypot(a: Mag, b: Mag) -> Mag {
        a.mul(a).add(b.mul(b)).sqrt()
    }

    pub fn max(self, other: Mag) -> Mag {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Upper bound of `log2(self)`, `i64::MIN` for zero.
    pub fn log2_ceil(&self) -> i64 {
        if self.is_zero() {
            return i64::MIN;
        }
        if !self.is_finite() {
            return i64::MAX;
        }
        if self.man == 0.5 {
            self.exp - 1
        } else {
            self.exp
        }
    }

    /// Lower bound of `log2(self)`, `i64::MIN` for zero.
    pub fn log2_floor(&self) -> i64 {
        if self.is_zero() {
            return i64::MIN;
        }
        if !self.is_finite() {
            return i64::MAX;
        }
        self.exp - 1
    }

    /// Nearest f64, saturating at zero / infinity.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if !self.is_finite() {
            return f64::INFINITY;
        }
        if self.exp > 1100 {
            f64::INFINITY
        } else if self.exp < -1100 {
            0.0
        } else {
            self.man * 2f64.powi(self.exp as i32)
        }
    }

    /// Exact conversion to an MPFR float (53 bits are enough for the mantissa).
    pub fn to_float(&self) -> Float {
        if self.is_zero() {
            return Float::new(53);
        }
        if !self.is_finite() {
            return Float::with_val(53, rug::float::Special::Infinity);
        }
        let mut f = Float::with_val(53, self.man);
        f <<= self.exp as i32;
        f
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Mag) -> Option<Ordering> {
        match (self.is_finite(), other.is_finite()) {
            (false, false) => return Some(Ordering::Equal),
            (false, true) => return Some(Ordering::Greater),
            (true, false) => return Some(Ordering::Less),
            _ => {}
        }
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Some(Ordering::Equal),
            (true, false) => return Some(Ordering::Less),
            (false, true) => return Some(Ordering::Greater),
            _ => {}
        }
        Some(
            self.exp
                .cmp(&other.exp)
                .then(self.man.partial_cmp(&other.man).unwrap_or(Ordering::Equal)),
        )
    }
}

impl Default for Mag {
    fn default() -> Self {
        Mag::ZERO
    }
}
