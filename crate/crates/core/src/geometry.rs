//! Axis-aligned square boxes and discs with exact dyadic coordinates.

use std::cmp::Ordering;
use std::fmt;

use rug::{Float, Rational};

use crate::error::{Error, Result};

pub type Point = (Rational, Rational);

/// `true` if `q` is an integer multiple of a power of two.
pub fn is_dyadic(q: &Rational) -> bool {
    q.denom().is_power_of_two()
}

/// Exact float holding the dyadic rational `q`.
pub fn dyadic_to_float(q: &Rational) -> Float {
    debug_assert!(is_dyadic(q));
    let bits = q.numer().significant_bits().max(1);
    let (f, ord) = Float::with_val_round(bits, q, rug::float::Round::Nearest);
    debug_assert_eq!(ord, Ordering::Equal);
    f
}

fn squared_distance(a: &Point, b: &Point) -> Rational {
    let dx = Rational::from(&a.0 - &b.0);
    let dy = Rational::from(&a.1 - &b.1);
    Rational::from(dx.square_ref()) + Rational::from(dy.square_ref())
}

fn fmt_point(p: &Point) -> String {
    format!("{:.17e}{:+.17e}i", p.0.to_f64(), p.1.to_f64())
}

/// Which half-planes a box meets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImaginarySign {
    Positive,
    Negative,
    Mixed,
}

/// The closed square with center `c` and side `width`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexBox {
    center: Point,
    width: Rational,
}

impl ComplexBox {
    pub fn new(re: Rational, im: Rational, width: Rational) -> Result<Self> {
        if width <= 0 {
            return Err(Error::InvalidInput("box width must be positive".into()));
        }
        if !(is_dyadic(&re) && is_dyadic(&im) && is_dyadic(&width)) {
            return Err(Error::InvalidInput(
                "box coordinates must be dyadic rationals".into(),
            ));
        }
        Ok(ComplexBox {
            center: (re, im),
            width,
        })
    }

    /// Box with corners `xmin + i ymin` and `xmax + i ymax`; must be square.
    pub fn from_bounds(
        xmin: &Rational,
        xmax: &Rational,
        ymin: &Rational,
        ymax: &Rational,
    ) -> Result<Self> {
        let w = Rational::from(xmax - xmin);
        if w != Rational::from(ymax - ymin) {
            return Err(Error::InvalidInput("region must be a square".into()));
        }
        ComplexBox::new(
            Rational::from(xmin + xmax) / 2u32,
            Rational::from(ymin + ymax) / 2u32,
            w,
        )
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn width(&self) -> &Rational {
        &self.width
    }

    /// The four children, in the order south-west, south-east, north-west, north-east.
    pub fn quadrisect(&self) -> [ComplexBox; 4] {
        let q = Rational::from(&self.width / 4u32);
        let w = Rational::from(&self.width / 2u32);
        let (a, b) = &self.center;
        let child = |sx: i32, sy: i32| ComplexBox {
            center: (
                (a + Rational::from(&q * sx)),
                (b + Rational::from(&q * sy)),
            ),
            width: w.clone(),
        };
        [child(-1, -1), child(1, -1), child(-1, 1), child(1, 1)]
    }

    /// The disc with the same center and radius `3/4` of the width.
    pub fn containing_disc(&self) -> Disc {
        Disc {
            center: self.center.clone(),
            radius: (&self.width * Rational::from((3, 4))),
        }
    }

    pub fn conjugate(&self) -> ComplexBox {
        ComplexBox {
            center: (self.center.0.clone(), Rational::from(-&self.center.1)),
            width: self.width.clone(),
        }
    }

    pub fn imaginary_sign(&self) -> ImaginarySign {
        let half = Rational::from(&self.width / 2u32);
        if Rational::from(&self.center.1 - &half) > 0 {
            ImaginarySign::Positive
        } else if Rational::from(&self.center.1 + &half) < 0 {
            ImaginarySign::Negative
        } else {
            ImaginarySign::Mixed
        }
    }

    /// The box scaled by `f` around its center.
    pub fn scaled(&self, f: &Rational) -> ComplexBox {
        ComplexBox {
            center: self.center.clone(),
            width: Rational::from(&self.width * f),
        }
    }

    /// Closed-box membership.
    pub fn contains_point(&self, p: &Point) -> bool {
        let half = Rational::from(&self.width / 2u32);
        Rational::from(&p.0 - &self.center.0).abs() <= half
            && Rational::from(&p.1 - &self.center.1).abs() <= half
    }
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Box({}, w={:e})",
            fmt_point(&self.center),
            self.width.to_f64()
        )
    }
}

/// The closed disc with center `c` and radius `r`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Disc {
    center: Point,
    radius: Rational,
}

impl Disc {
    pub fn new(re: Rational, im: Rational, radius: Rational) -> Result<Self> {
        if radius <= 0 {
            return Err(Error::InvalidInput("disc radius must be positive".into()));
        }
        Ok(Disc {
            center: (re, im),
            radius,
        })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    /// The disc with the same center and `f` times the radius.
    pub fn scaled(&self, f: u32) -> Disc {
        Disc {
            center: self.center.clone(),
            radius: Rational::from(&self.radius * f),
        }
    }

    pub fn conjugate(&self) -> Disc {
        Disc {
            center: (self.center.0.clone(), Rational::from(-&self.center.1)),
            radius: self.radius.clone(),
        }
    }

    /// `true` when the closed discs share a point.
    pub fn overlaps(&self, other: &Disc) -> bool {
        let s = Rational::from(&self.radius + &other.radius);
        squared_distance(&self.center, &other.center) <= Rational::from(s.square_ref())
    }

    /// `true` when `other` lies inside `self`.
    pub fn contains_disc(&self, other: &Disc) -> bool {
        if other.radius > self.radius {
            return false;
        }
        let s = Rational::from(&self.radius - &other.radius);
        squared_distance(&self.center, &other.center) <= Rational::from(s.square_ref())
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        squared_distance(&self.center, p) <= Rational::from(self.radius.square_ref())
    }

    /// `-ceil(log2(radius))`, i.e. the largest `k` with `radius <= 2^-k`.
    pub fn neg_log2_ceil(&self) -> i64 {
        let pow2 = |c: i64| -> Rational {
            if c >= 0 {
                Rational::from(1) << (c as u32)
            } else {
                Rational::from(1) >> ((-c) as u32)
            }
        };
        let mut c = self.radius.numer().significant_bits() as i64
            - self.radius.denom().significant_bits() as i64
            + 1;
        while self.radius <= pow2(c - 1) {
            c -= 1;
        }
        while self.radius > pow2(c) {
            c += 1;
        }
        -c
    }
}

impl fmt::Debug for Disc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Disc({}, r={:e})",
            fmt_point(&self.center),
            self.radius.to_f64()
        )
    }
}

fn lexicographic(a: &Point, b: &Point) -> Ordering {
    a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1))
}

/// Removes overlapping candidates: repeatedly takes the disc of largest
/// radius (ties broken by the lexicographic order of the centers) and keeps
/// it when it is disjoint from every disc kept so far.
///
/// When the inputs are natural (same root count in the disc and in its
/// triple), a dropped disc only holds roots of a kept one.
pub fn clean<T>(mut q: Vec<(Disc, T)>) -> Vec<(Disc, T)> {
    q.sort_by(|(a, _), (b, _)| {
        b.radius
            .cmp(&a.radius)
            .then_with(|| lexicographic(&a.center, &b.center))
    });
    let mut kept: Vec<(Disc, T)> = Vec::with_capacity(q.len());
    for (disc, tag) in q {
        if kept.iter().all(|(k, _)| !k.overlaps(&disc)) {
            kept.push((disc, tag));
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn bx(re: i64, im: i64, w: i64) -> ComplexBox {
        ComplexBox::new(Rational::from(re), Rational::from(im), Rational::from(w)).unwrap()
    }

    #[test]
    fn quadrisection() {
        let kids = bx(0, 0, 4).quadrisect();
        let centers: Vec<Point> = kids.iter().map(|k| k.center().clone()).collect();
        for (x, y) in [(-1, -1), (1, -1), (-1, 1), (1, 1)] {
            assert!(centers.contains(&(Rational::from(x), Rational::from(y))));
        }
        let mut area = Rational::new();
        for k in &kids {
            assert_eq!(*k.width(), 2);
            area += Rational::from(k.width().square_ref());
        }
        assert_eq!(area, 16);
    }

    #[test]
    fn containing_disc_covers_corners() {
        let b = bx(0, 0, 4);
        let d = b.containing_disc();
        assert_eq!(*d.radius(), 3);
        for (x, y) in [(-2, -2), (2, -2), (-2, 2), (2, 2)] {
            assert!(d.contains_point(&(Rational::from(x), Rational::from(y))));
        }
        let kids = b.quadrisect();
        assert!(kids[0]
            .containing_disc()
            .overlaps(&kids[1].containing_disc()));
    }

    #[test]
    fn conjugation_and_sign() {
        let b = ComplexBox::new(r(1, 1), r(2, 1), r(1, 1)).unwrap();
        let c = b.conjugate();
        assert_eq!(*c.center(), (r(1, 1), r(-2, 1)));
        assert_eq!(c.conjugate(), b);
        assert_eq!(bx(3, 0, 1).conjugate(), bx(3, 0, 1));
        assert_eq!(bx(0, 2, 1).imaginary_sign(), ImaginarySign::Positive);
        assert_eq!(bx(0, -2, 1).imaginary_sign(), ImaginarySign::Negative);
        assert_eq!(bx(0, 0, 1).imaginary_sign(), ImaginarySign::Mixed);
        // touching the axis counts as mixed
        let t = ComplexBox::new(r(0, 1), r(1, 2), r(1, 1)).unwrap();
        assert_eq!(t.imaginary_sign(), ImaginarySign::Mixed);
    }

    #[test]
    fn rejects_non_dyadic() {
        assert!(ComplexBox::new(r(1, 3), r(0, 1), r(1, 1)).is_err());
        assert!(ComplexBox::new(r(0, 1), r(0, 1), r(0, 1)).is_err());
        assert!(ComplexBox::from_bounds(&r(-150, 1), &r(150, 1), &r(-150, 1), &r(150, 1)).is_ok());
        assert!(ComplexBox::from_bounds(&r(0, 1), &r(1, 1), &r(0, 1), &r(2, 1)).is_err());
    }

    #[test]
    fn neg_log2_ceil() {
        let d = Disc::new(r(0, 1), r(0, 1), Rational::from(1) >> 53).unwrap();
        assert_eq!(d.neg_log2_ceil(), 53);
        let d = Disc::new(r(0, 1), r(0, 1), Rational::from(3) >> 55).unwrap();
        assert_eq!(d.neg_log2_ceil(), 53);
        let d = Disc::new(r(0, 1), r(0, 1), r(3, 1)).unwrap();
        assert_eq!(d.neg_log2_ceil(), -2);
        let just_below = Rational::from(1) - (Rational::from(1) >> 80);
        let d = Disc::new(r(0, 1), r(0, 1), just_below).unwrap();
        assert_eq!(d.neg_log2_ceil(), 0);
    }

    #[test]
    fn clean_examples() {
        let big = Disc::new(r(0, 1), r(0, 1), r(1, 1)).unwrap();
        let small = Disc::new(r(1, 2), r(0, 1), r(1, 4)).unwrap();
        let out = clean(vec![(small.clone(), 1), (big.clone(), 2)]);
        assert_eq!(out, vec![(big.clone(), 2)]);

        let far = Disc::new(r(10, 1), r(0, 1), r(1, 4)).unwrap();
        let out = clean(vec![(big.clone(), 2), (far.clone(), 1)]);
        assert_eq!(out.len(), 2);

        let a = Disc::new(r(0, 1), r(0, 1), r(3, 1)).unwrap();
        let b = Disc::new(r(1, 1), r(0, 1), r(2, 1)).unwrap();
        let c = Disc::new(r(0, 1), r(1, 1), r(1, 1)).unwrap();
        let out = clean(vec![(c, 'c'), (a.clone(), 'a'), (b, 'b')]);
        assert_eq!(out, vec![(a, 'a')]);
    }

    #[test]
    fn clean_ties_are_deterministic() {
        let a = Disc::new(r(0, 1), r(0, 1), r(1, 1)).unwrap();
        let b = Disc::new(r(1, 1), r(0, 1), r(1, 1)).unwrap();
        let x = clean(vec![(b.clone(), 1), (a.clone(), 0)]);
        let y = clean(vec![(a.clone(), 0), (b, 1)]);
        assert_eq!(x, y);
        assert_eq!(x, vec![(a, 0)]);
    }
}
