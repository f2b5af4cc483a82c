//! In-place Taylor shift, scaling and Graeffe kernels on ball coefficients.
//!
//! Centers are computed with plain MPFR arithmetic at the working
//! precision. Radii are obtained from a priori majorants: for every
//! kernel the floating-point error of a computed coefficient is bounded by
//! a small multiple of the unit roundoff times the same computation carried
//! out on absolute values, which is evaluated with upward-rounded [`Mag`]s.

use std::cmp::Ordering;

use rug::float::Round;
use rug::ops::{AddAssignRound, AssignRound, MulAssignRound, Pow, SubAssignRound};
use rug::{Assign, Float};

use crate::numerics::{unit_roundoff, ComplexBall, Mag};

/// `v_k <- sum_j binom(j, k) v_j g^(j - k)`, the Horner shift on magnitudes.
pub(crate) fn majorant_shift(v: &mut [Mag], g: Mag) {
    if g.is_zero() {
        return;
    }
    let d = v.len() - 1;
    for i in 0..d {
        for j in (i..d).rev() {
            v[j] = v[j].add(v[j + 1].mul(g));
        }
    }
}

/// Coefficientwise bound of `p(c + z) - p(mid(c) + z)` over all members `c`
/// of the ball and all member polynomials.
pub(crate) fn center_perturbation(coeffs: &[ComplexBall], c: &ComplexBall) -> Vec<Mag> {
    let rc = c.rad();
    let mut v: Vec<Mag> = coeffs.iter().map(|b| b.abs_upper()).collect();
    majorant_shift(&mut v, c.center_abs().add(rc));
    let d = coeffs.len() - 1;
    (0..=d)
        .map(|k| {
            if k < d {
                rc.mul(v[k + 1]).mul_u64(k as u64 + 1)
            } else {
                Mag::ZERO
            }
        })
        .collect()
}

fn round_centers(a: &mut [ComplexBall], prec: u32) {
    for b in a.iter_mut() {
        let (re, im, rad) = b.parts_mut();
        let o1 = re.set_prec_round(prec, Round::Nearest);
        let e1 = Mag::rounding(re, o1);
        let o2 = im.set_prec_round(prec, Round::Nearest);
        let e2 = Mag::rounding(im, o2);
        *rad = rad.add(e1).add(e2);
    }
}

#[inline]
fn inexact(o: Ordering) -> bool {
    o != Ordering::Equal
}

/// Replaces `a` (coefficients of `p`) by the coefficients of `p(c + z)` for
/// the exact center `c = cr + i ci`.
pub(crate) fn shift_in_place(a: &mut [ComplexBall], cr: &Float, ci: &Float, prec: u32) {
    round_centers(a, prec);
    if cr.is_zero() && ci.is_zero() {
        return;
    }
    let d = a.len() - 1;
    let alpha: Vec<Mag> = a.iter().map(|b| b.center_abs()).collect();
    let real_c = ci.is_zero();

    let mut tr = Float::new(prec);
    let mut ti = Float::new(prec);
    let mut t = Float::new(prec);
    let mut lossy = false;
    for i in 0..d {
        for j in (i..d).rev() {
            let (lo, hi) = a.split_at_mut(j + 1);
            let src = &hi[0];
            let mut o = tr.assign_round(cr * src.re(), Round::Nearest);
            lossy |= inexact(o);
            o = ti.assign_round(cr * src.im(), Round::Nearest);
            lossy |= inexact(o);
            if !real_c {
                o = t.assign_round(ci * src.im(), Round::Nearest);
                lossy |= inexact(o);
                o = tr.sub_assign_round(&t, Round::Nearest);
                lossy |= inexact(o);
                o = t.assign_round(ci * src.re(), Round::Nearest);
                lossy |= inexact(o);
                o = ti.add_assign_round(&t, Round::Nearest);
                lossy |= inexact(o);
            }
            let (re, im, _) = lo[j].parts_mut();
            o = re.add_assign_round(&tr, Round::Nearest);
            lossy |= inexact(o);
            o = im.add_assign_round(&ti, Round::Nearest);
            lossy |= inexact(o);
        }
    }

    // Every term of a shifted coefficient passes through at most d complex
    // products (relative error <= sqrt(5) u) and d sums (<= u).
    let eta = unit_roundoff(prec).mul_u64(4 * d as u64 + 4);
    let mut maj: Vec<Mag> = a
        .iter()
        .zip(&alpha)
        .map(|(b, &al)| {
            if lossy {
                b.rad().add(al.mul(eta))
            } else {
                b.rad()
            }
        })
        .collect();
    let gamma = Mag::hypot(Mag::from_float(cr), Mag::from_float(ci));
    majorant_shift(&mut maj, gamma);
    for (b, m) in a.iter_mut().zip(maj) {
        b.set_rad(m);
    }
}

/// Replaces the coefficients of `p(z)` by those of `p(r z)`.
pub(crate) fn scale_in_place(a: &mut [ComplexBall], r: &Float, prec: u32) {
    round_centers(a, prec);
    if *r == 1 {
        return;
    }
    let unit = unit_roundoff(prec);
    let mut rk = Float::new(prec + 8);
    for (k, b) in a.iter_mut().enumerate().skip(1) {
        let o = rk.assign_round(r.pow(k as u32), Round::Nearest);
        let mut lossy = inexact(o);
        let rup = if lossy {
            Mag::from_float(&rk).mul(Mag::from_f64(1.0 + 1.0 / (1u64 << 40) as f64))
        } else {
            Mag::from_float(&rk)
        };
        let babs = b.center_abs();
        let (re, im, rad) = b.parts_mut();
        lossy |= inexact(re.mul_assign_round(&rk, Round::Nearest));
        lossy |= inexact(im.mul_assign_round(&rk, Round::Nearest));
        *rad = rad.mul(rup);
        if lossy {
            *rad = rad.add(babs.mul(rup).mul(unit).mul_u64(2));
        }
    }
}

/// Reusable buffers for [`graeffe_into`].
pub(crate) struct GraeffeScratch {
    t1: Float,
    t2: Float,
    t3: Float,
    sr: Float,
    si: Float,
    alpha: Vec<Mag>,
    beta: Vec<Mag>,
    w: Vec<Mag>,
}

impl GraeffeScratch {
    pub(crate) fn new(prec: u32) -> Self {
        GraeffeScratch {
            t1: Float::new(prec),
            t2: Float::new(prec),
            t3: Float::new(prec),
            sr: Float::new(prec),
            si: Float::new(prec),
            alpha: Vec::new(),
            beta: Vec::new(),
            w: Vec::new(),
        }
    }

    fn set_prec(&mut self, prec: u32) {
        for f in [
            &mut self.t1,
            &mut self.t2,
            &mut self.t3,
            &mut self.sr,
            &mut self.si,
        ] {
            if f.prec() != prec {
                f.set_prec(prec);
            }
        }
    }
}

/// Writes into `out` the Graeffe iterate `g` of `a`, with
/// `g(z^2) = (-1)^d a(z) a(-z)`, i.e. `g_k = (-1)^d sum_{i+j=2k} (-1)^i a_i a_j`.
pub(crate) fn graeffe_into(
    a: &[ComplexBall],
    out: &mut Vec<ComplexBall>,
    prec: u32,
    s: &mut GraeffeScratch,
) {
    let d = a.len() - 1;
    s.set_prec(prec);
    if out.len() != d + 1 {
        out.clear();
        out.extend((0..=d).map(|_| ComplexBall::zero(prec)));
    }
    s.alpha.clear();
    s.beta.clear();
    s.w.clear();
    for b in a {
        let al = b.center_abs();
        s.alpha.push(al);
        s.beta.push(b.rad());
        s.w.push(al.add(b.rad()));
    }
    let eta = unit_roundoff(prec).mul_u64(d as u64 + 8);
    let odd_degree = d % 2 == 1;

    for k in 0..=d {
        let GraeffeScratch {
            t1,
            t2,
            t3,
            sr,
            si,
            alpha,
            beta,
            w,
        } = s;
        let mut lossy = false;
        sr.assign(0);
        si.assign(0);
        let mut acc_r = Mag::ZERO;
        let mut acc_a = Mag::ZERO;
        let lo = (2 * k).saturating_sub(d);
        for i in lo..k {
            let j = 2 * k - i;
            let (x, y) = (&a[i], &a[j]);
            lossy |= inexact(t1.assign_round(x.re() * y.re(), Round::Nearest));
            lossy |= inexact(t2.assign_round(x.im() * y.im(), Round::Nearest));
            lossy |= inexact(t1.sub_assign_round(&*t2, Round::Nearest));
            lossy |= inexact(t2.assign_round(x.re() * y.im(), Round::Nearest));
            lossy |= inexact(t3.assign_round(x.im() * y.re(), Round::Nearest));
            lossy |= inexact(t2.add_assign_round(&*t3, Round::Nearest));
            if i % 2 == 0 {
                lossy |= inexact(sr.add_assign_round(&*t1, Round::Nearest));
                lossy |= inexact(si.add_assign_round(&*t2, Round::Nearest));
            } else {
                lossy |= inexact(sr.sub_assign_round(&*t1, Round::Nearest));
                lossy |= inexact(si.sub_assign_round(&*t2, Round::Nearest));
            }
            acc_r = acc_r.add(w[i].mul(beta[j])).add(beta[i].mul(w[j]));
            acc_a = acc_a.add(alpha[i].mul(alpha[j]));
        }
        *sr <<= 1;
        *si <<= 1;
        acc_r = acc_r.mul_2exp(1);
        acc_a = acc_a.mul_2exp(1);

        let x = &a[k];
        lossy |= inexact(t1.assign_round(x.re().square_ref(), Round::Nearest));
        lossy |= inexact(t2.assign_round(x.im().square_ref(), Round::Nearest));
        lossy |= inexact(t1.sub_assign_round(&*t2, Round::Nearest));
        lossy |= inexact(t2.assign_round(x.re() * x.im(), Round::Nearest));
        *t2 <<= 1;
        if k % 2 == 0 {
            lossy |= inexact(sr.add_assign_round(&*t1, Round::Nearest));
            lossy |= inexact(si.add_assign_round(&*t2, Round::Nearest));
        } else {
            lossy |= inexact(sr.sub_assign_round(&*t1, Round::Nearest));
            lossy |= inexact(si.sub_assign_round(&*t2, Round::Nearest));
        }
        acc_r = acc_r.add(w[k].mul(beta[k]).mul_2exp(1));
        acc_a = acc_a.add(alpha[k].mul(alpha[k]));

        let (re, im, rad) = out[k].parts_mut();
        if re.prec() != prec {
            re.set_prec(prec);
        }
        if im.prec() != prec {
            im.set_prec(prec);
        }
        if odd_degree {
            re.assign(-&*sr);
            im.assign(-&*si);
        } else {
            re.assign(&*sr);
            im.assign(&*si);
        }
        *rad = if lossy {
            acc_r.add(acc_a.mul(eta))
        } else {
            acc_r
        };
    }
}
