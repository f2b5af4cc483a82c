//! Root counting in discs: a soft Pellet test on Graeffe iterates.
//!
//! For a disc `D(c, r)` the polynomial is recentered to `t(z) = p(c + r z)`.
//! If one coefficient `|t_k|` exceeds the sum of all the others, `t` has
//! exactly `k` roots in the unit disc (Rouché). Root-squaring keeps the
//! roots inside and outside the unit circle on their side, while widening
//! the gap, so the check is repeated on a few Graeffe iterates. All
//! coefficients are balls, so a positive check is a proof.

use std::ops::AddAssign;
use std::sync::Arc;

use rug::Float;

use crate::error::Result;
use crate::geometry::{dyadic_to_float, ComplexBox, Disc};
use crate::numerics::{ComplexBall, Mag};
use crate::polynomial::transform::{graeffe_into, scale_in_place, shift_in_place, GraeffeScratch};
use crate::polynomial::{DensePolynomial, OraclePolynomial};

/// First rung of the precision ladder.
pub const DEFAULT_L0: u32 = 53;
/// Last rung: `53 * 2^6`.
pub const DEFAULT_LMAX: u32 = 53 << 6;

/// Smallest rung `53 * 2^k` of the default ladder that is at least `l`.
pub fn ladder_at_least(l: u32) -> u32 {
    let mut v = DEFAULT_L0;
    while v < l {
        v *= 2;
    }
    v
}

/// Outcome of a counting test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountResult {
    /// The test could not decide.
    Undecided,
    /// The disc holds exactly this many roots, counted with multiplicity.
    Roots(usize),
}

impl CountResult {
    /// `-1` for undecided, else the count.
    pub fn value(self) -> i64 {
        match self {
            CountResult::Undecided => -1,
            CountResult::Roots(m) => m as i64,
        }
    }

    pub fn is_zero(self) -> bool {
        self == CountResult::Roots(0)
    }
}

/// Work counters of the counting tests.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountStats {
    /// Number of tests.
    pub tests: u64,
    /// Number of attempts, one per precision tried.
    pub attempts: u64,
    /// Sum over tests of the degree of the tested polynomial.
    pub degree_cost: u64,
    /// Sum over attempts of the degree of the tested polynomial.
    pub attempt_degree_cost: u64,
    /// Largest precision at which an attempt ran.
    pub max_precision: u32,
}

impl AddAssign<&CountStats> for CountStats {
    fn add_assign(&mut self, o: &CountStats) {
        self.tests += o.tests;
        self.attempts += o.attempts;
        self.degree_cost += o.degree_cost;
        self.attempt_degree_cost += o.attempt_degree_cost;
        self.max_precision = self.max_precision.max(o.max_precision);
    }
}

/// Number of Graeffe iterations for degree `d`: `ceil(log2(1 + log2 d)) + 2`.
pub fn graeffe_iterations(d: usize) -> u32 {
    let l = (d.max(1) as f64).log2();
    (1.0 + l).log2().ceil() as u32 + 2
}

fn bit_length(d: usize) -> u32 {
    usize::BITS - d.leading_zeros()
}

enum Dominance {
    Proven(usize),
    /// The centers show dominance but the radii are too large to prove it.
    Apparent,
    Absent,
}

enum Attempt {
    Decided(usize),
    Undecided { precision_limited: bool },
}

/// Counting test bound to one polynomial, with reusable buffers and counters.
pub struct Counter<'a> {
    oracle: &'a dyn OraclePolynomial,
    l0: u32,
    lmax: u32,
    stats: CountStats,
    a: Vec<ComplexBall>,
    b: Vec<ComplexBall>,
    scratch: GraeffeScratch,
    abs: Vec<Mag>,
}

impl<'a> Counter<'a> {
    pub fn new(oracle: &'a dyn OraclePolynomial) -> Self {
        Counter::with_ladder(oracle, DEFAULT_L0, DEFAULT_LMAX)
    }

    pub fn with_ladder(oracle: &'a dyn OraclePolynomial, l0: u32, lmax: u32) -> Self {
        assert!(0 < l0 && l0 <= lmax, "invalid precision ladder");
        Counter {
            oracle,
            l0,
            lmax,
            stats: CountStats::default(),
            a: Vec::new(),
            b: Vec::new(),
            scratch: GraeffeScratch::new(64),
            abs: Vec::new(),
        }
    }

    pub fn oracle(&self) -> &'a dyn OraclePolynomial {
        self.oracle
    }

    pub fn stats(&self) -> &CountStats {
        &self.stats
    }

    pub fn l0(&self) -> u32 {
        self.l0
    }

    /// Counts the roots in `disc`, starting the precision ladder at `hint`
    /// (clamped to the ladder). Returns the result and the last precision tried.
    pub fn count(&mut self, disc: &Disc, hint: u32) -> Result<(CountResult, u32)> {
        let d = self.oracle.degree();
        self.stats.tests += 1;
        self.stats.degree_cost += d as u64;
        if d == 0 {
            return Ok((CountResult::Roots(0), self.l0));
        }
        let cr = dyadic_to_float(&disc.center().0);
        let ci = dyadic_to_float(&disc.center().1);
        let r = dyadic_to_float(disc.radius());
        let mut l = hint.clamp(self.l0, self.lmax);
        loop {
            self.stats.attempts += 1;
            self.stats.attempt_degree_cost += d as u64;
            self.stats.max_precision = self.stats.max_precision.max(l);
            let p = self.oracle.scaled(l)?;
            let wp = l + 2 * bit_length(d) + 10;
            match self.attempt(&p, &cr, &ci, &r, wp) {
                Attempt::Decided(k) => return Ok((CountResult::Roots(k), l)),
                Attempt::Undecided { precision_limited } => {
                    if precision_limited && l * 2 <= self.lmax {
                        l *= 2;
                    } else {
                        return Ok((CountResult::Undecided, l));
                    }
                }
            }
        }
    }

    /// Certifies a natural cluster: the count in the containing disc of `b`
    /// must agree with the count in its triple.
    pub fn count_with_confirmation(
        &mut self,
        b: &ComplexBox,
        hint: u32,
    ) -> Result<(CountResult, u32)> {
        let disc = b.containing_disc();
        let (m, l) = self.count(&disc, hint)?;
        match m {
            CountResult::Roots(0) | CountResult::Undecided => Ok((m, l)),
            CountResult::Roots(k) => {
                let (m3, l3) = self.count(&disc.scaled(3), l)?;
                if m3 == CountResult::Roots(k) {
                    Ok((m, l3))
                } else {
                    Ok((CountResult::Undecided, l3))
                }
            }
        }
    }

    fn attempt(
        &mut self,
        p: &Arc<DensePolynomial>,
        cr: &Float,
        ci: &Float,
        r: &Float,
        wp: u32,
    ) -> Attempt {
        self.a.clear();
        self.a.extend(p.coeffs().iter().cloned());
        shift_in_place(&mut self.a, cr, ci, wp);
        scale_in_place(&mut self.a, r, wp);

        let iterations = graeffe_iterations(self.a.len() - 1);
        let mut precision_limited = false;
        for it in 0..=iterations {
            match self.dominance() {
                Dominance::Proven(k) => return Attempt::Decided(k),
                Dominance::Apparent => precision_limited = true,
                Dominance::Absent => {}
            }
            if self.radii_polluted() {
                precision_limited = true;
                break;
            }
            if it < iterations {
                graeffe_into(&self.a, &mut self.b, wp, &mut self.scratch);
                std::mem::swap(&mut self.a, &mut self.b);
            }
        }
        Attempt::Undecided { precision_limited }
    }

    fn dominance(&mut self) -> Dominance {
        self.abs.clear();
        self.abs.extend(self.a.iter().map(|c| c.center_abs()));
        let (k, _) = self
            .abs
            .iter()
            .enumerate()
            .fold(
                (0, Mag::ZERO),
                |(bk, bv), (k, &v)| if v > bv { (k, v) } else { (bk, bv) },
            );
        let mut others = Mag::ZERO;
        let mut others_mid = Mag::ZERO;
        for (j, c) in self.a.iter().enumerate() {
            if j != k {
                others = others.add(self.abs[j].add(c.rad()));
                others_mid = others_mid.add(self.abs[j]);
            }
        }
        let lower = self.a[k].abs_lower();
        if lower > others.mul_2exp(1) {
            Dominance::Proven(k)
        } else if self.abs[k] > others_mid.mul_2exp(1) {
            Dominance::Apparent
        } else {
            Dominance::Absent
        }
    }

    /// `true` once the radii are no longer small against the coefficients.
    fn radii_polluted(&self) -> bool {
        let rad = self.a.iter().fold(Mag::ZERO, |acc, c| acc.add(c.rad()));
        let top = self.abs.iter().fold(Mag::ZERO, |acc, &v| acc.max(v));
        rad > top.mul_2exp(-8)
    }
}

/// One-shot counting test on `disc` with the precision ladder `l0 ..= lmax`.
pub fn pellet_test(
    oracle: &dyn OraclePolynomial,
    disc: &Disc,
    l0: u32,
    lmax: u32,
) -> Result<CountResult> {
    Ok(Counter::with_ladder(oracle, l0, lmax).count(disc, l0)?.0)
}

/// One-shot natural-cluster certificate for the containing disc of `b`.
pub fn count_with_confirmation(
    oracle: &dyn OraclePolynomial,
    b: &ComplexBox,
) -> Result<CountResult> {
    let mut c = Counter::new(oracle);
    Ok(c.count_with_confirmation(b, DEFAULT_L0)?.0)
}
