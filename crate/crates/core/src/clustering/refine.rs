use std::collections::{BTreeMap, HashMap};

use rug::{Float, Rational};

use super::{Cluster, ClusterOptions, Engine, SearchDomain, SubdivisionStats};
use crate::counting::{
    ladder_at_least, CountResult, CountStats, Counter, DEFAULT_L0, DEFAULT_LMAX,
};
use crate::error::{Error, Result};
use crate::geometry::{ComplexBox, Disc};
use crate::numerics::{ComplexBall, Mag};
use crate::polynomial::{DensePolynomial, OraclePolynomial};

/// Shrinks natural clusters of one polynomial, caching the results so that
/// repeated requests (as made by the deflation loop) cost nothing and later
/// requests at higher precision start from the best refinement so far.
pub struct Refiner<'a> {
    p: &'a dyn OraclePolynomial,
    cache: HashMap<(Disc, usize), BTreeMap<u32, Vec<Cluster>>>,
    counting: CountStats,
    subdivision: SubdivisionStats,
}

impl<'a> Refiner<'a> {
    pub fn new(p: &'a dyn OraclePolynomial) -> Self {
        Refiner {
            p,
            cache: HashMap::new(),
            counting: CountStats::default(),
            subdivision: SubdivisionStats::default(),
        }
    }

    /// Work of the counting tests run while refining.
    pub fn counting(&self) -> &CountStats {
        &self.counting
    }

    pub fn subdivision(&self) -> &SubdivisionStats {
        &self.subdivision
    }

    /// Replaces every cluster by natural clusters of radius at most `2^-l`
    /// holding the same roots.
    pub fn refine(&mut self, clusters: &[Cluster], l: u32) -> Result<Vec<Cluster>> {
        let mut out = Vec::new();
        for c in clusters {
            let key = (c.disc.clone(), c.multiplicity);
            let known = self.cache.get(&key);
            if let Some(done) = known.and_then(|m| m.get(&l)) {
                out.extend(done.iter().cloned());
                continue;
            }
            // Best starting point: the finest refinement at a lower precision.
            let start = known
                .and_then(|m| m.range(..l).next_back())
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| vec![c.clone()]);
            let mut pieces = Vec::new();
            for s in &start {
                pieces.extend(self.refine_one(s, l)?);
            }
            self.cache.entry(key).or_default().insert(l, pieces.clone());
            out.extend(pieces);
        }
        Ok(out)
    }

    fn refine_one(&mut self, c: &Cluster, l: u32) -> Result<Vec<Cluster>> {
        let bound = Rational::from(1) >> l;
        if *c.disc.radius() <= bound {
            return Ok(vec![c.clone()]);
        }
        if let Some(z) = self.newton(c, l)? {
            let width = Rational::from(1) >> l;
            let b = ComplexBox::new(z.0, z.1, width)?;
            let d = b.containing_disc();
            if c.disc.contains_point(d.center()) && d.radius() <= c.disc.radius() {
                let lmax = ladder_at_least((8 * l).max(DEFAULT_LMAX));
                let mut counter = Counter::with_ladder(self.p, DEFAULT_L0, lmax);
                let (m, _) = counter.count_with_confirmation(&b, ladder_at_least(l))?;
                self.counting += counter.stats();
                // `d` meets `c` and is no larger, so it lies in the triple
                // of `c` and its roots are among those of `c`.
                if m == CountResult::Roots(c.multiplicity) {
                    return Ok(vec![Cluster::new(d, c.multiplicity)]);
                }
            }
        }
        self.subdivide(c, l)
    }

    /// Schröder iteration `z <- z - m p(z) / p'(z)` from the cluster center,
    /// rounded to a multiple of `2^-(l+4)`. `None` if the iteration breaks down.
    fn newton(&mut self, c: &Cluster, l: u32) -> Result<Option<(Rational, Rational)>> {
        let m = c.multiplicity as u32;
        let (cr, ci) = c.disc.center();
        let approx = self.p.approximate(64)?;
        let zabs = Mag::from_f64(cr.to_f64().abs() + ci.to_f64().abs() + 1.0);
        let size = approx
            .coeffs()
            .iter()
            .rev()
            .fold(Mag::ZERO, |acc, a| acc.mul(zabs).add(a.center_abs()));
        let wp = m * l + size.log2_ceil().max(0) as u32 + 64;
        let p = self.p.approximate(wp)?;
        let dp = p.derivative(wp);

        let mut z = ComplexBall::from_rationals(cr, ci, wp);
        z.set_rad(Mag::ZERO);
        let tol = Mag::pow2(-(l as i64) - 8);
        let mult = ComplexBall::from_i64(m as i64, 64);
        for _ in 0..(2 * l.ilog2() + 40) {
            let Some(step) = schroder_step(&p, &dp, &z, &mult, wp) else {
                return Ok(None);
            };
            z = z.sub(&step, wp);
            z.set_rad(Mag::ZERO);
            if step.center_abs() <= tol {
                break;
            }
        }
        let round = |x: &Float| -> Option<Rational> {
            let q = x.to_rational()?;
            Some((q << (l + 4)).round() >> (l + 4))
        };
        Ok(round(z.re()).zip(round(z.im())))
    }

    /// Fallback: subdivision of a box around the disc down to width `2^-l`.
    fn subdivide(&mut self, c: &Cluster, l: u32) -> Result<Vec<Cluster>> {
        let (cr, ci) = c.disc.center();
        let width = Rational::from(c.disc.radius() * 4u32);
        // Half the diagonal is 2*sqrt(2) r < 3 r: the box sees only roots of `c`.
        let b = ComplexBox::new(cr.clone(), ci.clone(), width)?;
        let eps = Rational::from(1) >> l;
        let lmax = ladder_at_least((8 * l).max(DEFAULT_LMAX));
        let counter = Counter::with_ladder(self.p, DEFAULT_L0, lmax);
        let mut engine = Engine::with_counter(counter, ClusterOptions::default());
        let mut domain = SearchDomain::from_box(b);
        let found = engine.cluster_pol(&mut domain, &eps, &[], usize::MAX)?;
        self.counting += engine.counting();
        self.subdivision.merge(engine.subdivision());
        let total: usize = found.iter().map(|f| f.multiplicity).sum();
        if total != c.multiplicity {
            return Err(Error::Unresolvable {
                center: format!("{:e}{:+e}i", cr.to_f64(), ci.to_f64()),
                width: format!("{:e}", c.disc.radius().to_f64()),
            });
        }
        Ok(found)
    }
}

fn schroder_step(
    p: &DensePolynomial,
    dp: &DensePolynomial,
    z: &ComplexBall,
    m: &ComplexBall,
    wp: u32,
) -> Option<ComplexBall> {
    let mut v = p.evaluate(z, wp);
    let mut dv = dp.evaluate(z, wp);
    v.set_rad(Mag::ZERO);
    dv.set_rad(Mag::ZERO);
    if dv.re().is_zero() && dv.im().is_zero() {
        return None;
    }
    let q = v.div(&dv, wp)?;
    let mut s = q.mul(m, wp);
    s.set_rad(Mag::ZERO);
    Some(s)
}

/// One-shot refinement of natural clusters of `p` to radius at most `2^-l`.
pub fn refine(clusters: &[Cluster], l: u32, p: &dyn OraclePolynomial) -> Result<Vec<Cluster>> {
    Refiner::new(p).refine(clusters, l)
}
