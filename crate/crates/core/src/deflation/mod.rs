//! Explicit deflation: once some clusters of `p` are known, the remaining
//! roots are those of a factor `q` whose power sums are the power sums of
//! `p` minus the contributions of the clusters. Searching the rest of the
//! region with `q` makes every counting test cheaper.

mod power_sums;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rug::float::Round;
use rug::{Float, Rational};

pub use power_sums::{coeffs_to_power_sums, power_sums_to_coeffs, PowerSumVector};

use crate::clustering::{
    check_eps, clean_clusters, maxprec_of, total_multiplicity, Cluster, ClusterOptions, Engine,
    PhaseTimings, Refiner, SearchDomain, Solution,
};
use crate::counting::{ladder_at_least, DEFAULT_L0};
use crate::error::{Error, Result};
use crate::geometry::ComplexBox;
use crate::numerics::{ComplexBall, Mag};
use crate::polynomial::{DensePolynomial, OraclePolynomial};

/// Doublings of the working precision without progress before giving up.
const STALL_LIMIT: u32 = 3;

/// Counters of the deflation phases.
#[derive(Clone, Debug, Default)]
pub struct DeflationTrace {
    pub oracle_for_q: Duration,
    pub refine: Duration,
    pub ps_to_coeffs: Duration,
    /// Precisions `L` to which clusters were refined, in order of first use.
    pub refine_precisions: Vec<u32>,
    /// `-ceil(log2 r)` of the smallest refined cluster.
    pub maxprec: i64,
}

impl DeflationTrace {
    fn merge(&mut self, o: &DeflationTrace) {
        self.oracle_for_q += o.oracle_for_q;
        self.refine += o.refine;
        self.ps_to_coeffs += o.ps_to_coeffs;
        for &l in &o.refine_precisions {
            if !self.refine_precisions.contains(&l) {
                self.refine_precisions.push(l);
            }
        }
        self.maxprec = self.maxprec.max(o.maxprec);
    }
}

fn rational_upper(q: &Rational) -> Mag {
    let (f, _) = Float::with_val_round(64, q, Round::Up);
    Mag::from_float(&f)
}

/// Subtracts from `ps` the power sums of the roots in `clusters`, each
/// approximated by `m c^s` with the error folded into the radius.
fn subtract_clusters(ps: &mut PowerSumVector, clusters: &[Cluster]) {
    let n = ps.len();
    for c in clusters {
        let wp = ps.values()[0].prec();
        let (cr, ci) = c.disc.center();
        let center = ComplexBall::from_rationals(cr, ci, wp);
        let m = ComplexBall::from_i64(c.multiplicity as i64, 64);
        let r = rational_upper(c.disc.radius());
        let reach = center.abs_upper().add(r);
        let mut pow = ComplexBall::one(wp);
        let mut reach_pow = Mag::from_f64(1.0);
        for s in 1..=n {
            pow = pow.mul(&center, wp);
            // |a^s - c^s| <= s r (|c| + r)^(s-1) for |a - c| <= r
            let mut term = pow.mul(&m, wp);
            let err = r
                .mul(reach_pow)
                .mul_u64(s as u64)
                .mul_u64(c.multiplicity as u64);
            term.add_rad(err);
            reach_pow = reach_pow.mul(reach);
            let v = &mut ps.values_mut()[s - 1];
            *v = v.sub(&term, wp);
        }
    }
}

/// Builds approximations of the deflated factor of `p` for one cluster set.
struct Deflator<'a> {
    p: &'a dyn OraclePolynomial,
    clusters: Vec<Cluster>,
    degree: usize,
    real: bool,
    refiner: Refiner<'a>,
    trace: DeflationTrace,
}

impl<'a> Deflator<'a> {
    fn new(
        p: &'a dyn OraclePolynomial,
        clusters: Vec<Cluster>,
        real: bool,
        refiner: Refiner<'a>,
    ) -> Result<Self> {
        let found = total_multiplicity(&clusters);
        let degree = p.degree().checked_sub(found).ok_or_else(|| {
            Error::InvalidInput(format!(
                "clusters hold {found} roots but the polynomial has degree {}",
                p.degree()
            ))
        })?;
        Ok(Deflator {
            p,
            clusters,
            degree,
            real,
            refiner,
            trace: DeflationTrace::default(),
        })
    }

    /// An `l`-bit approximation of the monic factor of `p` holding the roots
    /// outside the clusters. The working precision starts at `2l` and
    /// doubles until the result is accurate enough.
    fn approximate_q(&mut self, l: u32) -> Result<DensePolynomial> {
        let start = Instant::now();
        let out = self.approximate_q_inner(l);
        self.trace.oracle_for_q += start.elapsed();
        out
    }

    fn approximate_q_inner(&mut self, l: u32) -> Result<DensePolynomial> {
        if self.degree == 0 {
            return Ok(DensePolynomial::one(l.max(64)));
        }
        let mut lt = l;
        let mut best = i64::MIN;
        let mut stalls = 0;
        loop {
            lt = lt.checked_mul(2).ok_or(Error::NoConvergence(lt))?;

            let t = Instant::now();
            let refined = self.refiner.refine(&self.clusters, lt)?;
            self.trace.refine += t.elapsed();
            if !self.trace.refine_precisions.contains(&lt) {
                self.trace.refine_precisions.push(lt);
            }
            self.trace.maxprec = self.trace.maxprec.max(maxprec_of(&refined));

            let mut ps = coeffs_to_power_sums(self.p, self.degree, lt)?;
            subtract_clusters(&mut ps, &refined);

            let t = Instant::now();
            let (mut q, lres) = power_sums_to_coeffs(&ps, self.degree)?;
            self.trace.ps_to_coeffs += t.elapsed();

            if lres >= l as i64 {
                if self.real {
                    q = project_real(q);
                }
                return Ok(q);
            }
            if lres > best {
                best = lres;
                stalls = 0;
            } else {
                stalls += 1;
                if stalls >= STALL_LIMIT {
                    let widest = self
                        .clusters
                        .iter()
                        .max_by(|a, b| a.disc.radius().cmp(b.disc.radius()))
                        .expect("a deflation removes at least one cluster");
                    let (re, im) = widest.disc.center();
                    return Err(Error::DeflationStalled {
                        precision: lt,
                        center: format!("{:e}{:+e}i", re.to_f64(), im.to_f64()),
                        radius: format!("{:e}", widest.disc.radius().to_f64()),
                    });
                }
            }
        }
    }
}

/// Drops the imaginary parts of the centers. The exact coefficients are
/// real, so they stay within the radii.
fn project_real(q: DensePolynomial) -> DensePolynomial {
    DensePolynomial::new(
        q.into_coeffs()
            .into_iter()
            .map(|c| {
                let (re, im, rad) = c.into_parts();
                ComplexBall::from_parts(re, Float::new(im.prec()), rad)
            })
            .collect(),
    )
}

/// An `l`-bit approximation of the monic factor of `p` whose roots are the
/// roots of `p` outside the natural clusters `clusters`.
pub fn oracle_for_q(
    p: &dyn OraclePolynomial,
    clusters: &[Cluster],
    l: u32,
) -> Result<DensePolynomial> {
    Deflator::new(p, clusters.to_vec(), false, Refiner::new(p))?.approximate_q(l)
}

/// The deflated factor as an oracle polynomial.
pub struct DeflatedOracle<'a> {
    degree: usize,
    scale: u32,
    real: bool,
    state: Mutex<Deflator<'a>>,
    cache: Mutex<HashMap<u32, Arc<DensePolynomial>>>,
}

impl<'a> DeflatedOracle<'a> {
    /// Deflates the roots in `clusters` out of `p`. With `real` set, `p` must
    /// have real coefficients and the roots in `clusters` must be closed
    /// under conjugation; the factor is then real as well.
    pub fn new(
        p: &'a dyn OraclePolynomial,
        clusters: Vec<Cluster>,
        real: bool,
        refiner: Refiner<'a>,
    ) -> Result<Self> {
        let mut state = Deflator::new(p, clusters, real, refiner)?;
        let degree = state.degree;
        let first = state.approximate_q(DEFAULT_L0)?;
        let scale = first.max_abs().log2_ceil().max(0) as u32;
        let oracle = DeflatedOracle {
            degree,
            scale,
            real,
            state: Mutex::new(state),
            cache: Mutex::new(HashMap::new()),
        };
        oracle
            .cache
            .lock()
            .unwrap()
            .insert(DEFAULT_L0, Arc::new(first.mul_2exp(-(scale as i32))));
        Ok(oracle)
    }

    pub fn trace(&self) -> DeflationTrace {
        self.state.lock().unwrap().trace.clone()
    }

    /// Hands back the refiner, with its cache, for the next deflation.
    pub fn into_refiner(self) -> (Refiner<'a>, DeflationTrace) {
        let state = self.state.into_inner().unwrap();
        (state.refiner, state.trace)
    }
}

impl OraclePolynomial for DeflatedOracle<'_> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn scale_exponent(&self) -> u32 {
        self.scale
    }

    fn scaled(&self, l: u32) -> Result<Arc<DensePolynomial>> {
        if let Some(q) = self.cache.lock().unwrap().get(&l) {
            return Ok(q.clone());
        }
        // 2^-scale q needs radii at most 2^-l, so q needs 2^(scale-l). The
        // request is rounded up to the ladder.
        let need = ladder_at_least(l.saturating_sub(self.scale));
        let q = self.state.lock().unwrap().approximate_q(need)?;
        let q = Arc::new(q.mul_2exp(-(self.scale as i32)));
        self.cache.lock().unwrap().insert(l, q.clone());
        Ok(q)
    }

    fn is_real(&self) -> bool {
        self.real
    }
}

/// Solves the local clustering problem with explicit deflation: the first
/// `n` clusters are searched with `p`, the next `n` with the factor of `p`
/// free of them, and so on until the region is exhausted.
pub fn cluster_with_deflation(
    p: &dyn OraclePolynomial,
    roi: &ComplexBox,
    eps: &Rational,
    n: usize,
    options: &ClusterOptions,
) -> Result<Solution> {
    check_eps(eps)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let start = Instant::now();
    let mut sol = Solution::default();
    let mut domain = SearchDomain::from_box(roi.clone());

    let mut engine = Engine::new(p, options.clone());
    let mut clusters = engine.cluster_pol(&mut domain, eps, &[], n)?;
    sol.subdivision.merge(engine.subdivision());
    sol.counting += engine.counting();
    sol.boxes.extend(engine.take_boxes());
    drop(engine);
    sol.passes = 1;

    let real = options.real_symmetry && p.is_real();
    let mut refiner = Refiner::new(p);
    let mut trace = DeflationTrace::default();
    while !domain.is_empty() && total_multiplicity(&clusters) < p.degree() {
        let q = DeflatedOracle::new(p, clusters.clone(), real, refiner)?;
        domain.reset_precision();
        let mut engine = Engine::new(&q, options.clone());
        let found = engine.cluster_pol(&mut domain, eps, &clusters, n)?;
        sol.subdivision.merge(engine.subdivision());
        sol.counting += engine.counting();
        sol.boxes.extend(engine.take_boxes());
        drop(engine);
        let (r, t) = q.into_refiner();
        refiner = r;
        trace.merge(&t);
        clusters.extend(found);
        sol.passes += 1;
    }
    sol.counting += refiner.counting();

    sol.clusters = clean_clusters(clusters);
    sol.maxprec = maxprec_of(&sol.clusters).max(trace.maxprec);
    sol.refine_precisions = trace.refine_precisions;
    sol.timings = PhaseTimings {
        total: start.elapsed(),
        oracle_for_q: trace.oracle_for_q,
        refine: trace.refine,
        ps_to_coeffs: trace.ps_to_coeffs,
    };
    Ok(sol)
}
