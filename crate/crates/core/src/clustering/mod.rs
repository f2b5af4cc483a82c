//! Subdivision solver for the local clustering problem.

mod engine;
mod refine;

use std::time::Duration;

use rug::Rational;

use crate::counting::CountStats;
use crate::error::{Error, Result};
use crate::geometry::{clean, ComplexBox, Disc, ImaginarySign};
use crate::polynomial::OraclePolynomial;

pub use engine::{cluster_pol, Engine};
pub use refine::{refine, Refiner};

/// A disc certified to hold `multiplicity` roots, the same number as its triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub disc: Disc,
    pub multiplicity: usize,
}

impl Cluster {
    pub fn new(disc: Disc, multiplicity: usize) -> Self {
        assert!(multiplicity >= 1, "clusters hold at least one root");
        Cluster { disc, multiplicity }
    }

    pub fn conjugate(&self) -> Cluster {
        Cluster::new(self.disc.conjugate(), self.multiplicity)
    }
}

/// Total multiplicity of a cluster list.
pub fn total_multiplicity(clusters: &[Cluster]) -> usize {
    clusters.iter().map(|c| c.multiplicity).sum()
}

/// Removes overlapping clusters, keeping the larger disc of each overlapping pair.
pub fn clean_clusters(clusters: Vec<Cluster>) -> Vec<Cluster> {
    clean(
        clusters
            .into_iter()
            .map(|c| (c.disc, c.multiplicity))
            .collect(),
    )
    .into_iter()
    .map(|(disc, m)| Cluster::new(disc, m))
    .collect()
}

/// A box waiting in the search domain, with its depth below the region of
/// interest and the precision at which its parent was last tested.
#[derive(Clone, Debug)]
pub struct PendingBox {
    pub bx: ComplexBox,
    pub depth: u32,
    pub prec: u32,
}

/// The unexplored part of the region: a stack of boxes, processed last in, first out.
#[derive(Clone, Debug, Default)]
pub struct SearchDomain {
    stack: Vec<PendingBox>,
}

impl SearchDomain {
    pub fn from_box(bx: ComplexBox) -> Self {
        SearchDomain {
            stack: vec![PendingBox {
                bx,
                depth: 0,
                prec: 0,
            }],
        }
    }

    pub fn push(&mut self, b: PendingBox) {
        self.stack.push(b);
    }

    pub fn pop(&mut self) -> Option<PendingBox> {
        self.stack.pop()
    }

    pub fn is_empty(&self) -> bool {
        self.stack.is_empty()
    }

    pub fn len(&self) -> usize {
        self.stack.len()
    }

    pub fn clear(&mut self) {
        self.stack.clear();
    }

    /// Forgets the precision hints, before the boxes are handed to another polynomial.
    pub fn reset_precision(&mut self) {
        for b in &mut self.stack {
            b.prec = 0;
        }
    }

    pub fn boxes(&self) -> impl Iterator<Item = &ComplexBox> {
        self.stack.iter().map(|p| &p.bx)
    }
}

/// Shape of the subdivision tree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubdivisionStats {
    /// Deepest level of a tested box (the region itself is level 0).
    pub depth: u32,
    /// Number of tested boxes.
    pub size: u64,
    /// Imaginary-negative boxes skipped thanks to conjugate symmetry.
    pub skipped_negative: u64,
    /// Imaginary-negative boxes that were tested.
    pub tested_negative: u64,
}

impl SubdivisionStats {
    pub fn merge(&mut self, o: &SubdivisionStats) {
        self.depth = self.depth.max(o.depth);
        self.size += o.size;
        self.skipped_negative += o.skipped_negative;
        self.tested_negative += o.tested_negative;
    }
}

/// Cumulative wall-clock time of the solver phases.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhaseTimings {
    pub total: Duration,
    pub oracle_for_q: Duration,
    pub refine: Duration,
    pub ps_to_coeffs: Duration,
}

/// Whether to exploit the conjugate symmetry of real polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RealSymmetry {
    On,
    Off,
    /// On when the polynomial is real and the region is symmetric about the real axis.
    #[default]
    Auto,
}

/// Resolves the symmetry switch for a polynomial and region.
pub fn use_real_symmetry(
    setting: RealSymmetry,
    p: &dyn OraclePolynomial,
    roi: &ComplexBox,
) -> Result<bool> {
    let applicable = p.is_real() && roi.center().1 == 0;
    match setting {
        RealSymmetry::Off => Ok(false),
        RealSymmetry::Auto => Ok(applicable),
        RealSymmetry::On if applicable => Ok(true),
        RealSymmetry::On => Err(Error::InvalidInput(
            "conjugate symmetry needs real coefficients and a region symmetric about the real axis"
                .into(),
        )),
    }
}

/// Result of a full solve.
#[derive(Clone, Debug, Default)]
pub struct Solution {
    pub clusters: Vec<Cluster>,
    pub subdivision: SubdivisionStats,
    pub counting: CountStats,
    pub timings: PhaseTimings,
    /// `-ceil(log2 r)` for the smallest disc computed, output or refined.
    pub maxprec: i64,
    /// Precisions `2^-L` to which clusters were refined, in order of first use.
    pub refine_precisions: Vec<u32>,
    /// Number of subdivision passes (one, plus one per deflation).
    pub passes: usize,
    /// Boxes tested, when recording was requested.
    pub boxes: Vec<ComplexBox>,
}

/// Options shared by the plain and deflating solvers.
#[derive(Clone, Debug, Default)]
pub struct ClusterOptions {
    pub real_symmetry: bool,
    /// Keep every tested box in [`Solution::boxes`].
    pub record_boxes: bool,
}

/// `-ceil(log2 r)` of the smallest cluster radius.
pub fn maxprec_of(clusters: &[Cluster]) -> i64 {
    clusters
        .iter()
        .map(|c| c.disc.neg_log2_ceil())
        .max()
        .unwrap_or(0)
}

/// Validates a cluster radius bound `eps`.
pub fn check_eps(eps: &Rational) -> Result<()> {
    if *eps <= 0 || !crate::geometry::is_dyadic(eps) {
        return Err(Error::InvalidInput(
            "eps must be a positive dyadic rational".into(),
        ));
    }
    Ok(())
}

/// Solves the local clustering problem for `p` in `roi` by plain subdivision:
/// returns pairwise disjoint natural clusters of radius at most `eps` that
/// hold every root in `roi` and only roots in twice the region.
pub fn solve_lcp(
    p: &dyn OraclePolynomial,
    roi: &ComplexBox,
    eps: &Rational,
    options: &ClusterOptions,
) -> Result<Solution> {
    check_eps(eps)?;
    let start = std::time::Instant::now();
    let mut engine = Engine::new(p, options.clone());
    let mut domain = SearchDomain::from_box(roi.clone());
    let found = engine.cluster_pol(&mut domain, eps, &[], usize::MAX)?;
    debug_assert!(domain.is_empty());
    let clusters = clean_clusters(found);
    let timings = PhaseTimings {
        total: start.elapsed(),
        ..Default::default()
    };
    Ok(Solution {
        maxprec: maxprec_of(&clusters),
        clusters,
        subdivision: engine.subdivision().clone(),
        counting: engine.counting().clone(),
        timings,
        refine_precisions: Vec::new(),
        passes: 1,
        boxes: engine.take_boxes(),
    })
}

pub(crate) fn is_negative(b: &ComplexBox) -> bool {
    b.imaginary_sign() == ImaginarySign::Negative
}
