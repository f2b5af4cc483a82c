use rug::Rational;

use super::{
    is_negative, total_multiplicity, Cluster, ClusterOptions, PendingBox, SearchDomain,
    SubdivisionStats,
};
use crate::counting::{CountResult, CountStats, Counter};
use crate::error::{Error, Result};
use crate::geometry::{ComplexBox, Disc, ImaginarySign};
use crate::polynomial::OraclePolynomial;

/// Boxes narrower than `eps * 2^-UNDERFLOW_BITS` abort the search.
const UNDERFLOW_BITS: u32 = 60;

/// Depth-first subdivision over one polynomial.
pub struct Engine<'a> {
    counter: Counter<'a>,
    options: ClusterOptions,
    stats: SubdivisionStats,
    boxes: Vec<ComplexBox>,
}

impl<'a> Engine<'a> {
    pub fn new(p: &'a dyn OraclePolynomial, options: ClusterOptions) -> Self {
        Engine::with_counter(Counter::new(p), options)
    }

    pub fn with_counter(counter: Counter<'a>, options: ClusterOptions) -> Self {
        Engine {
            counter,
            options,
            stats: SubdivisionStats::default(),
            boxes: Vec::new(),
        }
    }

    pub fn subdivision(&self) -> &SubdivisionStats {
        &self.stats
    }

    pub fn counting(&self) -> &CountStats {
        self.counter.stats()
    }

    pub fn take_boxes(&mut self) -> Vec<ComplexBox> {
        std::mem::take(&mut self.boxes)
    }

    /// Explores `domain` until it is empty or at least `n` clusters were
    /// found. Returns the new clusters; `domain` is left holding the
    /// unexplored boxes.
    ///
    /// Every root of the tested polynomial in the initial domain ends up in a
    /// returned cluster or in a remaining box. Returned clusters are pairwise
    /// disjoint and disjoint from `known`, whose discs must be natural
    /// clusters of a polynomial whose roots include those of the tested one.
    pub fn cluster_pol(
        &mut self,
        domain: &mut SearchDomain,
        eps: &Rational,
        known: &[Cluster],
        n: usize,
    ) -> Result<Vec<Cluster>> {
        let floor = Rational::from(eps >> UNDERFLOW_BITS);
        let degree = self.counter.oracle().degree();
        let mut found: Vec<Cluster> = Vec::new();
        while let Some(pb) = domain.pop() {
            // Every root of the tested polynomial has been found: the
            // remaining boxes hold none.
            if total_multiplicity(&found) >= degree {
                domain.clear();
                break;
            }
            if found.len() >= n {
                domain.push(pb);
                break;
            }
            let sign = pb.bx.imaginary_sign();
            if self.options.real_symmetry && sign == ImaginarySign::Negative {
                self.stats.skipped_negative += 1;
                continue;
            }
            self.stats.size += 1;
            self.stats.depth = self.stats.depth.max(pb.depth);
            if is_negative(&pb.bx) {
                self.stats.tested_negative += 1;
            }
            if self.options.record_boxes {
                self.boxes.push(pb.bx.clone());
            }

            let (t, disc, l) = self.count_box(&pb)?;
            if let CountResult::Roots(m) = t {
                if m == 0 || accounted_for(&disc, m, &found) {
                    continue;
                }
            }

            if *pb.bx.width() <= *eps {
                if covered_by(&disc, known.iter().chain(&found)) {
                    continue;
                }
                if let CountResult::Roots(m) = t {
                    let (t3, _) = self.counter.count(&disc.scaled(3), l)?;
                    if t3 == t && disjoint(&disc, known.iter().chain(&found)) {
                        let cluster = Cluster::new(disc, m);
                        if !(self.options.real_symmetry && sign == ImaginarySign::Positive) {
                            found.push(cluster);
                            continue;
                        }
                        // Two natural discs of equal radius that meet hold the
                        // same roots, so an overlapping mirror adds nothing.
                        // A mirror meeting another cluster is left to a finer level.
                        let mirror = cluster.conjugate();
                        if mirror.disc.overlaps(&cluster.disc) {
                            found.push(cluster);
                            continue;
                        }
                        if disjoint(&mirror.disc, known.iter().chain(&found)) {
                            found.push(cluster);
                            found.push(mirror);
                            continue;
                        }
                    }
                }
                if *pb.bx.width() < floor {
                    let (re, im) = pb.bx.center();
                    return Err(Error::Unresolvable {
                        center: format!("{:e}{:+e}i", re.to_f64(), im.to_f64()),
                        width: format!("{:e}", pb.bx.width().to_f64()),
                    });
                }
            }

            for child in pb.bx.quadrisect().into_iter().rev() {
                domain.push(PendingBox {
                    bx: child,
                    depth: pb.depth + 1,
                    prec: l,
                });
            }
        }
        if total_multiplicity(&found) >= degree {
            domain.clear();
        }
        Ok(found)
    }

    /// Counts the roots near a box: in its containing disc or, when a root
    /// sits too close to that circle, in the disc of radius `width`.
    ///
    /// A root on a box corner lies at 0.94 times the containing radius, out
    /// of reach of the counting test, and stays on a corner at every finer
    /// level when its coordinates are dyadic. The wider disc puts it at
    /// 0.71 times the radius.
    fn count_box(&mut self, pb: &PendingBox) -> Result<(CountResult, Disc, u32)> {
        let disc = pb.bx.containing_disc();
        let (t, l) = self.counter.count(&disc, pb.prec)?;
        if t != CountResult::Undecided {
            return Ok((t, disc, l));
        }
        let (re, im) = pb.bx.center();
        let wide = Disc::new(re.clone(), im.clone(), pb.bx.width().clone())?;
        let (tw, lw) = self.counter.count(&wide, l)?;
        match tw {
            CountResult::Undecided => Ok((t, disc, l)),
            _ => Ok((tw, wide, lw)),
        }
    }
}

/// The clusters of `found` inside `disc` account for all its `m` roots.
fn accounted_for(disc: &Disc, m: usize, found: &[Cluster]) -> bool {
    let inside: usize = found
        .iter()
        .filter(|c| disc.contains_disc(&c.disc))
        .map(|c| c.multiplicity)
        .sum();
    inside == m
}

/// `disc` meets a natural cluster at least as large, so every root it holds
/// belongs to that cluster.
fn covered_by<'c>(disc: &Disc, clusters: impl Iterator<Item = &'c Cluster>) -> bool {
    let mut clusters = clusters;
    clusters.any(|c| c.disc.radius() >= disc.radius() && c.disc.overlaps(disc))
}

fn disjoint<'c>(disc: &Disc, clusters: impl Iterator<Item = &'c Cluster>) -> bool {
    let mut clusters = clusters;
    clusters.all(|c| !c.disc.overlaps(disc))
}

/// Plain subdivision of `domain` for `q`, without conjugate symmetry.
pub fn cluster_pol(
    q: &dyn OraclePolynomial,
    domain: &mut SearchDomain,
    eps: &Rational,
    known: &[Cluster],
    n: usize,
) -> Result<Vec<Cluster>> {
    Engine::new(q, ClusterOptions::default()).cluster_pol(domain, eps, known, n)
}
