#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use rootclust::benchmarks::oracle_roots;
use rootclust::clustering::Cluster;
use rootclust::geometry::{ComplexBox, Disc};
use rootclust::numerics::ComplexBall;
use rootclust::polynomial::{ComplexRational, DensePolynomial, ExactOracle};

pub type Point = (Rational, Rational);

pub fn q(x: f64) -> Rational {
    Rational::from_f64(x).unwrap()
}

pub fn pow2(e: i32) -> Rational {
    if e >= 0 {
        Rational::from(1) << e as u32
    } else {
        Rational::from(1) >> (-e) as u32
    }
}

pub fn square(re: f64, im: f64, w: f64) -> ComplexBox {
    ComplexBox::new(q(re), q(im), q(w)).unwrap()
}

/// Monic polynomial with the given roots, exact.
pub fn from_roots(roots: &[Point]) -> Vec<ComplexRational> {
    let mut c: Vec<ComplexRational> = vec![(Rational::from(1), Rational::new())];
    for (rr, ri) in roots {
        let mut next = vec![(Rational::new(), Rational::new()); c.len() + 1];
        for (j, (a, b)) in c.iter().enumerate() {
            // (a + ib)(z - r)
            next[j + 1].0 += a;
            next[j + 1].1 += b;
            next[j].0 -= Rational::from(a * rr) - Rational::from(b * ri);
            next[j].1 -= Rational::from(a * ri) + Rational::from(b * rr);
        }
        c = next;
    }
    c
}

pub fn oracle(roots: &[Point]) -> ExactOracle {
    ExactOracle::new(from_roots(roots)).unwrap()
}

fn dist2(a: &Point, b: &Point) -> f64 {
    let dx = (a.0.to_f64() - b.0.to_f64()).abs();
    let dy = (a.1.to_f64() - b.1.to_f64()).abs();
    dx * dx + dy * dy
}

/// Random dyadic roots on the grid `2^-bits` in `[-half, half]^2`, pairwise
/// at least `sep` apart, `real` makes the set closed under conjugation.
pub fn random_roots(
    rng: &mut ChaCha8Rng,
    degree: usize,
    half: f64,
    sep: f64,
    bits: u32,
    real: bool,
) -> Vec<Point> {
    let scale = (1u64 << bits) as f64;
    let grid = |rng: &mut ChaCha8Rng| -> Rational {
        let k = rng.gen_range(-(half * scale) as i64..=(half * scale) as i64);
        Rational::from(k) >> bits
    };
    let mut roots: Vec<Point> = Vec::new();
    let mut guard = 0;
    while roots.len() < degree {
        guard += 1;
        assert!(guard < 100_000, "cannot place roots");
        let re = grid(rng);
        let mut im = grid(rng);
        let pair = real && roots.len() + 2 <= degree && rng.gen_bool(0.7);
        if real && !pair {
            im = Rational::new();
        }
        let cand = (re, im);
        let conj = (cand.0.clone(), Rational::from(-&cand.1));
        let mut new = vec![cand.clone()];
        if pair {
            if cand.1 == 0 || dist2(&cand, &conj) < sep * sep {
                continue;
            }
            new.push(conj);
        }
        if new
            .iter()
            .all(|a| roots.iter().all(|b| dist2(a, b) >= sep * sep))
        {
            roots.extend(new);
        }
    }
    roots
}

/// Number of the given roots inside the closed disc.
pub fn count_in(disc: &Disc, roots: &[Point]) -> usize {
    roots.iter().filter(|r| disc.contains_point(r)).count()
}

/// Roots of `p` from the validation oracle, expanded by multiplicity.
pub fn validated_roots(p: &[ComplexRational]) -> Vec<ComplexBall> {
    let poly = DensePolynomial::from_rationals(p, 256);
    let mut out = Vec::new();
    for (b, m) in oracle_roots(&poly, 256).unwrap() {
        for _ in 0..m {
            out.push(b.clone());
        }
    }
    out
}

/// Distance from a point to the boundary of a box, in the max norm.
pub fn box_margin(b: &ComplexBox, p: &Point) -> f64 {
    let h = b.width().to_f64() / 2.0;
    let dx = (p.0.to_f64() - b.center().0.to_f64()).abs();
    let dy = (p.1.to_f64() - b.center().1.to_f64()).abs();
    (h - dx).abs().min((h - dy).abs())
}

pub fn pairwise_disjoint(cs: &[Cluster]) -> bool {
    cs.iter()
        .enumerate()
        .all(|(i, a)| cs[i + 1..].iter().all(|b| !a.disc.overlaps(&b.disc)))
}

/// Checks the three conditions of the local clustering problem against
/// known roots; returns a description of the first violation.
pub fn lcp_violation(
    clusters: &[Cluster],
    roots: &[Point],
    roi: &ComplexBox,
    eps: &Rational,
) -> Option<String> {
    if !pairwise_disjoint(clusters) {
        return Some("overlapping clusters".into());
    }
    for c in clusters {
        if c.disc.radius() > eps {
            return Some(format!("radius above eps: {:?}", c.disc));
        }
        let m = count_in(&c.disc, roots);
        if m != c.multiplicity {
            return Some(format!(
                "{:?} holds {m} roots, reported {}",
                c.disc, c.multiplicity
            ));
        }
        if count_in(&c.disc.scaled(3), roots) != m {
            return Some(format!("{:?} is not natural", c.disc));
        }
    }
    let twice = roi.scaled(&Rational::from(2));
    for r in roots {
        let in_cluster = clusters.iter().any(|c| c.disc.contains_point(r));
        if roi.contains_point(r) && !in_cluster {
            return Some(format!(
                "root {:?} in the region is not covered",
                (r.0.to_f64(), r.1.to_f64())
            ));
        }
        if in_cluster && !twice.contains_point(r) {
            return Some(format!(
                "root {:?} outside twice the region is reported",
                (r.0.to_f64(), r.1.to_f64())
            ));
        }
    }
    None
}

/// A root set and up to `max_discs` natural discs around its roots, many of
/// them overlapping.
pub fn clean_fixture(rng: &mut ChaCha8Rng, max_discs: usize) -> (Vec<Point>, Vec<Disc>) {
    let n = rng.gen_range(3..=12);
    let roots = random_roots(rng, n, 2.0, 1.0 / 64.0, 8, false);
    let mut discs = Vec::new();
    let target = rng.gen_range(1..=max_discs);
    let mut guard = 0;
    while discs.len() < target && guard < 10_000 {
        guard += 1;
        let r = &roots[rng.gen_range(0..roots.len())];
        let k = rng.gen_range(-1..8);
        let radius = pow2(-k);
        let jitter =
            |rng: &mut ChaCha8Rng| Rational::from(rng.gen_range(-16i64..=16)) * &radius / 32u32;
        let center = (
            (&r.0 + jitter(rng)),
            (&r.1 + jitter(rng)),
        );
        let d = Disc::new(center.0, center.1, radius).unwrap();
        let m = count_in(&d, &roots);
        if m > 0 && count_in(&d.scaled(3), &roots) == m {
            discs.push(d);
        }
    }
    (roots, discs)
}

/// Violation of the clean contract on one fixture, if any.
pub fn clean_violation(roots: &[Point], discs: &[Disc]) -> Option<String> {
    let out: Vec<Disc> =
        rootclust::geometry::clean(discs.iter().map(|d| (d.clone(), ())).collect())
            .into_iter()
            .map(|(d, _)| d)
            .collect();
    for (i, a) in out.iter().enumerate() {
        for b in &out[i + 1..] {
            if a.overlaps(b) {
                return Some(format!("{a:?} meets {b:?}"));
            }
        }
    }
    for r in roots {
        let before = discs.iter().any(|d| d.contains_point(r));
        let after = out.iter().any(|d| d.contains_point(r));
        if before && !after {
            return Some(format!("root {:?} lost", (r.0.to_f64(), r.1.to_f64())));
        }
    }
    None
}
