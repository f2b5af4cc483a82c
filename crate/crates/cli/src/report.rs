//! Machine-readable results: JSON with exact decimal strings, or CSV.

use std::time::Duration;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use rootclust::clustering::{Cluster, Solution};
use rootclust::geometry::{is_dyadic, Disc};
use rootclust::polynomial::parse_rational;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RunReport {
    pub degree: usize,
    pub clusters: Vec<ClusterRecord>,
    pub stats: Stats,
    pub parameters: Parameters,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ClusterRecord {
    pub center: [String; 2],
    pub radius: String,
    pub multiplicity: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Stats {
    pub depth: u32,
    pub size: u64,
    pub skipped_negative: u64,
    pub tests: u64,
    pub degree_cost: u64,
    pub max_test_precision: u32,
    pub maxprec: i64,
    pub refine_precisions: Vec<u32>,
    pub passes: usize,
    /// Seconds; informative only.
    pub timings: Timings,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Timings {
    pub total: f64,
    pub oracle_for_q: f64,
    pub refine: f64,
    pub power_sums_to_coeffs: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Parameters {
    pub poly: String,
    pub roi: [String; 4],
    pub eps: String,
    pub mode: String,
    pub n: Option<usize>,
    pub real_symmetry: bool,
}

/// Exact decimal expansion of a dyadic rational.
pub fn decimal(q: &Rational) -> String {
    assert!(is_dyadic(q), "only dyadic values have finite expansions");
    let k = q.denom().significant_bits() - 1;
    // n / 2^k = n 5^k / 10^k
    let scaled = q.numer() * Integer::from(Integer::u_pow_u(5, k));
    let neg = scaled < 0;
    let digits = scaled.abs().to_string();
    let k = k as usize;
    let mut s = if k == 0 {
        digits
    } else if digits.len() > k {
        format!(
            "{}.{}",
            &digits[..digits.len() - k],
            &digits[digits.len() - k..]
        )
    } else {
        format!("0.{}{}", "0".repeat(k - digits.len()), digits)
    };
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if neg {
        format!("-{s}")
    } else {
        s
    }
}

impl ClusterRecord {
    pub fn new(c: &Cluster) -> Self {
        let (re, im) = c.disc.center();
        ClusterRecord {
            center: [decimal(re), decimal(im)],
            radius: decimal(c.disc.radius()),
            multiplicity: c.multiplicity,
        }
    }

    /// The exact cluster back from its decimal strings.
    pub fn to_cluster(&self) -> Result<Cluster, String> {
        let disc = Disc::new(
            parse_rational(&self.center[0])?,
            parse_rational(&self.center[1])?,
            parse_rational(&self.radius)?,
        )
        .map_err(|e| e.to_string())?;
        if self.multiplicity == 0 {
            return Err("zero multiplicity".into());
        }
        Ok(Cluster::new(disc, self.multiplicity))
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

impl RunReport {
    pub fn new(degree: usize, s: &Solution, parameters: Parameters) -> Self {
        RunReport {
            degree,
            clusters: s.clusters.iter().map(ClusterRecord::new).collect(),
            stats: Stats {
                depth: s.subdivision.depth,
                size: s.subdivision.size,
                skipped_negative: s.subdivision.skipped_negative,
                tests: s.counting.tests,
                degree_cost: s.counting.degree_cost,
                max_test_precision: s.counting.max_precision,
                maxprec: s.maxprec,
                refine_precisions: s.refine_precisions.clone(),
                passes: s.passes,
                timings: Timings {
                    total: secs(s.timings.total),
                    oracle_for_q: secs(s.timings.oracle_for_q),
                    refine: secs(s.timings.refine),
                    power_sums_to_coeffs: secs(s.timings.ps_to_coeffs),
                },
            },
            parameters,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,radius,multiplicity\n");
        for c in &self.clusters {
            out += &format!(
                "{},{},{},{}\n",
                c.center[0], c.center[1], c.radius, c.multiplicity
            );
        }
        out
    }

    /// Human-readable statistics.
    pub fn summary(&self) -> String {
        let s = &self.stats;
        let roots: usize = self.clusters.iter().map(|c| c.multiplicity).sum();
        let mut out = format!(
            "degree {}  clusters {}  roots {}\n\
             depth {}  size {}  skipped {}\n\
             tests {}  degree cost {}  test precision <= {}\n\
             maxprec {}  passes {}",
            self.degree,
            self.clusters.len(),
            roots,
            s.depth,
            s.size,
            s.skipped_negative,
            s.tests,
            s.degree_cost,
            s.max_test_precision,
            s.maxprec,
            s.passes
        );
        if !s.refine_precisions.is_empty() {
            out += &format!("  refined at {:?}", s.refine_precisions);
        }
        let t = &s.timings;
        out += &format!(
            "\ntime {:.3}s  (oracle for q {:.3}s, refine {:.3}s, power sums to coefficients {:.3}s)\n",
            t.total, t.oracle_for_q, t.refine, t.power_sums_to_coeffs
        );
        out
    }
}
