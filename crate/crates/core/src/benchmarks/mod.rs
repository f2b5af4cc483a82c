//! Polynomial families used to exercise the solver, and an independent
//! root finder used to validate its output.

mod roots;
mod spiral;

use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

pub use roots::oracle_roots;
pub use spiral::{spiral, SpiralOracle};

use crate::error::{Error, Result};
use crate::polynomial::{ComplexRational, ExactOracle, OraclePolynomial};

fn real(q: impl Into<Rational>) -> ComplexRational {
    (q.into(), Rational::new())
}

fn binomials(n: usize) -> Vec<Integer> {
    let mut row = vec![Integer::from(1)];
    for k in 1..=n {
        let next = Integer::from(&row[k - 1] * (n - k + 1)) / k;
        row.push(next);
    }
    row
}

/// Bernoulli numbers `b_0 ..= b_n` with `b_1 = -1/2`, memoized.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let mut b = CACHE
        .get_or_init(|| Mutex::new(vec![Rational::from(1)]))
        .lock()
        .unwrap();
    // sum_{k=0..m} binom(m+1, k) b_k = 0
    while b.len() <= n {
        let m = b.len();
        let c = binomials(m + 1);
        let mut s = Rational::new();
        for (k, bk) in b.iter().enumerate() {
            if *bk != 0 {
                s += Rational::from(bk * &c[k]);
            }
        }
        b.push(-s / Rational::from(m + 1));
    }
    b[..=n].to_vec()
}

/// `sum_k binom(d, k) b_(d-k) z^k`, coefficients in ascending degree.
pub fn bernoulli(d: usize) -> Vec<ComplexRational> {
    let b = bernoulli_numbers(d);
    let c = binomials(d);
    (0..=d)
        .map(|k| real(Rational::from(&b[d - k] * &c[k])))
        .collect()
}

/// `z^d - 2 (2^a z - 1)^2`.
pub fn mignotte(d: usize, a: u32) -> Result<Vec<ComplexRational>> {
    if d < 3 || a < 1 {
        return Err(Error::InvalidInput(
            "mignotte needs d >= 3 and a >= 1".into(),
        ));
    }
    let mut c = vec![real(0); d + 1];
    c[0] = real(-2);
    c[1] = real(Integer::from(1) << (a + 2));
    c[2] = real(-(Integer::from(1) << (2 * a + 1)));
    c[d] = real(1);
    Ok(c)
}

/// Level of the Mandelbrot polynomial used for a requested degree `d`:
/// `floor(log2(d + 1))`, whose degree is `2^k - 1`.
pub fn mandelbrot_level(d: usize) -> u32 {
    (d + 1).ilog2()
}

/// `p_k = z p_(k-1)^2 + 1` with `p_0 = 1` and `k = floor(log2(d + 1))`.
pub fn mandelbrot(d: usize) -> Result<Vec<ComplexRational>> {
    if d < 1 {
        return Err(Error::InvalidInput("mandelbrot needs d >= 1".into()));
    }
    let k = mandelbrot_level(d);
    if (1usize << k) - 1 != d {
        log::warn!(
            "mandelbrot degree {d} is not of the form 2^k - 1; using degree {}",
            (1usize << k) - 1
        );
    }
    let mut p = vec![Integer::from(1)];
    for _ in 0..k {
        let n = p.len();
        let mut next = vec![Integer::new(); 2 * n];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in p.iter().enumerate() {
                next[i + j + 1] += Integer::from(a * b);
            }
        }
        next[0] += 1;
        p = next;
    }
    Ok(p.into_iter().map(real).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Bernoulli,
    Mignotte,
    Mandelbrot,
    Spiral,
}

/// A member of one of the families, written `family:d` or `mignotte:d:a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub degree: usize,
    /// Bit size `a` of the Mignotte parameter.
    pub param: Option<u32>,
}

impl FamilySpec {
    pub fn new(family: Family, degree: usize, param: Option<u32>) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        match (family, param) {
            (Family::Mignotte, None) => Err(Error::InvalidInput(
                "mignotte needs a parameter: mignotte:<d>:<a>".into(),
            )),
            (Family::Mignotte, Some(_)) => Ok(FamilySpec {
                family,
                degree,
                param,
            }),
            (_, Some(_)) => Err(Error::InvalidInput(format!(
                "{} takes no parameter",
                family_name(family)
            ))),
            (_, None) => Ok(FamilySpec {
                family,
                degree,
                param,
            }),
        }
    }

    /// Degree of the generated polynomial (Mandelbrot degrees map down to `2^k - 1`).
    pub fn effective_degree(&self) -> usize {
        match self.family {
            Family::Mandelbrot => (1usize << mandelbrot_level(self.degree)) - 1,
            _ => self.degree,
        }
    }

    /// Exact coefficients, for the families that have them.
    pub fn coefficients(&self) -> Result<Option<Vec<ComplexRational>>> {
        Ok(match self.family {
            Family::Bernoulli => Some(bernoulli(self.degree)),
            Family::Mignotte => Some(mignotte(self.degree, self.param.unwrap_or(1))?),
            Family::Mandelbrot => Some(mandelbrot(self.degree)?),
            Family::Spiral => None,
        })
    }

    pub fn oracle(&self) -> Result<Box<dyn OraclePolynomial>> {
        Ok(match self.coefficients()? {
            Some(c) => Box::new(ExactOracle::new(c)?),
            None => Box::new(SpiralOracle::new(self.degree)?),
        })
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Bernoulli => "bernoulli",
        Family::Mignotte => "mignotte",
        Family::Mandelbrot => "mandelbrot",
        Family::Spiral => "spiral",
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", family_name(self.family), self.degree)?;
        if let Some(a) = self.param {
            write!(f, ":{a}")?;
        }
        Ok(())
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot read polynomial family `{s}`"));
        let mut parts = s.split(':');
        let family = match parts.next().ok_or_else(bad)? {
            "bernoulli" => Family::Bernoulli,
            "mignotte" => Family::Mignotte,
            "mandelbrot" => Family::Mandelbrot,
            "spiral" => Family::Spiral,
            _ => return Err(bad()),
        };
        let degree = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let param = parts
            .next()
            .map(|a| a.parse().map_err(|_| bad()))
            .transpose()?;
        if parts.next().is_some() {
            return Err(bad());
        }
        FamilySpec::new(family, degree, param)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_numbers(4);
        assert_eq!(b, vec![r(1, 1), r(-1, 2), r(1, 6), r(0, 1), r(-1, 30)]);
        assert_eq!(bernoulli(1), vec![real(r(-1, 2)), real(1)]);
        assert_eq!(bernoulli(2), vec![real(r(1, 6)), real(-1), real(1)]);
        for d in [5, 17, 64] {
            assert_eq!(bernoulli(d)[d], real(1));
        }
    }

    #[test]
    fn mignotte_small() {
        let m = mignotte(4, 1).unwrap();
        assert_eq!(m, vec![real(-2), real(8), real(-8), real(0), real(1)]);
        assert!(mignotte(2, 1).is_err());
    }

    #[test]
    fn mandelbrot_small() {
        assert_eq!(mandelbrot(1).unwrap(), vec![real(1), real(1)]);
        assert_eq!(
            mandelbrot(3).unwrap(),
            vec![real(1), real(1), real(2), real(1)]
        );
        let m = mandelbrot(63).unwrap();
        assert_eq!(m.len(), 64);
        assert!(m.iter().all(|(re, _)| *re > 0));
        // maps down with a warning
        assert_eq!(mandelbrot(100).unwrap().len(), 64);
    }

    #[test]
    fn family_specs() {
        let s: FamilySpec = "mignotte:64:8".parse().unwrap();
        assert_eq!(s, FamilySpec::new(Family::Mignotte, 64, Some(8)).unwrap());
        assert_eq!(s.to_string(), "mignotte:64:8");
        assert_eq!(
            "mandelbrot:127"
                .parse::<FamilySpec>()
                .unwrap()
                .effective_degree(),
            127
        );
        assert_eq!(
            "mandelbrot:100"
                .parse::<FamilySpec>()
                .unwrap()
                .effective_degree(),
            63
        );
        for bad in [
            "",
            "bernoulli",
            "bernoulli:x",
            "mignotte:8",
            "spiral:8:2",
            "foo:3",
            "bernoulli:3:1:1",
        ] {
            assert!(bad.parse::<FamilySpec>().is_err(), "{bad}");
        }
    }
}
