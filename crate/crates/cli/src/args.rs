//! Command-line flags and their value parsers.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rug::Rational;

use rootclust::geometry::{is_dyadic, ComplexBox};
use rootclust::polynomial::parse_rational;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "rootclust",
    version,
    about = "Certified clusters of the roots of a complex polynomial in a square region"
)]
pub struct Cli {
    /// Polynomial file, or `builtin:<family>:<d>[:<a>]` with family one of
    /// bernoulli, mignotte, mandelbrot, spiral
    #[arg(long)]
    pub poly: String,

    /// Square region `xmin,xmax,ymin,ymax` with dyadic bounds
    #[arg(long, allow_hyphen_values = true, value_parser = parse_roi)]
    pub roi: Roi,

    /// Largest cluster radius: `2^-k` or a dyadic decimal
    #[arg(long, default_value = "2^-53", value_parser = parse_eps)]
    pub eps: Rational,

    #[arg(long, value_enum, default_value_t = Mode::Plain)]
    pub mode: Mode,

    /// Clusters per deflation pass: a positive integer, or `auto` for d/8
    #[arg(long, default_value = "auto", value_parser = parse_n)]
    pub n: Batch,

    /// Skip the lower half plane for real polynomials
    #[arg(long, value_enum, default_value_t = Symmetry::Auto)]
    pub real_symmetry: Symmetry,

    #[arg(long, value_enum, default_value_t = Output::Json)]
    pub output: Output,

    /// Write an SVG picture of the clusters
    #[arg(long)]
    pub plot: Option<PathBuf>,

    /// Draw the tested boxes in the picture
    #[arg(long, requires = "plot")]
    pub plot_boxes: bool,

    /// Print solver statistics on stderr
    #[arg(long)]
    pub stats: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Plain,
    Deflate,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Symmetry {
    On,
    Off,
    Auto,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Batch {
    Auto,
    Fixed(usize),
}

impl Batch {
    pub fn resolve(self, degree: usize) -> usize {
        match self {
            Batch::Fixed(n) => n,
            Batch::Auto => (degree / 8).max(1),
        }
    }
}

/// The region as given and as a box.
#[derive(Clone, Debug)]
pub struct Roi {
    pub bounds: [Rational; 4],
    pub region: ComplexBox,
}

pub fn parse_roi(s: &str) -> Result<Roi, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("expected xmin,xmax,ymin,ymax".into());
    }
    let mut bounds: Vec<Rational> = Vec::with_capacity(4);
    for p in parts {
        let v = parse_rational(p)?;
        if !is_dyadic(&v) {
            return Err(format!("{p} is not a dyadic number"));
        }
        bounds.push(v);
    }
    let [xmin, xmax, ymin, ymax]: [Rational; 4] = bounds.try_into().unwrap();
    if xmin >= xmax || ymin >= ymax {
        return Err("empty region".into());
    }
    let region = ComplexBox::from_bounds(&xmin, &xmax, &ymin, &ymax).map_err(|e| e.to_string())?;
    Ok(Roi {
        bounds: [xmin, xmax, ymin, ymax],
        region,
    })
}

pub fn parse_eps(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let v = if let Some(k) = t.strip_prefix("2^") {
        let k: i32 = k
            .trim_matches(|c| c == '(' || c == ')' || c == '{' || c == '}')
            .parse()
            .map_err(|_| format!("bad exponent in {s:?}"))?;
        let one = Rational::from(1);
        if k >= 0 {
            one << k.unsigned_abs()
        } else {
            one >> k.unsigned_abs()
        }
    } else {
        parse_rational(t)?
    };
    if v <= 0 {
        return Err("eps must be positive".into());
    }
    if !is_dyadic(&v) {
        return Err(format!("{s} is not a dyadic number; use 2^-k"));
    }
    Ok(v)
}

pub fn parse_n(s: &str) -> Result<Batch, String> {
    if s == "auto" {
        return Ok(Batch::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Batch::Fixed(n)),
        _ => Err("expected a positive integer or `auto`".into()),
    }
}
