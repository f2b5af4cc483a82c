//! Command-line front end for the `rootclust` solver.

pub mod args;
pub mod plot;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use rootclust::benchmarks::FamilySpec;
use rootclust::clustering::{solve_lcp, use_real_symmetry, ClusterOptions, RealSymmetry};
use rootclust::deflation::cluster_with_deflation;
use rootclust::polynomial::{parse_polynomial, ExactOracle, OraclePolynomial};
use rootclust::Error;

use args::{Cli, Mode, Output, Symmetry};
use report::{decimal, Parameters, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNRESOLVED: i32 = 2;

/// Loads `builtin:<family>:<d>[:<a>]` or a polynomial file.
pub fn load_polynomial(source: &str) -> Result<Box<dyn OraclePolynomial>, String> {
    if let Some(spec) = source.strip_prefix("builtin:") {
        let spec: FamilySpec = spec.parse().map_err(|e: Error| e.to_string())?;
        return spec.oracle().map_err(|e| e.to_string());
    }
    let text = std::fs::read_to_string(source).map_err(|e| format!("{source}: {e}"))?;
    let coeffs = parse_polynomial(&text).map_err(|e| format!("{source}: {e}"))?;
    let p = ExactOracle::new(coeffs).map_err(|e| format!("{source}: {e}"))?;
    Ok(Box::new(p))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unresolvable { .. } | Error::DeflationStalled { .. } | Error::NoConvergence(_) => {
            EXIT_UNRESOLVED
        }
        Error::Parse { .. } | Error::InvalidInput(_) => EXIT_USAGE,
    }
}

/// Runs the command line `argv` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match solve(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn solve(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), (i32, String)> {
    let usage = |m: String| (EXIT_USAGE, m);
    let p = load_polynomial(&cli.poly).map_err(usage)?;
    let setting = match cli.real_symmetry {
        Symmetry::On => RealSymmetry::On,
        Symmetry::Off => RealSymmetry::Off,
        Symmetry::Auto => RealSymmetry::Auto,
    };
    let roi = &cli.roi.region;
    let real = use_real_symmetry(setting, &*p, roi).map_err(|e| usage(e.to_string()))?;
    let options = ClusterOptions {
        real_symmetry: real,
        record_boxes: cli.plot_boxes,
    };
    let n = match cli.mode {
        Mode::Plain => None,
        Mode::Deflate => Some(cli.n.resolve(p.degree())),
    };
    let solution = match n {
        None => solve_lcp(&*p, roi, &cli.eps, &options),
        Some(n) => cluster_with_deflation(&*p, roi, &cli.eps, n, &options),
    }
    .map_err(|e| (exit_code(&e), e.to_string()))?;

    let report = RunReport::new(
        p.degree(),
        &solution,
        Parameters {
            poly: cli.poly.clone(),
            roi: cli.roi.bounds.each_ref().map(decimal),
            eps: decimal(&cli.eps),
            mode: format!("{:?}", cli.mode).to_lowercase(),
            n,
            real_symmetry: real,
        },
    );
    let text = match cli.output {
        Output::Json => report.to_json() + "\n",
        Output::Csv => report.to_csv(),
    };
    out.write_all(text.as_bytes())
        .map_err(|e| usage(e.to_string()))?;
    if cli.stats {
        let _ = err.write_all(report.summary().as_bytes());
    }
    if let Some(path) = &cli.plot {
        let svg = plot::render(roi, &solution.clusters, &solution.boxes);
        std::fs::write(path, svg).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
