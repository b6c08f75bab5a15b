//! Lower-bound simulation over random tanglegrams.
//!
//! For every size `n` in a range and every sample, the bound is computed under
//! each ordered pair of cap policies `s = 4`, `m = sqrt(n)`, `l = n/2`. Rows
//! are emitted sorted by `(n, sample, cl, cr)`; per-`n` means and maxima and
//! quadratic least-squares fits are derived from them.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::bound::{crossing_lower_bound, Cap};
use crate::error::{Error, Result};
use crate::sampler::{random_tanglegram, Distribution, SampleConfig};
use crate::solver::{exact_crt_with, SolverOptions};

pub const CSV_HEADER: &str = "n,seed,sample,cl,cr,bound,crt,runtime_s";
pub const SUMMARY_HEADER: &str = "n,cl,cr,mean,max";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CapPolicy {
    /// 4
    Small,
    /// sqrt(n)
    Medium,
    /// n/2
    Large,
}

impl CapPolicy {
    pub const ALL: [CapPolicy; 3] = [CapPolicy::Small, CapPolicy::Medium, CapPolicy::Large];

    pub fn cap(&self, n: usize) -> Cap {
        match self {
            CapPolicy::Small => Cap::Int(4),
            CapPolicy::Medium => Cap::Sqrt(n as u64),
            CapPolicy::Large => Cap::ratio(n as u64, 2),
        }
    }

    pub fn letter(&self) -> char {
        match self {
            CapPolicy::Small => 's',
            CapPolicy::Medium => 'm',
            CapPolicy::Large => 'l',
        }
    }

    /// All nine ordered pairs `ss, sm, sl, ms, ..., ll`.
    pub fn all_pairs() -> Vec<(CapPolicy, CapPolicy)> {
        Self::ALL
            .iter()
            .flat_map(|&a| Self::ALL.iter().map(move |&b| (a, b)))
            .collect()
    }
}

impl fmt::Display for CapPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for CapPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" => Ok(CapPolicy::Small),
            "m" => Ok(CapPolicy::Medium),
            "l" => Ok(CapPolicy::Large),
            other => Err(Error::InvalidArgument(format!(
                "unknown cap policy `{other}`"
            ))),
        }
    }
}

/// Parses a two-letter policy pair such as `ml`.
pub fn parse_policy_pair(s: &str) -> Result<(CapPolicy, CapPolicy)> {
    let mut chars = s.chars();
    match (chars.next(), chars.next(), chars.next()) {
        (Some(a), Some(b), None) => Ok((a.to_string().parse()?, b.to_string().parse()?)),
        _ => Err(Error::InvalidArgument(format!(
            "policy pair `{s}` must be two letters from s, m, l"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub nmin: usize,
    pub nmax: usize,
    pub samples: usize,
    pub seed: u64,
    pub distribution: Distribution,
    pub policies: Vec<(CapPolicy, CapPolicy)>,
    /// Also compute the exact crossing number for `n` up to this size.
    pub exact_upto: Option<usize>,
    /// Record per-row wall time. Off by default so the CSV is reproducible
    /// byte for byte.
    pub timing: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            nmin: 10,
            nmax: 100,
            samples: 100,
            seed: 0,
            distribution: Distribution::default(),
            policies: CapPolicy::all_pairs(),
            exact_upto: None,
            timing: false,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nmin == 0 || self.nmin > self.nmax {
            return Err(Error::InvalidArgument(format!(
                "invalid size range [{}, {}]",
                self.nmin, self.nmax
            )));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        if self.policies.is_empty() {
            return Err(Error::InvalidArgument("no cap policies selected".into()));
        }
        for &(a, b) in &self.policies {
            a.cap(self.nmin).validate()?;
            b.cap(self.nmin).validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRow {
    pub n: usize,
    pub seed: u64,
    pub sample: usize,
    pub cl: CapPolicy,
    pub cr: CapPolicy,
    pub bound: u64,
    pub crt: Option<u64>,
    pub runtime_s: Option<f64>,
}

impl SimulationRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.seed,
            self.sample,
            self.cl,
            self.cr,
            self.bound,
            self.crt.map(|c| c.to_string()).unwrap_or_default(),
            self.runtime_s.map(format_sig6).unwrap_or_default(),
        )
    }
}

/// `C(n,2)`.
fn pairs(n: usize) -> u64 {
    (n as u64) * (n as u64).saturating_sub(1) / 2
}

/// Runs the simulation. Fails if any bound reaches half of `C(n,2)` or exceeds
/// a computed exact value, either of which would indicate a bug.
pub fn simulate(cfg: &SimulationConfig) -> Result<Vec<SimulationRow>> {
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = (cfg.nmin..=cfg.nmax)
        .flat_map(|n| (0..cfg.samples).map(move |s| (n, s)))
        .collect();
    let mut rows: Vec<SimulationRow> = cells
        .par_iter()
        .map(|&(n, sample)| run_cell(cfg, n, sample))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    rows.sort_by_key(|r| (r.n, r.sample, r.cl, r.cr));
    Ok(rows)
}

fn run_cell(cfg: &SimulationConfig, n: usize, sample: usize) -> Result<Vec<SimulationRow>> {
    let sc = SampleConfig {
        n,
        seed: cfg.seed,
        count: cfg.samples,
        distribution: cfg.distribution,
    };
    let t = random_tanglegram(&sc, sample)?;
    let crt = match cfg.exact_upto {
        Some(limit) if n <= limit => {
            let opts = SolverOptions {
                cap: limit.max(n),
                pruning: true,
            };
            Some(exact_crt_with(&t, opts)?.crt)
        }
        _ => None,
    };
    cfg.policies
        .iter()
        .map(|&(cl, cr)| {
            let start = Instant::now();
            let bound = crossing_lower_bound(&t, cl.cap(n), cr.cap(n))?;
            let elapsed = start.elapsed().as_secs_f64();
            if 2 * bound >= pairs(n) && n >= 2 {
                return Err(Error::InvalidArgument(format!(
                    "bound {bound} at n = {n} reaches half of C(n,2); this is a bug"
                )));
            }
            if let Some(c) = crt {
                if bound > c {
                    return Err(Error::InvalidArgument(format!(
                        "bound {bound} exceeds exact crossing number {c} at n = {n}, sample {sample}; this is a bug"
                    )));
                }
            }
            Ok(SimulationRow {
                n,
                seed: cfg.seed,
                sample,
                cl,
                cr,
                bound,
                crt,
                runtime_s: cfg.timing.then_some(elapsed),
            })
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SimulationRow], mut w: W) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.to_csv())?;
    }
    Ok(())
}

/// Mean and maximum bound for one `(n, cl, cr)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub n: usize,
    pub cl: CapPolicy,
    pub cr: CapPolicy,
    pub mean: f64,
    pub max: u64,
}

/// Per-`(n, cl, cr)` means and maxima, sorted by `(cl, cr, n)`.
pub fn summarize(rows: &[SimulationRow]) -> Vec<SeriesPoint> {
    let mut keyed: Vec<&SimulationRow> = rows.iter().collect();
    keyed.sort_by_key(|r| (r.cl, r.cr, r.n));
    keyed
        .chunk_by(|a, b| (a.cl, a.cr, a.n) == (b.cl, b.cr, b.n))
        .map(|g| SeriesPoint {
            n: g[0].n,
            cl: g[0].cl,
            cr: g[0].cr,
            mean: g.iter().map(|r| r.bound as f64).sum::<f64>() / g.len() as f64,
            max: g.iter().map(|r| r.bound).max().expect("nonempty group"),
        })
        .collect()
}

pub fn write_summary<W: Write>(points: &[SeriesPoint], mut w: W) -> io::Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{}",
            p.n,
            p.cl,
            p.cr,
            format_sig6(p.mean),
            p.max
        )?;
    }
    Ok(())
}

/// `(x, y)` points.
pub type Series = Vec<(f64, f64)>;

/// `(n, mean)` and `(n, max)` series for one policy pair.
pub fn series(points: &[SeriesPoint], cl: CapPolicy, cr: CapPolicy) -> (Series, Series) {
    points
        .iter()
        .filter(|p| p.cl == cl && p.cr == cr)
        .map(|p| ((p.n as f64, p.mean), (p.n as f64, p.max as f64)))
        .unzip()
}

/// `y = a x^2 + b x + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticFit {
    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }
}

/// Least-squares quadratic through `points`.
pub fn fit_quadratic(points: &[(f64, f64)]) -> Result<QuadraticFit> {
    let distinct = {
        let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs.len()
    };
    if distinct < 3 {
        return Err(Error::InvalidArgument(
            "a quadratic fit needs at least three distinct x values".into(),
        ));
    }
    let design = DMatrix::from_fn(points.len(), 3, |i, j| points[i].0.powi(2 - j as i32));
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let coef = design
        .svd(true, true)
        .solve(&y, 1e-12)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
    Ok(QuadraticFit {
        a: coef[0],
        b: coef[1],
        c: coef[2],
    })
}

/// Formats `x` with six significant digits, without exponent notation.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
