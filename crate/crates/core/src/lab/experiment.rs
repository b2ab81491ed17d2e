use super::exponent::{theoretical_exponent, Quantity, ReferenceBound};
use super::fit::{fit_loglog, FitResult};
use crate::boxes::{count_by_det, count_by_rank, BoxSpec};
use crate::census::{census_products, count_pairs, count_solutions, Limits};
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::par;
use num_rational::Ratio;
use std::fmt::Write as _;

pub const REPORT_HEADER: &str = "quantity,m,n,H,count,fitted_slope,theory_exponent,gap";

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub quantity: Quantity,
    pub n: usize,
    pub m: u32,
    /// Rank for `rank_k`.
    pub k: Option<u32>,
    /// Target for the `T_m_*_C` quantities; defaults to `I_n` (nonsingular)
    /// or `O_n` (zero).
    pub target: Option<Mat>,
    pub grid: Vec<u64>,
    pub limits: Limits,
}

impl ExperimentConfig {
    pub fn new(quantity: Quantity, n: usize, m: u32, grid: Vec<u64>) -> Self {
        ExperimentConfig {
            quantity,
            n,
            m,
            k: None,
            target: None,
            grid,
            limits: Limits::default(),
        }
    }

    pub fn bound(&self) -> ReferenceBound {
        ReferenceBound::new(self.quantity, self.m, self.n as u32, self.k)
    }

    fn target(&self) -> Result<Mat> {
        if let Some(c) = self.target {
            if c.n() != self.n {
                return Err(Error::DimensionMismatch(c.n(), self.n));
            }
        }
        let singular_nonzero = |c: Mat| -> Result<Mat> {
            if c.is_zero() || c.det()? != 0 {
                return Err(Error::Unsupported(format!(
                    "{} needs a singular nonzero target",
                    self.quantity
                )));
            }
            Ok(c)
        };
        match self.quantity {
            Quantity::TmNonsingularC => {
                let c = match self.target {
                    Some(c) => c,
                    None => Mat::identity(self.n)?,
                };
                if c.det()? == 0 {
                    return Err(Error::Unsupported(format!("{} needs det C != 0", self.quantity)));
                }
                Ok(c)
            }
            Quantity::TmZeroC => match self.target {
                Some(c) if !c.is_zero() => {
                    Err(Error::Unsupported(format!("{} needs C = 0", self.quantity)))
                }
                _ => Mat::zero(self.n),
            },
            Quantity::TmSingularCM2 | Quantity::TmSingularCM3Plus => match self.target {
                Some(c) => singular_nonzero(c),
                None => Err(Error::Unsupported(format!("{} needs --target", self.quantity))),
            },
            _ => Err(Error::Unsupported(format!("{} takes no target", self.quantity))),
        }
    }
}

/// The count of `config.quantity` at a single `H`.
pub fn measure(config: &ExperimentConfig, h: u64) -> Result<u128> {
    let (n, m, limits) = (config.n, config.m, &config.limits);
    let spec = BoxSpec::new(n, h)?;
    Ok(match config.quantity {
        Quantity::Box => spec.cardinality()? as u128,
        Quantity::DetZero => count_by_det(&spec)?.get(0) as u128,
        Quantity::RankK => {
            let k = config.k.ok_or_else(|| Error::Unsupported("rank_k needs k".into()))?;
            count_by_rank(&spec)?.get(k as i128) as u128
        }
        Quantity::TmNonsingularC
        | Quantity::TmZeroC
        | Quantity::TmSingularCM2
        | Quantity::TmSingularCM3Plus => {
            count_solutions(&spec, m, &config.target()?, limits)? as u128
        }
        Quantity::PairsNonsingular => count_pairs(&BoxSpec::nonsingular(n, h)?, m, limits)?,
        Quantity::PairsAllM2 | Quantity::PairsAllM3Plus => count_pairs(&spec, m, limits)?,
        Quantity::WLower => census_products(&spec, m, limits)?.distinct() as u128,
    })
}

#[derive(Clone, Debug)]
pub struct ReportRow {
    pub quantity: Quantity,
    pub m: u32,
    pub n: usize,
    pub h: u64,
    /// The count, or the error message when a guard or check tripped.
    pub count: std::result::Result<u128, String>,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub bound: ReferenceBound,
    pub exponent: Ratio<i64>,
    pub rows: Vec<ReportRow>,
    /// Fit over the successful rows; `None` with fewer than three of them.
    pub fit: Option<FitResult>,
}

fn fmt_ratio(r: &Ratio<i64>) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl ExperimentReport {
    pub fn points(&self) -> Vec<(u64, u128)> {
        self.rows
            .iter()
            .filter_map(|r| r.count.as_ref().ok().map(|&c| (r.h, c)))
            .collect()
    }

    /// `fitted_slope - theory_exponent`.
    pub fn gap(&self) -> Option<f64> {
        let e = *self.exponent.numer() as f64 / *self.exponent.denom() as f64;
        self.fit.as_ref().map(|f| f.slope - e)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.count.is_err())
    }

    /// One CSV line per grid point. The fitted slope and gap repeat on every
    /// row; `NA` marks a missing count or fit.
    pub fn to_csv(&self) -> String {
        let slope = self.fit.as_ref().map_or("NA".into(), |f| format!("{:.6}", f.slope));
        let gap = self.gap().map_or("NA".into(), |g| format!("{g:.6}"));
        let theory = fmt_ratio(&self.exponent);
        let mut out = String::from(REPORT_HEADER);
        out.push('\n');
        for r in &self.rows {
            let count = r.count.as_ref().map_or("NA".into(), |c| c.to_string());
            writeln!(
                out,
                "{},{},{},{},{count},{slope},{theory},{gap}",
                r.quantity, r.m, r.n, r.h
            )
            .unwrap();
        }
        out
    }

    /// Whitespace-separated `H count` columns for gnuplot.
    pub fn to_dat(&self) -> String {
        let mut out = format!(
            "# {} m={} n={} theory={}\n",
            self.bound.quantity,
            self.bound.m,
            self.bound.n,
            fmt_ratio(&self.exponent)
        );
        if let Some(f) = &self.fit {
            writeln!(out, "# slope={:.6} intercept={:.6}", f.slope, f.intercept).unwrap();
        }
        out.push_str("# H count\n");
        for (h, c) in self.points() {
            writeln!(out, "{h} {c}").unwrap();
        }
        out
    }
}

/// Measures every grid point (in parallel) and fits the successful ones.
///
/// Per-point failures land in the row; only an invalid configuration is an
/// error.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let bound = config.bound();
    let exponent = theoretical_exponent(&bound)?;
    let mut grid = config.grid.clone();
    grid.sort_unstable();
    grid.dedup();
    if grid.is_empty() {
        return Err(Error::OutOfRange("empty H grid".into()));
    }
    if matches!(
        config.quantity,
        Quantity::TmNonsingularC | Quantity::TmZeroC | Quantity::TmSingularCM2 | Quantity::TmSingularCM3Plus
    ) {
        config.target()?;
    }
    let counts = par::map_collect(grid.len(), |i| measure(config, grid[i]));
    let rows: Vec<ReportRow> = grid
        .iter()
        .zip(counts)
        .map(|(&h, c)| ReportRow {
            quantity: config.quantity,
            m: config.m,
            n: config.n,
            h,
            count: c.map_err(|e| e.to_string()),
        })
        .collect();
    let mut report = ExperimentReport {
        bound,
        exponent,
        rows,
        fit: None,
    };
    let points = report.points();
    if points.len() >= 3 {
        report.fit = Some(fit_loglog(&points)?);
    }
    Ok(report)
}
