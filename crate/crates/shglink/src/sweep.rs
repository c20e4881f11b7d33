//! Grid evaluation of the link model.
//!
//! Grid points are independent, so they are evaluated on a rayon pool and
//! collected back in grid order; output does not depend on thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use shglink_core::link::{solve_link, LinkSolution};
use shglink_core::resonator;
use shglink_core::Error as CoreError;
use thiserror::Error;

use crate::config::RunConfig;
use crate::table::{Cell, Table};
use crate::units::{parse_quantity, Dimension};

/// Header of every link record, in emission order.
pub const LINK_COLUMNS: [&str; 11] = [
    "P_in_W",
    "d_m",
    "stable",
    "P_nu_W",
    "eta_shg",
    "P_2nu_W",
    "P_r_W",
    "snr",
    "spectral_eff_bpsHz",
    "threshold_W",
    "warnings",
];

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    Spec(String),
    #[error("model error at {at}: {source}")]
    Model {
        at: String,
        #[source]
        source: CoreError,
    },
    #[error("cannot build worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    PumpPower,
    Distance,
    /// Position along the resonator axis (beam profile).
    Z,
}

impl SweepVariable {
    pub fn dimension(self) -> Dimension {
        match self {
            SweepVariable::PumpPower => Dimension::Power,
            SweepVariable::Distance | SweepVariable::Z => Dimension::Length,
        }
    }
}

impl FromStr for SweepVariable {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "p_in" | "P_in" => Ok(SweepVariable::PumpPower),
            "d" => Ok(SweepVariable::Distance),
            "z" => Ok(SweepVariable::Z),
            other => Err(SweepError::Spec(format!("unknown sweep variable `{other}` (expected p_in, d or z)"))),
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVariable::PumpPower => "p_in",
            SweepVariable::Distance => "d",
            SweepVariable::Z => "z",
        })
    }
}

/// Linear grid over one variable; everything else comes from the run config.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, start: f64, stop: f64, count: usize) -> Result<Self, SweepError> {
        if start >= stop || !start.is_finite() || !stop.is_finite() {
            return Err(SweepError::Spec(format!("start ({start}) must be below stop ({stop})")));
        }
        if count < 2 {
            return Err(SweepError::Spec(format!("count must be at least 2, got {count}")));
        }
        if start < 0.0 {
            return Err(SweepError::Spec(format!("{variable} cannot be negative")));
        }
        Ok(SweepSpec {
            variable,
            start,
            stop,
            count,
        })
    }

    /// Parses bounds with optional units (bare numbers are SI).
    pub fn parse(variable: &str, start: &str, stop: &str, count: usize) -> Result<Self, SweepError> {
        let variable: SweepVariable = variable.parse()?;
        let dim = variable.dimension();
        let q = |s: &str| parse_quantity(s, dim, true).map_err(|e| SweepError::Spec(e.to_string()));
        SweepSpec::new(variable, q(start)?, q(stop)?, count)
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

/// `count` evenly spaced values with both ends included exactly.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let last = count.saturating_sub(1).max(1) as f64;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                stop
            } else {
                start + (stop - start) * (i as f64 / last)
            }
        })
        .collect()
}

/// Evaluates `f` over `items` on `threads` workers (0 = rayon default),
/// preserving input order.
pub fn evaluate_ordered<I, T, F>(items: &[I], threads: usize, f: F) -> Result<Vec<T>, SweepError>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T, SweepError> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| items.par_iter().map(&f).collect())
}

/// Outcome of one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointOutcome {
    Solved(LinkSolution),
    Unstable { p_in: f64, d: f64 },
}

impl PointOutcome {
    pub fn solution(&self) -> Option<&LinkSolution> {
        match self {
            PointOutcome::Solved(s) => Some(s),
            PointOutcome::Unstable { .. } => None,
        }
    }

    /// Warnings that change the exit status: unstable rows and SHG beyond
    /// the small-signal bound.
    pub fn is_flagged(&self) -> bool {
        match self {
            PointOutcome::Solved(s) => s.warnings.large_signal,
            PointOutcome::Unstable { .. } => true,
        }
    }

    pub fn warning_text(&self) -> String {
        match self {
            PointOutcome::Unstable { .. } => "unstable".to_string(),
            PointOutcome::Solved(s) => {
                let mut w = Vec::new();
                if s.warnings.large_signal {
                    w.push("small_signal");
                }
                if s.warnings.thick_crystal {
                    w.push("rayleigh");
                }
                w.join(";")
            }
        }
    }
}

/// Solves one point, mapping an unstable geometry to a flagged outcome.
pub fn solve_point(p_in: f64, d: f64, cfg: &RunConfig) -> Result<PointOutcome, SweepError> {
    match solve_link(p_in, d, &cfg.link) {
        Ok(s) => Ok(PointOutcome::Solved(s)),
        Err(CoreError::Unstable { .. }) => Ok(PointOutcome::Unstable { p_in, d }),
        Err(source) => Err(SweepError::Model {
            at: format!("P_in = {p_in} W, d = {d} m"),
            source,
        }),
    }
}

pub fn link_row(outcome: &PointOutcome) -> Vec<Cell> {
    match outcome {
        PointOutcome::Solved(s) => vec![
            s.p_in.into(),
            s.d.into(),
            true.into(),
            s.p_nu.into(),
            s.eta_shg.into(),
            s.p_2nu.into(),
            s.p_r.into(),
            s.snr.into(),
            s.spectral_efficiency.into(),
            s.threshold.into(),
            outcome.warning_text().into(),
        ],
        PointOutcome::Unstable { p_in, d } => {
            let mut row = vec![Cell::Num(*p_in), Cell::Num(*d), Cell::Bool(false)];
            row.extend(std::iter::repeat_n(Cell::Empty, 7));
            row.push(outcome.warning_text().into());
            row
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub table: Table,
    /// Any row carried an exit-status warning.
    pub flagged: bool,
}

/// Threshold at the configured distance and the `4·f_RR` stability bound.
pub fn summary_footer(cfg: &RunConfig) -> Vec<(String, Cell)> {
    let threshold = match solve_point(0.0, cfg.d, cfg) {
        Ok(PointOutcome::Solved(s)) => Cell::Num(s.threshold),
        _ => Cell::Text("unstable".into()),
    };
    let bound = cfg
        .link
        .geometry(cfg.d)
        .ok()
        .and_then(|g| resonator::is_stable(&g).d_bound)
        .map_or(Cell::Text("inf".into()), Cell::Num);
    vec![
        (format!("threshold_W_at_d={}", crate::table::format_sig9(cfg.d)), threshold),
        ("stability_bound_m".to_string(), bound),
    ]
}

/// One record per grid point, in grid order.
pub fn run_sweep(spec: &SweepSpec, cfg: &RunConfig, threads: usize) -> Result<SweepOutput, SweepError> {
    let points = spec.points();
    if spec.variable == SweepVariable::Z {
        return crate::figures::profile_table(cfg, &points, threads).map(|table| SweepOutput { table, flagged: false });
    }
    let outcomes = evaluate_ordered(&points, threads, |&x| match spec.variable {
        SweepVariable::PumpPower => solve_point(x, cfg.d, cfg),
        _ => solve_point(cfg.p_in, x, cfg),
    })?;
    let mut table = Table::new(&LINK_COLUMNS);
    for o in &outcomes {
        table.push(link_row(o));
    }
    table.footer = summary_footer(cfg);
    table.footer.push(("rows".to_string(), Cell::Int(outcomes.len() as u64)));
    Ok(SweepOutput {
        table,
        flagged: outcomes.iter().any(PointOutcome::is_flagged),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_ends() {
        assert_eq!(linspace(0.0, 1.0, 2), vec![0.0, 1.0]);
        let v = linspace(0.1, 11.9, 119);
        assert_eq!((v[0], v[118]), (0.1, 11.9));
    }

    #[test]
    fn spec_validation() {
        assert!(SweepSpec::new(SweepVariable::Distance, 1.0, 1.0, 5).is_err());
        assert!(SweepSpec::new(SweepVariable::Distance, 0.0, 1.0, 1).is_err());
        assert!(SweepSpec::new(SweepVariable::PumpPower, -1.0, 1.0, 3).is_err());
        assert!(SweepSpec::parse("T", "0", "1", 3).is_err());
        let s = SweepSpec::parse("d", "50 cm", "13m", 4).unwrap();
        assert_eq!((s.start, s.stop), (0.5, 13.0));
    }

    #[test]
    fn two_point_sweep() {
        let cfg = RunConfig::defaults();
        let spec = SweepSpec::new(SweepVariable::PumpPower, 0.0, 100.0, 2).unwrap();
        assert_eq!(run_sweep(&spec, &cfg, 1).unwrap().table.rows.len(), 2);
    }

    #[test]
    fn unstable_rows_are_flagged_not_zeroed() {
        let cfg = RunConfig::defaults();
        let spec = SweepSpec::new(SweepVariable::Distance, 11.0, 13.0, 5).unwrap();
        let out = run_sweep(&spec, &cfg, 2).unwrap();
        assert!(out.flagged);
        let last = out.table.rows.last().unwrap();
        assert_eq!(last[2], Cell::Bool(false));
        assert_eq!(last[3], Cell::Empty);
        assert_eq!(last[10], Cell::Text("unstable".into()));
    }
}
