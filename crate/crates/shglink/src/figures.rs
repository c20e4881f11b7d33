//! Data tables behind the standard plots: beam profile, station radii
//! versus distance, and link performance versus pump power and distance.

use std::fmt;
use std::str::FromStr;

use shglink_core::resonator::{self, q_profile};
use shglink_core::Error as CoreError;

use crate::config::RunConfig;
use crate::sweep::{evaluate_ordered, linspace, solve_point, summary_footer, PointOutcome, SweepError};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Beam radius along the resonator at the configured distance.
    BeamProfile,
    /// Radii at M1, L1, L2 and M2 versus distance.
    StationRadii,
    /// Received power and spectral efficiency versus pump power.
    PumpSweep,
    /// Received power and spectral efficiency versus distance.
    DistanceSweep,
}

impl Figure {
    pub const ALL: [Figure; 4] = [
        Figure::BeamProfile,
        Figure::StationRadii,
        Figure::PumpSweep,
        Figure::DistanceSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::BeamProfile => "fig5",
            Figure::StationRadii => "fig6",
            Figure::PumpSweep => "fig7",
            Figure::DistanceSweep => "fig8",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown figure `{s}` (expected fig5, fig6, fig7 or fig8)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOutput {
    pub table: Table,
    /// Any row carried an exit-status warning.
    pub flagged: bool,
}

fn model_error(at: String) -> impl FnOnce(CoreError) -> SweepError {
    move |source| SweepError::Model { at, source }
}

/// Radii at the given axial positions for the configured distance.
pub fn profile_table(cfg: &RunConfig, z: &[f64], threads: usize) -> Result<Table, SweepError> {
    let geometry = cfg.link.geometry(cfg.d).map_err(model_error(format!("d = {}", cfg.d)))?;
    let profile = q_profile(&geometry).map_err(model_error(format!("d = {}", cfg.d)))?;
    let rows = evaluate_ordered(z, threads, |&z| {
        let w00 = profile.fundamental_radius_at(z).map_err(model_error(format!("z = {z}")))?;
        let w = profile.multimode_radius_at(z).map_err(model_error(format!("z = {z}")))?;
        Ok(vec![Cell::Num(z), Cell::Num(w), Cell::Num(w00)])
    })?;
    let mut table = Table::new(&["z_m", "w_m", "w00_m"]);
    table.rows = rows;
    Ok(table)
}

/// Beam profile sampled uniformly within each resonator segment.
pub fn beam_profile(cfg: &RunConfig) -> Result<Table, SweepError> {
    let geometry = cfg.link.geometry(cfg.d).map_err(model_error(format!("d = {}", cfg.d)))?;
    let points = q_profile(&geometry)
        .and_then(|p| p.sample(cfg.profile_samples))
        .map_err(model_error(format!("d = {}", cfg.d)))?;
    let mut table = Table::new(&["z_m", "w_m", "w00_m"]);
    for p in points {
        table.push(vec![p.z.into(), p.w.into(), p.w00.into()]);
    }
    Ok(table)
}

pub fn station_radii(cfg: &RunConfig, threads: usize) -> Result<FigureOutput, SweepError> {
    let grid = linspace(cfg.fig_d_start, cfg.fig_d_stop, cfg.fig_d_count);
    let rows = evaluate_ordered(&grid, threads, |&d| {
        let geometry = cfg.link.geometry(d).map_err(model_error(format!("d = {d}")))?;
        if !resonator::is_stable(&geometry).stable {
            let mut row = vec![Cell::Num(d)];
            row.extend(std::iter::repeat_n(Cell::Empty, 4));
            row.push(Cell::Text("unstable".into()));
            return Ok((row, true));
        }
        let (_, st) = resonator::multimode_radius_profile(&geometry).map_err(model_error(format!("d = {d}")))?;
        let m = st.multimode;
        let row = vec![
            d.into(),
            m.w_m1.into(),
            m.w_l1.into(),
            m.w_l2.into(),
            m.w_m2.into(),
            Cell::Text(String::new()),
        ];
        Ok((row, false))
    })?;
    let mut table = Table::new(&["d_m", "w_M1_m", "w_L1_m", "w_L2_m", "w_M2_m", "warnings"]);
    let flagged = rows.iter().any(|(_, f)| *f);
    table.rows = rows.into_iter().map(|(r, _)| r).collect();
    Ok(FigureOutput { table, flagged })
}

fn performance_row(o: &PointOutcome, leading: [&'static str; 2]) -> Vec<Cell> {
    let (p_in, d) = match o {
        PointOutcome::Solved(s) => (s.p_in, s.d),
        PointOutcome::Unstable { p_in, d } => (*p_in, *d),
    };
    let mut row: Vec<Cell> = leading
        .iter()
        .map(|k| Cell::Num(if *k == "d_m" { d } else { p_in }))
        .collect();
    if leading[0] == "P_in_W" {
        row.push(Cell::Bool(o.solution().is_some()));
    }
    match o.solution() {
        Some(s) => row.extend([Cell::Num(s.p_r), Cell::Num(s.spectral_efficiency)]),
        None => row.extend([Cell::Empty, Cell::Empty]),
    }
    row.push(o.warning_text().into());
    row
}

/// One pump-power sweep per configured distance, concatenated.
pub fn pump_sweep(cfg: &RunConfig, threads: usize) -> Result<FigureOutput, SweepError> {
    let powers = linspace(0.0, cfg.fig7_p_in_stop, cfg.fig7_p_in_count);
    let grid: Vec<(f64, f64)> = cfg
        .fig7_distances
        .iter()
        .flat_map(|&d| powers.iter().map(move |&p| (d, p)))
        .collect();
    let outcomes = evaluate_ordered(&grid, threads, |&(d, p)| solve_point(p, d, cfg))?;
    let mut table = Table::new(&["d_m", "P_in_W", "P_r_W", "spectral_eff_bpsHz", "warnings"]);
    for o in &outcomes {
        table.push(performance_row(o, ["d_m", "P_in_W"]));
    }
    table.footer = summary_footer(cfg);
    Ok(FigureOutput {
        table,
        flagged: outcomes.iter().any(PointOutcome::is_flagged),
    })
}

/// One distance sweep per configured pump power, concatenated.
pub fn distance_sweep(cfg: &RunConfig, threads: usize) -> Result<FigureOutput, SweepError> {
    let distances = linspace(cfg.fig_d_start, cfg.fig_d_stop, cfg.fig_d_count);
    let grid: Vec<(f64, f64)> = cfg
        .fig8_powers
        .iter()
        .flat_map(|&p| distances.iter().map(move |&d| (p, d)))
        .collect();
    let outcomes = evaluate_ordered(&grid, threads, |&(p, d)| solve_point(p, d, cfg))?;
    let mut table = Table::new(&["P_in_W", "d_m", "stable", "P_r_W", "spectral_eff_bpsHz", "warnings"]);
    for o in &outcomes {
        table.push(performance_row(o, ["P_in_W", "d_m"]));
    }
    table.footer = summary_footer(cfg);
    Ok(FigureOutput {
        table,
        flagged: outcomes.iter().any(PointOutcome::is_flagged),
    })
}

pub fn render(figure: Figure, cfg: &RunConfig, threads: usize) -> Result<FigureOutput, SweepError> {
    match figure {
        Figure::BeamProfile => beam_profile(cfg).map(|table| FigureOutput { table, flagged: false }),
        Figure::StationRadii => station_radii(cfg, threads),
        Figure::PumpSweep => pump_sweep(cfg, threads),
        Figure::DistanceSweep => distance_sweep(cfg, threads),
    }
}
