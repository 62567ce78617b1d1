//! Figure datasets.
//!
//! `B` sweeps emit `(correlation, f_p)` at every grid point of each feasible `(θ, γ)` cell,
//! with the output state taken from the branch that attains `f_p`. Overlap sweeps emit
//! `(correlation, f_opt)` at the optimal `B` for each `(γ, s)`.

use std::io::Write;

use clonelab::correlations::{
    concurrence_closed, quantum_discord, tangle_closed_for_input, DiscordOptions,
};
use clonelab::fidelity::{optimal_solution, partially_optimal_fidelity};
use clonelab::machine::{
    apply_machine, feasible_b_range, output_density, solve_machine, Branch, Input, InputPair,
};
use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::significant;
use crate::spec::{Axis, Measure, SweepSpec};

/// Changes in the correlation smaller than this do not count as a change of direction.
const FLAT: f64 = 1e-12;

/// The same for discord, which carries the optimizer's noise.
const DISCORD_FLAT: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub figure: String,
    pub branch: Branch,
    /// Arc of the parametric curve within a `(θ, γ, branch)` group: a new arc starts
    /// wherever the correlation turns around as `|B|` grows. The turning point belongs
    /// to both arcs.
    pub curve: usize,
    pub theta: f64,
    pub gamma: f64,
    pub s: f64,
    pub b: f64,
    pub correlation: f64,
    pub fidelity: f64,
}

pub const CSV_HEADER: [&str; 9] = [
    "figure",
    "branch",
    "curve",
    "theta",
    "gamma",
    "s",
    "b",
    "correlation",
    "fidelity",
];

/// A `(θ, γ)` or `(γ, s)` combination left out because it is infeasible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedCell {
    pub theta: Option<f64>,
    pub gamma: f64,
    pub s: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub records: Vec<SweepRecord>,
    pub skipped: Vec<SkippedCell>,
}

#[derive(Debug, Clone, Copy)]
struct Point {
    branch: Branch,
    b: f64,
    correlation: f64,
    fidelity: f64,
}

/// Runs the sweep. Cells are evaluated in parallel; the output order is canonical.
pub fn figure_sweep(spec: &SweepSpec) -> clonelab::Result<Sweep> {
    spec.discord.validate()?;
    match spec.axis {
        Axis::B => b_sweep(spec),
        Axis::Overlap => overlap_sweep(spec),
    }
}

/// The correlation of the first input's output under `branch`.
pub fn correlation_at(
    measure: Measure,
    b: f64,
    gamma: f64,
    pair: &InputPair,
    branch: Branch,
    discord: &DiscordOptions,
) -> clonelab::Result<f64> {
    let params = solve_machine(b, gamma, pair.overlap(), branch)?;
    match measure {
        // cloner outputs of valid machines are already normalized
        Measure::Concurrence => Ok(concurrence_closed(
            &params.output_amplitudes(pair, Input::First),
        )),
        Measure::Discord => {
            let rho = output_density(&apply_machine(&params, pair, Input::First));
            Ok(quantum_discord(&rho, discord)?.value)
        }
        Measure::Tangle => tangle_closed_for_input(gamma, b, pair, branch, Input::First),
    }
}

fn b_sweep(spec: &SweepSpec) -> clonelab::Result<Sweep> {
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for &theta in &spec.thetas {
        let pair = InputPair::new(theta)?;
        let s = pair.overlap();
        for &gamma in &spec.gammas {
            let range = match feasible_b_range(gamma, s) {
                Ok(r) => r,
                Err(e) => {
                    warn!("skipping θ = {theta}, γ = {gamma}: {e}");
                    skipped.push(SkippedCell {
                        theta: Some(theta),
                        gamma,
                        s,
                        reason: e.to_string(),
                    });
                    continue;
                }
            };
            let grid = if range.is_degenerate() {
                vec![0.0]
            } else {
                range.grid(spec.b_points)
            };
            let points = grid
                .par_iter()
                .map(|&b| {
                    let (fidelity, branch) = partially_optimal_fidelity(b, gamma, s)?;
                    let correlation =
                        correlation_at(spec.measure, b, gamma, &pair, branch, &spec.discord)?;
                    Ok(Point {
                        branch,
                        b,
                        correlation,
                        fidelity,
                    })
                })
                .collect::<clonelab::Result<Vec<_>>>()?;
            records.extend(split_arcs(spec, theta, gamma, s, points));
        }
    }
    Ok(Sweep { records, skipped })
}

/// Groups a cell's points by branch, labels arcs, and orders rows by `(branch, B, arc)`.
fn split_arcs(
    spec: &SweepSpec,
    theta: f64,
    gamma: f64,
    s: f64,
    points: Vec<Point>,
) -> Vec<SweepRecord> {
    let mut rows = Vec::with_capacity(points.len() + 2);
    for branch in Branch::ALL {
        let mut group: Vec<Point> = points.iter().copied().filter(|p| p.branch == branch).collect();
        group.sort_by(|p, q| p.b.abs().total_cmp(&q.b.abs()).then(p.b.total_cmp(&q.b)));
        let flat = match spec.measure {
            Measure::Discord => DISCORD_FLAT.max(spec.discord.tolerance),
            _ => FLAT,
        };
        for (point, curve) in label_arcs(&group, flat) {
            rows.push(SweepRecord {
                figure: spec.figure.name().to_string(),
                branch,
                curve,
                theta,
                gamma,
                s,
                b: point.b,
                correlation: point.correlation,
                fidelity: point.fidelity,
            });
        }
    }
    rows.sort_by(|p, q| {
        p.branch
            .index()
            .cmp(&q.branch.index())
            .then(p.b.total_cmp(&q.b))
            .then(p.curve.cmp(&q.curve))
    });
    rows
}

/// Walks points in order of increasing `|B|`, starting a new arc at each turn of the
/// correlation. Turning points are emitted twice, closing one arc and opening the next.
fn label_arcs(group: &[Point], flat: f64) -> Vec<(Point, usize)> {
    let mut out = Vec::with_capacity(group.len() + 2);
    let mut curve = 0;
    let mut direction = 0.0;
    for (k, &point) in group.iter().enumerate() {
        if k > 0 {
            let step = point.correlation - group[k - 1].correlation;
            if step.abs() > flat {
                let dir = step.signum();
                if direction != 0.0 && dir != direction {
                    curve += 1;
                    out.push((group[k - 1], curve));
                }
                direction = dir;
            }
        }
        out.push((point, curve));
    }
    out
}

fn overlap_sweep(spec: &SweepSpec) -> clonelab::Result<Sweep> {
    let n = spec.s_points;
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for &gamma in &spec.gammas {
        let cells: Vec<_> = (1..=n)
            .into_par_iter()
            .map(|k| {
                let s = k as f64 / n as f64;
                let pair = InputPair::from_overlap(s)?;
                let opt = match optimal_solution(gamma, s) {
                    Ok(opt) => opt,
                    Err(e @ clonelab::Error::Infeasible { .. }) => return Ok(Err((s, e))),
                    Err(e) => return Err(e),
                };
                let (_, branch) = partially_optimal_fidelity(opt.b_opt, gamma, s)?;
                let correlation =
                    correlation_at(spec.measure, opt.b_opt, gamma, &pair, branch, &spec.discord)?;
                Ok(Ok(SweepRecord {
                    figure: spec.figure.name().to_string(),
                    branch,
                    curve: 0,
                    theta: pair.theta(),
                    gamma,
                    s,
                    b: opt.b_opt,
                    correlation,
                    fidelity: opt.f_opt,
                }))
            })
            .collect::<clonelab::Result<Vec<_>>>()?;
        let mut rows = Vec::with_capacity(cells.len());
        for cell in cells {
            match cell {
                Ok(record) => rows.push(record),
                Err((s, e)) => {
                    warn!("skipping γ = {gamma}, s = {s}: {e}");
                    skipped.push(SkippedCell {
                        theta: None,
                        gamma,
                        s,
                        reason: e.to_string(),
                    });
                }
            }
        }
        rows.sort_by(|p, q| {
            p.branch
                .index()
                .cmp(&q.branch.index())
                .then(p.s.total_cmp(&q.s))
        });
        records.extend(rows);
    }
    Ok(Sweep { records, skipped })
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for r in records {
        writer.write_record([
            r.figure.clone(),
            r.branch.to_string(),
            r.curve.to_string(),
            significant(r.theta),
            significant(r.gamma),
            significant(r.s),
            significant(r.b),
            significant(r.correlation),
            significant(r.fidelity),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[SweepRecord], mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)
}
