//! The named experiments. Each returns its files in a fixed order; nothing
//! touches the filesystem here.

use crate::config::{Experiment, ExperimentConfig, SpectraSettings};
use crate::error::{HarnessError, Result};
use crate::output::{Artifact, Cell, CsvTable};
use crate::svg::{decimate_min_max, panel_grid, Axis, Mark, Plot, Series};
use fpsearch_core::pulse::{
    bb1_expand, compile_algorithm, infidelity, sequence_unitary, single_spin_unitary, spin_rotation,
    ErrorModel, PulseEvent, PulseSequence, PulseStyle, SequenceKind, Spin, SpinSet, SpinSystem,
};
use fpsearch_core::quantum::StateVector;
use fpsearch_core::readout::{
    estimate_probability, fractional_intensity, lorentzian_trace, reference_spectrum, spectrum_of_state,
    ExperimentRecord, Spectrum,
};
use fpsearch_core::search::{
    all_oracles, closed_form_success, ideal_success_probability, query_count, OracleSpec, RecursionOrder,
    FIXED_POINT_PHASE,
};
use fpsearch_core::Error as CoreError;
use rayon::prelude::*;
use std::f64::consts::FRAC_PI_2;

/// Closed form vs gate-level agreement required in table1.
pub const TABLE_TOL: f64 = 1e-12;
/// Error-free pulse-level vs closed-form agreement required in sweeps.
pub const PULSE_TOL: f64 = 1e-10;
/// Error-free BB1 and naive infidelity bound.
pub const ZERO_ERROR_INFIDELITY: f64 = 1e-12;

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    match cfg.experiment {
        Experiment::Table1 => run_table1(cfg),
        Experiment::K1Curves | Experiment::K2Curves => run_curves(cfg),
        Experiment::Robustness => run_robustness(cfg),
        Experiment::Bb1Scaling => run_bb1_scaling(cfg),
        Experiment::Spectra => run_spectra(cfg),
    }
}

fn order(r: u32) -> Result<RecursionOrder> {
    Ok(RecursionOrder::new(r)?)
}

fn closed(r: u32, k: usize) -> Result<f64> {
    Ok(closed_form_success(order(r)?, k, 2))
}

fn num_tag(x: f64) -> String {
    format!("{x:?}")
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 || xs.iter().chain(ys).any(|v| v.is_nan() || *v <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn run_table1(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let k1 = all_oracles(2, 1, FIXED_POINT_PHASE)?;
    let k2 = all_oracles(2, 2, FIXED_POINT_PHASE)?;
    let rows: Vec<Vec<Cell>> = (cfg.r_min..=cfg.r_max)
        .into_par_iter()
        .map(|r| {
            let ord = order(r)?;
            let mut sims = [0.0; 2];
            for (slot, (k, oracles)) in [(1, &k1), (2, &k2)].into_iter().enumerate() {
                let expected = closed(r, k)?;
                for (i, o) in oracles.iter().enumerate() {
                    let p = ideal_success_probability(ord, o)?;
                    if (p - expected).abs() > TABLE_TOL {
                        return Err(HarnessError::Invariant(format!(
                            "r = {r}, oracle {}: gate-level {p} differs from closed form {expected}",
                            o.label()
                        )));
                    }
                    if i == 0 {
                        sims[slot] = p;
                    }
                }
            }
            Ok(vec![
                r.into(),
                closed(r, 1)?.into(),
                sims[0].into(),
                closed(r, 2)?.into(),
                sims[1].into(),
                query_count(ord).into(),
            ])
        })
        .collect::<Result<_>>()?;
    let mut table = CsvTable::new(
        cfg.experiment.name(),
        &cfg.hash(),
        &["r", "P_k1_closed", "P_k1_sim", "P_k2_closed", "P_k2_sim", "Q"],
    );
    for row in rows {
        table.push(row);
    }
    Ok(vec![Artifact::csv("table1.csv", &table)])
}

struct GridPoint {
    style: PulseStyle,
    eps: f64,
    delta_j: f64,
    errors: ErrorModel,
}

fn grid(cfg: &ExperimentConfig) -> Result<Vec<GridPoint>> {
    let models = cfg.error_models()?;
    let mut out = Vec::with_capacity(cfg.styles.len() * models.len());
    for &style in &cfg.styles {
        for &(eps, delta_j, errors) in &models {
            out.push(GridPoint { style, eps, delta_j, errors });
        }
    }
    Ok(out)
}

fn is_error_free(g: &GridPoint) -> bool {
    g.eps == 0.0 && g.delta_j == 0.0
}

fn closed_curve(k: usize, r_min: u32, r_max: u32) -> Vec<(f64, f64)> {
    let q = 1.0 - k as f64 / 4.0;
    let steps = 50 * (r_max - r_min).max(1);
    (0..=steps)
        .map(|i| {
            let r = r_min as f64 + (r_max - r_min) as f64 * i as f64 / steps as f64;
            (r, 1.0 - q.powf(3f64.powf(r)))
        })
        .collect()
}

pub fn run_curves(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let points = grid(cfg)?;
    let tasks: Vec<(usize, usize, u32)> = (0..points.len())
        .flat_map(|g| {
            (0..cfg.oracles.len()).flat_map(move |o| (cfg.r_min..=cfg.r_max).map(move |r| (g, o, r)))
        })
        .collect();
    let records: Vec<ExperimentRecord> = tasks
        .par_iter()
        .map(|&(g, o, r)| {
            let gp = &points[g];
            let oracle = &cfg.oracles[o];
            let rec = ExperimentRecord::measure(order(r)?, oracle, &cfg.system, gp.style, &gp.errors)?;
            let expected = closed(r, oracle.k())?;
            if is_error_free(gp) && (rec.p_sim - expected).abs() > PULSE_TOL {
                return Err(HarnessError::Invariant(format!(
                    "oracle {}, r = {r}, {}: error-free pulse-level P = {} differs from closed form {expected}",
                    oracle.label(),
                    gp.style.name(),
                    rec.p_sim
                )));
            }
            Ok(rec)
        })
        .collect::<Result<_>>()?;

    let mut table = CsvTable::new(
        cfg.experiment.name(),
        &cfg.hash(),
        &["oracle", "k", "style", "eps", "delta_j", "r", "p_pulse", "f", "p_est", "p_closed"],
    );
    for (&(g, o, r), rec) in tasks.iter().zip(&records) {
        let gp = &points[g];
        let oracle = &cfg.oracles[o];
        table.push(vec![
            oracle.label().into(),
            (oracle.k() as u64).into(),
            gp.style.name().into(),
            gp.eps.into(),
            gp.delta_j.into(),
            r.into(),
            rec.p_sim.into(),
            rec.f.into(),
            rec.p_est.into(),
            closed(r, oracle.k())?.into(),
        ]);
    }
    let mut artifacts = vec![Artifact::csv(format!("{}.csv", cfg.experiment.name()), &table)];

    let per_point = cfg.oracles.len() * (cfg.r_max - cfg.r_min + 1) as usize;
    let ks: Vec<usize> = {
        let mut ks: Vec<usize> = cfg.oracles.iter().map(|o| o.k()).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    };
    for (g, gp) in points.iter().enumerate() {
        let title = format!(
            "{} | {} | eps = {} | dJ = {}",
            cfg.experiment.name(),
            gp.style.name(),
            num_tag(gp.eps),
            num_tag(gp.delta_j)
        );
        let x_max = (cfg.r_max as f64).max(cfg.r_min as f64 + 1.0);
        let mut plot = Plot::new(
            title,
            Axis::linear("recursion order r", cfg.r_min as f64, x_max),
            Axis::linear("success probability", 0.0, 1.0),
        );
        for &k in &ks {
            plot.add(Series::new(
                format!("closed form, k = {k}"),
                closed_curve(k, cfg.r_min, cfg.r_max),
                Mark::Line,
                7 + k,
            ));
        }
        let block = &records[g * per_point..(g + 1) * per_point];
        for (o, oracle) in cfg.oracles.iter().enumerate() {
            let pts: Vec<(f64, f64)> = block
                .iter()
                .skip(o * (cfg.r_max - cfg.r_min + 1) as usize)
                .take((cfg.r_max - cfg.r_min + 1) as usize)
                .map(|rec| (rec.r as f64, rec.p_sim))
                .collect();
            plot.add(Series::new(format!("|{}>", oracle.label()), pts, Mark::Dots, o));
        }
        let name = format!(
            "{}_{}_eps{}_dj{}.svg",
            cfg.experiment.name(),
            gp.style.name(),
            num_tag(gp.eps),
            num_tag(gp.delta_j)
        );
        artifacts.push(Artifact::new(name, plot.render()));
    }
    Ok(artifacts)
}

fn cube_residual(p_prev: f64, p_next: f64) -> f64 {
    ((1.0 - p_next) - (1.0 - p_prev).powi(3)).abs()
}

fn pulse_success(
    r: u32,
    oracle: &OracleSpec,
    sys: &SpinSystem,
    style: PulseStyle,
    err: &ErrorModel,
) -> Result<f64> {
    let seq = compile_algorithm(order(r)?, oracle, sys, style)?;
    let psi = sequence_unitary(&seq, sys, err)?.apply(&StateVector::zero(2))?;
    Ok(oracle.matching().iter().map(|&x| psi.probability(x)).sum())
}

pub fn run_robustness(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let points = grid(cfg)?;
    let tasks: Vec<(usize, usize)> =
        (0..points.len()).flat_map(|g| (0..cfg.oracles.len()).map(move |o| (g, o))).collect();
    let curves: Vec<Vec<f64>> = tasks
        .par_iter()
        .map(|&(g, o)| {
            let gp = &points[g];
            let oracle = &cfg.oracles[o];
            (0..=cfg.r_max)
                .map(|r| {
                    let p = pulse_success(r, oracle, &cfg.system, gp.style, &gp.errors)?;
                    let expected = closed(r, oracle.k())?;
                    if is_error_free(gp) && (p - expected).abs() > PULSE_TOL {
                        return Err(HarnessError::Invariant(format!(
                            "oracle {}, r = {r}: error-free pulse-level P = {p} differs from closed form {expected}",
                            oracle.label()
                        )));
                    }
                    Ok(p)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let mut table = CsvTable::new(
        cfg.experiment.name(),
        &cfg.hash(),
        &["oracle", "style", "eps", "delta_j", "r", "p_pulse", "p_closed", "cube_residual"],
    );
    for (&(g, o), p) in tasks.iter().zip(&curves) {
        let gp = &points[g];
        let oracle = &cfg.oracles[o];
        for r in cfg.r_min..=cfg.r_max {
            let i = r as usize;
            let residual = (r > 0).then(|| cube_residual(p[i - 1], p[i]));
            table.push(vec![
                oracle.label().into(),
                gp.style.name().into(),
                gp.eps.into(),
                gp.delta_j.into(),
                r.into(),
                p[i].into(),
                closed(r, oracle.k())?.into(),
                residual.into(),
            ]);
        }
    }
    let mut artifacts = vec![Artifact::csv("robustness.csv", &table)];

    // Worst residual over oracles and r >= 1, against ε, one series per (style, δJ).
    const FLOOR: f64 = 1e-17;
    let (e_lo, e_hi) = cfg.eps.iter().fold((f64::MAX, f64::MIN), |(a, b), &e| (a.min(e), b.max(e)));
    let (e_lo, e_hi) = if e_hi > e_lo { (e_lo, e_hi) } else { (e_lo - 0.01, e_hi + 0.01) };
    let mut plot = Plot::new(
        "worst cube-law residual",
        Axis::linear("rf amplitude error eps", e_lo, e_hi),
        Axis::log("max |(1-P_r) - (1-P_(r-1))^3|", FLOOR, 1.0),
    );
    let mut color = 0;
    for &style in &cfg.styles {
        for &dj in &cfg.delta_j {
            let pts: Vec<(f64, f64)> = cfg
                .eps
                .iter()
                .map(|&e| {
                    let worst = tasks
                        .iter()
                        .zip(&curves)
                        .filter(|((g, _), _)| {
                            let gp = &points[*g];
                            gp.style == style && gp.eps == e && gp.delta_j == dj
                        })
                        .flat_map(|(_, p)| (1..p.len()).map(move |i| cube_residual(p[i - 1], p[i])))
                        .fold(0.0, f64::max);
                    (e, worst.max(FLOOR))
                })
                .collect();
            plot.add(Series::new(
                format!("{}, dJ = {}", style.name(), num_tag(dj)),
                pts,
                Mark::LineDots,
                color,
            ));
            color += 1;
        }
    }
    artifacts.push(Artifact::new("robustness.svg", plot.render()));
    Ok(artifacts)
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo * (hi / lo).powf(i as f64 / (n - 1) as f64) }).collect()
}

/// Infidelity of a naive and a BB1 90°y pulse on ¹H at amplitude error `eps`.
pub fn pulse_infidelities(eps: f64) -> Result<(f64, f64)> {
    let target = spin_rotation(FRAC_PI_2, FRAC_PI_2);
    let naive = PulseSequence::from_events(
        SequenceKind::Physical,
        [PulseEvent::rf(SpinSet::H, FRAC_PI_2, FRAC_PI_2)],
    )?;
    let bb1 = bb1_expand(FRAC_PI_2, FRAC_PI_2, SpinSet::H)?;
    let err = ErrorModel::rf(eps)?;
    let i_naive = infidelity(&single_spin_unitary(&naive, Spin::H, &err)?, &target);
    let i_bb1 = infidelity(&single_spin_unitary(&bb1, Spin::H, &err)?, &target);
    Ok((i_naive, i_bb1))
}

pub fn run_bb1_scaling(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let b = cfg.bb1;
    let grid_eps = log_space(b.eps_min, b.eps_max, b.points);
    let all_eps: Vec<f64> = std::iter::once(0.0).chain(grid_eps.iter().copied()).collect();
    let infid: Vec<(f64, f64)> = all_eps.par_iter().map(|&e| pulse_infidelities(e)).collect::<Result<_>>()?;
    if infid[0].0 > ZERO_ERROR_INFIDELITY || infid[0].1 > ZERO_ERROR_INFIDELITY {
        return Err(HarnessError::Invariant(format!(
            "error-free infidelities {:e} (naive), {:e} (BB1) exceed {ZERO_ERROR_INFIDELITY:e}",
            infid[0].0, infid[0].1
        )));
    }
    let hash = cfg.hash();
    let mut table =
        CsvTable::new(cfg.experiment.name(), &hash, &["eps", "infidelity_naive", "infidelity_bb1"]);
    for (&e, &(n, bb)) in all_eps.iter().zip(&infid) {
        table.push(vec![e.into(), n.into(), bb.into()]);
    }

    let naive_y: Vec<f64> = infid[1..].iter().map(|p| p.0).collect();
    let bb1_y: Vec<f64> = infid[1..].iter().map(|p| p.1).collect();
    let slope = |ys: &[f64], style: &str| {
        log_log_slope(&grid_eps, ys)
            .ok_or_else(|| HarnessError::Invariant(format!("{style} infidelity vanished; slope undefined")))
    };
    let s_naive = slope(&naive_y, "naive")?;
    let s_bb1 = slope(&bb1_y, "bb1")?;
    let mut slopes =
        CsvTable::new(cfg.experiment.name(), &hash, &["style", "slope", "eps_min", "eps_max", "points"]);
    for (style, s) in [("naive", s_naive), ("bb1", s_bb1)] {
        slopes.push(vec![
            style.into(),
            s.into(),
            b.eps_min.into(),
            b.eps_max.into(),
            (b.points as u64).into(),
        ]);
    }

    let tasks: Vec<(usize, usize)> =
        (0..cfg.oracles.len()).flat_map(|o| (0..all_eps.len()).map(move |e| (o, e))).collect();
    let success: Vec<(f64, f64)> = tasks
        .par_iter()
        .map(|&(o, e)| {
            let err = ErrorModel::rf(all_eps[e])?;
            let oracle = &cfg.oracles[o];
            Ok((
                pulse_success(0, oracle, &cfg.system, PulseStyle::Naive, &err)?,
                pulse_success(0, oracle, &cfg.system, PulseStyle::Bb1, &err)?,
            ))
        })
        .collect::<Result<_>>()?;
    let mut succ = CsvTable::new(cfg.experiment.name(), &hash, &["oracle", "eps", "p_r0_naive", "p_r0_bb1"]);
    for (&(o, e), &(pn, pb)) in tasks.iter().zip(&success) {
        succ.push(vec![cfg.oracles[o].label().into(), all_eps[e].into(), pn.into(), pb.into()]);
    }

    let y_lo = bb1_y.iter().chain(&naive_y).copied().fold(f64::MAX, f64::min);
    let y_hi = bb1_y.iter().chain(&naive_y).copied().fold(f64::MIN, f64::max);
    let mut plot = Plot::new(
        "90-degree pulse infidelity",
        Axis::log("rf amplitude error eps", b.eps_min, b.eps_max),
        Axis::log("infidelity", 10f64.powf(y_lo.log10().floor()), 10f64.powf(y_hi.log10().ceil())),
    );
    let pts = |ys: &[f64]| grid_eps.iter().copied().zip(ys.iter().copied()).collect::<Vec<_>>();
    plot.add(Series::new(format!("naive (slope {s_naive:.3})"), pts(&naive_y), Mark::LineDots, 0));
    plot.add(Series::new(format!("BB1 (slope {s_bb1:.3})"), pts(&bb1_y), Mark::LineDots, 1));

    Ok(vec![
        Artifact::csv("bb1-scaling.csv", &table),
        Artifact::csv("bb1-slopes.csv", &slopes),
        Artifact::csv("bb1-success.csv", &succ),
        Artifact::new("bb1-scaling.svg", plot.render()),
    ])
}

/// Uniform grid over ±`half_width_hz` merged with dense sampling of ±5 line
/// widths around each doublet line.
pub fn spectrum_grid(settings: &SpectraSettings, sys: &SpinSystem) -> Vec<f64> {
    let hw = settings.half_width_hz;
    let n = settings.points;
    let mut grid: Vec<f64> = (0..n).map(|i| -hw + 2.0 * hw * i as f64 / (n - 1) as f64).collect();
    let fwhm = 1.0 / (std::f64::consts::PI * sys.t2_h);
    for center in [sys.j_hz / 2.0, -sys.j_hz / 2.0] {
        for i in -100..=100 {
            let f = center + i as f64 * fwhm / 20.0;
            if f.abs() <= hw {
                grid.push(f);
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SpectrumOrder {
    Finite(u32),
    Infinite,
}

impl SpectrumOrder {
    fn label(self) -> String {
        match self {
            SpectrumOrder::Finite(r) => r.to_string(),
            SpectrumOrder::Infinite => "inf".to_string(),
        }
    }
}

struct SpectrumRow {
    spectrum: Spectrum,
    p_sim: f64,
    f: Option<f64>,
    p_est: Option<f64>,
}

fn readout(spectrum: &Spectrum, oracle: &OracleSpec, sys: &SpinSystem) -> Result<(Option<f64>, Option<f64>)> {
    let reference = reference_spectrum(oracle, sys)?;
    match fractional_intensity(spectrum, &reference, oracle) {
        Ok(f) => Ok((Some(f), Some(estimate_probability(spectrum, &reference, oracle.k(), oracle)?))),
        Err(CoreError::NoSignalExpected(_)) => Ok((None, None)),
        Err(e) => Err(e.into()),
    }
}

pub fn run_spectra(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let sys = &cfg.system;
    let orders: Vec<SpectrumOrder> = (cfg.r_min..=cfg.r_max)
        .map(SpectrumOrder::Finite)
        .chain(std::iter::once(SpectrumOrder::Infinite))
        .collect();
    let tasks: Vec<(usize, SpectrumOrder)> =
        (0..cfg.oracles.len()).flat_map(|o| orders.iter().map(move |&r| (o, r))).collect();
    let rows: Vec<SpectrumRow> = tasks
        .par_iter()
        .map(|&(o, r)| {
            let oracle = &cfg.oracles[o];
            let psi = match r {
                SpectrumOrder::Finite(r) => {
                    let seq = compile_algorithm(order(r)?, oracle, sys, PulseStyle::Naive)?;
                    sequence_unitary(&seq, sys, &ErrorModel::none())?.apply(&StateVector::zero(2))?
                }
                SpectrumOrder::Infinite => oracle.target_state(),
            };
            let p_sim: f64 = oracle.matching().iter().map(|&x| psi.probability(x)).sum();
            let spectrum = spectrum_of_state(&psi, sys)?;
            let (f, p_est) = readout(&spectrum, oracle, sys)?;
            Ok(SpectrumRow { spectrum, p_sim, f, p_est })
        })
        .collect::<Result<_>>()?;

    let hash = cfg.hash();
    let grid = spectrum_grid(&cfg.spectra, sys);
    let mut summary = CsvTable::new(
        cfg.experiment.name(),
        &hash,
        &["oracle", "r", "left_amp", "right_amp", "p_sim", "f", "p_est", "trace"],
    );
    let mut artifacts = Vec::new();
    let mut traces = Vec::with_capacity(rows.len());
    for (&(o, r), row) in tasks.iter().zip(&rows) {
        let oracle = &cfg.oracles[o];
        let path = format!("traces/{}_r{}.csv", oracle.label(), r.label());
        let trace = lorentzian_trace(&row.spectrum, sys, &grid);
        let mut t = CsvTable::new(cfg.experiment.name(), &hash, &["frequency_hz", "intensity"]);
        for &(f, y) in &trace {
            t.push(vec![f.into(), y.into()]);
        }
        summary.push(vec![
            oracle.label().into(),
            r.label().into(),
            row.spectrum.left_amp.into(),
            row.spectrum.right_amp.into(),
            row.p_sim.into(),
            row.f.into(),
            row.p_est.into(),
            path.clone().into(),
        ]);
        artifacts.push(Artifact::csv(path, &t));
        traces.push(trace);
    }

    let scale = traces.iter().flatten().map(|p| p.1.abs()).fold(0.0, f64::max).max(1e-12) * 1.05;
    let hw = cfg.spectra.half_width_hz;
    let cells: Vec<Plot> = tasks
        .iter()
        .zip(&traces)
        .map(|(&(o, r), trace)| {
            let mut p = Plot::new(
                format!("|{}>  r = {}", cfg.oracles[o].label(), r.label()),
                Axis::linear("Hz", -hw, hw).reversed(),
                Axis::linear("", -scale, scale),
            );
            p.legend = false;
            p.add(Series::new("", vec![(-hw, 0.0), (hw, 0.0)], Mark::Line, 9));
            p.add(Series::new("", decimate_min_max(trace, 200), Mark::Line, 0));
            p
        })
        .collect();
    let title =
        format!("1H spectra, frequency decreasing left to right, ±{} Hz, common vertical scale", num_tag(hw));
    let mut out = vec![Artifact::csv("spectra.csv", &summary)];
    out.append(&mut artifacts);
    out.push(Artifact::new("spectra.svg", panel_grid(&title, orders.len(), &cells)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_space_hits_endpoints() {
        let xs = log_space(1e-3, 1e-2, 8);
        assert_eq!(xs.len(), 8);
        assert_eq!(xs[0], 1e-3);
        assert_eq!(xs[7], 1e-2);
        assert!(xs.windows(2).all(|w| (w[1] / w[0] - 10f64.powf(1.0 / 7.0)).abs() < 1e-12));
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(6)).collect();
        assert!((log_log_slope(&xs, &ys).unwrap() - 6.0).abs() < 1e-12);
        assert!(log_log_slope(&xs, &[1.0, 0.0, 1.0, 1.0]).is_none());
        assert!(log_log_slope(&[1.0], &[1.0]).is_none());
    }

    #[test]
    fn spectrum_grid_samples_line_centers() {
        let sys = SpinSystem::sodium_formate();
        let settings = SpectraSettings { half_width_hz: 250.0, points: 101 };
        let g = spectrum_grid(&settings, &sys);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        for c in [sys.j_hz / 2.0, -sys.j_hz / 2.0] {
            assert!(g.iter().any(|&f| (f - c).abs() < 1e-12));
        }
        assert_eq!(g[0], -250.0);
        assert_eq!(*g.last().unwrap(), 250.0);
    }

    #[test]
    fn table1_rows() {
        let cfg = ExperimentConfig::defaults(Experiment::Table1).unwrap();
        let arts = run_table1(&cfg).unwrap();
        let text = &arts[0].contents;
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "r,P_k1_closed,P_k1_sim,P_k2_closed,P_k2_sim,Q");
        assert_eq!(lines.len(), 7);
        assert!(lines[4].starts_with("2,0.924"));
        assert!(lines[6].ends_with(",40"));
    }
}
