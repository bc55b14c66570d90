//! The invariant suite behind `fpsearch verify`.

use crate::experiments::{log_log_slope, log_space, pulse_infidelities};
use fpsearch_core::pulse::{
    compile_algorithm, sequence_unitary, ErrorModel, GateLibrary, PulseStyle, SpinSystem,
};
use fpsearch_core::quantum::{equal_up_to_global_phase, StateVector, UnitaryMatrix};
use fpsearch_core::readout::{estimate_probability, reference_spectrum, signal_pattern, spectrum_of_state};
use fpsearch_core::search::{
    all_oracles, closed_form_success, expand_gate_list, ideal_success_probability, phase_oracle, query_count,
    recursive_operator, Gate, OracleSpec, RecursionOrder, FIXED_POINT_PHASE,
};
use std::f64::consts::PI;

const PHI: f64 = FIXED_POINT_PHASE;

pub type CheckResult = std::result::Result<(), String>;

pub struct Check {
    pub name: &'static str,
    pub run: fn() -> CheckResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: &'static str,
    pub result: CheckResult,
}

pub fn checks() -> Vec<Check> {
    vec![
        Check { name: "closed form matches gate level (r <= 4, n = 2, 3)", run: closed_form_vs_gates },
        Check { name: "ideal cube law and monotonicity", run: ideal_cube_law },
        Check { name: "query count matches oracle calls", run: query_counts },
        Check { name: "compiled sequences equal gate-level operators", run: compilation_soundness },
        Check { name: "U and U+ pulses are adjoint under rf error", run: u_pairing },
        Check { name: "cube law under rf error on all pulses", run: rf_error_cube_law },
        Check { name: "cube law under rf error on U pulses", run: rf_error_on_u_cube_law },
        Check { name: "coupling error breaks the cube law", run: coupling_error_breaks_law },
        Check { name: "BB1 infidelity scaling", run: bb1_scaling },
        Check { name: "readout patterns and round trip", run: readout_round_trip },
        Check { name: "oracle equivalences", run: equivalences },
    ]
}

pub fn run_all() -> Vec<Outcome> {
    checks().into_iter().map(|c| Outcome { name: c.name, result: (c.run)() }).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ord(r: u32) -> Result<RecursionOrder, String> {
    RecursionOrder::new(r).map_err(|e| e.to_string())
}

fn every_n2_oracle(phase: f64) -> Result<Vec<OracleSpec>, String> {
    let mut out = Vec::new();
    for k in 1..=3 {
        out.extend(all_oracles(2, k, phase).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn sys() -> SpinSystem {
    SpinSystem::sodium_formate()
}

fn pulse_p(r: u32, o: &OracleSpec, style: PulseStyle, err: &ErrorModel) -> Result<f64, String> {
    let seq = compile_algorithm(ord(r)?, o, &sys(), style).map_err(|e| e.to_string())?;
    let u = sequence_unitary(&seq, &sys(), err).map_err(|e| e.to_string())?;
    success(&u, o)
}

fn success(u: &UnitaryMatrix, o: &OracleSpec) -> Result<f64, String> {
    let psi = u.apply(&StateVector::zero(2)).map_err(|e| e.to_string())?;
    Ok(o.matching().iter().map(|&x| psi.probability(x)).sum())
}

fn residual(prev: f64, next: f64) -> f64 {
    ((1.0 - next) - (1.0 - prev).powi(3)).abs()
}

fn closed_form_vs_gates() -> CheckResult {
    for n in [2usize, 3] {
        for k in 1..(1 << n) {
            for o in all_oracles(n, k, PHI).map_err(|e| e.to_string())?.iter().take(3) {
                for r in 0..=4 {
                    let p = ideal_success_probability(ord(r)?, o).map_err(|e| e.to_string())?;
                    let c = closed_form_success(ord(r)?, k, n);
                    ensure((p - c).abs() <= 1e-12, || format!("n={n} {o} r={r}: {p} vs {c}"))?;
                }
            }
        }
    }
    Ok(())
}

fn ideal_cube_law() -> CheckResult {
    for o in every_n2_oracle(PHI)? {
        let p: Vec<f64> = (0..=4)
            .map(|r| ideal_success_probability(ord(r)?, &o).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        for r in 0..4 {
            ensure(residual(p[r], p[r + 1]) <= 1e-12, || format!("{o} r={r}: {p:?}"))?;
            ensure(p[r + 1] >= p[r] - 1e-12, || format!("{o} not monotone at r={r}"))?;
        }
    }
    Ok(())
}

fn query_counts() -> CheckResult {
    let o = OracleSpec::from_bitstrings(&["10"], PHI).map_err(|e| e.to_string())?;
    for r in 0..=6 {
        let gates = expand_gate_list(ord(r)?, &o).map_err(|e| e.to_string())?;
        let rf = gates.iter().filter(|g| g.is_oracle()).count() as u64;
        let r0 = gates.iter().filter(|g| g.is_origin()).count() as u64;
        let q = query_count(ord(r)?);
        ensure(rf == q && r0 == q, || format!("r={r}: {rf} Rf, {r0} R0, Q={q}"))?;
    }
    Ok(())
}

fn compilation_soundness() -> CheckResult {
    for phase in [PHI, PI] {
        let origin = OracleSpec::origin(2, phase).map_err(|e| e.to_string())?;
        for o in every_n2_oracle(phase)?.iter().filter(|o| o.k() <= 2) {
            for r in 0..=3 {
                let v = recursive_operator(ord(r)?, o, &origin).map_err(|e| e.to_string())?;
                for style in [PulseStyle::Naive, PulseStyle::Bb1] {
                    let seq = compile_algorithm(ord(r)?, o, &sys(), style).map_err(|e| e.to_string())?;
                    let u = sequence_unitary(&seq, &sys(), &ErrorModel::none()).map_err(|e| e.to_string())?;
                    ensure(equal_up_to_global_phase(&u, &v, 1e-10), || {
                        format!("{o} phase={phase} r={r} {}", style.name())
                    })?;
                }
            }
        }
    }
    let o = OracleSpec::from_bitstrings(&["00"], PHI).map_err(|e| e.to_string())?;
    let seq = compile_algorithm(ord(3)?, &o, &sys(), PulseStyle::Naive).map_err(|e| e.to_string())?;
    ensure((150..=250).contains(&seq.rf_count()), || format!("r=3 rf count {}", seq.rf_count()))
}

fn u_pairing() -> CheckResult {
    let o = OracleSpec::from_bitstrings(&["01"], PHI).map_err(|e| e.to_string())?;
    let lib = GateLibrary::new(&o, &sys(), PulseStyle::Naive).map_err(|e| e.to_string())?;
    for eps in [-0.1, 0.05, 0.1] {
        let err = ErrorModel::rf(eps).map_err(|e| e.to_string())?;
        let u = sequence_unitary(lib.sequence(Gate::U), &sys(), &err).map_err(|e| e.to_string())?;
        let ud = sequence_unitary(lib.sequence(Gate::UDagger), &sys(), &err).map_err(|e| e.to_string())?;
        ensure(ud.max_abs_diff(&u.adjoint()) <= 1e-12, || format!("eps={eps}"))?;
    }
    Ok(())
}

fn rf_error_cube_law() -> CheckResult {
    let mut worst = (0.0, String::new());
    for eps in [-0.1, -0.05, -0.02, 0.02, 0.05, 0.1] {
        let err = ErrorModel::rf(eps).map_err(|e| e.to_string())?;
        for o in all_oracles(2, 1, PHI).map_err(|e| e.to_string())? {
            let p: Vec<f64> =
                (0..=3).map(|r| pulse_p(r, &o, PulseStyle::Naive, &err)).collect::<Result<_, _>>()?;
            for r in 0..3 {
                let res = residual(p[r], p[r + 1]);
                if res > worst.0 {
                    worst = (res, format!("{o} eps={eps} r={r}"));
                }
            }
        }
    }
    ensure(worst.0 <= 1e-9, || format!("worst residual {:.3e} at {}", worst.0, worst.1))
}

fn rf_error_on_u_cube_law() -> CheckResult {
    for eps in [-0.1, 0.05, 0.1] {
        let u_err = ErrorModel::rf(eps).map_err(|e| e.to_string())?;
        for o in all_oracles(2, 1, PHI).map_err(|e| e.to_string())? {
            let mut p = Vec::new();
            for r in 0..=3 {
                let seq =
                    compile_algorithm(ord(r)?, &o, &sys(), PulseStyle::Naive).map_err(|e| e.to_string())?;
                let mut acc = UnitaryMatrix::identity(4);
                for span in seq.gate_spans() {
                    let err =
                        if matches!(span.gate, Gate::U | Gate::UDagger) { u_err } else { ErrorModel::none() };
                    let g = fpsearch_core::pulse::span_unitary(&seq, span, &sys(), &err)
                        .map_err(|e| e.to_string())?;
                    acc = &g * &acc;
                }
                p.push(success(&acc, &o)?);
            }
            for r in 0..3 {
                ensure(residual(p[r], p[r + 1]) <= 1e-9, || format!("{o} eps={eps} r={r}"))?;
            }
        }
    }
    Ok(())
}

fn coupling_error_breaks_law() -> CheckResult {
    let err = ErrorModel::coupling(0.05).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for o in all_oracles(2, 1, PHI).map_err(|e| e.to_string())? {
        let p0 = pulse_p(0, &o, PulseStyle::Naive, &err)?;
        let p1 = pulse_p(1, &o, PulseStyle::Naive, &err)?;
        worst = worst.max(residual(p0, p1));
    }
    ensure(worst > 1e-6, || format!("largest residual {worst:e}"))
}

fn bb1_scaling() -> CheckResult {
    let eps = log_space(1e-3, 1e-2, 8);
    let values: Vec<(f64, f64)> =
        eps.iter().map(|&e| pulse_infidelities(e)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let naive: Vec<f64> = values.iter().map(|v| v.0).collect();
    let bb1: Vec<f64> = values.iter().map(|v| v.1).collect();
    let sn = log_log_slope(&eps, &naive).ok_or("naive slope undefined")?;
    let sb = log_log_slope(&eps, &bb1).ok_or("bb1 slope undefined")?;
    ensure((sn - 2.0).abs() <= 0.2 && (sb - 6.0).abs() <= 0.5, || format!("slopes {sn}, {sb}"))?;
    let (z0, z1) = pulse_infidelities(0.0).map_err(|e| e.to_string())?;
    ensure(z0 <= 1e-12 && z1 <= 1e-12, || format!("zero-error infidelities {z0:e}, {z1:e}"))
}

fn readout_round_trip() -> CheckResult {
    let mut patterns = Vec::new();
    for o in all_oracles(2, 1, PHI).map_err(|e| e.to_string())? {
        let p = signal_pattern(&o).map_err(|e| e.to_string())?;
        patterns.push((p.left as i32, p.right as i32));
    }
    let mut sorted = patterns.clone();
    sorted.sort_unstable();
    sorted.dedup();
    ensure(sorted.len() == 4, || format!("patterns not distinct: {patterns:?}"))?;
    let s = sys();
    for o in every_n2_oracle(PHI)?.iter().filter(|o| o.k() <= 2) {
        if signal_pattern(o).is_err() {
            continue;
        }
        let reference = reference_spectrum(o, &s).map_err(|e| e.to_string())?;
        for r in 0..=3 {
            let origin = OracleSpec::origin(2, PHI).map_err(|e| e.to_string())?;
            let v = recursive_operator(ord(r)?, o, &origin).map_err(|e| e.to_string())?;
            let psi = v.apply(&StateVector::zero(2)).map_err(|e| e.to_string())?;
            let spectrum = spectrum_of_state(&psi, &s).map_err(|e| e.to_string())?;
            let p = estimate_probability(&spectrum, &reference, o.k(), o).map_err(|e| e.to_string())?;
            let c = closed_form_success(ord(r)?, o.k(), 2);
            ensure((p - c).abs() <= 1e-9, || format!("{o} r={r}: {p} vs {c}"))?;
        }
    }
    Ok(())
}

fn equivalences() -> CheckResult {
    let all = OracleSpec::new(2, 0..4, PHI).map_err(|e| e.to_string())?;
    ensure(equal_up_to_global_phase(&phase_oracle(&all), &UnitaryMatrix::identity(4), 1e-12), || {
        "k=4 oracle is not the identity".into()
    })?;
    for o in every_n2_oracle(PHI)? {
        let c = o.complement().ok_or("missing complement")?;
        ensure(equal_up_to_global_phase(&phase_oracle(&o), &phase_oracle(&c), 1e-12), || {
            format!("{o} vs complement {c}")
        })?;
    }
    let origin = OracleSpec::origin(2, PI).map_err(|e| e.to_string())?;
    for o in all_oracles(2, 1, PI).map_err(|e| e.to_string())? {
        let v = recursive_operator(ord(1)?, &o, &origin).map_err(|e| e.to_string())?;
        let p = success(&v, &o)?;
        ensure((p - 1.0).abs() <= 1e-12, || format!("phase pi, {o}: P = {p}"))?;
    }
    Ok(())
}
