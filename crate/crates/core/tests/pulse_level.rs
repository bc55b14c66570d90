use fpsearch_core::pulse::{
    bb1_expand, compile_algorithm, infidelity, sequence_unitary, single_spin_unitary, span_unitary,
    spin_rotation, ErrorModel, PulseEvent, PulseSequence, PulseStyle, SequenceKind, Spin, SpinSet,
    SpinSystem,
};
use fpsearch_core::quantum::{equal_up_to_global_phase, StateVector, UnitaryMatrix};
use fpsearch_core::search::{
    all_oracles, closed_form_success, expand_gate_list, recursive_operator, OracleSpec, RecursionOrder,
    FIXED_POINT_PHASE,
};
use std::f64::consts::{FRAC_PI_2, PI};

const PHI: f64 = FIXED_POINT_PHASE;

fn sys() -> SpinSystem {
    SpinSystem::sodium_formate()
}

fn order(r: u32) -> RecursionOrder {
    RecursionOrder::new(r).unwrap()
}

fn success(u: &UnitaryMatrix, oracle: &OracleSpec) -> f64 {
    let psi = u.apply(&StateVector::zero(2)).unwrap();
    oracle.matching().iter().map(|&x| psi.probability(x)).sum()
}

fn pulse_success(r: u32, oracle: &OracleSpec, err: &ErrorModel) -> f64 {
    let seq = compile_algorithm(order(r), oracle, &sys(), PulseStyle::Naive).unwrap();
    success(&sequence_unitary(&seq, &sys(), err).unwrap(), oracle)
}

/// Simulates a compiled sequence with `u_err` inside U/U† gates and no error
/// elsewhere.
fn success_with_u_only_error(r: u32, oracle: &OracleSpec, u_err: &ErrorModel) -> f64 {
    let seq = compile_algorithm(order(r), oracle, &sys(), PulseStyle::Naive).unwrap();
    let mut acc = UnitaryMatrix::identity(4);
    for span in seq.gate_spans() {
        let err =
            if matches!(span.gate, fpsearch_core::search::Gate::U | fpsearch_core::search::Gate::UDagger) {
                *u_err
            } else {
                ErrorModel::none()
            };
        acc = &span_unitary(&seq, span, &sys(), &err).unwrap() * &acc;
    }
    success(&acc, oracle)
}

fn cube_residual(p_prev: f64, p_next: f64) -> f64 {
    ((1.0 - p_next) - (1.0 - p_prev).powi(3)).abs()
}

#[test]
fn soundness_for_all_oracles_and_phases() {
    for phase in [PHI, PI] {
        let origin = OracleSpec::origin(2, phase).unwrap();
        let oracles: Vec<_> =
            all_oracles(2, 1, phase).unwrap().into_iter().chain(all_oracles(2, 2, phase).unwrap()).collect();
        for o in &oracles {
            for r in 0..=3 {
                let v = recursive_operator(order(r), o, &origin).unwrap();
                for style in [PulseStyle::Naive, PulseStyle::Bb1] {
                    let seq = compile_algorithm(order(r), o, &sys(), style).unwrap();
                    let u = sequence_unitary(&seq, &sys(), &ErrorModel::none()).unwrap();
                    assert!(equal_up_to_global_phase(&u, &v, 1e-10), "{o} φ={phase} r={r} {style:?}");
                }
            }
        }
    }
}

#[test]
fn gate_spans_follow_gate_list() {
    let o = OracleSpec::from_bitstrings(&["01"], PHI).unwrap();
    let seq = compile_algorithm(order(3), &o, &sys(), PulseStyle::Bb1).unwrap();
    let gates: Vec<_> = seq.gate_spans().iter().map(|s| s.gate).collect();
    assert_eq!(gates, expand_gate_list(order(3), &o).unwrap());
    let mut cursor = 0;
    for span in seq.gate_spans() {
        assert_eq!(span.start, cursor);
        cursor = span.end;
    }
    assert_eq!(cursor, seq.len());
}

#[test]
fn fixed_point_law_when_error_is_confined_to_u_gates() {
    for eps in [-0.1, -0.05, -0.02, 0.02, 0.05, 0.1] {
        let err = ErrorModel::rf(eps).unwrap();
        for o in all_oracles(2, 1, PHI).unwrap() {
            let p: Vec<f64> = (0..=3).map(|r| success_with_u_only_error(r, &o, &err)).collect();
            for r in 0..3 {
                assert!(cube_residual(p[r], p[r + 1]) <= 1e-9, "{o} ε={eps} r={r}: {p:?}");
            }
        }
    }
}

#[test]
fn rf_error_on_composite_z_pulses_perturbs_the_phase_gates() {
    // With ε on every rf pulse the composite z rotations inside R_f and R_0
    // are no longer diagonal, so the exact cube law is lost. Values from an
    // independent expm-based simulation.
    let err = ErrorModel::rf(0.1).unwrap();
    let o = OracleSpec::from_bitstrings(&["00"], PHI).unwrap();
    let p: Vec<f64> = (0..=1).map(|r| pulse_success(r, &o, &err)).collect();
    assert!((cube_residual(p[0], p[1]) - 0.02292832119684607).abs() < 1e-9, "{p:?}");
}

#[test]
fn coupling_error_regression_values() {
    // Pinned from an independent expm-based pulse simulation
    // (ε = 0, δJ = 0.05, residual between r = 0 and r = 1).
    let expected = [
        ("00", 0.09995798855403554),
        ("01", 0.05187844885588311),
        ("10", 0.05187844885588311),
        ("11", 0.09995798855403554),
    ];
    let err = ErrorModel::coupling(0.05).unwrap();
    for (bits, value) in expected {
        let o = OracleSpec::from_bitstrings(&[bits], PHI).unwrap();
        let residual = cube_residual(pulse_success(0, &o, &err), pulse_success(1, &o, &err));
        assert!((residual - value).abs() < 1e-9, "{bits}: {residual}");
        assert!(residual > 1e-6);
    }
}

#[test]
fn coupling_error_breaks_inverse_pairing() {
    let o = OracleSpec::from_bitstrings(&["11"], PHI).unwrap();
    let seq = compile_algorithm(order(1), &o, &sys(), PulseStyle::Naive).unwrap();
    let lib = fpsearch_core::pulse::GateLibrary::new(&o, &sys(), PulseStyle::Naive).unwrap();
    use fpsearch_core::search::Gate;
    let err = ErrorModel::coupling(0.05).unwrap();
    let rf = sequence_unitary(lib.sequence(Gate::Rf), &sys(), &err).unwrap();
    let rf_dag = sequence_unitary(lib.sequence(Gate::RfDagger), &sys(), &err).unwrap();
    assert!(!equal_up_to_global_phase(&rf_dag, &rf.adjoint(), 1e-6));
    let ideal = ErrorModel::none();
    let rf = sequence_unitary(lib.sequence(Gate::Rf), &sys(), &ideal).unwrap();
    let rf_dag = sequence_unitary(lib.sequence(Gate::RfDagger), &sys(), &ideal).unwrap();
    assert!(equal_up_to_global_phase(&rf_dag, &rf.adjoint(), 1e-10));
    assert_eq!(seq.gate_spans().len(), 5);
}

#[test]
fn zero_error_limit_matches_closed_form() {
    for o in all_oracles(2, 1, PHI).unwrap().iter().chain(&all_oracles(2, 2, PHI).unwrap()) {
        for r in 0..=3 {
            let p = pulse_success(r, o, &ErrorModel::none());
            assert!((p - closed_form_success(order(r), o.k(), 2)).abs() < 1e-10);
        }
    }
}

fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[test]
fn bb1_and_naive_infidelity_slopes() {
    let target = spin_rotation(FRAC_PI_2, FRAC_PI_2);
    let naive = PulseSequence::from_events(
        SequenceKind::Physical,
        [PulseEvent::rf(SpinSet::H, FRAC_PI_2, FRAC_PI_2)],
    )
    .unwrap();
    let bb1 = bb1_expand(FRAC_PI_2, FRAC_PI_2, SpinSet::H).unwrap();
    let eps: Vec<f64> = (0..8).map(|i| 1e-3 * 10f64.powf(i as f64 / 7.0)).collect();
    let infid = |seq: &PulseSequence, e: f64| {
        let u = single_spin_unitary(seq, Spin::H, &ErrorModel::rf(e).unwrap()).unwrap();
        infidelity(&u, &target)
    };
    let yn: Vec<f64> = eps.iter().map(|&e| infid(&naive, e)).collect();
    let yb: Vec<f64> = eps.iter().map(|&e| infid(&bb1, e)).collect();
    let sn = log_log_slope(&eps, &yn);
    let sb = log_log_slope(&eps, &yb);
    assert!((sn - 2.0).abs() <= 0.2, "naive slope {sn}");
    assert!((sb - 6.0).abs() <= 0.5, "bb1 slope {sb}");
    // Exact naive value: sin²(πε/4).
    for (&e, &y) in eps.iter().zip(&yn) {
        let expected = (PI * e / 4.0).sin().powi(2);
        assert!((y - expected).abs() <= 1e-12 * expected.max(1e-30) + 1e-20);
    }
}
