//! NMR readout: crush gradient, ¹H doublet after a 90°y observation pulse,
//! and conversion between spectral intensity and success probability.
//!
//! The ¹H line at +J/2 (left under NMR plotting conventions) belongs to ¹³C
//! in `|0⟩`, the line at −J/2 to ¹³C in `|1⟩`. A positive line means ¹H in
//! `|0⟩`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::pulse::{compile_algorithm, sequence_unitary, ErrorModel, PulseStyle, SpinSystem};
use crate::quantum::{DensityMatrix, StateVector, ALGEBRA_TOL};
use crate::search::{OracleSpec, RecursionOrder};

const SIGNAL_EPS: f64 = 1e-12;

/// Signed amplitudes of the two ¹H doublet components.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Component at +J/2 (¹³C in `|0⟩`).
    pub left_amp: f64,
    /// Component at −J/2 (¹³C in `|1⟩`).
    pub right_amp: f64,
    /// Line positions in Hz, (+J/2, −J/2).
    pub line_freqs: (f64, f64),
    /// Rendered (frequency, intensity) samples, if any.
    pub trace: Option<Vec<(f64, f64)>>,
}

impl Spectrum {
    pub fn new(left_amp: f64, right_amp: f64, sys: &SpinSystem) -> Self {
        Spectrum { left_amp, right_amp, line_freqs: (sys.j_hz / 2.0, -sys.j_hz / 2.0), trace: None }
    }

    fn combine(&self, pattern: &SignalPattern) -> f64 {
        pattern.left * self.left_amp + pattern.right * self.right_amp
    }
}

/// Projection onto the diagonal.
pub fn crush(rho: &DensityMatrix) -> DensityMatrix {
    let n = rho.dim();
    let mut data = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        data[i * n + i] = rho.get(i, i);
    }
    DensityMatrix::from_raw(n, data)
}

/// Doublet amplitudes of a diagonal two-spin state: left = p(00) − p(10),
/// right = p(01) − p(11).
pub fn spectrum_from_populations(rho: &DensityMatrix, sys: &SpinSystem) -> Result<Spectrum> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: rho.dim() });
    }
    if !rho.is_diagonal(ALGEBRA_TOL) {
        return Err(Error::NotDiagonal);
    }
    let p = rho.populations();
    Ok(Spectrum::new(p[0] - p[2], p[1] - p[3], sys))
}

/// Crush, then read the spectrum of a pure state.
pub fn spectrum_of_state(psi: &StateVector, sys: &SpinSystem) -> Result<Spectrum> {
    spectrum_from_populations(&crush(&DensityMatrix::pure(psi)), sys)
}

/// Spectrum of the direct-target preparation (the `r → ∞` limit), used to
/// normalize measured intensities.
pub fn reference_spectrum(oracle: &OracleSpec, sys: &SpinSystem) -> Result<Spectrum> {
    spectrum_of_state(&oracle.target_state(), sys)
}

fn check_k(k: usize) -> Result<()> {
    if k == 1 || k == 2 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("fractional signal is defined for k = 1 or 2, got {k}")))
    }
}

/// `F = (4P − 1)/3` for one match, `F = 2P − 1` for two.
pub fn fractional_signal(p: f64, k: usize) -> Result<f64> {
    check_k(k)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Invariant(format!("probability {p} outside [0, 1]")));
    }
    Ok(if k == 1 { (4.0 * p - 1.0) / 3.0 } else { 2.0 * p - 1.0 })
}

/// Inverse of [`fractional_signal`], without clamping.
pub fn probability_from_signal(f: f64, k: usize) -> Result<f64> {
    check_k(k)?;
    Ok(if k == 1 { (3.0 * f + 1.0) / 4.0 } else { (f + 1.0) / 2.0 })
}

/// Signed weights applied to (left, right) to form the intensity of an
/// oracle's expected pattern: a single component for k = 1, the sum or the
/// difference of both for k = 2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignalPattern {
    pub left: f64,
    pub right: f64,
}

/// The expected pattern of `oracle`, or `NoSignalExpected` when its target
/// gives no ¹H signal.
pub fn signal_pattern(oracle: &OracleSpec) -> Result<SignalPattern> {
    if oracle.num_qubits() != 2 {
        return Err(Error::Unsupported(format!("readout needs 2 qubits, got {}", oracle.num_qubits())));
    }
    let p = oracle.target_state().probabilities();
    let sign = |x: f64| if x.abs() <= SIGNAL_EPS { 0.0 } else { x.signum() };
    let pattern = SignalPattern { left: sign(p[0] - p[2]), right: sign(p[1] - p[3]) };
    if pattern.left == 0.0 && pattern.right == 0.0 {
        return Err(Error::NoSignalExpected(oracle.label()));
    }
    Ok(pattern)
}

/// Fractional signal of `spectrum` relative to `reference` along the
/// oracle's expected pattern.
pub fn fractional_intensity(spectrum: &Spectrum, reference: &Spectrum, oracle: &OracleSpec) -> Result<f64> {
    let pattern = signal_pattern(oracle)?;
    let denom = reference.combine(&pattern);
    if denom.abs() <= SIGNAL_EPS {
        return Err(Error::ZeroReference);
    }
    Ok(spectrum.combine(&pattern) / denom)
}

/// Success probability estimated from spectral intensity, clamped to [0, 1].
pub fn estimate_probability(
    spectrum: &Spectrum,
    reference: &Spectrum,
    k: usize,
    oracle: &OracleSpec,
) -> Result<f64> {
    check_k(k)?;
    if k != oracle.k() {
        return Err(Error::InvalidOracle(format!(
            "k = {k} does not match oracle {} with {} matching inputs",
            oracle.label(),
            oracle.k()
        )));
    }
    let f = fractional_intensity(spectrum, reference, oracle)?;
    Ok(probability_from_signal(f, k)?.clamp(0.0, 1.0))
}

/// Lorentzian doublet sampled on `grid` (Hz): lines at ±J/2 with full width
/// at half maximum 1/(π·T2_H) and peak heights equal to the line amplitudes.
pub fn lorentzian_trace(spectrum: &Spectrum, sys: &SpinSystem, grid: &[f64]) -> Vec<(f64, f64)> {
    let half_width = 1.0 / (2.0 * std::f64::consts::PI * sys.t2_h);
    let hw2 = half_width * half_width;
    let (f_left, f_right) = spectrum.line_freqs;
    grid.iter()
        .map(|&f| {
            let line = |amp: f64, f0: f64| {
                if amp == 0.0 {
                    0.0
                } else {
                    amp * hw2 / ((f - f0) * (f - f0) + hw2)
                }
            };
            (f, line(spectrum.left_amp, f_left) + line(spectrum.right_amp, f_right))
        })
        .collect()
}

/// One simulated run: pulse-level success probability plus the readout
/// round trip.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub oracle: String,
    pub r: u32,
    pub style: PulseStyle,
    pub errors: ErrorModel,
    /// Success probability from the final state.
    pub p_sim: f64,
    /// Fractional signal; `None` for oracles with no expected signal.
    pub f: Option<f64>,
    /// Probability estimated back from `f`.
    pub p_est: Option<f64>,
}

impl ExperimentRecord {
    pub fn measure(
        order: RecursionOrder,
        oracle: &OracleSpec,
        sys: &SpinSystem,
        style: PulseStyle,
        errors: &ErrorModel,
    ) -> Result<Self> {
        let seq = compile_algorithm(order, oracle, sys, style)?;
        let u = sequence_unitary(&seq, sys, errors)?;
        let psi = u.apply(&StateVector::zero(2))?;
        let p_sim: f64 = oracle.matching().iter().map(|&x| psi.probability(x)).sum();
        let spectrum = spectrum_of_state(&psi, sys)?;
        let reference = reference_spectrum(oracle, sys)?;
        let (f, p_est) = match fractional_intensity(&spectrum, &reference, oracle) {
            Ok(f) if oracle.k() <= 2 => {
                let p = estimate_probability(&spectrum, &reference, oracle.k(), oracle)?;
                (Some(f), Some(p))
            }
            Ok(_) | Err(Error::NoSignalExpected(_)) => (None, None),
            Err(e) => return Err(e),
        };
        if !(-ALGEBRA_TOL..=1.0 + ALGEBRA_TOL).contains(&p_sim) {
            return Err(Error::Invariant(format!("success probability {p_sim} outside [0, 1]")));
        }
        Ok(ExperimentRecord {
            oracle: oracle.label(),
            r: order.get(),
            style,
            errors: *errors,
            p_sim: p_sim.clamp(0.0, 1.0),
            f,
            p_est,
        })
    }
}
