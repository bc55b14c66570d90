//! Pulse-level model of a ¹H–¹³C spin pair under the Ising Hamiltonian
//! `πJ·2HzCz`.
//!
//! rf pulses are hard rotations: coupling evolution during a pulse is
//! neglected, so pulse durations never enter the propagators. Qubit 1 (the
//! most significant bit) is ¹H, qubit 2 is ¹³C.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numfmt;
use crate::quantum::{UnitaryMatrix, SEQUENCE_TOL};
use crate::search::{expand_gate_list, Gate, OracleSpec, RecursionOrder};

const ANGLE_EPS: f64 = 1e-12;
const TEXT_DIGITS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    H,
    C,
}

/// Nonempty subset of {H, C}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinSet {
    h: bool,
    c: bool,
}

impl SpinSet {
    pub const H: SpinSet = SpinSet { h: true, c: false };
    pub const C: SpinSet = SpinSet { h: false, c: true };
    pub const BOTH: SpinSet = SpinSet { h: true, c: true };

    pub fn contains(self, spin: Spin) -> bool {
        match spin {
            Spin::H => self.h,
            Spin::C => self.c,
        }
    }

    pub fn label(self) -> &'static str {
        match (self.h, self.c) {
            (true, true) => "HC",
            (true, false) => "H",
            (false, true) => "C",
            (false, false) => "-",
        }
    }
}

impl From<Spin> for SpinSet {
    fn from(spin: Spin) -> Self {
        match spin {
            Spin::H => SpinSet::H,
            Spin::C => SpinSet::C,
        }
    }
}

impl FromStr for SpinSet {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "H" => Ok(SpinSet::H),
            "C" => Ok(SpinSet::C),
            "HC" => Ok(SpinSet::BOTH),
            other => Err(format!("unknown spin set '{other}'")),
        }
    }
}

/// Coupling, pulse calibration and relaxation of the two-spin sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinSystem {
    /// Scalar coupling J in Hz.
    pub j_hz: f64,
    /// Duration of a nominal 90° pulse in seconds.
    pub t90: f64,
    /// Transverse relaxation of ¹H in seconds (lineshape only).
    pub t2_h: f64,
    /// Transverse relaxation of ¹³C in seconds (lineshape only).
    pub t2_c: f64,
}

impl SpinSystem {
    pub fn new(j_hz: f64, t90: f64, t2_h: f64, t2_c: f64) -> Result<Self> {
        for (name, v) in [("J", j_hz), ("t90", t90), ("T2_H", t2_h), ("T2_C", t2_c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidSpinSystem(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(SpinSystem { j_hz, t90, t2_h, t2_c })
    }

    /// ¹³C-labelled sodium formate: J = 194.8 Hz, 15 µs 90° pulses,
    /// T2(¹H) = 1.2 s, T2(¹³C) = 0.6 s.
    pub fn sodium_formate() -> Self {
        SpinSystem { j_hz: 194.8, t90: 15e-6, t2_h: 1.2, t2_c: 0.6 }
    }
}

impl Default for SpinSystem {
    fn default() -> Self {
        Self::sodium_formate()
    }
}

/// Coherent systematic errors.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ErrorModel {
    /// Fractional rf amplitude error on ¹H: actual angle = nominal·(1 + ε).
    pub eps_h: f64,
    /// Fractional rf amplitude error on ¹³C.
    pub eps_c: f64,
    /// Fractional coupling miscalibration: delays are computed for J but the
    /// evolution runs at J·(1 + δJ).
    pub delta_j: f64,
}

impl ErrorModel {
    pub fn new(eps_h: f64, eps_c: f64, delta_j: f64) -> Result<Self> {
        for (name, v) in [("eps_H", eps_h), ("eps_C", eps_c), ("deltaJ", delta_j)] {
            if !(v.is_finite() && v.abs() < 1.0) {
                return Err(Error::InvalidErrorModel(format!("|{name}| must be < 1, got {v}")));
            }
        }
        Ok(ErrorModel { eps_h, eps_c, delta_j })
    }

    pub fn none() -> Self {
        Self::default()
    }

    /// Same rf error on both channels, no coupling error.
    pub fn rf(eps: f64) -> Result<Self> {
        Self::new(eps, eps, 0.0)
    }

    pub fn coupling(delta_j: f64) -> Result<Self> {
        Self::new(0.0, 0.0, delta_j)
    }

    pub fn eps(&self, spin: Spin) -> f64 {
        match spin {
            Spin::H => self.eps_h,
            Spin::C => self.eps_c,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PulseEvent {
    /// Hard rotation by `angle` about the in-plane axis at `phase`
    /// (0 = x, π/2 = y), simultaneously on every target.
    Rf { targets: SpinSet, angle: f64, phase: f64 },
    /// Free evolution under the coupling.
    Delay { duration: f64 },
    /// Frame rotation `exp(-iθσz/2)`; only legal in debug sequences.
    VirtualZ { spin: Spin, angle: f64 },
}

impl PulseEvent {
    pub fn rf(targets: SpinSet, angle: f64, phase: f64) -> Self {
        PulseEvent::Rf { targets, angle, phase: normalize_phase(phase) }
    }

    pub fn delay(duration: f64) -> Self {
        PulseEvent::Delay { duration }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            PulseEvent::Rf { targets, angle, phase } => {
                if targets.label() == "-" {
                    return Err(Error::InvalidEvent("rf pulse without targets".into()));
                }
                if !angle.is_finite() || !phase.is_finite() {
                    return Err(Error::InvalidEvent(format!("non-finite rf pulse {angle} @ {phase}")));
                }
            }
            PulseEvent::Delay { duration } => {
                if !(duration.is_finite() && duration > 0.0) {
                    return Err(Error::InvalidEvent(format!("delay must be positive, got {duration}")));
                }
            }
            PulseEvent::VirtualZ { angle, .. } => {
                if !angle.is_finite() {
                    return Err(Error::InvalidEvent("non-finite virtual z angle".into()));
                }
            }
        }
        Ok(())
    }

    pub fn is_rf(&self) -> bool {
        matches!(self, PulseEvent::Rf { .. })
    }
}

/// Maps a phase into [0, 2π).
fn normalize_phase(phase: f64) -> f64 {
    let p = phase.rem_euclid(TAU);
    if (TAU - p).abs() < ANGLE_EPS || p.abs() < ANGLE_EPS {
        0.0
    } else {
        p
    }
}

/// Maps an angle into (−π, π].
fn wrap_angle(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(TAU) - PI;
    if t <= -PI + ANGLE_EPS {
        PI
    } else {
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    /// Only rf pulses and delays.
    Physical,
    /// May contain virtual z rotations.
    Debug,
}

/// Events `start..end` of a sequence realize `gate`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateSpan {
    pub gate: Gate,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PulseSequence {
    events: Vec<PulseEvent>,
    gates: Vec<GateSpan>,
    kind: SequenceKind,
}

impl PulseSequence {
    pub fn physical() -> Self {
        PulseSequence { events: Vec::new(), gates: Vec::new(), kind: SequenceKind::Physical }
    }

    pub fn debug() -> Self {
        PulseSequence { kind: SequenceKind::Debug, ..Self::physical() }
    }

    pub fn from_events(kind: SequenceKind, events: impl IntoIterator<Item = PulseEvent>) -> Result<Self> {
        let mut seq = PulseSequence { kind, ..Self::physical() };
        for e in events {
            seq.push(e)?;
        }
        Ok(seq)
    }

    pub fn push(&mut self, event: PulseEvent) -> Result<()> {
        event.validate()?;
        if self.kind == SequenceKind::Physical && matches!(event, PulseEvent::VirtualZ { .. }) {
            return Err(Error::VirtualZInPhysical { index: self.events.len() });
        }
        self.events.push(event);
        Ok(())
    }

    /// Appends all events of `other`, shifting its gate spans.
    pub fn append(&mut self, other: &PulseSequence) -> Result<()> {
        let offset = self.events.len();
        for e in &other.events {
            self.push(*e)?;
        }
        self.gates.extend(other.gates.iter().map(|g| GateSpan {
            gate: g.gate,
            start: g.start + offset,
            end: g.end + offset,
        }));
        Ok(())
    }

    /// Appends `body` as the realization of `gate`.
    pub fn append_gate(&mut self, gate: Gate, body: &PulseSequence) -> Result<()> {
        let start = self.events.len();
        for e in &body.events {
            self.push(*e)?;
        }
        self.gates.push(GateSpan { gate, start, end: self.events.len() });
        Ok(())
    }

    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    pub fn gate_spans(&self) -> &[GateSpan] {
        &self.gates
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn rf_count(&self) -> usize {
        self.events.iter().filter(|e| e.is_rf()).count()
    }

    /// Total free-evolution time in seconds.
    pub fn total_delay(&self) -> f64 {
        self.events
            .iter()
            .map(|e| match e {
                PulseEvent::Delay { duration } => *duration,
                _ => 0.0,
            })
            .sum()
    }

    /// Line-oriented text: `PULSE <targets> <angle_deg> <phase_deg>`,
    /// `DELAY <seconds>`, `ZVIRT <spin> <angle_deg>` (debug only), and a
    /// `# gate: <name>` line at each gate boundary. Numbers carry 9
    /// significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.kind == SequenceKind::Debug {
            out.push_str("# kind: debug\n");
        }
        let mut spans = self.gates.iter().peekable();
        for (i, e) in self.events.iter().enumerate() {
            while let Some(span) = spans.next_if(|s| s.start == i) {
                let _ = writeln!(out, "# gate: {}", span.gate);
            }
            let f = |x: f64| numfmt::decimal(x, TEXT_DIGITS);
            let _ = match *e {
                PulseEvent::Rf { targets, angle, phase } => writeln!(
                    out,
                    "PULSE {} {} {}",
                    targets.label(),
                    f(angle.to_degrees()),
                    f(phase.to_degrees())
                ),
                PulseEvent::Delay { duration } => writeln!(out, "DELAY {}", f(duration)),
                PulseEvent::VirtualZ { spin, angle } => {
                    writeln!(out, "ZVIRT {} {}", SpinSet::from(spin).label(), f(angle.to_degrees()))
                }
            };
        }
        for span in spans {
            let _ = writeln!(out, "# gate: {}", span.gate);
        }
        out
    }

    /// Parses [`PulseSequence::to_text`] output. Other `#` lines and blank
    /// lines are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut seq = PulseSequence::physical();
        let mut open: Option<(Gate, usize)> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let perr = |message: String| Error::Parse { line: lineno + 1, message };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                if comment == "kind: debug" {
                    if !seq.events.is_empty() {
                        return Err(perr("kind marker must precede all events".into()));
                    }
                    seq.kind = SequenceKind::Debug;
                } else if let Some(name) = comment.strip_prefix("gate:") {
                    let gate = Gate::parse(name.trim())
                        .ok_or_else(|| perr(format!("unknown gate '{}'", name.trim())))?;
                    if let Some((g, start)) = open.take() {
                        seq.gates.push(GateSpan { gate: g, start, end: seq.events.len() });
                    }
                    open = Some((gate, seq.events.len()));
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<f64>().map_err(|e| perr(format!("bad number '{s}': {e}")));
            let event = match fields.as_slice() {
                ["PULSE", t, a, p] => PulseEvent::Rf {
                    targets: t.parse().map_err(perr)?,
                    angle: num(a)?.to_radians(),
                    phase: num(p)?.to_radians(),
                },
                ["DELAY", d] => PulseEvent::Delay { duration: num(d)? },
                ["ZVIRT", s, a] => {
                    let spin = match *s {
                        "H" => Spin::H,
                        "C" => Spin::C,
                        other => return Err(perr(format!("unknown spin '{other}'"))),
                    };
                    PulseEvent::VirtualZ { spin, angle: num(a)?.to_radians() }
                }
                _ => return Err(perr(format!("unrecognized line '{line}'"))),
            };
            seq.push(event).map_err(|e| perr(e.to_string()))?;
        }
        if let Some((g, start)) = open {
            seq.gates.push(GateSpan { gate: g, start, end: seq.events.len() });
        }
        Ok(seq)
    }
}

/// Single-spin rotation `exp(−iθ(cosφ σx + sinφ σy)/2)`.
pub fn spin_rotation(angle: f64, phase: f64) -> UnitaryMatrix {
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let mi = C64::new(0.0, -1.0);
    let off_lo = mi * s * C64::from_polar(1.0, phase);
    let off_hi = mi * s * C64::from_polar(1.0, -phase);
    UnitaryMatrix::from_raw(2, vec![C64::new(c, 0.0), off_hi, off_lo, C64::new(c, 0.0)])
}

fn spin_z(angle: f64) -> UnitaryMatrix {
    UnitaryMatrix::from_raw(
        2,
        vec![
            C64::from_polar(1.0, -angle / 2.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::from_polar(1.0, angle / 2.0),
        ],
    )
}

/// Coupling propagator `exp(−iθ·2HzCz)`; 2HzCz = diag(½, −½, −½, ½).
pub fn coupling_evolution(theta: f64) -> UnitaryMatrix {
    let a = C64::from_polar(1.0, -theta / 2.0);
    let b = C64::from_polar(1.0, theta / 2.0);
    let z = C64::new(0.0, 0.0);
    UnitaryMatrix::from_raw(4, vec![a, z, z, z, z, b, z, z, z, z, b, z, z, z, z, a])
}

/// Propagator of one event on the two-spin register.
pub fn pulse_unitary(
    event: &PulseEvent,
    sys: &SpinSystem,
    err: &ErrorModel,
    kind: SequenceKind,
) -> Result<UnitaryMatrix> {
    event.validate()?;
    let id = UnitaryMatrix::identity(2);
    Ok(match *event {
        PulseEvent::Rf { targets, angle, phase } => {
            let on = |spin: Spin| {
                if targets.contains(spin) {
                    spin_rotation(angle * (1.0 + err.eps(spin)), phase)
                } else {
                    id.clone()
                }
            };
            on(Spin::H).kron(&on(Spin::C))
        }
        PulseEvent::Delay { duration } => coupling_evolution(PI * sys.j_hz * (1.0 + err.delta_j) * duration),
        PulseEvent::VirtualZ { spin, angle } => {
            if kind == SequenceKind::Physical {
                return Err(Error::VirtualZInPhysical { index: 0 });
            }
            match spin {
                Spin::H => spin_z(angle).kron(&id),
                Spin::C => id.kron(&spin_z(angle)),
            }
        }
    })
}

/// Time-ordered product of all event propagators.
pub fn sequence_unitary(seq: &PulseSequence, sys: &SpinSystem, err: &ErrorModel) -> Result<UnitaryMatrix> {
    events_unitary(seq.events(), 0, seq.kind(), sys, err)
}

/// Propagator of the events in `span` only.
pub fn span_unitary(
    seq: &PulseSequence,
    span: &GateSpan,
    sys: &SpinSystem,
    err: &ErrorModel,
) -> Result<UnitaryMatrix> {
    events_unitary(&seq.events()[span.start..span.end], span.start, seq.kind(), sys, err)
}

fn events_unitary(
    events: &[PulseEvent],
    offset: usize,
    kind: SequenceKind,
    sys: &SpinSystem,
    err: &ErrorModel,
) -> Result<UnitaryMatrix> {
    let mut acc = UnitaryMatrix::identity(4);
    for (i, e) in events.iter().enumerate() {
        let index = offset + i;
        let u = pulse_unitary(e, sys, err, kind).map_err(|e| match e {
            Error::VirtualZInPhysical { .. } => Error::VirtualZInPhysical { index },
            other => other,
        })?;
        acc = &u * &acc;
        let defect = acc.unitarity_defect();
        if defect > SEQUENCE_TOL {
            return Err(Error::PulseNotUnitary { index, defect });
        }
    }
    Ok(acc)
}

/// 2×2 propagator of a sequence that only contains rf pulses, as seen by
/// one spin.
pub fn single_spin_unitary(seq: &PulseSequence, spin: Spin, err: &ErrorModel) -> Result<UnitaryMatrix> {
    let mut acc = UnitaryMatrix::identity(2);
    for e in seq.events() {
        match *e {
            PulseEvent::Rf { targets, angle, phase } => {
                if targets.contains(spin) {
                    acc = &spin_rotation(angle * (1.0 + err.eps(spin)), phase) * &acc;
                }
            }
            _ => {
                return Err(Error::Unsupported(
                    "single-spin propagator of a sequence with delays or frame rotations".into(),
                ))
            }
        }
    }
    Ok(acc)
}

/// Gate infidelity `1 − |tr(V†U)/d|²`.
///
/// For d = 2 the value is taken from the vector part of `V†U` in SU(2),
/// which keeps full relative precision for infidelities far below 1e-16.
pub fn infidelity(actual: &UnitaryMatrix, ideal: &UnitaryMatrix) -> f64 {
    let w = &ideal.adjoint() * actual;
    if w.dim() == 2 {
        let det = w.get(0, 0) * w.get(1, 1) - w.get(0, 1) * w.get(1, 0);
        let s = det.sqrt();
        let alpha = (w.get(0, 0) / s + (w.get(1, 1) / s).conj()) / 2.0;
        let beta = (w.get(0, 1) / s - (w.get(1, 0) / s).conj()) / 2.0;
        return beta.norm_sqr() + alpha.im * alpha.im;
    }
    let d = w.dim() as f64;
    let tr: C64 = (0..w.dim()).map(|i| w.get(i, i)).sum();
    1.0 - tr.norm_sqr() / (d * d)
}

/// z rotation `exp(−iθσz/2)` on one spin built from three rf pulses: in time
/// order 90°(−x), |θ| about ±y, 90°(x).
pub fn composite_z(theta: f64, spin: Spin) -> Result<PulseSequence> {
    if !theta.is_finite() || theta.abs() > TAU + ANGLE_EPS {
        return Err(Error::InvalidEvent(format!("composite z angle {theta} outside [-2π, 2π]")));
    }
    let target = SpinSet::from(spin);
    let middle_phase = if theta >= 0.0 { FRAC_PI_2 } else { 3.0 * FRAC_PI_2 };
    PulseSequence::from_events(
        SequenceKind::Physical,
        [
            PulseEvent::rf(target, FRAC_PI_2, PI),
            PulseEvent::rf(target, theta.abs(), middle_phase),
            PulseEvent::rf(target, FRAC_PI_2, 0.0),
        ],
    )
}

/// Coefficients of `diag(e^{i d_j}) = e^{ig}·exp(i(a·Hz + b·Cz + c·2HzCz))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseDecomposition {
    pub global: f64,
    pub hz: f64,
    pub cz: f64,
    pub zz: f64,
}

impl PhaseDecomposition {
    pub fn of(spec: &OracleSpec) -> Result<Self> {
        if spec.num_qubits() != 2 {
            return Err(Error::Unsupported(format!(
                "phase gate compilation needs 2 qubits, got {}",
                spec.num_qubits()
            )));
        }
        let d: Vec<f64> = (0..4).map(|i| if spec.is_match(i) { spec.phase() } else { 0.0 }).collect();
        Ok(PhaseDecomposition {
            global: (d[0] + d[1] + d[2] + d[3]) / 4.0,
            hz: (d[0] + d[1] - d[2] - d[3]) / 2.0,
            cz: (d[0] - d[1] + d[2] - d[3]) / 2.0,
            zz: (d[0] - d[1] - d[2] + d[3]) / 2.0,
        })
    }
}

/// Merges adjacent rf pulses on the same targets about the same axis (±)
/// and drops pulses whose angle cancels.
fn merge_adjacent(events: Vec<PulseEvent>) -> Vec<PulseEvent> {
    let mut out: Vec<PulseEvent> = Vec::with_capacity(events.len());
    for e in events {
        if let (
            Some(PulseEvent::Rf { targets: t0, angle: a0, phase: p0 }),
            PulseEvent::Rf { targets: t1, angle: a1, phase: p1 },
        ) = (out.last().copied(), e)
        {
            if t0 == t1 {
                let dp = normalize_phase(p1 - p0);
                let merged = if dp == 0.0 {
                    Some(a0 + a1)
                } else if (dp - PI).abs() < ANGLE_EPS {
                    Some(a0 - a1)
                } else {
                    None
                };
                if let Some(a) = merged {
                    out.pop();
                    if a.abs() > ANGLE_EPS {
                        let (angle, phase) = if a > 0.0 { (a, p0) } else { (-a, p0 + PI) };
                        out.push(PulseEvent::rf(t0, angle, phase));
                    }
                    continue;
                }
            }
        }
        if !matches!(e, PulseEvent::Rf { angle, .. } if angle.abs() <= ANGLE_EPS) {
            out.push(e);
        }
    }
    out
}

/// Lowers a two-qubit phase oracle onto z rotations of each spin and one
/// coupling delay. The delay realizes `exp(−iθ·2HzCz)` with θ ∈ (0, 2π);
/// a negative θ is shifted by 2π, which only changes the global phase.
pub fn compile_phase_gate(spec: &OracleSpec, sys: &SpinSystem) -> Result<PulseSequence> {
    let dec = PhaseDecomposition::of(spec)?;
    if spec.phase() == 0.0 {
        return Err(Error::InvalidOracle("phase gate with zero phase".into()));
    }
    let mut events = Vec::new();
    // exp(i a Hz) = exp(−i(−a)σz/2)
    for (coef, spin) in [(dec.hz, Spin::H), (dec.cz, Spin::C)] {
        let theta = wrap_angle(-coef);
        if theta.abs() > ANGLE_EPS {
            events.extend_from_slice(composite_z(theta, spin)?.events());
        }
    }
    let mut theta = -dec.zz;
    if theta.abs() > ANGLE_EPS {
        if theta < 0.0 {
            theta += TAU;
        }
        events.push(PulseEvent::delay(theta / (PI * sys.j_hz)));
    }
    PulseSequence::from_events(SequenceKind::Physical, merge_adjacent(events))
}

/// BB1 rewrite of a θ rotation at `phase`: π(φ+φ₁), 2π(φ+3φ₁), π(φ+φ₁),
/// θ(φ) with φ₁ = arccos(−θ/4π).
pub fn bb1_expand(theta: f64, phase: f64, targets: SpinSet) -> Result<PulseSequence> {
    if !(theta > 0.0 && theta <= TAU) {
        return Err(Error::InvalidEvent(format!("BB1 angle {theta} outside (0, 2π]")));
    }
    let phi1 = bb1_phase(theta);
    PulseSequence::from_events(
        SequenceKind::Physical,
        [
            PulseEvent::rf(targets, PI, phase + phi1),
            PulseEvent::rf(targets, TAU, phase + 3.0 * phi1),
            PulseEvent::rf(targets, PI, phase + phi1),
            PulseEvent::rf(targets, theta, phase),
        ],
    )
}

/// φ₁ = arccos(−θ/4π).
pub fn bb1_phase(theta: f64) -> f64 {
    (-theta / (4.0 * PI)).acos()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PulseStyle {
    Naive,
    Bb1,
}

impl PulseStyle {
    pub fn name(self) -> &'static str {
        match self {
            PulseStyle::Naive => "naive",
            PulseStyle::Bb1 => "bb1",
        }
    }
}

impl FromStr for PulseStyle {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "naive" => Ok(PulseStyle::Naive),
            "bb1" => Ok(PulseStyle::Bb1),
            other => Err(format!("unknown pulse style '{other}' (expected naive or bb1)")),
        }
    }
}

fn bb1_rewrite(seq: &PulseSequence) -> Result<PulseSequence> {
    let mut out = PulseSequence::physical();
    for e in seq.events() {
        match *e {
            PulseEvent::Rf { targets, angle, phase } => {
                out.append(&bb1_expand(angle, phase, targets)?)?;
            }
            other => out.push(other)?,
        }
    }
    Ok(out)
}

/// Pulse realization of each gate symbol for one search problem.
#[derive(Clone, Debug)]
pub struct GateLibrary {
    u: PulseSequence,
    u_dag: PulseSequence,
    rf: PulseSequence,
    rf_dag: PulseSequence,
    r0: PulseSequence,
    r0_dag: PulseSequence,
}

impl GateLibrary {
    pub fn new(oracle: &OracleSpec, sys: &SpinSystem, style: PulseStyle) -> Result<Self> {
        if oracle.num_qubits() != 2 {
            return Err(Error::Unsupported(format!(
                "pulse compilation needs 2 qubits, got {}",
                oracle.num_qubits()
            )));
        }
        let origin = OracleSpec::origin(2, oracle.phase())?;
        let u = PulseSequence::from_events(
            SequenceKind::Physical,
            [PulseEvent::rf(SpinSet::BOTH, FRAC_PI_2, FRAC_PI_2)],
        )?;
        let u_dag = PulseSequence::from_events(
            SequenceKind::Physical,
            [PulseEvent::rf(SpinSet::BOTH, FRAC_PI_2, 3.0 * FRAC_PI_2)],
        )?;
        let mut lib = GateLibrary {
            u,
            u_dag,
            rf: compile_phase_gate(oracle, sys)?,
            rf_dag: compile_phase_gate(&oracle.with_phase(-oracle.phase())?, sys)?,
            r0: compile_phase_gate(&origin, sys)?,
            r0_dag: compile_phase_gate(&origin.with_phase(-origin.phase())?, sys)?,
        };
        if style == PulseStyle::Bb1 {
            for seq in
                [&mut lib.u, &mut lib.u_dag, &mut lib.rf, &mut lib.rf_dag, &mut lib.r0, &mut lib.r0_dag]
            {
                *seq = bb1_rewrite(seq)?;
            }
        }
        Ok(lib)
    }

    pub fn sequence(&self, gate: Gate) -> &PulseSequence {
        match gate {
            Gate::U => &self.u,
            Gate::UDagger => &self.u_dag,
            Gate::Rf => &self.rf,
            Gate::RfDagger => &self.rf_dag,
            Gate::R0 => &self.r0,
            Gate::R0Dagger => &self.r0_dag,
        }
    }
}

/// Compiles `V_r` gate by gate; no optimization across gate boundaries.
pub fn compile_algorithm(
    order: RecursionOrder,
    oracle: &OracleSpec,
    sys: &SpinSystem,
    style: PulseStyle,
) -> Result<PulseSequence> {
    let gates = expand_gate_list(order, oracle)?;
    let lib = GateLibrary::new(oracle, sys, style)?;
    let mut seq = PulseSequence::physical();
    for g in gates {
        seq.append_gate(g, lib.sequence(g))?;
    }
    Ok(seq)
}
