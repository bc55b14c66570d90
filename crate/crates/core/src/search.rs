//! Phase oracles and the recursive fixed-point search operator
//! `V_{r+1} = V_r R_0 V_r† R_f V_r`, `V_0 = U`.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::quantum::{StateVector, UnitaryMatrix, ALGEBRA_TOL};

/// Phase of the fixed-point variant.
pub const FIXED_POINT_PHASE: f64 = PI / 3.0;
/// Default recursion cap; pulse compilation grows as 3^r.
pub const DEFAULT_MAX_ORDER: u32 = 8;
/// Registers wider than this are rejected at construction.
pub const MAX_QUBITS: usize = 12;

/// Which inputs satisfy `f`, plus the phase applied to them.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleSpec {
    n: usize,
    matching: BTreeSet<usize>,
    phase: f64,
}

impl OracleSpec {
    pub fn new(n: usize, matching: impl IntoIterator<Item = usize>, phase: f64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidOracle(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
        }
        let dim = 1usize << n;
        let mut set = BTreeSet::new();
        for idx in matching {
            if idx >= dim {
                return Err(Error::InvalidOracle(format!("basis index {idx} out of range for {n} qubits")));
            }
            if !set.insert(idx) {
                return Err(Error::InvalidOracle(format!("duplicate matching input {idx}")));
            }
        }
        if set.is_empty() {
            return Err(Error::InvalidOracle("matching set is empty".to_string()));
        }
        if !phase.is_finite() || phase.abs() >= 2.0 * PI {
            return Err(Error::InvalidOracle(format!("phase {phase} outside (-2π, 2π)")));
        }
        Ok(OracleSpec { n, matching: set, phase })
    }

    /// Builds from bit strings such as `["01", "10"]`; all must share one length.
    pub fn from_bitstrings<S: AsRef<str>>(strings: &[S], phase: f64) -> Result<Self> {
        let first =
            strings.first().ok_or_else(|| Error::InvalidOracle("matching set is empty".to_string()))?;
        let n = first.as_ref().len();
        let mut indices = Vec::with_capacity(strings.len());
        for s in strings {
            let s = s.as_ref();
            if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::InvalidOracle(format!("'{s}' is not a {n}-bit string")));
            }
            indices.push(usize::from_str_radix(s, 2).unwrap_or(0));
        }
        Self::new(n, indices, phase)
    }

    /// The `R_0` oracle: phase on `|0…0⟩` only.
    pub fn origin(n: usize, phase: f64) -> Result<Self> {
        Self::new(n, [0], phase)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// N = 2^n.
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Number of matching inputs.
    pub fn k(&self) -> usize {
        self.matching.len()
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn matching(&self) -> &BTreeSet<usize> {
        &self.matching
    }

    pub fn is_match(&self, index: usize) -> bool {
        self.matching.contains(&index)
    }

    pub fn with_phase(&self, phase: f64) -> Result<Self> {
        Self::new(self.n, self.matching.iter().copied(), phase)
    }

    /// The non-matching inputs with the phase negated. `None` when the
    /// complement is empty (k = N).
    pub fn complement(&self) -> Option<Self> {
        let rest: Vec<usize> = (0..self.dim()).filter(|i| !self.is_match(*i)).collect();
        Self::new(self.n, rest, -self.phase).ok()
    }

    pub fn bitstring(&self, index: usize) -> String {
        format!("{:0width$b}", index, width = self.n)
    }

    /// Matching inputs joined with `+`, e.g. `00+01`.
    pub fn label(&self) -> String {
        self.matching.iter().map(|i| self.bitstring(*i)).collect::<Vec<_>>().join("+")
    }

    /// Equal superposition of the matching basis states.
    pub fn target_state(&self) -> StateVector {
        let w = 1.0 / (self.k() as f64).sqrt();
        let amps = (0..self.dim())
            .map(|i| if self.is_match(i) { C64::new(w, 0.0) } else { C64::new(0.0, 0.0) })
            .collect();
        StateVector::new(amps).expect("equal superposition is normalized")
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// All oracles on `n` qubits with exactly `k` matching inputs, in
/// lexicographic order of their index sets.
pub fn all_oracles(n: usize, k: usize, phase: f64) -> Result<Vec<OracleSpec>> {
    fn rec(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i + 1, dim, k, cur, out);
            cur.pop();
        }
    }
    let dim = 1usize << n;
    if k == 0 || k > dim {
        return Err(Error::InvalidOracle(format!("k = {k} outside 1..={dim}")));
    }
    let mut sets = Vec::new();
    rec(0, dim, k, &mut Vec::new(), &mut sets);
    sets.into_iter().map(|s| OracleSpec::new(n, s, phase)).collect()
}

/// Recursion depth, bounded by a cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecursionOrder {
    r: u32,
}

impl RecursionOrder {
    pub fn new(r: u32) -> Result<Self> {
        Self::with_max(r, DEFAULT_MAX_ORDER)
    }

    pub fn with_max(r: u32, max: u32) -> Result<Self> {
        if r > max {
            return Err(Error::DepthExceeded { requested: r, max });
        }
        Ok(RecursionOrder { r })
    }

    pub fn get(self) -> u32 {
        self.r
    }

    /// The next order down, if any.
    pub fn prev(self) -> Option<Self> {
        self.r.checked_sub(1).map(|r| RecursionOrder { r })
    }
}

impl fmt::Display for RecursionOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)
    }
}

/// Diagonal unitary: `e^{iφ}` on matching inputs, 1 elsewhere.
pub fn phase_oracle(spec: &OracleSpec) -> UnitaryMatrix {
    let phases: Vec<f64> =
        (0..spec.dim()).map(|i| if spec.is_match(i) { spec.phase() } else { 0.0 }).collect();
    UnitaryMatrix::diagonal_phases(&phases).expect("phases give unit-modulus entries")
}

/// Single-qubit 90° rotation about y: `[[c, -s], [s, c]]`, c = s = 1/√2.
pub fn ry90() -> UnitaryMatrix {
    let c = C64::new(FRAC_1_SQRT_2, 0.0);
    UnitaryMatrix::new(2, vec![c, -c, c, c]).expect("rotation is unitary")
}

/// n-fold tensor power of the 90°y rotation.
pub fn pseudo_hadamard(n: usize) -> UnitaryMatrix {
    assert!(n >= 1, "pseudo-Hadamard needs at least one qubit");
    let u = ry90();
    (1..n).fold(u.clone(), |acc, _| acc.kron(&u))
}

fn check_pair(oracle: &OracleSpec, origin: &OracleSpec) -> Result<()> {
    if oracle.num_qubits() != origin.num_qubits() {
        return Err(Error::DimensionMismatch { expected: oracle.dim(), found: origin.dim() });
    }
    if oracle.phase() != origin.phase() {
        return Err(Error::PhaseMismatch { oracle: oracle.phase(), origin: origin.phase() });
    }
    if origin.matching().iter().copied().ne([0]) {
        return Err(Error::InvalidOracle(format!(
            "origin oracle must match only the all-zeros input, got {{{}}}",
            origin.label()
        )));
    }
    Ok(())
}

/// The search operator `V_r`, built by the exact recursion.
pub fn recursive_operator(
    order: RecursionOrder,
    oracle: &OracleSpec,
    origin: &OracleSpec,
) -> Result<UnitaryMatrix> {
    check_pair(oracle, origin)?;
    let rf = phase_oracle(oracle);
    let r0 = phase_oracle(origin);
    let mut v = pseudo_hadamard(oracle.num_qubits());
    for _ in 0..order.get() {
        let v_dag = v.adjoint();
        v = &(&(&(&v * &r0) * &v_dag) * &rf) * &v;
    }
    Ok(v)
}

/// `Σ_{x ∈ matching} |⟨x|V|0…0⟩|²`.
pub fn success_probability(v: &UnitaryMatrix, oracle: &OracleSpec) -> Result<f64> {
    if v.dim() != oracle.dim() {
        return Err(Error::DimensionMismatch { expected: oracle.dim(), found: v.dim() });
    }
    Ok(oracle.matching().iter().map(|&x| v.get(x, 0).norm_sqr()).sum())
}

/// `|⟨t|V|0…0⟩|²` for the equal-superposition target `|t⟩`.
pub fn target_projection(v: &UnitaryMatrix, oracle: &OracleSpec) -> Result<f64> {
    let out = v.apply(&StateVector::zero(oracle.num_qubits()))?;
    Ok(oracle.target_state().inner(&out)?.norm_sqr())
}

/// Success probability of the ideal algorithm at order `r`, cross-checked
/// against the projection onto the equal-superposition target.
pub fn ideal_success_probability(order: RecursionOrder, oracle: &OracleSpec) -> Result<f64> {
    let origin = OracleSpec::origin(oracle.num_qubits(), oracle.phase())?;
    let v = recursive_operator(order, oracle, &origin)?;
    let p = success_probability(&v, oracle)?;
    let projected = target_projection(&v, oracle)?;
    if (p - projected).abs() > ALGEBRA_TOL {
        return Err(Error::Invariant(format!(
            "success probability {p} differs from target projection {projected} \
             (oracle {oracle}, r = {order})"
        )));
    }
    Ok(p)
}

/// `1 − (1 − k/2ⁿ)^{3^r}`.
pub fn closed_form_success(r: RecursionOrder, k: usize, n: usize) -> f64 {
    let dim = 1usize << n;
    assert!((1..=dim).contains(&k), "k = {k} outside 1..={dim}");
    // 1 − k/N is exact in binary floating point; cube r times.
    let mut miss = 1.0 - k as f64 / dim as f64;
    for _ in 0..r.get() {
        miss = miss * miss * miss;
    }
    1.0 - miss
}

/// Oracle queries used by `V_r`: `(3^r − 1)/2`.
pub fn query_count(r: RecursionOrder) -> u64 {
    (3u64.pow(r.get()) - 1) / 2
}

/// Gate alphabet of the unrolled recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gate {
    U,
    UDagger,
    Rf,
    RfDagger,
    R0,
    R0Dagger,
}

impl Gate {
    pub fn adjoint(self) -> Gate {
        match self {
            Gate::U => Gate::UDagger,
            Gate::UDagger => Gate::U,
            Gate::Rf => Gate::RfDagger,
            Gate::RfDagger => Gate::Rf,
            Gate::R0 => Gate::R0Dagger,
            Gate::R0Dagger => Gate::R0,
        }
    }

    pub fn is_oracle(self) -> bool {
        matches!(self, Gate::Rf | Gate::RfDagger)
    }

    pub fn is_origin(self) -> bool {
        matches!(self, Gate::R0 | Gate::R0Dagger)
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::U => "U",
            Gate::UDagger => "U+",
            Gate::Rf => "Rf",
            Gate::RfDagger => "Rf+",
            Gate::R0 => "R0",
            Gate::R0Dagger => "R0+",
        }
    }

    pub fn parse(s: &str) -> Option<Gate> {
        [Gate::U, Gate::UDagger, Gate::Rf, Gate::RfDagger, Gate::R0, Gate::R0Dagger]
            .into_iter()
            .find(|g| g.name() == s)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unrolls `V_r` into gates in application order: the first element acts on
/// the register first, so `V_r` is the product of the list read last-to-first.
pub fn expand_gate_list(order: RecursionOrder, oracle: &OracleSpec) -> Result<Vec<Gate>> {
    // Validates the oracle in the same way as `recursive_operator`.
    let origin = OracleSpec::origin(oracle.num_qubits(), oracle.phase())?;
    check_pair(oracle, &origin)?;

    let mut v = vec![Gate::U];
    for _ in 0..order.get() {
        let v_dag: Vec<Gate> = v.iter().rev().map(|g| g.adjoint()).collect();
        let mut next = Vec::with_capacity(3 * v.len() + 2);
        // V R0 V† Rf V applied to a state: V first, then Rf, V†, R0, V.
        next.extend_from_slice(&v);
        next.push(Gate::Rf);
        next.extend_from_slice(&v_dag);
        next.push(Gate::R0);
        next.extend_from_slice(&v);
        v = next;
    }
    Ok(v)
}

/// Matrices for each gate symbol of one search problem.
#[derive(Clone, Debug)]
pub struct GateMatrices {
    u: UnitaryMatrix,
    rf: UnitaryMatrix,
    r0: UnitaryMatrix,
}

impl GateMatrices {
    pub fn ideal(oracle: &OracleSpec) -> Result<Self> {
        let origin = OracleSpec::origin(oracle.num_qubits(), oracle.phase())?;
        check_pair(oracle, &origin)?;
        Ok(GateMatrices {
            u: pseudo_hadamard(oracle.num_qubits()),
            rf: phase_oracle(oracle),
            r0: phase_oracle(&origin),
        })
    }

    pub fn matrix(&self, gate: Gate) -> UnitaryMatrix {
        match gate {
            Gate::U => self.u.clone(),
            Gate::UDagger => self.u.adjoint(),
            Gate::Rf => self.rf.clone(),
            Gate::RfDagger => self.rf.adjoint(),
            Gate::R0 => self.r0.clone(),
            Gate::R0Dagger => self.r0.adjoint(),
        }
    }

    /// Product of a gate list in application order.
    pub fn product(&self, gates: &[Gate]) -> UnitaryMatrix {
        gates.iter().fold(UnitaryMatrix::identity(self.u.dim()), |acc, g| &self.matrix(*g) * &acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::equal_up_to_global_phase;
    use proptest::prelude::*;

    const PHI: f64 = FIXED_POINT_PHASE;

    fn order(r: u32) -> RecursionOrder {
        RecursionOrder::new(r).unwrap()
    }

    fn oracle(bits: &[&str], phase: f64) -> OracleSpec {
        OracleSpec::from_bitstrings(bits, phase).unwrap()
    }

    fn p_ideal(r: u32, o: &OracleSpec) -> f64 {
        ideal_success_probability(order(r), o).unwrap()
    }

    #[test]
    fn oracle_validation() {
        assert!(OracleSpec::new(2, Vec::<usize>::new(), PHI).is_err());
        assert!(OracleSpec::new(2, [0, 0], PHI).is_err());
        assert!(OracleSpec::new(2, [4], PHI).is_err());
        assert!(OracleSpec::new(2, [1], 2.0 * PI).is_err());
        assert!(OracleSpec::from_bitstrings(&["01", "1"], PHI).is_err());
        assert!(OracleSpec::from_bitstrings(&["0a"], PHI).is_err());
        assert_eq!(oracle(&["10", "01"], PHI).label(), "01+10");
        assert_eq!(oracle(&["10"], PHI).matching().iter().copied().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn all_oracles_counts() {
        assert_eq!(all_oracles(2, 1, PHI).unwrap().len(), 4);
        assert_eq!(all_oracles(2, 2, PHI).unwrap().len(), 6);
        assert_eq!(all_oracles(3, 3, PHI).unwrap().len(), 56);
        assert!(all_oracles(2, 5, PHI).is_err());
    }

    #[test]
    fn phase_oracle_examples() {
        let z = phase_oracle(&oracle(&["11"], PI));
        let expected = UnitaryMatrix::diagonal_phases(&[0.0, 0.0, 0.0, PI]).unwrap();
        assert!(z.max_abs_diff(&expected) < ALGEBRA_TOL);

        let all = phase_oracle(&oracle(&["00", "01", "10", "11"], PHI));
        assert!(equal_up_to_global_phase(&all, &UnitaryMatrix::identity(4), ALGEBRA_TOL));

        let r0 = phase_oracle(&OracleSpec::origin(2, PHI).unwrap());
        assert_eq!(phase_oracle(&oracle(&["00"], PHI)), r0);
        assert!((r0.get(0, 0) - C64::from_polar(1.0, PHI)).norm() < ALGEBRA_TOL);
    }

    #[test]
    fn pseudo_hadamard_spreads_evenly() {
        let u1 = pseudo_hadamard(1);
        assert!((u1.get(0, 0).norm_sqr() - 0.5).abs() < ALGEBRA_TOL);
        assert!((u1.get(1, 0).norm_sqr() - 0.5).abs() < ALGEBRA_TOL);
        let u2 = pseudo_hadamard(2);
        for s in 0..4 {
            assert!((u2.get(s, 0).norm_sqr() - 0.25).abs() < ALGEBRA_TOL);
        }
        assert!(u2.unitarity_defect() < ALGEBRA_TOL);
        assert!((&u2 * &u2.adjoint()).max_abs_diff(&UnitaryMatrix::identity(4)) < ALGEBRA_TOL);
    }

    #[test]
    fn recursion_base_is_pseudo_hadamard() {
        let o = oracle(&["01"], PHI);
        let origin = OracleSpec::origin(2, PHI).unwrap();
        assert_eq!(recursive_operator(order(0), &o, &origin).unwrap(), pseudo_hadamard(2));
    }

    #[test]
    fn table_values_single_match() {
        for o in all_oracles(2, 1, PHI).unwrap() {
            assert!((p_ideal(1, &o) - 0.578125).abs() < ALGEBRA_TOL);
            assert!((p_ideal(3, &o) - 0.9996).abs() < 5e-5);
        }
    }

    #[test]
    fn table_values_two_matches() {
        let o = oracle(&["00", "01"], PHI);
        let u = pseudo_hadamard(2);
        assert!((success_probability(&u, &o).unwrap() - 0.5).abs() < ALGEBRA_TOL);
        assert!((p_ideal(2, &o) - 0.9980).abs() < 5e-5);
    }

    #[test]
    fn identity_success_on_origin() {
        let o = oracle(&["00"], PHI);
        assert_eq!(success_probability(&UnitaryMatrix::identity(4), &o).unwrap(), 1.0);
        assert!(success_probability(&UnitaryMatrix::identity(2), &o).is_err());
    }

    #[test]
    fn recursion_rejects_bad_inputs() {
        let o = oracle(&["01"], PHI);
        let mixed = OracleSpec::origin(2, -PHI).unwrap();
        assert!(matches!(recursive_operator(order(1), &o, &mixed), Err(Error::PhaseMismatch { .. })));
        let not_origin = oracle(&["01"], PHI);
        assert!(recursive_operator(order(1), &o, &not_origin).is_err());
        assert_eq!(RecursionOrder::new(9).unwrap_err(), Error::DepthExceeded { requested: 9, max: 8 });
        assert!(RecursionOrder::with_max(9, 10).is_ok());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_success(order(1), 1, 2), 37.0 / 64.0);
        for k in 1..=4 {
            assert_eq!(closed_form_success(order(0), k, 2), k as f64 / 4.0);
        }
        let expected = 1.0 - 0.25f64.powi(9);
        assert_eq!(closed_form_success(order(2), 3, 2), expected);
        let sim = p_ideal(2, &oracle(&["00", "01", "11"], PHI));
        assert!((sim - expected).abs() < ALGEBRA_TOL);
    }

    #[test]
    fn query_counts() {
        let q: Vec<u64> = (0..=4).map(|r| query_count(order(r))).collect();
        assert_eq!(q, vec![0, 1, 4, 13, 40]);
        assert_eq!(query_count(order(8)), 3280);
    }

    #[test]
    fn gate_list_examples() {
        let o = oracle(&["10"], PHI);
        assert_eq!(expand_gate_list(order(0), &o).unwrap(), vec![Gate::U]);
        assert_eq!(
            expand_gate_list(order(1), &o).unwrap(),
            vec![Gate::U, Gate::Rf, Gate::UDagger, Gate::R0, Gate::U]
        );
        let g3 = expand_gate_list(order(3), &o).unwrap();
        assert_eq!(g3.iter().filter(|g| g.is_oracle()).count(), 13);
        assert_eq!(g3.iter().filter(|g| g.is_origin()).count(), 13);
        assert_eq!(g3.len(), 27 + 26);
    }

    #[test]
    fn gate_list_product_matches_recursion() {
        for o in all_oracles(2, 1, PHI).unwrap().iter().chain(&all_oracles(2, 2, PHI).unwrap()) {
            let mats = GateMatrices::ideal(o).unwrap();
            let origin = OracleSpec::origin(2, PHI).unwrap();
            for r in 0..=4 {
                let gates = expand_gate_list(order(r), o).unwrap();
                let v = recursive_operator(order(r), o, &origin).unwrap();
                assert!(mats.product(&gates).max_abs_diff(&v) < ALGEBRA_TOL, "{o} r={r}");
                let q = query_count(order(r)) as usize;
                assert_eq!(gates.iter().filter(|g| g.is_oracle()).count(), q);
                assert_eq!(gates.iter().filter(|g| g.is_origin()).count(), q);
            }
        }
    }

    #[test]
    fn classic_grover_single_step() {
        let o = oracle(&["10"], PI);
        assert!((p_ideal(1, &o) - 1.0).abs() < ALGEBRA_TOL);
    }

    #[test]
    fn complement_with_negated_phase() {
        for phase in [PHI, PI] {
            for o in all_oracles(2, 1, phase).unwrap() {
                let c = o.complement().unwrap();
                assert_eq!(c.k(), 3);
                assert!(equal_up_to_global_phase(&phase_oracle(&o), &phase_oracle(&c), ALGEBRA_TOL));
            }
        }
        assert!(oracle(&["00", "01", "10", "11"], PHI).complement().is_none());
    }

    #[test]
    fn three_qubit_spot_checks() {
        for bits in [vec!["101"], vec!["000", "111"], vec!["001", "010", "100"]] {
            let o = oracle(&bits, PHI);
            for r in 0..=3 {
                let cf = closed_form_success(order(r), o.k(), 3);
                assert!((p_ideal(r, &o) - cf).abs() < ALGEBRA_TOL, "{o} r={r}");
            }
        }
    }

    proptest! {
        #[test]
        fn cube_law_and_monotonicity(n in 1usize..=3, seed in any::<u64>(), r in 0u32..4) {
            let dim = 1usize << n;
            // Pick a nonempty, proper subset from the seed bits.
            let mut set: Vec<usize> = (0..dim).filter(|i| seed >> i & 1 == 1).collect();
            if set.is_empty() { set.push((seed as usize >> 8) % dim); }
            prop_assume!(set.len() < dim);
            let o = OracleSpec::new(n, set, PHI).unwrap();
            let p0 = p_ideal(r, &o);
            let p1 = p_ideal(r + 1, &o);
            prop_assert!(((1.0 - p1) - (1.0 - p0).powi(3)).abs() < ALGEBRA_TOL);
            prop_assert!(p1 >= p0 - ALGEBRA_TOL);
            let cf = closed_form_success(order(r), o.k(), n);
            prop_assert!((p0 - cf).abs() < ALGEBRA_TOL);
        }

        #[test]
        fn conjugate_phase_convention_also_works(idx in 0usize..4, r in 0u32..4) {
            let o = OracleSpec::new(2, [idx], -PHI).unwrap();
            let cf = closed_form_success(order(r), 1, 2);
            prop_assert!((p_ideal(r, &o) - cf).abs() < ALGEBRA_TOL);
        }
    }
}
