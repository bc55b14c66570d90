//! Dense complex linear algebra for small registers.
//!
//! Basis states are indexed with qubit 1 as the most significant bit, so for
//! two qubits `|10⟩` has index 2.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance for algebraic identities between exactly constructed matrices.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance for products of many pulses.
pub const SEQUENCE_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn qubits_for(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Pure state of an n-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps `amps`, which must have power-of-two length and unit norm.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        qubits_for(amps.len())?;
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(StateVector { amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        qubits_for(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        Ok(StateVector { amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    /// Computational basis state `|index⟩` of `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let dim = 1usize << num_qubits;
        assert!(index < dim, "basis index {index} out of range for {num_qubits} qubits");
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        StateVector { amps }
    }

    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self ⊗ other`, with `self` on the more significant qubits.
    pub fn kron(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector { amps }
    }
}

/// Square unitary matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl UnitaryMatrix {
    /// Checked constructor; `entries` is row-major and must be unitary within
    /// [`SEQUENCE_TOL`].
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        qubits_for(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        let m = UnitaryMatrix { dim, data: entries };
        let defect = m.unitarity_defect();
        if defect > SEQUENCE_TOL {
            return Err(Error::NotUnitary { defect });
        }
        Ok(m)
    }

    /// Builds from a row-major array without the unitarity check. Only for
    /// products and closed-form constructions that are unitary by definition.
    pub(crate) fn from_raw(dim: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        UnitaryMatrix { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        UnitaryMatrix { dim, data }
    }

    /// Diagonal unitary; every entry must have unit modulus.
    pub fn diagonal(entries: &[C64]) -> Result<Self> {
        let dim = entries.len();
        qubits_for(dim)?;
        let defect = entries.iter().map(|e| (e.norm() - 1.0).abs()).fold(0.0, f64::max);
        if defect > ALGEBRA_TOL {
            return Err(Error::NotUnitary { defect });
        }
        let mut data = vec![ZERO; dim * dim];
        for (i, e) in entries.iter().enumerate() {
            data[i * dim + i] = *e;
        }
        Ok(UnitaryMatrix { dim, data })
    }

    /// Diagonal unitary `diag(e^{iθ_0}, e^{iθ_1}, ...)`.
    pub fn diagonal_phases(phases: &[f64]) -> Result<Self> {
        let entries: Vec<C64> = phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
        Self::diagonal(&entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        UnitaryMatrix { dim: n, data }
    }

    /// Matrix product `self · rhs`.
    pub fn try_mul(&self, rhs: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rhs.dim });
        }
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                for (out, b) in data[r * n..(r + 1) * n].iter_mut().zip(row) {
                    *out += a * b;
                }
            }
        }
        Ok(UnitaryMatrix { dim: n, data })
    }

    /// Kronecker product with `self` acting on the more significant qubits.
    pub fn kron(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut data = vec![ZERO; n * n];
        for ar in 0..na {
            for ac in 0..na {
                let a = self.data[ar * na + ac];
                for br in 0..nb {
                    for bc in 0..nb {
                        data[(ar * nb + br) * n + ac * nb + bc] = a * other.data[br * nb + bc];
                    }
                }
            }
        }
        UnitaryMatrix { dim: n, data }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: psi.dim() });
        }
        let n = self.dim;
        let amps = (0..n)
            .map(|r| self.data[r * n..(r + 1) * n].iter().zip(psi.amplitudes()).map(|(a, b)| a * b).sum())
            .collect();
        Ok(StateVector { amps })
    }

    /// Max entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.data[k * n + i].conj() * self.data[k * n + j];
                }
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    /// Multiplies every entry by the unit-modulus scalar `c`.
    pub fn scaled(&self, c: C64) -> UnitaryMatrix {
        UnitaryMatrix { dim: self.dim, data: self.data.iter().map(|e| e * c).collect() }
    }

    /// Max entrywise |self - other|.
    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|r| (0..n).all(|c| r == c || self.data[r * n + c].norm() <= tol))
    }
}

impl Mul for &UnitaryMatrix {
    type Output = UnitaryMatrix;

    /// # Panics
    ///
    /// Panics if the dimensions differ; use [`UnitaryMatrix::try_mul`] for a
    /// fallible product.
    fn mul(self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        self.try_mul(rhs).expect("unitary dimensions must match")
    }
}

impl fmt::Display for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn tensor_product(a: &UnitaryMatrix, b: &UnitaryMatrix) -> UnitaryMatrix {
    a.kron(b)
}

pub fn apply(u: &UnitaryMatrix, psi: &StateVector) -> Result<StateVector> {
    u.apply(psi)
}

/// Deviation `‖U − cV‖_max` with the unit-modulus `c` taken from the
/// largest-magnitude entry of `V`. `None` when the dimensions differ or `V`
/// vanishes.
pub fn global_phase_distance(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Option<f64> {
    if u.dim() != v.dim() {
        return None;
    }
    let (idx, pivot) =
        v.entries()
            .iter()
            .enumerate()
            .fold((0, 0.0), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best });
    if pivot == 0.0 {
        return None;
    }
    let ratio = u.entries()[idx] / v.entries()[idx];
    let c = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { ONE };
    Some(u.entries().iter().zip(v.entries()).map(|(a, b)| (a - c * b).norm()).fold(0.0, f64::max))
}

/// True when `U = cV` for some unit-modulus `c`, within `tol` entrywise.
pub fn equal_up_to_global_phase(u: &UnitaryMatrix, v: &UnitaryMatrix, tol: f64) -> bool {
    global_phase_distance(u, v).is_some_and(|d| d <= tol)
}

/// Mixed (or pure) state of an n-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    /// Checked constructor: Hermitian and unit trace within 1e-12, no
    /// eigenvalue below -1e-10.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        qubits_for(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        let rho = DensityMatrix { dim, data: entries };
        rho.validate()?;
        Ok(rho)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        for r in 0..n {
            for c in r..n {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                if d > ALGEBRA_TOL {
                    return Err(Error::InvalidDensity(format!(
                        "not Hermitian at ({r}, {c}): deviation {d:e}"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr - ONE).norm() > ALGEBRA_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        if !self.is_psd_within(1e-10) {
            return Err(Error::InvalidDensity("eigenvalue below -1e-10".to_string()));
        }
        Ok(())
    }

    /// Cholesky factorization of `ρ + shift·I`; succeeds iff the smallest
    /// eigenvalue is above `-shift` (up to rounding).
    fn is_psd_within(&self, shift: f64) -> bool {
        let n = self.dim;
        let mut a: Vec<C64> = self.data.clone();
        for i in 0..n {
            a[i * n + i] += shift;
        }
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut d = a[j * n + j].re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d <= 0.0 {
                return false;
            }
            let djj = d.sqrt();
            l[j * n + j] = C64::new(djj, 0.0);
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / djj;
            }
        }
        true
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<C64>) -> Self {
        DensityMatrix { dim, data }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        let n = a.len();
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(a[r] * a[c].conj());
            }
        }
        DensityMatrix { dim: n, data }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        qubits_for(dim)?;
        let w = 1.0 / dim as f64;
        Self::from_populations(&vec![w; dim])
    }

    /// Diagonal density matrix with the given populations.
    pub fn from_populations(pops: &[f64]) -> Result<Self> {
        let n = pops.len();
        let mut data = vec![ZERO; n * n];
        for (i, p) in pops.iter().enumerate() {
            data[i * n + i] = C64::new(*p, 0.0);
        }
        Self::new(n, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Diagonal entries as real populations.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|r| (0..n).all(|c| r == c || self.get(r, c).norm() <= tol))
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &UnitaryMatrix) -> Result<DensityMatrix> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: u.dim() });
        }
        let n = self.dim;
        let mut tmp = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                tmp[r * n + c] = (0..n).map(|k| u.get(r, k) * self.get(k, c)).sum();
            }
        }
        let mut data = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                data[r * n + c] = (0..n).map(|k| tmp[r * n + k] * u.get(c, k).conj()).sum();
            }
        }
        Ok(DensityMatrix { dim: n, data })
    }

    /// Convex combination `w·self + (1-w)·other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidDensity(format!("mixing weight {w} outside [0, 1]")));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a * w + b * (1.0 - w)).collect();
        Ok(DensityMatrix { dim: self.dim, data })
    }
}

pub fn pure_density(psi: &StateVector) -> DensityMatrix {
    DensityMatrix::pure(psi)
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn x() -> UnitaryMatrix {
        UnitaryMatrix::new(2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    fn angle() -> impl Strategy<Value = f64> {
        -PI..PI
    }

    #[test]
    fn identity_kron_identity() {
        let i2 = UnitaryMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2), UnitaryMatrix::identity(4));
    }

    #[test]
    fn x_kron_x_flips_both() {
        let xx = tensor_product(&x(), &x());
        let out = apply(&xx, &StateVector::zero(2)).unwrap();
        assert_eq!(out, StateVector::basis(2, 3));
    }

    #[test]
    fn kron_puts_first_factor_on_msb() {
        let xi = x().kron(&UnitaryMatrix::identity(2));
        let out = xi.apply(&StateVector::zero(2)).unwrap();
        assert_eq!(out, StateVector::basis(2, 2));
    }

    #[test]
    fn phase_flip_on_11() {
        let z = UnitaryMatrix::diagonal_phases(&[0.0, 0.0, 0.0, PI]).unwrap();
        let out = z.apply(&StateVector::basis(2, 3)).unwrap();
        assert!((out.amplitude(3) + ONE).norm() < ALGEBRA_TOL);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let err = UnitaryMatrix::identity(4).apply(&StateVector::zero(1)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 4, found: 2 });
    }

    #[test]
    fn constructor_rejects_non_unitary() {
        let m = UnitaryMatrix::new(2, vec![ONE, ONE, ZERO, ONE]);
        assert!(matches!(m, Err(Error::NotUnitary { .. })));
        assert!(matches!(UnitaryMatrix::new(3, vec![ONE; 9]), Err(Error::NotPowerOfTwo(3))));
    }

    #[test]
    fn state_constructor_checks_norm() {
        assert!(StateVector::new(vec![ONE, ONE]).is_err());
        assert!(StateVector::new(vec![ONE, ZERO, ZERO]).is_err());
        let s = StateVector::normalized(vec![ONE, ONE]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < ALGEBRA_TOL);
    }

    #[test]
    fn global_phase_examples() {
        let u = random_two_qubit(&[0.3, 1.1, -0.4, 2.0, 0.7, -1.3, 0.2, 0.9, -2.2, 1.4, 0.5]);
        let v = u.scaled(C64::from_polar(1.0, PI / 7.0));
        assert!(equal_up_to_global_phase(&u, &v, 1e-10));
        assert!(!equal_up_to_global_phase(&UnitaryMatrix::identity(2), &x(), 0.99));
    }

    #[test]
    fn conjugate_phase_patterns_are_not_equivalent() {
        // diag(1,1,1,w) against diag(w,w,w,1): equal only if w^2 = 1.
        let w = C64::from_polar(1.0, PI / 3.0);
        let a = UnitaryMatrix::diagonal(&[ONE, ONE, ONE, w]).unwrap();
        let b = UnitaryMatrix::diagonal(&[w, w, w, ONE]).unwrap();
        assert!(!equal_up_to_global_phase(&a, &b, 1e-10));
        // Scan global phases: the best achievable max deviation is |1 - w^2|/2-ish,
        // never below 0.5 here.
        let best = (0..36000)
            .map(|i| {
                let c = C64::from_polar(1.0, 2.0 * PI * i as f64 / 36000.0);
                a.max_abs_diff(&b.scaled(c))
            })
            .fold(f64::INFINITY, f64::min);
        assert!(best > 0.5, "best = {best}");
    }

    #[test]
    fn zero_matrix_is_never_equivalent() {
        let zero = UnitaryMatrix::from_raw(2, vec![ZERO; 4]);
        assert!(!equal_up_to_global_phase(&UnitaryMatrix::identity(2), &zero, 1.0));
    }

    #[test]
    fn pure_density_examples() {
        let rho = pure_density(&StateVector::zero(2));
        assert_eq!(rho.get(0, 0), ONE);
        assert_eq!(rho.entries().iter().filter(|z| **z != ZERO).count(), 1);

        let psi = StateVector::normalized(vec![ONE, ONE, ZERO, ZERO]).unwrap();
        let rho = pure_density(&psi);
        for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!((rho.get(r, c) - C64::new(0.5, 0.0)).norm() < ALGEBRA_TOL);
        }
        assert!(DensityMatrix::new(4, rho.entries().to_vec()).is_ok());
    }

    #[test]
    fn density_validation() {
        let bad_trace = DensityMatrix::from_populations(&[0.5, 0.6]);
        assert!(matches!(bad_trace, Err(Error::InvalidDensity(_))));
        let negative = DensityMatrix::from_populations(&[1.1, -0.1]);
        assert!(matches!(negative, Err(Error::InvalidDensity(_))));
        let non_herm = DensityMatrix::new(2, vec![C64::new(0.5, 0.0), ONE, ZERO, C64::new(0.5, 0.0)]);
        assert!(matches!(non_herm, Err(Error::InvalidDensity(_))));
        assert!(DensityMatrix::maximally_mixed(4).is_ok());
    }

    proptest! {
        #[test]
        fn kron_acts_factorwise(p in proptest::array::uniform8(angle()), a in 0usize..2, b in 0usize..2) {
            let ua = su2(p[0], p[1], p[2], p[3]);
            let ub = su2(p[4], p[5], p[6], p[7]);
            let lhs = ua.kron(&ub).apply(&StateVector::basis(1, a).kron(&StateVector::basis(1, b))).unwrap();
            let rhs = ua.apply(&StateVector::basis(1, a)).unwrap().kron(&ub.apply(&StateVector::basis(1, b)).unwrap());
            for (l, r) in lhs.amplitudes().iter().zip(rhs.amplitudes()) {
                prop_assert!((l - r).norm() < ALGEBRA_TOL);
            }
        }

        #[test]
        fn products_stay_unitary_and_preserve_norm(p in proptest::array::uniform11(angle()), s in proptest::array::uniform8(angle())) {
            let u = random_two_qubit(&p);
            prop_assert!(u.unitarity_defect() < ALGEBRA_TOL);
            let amps: Vec<C64> = (0..4).map(|i| C64::new(s[2 * i], s[2 * i + 1])).collect();
            let psi = StateVector::normalized(amps).unwrap();
            let out = u.apply(&psi).unwrap();
            prop_assert!((out.norm_sqr() - 1.0).abs() < ALGEBRA_TOL);
            let back = (&u.adjoint() * &u).apply(&psi).unwrap();
            for (l, r) in back.amplitudes().iter().zip(psi.amplitudes()) {
                prop_assert!((l - r).norm() < ALGEBRA_TOL);
            }
        }

        #[test]
        fn global_phase_equivalence_properties(p in proptest::array::uniform11(angle()), q in proptest::array::uniform11(angle()), t1 in angle(), t2 in angle()) {
            let u = random_two_qubit(&p);
            let v = random_two_qubit(&q);
            prop_assert!(equal_up_to_global_phase(&u, &u, 1e-12));
            prop_assert_eq!(equal_up_to_global_phase(&u, &v, 1e-6), equal_up_to_global_phase(&v, &u, 1e-6));
            let (c1, c2) = (C64::from_polar(1.0, t1), C64::from_polar(1.0, t2));
            prop_assert!(equal_up_to_global_phase(&u.scaled(c1), &u.scaled(c2), 1e-12));
            prop_assert_eq!(
                equal_up_to_global_phase(&u.scaled(c1), &v.scaled(c2), 1e-6),
                equal_up_to_global_phase(&u, &v, 1e-6)
            );
        }

        #[test]
        fn pure_density_is_idempotent(s in proptest::array::uniform8(-1.0f64..1.0)) {
            let amps: Vec<C64> = (0..4).map(|i| C64::new(s[2 * i], s[2 * i + 1])).collect();
            prop_assume!(amps.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-3);
            let rho = pure_density(&StateVector::normalized(amps).unwrap());
            prop_assert!((rho.trace() - ONE).norm() < ALGEBRA_TOL);
            let n = rho.dim();
            for r in 0..n {
                for c in 0..n {
                    let sq: C64 = (0..n).map(|k| rho.get(r, k) * rho.get(k, c)).sum();
                    prop_assert!((sq - rho.get(r, c)).norm() < ALGEBRA_TOL);
                }
            }
        }
    }
}
