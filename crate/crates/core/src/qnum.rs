//! Dense complex linear algebra for few-qubit systems.
//!
//! Basis states are labelled `|q0 q1 … q(n-1)⟩` with qubit 0 leftmost, and
//! qubit 0 is the most significant bit of the basis index.

use std::fmt;

use nalgebra::{DMatrix, Matrix2};
pub use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest register a [`PureState`] may address.
pub const MAX_QUBITS: usize = 24;

/// Tolerance for algebraic identities.
pub const EPS_ALGEBRAIC: f64 = 1e-12;
/// Eigenvalue floor used by the positive-semidefinite check.
pub const PSD_FLOOR: f64 = -1e-10;

const ZERO_NORM: f64 = 1e-15;

/// Wire number inside a register; 0 is the leftmost qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QubitIndex(pub usize);

impl QubitIndex {
    pub fn checked(self, n_qubits: usize) -> Result<usize> {
        if self.0 < n_qubits {
            Ok(self.0)
        } else {
            Err(Error::IndexOutOfRange { index: self.0, n_qubits })
        }
    }

    /// Bit shift of this wire inside a basis index.
    pub(crate) fn shift(self, n_qubits: usize) -> usize {
        n_qubits - 1 - self.0
    }
}

impl From<usize> for QubitIndex {
    fn from(i: usize) -> Self {
        QubitIndex(i)
    }
}

impl fmt::Display for QubitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unit-norm amplitude vector over `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl PureState {
    /// Builds a state from raw amplitudes, renormalizing to unit norm.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::CapacityExceeded { requested: n_qubits, max: MAX_QUBITS });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::ZeroVector);
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr < ZERO_NORM {
            return Err(Error::ZeroVector);
        }
        let scale = norm_sqr.sqrt().recip();
        Ok(PureState { n_qubits, amps: amps.into_iter().map(|a| a * scale).collect() })
    }

    /// Real amplitudes, renormalized.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index⟩` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::CapacityExceeded { requested: n_qubits, max: MAX_QUBITS });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(PureState { n_qubits, amps })
    }

    /// Internal constructor for amplitudes produced by unitary maps.
    pub(crate) fn from_unitary_image(n_qubits: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        PureState { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Largest entrywise deviation between the projectors of two states.
    /// Insensitive to global phase.
    pub fn projector_distance(&self, other: &PureState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let a = self.amps[i] * self.amps[j].conj();
                let b = other.amps[i] * other.amps[j].conj();
                worst = worst.max((a - b).norm());
            }
        }
        Ok(worst)
    }

    /// Reduced density matrix of one wire, computed straight from the amplitudes.
    pub fn reduced(&self, keep: QubitIndex) -> Result<DensityMatrix> {
        keep.checked(self.n_qubits)?;
        let shift = keep.shift(self.n_qubits);
        let bit = 1usize << shift;
        let mut m = Matrix2::<C64>::zeros();
        for idx in 0..self.dim() {
            if idx & bit != 0 {
                continue;
            }
            let a0 = self.amps[idx];
            let a1 = self.amps[idx | bit];
            m[(0, 0)] += a0 * a0.conj();
            m[(0, 1)] += a0 * a1.conj();
            m[(1, 0)] += a1 * a0.conj();
            m[(1, 1)] += a1 * a1.conj();
        }
        Ok(DensityMatrix::from_matrix_unchecked(1, DMatrix::from_iterator(2, 2, m.iter().cloned())))
    }

    /// Exchanges two wires.
    pub fn swap_wires(&self, a: QubitIndex, b: QubitIndex) -> Result<PureState> {
        let n = self.n_qubits;
        let sa = a.checked(n).map(|_| a.shift(n))?;
        let sb = b.checked(n).map(|_| b.shift(n))?;
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (idx, amp) in self.amps.iter().enumerate() {
            let ba = (idx >> sa) & 1;
            let bb = (idx >> sb) & 1;
            let mut j = idx & !(1 << sa) & !(1 << sb);
            j |= bb << sa;
            j |= ba << sb;
            out[j] = *amp;
        }
        Ok(PureState::from_unitary_image(n, out))
    }
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.amps.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let amps = Vec::<C64>::deserialize(deserializer)?;
        PureState::from_amplitudes(amps).map_err(serde::de::Error::custom)
    }
}

/// Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    m: DMatrix<C64>,
}

impl DensityMatrix {
    /// Wraps a matrix after checking every density-matrix invariant.
    pub fn from_matrix(n_qubits: usize, m: DMatrix<C64>) -> Result<Self> {
        let rho = DensityMatrix { n_qubits, m };
        rho.check_invariants()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(n_qubits: usize, m: DMatrix<C64>) -> Self {
        DensityMatrix { n_qubits, m }
    }

    /// Builds a real 2×2 matrix, checked.
    pub fn qubit_real(entries: [[f64; 2]; 2]) -> Result<Self> {
        let m = DMatrix::from_fn(2, 2, |i, j| C64::new(entries[i][j], 0.0));
        Self::from_matrix(1, m)
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        let m = DMatrix::from_diagonal_element(d, d, C64::new(1.0 / d as f64, 0.0));
        DensityMatrix { n_qubits, m }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.m - self.m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.m + self.m.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn check_invariants(&self) -> Result<()> {
        if self.m.nrows() != 1 << self.n_qubits || self.m.ncols() != self.m.nrows() {
            return Err(Error::DimensionMismatch { expected: 1 << self.n_qubits, found: self.m.nrows() });
        }
        if self.m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensity("non-finite entry".into()));
        }
        let herm = self.hermiticity_error();
        if herm > EPS_ALGEBRAIC {
            return Err(Error::InvalidDensity(format!("not Hermitian (error {herm:.3e})")));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > EPS_ALGEBRAIC {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let lmin = self.min_eigenvalue();
        if lmin < PSD_FLOOR {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {lmin:.3e}")));
        }
        Ok(())
    }

    /// Frobenius norm of the difference.
    pub fn frobenius_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok((&self.m - &other.m).norm())
    }

    /// Largest entrywise deviation.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok((&self.m - &other.m).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// `Σ wᵢ ρᵢ`; the caller is responsible for the weights summing to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
        let first = parts.first().ok_or(Error::ZeroVector)?.1;
        let mut m = DMatrix::<C64>::zeros(first.dim(), first.dim());
        for (w, rho) in parts {
            if rho.dim() != first.dim() {
                return Err(Error::DimensionMismatch { expected: first.dim(), found: rho.dim() });
            }
            m += rho.matrix() * C64::new(*w, 0.0);
        }
        Ok(DensityMatrix { n_qubits: first.n_qubits, m })
    }
}

/// The four Pauli operators, `σ0 = I`, `σ1 = X`, `σ2 = Y`, `σ3 = Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_index(i: usize) -> Result<Pauli> {
        match i {
            0 => Ok(Pauli::I),
            1 => Ok(Pauli::X),
            2 => Ok(Pauli::Y),
            3 => Ok(Pauli::Z),
            _ => Err(Error::InvalidPauli(i)),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// `σ2 = i(|1⟩⟨0| − |0⟩⟨1|)`.
    pub fn matrix(self) -> Matrix2<C64> {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => Matrix2::new(l, o, o, l),
            Pauli::X => Matrix2::new(o, l, l, o),
            Pauli::Y => Matrix2::new(o, -i, i, o),
            Pauli::Z => Matrix2::new(l, o, o, -l),
        }
    }
}

/// `α|0⟩ + β|1⟩`, renormalized.
pub fn make_qubit(alpha: C64, beta: C64) -> Result<PureState> {
    PureState::from_amplitudes(vec![alpha, beta])
}

/// `R(θ)|0⟩ = cos θ|0⟩ + sin θ|1⟩`.
pub fn equatorial_qubit(theta: f64) -> PureState {
    let (s, c) = theta.sin_cos();
    PureState::from_unitary_image(1, vec![C64::new(c, 0.0), C64::new(s, 0.0)])
}

/// `a ⊗ b`; `a` occupies the low-numbered wires.
pub fn tensor(a: &PureState, b: &PureState) -> Result<PureState> {
    let n = a.n_qubits + b.n_qubits;
    if n > MAX_QUBITS {
        return Err(Error::CapacityExceeded { requested: n, max: MAX_QUBITS });
    }
    let amps = a.amps.iter().flat_map(|x| b.amps.iter().map(move |y| x * y)).collect();
    Ok(PureState::from_unitary_image(n, amps))
}

/// `|ψ⟩⟨ψ|`.
pub fn density_of(psi: &PureState) -> DensityMatrix {
    let d = psi.dim();
    let m = DMatrix::from_fn(d, d, |i, j| psi.amps[i] * psi.amps[j].conj());
    DensityMatrix::from_matrix_unchecked(psi.n_qubits, m)
}

/// Traces out every wire except `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: QubitIndex) -> Result<DensityMatrix> {
    if rho.n_qubits < 2 {
        return Err(Error::WrongArity { expected: 2, found: rho.n_qubits });
    }
    keep.checked(rho.n_qubits)?;
    let shift = keep.shift(rho.n_qubits);
    let bit = 1usize << shift;
    let mut out = DMatrix::<C64>::zeros(2, 2);
    for rest in 0..rho.dim() {
        if rest & bit != 0 {
            continue;
        }
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] += rho.m[(rest | (i << shift), rest | (j << shift))];
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(1, out))
}

/// `⟨ψ|ρ|ψ⟩`, clamped to `[0, 1]`.
pub fn fidelity(psi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: psi.dim() });
    }
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..psi.dim() {
        for j in 0..psi.dim() {
            acc += psi.amps[i].conj() * rho.m[(i, j)] * psi.amps[j];
        }
    }
    Ok(acc.re.clamp(0.0, 1.0))
}

/// Applies a 2×2 operator to one wire.
pub fn apply_single_qubit(psi: &PureState, wire: QubitIndex, u: &Matrix2<C64>) -> Result<PureState> {
    wire.checked(psi.n_qubits)?;
    let bit = 1usize << wire.shift(psi.n_qubits);
    let mut out = psi.amps.clone();
    for idx in 0..psi.dim() {
        if idx & bit != 0 {
            continue;
        }
        let a0 = psi.amps[idx];
        let a1 = psi.amps[idx | bit];
        out[idx] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
        out[idx | bit] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
    }
    Ok(PureState::from_unitary_image(psi.n_qubits, out))
}

/// `σᵢ` on `wire`.
pub fn pauli_apply(pauli: Pauli, psi: &PureState, wire: QubitIndex) -> Result<PureState> {
    apply_single_qubit(psi, wire, &pauli.matrix())
}

/// `−iσ2` applied to the complex conjugate: `α|0⟩ + β|1⟩ ↦ −β*|0⟩ + α*|1⟩`.
/// For real amplitudes this is plain `−iσ2`; the conjugation keeps the
/// result orthogonal for complex inputs.
pub fn orthogonal_state(psi: &PureState) -> Result<PureState> {
    if psi.n_qubits != 1 {
        return Err(Error::WrongArity { expected: 1, found: psi.n_qubits });
    }
    let not = Pauli::Y.matrix() * C64::new(0.0, -1.0);
    let conj = PureState::from_unitary_image(1, psi.amps.iter().map(|a| a.conj()).collect());
    apply_single_qubit(&conj, QubitIndex(0), &not)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn make_qubit_examples() {
        let zero = make_qubit(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(zero, PureState::basis(1, 0).unwrap());

        let t = FRAC_PI_8;
        let q = make_qubit(c(t.cos(), 0.0), c(t.sin(), 0.0)).unwrap();
        assert!((q.amplitude(0).re - 0.923_879_532_511_286_7).abs() < 1e-12);
        assert!((q.amplitude(1).re - 0.382_683_432_365_089_8).abs() < 1e-12);

        let q = make_qubit(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        assert!((q.norm_sqr() - 1.0).abs() < 1e-15);

        assert_eq!(make_qubit(c(0.0, 0.0), c(1e-9, 0.0)), Err(Error::ZeroVector));
    }

    #[test]
    fn equatorial_examples() {
        assert!(equatorial_qubit(0.0).projector_distance(&PureState::basis(1, 0).unwrap()).unwrap() < 1e-15);
        assert!(equatorial_qubit(FRAC_PI_2).projector_distance(&PureState::basis(1, 1).unwrap()).unwrap() < 1e-15);
        let plus = equatorial_qubit(FRAC_PI_4);
        assert!(close(plus.amplitude(0), c(FRAC_1_SQRT_2, 0.0)));
        assert!(close(plus.amplitude(1), c(FRAC_1_SQRT_2, 0.0)));
    }

    #[test]
    fn tensor_examples() {
        let zero = PureState::basis(1, 0).unwrap();
        let one = PureState::basis(1, 1).unwrap();
        assert_eq!(tensor(&zero, &zero).unwrap(), PureState::basis(2, 0).unwrap());

        let psi = make_qubit(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let t = tensor(&psi, &zero).unwrap();
        let expect = [c(0.6, 0.0), c(0.0, 0.0), c(0.8, 0.0), c(0.0, 0.0)];
        assert!(t.amplitudes().iter().zip(expect).all(|(a, b)| close(*a, b)));

        let t = tensor(&one, &equatorial_qubit(FRAC_PI_4)).unwrap();
        let h = FRAC_1_SQRT_2;
        let expect = [c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0), c(h, 0.0)];
        assert!(t.amplitudes().iter().zip(expect).all(|(a, b)| close(*a, b)));
    }

    #[test]
    fn tensor_capacity() {
        let big = PureState::basis(20, 0).unwrap();
        let small = PureState::basis(5, 0).unwrap();
        assert_eq!(tensor(&big, &small), Err(Error::CapacityExceeded { requested: 25, max: MAX_QUBITS }));
    }

    #[test]
    fn density_examples() {
        let rho = density_of(&PureState::basis(1, 0).unwrap());
        assert!(close(rho.entry(0, 0), c(1.0, 0.0)) && close(rho.entry(1, 1), c(0.0, 0.0)));

        let rho = density_of(&equatorial_qubit(FRAC_PI_4));
        assert!(rho.matrix().iter().all(|z| close(*z, c(0.5, 0.0))));

        let t = FRAC_PI_8;
        let rho = density_of(&equatorial_qubit(t));
        assert!(close(rho.entry(0, 0), c(t.cos().powi(2), 0.0)));
        assert!(close(rho.entry(1, 1), c(t.sin().powi(2), 0.0)));
        assert!(close(rho.entry(0, 1), c(t.cos() * t.sin(), 0.0)));
        rho.check_invariants().unwrap();
    }

    #[test]
    fn partial_trace_examples() {
        // α|00⟩ + β|11⟩
        let (a, b) = (0.6, 0.8);
        let ebit = PureState::from_real(&[a, 0.0, 0.0, b]).unwrap();
        let r = partial_trace(&density_of(&ebit), QubitIndex(0)).unwrap();
        let expect = DensityMatrix::qubit_real([[a * a, 0.0], [0.0, b * b]]).unwrap();
        assert!(r.max_abs_diff(&expect).unwrap() < 1e-12);

        let psi = equatorial_qubit(0.3);
        let prod = tensor(&psi, &PureState::basis(1, 0).unwrap()).unwrap();
        let r = partial_trace(&density_of(&prod), QubitIndex(0)).unwrap();
        assert!(r.max_abs_diff(&density_of(&psi)).unwrap() < 1e-12);

        let h = FRAC_1_SQRT_2;
        let bell = PureState::from_real(&[0.0, h, h, 0.0]).unwrap();
        let r = partial_trace(&density_of(&bell), QubitIndex(1)).unwrap();
        assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed(1)).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_errors() {
        let rho = density_of(&PureState::basis(2, 0).unwrap());
        assert_eq!(
            partial_trace(&rho, QubitIndex(2)),
            Err(Error::IndexOutOfRange { index: 2, n_qubits: 2 })
        );
        let single = density_of(&PureState::basis(1, 0).unwrap());
        assert!(matches!(partial_trace(&single, QubitIndex(0)), Err(Error::WrongArity { .. })));
    }

    #[test]
    fn reduced_matches_partial_trace() {
        let psi = PureState::from_amplitudes(
            (0..8).map(|k| c((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos())).collect(),
        )
        .unwrap();
        let rho = density_of(&psi);
        for w in 0..3 {
            let a = psi.reduced(QubitIndex(w)).unwrap();
            let b = partial_trace(&rho, QubitIndex(w)).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-14);
        }
    }

    #[test]
    fn fidelity_examples() {
        let t = FRAC_PI_8;
        let psi0 = equatorial_qubit(t);
        assert!((fidelity(&psi0, &density_of(&psi0)).unwrap() - 1.0).abs() < 1e-12);

        let psi2 = pauli_apply(Pauli::Y, &psi0, QubitIndex(0)).unwrap();
        assert!(fidelity(&psi0, &density_of(&psi2)).unwrap().abs() < 1e-12);

        // ⟨ψ0|ψ3⟩ = cos²θ − sin²θ = cos 2θ = 1/√2 at θ = π/8
        let psi3 = pauli_apply(Pauli::Z, &psi0, QubitIndex(0)).unwrap();
        assert!((fidelity(&psi0, &density_of(&psi3)).unwrap() - 0.5).abs() < 1e-12);

        let two = density_of(&PureState::basis(2, 0).unwrap());
        assert!(matches!(fidelity(&psi0, &two), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pauli_examples() {
        let psi = make_qubit(c(0.6, 0.1), c(0.3, -0.7)).unwrap();
        assert_eq!(pauli_apply(Pauli::I, &psi, QubitIndex(0)).unwrap(), psi);

        let one = pauli_apply(Pauli::X, &PureState::basis(1, 0).unwrap(), QubitIndex(0)).unwrap();
        assert_eq!(one, PureState::basis(1, 1).unwrap());

        // σ2(α|0⟩ + β|1⟩) = i(α|1⟩ − β|0⟩)
        let (a, b) = (psi.amplitude(0), psi.amplitude(1));
        let y = pauli_apply(Pauli::Y, &psi, QubitIndex(0)).unwrap();
        let i = c(0.0, 1.0);
        assert!(close(y.amplitude(0), -i * b));
        assert!(close(y.amplitude(1), i * a));

        assert_eq!(
            pauli_apply(Pauli::X, &psi, QubitIndex(1)),
            Err(Error::IndexOutOfRange { index: 1, n_qubits: 1 })
        );
        assert_eq!(Pauli::from_index(4), Err(Error::InvalidPauli(4)));
        assert_eq!(Pauli::from_index(2), Ok(Pauli::Y));
    }

    #[test]
    fn orthogonal_state_examples() {
        // −iσ2|0⟩ = −i·i|1⟩ = |1⟩
        let o = orthogonal_state(&PureState::basis(1, 0).unwrap()).unwrap();
        assert!(close(o.amplitude(0), c(0.0, 0.0)) && close(o.amplitude(1), c(1.0, 0.0)));

        for t in [0.0, 0.4, 1.3, -2.2] {
            let psi = equatorial_qubit(t);
            let o = orthogonal_state(&psi).unwrap();
            assert!(psi.inner(&o).unwrap().norm() < 1e-12);
            assert!(o.amplitudes().iter().all(|a| a.im.abs() < 1e-15));
        }

        let psi = make_qubit(c(0.6, 0.3), c(-0.2, 0.7)).unwrap();
        assert!(psi.inner(&orthogonal_state(&psi).unwrap()).unwrap().norm() < 1e-12);

        let psi = make_qubit(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let o = orthogonal_state(&psi).unwrap();
        assert!(close(o.amplitude(0), c(-0.8, 0.0)) && close(o.amplitude(1), c(0.6, 0.0)));
        assert!(psi.inner(&o).unwrap().norm() < 1e-12);

        assert!(matches!(orthogonal_state(&PureState::basis(2, 0).unwrap()), Err(Error::WrongArity { .. })));
    }

    #[test]
    fn density_validation_rejects_bad_matrices() {
        assert!(DensityMatrix::qubit_real([[0.5, 0.0], [0.0, 0.4]]).is_err());
        assert!(DensityMatrix::qubit_real([[0.5, 0.2], [0.1, 0.5]]).is_err());
        assert!(DensityMatrix::qubit_real([[1.2, 0.0], [0.0, -0.2]]).is_err());
        assert!(DensityMatrix::qubit_real([[0.7, 0.1], [0.1, 0.3]]).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let psi = make_qubit(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let text = serde_json::to_string(&psi).unwrap();
        assert_eq!(text, "[[0.6,0.0],[0.0,0.8]]");
        let back: PureState = serde_json::from_str(&text).unwrap();
        assert_eq!(back, psi);
        assert!(serde_json::from_str::<PureState>("[[1,0],[0,0],[0,0]]").is_err());
    }
}
