//! The four cloning machines and their fidelity statistics.
//!
//! Wire layout: the input qubit always enters on wire 0. The one- and
//! two-operation copiers and the BH machine leave clones on wires 0 and 1;
//! the phase-covariant machine leaves them on wires 1 and 2.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{Circuit, CnotOp, Gate, RotationOp};
use crate::qnum::{
    density_of, equatorial_qubit, fidelity, make_qubit, orthogonal_state, pauli_apply, tensor, DensityMatrix,
    Pauli, PureState, QubitIndex,
};
use crate::quadrature::GaussLegendre;

/// Residual above which [`orthogonal_decomposition`] refuses a fit.
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-6;
/// Default Gauss–Legendre order for averages.
pub const DEFAULT_QUAD_ORDER: usize = 128;

const DEGENERATE_VARIANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Machine {
    OneOp,
    TwoOp { phi: f64 },
    Bh,
    Pc,
}

impl Machine {
    pub fn name(&self) -> &'static str {
        match self {
            Machine::OneOp => "one-op",
            Machine::TwoOp { .. } => "two-op",
            Machine::Bh => "bh",
            Machine::Pc => "pc",
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            Machine::OneOp | Machine::TwoOp { .. } => 2,
            Machine::Bh | Machine::Pc => 3,
        }
    }

    pub fn run(&self, psi0: &PureState) -> Result<CloneOutput> {
        match *self {
            Machine::OneOp => one_op_clone(psi0),
            Machine::TwoOp { phi } => two_op_clone(psi0, phi),
            Machine::Bh => bh_clone(psi0),
            Machine::Pc => pc_clone(psi0),
        }
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Reduced states of one run. `original_channel` is the wire that carried
/// ψ0 and `ancilla` the wire holding neither clone; both exist only for the
/// three-qubit machines.
#[derive(Clone, Debug, PartialEq)]
pub struct CloneOutput {
    pub joint: PureState,
    pub clone_a: DensityMatrix,
    pub clone_b: DensityMatrix,
    pub original_channel: Option<DensityMatrix>,
    pub ancilla: Option<DensityMatrix>,
}

fn require_single(psi0: &PureState) -> Result<()> {
    if psi0.n_qubits() != 1 {
        return Err(Error::WrongArity { expected: 1, found: psi0.n_qubits() });
    }
    Ok(())
}

fn two_wire_output(joint: PureState) -> Result<CloneOutput> {
    Ok(CloneOutput {
        clone_a: joint.reduced(QubitIndex(0))?,
        clone_b: joint.reduced(QubitIndex(1))?,
        joint,
        original_channel: None,
        ancilla: None,
    })
}

/// `P01(ψ0 ⊗ |0⟩)`.
pub fn one_op_clone(psi0: &PureState) -> Result<CloneOutput> {
    two_op_clone(psi0, 0.0)
}

/// `P01(ψ0 ⊗ R(φ)|0⟩)`.
pub fn two_op_clone(psi0: &PureState, phi: f64) -> Result<CloneOutput> {
    require_single(psi0)?;
    let input = tensor(psi0, &equatorial_qubit(phi))?;
    let joint = Circuit::new(2).cnot(0, 1)?.apply(&input)?;
    two_wire_output(joint)
}

/// `√(2/3)|00⟩ + √(1/6)(|01⟩ + |10⟩)`.
pub fn bh_prep() -> PureState {
    let a = (2.0f64 / 3.0).sqrt();
    let b = (1.0f64 / 6.0).sqrt();
    PureState::from_real(&[a, b, b, 0.0]).expect("fixed amplitudes")
}

/// Cloning stage of the BH machine, in application order.
pub fn bh_network() -> Circuit {
    Circuit::from_operator_product(3, "P21 P02 P10").expect("fixed network")
}

pub fn bh_clone(psi0: &PureState) -> Result<CloneOutput> {
    require_single(psi0)?;
    let joint = bh_network().apply(&tensor(psi0, &bh_prep())?)?;
    let clone_a = joint.reduced(QubitIndex(0))?;
    Ok(CloneOutput {
        original_channel: Some(clone_a.clone()),
        clone_a,
        clone_b: joint.reduced(QubitIndex(1))?,
        ancilla: Some(joint.reduced(QubitIndex(2))?),
        joint,
    })
}

/// `x|00⟩ + y(|01⟩ + |10⟩) + z|11⟩` with the optimal phase-covariant
/// weights `x = 1/2 + 1/√8`, `y = 1/√8`, `z = 1/2 − 1/√8`.
pub fn pc_prep() -> PureState {
    let r = 8f64.sqrt().recip();
    PureState::from_real(&[0.5 + r, r, r, 0.5 - r]).expect("fixed amplitudes")
}

/// Cloning stage of the phase-covariant machine, in application order.
/// Maps `|x,y,z⟩` to `|x⊕y⊕z, x⊕y, x⊕z⟩`.
pub fn pc_network() -> Circuit {
    Circuit::from_operator_product(3, "P10 P20 P01 P02").expect("fixed network")
}

pub fn pc_clone(psi0: &PureState) -> Result<CloneOutput> {
    require_single(psi0)?;
    let joint = pc_network().apply(&tensor(psi0, &pc_prep())?)?;
    let original = joint.reduced(QubitIndex(0))?;
    Ok(CloneOutput {
        clone_a: joint.reduced(QubitIndex(1))?,
        clone_b: joint.reduced(QubitIndex(2))?,
        ancilla: Some(original.clone()),
        original_channel: Some(original),
        joint,
    })
}

/// Fidelities of a single run against its input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointFidelity {
    pub f_a: f64,
    pub f_b: f64,
    pub f_orig: Option<f64>,
}

pub fn fidelities_for(machine: Machine, psi0: &PureState) -> Result<PointFidelity> {
    let out = machine.run(psi0)?;
    let f_orig = match (&machine, &out.original_channel) {
        (Machine::Pc, Some(rho)) => Some(fidelity(psi0, rho)?),
        _ => None,
    };
    Ok(PointFidelity { f_a: fidelity(psi0, &out.clone_a)?, f_b: fidelity(psi0, &out.clone_b)?, f_orig })
}

/// Fidelities for the equatorial input `cos θ|0⟩ + sin θ|1⟩`.
pub fn pointwise_fidelities(machine: Machine, theta: f64) -> Result<PointFidelity> {
    fidelities_for(machine, &equatorial_qubit(theta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AveragingMeasure {
    /// θ uniform on `[0, 2π)`, state `(cos θ, sin θ)`.
    EquatorialUniform,
    /// `u = α²` uniform on `[0, 1]`, state `(√u, √(1−u))`.
    PolarUniform,
}

impl AveragingMeasure {
    pub fn name(&self) -> &'static str {
        match self {
            AveragingMeasure::EquatorialUniform => "equatorial",
            AveragingMeasure::PolarUniform => "polar",
        }
    }
}

impl FromStr for AveragingMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equatorial" => Ok(AveragingMeasure::EquatorialUniform),
            "polar" => Ok(AveragingMeasure::PolarUniform),
            other => Err(Error::Parse(format!("unknown measure '{other}'"))),
        }
    }
}

impl fmt::Display for AveragingMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    GaussLegendre { order: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling::GaussLegendre { order: DEFAULT_QUAD_ORDER }
    }
}

/// Weighted sample points `(θ, w)` for a measure. Weights sum to one and each
/// θ parametrizes the real state `(cos θ, sin θ)`.
pub fn sample_points(measure: AveragingMeasure, sampling: Sampling) -> Result<Vec<(f64, f64)>> {
    match sampling {
        Sampling::GaussLegendre { order } => {
            if order == 0 {
                return Err(Error::Parse("quadrature order must be positive".into()));
            }
            let rule = GaussLegendre::new(order);
            Ok(match measure {
                AveragingMeasure::EquatorialUniform => {
                    rule.on_interval(0.0, 2.0 * PI).map(|(t, w)| (t, w / (2.0 * PI))).collect()
                }
                // u = cos²t turns du into sin 2t dt on [0, π/2].
                AveragingMeasure::PolarUniform => {
                    rule.on_interval(0.0, FRAC_PI_2).map(|(t, w)| (t, w * (2.0 * t).sin())).collect()
                }
            })
        }
        Sampling::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::Parse("sample count must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = 1.0 / samples as f64;
            Ok((0..samples)
                .map(|_| {
                    let t = match measure {
                        AveragingMeasure::EquatorialUniform => rng.random::<f64>() * 2.0 * PI,
                        AveragingMeasure::PolarUniform => rng.random::<f64>().sqrt().acos(),
                    };
                    (t, w)
                })
                .collect())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelityStats {
    pub measure: AveragingMeasure,
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    /// `None` when either variance vanishes.
    pub correlation: Option<f64>,
    pub mean_orig: Option<f64>,
}

/// Weighted moments of `(F_a, F_b)` over the measure.
pub fn average_fidelity(machine: Machine, measure: AveragingMeasure, sampling: Sampling) -> Result<FidelityStats> {
    let points = sample_points(measure, sampling)?;
    let values = points
        .iter()
        .map(|&(t, w)| pointwise_fidelities(machine, t).map(|p| (w, p)))
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = values.iter().map(|(w, _)| w).sum();
    let mean = |f: &dyn Fn(&PointFidelity) -> f64| values.iter().map(|(w, p)| w * f(p)).sum::<f64>() / total;
    let mean_a = mean(&|p| p.f_a);
    let mean_b = mean(&|p| p.f_b);
    let var_a = mean(&|p| (p.f_a - mean_a).powi(2));
    let var_b = mean(&|p| (p.f_b - mean_b).powi(2));
    let cov = mean(&|p| (p.f_a - mean_a) * (p.f_b - mean_b));
    let correlation = if var_a < DEGENERATE_VARIANCE || var_b < DEGENERATE_VARIANCE {
        None
    } else {
        Some((cov / (var_a * var_b).sqrt()).clamp(-1.0, 1.0))
    };
    let mean_orig = match machine {
        Machine::Pc => Some(mean(&|p| p.f_orig.unwrap_or(f64::NAN))),
        _ => None,
    };
    Ok(FidelityStats { measure, mean_a, mean_b, var_a, var_b, correlation, mean_orig })
}

/// Weights of `ρ` on `|ψ0⟩⟨ψ0|` and `|ψ2⟩⟨ψ2|`, `ψ2` orthogonal to `ψ0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecompositionCoeffs {
    pub f0_sq: f64,
    pub f2_sq: f64,
    /// Frobenius norm of what the two projectors leave unexplained.
    pub residual: f64,
}

pub fn orthogonal_decomposition(rho: &DensityMatrix, psi0: &PureState) -> Result<DecompositionCoeffs> {
    require_single(psi0)?;
    if rho.n_qubits() != 1 {
        return Err(Error::WrongArity { expected: 1, found: rho.n_qubits() });
    }
    let psi2 = orthogonal_state(psi0)?;
    let p0 = density_of(psi0);
    let p2 = density_of(&psi2);
    // The projectors are orthonormal under the trace inner product, so the
    // 2×2 normal equations are diagonal.
    let f0_sq = fidelity(psi0, rho)?;
    let f2_sq = fidelity(&psi2, rho)?;
    let fit = DensityMatrix::mixture(&[(f0_sq, &p0), (f2_sq, &p2)])?;
    let residual = rho.frobenius_distance(&fit)?;
    if residual > DECOMPOSITION_TOLERANCE {
        return Err(Error::NotDecomposable { residual });
    }
    Ok(DecompositionCoeffs { f0_sq, f2_sq, residual })
}

/// `s = f0² − f2²`, the shrinking factor in `ρ = s ρ_in + ((1 − s)/2) I`.
pub fn scaling_factor(coeffs: &DecompositionCoeffs) -> f64 {
    coeffs.f0_sq - coeffs.f2_sq
}

/// `s ρ_in + ((1 − s)/2) I`.
pub fn shrunk_state(psi0: &PureState, s: f64) -> Result<DensityMatrix> {
    let rho = density_of(psi0);
    let mixed = DensityMatrix::maximally_mixed(psi0.n_qubits());
    DensityMatrix::mixture(&[(s, &rho), (1.0 - s, &mixed)])
}

/// Least-squares weights of `ρ` on `ρ0 = |ψ0⟩⟨ψ0|`, `ρ1 = σ1ρ0σ1` and
/// `ρ2 = |ψ2⟩⟨ψ2|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AncillaDecomposition {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub residual: f64,
}

pub fn ancilla_decomposition(rho: &DensityMatrix, psi0: &PureState) -> Result<AncillaDecomposition> {
    require_single(psi0)?;
    if rho.n_qubits() != 1 {
        return Err(Error::WrongArity { expected: 1, found: rho.n_qubits() });
    }
    let rho0 = density_of(psi0);
    let rho1 = density_of(&pauli_apply(Pauli::X, psi0, QubitIndex(0))?);
    let rho2 = density_of(&orthogonal_state(psi0)?);
    let basis = [&rho0, &rho1, &rho2];
    let flatten = |m: &DensityMatrix| -> Vec<f64> { m.matrix().iter().flat_map(|z| [z.re, z.im]).collect() };
    let cols: Vec<Vec<f64>> = basis.iter().map(|m| flatten(m)).collect();
    let a = DMatrix::from_fn(8, 3, |i, j| cols[j][i]);
    let b = DVector::from_vec(flatten(rho));
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&b, 1e-10).map_err(|_| Error::Singular)?;
    let residual = (&a * &x - &b).norm();
    Ok(AncillaDecomposition { c0: x[0], c1: x[1], c2: x[2], residual })
}

/// Haar-random qubit: `|α|² = u` uniform, relative phase uniform.
pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    let u: f64 = rng.random();
    let phase: f64 = rng.random::<f64>() * 2.0 * PI;
    make_qubit(C64::new(u.sqrt(), 0.0), C64::from_polar((1.0 - u).sqrt(), phase))
        .unwrap_or_else(|_| PureState::basis(1, 1).expect("basis state"))
}

/// The pair of cloning gates actually applied by a machine.
pub fn network(machine: Machine) -> Circuit {
    match machine {
        Machine::OneOp => Circuit::new(2).cnot(0, 1).expect("valid"),
        Machine::TwoOp { phi } => Circuit::from_ops(
            2,
            vec![
                Gate::Rotation(RotationOp::equatorial(1, phi)),
                Gate::Cnot(CnotOp::new(0, 1).expect("valid")),
            ],
        )
        .expect("valid"),
        Machine::Bh => bh_network(),
        Machine::Pc => pc_network(),
    }
}

/// Outcome of one named property check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, tol: f64) -> InvariantCheck {
    InvariantCheck { name, passed: worst <= tol, detail: format!("worst deviation {worst:.3e} (tolerance {tol:.0e})") }
}

/// Machine-level properties: BH universality, PC covariance, the two-op
/// special cases, the scaling form, the BH cross-term condition and the
/// quadrature sanity values.
pub fn invariant_suite() -> Result<Vec<InvariantCheck>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let five_sixths = 5.0 / 6.0;
    let pc_f = 0.5 + 8f64.sqrt().recip();

    let (mut fid, mut sym, mut scale) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let psi = haar_qubit(&mut rng);
        let o = bh_clone(&psi)?;
        fid = fid.max((fidelity(&psi, &o.clone_a)? - five_sixths).abs());
        fid = fid.max((fidelity(&psi, &o.clone_b)? - five_sixths).abs());
        sym = sym.max(o.clone_a.max_abs_diff(&o.clone_b)?);
        let s = scaling_factor(&orthogonal_decomposition(&o.clone_a, &psi)?);
        scale = scale.max(o.clone_a.frobenius_distance(&shrunk_state(&psi, s)?)?);
    }
    out.push(check("bh_universal_fidelity", fid, 1e-10));
    out.push(check("bh_clone_symmetry", sym, 1e-10));
    out.push(check("bh_scaling_form", scale, 1e-9));

    let (mut fid, mut scale) = (0.0f64, 0.0f64);
    for k in 0..256 {
        let psi = equatorial_qubit(2.0 * PI * k as f64 / 256.0);
        let o = pc_clone(&psi)?;
        for rho in [&o.clone_a, &o.clone_b] {
            fid = fid.max((fidelity(&psi, rho)? - pc_f).abs());
            let s = scaling_factor(&orthogonal_decomposition(rho, &psi)?);
            scale = scale.max(rho.frobenius_distance(&shrunk_state(&psi, s)?)?);
        }
    }
    out.push(check("pc_equatorial_fidelity", fid, 1e-10));
    out.push(check("pc_scaling_form", scale, 1e-9));

    let (mut sep, mut sum) = (0.0f64, 0.0f64);
    for k in 0..64 {
        let t = 2.0 * PI * k as f64 / 64.0;
        let psi = equatorial_qubit(t);
        let o = two_op_clone(&psi, std::f64::consts::FRAC_PI_4)?;
        let input = tensor(&psi, &equatorial_qubit(std::f64::consts::FRAC_PI_4))?;
        sep = sep.max(o.joint.projector_distance(&input)?);
        let p = pointwise_fidelities(Machine::TwoOp { phi: FRAC_PI_2 }, t)?;
        sum = sum.max((p.f_a + p.f_b - 1.0).abs());
    }
    out.push(check("two_op_separable_at_quarter_turn", sep, 1e-10));
    out.push(check("two_op_complementary_at_half_turn", sum, 1e-12));
    for measure in [AveragingMeasure::EquatorialUniform, AveragingMeasure::PolarUniform] {
        let st = average_fidelity(Machine::TwoOp { phi: std::f64::consts::FRAC_PI_4 }, measure, Sampling::default())?;
        out.push(check(
            if measure == AveragingMeasure::PolarUniform { "two_op_quarter_turn_variance_polar" } else { "two_op_quarter_turn_variance_equatorial" },
            st.var_a,
            1e-12,
        ));
        let st = average_fidelity(Machine::TwoOp { phi: FRAC_PI_2 }, measure, Sampling::default())?;
        let dev = st.correlation.map_or(f64::INFINITY, |c| (c + 1.0).abs());
        out.push(check(
            if measure == AveragingMeasure::PolarUniform { "two_op_anticorrelation_polar" } else { "two_op_anticorrelation_equatorial" },
            dev,
            1e-9,
        ));
    }

    let (f0, f2): (f64, f64) = (five_sixths, 1.0 / 6.0);
    out.push(check("bh_cross_term_condition", (2.0 * f2.sqrt() * (f0 - f2).sqrt() - (f0 - f2)).abs(), 1e-12));

    let eq = average_fidelity(Machine::OneOp, AveragingMeasure::EquatorialUniform, Sampling::default())?;
    let po = average_fidelity(Machine::OneOp, AveragingMeasure::PolarUniform, Sampling::default())?;
    out.push(check("quadrature_equatorial_three_quarters", (eq.mean_a - 0.75).abs(), 1e-9));
    out.push(check("quadrature_polar_two_thirds", (po.mean_a - 2.0 / 3.0).abs(), 1e-9));
    Ok(out)
}
