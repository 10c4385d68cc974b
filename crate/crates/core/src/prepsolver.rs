//! Preparation angles for the two-qubit resource state, and the constrained
//! optimum behind the phase-covariant weights.
//!
//! The preparation circuit is `R0(θ1)`, `P01`, `R1(θ2)`, `P10`, `R0(θ3)`
//! applied in that order to `|00⟩`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::{Circuit, CnotOp, Gate, RotationOp};
use crate::qnum::PureState;

const NORM_TOLERANCE: f64 = 1e-9;
const ACCEPT_RESIDUAL: f64 = 1e-6;
const DEGENERATE: f64 = 1e-12;
const SAME_ANGLE: f64 = 1e-7;
const VERIFIED_RESIDUAL: f64 = 1e-9;

/// Amplitudes `(C1, C2, C3, C4)` of `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrepCoeffs(pub [f64; 4]);

impl PrepCoeffs {
    pub fn new(c: [f64; 4]) -> Result<Self> {
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotNormalized(f64::NAN));
        }
        let n: f64 = c.iter().map(|v| v * v).sum();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n));
        }
        Ok(PrepCoeffs(c))
    }

    /// Optimal phase-covariant resource `(x, y, y, z)`.
    pub fn pc() -> Self {
        let r = 8f64.sqrt().recip();
        PrepCoeffs([0.5 + r, r, r, 0.5 - r])
    }

    /// BH resource `(√(2/3), √(1/6), √(1/6), 0)`.
    pub fn bh() -> Self {
        let b = (1.0f64 / 6.0).sqrt();
        PrepCoeffs([(2.0f64 / 3.0).sqrt(), b, b, 0.0])
    }

    pub fn max_abs_diff(&self, other: &PrepCoeffs) -> f64 {
        self.0.iter().zip(other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn to_state(&self) -> Result<PureState> {
        PureState::from_real(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngleTriple {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl AngleTriple {
    pub fn new(theta1: f64, theta2: f64, theta3: f64) -> Self {
        AngleTriple { theta1, theta2, theta3 }
    }

    pub fn from_degrees(d1: f64, d2: f64, d3: f64) -> Self {
        AngleTriple::new(d1.to_radians(), d2.to_radians(), d3.to_radians())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.theta1, self.theta2, self.theta3]
    }

    pub fn degrees(&self) -> [f64; 3] {
        self.as_array().map(f64::to_degrees)
    }

    /// Each angle mapped into `(−π, π]`.
    pub fn normalized(&self) -> Self {
        let [a, b, c] = self.as_array().map(normalize_angle);
        AngleTriple::new(a, b, c)
    }

    /// Largest per-angle distance on the circle, in radians.
    pub fn circular_distance(&self, other: &AngleTriple) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| normalize_angle(a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Maps an angle into `(−π, π]`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    if r <= -PI {
        r += 2.0 * PI;
    }
    r
}

fn coeffs_from_cs(c: [f64; 3], s: [f64; 3]) -> [f64; 4] {
    let [c1, c2, c3] = c;
    let [s1, s2, s3] = s;
    [
        c1 * c2 * c3 + s1 * s2 * s3,
        s1 * c2 * c3 - c1 * s2 * s3,
        c1 * c2 * s3 - s1 * s2 * c3,
        c1 * s2 * c3 + s1 * c2 * s3,
    ]
}

fn sin_cos3(t: &AngleTriple) -> ([f64; 3], [f64; 3]) {
    let a = t.as_array();
    (a.map(f64::cos), a.map(f64::sin))
}

/// Amplitudes produced by the preparation circuit.
pub fn reconstruct_coeffs(angles: &AngleTriple) -> PrepCoeffs {
    let (c, s) = sin_cos3(angles);
    PrepCoeffs(coeffs_from_cs(c, s))
}

/// The preparation circuit on two wires.
pub fn prep_circuit(angles: &AngleTriple) -> Circuit {
    Circuit::from_ops(
        2,
        vec![
            Gate::Rotation(RotationOp::equatorial(0, angles.theta1)),
            Gate::Cnot(CnotOp::new(0, 1).expect("distinct wires")),
            Gate::Rotation(RotationOp::equatorial(1, angles.theta2)),
            Gate::Cnot(CnotOp::new(1, 0).expect("distinct wires")),
            Gate::Rotation(RotationOp::equatorial(0, angles.theta3)),
        ],
    )
    .expect("two-wire circuit")
}

/// A verified angle triple and its reconstruction error (max norm).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrepSolution {
    pub angles: AngleTriple,
    pub residual: f64,
}

/// The three squared cosines the closed form produces for one branch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CosSquares {
    pub cos2_theta1: f64,
    pub cos2_theta2: f64,
    pub cos2_theta3: f64,
}

/// `1 − 4(C1²C4² + C2²C3²) + 8 C1C2C3C4`.
pub fn discriminant(coeffs: &PrepCoeffs) -> f64 {
    let [c1, c2, c3, c4] = coeffs.0;
    1.0 - 4.0 * (c1 * c1 * c4 * c4 + c2 * c2 * c3 * c3) + 8.0 * c1 * c2 * c3 * c4
}

/// Closed-form squared cosines for both branches of `cos²θ3`. Branches with
/// a vanishing denominator are omitted.
pub fn closed_form_cos_squares(coeffs: &PrepCoeffs) -> Result<Vec<CosSquares>> {
    let [_, c2, c3, c4] = coeffs.0;
    let disc = discriminant(coeffs);
    if disc < -DEGENERATE {
        return Err(Error::NoSolution { best_residual: f64::INFINITY });
    }
    let root = disc.max(0.0).sqrt();
    let den = 1.0 - 2.0 * c3 * c3 - 2.0 * c4 * c4;
    let den1 = 1.0 - 2.0 * c2 * c2 - 2.0 * c4 * c4;
    if den.abs() < DEGENERATE || root < DEGENERATE {
        return Err(Error::DegenerateDenominator);
    }
    let mut out = Vec::new();
    for sign in [1.0, -1.0] {
        let cos2_theta3 = 0.5 * (1.0 + sign * den / root);
        let split = 1.0 - 2.0 * cos2_theta3;
        if split.abs() < DEGENERATE {
            continue;
        }
        let cos2_theta1 = (c2 * c2 - c3 * c3) / den + cos2_theta3 * den1 / den;
        let cos2_theta2 = (c3 * c3 + c4 * c4 - cos2_theta3) / split;
        out.push(CosSquares { cos2_theta1, cos2_theta2, cos2_theta3 });
    }
    if out.is_empty() {
        return Err(Error::DegenerateDenominator);
    }
    Ok(out)
}

fn residual(angles: &AngleTriple, target: &PrepCoeffs) -> f64 {
    reconstruct_coeffs(angles).max_abs_diff(target)
}

/// `arccos √c` in `[0, π/2]`, or `None` when `c` is outside `[0, 1]`.
fn base_angle(c: f64) -> Option<f64> {
    if !(-NORM_TOLERANCE..=1.0 + NORM_TOLERANCE).contains(&c) {
        return None;
    }
    Some(c.clamp(0.0, 1.0).sqrt().acos())
}

fn closed_form_candidates(coeffs: &PrepCoeffs) -> Result<Vec<PrepSolution>> {
    let mut out = Vec::new();
    for cs in closed_form_cos_squares(coeffs)? {
        let bases = [cs.cos2_theta1, cs.cos2_theta2, cs.cos2_theta3].map(base_angle);
        let [Some(a1), Some(a2), Some(a3)] = bases else {
            continue;
        };
        // Each angle is fixed by cos² up to the four sign choices of (cos, sin).
        let options = |a: f64| [a, -a, PI - a, a - PI];
        for t1 in options(a1) {
            for t2 in options(a2) {
                for t3 in options(a3) {
                    let angles = AngleTriple::new(t1, t2, t3);
                    let r = residual(&angles, coeffs);
                    if r < ACCEPT_RESIDUAL {
                        out.push(PrepSolution { angles, residual: r });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Damped Gauss–Newton on the four coefficient equations.
fn levenberg_marquardt(start: AngleTriple, target: &PrepCoeffs) -> AngleTriple {
    let resid = |t: &AngleTriple| -> Vector4<f64> {
        Vector4::from(reconstruct_coeffs(t).0) - Vector4::from(target.0)
    };
    let jacobian = |t: &AngleTriple| -> nalgebra::Matrix4x3<f64> {
        let (c, s) = sin_cos3(t);
        let mut j = nalgebra::Matrix4x3::zeros();
        for k in 0..3 {
            // The coefficients are linear in (cos θk, sin θk); differentiate
            // by substituting (−sin θk, cos θk).
            let (mut dc, mut ds) = (c, s);
            dc[k] = -s[k];
            ds[k] = c[k];
            j.set_column(k, &Vector4::from(coeffs_from_cs(dc, ds)));
        }
        j
    };
    let mut t = start;
    let mut r = resid(&t);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..300 {
        if cost < 1e-30 {
            break;
        }
        let j = jacobian(&t);
        let jtj = j.transpose() * j;
        let g = j.transpose() * r;
        let damped = jtj + Matrix3::from_diagonal(&jtj.diagonal().map(|d| lambda * d.max(1e-12)));
        let Some(step) = damped.try_inverse().map(|inv| -(inv * g)) else {
            lambda *= 10.0;
            continue;
        };
        let cand = AngleTriple::new(t.theta1 + step[0], t.theta2 + step[1], t.theta3 + step[2]);
        let rc = resid(&cand);
        let cc = rc.norm_squared();
        if cc < cost {
            t = cand;
            r = rc;
            cost = cc;
            lambda = (lambda / 10.0).max(1e-15);
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    t
}

const FALLBACK_STARTS: [[f64; 3]; 8] = [
    [0.3, 0.2, 0.4],
    [-0.5, 0.7, 0.1],
    [1.2, -0.4, -0.9],
    [-1.1, -1.0, 0.6],
    [2.0, 0.5, -2.2],
    [-2.4, 1.3, 2.6],
    [0.8, 2.5, -1.6],
    [-0.2, -2.1, 1.9],
];

fn fallback_candidates(coeffs: &PrepCoeffs) -> Vec<PrepSolution> {
    FALLBACK_STARTS
        .iter()
        .map(|s| levenberg_marquardt(AngleTriple::new(s[0], s[1], s[2]), coeffs))
        .map(|t| PrepSolution { angles: t, residual: residual(&t, coeffs) })
        .filter(|s| s.residual < ACCEPT_RESIDUAL)
        .collect()
}

fn finalize(mut sols: Vec<PrepSolution>, coeffs: &PrepCoeffs) -> Vec<PrepSolution> {
    for s in sols.iter_mut() {
        if s.residual > 1e-13 {
            let polished = levenberg_marquardt(s.angles, coeffs);
            let r = residual(&polished, coeffs);
            if r < s.residual {
                *s = PrepSolution { angles: polished, residual: r };
            }
        }
        s.angles = s.angles.normalized();
        // Residuals below this are rounding noise; ordering by them would
        // depend on the last bit.
        if s.residual < 1e-14 {
            s.residual = 0.0;
        }
    }
    sols.retain(|s| s.residual < VERIFIED_RESIDUAL);
    sols.sort_by(|a, b| {
        a.residual.partial_cmp(&b.residual).unwrap_or(Ordering::Equal).then_with(|| {
            a.angles
                .as_array()
                .partial_cmp(&b.angles.as_array())
                .unwrap_or(Ordering::Equal)
        })
    });
    let mut out: Vec<PrepSolution> = Vec::new();
    for s in sols {
        if !out.iter().any(|o| o.angles.circular_distance(&s.angles) < SAME_ANGLE) {
            out.push(s);
        }
    }
    out
}

/// Every angle triple whose preparation circuit yields `coeffs`.
///
/// The closed form is tried first; each candidate is checked by
/// reconstruction. Degenerate cases fall back to damped least squares.
pub fn solve_prep_angles(coeffs: &PrepCoeffs) -> Result<Vec<PrepSolution>> {
    let coeffs = PrepCoeffs::new(coeffs.0)?;
    if discriminant(&coeffs) < -DEGENERATE {
        return Err(Error::NoSolution { best_residual: f64::INFINITY });
    }
    let mut sols = match closed_form_candidates(&coeffs) {
        Ok(s) => s,
        Err(Error::DegenerateDenominator) => Vec::new(),
        Err(e) => return Err(e),
    };
    if sols.is_empty() {
        sols = fallback_candidates(&coeffs);
    }
    if sols.is_empty() {
        let best = FALLBACK_STARTS
            .iter()
            .map(|s| residual(&levenberg_marquardt(AngleTriple::new(s[0], s[1], s[2]), &coeffs), &coeffs))
            .fold(f64::INFINITY, f64::min);
        return Err(Error::NoSolution { best_residual: best });
    }
    let best_residual = sols.iter().map(|s| s.residual).fold(f64::INFINITY, f64::min);
    let out = finalize(sols, &coeffs);
    if out.is_empty() {
        return Err(Error::NoSolution { best_residual });
    }
    Ok(out)
}

/// Feasible point of the phase-covariant system with its objective value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PcSolution {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub f0_sq: f64,
}

impl PcSolution {
    fn from_point(v: Vector3<f64>) -> Self {
        // (x, y, z) and −(x, y, z) are the same resource state.
        let v = if v[0] < 0.0 { -v } else { v };
        PcSolution { x: v[0], y: v[1], z: v[2], f0_sq: v[0] * v[0] + v[1] * v[1] }
    }

    /// `(x²+2y²+z² − 1, 2(xy+yz) − (2(x²+y²) − 1))`.
    pub fn constraint_residuals(&self) -> [f64; 2] {
        let g = constraints(&Vector3::new(self.x, self.y, self.z));
        [g[0], g[1]]
    }

    pub fn prep_coeffs(&self) -> PrepCoeffs {
        PrepCoeffs([self.x, self.y, self.y, self.z])
    }
}

fn constraints(v: &Vector3<f64>) -> [f64; 2] {
    let (x, y, z) = (v[0], v[1], v[2]);
    [x * x + 2.0 * y * y + z * z - 1.0, 2.0 * (x * y + y * z) - (2.0 * (x * x + y * y) - 1.0)]
}

fn constraint_gradients(v: &Vector3<f64>) -> [Vector3<f64>; 2] {
    let (x, y, z) = (v[0], v[1], v[2]);
    [
        Vector3::new(2.0 * x, 4.0 * y, 2.0 * z),
        Vector3::new(2.0 * y - 4.0 * x, 2.0 * x + 2.0 * z - 4.0 * y, 2.0 * y),
    ]
}

/// The feasible set is the union of two curves, both parametrized by `t`:
/// branch 0 has `z = −x` and `x² + y² = 1/2`; branch 1 has `x − z = 2y`.
pub fn feasible_point(branch: usize, t: f64) -> [f64; 3] {
    if branch.is_multiple_of(2) {
        let (x, y) = (t.cos() / 2f64.sqrt(), t.sin() / 2f64.sqrt());
        [x, y, -x]
    } else {
        let s = 2f64.sqrt() * t.cos();
        let d = t.sin();
        [(s + d) / 2.0, d / 2.0, (s - d) / 2.0]
    }
}

struct Problem {
    pin_z: bool,
}

impl Problem {
    fn constraints(&self, v: &Vector3<f64>) -> Vec<f64> {
        let mut g = constraints(v).to_vec();
        if self.pin_z {
            g.push(v[2]);
        }
        g
    }

    fn gradients(&self, v: &Vector3<f64>) -> Vec<Vector3<f64>> {
        let mut g = constraint_gradients(v).to_vec();
        if self.pin_z {
            g.push(Vector3::new(0.0, 0.0, 1.0));
        }
        g
    }

    /// Augmented Lagrangian of `−(x² + y²)` and its gradient.
    fn lagrangian(&self, v: &Vector3<f64>, lambda: &[f64], rho: f64) -> (f64, Vector3<f64>) {
        let g = self.constraints(v);
        let dg = self.gradients(v);
        let mut val = -(v[0] * v[0] + v[1] * v[1]);
        let mut grad = Vector3::new(-2.0 * v[0], -2.0 * v[1], 0.0);
        for i in 0..g.len() {
            val += lambda[i] * g[i] + 0.5 * rho * g[i] * g[i];
            grad += dg[i] * (lambda[i] + rho * g[i]);
        }
        (val, grad)
    }
}

fn bfgs(problem: &Problem, start: Vector3<f64>, lambda: &[f64], rho: f64) -> Vector3<f64> {
    let mut v = start;
    let (mut f, mut g) = problem.lagrangian(&v, lambda, rho);
    let mut h = Matrix3::<f64>::identity();
    for _ in 0..500 {
        if g.norm() < 1e-13 {
            break;
        }
        let mut dir = -(h * g);
        if dir.dot(&g) >= 0.0 {
            h = Matrix3::identity();
            dir = -g;
        }
        let mut step = 1.0;
        let (mut fn_, mut gn, mut vn);
        loop {
            vn = v + dir * step;
            (fn_, gn) = problem.lagrangian(&vn, lambda, rho);
            if fn_ <= f + 1e-4 * step * g.dot(&dir) || step < 1e-16 {
                break;
            }
            step *= 0.5;
        }
        let s = vn - v;
        let yv = gn - g;
        let sy = s.dot(&yv);
        if s.norm() < 1e-18 {
            break;
        }
        if sy > 1e-18 {
            let r = 1.0 / sy;
            let i = Matrix3::identity();
            h = (i - s * yv.transpose() * r) * h * (i - yv * s.transpose() * r) + s * s.transpose() * r;
        }
        v = vn;
        f = fn_;
        g = gn;
    }
    v
}

fn augmented_lagrangian(problem: &Problem, start: [f64; 3]) -> Vector3<f64> {
    let mut v = Vector3::from(start);
    let mut lambda = vec![0.0; problem.constraints(&v).len()];
    let rho = 10.0;
    for _ in 0..60 {
        v = bfgs(problem, v, &lambda, rho);
        let g = problem.constraints(&v);
        for (l, gi) in lambda.iter_mut().zip(&g) {
            *l += rho * gi;
        }
        if g.iter().all(|gi| gi.abs() < 1e-14) {
            break;
        }
    }
    v
}

const FEASIBILITY: f64 = 1e-9;

fn checked(problem: &Problem, v: Vector3<f64>) -> Result<PcSolution> {
    if problem.constraints(&v).iter().any(|g| !g.is_finite() || g.abs() > FEASIBILITY) {
        return Err(Error::ConvergenceFailure { iterations: 60 });
    }
    Ok(PcSolution::from_point(v))
}

/// Local solve from one start; the result is a KKT point, not necessarily
/// the global maximum.
pub fn pc_optimize_from(start: [f64; 3]) -> Result<PcSolution> {
    let problem = Problem { pin_z: false };
    checked(&problem, augmented_lagrangian(&problem, start))
}

fn multistart(problem: &Problem, starts: &[[f64; 3]]) -> Result<PcSolution> {
    let mut best: Option<PcSolution> = None;
    for s in starts {
        if let Ok(sol) = checked(problem, augmented_lagrangian(problem, *s)) {
            if best.is_none_or(|b| sol.f0_sq > b.f0_sq + 1e-12) {
                best = Some(sol);
            }
        }
    }
    best.ok_or(Error::ConvergenceFailure { iterations: 60 })
}

fn default_starts() -> Vec<[f64; 3]> {
    (0..8).flat_map(|k| {
        let t = 0.3 + k as f64 * PI / 4.0;
        [feasible_point(0, t), feasible_point(1, t)]
    })
    .collect()
}

/// Maximizes `x² + y²` subject to `x² + 2y² + z² = 1` and
/// `2(xy + yz) = 2(x² + y²) − 1`.
pub fn pc_optimize() -> Result<PcSolution> {
    multistart(&Problem { pin_z: false }, &default_starts())
}

/// The same problem with `z = 0`, which yields the BH weights.
pub fn bh_from_pc_system() -> Result<PcSolution> {
    let starts: Vec<[f64; 3]> = (0..8)
        .map(|k| {
            let t = 0.2 + k as f64 * PI / 4.0;
            [t.cos(), t.sin() / 2f64.sqrt(), 0.0]
        })
        .collect();
    multistart(&Problem { pin_z: true }, &starts)
}
