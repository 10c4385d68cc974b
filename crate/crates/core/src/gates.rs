//! Rotations, CNOTs and circuits over [`PureState`] registers.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qnum::{apply_single_qubit, PureState, Pauli, QubitIndex};

/// Largest register [`Circuit::unitary`] will expand.
pub const MAX_UNITARY_QUBITS: usize = 12;

/// `[[cos θ, −i e^{−iφ} sin θ], [−i e^{iφ} sin θ, cos θ]]`.
pub fn rotation_matrix(theta: f64, phi: f64) -> Matrix2<C64> {
    let (s, c) = theta.sin_cos();
    let minus_i = C64::new(0.0, -1.0);
    Matrix2::new(
        C64::new(c, 0.0),
        minus_i * C64::from_polar(1.0, -phi) * s,
        minus_i * C64::from_polar(1.0, phi) * s,
        C64::new(c, 0.0),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationOp {
    pub wire: QubitIndex,
    pub theta: f64,
    pub phi: f64,
}

impl RotationOp {
    /// Real rotation `R(θ)`, i.e. `φ = π/2`.
    pub fn equatorial(wire: usize, theta: f64) -> Self {
        RotationOp { wire: QubitIndex(wire), theta, phi: FRAC_PI_2 }
    }

    pub fn matrix(&self) -> Matrix2<C64> {
        rotation_matrix(self.theta, self.phi)
    }
}

/// `target ← control ⊕ target`, with an extra `⊕ 1` when `inverted`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CnotOp {
    pub control: QubitIndex,
    pub target: QubitIndex,
    pub inverted: bool,
}

impl CnotOp {
    pub fn new(control: usize, target: usize) -> Result<Self> {
        Self::with_inversion(control, target, false)
    }

    pub fn inverted(control: usize, target: usize) -> Result<Self> {
        Self::with_inversion(control, target, true)
    }

    pub fn with_inversion(control: usize, target: usize, inverted: bool) -> Result<Self> {
        if control == target {
            return Err(Error::SameWire(control));
        }
        Ok(CnotOp { control: QubitIndex(control), target: QubitIndex(target), inverted })
    }

    /// Image of a basis index.
    pub fn map_index(&self, index: usize, n_qubits: usize) -> usize {
        let cs = self.control.shift(n_qubits);
        let ts = self.target.shift(n_qubits);
        let flip = ((index >> cs) & 1) ^ usize::from(self.inverted);
        index ^ (flip << ts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliOp {
    pub wire: QubitIndex,
    pub pauli: Pauli,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    Rotation(RotationOp),
    Cnot(CnotOp),
    Pauli(PauliOp),
}

impl Gate {
    pub fn wires(&self) -> Vec<QubitIndex> {
        match self {
            Gate::Rotation(r) => vec![r.wire],
            Gate::Cnot(c) => vec![c.control, c.target],
            Gate::Pauli(p) => vec![p.wire],
        }
    }

    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        match self {
            Gate::Rotation(r) => apply_rotation(psi, r),
            Gate::Cnot(c) => apply_cnot(psi, c),
            Gate::Pauli(p) => apply_single_qubit(psi, p.wire, &p.pauli.matrix()),
        }
    }

    /// Classical image of a basis index, if the gate permutes the basis.
    fn map_index(&self, index: usize, n_qubits: usize) -> Option<usize> {
        match self {
            Gate::Cnot(c) => Some(c.map_index(index, n_qubits)),
            Gate::Pauli(PauliOp { wire, pauli: Pauli::X }) => Some(index ^ (1 << wire.shift(n_qubits))),
            Gate::Pauli(PauliOp { pauli: Pauli::I, .. }) => Some(index),
            _ => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Rotation(r) if (r.phi - FRAC_PI_2).abs() < 1e-15 => write!(f, "R({},{})", r.wire, r.theta),
            Gate::Rotation(r) => write!(f, "R({},{},{})", r.wire, r.theta, r.phi),
            Gate::Cnot(c) if c.inverted => write!(f, "P!({},{})", c.control, c.target),
            Gate::Cnot(c) => write!(f, "P({},{})", c.control, c.target),
            Gate::Pauli(p) => {
                let name = ["I", "X", "Y", "Z"][p.pauli.index()];
                write!(f, "{}({})", name, p.wire)
            }
        }
    }
}

pub fn apply_rotation(psi: &PureState, op: &RotationOp) -> Result<PureState> {
    if !op.theta.is_finite() || !op.phi.is_finite() {
        return Err(Error::Parse(format!("non-finite rotation angle on wire {}", op.wire)));
    }
    apply_single_qubit(psi, op.wire, &op.matrix())
}

pub fn apply_cnot(psi: &PureState, op: &CnotOp) -> Result<PureState> {
    let n = psi.n_qubits();
    op.control.checked(n)?;
    op.target.checked(n)?;
    if op.control == op.target {
        return Err(Error::SameWire(op.control.0));
    }
    let mut out = vec![C64::new(0.0, 0.0); psi.dim()];
    for (idx, amp) in psi.amplitudes().iter().enumerate() {
        out[op.map_index(idx, n)] = *amp;
    }
    Ok(PureState::from_unitary_image(n, out))
}

/// Ordered gate list; `ops[0]` acts first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit { n_qubits, ops: Vec::new() }
    }

    pub fn from_ops(n_qubits: usize, ops: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits);
        for op in ops {
            c.push(op)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for w in gate.wires() {
            w.checked(self.n_qubits)?;
        }
        if let Gate::Cnot(c) = gate {
            if c.control == c.target {
                return Err(Error::SameWire(c.control.0));
            }
        }
        self.ops.push(gate);
        Ok(())
    }

    pub fn cnot(mut self, control: usize, target: usize) -> Result<Self> {
        self.push(Gate::Cnot(CnotOp::new(control, target)?))?;
        Ok(self)
    }

    pub fn rotation(mut self, wire: usize, theta: f64) -> Result<Self> {
        self.push(Gate::Rotation(RotationOp::equatorial(wire, theta)))?;
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn cnot_count(&self) -> usize {
        self.ops.iter().filter(|g| matches!(g, Gate::Cnot(_))).count()
    }

    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: psi.n_qubits() });
        }
        let mut state = psi.clone();
        for op in &self.ops {
            state = op.apply(&state)?;
        }
        Ok(state)
    }

    /// Full `2^n × 2^n` matrix; column `j` is the image of `|j⟩`.
    pub fn unitary(&self) -> Result<DMatrix<C64>> {
        if self.n_qubits > MAX_UNITARY_QUBITS {
            return Err(Error::CapacityExceeded { requested: self.n_qubits, max: MAX_UNITARY_QUBITS });
        }
        let d = 1usize << self.n_qubits;
        let mut u = DMatrix::<C64>::zeros(d, d);
        for j in 0..d {
            let col = self.apply(&PureState::basis(self.n_qubits, j)?)?;
            for (i, a) in col.amplitudes().iter().enumerate() {
                u[(i, j)] = *a;
            }
        }
        Ok(u)
    }

    /// Basis permutation realized by a circuit of CNOTs and σ1 gates:
    /// `perm[i]` is the image of `|i⟩`.
    pub fn permutation(&self) -> Result<Vec<usize>> {
        let d = 1usize << self.n_qubits;
        (0..d)
            .map(|i| {
                self.ops
                    .iter()
                    .try_fold(i, |idx, g| g.map_index(idx, self.n_qubits).ok_or(Error::NotClassical))
            })
            .collect()
    }

    /// Reverses the gate order. This is the inverse for circuits whose gates
    /// are self-inverse (CNOTs and Paulis).
    pub fn reversed(&self) -> Circuit {
        let mut ops = self.ops.clone();
        ops.reverse();
        Circuit { n_qubits: self.n_qubits, ops }
    }

    /// Parses whitespace-separated `P(c,t)`, `P!(c,t)`, `P(!c,t)`, `R(w,θ[,φ])`
    /// and `X(w)`/`Y(w)`/`Z(w)`, applied left to right.
    pub fn parse(n_qubits: usize, text: &str) -> Result<Self> {
        let mut c = Circuit::new(n_qubits);
        for token in text.split_whitespace() {
            for gate in parse_token(token)? {
                c.push(gate)?;
            }
        }
        Ok(c)
    }

    /// Parses an operator product such as `P21 P02 P10`, which acts right to
    /// left. A `!` before either index is σ1 on that wire ahead of the CNOT:
    /// `P1!2` flips the target, `P!12` leaves wire 1 complemented.
    pub fn from_operator_product(n_qubits: usize, text: &str) -> Result<Self> {
        let mut ops = Vec::new();
        for token in text.split_whitespace().rev() {
            ops.extend(parse_product_token(token)?);
        }
        Circuit::from_ops(n_qubits, ops)
    }

    /// Inverse of [`Circuit::from_operator_product`] for circuits of CNOTs
    /// with an optional preceding σ1 on the control.
    pub fn to_operator_product(&self) -> Result<String> {
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < self.ops.len() {
            match (self.ops[i], self.ops.get(i + 1)) {
                (Gate::Pauli(PauliOp { wire, pauli: Pauli::X }), Some(Gate::Cnot(c))) if c.control == wire => {
                    tokens.push(format!("P!{}{}{}", c.control, if c.inverted { "!" } else { "" }, c.target));
                    i += 2;
                }
                (Gate::Cnot(c), _) => {
                    tokens.push(format!("P{}{}{}", c.control, if c.inverted { "!" } else { "" }, c.target));
                    i += 1;
                }
                _ => return Err(Error::NotClassical),
            }
        }
        tokens.reverse();
        Ok(tokens.join(" "))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ops.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Convenience wrapper matching [`Circuit::unitary`].
pub fn circuit_unitary(c: &Circuit) -> Result<DMatrix<C64>> {
    c.unitary()
}

fn parse_wire(s: &str, token: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad wire '{s}' in '{token}'")))
}

fn parse_angle(s: &str, token: &str) -> Result<f64> {
    let v = s
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad angle '{s}' in '{token}'")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite angle in '{token}'")));
    }
    Ok(v)
}

fn parse_token(token: &str) -> Result<Vec<Gate>> {
    let bad = || Error::Parse(format!("unrecognized gate '{token}'"));
    let open = token.find('(').ok_or_else(bad)?;
    if !token.ends_with(')') {
        return Err(bad());
    }
    let head = &token[..open];
    let args: Vec<&str> = token[open + 1..token.len() - 1].split(',').collect();
    match (head, args.as_slice()) {
        ("P" | "P!", [c, t]) => {
            let inverted = head == "P!";
            let (bar_c, c) = match c.trim().strip_prefix('!') {
                Some(rest) => (true, rest),
                None => (false, *c),
            };
            let (bar_t, t) = match t.trim().strip_prefix('!') {
                Some(rest) => (true, rest),
                None => (false, *t),
            };
            let c = parse_wire(c, token)?;
            let t = parse_wire(t, token)?;
            let mut gates = Vec::new();
            if bar_c {
                gates.push(Gate::Pauli(PauliOp { wire: QubitIndex(c), pauli: Pauli::X }));
            }
            gates.push(Gate::Cnot(CnotOp::with_inversion(c, t, inverted ^ bar_t)?));
            Ok(gates)
        }
        ("R", [w, theta]) => Ok(vec![Gate::Rotation(RotationOp::equatorial(
            parse_wire(w, token)?,
            parse_angle(theta, token)?,
        ))]),
        ("R", [w, theta, phi]) => Ok(vec![Gate::Rotation(RotationOp {
            wire: QubitIndex(parse_wire(w, token)?),
            theta: parse_angle(theta, token)?,
            phi: parse_angle(phi, token)?,
        })]),
        ("I" | "X" | "Y" | "Z", [w]) => {
            let pauli = match head {
                "I" => Pauli::I,
                "X" => Pauli::X,
                "Y" => Pauli::Y,
                _ => Pauli::Z,
            };
            Ok(vec![Gate::Pauli(PauliOp { wire: QubitIndex(parse_wire(w, token)?), pauli })])
        }
        _ => Err(bad()),
    }
}

fn parse_product_token(token: &str) -> Result<Vec<Gate>> {
    let bad = || Error::Parse(format!("unrecognized operator '{token}'"));
    let body = token.strip_prefix('P').ok_or_else(bad)?;
    let mut wires = Vec::new();
    let mut bar = false;
    for ch in body.chars() {
        match ch {
            '!' if !bar => bar = true,
            d if d.is_ascii_digit() => {
                wires.push((bar, d as usize - '0' as usize));
                bar = false;
            }
            _ => return Err(bad()),
        }
    }
    let [(bar_c, c), (bar_t, t)] = wires[..] else {
        return Err(bad());
    };
    if bar {
        return Err(bad());
    }
    let mut gates = Vec::new();
    if bar_c {
        gates.push(Gate::Pauli(PauliOp { wire: QubitIndex(c), pauli: Pauli::X }));
    }
    gates.push(Gate::Cnot(CnotOp::with_inversion(c, t, bar_t)?));
    Ok(gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::{equatorial_qubit, tensor};
    use std::f64::consts::FRAC_PI_4;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn real(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn rotation_matrix_examples() {
        for phi in [0.0, 0.7, FRAC_PI_2, 3.0] {
            let r = rotation_matrix(0.0, phi);
            assert!((r - Matrix2::identity()).norm() < 1e-15);
        }
        for theta in [0.1, 0.9, -1.7] {
            let r = rotation_matrix(theta, FRAC_PI_2);
            let (s, c) = theta.sin_cos();
            assert!(close(r[(0, 0)], real(c)) && close(r[(1, 0)], real(s)));
            assert!(close(r[(0, 1)], real(-s)) && close(r[(1, 1)], real(c)));
            let u = r * r.adjoint();
            assert!((u - Matrix2::identity()).norm() < 1e-12);
            let back = r * rotation_matrix(-theta, FRAC_PI_2);
            assert!((back - Matrix2::identity()).norm() < 1e-12);
        }
    }

    #[test]
    fn apply_rotation_examples() {
        let zero = PureState::basis(1, 0).unwrap();
        let plus = apply_rotation(&zero, &RotationOp::equatorial(0, FRAC_PI_4)).unwrap();
        assert!(plus.projector_distance(&equatorial_qubit(FRAC_PI_4)).unwrap() < 1e-12);

        let t1 = 0.37;
        let out = apply_rotation(&PureState::basis(2, 0).unwrap(), &RotationOp::equatorial(0, t1)).unwrap();
        assert!(close(out.amplitude(0b00), real(t1.cos())));
        assert!(close(out.amplitude(0b10), real(t1.sin())));
        assert!(close(out.amplitude(0b01), real(0.0)));

        let psi = PureState::from_real(&[0.3, 0.1, -0.5, 0.8]).unwrap();
        assert_eq!(apply_rotation(&psi, &RotationOp::equatorial(1, 0.0)).unwrap(), psi);

        assert!(matches!(
            apply_rotation(&psi, &RotationOp::equatorial(2, 0.1)),
            Err(Error::IndexOutOfRange { index: 2, n_qubits: 2 })
        ));
    }

    #[test]
    fn apply_cnot_examples() {
        let p01 = CnotOp::new(0, 1).unwrap();
        let out = apply_cnot(&PureState::basis(2, 0b10).unwrap(), &p01).unwrap();
        assert_eq!(out, PureState::basis(2, 0b11).unwrap());

        let psi = PureState::from_real(&[0.6, 0.8]).unwrap();
        let input = tensor(&psi, &PureState::basis(1, 0).unwrap()).unwrap();
        let out = apply_cnot(&input, &p01).unwrap();
        let expect = [real(0.6), real(0.0), real(0.0), real(0.8)];
        assert!(out.amplitudes().iter().zip(expect).all(|(a, b)| close(*a, b)));

        let inv = CnotOp::inverted(0, 1).unwrap();
        let out = apply_cnot(&PureState::basis(2, 0b00).unwrap(), &inv).unwrap();
        assert_eq!(out, PureState::basis(2, 0b01).unwrap());

        assert_eq!(CnotOp::new(1, 1), Err(Error::SameWire(1)));
        let bad = CnotOp { control: QubitIndex(0), target: QubitIndex(3), inverted: false };
        assert!(matches!(apply_cnot(&input, &bad), Err(Error::IndexOutOfRange { index: 3, .. })));
    }

    #[test]
    fn unitary_examples() {
        let id = Circuit::new(2).unitary().unwrap();
        assert!((id - DMatrix::<C64>::identity(4, 4)).norm() < 1e-15);

        let u = Circuit::new(2).cnot(0, 1).unwrap().unitary().unwrap();
        let mut expect = DMatrix::<C64>::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 1), (3, 2), (2, 3)] {
            expect[(i, j)] = real(1.0);
        }
        assert!((u - expect).norm() < 1e-15);

        let swap = Circuit::from_operator_product(2, "P01 P10 P01").unwrap().unitary().unwrap();
        let mut expect = DMatrix::<C64>::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            expect[(i, j)] = real(1.0);
        }
        assert!((swap - expect).norm() < 1e-15);

        assert!(matches!(Circuit::new(13).unitary(), Err(Error::CapacityExceeded { requested: 13, max: 12 })));
    }

    #[test]
    fn text_notation_round_trip() {
        let c = Circuit::parse(3, "P(0,1) P!(1,2) R(2,0.25) R(0,0.5,1.5) X(1)").unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.to_string(), "P(0,1) P!(1,2) R(2,0.25) R(0,0.5,1.5) X(1)");
        assert_eq!(Circuit::parse(3, &c.to_string()).unwrap(), c);

        assert_eq!(Circuit::parse(2, "P(0,!1)").unwrap(), Circuit::parse(2, "P!(0,1)").unwrap());
        let barred = Circuit::parse(2, "P(!0,1)").unwrap();
        assert_eq!(barred.len(), 2);

        assert!(matches!(Circuit::parse(2, "P(0,0)"), Err(Error::SameWire(0))));
        assert!(matches!(Circuit::parse(2, "P(0,2)"), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(Circuit::parse(2, "Q(0,1)"), Err(Error::Parse(_))));
        assert!(matches!(Circuit::parse(2, "R(0,abc)"), Err(Error::Parse(_))));
        assert!(matches!(Circuit::parse(2, "R(0,inf)"), Err(Error::Parse(_))));
    }

    #[test]
    fn operator_product_acts_right_to_left() {
        let c = Circuit::from_operator_product(3, "P21 P02 P10").unwrap();
        let text: Vec<String> = c.ops().iter().map(|g| g.to_string()).collect();
        assert_eq!(text, ["P(1,0)", "P(0,2)", "P(2,1)"]);
        assert_eq!(c.to_operator_product().unwrap(), "P21 P02 P10");

        let c = Circuit::from_operator_product(3, "P12 P!20").unwrap();
        assert_eq!(c.to_string(), "X(2) P(2,0) P(1,2)");
        assert_eq!(c.to_operator_product().unwrap(), "P12 P!20");

        let c = Circuit::from_operator_product(2, "P0!1").unwrap();
        assert_eq!(c.to_string(), "P!(0,1)");

        for bad in ["P1", "P123", "Q01", "P0!", "P!!01", "P11"] {
            assert!(Circuit::from_operator_product(3, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn permutation_of_classical_circuits() {
        let c = Circuit::from_operator_product(3, "P10 P20").unwrap();
        // |x,y,z⟩ → |x⊕y⊕z, y, z⟩
        let perm = c.permutation().unwrap();
        assert_eq!(perm, vec![0, 5, 6, 3, 4, 1, 2, 7]);

        let rot = Circuit::new(1).rotation(0, 0.3).unwrap();
        assert_eq!(rot.permutation(), Err(Error::NotClassical));
    }

    #[test]
    fn bar_on_control_differs_from_bar_on_target() {
        let c_bar = Circuit::from_operator_product(2, "P!01").unwrap().permutation().unwrap();
        let t_bar = Circuit::from_operator_product(2, "P0!1").unwrap().permutation().unwrap();
        let mut target_bits_agree = true;
        for i in 0..4 {
            target_bits_agree &= (c_bar[i] & 1) == (t_bar[i] & 1);
        }
        // x̄ ⊕ y = x ⊕ ȳ on the target, but the control keeps its bar.
        assert!(target_bits_agree);
        assert_ne!(c_bar, t_bar);
        assert!((0..4).all(|i| (c_bar[i] >> 1) != (i >> 1)));
    }
}
