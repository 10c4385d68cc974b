//! CNOT networks for affine permutations of three-bit basis states, and the
//! twelve-row table of phase-covariant cloners.
//!
//! Basis index `i` encodes `|x,y,z⟩` as `i = 4x + 2y + z`. In an
//! [`AnfPolynomial`] mask, monomial `m` uses the same bit layout: bit 2 of
//! `m` is `x`, bit 1 is `y`, bit 0 is `z`, and `m = 0` is the constant.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::{Circuit, CnotOp, Gate};
use crate::prepsolver::{prep_circuit, solve_prep_angles, AngleTriple, PrepCoeffs};
use crate::qnum::{equatorial_qubit, fidelity, tensor, PureState, QubitIndex};

const WIRES: usize = 3;
const DIM: usize = 1 << WIRES;

/// A permutation of the eight basis states; `map[i]` is the image of `|i⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisBijection([u8; DIM]);

impl BasisBijection {
    pub fn new(map: [u8; DIM]) -> Result<Self> {
        let mut seen = [false; DIM];
        for &m in &map {
            if m as usize >= DIM || seen[m as usize] {
                return Err(Error::InvalidPermutation(format!("{map:?}")));
            }
            seen[m as usize] = true;
        }
        Ok(BasisBijection(map))
    }

    pub fn from_slice(images: &[usize]) -> Result<Self> {
        if images.len() != DIM {
            return Err(Error::InvalidPermutation(format!("expected 8 images, got {}", images.len())));
        }
        let mut map = [0u8; DIM];
        for (slot, &v) in map.iter_mut().zip(images) {
            *slot = u8::try_from(v).map_err(|_| Error::InvalidPermutation(format!("image {v} out of range")))?;
        }
        Self::new(map)
    }

    pub fn identity() -> Self {
        BasisBijection([0, 1, 2, 3, 4, 5, 6, 7])
    }

    pub fn map(&self) -> &[u8; DIM] {
        &self.0
    }

    pub fn apply(&self, index: usize) -> usize {
        self.0[index] as usize
    }

    /// Bit of output wire `wire` for input `index`.
    pub fn output_bit(&self, index: usize, wire: usize) -> u8 {
        (self.0[index] >> (WIRES - 1 - wire)) & 1
    }

    pub fn of_circuit(c: &Circuit) -> Result<Self> {
        if c.n_qubits() != WIRES {
            return Err(Error::DimensionMismatch { expected: WIRES, found: c.n_qubits() });
        }
        Self::from_slice(&c.permutation()?)
    }

    /// Transposition of wires 1 and 2 applied after `self`.
    pub fn swap_outputs_12(&self) -> Self {
        let mut map = self.0;
        for m in map.iter_mut() {
            let (y, z) = ((*m >> 1) & 1, *m & 1);
            *m = (*m & 0b100) | (z << 1) | y;
        }
        BasisBijection(map)
    }
}

impl fmt::Display for BasisBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// XOR of AND-monomials over `x, y, z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AnfPolynomial {
    /// Bit `m` set iff monomial `m` is present.
    pub mask: u8,
}

impl AnfPolynomial {
    pub fn degree(&self) -> u32 {
        (0..DIM as u8).filter(|m| self.mask >> m & 1 == 1).map(|m| m.count_ones()).max().unwrap_or(0)
    }

    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }

    pub fn constant(&self) -> u8 {
        self.mask & 1
    }

    /// Whether the variable on `wire` appears linearly.
    pub fn has_variable(&self, wire: usize) -> bool {
        self.mask >> (1u8 << (WIRES - 1 - wire)) & 1 == 1
    }

    pub fn evaluate(&self, index: usize) -> u8 {
        (0..DIM)
            .filter(|&m| self.mask >> m & 1 == 1 && index & m == m)
            .fold(0, |acc, _| acc ^ 1)
    }
}

impl fmt::Display for AnfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for m in (1..DIM).rev().filter(|m| m.count_ones() > 1).chain([4, 2, 1]) {
            if self.mask >> m & 1 == 1 {
                let t: String = ["x", "y", "z"]
                    .iter()
                    .enumerate()
                    .filter(|(w, _)| m >> (WIRES - 1 - w) & 1 == 1)
                    .map(|(_, v)| *v)
                    .collect();
                terms.push(t);
            }
        }
        if self.constant() == 1 {
            terms.push("1".into());
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&terms.join("⊕"))
    }
}

/// Zhegalkin polynomial of one output wire, by the binary Möbius transform.
pub fn anf_of(bij: &BasisBijection, output_bit: usize) -> AnfPolynomial {
    let mut t: [u8; DIM] = std::array::from_fn(|i| bij.output_bit(i, output_bit));
    for b in 0..WIRES {
        for i in 0..DIM {
            if i >> b & 1 == 1 {
                t[i] ^= t[i ^ (1 << b)];
            }
        }
    }
    AnfPolynomial { mask: t.iter().enumerate().fold(0, |acc, (m, &v)| acc | (v << m)) }
}

/// CNOTs on three wires, in application order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnotSequence {
    pub ops: Vec<CnotOp>,
}

impl CnotSequence {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn to_circuit(&self) -> Circuit {
        Circuit::from_ops(WIRES, self.ops.iter().map(|&c| Gate::Cnot(c)).collect()).expect("wires below three")
    }

    pub fn bijection(&self) -> BasisBijection {
        BasisBijection::of_circuit(&self.to_circuit()).expect("CNOTs permute the basis")
    }
}

impl fmt::Display for CnotSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_circuit().fmt(f)
    }
}

/// Linear part `a[row]` as a 3-bit column mask (bit `2 − c` for wire `c`) and
/// constant vector.
fn affine_parts(bij: &BasisBijection) -> Result<([u8; WIRES], [u8; WIRES])> {
    let mut lin = [0u8; WIRES];
    let mut cst = [0u8; WIRES];
    for w in 0..WIRES {
        let anf = anf_of(bij, w);
        if !anf.is_affine() {
            return Err(Error::NonAffine { bit: w, anf: anf.to_string() });
        }
        lin[w] = (0..WIRES).filter(|&c| anf.has_variable(c)).fold(0, |acc, c| acc | (1 << (WIRES - 1 - c)));
        cst[w] = anf.constant();
    }
    Ok((lin, cst))
}

/// Effect on the final output of flipping wire `t` right after gate `k`.
fn flip_contributions(ops: &[CnotOp]) -> Vec<u8> {
    ops.iter()
        .enumerate()
        .map(|(k, op)| {
            let mut bits = 1u8 << (WIRES - 1 - op.target.0);
            for later in &ops[k + 1..] {
                let c = (bits >> (WIRES - 1 - later.control.0)) & 1;
                bits ^= c << (WIRES - 1 - later.target.0);
            }
            bits
        })
        .collect()
}

/// CNOT network realizing an affine bijection.
///
/// The linear part is reduced to the identity by Gaussian elimination over
/// GF(2); each row operation is one CNOT and the circuit is the elimination
/// read backwards. Affine constants are absorbed by inverting a subset of the
/// emitted gates; a constant no subset reaches costs a `P(c,t) P!(c,t)` pair.
pub fn synthesize_cnots(bij: &BasisBijection) -> Result<CnotSequence> {
    let (mut a, cst) = affine_parts(bij)?;
    let col = |c: usize| 1u8 << (WIRES - 1 - c);
    let mut elim: Vec<(usize, usize)> = Vec::new();
    for c in 0..WIRES {
        if a[c] & col(c) == 0 {
            let r = (c + 1..WIRES).find(|&r| a[r] & col(c) != 0).ok_or(Error::Singular)?;
            a[c] ^= a[r];
            elim.push((r, c));
        }
        for r in 0..WIRES {
            if r != c && a[r] & col(c) != 0 {
                a[r] ^= a[c];
                elim.push((c, r));
            }
        }
    }
    let mut ops: Vec<CnotOp> = elim
        .iter()
        .rev()
        .map(|&(control, target)| CnotOp::new(control, target).expect("distinct rows"))
        .collect();

    let want = cst.iter().enumerate().fold(0u8, |acc, (w, &b)| acc | (b << (WIRES - 1 - w)));
    let contrib = flip_contributions(&ops);
    let mut best: Option<(u32, u32, u8)> = None;
    for subset in 0u32..(1 << ops.len()) {
        let reach = (0..ops.len()).filter(|k| subset >> k & 1 == 1).fold(0u8, |acc, k| acc ^ contrib[k]);
        let missing = reach ^ want;
        let cost = subset.count_ones() + 2 * missing.count_ones();
        if best.is_none_or(|(bc, bs, _)| (cost, subset) < (bc, bs)) {
            best = Some((cost, subset, missing));
        }
    }
    let (_, subset, missing) = best.expect("at least the empty subset");
    for (k, op) in ops.iter_mut().enumerate() {
        op.inverted = subset >> k & 1 == 1;
    }
    for t in 0..WIRES {
        if missing & col(t) != 0 {
            let c = (t + 1) % WIRES;
            ops.push(CnotOp::new(c, t).expect("distinct"));
            ops.push(CnotOp::inverted(c, t).expect("distinct"));
        }
    }
    let seq = CnotSequence { ops };
    debug_assert_eq!(seq.bijection(), *bij);
    Ok(seq)
}

/// All bijections sending each input label to a position carrying the same
/// label. Tied labels yield one candidate per assignment, sorted.
pub fn extract_bijection<L: Ord + Clone>(input: &[L; DIM], output: &[L; DIM]) -> Result<Vec<BasisBijection>> {
    let mut groups: BTreeMap<&L, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, l) in input.iter().enumerate() {
        groups.entry(l).or_default().0.push(i);
    }
    for (o, l) in output.iter().enumerate() {
        groups.entry(l).or_default().1.push(o);
    }
    if groups.values().any(|(i, o)| i.len() != o.len()) {
        return Err(Error::LabelMismatch);
    }
    let mut partial = vec![[0u8; DIM]];
    for (ins, outs) in groups.values() {
        let mut next = Vec::new();
        for perm in permutations(outs) {
            for base in &partial {
                let mut m = *base;
                for (i, o) in ins.iter().zip(&perm) {
                    m[*i] = *o as u8;
                }
                next.push(m);
            }
        }
        partial = next;
    }
    let mut out: Vec<BasisBijection> = partial.into_iter().map(BasisBijection).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Amplitude label: block (`a` for `x = 0`, `b` for `x = 1`) and weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Weight {
    /// `1/2 + 1/√8`
    X,
    /// `1/√8`
    Y,
    /// `1/2 − 1/√8`
    Z,
}

impl Weight {
    fn from_digit(d: char) -> Option<Self> {
        match d {
            '1' => Some(Weight::X),
            '2' => Some(Weight::Y),
            '4' => Some(Weight::Z),
            _ => None,
        }
    }

    pub fn value(self) -> f64 {
        let r = 8f64.sqrt().recip();
        match self {
            Weight::X => 0.5 + r,
            Weight::Y => r,
            Weight::Z => 0.5 - r,
        }
    }

    /// `X ↔ Z`.
    pub fn complement(self) -> Self {
        match self {
            Weight::X => Weight::Z,
            Weight::Y => Weight::Y,
            Weight::Z => Weight::X,
        }
    }
}

pub type AmplitudeLabel = (char, Weight);

/// Labels of the formal three-qubit input for a coefficient pattern: the
/// `x = 0` block carries the pattern and the `x = 1` block its complement.
pub fn input_labels(pattern: &[Weight; 4]) -> [AmplitudeLabel; DIM] {
    std::array::from_fn(|i| if i < 4 { ('a', pattern[i]) } else { ('b', pattern[i - 4].complement()) })
}

/// Labels of the cloner output shared by every row.
pub fn output_labels() -> [AmplitudeLabel; DIM] {
    use Weight::*;
    [('a', X), ('b', Y), ('b', Y), ('a', Z), ('b', Z), ('a', Y), ('a', Y), ('b', X)]
}

/// Basic cloner permutation `|x,y,z⟩ → |x⊕y⊕z, y, z⟩`.
pub fn table1_bijection() -> BasisBijection {
    BasisBijection([0, 5, 6, 3, 4, 1, 2, 7])
}

/// One row of the phase-covariant cloner table, as printed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Table2Row {
    pub index: usize,
    /// Weights of `|00⟩, |01⟩, |10⟩, |11⟩`, digits `1 = X`, `2 = Y`, `4 = Z`.
    pub pattern: &'static str,
    /// Printed angles in arc minutes.
    pub angles_arcmin: [i32; 3],
    /// Operator products, rightmost factor first; `!` marks a barred index.
    pub circuits: [&'static str; 2],
    /// Output forms over `x,y,z`; upper case is a complemented variable.
    pub forms: [&'static str; 2],
}

const fn dm(deg: i32, min: i32) -> i32 {
    if deg < 0 {
        deg * 60 - min
    } else {
        deg * 60 + min
    }
}

pub const TABLE2: [Table2Row; 12] = [
    Table2Row {
        index: 1,
        pattern: "1224",
        angles_arcmin: [dm(22, 30), dm(0, 0), dm(22, 30)],
        circuits: ["P10 P20", "P12 P21 P12 P10 P20"],
        forms: ["x^y^z,y,z", "x^y^z,z,y"],
    },
    Table2Row {
        index: 2,
        pattern: "1242",
        angles_arcmin: [dm(27, 20), dm(15, 0), dm(17, 40)],
        circuits: ["P12 P20", "P12 P21 P20"],
        forms: ["x^z,y,y^z", "x^z,y^z,y"],
    },
    Table2Row {
        index: 3,
        pattern: "1422",
        angles_arcmin: [dm(17, 40), dm(15, 0), dm(27, 20)],
        circuits: ["P21 P12 P10", "P21 P10"],
        forms: ["x^y,z,y^z", "x^y,y^z,z"],
    },
    Table2Row {
        index: 4,
        pattern: "2124",
        angles_arcmin: [dm(62, 40), dm(-15, 0), dm(17, 40)],
        circuits: ["P12 P!20", "P12 P20 P!21"],
        forms: ["x^Z,y,y^Z", "x^Z,y^Z,y"],
    },
    Table2Row {
        index: 5,
        pattern: "2142",
        angles_arcmin: [dm(67, 30), dm(0, 0), dm(22, 30)],
        circuits: ["P10 P!20", "P21 P12 P10 P21 P!20"],
        forms: ["x^y^Z,y,Z", "x^y^Z,Z,y"],
    },
    Table2Row {
        index: 6,
        pattern: "2214",
        angles_arcmin: [dm(17, 40), dm(-15, 0), dm(62, 40)],
        circuits: ["P21 P12 P!10", "P10 P!20"],
        forms: ["x^Y,z,Y^z", "x^Y,Y^z,z"],
    },
    Table2Row {
        index: 7,
        pattern: "2241",
        angles_arcmin: [dm(-17, 40), dm(75, 0), dm(-27, 20)],
        circuits: ["P21 P12 P!10", "P!21 P!10"],
        forms: ["x^Y,Z,y^z", "x^Y,y^z,Z"],
    },
    Table2Row {
        index: 8,
        pattern: "2412",
        angles_arcmin: [dm(22, 30), dm(0, 0), dm(67, 30)],
        circuits: ["P12 P21 P12 P!10 P20", "P!10 P20"],
        forms: ["x^Y^z,z,Y", "x^Y^z,Y,z"],
    },
    Table2Row {
        index: 9,
        pattern: "2421",
        angles_arcmin: [dm(-27, 20), dm(75, 0), dm(-17, 40)],
        circuits: ["P12 P!20 P21", "P!12 P!20"],
        forms: ["x^Z,y^z,Y", "x^Z,Y,y^z"],
    },
    Table2Row {
        index: 10,
        pattern: "4221",
        angles_arcmin: [dm(67, 30), dm(0, 0), dm(67, 30)],
        circuits: ["P12 P21 P12 P!10 P!20", "P!10 P!20"],
        forms: ["x^y^z,Z,Y", "x^y^z,Y,Z"],
    },
    Table2Row {
        index: 11,
        pattern: "4212",
        angles_arcmin: [dm(27, 20), dm(-15, 0), dm(72, 20)],
        circuits: ["P!12 P21 P20", "P!12 P20"],
        forms: ["x^z,Y^z,Y", "x^z,Y,Y^z"],
    },
    Table2Row {
        index: 12,
        pattern: "4122",
        angles_arcmin: [dm(72, 20), dm(-15, 0), dm(27, 20)],
        circuits: ["P!21 P10", "P!21 P12 P10"],
        forms: ["x^y,y^Z,Z", "x^y,Z,y^Z"],
    },
];

impl Table2Row {
    pub fn get(index: usize) -> Option<&'static Table2Row> {
        TABLE2.iter().find(|r| r.index == index)
    }

    pub fn weights(&self) -> [Weight; 4] {
        let d: Vec<Weight> = self.pattern.chars().map(|c| Weight::from_digit(c).expect("table digit")).collect();
        [d[0], d[1], d[2], d[3]]
    }

    pub fn coeffs(&self) -> PrepCoeffs {
        PrepCoeffs(self.weights().map(Weight::value))
    }

    pub fn printed_angles(&self) -> AngleTriple {
        let [a, b, c] = self.angles_arcmin.map(|m| m as f64 / 60.0);
        AngleTriple::from_degrees(a, b, c)
    }

    pub fn circuit(&self, k: usize) -> Result<Circuit> {
        Circuit::from_operator_product(WIRES, self.circuits[k])
    }

    /// The printed output form as a bijection.
    pub fn form_bijection(&self, k: usize) -> Result<BasisBijection> {
        parse_form(self.forms[k])
    }
}

/// Parses `"x^y^Z,y,Z"`: three XOR expressions, upper case complemented.
pub fn parse_form(text: &str) -> Result<BasisBijection> {
    let exprs: Vec<&str> = text.split(',').collect();
    if exprs.len() != WIRES {
        return Err(Error::Parse(format!("form '{text}' needs three components")));
    }
    let mut map = [0u8; DIM];
    for (i, slot) in map.iter_mut().enumerate() {
        let bits = [(i >> 2) & 1, (i >> 1) & 1, i & 1];
        for (w, e) in exprs.iter().enumerate() {
            let mut v = 0usize;
            for term in e.split('^') {
                v ^= match term.trim() {
                    "x" => bits[0],
                    "y" => bits[1],
                    "z" => bits[2],
                    "X" => 1 ^ bits[0],
                    "Y" => 1 ^ bits[1],
                    "Z" => 1 ^ bits[2],
                    "1" => 1,
                    "0" => 0,
                    other => return Err(Error::Parse(format!("bad term '{other}' in '{text}'"))),
                };
            }
            *slot |= (v as u8) << (WIRES - 1 - w);
        }
    }
    BasisBijection::new(map)
}

/// Tolerances of the four row checks.
pub const ANGLE_TOLERANCE_DEG: f64 = 0.2;
pub const FIDELITY_TOLERANCE: f64 = 1e-9;
pub const SWAP_TOLERANCE: f64 = 1e-10;
const ROW_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowReport {
    pub row: usize,
    pub pattern: &'static str,
    pub printed_angles: [String; 3],
    /// Closest verified solution, degrees.
    pub solved_angles_deg: Option<[f64; 3]>,
    pub angle_error_deg: Option<f64>,
    /// Worst `|F − (1/2 + 1/√8)|` per circuit over clone wires 1 and 2 for
    /// input `ψ0 ⊗ prep`.
    pub fidelity_error: [f64; 2],
    /// The same quantity for the formal input whose `x = 1` block carries
    /// the complemented pattern. Informational only.
    pub formal_input_fidelity_error: [f64; 2],
    pub swap_error: f64,
    /// Whether each printed circuit realizes its printed output form.
    pub forms_match: [bool; 2],
    pub synthesized: Vec<String>,
    pub angles: CheckResult,
    pub fidelity: CheckResult,
    pub swap_symmetry: CheckResult,
    pub synthesis: CheckResult,
}

impl RowReport {
    pub fn checks(&self) -> [(&'static str, &CheckResult); 4] {
        [
            ("angles", &self.angles),
            ("fidelity", &self.fidelity),
            ("swap_symmetry", &self.swap_symmetry),
            ("synthesis", &self.synthesis),
        ]
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed)
    }
}

/// Signed degrees as `d°m′`, rounded to the minute.
pub fn format_degmin(deg: f64) -> String {
    let total = (deg.abs() * 60.0).round() as i64;
    let sign = if deg < 0.0 && total != 0 { "-" } else { "" };
    format!("{sign}{}°{:02}′", total / 60, total % 60)
}

fn clone_fidelity_error(circuit: &Circuit, input_for: &dyn Fn(&PureState) -> Result<PureState>) -> Result<f64> {
    let target = 0.5 + 8f64.sqrt().recip();
    let mut worst: f64 = 0.0;
    for k in 0..ROW_SAMPLES {
        let psi = equatorial_qubit(2.0 * PI * k as f64 / ROW_SAMPLES as f64);
        let out = circuit.apply(&input_for(&psi)?)?;
        for w in [1, 2] {
            worst = worst.max((fidelity(&psi, &out.reduced(QubitIndex(w))?)? - target).abs());
        }
    }
    Ok(worst)
}

fn formal_input(psi: &PureState, weights: &[Weight; 4]) -> Result<PureState> {
    let (a, b) = (psi.amplitude(0), psi.amplitude(1));
    let amps = (0..DIM)
        .map(|i| if i < 4 { a * weights[i].value() } else { b * weights[i - 4].complement().value() })
        .collect();
    PureState::from_amplitudes(amps)
}

/// Runs the four checks on one row.
pub fn verify_table2(row: &Table2Row) -> Result<RowReport> {
    let printed = row.printed_angles();
    let coeffs = row.coeffs();

    let sols = solve_prep_angles(&coeffs)?;
    let closest = sols
        .iter()
        .map(|s| (s.angles.circular_distance(&printed).to_degrees(), s.angles))
        .min_by(|a, b| a.0.total_cmp(&b.0));
    let angle_error_deg = closest.map(|c| c.0);
    let angles = CheckResult {
        passed: angle_error_deg.is_some_and(|e| e <= ANGLE_TOLERANCE_DEG),
        detail: match closest {
            Some((e, _)) => format!("closest solution differs by {e:.4}°"),
            None => "no solution".into(),
        },
    };

    let prep_angles = closest.map(|c| c.1).unwrap_or(printed);
    let prep = prep_circuit(&prep_angles).apply(&PureState::basis(2, 0)?)?;
    let circuits = [row.circuit(0)?, row.circuit(1)?];

    let product = |psi: &PureState| tensor(psi, &prep);
    let weights = row.weights();
    let formal = |psi: &PureState| formal_input(psi, &weights);
    let mut fidelity_error = [0.0; 2];
    let mut formal_input_fidelity_error = [0.0; 2];
    for k in 0..2 {
        fidelity_error[k] = clone_fidelity_error(&circuits[k], &product)?;
        formal_input_fidelity_error[k] = clone_fidelity_error(&circuits[k], &formal)?;
    }
    let fidelity_check = CheckResult {
        passed: fidelity_error.iter().all(|e| *e <= FIDELITY_TOLERANCE),
        detail: format!(
            "max |F − 0.853553| = {:.3e}, {:.3e} (formal input: {:.3e}, {:.3e})",
            fidelity_error[0], fidelity_error[1], formal_input_fidelity_error[0], formal_input_fidelity_error[1]
        ),
    };

    let mut swap_error: f64 = 0.0;
    for k in 0..ROW_SAMPLES {
        let psi = equatorial_qubit(2.0 * PI * k as f64 / ROW_SAMPLES as f64);
        let input = product(&psi)?;
        let a = circuits[0].apply(&input)?.swap_wires(QubitIndex(1), QubitIndex(2))?;
        let b = circuits[1].apply(&input)?;
        swap_error = swap_error.max(a.projector_distance(&b)?);
    }
    let swap_symmetry = CheckResult {
        passed: swap_error <= SWAP_TOLERANCE,
        detail: format!("max projector difference {swap_error:.3e}"),
    };

    let printed_bij = [BasisBijection::of_circuit(&circuits[0])?, BasisBijection::of_circuit(&circuits[1])?];
    let forms_match = [row.form_bijection(0)? == printed_bij[0], row.form_bijection(1)? == printed_bij[1]];
    let candidates = extract_bijection(&input_labels(&weights), &output_labels())?;
    let mut synthesized = Vec::new();
    let mut matched = [false; 2];
    for cand in &candidates {
        let Ok(seq) = synthesize_cnots(cand) else { continue };
        let realized = seq.bijection();
        for k in 0..2 {
            if realized == printed_bij[k] {
                matched[k] = true;
            }
        }
        synthesized.push(seq.to_circuit().to_operator_product()?);
    }
    let synthesis = CheckResult {
        passed: matched.iter().all(|m| *m),
        detail: format!(
            "{} label-consistent bijections; circuit 1 {}, circuit 2 {}",
            candidates.len(),
            if matched[0] { "matched" } else { "unmatched" },
            if matched[1] { "matched" } else { "unmatched" }
        ),
    };

    Ok(RowReport {
        row: row.index,
        pattern: row.pattern,
        printed_angles: printed.degrees().map(format_degmin),
        solved_angles_deg: closest.map(|c| c.1.degrees()),
        angle_error_deg,
        fidelity_error,
        formal_input_fidelity_error,
        swap_error,
        forms_match,
        synthesized,
        angles,
        fidelity: fidelity_check,
        swap_symmetry,
        synthesis,
    })
}

pub fn verify_all_rows() -> Result<Vec<RowReport>> {
    TABLE2.iter().map(verify_table2).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleConstant {
    pub expression: &'static str,
    pub exact_deg: f64,
    pub printed: &'static str,
    pub printed_deg: f64,
    pub deviation_deg: f64,
    /// Whether the printed value is exact rather than a rounding.
    pub exact: bool,
}

/// The four arccos identities used for the table angles.
pub fn angle_constant_check() -> Vec<AngleConstant> {
    let items: [(&str, f64, &str, f64); 4] = [
        ("arccos√(1/2+1/√8)", (0.5 + 8f64.sqrt().recip()).sqrt().acos(), "22°30′", 22.5),
        ("arccos(√(2+√3)/2)", ((2.0 + 3f64.sqrt()).sqrt() / 2.0).acos(), "15°", 15.0),
        ("arccos√(1/2+1/√6)", (0.5 + 6f64.sqrt().recip()).sqrt().acos(), "17°40′", 17.0 + 40.0 / 60.0),
        ("arccos√(½(1+1/√3))", (0.5 * (1.0 + 3f64.sqrt().recip())).sqrt().acos(), "27°20′", 27.0 + 20.0 / 60.0),
    ];
    items
        .iter()
        .map(|&(expression, rad, printed, printed_deg)| {
            let exact_deg = rad.to_degrees();
            let deviation_deg = exact_deg - printed_deg;
            AngleConstant { expression, exact_deg, printed, printed_deg, deviation_deg, exact: deviation_deg.abs() < 1e-9 }
        })
        .collect()
}
