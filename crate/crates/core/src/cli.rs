//! Command-line front end. Every command builds a [`ReportDocument`] and an
//! exit status; `main` only prints.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::machines::{
    average_fidelity, orthogonal_decomposition, pointwise_fidelities, scaling_factor, AveragingMeasure, Machine,
    Sampling, DEFAULT_QUAD_ORDER,
};
use crate::prepsolver::{bh_from_pc_system, pc_optimize, solve_prep_angles, PrepCoeffs};
use crate::qnum::equatorial_qubit;
use crate::synth::{angle_constant_check, anf_of, format_degmin, synthesize_cnots, verify_table2, BasisBijection, Table2Row, TABLE2};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qclone", version, about = "Elementary quantum cloning machines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; defaults to csv for run and sweep, json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Read angle arguments in degrees.
    #[arg(long, global = true)]
    pub deg: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Clone one equatorial input and report fidelities.
    Run(RunArgs),
    /// Tabulate fidelities over a parameter grid.
    Sweep(SweepArgs),
    /// Preparation angles for given amplitudes.
    SolvePrep {
        /// C1,C2,C3,C4
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Maximize f0² over the phase-covariant constraint system.
    OptimizePc {
        /// Pin z = 0, which gives the BH weights.
        #[arg(long)]
        z_zero: bool,
    },
    /// CNOT network for a basis permutation.
    Synth {
        /// Images of |0⟩..|7⟩, comma separated.
        #[arg(long)]
        perm: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        /// Restrict table2 to one row.
        #[arg(long)]
        row: Option<usize>,
    },
    /// Print the arccos identities behind the table angles.
    Constants,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(value_enum)]
    pub machine: MachineName,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    /// Rotation of the blank qubit (two-op only).
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[command(flatten)]
    pub averaging: AveragingArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub machine: MachineName,
    #[arg(long, value_enum, default_value = "theta")]
    pub param: SweepParam,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    /// Fixed φ when sweeping θ on the two-op machine.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[command(flatten)]
    pub averaging: AveragingArgs,
}

#[derive(Args, Debug)]
pub struct AveragingArgs {
    #[arg(long, value_enum, default_value = "polar")]
    pub measure: MeasureName,
    /// Gauss–Legendre order.
    #[arg(long, default_value_t = DEFAULT_QUAD_ORDER)]
    pub quad: usize,
    /// Use this many Monte Carlo samples instead of quadrature.
    #[arg(long)]
    pub mc_samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl AveragingArgs {
    fn sampling(&self) -> Result<Sampling, String> {
        match self.mc_samples {
            Some(0) => Err("--mc-samples must be positive".into()),
            Some(samples) => Ok(Sampling::MonteCarlo { samples, seed: self.seed }),
            None if self.quad == 0 => Err("--quad must be positive".into()),
            None => Ok(Sampling::GaussLegendre { order: self.quad }),
        }
    }

    fn measure(&self) -> AveragingMeasure {
        match self.measure {
            MeasureName::Equatorial => AveragingMeasure::EquatorialUniform,
            MeasureName::Polar => AveragingMeasure::PolarUniform,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MachineName {
    OneOp,
    TwoOp,
    Bh,
    Pc,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Theta,
    Phi,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureName {
    Equatorial,
    Polar,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyTarget {
    Table2,
    Invariants,
    All,
}

/// A cell of a tabular report.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Missing,
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_sig(*v),
            Cell::Missing => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) | Cell::Missing => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

/// `v` with 15 significant digits, shortest form, `.` separator.
pub fn format_sig(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "NaN".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.14e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let rounded: f64 = sci.parse().expect("round trip");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let s = format!("{rounded:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{exp}")
    }
}

/// Rendered output of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportDocument {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Additional top-level JSON members.
    pub extra: Map<String, Value>,
    /// Emit one JSON object per row instead of a single document.
    pub json_lines: bool,
}

impl ReportDocument {
    fn new(command: &str, columns: &[&str]) -> Self {
        ReportDocument {
            metadata: vec![
                ("tool".into(), "qclone".into()),
                ("version".into(), env!("CARGO_PKG_VERSION").into()),
                ("command".into(), command.into()),
            ],
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            extra: Map::new(),
            json_lines: false,
        }
    }

    fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn row_object(&self, row: &[Cell]) -> Value {
        Value::Object(self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = String::new();
                for (k, v) in &self.metadata {
                    let _ = writeln!(s, "# {k}={v}");
                }
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json if self.json_lines => {
                let meta: Map<String, Value> = self.metadata.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                let mut s = serde_json::to_string(&json!({ "metadata": meta })).expect("json");
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&serde_json::to_string(&self.row_object(row)).expect("json"));
                    s.push('\n');
                }
                if !self.extra.is_empty() {
                    s.push_str(&serde_json::to_string(&Value::Object(self.extra.clone())).expect("json"));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let meta: Map<String, Value> = self.metadata.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                let mut doc = Map::new();
                doc.insert("metadata".into(), Value::Object(meta));
                doc.insert("rows".into(), Value::Array(self.rows.iter().map(|r| self.row_object(r)).collect()));
                for (k, v) in &self.extra {
                    doc.insert(k.clone(), v.clone());
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json");
                s.push('\n');
                s
            }
        }
    }
}

/// Result of a command: the report (if any), its format, an exit code and a
/// diagnostic for stderr.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
    pub message: Option<String>,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome { output: String::new(), exit_code: EXIT_USAGE, message: Some(msg.into()) }
    }

    fn failure(msg: impl Into<String>) -> Self {
        Outcome { output: String::new(), exit_code: EXIT_FAILED, message: Some(msg.into()) }
    }
}

fn angle(cli: &Cli, v: f64) -> f64 {
    if cli.deg {
        v.to_radians()
    } else {
        v
    }
}

fn machine_of(name: MachineName, phi: Option<f64>) -> Result<Machine, String> {
    Ok(match name {
        MachineName::OneOp => Machine::OneOp,
        MachineName::TwoOp => Machine::TwoOp { phi: phi.ok_or("two-op requires --phi")? },
        MachineName::Bh => Machine::Bh,
        MachineName::Pc => Machine::Pc,
    })
}

/// The published two-op averages under the polar measure.
pub fn two_op_published_means(phi: f64) -> (f64, f64) {
    let (s, c) = phi.sin_cos();
    ((2.0 / 3.0) * (c * s + 1.0), (PI / 4.0) * c * s + (2.0 / 3.0) * c * c + (1.0 / 3.0) * s * s)
}

/// Known disagreements between the published special cases and computation.
pub fn two_op_erratum(phi: f64) -> Option<String> {
    let r = phi.rem_euclid(2.0 * PI);
    let near = |a: f64| (r - a).abs() < 1e-9 || (r - a - 2.0 * PI).abs() < 1e-9;
    if near(3.0 * FRAC_PI_2) {
        let (a, b) = two_op_published_means(phi);
        Some(format!(
            "erratum: the published case φ=3π/2 claims mean fidelities 1/2 and 1/2; the published formulas and this computation give {} and {} under the polar measure",
            format_sig(a),
            format_sig(b)
        ))
    } else if near(0.0) {
        Some("note: the published case φ=0 claims 3/4 for both clones; that holds under the equatorial measure, the polar measure gives 2/3".into())
    } else {
        None
    }
}

fn run_cmd(cli: &Cli, args: &RunArgs) -> Outcome {
    let theta = angle(cli, args.theta);
    let phi = args.phi.map(|p| angle(cli, p));
    let machine = match machine_of(args.machine, phi) {
        Ok(m) => m,
        Err(e) => return Outcome::usage(e),
    };
    if phi.is_some() && !matches!(machine, Machine::TwoOp { .. }) {
        return Outcome::usage("--phi applies to two-op only");
    }
    let sampling = match args.averaging.sampling() {
        Ok(s) => s,
        Err(e) => return Outcome::usage(e),
    };
    let p = match pointwise_fidelities(machine, theta) {
        Ok(p) => p,
        Err(e) => return Outcome::failure(e.to_string()),
    };
    let psi = equatorial_qubit(theta);
    let out = machine.run(&psi).expect("single-qubit input");
    let dec = orthogonal_decomposition(&out.clone_a, &psi).ok();

    let mut cols = vec!["machine", "theta", "phi", "F_a", "F_b", "F_orig", "f0_sq", "f2_sq", "s"];
    let mut row: Vec<Cell> = vec![
        machine.name().into(),
        theta.into(),
        phi.into(),
        p.f_a.into(),
        p.f_b.into(),
        p.f_orig.into(),
        dec.map(|d| d.f0_sq).into(),
        dec.map(|d| d.f2_sq).into(),
        dec.map(|d| scaling_factor(&d)).into(),
    ];
    let measure = args.averaging.measure();
    let st = match average_fidelity(machine, measure, sampling) {
        Ok(s) => s,
        Err(e) => return Outcome::failure(e.to_string()),
    };
    cols.extend(["measure", "mean_a", "mean_b"]);
    row.extend([measure.name().into(), st.mean_a.into(), st.mean_b.into()]);
    if let Machine::TwoOp { phi } = machine {
        cols.push("note");
        row.push(two_op_erratum(phi).unwrap_or_default().into());
    }
    let mut doc = ReportDocument::new("run", &cols).meta("machine", machine.name()).meta("measure", measure.name());
    doc = match sampling {
        Sampling::GaussLegendre { order } => doc.meta("quad_order", order),
        Sampling::MonteCarlo { samples, seed } => doc.meta("mc_samples", samples).meta("seed", seed),
    };
    doc.push(row);
    finish(cli, doc, Format::Csv, EXIT_OK)
}

fn grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|k| from + (to - from) * k as f64 / (steps - 1) as f64).collect()
}

fn sweep_cmd(cli: &Cli, args: &SweepArgs) -> Outcome {
    if args.steps < 2 {
        return Outcome::usage("--steps must be at least 2");
    }
    let sampling = match args.averaging.sampling() {
        Ok(s) => s,
        Err(e) => return Outcome::usage(e),
    };
    let (from, to) = (angle(cli, args.from), angle(cli, args.to));
    if !from.is_finite() || !to.is_finite() {
        return Outcome::usage("sweep bounds must be finite");
    }
    let measure = args.averaging.measure();
    match args.param {
        SweepParam::Phi => {
            if args.machine != MachineName::TwoOp {
                return Outcome::usage("--param phi applies to two-op only");
            }
            let mut doc = ReportDocument::new("sweep", &["param", "mean_a", "mean_b", "var_a", "var_b", "correlation"])
                .meta("machine", "two-op")
                .meta("param", "phi")
                .meta("measure", measure.name());
            doc = match sampling {
                Sampling::GaussLegendre { order } => doc.meta("quad_order", order),
                Sampling::MonteCarlo { samples, seed } => doc.meta("mc_samples", samples).meta("seed", seed),
            };
            let mut notes = Vec::new();
            for phi in grid(from, to, args.steps) {
                let st = match average_fidelity(Machine::TwoOp { phi }, measure, sampling) {
                    Ok(s) => s,
                    Err(e) => return Outcome::failure(e.to_string()),
                };
                if let Some(n) = two_op_erratum(phi) {
                    notes.push(json!({ "phi": phi, "note": n }));
                }
                doc.push(vec![phi.into(), st.mean_a.into(), st.mean_b.into(), st.var_a.into(), st.var_b.into(), st.correlation.into()]);
            }
            if !notes.is_empty() {
                doc.extra.insert("notes".into(), Value::Array(notes));
            }
            finish(cli, doc, Format::Csv, EXIT_OK)
        }
        SweepParam::Theta => {
            let phi = args.phi.map(|p| angle(cli, p));
            let machine = match machine_of(args.machine, phi) {
                Ok(m) => m,
                Err(e) => return Outcome::usage(e),
            };
            let three = machine.n_qubits() == 3 && machine == Machine::Pc;
            let mut cols = vec!["theta", "phi", "F_a", "F_b"];
            if three {
                cols.push("F_orig");
            }
            let mut doc = ReportDocument::new("sweep", &cols).meta("machine", machine.name()).meta("param", "theta");
            for theta in grid(from, to, args.steps) {
                let p = match pointwise_fidelities(machine, theta) {
                    Ok(p) => p,
                    Err(e) => return Outcome::failure(e.to_string()),
                };
                let mut row: Vec<Cell> = vec![theta.into(), phi.into(), p.f_a.into(), p.f_b.into()];
                if three {
                    row.push(p.f_orig.into());
                }
                doc.push(row);
            }
            finish(cli, doc, Format::Csv, EXIT_OK)
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Option<Vec<T>> {
    s.split(',').map(|p| p.trim().parse().ok()).collect()
}

fn solve_prep_cmd(cli: &Cli, coeffs: &str) -> Outcome {
    let Some(c) = parse_list::<f64>(coeffs) else {
        return Outcome::usage(format!("cannot parse --coeffs '{coeffs}'"));
    };
    let Ok(c): Result<[f64; 4], _> = c.try_into() else {
        return Outcome::usage("--coeffs needs exactly four values");
    };
    let coeffs = match PrepCoeffs::new(c) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    let sols = match solve_prep_angles(&coeffs) {
        Ok(s) => s,
        Err(e) => return Outcome::failure(e.to_string()),
    };
    let mut doc = ReportDocument::new("solve-prep", &["theta1_deg", "theta2_deg", "theta3_deg", "residual"]);
    for s in sols {
        let [a, b, c] = s.angles.degrees();
        doc.push(vec![a.into(), b.into(), c.into(), s.residual.into()]);
    }
    finish(cli, doc, Format::Json, EXIT_OK)
}

fn optimize_cmd(cli: &Cli, z_zero: bool) -> Outcome {
    let sol = if z_zero { bh_from_pc_system() } else { pc_optimize() };
    let sol = match sol {
        Ok(s) => s,
        Err(e) => return Outcome::failure(e.to_string()),
    };
    let [g1, g2] = sol.constraint_residuals();
    let mut doc = ReportDocument::new("optimize-pc", &["x", "y", "z", "f0_sq", "f2_sq", "g_norm", "g_overlap"])
        .meta("z_zero", z_zero);
    doc.push(vec![sol.x.into(), sol.y.into(), sol.z.into(), sol.f0_sq.into(), (1.0 - sol.f0_sq).into(), g1.into(), g2.into()]);
    finish(cli, doc, Format::Json, EXIT_OK)
}

fn synth_cmd(cli: &Cli, perm: &str) -> Outcome {
    let Some(images) = parse_list::<usize>(perm) else {
        return Outcome::usage(format!("cannot parse --perm '{perm}'"));
    };
    let bij = match BasisBijection::from_slice(&images) {
        Ok(b) => b,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    let anf: Vec<String> = (0..3).map(|w| anf_of(&bij, w).to_string()).collect();
    let mut doc = ReportDocument::new("synth", &["perm", "p", "q", "r", "circuit", "operator_product", "length"]);
    match synthesize_cnots(&bij) {
        Ok(seq) => {
            let circuit = seq.to_circuit();
            doc.push(vec![
                bij.to_string().into(),
                anf[0].clone().into(),
                anf[1].clone().into(),
                anf[2].clone().into(),
                circuit.to_string().into(),
                circuit.to_operator_product().unwrap_or_default().into(),
                seq.len().into(),
            ]);
            finish(cli, doc, Format::Json, EXIT_OK)
        }
        Err(e @ (Error::NonAffine { .. } | Error::Singular)) => {
            let mut out = finish(cli, doc, Format::Json, EXIT_FAILED);
            out.message = Some(e.to_string());
            out
        }
        Err(e) => Outcome::failure(e.to_string()),
    }
}

fn verify_cmd(cli: &Cli, target: VerifyTarget, row: Option<usize>) -> Outcome {
    if row.is_some() && target == VerifyTarget::Invariants {
        return Outcome::usage("--row applies to table2");
    }
    let rows: Vec<&Table2Row> = match row {
        Some(n) => match Table2Row::get(n) {
            Some(r) => vec![r],
            None => return Outcome::usage(format!("--row must be in 1..={}", TABLE2.len())),
        },
        None => TABLE2.iter().collect(),
    };
    let mut doc = ReportDocument::new("verify", &["suite", "row", "check", "passed", "detail"]).meta("target", format!("{target:?}").to_lowercase());
    doc.json_lines = true;
    let mut rows_json = Vec::new();
    if matches!(target, VerifyTarget::Table2 | VerifyTarget::All) {
        for r in rows {
            let report = match verify_table2(r) {
                Ok(rep) => rep,
                Err(e) => return Outcome::failure(e.to_string()),
            };
            let solved = report.solved_angles_deg.map(|a| a.map(format_degmin).join(" ")).unwrap_or_default();
            for (name, c) in report.checks() {
                let detail = if name == "angles" {
                    format!("printed {}; solved {}; {}", report.printed_angles.join(" "), solved, c.detail)
                } else {
                    c.detail.clone()
                };
                doc.push(vec!["table2".into(), report.row.into(), name.into(), c.passed.into(), detail.into()]);
            }
            rows_json.push(serde_json::to_value(&report).expect("serializable"));
        }
    }
    if matches!(target, VerifyTarget::Invariants | VerifyTarget::All) {
        let checks = match crate::machines::invariant_suite() {
            Ok(c) => c,
            Err(e) => return Outcome::failure(e.to_string()),
        };
        for c in checks {
            doc.push(vec!["invariants".into(), Cell::Missing, c.name.into(), c.passed.into(), c.detail.into()]);
        }
    }
    let passed = doc.rows.iter().filter(|r| r[3] == Cell::Bool(true)).count();
    let failed = doc.rows.len() - passed;
    doc.extra.insert("summary".into(), json!({ "checks": doc.rows.len(), "passed": passed, "failed": failed }));
    let code = if failed == 0 { EXIT_OK } else { EXIT_FAILED };
    let mut out = finish(cli, doc, Format::Json, code);
    if failed > 0 {
        out.message = Some(format!("{failed} of {} checks failed", passed + failed));
    }
    out
}

fn constants_cmd(cli: &Cli) -> Outcome {
    let mut doc = ReportDocument::new("constants", &["expression", "exact_deg", "exact_degmin", "printed", "deviation_deg", "exact"]);
    for c in angle_constant_check() {
        doc.push(vec![
            c.expression.into(),
            c.exact_deg.into(),
            format_degmin(c.exact_deg).into(),
            c.printed.into(),
            c.deviation_deg.into(),
            c.exact.into(),
        ]);
    }
    finish(cli, doc, Format::Json, EXIT_OK)
}

fn finish(cli: &Cli, doc: ReportDocument, default: Format, exit_code: i32) -> Outcome {
    Outcome { output: doc.render(cli.format.unwrap_or(default)), exit_code, message: None }
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Run(a) => run_cmd(cli, a),
        Command::Sweep(a) => sweep_cmd(cli, a),
        Command::SolvePrep { coeffs } => solve_prep_cmd(cli, coeffs),
        Command::OptimizePc { z_zero } => optimize_cmd(cli, *z_zero),
        Command::Synth { perm } => synth_cmd(cli, perm),
        Command::Verify { target, row } => verify_cmd(cli, *target, *row),
        Command::Constants => constants_cmd(cli),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Outcome {
        let mut full = vec!["qclone"];
        full.extend_from_slice(args);
        execute(&Cli::try_parse_from(full).expect("valid arguments"))
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(0.75), "0.75");
        assert_eq!(format_sig(5.0 / 6.0), "0.833333333333333");
        assert_eq!(format_sig(0.5 + 8f64.sqrt().recip()), "0.853553390593274");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(-2.5), "-2.5");
        assert_eq!(format_sig(1.0 - 1e-17), "1");
        assert_eq!(format_sig(1.234e-9), "1.234e-9");
        assert_eq!(format_sig(6.02e23), "6.02e23");
        assert_eq!(format_sig(123456.0), "123456");
    }

    #[test]
    fn run_bh() {
        let o = exec(&["run", "bh", "--theta", "0.3"]);
        assert_eq!(o.exit_code, 0);
        let data = o.output.lines().find(|l| l.starts_with("bh,")).unwrap();
        let cells: Vec<&str> = data.split(',').collect();
        let num = |i: usize| cells[i].parse::<f64>().unwrap();
        assert!((num(3) - 5.0 / 6.0).abs() < 1e-13);
        assert!((num(4) - 5.0 / 6.0).abs() < 1e-13);
        assert!((num(8) - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn run_two_op_requires_phi() {
        assert_eq!(exec(&["run", "two-op", "--theta", "0.3"]).exit_code, EXIT_USAGE);
        assert_eq!(exec(&["run", "bh", "--theta", "0.3", "--phi", "1"]).exit_code, EXIT_USAGE);
    }

    #[test]
    fn run_flags_three_half_turns() {
        let o = exec(&["run", "two-op", "--theta", "0.3", "--phi", "270", "--deg", "--format", "json"]);
        assert_eq!(o.exit_code, 0);
        let v: Value = serde_json::from_str(&o.output).unwrap();
        let row = &v["rows"][0];
        assert!((row["mean_a"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-9);
        assert!((row["mean_b"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
        assert!(row["note"].as_str().unwrap().starts_with("erratum"));
    }

    #[test]
    fn sweep_shapes() {
        let o = exec(&["sweep", "two-op", "--param", "phi", "--from", "0", "--to", "1", "--steps", "2"]);
        assert_eq!(o.exit_code, 0);
        let data: Vec<&str> = o.output.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data[0], "param,mean_a,mean_b,var_a,var_b,correlation");
        assert_eq!(data.len(), 3);
        assert_eq!(exec(&["sweep", "bh", "--param", "phi", "--from", "0", "--to", "1", "--steps", "3"]).exit_code, EXIT_USAGE);
        assert_eq!(exec(&["sweep", "bh", "--from", "0", "--to", "1", "--steps", "1"]).exit_code, EXIT_USAGE);
        let o = exec(&["sweep", "pc", "--from", "0", "--to", "1", "--steps", "4"]);
        assert!(o.output.contains("theta,phi,F_a,F_b,F_orig\n"));
    }

    #[test]
    fn solve_prep_and_synth() {
        let o = exec(&["solve-prep", "--coeffs", "0.816496580927726,0.408248290463863,0.408248290463863,0"]);
        assert_eq!(o.exit_code, 0, "{:?}", o.message);
        assert!(o.output.contains("theta1_deg"));
        assert_eq!(exec(&["solve-prep", "--coeffs", "1,1,0,0"]).exit_code, EXIT_USAGE);
        assert_eq!(exec(&["solve-prep", "--coeffs", "1,0,0"]).exit_code, EXIT_USAGE);

        let o = exec(&["synth", "--perm", "0,5,6,3,4,1,2,7"]);
        assert_eq!(o.exit_code, 0);
        let v: Value = serde_json::from_str(&o.output).unwrap();
        assert_eq!(v["rows"][0]["p"], "x⊕y⊕z");
        assert_eq!(exec(&["synth", "--perm", "0,1,2,3,4,5,7,6"]).exit_code, EXIT_FAILED);
        assert_eq!(exec(&["synth", "--perm", "0,1,2,3,4,5,6,6"]).exit_code, EXIT_USAGE);
    }

    #[test]
    fn verify_row_selection() {
        assert_eq!(exec(&["verify", "table2", "--row", "13"]).exit_code, EXIT_USAGE);
        let o = exec(&["verify", "table2", "--row", "10"]);
        let lines: Vec<&str> = o.output.lines().collect();
        // metadata, four checks, summary
        assert_eq!(lines.len(), 6);
        assert!(lines[1..5].iter().all(|l| l.contains("\"row\":10")));
    }
}
