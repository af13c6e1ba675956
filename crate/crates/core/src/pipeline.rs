//! The Bell-state eraser experiment, stage by stage.
//!
//! The joint state is built exactly as the apparatus acts on it:
//!
//! 1. [`EraserState::pretag`]: a polarization Bell pair on (P, B) with the
//!    signal photon's path qubit Q in the symmetric superposition behind
//!    the double slit.
//! 2. [`EraserState::tag_paths`]: a quarter-wave plate per slit, applied as
//!    one path-controlled polarization unitary on Q (x) P. This is what
//!    makes the paths distinguishable and kills the interference.
//! 3. [`EraserState::measure_b`]: photon B is rotated into the erasure
//!    basis (angle theta) and copied onto detector D_B.
//! 4. [`EraserState::measure_a`]: photon A's polarization is copied in the
//!    circular basis onto detector D_A.
//!
//! Measurement is modeled as unitary entanglement with an ancilla detector
//! (no collapse); conditioning on an outcome is projection of the detector
//! index plus renormalization. Global phases are left untouched, so state
//! equality is always asserted at the density-operator level.
//!
//! Alongside the state pipeline, [`scalar_panel`] provides the closed-form
//! quantities (conditional-state spectrum, coherence, path information,
//! distinguishability, visibility) and [`numeric_panel`] recomputes each of
//! them from the full joint density matrix. The two routes agreeing is the
//! central self-check of the whole crate.

use ndarray::{array, Array2};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, FRAC_1_SQRT_2};

use crate::error::{Error, Result};
use crate::tensor::{CompositeSpace, DensityOperator, StateVector, SubsystemLabel};
use crate::venn;

/// Subsystem labels used throughout the experiment.
pub mod labels {
    /// Path (spatial) degree of freedom of the signal photon: the quanton.
    pub const Q: &str = "Q";
    /// Polarization of the signal photon.
    pub const P: &str = "P";
    /// Polarization of the idler photon.
    pub const B: &str = "B";
    /// Polarization detector for the signal photon.
    pub const DA: &str = "D_A";
    /// Polarization detector for the idler photon.
    pub const DB: &str = "D_B";
    /// The screen.
    pub const DX: &str = "D_X";
}

use labels::{B, DA, DB, P, Q};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Erasure angle in radians, restricted to [0, pi/4] like every figure of
/// merit in this experiment. Values outside the interval are rejected
/// rather than wrapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErasureAngle(f64);

impl ErasureAngle {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_4 + 1e-15).contains(&theta) {
            return Err(Error::AngleOutOfRange(theta));
        }
        Ok(Self(theta.min(FRAC_PI_4)))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// `count` evenly spaced angles covering [0, pi/4] inclusive.
    pub fn grid(count: usize) -> Vec<ErasureAngle> {
        if count == 1 {
            return vec![ErasureAngle(0.0)];
        }
        (0..count)
            .map(|i| ErasureAngle(FRAC_PI_4 * i as f64 / (count - 1) as f64))
            .collect()
    }
}

/// Pipeline stages, in causal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    PreTag,
    Tagged,
    BMeasured,
    AMeasured,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::PreTag => "PreTag",
            Stage::Tagged => "Tagged",
            Stage::BMeasured => "BMeasured",
            Stage::AMeasured => "AMeasured",
        }
    }
}

/// The joint pure state at a named pipeline stage.
///
/// Spaces per stage: `Q (x) P (x) B` before the detectors,
/// `Q (x) P (x) B (x) D_B` after the idler measurement, and
/// `Q (x) P (x) D_A (x) B (x) D_B` once both detectors have fired.
#[derive(Debug, Clone)]
pub struct EraserState {
    stage: Stage,
    state: StateVector,
}

impl EraserState {
    /// The state behind the double slit, before tagging:
    /// `(|h>|v> + |v>|h>)/sqrt2` on (P, B), times `(|psi_1> + |psi_2>)/sqrt2`
    /// on the path qubit Q.
    pub fn pretag() -> Self {
        let q = StateVector::new(
            CompositeSpace::qubits(&[Q]).expect("fixed label"),
            array![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
        )
        .expect("normalized by construction");
        let bell = StateVector::new(
            CompositeSpace::qubits(&[P, B]).expect("fixed labels"),
            array![
                c(0.0, 0.0),
                c(FRAC_1_SQRT_2, 0.0),
                c(FRAC_1_SQRT_2, 0.0),
                c(0.0, 0.0)
            ],
        )
        .expect("normalized by construction");
        EraserState {
            stage: Stage::PreTag,
            state: q.tensor(&bell).expect("disjoint labels"),
        }
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// `|psi><psi|` of the full joint state.
    pub fn joint_density(&self) -> DensityOperator {
        self.state.outer()
    }

    fn expect_stage(&self, expected: Stage) -> Result<()> {
        if self.stage != expected {
            return Err(Error::WrongStage {
                expected: expected.name(),
                actual: self.stage.name(),
            });
        }
        Ok(())
    }

    /// Tags the two paths with opposite quarter-wave plates: a single
    /// path-controlled polarization unitary on (Q, P).
    pub fn tag_paths(&self) -> Result<EraserState> {
        self.expect_stage(Stage::PreTag)?;
        let state = self
            .state
            .apply_unitary_multi(&tag_operator(), &[Q, P])?;
        Ok(EraserState {
            stage: Stage::Tagged,
            state,
        })
    }

    /// Measures photon B in the basis rotated by `theta` and records the
    /// outcome in detector D_B: a basis change on B followed by a copy onto
    /// the fresh detector qubit.
    pub fn measure_b(&self, theta: ErasureAngle) -> Result<EraserState> {
        self.expect_stage(Stage::Tagged)?;
        let detector = StateVector::basis_state(
            CompositeSpace::new(vec![SubsystemLabel::qubit(DB)])?,
            &[0],
        )?;
        let state = self
            .state
            .tensor(&detector)?
            .apply_unitary(&b_basis_change(theta), B)?
            .apply_unitary_multi(&copy_gate(), &[B, DB])?;
        Ok(EraserState {
            stage: Stage::BMeasured,
            state,
        })
    }

    /// Measures photon A's polarization in the circular basis and records
    /// the outcome (0 = left, 1 = right) in detector D_A.
    pub fn measure_a(&self) -> Result<EraserState> {
        self.expect_stage(Stage::BMeasured)?;
        let detector = StateVector::basis_state(
            CompositeSpace::new(vec![SubsystemLabel::qubit(DA)])?,
            &[0],
        )?;
        let state = self
            .state
            .tensor(&detector)?
            .reorder(&[Q, P, DA, B, DB])?
            .apply_unitary_multi(&circular_copy_gate(), &[P, DA])?;
        Ok(EraserState {
            stage: Stage::AMeasured,
            state,
        })
    }
}

/// Jones matrix for a wave plate of retardance `alpha` with its fast axis
/// at angle `beta` to the (h, v) coordinate system.
pub fn wave_plate(alpha: f64, beta: f64) -> Array2<Complex64> {
    let (ch, sh) = ((alpha / 2.0).cos(), (alpha / 2.0).sin());
    let (c2b, s2b) = ((2.0 * beta).cos(), (2.0 * beta).sin());
    array![
        [c(ch, sh * c2b), c(0.0, sh * s2b)],
        [c(0.0, sh * s2b), c(ch, -sh * c2b)]
    ]
}

/// Quarter-wave plate at +45 degrees (slit 1): maps h to left-circular.
pub fn qwp_slit1() -> Array2<Complex64> {
    wave_plate(std::f64::consts::FRAC_PI_2, FRAC_PI_4)
}

/// Quarter-wave plate at -45 degrees (slit 2): maps h to right-circular.
pub fn qwp_slit2() -> Array2<Complex64> {
    wave_plate(std::f64::consts::FRAC_PI_2, -FRAC_PI_4)
}

/// The path-controlled tagging unitary on (Q, P): QWP1 behind slit 1,
/// QWP2 behind slit 2.
pub fn tag_operator() -> Array2<Complex64> {
    let u1 = qwp_slit1();
    let u2 = qwp_slit2();
    let mut m = Array2::<Complex64>::zeros((4, 4));
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = u1[(i, j)];
            m[(2 + i, 2 + j)] = u2[(i, j)];
        }
    }
    m
}

/// The rotation that defines the erasure basis:
/// `[[cos theta, -sin theta], [sin theta, cos theta]]`. Its rows expand
/// `|v>` and `|h>` in the new basis `|0>, |1>`.
pub fn rotation(theta: ErasureAngle) -> Array2<Complex64> {
    let (ct, st) = (theta.radians().cos(), theta.radians().sin());
    array![[c(ct, 0.0), c(-st, 0.0)], [c(st, 0.0), c(ct, 0.0)]]
}

/// Basis-change operator on B taking (h, v) amplitudes to erasure-basis
/// amplitudes: row k is `(U_1k, U_0k)` so that `|v> -> sum_k U_0k |k>` and
/// `|h> -> sum_k U_1k |k>`.
fn b_basis_change(theta: ErasureAngle) -> Array2<Complex64> {
    let u = rotation(theta);
    array![
        [u[(1, 0)], u[(0, 0)]],
        [u[(1, 1)], u[(0, 1)]]
    ]
}

/// Copy in the computational basis: `|k>|0> -> |k>|k>` (a CNOT).
fn copy_gate() -> Array2<Complex64> {
    let mut m = Array2::<Complex64>::zeros((4, 4));
    m[(0, 0)] = c(1.0, 0.0);
    m[(1, 1)] = c(1.0, 0.0);
    m[(3, 2)] = c(1.0, 0.0);
    m[(2, 3)] = c(1.0, 0.0);
    m
}

/// Copy of the circular polarization index: flips the detector qubit when
/// the control is right-circular. Acts on (P, D_A) with P in the (h, v)
/// basis.
fn circular_copy_gate() -> Array2<Complex64> {
    // Projectors onto |L> = (e_h + i e_v)/sqrt2 and |R> = (e_h - i e_v)/sqrt2.
    let proj_l = array![[c(0.5, 0.0), c(0.0, -0.5)], [c(0.0, 0.5), c(0.5, 0.0)]];
    let proj_r = array![[c(0.5, 0.0), c(0.0, 0.5)], [c(0.0, -0.5), c(0.5, 0.0)]];
    let mut m = Array2::<Complex64>::zeros((4, 4));
    for i in 0..2 {
        for j in 0..2 {
            // P_L (x) identity
            m[(2 * i, 2 * j)] += proj_l[(i, j)];
            m[(2 * i + 1, 2 * j + 1)] += proj_l[(i, j)];
            // P_R (x) X
            m[(2 * i + 1, 2 * j)] += proj_r[(i, j)];
            m[(2 * i, 2 * j + 1)] += proj_r[(i, j)];
        }
    }
    m
}

/// The quanton state conditional on outcome `k` of detector D_B, in the
/// path basis: `1/2 (1 - (-1)^k sin(2 theta) sigma_y)`.
///
/// Its off-diagonal coherence is controlled by the sine of the measurement
/// angle: fully mixed at theta = 0, pure fringe/antifringe states at
/// theta = pi/4.
pub fn conditional_quanton(theta: ErasureAngle, k: u8) -> Result<DensityOperator> {
    if k > 1 {
        return Err(Error::InvalidOutcome(k as usize));
    }
    let s2 = (2.0 * theta.radians()).sin();
    let sign = if k == 0 { 1.0 } else { -1.0 };
    let space = CompositeSpace::qubits(&[Q])?;
    let matrix = array![
        [c(0.5, 0.0), c(0.0, 0.5 * sign * s2)],
        [c(0.0, -0.5 * sign * s2), c(0.5, 0.0)]
    ];
    DensityOperator::new(space, matrix)
}

/// Binary entropy in bits, with `0 log 0 := 0`.
pub fn binary_entropy_bits(p: f64) -> f64 {
    let q = 1.0 - p;
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if q > 0.0 {
        h -= q * q.log2();
    }
    if h == 0.0 {
        0.0
    } else {
        h
    }
}

/// The closed-form scalar quantities of the experiment at one erasure
/// angle. All entropic entries are in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarPanel {
    /// Erasure angle in radians.
    pub theta: f64,
    /// Entropy of the conditional quanton state (= the path information).
    pub s: f64,
    /// Larger eigenvalue of the conditional quanton state.
    pub lambda_plus: f64,
    /// Smaller eigenvalue of the conditional quanton state.
    pub lambda_minus: f64,
    /// Coherence `S(Q:D_B) = 1 - S`.
    pub coherence: f64,
    /// Which-path information `S(Q:D_A|D_B) = S`.
    pub path_info: f64,
    /// Distinguishability `D = |cos 2 theta|`.
    pub distinguishability: f64,
    /// Fringe visibility `V = |sin 2 theta|`.
    pub visibility: f64,
}

impl ScalarPanel {
    pub const CSV_HEADER: &'static str =
        "theta,S,lambda_plus,lambda_minus,coherence,path_info,D,V";

    /// One CSV row with full-precision (17 significant digit) floats.
    pub fn csv_row(&self) -> String {
        [
            self.theta,
            self.s,
            self.lambda_plus,
            self.lambda_minus,
            self.coherence,
            self.path_info,
            self.distinguishability,
            self.visibility,
        ]
        .map(full_precision)
        .join(",")
    }
}

/// Lossless decimal rendering of an `f64` (17 significant digits).
pub fn full_precision(v: f64) -> String {
    format!("{v:.16e}")
}

/// Analytic panel: `lambda_pm = (1 pm sin 2 theta)/2`, `S` their binary
/// entropy, coherence `1 - S`, path information `S`, `D = |cos 2 theta|`,
/// `V = |sin 2 theta|`.
pub fn scalar_panel(theta: ErasureAngle) -> ScalarPanel {
    let t = theta.radians();
    let s2 = (2.0 * t).sin();
    let lambda_plus = 0.5 * (1.0 + s2);
    let lambda_minus = 0.5 * (1.0 - s2);
    let s = binary_entropy_bits(lambda_plus);
    ScalarPanel {
        theta: t,
        s,
        lambda_plus,
        lambda_minus,
        coherence: 1.0 - s,
        path_info: s,
        distinguishability: (2.0 * t).cos().abs(),
        visibility: s2.abs(),
    }
}

/// Numeric panel: every quantity of [`scalar_panel`] recomputed from the
/// fully measured joint state via partial traces and eigendecompositions.
///
/// `lambda_pm` and `S` come from the conditional quanton state reached by
/// trace-then-condition; coherence and path information are the mutual and
/// conditional-mutual entropies of the joint density matrix; the
/// visibility is the Bloch length `lambda_plus - lambda_minus` of the
/// conditional state; and the distinguishability is the path-guessing
/// asymmetry `sum_o |P(path 1, o) - P(path 2, o)|` over the joint detector
/// readouts `o = (m, k)`, read off the diagonal of `rho_{Q D_A D_B}`.
pub fn numeric_panel(theta: ErasureAngle) -> Result<ScalarPanel> {
    let rho = EraserState::pretag()
        .tag_paths()?
        .measure_b(theta)?
        .measure_a()?
        .joint_density();

    let rho_q_db = rho.partial_trace(&[Q, DB])?;
    let (_, rho_q_cond) = rho_q_db.condition(DB, 0)?;
    let eigs = rho_q_cond.eigenvalues()?;
    let (lambda_plus, lambda_minus) = (eigs[0], eigs[1]);
    let s = rho_q_cond.entropy_bits()?;

    let coherence = venn::mutual_entropy(&rho, &[Q], &[DB])?;
    let path_info = venn::conditional_mutual(&rho, &[Q], &[DA], &[DB])?;

    let visibility = (lambda_plus - lambda_minus).clamp(0.0, 1.0);

    // Diagonal of rho_{Q D_A D_B} in (q, m, k) order.
    let rho_qdd = rho.partial_trace(&[Q, DA, DB])?;
    let diag = rho_qdd.matrix();
    let mut distinguishability = 0.0;
    for m in 0..2 {
        for k in 0..2 {
            let path1 = diag[(2 * m + k, 2 * m + k)].re;
            let path2 = diag[(4 + 2 * m + k, 4 + 2 * m + k)].re;
            distinguishability += (path1 - path2).abs();
        }
    }

    Ok(ScalarPanel {
        theta: theta.radians(),
        s,
        lambda_plus,
        lambda_minus,
        coherence,
        path_info,
        distinguishability,
        visibility,
    })
}

/// The relative-entropy coherence / path-information pair
/// `(C, H) = (1 - S, S)`; the two always sum to one.
pub fn bagan_identity(theta: ErasureAngle) -> (f64, f64) {
    let panel = scalar_panel(theta);
    (panel.coherence, panel.s)
}

/// Analytic entries of the (Q, P, D_B) Venn diagram after the idler
/// measurement, in [`crate::venn::VennDiagram3`] order
/// `[c_Q, c_P, c_DB, m_QP, m_QDB, m_PDB, center]`.
///
/// Derived from the joint entropies of that stage: the full state has
/// entropy 1, every marginal is 1 bit, `S(QP) = 1`, and
/// `S(QD_B) = S(PD_B) = 1 + S`.
pub fn analytic_venn_q_p_db(theta: ErasureAngle) -> [f64; 7] {
    let s = scalar_panel(theta).s;
    [-s, -s, 0.0, 2.0 * s, s, s, 1.0 - 2.0 * s]
}

/// Analytic entries of the (Q, D_A, D_B) Venn diagram after both
/// measurements, in order `[c_Q, c_DA, c_DB, m_QDA, m_QDB, m_DADB, center]`.
///
/// Derived from `S(QD_AD_B) = 2`, `S(QD_A) = S(D_AD_B) = 2`,
/// `S(QD_B) = 1 + S`, and unit marginals.
pub fn analytic_venn_q_da_db(theta: ErasureAngle) -> [f64; 7] {
    let s = scalar_panel(theta).s;
    [0.0, 1.0 - s, 0.0, s, 1.0, s, -s]
}
