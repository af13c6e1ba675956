//! Sweep execution, self-checks, and file output.
//!
//! Angles are evaluated in configuration order and all files are written by
//! this single-threaded collector, so identical configurations produce
//! byte-identical artifacts.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use eraser_core::interference::{conditional_pattern, estimate_visibility, total_pattern, Pattern};
use eraser_core::pipeline::{
    analytic_venn_q_da_db, analytic_venn_q_p_db, full_precision, labels, numeric_panel,
    scalar_panel, EraserState, ErasureAngle, ScalarPanel,
};
use eraser_core::tensor::DensityOperator;
use eraser_core::venn::{conditional_mutual, mutual_entropy, venn3, VennDiagram3};
use thiserror::Error;

use crate::config::ExperimentConfig;
use labels::{DA, DB, P, Q};

/// Structural identities must hold to this tolerance.
const PASS_TOL: f64 = 1e-9;
/// Beyond this, a check fails; in between it warns.
const FAIL_TOL: f64 = 1e-6;
/// Pattern identities are exact cancellations and are held tighter.
const PATTERN_PASS_TOL: f64 = 1e-12;
const PATTERN_FAIL_TOL: f64 = 1e-9;
/// Tolerance on the empirical fringe-visibility readout.
const VISIBILITY_TOL: f64 = 0.02;
/// The visibility estimator needs fringes that actually modulate the
/// envelope; below this expected visibility the readout is skipped.
const VISIBILITY_FLOOR: f64 = 0.15;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot write `{path}`: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] eraser_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Warn => "warn",
            CheckStatus::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_deviation: f64,
    /// Angle at which the maximum deviation occurred.
    pub at_theta: f64,
    pub status: CheckStatus,
}

impl CheckOutcome {
    fn banded(name: &'static str, max_deviation: f64, at_theta: f64, pass: f64, fail: f64) -> Self {
        let status = if max_deviation <= pass {
            CheckStatus::Pass
        } else if max_deviation <= fail {
            CheckStatus::Warn
        } else {
            CheckStatus::Fail
        };
        CheckOutcome {
            name,
            max_deviation,
            at_theta,
            status,
        }
    }
}

/// Everything a sweep produced: the per-angle panel rows and Venn
/// diagrams, the check outcomes, and the files written. A report is
/// produced even when checks fail; the caller turns failures into a
/// nonzero exit status.
#[derive(Debug, Default)]
pub struct RunReport {
    pub rows: Vec<ScalarPanel>,
    /// `(theta, (Q, P, D_B) diagram, (Q, D_A, D_B) diagram)` per angle,
    /// present when the Venn check is enabled.
    pub venns: Vec<(f64, VennDiagram3, VennDiagram3)>,
    pub checks: Vec<CheckOutcome>,
    pub files: Vec<PathBuf>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for f in &self.files {
            out.push_str(&format!("wrote {}\n", f.display()));
        }
        if !self.checks.is_empty() {
            out.push_str("check                 max deviation  at theta   status\n");
            for c in &self.checks {
                out.push_str(&format!(
                    "{:<21} {:<14.3e} {:<10.6} {}\n",
                    c.name, c.max_deviation, c.at_theta, c.status
                ));
            }
            out.push_str(if self.all_passed() {
                "all checks passed\n"
            } else {
                "CHECKS FAILED\n"
            });
        }
        out
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| RunError::Write {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    let mut file = fs::File::create(path).map_err(|source| RunError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(contents.as_bytes())
        .map_err(|source| RunError::Write {
            path: path.to_path_buf(),
            source,
        })
}

fn theta_tag(theta: ErasureAngle) -> String {
    format!("{:.6}", theta.radians())
}

fn b_measured(theta: ErasureAngle) -> Result<DensityOperator, RunError> {
    Ok(EraserState::pretag()
        .tag_paths()?
        .measure_b(theta)?
        .joint_density())
}

fn a_measured(theta: ErasureAngle) -> Result<DensityOperator, RunError> {
    Ok(EraserState::pretag()
        .tag_paths()?
        .measure_b(theta)?
        .measure_a()?
        .joint_density())
}

fn venn_entries(v: &VennDiagram3) -> [f64; 7] {
    [v.c_a, v.c_b, v.c_c, v.m_ab, v.m_ac, v.m_bc, v.center]
}

/// CSV for one angle's patterns: `x_meters,p0,p1,p_total`.
pub fn patterns_csv(p0: &Pattern, p1: &Pattern, total: &Pattern) -> String {
    let xs = total.grid().points();
    let mut out = String::with_capacity(xs.len() * 80);
    out.push_str("x_meters,p0,p1,p_total\n");
    for (i, x) in xs.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            full_precision(*x),
            full_precision(p0.values()[i]),
            full_precision(p1.values()[i]),
            full_precision(total.values()[i]),
        ));
    }
    out
}

/// Both Venn diagrams of one angle: (Q, P, D_B) from the stage where only
/// the idler has been measured, (Q, D_A, D_B) once both detectors fired.
pub fn venn_pair(
    theta: ErasureAngle,
) -> Result<(VennDiagram3, VennDiagram3), RunError> {
    let qpdb = venn3(&b_measured(theta)?, Q, P, DB)?;
    let qdadb = venn3(&a_measured(theta)?, Q, DA, DB)?;
    Ok((qpdb, qdadb))
}

fn venn_file_text(theta: ErasureAngle, diagram: &VennDiagram3) -> String {
    format!(
        "theta = {}\n{}",
        full_precision(theta.radians()),
        diagram.to_kv_text()
    )
}

/// Writes the two Venn diagram files for one angle, returning their paths
/// and the diagrams' worst deviation from the analytic entries.
pub fn write_venn_files(
    out_dir: &Path,
    theta: ErasureAngle,
) -> Result<(Vec<PathBuf>, f64), RunError> {
    let (qpdb, qdadb) = venn_pair(theta)?;
    let paths = write_venn_pair(out_dir, theta, &qpdb, &qdadb)?;
    let max_dev = venn_deviation(theta, &qpdb, &qdadb);
    Ok((paths, max_dev))
}

fn write_venn_pair(
    out_dir: &Path,
    theta: ErasureAngle,
    qpdb: &VennDiagram3,
    qdadb: &VennDiagram3,
) -> Result<Vec<PathBuf>, RunError> {
    let tag = theta_tag(theta);
    let mut paths = Vec::new();
    for (triple, diagram) in [("Q-P-D_B", qpdb), ("Q-D_A-D_B", qdadb)] {
        let path = out_dir.join(format!("venn_{triple}_{tag}.txt"));
        write_file(&path, &venn_file_text(theta, diagram))?;
        paths.push(path);
    }
    Ok(paths)
}

fn venn_deviation(theta: ErasureAngle, qpdb: &VennDiagram3, qdadb: &VennDiagram3) -> f64 {
    let mut dev = 0.0f64;
    for (a, n) in analytic_venn_q_p_db(theta)
        .iter()
        .zip(venn_entries(qpdb))
    {
        dev = dev.max((a - n).abs());
    }
    for (a, n) in analytic_venn_q_da_db(theta)
        .iter()
        .zip(venn_entries(qdadb))
    {
        dev = dev.max((a - n).abs());
    }
    dev
}

/// Writes one angle's pattern CSV, returning the path and the rendered
/// patterns for further checks.
pub fn write_pattern_file(
    out_dir: &Path,
    theta: ErasureAngle,
    cfg: &ExperimentConfig,
) -> Result<(PathBuf, Pattern, Pattern, Pattern), RunError> {
    let p0 = conditional_pattern(theta, 0, &cfg.geometry, &cfg.grid)?;
    let p1 = conditional_pattern(theta, 1, &cfg.geometry, &cfg.grid)?;
    let total = total_pattern(theta, &cfg.geometry, &cfg.grid)?;
    let path = out_dir.join(format!("pattern_theta={}.csv", theta_tag(theta)));
    write_file(&path, &patterns_csv(&p0, &p1, &total))?;
    Ok((path, p0, p1, total))
}

/// Runs a full sweep: the tradeoff CSV, per-angle Venn diagrams and
/// patterns (as enabled), and the enabled self-checks.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let mut report = RunReport::default();

    let mut tradeoff = String::from(ScalarPanel::CSV_HEADER);
    tradeoff.push('\n');
    for &theta in &cfg.thetas {
        let panel = scalar_panel(theta);
        tradeoff.push_str(&panel.csv_row());
        tradeoff.push('\n');
        report.rows.push(panel);
    }
    let tradeoff_path = cfg.out_dir.join("tradeoff.csv");
    write_file(&tradeoff_path, &tradeoff)?;
    report.files.push(tradeoff_path);

    if cfg.checks.chain_rule {
        let mut max_dev = 0.0f64;
        let mut at_theta = 0.0;
        for &theta in &cfg.thetas {
            let rho = a_measured(theta)?;
            let coherence = mutual_entropy(&rho, &[Q], &[DB])?;
            let path_info = conditional_mutual(&rho, &[Q], &[DA], &[DB])?;
            let joint = mutual_entropy(&rho, &[Q], &[DA, DB])?;
            let dev = (coherence + path_info - 1.0)
                .abs()
                .max((coherence + path_info - joint).abs());
            if dev > max_dev {
                max_dev = dev;
                at_theta = theta.radians();
            }
        }
        report.checks.push(CheckOutcome::banded(
            "chain_rule",
            max_dev,
            at_theta,
            PASS_TOL,
            FAIL_TOL,
        ));
    }

    if cfg.checks.venn {
        let mut max_dev = 0.0f64;
        let mut at_theta = 0.0;
        for &theta in &cfg.thetas {
            let (qpdb, qdadb) = venn_pair(theta)?;
            let paths = write_venn_pair(&cfg.out_dir, theta, &qpdb, &qdadb)?;
            report.files.extend(paths);
            let dev = venn_deviation(theta, &qpdb, &qdadb);
            if dev > max_dev {
                max_dev = dev;
                at_theta = theta.radians();
            }
            report.venns.push((theta.radians(), qpdb, qdadb));
        }
        report.checks.push(CheckOutcome::banded(
            "venn",
            max_dev,
            at_theta,
            PASS_TOL,
            FAIL_TOL,
        ));
    }

    if cfg.checks.patterns {
        let mut identity_dev = 0.0f64;
        let mut identity_theta = 0.0;
        let mut visibility_dev = 0.0f64;
        let mut visibility_theta = 0.0;
        let baseline = total_pattern(ErasureAngle::new(0.0)?, &cfg.geometry, &cfg.grid)?;
        for &theta in &cfg.thetas {
            let (path, p0, p1, total) = write_pattern_file(&cfg.out_dir, theta, cfg)?;
            report.files.push(path);
            for i in 0..cfg.grid.n {
                let antiphase =
                    (p0.values()[i] + p1.values()[i] - 2.0 * total.values()[i]).abs();
                let invariance = (total.values()[i] - baseline.values()[i]).abs();
                let dev = antiphase.max(invariance);
                if dev > identity_dev {
                    identity_dev = dev;
                    identity_theta = theta.radians();
                }
            }
            let expected = scalar_panel(theta).visibility;
            if expected >= VISIBILITY_FLOOR || theta.radians() == 0.0 {
                let dev = (estimate_visibility(&p0) - expected).abs();
                if dev > visibility_dev {
                    visibility_dev = dev;
                    visibility_theta = theta.radians();
                }
            }
        }
        report.checks.push(CheckOutcome::banded(
            "patterns",
            identity_dev,
            identity_theta,
            PATTERN_PASS_TOL,
            PATTERN_FAIL_TOL,
        ));
        report.checks.push(CheckOutcome::banded(
            "pattern_visibility",
            visibility_dev,
            visibility_theta,
            VISIBILITY_TOL,
            VISIBILITY_TOL,
        ));
    }

    if cfg.checks.oracle {
        let oracle = oracle_comparison(&cfg.thetas)?;
        report.checks.push(CheckOutcome::banded(
            "oracle",
            oracle.overall_max,
            oracle.overall_theta,
            PASS_TOL,
            FAIL_TOL,
        ));
    }

    Ok(report)
}

/// One tracked quantity of the oracle run.
pub struct OracleQuantity {
    pub name: &'static str,
    pub max_deviation: f64,
    pub at_theta: f64,
}

pub struct OracleReport {
    pub quantities: Vec<OracleQuantity>,
    pub overall_max: f64,
    pub overall_theta: f64,
    pub angles: usize,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.overall_max <= FAIL_TOL
    }

    /// The `verify.txt` body.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("oracle verification: numeric entropies vs analytic formulas\n");
        out.push_str(&format!("angles: {}\n", self.angles));
        out.push_str("quantity, max |numeric - analytic|, at theta\n");
        for q in &self.quantities {
            out.push_str(&format!(
                "{}, {:.3e}, {:.6}\n",
                q.name, q.max_deviation, q.at_theta
            ));
        }
        out.push_str(&format!(
            "overall max deviation = {:.3e} at theta = {:.6}\n",
            self.overall_max, self.overall_theta
        ));
        out.push_str(&format!(
            "thresholds: warn above {PASS_TOL:.0e}, fail above {FAIL_TOL:.0e}\n"
        ));
        let status = if !self.passed() {
            "FAIL"
        } else if self.overall_max > PASS_TOL {
            "WARN"
        } else {
            "PASS"
        };
        out.push_str(&format!("status: {status}\n"));
        out
    }
}

/// Recomputes every analytic scalar from the joint density matrix across
/// the angle list and tracks the worst deviation per quantity.
pub fn oracle_comparison(thetas: &[ErasureAngle]) -> Result<OracleReport, RunError> {
    const NAMES: [&str; 12] = [
        "S",
        "lambda_plus",
        "lambda_minus",
        "S(Q:D_B)",
        "S(Q:D_A|D_B)",
        "S(Q:D_A D_B)",
        "S(D_A:D_B)",
        "S(D_A:D_B|Q)",
        "D",
        "V",
        "venn(Q,P,D_B)",
        "venn(Q,D_A,D_B)",
    ];
    let mut max_dev = [0.0f64; 12];
    let mut max_at = [0.0f64; 12];

    for &theta in thetas {
        let analytic = scalar_panel(theta);
        let numeric = numeric_panel(theta)?;
        let rho = a_measured(theta)?;

        let joint_mutual = mutual_entropy(&rho, &[Q], &[DA, DB])?;
        let det_mutual = mutual_entropy(&rho, &[DA], &[DB])?;
        let det_mutual_given_q = conditional_mutual(&rho, &[DA], &[DB], &[Q])?;

        let (qpdb, qdadb) = venn_pair(theta)?;
        let mut venn_qpdb_dev = 0.0f64;
        for (a, n) in analytic_venn_q_p_db(theta).iter().zip(venn_entries(&qpdb)) {
            venn_qpdb_dev = venn_qpdb_dev.max((a - n).abs());
        }
        let mut venn_qdadb_dev = 0.0f64;
        for (a, n) in analytic_venn_q_da_db(theta)
            .iter()
            .zip(venn_entries(&qdadb))
        {
            venn_qdadb_dev = venn_qdadb_dev.max((a - n).abs());
        }

        let deviations = [
            (analytic.s - numeric.s).abs(),
            (analytic.lambda_plus - numeric.lambda_plus).abs(),
            (analytic.lambda_minus - numeric.lambda_minus).abs(),
            (analytic.coherence - numeric.coherence).abs(),
            (analytic.path_info - numeric.path_info).abs(),
            (joint_mutual - 1.0).abs(),
            det_mutual.abs(),
            (det_mutual_given_q - analytic.s).abs(),
            (analytic.distinguishability - numeric.distinguishability).abs(),
            (analytic.visibility - numeric.visibility).abs(),
            venn_qpdb_dev,
            venn_qdadb_dev,
        ];
        for (i, dev) in deviations.into_iter().enumerate() {
            if dev > max_dev[i] {
                max_dev[i] = dev;
                max_at[i] = theta.radians();
            }
        }
    }

    let quantities: Vec<OracleQuantity> = NAMES
        .iter()
        .enumerate()
        .map(|(i, name)| OracleQuantity {
            name,
            max_deviation: max_dev[i],
            at_theta: max_at[i],
        })
        .collect();
    let (overall_idx, overall) = max_dev
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("nonempty");
    Ok(OracleReport {
        overall_max: *overall,
        overall_theta: max_at[overall_idx],
        angles: thetas.len(),
        quantities,
    })
}

/// Runs the oracle suite and writes `verify.txt`.
pub fn run_verify(cfg: &ExperimentConfig) -> Result<(OracleReport, PathBuf), RunError> {
    let report = oracle_comparison(&cfg.thetas)?;
    let path = cfg.out_dir.join("verify.txt");
    write_file(&path, &report.to_text())?;
    Ok((report, path))
}
