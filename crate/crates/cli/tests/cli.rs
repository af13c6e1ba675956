//! Integration tests for the `eraser` binary: exit-status contract,
//! deterministic output, and the content of the emitted artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!(
            "eraser-test-{tag}-{}",
            std::process::id()
        ));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn path(&self) -> &Path {
        &self.0
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn eraser(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eraser"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

/// Columns of a CSV file as f64 vectors, keyed by header name.
fn csv_columns(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let mut columns = vec![Vec::new(); header.len()];
    for line in lines {
        for (i, field) in line.split(',').enumerate() {
            columns[i].push(field.parse::<f64>().unwrap());
        }
    }
    (header, columns)
}

#[test]
fn sweep_is_deterministic() {
    let dir_a = TempDir::new("det-a");
    let dir_b = TempDir::new("det-b");
    for dir in [&dir_a, &dir_b] {
        let out = eraser(&[
            "sweep",
            "--theta-count",
            "5",
            "--n-points",
            "201",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success(), "sweep failed: {out:?}");
    }
    for name in [
        "tradeoff.csv",
        "pattern_theta=0.392699.csv",
        "venn_Q-P-D_B_0.785398.txt",
        "venn_Q-D_A-D_B_0.000000.txt",
    ] {
        let a = read(&dir_a.path().join(name));
        let b = read(&dir_b.path().join(name));
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn config_errors_name_key_and_line_and_exit_2() {
    let dir = TempDir::new("badcfg");
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# comment\na = -1\n").unwrap();
    let out = eraser(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("`a`"), "stderr: {stderr}");
    assert!(stderr.contains("line 2"), "stderr: {stderr}");

    fs::write(&cfg, "bogus_key = 1\n").unwrap();
    let out = eraser(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus_key"));
}

#[test]
fn verify_writes_report_and_exits_zero() {
    let dir = TempDir::new("verify");
    let out = eraser(&[
        "verify",
        "--theta-count",
        "9",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = read(&dir.path().join("verify.txt"));
    assert!(text.contains("status: PASS"), "verify.txt:\n{text}");
    assert!(text.contains("S(Q:D_A|D_B)"));
    assert!(text.contains("venn(Q,P,D_B)"));
}

#[test]
fn tradeoff_columns_cross_where_the_conditional_entropy_is_half() {
    // Independent oracle: solve binary_entropy((1 + sin 2t)/2) = 1/2 by
    // bisection, then check the emitted CSV brackets that angle at the
    // sign change of coherence - path_info.
    let h2 = |p: f64| -> f64 {
        let q = 1.0 - p;
        -p * p.log2() - q * q.log2()
    };
    let (mut lo, mut hi) = (0.0f64, std::f64::consts::FRAC_PI_4);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h2(0.5 * (1.0 + (2.0 * mid).sin())) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta_star = 0.5 * (lo + hi);

    let dir = TempDir::new("crossing");
    let out = eraser(&[
        "sweep",
        "--theta-count",
        "64",
        "--checks.patterns",
        "false",
        "--checks.venn",
        "false",
        "--checks.oracle",
        "false",
        "--checks.chain_rule",
        "false",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let (header, cols) = csv_columns(&read(&dir.path().join("tradeoff.csv")));
    let theta_col = header.iter().position(|h| h == "theta").unwrap();
    let coh_col = header.iter().position(|h| h == "coherence").unwrap();
    let path_col = header.iter().position(|h| h == "path_info").unwrap();

    let mut bracket = None;
    for i in 0..cols[0].len() - 1 {
        let now = cols[coh_col][i] - cols[path_col][i];
        let next = cols[coh_col][i + 1] - cols[path_col][i + 1];
        if now < 0.0 && next >= 0.0 {
            bracket = Some((cols[theta_col][i], cols[theta_col][i + 1]));
        }
    }
    let (lo, hi) = bracket.expect("curves cross somewhere on the grid");
    assert!(
        lo <= theta_star && theta_star <= hi,
        "crossing oracle {theta_star} outside CSV bracket [{lo}, {hi}]"
    );
}

#[test]
fn pattern_files_reproduce_the_three_demo_rows() {
    // theta = 0: no fringes (p0 identical to the total). theta = pi/16:
    // shallow fringes. theta = pi/4: full-contrast fringes. The total
    // column never changes.
    let dir = TempDir::new("patterns");
    let pi = std::f64::consts::PI;
    for theta in [0.0, pi / 16.0, pi / 4.0] {
        let out = eraser(&[
            "pattern",
            "--theta",
            &theta.to_string(),
            "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }

    // Fringe contrast from the extremum pair nearest the center, ignoring
    // maxima at diffraction side-lobe level (below 15% of the peak).
    let contrast = |xs: &[f64], p: &[f64]| -> f64 {
        let global_max = p.iter().cloned().fold(0.0f64, f64::max);
        let mut maxima = Vec::new();
        let mut minima = Vec::new();
        for i in 1..p.len() - 1 {
            if p[i] > p[i - 1] && p[i] > p[i + 1] && p[i] >= 0.15 * global_max {
                maxima.push(i);
            } else if p[i] < p[i - 1] && p[i] < p[i + 1] {
                minima.push(i);
            }
        }
        if maxima.len() < 2 || minima.is_empty() {
            return 0.0;
        }
        let nearest = |idx: &[usize]| {
            *idx.iter()
                .min_by(|&&i, &&j| xs[i].abs().partial_cmp(&xs[j].abs()).unwrap())
                .unwrap()
        };
        let (p_max, p_min) = (p[nearest(&maxima)], p[nearest(&minima)]);
        (p_max - p_min) / (p_max + p_min)
    };

    let mut totals = Vec::new();
    let mut p0_contrast = Vec::new();
    for tag in ["0.000000", "0.196350", "0.785398"] {
        let (header, cols) = csv_columns(&read(
            &dir.path().join(format!("pattern_theta={tag}.csv")),
        ));
        assert_eq!(header, vec!["x_meters", "p0", "p1", "p_total"]);
        let h = cols[0][1] - cols[0][0];
        let sum0: f64 = cols[1].iter().sum::<f64>() * h;
        assert!((sum0 - 1.0).abs() < 1e-6, "p0 not normalized: {sum0}");
        p0_contrast.push(contrast(&cols[0], &cols[1]));
        totals.push(cols[3].clone());
    }

    // Total distribution is the same in all three files.
    for (i, base) in totals[0].iter().enumerate() {
        assert!((base - totals[1][i]).abs() < 1e-12);
        assert!((base - totals[2][i]).abs() < 1e-12);
    }
    // Fringe contrast grows with the erasure angle: none, shallow, full.
    assert!(p0_contrast[0] < 0.05, "theta=0 contrast {p0_contrast:?}");
    assert!(
        p0_contrast[1] > 0.3 && p0_contrast[1] < 0.5,
        "pi/16 contrast {p0_contrast:?}"
    );
    assert!(p0_contrast[2] > 0.99, "pi/4 contrast {p0_contrast:?}");
}

#[test]
fn panel_prints_header_and_row() {
    let out = eraser(&["panel", "--theta", "0"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta,S,lambda_plus,lambda_minus,coherence,path_info,D,V"
    );
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    assert_eq!(row.len(), 8);
    assert!((row[1] - 1.0).abs() < 1e-15); // S = 1 at theta = 0
    assert!((row[6] - 1.0).abs() < 1e-15); // D = 1
    assert!(row[7].abs() < 1e-15); // V = 0
}

#[test]
fn config_file_drives_a_run_and_flags_override_it() {
    let dir = TempDir::new("cfgfile");
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        format!(
            "theta = 0.2\nn_points = 101\nout_dir = {}\nchecks.patterns = false\n",
            dir.path().join("from-file").display()
        ),
    )
    .unwrap();

    let out = eraser(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(dir.path().join("from-file/tradeoff.csv").exists());
    // checks.patterns = false suppresses pattern files.
    assert!(!dir.path().join("from-file/pattern_theta=0.200000.csv").exists());

    let out = eraser(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        dir.path().join("from-flag").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(dir.path().join("from-flag/tradeoff.csv").exists());
}
