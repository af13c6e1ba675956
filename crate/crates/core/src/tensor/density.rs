//! Density operators on labeled composite spaces.

use ndarray::linalg::kron;
use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

use super::eig::{hermitian_eigenvalues, hermiticity_deviation, HERMITICITY_TOL};
use super::space::CompositeSpace;
use crate::error::{Error, Result};

/// Absolute tolerance on `|Tr rho - 1|`.
pub const TRACE_TOL: f64 = 1e-12;

/// Eigenvalues down to this negativity are treated as roundoff and clipped
/// to zero; anything more negative is rejected as an invalid state.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// A Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    space: CompositeSpace,
    matrix: Array2<Complex64>,
}

impl DensityOperator {
    /// Wraps a matrix after verifying Hermiticity, unit trace, and
    /// positivity within the stated tolerances.
    pub fn new(space: CompositeSpace, matrix: Array2<Complex64>) -> Result<Self> {
        let dim = space.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.nrows(),
            });
        }
        let dev = hermiticity_deviation(&matrix.view());
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian { max_dev: dev });
        }
        let trace: Complex64 = matrix.diag().iter().sum();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::TraceNotOne {
                trace: trace.re,
                tol: TRACE_TOL,
            });
        }
        let min = min_eigenvalue(&matrix)?;
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(Self { space, matrix })
    }

    /// Constructor for matrices already known valid (outputs of internal
    /// trace-preserving operations). Debug builds still verify.
    pub(crate) fn new_unchecked(space: CompositeSpace, matrix: Array2<Complex64>) -> Self {
        debug_assert!(hermiticity_deviation(&matrix.view()) <= 1e-9);
        debug_assert!(
            (matrix.diag().iter().sum::<Complex64>().re - 1.0).abs() <= 1e-9,
            "trace drifted from 1"
        );
        Self { space, matrix }
    }

    /// A classical state: diagonal probabilities in the computational basis.
    pub fn from_diagonal(space: CompositeSpace, probabilities: &[f64]) -> Result<Self> {
        let dim = space.total_dim();
        if probabilities.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: probabilities.len(),
            });
        }
        if let Some(&p) = probabilities
            .iter()
            .find(|&&p| p < -POSITIVITY_TOL)
        {
            return Err(Error::NotPositive { min_eigenvalue: p });
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne {
                trace: total,
                tol: TRACE_TOL,
            });
        }
        let mut matrix = Array2::<Complex64>::zeros((dim, dim));
        for (i, &p) in probabilities.iter().enumerate() {
            matrix[(i, i)] = Complex64::new(p, 0.0);
        }
        Ok(Self { space, matrix })
    }

    /// `1/d` on the given space.
    pub fn maximally_mixed(space: CompositeSpace) -> Self {
        let dim = space.total_dim();
        let mut matrix = Array2::<Complex64>::zeros((dim, dim));
        let p = Complex64::new(1.0 / dim as f64, 0.0);
        for i in 0..dim {
            matrix[(i, i)] = p;
        }
        Self { space, matrix }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> ArrayView2<'_, Complex64> {
        self.matrix.view()
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.diag().iter().sum()
    }

    /// `Tr(rho^2)`; 1 for pure states.
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                sum += (self.matrix[(i, j)] * self.matrix[(j, i)]).re;
            }
        }
        sum
    }

    /// Kronecker product in the declared order; label sets must be disjoint.
    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let space = self.space.concat(other.space())?;
        let matrix = kron(&self.matrix, &other.matrix);
        Ok(DensityOperator { space, matrix })
    }

    /// Traces out every subsystem not named in `keep`. The result lives on
    /// the kept subsystems in their original relative order.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityOperator> {
        let new_space = self.space.subspace(keep)?;
        if new_space.len() == self.space.len() {
            return Ok(self.clone());
        }
        let old_strides = self.space.strides();
        let kept_positions: Vec<usize> = (0..self.space.len())
            .filter(|&p| keep.contains(&self.space.parts()[p].name()))
            .collect();
        let traced_positions: Vec<usize> = (0..self.space.len())
            .filter(|p| !kept_positions.contains(p))
            .collect();
        let traced_dims: Vec<usize> = traced_positions
            .iter()
            .map(|&p| self.space.parts()[p].dim())
            .collect();
        let traced_count: usize = traced_dims.iter().product();
        let new_strides = new_space.strides();
        let new_dim = new_space.total_dim();

        // Offsets of the traced multi-indices in the flat index.
        let mut traced_offsets = Vec::with_capacity(traced_count);
        for t in 0..traced_count {
            let mut rem = t;
            let mut offset = 0;
            for (k, &d) in traced_dims.iter().enumerate().rev() {
                offset += (rem % d) * old_strides[traced_positions[k]];
                rem /= d;
            }
            traced_offsets.push(offset);
        }
        let kept_offset = |flat: usize| -> usize {
            let mut rem = flat;
            let mut offset = 0;
            for k in 0..kept_positions.len() {
                let digit = rem / new_strides[k];
                rem %= new_strides[k];
                offset += digit * old_strides[kept_positions[k]];
            }
            offset
        };

        let mut matrix = Array2::<Complex64>::zeros((new_dim, new_dim));
        for r in 0..new_dim {
            let ro = kept_offset(r);
            for c in 0..new_dim {
                let co = kept_offset(c);
                let mut sum = Complex64::new(0.0, 0.0);
                for &to in &traced_offsets {
                    sum += self.matrix[(ro + to, co + to)];
                }
                matrix[(r, c)] = sum;
            }
        }
        Ok(DensityOperator {
            space: new_space,
            matrix,
        })
    }

    /// Projects one subsystem onto a basis outcome and renormalizes,
    /// returning the outcome probability and the conditional state of the
    /// remaining subsystems.
    pub fn condition(&self, label: &str, outcome: usize) -> Result<(f64, DensityOperator)> {
        let pos = self.space.position(label)?;
        let dim = self.space.parts()[pos].dim();
        if outcome >= dim {
            return Err(Error::IndexOutOfRange {
                label: label.to_string(),
                index: outcome,
                dim,
            });
        }
        let keep: Vec<&str> = self
            .space
            .labels()
            .into_iter()
            .filter(|l| *l != label)
            .collect();
        if keep.is_empty() {
            return Err(Error::EmptySelection);
        }
        let new_space = self.space.subspace(&keep)?;
        let old_strides = self.space.strides();
        let new_strides = new_space.strides();
        let kept_positions: Vec<usize> = (0..self.space.len()).filter(|&p| p != pos).collect();
        let offset_of = |flat: usize| -> usize {
            let mut rem = flat;
            let mut offset = outcome * old_strides[pos];
            for k in 0..kept_positions.len() {
                let digit = rem / new_strides[k];
                rem %= new_strides[k];
                offset += digit * old_strides[kept_positions[k]];
            }
            offset
        };

        let new_dim = new_space.total_dim();
        let mut matrix = Array2::<Complex64>::zeros((new_dim, new_dim));
        let mut prob = 0.0;
        for r in 0..new_dim {
            let ro = offset_of(r);
            for c in 0..new_dim {
                matrix[(r, c)] = self.matrix[(ro, offset_of(c))];
            }
            prob += matrix[(r, r)].re;
        }
        if prob <= f64::EPSILON {
            return Err(Error::ZeroProbability {
                label: label.to_string(),
                outcome,
            });
        }
        let scale = Complex64::new(1.0 / prob, 0.0);
        matrix.mapv_inplace(|z| z * scale);
        Ok((
            prob,
            DensityOperator {
                space: new_space,
                matrix,
            },
        ))
    }

    /// Eigenvalues, descending. Diagonal matrices short-circuit the solver;
    /// this is what keeps large classical screen states cheap.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if let Some(diag) = self.as_diagonal() {
            let mut vals = diag;
            vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
            return Ok(vals);
        }
        hermitian_eigenvalues(&self.matrix.view())
    }

    /// Von Neumann entropy in bits: `-sum lambda_i log2 lambda_i`, with
    /// eigenvalues clipped to [0, 1] and `0 log 0 := 0`.
    pub fn entropy_bits(&self) -> Result<f64> {
        let mut entropy = 0.0;
        for lambda in self.eigenvalues()? {
            let p = lambda.clamp(0.0, 1.0);
            if p > 0.0 {
                entropy -= p * p.log2();
            }
        }
        // Guard against -0.0 from a pure state.
        Ok(if entropy == 0.0 { 0.0 } else { entropy })
    }

    /// Returns the real diagonal when the off-diagonal part is negligible
    /// (Frobenius norm below 1e-12), else `None`.
    fn as_diagonal(&self) -> Option<Vec<f64>> {
        let n = self.dim();
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += self.matrix[(i, j)].norm_sqr();
                }
            }
        }
        if off.sqrt() <= 1e-12 {
            Some((0..n).map(|i| self.matrix[(i, i)].re).collect())
        } else {
            None
        }
    }
}

fn min_eigenvalue(matrix: &Array2<Complex64>) -> Result<f64> {
    // Cheap diagonal shortcut, mirroring `as_diagonal`.
    let n = matrix.nrows();
    let mut off = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off += matrix[(i, j)].norm_sqr();
            }
        }
    }
    if off.sqrt() <= 1e-12 {
        return Ok((0..n)
            .map(|i| matrix[(i, i)].re)
            .fold(f64::INFINITY, f64::min));
    }
    let vals = hermitian_eigenvalues(&matrix.view())?;
    Ok(*vals.last().expect("nonempty spectrum"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::state::StateVector;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_pb() -> StateVector {
        let space = CompositeSpace::qubits(&["P", "B"]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(
            space,
            array![c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn outer_of_basis_state_is_projector() {
        let space = CompositeSpace::qubits(&["P"]).unwrap();
        let h = StateVector::basis_state(space, &[0]).unwrap();
        let rho = h.outer();
        assert!((rho.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(rho.matrix()[(1, 1)].norm() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert_eq!(rho.entropy_bits().unwrap(), 0.0);
    }

    #[test]
    fn outer_of_bell_state_has_four_halves() {
        let rho = bell_pb().outer();
        let m = rho.matrix();
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!((m[(i, j)] - c(0.5, 0.0)).norm() < 1e-15);
        }
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        // Rank-1 projector spectrum: (1, 0, 0, 0).
        let eigs = rho.eigenvalues().unwrap();
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        for &e in &eigs[1..] {
            assert!(e.abs() < 1e-12);
        }
    }

    #[test]
    fn fringe_state_projector_has_imaginary_off_diagonals() {
        // |f> = (|psi_1> - i |psi_2>)/sqrt2
        let space = CompositeSpace::qubits(&["Q"]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let f = StateVector::new(space, array![c(s, 0.0), c(0.0, -s)]).unwrap();
        let rho = f.outer();
        assert!((rho.matrix()[(0, 1)] - c(0.0, 0.5)).norm() < 1e-15);
        assert!((rho.matrix()[(1, 0)] - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn tensor_of_mixed_states() {
        let a = DensityOperator::maximally_mixed(CompositeSpace::qubits(&["A"]).unwrap());
        let b = DensityOperator::maximally_mixed(CompositeSpace::qubits(&["B"]).unwrap());
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.dim(), 4);
        for i in 0..4 {
            assert!((ab.matrix()[(i, i)] - c(0.25, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_product_state_recovers_factor() {
        let space_a = CompositeSpace::qubits(&["A"]).unwrap();
        let rho_a = DensityOperator::new(
            space_a,
            array![[c(0.7, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.3, 0.0)]],
        )
        .unwrap();
        let rho_b = DensityOperator::maximally_mixed(CompositeSpace::qubits(&["B"]).unwrap());
        let joint = rho_a.tensor(&rho_b).unwrap();
        let back = joint.partial_trace(&["A"]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((back.matrix()[(i, j)] - rho_a.matrix()[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_of_bell_pair_is_maximally_mixed() {
        let rho = bell_pb().outer();
        let p = rho.partial_trace(&["P"]).unwrap();
        assert!((p.matrix()[(0, 0)] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((p.matrix()[(1, 1)] - c(0.5, 0.0)).norm() < 1e-12);
        assert!(p.matrix()[(0, 1)].norm() < 1e-12);
        assert!((p.entropy_bits().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_unknown_label_is_rejected() {
        let rho = bell_pb().outer();
        assert!(matches!(
            rho.partial_trace(&["Z"]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn maximally_mixed_qubit_has_one_bit() {
        let rho = DensityOperator::maximally_mixed(CompositeSpace::qubits(&["Q"]).unwrap());
        assert!((rho.entropy_bits().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn entropy_bounded_by_log_dim() {
        let space = CompositeSpace::new(vec![
            crate::tensor::SubsystemLabel::new("D_X", 7).unwrap()
        ])
        .unwrap();
        let rho = DensityOperator::maximally_mixed(space);
        assert!((rho.entropy_bits().unwrap() - (7f64).log2()).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian_matrix() {
        let space = CompositeSpace::qubits(&["Q"]).unwrap();
        let m = array![[c(0.5, 0.0), c(0.5, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]];
        assert!(matches!(
            DensityOperator::new(space, m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_wrong_trace() {
        let space = CompositeSpace::qubits(&["Q"]).unwrap();
        let m = array![[c(0.9, 0.0), c(0.0, 0.0)], [c(0.3, 0.0), c(0.3, 0.0)]];
        // Hermiticity fails first here; use a Hermitian one.
        let m2 = array![[c(0.9, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.3, 0.0)]];
        assert!(DensityOperator::new(space.clone(), m).is_err());
        assert!(matches!(
            DensityOperator::new(space, m2),
            Err(Error::TraceNotOne { .. })
        ));
    }

    #[test]
    fn rejects_negative_operator() {
        let space = CompositeSpace::qubits(&["Q"]).unwrap();
        let m = array![[c(1.1, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.1, 0.0)]];
        assert!(matches!(
            DensityOperator::new(space, m),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn condition_on_classical_mixture() {
        // rho = 1/2 |0><0| (x) |0><0| + 1/2 |1><1| (x) |1><1| on (Q, D).
        let space = CompositeSpace::qubits(&["Q", "D"]).unwrap();
        let rho =
            DensityOperator::from_diagonal(space, &[0.5, 0.0, 0.0, 0.5]).unwrap();
        let (p0, cond) = rho.condition("D", 0).unwrap();
        assert!((p0 - 0.5).abs() < 1e-12);
        assert_eq!(cond.space().labels(), vec!["Q"]);
        assert!((cond.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn from_diagonal_rejects_bad_probabilities() {
        let space = CompositeSpace::qubits(&["Q"]).unwrap();
        assert!(matches!(
            DensityOperator::from_diagonal(space.clone(), &[1.2, -0.2]),
            Err(Error::NotPositive { .. })
        ));
        assert!(matches!(
            DensityOperator::from_diagonal(space, &[0.4, 0.4]),
            Err(Error::TraceNotOne { .. })
        ));
    }
}
