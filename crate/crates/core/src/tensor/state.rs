//! Pure states on labeled composite spaces.

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;

use super::density::DensityOperator;
use super::space::CompositeSpace;
use crate::error::{Error, Result};

/// Absolute tolerance on `| ||psi|| - 1 |` at construction.
pub const NORM_TOL: f64 = 1e-12;

/// Absolute tolerance on `max |U†U - 1|` for unitarity checks.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A normalized pure state with amplitudes indexed in the space's
/// Kronecker order.
#[derive(Debug, Clone)]
pub struct StateVector {
    space: CompositeSpace,
    amplitudes: Array1<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes, checking length and normalization.
    pub fn new(space: CompositeSpace, amplitudes: Array1<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm,
                tol: NORM_TOL,
            });
        }
        Ok(Self { space, amplitudes })
    }

    /// The computational basis state `|i_1 i_2 ...>` given one index per
    /// subsystem.
    pub fn basis_state(space: CompositeSpace, indices: &[usize]) -> Result<Self> {
        if indices.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                actual: indices.len(),
            });
        }
        let strides = space.strides();
        let mut flat = 0usize;
        for ((idx, part), stride) in indices.iter().zip(space.parts()).zip(&strides) {
            if *idx >= part.dim() {
                return Err(Error::IndexOutOfRange {
                    label: part.name().to_string(),
                    index: *idx,
                    dim: part.dim(),
                });
            }
            flat += idx * stride;
        }
        let mut amplitudes = Array1::<Complex64>::zeros(space.total_dim());
        amplitudes[flat] = Complex64::new(1.0, 0.0);
        Ok(Self { space, amplitudes })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> ArrayView1<'_, Complex64> {
        self.amplitudes.view()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                actual: other.amplitudes.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product; the result space is the concatenation of the inputs.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let space = self.space.concat(other.space())?;
        let n = other.amplitudes.len();
        let mut amplitudes = Array1::<Complex64>::zeros(space.total_dim());
        for (i, a) in self.amplitudes.iter().enumerate() {
            for (j, b) in other.amplitudes.iter().enumerate() {
                amplitudes[i * n + j] = a * b;
            }
        }
        Ok(StateVector { space, amplitudes })
    }

    /// Applies a unitary to a single subsystem, identity elsewhere.
    pub fn apply_unitary(&self, u: &Array2<Complex64>, target: &str) -> Result<StateVector> {
        self.apply_unitary_multi(u, &[target])
    }

    /// Applies a unitary to an ordered tuple of subsystems, identity on the
    /// rest. The operator dimension must match the product of the target
    /// dimensions, with the first-named target as the most significant index.
    pub fn apply_unitary_multi(
        &self,
        u: &Array2<Complex64>,
        targets: &[&str],
    ) -> Result<StateVector> {
        if targets.is_empty() {
            return Err(Error::EmptySelection);
        }
        let mut positions = Vec::with_capacity(targets.len());
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::DuplicateLabel(t.to_string()));
            }
            positions.push(self.space.position(t)?);
        }
        let dims: Vec<usize> = positions
            .iter()
            .map(|&p| self.space.parts()[p].dim())
            .collect();
        let target_dim: usize = dims.iter().product();
        if u.nrows() != target_dim || u.ncols() != target_dim {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                actual: u.nrows(),
            });
        }
        check_unitary(u)?;

        let strides = self.space.strides();
        // Flat offset of each target multi-index, first target most significant.
        let target_offsets: Vec<usize> = (0..target_dim)
            .map(|t| {
                let mut rem = t;
                let mut offset = 0;
                for (k, &d) in dims.iter().enumerate().rev() {
                    offset += (rem % d) * strides[positions[k]];
                    rem /= d;
                }
                offset
            })
            .collect();
        // Enumerate the environment (non-target) flat offsets.
        let env_positions: Vec<usize> = (0..self.space.len())
            .filter(|p| !positions.contains(p))
            .collect();
        let env_dims: Vec<usize> = env_positions
            .iter()
            .map(|&p| self.space.parts()[p].dim())
            .collect();
        let env_count: usize = env_dims.iter().product();

        let mut out = self.amplitudes.clone();
        let mut gathered = vec![Complex64::new(0.0, 0.0); target_dim];
        for e in 0..env_count {
            let mut rem = e;
            let mut base = 0;
            for (k, &d) in env_dims.iter().enumerate().rev() {
                base += (rem % d) * strides[env_positions[k]];
                rem /= d;
            }
            for (t, g) in gathered.iter_mut().enumerate() {
                *g = self.amplitudes[base + target_offsets[t]];
            }
            for (row, &off) in target_offsets.iter().enumerate() {
                let mut sum = Complex64::new(0.0, 0.0);
                for (col, g) in gathered.iter().enumerate() {
                    sum += u[(row, col)] * g;
                }
                out[base + off] = sum;
            }
        }
        Ok(StateVector {
            space: self.space.clone(),
            amplitudes: out,
        })
    }

    /// Rearranges the subsystems into the given order (a permutation of the
    /// current labels).
    pub fn reorder(&self, order: &[&str]) -> Result<StateVector> {
        if order.len() != self.space.len() {
            return Err(Error::DimensionMismatch {
                expected: self.space.len(),
                actual: order.len(),
            });
        }
        let mut positions = Vec::with_capacity(order.len());
        for (i, name) in order.iter().enumerate() {
            if order[..i].contains(name) {
                return Err(Error::DuplicateLabel(name.to_string()));
            }
            positions.push(self.space.position(name)?);
        }
        let new_space = CompositeSpace::new(
            positions
                .iter()
                .map(|&p| self.space.parts()[p].clone())
                .collect(),
        )?;
        let old_strides = self.space.strides();
        let new_strides = new_space.strides();
        let new_dims: Vec<usize> = new_space.parts().iter().map(|p| p.dim()).collect();

        let mut amplitudes = Array1::<Complex64>::zeros(self.amplitudes.len());
        for new_flat in 0..amplitudes.len() {
            let mut rem = new_flat;
            let mut old_flat = 0;
            for k in 0..new_dims.len() {
                let digit = rem / new_strides[k];
                rem %= new_strides[k];
                old_flat += digit * old_strides[positions[k]];
            }
            amplitudes[new_flat] = self.amplitudes[old_flat];
        }
        Ok(StateVector {
            space: new_space,
            amplitudes,
        })
    }

    /// Projects one subsystem onto a basis outcome and renormalizes,
    /// returning the outcome probability and the state of the remaining
    /// subsystems.
    pub fn project(&self, label: &str, outcome: usize) -> Result<(f64, StateVector)> {
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
        // Positions of the kept labels in the old space, in kept order.
        let kept_positions: Vec<usize> = (0..self.space.len()).filter(|&p| p != pos).collect();

        let mut amplitudes = Array1::<Complex64>::zeros(new_space.total_dim());
        let mut prob = 0.0;
        for new_flat in 0..amplitudes.len() {
            let mut rem = new_flat;
            let mut old_flat = outcome * old_strides[pos];
            for k in 0..kept_positions.len() {
                let digit = rem / new_strides[k];
                rem %= new_strides[k];
                old_flat += digit * old_strides[kept_positions[k]];
            }
            let a = self.amplitudes[old_flat];
            prob += a.norm_sqr();
            amplitudes[new_flat] = a;
        }
        if prob <= f64::EPSILON {
            return Err(Error::ZeroProbability {
                label: label.to_string(),
                outcome,
            });
        }
        let scale = Complex64::new(1.0 / prob.sqrt(), 0.0);
        amplitudes.mapv_inplace(|z| z * scale);
        Ok((
            prob,
            StateVector {
                space: new_space,
                amplitudes,
            },
        ))
    }

    /// The rank-1 projector `|psi><psi|`.
    pub fn outer(&self) -> DensityOperator {
        let n = self.amplitudes.len();
        let mut matrix = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                matrix[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityOperator::new_unchecked(self.space.clone(), matrix)
    }
}

/// Checks `max |U†U - 1| <= UNITARITY_TOL`.
pub fn check_unitary(u: &Array2<Complex64>) -> Result<()> {
    let n = u.nrows();
    if u.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: u.ncols(),
        });
    }
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..n {
                sum += u[(k, i)].conj() * u[(k, j)];
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((sum - expect).norm());
        }
    }
    if dev > UNITARITY_TOL {
        return Err(Error::NotUnitary { max_dev: dev });
    }
    Ok(())
}
