//! Labeled composite Hilbert spaces.
//!
//! A [`CompositeSpace`] is an ordered list of named subsystems. The order is
//! fixed at construction and defines the Kronecker (tensor) index convention:
//! the first subsystem is the most significant digit of the flat basis index.

use crate::error::{Error, Result};

/// A named subsystem with its Hilbert-space dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLabel {
    name: String,
    dim: usize,
}

impl SubsystemLabel {
    pub fn new(name: impl Into<String>, dim: usize) -> Result<Self> {
        let name = name.into();
        if dim == 0 {
            return Err(Error::ZeroDimension(name));
        }
        Ok(Self { name, dim })
    }

    /// Convenience constructor for a two-level subsystem.
    pub fn qubit(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            dim: 2,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// An ordered list of uniquely named subsystems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeSpace {
    parts: Vec<SubsystemLabel>,
}

impl CompositeSpace {
    /// Builds a composite space, rejecting duplicate labels.
    pub fn new(parts: Vec<SubsystemLabel>) -> Result<Self> {
        for (i, p) in parts.iter().enumerate() {
            if parts[..i].iter().any(|q| q.name() == p.name()) {
                return Err(Error::DuplicateLabel(p.name().to_string()));
            }
        }
        Ok(Self { parts })
    }

    /// Builds a space of qubits from a list of names.
    pub fn qubits(names: &[&str]) -> Result<Self> {
        Self::new(names.iter().map(|n| SubsystemLabel::qubit(*n)).collect())
    }

    pub fn parts(&self) -> &[SubsystemLabel] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Product of all subsystem dimensions.
    pub fn total_dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim()).product()
    }

    /// Position of a label in the declared order.
    pub fn position(&self, name: &str) -> Result<usize> {
        self.parts
            .iter()
            .position(|p| p.name() == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn dim_of(&self, name: &str) -> Result<usize> {
        Ok(self.parts[self.position(name)?].dim())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.parts.iter().any(|p| p.name() == name)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.parts.iter().map(|p| p.name()).collect()
    }

    /// Row-major strides: `flat = sum_i multi[i] * stride[i]`, with the first
    /// subsystem varying slowest.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.parts.len()];
        for i in (0..self.parts.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.parts[i + 1].dim();
        }
        strides
    }

    /// Concatenation of two spaces; label sets must be disjoint.
    pub fn concat(&self, other: &CompositeSpace) -> Result<CompositeSpace> {
        let mut parts = self.parts.clone();
        for p in &other.parts {
            if self.contains(p.name()) {
                return Err(Error::DuplicateLabel(p.name().to_string()));
            }
            parts.push(p.clone());
        }
        CompositeSpace::new(parts)
    }

    /// The subspace holding `keep`, in this space's original relative order.
    /// Every entry of `keep` must name a subsystem; duplicates are rejected.
    pub fn subspace(&self, keep: &[&str]) -> Result<CompositeSpace> {
        if keep.is_empty() {
            return Err(Error::EmptySelection);
        }
        for (i, k) in keep.iter().enumerate() {
            self.position(k)?;
            if keep[..i].contains(k) {
                return Err(Error::DuplicateLabel(k.to_string()));
            }
        }
        let parts = self
            .parts
            .iter()
            .filter(|p| keep.contains(&p.name()))
            .cloned()
            .collect();
        CompositeSpace::new(parts)
    }
}
