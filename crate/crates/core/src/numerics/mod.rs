//! Dense f32 tensor math with reverse-mode automatic differentiation.
//!
//! The module is deliberately small: row-major [`Tensor`] values, a
//! define-by-run [`Graph`] recording operations for backpropagation, an
//! [`Adam`] optimizer over named [`ParamSet`]s, and a binary weight
//! checkpoint format. There is no implicit broadcasting beyond bias
//! addition; shapes are checked at op-construction time and mismatches
//! surface as [`NumericsError`].
//!
//! Tensors are immutable once handed to a graph; training steps mutate
//! parameters single-threaded. Data-parallel minibatch evaluation is fine
//! as long as gradient accumulation is serialized in a fixed order.

mod checkpoint;
mod graph;
pub mod gradcheck;
mod optim;
mod tensor;

pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use graph::{Graph, Var};
pub use optim::{Adam, AdamConfig};
pub use tensor::Tensor;

use thiserror::Error;

/// Errors raised by tensor operations and training steps.
#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("dimension mismatch in {op}: lhs {lhs:?} vs rhs {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: Vec<usize>,
        rhs: Vec<usize>,
    },
    #[error("{op}: invalid shape {shape:?}: {reason}")]
    InvalidShape {
        op: &'static str,
        shape: Vec<usize>,
        reason: String,
    },
    #[error("shape {shape:?} does not match {len} data elements")]
    ShapeDataMismatch { shape: Vec<usize>, len: usize },
    #[error("non-finite value encountered in parameter '{name}'")]
    NonFinite { name: String },
    #[error("checkpoint i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad checkpoint: {0}")]
    BadCheckpoint(String),
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// An ordered set of named parameter tensors.
///
/// Insertion order is the canonical order for gradients, optimizer state,
/// and checkpoint records, which keeps every training run reproducible.
#[derive(Debug, Clone, Default)]
pub struct ParamSet {
    names: Vec<String>,
    tensors: Vec<Tensor>,
}

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a parameter; panics on duplicate names (a model-building bug).
    pub fn insert(&mut self, name: impl Into<String>, tensor: Tensor) {
        let name = name.into();
        assert!(
            !self.names.contains(&name),
            "duplicate parameter name: {name}"
        );
        self.names.push(name);
        self.tensors.push(tensor.requires_grad(true));
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, name: &str) -> &Tensor {
        let idx = self
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown parameter: {name}"));
        &self.tensors[idx]
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn tensor(&self, idx: usize) -> &Tensor {
        &self.tensors[idx]
    }

    pub fn tensor_mut(&mut self, idx: usize) -> &mut Tensor {
        &mut self.tensors[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Tensor)> {
        self.names.iter().map(|s| s.as_str()).zip(self.tensors.iter())
    }

    /// Zero-filled gradient buffers aligned with the parameter order.
    pub fn zero_grads(&self) -> Vec<Vec<f32>> {
        self.tensors.iter().map(|t| vec![0.0; t.numel()]).collect()
    }

    /// Adds `src` into `dst` element-wise; both must be aligned with this set.
    pub fn accumulate(dst: &mut [Vec<f32>], src: &[Vec<f32>]) {
        assert_eq!(dst.len(), src.len(), "gradient set size mismatch");
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            assert_eq!(d.len(), s.len(), "gradient length mismatch");
            for (dv, sv) in d.iter_mut().zip(s.iter()) {
                *dv += sv;
            }
        }
    }
}
