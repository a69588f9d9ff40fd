//! Certifying entanglement of subspaces and low-rank states with a hierarchy
//! of linear systems.
//!
//! A subspace `S` of `C^{d_A} ⊗ C^{d_B}` is certified r-entangled at level `k`
//! when a family of vectors built from a basis of `S` is linearly
//! independent. The vectors come from implicit antisymmetric and symmetric
//! projectors, so only the (sparse) columns are ever materialized. The same
//! machinery handles Schmidt-number bounds for mixed states and complete or
//! genuine entanglement of multipartite subspaces.
//!
//! ```
//! use entcert_core::constructions::example1_subspace;
//! use entcert_core::hierarchy::{certify_bipartite, CertifyOptions};
//!
//! let s = example1_subspace();
//! let cert = certify_bipartite(&s, 1, 1, &CertifyOptions::default()).unwrap();
//! assert!(cert.is_certified());
//! assert_eq!(cert.system_dims(), vec![(36, 36)]);
//! ```

pub mod constructions;
pub mod error;
pub mod hierarchy;
pub mod linalg;
pub mod projectors;
pub mod tensor;

pub use error::{Error, Result};
pub use hierarchy::{Certificate, CertifyOptions, MixedState, Subspace, Verdict};
pub use linalg::{GaussianRational, Mode, TolPolicy, C64};
pub use tensor::TensorSpace;
