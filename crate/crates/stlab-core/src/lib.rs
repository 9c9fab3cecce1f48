//! Numerical laboratory for spectral triples realized as finite matrix
//! truncations.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! models  ──>  operators  ──>  spectra  ──>  asymptotic fits  ──>  verdicts
//! (kernel: dense Hermitian eigensolver / SVD / functional calculus)
//! ```
//!
//! * [`kernel`] — dense Hermitian linear algebra with the kernel-killing
//!   partial-power convention,
//! * [`seq`] — singular/signed eigenvalue sequences, weak quasi-norms,
//!   counting functions, Weyl-limit and decay-exponent fits, the
//!   logarithmic-mean trace estimator,
//! * [`models`] — concrete truncated triples (flat and quantum tori, Dirac
//!   tori, rectangles, the Steklov circle, the degenerate Grushin cylinder)
//!   together with their symbol algebras,
//! * [`ops`] — derived operators: Birman–Schwinger sandwiches, fractional
//!   Schrödinger operators, fractional commutators, heat and zeta traces,
//! * [`doi`] — double-operator-integral transformers and the factorization
//!   identity for fractional commutators,
//! * [`verify`] — declarative experiments binding the above into pass/fail
//!   reports.
//!
//! The crate is `no_std`-compatible (with `alloc`); everything that touches
//! the file system or clocks lives in the companion `stlab` crate.

#![cfg_attr(not(feature = "std"), no_std)]
// Dense kernels index in classic triangular patterns; iterator rewrites
// would obscure the recurrences.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod doi;
pub mod error;
pub mod kernel;
pub mod models;
pub mod ops;
pub mod quad;
pub mod seq;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{HermitianMatrix, Matrix, SingularValueData, SpectralDecomposition};
pub use models::{FourierSymbol, ModelKind, ModelTriple, ThetaMatrix};

