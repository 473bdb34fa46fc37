//! Spectral graph clustering by column-pivoted QR.
//!
//! Given an orthonormal basis `V_k` for the dominant eigenspace of a graph
//! matrix, [`cluster::assign_deterministic`] picks one representative node per
//! cluster with a greedy column-pivoted QR of `V_kᵀ`, aligns a coordinate
//! system to those representatives through a polar factorization, and labels
//! every node by its largest-magnitude coordinate. [`cluster::assign_randomized`]
//! runs the same steps on a leverage-score sample of the columns.
//!
//! The remaining modules supply what the algorithm stands on:
//!
//! * [`linalg`]: dense matrices, symmetric eigensolvers (dense and block
//!   Lanczos), a small Jacobi SVD, spectral norms and subspace distances.
//! * [`factor`]: column-pivoted QR and the polar factorization.
//! * [`graph`]: sparse graphs, stochastic block model sampling, degree
//!   normalization, components, the multi-way cut metric and edge-list I/O.
//! * [`experiments`]: reproducible phase-diagram sweeps and their CSV/SVG output.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled (the default) and runs sequentially otherwise.

pub mod cluster;
pub mod error;
pub mod experiments;
pub mod factor;
pub mod graph;
pub mod linalg;
pub mod par;
pub mod rng;

pub use error::{Error, Result};
