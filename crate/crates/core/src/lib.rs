// SPDX-License-Identifier: Apache-2.0

//! Gromov hyperbolicity of small-world and ringed-tree random graphs.
//!
//! * [`generators`] builds seeded grid small worlds, ringed trees and their
//!   random long-range variants.
//! * [`hyperbolicity`] measures four-point δ (exact and sampled) and Rips
//!   slimness.
//! * [`ringed`] holds ringed-tree addressing, canonical geodesics, the
//!   Poincaré-disk embedding and structural verifiers.
//! * [`experiments`] runs parameter sweeps and fits scaling trends.
//!
//! Every random draw is keyed by `(seed, stream, index)`, so outputs do not
//! depend on the number of worker threads.

pub mod edgelist;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod hyperbolicity;
pub mod ringed;
pub mod seed;

pub use edgelist::{EdgeListFile, EDGELIST_FORMAT_VERSION};
pub use error::{Error, Result};
pub use experiments::SWEEP_CSV_FORMAT_VERSION;
pub use generators::{generate, GKind, GenSpec, Model, SpanBound, Variants};
pub use graph::{all_pairs, DistanceMatrix, Geodesic, Graph, VertexId};
pub use hyperbolicity::{exact_delta, sampled_delta, DeltaReport, Method};
