//! Adaptive surveying and reacquisition (ASR) for side-scan sonar.
//!
//! This crate simulates the full pipeline of an AUV survey mission:
//!
//! - [`numerics`] — dense f32 tensors with reverse-mode automatic
//!   differentiation and an Adam optimizer; every network in the crate
//!   trains on CPU through this module.
//! - [`sonarsim`] — ray-traced side-scan sonar image synthesis over
//!   procedural seafloor terrain (Lambertian backscatter, acoustic
//!   shadowing, slant-range binning, speckle) and dataset generation.
//! - [`nav`] — Dubins paths, lawnmower coverage plans, and the
//!   object-identification (OID) reacquisition legs, with time accounting.
//! - [`viewgraph`] — the angular view-graph over captured views, the
//!   kNN view-graph baseline, and subgraph enumeration.
//! - [`gmvatr`] — the graph multi-view target-recognition classifier
//!   (CNN backbone, learned angular edges, graph convolutions) and its
//!   training loop.
//! - [`vqf`] — the view-Q function: a DQN over view-graph states that
//!   chooses the next viewing angle or STOP.
//! - [`asr`] — the survey environment and the adaptive survey and
//!   reacquisition planner, plus baseline policies.
//! - [`harness`] — experiment orchestration, metrics, and reports.

pub mod asr;
pub mod gmvatr;
pub mod harness;
pub mod nav;
pub mod numerics;
pub mod sonarsim;
pub mod viewgraph;
pub mod vqf;

/// Mixes a base seed with a stream index into an independent 64-bit seed.
///
/// SplitMix64 finalizer; used everywhere a deterministic sub-stream is
/// derived from a user-facing seed.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
