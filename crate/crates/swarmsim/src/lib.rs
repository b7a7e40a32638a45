//! Deterministic multi-agent swarm simulation library.
//!
//! Implements the full pipeline for a quadcopter swarm flying through a ring
//! opening: unordered-measurement tracking, simulated bearing/distance
//! sensing, distributed observer-based localization, distributed formation
//! control, consensus-based formation-scale estimation, and distributed
//! collision-free trajectory optimization.
//!
//! Everything is deterministic: a scenario config plus a seed reproduces
//! byte-identical traces and reports.

pub mod control;
pub mod estimation;
pub mod graph;
pub mod numerics;
pub mod scenario;
pub mod sensing;
pub mod sim;
pub mod simnet;
pub mod tracking;
pub mod trajopt;

pub use graph::{EdgeNumbering, GraphError, LeaderSet, WeightedGraph};
pub use numerics::{AgentState, Matrix, Vec3, Vector};
