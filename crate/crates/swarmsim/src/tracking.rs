//! Per-agent random-walk trackers that pick each agent's position out of an
//! unordered measurement set and tolerate missing measurements.
//!
//! Each tick runs predict -> associate -> correct. Association is greedy in
//! ascending agent-id order and a claimed measurement is removed from the
//! pool, so no measurement is ever consumed twice.

use crate::numerics::Vec3;
use serde::{Deserialize, Serialize};

/// Ticks of consecutive missed measurements after which a track is flagged
/// as lost (1 s at the 5 ms tracking interval).
pub const LOST_TRACK_TICKS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrackerPhase {
    Predicted,
    Corrected,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrackerGains {
    /// Position innovation gain, in (0, 1].
    pub k_p: f64,
    /// Velocity innovation gain, per second.
    pub k_v: f64,
}

impl Default for TrackerGains {
    fn default() -> Self {
        Self {
            k_p: 0.8,
            k_v: 0.0005,
        }
    }
}

impl TrackerGains {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.k_p > 0.0 && self.k_p <= 1.0) {
            return Err(format!("tracker k_p must be in (0, 1], got {}", self.k_p));
        }
        if self.k_v < 0.0 {
            return Err(format!("tracker k_v must be >= 0, got {}", self.k_v));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrackerState {
    pub p_hat: Vec3,
    pub v_hat: Vec3,
    pub phase: TrackerPhase,
    pub missed_count: u32,
}

impl TrackerState {
    /// Seeds a track at a known position with zero velocity.
    pub fn seeded(p: Vec3) -> Self {
        Self {
            p_hat: p,
            v_hat: Vec3::zeros(),
            phase: TrackerPhase::Corrected,
            missed_count: 0,
        }
    }

    pub fn is_lost(&self) -> bool {
        self.missed_count >= LOST_TRACK_TICKS
    }
}

/// Prior update: `p <- p + v dt`, velocity carried over.
pub fn predict(s: &TrackerState, dt: f64) -> TrackerState {
    debug_assert!(dt > 0.0);
    TrackerState {
        p_hat: s.p_hat + s.v_hat * dt,
        v_hat: s.v_hat,
        phase: TrackerPhase::Predicted,
        missed_count: s.missed_count,
    }
}

/// Picks the measurement nearest the predicted position; ties go to the
/// lowest index. `None` signals a missing measurement.
pub fn associate(s: &TrackerState, measurements: &[Vec3]) -> Option<(Vec3, usize)> {
    debug_assert_eq!(s.phase, TrackerPhase::Predicted);
    let mut best: Option<(usize, f64)> = None;
    for (idx, z) in measurements.iter().enumerate() {
        let d2 = (z - s.p_hat).norm_squared();
        match best {
            Some((_, bd)) if d2 >= bd => {}
            _ => best = Some((idx, d2)),
        }
    }
    best.map(|(idx, _)| (measurements[idx], idx))
}

/// Measurement update with scalar gains on the position innovation.
pub fn correct(s: &TrackerState, z: Vec3, gains: &TrackerGains) -> TrackerState {
    debug_assert_eq!(s.phase, TrackerPhase::Predicted);
    let innovation = z - s.p_hat;
    TrackerState {
        p_hat: s.p_hat + innovation * gains.k_p,
        v_hat: s.v_hat + innovation * gains.k_v,
        phase: TrackerPhase::Corrected,
        missed_count: 0,
    }
}

/// Default claim gate for [`track_swarm`]: a measurement farther than this
/// from the predicted position counts as missing rather than claimable, so
/// an earlier tracker cannot steal a far agent's measurement when its own
/// went missing.
pub const DEFAULT_CLAIM_GATE: f64 = 0.5;

/// One tick for the whole swarm over an unordered measurement set.
///
/// Trackers claim measurements greedily in ascending agent-id order; a
/// claimed measurement leaves the pool before the next tracker associates.
/// A tracker whose nearest remaining measurement lies beyond `claim_gate`
/// (or that finds the pool empty) only predicts and bumps its missed count.
pub fn track_swarm(
    trackers: &[TrackerState],
    measurements: &[Vec3],
    gains: &TrackerGains,
    dt: f64,
    claim_gate: f64,
) -> Vec<TrackerState> {
    let mut pool: Vec<Vec3> = measurements.to_vec();
    let mut out = Vec::with_capacity(trackers.len());
    for s in trackers {
        let predicted = predict(s, dt);
        match associate(&predicted, &pool) {
            Some((z, pool_idx)) if (z - predicted.p_hat).norm() <= claim_gate => {
                pool.remove(pool_idx);
                out.push(correct(&predicted, z, gains));
            }
            _ => {
                let mut missed = predicted;
                missed.missed_count += 1;
                out.push(missed);
            }
        }
    }
    out
}
