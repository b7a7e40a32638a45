//! Distributed formation control with the leader/follower gain schedule.
//!
//! Each agent applies
//!
//! ```text
//! u_i = - sum_j k_rp_ij (p_i - p_j - p*_ij) - sum_j k_rv_ij (v_i - v_j - v*_ij)
//!       - k_gp_i (p_i - p*_i) - k_gv_i (v_i - v*_i)
//! ```
//!
//! Followers carry only the relative terms, so their output is invariant
//! under a global translation of all positions and targets. Stability is
//! governed by Gamma = L_v + G_v being positive definite.

use crate::estimation::StabilityReport;
use crate::graph::{LeaderSet, WeightedGraph};
use crate::numerics::{min_symmetric_eigenvalue, AgentState, Matrix, Vec3};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ControlError {
    #[error("follower {0} has no neighbors; it cannot hold a formation")]
    IsolatedFollower(usize),
    #[error("position/velocity gain ratio must be constant: edge ({0}, {1})")]
    RatioViolation(usize, usize),
    #[error("formation spec has {got} entries for {want} agents")]
    Dimension { got: usize, want: usize },
}

/// Control gain schedule with the constant position/velocity ratio alpha,
/// `k_rp = alpha k_rv` and `k_gp = alpha k_gv`.
#[derive(Debug, Clone)]
pub struct ControlGains {
    pub alpha: f64,
    rel_p: BTreeMap<(usize, usize), f64>,
    rel_v: BTreeMap<(usize, usize), f64>,
    glob_p: Vec<f64>,
    glob_v: Vec<f64>,
}

impl ControlGains {
    pub fn new(
        rel_v: BTreeMap<(usize, usize), f64>,
        glob_v: Vec<f64>,
        alpha: f64,
    ) -> Self {
        let rel_p = rel_v.iter().map(|(&e, &w)| (e, alpha * w)).collect();
        let glob_p = glob_v.iter().map(|&g| alpha * g).collect();
        Self {
            alpha,
            rel_p,
            rel_v,
            glob_p,
            glob_v,
        }
    }

    pub fn n_agents(&self) -> usize {
        self.glob_v.len()
    }

    pub fn rel_p(&self, i: usize, j: usize) -> f64 {
        self.rel_p.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn rel_v(&self, i: usize, j: usize) -> f64 {
        self.rel_v.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn glob_p(&self, i: usize) -> f64 {
        self.glob_p[i]
    }

    pub fn glob_v(&self, i: usize) -> f64 {
        self.glob_v[i]
    }

    pub fn neighbors_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rel_v
            .range((i, 0)..(i, usize::MAX))
            .map(|(&(_, j), _)| j)
    }

    /// Velocity-channel matrix Gamma = L_v + G_v.
    pub fn gamma(&self) -> Matrix {
        let n = self.n_agents();
        let mut m = Matrix::zeros(n, n);
        for (&(i, j), &w) in &self.rel_v {
            m[(i, i)] += w;
            m[(i, j)] -= w;
        }
        for i in 0..n {
            m[(i, i)] += self.glob_v[i];
        }
        m
    }

    /// Per-axis closed-loop error dynamics `[[0, I], [-alpha Gamma, -Gamma]]`.
    pub fn error_dynamics_matrix(&self) -> Matrix {
        let n = self.n_agents();
        let gamma = self.gamma();
        let mut m = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = 1.0;
            for j in 0..n {
                m[(n + i, j)] = -self.alpha * gamma[(i, j)];
                m[(n + i, n + j)] = -gamma[(i, j)];
            }
        }
        m
    }
}

/// Paper schedule: position gains 9.0 and velocity gains 4.0, divided by
/// `N_i + 1` for leaders and `N_i` for followers (alpha = 9/4).
pub fn default_control_gains(
    g: &WeightedGraph,
    leaders: &LeaderSet,
) -> Result<ControlGains, ControlError> {
    default_control_gains_scaled(g, leaders, 9.0, 4.0)
}

pub fn default_control_gains_scaled(
    g: &WeightedGraph,
    leaders: &LeaderSet,
    pos_gain: f64,
    vel_gain: f64,
) -> Result<ControlGains, ControlError> {
    let n = g.node_count();
    let mut rel_v = BTreeMap::new();
    let mut glob_v = vec![0.0; n];
    for i in 0..n {
        let neigh = g.neighbors(i);
        let n_i = neigh.len();
        if leaders.contains(i) {
            let w = vel_gain / (n_i as f64 + 1.0);
            glob_v[i] = w;
            for j in neigh {
                rel_v.insert((i, j), w);
            }
        } else {
            if n_i == 0 {
                return Err(ControlError::IsolatedFollower(i));
            }
            let w = vel_gain / n_i as f64;
            for j in neigh {
                rel_v.insert((i, j), w);
            }
        }
    }
    Ok(ControlGains::new(rel_v, glob_v, pos_gain / vel_gain))
}

/// Desired per-agent positions and velocities; relative targets derive as
/// `p*_ij = p*_i - p*_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormationSpec {
    pub pos: Vec<Vec3>,
    pub vel: Vec<Vec3>,
}

impl FormationSpec {
    /// Static formation: desired velocities all zero.
    pub fn static_shape(pos: Vec<Vec3>) -> Self {
        let vel = vec![Vec3::zeros(); pos.len()];
        Self { pos, vel }
    }
}

/// Control output for agent `i` from a synchronous snapshot of the
/// (estimated) swarm state.
pub fn control_law(
    i: usize,
    states: &[AgentState],
    spec: &FormationSpec,
    gains: &ControlGains,
) -> Vec3 {
    debug_assert_eq!(states.len(), gains.n_agents());
    debug_assert_eq!(spec.pos.len(), gains.n_agents());
    let mut u = Vec3::zeros();
    for j in gains.neighbors_of(i) {
        let p_err = (states[i].pos - states[j].pos) - (spec.pos[i] - spec.pos[j]);
        let v_err = (states[i].vel - states[j].vel) - (spec.vel[i] - spec.vel[j]);
        u -= p_err * gains.rel_p(i, j);
        u -= v_err * gains.rel_v(i, j);
    }
    u -= (states[i].pos - spec.pos[i]) * gains.glob_p(i);
    u -= (states[i].vel - spec.vel[i]) * gains.glob_v(i);
    u
}

/// Per-axis clamp to the actuator limit.
pub fn saturate(u: Vec3, a_max: f64) -> Vec3 {
    Vec3::new(
        u.x.clamp(-a_max, a_max),
        u.y.clamp(-a_max, a_max),
        u.z.clamp(-a_max, a_max),
    )
}

/// Positive-definiteness check on Gamma = L_v + G_v.
pub fn check_controller_stability(
    _g: &WeightedGraph,
    _leaders: &LeaderSet,
    gains: &ControlGains,
) -> StabilityReport {
    let gamma = gains.gamma();
    let min = min_symmetric_eigenvalue(&gamma).expect("gamma is square");
    StabilityReport {
        stable: min > 0.0,
        min_eigenvalue: min,
    }
}
