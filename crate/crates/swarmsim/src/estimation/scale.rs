//! Consensus estimator for the formation scale.
//!
//! Leaders know the true scale s(t); every agent averages neighbor
//! estimates and leaders additionally pull toward s(t):
//!
//! ```text
//! s_dot_i = -sum_j a_ij (s_i - s_j) - g_i (s_i - s(t))
//! ```
//!
//! The error obeys `e_dot = -(L_s + G_s) e - s_dot 1`, exponentially stable
//! whenever the graph is connected and at least one leader exists.

use crate::graph::{LeaderSet, WeightedGraph};
use crate::numerics::{Matrix, Vec3};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ScaleError {
    #[error("base shape must be zero-mean; mean norm is {0:.3e}")]
    BaseShapeNotCentered(f64),
    #[error("base shape has {got} entries for {want} agents")]
    Dimension { got: usize, want: usize },
}

/// Per-agent scale estimates plus the weights that drive the consensus.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleEstimatorState {
    pub estimates: Vec<f64>,
    /// a_ij, row i = weights agent i applies to its neighbors.
    weights: Matrix,
    /// Leader injection gains, zero off the leader set.
    leader_gain: Vec<f64>,
    /// Last true scale the leaders saw; followers never read it.
    last_scale_input: f64,
}

impl ScaleEstimatorState {
    pub fn new(estimates: Vec<f64>, weights: Matrix, leader_gain: Vec<f64>) -> Self {
        assert_eq!(weights.nrows(), estimates.len());
        assert_eq!(weights.ncols(), estimates.len());
        assert_eq!(leader_gain.len(), estimates.len());
        Self {
            estimates,
            weights,
            leader_gain,
            last_scale_input: 1.0,
        }
    }

    pub fn n_agents(&self) -> usize {
        self.estimates.len()
    }

    /// `L_s + G_s`, the matrix whose spectrum sets the convergence rate.
    pub fn system_matrix(&self) -> Matrix {
        let n = self.n_agents();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i != j && self.weights[(i, j)] != 0.0 {
                    m[(i, i)] += self.weights[(i, j)];
                    m[(i, j)] -= self.weights[(i, j)];
                }
            }
            m[(i, i)] += self.leader_gain[i];
        }
        m
    }

    /// Instantaneous estimate derivatives under the consensus law.
    pub fn rates(&self, s_true: f64) -> Vec<f64> {
        let n = self.n_agents();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut rate = 0.0;
            for j in 0..n {
                if i != j && self.weights[(i, j)] != 0.0 {
                    rate -= self.weights[(i, j)] * (self.estimates[i] - self.estimates[j]);
                }
            }
            rate -= self.leader_gain[i] * (self.estimates[i] - s_true);
            out[i] = rate;
        }
        out
    }
}

/// Paper weight schedule: leaders `a_ij = g_i = 1/(N_i + 1)`, followers
/// `a_ij = 1/N_i`, `g_i = 0`.
pub fn default_scale_weights(g: &WeightedGraph, leaders: &LeaderSet) -> (Matrix, Vec<f64>) {
    let n = g.node_count();
    let mut w = Matrix::zeros(n, n);
    let mut gain = vec![0.0; n];
    for i in 0..n {
        let neigh = g.neighbors(i);
        let n_i = neigh.len() as f64;
        let a = if leaders.contains(i) {
            gain[i] = 1.0 / (n_i + 1.0);
            1.0 / (n_i + 1.0)
        } else if n_i > 0.0 {
            1.0 / n_i
        } else {
            0.0
        };
        for j in neigh {
            w[(i, j)] = a;
        }
    }
    (w, gain)
}

/// One forward-Euler step of the consensus law. Records `s_true` so later
/// desired-trajectory evaluations use the same leader information.
pub fn scale_step(state: &ScaleEstimatorState, s_true: f64, dt: f64) -> ScaleEstimatorState {
    debug_assert!(dt > 0.0);
    let rates = state.rates(s_true);
    let estimates = state
        .estimates
        .iter()
        .zip(&rates)
        .map(|(s, r)| s + r * dt)
        .collect();
    ScaleEstimatorState {
        estimates,
        weights: state.weights.clone(),
        leader_gain: state.leader_gain.clone(),
        last_scale_input: s_true,
    }
}

/// Approximated desired trajectories from the current scale estimates:
/// `p*_i = p_c + s_est_i r_i` and `v*_i = v_c + s_dot_est_i r_i`, where the
/// scale rate comes from the estimator's own dynamics.
///
/// The base shape must be zero-mean so the formation center stays `p_c`.
pub fn desired_trajectory_from_scale(
    center: (Vec3, Vec3),
    base_shape: &[Vec3],
    state: &ScaleEstimatorState,
) -> Result<Vec<(Vec3, Vec3)>, ScaleError> {
    if base_shape.len() != state.n_agents() {
        return Err(ScaleError::Dimension {
            got: base_shape.len(),
            want: state.n_agents(),
        });
    }
    let mean = base_shape.iter().sum::<Vec3>() / base_shape.len() as f64;
    if mean.norm() > 1e-9 {
        return Err(ScaleError::BaseShapeNotCentered(mean.norm()));
    }
    let rates = state.rates(state.last_scale_input);
    Ok(base_shape
        .iter()
        .enumerate()
        .map(|(i, r)| {
            (
                center.0 + r * state.estimates[i],
                center.1 + r * rates[i],
            )
        })
        .collect())
}
