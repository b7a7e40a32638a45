//! Dense linear algebra, symmetric eigenvalues, discrete integration and the
//! projection QP solver used by every trajectory-optimization step.

mod qp;

pub use qp::{
    project_onto, solve_qp, ConstraintKind, ConstraintSet, QpError, QpProblem, QpSolution,
    QpStatus, DEFAULT_MAX_ITER, DEFAULT_TOL,
};

use nalgebra::{DMatrix, DVector, Vector3};
use thiserror::Error;

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;
pub type Vec3 = Vector3<f64>;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix is not symmetric: max |M - M^T| = {0:.3e}")]
    NotSymmetric(f64),
    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
}

/// Double-integrator state: position and velocity in 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    pub pos: Vec3,
    pub vel: Vec3,
}

impl AgentState {
    pub fn new(pos: Vec3, vel: Vec3) -> Self {
        Self { pos, vel }
    }

    pub fn at_rest(pos: Vec3) -> Self {
        Self {
            pos,
            vel: Vec3::zeros(),
        }
    }
}

/// One forward-Euler step of the double integrator:
/// `p' = p + v dt`, `v' = v + a dt`.
///
/// This is the same forward-difference pattern used to discretize all the
/// continuous-time observer/controller/scale laws at the simulation step.
pub fn euler_step(state: &AgentState, accel: &Vec3, dt: f64) -> AgentState {
    debug_assert!(dt > 0.0);
    AgentState {
        pos: state.pos + state.vel * dt,
        vel: state.vel + accel * dt,
    }
}

/// Forward-difference operator: `(Dx)_k = (x_{k+1} - x_k)/h` applied per
/// axis to a sample-major stacked vector of `steps` samples of `dims`
/// components each. Shape `dims*(steps-1)` x `dims*steps`.
pub fn forward_difference_matrix(steps: usize, h: f64, dims: usize) -> Matrix {
    assert!(steps >= 2, "need at least two samples to difference");
    assert!(h > 0.0);
    let mut d = DMatrix::zeros(dims * (steps - 1), dims * steps);
    for k in 0..steps - 1 {
        for axis in 0..dims {
            d[(k * dims + axis, k * dims + axis)] = -1.0 / h;
            d[(k * dims + axis, (k + 1) * dims + axis)] = 1.0 / h;
        }
    }
    d
}

/// Eigenvalues of a symmetric matrix, ascending. Rejects matrices whose
/// asymmetry exceeds 1e-10 so silent misuse on nonsymmetric inputs fails
/// loudly instead of returning garbage.
pub fn sym_eigenvalues(m: &Matrix) -> Result<Vector, NumericsError> {
    if m.nrows() != m.ncols() {
        return Err(NumericsError::NotSquare(m.nrows(), m.ncols()));
    }
    let asym = (m - m.transpose()).amax();
    if asym > 1e-10 {
        return Err(NumericsError::NotSymmetric(asym));
    }
    // Symmetrize to kill roundoff-level asymmetry before factoring.
    let sym = (m + m.transpose()) * 0.5;
    let mut vals: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(Vector::from_vec(vals))
}

/// Smallest eigenvalue of the symmetric part of `m`; the quadratic-form test
/// behind both stability checks (`x^T M x > 0` for all `x != 0`).
pub fn min_symmetric_eigenvalue(m: &Matrix) -> Result<f64, NumericsError> {
    if m.nrows() != m.ncols() {
        return Err(NumericsError::NotSquare(m.nrows(), m.ncols()));
    }
    let sym = (m + m.transpose()) * 0.5;
    let vals = sym_eigenvalues(&sym)?;
    Ok(vals[0])
}
