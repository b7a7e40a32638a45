//! Dense operator-splitting QP solver with an active-set polish step.
//!
//! Solves `min 1/2 x^T Q x + q^T x` subject to `A_eq x = b_eq` and
//! `A_in x <= b_in`. The splitting treats both blocks as a single clipped
//! constraint `l <= C x <= u` (equalities get `l = u`), which is exactly the
//! structure of every projection problem in the trajectory optimizer.

use super::{Matrix, Vector};
use nalgebra::DMatrix;
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 20_000;

const SIGMA: f64 = 1e-6;
const RELAXATION: f64 = 1.6;
const RHO_INEQ: f64 = 0.1;
const RHO_EQ_SCALE: f64 = 1e3;
const CHECK_INTERVAL: usize = 25;

#[derive(Debug, Error)]
pub enum QpError {
    #[error("quadratic cost must be square, got {0}x{1}")]
    QuadNotSquare(usize, usize),
    #[error("quadratic cost is not symmetric: max |Q - Q^T| = {0:.3e}")]
    QuadAsymmetric(f64),
    #[error("dimension mismatch in {0}")]
    Dimension(&'static str),
    #[error("problem data contains non-finite entries")]
    NonFinite,
    #[error("KKT factorization failed")]
    Factorization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpStatus {
    Optimal,
    Infeasible,
    MaxIter,
}

#[derive(Debug, Clone)]
pub struct QpProblem {
    /// Symmetric PSD cost matrix Q.
    pub quad: Matrix,
    /// Linear cost q.
    pub lin: Vector,
    pub a_eq: Matrix,
    pub b_eq: Vector,
    pub a_in: Matrix,
    pub b_in: Vector,
}

impl QpProblem {
    /// Unconstrained-shape problem with empty constraint blocks.
    pub fn new(quad: Matrix, lin: Vector) -> Self {
        let n = lin.len();
        Self {
            quad,
            lin,
            a_eq: Matrix::zeros(0, n),
            b_eq: Vector::zeros(0),
            a_in: Matrix::zeros(0, n),
            b_in: Vector::zeros(0),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.lin.len()
    }

    pub fn objective(&self, x: &Vector) -> f64 {
        0.5 * (x.transpose() * &self.quad * x)[(0, 0)] + self.lin.dot(x)
    }

    fn validate(&self) -> Result<(), QpError> {
        let n = self.n_vars();
        if self.quad.nrows() != self.quad.ncols() {
            return Err(QpError::QuadNotSquare(self.quad.nrows(), self.quad.ncols()));
        }
        if self.quad.nrows() != n {
            return Err(QpError::Dimension("quadratic cost vs linear cost"));
        }
        let asym = (&self.quad - self.quad.transpose()).amax();
        if asym > 1e-10 {
            return Err(QpError::QuadAsymmetric(asym));
        }
        if self.a_eq.nrows() != self.b_eq.len() || (self.a_eq.nrows() > 0 && self.a_eq.ncols() != n)
        {
            return Err(QpError::Dimension("equality block"));
        }
        if self.a_in.nrows() != self.b_in.len() || (self.a_in.nrows() > 0 && self.a_in.ncols() != n)
        {
            return Err(QpError::Dimension("inequality block"));
        }
        let finite = self.quad.iter().all(|v| v.is_finite())
            && self.lin.iter().all(|v| v.is_finite())
            && self.a_eq.iter().all(|v| v.is_finite())
            && self.b_eq.iter().all(|v| v.is_finite())
            && self.a_in.iter().all(|v| v.is_finite())
            && self.b_in.iter().all(|v| v.is_finite());
        if !finite {
            return Err(QpError::NonFinite);
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct QpSolution {
    pub x: Vector,
    pub status: QpStatus,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
}

impl QpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == QpStatus::Optimal
    }
}

/// Row provenance inside a [`ConstraintSet`]; the trajectory optimizer tags
/// every row so tests and event logs can account for them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Boundary,
    Crossing,
    /// Accelerations already flown when a re-optimization happens mid-flight.
    Prefix,
    Tube,
    LeftCone,
    RightCone,
    Collision {
        i: usize,
        j: usize,
        k: usize,
    },
    Actuator,
}

/// Equality and inequality rows over one decision vector, with per-row tags.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    n_vars: usize,
    eq_rows: Vec<Vec<f64>>,
    eq_rhs: Vec<f64>,
    eq_kinds: Vec<ConstraintKind>,
    in_rows: Vec<Vec<f64>>,
    in_rhs: Vec<f64>,
    in_kinds: Vec<ConstraintKind>,
}

impl ConstraintSet {
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            eq_rows: Vec::new(),
            eq_rhs: Vec::new(),
            eq_kinds: Vec::new(),
            in_rows: Vec::new(),
            in_rhs: Vec::new(),
            in_kinds: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn push_eq(&mut self, row: Vec<f64>, rhs: f64, kind: ConstraintKind) {
        debug_assert_eq!(row.len(), self.n_vars);
        self.eq_rows.push(row);
        self.eq_rhs.push(rhs);
        self.eq_kinds.push(kind);
    }

    /// Adds `row . x <= rhs`.
    pub fn push_in(&mut self, row: Vec<f64>, rhs: f64, kind: ConstraintKind) {
        debug_assert_eq!(row.len(), self.n_vars);
        self.in_rows.push(row);
        self.in_rhs.push(rhs);
        self.in_kinds.push(kind);
    }

    pub fn eq_len(&self) -> usize {
        self.eq_rows.len()
    }

    pub fn in_len(&self) -> usize {
        self.in_rows.len()
    }

    pub fn in_kinds(&self) -> &[ConstraintKind] {
        &self.in_kinds
    }

    pub fn eq_kinds(&self) -> &[ConstraintKind] {
        &self.eq_kinds
    }

    pub fn count_in(&self, pred: impl Fn(&ConstraintKind) -> bool) -> usize {
        self.in_kinds.iter().filter(|k| pred(k)).count()
    }

    fn rows_to_matrix(rows: &[Vec<f64>], n: usize) -> Matrix {
        DMatrix::from_fn(rows.len(), n, |r, c| rows[r][c])
    }

    /// Largest violation of any row at `x` (0 when feasible).
    pub fn max_violation(&self, x: &Vector) -> f64 {
        let mut worst: f64 = 0.0;
        for (row, rhs) in self.eq_rows.iter().zip(&self.eq_rhs) {
            let ax: f64 = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            worst = worst.max((ax - rhs).abs());
        }
        for (row, rhs) in self.in_rows.iter().zip(&self.in_rhs) {
            let ax: f64 = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            worst = worst.max(ax - rhs);
        }
        worst
    }

    /// Problem with this constraint set and the supplied cost.
    pub fn to_problem(&self, quad: Matrix, lin: Vector) -> QpProblem {
        QpProblem {
            quad,
            lin,
            a_eq: Self::rows_to_matrix(&self.eq_rows, self.n_vars),
            b_eq: Vector::from_vec(self.eq_rhs.clone()),
            a_in: Self::rows_to_matrix(&self.in_rows, self.n_vars),
            b_in: Vector::from_vec(self.in_rhs.clone()),
        }
    }

    /// Euclidean projection problem onto this set: `Q = 2I`, `q = -2 x0`.
    pub fn to_projection(&self, x0: &Vector) -> QpProblem {
        debug_assert_eq!(x0.len(), self.n_vars);
        self.to_problem(Matrix::identity(self.n_vars, self.n_vars) * 2.0, x0 * -2.0)
    }
}

/// Euclidean projection of `x0` onto a constraint set. Warm-starts at `x0`,
/// the fixed point whenever `x0` is already feasible.
pub fn project_onto(
    set: &ConstraintSet,
    x0: &Vector,
    tol: f64,
    max_iter: usize,
) -> Result<QpSolution, QpError> {
    let problem = set.to_projection(x0);
    solve_qp(&problem, Some(x0), tol, max_iter)
}

/// Operator-splitting solve with optional warm start.
pub fn solve_qp(
    problem: &QpProblem,
    warm_start: Option<&Vector>,
    tol: f64,
    max_iter: usize,
) -> Result<QpSolution, QpError> {
    problem.validate()?;
    if let Some(w) = warm_start {
        if w.len() != problem.n_vars() {
            return Err(QpError::Dimension("warm start"));
        }
    }

    // Equality-only problems reduce to one linear KKT solve.
    if problem.a_in.nrows() == 0 {
        if let Some(sol) = solve_equality_kkt(problem, tol) {
            return Ok(sol);
        }
    }
    admm(problem, warm_start, tol, max_iter)
}

/// Direct KKT solve for `min 1/2 x^T Q x + q^T x` s.t. `A x = b`.
/// Returns `None` when the factorization is too ill-conditioned to trust,
/// in which case the caller falls back to the splitting iteration.
fn solve_equality_kkt(problem: &QpProblem, tol: f64) -> Option<QpSolution> {
    let n = problem.n_vars();
    let me = problem.a_eq.nrows();
    let mut kkt = Matrix::zeros(n + me, n + me);
    kkt.view_mut((0, 0), (n, n)).copy_from(&problem.quad);
    if me > 0 {
        kkt.view_mut((n, 0), (me, n)).copy_from(&problem.a_eq);
        kkt.view_mut((0, n), (n, me))
            .copy_from(&problem.a_eq.transpose());
    }
    // Tiny regularization keeps the factorization alive when Q is singular
    // along directions the constraints do not pin.
    for i in 0..n {
        kkt[(i, i)] += 1e-12;
    }
    for i in n..n + me {
        kkt[(i, i)] -= 1e-12;
    }
    let mut rhs = Vector::zeros(n + me);
    rhs.rows_mut(0, n).copy_from(&(-&problem.lin));
    if me > 0 {
        rhs.rows_mut(n, me).copy_from(&problem.b_eq);
    }
    let lu = kkt.clone().full_piv_lu();
    let sol = lu.solve(&rhs)?;
    let x = Vector::from(sol.rows(0, n));
    let primal = if me > 0 {
        (&problem.a_eq * &x - &problem.b_eq).amax()
    } else {
        0.0
    };
    let y = Vector::from(sol.rows(n, me));
    let dual = (&problem.quad * &x + &problem.lin + problem.a_eq.transpose() * y).amax();
    let scale = 1.0 + problem.b_eq.amax().max(problem.lin.amax());
    if primal <= tol.max(1e-9) * scale && dual <= (tol.max(1e-9)) * scale * 1e3 {
        Some(QpSolution {
            x,
            status: QpStatus::Optimal,
            primal_residual: primal,
            dual_residual: dual,
            iterations: 1,
        })
    } else {
        None
    }
}

struct Splitting<'a> {
    problem: &'a QpProblem,
    c: Matrix,
    lower: Vector,
    upper: Vector,
    rho: Vector,
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

impl<'a> Splitting<'a> {
    fn new(problem: &'a QpProblem) -> Result<Self, QpError> {
        let n = problem.n_vars();
        let me = problem.a_eq.nrows();
        let mi = problem.a_in.nrows();
        let m = me + mi;
        let mut c = Matrix::zeros(m, n);
        if me > 0 {
            c.view_mut((0, 0), (me, n)).copy_from(&problem.a_eq);
        }
        if mi > 0 {
            c.view_mut((me, 0), (mi, n)).copy_from(&problem.a_in);
        }
        let mut lower = Vector::from_element(m, f64::NEG_INFINITY);
        let mut upper = Vector::zeros(m);
        for r in 0..me {
            lower[r] = problem.b_eq[r];
            upper[r] = problem.b_eq[r];
        }
        for r in 0..mi {
            upper[me + r] = problem.b_in[r];
        }
        let mut rho = Vector::from_element(m, RHO_INEQ);
        for r in 0..me {
            rho[r] = RHO_INEQ * RHO_EQ_SCALE;
        }
        let mut out = Self {
            c,
            lower,
            upper,
            rho,
            chol: nalgebra::Cholesky::new(Matrix::identity(1, 1)).ok_or(QpError::Factorization)?,
            problem,
        };
        out.refactor()?;
        Ok(out)
    }

    fn refactor(&mut self) -> Result<(), QpError> {
        let n = self.problem.n_vars();
        let mut kkt = self.problem.quad.clone();
        for i in 0..n {
            kkt[(i, i)] += SIGMA;
        }
        // Q + sigma I + C^T diag(rho) C, accumulated row by row.
        for r in 0..self.c.nrows() {
            let row = self.c.row(r);
            let w = self.rho[r];
            for a in 0..n {
                let ra = row[a];
                if ra == 0.0 {
                    continue;
                }
                for b in 0..n {
                    let rb = row[b];
                    if rb != 0.0 {
                        kkt[(a, b)] += w * ra * rb;
                    }
                }
            }
        }
        self.chol = nalgebra::Cholesky::new(kkt).ok_or(QpError::Factorization)?;
        Ok(())
    }
}

fn admm(
    problem: &QpProblem,
    warm_start: Option<&Vector>,
    tol: f64,
    max_iter: usize,
) -> Result<QpSolution, QpError> {
    let n = problem.n_vars();
    let m = problem.a_eq.nrows() + problem.a_in.nrows();
    let mut split = Splitting::new(problem)?;

    let mut x = warm_start.cloned().unwrap_or_else(|| Vector::zeros(n));
    let mut z = if m > 0 { &split.c * &x } else { Vector::zeros(0) };
    for r in 0..m {
        z[r] = z[r].clamp(split.lower[r], split.upper[r]);
    }
    let mut y = Vector::zeros(m);
    let mut y_prev_window = y.clone();

    let mut primal = f64::INFINITY;
    let mut dual = f64::INFINITY;
    let mut iterations = 0;

    for iter in 1..=max_iter {
        iterations = iter;
        // x-step: (Q + sigma I + C^T rho C) x~ = sigma x - q + C^T (rho z - y)
        let mut rhs = &x * SIGMA - &problem.lin;
        if m > 0 {
            let mut zy = Vector::zeros(m);
            for r in 0..m {
                zy[r] = split.rho[r] * z[r] - y[r];
            }
            rhs += split.c.transpose() * zy;
        }
        let x_tilde = split.chol.solve(&rhs);
        let z_tilde = if m > 0 {
            &split.c * &x_tilde
        } else {
            Vector::zeros(0)
        };

        let x_next = &x_tilde * RELAXATION + &x * (1.0 - RELAXATION);
        let mut z_next = Vector::zeros(m);
        for r in 0..m {
            let z_relaxed = RELAXATION * z_tilde[r] + (1.0 - RELAXATION) * z[r];
            let cand = z_relaxed + y[r] / split.rho[r];
            z_next[r] = cand.clamp(split.lower[r], split.upper[r]);
            y[r] += split.rho[r] * (z_relaxed - z_next[r]);
        }
        x = x_next;
        z = z_next;

        if iter % CHECK_INTERVAL == 0 || iter == max_iter {
            let cx = if m > 0 { &split.c * &x } else { Vector::zeros(0) };
            primal = if m > 0 { (&cx - &z).amax() } else { 0.0 };
            let qx = &problem.quad * &x;
            let cty = if m > 0 {
                split.c.transpose() * &y
            } else {
                Vector::zeros(n)
            };
            dual = (&qx + &problem.lin + &cty).amax();

            let eps_primal = tol + tol * cx.amax().max(z.amax());
            let eps_dual = tol + tol * qx.amax().max(cty.amax()).max(problem.lin.amax());
            if primal <= eps_primal && dual <= eps_dual {
                let polished = polish(problem, &split, &x, &y, tol);
                if let Some(p) = polished {
                    return Ok(QpSolution {
                        iterations: iter,
                        ..p
                    });
                }
                return Ok(QpSolution {
                    x,
                    status: QpStatus::Optimal,
                    primal_residual: primal,
                    dual_residual: dual,
                    iterations: iter,
                });
            }

            // Conservative infeasibility certificate, only consulted in the
            // second half of the iteration budget.
            if iter >= max_iter / 2 {
                let dy = &y - &y_prev_window;
                let dy_norm = dy.amax();
                if dy_norm > 1e-12 {
                    let cdy = (split.c.transpose() * &dy).amax();
                    let mut support = 0.0;
                    let mut lower_ok = true;
                    for r in 0..m {
                        if split.lower[r].is_finite() {
                            // Equality row: contributes b * dy.
                            support += if dy[r] >= 0.0 {
                                split.upper[r] * dy[r]
                            } else {
                                split.lower[r] * dy[r]
                            };
                        } else {
                            if dy[r] < -1e-10 * dy_norm {
                                lower_ok = false;
                                break;
                            }
                            support += split.upper[r] * dy[r].max(0.0);
                        }
                    }
                    if lower_ok && cdy <= 1e-7 * dy_norm && support < -1e-7 * dy_norm {
                        return Ok(QpSolution {
                            x,
                            status: QpStatus::Infeasible,
                            primal_residual: primal,
                            dual_residual: dual,
                            iterations: iter,
                        });
                    }
                }
            }
            y_prev_window = y.clone();

            // Rebalance rho when the residuals drift apart.
            if iter % (CHECK_INTERVAL * 8) == 0 && primal.is_finite() && dual.is_finite() {
                let ratio = ((primal + 1e-16) / (dual + 1e-16)).sqrt();
                if ratio > 5.0 || ratio < 0.2 {
                    let factor = ratio.clamp(1e-3, 1e3);
                    for r in 0..m {
                        split.rho[r] = (split.rho[r] * factor).clamp(1e-6, 1e7);
                    }
                    split.refactor()?;
                }
            }
        }
    }

    Ok(QpSolution {
        x,
        status: QpStatus::MaxIter,
        primal_residual: primal,
        dual_residual: dual,
        iterations,
    })
}

/// Re-solves the KKT system on the detected active set to sharpen the ADMM
/// iterate to near machine precision. Returns `None` when the polished point
/// is not clearly better.
fn polish(
    problem: &QpProblem,
    split: &Splitting,
    x: &Vector,
    y: &Vector,
    tol: f64,
) -> Option<QpSolution> {
    let n = problem.n_vars();
    let me = problem.a_eq.nrows();
    let m = split.c.nrows();
    let act_tol = (tol * 1e3).max(1e-6);

    let cx = if m > 0 { &split.c * x } else { Vector::zeros(0) };
    let mut active: Vec<usize> = (0..me).collect();
    for r in me..m {
        let slack = split.upper[r] - cx[r];
        if y[r] > act_tol || slack < act_tol {
            active.push(r);
        }
    }

    let ma = active.len();
    let mut kkt = Matrix::zeros(n + ma, n + ma);
    kkt.view_mut((0, 0), (n, n)).copy_from(&problem.quad);
    for (t, &r) in active.iter().enumerate() {
        for cidx in 0..n {
            kkt[(n + t, cidx)] = split.c[(r, cidx)];
            kkt[(cidx, n + t)] = split.c[(r, cidx)];
        }
    }
    for i in 0..n {
        kkt[(i, i)] += 1e-11;
    }
    for i in n..n + ma {
        kkt[(i, i)] -= 1e-11;
    }
    let mut rhs = Vector::zeros(n + ma);
    rhs.rows_mut(0, n).copy_from(&(-&problem.lin));
    for (t, &r) in active.iter().enumerate() {
        rhs[n + t] = split.upper[r];
    }
    let lu = kkt.full_piv_lu();
    let sol = lu.solve(&rhs)?;
    let xp = Vector::from(sol.rows(0, n));

    // Accept only if polished point is feasible everywhere and stationary.
    let mut primal: f64 = 0.0;
    if m > 0 {
        let cxp = &split.c * &xp;
        for r in 0..m {
            let viol = if split.lower[r].is_finite() {
                (cxp[r] - split.upper[r]).abs()
            } else {
                (cxp[r] - split.upper[r]).max(0.0)
            };
            primal = primal.max(viol);
        }
    }
    let mut y_full = Vector::zeros(m);
    for (t, &r) in active.iter().enumerate() {
        y_full[r] = sol[n + t];
    }
    let dual = (&problem.quad * &xp + &problem.lin + split.c.transpose() * &y_full).amax();
    let scale = 1.0 + xp.amax();
    if primal <= tol.max(1e-9) * scale && dual <= tol.max(1e-9) * scale * 10.0 {
        Some(QpSolution {
            x: xp,
            status: QpStatus::Optimal,
            primal_residual: primal,
            dual_residual: dual,
            iterations: 0,
        })
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn solve(p: &QpProblem) -> QpSolution {
        solve_qp(p, None, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
    }

    #[test]
    fn halfspace_projection_closed_form() {
        // min |x - (2, 0)|^2 s.t. x1 <= 1 => (1, 0)
        let mut set = ConstraintSet::new(2);
        set.push_in(vec![1.0, 0.0], 1.0, ConstraintKind::Actuator);
        let x0 = Vector::from_vec(vec![2.0, 0.0]);
        let sol = project_onto(&set, &x0, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(sol.is_optimal());
        assert_relative_eq!(sol.x[0], 1.0, epsilon = 1e-6);
        assert_relative_eq!(sol.x[1], 0.0, epsilon = 1e-6);
    }

    #[test]
    fn symmetric_equality_qp() {
        // min |x|^2 s.t. x1 + x2 = 2 => (1, 1)
        let mut p = QpProblem::new(Matrix::identity(2, 2) * 2.0, Vector::zeros(2));
        p.a_eq = Matrix::from_row_slice(1, 2, &[1.0, 1.0]);
        p.b_eq = Vector::from_vec(vec![2.0]);
        let sol = solve(&p);
        assert!(sol.is_optimal());
        assert_relative_eq!(sol.x[0], 1.0, epsilon = 1e-8);
        assert_relative_eq!(sol.x[1], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn projection_fixed_point() {
        let mut set = ConstraintSet::new(2);
        set.push_in(vec![-1.0, 0.0], -1.0, ConstraintKind::Actuator); // x1 >= 1
        let feasible = Vector::from_vec(vec![2.0, 3.0]);
        let sol = project_onto(&set, &feasible, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((&sol.x - &feasible).amax() <= 1e-6);

        let x0 = Vector::from_vec(vec![0.0, 0.0]);
        let sol = project_onto(&set, &x0, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_relative_eq!(sol.x[0], 1.0, epsilon = 1e-6);
        assert_relative_eq!(sol.x[1], 0.0, epsilon = 1e-6);
    }

    #[test]
    fn box_projection_clamps() {
        let mut set = ConstraintSet::new(2);
        set.push_in(vec![1.0, 0.0], 1.0, ConstraintKind::Actuator);
        set.push_in(vec![-1.0, 0.0], 0.0, ConstraintKind::Actuator);
        set.push_in(vec![0.0, 1.0], 1.0, ConstraintKind::Actuator);
        set.push_in(vec![0.0, -1.0], 0.0, ConstraintKind::Actuator);
        let x0 = Vector::from_vec(vec![2.0, -1.0]);
        let sol = project_onto(&set, &x0, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_relative_eq!(sol.x[0], 1.0, epsilon = 1e-6);
        assert_relative_eq!(sol.x[1], 0.0, epsilon = 1e-6);
    }

    #[test]
    fn detects_infeasible() {
        // x <= -1 and x >= 1 cannot both hold.
        let mut p = QpProblem::new(Matrix::identity(1, 1) * 2.0, Vector::zeros(1));
        p.a_in = Matrix::from_row_slice(2, 1, &[1.0, -1.0]);
        p.b_in = Vector::from_vec(vec![-1.0, -1.0]);
        let sol = solve_qp(&p, None, 1e-8, 4000).unwrap();
        assert_eq!(sol.status, QpStatus::Infeasible);
    }

    #[test]
    fn rejects_bad_dimensions() {
        let mut p = QpProblem::new(Matrix::identity(2, 2), Vector::zeros(2));
        p.a_eq = Matrix::zeros(1, 3);
        p.b_eq = Vector::zeros(1);
        assert!(solve_qp(&p, None, 1e-8, 100).is_err());
    }

    #[test]
    fn rejects_asymmetric_quad() {
        let quad = Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        let p = QpProblem::new(quad, Vector::zeros(2));
        assert!(matches!(
            solve_qp(&p, None, 1e-8, 100),
            Err(QpError::QuadAsymmetric(_))
        ));
    }
}
