//! Shared test oracles. Everything here is deliberately brute-force and
//! independent of the library's solver/integrator code paths.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use swarmsim::numerics::{Matrix, QpProblem, Vector};

/// Brute-force QP oracle: tries every subset of inequality rows as the
/// active set, solves the resulting equality-constrained KKT system and
/// keeps the feasible candidate with the smallest objective.
pub fn active_set_oracle(p: &QpProblem) -> Option<(Vector, f64)> {
    let n = p.n_vars();
    let me = p.a_eq.nrows();
    let mi = p.a_in.nrows();
    assert!(mi <= 16, "oracle is exponential in the inequality count");

    let mut best: Option<(Vector, f64)> = None;
    for mask in 0u32..(1u32 << mi) {
        let active: Vec<usize> = (0..mi).filter(|r| mask & (1 << r) != 0).collect();
        let ma = me + active.len();
        let mut kkt = DMatrix::zeros(n + ma, n + ma);
        kkt.view_mut((0, 0), (n, n)).copy_from(&p.quad);
        let mut rhs = DVector::zeros(n + ma);
        rhs.rows_mut(0, n).copy_from(&(-&p.lin));
        for r in 0..me {
            for c in 0..n {
                kkt[(n + r, c)] = p.a_eq[(r, c)];
                kkt[(c, n + r)] = p.a_eq[(r, c)];
            }
            rhs[n + r] = p.b_eq[r];
        }
        for (t, &r) in active.iter().enumerate() {
            for c in 0..n {
                kkt[(n + me + t, c)] = p.a_in[(r, c)];
                kkt[(c, n + me + t)] = p.a_in[(r, c)];
            }
            rhs[n + me + t] = p.b_in[r];
        }
        let lu = kkt.full_piv_lu();
        let Some(sol) = lu.solve(&rhs) else { continue };
        let x = DVector::from(sol.rows(0, n));
        // Candidate must actually solve its KKT system (singular guards).
        let mut ok = true;
        if me > 0 && (&p.a_eq * &x - &p.b_eq).amax() > 1e-7 {
            ok = false;
        }
        for (t, &r) in active.iter().enumerate() {
            let _ = t;
            let ax = p.a_in.row(r) * &x;
            if (ax[(0, 0)] - p.b_in[r]).abs() > 1e-7 {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        // Primal feasibility of the remaining rows.
        for r in 0..mi {
            let ax = p.a_in.row(r) * &x;
            if ax[(0, 0)] > p.b_in[r] + 1e-8 {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let obj = p.objective(&x);
        if best.as_ref().map_or(true, |(_, b)| obj < *b - 0.0) {
            best = Some((x, obj));
        }
    }
    best
}

/// Deterministic xorshift generator for oracle test data; independent of the
/// library's seeded RNG plumbing.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform in [-1, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Random QP with a known feasible point, so the oracle always has work to
/// do. Quadratic part is positive definite to keep minimizers unique.
pub fn random_feasible_qp(rng: &mut TestRng, n: usize, n_eq: usize, n_in: usize) -> QpProblem {
    let m = Matrix::from_fn(n, n, |_, _| rng.unit());
    let quad = &m * m.transpose() + Matrix::identity(n, n) * 0.5;
    let lin = Vector::from_fn(n, |_, _| 2.0 * rng.unit());
    let x_feas = Vector::from_fn(n, |_, _| rng.unit());

    let a_eq = Matrix::from_fn(n_eq, n, |_, _| rng.unit());
    let b_eq = &a_eq * &x_feas;
    let a_in = Matrix::from_fn(n_in, n, |_, _| rng.unit());
    let slack = Vector::from_fn(n_in, |_, _| 0.05 + rng.uniform());
    let b_in = &a_in * &x_feas + slack;

    let mut p = QpProblem::new(quad, lin);
    p.a_eq = a_eq;
    p.b_eq = b_eq;
    p.a_in = a_in;
    p.b_in = b_in;
    p
}

/// Classic RK4 over a linear time-invariant system `xdot = A x`, fine-step
/// reference for the observer/controller error dynamics.
pub fn rk4_linear(a: &Matrix, x0: &Vector, dt: f64, steps: usize) -> Vector {
    let mut x = x0.clone();
    for _ in 0..steps {
        let k1 = a * &x;
        let k2 = a * (&x + &k1 * (dt / 2.0));
        let k3 = a * (&x + &k2 * (dt / 2.0));
        let k4 = a * (&x + &k3 * dt);
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }
    x
}
