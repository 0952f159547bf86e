//! Equality-constrained l1 recovery and a minimum-norm l2 baseline.
//!
//! [`solve_l1`] minimizes `sum_i w_i |x_i|` subject to `A x = b` with an
//! ADMM splitting: an exact projection onto the affine constraint set
//! alternates with weighted soft-thresholding. All-ones weights give plain
//! basis pursuit; zero weights on a set `T` leave those entries unpenalized
//! (known-support recovery).
//!
//! The projection uses the diagonal of `A A^T`, available for any operator
//! with mutually orthogonal rows ([`OrthogonalRows`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub trait LinearOperator {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
    fn adjoint(&self, y: &[f64]) -> Vec<f64>;
}

/// Operators whose rows are mutually orthogonal, so `A A^T` is diagonal.
pub trait OrthogonalRows: LinearOperator {
    fn row_gram_diagonal(&self) -> Vec<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Relative residual `||A x - b|| / ||b||` accepted as feasible.
    pub feasibility_tolerance: f64,
    pub max_iterations: usize,
    /// Power-iteration steps used to estimate `||A||`.
    pub power_iterations: usize,
    /// Multiplier on the ADMM penalty derived from `||A||`.
    pub penalty_scale: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            feasibility_tolerance: 1e-6,
            max_iterations: 20_000,
            power_iterations: 50,
            penalty_scale: 1.0,
        }
    }
}

/// `min ||W x||_1  s.t.  ||A x - b|| <= tol ||b||`.
#[derive(Debug, Clone)]
pub struct L1Problem<'a, A> {
    operator: &'a A,
    measurement: Vec<f64>,
    weights: Vec<f64>,
    settings: SolverSettings,
}

impl<'a, A: LinearOperator> L1Problem<'a, A> {
    /// Unweighted problem (all weights one).
    pub fn new(operator: &'a A, measurement: &[f64]) -> Result<Self> {
        if measurement.len() != operator.rows() {
            return Err(Error::LengthMismatch {
                expected: operator.rows(),
                actual: measurement.len(),
            });
        }
        if measurement.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProblem("measurement is not finite".into()));
        }
        Ok(L1Problem {
            operator,
            measurement: measurement.to_vec(),
            weights: vec![1.0; operator.cols()],
            settings: SolverSettings::default(),
        })
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.operator.cols() {
            return Err(Error::LengthMismatch {
                expected: self.operator.cols(),
                actual: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidProblem("weights must be finite and >= 0".into()));
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::InvalidProblem("at least one weight must be positive".into()));
        }
        self.weights = weights;
        Ok(self)
    }

    /// Zero weight on every index in `support`, one elsewhere.
    pub fn with_known_support(self, support: &[usize]) -> Result<Self> {
        let n = self.operator.cols();
        let mut w = vec![1.0; n];
        for &i in support {
            if i >= n {
                return Err(Error::InvalidProblem(format!("support index {i} >= {n}")));
            }
            w[i] = 0.0;
        }
        self.with_weights(w)
    }

    pub fn with_settings(mut self, settings: SolverSettings) -> Result<Self> {
        if !(settings.feasibility_tolerance > 0.0 && settings.feasibility_tolerance.is_finite()) {
            return Err(Error::InvalidProblem("feasibility tolerance must be > 0".into()));
        }
        if !(settings.penalty_scale > 0.0 && settings.penalty_scale.is_finite()) {
            return Err(Error::InvalidProblem("penalty scale must be > 0".into()));
        }
        self.settings = settings;
        Ok(self)
    }

    pub fn operator(&self) -> &A {
        self.operator
    }

    pub fn measurement(&self) -> &[f64] {
        &self.measurement
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn settings(&self) -> &SolverSettings {
        &self.settings
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub coefficients: Vec<f64>,
    /// `sum w_i |x_i|` for l1 solves, `||x||_2` for least squares.
    pub objective: f64,
    pub residual_norm: f64,
    pub measurement_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Dual vector in measurement space (empty for least squares).
    pub dual: Vec<f64>,
}

impl SolverResult {
    pub fn relative_residual(&self) -> f64 {
        if self.measurement_norm == 0.0 {
            self.residual_norm
        } else {
            self.residual_norm / self.measurement_norm
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Largest singular value of `A` by power iteration on `A^T A` from a fixed
/// pseudo-random start.
pub fn spectral_norm<A: LinearOperator + ?Sized>(op: &A, steps: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<f64> = (0..op.cols()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut sigma = 0.0;
    for _ in 0..steps.max(1) {
        let nv = norm(&v);
        if nv == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let av = op.apply(&v);
        sigma = norm(&av);
        v = op.adjoint(&av);
    }
    sigma
}

fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

fn zero_result(n: usize, rows: usize) -> SolverResult {
    SolverResult {
        coefficients: vec![0.0; n],
        objective: 0.0,
        residual_norm: 0.0,
        measurement_norm: 0.0,
        iterations: 0,
        converged: true,
        dual: vec![0.0; rows],
    }
}

/// ADMM iterations between attempts to finish exactly on the current support.
const POLISH_EVERY: usize = 25;

struct Polished {
    coefficients: Vec<f64>,
    residual_norm: f64,
    dual: Vec<f64>,
}

fn support_of(z: &[f64]) -> Vec<usize> {
    z.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, _)| i).collect()
}

/// In-place Cholesky factorisation of a dense symmetric matrix (row-major,
/// lower triangle). Returns `false` if the matrix is not numerically positive
/// definite.
fn cholesky(a: &mut [f64], t: usize) -> bool {
    let scale = (0..t).map(|i| a[i * t + i]).fold(0.0, f64::max);
    for j in 0..t {
        let mut d = a[j * t + j];
        for k in 0..j {
            d -= a[j * t + k] * a[j * t + k];
        }
        if d <= scale * 1e-13 {
            return false;
        }
        let d = d.sqrt();
        a[j * t + j] = d;
        for i in j + 1..t {
            let mut v = a[i * t + j];
            for k in 0..j {
                v -= a[i * t + k] * a[j * t + k];
            }
            a[i * t + j] = v / d;
        }
    }
    true
}

fn cholesky_solve(l: &[f64], t: usize, rhs: &mut [f64]) {
    for i in 0..t {
        let mut v = rhs[i];
        for k in 0..i {
            v -= l[i * t + k] * rhs[k];
        }
        rhs[i] = v / l[i * t + i];
    }
    for i in (0..t).rev() {
        let mut v = rhs[i];
        for k in i + 1..t {
            v -= l[k * t + i] * rhs[k];
        }
        rhs[i] = v / l[i * t + i];
    }
}

/// Tries to finish the solve exactly: least squares restricted to `support`,
/// accepted only when it is feasible and carries a dual certificate
/// `y = A_T (A_T^T A_T)^{-1} (w_T sign(x_T))` with `|A^T y| <= w` off the
/// support. Such a point satisfies the optimality conditions outright, so
/// the slow linear tail of ADMM can be skipped.
fn polish<A: LinearOperator>(
    op: &A,
    b: &[f64],
    w: &[f64],
    support: &[usize],
    tol: f64,
) -> Option<Polished> {
    let t = support.len();
    let rows = op.rows();
    let n = op.cols();
    if t == 0 || t > rows {
        return None;
    }
    let columns: Vec<Vec<f64>> = support
        .iter()
        .map(|&j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            op.apply(&e)
        })
        .collect();
    let mut gram = vec![0.0; t * t];
    for i in 0..t {
        for j in 0..=i {
            let v = dot(&columns[i], &columns[j]);
            gram[i * t + j] = v;
            gram[j * t + i] = v;
        }
    }
    if !cholesky(&mut gram, t) {
        return None;
    }
    let mut xt: Vec<f64> = columns.iter().map(|c| dot(c, b)).collect();
    cholesky_solve(&gram, t, &mut xt);
    if xt.iter().any(|v| *v == 0.0 || !v.is_finite()) {
        return None;
    }

    let mut coefficients = vec![0.0; n];
    for (&j, &v) in support.iter().zip(&xt) {
        coefficients[j] = v;
    }
    let ax = op.apply(&coefficients);
    let residual_norm = ax.iter().zip(b).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    if residual_norm > tol * norm(b) {
        return None;
    }

    let mut c: Vec<f64> = support.iter().zip(&xt).map(|(&j, v)| w[j] * v.signum()).collect();
    cholesky_solve(&gram, t, &mut c);
    let mut dual = vec![0.0; rows];
    for (col, ci) in columns.iter().zip(&c) {
        for (d, a) in dual.iter_mut().zip(col) {
            *d += ci * a;
        }
    }
    let g = op.adjoint(&dual);
    let w_max = w.iter().fold(0.0_f64, |a, &b| a.max(b));
    let slack = tol * w_max;
    let on_support = {
        let mut mask = vec![false; n];
        for &j in support {
            mask[j] = true;
        }
        mask
    };
    let certified = (0..n).all(|i| on_support[i] || g[i].abs() <= w[i] + slack);
    certified.then_some(Polished {
        coefficients,
        residual_norm,
        dual,
    })
}

/// Weighted basis pursuit by ADMM.
///
/// Iterates `x = P(z - u)`, `z = shrink(x + u, w / rho)`, `u += x - z`, where
/// `P` projects onto `{A x = b}`. The penalty `rho` is fixed at
/// `penalty_scale * ||A|| * mean(w) * sqrt(N) / ||b||`, which makes the whole
/// iteration homogeneous in `b`. Stops once `z` is feasible to the tolerance
/// and its step has shrunk below the same relative tolerance, or as soon as
/// least squares on the current support yields a certified optimum (checked
/// every few iterations and once more at the end). Otherwise returns the
/// final iterate with `converged = false`.
pub fn solve_l1<A: OrthogonalRows>(problem: &L1Problem<'_, A>) -> SolverResult {
    let op = problem.operator;
    let b = &problem.measurement;
    let w = &problem.weights;
    let s = &problem.settings;
    let n = op.cols();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return zero_result(n, op.rows());
    }

    let gram = op.row_gram_diagonal();
    let gram_max = gram.iter().fold(0.0_f64, |a, &g| a.max(g));
    let gram_inv: Vec<f64> = gram
        .iter()
        .map(|&g| if g > gram_max * 1e-14 { 1.0 / g } else { 0.0 })
        .collect();
    let project = |v: &[f64]| -> Vec<f64> {
        let mut r = op.apply(v);
        for ((ri, bi), gi) in r.iter_mut().zip(b).zip(&gram_inv) {
            *ri = (*ri - bi) * gi;
        }
        let correction = op.adjoint(&r);
        v.iter().zip(&correction).map(|(a, c)| a - c).collect()
    };

    let sigma = spectral_norm(op, s.power_iterations);
    let w_mean = w.iter().sum::<f64>() / n as f64;
    let rho = s.penalty_scale * sigma * w_mean * (n as f64).sqrt() / b_norm;
    let thresholds: Vec<f64> = w.iter().map(|wi| wi / rho).collect();

    let tol = s.feasibility_tolerance;
    let mut z = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut residual = b_norm;
    let mut iterations = 0;
    let mut converged = false;
    let mut polished = None;
    let mut last_polished = Vec::new();

    while iterations < s.max_iterations {
        iterations += 1;
        let v: Vec<f64> = z.iter().zip(&u).map(|(a, b)| a - b).collect();
        let x = project(&v);
        let mut step = 0.0;
        for i in 0..n {
            let next = soft_threshold(x[i] + u[i], thresholds[i]);
            step += (next - z[i]) * (next - z[i]);
            z[i] = next;
            u[i] += x[i] - next;
        }
        let az = op.apply(&z);
        residual = az.iter().zip(b).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if residual <= tol * b_norm && step.sqrt() <= tol * norm(&z).max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        if iterations % POLISH_EVERY == 0 {
            let support = support_of(&z);
            if support != last_polished {
                if let Some(p) = polish(op, b, w, &support, tol) {
                    polished = Some(p);
                    break;
                }
                last_polished = support;
            }
        }
    }
    if polished.is_none() && !converged {
        polished = polish(op, b, w, &support_of(&z), tol);
    }

    if let Some(p) = polished {
        let objective = p.coefficients.iter().zip(w).map(|(x, w)| w * x.abs()).sum();
        return SolverResult {
            coefficients: p.coefficients,
            objective,
            residual_norm: p.residual_norm,
            measurement_norm: b_norm,
            iterations,
            converged: true,
            dual: p.dual,
        };
    }

    // rho u is a subgradient of the weighted l1 norm at z; its least-squares
    // image in measurement space is the dual iterate.
    let lambda: Vec<f64> = u.iter().map(|ui| rho * ui).collect();
    let dual: Vec<f64> = op
        .apply(&lambda)
        .into_iter()
        .zip(&gram_inv)
        .map(|(v, g)| v * g)
        .collect();

    let objective = z.iter().zip(w).map(|(x, w)| w * x.abs()).sum();
    SolverResult {
        coefficients: z,
        objective,
        residual_norm: residual,
        measurement_norm: b_norm,
        iterations,
        converged,
        dual,
    }
}

/// Minimum-l2-norm solution of `A x = b` by conjugate gradients on the
/// normal equations `A A^T y = b`, `x = A^T y`. Only uses `apply` and
/// `adjoint`.
pub fn solve_least_squares<A: LinearOperator + ?Sized>(
    op: &A,
    measurement: &[f64],
    settings: &SolverSettings,
) -> Result<SolverResult> {
    if measurement.len() != op.rows() {
        return Err(Error::LengthMismatch {
            expected: op.rows(),
            actual: measurement.len(),
        });
    }
    let n = op.cols();
    let b_norm = norm(measurement);
    if b_norm == 0.0 {
        let mut r = zero_result(n, op.rows());
        r.dual.clear();
        return Ok(r);
    }
    let tol = settings.feasibility_tolerance;
    let mut y = vec![0.0; op.rows()];
    let mut r = measurement.to_vec();
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let mut iterations = 0;
    while iterations < settings.max_iterations && rs.sqrt() > 0.1 * tol * b_norm {
        iterations += 1;
        let q = op.apply(&op.adjoint(&p));
        let pq = dot(&p, &q);
        if pq <= 0.0 {
            break;
        }
        let alpha = rs / pq;
        for i in 0..y.len() {
            y[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        let rs_next = dot(&r, &r);
        let beta = rs_next / rs;
        rs = rs_next;
        for i in 0..p.len() {
            p[i] = r[i] + beta * p[i];
        }
    }
    let x = op.adjoint(&y);
    let ax = op.apply(&x);
    let residual = ax
        .iter()
        .zip(measurement)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(SolverResult {
        objective: norm(&x),
        coefficients: x,
        residual_norm: residual,
        measurement_norm: b_norm,
        iterations,
        converged: residual <= tol * b_norm,
        dual: Vec::new(),
    })
}

/// Optimality diagnostics for a weighted l1 solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktReport {
    /// Largest violation of `|(A^T y)_i| <= w_i` off the support and
    /// `(A^T y)_i = w_i sign(x_i)` on it.
    pub max_violation: f64,
    pub relative_residual: f64,
    pub support_size: usize,
}

impl KktReport {
    pub fn certifies(&self, dual_tol: f64, feasibility_tol: f64) -> bool {
        self.max_violation <= dual_tol && self.relative_residual <= feasibility_tol
    }
}

/// Checks first-order optimality of `result` using its dual iterate.
pub fn check_kkt<A: LinearOperator>(result: &SolverResult, problem: &L1Problem<'_, A>) -> KktReport {
    let x = &result.coefficients;
    let w = &problem.weights;
    let support_size = x.iter().filter(|v| **v != 0.0).count();
    let relative_residual = result.relative_residual();
    if result.dual.len() != problem.operator.rows() {
        return KktReport {
            max_violation: f64::INFINITY,
            relative_residual,
            support_size,
        };
    }
    let g = problem.operator.adjoint(&result.dual);
    let max_violation = x
        .iter()
        .zip(&g)
        .zip(w)
        .map(|((&xi, &gi), &wi)| {
            if xi != 0.0 {
                (gi - wi * xi.signum()).abs()
            } else {
                (gi.abs() - wi).max(0.0)
            }
        })
        .fold(0.0, f64::max);
    KktReport {
        max_violation,
        relative_residual,
        support_size,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{plan_fes, plan_random, Band};
    use crate::sensing::{build_dictionary, Dictionary, SensingOperator};
    use crate::signal_model::make_monocycle;

    fn operator(n: usize, m: usize, seed: u64) -> SensingOperator {
        let dict = build_dictionary(&make_monocycle(2e9, 16e9, n).unwrap()).unwrap();
        SensingOperator::new(plan_random(Band::full(n).unwrap(), m, seed).unwrap(), dict).unwrap()
    }

    fn tight() -> SolverSettings {
        SolverSettings {
            feasibility_tolerance: 1e-10,
            max_iterations: 200_000,
            ..SolverSettings::default()
        }
    }

    #[test]
    fn zero_measurement_gives_zero() {
        let op = operator(64, 8, 1);
        let p = L1Problem::new(&op, &vec![0.0; op.rows()]).unwrap();
        let r = solve_l1(&p);
        assert!(r.converged);
        assert_eq!(r.objective, 0.0);
        assert!(r.coefficients.iter().all(|&v| v == 0.0));
        let kkt = check_kkt(&r, &p);
        assert_eq!(kkt.max_violation, 0.0);

        let ls = solve_least_squares(&op, &vec![0.0; op.rows()], &SolverSettings::default()).unwrap();
        assert!(ls.coefficients.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn one_sparse_full_band_recovery() {
        let n = 128;
        let dict = build_dictionary(&make_monocycle(2e9, 16e9, n).unwrap()).unwrap();
        let band = Band::full(n).unwrap();
        let op = SensingOperator::new(plan_fes(band, band.width()).unwrap(), dict).unwrap();
        let mut truth = vec![0.0; n];
        truth[40] = -0.8;
        let b = op.apply(&truth);
        let p = L1Problem::new(&op, &b).unwrap().with_settings(tight()).unwrap();
        let r = solve_l1(&p);
        assert!(r.converged);
        let err = norm(&r.coefficients.iter().zip(&truth).map(|(a, b)| a - b).collect::<Vec<_>>());
        assert!(err / norm(&truth) < 1e-6, "err {err}");
        assert!(check_kkt(&r, &p).max_violation < 1e-4);
    }

    #[test]
    fn truncated_run_fails_certification() {
        let op = operator(128, 12, 4);
        let mut truth = vec![0.0; 128];
        truth[10] = 1.0;
        truth[70] = -0.5;
        let b = op.apply(&truth);
        let settings = SolverSettings {
            max_iterations: 1,
            ..SolverSettings::default()
        };
        let p = L1Problem::new(&op, &b).unwrap().with_settings(settings).unwrap();
        let r = solve_l1(&p);
        assert!(!r.converged);
        assert_eq!(r.iterations, 1);
        assert!(check_kkt(&r, &p).max_violation > 1e-4);
    }

    #[test]
    fn converged_solutions_meet_tolerance() {
        for seed in 0..5 {
            let op = operator(64, 10, seed);
            let mut truth = vec![0.0; 64];
            truth[(seed as usize * 13) % 64] = 0.9;
            let b = op.apply(&truth);
            let p = L1Problem::new(&op, &b).unwrap();
            let r = solve_l1(&p);
            if r.converged {
                assert!(r.residual_norm <= p.settings().feasibility_tolerance * norm(&b));
            }
        }
    }

    #[test]
    fn all_ones_weights_match_unweighted_bit_for_bit() {
        let op = operator(64, 9, 7);
        let mut truth = vec![0.0; 64];
        truth[3] = 1.0;
        truth[30] = 0.4;
        let b = op.apply(&truth);
        let plain = solve_l1(&L1Problem::new(&op, &b).unwrap());
        let weighted = solve_l1(&L1Problem::new(&op, &b).unwrap().with_weights(vec![1.0; 64]).unwrap());
        assert_eq!(plain, weighted);
    }

    #[test]
    fn scaling_equivariance() {
        let op = operator(64, 10, 3);
        let mut truth = vec![0.0; 64];
        truth[12] = 0.7;
        truth[44] = -0.3;
        let b = op.apply(&truth);
        let base = solve_l1(&L1Problem::new(&op, &b).unwrap());
        for c in [1e-3, 0.5, 7.0, 1e4] {
            let scaled: Vec<f64> = b.iter().map(|v| v * c).collect();
            let r = solve_l1(&L1Problem::new(&op, &scaled).unwrap());
            let diff: Vec<f64> = r.coefficients.iter().zip(&base.coefficients).map(|(a, b)| a - c * b).collect();
            assert!(norm(&diff) <= 1e-8 * c * norm(&base.coefficients), "c={c}");
        }
    }

    #[test]
    fn known_support_recovers_truth() {
        let op = operator(256, 3, 12);
        let support = [20usize, 90, 200];
        let mut truth = vec![0.0; 256];
        truth[20] = 1.0;
        truth[90] = -0.6;
        truth[200] = 0.35;
        let b = op.apply(&truth);
        let p = L1Problem::new(&op, &b)
            .unwrap()
            .with_known_support(&support)
            .unwrap()
            .with_settings(tight())
            .unwrap();
        let r = solve_l1(&p);
        assert!(r.converged);
        let err = norm(&r.coefficients.iter().zip(&truth).map(|(a, b)| a - b).collect::<Vec<_>>());
        assert!(err / norm(&truth) < 1e-8, "err {err}");
    }

    #[test]
    fn polishing_finishes_slow_problems() {
        // Zero weights make plain ADMM converge only linearly here; the
        // support solve finishes it exactly.
        let op = operator(256, 3, 12);
        let mut truth = vec![0.0; 256];
        truth[20] = 1.0;
        truth[90] = -0.6;
        truth[200] = 0.35;
        let b = op.apply(&truth);
        let p = L1Problem::new(&op, &b)
            .unwrap()
            .with_known_support(&[20, 90, 200])
            .unwrap()
            .with_settings(tight())
            .unwrap();
        let r = solve_l1(&p);
        assert!(r.converged);
        assert!(r.iterations <= 1000, "{} iterations", r.iterations);
        assert!(check_kkt(&r, &p).certifies(1e-8, 1e-9));
    }

    #[test]
    fn cholesky_solves_small_systems() {
        let mut a = vec![4.0, 2.0, 0.6, 2.0, 5.0, 1.0, 0.6, 1.0, 3.0];
        let orig = a.clone();
        assert!(cholesky(&mut a, 3));
        let mut x = vec![1.0, -2.0, 0.5];
        let rhs = x.clone();
        cholesky_solve(&a, 3, &mut x);
        for i in 0..3 {
            let row: f64 = (0..3).map(|j| orig[i * 3 + j] * x[j]).sum();
            assert!((row - rhs[i]).abs() < 1e-12);
        }
        let mut singular = vec![1.0, 1.0, 1.0, 1.0];
        assert!(!cholesky(&mut singular, 2));
    }

    #[test]
    fn problem_validation() {
        let op = operator(32, 4, 1);
        assert!(L1Problem::new(&op, &[0.0; 3]).is_err());
        let p = || L1Problem::new(&op, &vec![0.0; op.rows()]).unwrap();
        assert!(p().with_weights(vec![0.0; 32]).is_err());
        assert!(p().with_weights(vec![-1.0; 32]).is_err());
        assert!(p().with_weights(vec![1.0; 31]).is_err());
        assert!(p().with_known_support(&[40]).is_err());
        let bad = SolverSettings {
            feasibility_tolerance: 0.0,
            ..SolverSettings::default()
        };
        assert!(p().with_settings(bad).is_err());
    }

    #[test]
    fn spectral_norm_of_spike_operator() {
        // Unit gains: every row has squared norm 1/2.
        let n = 64;
        let op = SensingOperator::new(
            plan_random(Band::full(n).unwrap(), 5, 2).unwrap(),
            Dictionary::spike(n).unwrap(),
        )
        .unwrap();
        assert!((spectral_norm(&op, 50) - 0.5f64.sqrt()).abs() < 1e-9);
    }
}
