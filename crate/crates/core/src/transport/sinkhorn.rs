//! Entropic approximation of W1 (log-domain Sinkhorn iterations in `f64`).
//!
//! Advisory only: results are floats and are never fed back into curvature
//! records.

use super::{GroundDistance, TransportError};
use crate::measures::VertexMeasure;
use crate::rational::to_f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinkhornParams {
    pub reg: f64,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for SinkhornParams {
    fn default() -> Self {
        Self { reg: 1e-2, max_iters: 10_000, tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinkhornResult {
    /// Transport cost `<P, C>` of the regularized plan (entropy term excluded).
    pub cost: f64,
    pub iterations: usize,
    /// L1 norm of the row-marginal residual at exit.
    pub marginal_violation: f64,
}

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let vals: Vec<f64> = values.collect();
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + vals.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

pub fn sinkhorn_approx<D: GroundDistance + ?Sized>(
    mu: &VertexMeasure,
    nu: &VertexMeasure,
    d: &D,
    params: SinkhornParams,
) -> Result<SinkhornResult, TransportError> {
    if !(params.reg.is_finite() && params.reg > 0.0) {
        return Err(TransportError::InvalidParameter(format!("reg must be positive, got {}", params.reg)));
    }
    if !(params.tol.is_finite() && params.tol >= 0.0) {
        return Err(TransportError::InvalidParameter(format!("tol must be nonnegative, got {}", params.tol)));
    }
    let a: Vec<f64> = mu.iter().map(|(_, m)| to_f64(m)).collect();
    let b: Vec<f64> = nu.iter().map(|(_, m)| to_f64(m)).collect();
    // Unreachable pairs get kernel weight zero (log-kernel -inf).
    let cost: Vec<Vec<Option<f64>>> = mu
        .support()
        .map(|s| nu.support().map(|t| d.distance(s, t).finite().map(to_f64)).collect())
        .collect();
    let max_cost = cost.iter().flatten().flatten().fold(0.0f64, |m, c| m.max(*c));
    let log_a: Vec<f64> = a.iter().map(|x| x.ln()).collect();
    let log_b: Vec<f64> = b.iter().map(|x| x.ln()).collect();
    // Potentials are kept in cost units (F = reg * log u) so they can be
    // carried across the annealing stages.
    let mut f = vec![0.0; a.len()];
    let mut g = vec![0.0; b.len()];
    let log_k = |f: &[f64], g: &[f64], i: usize, j: usize, eps: f64| {
        cost[i][j].map_or(f64::NEG_INFINITY, |c| (f[i] + g[j] - c) / eps)
    };
    let row_residual = |f: &[f64], g: &[f64], eps: f64| -> f64 {
        (0..a.len())
            .map(|i| {
                let row: f64 = (0..b.len()).map(|j| log_k(f, g, i, j, eps).exp()).sum();
                (row - a[i]).abs()
            })
            .sum()
    };

    // Annealing schedule max_cost, max_cost/2, ... down to reg.
    let mut schedule = Vec::new();
    let mut eps = max_cost;
    while eps > params.reg {
        schedule.push(eps);
        eps *= 0.5;
    }
    schedule.push(params.reg);

    let mut residual = f64::INFINITY;
    let mut it = 0;
    for (stage, &eps) in schedule.iter().enumerate() {
        let last = stage + 1 == schedule.len();
        let stage_tol = if last { params.tol } else { params.tol.max(1e-3) };
        loop {
            if it == params.max_iters {
                return Err(TransportError::NotConverged { iterations: it, residual });
            }
            it += 1;
            for i in 0..a.len() {
                let lse = log_sum_exp((0..b.len()).map(|j| log_k(&f, &g, i, j, eps) - f[i] / eps));
                f[i] = eps * (log_a[i] - lse);
            }
            for j in 0..b.len() {
                let lse = log_sum_exp((0..a.len()).map(|i| log_k(&f, &g, i, j, eps) - g[j] / eps));
                g[j] = eps * (log_b[j] - lse);
            }
            residual = row_residual(&f, &g, eps);
            if !residual.is_finite() {
                return Err(TransportError::InfeasibleTransport);
            }
            if residual <= stage_tol {
                break;
            }
        }
        if last {
            let mut total = 0.0;
            for i in 0..a.len() {
                for j in 0..b.len() {
                    if let Some(c) = cost[i][j] {
                        total += log_k(&f, &g, i, j, eps).exp() * c;
                    }
                }
            }
            return Ok(SinkhornResult { cost: total, iterations: it, marginal_violation: residual });
        }
    }
    unreachable!("schedule ends with the target reg")
}
