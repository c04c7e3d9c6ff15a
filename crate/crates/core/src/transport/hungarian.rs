//! Assignment-problem oracle for exact W1.
//!
//! Each measure is split into `denom` atoms of mass `1/denom`; an optimal
//! assignment of atoms is an optimal coupling, so the assignment cost divided
//! by `denom` is W1. Independent of the flow solver on purpose.

use super::{GroundDistance, TransportError};
use crate::graph::Vertex;
use crate::measures::VertexMeasure;
use crate::rational::{int, Rational};
use num_traits::{One, Signed, Zero};

/// Minimum-cost perfect assignment on a square matrix. `None` entries are
/// forbidden. Returns `(cost, row -> column)` or `None` if every perfect
/// assignment uses a forbidden entry.
pub fn min_cost_assignment(costs: &[Vec<Option<Rational>>]) -> Option<(Rational, Vec<usize>)> {
    let n = costs.len();
    if n == 0 {
        return Some((Rational::zero(), Vec::new()));
    }
    // Forbidden entries cost more than any assignment of allowed ones.
    let mut big = Rational::one();
    for row in costs {
        assert_eq!(row.len(), n, "assignment matrix must be square");
        for c in row.iter().flatten() {
            big += c.abs();
        }
    }
    let cost = |i: usize, j: usize| costs[i][j].clone().unwrap_or_else(|| big.clone());

    // Potentials u (rows), v (columns); p[j] = row matched to column j, 1-based
    // with column 0 as the virtual start.
    let mut u = vec![Rational::zero(); n + 1];
    let mut v = vec![Rational::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<Rational>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - &u[i0] - &v[j];
                if minv[j].as_ref().is_none_or(|m| &cur < m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("set above");
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= &delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[p[j] - 1] = j - 1;
    }
    let mut total = Rational::zero();
    for (i, &j) in assignment.iter().enumerate() {
        total += costs[i][j].as_ref()?;
    }
    Some((total, assignment))
}

fn atoms(m: &VertexMeasure, denom: u32) -> Result<Vec<Vertex>, TransportError> {
    let scale = int(i64::from(denom));
    let mut out = Vec::with_capacity(denom as usize);
    for (v, mass) in m.iter() {
        let count = mass * &scale;
        if !count.is_integer() {
            return Err(TransportError::DenominatorMismatch { vertex: v, mass: mass.clone(), denom });
        }
        let c: usize = count.to_integer().try_into().expect("atom count fits in usize");
        out.extend(std::iter::repeat_n(v, c));
    }
    Ok(out)
}

/// W1 computed by optimal assignment over `denom` unit atoms per measure.
pub fn unit_split_oracle<D: GroundDistance + ?Sized>(
    mu: &VertexMeasure,
    nu: &VertexMeasure,
    d: &D,
    denom: u32,
) -> Result<Rational, TransportError> {
    if denom == 0 {
        return Err(TransportError::InvalidParameter("denominator must be positive".into()));
    }
    let left = atoms(mu, denom)?;
    let right = atoms(nu, denom)?;
    let costs: Vec<Vec<Option<Rational>>> = left
        .iter()
        .map(|s| right.iter().map(|t| d.distance(*s, *t).finite().cloned()).collect())
        .collect();
    let (total, _) = min_cost_assignment(&costs).ok_or(TransportError::InfeasibleTransport)?;
    Ok(total / int(i64::from(denom)))
}

/// Exhaustive check used by the tests.
#[cfg(test)]
pub(crate) fn brute_force_assignment(costs: &[Vec<Option<Rational>>]) -> Option<Rational> {
    fn rec(costs: &[Vec<Option<Rational>>], row: usize, used: &mut Vec<bool>) -> Option<Rational> {
        if row == costs.len() {
            return Some(Rational::zero());
        }
        let mut best: Option<Rational> = None;
        for j in 0..costs.len() {
            if used[j] {
                continue;
            }
            let Some(c) = &costs[row][j] else { continue };
            used[j] = true;
            if let Some(rest) = rec(costs, row + 1, used) {
                let total = c + rest;
                if best.as_ref().is_none_or(|b| &total < b) {
                    best = Some(total);
                }
            }
            used[j] = false;
        }
        best
    }
    rec(costs, 0, &mut vec![false; costs.len()])
}
