//! Numeric solution of polynomial systems by damped Newton with restarts.
//!
//! Polynomials are compiled once into flat monomial schedules over parameter
//! indices; the Jacobian is compiled from the exact partial derivatives.
//! Each restart draws its starting point from its own ChaCha stream, so the
//! result does not depend on how restarts are scheduled across threads.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{rational_to_f64, Polynomial};

#[derive(Clone, Debug)]
struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    fn new(p: &Polynomial, index: &BTreeMap<String, usize>) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let vars = m.factors().iter().map(|&(s, e)| (index[&*s.name()], e as i32)).collect();
                (rational_to_f64(c), vars)
            })
            .collect();
        CompiledPoly { terms }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, vars)| vars.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e))).sum()
    }
}

/// Equations `p_i = 0` in an ordered list of parameters.
#[derive(Clone, Debug)]
pub struct PolySystem {
    equations: Vec<Polynomial>,
    parameters: Vec<String>,
    compiled: Vec<CompiledPoly>,
    /// Nonzero partial derivatives as `(row, column, derivative)`.
    jacobian: Vec<(usize, usize, CompiledPoly)>,
}

impl PolySystem {
    pub fn new(equations: Vec<Polynomial>, parameters: Vec<String>) -> Result<Self> {
        let index: BTreeMap<String, usize> = parameters.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        if index.len() != parameters.len() {
            return Err(Error::Invalid("parameter listed twice".into()));
        }
        for e in &equations {
            if let Some(p) = e.parameters().into_iter().find(|p| !index.contains_key(p)) {
                return Err(Error::MissingParameter(p));
            }
        }
        let compiled = equations.iter().map(|e| CompiledPoly::new(e, &index)).collect();
        let mut jacobian = Vec::new();
        for (i, e) in equations.iter().enumerate() {
            for (j, name) in parameters.iter().enumerate() {
                let d = e.diff(name);
                if !d.is_zero() {
                    jacobian.push((i, j, CompiledPoly::new(&d, &index)));
                }
            }
        }
        Ok(PolySystem { equations, parameters, compiled, jacobian })
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    fn point_vec(&self, point: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
        self.parameters
            .iter()
            .map(|p| point.get(p).copied().ok_or_else(|| Error::MissingParameter(p.clone())))
            .collect()
    }

    pub fn residuals(&self, point: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
        Ok(self.residuals_at(&self.point_vec(point)?))
    }

    pub fn jacobian(&self, point: &BTreeMap<String, f64>) -> Result<DMatrix<f64>> {
        Ok(self.jacobian_at(&self.point_vec(point)?))
    }

    /// Residuals at a point given in parameter order.
    pub fn residuals_at(&self, x: &[f64]) -> Vec<f64> {
        self.compiled.iter().map(|p| p.eval(x)).collect()
    }

    pub fn jacobian_at(&self, x: &[f64]) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.equations.len(), self.parameters.len());
        for (r, c, p) in &self.jacobian {
            j[(*r, *c)] = p.eval(x);
        }
        j
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NewtonConfig {
    pub max_restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub init_box: (f64, f64),
    /// Stop early once this many distinct solutions are known.
    pub target_solutions: Option<usize>,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            max_restarts: 100,
            max_iters: 200,
            tol: 1e-13,
            seed: 0,
            init_box: (-1.0, 1.0),
            target_solutions: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub point: BTreeMap<String, f64>,
    pub residual_norm: f64,
    /// 1-based index of the first restart that reached this solution.
    pub restarts_used: usize,
}

/// Two points closer than this in every coordinate are the same solution.
pub const DEDUP_TOL: f64 = 1e-8;

const BATCH: usize = 64;

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn newton_run(sys: &PolySystem, cfg: &NewtonConfig, restart: usize) -> Option<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let (lo, hi) = cfg.init_box;
    let mut x: Vec<f64> = (0..sys.parameters.len()).map(|_| rng.gen_range(lo..=hi)).collect();
    let mut r = sys.residuals_at(&x);
    for _ in 0..cfg.max_iters {
        if max_abs(&r) <= cfg.tol {
            return Some(x);
        }
        let j = sys.jacobian_at(&x);
        let rhs = DVector::from_iterator(r.len(), r.iter().map(|v| -v));
        let step = j.svd(true, true).solve(&rhs, 1e-14).ok()?;
        if step.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let f0 = sq_norm(&r);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
            let rt = sys.residuals_at(&trial);
            let ft = sq_norm(&rt);
            if ft.is_finite() && ft <= (1.0 - 2e-4 * t) * f0 {
                x = trial;
                r = rt;
                break;
            }
            t *= 0.5;
            if t < 1e-10 {
                return (max_abs(&r) <= cfg.tol).then_some(x);
            }
        }
        if max_abs(&x) > 1e8 {
            return None;
        }
    }
    (max_abs(&r) <= cfg.tol).then_some(x)
}

fn dedup(mut found: Vec<(usize, Vec<f64>)>) -> Vec<(usize, Vec<f64>)> {
    found.sort_by(|a, b| {
        a.1.iter()
            .zip(&b.1)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });
    let mut kept: Vec<(usize, Vec<f64>)> = Vec::new();
    for (idx, x) in found {
        let same = kept.iter_mut().find(|(_, y)| x.iter().zip(y.iter()).all(|(a, b)| (a - b).abs() <= DEDUP_TOL));
        match same {
            Some(entry) => entry.0 = entry.0.min(idx),
            None => kept.push((idx, x)),
        }
    }
    kept
}

/// Runs damped Newton from random starts; returns distinct converged points.
pub fn newton_solve(sys: &PolySystem, cfg: &NewtonConfig) -> Vec<Solution> {
    let mut found: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut start = 0;
    while start < cfg.max_restarts {
        let end = (start + BATCH).min(cfg.max_restarts);
        let batch: Vec<(usize, Vec<f64>)> =
            (start..end).into_par_iter().filter_map(|i| newton_run(sys, cfg, i).map(|x| (i, x))).collect();
        found.extend(batch);
        found = dedup(found);
        start = end;
        if cfg.target_solutions.is_some_and(|t| found.len() >= t) {
            break;
        }
    }
    found
        .into_iter()
        .map(|(idx, x)| Solution {
            residual_norm: max_abs(&sys.residuals_at(&x)),
            point: sys.parameters.iter().cloned().zip(x).collect(),
            restarts_used: idx + 1,
        })
        .collect()
}
