//! Nelder-Mead downhill simplex minimization.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOptions {
    /// Stop when every vertex lies within this distance (max-norm) of the
    /// best vertex.
    pub tol_x: f64,
    /// Stop when worst and best objective values differ by less than this.
    pub tol_f: f64,
    pub max_iter: usize,
    /// Per-coordinate offsets of the initial simplex. Defaults to 5% of each
    /// start coordinate (0.00025 for zero coordinates).
    pub initial_step: Option<Vec<f64>>,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            tol_x: 1e-10,
            tol_f: 1e-24,
            max_iter: 10_000,
            initial_step: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum OptimizeError {
    #[error("start vector is empty")]
    EmptyStart,
    #[error("objective is not finite at the start point ({0})")]
    NonFiniteObjective(f64),
    #[error("initial step has {got} entries, expected {expected}")]
    StepLength { got: usize, expected: usize },
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Minimizes `objective` from `start`.
///
/// The best vertex never gets worse, so the returned value is at most the
/// objective at `start`. Non-finite values away from the start are treated
/// as +∞.
pub fn nelder_mead<F>(
    mut objective: F,
    start: &[f64],
    options: &NelderMeadOptions,
) -> Result<Minimum, OptimizeError>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    if n == 0 {
        return Err(OptimizeError::EmptyStart);
    }
    let f_start = objective(start);
    if !f_start.is_finite() {
        return Err(OptimizeError::NonFiniteObjective(f_start));
    }
    let steps: Vec<f64> = match &options.initial_step {
        Some(s) if s.len() != n => {
            return Err(OptimizeError::StepLength {
                got: s.len(),
                expected: n,
            })
        }
        Some(s) => s.clone(),
        None => start
            .iter()
            .map(|&x| if x == 0.0 { 0.00025 } else { 0.05 * x })
            .collect(),
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    values.push(f_start);
    for (i, &step) in steps.iter().enumerate() {
        let mut v = start.to_vec();
        v[i] += step;
        values.push(sanitize(objective(&v)));
        simplex.push(v);
    }

    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut iterations = 0;

    loop {
        // Stable sort keeps the older vertex first on ties.
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let spread = values[worst] - values[best];
        let size = simplex
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if size < options.tol_x || spread < options.tol_f {
            return Ok(finish(&simplex, &values, best, iterations, true));
        }
        if iterations >= options.max_iter {
            return Ok(finish(&simplex, &values, best, iterations, false));
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &idx in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[idx]) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        let point = |coef: f64, toward: &[f64], out: &mut Vec<f64>| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(toward) {
                *o = c + coef * (w - c);
            }
        };

        let worst_pt = simplex[worst].clone();
        point(-REFLECT, &worst_pt, &mut trial);
        let reflected = trial.clone();
        let f_r = sanitize(objective(&reflected));

        if f_r < values[best] {
            point(-REFLECT * EXPAND, &worst_pt, &mut trial);
            let f_e = sanitize(objective(&trial));
            if f_e < f_r {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = f_e;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_r;
            }
            continue;
        }
        if f_r < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_r;
            continue;
        }
        // Outside contraction toward the reflected point, inside otherwise.
        let (toward, bound) = if f_r < values[worst] {
            (reflected.as_slice(), f_r)
        } else {
            (worst_pt.as_slice(), values[worst])
        };
        point(CONTRACT, toward, &mut trial);
        let f_c = sanitize(objective(&trial));
        if f_c < bound {
            simplex[worst].copy_from_slice(&trial);
            values[worst] = f_c;
            continue;
        }
        let anchor = simplex[best].clone();
        for &idx in &order[1..] {
            for (x, a) in simplex[idx].iter_mut().zip(&anchor) {
                *x = a + SHRINK * (*x - a);
            }
            values[idx] = sanitize(objective(&simplex[idx]));
        }
    }
}

fn finish(
    simplex: &[Vec<f64>],
    values: &[f64],
    best: usize,
    iterations: usize,
    converged: bool,
) -> Minimum {
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        converged,
    }
}

/// Euclidean norm, used by callers comparing solutions.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}
