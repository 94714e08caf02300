//! Derivative-free compass (pattern) search.
//!
//! The objectives here (Hilbert displacements, distances to a simplex) are
//! convex or piecewise smooth with kinks along coordinate-difference
//! directions, so polling along a caller-supplied direction set and halving
//! the step on failure is both robust and cheap.

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// The budget ran out before the step fell below `min_step`.
    pub budget_exhausted: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchParams {
    pub initial_step: f64,
    pub min_step: f64,
    pub budget: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            initial_step: 0.5,
            min_step: 1e-9,
            budget: 10_000,
        }
    }
}

/// Minimises `f` from `x0`, polling `x ± step * dir` for every direction.
pub fn pattern_search<F>(mut f: F, x0: &[f64], directions: &[Vec<f64>], params: SearchParams) -> SearchResult
where
    F: FnMut(&[f64]) -> f64,
{
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut evals = 1;
    let mut step = params.initial_step;
    let mut trial = vec![0.0; x.len()];
    while step >= params.min_step {
        let mut improved = false;
        'poll: for dir in directions {
            for sign in [1.0, -1.0] {
                if evals >= params.budget {
                    return SearchResult {
                        x,
                        value: fx,
                        evaluations: evals,
                        budget_exhausted: true,
                    };
                }
                for (t, (xi, di)) in trial.iter_mut().zip(x.iter().zip(dir)) {
                    *t = xi + sign * step * di;
                }
                let ft = f(&trial);
                evals += 1;
                if ft < fx {
                    x.copy_from_slice(&trial);
                    fx = ft;
                    improved = true;
                    break 'poll;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    SearchResult {
        x,
        value: fx,
        evaluations: evals,
        budget_exhausted: false,
    }
}

/// The directions `e_i - e_j`, `i < j`, in `R^n`.
pub fn difference_directions(n: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v[j] = -1.0;
            dirs.push(v);
        }
    }
    dirs
}

/// The coordinate directions of `R^n`.
pub fn coordinate_directions(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}
