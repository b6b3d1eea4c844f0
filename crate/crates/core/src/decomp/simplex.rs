//! Nelder-Mead simplex search and a deterministic multi-start driver.

use rayon::prelude::*;

/// Outcome of one local search.
#[derive(Debug, Clone)]
pub struct LocalMin {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder-Mead with dimension-adaptive coefficients (Gao and Han), which
/// behave better than the classic ones once the dimension passes ~10.
///
/// Stops when the spread of simplex values drops to `tol` or after
/// `max_iter` iterations. Non-finite values are treated as `+inf`.
pub fn nelder_mead<F>(f: F, x0: &[f64], step: f64, max_iter: usize, tol: f64) -> LocalMin
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    if n == 0 {
        let value = eval(x0);
        return LocalMin {
            x: Vec::new(),
            value,
            evaluations: 1,
            converged: true,
        };
    }

    let nf = n as f64;
    let reflect = 1.0;
    let expand = 1.0 + 2.0 / nf;
    let contract = 0.75 - 1.0 / (2.0 * nf);
    let shrink = 1.0 - 1.0 / nf;

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x)).collect();

    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let point = |base: &[f64], dir: &[f64], t: f64| -> Vec<f64> {
        base.iter().zip(dir).map(|(b, d)| b + t * (d - b)).collect()
    };

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        simplex = order.iter().map(|&k| simplex[k].clone()).collect();
        values = order.iter().map(|&k| values[k]).collect();

        let (best, worst) = (values[0], values[n]);
        if best.is_finite() && worst - best <= tol {
            converged = true;
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }

        // x_r = c + reflect (c - x_worst)
        let xr = point(&centroid, &simplex[n], -reflect);
        let fr = eval(&xr);
        if fr < values[0] {
            let xe = point(&centroid, &simplex[n], -reflect * expand);
            let fe = eval(&xe);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = point(&centroid, &xr, contract);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = point(&centroid, &simplex[n], contract);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        let best_point = simplex[0].clone();
        for k in 1..=n {
            simplex[k] = point(&best_point, &simplex[k], shrink);
            values[k] = eval(&simplex[k]);
        }
    }

    let (k, value) = values
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("non-empty simplex");
    LocalMin {
        x: simplex[k].clone(),
        value,
        evaluations,
        converged,
    }
}

/// Best of several local searches, one per start point.
#[derive(Debug, Clone)]
pub struct MultiStart {
    pub best: LocalMin,
    pub start_index: usize,
    pub evaluations: usize,
}

/// Runs [`nelder_mead`] from every start in parallel. The winner is the
/// smallest value, ties broken by start index, so the result does not depend
/// on scheduling.
///
/// `f` receives the start index along with the point, so different starts
/// may search different parameterizations.
pub fn multistart<F>(f: &F, starts: &[Vec<f64>], step: f64, max_iter: usize, tol: f64) -> MultiStart
where
    F: Fn(usize, &[f64]) -> f64 + Sync,
{
    assert!(!starts.is_empty(), "multistart needs at least one start");
    let runs: Vec<LocalMin> = starts
        .par_iter()
        .enumerate()
        .map(|(k, x0)| nelder_mead(|x: &[f64]| f(k, x), x0, step, max_iter, tol))
        .collect();
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let (start_index, best) = runs
        .into_iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .expect("non-empty");
    MultiStart {
        best,
        start_index,
        evaluations,
    }
}
