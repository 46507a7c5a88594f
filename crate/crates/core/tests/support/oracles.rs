//! Brute-force reference solvers, independent of the library code paths.

#![allow(dead_code)]

/// Solves `A[:, cols] x = b` when the chosen columns are linearly
/// independent and the system is consistent.
fn solve_on_columns(a: &[Vec<f64>], b: &[f64], cols: &[usize]) -> Option<Vec<f64>> {
    let rows = a.len();
    let k = cols.len();
    let mut m: Vec<Vec<f64>> = (0..rows)
        .map(|i| {
            let mut r: Vec<f64> = cols.iter().map(|&j| a[i][j]).collect();
            r.push(b[i]);
            r
        })
        .collect();
    let mut pivot_row = 0;
    for c in 0..k {
        let best = (pivot_row..rows).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs()))?;
        if m[best][c].abs() < 1e-10 {
            return None;
        }
        m.swap(pivot_row, best);
        let p = m[pivot_row][c];
        for v in m[pivot_row].iter_mut() {
            *v /= p;
        }
        let pivot = m[pivot_row].clone();
        for (i, row) in m.iter_mut().enumerate() {
            let f = row[c];
            if i != pivot_row && f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v -= f * p;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|r| r[k].abs() > 1e-9) {
        return None;
    }
    Some((0..k).map(|c| m[c][k]).collect())
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for j in 0..n {
        let grown: Vec<Vec<usize>> = out
            .iter()
            .filter(|s| s.len() < max)
            .map(|s| {
                let mut t = s.clone();
                t.push(j);
                t
            })
            .collect();
        out.extend(grown);
    }
    out
}

/// Every basic feasible solution of `A x = b, x ≥ 0`.
pub fn basic_feasible_solutions(a: &[Vec<f64>], b: &[f64], n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for cols in subsets(n, a.len()) {
        if let Some(xs) = solve_on_columns(a, b, &cols) {
            if xs.iter().all(|&v| v >= -1e-9) {
                let mut x = vec![0.0; n];
                for (&j, &v) in cols.iter().zip(&xs) {
                    x[j] = v.max(0.0);
                }
                out.push(x);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LpOutcome {
    Optimal(f64),
    Infeasible,
    Unbounded,
}

/// Exhaustive LP solution: the best vertex, or an improving extreme ray.
pub fn enumerate_lp(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> LpOutcome {
    let n = c.len();
    let vertices = basic_feasible_solutions(a, b, n);
    if vertices.is_empty() {
        return LpOutcome::Infeasible;
    }
    // extreme rays of {d ≥ 0, A d = 0} are vertices of the slice Σd = 1
    let mut ray_a: Vec<Vec<f64>> = a.to_vec();
    ray_a.push(vec![1.0; n]);
    let mut ray_b = vec![0.0; a.len()];
    ray_b.push(1.0);
    let dot = |x: &[f64]| c.iter().zip(x).map(|(p, q)| p * q).sum::<f64>();
    if basic_feasible_solutions(&ray_a, &ray_b, n)
        .iter()
        .any(|d| dot(d) < -1e-9)
    {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal(vertices.iter().map(|x| dot(x)).fold(f64::INFINITY, f64::min))
}

/// Maximizes `Σ ω_j D_j` over `Σ ω_j³ = 1, ω ≥ 0` for `D.len() ≤ 3` by
/// nested grid refinement down to `resolution`, then rescales the best
/// point to sum to one.
///
/// One coordinate is solved from the constraint and the rest are gridded.
/// The solved coordinate is steep wherever it is small, so every choice of
/// it is searched and the best value kept.
pub fn cubic_surface_argmax(d: &[f64], resolution: f64) -> Vec<f64> {
    let n = d.len();
    assert!((1..=3).contains(&n));
    if n == 1 {
        return vec![1.0];
    }
    let value = |w: &[f64]| w.iter().zip(d).map(|(a, b)| a * b).sum::<f64>();
    let w = (0..n)
        .map(|implied| surface_search(n, implied, resolution, &value))
        .max_by(|a, b| value(a).total_cmp(&value(b)))
        .expect("at least one search");
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

fn surface_search(n: usize, implied: usize, resolution: f64, value: &dyn Fn(&[f64]) -> f64) -> Vec<f64> {
    let point = |t: &[f64]| -> Option<Vec<f64>> {
        let rest = 1.0 - t.iter().map(|x| x * x * x).sum::<f64>();
        if rest < -1e-12 {
            return None;
        }
        let mut w = t.to_vec();
        w.insert(implied, rest.max(0.0).cbrt());
        Some(w)
    };

    // free coordinates t live in [0, 1]^(n-1)
    let mut center = vec![0.5; n - 1];
    let mut half = 0.5f64;
    let mut step = 0.01f64;
    let mut best: Option<(f64, Vec<f64>)> = None;
    loop {
        let count = (2.0 * half / step).round() as i64;
        let axis = |c: f64| -> Vec<f64> {
            (0..=count)
                .map(|k| (c - half + k as f64 * step).clamp(0.0, 1.0))
                .collect()
        };
        let grids: Vec<Vec<f64>> = center.iter().map(|&c| axis(c)).collect();
        let mut visit = |t: &[f64]| {
            if let Some(w) = point(t) {
                let v = value(&w);
                if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                    best = Some((v, t.to_vec()));
                }
            }
        };
        if n == 2 {
            for &t0 in &grids[0] {
                visit(&[t0]);
            }
        } else {
            for &t0 in &grids[0] {
                for &t1 in &grids[1] {
                    visit(&[t0, t1]);
                }
            }
        }
        center = best.as_ref().expect("grid has a feasible point").1.clone();
        if step <= resolution {
            break;
        }
        half = 2.0 * step;
        step /= 10.0;
    }
    point(&center).expect("best point is feasible")
}

/// `Σ_k α_k Σ_j |x_j − ω_jk|`
pub fn weighted_l1(per_dm: &[Vec<f64>], alpha: &[f64], x: &[f64]) -> f64 {
    per_dm
        .iter()
        .zip(alpha)
        .map(|(w, a)| a * w.iter().zip(x).map(|(p, q)| (p - q).abs()).sum::<f64>())
        .sum()
}

/// Exact minimum of [`weighted_l1`] over the probability simplex.
///
/// The objective is separable and piecewise linear in each coordinate with
/// breakpoints at the DM weights. Starting from x = 0, mass is poured into
/// the cheapest marginal segments first until it totals one.
pub fn simplex_l1_minimum(per_dm: &[Vec<f64>], alpha: &[f64]) -> f64 {
    let n = per_dm[0].len();
    let zero = vec![0.0; n];
    let mut value = weighted_l1(per_dm, alpha, &zero);
    let mut segments: Vec<(f64, f64)> = Vec::new(); // (slope, length)
    for j in 0..n {
        let mut points: Vec<(f64, f64)> = per_dm.iter().zip(alpha).map(|(w, &a)| (w[j], a)).collect();
        points.sort_by(|p, q| p.0.total_cmp(&q.0));
        let total: f64 = alpha.iter().sum();
        let mut passed = 0.0;
        let mut from = 0.0;
        for &(at, a) in &points {
            if at > from {
                segments.push((passed - (total - passed), at - from));
                from = at;
            }
            passed += a;
        }
        segments.push((passed - (total - passed), f64::INFINITY));
    }
    segments.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut left = 1.0;
    for (slope, len) in segments {
        if left <= 0.0 {
            break;
        }
        let take = len.min(left);
        value += slope * take;
        left -= take;
    }
    value
}

/// Minimum of [`weighted_l1`] over the simplex grid with spacing `step`.
pub fn simplex_grid_minimum(per_dm: &[Vec<f64>], alpha: &[f64], step: f64) -> f64 {
    let n = per_dm[0].len();
    let units = (1.0 / step).round() as usize;
    let mut best = f64::INFINITY;
    let mut counts = vec![0usize; n];
    fn walk(j: usize, left: usize, counts: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if j + 1 == counts.len() {
            counts[j] = left;
            f(counts);
            return;
        }
        for c in 0..=left {
            counts[j] = c;
            walk(j + 1, left - c, counts, f);
        }
    }
    walk(0, units, &mut counts, &mut |c| {
        let x: Vec<f64> = c.iter().map(|&k| k as f64 / units as f64).collect();
        best = best.min(weighted_l1(per_dm, alpha, &x));
    });
    best
}
