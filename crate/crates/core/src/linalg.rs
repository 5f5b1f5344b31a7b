//! Small dense linear algebra: the systems solved here are at most
//! (ambient_dim + 1) square, so plain Gaussian elimination with partial
//! pivoting is both fast and accurate enough.

use crate::error::{Error, Result};

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Dense matrix-vector product; `m` is row-major.
pub(crate) fn matvec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, x)).collect()
}

fn inf_norm(m: &[Vec<f64>]) -> f64 {
    m.iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverts a square matrix by Gauss-Jordan elimination with partial pivoting.
///
/// Rejects matrices whose condition estimate `‖A‖∞ · ‖A⁻¹‖∞` exceeds `max_cond`
/// (or whose pivot vanishes outright) with [`Error::DegenerateSimplex`].
pub(crate) fn invert(a: &[Vec<f64>], max_cond: f64) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    // Augment with the identity and eliminate in place.
    let mut work: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                work[i][col]
                    .abs()
                    .partial_cmp(&work[j][col].abs())
                    .expect("finite pivots")
            })
            .expect("non-empty pivot range");
        let pivot = work[pivot_row][col];
        if pivot.abs() == 0.0 {
            return Err(Error::DegenerateSimplex { cond: f64::INFINITY });
        }
        work.swap(col, pivot_row);
        let inv_pivot = 1.0 / pivot;
        for v in work[col].iter_mut() {
            *v *= inv_pivot;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = work[row][col];
            if factor != 0.0 {
                let (pivot_vals, row_vals) = if row < col {
                    let (lo, hi) = work.split_at_mut(col);
                    (&hi[0], &mut lo[row])
                } else {
                    let (lo, hi) = work.split_at_mut(row);
                    (&lo[col], &mut hi[0])
                };
                for (rv, pv) in row_vals.iter_mut().zip(pivot_vals) {
                    *rv -= factor * pv;
                }
            }
        }
    }

    let inverse: Vec<Vec<f64>> = work.into_iter().map(|row| row[n..].to_vec()).collect();
    let cond = inf_norm(a) * inf_norm(&inverse);
    if !cond.is_finite() || cond > max_cond {
        return Err(Error::DegenerateSimplex { cond });
    }
    Ok(inverse)
}

/// Numerical rank of a row-major matrix via row echelon reduction with
/// partial pivoting; pivots below `tol` times the largest entry count as zero.
pub(crate) fn rank(m: &[Vec<f64>], tol: f64) -> usize {
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter().map(|v| v.abs()))
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let threshold = tol * scale;
    let mut work: Vec<Vec<f64>> = m.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot_row = (rank..rows)
            .max_by(|&i, &j| {
                work[i][col]
                    .abs()
                    .partial_cmp(&work[j][col].abs())
                    .expect("finite entries")
            })
            .expect("non-empty range");
        if work[pivot_row][col].abs() <= threshold {
            continue;
        }
        work.swap(rank, pivot_row);
        let pivot = work[rank][col];
        for row in rank + 1..rows {
            let factor = work[row][col] / pivot;
            if factor != 0.0 {
                let (upper, lower) = work.split_at_mut(row);
                for (rv, pv) in lower[0].iter_mut().zip(&upper[rank]) {
                    *rv -= factor * pv;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0` with a two-phase simplex
/// method (Bland's rule for both entering and leaving variables, so the
/// iteration cannot cycle). Returns `None` when the constraints are
/// infeasible. Problem sizes here are tiny (≤ 6 rows, ≤ 16 columns).
pub(crate) fn lp_maximize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<f64> {
    const EPS: f64 = 1e-11;
    let rows = a.len();
    let cols = c.len();
    debug_assert!(a.iter().all(|r| r.len() == cols));
    debug_assert_eq!(b.len(), rows);

    // Tableau layout: [A | I_art | b], one artificial variable per row.
    let total = cols + rows;
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row: Vec<f64> = a[i].iter().map(|v| flip * v).collect();
        row.extend((0..rows).map(|j| if i == j { 1.0 } else { 0.0 }));
        row.push(flip * b[i]);
        tab.push(row);
    }
    let mut basis: Vec<usize> = (cols..total).collect();

    let pivot = |tab: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, row: usize, col: usize| {
        let p = tab[row][col];
        for v in tab[row].iter_mut() {
            *v /= p;
        }
        for r in 0..tab.len() {
            if r != row {
                let f = tab[r][col];
                if f != 0.0 {
                    let (pivot_row, other) = if r < row {
                        let (lo, hi) = tab.split_at_mut(row);
                        (&hi[0], &mut lo[r])
                    } else {
                        let (lo, hi) = tab.split_at_mut(r);
                        (&lo[row], &mut hi[0])
                    };
                    for (ov, pv) in other.iter_mut().zip(pivot_row) {
                        *ov -= f * pv;
                    }
                }
            }
        }
        basis[row] = col;
    };

    // Runs Bland-rule simplex on the current tableau for the objective
    // `obj` (maximization, expressed over all tableau columns).
    let run = |tab: &mut Vec<Vec<f64>>,
               basis: &mut Vec<usize>,
               obj: &[f64],
               allowed: usize|
     -> f64 {
        loop {
            // Reduced costs: obj_j - obj_B · B⁻¹ A_j.
            let mut entering = None;
            for j in 0..allowed {
                if basis.contains(&j) {
                    continue;
                }
                let mut reduced = obj[j];
                for (r, &bi) in basis.iter().enumerate() {
                    reduced -= obj[bi] * tab[r][j];
                }
                if reduced > EPS {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                let mut value = 0.0;
                for (r, &bi) in basis.iter().enumerate() {
                    value += obj[bi] * tab[r][total];
                }
                return value;
            };
            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..tab.len() {
                if tab[r][j] > EPS {
                    let ratio = tab[r][total] / tab[r][j];
                    match leaving {
                        None => leaving = Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - EPS
                                || (ratio < lratio + EPS && basis[r] < basis[lr])
                            {
                                leaving = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            let Some((r, _)) = leaving else {
                // Unbounded; callers only pose bounded problems, but guard anyway.
                return f64::INFINITY;
            };
            pivot(tab, basis, r, j);
        }
    };

    // Phase 1: maximize -(sum of artificials).
    let mut phase1 = vec![0.0; total];
    for v in phase1.iter_mut().skip(cols) {
        *v = -1.0;
    }
    let feas = run(&mut tab, &mut basis, &phase1, total);
    if feas < -1e-9 {
        return None;
    }
    // Pivot any artificial variables still in the basis out where possible.
    for r in 0..rows {
        if basis[r] >= cols {
            if let Some(j) = (0..cols).find(|&j| tab[r][j].abs() > EPS) {
                pivot(&mut tab, &mut basis, r, j);
            }
        }
    }

    // Phase 2: the real objective, artificial columns barred.
    let mut phase2 = vec![0.0; total];
    phase2[..cols].copy_from_slice(c);
    Some(run(&mut tab, &mut basis, &phase2, cols))
}
