//! Exact phase-one simplex over the rationals.
//!
//! Only feasibility is needed: find `x >= 0` with `A x >= b`. Pivoting uses
//! Bland's rule, so the method terminates on every input.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Returns a point `x >= 0` with `a x >= b`, or `None` if none exists.
pub fn feasible_point(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    // Columns: x (n), surplus s (m), artificial t (m), then the right-hand side.
    let width = n + 2 * m;
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![BigRational::zero(); width + 1];
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = if flip { BigRational::from_integer(1.into()) } else { BigRational::from_integer((-1).into()) };
        row[n + m + i] = BigRational::from_integer(1.into());
        row[width] = b[i].abs();
        tab.push(row);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| n + m + i).collect();

    // Reduced costs for minimising the sum of artificials.
    let mut cost = vec![BigRational::zero(); width + 1];
    for row in &tab {
        for (c, v) in cost.iter_mut().zip(row) {
            *c -= v;
        }
    }
    for i in 0..m {
        cost[n + m + i] = BigRational::zero();
    }

    loop {
        let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][width] / &tab[i][enter];
                let better = match &best {
                    None => true,
                    Some(bst) => ratio < *bst || (ratio == *bst && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        // Phase one is bounded below by zero, so some row always limits the step.
        let r = leave.expect("phase-one objective is bounded");
        pivot(&mut tab, &mut cost, r, enter);
        basis[r] = enter;
    }

    if !cost[width].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = tab[i][width].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<BigRational>], cost: &mut [BigRational], r: usize, c: usize) {
    let inv = tab[r][c].recip();
    for v in tab[r].iter_mut() {
        *v *= &inv;
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (v, p) in cost.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
}
