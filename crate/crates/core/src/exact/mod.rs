//! Exact integer and rational linear algebra.
//!
//! Everything here works on `BigInt` rows. Elimination is fraction-free
//! (rows are rescaled by their content after each step), so intermediate
//! values stay small for the matrices that occur at desk scale.

pub mod lp;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer matrix stored as a list of rows.
pub type IntMatrix = Vec<Vec<BigInt>>;

fn row_content(row: &[BigInt]) -> BigInt {
    row.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn reduce_row(row: &mut [BigInt]) {
    let g = row_content(row);
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Rank of an integer matrix.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: IntMatrix = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        let pivot = pivot_row[col].clone();
        for r in (rank + 1)..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..ncols {
                m[r][c] = &m[r][c] * &pivot - &factor * &pivot_row[c];
            }
            reduce_row(&mut m[r]);
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Determinant of a square integer matrix (Bareiss elimination).
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(rows.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut m: IntMatrix = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match ((k + 1)..n).find(|&r| !m[r][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Difference vectors `p_i - p_0`.
pub fn differences(points: &[Vec<BigInt>]) -> IntMatrix {
    match points.split_first() {
        None => Vec::new(),
        Some((origin, rest)) => rest
            .iter()
            .map(|p| p.iter().zip(origin).map(|(a, b)| a - b).collect())
            .collect(),
    }
}

/// Dimension of the affine hull of a nonempty point set.
pub fn affine_rank(points: &[Vec<BigInt>]) -> usize {
    rank(&differences(points))
}

/// A basis of the integer kernel `{x in Z^ncols : A x = 0}`.
///
/// Column-style Hermite reduction: unimodular column operations bring `A`
/// to echelon form `A U = [H | 0]`; the columns of `U` that end up under the
/// zero block form a lattice basis of the kernel.
pub fn integer_kernel(rows: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    // Work on columns of A and of U, stored as rows for cheap swaps.
    let mut a_cols: IntMatrix = (0..ncols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let mut u_cols: IntMatrix = (0..ncols)
        .map(|j| {
            let mut e = vec![BigInt::zero(); ncols];
            e[j] = BigInt::one();
            e
        })
        .collect();
    let mut pivot = 0;
    for r in 0..rows.len() {
        if pivot == ncols {
            break;
        }
        for j in (pivot + 1)..ncols {
            if a_cols[j][r].is_zero() {
                continue;
            }
            if a_cols[pivot][r].is_zero() {
                a_cols.swap(pivot, j);
                u_cols.swap(pivot, j);
                continue;
            }
            // [p j] <- [p j] * [[x, -b/g], [y, a/g]], unimodular.
            let a = a_cols[pivot][r].clone();
            let b = a_cols[j][r].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (ag, bg) = (&a / &g, &b / &g);
            combine(&mut a_cols, pivot, j, &x, &y, &ag, &bg);
            combine(&mut u_cols, pivot, j, &x, &y, &ag, &bg);
        }
        if !a_cols[pivot][r].is_zero() {
            pivot += 1;
        }
    }
    u_cols.drain(pivot..).collect()
}

fn combine(cols: &mut IntMatrix, p: usize, j: usize, x: &BigInt, y: &BigInt, ag: &BigInt, bg: &BigInt) {
    let cp = cols[p].clone();
    let cj = cols[j].clone();
    cols[p] = cp.iter().zip(&cj).map(|(u, v)| x * u + y * v).collect();
    cols[j] = cp.iter().zip(&cj).map(|(u, v)| ag * v - bg * u).collect();
}

/// A lattice basis of `span_Q(rows) ∩ Z^ncols`.
pub fn saturated_basis(rows: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let kernel = integer_kernel(rows, ncols);
    integer_kernel(&kernel, ncols)
}

/// Solve `y^T B = target` for `y` over the rationals, if a solution exists.
///
/// `basis` rows must be linearly independent.
pub fn solve_left(basis: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let d = target.len();
    // Augmented system with unknowns y (k of them) and d equations.
    let mut m: Vec<Vec<BigRational>> = (0..d)
        .map(|c| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| BigRational::from(b[c].clone())).collect();
            row.push(BigRational::from(target[c].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(k);
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..d).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut y = vec![BigRational::zero(); k];
    for (i, &col) in pivots.iter().enumerate() {
        y[col] = m[i][k].clone();
    }
    Some(y)
}

/// Returns the integer value of a rational, or `None` if it is fractional.
pub fn to_integer(q: &BigRational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

/// Greatest common divisor of a list (0 for the empty or all-zero list).
pub fn gcd_all(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).abs()
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn big_row(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| big_row(r)).collect()
    }

    #[test]
    fn rank_and_determinant() {
        let a = m(&[&[2, 0, 1], &[1, 1, 0], &[3, 1, 1]]);
        assert_eq!(rank(&a), 2);
        assert_eq!(determinant(&a), big(0));
        let b = m(&[&[0, 2, 1], &[1, 1, 0], &[2, 0, 3]]);
        // 0*(3-0) - 2*(3-0) + 1*(0-2)
        assert_eq!(determinant(&b), big(-8));
        assert_eq!(rank(&b), 3);
        assert_eq!(determinant(&[]), big(1));
    }

    #[test]
    fn kernel_of_margin_map() {
        // Row/column sums of 2x2 matrices in row-major order.
        let a = m(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let k = integer_kernel(&a, 4);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(gcd_all(v), big(1));
        let expect = big_row(&[1, -1, -1, 1]);
        let neg: Vec<BigInt> = expect.iter().map(|x| -x).collect();
        assert!(*v == expect || *v == neg);
    }

    #[test]
    fn saturation_recovers_full_lattice() {
        // 2*e1 and e1 + e2 generate an index-2 sublattice of Z^2.
        let a = m(&[&[2, 0], &[1, 1]]);
        let s = saturated_basis(&a, 2);
        assert_eq!(s.len(), 2);
        assert_eq!(determinant(&s).abs(), big(1));
        // A line through (2, 4) saturates to the primitive vector (1, 2).
        let s = saturated_basis(&m(&[&[2, 4, 0]]), 3);
        assert_eq!(s.len(), 1);
        assert_eq!(gcd_all(&s[0]), big(1));
        assert_eq!(rank(&[s[0].clone(), big_row(&[1, 2, 0])]), 1);
    }

    #[test]
    fn left_solve() {
        let b = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let y = solve_left(&b, &big_row(&[2, 3, 5])).unwrap();
        assert_eq!(y, vec![BigRational::from(big(2)), BigRational::from(big(3))]);
        assert!(solve_left(&b, &big_row(&[1, 1, 1])).is_none());
    }
}
