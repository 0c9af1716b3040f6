//! Small dense complex linear algebra.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Solves the square system `a·v = b` with partial pivoting.
pub(crate) fn solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() == 0.0 || !a[piv][col].norm().is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == ZERO {
                continue;
            }
            for k in col..n {
                let t = a[col][k];
                a[r][k] -= f * t;
            }
            let t = b[col];
            b[r] -= f * t;
        }
    }
    let mut v = vec![ZERO; n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for k in r + 1..n {
            acc -= a[r][k] * v[k];
        }
        v[r] = acc / a[r][r];
    }
    Some(v)
}

/// Rank and a nullspace basis of `a` (rows × cols) by Gaussian elimination
/// with full pivoting. Pivots below `rel_tol` times the largest entry count
/// as zero. Also returns every pivot magnitude relative to that entry, the
/// accepted ones first, then the largest rejected one if elimination stopped.
pub(crate) fn nullspace(mut a: Vec<Vec<Complex64>>, cols: usize, rel_tol: f64) -> (usize, Vec<Vec<Complex64>>, Vec<f64>) {
    let rows = a.len();
    let scale = a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    let mut pivots = Vec::new();
    while rank < rows.min(cols) {
        let mut best = (rank, rank, -1.0);
        for (i, row) in a.iter().enumerate().skip(rank) {
            for (j, z) in row.iter().enumerate().skip(rank) {
                if z.norm() > best.2 {
                    best = (i, j, z.norm());
                }
            }
        }
        pivots.push(best.2 / scale.max(f64::MIN_POSITIVE));
        if best.2 <= rel_tol * scale {
            break;
        }
        a.swap(rank, best.0);
        for row in a.iter_mut() {
            row.swap(rank, best.1);
        }
        perm.swap(rank, best.1);
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let f = a[r][rank] / a[rank][rank];
            if f == ZERO {
                continue;
            }
            for k in rank..cols {
                let t = a[rank][k];
                a[r][k] -= f * t;
            }
        }
        rank += 1;
    }
    // Reduced form: pivot columns 0..rank, free columns rank..cols.
    let mut basis = Vec::new();
    for free in rank..cols {
        let mut v = vec![ZERO; cols];
        v[perm[free]] = Complex64::new(1.0, 0.0);
        for r in 0..rank {
            v[perm[r]] = -a[r][free] / a[r][r];
        }
        basis.push(v);
    }
    (rank, basis, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_small_system() {
        let a = vec![vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(0.0, -1.0), c(3.0, 0.0)]];
        let x = vec![c(1.0, -2.0), c(0.5, 0.25)];
        let b: Vec<Complex64> = a.iter().map(|r| r[0] * x[0] + r[1] * x[1]).collect();
        let v = solve(a, b).unwrap();
        assert!((v[0] - x[0]).norm() < 1e-14 && (v[1] - x[1]).norm() < 1e-14);
    }

    #[test]
    fn finds_one_dimensional_nullspace() {
        // Rows orthogonal to (1, 2i, -1).
        let a = vec![
            vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 1.0), c(-2.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)],
        ];
        let (rank, basis, _) = nullspace(a.clone(), 3, 1e-12);
        assert_eq!(rank, 2);
        let v = &basis[0];
        for row in &a {
            let s: Complex64 = row.iter().zip(v).map(|(p, q)| p * q).sum();
            assert!(s.norm() < 1e-14);
        }
    }
}
