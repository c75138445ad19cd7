//! Dense integer linear algebra over `BigInt`: Hermite normal form, integer
//! kernels, saturation and determinants. Matrices are row-major `Vec<Vec<BigInt>>`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Replace rows `i < j` by a unimodular combination so that `m[j][col]` becomes zero
/// and `m[i][col]` becomes the gcd of the two entries.
fn combine_rows(m: &mut [Vec<BigInt>], i: usize, j: usize, col: usize) {
    let a = m[i][col].clone();
    let b = m[j][col].clone();
    if b.is_zero() {
        return;
    }
    let eg = a.extended_gcd(&b);
    let (g, x, y) = (eg.gcd, eg.x, eg.y);
    let a_g = &a / &g;
    let b_g = &b / &g;
    let width = m[i].len();
    for k in 0..width {
        let ri = m[i][k].clone();
        let rj = m[j][k].clone();
        m[i][k] = &x * &ri + &y * &rj;
        m[j][k] = &a_g * &rj - &b_g * &ri;
    }
}

/// Row-echelonize `m` in place, choosing pivots only among the first `pivot_cols`
/// columns. Returns the number of pivot rows; rows past it are zero in the pivot
/// columns. With `reduce`, pivots are made positive and entries above them are
/// reduced into `[0, pivot)`.
fn echelonize(m: &mut [Vec<BigInt>], pivot_cols: usize, reduce: bool) -> usize {
    let nrows = m.len();
    let mut r = 0;
    for col in 0..pivot_cols {
        if r == nrows {
            break;
        }
        for i in (r + 1)..nrows {
            combine_rows(m, r, i, col);
        }
        if m[r][col].is_zero() {
            continue;
        }
        if reduce {
            if m[r][col].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot = m[r][col].clone();
            for i in 0..r {
                let q = m[i][col].div_floor(&pivot);
                if !q.is_zero() {
                    let (head, tail) = m.split_at_mut(r);
                    for (x, y) in head[i].iter_mut().zip(tail[0].iter()) {
                        *x -= &q * y;
                    }
                }
            }
        }
        r += 1;
    }
    r
}

/// Row Hermite normal form of the lattice spanned by `rows`: positive pivots,
/// entries above each pivot in `[0, pivot)`, zero rows dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> IntMatrix {
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    let n = first.len();
    let mut m = rows.to_vec();
    let r = echelonize(&mut m, n, true);
    m.truncate(r);
    m
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    hermite_normal_form(rows).len()
}

/// Basis (in Hermite normal form) of `{x in Z^ncols : a·x = 0}`. The result is
/// saturated in `Z^ncols` since it is read off a unimodular transform.
pub fn integer_kernel(a: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let k = a.len();
    // rows of [a^T | I]
    let mut aug: IntMatrix = (0..ncols)
        .map(|j| {
            let mut row: Vec<BigInt> = a.iter().map(|r| r[j].clone()).collect();
            row.extend((0..ncols).map(|t| if t == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let r = echelonize(&mut aug, k, false);
    let kernel: IntMatrix = aug[r..].iter().map(|row| row[k..].to_vec()).collect();
    hermite_normal_form(&kernel)
}

/// Saturation `(Q·rows) ∩ Z^ncols` of an integer row set, in Hermite normal form.
pub fn saturate(rows: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let annihilator = integer_kernel(rows, ncols);
    integer_kernel(&annihilator, ncols)
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// gcd of all maximal minors of a full-row-rank `rows` (1 iff the rows span a
/// saturated sublattice). Brute force over column subsets; intended for small ranks.
pub fn maximal_minor_gcd(rows: &[Vec<BigInt>]) -> BigInt {
    let k = rows.len();
    if k == 0 {
        return BigInt::one();
    }
    let n = rows[0].len();
    let mut g = BigInt::zero();
    let mut cols: Vec<usize> = (0..k).collect();
    loop {
        let minor: IntMatrix = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        g = g.gcd(&determinant(&minor));
        // next k-subset of 0..n in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return g;
            }
            i -= 1;
            if cols[i] < n - k + i {
                break;
            }
        }
        cols[i] += 1;
        for j in (i + 1)..k {
            cols[j] = cols[j - 1] + 1;
        }
    }
}

/// Gram matrix `basis · gram · basisᵀ`.
pub fn restricted_gram(gram: &[Vec<BigInt>], basis: &[Vec<BigInt>]) -> IntMatrix {
    let images: IntMatrix = basis.iter().map(|b| mat_vec(gram, b)).collect();
    basis
        .iter()
        .map(|x| images.iter().map(|y| dot(x, y)).collect())
        .collect()
}

pub fn dot(x: &[BigInt], y: &[BigInt]) -> BigInt {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn mat_vec(m: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|row| dot(row, x)).collect()
}
