//! Exact integer and rational linear algebra: Hermite normal forms, kernels,
//! determinants, inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

/// Row-style Hermite normal form with a unimodular transform.
///
/// Returns `(H, U)` with `U * A = H`. `H` is in row echelon form with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`;
/// zero rows are at the bottom.
pub fn hnf_with_transform(a: &[Vec<BigInt>]) -> (IntMatrix, IntMatrix) {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut h: IntMatrix = a.to_vec();
    let mut u: IntMatrix = identity_int(m);
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row == m {
            break;
        }
        for i in (pivot_row + 1)..m {
            if h[i][col].is_zero() {
                continue;
            }
            if h[pivot_row][col].is_zero() {
                h.swap(pivot_row, i);
                u.swap(pivot_row, i);
                continue;
            }
            let a0 = h[pivot_row][col].clone();
            let b0 = h[i][col].clone();
            let eg = a0.extended_gcd(&b0);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let pa = &a0 / &g;
            let pb = &b0 / &g;
            combine_rows(&mut h, pivot_row, i, &x, &y, &pb, &pa);
            combine_rows(&mut u, pivot_row, i, &x, &y, &pb, &pa);
        }
        if h[pivot_row][col].is_zero() {
            continue;
        }
        if h[pivot_row][col].is_negative() {
            negate_row(&mut h[pivot_row]);
            negate_row(&mut u[pivot_row]);
        }
        let piv = h[pivot_row][col].clone();
        for r in 0..pivot_row {
            let q = h[r][col].div_floor(&piv);
            if !q.is_zero() {
                sub_multiple(&mut h, r, pivot_row, &q);
                sub_multiple(&mut u, r, pivot_row, &q);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Replaces rows `(p, i)` by `(x R_p + y R_i, -pb R_p + pa R_i)`.
fn combine_rows(mat: &mut IntMatrix, p: usize, i: usize, x: &BigInt, y: &BigInt, pb: &BigInt, pa: &BigInt) {
    let rp = mat[p].clone();
    let ri = mat[i].clone();
    for k in 0..rp.len() {
        mat[p][k] = x * &rp[k] + y * &ri[k];
        mat[i][k] = pa * &ri[k] - pb * &rp[k];
    }
}

fn negate_row(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -x.clone();
    }
}

fn sub_multiple(mat: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    let s = mat[src].clone();
    for (t, v) in mat[target].iter_mut().zip(s.iter()) {
        *t -= q * v;
    }
}

/// Nonzero rows of the Hermite normal form.
pub fn hnf(a: &[Vec<BigInt>]) -> IntMatrix {
    let (h, _) = hnf_with_transform(a);
    h.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Basis of the integer left kernel `{x : x A = 0}`.
pub fn left_kernel(a: &[Vec<BigInt>]) -> IntMatrix {
    let (h, u) = hnf_with_transform(a);
    h.iter()
        .zip(u)
        .filter(|(row, _)| row.iter().all(|x| x.is_zero()))
        .map(|(_, t)| t)
        .collect()
}

pub fn identity_int(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn identity_rat(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn to_rat(a: &[Vec<BigInt>]) -> RatMatrix {
    a.iter().map(|r| r.iter().cloned().map(BigRational::from_integer).collect()).collect()
}

pub fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> RatMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigRational::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn vec_mat(v: &[BigRational], b: &[Vec<BigRational>]) -> Vec<BigRational> {
    let cols = b.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| v.iter().zip(b).fold(BigRational::zero(), |acc, (x, row)| acc + x * &row[j]))
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Reduces to row echelon form in place; returns `(rank, det sign/scale)`.
fn echelon(m: &mut RatMatrix) -> (usize, BigRational) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut det = BigRational::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            det = BigRational::zero();
            continue;
        };
        if p != r {
            m.swap(p, r);
            det = -det;
        }
        let piv = m[r][c].clone();
        det *= &piv;
        for i in (r + 1)..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            for k in c..cols {
                let v = &f * &m[r][k];
                m[i][k] -= v;
            }
        }
        r += 1;
    }
    if r < rows {
        det = BigRational::zero();
    }
    (r, det)
}

pub fn rank(a: &[Vec<BigRational>]) -> usize {
    let mut m = a.to_vec();
    echelon(&mut m).0
}

pub fn det(a: &[Vec<BigRational>]) -> BigRational {
    assert_eq!(a.len(), a.first().map_or(0, |r| r.len()), "det of non-square matrix");
    if a.is_empty() {
        return BigRational::one();
    }
    let mut m = a.to_vec();
    echelon(&mut m).1
}

pub fn det_int(a: &[Vec<BigInt>]) -> BigInt {
    det(&to_rat(a)).to_integer()
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn inverse(a: &[Vec<BigRational>]) -> Option<RatMatrix> {
    let n = a.len();
    let mut m: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for k in 0..2 * n {
                let v = &f * &m[c][k];
                m[i][k] -= v;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `x A = b` for a square invertible `A`.
pub fn solve_left(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let inv = inverse(a)?;
    Some(vec_mat(b, &inv))
}

/// Dimension of the null space of `A - lambda I`.
pub fn nullity_shifted(a: &[Vec<BigRational>], lambda: &BigRational) -> usize {
    let n = a.len();
    let shifted: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| if i == j { x - lambda } else { x.clone() })
                .collect()
        })
        .collect();
    n - rank(&shifted)
}

/// Pivots of the symmetric LDL^T factorisation; a symmetric matrix is
/// positive semi-definite iff this succeeds with non-negative pivots.
pub fn is_psd_symmetric(a: &[Vec<BigRational>]) -> bool {
    // Recursive Schur complement with zero-pivot handling.
    let n = a.len();
    if n == 0 {
        return true;
    }
    let mut m = a.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // Pick a nonzero diagonal pivot if any.
        let Some(pos) = active.iter().position(|&i| !m[i][i].is_zero()) else {
            // All diagonal entries zero: PSD iff the remaining block is zero.
            return active.iter().all(|&i| active.iter().all(|&j| m[i][j].is_zero()));
        };
        let p = active[pos];
        let piv = m[p][p].clone();
        if piv.is_negative() {
            return false;
        }
        active.remove(pos);
        for &i in &active {
            for &j in &active {
                let v = &m[i][p] * &m[p][j] / &piv;
                m[i][j] -= v;
            }
        }
    }
    true
}
