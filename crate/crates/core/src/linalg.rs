//! Dense exact linear algebra over `Q` (and generic fields for group elements).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{primitive_integer, Field, Q};

/// Dense row-major matrix over a field.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![F::fzero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::fone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<F> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged matrix rows");
        Mat { rows: r, cols: c, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out: Mat<F> = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_fzero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_fzero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].fadd(&a.fmul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::fzero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_fzero() && !x.is_fzero() {
                        acc = acc.fadd(&a.fmul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &F) -> Mat<F> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.fmul(c)).collect(),
        }
    }

    pub fn add(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.fadd(b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_fzero())
    }

    /// `exp(c N)` for a nilpotent `N`, as a finite sum.
    pub fn exp_nilpotent(n: &Mat<F>, c: &F) -> Mat<F> {
        let dim = n.rows;
        let mut out = Mat::identity(dim);
        let mut term = Mat::identity(dim);
        for k in 1..=dim {
            term = term.mul(n).scale(&c.fdiv(&F::from_q(&Q::from_integer(BigInt::from(k)))));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        out
    }
}

impl Mat<Q> {
    pub fn transpose(&self) -> Mat<Q> {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }
}

/// Reduced row echelon form; returns pivot columns.
pub fn rref(rows: &mut [Vec<Q>]) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : A x = 0}` where `A` is given by rows of length `ncols`.
pub fn kernel(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `A x = b`; returns one solution (free variables zero) or `None`.
pub fn solve(a: &[Vec<Q>], b: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][ncols].clone();
    }
    Some(x)
}

pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = Q::one() / &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let v = &f * &a[c][j];
                a[i][j] -= v;
            }
        }
    }
    det
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn to_q_matrix(m: &[Vec<i64>]) -> Vec<Vec<Q>> {
    m.iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Z-basis of the lattice `{x in Z^n : E x = 0}` for rational equation rows `E`.
///
/// Column-style unimodular reduction: `E U = [H | 0]`, the trailing columns
/// of `U` span the integer kernel.
pub fn integer_kernel_basis(eqs: &[Vec<Q>], n: usize) -> Vec<Vec<BigInt>> {
    let rows: Vec<Vec<BigInt>> = eqs
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| primitive_integer(r))
        .collect();
    let mut a = rows;
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    // Columns stored as u[*][col]; a[row][col].
    let mut pivot_col = 0;
    for r in 0..a.len() {
        if pivot_col >= n {
            break;
        }
        loop {
            // gather nonzero entries in row r among columns >= pivot_col
            let nz: Vec<usize> = (pivot_col..n).filter(|&c| !a[r][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            // pick smallest absolute value as pivot
            let &best = nz.iter().min_by_key(|&&c| a[r][c].abs()).unwrap();
            swap_cols(&mut a, &mut u, pivot_col, best);
            let mut done = true;
            for c in pivot_col + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].div_floor(&a[r][pivot_col]);
                col_axpy(&mut a, &mut u, c, pivot_col, &f);
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !a[r][pivot_col].is_zero() {
            pivot_col += 1;
        }
    }
    (pivot_col..n)
        .map(|c| (0..n).map(|i| u[i][c].clone()).collect())
        .collect()
}

fn swap_cols(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    for row in u.iter_mut() {
        row.swap(i, j);
    }
}

/// col_c -= f * col_p
fn col_axpy(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], c: usize, p: usize, f: &BigInt) {
    for row in a.iter_mut() {
        let v = &row[p] * f;
        row[c] -= v;
    }
    for row in u.iter_mut() {
        let v = &row[p] * f;
        row[c] -= v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn kernel_and_rank() {
        let a = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        assert_eq!(rank(&a), 1);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let a = to_q_matrix(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(determinant(&a), q(3));
        let inv = inverse(&a).unwrap();
        let prod: Vec<Vec<Q>> = (0..2)
            .map(|i| (0..2).map(|j| (0..2).map(|k| &a[i][k] * &inv[k][j]).sum()).collect())
            .collect();
        assert_eq!(prod, to_q_matrix(&[vec![1, 0], vec![0, 1]]));
        assert!(inverse(&to_q_matrix(&[vec![1, 2], vec![2, 4]])).is_none());
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // x + y + z = 0 in Z^3: basis of a rank-2 saturated lattice.
        let b = integer_kernel_basis(&[vec![q(1), q(1), q(1)]], 3);
        assert_eq!(b.len(), 2);
        let m: Vec<Vec<Q>> = b
            .iter()
            .map(|v| v.iter().map(|x| Q::from_integer(x.clone())).collect())
            .collect();
        // Gram-like check: the 2x2 minors have gcd 1 (saturation).
        let minors = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| {
                (&m[0][i] * &m[1][j] - &m[0][j] * &m[1][i]).to_integer()
            })
            .fold(BigInt::zero(), |g, x| g.gcd(&x));
        assert_eq!(minors, BigInt::one());
        // 2x - 4y = 0: kernel generated by (2, 1).
        let b = integer_kernel_basis(&[vec![q(2), q(-4)]], 2);
        assert_eq!(b.len(), 1);
        let v = &b[0];
        assert!(v == &vec![BigInt::from(2), BigInt::from(1)] || v == &vec![BigInt::from(-2), BigInt::from(-1)]);
    }

    #[test]
    fn nilpotent_exponential() {
        let n = Mat::from_rows(vec![vec![q(0), q(0)], vec![q(1), q(0)]]);
        let e = Mat::exp_nilpotent(&n, &q(5));
        assert_eq!(e, Mat::from_rows(vec![vec![q(1), q(0)], vec![q(5), q(1)]]));
    }
}
