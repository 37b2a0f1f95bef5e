//! Dense exact linear algebra over Q.
//!
//! Rank and kernel computations clear denominators row by row and run
//! fraction-free (Bareiss) elimination on integers; every intermediate entry
//! is a minor of the input, so growth stays polynomial.
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn from_columns(cols: &[Vec<Rat>], rows: usize) -> Self {
        Self::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).fold(Rat::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Each row rescaled by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut a = self.integer_rows();
        bareiss_forward(&mut a, self.cols).len()
    }

    pub fn determinant(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rat::one();
        }
        let mut denom = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                denom *= &l;
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                a.swap(p, c);
                sign = -sign;
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let v = (&a[c][c] * &a[i][j] - &a[i][c] * &a[c][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[c][c].clone();
        }
        Rat::new(sign * &a[n - 1][n - 1], denom)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.integer_rows();
        let (pivots, scale) = bareiss_jordan(&mut a, self.cols);
        let mut out = Matrix::zeros(self.rows, self.cols);
        for (i, _) in pivots.iter().enumerate() {
            for j in 0..self.cols {
                if !a[i][j].is_zero() {
                    out.set(i, j, Rat::new(a[i][j].clone(), scale.clone()));
                }
            }
        }
        (out, pivots)
    }

    /// Basis of `{x : self·x = 0}`. Each basis vector has a 1 in its own free
    /// column and 0 in every other free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    /// Free (non-pivot) columns of the echelon form, matching `nullspace` order.
    pub fn free_columns(&self) -> Vec<usize> {
        let (_, pivots) = self.rref();
        (0..self.cols).filter(|c| !pivots.contains(c)).collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { Rat::one() } else { Rat::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(p, c);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in c..2 * n {
                        let t = &f * &a[c][j];
                        a[i][j] -= t;
                    }
                }
            }
        }
        Some(Matrix::from_fn(n, n, |r, c| a[r][n + c].clone()))
    }
}

/// Forward fraction-free elimination; returns pivot columns.
fn bareiss_forward(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..m {
            if a[i][c].is_zero() {
                for j in c + 1..cols {
                    if !a[i][j].is_zero() {
                        a[i][j] = (&a[r][c] * &a[i][j]) / &prev;
                    }
                }
            } else {
                for j in c + 1..cols {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = if v.is_zero() { v } else { v / &prev };
                }
                a[i][c] = BigInt::zero();
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Fraction-free Gauss-Jordan. On return the first `pivots.len()` rows hold the
/// reduced row echelon form multiplied by the returned common scale.
fn bareiss_jordan(a: &mut [Vec<BigInt>], cols: usize) -> (Vec<usize>, BigInt) {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let (head, tail) = a.split_at_mut(r);
        let (pivot_row, below) = tail.split_first_mut().expect("pivot row");
        let piv = pivot_row[c].clone();
        for row in head.iter_mut().chain(below.iter_mut()) {
            let f = std::mem::take(&mut row[c]);
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let mut v = &piv * &row[j];
                if !f.is_zero() && !pivot_row[j].is_zero() {
                    v -= &f * &pivot_row[j];
                }
                row[j] = if v.is_zero() { v } else { v / &prev };
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    // Earlier pivot rows were rescaled along the way; normalise signs so the
    // common scale is positive.
    let scale = prev;
    let k = pivots.len();
    if scale.is_negative() {
        for row in a.iter_mut().take(k) {
            for x in row.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        return (pivots, -scale);
    }
    (pivots, scale)
}

/// Inertia `(positive, negative, zero)` of a symmetric rational matrix,
/// computed by exact congruence diagonalisation.
pub fn inertia(m: &Matrix) -> (usize, usize, usize) {
    assert!(m.is_symmetric(), "inertia requires a symmetric matrix");
    let mut a: Vec<Vec<Rat>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    inertia_in_place(&mut a)
}

pub(crate) fn inertia_in_place(a: &mut Vec<Vec<Rat>>) -> (usize, usize, usize) {
    let (mut pos, mut neg) = (0, 0);
    let mut n = a.len();
    loop {
        if n == 0 {
            return (pos, neg, 0);
        }
        // bring a nonzero diagonal entry to position 0
        let pivot = match (0..n).find(|&i| !a[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let Some((i, j)) = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero())
                else {
                    return (pos, neg, n);
                };
                // e_i <- e_i + e_j makes the (i,i) entry 2·a_ij
                for c in 0..n {
                    let v = &a[i][c] + &a[j][c];
                    a[i][c] = v;
                }
                for r in 0..n {
                    let v = &a[r][i] + &a[r][j];
                    a[r][i] = v;
                }
                i
            }
        };
        a.swap(0, pivot);
        for row in a.iter_mut() {
            row.swap(0, pivot);
        }
        let d = a[0][0].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        // Schur complement
        let first: Vec<Rat> = a[0].clone();
        let mut next: Vec<Vec<Rat>> = Vec::with_capacity(n - 1);
        for i in 1..n {
            let fi = &first[i] / &d;
            let row: Vec<Rat> = (1..n)
                .map(|j| {
                    if first[j].is_zero() || fi.is_zero() {
                        a[i][j].clone()
                    } else {
                        &a[i][j] - &(&fi * &first[j])
                    }
                })
                .collect();
            next.push(row);
        }
        *a = next;
        n -= 1;
    }
}

/// Plain rational Gauss-Jordan, kept as an independent route for tests.
#[cfg(test)]
pub(crate) fn rref_rational(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a: Vec<Vec<Rat>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.rows() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..m.cols() {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (Matrix::from_rows(a), pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = Matrix> {
        (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| sized_matrix(r, c))
    }

    fn square_matrix(max_n: usize) -> impl Strategy<Value = Matrix> {
        (1..=max_n).prop_flat_map(|n| sized_matrix(n, n))
    }

    fn sized_matrix(r: usize, c: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec((-4i64..=4, 1i64..=3), r * c).prop_map(move |v| {
            // sparsify so rank deficiency is common
            Matrix::from_fn(r, c, |i, j| {
                let (n, d) = v[i * c + j];
                if n.abs() > 2 {
                    Rat::zero()
                } else {
                    ratio(n, d)
                }
            })
        })
    }

    proptest! {
        #[test]
        fn fraction_free_rref_matches_rational(m in small_matrix(7, 8)) {
            let (a, pa) = m.rref();
            let (b, pb) = rref_rational(&m);
            prop_assert_eq!(pa, pb);
            prop_assert_eq!(a, b);
            prop_assert_eq!(m.rank(), m.rref().1.len());
        }

        #[test]
        fn nullspace_vectors_are_annihilated(m in small_matrix(6, 8)) {
            let ns = m.nullspace();
            prop_assert_eq!(ns.len() + m.rank(), m.cols());
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn inverse_and_determinant_agree(m in square_matrix(5)) {
            let det = m.determinant();
            match m.inverse() {
                Some(inv) => {
                    prop_assert!(!det.is_zero());
                    prop_assert_eq!(m.mul(&inv), Matrix::identity(m.rows()));
                    prop_assert_eq!(inv.determinant() * det, Rat::one());
                }
                None => prop_assert!(det.is_zero()),
            }
        }
    }

    #[test]
    fn determinant_small_cases() {
        let m = Matrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.determinant(), rat(-1));
        let m = Matrix::from_i64(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 4]]);
        assert_eq!(m.determinant(), rat(24));
        let m = Matrix::from_rows(vec![vec![ratio(1, 2), rat(1)], vec![rat(1), ratio(1, 3)]]);
        assert_eq!(m.determinant(), ratio(1, 6) - rat(1));
    }

    #[test]
    fn inertia_of_known_forms() {
        // hyperbolic plane has no diagonal pivots
        let h = Matrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(inertia(&h), (1, 1, 0));
        let d = Matrix::from_i64(&[vec![2, 0, 0], vec![0, -1, 0], vec![0, 0, 0]]);
        assert_eq!(inertia(&d), (1, 1, 1));
        let g = Matrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(inertia(&g), (1, 0, 1));
    }

    proptest! {
        #[test]
        fn inertia_is_congruence_invariant(
            diag in proptest::collection::vec(-2i64..=2, 1..6),
            seed in proptest::collection::vec(-3i64..=3, 36),
        ) {
            let n = diag.len();
            let d = Matrix::from_fn(n, n, |i, j| if i == j { rat(diag[i]) } else { Rat::zero() });
            let p = Matrix::from_fn(n, n, |i, j| rat(seed[i * 6 + j]));
            prop_assume!(!p.determinant().is_zero());
            let s = p.transpose().mul(&d).mul(&p);
            let expect = (
                diag.iter().filter(|&&x| x > 0).count(),
                diag.iter().filter(|&&x| x < 0).count(),
                diag.iter().filter(|&&x| x == 0).count(),
            );
            prop_assert_eq!(inertia(&s), expect);
        }
    }
}
