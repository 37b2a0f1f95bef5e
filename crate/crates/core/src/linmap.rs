use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rat, Matrix, Rat};

/// An n×n rational matrix with its determinant cached. Used both for group
/// elements `g ∈ GL(n)` and for Lie algebra elements `A ∈ gl(n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinMap {
    matrix: Matrix,
    det: Rat,
}

impl LinMap {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Invalid(format!(
                "linear map must be square, got {}×{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let det = matrix.determinant();
        Ok(LinMap { matrix, det })
    }

    pub fn identity(n: usize) -> Self {
        LinMap {
            matrix: Matrix::identity(n),
            det: Rat::one(),
        }
    }

    pub fn scalar(n: usize, c: Rat) -> Self {
        let det = (0..n).fold(Rat::one(), |acc, _| acc * &c);
        LinMap {
            matrix: Matrix::identity(n).scale(&c),
            det,
        }
    }

    pub fn diagonal(entries: &[Rat]) -> Self {
        let n = entries.len();
        let det = entries.iter().fold(Rat::one(), |acc, x| acc * x);
        let matrix = Matrix::from_fn(n, n, |r, c| {
            if r == c {
                entries[r].clone()
            } else {
                Rat::zero()
            }
        });
        LinMap { matrix, det }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(Matrix::from_i64(rows))
    }

    /// Elementary matrix `E_ab` (1-based row `a`, column `b`).
    pub fn elementary(n: usize, a: usize, b: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        m.set(a - 1, b - 1, Rat::one());
        // det is 1 only for n = 1 and a = b; compute rather than special-case
        LinMap::new(m).expect("square")
    }

    /// Permutation matrix sending `e_i` to `e_{perm[i-1]}` (1-based images).
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        let mut m = Matrix::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            if p == 0 || p > n || seen[p - 1] {
                return Err(Error::Invalid(format!("not a permutation: {perm:?}")));
            }
            seen[p - 1] = true;
            m.set(p - 1, i, Rat::one());
        }
        LinMap::new(m)
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn det(&self) -> &Rat {
        &self.det
    }

    pub fn is_invertible(&self) -> bool {
        !self.det.is_zero()
    }

    /// Zero-based entry.
    pub fn entry(&self, r: usize, c: usize) -> &Rat {
        self.matrix.get(r, c)
    }

    pub fn inverse(&self) -> Result<LinMap> {
        let inv = self.matrix.inverse().ok_or(Error::Singular)?;
        Ok(LinMap {
            matrix: inv,
            det: self.det.recip(),
        })
    }

    /// Product `self · other`.
    pub fn compose(&self, other: &LinMap) -> LinMap {
        LinMap {
            matrix: self.matrix.mul(&other.matrix),
            det: &self.det * &other.det,
        }
    }

    pub fn transpose(&self) -> LinMap {
        LinMap {
            matrix: self.matrix.transpose(),
            det: self.det.clone(),
        }
    }

    pub fn add(&self, other: &LinMap) -> LinMap {
        LinMap::new(self.matrix.add(&other.matrix)).expect("square")
    }

    pub fn sub(&self, other: &LinMap) -> LinMap {
        LinMap::new(self.matrix.sub(&other.matrix)).expect("square")
    }

    pub fn scale(&self, s: &Rat) -> LinMap {
        LinMap::new(self.matrix.scale(s)).expect("square")
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &LinMap) -> LinMap {
        let ab = self.matrix.mul(&other.matrix);
        let ba = other.matrix.mul(&self.matrix);
        LinMap::new(ab.sub(&ba)).expect("square")
    }

    pub fn trace(&self) -> Rat {
        self.matrix.trace()
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.n(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n())
            .map(|r| {
                let cells: Vec<String> = self.matrix.row(r).iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "LinMap[{}]", rows.join(", "))
    }
}

/// Convenience used across tests and the CLI: `diag(±1, …)` as rationals.
pub fn diag_i64(entries: &[i64]) -> LinMap {
    LinMap::diagonal(&entries.iter().map(|&x| rat(x)).collect::<Vec<_>>())
}
