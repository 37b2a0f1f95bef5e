//! Structure constants and the Killing form of a stabilizer algebra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::invariants::StabAlgebra;
use crate::linalg::{inertia, Matrix, Rat};

/// Inertia `(p, q, z)` of a symmetric bilinear form: positive, negative and
/// null directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl Signature {
    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.null
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.null)
    }
}

/// Adjoint matrices `ad_{B_a}` in the algebra basis; `ad[a][(c, b)]` is the
/// `c`-th coordinate of `[B_a, B_b]`.
pub fn adjoint_matrices(s: &StabAlgebra) -> Vec<Matrix> {
    let d = s.dim();
    let basis: Vec<&Matrix> = s.basis().iter().map(|b| b.matrix()).collect();
    (0..d)
        .map(|a| {
            let cols: Vec<Vec<Rat>> = (0..d)
                .map(|b| {
                    let bracket = basis[a].mul(basis[b]).sub(&basis[b].mul(basis[a]));
                    s.matrix_coordinates(&bracket)
                })
                .collect();
            Matrix::from_columns(&cols, d)
        })
        .collect()
}

/// Integer Killing data. With `B_a = V_a / t_a` (`V_a` integral) and
/// `T = lcm(t)`, returns `G` with `G(a, b) = T²·t_a·t_b·K(a, b)`. `G` is
/// congruent to a positive multiple of `K`, so it has the same inertia.
fn integral_killing(s: &StabAlgebra) -> (Vec<Vec<BigInt>>, Vec<BigInt>, BigInt) {
    let d = s.dim();
    let n = s.n();
    let t: Vec<BigInt> = s
        .basis()
        .iter()
        .map(|b| {
            b.matrix()
                .entries()
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
        })
        .collect();
    let v: Vec<Vec<BigInt>> = s
        .basis()
        .iter()
        .zip(&t)
        .map(|(b, ta)| {
            b.matrix()
                .entries()
                .iter()
                .map(|x| x.numer() * (ta / x.denom()))
                .collect()
        })
        .collect();
    let big_t = t.iter().fold(BigInt::one(), |acc, x| acc.lcm(x));
    let scale: Vec<BigInt> = t.iter().map(|x| &big_t / x).collect();
    let pivots = s.pivots();
    // [V_a, V_b] at the pivot of B_c is t_c·(coordinate) scaled by t_a·t_b
    let bracket_at = |a: &[BigInt], b: &[BigInt], p: usize| -> BigInt {
        let (i, j) = (p / n, p % n);
        let mut acc = BigInt::zero();
        for l in 0..n {
            let (x, y) = (&a[i * n + l], &b[l * n + j]);
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
            let (x, y) = (&b[i * n + l], &a[l * n + j]);
            if !x.is_zero() && !y.is_zero() {
                acc -= x * y;
            }
        }
        acc
    };
    // Z_a[c][b] = [V_a, V_b]_{p_c} · T / t_c, so tr(Z_a Z_a') = T²·t_a·t_a'·K(a, a')
    let z: Vec<Vec<Vec<BigInt>>> = (0..d)
        .map(|a| {
            (0..d)
                .map(|c| {
                    (0..d)
                        .map(|b| bracket_at(&v[a], &v[b], pivots[c]) * &scale[c])
                        .collect()
                })
                .collect()
        })
        .collect();
    (integer_trace_products(&z), t, big_t)
}

/// Gram matrix `K(a, b) = tr(ad_a ad_b)` of the Killing form.
pub fn killing_matrix(s: &StabAlgebra) -> Matrix {
    let (gram, t, big_t) = integral_killing(s);
    let t2 = &big_t * &big_t;
    let d = s.dim();
    Matrix::from_fn(d, d, |a, b| {
        Rat::new(gram[a][b].clone(), &t2 * &t[a] * &t[b])
    })
}

fn integer_trace_products(ads: &[Vec<Vec<BigInt>>]) -> Vec<Vec<BigInt>> {
    let d = ads.len();
    let sparse: Vec<Vec<(usize, usize)>> = ads
        .iter()
        .map(|m| {
            (0..d)
                .flat_map(|i| (0..d).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .collect()
        })
        .collect();
    let small: Option<Vec<Vec<Vec<i64>>>> = ads
        .iter()
        .map(|m| {
            m.iter()
                .map(|row| {
                    row.iter()
                        .map(|x| x.to_i64().filter(|v| v.abs() < 1 << 40))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut gram = vec![vec![BigInt::zero(); d]; d];
    for a in 0..d {
        for b in a..d {
            let v = match &small {
                Some(s) => BigInt::from(
                    sparse[a]
                        .iter()
                        .map(|&(i, j)| s[a][i][j] as i128 * s[b][j][i] as i128)
                        .sum::<i128>(),
                ),
                None => sparse[a]
                    .iter()
                    .map(|&(i, j)| &ads[a][i][j] * &ads[b][j][i])
                    .sum(),
            };
            gram[b][a] = v.clone();
            gram[a][b] = v;
        }
    }
    gram
}

/// Exact inertia of the Killing form restricted to the algebra.
pub fn killing_signature(s: &StabAlgebra) -> Signature {
    if s.dim() == 0 {
        return Signature {
            positive: 0,
            negative: 0,
            null: 0,
        };
    }
    let (gram, _, _) = integral_killing(s);
    let d = s.dim();
    let m = Matrix::from_fn(d, d, |a, b| Rat::from_integer(gram[a][b].clone()));
    let (positive, negative, null) = inertia(&m);
    Signature {
        positive,
        negative,
        null,
    }
}
