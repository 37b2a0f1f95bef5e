//! GL(n)-invariants of a single form: rank and kernel, reduction to the
//! minimal dimension, stabilizer algebra, stability, Martinet length and sign,
//! and explicit group-element witnesses.

use num_traits::{One, Signed, Zero};

use crate::duality::{poincare_inv, VolumeForm};
use crate::error::{Error, Result};
use crate::exterior::{act, act_vectors, Alternating, Form, Polyvector, Variance};
use crate::linalg::{rat, Matrix, Rat};
use crate::linmap::LinMap;
use crate::multi_index::{binomial, Basis, MultiIndex};

/// Matrix of `L_x: e_i ↦ i_{e_i} x`, one column per basis direction.
fn contraction_matrix<V: Variance>(x: &Alternating<V>) -> Result<Matrix> {
    if x.degree() == 0 {
        return Err(Error::Degree("rank is undefined in degree 0".into()));
    }
    let n = x.n();
    let basis = Basis::new(n, x.degree() - 1);
    let columns: Vec<Vec<Rat>> = (1..=n)
        .map(|i| {
            let e = MultiIndex::from_sorted_unchecked([i as u8]);
            x.contract_by_index(&e).to_dense(&basis)
        })
        .collect();
    Ok(Matrix::from_columns(&columns, basis.len()))
}

/// Rank of `L_x`, for forms and polyvectors alike.
pub fn alternating_rank<V: Variance>(x: &Alternating<V>) -> Result<usize> {
    Ok(contraction_matrix(x)?.rank())
}

/// `rk φ = dim im L_φ`.
pub fn rank(phi: &Form) -> Result<usize> {
    alternating_rank(phi)
}

/// Basis of `{v : i_v x = 0}` in the dual space. Each vector has a 1 in its
/// own free coordinate and 0 in the other free coordinates.
pub fn kernel<V: Variance>(x: &Alternating<V>) -> Result<Vec<Alternating<V::Dual>>> {
    let m = contraction_matrix(x)?;
    Ok(m.nullspace()
        .into_iter()
        .map(|v| Alternating::from_dense(x.n(), 1, &v))
        .collect())
}

/// `ker L_φ` as degree-1 polyvectors.
pub fn kernel_vectors(phi: &Form) -> Result<Vec<Polyvector>> {
    kernel(phi)
}

pub fn is_multisymplectic(phi: &Form) -> Result<bool> {
    Ok(rank(phi)? == phi.n())
}

/// A nondegenerate form on R^r together with the data identifying R^r with a
/// complement of `ker L_φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub rank: usize,
    pub reduced: Form,
    /// n×r; columns span the chosen complement of the kernel.
    pub embedding: Matrix,
    /// r×n; left inverse of `embedding` vanishing on the kernel.
    pub projection: Matrix,
}

impl Reduction {
    /// `projection* (reduced)`, which equals the original form.
    pub fn reconstruct(&self) -> Form {
        self.reduced.transform_slots(&self.projection.transpose())
    }
}

pub fn reduce(phi: &Form) -> Result<Reduction> {
    if phi.is_zero() {
        return Err(Error::Invalid(
            "the zero form has an empty reduction (rank 0)".into(),
        ));
    }
    let n = phi.n();
    let m = contraction_matrix(phi)?;
    let kernel = m.nullspace();
    let free = m.free_columns();
    let support: Vec<usize> = (0..n).filter(|c| !free.contains(c)).collect();
    let r = support.len();
    let embedding = Matrix::from_fn(n, r, |i, a| {
        if i == support[a] {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    // full basis [embedding | kernel]
    let full = Matrix::from_fn(n, n, |i, c| {
        if c < r {
            embedding.get(i, c).clone()
        } else {
            kernel[c - r][i].clone()
        }
    });
    let inv = full.inverse().ok_or(Error::Singular)?;
    let projection = Matrix::from_fn(r, n, |a, j| inv.get(a, j).clone());
    let reduced: Form = phi.transform_slots(&embedding.transpose());
    Ok(Reduction {
        rank: r,
        reduced,
        embedding,
        projection,
    })
}

/// Lie subalgebra of gl(n) annihilating a form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabAlgebra {
    n: usize,
    basis: Vec<LinMap>,
    /// Flattened (row-major) matrix positions at which basis element `i` is 1
    /// and every other basis element is 0.
    pivots: Vec<usize>,
}

impl StabAlgebra {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LinMap] {
        &self.basis
    }

    /// Coordinates of an element of the algebra in [`Self::basis`]. The input
    /// must lie in the span; use [`Self::contains`] when unsure.
    pub fn coordinates(&self, a: &LinMap) -> Vec<Rat> {
        self.matrix_coordinates(a.matrix())
    }

    pub(crate) fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub(crate) fn matrix_coordinates(&self, a: &Matrix) -> Vec<Rat> {
        let entries = a.entries();
        self.pivots.iter().map(|&p| entries[p].clone()).collect()
    }

    pub fn contains(&self, a: &LinMap) -> bool {
        let coords = self.coordinates(a);
        let mut rebuilt = Matrix::zeros(self.n, self.n);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                rebuilt = rebuilt.add(&b.matrix().scale(c));
            }
        }
        &rebuilt == a.matrix()
    }
}

/// Matrix of `A ↦ infinitesimal_act(A, φ)` from gl(n) (basis `E_ab`,
/// flattened row-major) to Λᵏ.
fn infinitesimal_matrix(phi: &Form) -> Matrix {
    let n = phi.n();
    let basis = Basis::new(n, phi.degree());
    let mut m = Matrix::zeros(basis.len(), n * n);
    // E_ab sends e^a ↦ −e^b in each slot
    for (idx, c) in phi.terms() {
        for (slot, a) in idx.iter().enumerate() {
            for b in 1..=n {
                if let Some((s, img)) = idx.substitute(slot, b) {
                    let row = basis.index_of(&img).expect("same degree");
                    let col = (a - 1) * n + (b - 1);
                    let v = if s > 0 { -c.clone() } else { c.clone() };
                    let cur = m.get(row, col).clone();
                    m.set(row, col, cur + v);
                }
            }
        }
    }
    m
}

pub fn stabilizer_algebra(phi: &Form) -> StabAlgebra {
    let n = phi.n();
    let m = infinitesimal_matrix(phi);
    let (rref, pivot_cols) = m.rref();
    let free: Vec<usize> = (0..n * n).filter(|c| !pivot_cols.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n * n];
            v[f] = Rat::one();
            for (i, &p) in pivot_cols.iter().enumerate() {
                v[p] = -rref.get(i, f).clone();
            }
            LinMap::new(Matrix::from_fn(n, n, |r, c| v[r * n + c].clone())).expect("square")
        })
        .collect();
    StabAlgebra {
        n,
        basis,
        pivots: free,
    }
}

/// Dimension of the stabilizer algebra only; skips building the basis.
pub fn stabilizer_dim(phi: &Form) -> usize {
    let n = phi.n();
    n * n - infinitesimal_matrix(phi).rank()
}

/// `n² − dim stab(φ)`.
pub fn orbit_dimension(phi: &Form) -> usize {
    infinitesimal_matrix(phi).rank()
}

/// The orbit is open in Λᵏ exactly when its dimension is `C(n, k)`.
pub fn is_stable(phi: &Form) -> bool {
    orbit_dimension(phi) == binomial(phi.n(), phi.degree())
}

/// Martinet invariants of an (n−2)-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthSign {
    /// Half the rank of the bivector `P_Ω⁻¹(φ)`.
    pub length: usize,
    /// `Ω(f₁,…,fₙ)` for a basis in which `P_Ω⁻¹(φ) = f₁∧f₂ + … + f_{n−1}∧fₙ`;
    /// present only when `2·length = n`.
    pub lambda: Option<Rat>,
    /// `sign(λ)^length` when `2·length = n`, `1` otherwise, `0` for φ = 0.
    pub sign: i8,
}

/// Symplectic Gram–Schmidt for a bivector viewed as the alternating form
/// `ω(α, β) = ξ(α, β)` on Rⁿ*. Returns the number of hyperbolic pairs and the
/// new covector basis as rows: `α₁, α₂` (with `ω(α₁,α₂) = 1`), `α₃, α₄`, …,
/// then a basis of the radical.
pub(crate) fn bivector_darboux(xi: &Polyvector) -> (usize, Matrix) {
    assert_eq!(xi.degree(), 2);
    let n = xi.n();
    let mut omega = Matrix::zeros(n, n);
    for (idx, c) in xi.terms() {
        let v = idx.to_vec();
        omega.set(v[0] - 1, v[1] - 1, c.clone());
        omega.set(v[1] - 1, v[0] - 1, -c.clone());
    }
    let form = |a: &[Rat], b: &[Rat]| -> Rat {
        let ob = omega.mul_vec(b);
        a.iter()
            .zip(&ob)
            .filter(|(x, y)| !x.is_zero() && !y.is_zero())
            .fold(Rat::zero(), |acc, (x, y)| acc + x * y)
    };
    let mut pool: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut pairs = 0;
    loop {
        let found = (0..pool.len()).find_map(|i| {
            (0..pool.len())
                .filter(|&j| j != i)
                .find(|&j| !form(&pool[i], &pool[j]).is_zero())
                .map(|j| (i, j))
        });
        let Some((i, j)) = found else { break };
        let (u, v) = {
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            let a = pool.remove(hi);
            let b = pool.remove(lo);
            if i > j {
                (a, b)
            } else {
                (b, a)
            }
        };
        let w = form(&u, &v);
        let v: Vec<Rat> = v.iter().map(|x| x / &w).collect();
        for p in pool.iter_mut() {
            let a = form(p, &v);
            let b = form(p, &u);
            for t in 0..n {
                let val = &p[t] - &a * &u[t] + &b * &v[t];
                p[t] = val;
            }
        }
        rows.push(u);
        rows.push(v);
        pairs += 1;
    }
    rows.extend(pool);
    (pairs, Matrix::from_rows(rows))
}

pub fn length_and_sign(phi: &Form, omega: &VolumeForm) -> Result<LengthSign> {
    let n = phi.n();
    if n < 2 || phi.degree() != n - 2 {
        return Err(Error::Degree(format!(
            "length and sign need an (n−2)-form, got degree {} on R^{}",
            phi.degree(),
            n
        )));
    }
    if phi.is_zero() {
        return Ok(LengthSign {
            length: 0,
            lambda: None,
            sign: 0,
        });
    }
    let xi = poincare_inv(omega, phi)?;
    let (length, basis) = bivector_darboux(&xi);
    if 2 * length < n {
        return Ok(LengthSign {
            length,
            lambda: None,
            sign: 1,
        });
    }
    // Ω = scale·e^{1…n} and α₁∧…∧αₙ = det(rows)·e^{1…n}
    let lambda = omega.scale() / basis.determinant();
    let sign = if lambda.is_positive() || length % 2 == 0 {
        1
    } else {
        -1
    };
    Ok(LengthSign {
        length,
        lambda: Some(lambda),
        sign,
    })
}

/// A diagonalizable one-parameter family `g(t) = B·diag(t^{w₁},…,t^{wₙ})·B⁻¹`
/// in SL(n) with `g(t)·x = t^m·x`. Letting `t → 0` shrinks `x` to 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyWitness {
    pub exponents: Vec<i64>,
    pub contraction_rate: u64,
    /// Change of basis `B`; the identity when the support of `x` is spanned by
    /// coordinate vectors.
    pub basis: LinMap,
}

impl NilpotencyWitness {
    pub fn curve_at(&self, t: &Rat) -> Result<LinMap> {
        let d: Vec<Rat> = self
            .exponents
            .iter()
            .map(|&w| crate::exterior::pow_rat(t, w as i32))
            .collect();
        let inv = self.basis.inverse()?;
        Ok(self.basis.compose(&LinMap::diagonal(&d)).compose(&inv))
    }

    /// Checks `g(t)·x = t^m·x` exactly at `t = 2` and `t = 3`.
    pub fn verify(&self, x: &Polyvector) -> Result<bool> {
        if self.exponents.iter().sum::<i64>() != 0 || self.contraction_rate == 0 {
            return Ok(false);
        }
        for t in [rat(2), rat(3)] {
            let g = self.curve_at(&t)?;
            let factor = crate::exterior::pow_rat(&t, self.contraction_rate as i32);
            if act_vectors(&g, x)? != x.scale(&factor) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn nilpotency_witness_degenerate(x: &Polyvector) -> Result<NilpotencyWitness> {
    if x.is_zero() {
        return Err(Error::NoWitness("the zero polyvector".into()));
    }
    let n = x.n();
    let k = x.degree();
    let r = alternating_rank(x)?;
    if r == n {
        return Err(Error::NoWitness(format!(
            "polyvector has full rank {n} and is non-degenerate"
        )));
    }
    // The support of x is spanned by all contractions i_{e^J} x with |J| = k−1.
    let rows: Vec<Vec<Rat>> = Basis::new(n, k - 1)
        .iter()
        .map(|j| {
            let v = x.contract_by_index(j);
            (1..=n)
                .map(|i| v.coefficient(&MultiIndex::from_sorted_unchecked([i as u8])))
                .collect()
        })
        .collect();
    let (rref, pivots) = Matrix::from_rows(rows).rref();
    debug_assert_eq!(pivots.len(), r);
    let mut b = Matrix::identity(n);
    for (s, &p) in pivots.iter().enumerate() {
        for i in 0..n {
            b.set(i, p, rref.get(s, i).clone());
        }
    }
    let exponents = (0..n)
        .map(|i| {
            if pivots.contains(&i) {
                (n - r) as i64
            } else {
                -(r as i64)
            }
        })
        .collect();
    Ok(NilpotencyWitness {
        exponents,
        contraction_rate: (k * (n - r)) as u64,
        basis: LinMap::new(b)?,
    })
}

/// For degenerate φ: a reflection `g` in a kernel direction, identity on a
/// complementary hyperplane, so `det g = −1` and `act(g, φ) = φ`.
pub fn orientation_reversing_stabilizer_witness(phi: &Form) -> Result<LinMap> {
    let n = phi.n();
    if phi.degree() == 0 {
        // every element of GL(n) fixes a scalar
        let mut d = vec![Rat::one(); n];
        if let Some(first) = d.first_mut() {
            *first = -Rat::one();
        }
        return Ok(LinMap::diagonal(&d));
    }
    let m = contraction_matrix(phi)?;
    let free = m.free_columns();
    let kernel = m.nullspace();
    let (Some(&f), Some(v)) = (free.first(), kernel.first()) else {
        return Err(Error::NoWitness("form is non-degenerate".into()));
    };
    // g = I − 2·v·e_fᵀ with v_f = 1
    let g = Matrix::from_fn(n, n, |i, j| {
        let id = if i == j { Rat::one() } else { Rat::zero() };
        if j == f {
            id - &v[i] * rat(2)
        } else {
            id
        }
    });
    let g = LinMap::new(g)?;
    debug_assert!(g.det().is_negative());
    debug_assert_eq!(act(&g, phi).ok().as_ref(), Some(phi));
    Ok(g)
}
