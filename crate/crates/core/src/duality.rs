//! Volume forms, inner products, and the isomorphisms they induce:
//! the Poincaré map `P_Ω: Λᵏ Rⁿ → Λⁿ⁻ᵏ Rⁿ*, ξ ↦ i_ξ Ω` and the musical map
//! `Λᵏ Rⁿ → Λᵏ Rⁿ*` of a scalar product.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{contract_basis, Form, Polyvector};
use crate::linalg::{Matrix, Rat};
use crate::multi_index::MultiIndex;

/// `scale · e^{1…n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeForm {
    n: usize,
    scale: Rat,
}

impl VolumeForm {
    pub fn new(n: usize, scale: Rat) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::ZeroVolume);
        }
        Ok(VolumeForm { n, scale })
    }

    /// `e^{1…n}`.
    pub fn standard(n: usize) -> Self {
        VolumeForm {
            n,
            scale: Rat::one(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> &Rat {
        &self.scale
    }

    pub fn form(&self) -> Form {
        let all: Vec<usize> = (1..=self.n).collect();
        Form::basis(self.n, &all)
            .expect("top degree basis form")
            .scale(&self.scale)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }
}

/// Symmetric positive definite scalar product on Rⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerProduct {
    matrix: Matrix,
    inverse: Matrix,
}

impl InnerProduct {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_symmetric() {
            return Err(Error::NotPositiveDefinite);
        }
        // Sylvester's criterion on leading principal minors
        for k in 1..=matrix.rows() {
            let minor = Matrix::from_fn(k, k, |r, c| matrix.get(r, c).clone());
            if !minor.determinant().is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
        }
        let inverse = matrix.inverse().ok_or(Error::NotPositiveDefinite)?;
        Ok(InnerProduct { matrix, inverse })
    }

    pub fn identity(n: usize) -> Self {
        InnerProduct {
            matrix: Matrix::identity(n),
            inverse: Matrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: n,
            });
        }
        Ok(())
    }
}

/// `P_Ω(ξ) = i_ξ Ω`.
pub fn poincare(omega: &VolumeForm, xi: &Polyvector) -> Result<Form> {
    omega.check_dim(xi.n())?;
    omega.form().multi_interior(xi)
}

/// Inverse of [`poincare`]. In lexicographic bases `P_Ω` is `scale` times a
/// signed permutation `e_I ↦ ±e^{Iᶜ}`, so the inverse is read off termwise.
pub fn poincare_inv(omega: &VolumeForm, psi: &Form) -> Result<Polyvector> {
    omega.check_dim(psi.n())?;
    let n = omega.n;
    let top = MultiIndex::from_sorted_unchecked(1..=n as u8);
    let mut out = Polyvector::zero(n, n - psi.degree());
    for (j, c) in psi.terms() {
        let i = j.complement(n);
        let (sign, _) = contract_basis(&i, &top).expect("complement is contained in the top index");
        let coeff = c / &omega.scale;
        out.add_term(i, if sign > 0 { coeff } else { -coeff });
    }
    Ok(out)
}

/// Musical isomorphism `Λᵏ Rⁿ → Λᵏ Rⁿ*` induced by μ on every slot.
pub fn musical(mu: &InnerProduct, x: &Polyvector) -> Result<Form> {
    mu.check_dim(x.n())?;
    Ok(x.transform_slots(&mu.matrix))
}

/// Inverse musical isomorphism `Λᵏ Rⁿ* → Λᵏ Rⁿ`.
pub fn musical_inv(mu: &InnerProduct, phi: &Form) -> Result<Polyvector> {
    mu.check_dim(phi.n())?;
    Ok(phi.transform_slots(&mu.inverse))
}
