//! Sparse exact alternating tensors.
//!
//! [`Form`] (covariant, elements of Λᵏ Rⁿ*) and [`Polyvector`] (contravariant,
//! elements of Λᵏ Rⁿ) share one representation, [`Alternating`], tagged by a
//! zero-sized variance marker. Coefficients are stored against strictly
//! increasing multi-indices; zero coefficients are never stored.
//!
//! Conventions:
//! - interior products contract the first slot:
//!   `i_v e^{i₁…i_k} = Σ_j (−1)^{j−1} v^{i_j} e^{…î_j…}`;
//! - `i_{v₁∧…∧v_j} = i_{v_j} ∘ … ∘ i_{v₁}`;
//! - `g ∈ GL(n)` acts on forms by pullback along `g⁻¹`, which makes
//!   `act(g₁g₂, φ) = act(g₁, act(g₂, φ))`, and on polyvectors by applying `g`
//!   to every slot.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rat};
use crate::linmap::LinMap;
use crate::multi_index::{Basis, MultiIndex};

mod sealed {
    pub trait Sealed {}
}

pub trait Variance:
    sealed::Sealed + Copy + Default + fmt::Debug + PartialEq + Eq + Send + Sync + 'static
{
    type Dual: Variance<Dual = Self>;
    /// `"form"` or `"vector"`.
    const NAME: &'static str;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Covariant;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Contravariant;

impl sealed::Sealed for Covariant {}
impl sealed::Sealed for Contravariant {}

impl Variance for Covariant {
    type Dual = Contravariant;
    const NAME: &'static str = "form";
}

impl Variance for Contravariant {
    type Dual = Covariant;
    const NAME: &'static str = "vector";
}

#[derive(Clone, PartialEq, Eq)]
pub struct Alternating<V: Variance> {
    n: usize,
    k: usize,
    terms: BTreeMap<MultiIndex, Rat>,
    _variance: PhantomData<V>,
}

pub type Form = Alternating<Covariant>;
pub type Polyvector = Alternating<Contravariant>;

impl<V: Variance> Alternating<V> {
    /// The zero element of Λᵏ on `n` generators. Panics if `k > n`.
    pub fn zero(n: usize, k: usize) -> Self {
        assert!(k <= n, "degree {k} exceeds dimension {n}");
        Alternating {
            n,
            k,
            terms: BTreeMap::new(),
            _variance: PhantomData,
        }
    }

    pub fn scalar(n: usize, c: Rat) -> Self {
        let mut out = Self::zero(n, 0);
        out.add_term(MultiIndex::empty(), c);
        out
    }

    /// Basis monomial with 1-based, possibly unsorted indices; a repeated
    /// index gives the zero element.
    pub fn basis(n: usize, indices: &[usize]) -> Result<Self> {
        Self::from_terms(n, indices.len(), [(indices.to_vec(), Rat::one())])
    }

    /// Builds an element from `(indices, coefficient)` pairs. Indices may be
    /// unsorted (the permutation sign is applied) and duplicate monomials are
    /// summed. Terms with a repeated index vanish.
    pub fn from_terms(
        n: usize,
        k: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Rat)>,
    ) -> Result<Self> {
        if k > n {
            return Err(Error::Degree(format!("degree {k} exceeds dimension {n}")));
        }
        let mut out = Self::zero(n, k);
        for (idx, c) in terms {
            if idx.len() != k || idx.iter().any(|&i| i == 0 || i > n) {
                return Err(Error::InvalidIndex { indices: idx, n });
            }
            if let Some((s, m)) = MultiIndex::sort_signed(&idx) {
                out.add_term(m, if s > 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    /// Dense coefficients in the lexicographic basis of Λᵏ.
    pub fn from_dense(n: usize, k: usize, coeffs: &[Rat]) -> Self {
        let basis = Basis::new(n, k);
        assert_eq!(basis.len(), coeffs.len(), "dense coefficient length");
        let mut out = Self::zero(n, k);
        for (m, c) in basis.iter().zip(coeffs) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn to_dense(&self, basis: &Basis) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); basis.len()];
        for (m, c) in &self.terms {
            let i = basis.index_of(m).expect("multi-index belongs to basis");
            v[i] = c.clone();
        }
        v
    }

    pub(crate) fn add_term(&mut self, m: MultiIndex, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero coefficients.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient at 1-based unsorted indices, with the permutation sign.
    pub fn coefficient_at(&self, indices: &[usize]) -> Rat {
        match MultiIndex::sort_signed(indices) {
            Some((s, m)) if s > 0 => self.coefficient(&m),
            Some((_, m)) => -self.coefficient(&m),
            None => Rat::zero(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = Self::zero(self.n, self.k);
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect();
        out
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.k != other.k {
            return Err(Error::Degree(format!(
                "cannot add degree {} and degree {}",
                self.k, other.k
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Exterior product. Fails when the degrees add past `n`, since no
    /// element of that degree exists.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let k = self.k + other.k;
        if k > self.n {
            return Err(Error::Degree(format!(
                "wedge of degrees {} and {} exceeds dimension {}",
                self.k, other.k, self.n
            )));
        }
        let mut out = Self::zero(self.n, k);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((s, m)) = a.merge(b) {
                    let c = ca * cb;
                    out.add_term(m, if s > 0 { c } else { -c });
                }
            }
        }
        Ok(out)
    }

    /// Interior product `i_v(self)` with a degree-1 element of the dual space.
    pub fn interior(&self, v: &Alternating<V::Dual>) -> Result<Self> {
        if v.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.n,
            });
        }
        if v.k != 1 {
            return Err(Error::Degree(format!(
                "interior product needs a degree-1 argument, got degree {}",
                v.k
            )));
        }
        if self.k == 0 {
            return Err(Error::Degree(
                "interior product of a degree-0 element".into(),
            ));
        }
        let mut out = Self::zero(self.n, self.k - 1);
        for (vi, cv) in &v.terms {
            let i = vi.iter().next().expect("degree 1");
            for (m, c) in &self.terms {
                if let Some(slot) = m.position(i) {
                    let t = cv * c;
                    out.add_term(m.remove_slot(slot), if slot % 2 == 0 { t } else { -t });
                }
            }
        }
        Ok(out)
    }

    /// `i_X(self)` for `X` of degree `j ≤ k`, with `i_{v₁∧…∧v_j} = i_{v_j}∘…∘i_{v₁}`.
    pub fn multi_interior(&self, x: &Alternating<V::Dual>) -> Result<Self> {
        if x.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.n,
            });
        }
        if x.k > self.k {
            return Err(Error::Degree(format!(
                "cannot contract degree {} into degree {}",
                x.k, self.k
            )));
        }
        let mut out = Self::zero(self.n, self.k - x.k);
        for (xi, cx) in &x.terms {
            for (m, c) in &self.terms {
                if let Some((s, rest)) = contract_basis(xi, m) {
                    let t = cx * c;
                    out.add_term(rest, if s > 0 { t } else { -t });
                }
            }
        }
        Ok(out)
    }

    /// Contraction by a single dual basis element `e_I`.
    pub(crate) fn contract_by_index(&self, idx: &MultiIndex) -> Self {
        let mut out = Self::zero(self.n, self.k - idx.len());
        for (m, c) in &self.terms {
            if let Some((s, rest)) = contract_basis(idx, m) {
                out.add_term(rest, if s > 0 { c.clone() } else { -c.clone() });
            }
        }
        out
    }

    /// Substitutes every slot linearly: basis element `i` is replaced by column
    /// `i` of `m` (`e_i ↦ Σ_j m_{ji} e_j`). The output variance is chosen by the
    /// caller, so actions and musical isomorphisms share this kernel.
    pub(crate) fn transform_slots<W: Variance>(&self, m: &Matrix) -> Alternating<W> {
        // `m` may be rectangular: it maps Rⁿ (columns) into R^{rows}
        debug_assert_eq!(m.cols(), self.n);
        let columns: Vec<Vec<(usize, Rat)>> = (0..m.cols())
            .map(|i| {
                (0..m.rows())
                    .filter(|&j| !m.get(j, i).is_zero())
                    .map(|j| (j + 1, m.get(j, i).clone()))
                    .collect()
            })
            .collect();
        let mut out = Alternating::<W>::zero(m.rows(), self.k);
        for (idx, c) in &self.terms {
            let mut acc: BTreeMap<MultiIndex, Rat> = BTreeMap::new();
            acc.insert(MultiIndex::empty(), c.clone());
            for i in idx.iter() {
                let mut next: BTreeMap<MultiIndex, Rat> = BTreeMap::new();
                for (part, a) in &acc {
                    for (j, mji) in &columns[i - 1] {
                        if part.contains(*j) {
                            continue;
                        }
                        // j is appended on the right, then sorted into place
                        let greater = part.iter().filter(|&p| p > *j).count();
                        let mut entries: Vec<u8> = part.iter().map(|x| x as u8).collect();
                        entries.insert(entries.len() - greater, *j as u8);
                        let merged = MultiIndex::from_sorted_unchecked(entries);
                        let t = a * mji;
                        let t = if greater % 2 == 0 { t } else { -t };
                        let e = next.entry(merged).or_insert_with(Rat::zero);
                        *e += t;
                    }
                }
                next.retain(|_, v| !v.is_zero());
                acc = next;
            }
            for (mi, v) in acc {
                out.add_term(mi, v);
            }
        }
        out
    }

    /// Extends `e_i ↦ Σ_j d_{ji} e_j` as a derivation over every slot.
    pub(crate) fn derive_slots(&self, d: &Matrix) -> Self {
        let n = self.n;
        let mut out = Self::zero(n, self.k);
        for (idx, c) in &self.terms {
            for (slot, i) in idx.iter().enumerate() {
                for j in 1..=n {
                    let dji = d.get(j - 1, i - 1);
                    if dji.is_zero() {
                        continue;
                    }
                    if let Some((s, m)) = idx.substitute(slot, j) {
                        let t = c * dji;
                        out.add_term(m, if s > 0 { t } else { -t });
                    }
                }
            }
        }
        out
    }
}

/// `i_{e_I}(e^J)` as `(sign, J \ I)`; `None` when `I ⊄ J`.
pub(crate) fn contract_basis(idx: &MultiIndex, target: &MultiIndex) -> Option<(i8, MultiIndex)> {
    let mut rest: Vec<u8> = target.iter().map(|x| x as u8).collect();
    let mut sign = 1i8;
    for i in idx.iter() {
        let slot = rest.iter().position(|&x| x as usize == i)?;
        if slot % 2 == 1 {
            sign = -sign;
        }
        rest.remove(slot);
    }
    Some((sign, MultiIndex::from_sorted_unchecked(rest)))
}

impl Form {
    /// Literal pullback `h*φ`, `(h*φ)(v₁,…) = φ(hv₁,…)`.
    pub fn pull_back_by(&self, h: &LinMap) -> Result<Form> {
        h.check_dim(self.n)?;
        Ok(self.transform_slots(&h.matrix().transpose()))
    }
}

/// Left action of an invertible `g` on forms: pullback along `g⁻¹`.
pub fn act(g: &LinMap, phi: &Form) -> Result<Form> {
    g.check_dim(phi.n())?;
    let inv = g.inverse()?;
    Ok(phi.transform_slots(&inv.matrix().transpose()))
}

/// Direct-image action of `g` on polyvectors.
pub fn act_vectors(g: &LinMap, x: &Polyvector) -> Result<Polyvector> {
    g.check_dim(x.n())?;
    if !g.is_invertible() {
        return Err(Error::Singular);
    }
    Ok(x.transform_slots(g.matrix()))
}

/// `(det g)^λ · act(g, φ)` for `g` with positive determinant.
pub fn twisted_act(g: &LinMap, lambda: i32, phi: &Form) -> Result<Form> {
    g.check_dim(phi.n())?;
    if !g.det().is_positive() {
        return Err(Error::NotOrientationPreserving);
    }
    let factor = pow_rat(g.det(), lambda);
    Ok(act(g, phi)?.scale(&factor))
}

/// Derivative at `t = 0` of `act(exp(tA), φ)`: `−Σ_slots φ(…, A·, …)`.
pub fn infinitesimal_act(a: &LinMap, phi: &Form) -> Result<Form> {
    a.check_dim(phi.n())?;
    let d = a.matrix().transpose().scale(&-Rat::one());
    Ok(phi.derive_slots(&d))
}

/// Derivative at `t = 0` of `act_vectors(exp(tA), x)`.
pub fn infinitesimal_act_vectors(a: &LinMap, x: &Polyvector) -> Result<Polyvector> {
    a.check_dim(x.n())?;
    Ok(x.derive_slots(a.matrix()))
}

pub(crate) fn pow_rat(x: &Rat, e: i32) -> Rat {
    let base = if e < 0 { x.recip() } else { x.clone() };
    (0..e.unsigned_abs()).fold(Rat::one(), |acc, _| acc * &base)
}

impl<V: Variance> Add for &Alternating<V> {
    type Output = Alternating<V>;
    fn add(self, rhs: Self) -> Alternating<V> {
        self.checked_add(rhs)
            .expect("operands live in the same space")
    }
}

impl<V: Variance> Sub for &Alternating<V> {
    type Output = Alternating<V>;
    fn sub(self, rhs: Self) -> Alternating<V> {
        self.checked_sub(rhs)
            .expect("operands live in the same space")
    }
}

impl<V: Variance> Neg for &Alternating<V> {
    type Output = Alternating<V>;
    fn neg(self) -> Alternating<V> {
        self.scale(&-Rat::one())
    }
}

impl<V: Variance> fmt::Display for Alternating<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let sym = if V::NAME == "form" { "e^" } else { "e_" };
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}·")?;
            }
            let idx: String = m
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            write!(f, "{sym}{{{idx}}}")?;
        }
        Ok(())
    }
}

impl<V: Variance> fmt::Debug for Alternating<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[n={}, k={}]({})", V::NAME, self.n, self.k, self)
    }
}
