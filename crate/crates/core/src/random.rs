//! Seeded generators for forms and group elements, shared by the sampler and
//! by the invariance test suites.

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::exterior::{act, Alternating, Form, Variance};
use crate::linalg::{rat, Matrix, Rat};
use crate::linmap::LinMap;
use crate::multi_index::{binomial, Basis};

/// Independent integer coefficients, uniform in `[-bound, bound]`.
pub fn uniform_element<V: Variance, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    bound: i64,
) -> Alternating<V> {
    let coeffs: Vec<Rat> = (0..binomial(n, k))
        .map(|_| rat(rng.random_range(-bound..=bound)))
        .collect();
    Alternating::from_dense(n, k, &coeffs)
}

pub fn uniform_form<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, bound: i64) -> Form {
    uniform_element(rng, n, k, bound)
}

/// Random element with roughly `density` of its coefficients nonzero.
pub fn sparse_element<V: Variance, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    bound: i64,
    density: f64,
) -> Alternating<V> {
    let coeffs: Vec<Rat> = (0..binomial(n, k))
        .map(|_| {
            if rng.random_bool(density) {
                rat(rng.random_range(-bound..=bound))
            } else {
                Rat::zero()
            }
        })
        .collect();
    Alternating::from_dense(n, k, &coeffs)
}

/// Random integer matrix with nonzero determinant.
pub fn invertible<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> LinMap {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| rat(rng.random_range(-bound..=bound)));
        let g = LinMap::new(m).expect("square");
        if g.is_invertible() {
            return g;
        }
    }
}

/// Random integer matrix with positive determinant.
pub fn orientation_preserving<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> LinMap {
    let g = invertible(rng, n, bound);
    if g.det().is_positive() {
        return g;
    }
    // flip one row
    let mut m = g.matrix().clone();
    for c in 0..n {
        let v = -m.get(0, c).clone();
        m.set(0, c, v);
    }
    LinMap::new(m).expect("square")
}

/// Random integer matrix with negative determinant.
pub fn orientation_reversing<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> LinMap {
    let g = orientation_preserving(rng, n, bound);
    let mut m = g.matrix().clone();
    for c in 0..n {
        let v = -m.get(0, c).clone();
        m.set(0, c, v);
    }
    LinMap::new(m).expect("square")
}

/// A `k`-form on Rⁿ of rank at most `r`: a random form on the first `r`
/// coordinates moved by a random invertible change of basis.
pub fn embedded_form<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    r: usize,
    bound: i64,
) -> Form {
    assert!(k <= r && r <= n);
    let inner = Basis::new(r, k);
    let coeffs: Vec<(Vec<usize>, Rat)> = inner
        .iter()
        .map(|m| (m.to_vec(), rat(rng.random_range(-bound..=bound))))
        .collect();
    let phi = Form::from_terms(n, k, coeffs).expect("indices fit");
    let g = invertible(rng, n, 2);
    act(&g, &phi).expect("invertible")
}
