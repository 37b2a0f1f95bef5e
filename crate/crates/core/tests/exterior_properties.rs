mod common;

use formlab_core::duality::{
    musical, musical_inv, poincare, poincare_inv, InnerProduct, VolumeForm,
};
use formlab_core::exterior::{
    act, act_vectors, infinitesimal_act, infinitesimal_act_vectors, twisted_act, Contravariant,
    Form, Polyvector,
};
use formlab_core::linalg::{rat, Matrix, Rat};
use formlab_core::linmap::LinMap;
use formlab_core::random::{invertible, orientation_preserving, uniform_element, uniform_form};
use formlab_core::sampling::trial_rng;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn dims() -> impl Strategy<Value = (usize, u64)> {
    (2usize..=6, any::<u64>())
}

fn form(seed: u64, stream: u64, n: usize, k: usize) -> Form {
    uniform_form(&mut trial_rng(seed, stream), n, k, 3)
}

fn vector(seed: u64, stream: u64, n: usize, k: usize) -> Polyvector {
    uniform_element::<Contravariant, _>(&mut trial_rng(seed, stream), n, k, 3)
}

fn degree(seed: u64, stream: u64, max: usize) -> usize {
    trial_rng(seed, stream).random_range(0..=max)
}

fn sign(p: usize) -> Rat {
    if p.is_multiple_of(2) {
        Rat::one()
    } else {
        -Rat::one()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_associative((n, seed) in dims()) {
        let a = degree(seed, 0, n);
        let b = degree(seed, 1, n - a);
        let c = degree(seed, 2, n - a - b);
        let (x, y, z) = (form(seed, 3, n, a), form(seed, 4, n, b), form(seed, 5, n, c));
        let left = x.wedge(&y).unwrap().wedge(&z).unwrap();
        let right = x.wedge(&y.wedge(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn wedge_is_graded_commutative((n, seed) in dims()) {
        let a = degree(seed, 0, n);
        let b = degree(seed, 1, n - a);
        let (x, y) = (form(seed, 3, n, a), form(seed, 4, n, b));
        prop_assert_eq!(x.wedge(&y).unwrap(), y.wedge(&x).unwrap().scale(&sign(a * b)));
    }

    #[test]
    fn interior_matches_reference((n, seed) in dims()) {
        let k = 1 + degree(seed, 0, n - 1);
        let phi = form(seed, 1, n, k);
        let v = vector(seed, 2, n, 1);
        prop_assert_eq!(phi.interior(&v).unwrap(), common::interior(&phi, &v));
    }

    #[test]
    fn interior_is_an_antiderivation((n, seed) in dims()) {
        let a = 1 + degree(seed, 0, n - 1);
        let b = degree(seed, 1, n - a);
        let (x, y) = (form(seed, 2, n, a), form(seed, 3, n, b));
        let v = vector(seed, 4, n, 1);
        let lhs = x.wedge(&y).unwrap().interior(&v).unwrap();
        let first = x.interior(&v).unwrap().wedge(&y).unwrap();
        let second = if b == 0 {
            Form::zero(n, a + b - 1)
        } else {
            x.wedge(&y.interior(&v).unwrap()).unwrap().scale(&sign(a))
        };
        prop_assert_eq!(lhs, &first + &second);
    }

    #[test]
    fn multi_interior_composes_single_contractions((n, seed) in dims()) {
        prop_assume!(n >= 3);
        let k = 2 + degree(seed, 0, n - 2);
        let phi = form(seed, 1, n, k);
        let (v, w) = (vector(seed, 2, n, 1), vector(seed, 3, n, 1));
        // i_{v∧w} = i_w ∘ i_v
        let vw = v.wedge(&w).unwrap();
        prop_assert_eq!(
            phi.multi_interior(&vw).unwrap(),
            phi.interior(&v).unwrap().interior(&w).unwrap()
        );
    }

    #[test]
    fn actions_match_minor_expansion((n, seed) in dims()) {
        let k = degree(seed, 0, n);
        let g = invertible(&mut trial_rng(seed, 1), n, 3);
        let phi = form(seed, 2, n, k);
        let x = vector(seed, 3, n, k);
        prop_assert_eq!(act(&g, &phi).unwrap(), common::act(&g, &phi));
        prop_assert_eq!(act_vectors(&g, &x).unwrap(), common::act_vectors(&g, &x));
        prop_assert_eq!(phi.pull_back_by(&g).unwrap(), common::pullback(&common::to_rows(&g), &phi));
    }

    #[test]
    fn actions_are_group_actions((n, seed) in dims()) {
        let k = degree(seed, 0, n);
        let g = invertible(&mut trial_rng(seed, 1), n, 2);
        let h = invertible(&mut trial_rng(seed, 2), n, 2);
        let phi = form(seed, 3, n, k);
        let x = vector(seed, 4, n, k);
        let gh = g.compose(&h);
        prop_assert_eq!(act(&gh, &phi).unwrap(), act(&g, &act(&h, &phi).unwrap()).unwrap());
        prop_assert_eq!(
            act_vectors(&gh, &x).unwrap(),
            act_vectors(&g, &act_vectors(&h, &x).unwrap()).unwrap()
        );
        prop_assert_eq!(act(&LinMap::identity(n), &phi).unwrap(), phi.clone());
    }

    #[test]
    fn action_respects_wedge_and_pairing((n, seed) in dims()) {
        let a = degree(seed, 0, n);
        let b = degree(seed, 1, n - a);
        let g = invertible(&mut trial_rng(seed, 2), n, 2);
        let (x, y) = (form(seed, 3, n, a), form(seed, 4, n, b));
        prop_assert_eq!(
            act(&g, &x.wedge(&y).unwrap()).unwrap(),
            act(&g, &x).unwrap().wedge(&act(&g, &y).unwrap()).unwrap()
        );
        // i_{g·v}(g·φ) = g·(i_v φ)
        let k = 1 + degree(seed, 5, n - 1);
        let phi = form(seed, 6, n, k);
        let v = vector(seed, 7, n, 1);
        prop_assert_eq!(
            act(&g, &phi).unwrap().interior(&act_vectors(&g, &v).unwrap()).unwrap(),
            act(&g, &phi.interior(&v).unwrap()).unwrap()
        );
    }

    #[test]
    fn infinitesimal_action_matches_slot_derivation((n, seed) in dims()) {
        let k = degree(seed, 0, n);
        let mut rng = trial_rng(seed, 1);
        let a = LinMap::new(Matrix::from_fn(n, n, |_, _| rat(rng.random_range(-3..=3)))).unwrap();
        let phi = form(seed, 2, n, k);
        // (A·φ)(v₁,…,v_k) = −Σ φ(…, A v_i, …)
        let d = common::dense(&phi);
        let mut expected = common::Dense::new();
        for idx in common::subsets(n, k) {
            let mut c = Rat::zero();
            for slot in 0..k {
                for b in 1..=n {
                    let mut j = idx.clone();
                    j[slot] = b;
                    c -= a.entry(b - 1, idx[slot] - 1) * common::at(&d, &j);
                }
            }
            if !c.is_zero() {
                expected.insert(idx, c);
            }
        }
        prop_assert_eq!(infinitesimal_act(&a, &phi).unwrap(), common::from_dense(n, k, &expected));
        // bracket compatibility: [A, B]·φ = A·(B·φ) − B·(A·φ)
        let b = LinMap::new(Matrix::from_fn(n, n, |_, _| rat(rng.random_range(-2..=2)))).unwrap();
        let ab = infinitesimal_act(&a, &infinitesimal_act(&b, &phi).unwrap()).unwrap();
        let ba = infinitesimal_act(&b, &infinitesimal_act(&a, &phi).unwrap()).unwrap();
        prop_assert_eq!(infinitesimal_act(&a.commutator(&b), &phi).unwrap(), &ab - &ba);
        let x = vector(seed, 3, n, k);
        let ab = infinitesimal_act_vectors(&a, &infinitesimal_act_vectors(&b, &x).unwrap()).unwrap();
        let ba = infinitesimal_act_vectors(&b, &infinitesimal_act_vectors(&a, &x).unwrap()).unwrap();
        prop_assert_eq!(infinitesimal_act_vectors(&a.commutator(&b), &x).unwrap(), &ab - &ba);
    }

    #[test]
    fn poincare_matches_levi_civita((n, seed) in dims()) {
        let k = degree(seed, 0, n);
        let scale = rat(trial_rng(seed, 1).random_range(1..=5)) / rat(3);
        let omega = VolumeForm::new(n, scale.clone()).unwrap();
        let xi = vector(seed, 2, n, k);
        let p = poincare(&omega, &xi).unwrap();
        prop_assert_eq!(&p, &common::poincare(&scale, &xi));
        prop_assert_eq!(poincare_inv(&omega, &p).unwrap(), xi);
    }

    #[test]
    fn poincare_intertwines_with_determinant_twist((n, seed) in dims()) {
        let k = degree(seed, 0, n);
        let omega = VolumeForm::standard(n);
        let g = orientation_preserving(&mut trial_rng(seed, 1), n, 3);
        let xi = vector(seed, 2, n, k);
        let lhs = poincare(&omega, &act_vectors(&g, &xi).unwrap()).unwrap();
        let rhs = twisted_act(&g, 1, &poincare(&omega, &xi).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poincare_musical_commutes_with_orthogonal_maps((n, seed) in dims()) {
        let k = degree(seed, 0, n);
        let mut rng = trial_rng(seed, 1);
        let skew: Vec<i64> = (0..n * (n - 1) / 2).map(|_| rng.random_range(-2..=2)).collect();
        let q = common::cayley(&skew, n);
        prop_assume!(*q.det() == Rat::one());
        let (omega, mu) = (VolumeForm::standard(n), InnerProduct::identity(n));
        let phi = form(seed, 2, n, k);
        let map = |f: &Form| poincare(&omega, &musical_inv(&mu, f).unwrap()).unwrap();
        prop_assert_eq!(map(&act(&q, &phi).unwrap()), act(&q, &map(&phi)).unwrap());
    }

    #[test]
    fn musical_round_trip((n, seed) in dims()) {
        let k = degree(seed, 0, n);
        let mut rng = trial_rng(seed, 1);
        let a = Matrix::from_fn(n, n, |_, _| rat(rng.random_range(-2..=2)));
        let mu = InnerProduct::new(a.transpose().mul(&a).add(&Matrix::identity(n))).unwrap();
        let x = vector(seed, 2, n, k);
        prop_assert_eq!(musical_inv(&mu, &musical(&mu, &x).unwrap()).unwrap(), x);
    }
}

#[test]
fn musical_inverse_does_not_commute_with_shears() {
    // g*(μ⁻¹ φ) ≠ μ⁻¹(g*φ) for a non-orthogonal g, so P∘μ⁻¹ is not equivariant
    let g = LinMap::from_i64(&[vec![1, 1], vec![0, 1]]).unwrap();
    let (omega, mu) = (VolumeForm::standard(2), InnerProduct::identity(2));
    let phi = Form::basis(2, &[1]).unwrap();
    let map = |f: &Form| poincare(&omega, &musical_inv(&mu, f).unwrap()).unwrap();
    assert_ne!(map(&act(&g, &phi).unwrap()), act(&g, &map(&phi)).unwrap());
}

#[test]
fn wedge_beyond_top_degree_is_an_error() {
    let a = Form::basis(3, &[1, 2]).unwrap();
    assert!(a.wedge(&a).is_err());
}
