//! Reference implementations used as oracles. They work on dense
//! coefficient maps and use textbook formulas (minors, permutation signs,
//! plain Gaussian elimination) rather than the library's kernels.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use formlab_core::exterior::{Alternating, Form, Polyvector, Variance};
use formlab_core::linalg::{Matrix, Rat};
use formlab_core::linmap::LinMap;
use num_traits::{One, Zero};

pub type Dense = BTreeMap<Vec<usize>, Rat>;

pub fn dense<V: Variance>(x: &Alternating<V>) -> Dense {
    x.terms().map(|(m, c)| (m.to_vec(), c.clone())).collect()
}

pub fn from_dense<V: Variance>(n: usize, k: usize, d: &Dense) -> Alternating<V> {
    Alternating::from_terms(n, k, d.iter().map(|(i, c)| (i.clone(), c.clone()))).unwrap()
}

pub fn perm_sign(seq: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn to_rows(m: &LinMap) -> Vec<Vec<Rat>> {
    let n = m.n();
    (0..n)
        .map(|i| (0..n).map(|j| m.entry(i, j).clone()).collect())
        .collect()
}

pub fn det(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c].clone();
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[r][j] -= t;
            }
        }
    }
    d
}

pub fn rank(mut a: Vec<Vec<Rat>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            let f = &a[i][c] / &a[r][c];
            for j in c..cols {
                let t = &f * &a[r][j];
                a[i][j] -= t;
            }
        }
        r += 1;
    }
    r
}

pub fn inverse(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("invertible");
        m.swap(p, c);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= piv.clone();
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..2 * n {
                    let t = &f * &m[c][j];
                    m[r][j] -= t;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

fn minor(a: &[Vec<Rat>], rows: &[usize], cols: &[usize]) -> Rat {
    det(rows
        .iter()
        .map(|&r| cols.iter().map(|&c| a[r - 1][c - 1].clone()).collect())
        .collect())
}

/// `(h*φ)_I = Σ_J φ_J det h[J, I]`; `h` may be rectangular (rows index the
/// source of φ, columns the new space).
pub fn pullback(h: &[Vec<Rat>], phi: &Form) -> Form {
    let k = phi.degree();
    let n = h.first().map_or(0, Vec::len);
    let mut out = Dense::new();
    for i in subsets(n, k) {
        let mut c = Rat::zero();
        for (j, v) in dense(phi) {
            c += v * minor(h, &j, &i);
        }
        if !c.is_zero() {
            out.insert(i, c);
        }
    }
    from_dense(n, k, &out)
}

/// `g·φ = (g⁻¹)*φ`.
pub fn act(g: &LinMap, phi: &Form) -> Form {
    pullback(&inverse(&to_rows(g)), phi)
}

/// `(g·x)^I = Σ_J det g[I, J] x^J`.
pub fn act_vectors(g: &LinMap, x: &Polyvector) -> Polyvector {
    let (n, k) = (x.n(), x.degree());
    let rows = to_rows(g);
    let mut out = Dense::new();
    for i in subsets(n, k) {
        let mut c = Rat::zero();
        for (j, v) in dense(x) {
            c += v * minor(&rows, &i, &j);
        }
        if !c.is_zero() {
            out.insert(i, c);
        }
    }
    from_dense(n, k, &out)
}

fn complement(n: usize, i: &[usize]) -> Vec<usize> {
    (1..=n).filter(|j| !i.contains(j)).collect()
}

/// `P(e_I) = scale · sgn(I, Iᶜ) e^{Iᶜ}`.
pub fn poincare(scale: &Rat, xi: &Polyvector) -> Form {
    let n = xi.n();
    let mut out = Dense::new();
    for (i, c) in dense(xi) {
        let rest = complement(n, &i);
        let mut seq = i.clone();
        seq.extend(&rest);
        let s = Rat::from_integer(perm_sign(&seq).into());
        out.insert(rest, c * s * scale);
    }
    from_dense(n, n - xi.degree(), &out)
}

/// Coefficient of the alternating tensor at an arbitrary index tuple.
pub fn at(d: &Dense, idx: &[usize]) -> Rat {
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Rat::zero();
    }
    let c = d.get(&sorted).cloned().unwrap_or_else(Rat::zero);
    if perm_sign(idx) > 0 {
        c
    } else {
        -c
    }
}

/// `(i_v φ)_J = Σ_a v^a φ(a, J)`.
pub fn interior<V: Variance, W: Variance>(
    phi: &Alternating<V>,
    v: &Alternating<W>,
) -> Alternating<V> {
    let (n, k) = (phi.n(), phi.degree());
    let d = dense(phi);
    let vd = dense(v);
    let mut out = Dense::new();
    for j in subsets(n, k - 1) {
        let mut c = Rat::zero();
        for (a, va) in &vd {
            let mut idx = vec![a[0]];
            idx.extend(&j);
            c += va * at(&d, &idx);
        }
        if !c.is_zero() {
            out.insert(j, c);
        }
    }
    from_dense(n, k - 1, &out)
}

/// Rank of `v ↦ i_v φ`.
pub fn contraction_rank(phi: &Form) -> usize {
    let (n, k) = (phi.n(), phi.degree());
    if k == 0 {
        return 0;
    }
    let d = dense(phi);
    let rows: Vec<Vec<Rat>> = (1..=n)
        .map(|a| {
            subsets(n, k - 1)
                .iter()
                .map(|j| {
                    let mut idx = vec![a];
                    idx.extend(j);
                    at(&d, &idx)
                })
                .collect()
        })
        .collect();
    rank(rows)
}

/// Rational orthogonal matrix `(I − S)(I + S)⁻¹` from a skew matrix `S`.
pub fn cayley(skew_upper: &[i64], n: usize) -> LinMap {
    let mut s = vec![vec![Rat::zero(); n]; n];
    let mut it = skew_upper.iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = Rat::from_integer((*it.next().unwrap_or(&0)).into());
            s[i][j] = v.clone();
            s[j][i] = -v;
        }
    }
    let id = |i: usize, j: usize| if i == j { Rat::one() } else { Rat::zero() };
    let minus: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| id(i, j) - &s[i][j]).collect())
        .collect();
    let plus: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| id(i, j) + &s[i][j]).collect())
        .collect();
    let inv = inverse(&plus);
    let prod = Matrix::from_fn(n, n, |i, j| {
        (0..n).fold(Rat::zero(), |acc, l| acc + &minus[i][l] * &inv[l][j])
    });
    LinMap::new(prod).unwrap()
}
