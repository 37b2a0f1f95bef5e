//! Known orbit representatives per `(n, k)`, each with its fingerprint.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::One;

use crate::classifier::{
    fingerprint, martinet_normal_form, martinet_pairs, two_form_normal_form, Fingerprint,
};
use crate::exterior::Form;
use crate::linalg::Rat;

/// Largest dimension for which the generic derived representatives are
/// listed.
pub const DERIVED_MAX_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    /// Classical normal form from the literature.
    NormalForm,
    /// Representative built from coordinate forms here.
    DerivedRepresentative,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::NormalForm => "normal-form",
            Provenance::DerivedRepresentative => "derived-representative",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub representative: Form,
    pub stabilizer_note: String,
    pub provenance: Provenance,
    pub source: &'static str,
    pub fingerprint: Fingerprint,
    pub components: Option<u8>,
}

/// Split G₂ 3-form on R⁷ with coordinates θ₁θ₂θ₃y₁y₂y₃y₄:
/// `θ₁θ₂θ₃ + α₁θ₁ + α₂θ₂ + α₃θ₃` where `α₁ = y₁y₂ + y₃y₄`,
/// `α₂ = y₁y₃ − y₂y₄`, `α₃ = y₁y₄ + y₂y₃`.
pub fn g2_tilde_form() -> Form {
    let one = Rat::one;
    let m = || -Rat::one();
    let terms = vec![
        (vec![1, 2, 3], one()),
        (vec![4, 5, 1], one()),
        (vec![6, 7, 1], one()),
        (vec![4, 6, 2], one()),
        (vec![5, 7, 2], m()),
        (vec![4, 7, 3], one()),
        (vec![5, 6, 3], one()),
    ];
    Form::from_terms(7, 3, terms).expect("valid indices")
}

fn coordinate_form(n: usize, idx: impl IntoIterator<Item = usize>) -> Form {
    let idx: Vec<usize> = idx.into_iter().collect();
    Form::basis(n, &idx).expect("valid indices")
}

struct Draft {
    name: String,
    representative: Form,
    stabilizer_note: String,
    provenance: Provenance,
    source: &'static str,
    components: Option<u8>,
}

fn drafts(n: usize, k: usize) -> Vec<Draft> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 2 {
        for r in (0..=n).step_by(2) {
            out.push(Draft {
                name: format!("two-form-rank-{r}"),
                representative: two_form_normal_form(n, r),
                stabilizer_note: format!("Sp({r}) acting on the support, GL on the kernel"),
                provenance: Provenance::NormalForm,
                source: "Dieudonné",
                components: Some(if r == n { 2 } else { 1 }),
            });
        }
        return out;
    }
    if n >= 3 && k == n - 2 {
        for (l, s) in martinet_pairs(n) {
            let suffix = if s < 0 { "-minus" } else { "" };
            let lambda = if s < 0 { -1 } else { 1 };
            out.push(Draft {
                name: format!("martinet-l{l}{suffix}"),
                representative: martinet_normal_form(n, l, lambda),
                stabilizer_note: format!("dual bivector of rank {}", 2 * l),
                provenance: Provenance::NormalForm,
                source: "Martinet",
                components: Some(if 2 * l == n && l % 2 == 0 { 2 } else { 1 }),
            });
        }
        return out;
    }
    if (n, k) == (7, 3) {
        out.push(Draft {
            name: "G2-tilde-7".into(),
            representative: g2_tilde_form(),
            stabilizer_note: "split real form of G2, dimension 14".into(),
            provenance: Provenance::NormalForm,
            source: "Bryant",
            components: Some(2),
        });
    }
    if n <= DERIVED_MAX_N && k >= 1 {
        out.push(Draft {
            name: "zero".into(),
            representative: Form::zero(n, k),
            stabilizer_note: format!("all of gl({n})"),
            provenance: Provenance::DerivedRepresentative,
            source: "coordinate form",
            components: Some(1),
        });
        out.push(Draft {
            name: format!("decomposable-{k}"),
            representative: coordinate_form(n, 1..=k),
            stabilizer_note: "preserves the support plane and the volume on it".into(),
            provenance: Provenance::DerivedRepresentative,
            source: "coordinate form",
            components: Some(if k == n { 2 } else { 1 }),
        });
        if k >= 3 && 2 * k <= n {
            let rep = &coordinate_form(n, 1..=k) + &coordinate_form(n, k + 1..=2 * k);
            let components = if 2 * k < n || k % 2 == 1 {
                Some(1)
            } else {
                None
            };
            out.push(Draft {
                name: format!("split-pair-{k}"),
                representative: rep,
                stabilizer_note: "preserves two complementary support planes".into(),
                provenance: Provenance::DerivedRepresentative,
                source: "coordinate form",
                components,
            });
        }
    }
    out
}

type Cache = Mutex<HashMap<(usize, usize), Arc<Vec<CatalogEntry>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All catalog entries for `k`-forms on Rⁿ; fingerprints are computed once
/// per `(n, k)` and cached.
pub fn catalog(n: usize, k: usize) -> Arc<Vec<CatalogEntry>> {
    if let Some(hit) = cache().lock().expect("cache lock").get(&(n, k)) {
        return hit.clone();
    }
    let entries: Vec<CatalogEntry> = drafts(n, k)
        .into_iter()
        .map(|d| CatalogEntry {
            fingerprint: fingerprint(&d.representative),
            name: d.name,
            n,
            k,
            representative: d.representative,
            stabilizer_note: d.stabilizer_note,
            provenance: d.provenance,
            source: d.source,
            components: d.components,
        })
        .collect();
    let entries = Arc::new(entries);
    cache()
        .lock()
        .expect("cache lock")
        .entry((n, k))
        .or_insert(entries)
        .clone()
}

/// Entries whose fingerprint equals `fp`.
pub fn match_catalog(fp: &Fingerprint, n: usize, k: usize) -> Vec<CatalogEntry> {
    catalog(n, k)
        .iter()
        .filter(|e| &e.fingerprint == fp)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(catalog(4, 2).len(), 3);
        assert!(catalog(9, 4).is_empty());
        assert_eq!(catalog(5, 3).len(), 3);
        assert_eq!(catalog(6, 4).len(), 5);
        let names: Vec<String> = catalog(7, 3).iter().map(|e| e.name.clone()).collect();
        assert_eq!(
            names,
            ["G2-tilde-7", "zero", "decomposable-3", "split-pair-3"]
        );
    }

    #[test]
    fn fingerprints_within_each_catalog_are_distinct() {
        for (n, k) in [(4, 2), (5, 3), (6, 4), (6, 3), (7, 3), (8, 3)] {
            let cat = catalog(n, k);
            for (i, a) in cat.iter().enumerate() {
                for b in &cat[i + 1..] {
                    if a.name == "martinet-l3" && b.name == "martinet-l3-minus" {
                        continue;
                    }
                    assert_ne!(a.fingerprint, b.fingerprint, "{} vs {}", a.name, b.name);
                }
            }
        }
    }

    #[test]
    fn martinet_sign_is_invisible_to_fingerprints() {
        // ±ω∧ω on R⁶ have isomorphic stabilizers
        let cat = catalog(6, 4);
        let plus = cat.iter().find(|e| e.name == "martinet-l3").unwrap();
        let minus = cat.iter().find(|e| e.name == "martinet-l3-minus").unwrap();
        assert_eq!(plus.fingerprint, minus.fingerprint);
    }

    #[test]
    fn g2_tilde_is_stable() {
        let e = &catalog(7, 3)[0];
        assert_eq!(e.fingerprint.stab_dim, 14);
        assert!(e.fingerprint.is_stable(7, 3));
    }
}
