//! Orbit verdicts.
//!
//! Two families are decided exactly by complete invariants: 2-forms (by rank)
//! and (n−2)-forms (by Martinet's length and sign). Degenerate forms are first
//! reduced to their support, where the same two families may apply again.
//! Everything else is fingerprinted and compared against the built-in catalog;
//! a fingerprint is a numerical shadow of the stabilizer algebra and does not
//! separate orbits in general, so a catalog hit is only reported as exact when
//! it is unique.

use std::fmt;

use num_traits::One;

use crate::catalog::{match_catalog, CatalogEntry};
use crate::duality::VolumeForm;
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::invariants::{length_and_sign, rank, reduce, stabilizer_algebra, LengthSign};
use crate::lie::{killing_signature, Signature};
use crate::linalg::{Matrix, Rat};
use crate::multi_index::{binomial, Basis};

/// Computable GL-invariants used to compare forms that no complete invariant
/// covers. Ordered field by field, which fixes the order of sampler output.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    /// `r_j = rank(X ∈ Λʲ ↦ i_X φ)` for `j = 1 … k−1`.
    pub rank_profile: Vec<usize>,
    pub stab_dim: usize,
    pub killing_signature: Signature,
}

impl Fingerprint {
    pub fn orbit_dimension(&self, n: usize) -> usize {
        n * n - self.stab_dim
    }

    pub fn is_stable(&self, n: usize, k: usize) -> bool {
        self.orbit_dimension(n) == binomial(n, k)
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let profile: Vec<String> = self.rank_profile.iter().map(|r| r.to_string()).collect();
        write!(
            f,
            "ranks=[{}] stab={} killing={}",
            profile.join(","),
            self.stab_dim,
            self.killing_signature
        )
    }
}

/// `j ↦ rank(Λʲ → Λᵏ⁻ʲ)` for `j = 1 … k−1`.
pub fn rank_profile(phi: &Form) -> Vec<usize> {
    let (n, k) = (phi.n(), phi.degree());
    (1..k)
        .map(|j| {
            let target = Basis::new(n, k - j);
            let cols: Vec<Vec<Rat>> = Basis::new(n, j)
                .iter()
                .map(|idx| phi.contract_by_index(idx).to_dense(&target))
                .collect();
            Matrix::from_columns(&cols, target.len()).rank()
        })
        .collect()
}

pub fn fingerprint(phi: &Form) -> Fingerprint {
    let stab = stabilizer_algebra(phi);
    Fingerprint {
        rank_profile: rank_profile(phi),
        stab_dim: stab.dim(),
        killing_signature: killing_signature(&stab),
    }
}

/// Name of a GL(n)-orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitLabel {
    /// 2-form of the given rank.
    TwoFormRank(usize),
    /// (n−2)-form with Martinet length and sign.
    Martinet {
        length: usize,
        sign: i8,
    },
    /// Degenerate form whose reduction to R^rank is an (rank−2)-form.
    ReducedMartinet {
        rank: usize,
        length: usize,
        sign: i8,
    },
    /// A single catalog representative; `rank < n` means the match was made
    /// after reducing to R^rank.
    Catalog {
        name: String,
        rank: usize,
    },
    /// Degree 0: GL(n) fixes every scalar.
    Scalar(Rat),
    Zero,
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::TwoFormRank(r) => write!(f, "two-form-rank-{r}"),
            OrbitLabel::Martinet { length, sign } => write!(f, "martinet(l={length},s={sign})"),
            OrbitLabel::ReducedMartinet { rank, length, sign } => {
                write!(f, "rank-{rank}:martinet(l={length},s={sign})")
            }
            OrbitLabel::Catalog { name, rank } => write!(f, "rank-{rank}:{name}"),
            OrbitLabel::Scalar(c) => write!(f, "scalar({c})"),
            OrbitLabel::Zero => write!(f, "zero"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exact(OrbitLabel),
    Candidates(Vec<OrbitLabel>),
    Unknown,
}

impl Verdict {
    pub fn is_exact(&self) -> bool {
        matches!(self, Verdict::Exact(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Exact(l) => write!(f, "exact {l}"),
            Verdict::Candidates(ls) => {
                let names: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
                write!(f, "candidates [{}]", names.join(", "))
            }
            Verdict::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OrbitInvariants {
    pub rank: Option<usize>,
    pub fingerprint: Option<Fingerprint>,
    pub length_sign: Option<LengthSign>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub n: usize,
    pub k: usize,
    pub verdict: Verdict,
    pub invariants: OrbitInvariants,
    pub canonical: Option<Form>,
    /// Connected components of the GL(n)-orbit; `None` when no argument
    /// available here decides it.
    pub components: Option<u8>,
    pub open: bool,
    pub notes: Vec<String>,
}

/// `Σ_{i=1}^{r/2} e^{2i−1} ∧ e^{2i}` on Rⁿ.
pub fn two_form_normal_form(n: usize, r: usize) -> Form {
    let terms = (1..=r / 2).map(|i| (vec![2 * i - 1, 2 * i], Rat::one()));
    Form::from_terms(n, 2, terms).expect("indices within range")
}

/// `λ · Σ_{i=1}^{l} e^{1…n with 2i−1, 2i omitted}`; the image under `P_Ω`
/// (standard Ω) of `λ·(e₁∧e₂ + … + e_{2l−1}∧e_{2l})`.
pub fn martinet_normal_form(n: usize, length: usize, lambda: i64) -> Form {
    let terms = (1..=length).map(|i| {
        let idx: Vec<usize> = (1..=n).filter(|&j| j != 2 * i - 1 && j != 2 * i).collect();
        (idx, crate::linalg::rat(lambda))
    });
    Form::from_terms(n, n - 2, terms).expect("indices within range")
}

/// Admissible `(length, sign)` pairs for (n−2)-forms on Rⁿ.
pub fn martinet_pairs(n: usize) -> Vec<(usize, i8)> {
    let mut out = vec![(0, 0)];
    for l in 1..=n / 2 {
        out.push((l, 1));
        if 2 * l == n && l % 2 == 1 {
            out.push((l, -1));
        }
    }
    out
}

/// Verdict for a 2-form: the rank decides the orbit.
pub fn classify_two_form(phi: &Form) -> Result<OrbitReport> {
    if phi.degree() != 2 {
        return Err(Error::Degree(format!(
            "classify_two_form needs degree 2, got {}",
            phi.degree()
        )));
    }
    let n = phi.n();
    let r = rank(phi)?;
    let mut notes = vec!["complete invariant: rank of the 2-form".to_string()];
    let components = if r == n {
        notes.push("maximal rank on even dimension: stabilizer lies in GL+".into());
        2
    } else {
        1
    };
    let open = r == 2 * (n / 2);
    if open {
        notes.push("maximal rank: orbit is open".into());
    }
    Ok(OrbitReport {
        n,
        k: 2,
        verdict: Verdict::Exact(OrbitLabel::TwoFormRank(r)),
        invariants: OrbitInvariants {
            rank: Some(r),
            ..Default::default()
        },
        canonical: Some(two_form_normal_form(n, r)),
        components: Some(components),
        open,
        notes,
    })
}

/// Verdict for an (n−2)-form: Martinet's length and sign decide the orbit.
pub fn classify_codim_two(phi: &Form, omega: &VolumeForm) -> Result<OrbitReport> {
    let n = phi.n();
    if n < 3 || phi.degree() != n - 2 {
        return Err(Error::Degree(format!(
            "classify_codim_two needs an (n−2)-form with n ≥ 3, got degree {} on R^{n}",
            phi.degree()
        )));
    }
    let ls = length_and_sign(phi, omega)?;
    let l = ls.length;
    let lambda = if 2 * l == n && ls.sign < 0 { -1 } else { 1 };
    let canonical = martinet_normal_form(n, l, lambda);
    let components = if 2 * l == n && l % 2 == 0 { 2 } else { 1 };
    let open = l == n / 2;
    let mut notes = vec!["complete invariants: Martinet length and sign".to_string()];
    if open {
        notes.push("maximal length: orbit is open".into());
    }
    Ok(OrbitReport {
        n,
        k: n - 2,
        verdict: Verdict::Exact(OrbitLabel::Martinet {
            length: l,
            sign: ls.sign,
        }),
        invariants: OrbitInvariants {
            rank: Some(rank(phi)?),
            fingerprint: None,
            length_sign: Some(ls),
        },
        canonical: Some(canonical),
        components: Some(components),
        open,
        notes,
    })
}

/// Extends a form on R^r to Rⁿ along the first r coordinates.
fn embed(phi: &Form, n: usize) -> Form {
    Form::from_terms(
        n,
        phi.degree(),
        phi.terms().map(|(m, c)| (m.to_vec(), c.clone())),
    )
    .expect("r ≤ n")
}

fn catalog_verdict(entries: &[CatalogEntry], rank: usize) -> Verdict {
    let labels: Vec<OrbitLabel> = entries
        .iter()
        .map(|e| OrbitLabel::Catalog {
            name: e.name.clone(),
            rank,
        })
        .collect();
    match labels.len() {
        0 => Verdict::Unknown,
        1 => Verdict::Exact(labels.into_iter().next().expect("one label")),
        _ => Verdict::Candidates(labels),
    }
}

/// Dispatches to the exact classifiers when they apply (after reduction to
/// the support for degenerate forms) and to fingerprint matching otherwise.
/// Exact verdicts carry their complete invariants; every other report also
/// carries the fingerprint.
pub fn classify(phi: &Form, omega: &VolumeForm) -> Result<OrbitReport> {
    let (n, k) = (phi.n(), phi.degree());

    if k == 0 {
        let c = phi.coefficient(&crate::multi_index::MultiIndex::empty());
        return Ok(OrbitReport {
            n,
            k,
            verdict: Verdict::Exact(OrbitLabel::Scalar(c)),
            invariants: OrbitInvariants::default(),
            canonical: Some(phi.clone()),
            components: Some(1),
            open: false,
            notes: vec!["degree 0: every scalar is fixed by GL(n)".into()],
        });
    }
    if k == 2 {
        return classify_two_form(phi);
    }
    if n >= 3 && k == n - 2 {
        return classify_codim_two(phi, omega);
    }

    let fp = fingerprint(phi);
    let open = fp.is_stable(n, k);
    let r = rank(phi)?;
    let mut notes = Vec::new();
    let mut report = OrbitReport {
        n,
        k,
        verdict: Verdict::Unknown,
        invariants: OrbitInvariants {
            rank: Some(r),
            fingerprint: Some(fp.clone()),
            length_sign: None,
        },
        canonical: None,
        components: None,
        open,
        notes: Vec::new(),
    };
    if phi.is_zero() {
        report.verdict = Verdict::Exact(OrbitLabel::Zero);
        report.canonical = Some(phi.clone());
        report.components = Some(1);
        return Ok(report);
    }

    if r < n {
        notes.push(format!(
            "degenerate (rank {r} < {n}): orbit is connected, reflection in a kernel direction stabilizes the form"
        ));
        report.components = Some(1);
        let red = reduce(phi)?;
        notes.push(format!("reduced to a nondegenerate {k}-form on R^{r}"));
        if r >= 3 && k == r - 2 {
            let sub = classify_codim_two(&red.reduced, &VolumeForm::standard(r))?;
            let Verdict::Exact(OrbitLabel::Martinet { length, sign }) = sub.verdict else {
                unreachable!("codimension-two classification is always exact");
            };
            report.verdict = Verdict::Exact(OrbitLabel::ReducedMartinet {
                rank: r,
                length,
                sign,
            });
            report.invariants.length_sign = sub.invariants.length_sign;
            report.canonical = sub.canonical.map(|c| embed(&c, n));
            notes.push("complete invariants on the support: Martinet length and sign".into());
        } else {
            let reduced_fp = fingerprint(&red.reduced);
            let hits = match_catalog(&reduced_fp, r, k);
            report.verdict = catalog_verdict(&hits, r);
            if let [entry] = hits.as_slice() {
                report.canonical = Some(embed(&entry.representative, n));
            }
            if hits.len() > 1 {
                notes.push("several catalog entries share this fingerprint".into());
            }
        }
    } else {
        let hits = match_catalog(&fp, n, k);
        report.verdict = catalog_verdict(&hits, n);
        if let [entry] = hits.as_slice() {
            report.canonical = Some(entry.representative.clone());
            report.components = entry.components;
            notes.push(format!("fingerprint matches catalog entry {}", entry.name));
        }
        if hits.len() > 1 {
            notes.push("several catalog entries share this fingerprint".into());
        }
        if k % 2 == 0 && n % 2 == 1 {
            // −Id fixes even-degree forms and reverses orientation in odd dimension
            report.components = Some(1);
            notes.push("−Id is an orientation-reversing stabilizer element".into());
        }
    }
    if report.verdict == Verdict::Unknown {
        notes.push("no complete invariant or unique catalog match; invariants reported".into());
    }
    if report.components.is_none() {
        notes.push("component count undetermined".into());
    }
    report.notes = notes;
    Ok(report)
}
