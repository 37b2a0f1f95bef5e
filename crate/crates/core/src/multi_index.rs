//! Strictly increasing multi-indices labelling the basis of Λᵏ.
//!
//! Indices are 1-based, as in `e¹²³ = e¹ ∧ e² ∧ e³`. The derived `Ord` on the
//! underlying slice is the lexicographic order used for every basis listing.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Box<[u8]>);

impl MultiIndex {
    /// Builds a multi-index from strictly increasing 1-based entries bounded by `n`.
    pub fn new(indices: &[usize], n: usize) -> Result<Self> {
        let ok = indices
            .iter()
            .all(|&i| i >= 1 && i <= n && i <= u8::MAX as usize)
            && indices.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::InvalidIndex {
                indices: indices.to_vec(),
                n,
            });
        }
        Ok(Self::from_sorted_unchecked(
            indices.iter().map(|&i| i as u8),
        ))
    }

    pub fn empty() -> Self {
        MultiIndex(Box::new([]))
    }

    pub(crate) fn from_sorted_unchecked(it: impl IntoIterator<Item = u8>) -> Self {
        MultiIndex(it.into_iter().collect())
    }

    /// Sorts arbitrary entries, returning the sign of the sorting permutation.
    /// Returns `None` when an entry repeats (the wedge monomial vanishes).
    pub fn sort_signed(indices: &[usize]) -> Option<(i8, MultiIndex)> {
        let mut v: Vec<usize> = indices.to_vec();
        let mut sign = 1i8;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) || v.iter().any(|&i| i == 0 || i > u8::MAX as usize) {
            return None;
        }
        Some((
            sign,
            Self::from_sorted_unchecked(v.into_iter().map(|i| i as u8)),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn max_entry(&self) -> usize {
        self.0.last().map_or(0, |&i| i as usize)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.position(i).is_some()
    }

    /// Zero-based slot of entry `i`, if present.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.0.binary_search(&(i as u8)).ok()
    }

    /// Drops the entry at `slot`.
    pub fn remove_slot(&self, slot: usize) -> MultiIndex {
        let mut v = self.0.to_vec();
        v.remove(slot);
        MultiIndex(v.into_boxed_slice())
    }

    /// Replaces the entry at `slot` by `j` and re-sorts with sign.
    pub fn substitute(&self, slot: usize, j: usize) -> Option<(i8, MultiIndex)> {
        if self.contains(j) {
            return if self.0[slot] as usize == j {
                Some((1, self.clone()))
            } else {
                None
            };
        }
        let mut v = self.to_vec();
        v[slot] = j;
        MultiIndex::sort_signed(&v)
    }

    /// Concatenation `self ++ other` sorted, with the Koszul sign of the merge.
    pub fn merge(&self, other: &MultiIndex) -> Option<(i8, MultiIndex)> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut inversions = 0usize;
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    // b[j] jumps over the remaining a-entries
                    inversions += a.len() - i;
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => return None,
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((sign, MultiIndex(out.into_boxed_slice())))
    }

    /// Entries of `1..=n` not in `self`.
    pub fn complement(&self, n: usize) -> MultiIndex {
        Self::from_sorted_unchecked((1..=n as u8).filter(|i| !self.0.contains(i)))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Lexicographically ordered basis of Λᵏ on `n` generators with reverse lookup.
#[derive(Clone, Debug)]
pub struct Basis {
    elements: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
}

impl Basis {
    pub fn new(n: usize, k: usize) -> Self {
        let elements = subsets(n, k);
        let lookup = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Basis { elements, lookup }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &MultiIndex {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &MultiIndex) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &MultiIndex> {
        self.elements.iter()
    }
}

/// All k-subsets of `1..=n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(binomial(n, k));
    if k > n {
        return out;
    }
    let mut cur: Vec<u8> = (1..=k as u8).collect();
    loop {
        out.push(MultiIndex(cur.clone().into_boxed_slice()));
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (cur[i] as usize) < n - (k - 1 - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_out_of_range() {
        assert!(MultiIndex::new(&[2, 1], 3).is_err());
        assert!(MultiIndex::new(&[1, 1], 3).is_err());
        assert!(MultiIndex::new(&[0, 1], 3).is_err());
        assert!(MultiIndex::new(&[1, 4], 3).is_err());
        assert!(MultiIndex::new(&[1, 3], 3).is_ok());
    }

    #[test]
    fn sort_signed_tracks_parity() {
        let (s, m) = MultiIndex::sort_signed(&[2, 1]).unwrap();
        assert_eq!((s, m.to_vec()), (-1, vec![1, 2]));
        let (s, m) = MultiIndex::sort_signed(&[3, 1, 2]).unwrap();
        assert_eq!((s, m.to_vec()), (1, vec![1, 2, 3]));
        assert!(MultiIndex::sort_signed(&[1, 2, 1]).is_none());
    }

    #[test]
    fn merge_sign_matches_sorting() {
        let a = MultiIndex::new(&[2, 5], 6).unwrap();
        let b = MultiIndex::new(&[1, 3, 6], 6).unwrap();
        let (s, m) = a.merge(&b).unwrap();
        let (s2, m2) = MultiIndex::sort_signed(&[2, 5, 1, 3, 6]).unwrap();
        assert_eq!((s, m), (s2, m2));
        assert!(a.merge(&a).is_none());
    }

    #[test]
    fn subsets_are_lexicographic_and_complete() {
        let all = subsets(5, 3);
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(subsets(4, 0), vec![MultiIndex::empty()]);
        assert!(subsets(2, 3).is_empty());
        assert_eq!(binomial(12, 6), 924);
    }
}
