//! Fingerprint histograms of random forms.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classifier::{fingerprint, Fingerprint};
use crate::error::{Error, Result};
use crate::random::uniform_form;

/// Largest accepted number of trials.
pub const MAX_TRIALS: usize = 1_000_000;

/// Stream `trial` of the generator seeded with `seed`. Each trial draws from
/// its own stream, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleStatistics {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub bound: i64,
    pub seed: u64,
    /// Sorted by descending count, ties by fingerprint.
    pub histogram: Vec<(Fingerprint, usize)>,
}

impl SampleStatistics {
    pub fn distinct(&self) -> usize {
        self.histogram.len()
    }
}

/// Fingerprints `trials` forms with independent coefficients uniform in
/// `[-bound, bound]`.
pub fn sample_orbit_statistics(
    n: usize,
    k: usize,
    trials: usize,
    bound: i64,
    seed: u64,
) -> Result<SampleStatistics> {
    if k > n {
        return Err(Error::Degree(format!("degree {k} exceeds dimension {n}")));
    }
    if trials > MAX_TRIALS {
        return Err(Error::Invalid(format!("at most {MAX_TRIALS} trials")));
    }
    if bound < 1 {
        return Err(Error::Invalid("bound must be positive".into()));
    }
    let counts = (0..trials as u64)
        .into_par_iter()
        .map(|t| fingerprint(&uniform_form(&mut trial_rng(seed, t), n, k, bound)))
        .fold(
            BTreeMap::new,
            |mut acc: BTreeMap<Fingerprint, usize>, fp| {
                *acc.entry(fp).or_default() += 1;
                acc
            },
        )
        .reduce(BTreeMap::new, |mut a, b| {
            for (fp, c) in b {
                *a.entry(fp).or_default() += c;
            }
            a
        });
    let mut histogram: Vec<(Fingerprint, usize)> = counts.into_iter().collect();
    histogram.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(SampleStatistics {
        n,
        k,
        trials,
        bound,
        seed,
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_counts_add_up() {
        let a = sample_orbit_statistics(5, 2, 40, 2, 7).unwrap();
        let b = sample_orbit_statistics(5, 2, 40, 2, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.histogram.iter().map(|(_, c)| c).sum::<usize>(), 40);
        assert!(a.histogram.windows(2).all(|w| w[0].1 >= w[1].1));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(sample_orbit_statistics(3, 4, 1, 1, 0).is_err());
        assert!(sample_orbit_statistics(3, 2, MAX_TRIALS + 1, 1, 0).is_err());
        assert!(sample_orbit_statistics(3, 2, 1, 0, 0).is_err());
    }
}
