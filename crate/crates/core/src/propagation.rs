//! Statistics of the match count `L`: the number of chromosomes in a quantum
//! population whose observation matches a schema.
//!
//! Observations of different chromosomes are independent, so `L` is a sum of
//! independent Bernoulli variables with success probabilities
//! `pᵢ = M(qᵢ, S)`, i.e. a Poisson-binomial variable. The `*_oracle` functions
//! evaluate the subset sums over all `2^N` match patterns literally and are
//! kept as a reference for the closed forms.

use crate::chromosome::BinaryChromosome;
use crate::error::{Error, Result};
use crate::qubit::QuantumPopulation;
use crate::schema::Schema;

/// Population size cap for the subset-sum oracles (cost `N · 2^N`).
pub const ORACLE_POPULATION_CAP: usize = 20;

/// Mean, variance and (optionally) full distribution of the match count.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchCountStats {
    pub expected: f64,
    pub variance: f64,
    pub pmf: Option<Vec<f64>>,
}

impl MatchCountStats {
    pub fn from_probabilities(p: &[f64]) -> Self {
        Self {
            expected: expected_from_probabilities(p),
            variance: variance_from_probabilities(p),
            pmf: None,
        }
    }

    pub fn with_pmf(p: &[f64]) -> Self {
        Self {
            pmf: Some(pmf_from_probabilities(p)),
            ..Self::from_probabilities(p)
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.max(0.0).sqrt()
    }
}

/// `M(qᵢ, S)` for every chromosome of the population.
pub fn match_probabilities(q: &QuantumPopulation, s: &Schema) -> Result<Vec<f64>> {
    q.chromosomes()
        .iter()
        .map(|c| s.match_probability(c))
        .collect()
}

pub fn expected_from_probabilities(p: &[f64]) -> f64 {
    p.iter().sum()
}

pub fn variance_from_probabilities(p: &[f64]) -> f64 {
    p.iter().map(|p| p * (1.0 - p)).sum()
}

/// Poisson-binomial PMF by folding one Bernoulli at a time into the running
/// count distribution; `O(N²)`.
pub fn pmf_from_probabilities(p: &[f64]) -> Vec<f64> {
    let mut pmf = Vec::with_capacity(p.len() + 1);
    pmf.push(1.0);
    for &pi in p {
        pmf.push(0.0);
        for k in (1..pmf.len()).rev() {
            pmf[k] = pmf[k] * (1.0 - pi) + pmf[k - 1] * pi;
        }
        pmf[0] *= 1.0 - pi;
    }
    pmf
}

fn check_oracle_size(n: usize) -> Result<()> {
    if n > ORACLE_POPULATION_CAP {
        return Err(Error::TooLarge {
            what: "oracle population",
            size: n,
            cap: ORACLE_POPULATION_CAP,
        });
    }
    Ok(())
}

/// `Σ_w w^power · Σ_{|C| = w} Π_{j∈C} pⱼ Π_{k∉C} (1 − p_k)`, grouped by `w`
/// exactly as written: outer loop over counts, inner loop over the subsets of
/// that size.
fn subset_moment(p: &[f64], power: i32) -> f64 {
    let n = p.len();
    let mut total = 0.0;
    for w in 0..=n {
        let mut bucket = 0.0;
        for subset in 0u32..(1u32 << n) {
            if subset.count_ones() as usize != w {
                continue;
            }
            // empty products are 1
            let mut prod = 1.0;
            for (j, &pj) in p.iter().enumerate() {
                prod *= if subset >> j & 1 == 1 { pj } else { 1.0 - pj };
            }
            bucket += prod;
        }
        total += (w as f64).powi(power) * bucket;
    }
    total
}

/// `E(L)` by literal subset enumeration. Refuses populations above [`ORACLE_POPULATION_CAP`].
pub fn expected_oracle_from_probabilities(p: &[f64]) -> Result<f64> {
    check_oracle_size(p.len())?;
    Ok(subset_moment(p, 1))
}

/// `V(L) = E(L²) − E(L)²` by literal subset enumeration.
pub fn variance_oracle_from_probabilities(p: &[f64]) -> Result<f64> {
    check_oracle_size(p.len())?;
    let e = subset_moment(p, 1);
    Ok(subset_moment(p, 2) - e * e)
}

pub fn expected_matches_oracle(q: &QuantumPopulation, s: &Schema) -> Result<f64> {
    check_oracle_size(q.len())?;
    expected_oracle_from_probabilities(&match_probabilities(q, s)?)
}

pub fn variance_matches_oracle(q: &QuantumPopulation, s: &Schema) -> Result<f64> {
    check_oracle_size(q.len())?;
    variance_oracle_from_probabilities(&match_probabilities(q, s)?)
}

/// `E(L) = Σ M(qᵢ, S)`.
pub fn expected_matches(q: &QuantumPopulation, s: &Schema) -> Result<f64> {
    Ok(expected_from_probabilities(&match_probabilities(q, s)?))
}

/// `V(L) = Σ M(qᵢ, S)(1 − M(qᵢ, S))`.
pub fn variance_matches(q: &QuantumPopulation, s: &Schema) -> Result<f64> {
    Ok(variance_from_probabilities(&match_probabilities(q, s)?))
}

/// `P(L = k)` for `k = 0..=N`.
pub fn match_count_pmf(q: &QuantumPopulation, s: &Schema) -> Result<Vec<f64>> {
    Ok(pmf_from_probabilities(&match_probabilities(q, s)?))
}

pub fn match_count_stats(q: &QuantumPopulation, s: &Schema) -> Result<MatchCountStats> {
    Ok(MatchCountStats::from_probabilities(&match_probabilities(
        q, s,
    )?))
}

/// Number of chromosomes in `population` matching `s`.
pub fn count_matches(population: &[BinaryChromosome], s: &Schema) -> Result<usize> {
    let mut n = 0;
    for c in population {
        if s.matches(c)? {
            n += 1;
        }
    }
    Ok(n)
}

/// Outcome of [`self_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfCheck {
    pub instances: usize,
    pub max_expected_error: f64,
    pub max_variance_error: f64,
}

impl SelfCheck {
    pub fn max_error(&self) -> f64 {
        self.max_expected_error.max(self.max_variance_error)
    }
}

/// Compares the closed forms with the subset-sum oracles on `instances`
/// random populations of up to `max_population` chromosomes and up to 8 genes.
/// A quarter of the genes are basis states so that zero and one
/// probabilities are exercised.
pub fn self_check(instances: usize, max_population: usize, seed: u64) -> Result<SelfCheck> {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::qubit::{QuantumChromosome, QubitGene};
    use crate::schema::Symbol;

    if max_population == 0 {
        return Err(Error::InvalidArgument(
            "population size bound must be at least 1".into(),
        ));
    }
    check_oracle_size(max_population)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SelfCheck {
        instances,
        max_expected_error: 0.0,
        max_variance_error: 0.0,
    };
    for _ in 0..instances {
        let n = rng.random_range(1..=max_population);
        let m = rng.random_range(1..=8usize);
        let chromosomes = (0..n)
            .map(|_| {
                let genes = (0..m)
                    .map(|_| match rng.random_range(0..8u8) {
                        0 => QubitGene::zero(),
                        1 => QubitGene::one(),
                        _ => QubitGene::from_angle(rng.random::<f64>() * std::f64::consts::TAU),
                    })
                    .collect();
                QuantumChromosome::new(genes)
            })
            .collect();
        let q = QuantumPopulation::new(chromosomes)?;
        let s = Schema::new(
            (0..m)
                .map(|_| match rng.random_range(0..3u8) {
                    0 => Symbol::Zero,
                    1 => Symbol::One,
                    _ => Symbol::Any,
                })
                .collect(),
        );
        let p = match_probabilities(&q, &s)?;
        let de = (expected_from_probabilities(&p) - expected_oracle_from_probabilities(&p)?).abs();
        let dv = (variance_from_probabilities(&p) - variance_oracle_from_probabilities(&p)?).abs();
        report.max_expected_error = report.max_expected_error.max(de);
        report.max_variance_error = report.max_variance_error.max(dv);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{QuantumChromosome, QubitGene};
    use proptest::prelude::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn self_check_agrees() {
        let r = self_check(50, 10, 1).unwrap();
        assert_eq!(r.instances, 50);
        assert!(r.max_error() < 1e-9, "{r:?}");
        assert!(self_check(1, 0, 1).is_err());
        assert!(self_check(1, 40, 1).is_err());
    }

    #[test]
    fn two_chromosome_example() {
        let p = [0.5, 0.25];
        // P(L=0)=0.375, P(L=1)=0.5, P(L=2)=0.125
        let pmf = pmf_from_probabilities(&p);
        for (a, b) in pmf.iter().zip([0.375, 0.5, 0.125]) {
            assert!((a - b).abs() < EPS);
        }
        assert!((expected_from_probabilities(&p) - 0.75).abs() < EPS);
        assert!((expected_oracle_from_probabilities(&p).unwrap() - 0.75).abs() < EPS);
        assert!((variance_from_probabilities(&p) - 0.4375).abs() < EPS);
        assert!((variance_oracle_from_probabilities(&p).unwrap() - 0.4375).abs() < EPS);
    }

    #[test]
    fn degenerate_populations() {
        for n in 1..=6 {
            let ones = vec![1.0; n];
            let zeros = vec![0.0; n];
            assert_eq!(expected_oracle_from_probabilities(&ones).unwrap(), n as f64);
            assert_eq!(expected_from_probabilities(&ones), n as f64);
            assert_eq!(expected_oracle_from_probabilities(&zeros).unwrap(), 0.0);
            assert_eq!(expected_from_probabilities(&zeros), 0.0);
            assert!(variance_oracle_from_probabilities(&ones).unwrap().abs() < EPS);
            assert_eq!(variance_from_probabilities(&ones), 0.0);
        }
        let mixed = [1.0, 0.0, 1.0];
        assert_eq!(variance_from_probabilities(&mixed), 0.0);
        assert!(variance_oracle_from_probabilities(&mixed).unwrap().abs() < EPS);
        assert!((variance_oracle_from_probabilities(&[0.5]).unwrap() - 0.25).abs() < EPS);
        assert!((variance_from_probabilities(&[0.5; 10]) - 2.5).abs() < EPS);
    }

    #[test]
    fn pmf_small_cases() {
        assert_eq!(pmf_from_probabilities(&[1.0]), vec![0.0, 1.0]);
        let b = pmf_from_probabilities(&[0.5; 3]);
        for (a, e) in b.iter().zip([0.125, 0.375, 0.375, 0.125]) {
            assert!((a - e).abs() < EPS);
        }
        assert_eq!(pmf_from_probabilities(&[]), vec![1.0]);
    }

    #[test]
    fn oracle_cap() {
        assert!(matches!(
            expected_oracle_from_probabilities(&[0.5; 21]),
            Err(Error::TooLarge { .. })
        ));
        let q = QuantumPopulation::superposition(21, 2);
        let s = Schema::wildcard(2);
        assert!(variance_matches_oracle(&q, &s).is_err());
        assert!(expected_matches(&q, &s).is_ok());
    }

    #[test]
    fn population_level_wrappers() {
        let q = QuantumPopulation::new(vec![
            QuantumChromosome::new(vec![QubitGene::superposition(), QubitGene::one()]),
            QuantumChromosome::new(vec![
                QubitGene::from_angle(std::f64::consts::FRAC_PI_3),
                QubitGene::one(),
            ]),
        ])
        .unwrap();
        let s: Schema = "11".parse().unwrap();
        // p = (0.5, 0.75)
        assert!((expected_matches(&q, &s).unwrap() - 1.25).abs() < EPS);
        assert!((variance_matches(&q, &s).unwrap() - (0.25 + 0.1875)).abs() < EPS);
        let pmf = match_count_pmf(&q, &s).unwrap();
        assert!((pmf[2] - 0.375).abs() < EPS);
        assert!(expected_matches(&q, &"1".parse().unwrap()).is_err());
    }

    #[test]
    fn counting() {
        let pop: Vec<BinaryChromosome> = ["101", "100", "001"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(count_matches(&pop, &"10*".parse().unwrap()).unwrap(), 2);
        assert_eq!(count_matches(&pop, &Schema::wildcard(3)).unwrap(), 3);
        assert!(count_matches(&pop, &"10".parse().unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn closed_forms_match_oracle(p in prop::collection::vec(0.0f64..=1.0, 1..=12)) {
            let e = expected_from_probabilities(&p);
            let v = variance_from_probabilities(&p);
            prop_assert!((e - expected_oracle_from_probabilities(&p).unwrap()).abs() < 1e-9);
            prop_assert!((v - variance_oracle_from_probabilities(&p).unwrap()).abs() < 1e-9);
            let n = p.len() as f64;
            prop_assert!(e >= 0.0 && e <= n);
            prop_assert!(v >= 0.0 && v <= n / 4.0 + 1e-9);
        }

        #[test]
        fn pmf_moments(p in prop::collection::vec(0.0f64..=1.0, 0..=60)) {
            let pmf = pmf_from_probabilities(&p);
            let total: f64 = pmf.iter().sum();
            let mean: f64 = pmf.iter().enumerate().map(|(k, q)| k as f64 * q).sum();
            let second: f64 = pmf.iter().enumerate().map(|(k, q)| (k * k) as f64 * q).sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
            prop_assert!((mean - expected_from_probabilities(&p)).abs() < 1e-9);
            prop_assert!((second - mean * mean - variance_from_probabilities(&p)).abs() < 1e-9);
        }

        #[test]
        fn zero_variance_iff_degenerate(bits in prop::collection::vec(any::<bool>(), 1..=10), k in 0usize..10, mid in 0.01f64..0.99) {
            let mut p: Vec<f64> = bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
            prop_assert_eq!(variance_from_probabilities(&p), 0.0);
            let k = k % p.len();
            p[k] = mid;
            prop_assert!(variance_from_probabilities(&p) > 0.0);
        }
    }
}
