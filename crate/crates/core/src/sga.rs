//! Simple Genetic Algorithm: roulette-wheel selection, one-point crossover and
//! uniform bit-flip mutation with full generational replacement. No elitism and
//! no fitness scaling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chromosome::BinaryChromosome;
use crate::error::{Error, Result};
use crate::snapshot::GenerationSnapshot;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SgaConfig {
    pub population_size: usize,
    pub chromosome_length: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub max_generations: usize,
    pub rng_seed: u64,
}

impl Default for SgaConfig {
    fn default() -> Self {
        Self {
            population_size: 10,
            chromosome_length: 20,
            crossover_prob: 0.9,
            mutation_prob: 0.005,
            max_generations: 160,
            rng_seed: 0,
        }
    }
}

impl SgaConfig {
    /// Every violated constraint, prefixed with `prefix`.
    pub fn violations(&self, prefix: &str) -> Vec<String> {
        let mut v = Vec::new();
        if self.population_size < 1 {
            v.push(format!("{prefix}population_size must be at least 1"));
        }
        if self.chromosome_length < 1 {
            v.push(format!("{prefix}chromosome_length must be at least 1"));
        }
        if self.chromosome_length > 64 {
            v.push(format!("{prefix}chromosome_length must be at most 64"));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            v.push(format!("{prefix}crossover_prob must be in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            v.push(format!("{prefix}mutation_prob must be in [0, 1]"));
        }
        if self.max_generations < 1 {
            v.push(format!("{prefix}max_generations must be at least 1"));
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations("sga.");
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(v))
        }
    }
}

/// Cumulative weights for repeated fitness-proportionate draws.
#[derive(Debug, Clone)]
pub struct RouletteWheel {
    cumulative: Vec<f64>,
}

impl RouletteWheel {
    /// Fails on negative or non-finite weights. All-zero weights give a uniform wheel.
    pub fn new(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty("fitness list"));
        }
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::NegativeFitness { index, value });
        }
        let total: f64 = weights.iter().sum();
        let cumulative = if total > 0.0 {
            weights
                .iter()
                .scan(0.0, |acc, w| {
                    *acc += w;
                    Some(*acc)
                })
                .collect()
        } else {
            (1..=weights.len()).map(|i| i as f64).collect()
        };
        Ok(Self { cumulative })
    }

    pub fn spin<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = self.cumulative[self.cumulative.len() - 1];
        let r = rng.random::<f64>() * total;
        // first slot whose cumulative weight exceeds r; zero-weight slots are never hit
        self.cumulative
            .partition_point(|&c| c <= r)
            .min(self.cumulative.len() - 1)
    }
}

/// Selects one individual with probability proportional to its fitness.
pub fn roulette_select<'a, R: Rng + ?Sized>(
    population: &'a [BinaryChromosome],
    fitnesses: &[f64],
    rng: &mut R,
) -> Result<&'a BinaryChromosome> {
    if population.len() != fitnesses.len() {
        return Err(Error::LengthMismatch {
            expected: population.len(),
            actual: fitnesses.len(),
        });
    }
    let wheel = RouletteWheel::new(fitnesses)?;
    Ok(&population[wheel.spin(rng)])
}

/// Swaps the suffixes starting at `cut`.
pub fn crossover_at(
    a: &BinaryChromosome,
    b: &BinaryChromosome,
    cut: usize,
) -> Result<(BinaryChromosome, BinaryChromosome)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    c1.bits_mut()[cut..].copy_from_slice(&b.bits()[cut..]);
    c2.bits_mut()[cut..].copy_from_slice(&a.bits()[cut..]);
    Ok((c1, c2))
}

/// With probability `p_c`, cuts at a uniform point in `1..m` and swaps suffixes;
/// otherwise returns copies of the parents.
pub fn one_point_crossover<R: Rng + ?Sized>(
    a: &BinaryChromosome,
    b: &BinaryChromosome,
    rng: &mut R,
    p_c: f64,
) -> Result<(BinaryChromosome, BinaryChromosome)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let m = a.len();
    if m < 2 || rng.random::<f64>() >= p_c {
        return Ok((a.clone(), b.clone()));
    }
    let cut = rng.random_range(1..m);
    crossover_at(a, b, cut)
}

/// Flips each bit independently with probability `p_m`.
pub fn uniform_mutation<R: Rng + ?Sized>(
    c: &BinaryChromosome,
    rng: &mut R,
    p_m: f64,
) -> BinaryChromosome {
    let mut out = c.clone();
    for bit in out.bits_mut() {
        if rng.random::<f64>() < p_m {
            *bit = !*bit;
        }
    }
    out
}

fn random_chromosome<R: Rng + ?Sized>(m: usize, rng: &mut R) -> BinaryChromosome {
    BinaryChromosome::new((0..m).map(|_| rng.random::<bool>()).collect())
}

/// Runs the SGA for `max_generations` generations after a random generation 0.
///
/// Roulette weights are `max(f, 0)`: negative objective values never receive
/// selection mass. Snapshots report the raw objective values.
pub fn run_sga<F>(config: &SgaConfig, fitness: F) -> Result<Vec<GenerationSnapshot>>
where
    F: Fn(&BinaryChromosome) -> f64,
{
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let n = config.population_size;
    let m = config.chromosome_length;

    let mut population: Vec<BinaryChromosome> =
        (0..n).map(|_| random_chromosome(m, &mut rng)).collect();
    let mut snapshots = Vec::with_capacity(config.max_generations + 1);

    for generation in 0..=config.max_generations {
        let fitnesses: Vec<f64> = population.iter().map(&fitness).collect();
        snapshots.push(GenerationSnapshot::new(
            generation,
            population.clone(),
            fitnesses.clone(),
        ));
        if generation == config.max_generations {
            break;
        }

        let weights: Vec<f64> = fitnesses.iter().map(|f| f.max(0.0)).collect();
        let wheel = RouletteWheel::new(&weights)?;
        let parents: Vec<&BinaryChromosome> =
            (0..n).map(|_| &population[wheel.spin(&mut rng)]).collect();

        let mut next = Vec::with_capacity(n);
        for pair in parents.chunks(2) {
            match pair {
                [a, b] => {
                    let (c1, c2) = one_point_crossover(a, b, &mut rng, config.crossover_prob)?;
                    next.push(c1);
                    next.push(c2);
                }
                // odd population: the last parent skips crossover
                [a] => next.push((*a).clone()),
                _ => unreachable!(),
            }
        }
        population = next
            .iter()
            .map(|c| uniform_mutation(c, &mut rng, config.mutation_prob))
            .collect();
    }
    Ok(snapshots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snapshot::running_best;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn pop(strs: &[&str]) -> Vec<BinaryChromosome> {
        strs.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn roulette_frequencies() {
        let p = pop(&["00", "01", "10", "11"]);
        let mut r = rng(1);
        let mut counts = [0usize; 4];
        for _ in 0..10_000 {
            let c = roulette_select(&p, &[1.0; 4], &mut r).unwrap();
            counts[c.value() as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 / 1e4 - 0.25).abs() < 0.02, "{counts:?}");
        }

        let p = pop(&["0", "1"]);
        let firsts = (0..10_000)
            .filter(|_| roulette_select(&p, &[3.0, 1.0], &mut r).unwrap().value() == 0)
            .count();
        assert!((firsts as f64 / 1e4 - 0.75).abs() < 0.02);

        let p = pop(&["00", "01", "10"]);
        for _ in 0..1000 {
            assert_eq!(
                roulette_select(&p, &[5.0, 0.0, 0.0], &mut r)
                    .unwrap()
                    .value(),
                0
            );
        }
    }

    #[test]
    fn roulette_edge_cases() {
        let p = pop(&["0", "1"]);
        let mut r = rng(2);
        assert!(matches!(
            roulette_select(&p, &[1.0, -0.5], &mut r),
            Err(Error::NegativeFitness { index: 1, .. })
        ));
        assert!(roulette_select(&p, &[1.0, f64::NAN], &mut r).is_err());
        assert!(roulette_select(&p, &[1.0], &mut r).is_err());
        // all-zero falls back to uniform
        let ones = (0..10_000)
            .filter(|_| roulette_select(&p, &[0.0, 0.0], &mut r).unwrap().value() == 1)
            .count();
        assert!((ones as f64 / 1e4 - 0.5).abs() < 0.02);
    }

    #[test]
    fn crossover_examples() {
        let a: BinaryChromosome = "0000".parse().unwrap();
        let b: BinaryChromosome = "1111".parse().unwrap();
        let (c1, c2) = crossover_at(&a, &b, 2).unwrap();
        assert_eq!(
            (c1.to_string(), c2.to_string()),
            ("0011".into(), "1100".into())
        );
        let mut r = rng(3);
        for _ in 0..100 {
            assert_eq!(
                one_point_crossover(&a, &b, &mut r, 0.0).unwrap(),
                (a.clone(), b.clone())
            );
            assert_eq!(
                one_point_crossover(&a, &a, &mut r, 1.0).unwrap(),
                (a.clone(), a.clone())
            );
            let (c1, c2) = one_point_crossover(&a, &b, &mut r, 1.0).unwrap();
            // a cut strictly inside the string always mixes both parents
            assert!(c1 != a && c1 != b && c2 != a && c2 != b);
        }
        assert!(one_point_crossover(&a, &"111".parse().unwrap(), &mut r, 1.0).is_err());
    }

    #[test]
    fn mutation_extremes_and_rate() {
        let c: BinaryChromosome = "0110100".parse().unwrap();
        let mut r = rng(4);
        assert_eq!(uniform_mutation(&c, &mut r, 0.0), c);
        assert_eq!(uniform_mutation(&c, &mut r, 1.0), c.complement());

        let base = BinaryChromosome::zeros(200);
        let gens = 10_000;
        let flips: usize = (0..gens)
            .map(|_| uniform_mutation(&base, &mut r, 0.005).hamming(&base))
            .sum();
        let mean = flips as f64 / gens as f64;
        assert!((mean - 1.0).abs() < 0.1, "{mean}");
    }

    #[test]
    fn run_is_deterministic_and_shaped() {
        let cfg = SgaConfig {
            rng_seed: 42,
            max_generations: 30,
            ..SgaConfig::default()
        };
        let f = |c: &BinaryChromosome| c.value().count_ones() as f64;
        let a = run_sga(&cfg, f).unwrap();
        let b = run_sga(&cfg, f).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 31);
        for (g, s) in a.iter().enumerate() {
            assert_eq!(s.generation, g);
            assert_eq!(s.population.len(), 10);
            assert!(s.best_fitness >= s.mean_fitness);
        }
        let rb = running_best(&a);
        assert!(rb.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn constant_fitness_keeps_best_constant() {
        let cfg = SgaConfig {
            rng_seed: 5,
            max_generations: 20,
            ..SgaConfig::default()
        };
        let snaps = run_sga(&cfg, |_| 3.0).unwrap();
        assert!(snaps.iter().all(|s| s.best_fitness == 3.0));
    }

    #[test]
    fn without_operators_no_new_alleles_appear() {
        let cfg = SgaConfig {
            rng_seed: 6,
            crossover_prob: 0.0,
            mutation_prob: 0.0,
            max_generations: 25,
            population_size: 7,
            ..SgaConfig::default()
        };
        let snaps = run_sga(&cfg, |_| 1.0).unwrap();
        let initial: std::collections::HashSet<_> = snaps[0].population.iter().cloned().collect();
        for s in &snaps {
            assert_eq!(s.population.len(), 7);
            assert!(s.population.iter().all(|c| initial.contains(c)));
        }
    }

    #[test]
    fn invalid_config_lists_every_violation() {
        let cfg = SgaConfig {
            population_size: 0,
            crossover_prob: 1.5,
            mutation_prob: -0.1,
            ..SgaConfig::default()
        };
        match cfg.validate() {
            Err(Error::InvalidConfig(v)) => assert_eq!(v.len(), 3),
            other => panic!("{other:?}"),
        }
    }
}
