//! Quantum-Inspired Genetic Algorithm.
//!
//! ```text
//! t ← 0; initialize Q(0); P(0) ← observe Q(0); evaluate; store best b
//! while t < max_generations:
//!     t ← t + 1
//!     P(t) ← observe Q(t−1); evaluate
//!     Q(t) ← rotate every gene of Q(t−1) toward b via the lookup table
//!     store the best of P(t) into b if it improves on b
//! ```
//!
//! `b` is the best solution seen so far; it is never replaced by a worse one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chromosome::BinaryChromosome;
use crate::error::{Error, Result};
use crate::lookup::RotationLookupTable;
use crate::qubit::QuantumPopulation;
use crate::snapshot::GenerationSnapshot;

#[derive(Debug, Clone, PartialEq)]
pub struct QigaConfig {
    pub population_size: usize,
    pub chromosome_length: usize,
    pub max_generations: usize,
    pub lookup_table: RotationLookupTable,
    pub rng_seed: u64,
}

impl Default for QigaConfig {
    fn default() -> Self {
        Self {
            population_size: 10,
            chromosome_length: 20,
            max_generations: 160,
            lookup_table: RotationLookupTable::default(),
            rng_seed: 0,
        }
    }
}

impl QigaConfig {
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
        if self.max_generations < 1 {
            v.push(format!("{prefix}max_generations must be at least 1"));
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations("qiga.");
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(v))
        }
    }
}

/// `N` chromosomes of `m` genes in uniform superposition.
pub fn init_population(n: usize, m: usize) -> QuantumPopulation {
    QuantumPopulation::superposition(n, m)
}

/// Rotates every gene `gᵢⱼ` by `lookup_delta(xᵢⱼ, bⱼ, f(xᵢ) ≥ f(b), gᵢⱼ)`.
pub fn update_population(
    q: &QuantumPopulation,
    observed: &[BinaryChromosome],
    fitnesses: &[f64],
    best: &BinaryChromosome,
    best_fitness: f64,
    table: &RotationLookupTable,
) -> Result<QuantumPopulation> {
    if observed.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: q.len(),
            actual: observed.len(),
        });
    }
    if fitnesses.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: q.len(),
            actual: fitnesses.len(),
        });
    }
    let m = q.chromosome_length();
    if best.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: best.len(),
        });
    }
    if let Some(bad) = observed.iter().find(|x| x.len() != m) {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: bad.len(),
        });
    }

    let mut next = q.clone();
    for ((chromosome, x), &fx) in next
        .chromosomes_mut()
        .iter_mut()
        .zip(observed)
        .zip(fitnesses)
    {
        let better = fx >= best_fitness;
        for ((gene, &xb), &bb) in chromosome
            .genes_mut()
            .iter_mut()
            .zip(x.bits())
            .zip(best.bits())
        {
            let theta = table.lookup_delta(xb, bb, better, gene);
            if theta != 0.0 {
                *gene = gene.rotate(theta);
            }
        }
    }
    Ok(next)
}

/// One generation of a QIGA run.
#[derive(Debug, Clone, PartialEq)]
pub struct QigaGeneration {
    /// Observed classical population `P(t)`.
    pub snapshot: GenerationSnapshot,
    /// `Q(t)` after this generation's update; `Q(0)` for generation 0.
    pub quantum: QuantumPopulation,
    pub best_so_far: BinaryChromosome,
    pub best_so_far_fitness: f64,
}

pub fn run_qiga<F>(config: &QigaConfig, fitness: F) -> Result<Vec<QigaGeneration>>
where
    F: Fn(&BinaryChromosome) -> f64,
{
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut q = init_population(config.population_size, config.chromosome_length);

    let observed = q.observe(&mut rng);
    let fitnesses: Vec<f64> = observed.iter().map(&fitness).collect();
    let snapshot = GenerationSnapshot::new(0, observed, fitnesses);
    let mut best = snapshot.best.clone();
    let mut best_fitness = snapshot.best_fitness;

    let mut history = Vec::with_capacity(config.max_generations + 1);
    history.push(QigaGeneration {
        snapshot,
        quantum: q.clone(),
        best_so_far: best.clone(),
        best_so_far_fitness: best_fitness,
    });

    for generation in 1..=config.max_generations {
        let observed = q.observe(&mut rng);
        let fitnesses: Vec<f64> = observed.iter().map(&fitness).collect();
        q = update_population(
            &q,
            &observed,
            &fitnesses,
            &best,
            best_fitness,
            &config.lookup_table,
        )?;
        let snapshot = GenerationSnapshot::new(generation, observed, fitnesses);
        if snapshot.best_fitness > best_fitness {
            best = snapshot.best.clone();
            best_fitness = snapshot.best_fitness;
        }
        history.push(QigaGeneration {
            snapshot,
            quantum: q.clone(),
            best_so_far: best.clone(),
            best_so_far_fitness: best_fitness,
        });
    }
    Ok(history)
}
