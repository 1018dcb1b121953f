use crate::chromosome::BinaryChromosome;

/// The classical population of one generation together with its fitness summary.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationSnapshot {
    pub generation: usize,
    pub population: Vec<BinaryChromosome>,
    pub fitnesses: Vec<f64>,
    /// Best fitness within this generation's population.
    pub best_fitness: f64,
    pub mean_fitness: f64,
    /// Best individual within this generation's population.
    pub best: BinaryChromosome,
}

impl GenerationSnapshot {
    pub fn new(generation: usize, population: Vec<BinaryChromosome>, fitnesses: Vec<f64>) -> Self {
        assert_eq!(population.len(), fitnesses.len());
        assert!(!population.is_empty(), "empty population");
        let (best_idx, best_fitness) =
            fitnesses
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (i, f)| if f > acc.1 { (i, f) } else { acc },
                );
        let mean_fitness = fitnesses.iter().sum::<f64>() / fitnesses.len() as f64;
        let best = population[best_idx].clone();
        Self {
            generation,
            population,
            fitnesses,
            best_fitness,
            mean_fitness,
            best,
        }
    }
}

/// Running maximum of the per-generation best fitness.
pub fn running_best(snapshots: &[GenerationSnapshot]) -> Vec<f64> {
    snapshots
        .iter()
        .scan(f64::NEG_INFINITY, |best, s| {
            *best = best.max(s.best_fitness);
            Some(*best)
        })
        .collect()
}
