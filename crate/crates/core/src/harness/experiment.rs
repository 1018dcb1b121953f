use std::fmt;

use rayon::prelude::*;

use crate::chromosome::BinaryChromosome;
use crate::error::Result;
use crate::propagation::{count_matches, match_count_stats};
use crate::qiga::{run_qiga, QigaConfig};
use crate::schema::Schema;
use crate::sga::{run_sga, SgaConfig};
use crate::snapshot::running_best;
use crate::spline::SplineFitness;

use super::config::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmTag {
    Sga,
    Qiga,
}

impl fmt::Display for AlgorithmTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgorithmTag::Sga => "sga",
            AlgorithmTag::Qiga => "qiga",
        })
    }
}

/// Match count of one schema in one generation of one run.
///
/// For QIGA rows `expected`/`variance` describe the quantum population after
/// that generation's update (the state that produces the next generation's
/// observations); generation 0 describes the initial superposition. SGA rows
/// carry only the observed count.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationRecord {
    pub generation: usize,
    pub run: usize,
    pub algorithm: AlgorithmTag,
    pub schema: String,
    pub expected: Option<f64>,
    pub variance: Option<f64>,
    pub observed: usize,
}

/// Per-generation fitness summary of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub best_so_far: f64,
    pub best: BinaryChromosome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub algorithm: AlgorithmTag,
    pub run: usize,
    pub seed: u64,
    pub population_size: usize,
    pub generations: Vec<GenerationRecord>,
    /// Indexed `[schema][generation]`.
    pub propagation: Vec<Vec<PropagationRecord>>,
    /// Best chromosome over the whole run.
    pub best_so_far: BinaryChromosome,
}

impl RunTrace {
    /// First generation whose best individual is `target`. For the landscape's
    /// optimum this is the first generation in which it was observed at all.
    pub fn first_hit(&self, target: &BinaryChromosome) -> Option<usize> {
        self.generations
            .iter()
            .find(|g| &g.best == target)
            .map(|g| g.generation)
    }
}

/// All traces of an experiment, in replication order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentData {
    pub schemata: Vec<String>,
    pub sga: Vec<RunTrace>,
    pub qiga: Vec<RunTrace>,
    pub running_best: bool,
}

pub fn trace_sga(
    config: &SgaConfig,
    f: &SplineFitness,
    schemata: &[Schema],
    run: usize,
) -> Result<RunTrace> {
    let snapshots = run_sga(config, |c| f.chromosome_fitness(c))?;
    let rb = running_best(&snapshots);
    let mut propagation = vec![Vec::with_capacity(snapshots.len()); schemata.len()];
    for s in &snapshots {
        for (k, schema) in schemata.iter().enumerate() {
            propagation[k].push(PropagationRecord {
                generation: s.generation,
                run,
                algorithm: AlgorithmTag::Sga,
                schema: schema.compact(),
                expected: None,
                variance: None,
                observed: count_matches(&s.population, schema)?,
            });
        }
    }
    let best_so_far = snapshots
        .iter()
        .fold(&snapshots[0], |acc, s| {
            if s.best_fitness > acc.best_fitness {
                s
            } else {
                acc
            }
        })
        .best
        .clone();
    let generations = snapshots
        .iter()
        .zip(rb)
        .map(|(s, b)| GenerationRecord {
            generation: s.generation,
            best_fitness: s.best_fitness,
            mean_fitness: s.mean_fitness,
            best_so_far: b,
            best: s.best.clone(),
        })
        .collect();
    Ok(RunTrace {
        algorithm: AlgorithmTag::Sga,
        run,
        seed: config.rng_seed,
        population_size: config.population_size,
        generations,
        propagation,
        best_so_far,
    })
}

pub fn trace_qiga(
    config: &QigaConfig,
    f: &SplineFitness,
    schemata: &[Schema],
    run: usize,
) -> Result<RunTrace> {
    let history = run_qiga(config, |c| f.chromosome_fitness(c))?;
    let mut propagation = vec![Vec::with_capacity(history.len()); schemata.len()];
    for g in &history {
        for (k, schema) in schemata.iter().enumerate() {
            let stats = match_count_stats(&g.quantum, schema)?;
            propagation[k].push(PropagationRecord {
                generation: g.snapshot.generation,
                run,
                algorithm: AlgorithmTag::Qiga,
                schema: schema.compact(),
                expected: Some(stats.expected),
                variance: Some(stats.variance),
                observed: count_matches(&g.snapshot.population, schema)?,
            });
        }
    }
    let generations = history
        .iter()
        .map(|g| GenerationRecord {
            generation: g.snapshot.generation,
            best_fitness: g.snapshot.best_fitness,
            mean_fitness: g.snapshot.mean_fitness,
            best_so_far: g.best_so_far_fitness,
            best: g.snapshot.best.clone(),
        })
        .collect();
    let best_so_far = history[history.len() - 1].best_so_far.clone();
    Ok(RunTrace {
        algorithm: AlgorithmTag::Qiga,
        run,
        seed: config.rng_seed,
        population_size: config.population_size,
        generations,
        propagation,
        best_so_far,
    })
}

/// Runs every replication; replication `k` uses seed `base_seed + k` for both
/// algorithms. Replications run in parallel and results are collected in order.
pub fn execute(config: &ExperimentConfig) -> Result<ExperimentData> {
    config.validate()?;
    let f = config.landscape()?;
    let sga_schemata = config.schemata_for(config.sga.chromosome_length)?;
    let qiga_schemata = config.schemata_for(config.qiga.chromosome_length)?;

    let runs: Vec<(Option<RunTrace>, Option<RunTrace>)> = (0..config.replications)
        .into_par_iter()
        .map(|k| -> Result<_> {
            let seed = config.base_seed.wrapping_add(k as u64);
            let sga = if config.algorithm.runs_sga() {
                let cfg = SgaConfig {
                    rng_seed: seed,
                    ..config.sga.clone()
                };
                Some(trace_sga(&cfg, &f, &sga_schemata, k)?)
            } else {
                None
            };
            let qiga = if config.algorithm.runs_qiga() {
                let cfg = QigaConfig {
                    rng_seed: seed,
                    ..config.qiga.clone()
                };
                Some(trace_qiga(&cfg, &f, &qiga_schemata, k)?)
            } else {
                None
            };
            Ok((sga, qiga))
        })
        .collect::<Result<_>>()?;

    let (sga, qiga): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
    let primary_len = if config.algorithm.runs_qiga() {
        config.qiga.chromosome_length
    } else {
        config.sga.chromosome_length
    };
    Ok(ExperimentData {
        schemata: config
            .schemata_for(primary_len)?
            .iter()
            .map(Schema::compact)
            .collect(),
        sga: sga.into_iter().flatten().collect(),
        qiga: qiga.into_iter().flatten().collect(),
        running_best: config.running_best,
    })
}

/// Share of QIGA observations that land within `expected ± k·σ` of the
/// quantum population that produced them.
///
/// Observations of generation `t ≥ 1` come from the state recorded at `t − 1`;
/// generation 0 is observed from the initial state recorded at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub cells: usize,
    pub inside: usize,
}

impl Calibration {
    pub fn fraction(&self) -> f64 {
        if self.cells == 0 {
            1.0
        } else {
            self.inside as f64 / self.cells as f64
        }
    }
}

pub fn calibration(runs: &[RunTrace], schema_index: usize, k_sigma: f64) -> Calibration {
    let mut cal = Calibration {
        cells: 0,
        inside: 0,
    };
    for run in runs.iter().filter(|r| r.algorithm == AlgorithmTag::Qiga) {
        let recs = &run.propagation[schema_index];
        for (t, rec) in recs.iter().enumerate() {
            let source = &recs[t.saturating_sub(1)];
            let (Some(e), Some(v)) = (source.expected, source.variance) else {
                continue;
            };
            let half = k_sigma * v.max(0.0).sqrt();
            let o = rec.observed as f64;
            cal.cells += 1;
            // a little slack so deterministic cells (v = 0) compare exactly
            if (o - e).abs() <= half + 1e-9 {
                cal.inside += 1;
            }
        }
    }
    cal
}
