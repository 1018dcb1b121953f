//! Replicated experiments and their CSV artifacts.
//!
//! [`run_experiment`] executes every configured algorithm × replication and
//! writes into the output directory:
//!
//! | file | contents |
//! |------|----------|
//! | `fig5_fitness.csv` | mean best fitness per generation for each algorithm |
//! | `fig6_propagation.csv` | mean match counts and the QIGA `E(L) ± √V(L)` band for the first schema (`fig6_propagation_<k>.csv` for the others) |
//! | `propagation.csv` | every propagation record, long format |
//! | `summary.csv` | per-run best fitness and the generation the optimum was first seen |
//! | `runs/<alg>_run<k>.csv` | per-run, per-generation logs |
//! | `metadata.txt` | the resolved configuration |

pub mod config;
pub mod emit;
pub mod experiment;

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub use config::{Algorithm, ExperimentConfig, FitnessSource};
pub use emit::{emit_fig5, emit_fig6, emit_fig7, emit_table2, table2_rows};
pub use experiment::{
    calibration, execute, AlgorithmTag, Calibration, ExperimentData, PropagationRecord, RunTrace,
};

/// Data and written files of one experiment.
#[derive(Debug)]
pub struct ExperimentOutput {
    pub data: ExperimentData,
    pub files: Vec<PathBuf>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let data = execute(config)?;
    let files = write_outputs(config, &data, &config.out_dir)?;
    Ok(ExperimentOutput { data, files })
}

/// Writes every artifact for `data` into `dir`, creating it if needed.
pub fn write_outputs(
    config: &ExperimentConfig,
    data: &ExperimentData,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let runs_dir = dir.join("runs");
    fs::create_dir_all(&runs_dir).map_err(|e| Error::io(&runs_dir, e))?;

    let mut files = vec![emit::write_file(
        &dir.join("fig5_fitness.csv"),
        &emit_fig5(data),
    )?];
    for k in 0..data.schemata.len() {
        files.push(emit::write_file(
            &dir.join(emit::fig6_file_name(k)),
            &emit_fig6(data, k),
        )?);
    }
    files.push(emit::write_file(
        &dir.join("propagation.csv"),
        &emit::emit_propagation_records(data),
    )?);

    let f = config.landscape()?;
    let m = if config.algorithm.runs_qiga() {
        config.qiga.chromosome_length
    } else {
        config.sga.chromosome_length
    };
    let optimum = if m <= crate::spline::EXHAUSTIVE_BITS_CAP {
        Some(f.best_chromosome_exhaustive(m)?.0)
    } else {
        None
    };
    files.push(emit::write_file(
        &dir.join("summary.csv"),
        &emit::emit_summary(data, optimum.as_ref()),
    )?);

    for run in data.sga.iter().chain(&data.qiga) {
        let path = runs_dir.join(format!("{}_run{:02}.csv", run.algorithm, run.run));
        files.push(emit::write_file(
            &path,
            &emit::emit_run_log(run, &data.schemata),
        )?);
    }

    files.push(emit::write_file(
        &dir.join("metadata.txt"),
        &metadata(config, data),
    )?);
    Ok(files)
}

fn metadata(config: &ExperimentConfig, data: &ExperimentData) -> String {
    let fitness = match &config.fitness {
        FitnessSource::Reference => "reference knots".to_string(),
        FitnessSource::KnotFile(p) => p.display().to_string(),
    };
    let mut s = String::new();
    s.push_str(&format!("algorithm = {}\n", config.algorithm));
    s.push_str(&format!("fitness = {fitness}\n"));
    s.push_str(&format!("boundary = {}\n", config.boundary));
    s.push_str(&format!("replications = {}\n", config.replications));
    s.push_str(&format!(
        "seeds = {}..={}\n",
        config.base_seed,
        config
            .base_seed
            .wrapping_add(config.replications as u64 - 1)
    ));
    s.push_str(&format!("schemata = {}\n", data.schemata.join(" ")));
    s.push_str(&format!(
        "sga = population_size {}, chromosome_length {}, crossover_prob {}, mutation_prob {}, max_generations {}\n",
        config.sga.population_size,
        config.sga.chromosome_length,
        config.sga.crossover_prob,
        config.sga.mutation_prob,
        config.sga.max_generations
    ));
    s.push_str(&format!(
        "qiga = population_size {}, chromosome_length {}, max_generations {}\n",
        config.qiga.population_size, config.qiga.chromosome_length, config.qiga.max_generations
    ));
    s.push_str("fig5 series = ");
    s.push_str(if config.running_best {
        "running best\n"
    } else {
        "per-generation population best\n"
    });
    s.push_str("across-run aggregation = pointwise arithmetic mean per generation\n");
    s.push_str(
        "qiga expected/variance at generation t = quantum state after the update of generation t\n",
    );
    s.push_str("lookup table:\n");
    for line in config.qiga.lookup_table.to_text().lines() {
        s.push_str("  ");
        s.push_str(line);
        s.push('\n');
    }
    s
}
