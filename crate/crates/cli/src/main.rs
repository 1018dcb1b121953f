use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use qigalab::harness::config::{Algorithm, ExperimentConfig, FitnessSource};
use qigalab::harness::emit::{emit_fig7, emit_table2};
use qigalab::harness::{run_experiment, ExperimentOutput};
use qigalab::numeric::fmt_sig6;
use qigalab::propagation::{self_check, ORACLE_POPULATION_CAP};
use qigalab::schema::Schema;
use qigalab::{Boundary, QuantumChromosome, QubitGene, RotationLookupTable};

const OUT_ENV: &str = "QIGALAB_OUT";

#[derive(Parser, Debug)]
#[command(
    name = "qigalab",
    version,
    about = "Quantum-inspired GA experiments and schema statistics"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// TOML experiment configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Base seed; replication k uses seed + k.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,
    /// Number of replications.
    #[arg(long, global = true, value_name = "INT")]
    runs: Option<usize>,
    /// Schema to track (repeatable); padded with `*` to the chromosome length.
    #[arg(long = "schema", global = true, value_name = "STRING")]
    schemata: Vec<String>,
    /// Knot file (`x y` per line) replacing the built-in landscape.
    #[arg(long, global = true, value_name = "PATH")]
    knots: Option<PathBuf>,
    /// Spline end condition: natural or not-a-knot.
    #[arg(long, global = true, value_name = "KIND")]
    boundary: Option<Boundary>,
    /// Rotation lookup table file for QIGA.
    #[arg(long, global = true, value_name = "PATH")]
    lookup_table: Option<PathBuf>,
    /// Output directory (overrides QIGALAB_OUT and the config file).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "ALG")]
    algorithm: Option<Algorithm>,
    /// Plot the running best instead of each generation's best.
    #[arg(long, global = true)]
    running_best: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every configured algorithm and replication and write all CSVs.
    RunExperiment,
    /// Run only the simple GA.
    RunSga,
    /// Run only the QIGA.
    RunQiga,
    /// Static fitness of schemata on the landscape.
    SchemaFitness {
        #[arg(required = true)]
        schemata: Vec<String>,
        #[arg(long, default_value_t = 20)]
        bits: usize,
    },
    /// Best schemata ranked by static fitness.
    Table2 {
        #[arg(long, default_value_t = 20)]
        bits: usize,
        #[arg(long, default_value_t = 5)]
        max_order: usize,
        #[arg(long, default_value_t = 4)]
        max_defining_length: usize,
        #[arg(long, default_value_t = 6)]
        top: usize,
    },
    /// Sampling distribution of one quantum chromosome over the landscape domain.
    ///
    /// Genes are given either as a string over `0`, `1`, `+` (equal
    /// superposition), e.g. `0++++`, or as a comma-separated list whose items
    /// are `0`, `1`, `+` or the probability of observing 1, e.g. `0,0.25,+`.
    SamplingDist { genes: String },
    /// Compare the closed-form mean and variance with the subset-sum oracle.
    PropagationCheck {
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 12)]
        max_population: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qigalab: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let c = &cli.common;
    match &cli.command {
        Command::RunExperiment => experiment(c, None),
        Command::RunSga => experiment(c, Some(Algorithm::Sga)),
        Command::RunQiga => experiment(c, Some(Algorithm::Qiga)),
        Command::SchemaFitness { schemata, bits } => {
            let f = build_config(c)?.landscape()?;
            let mut out = String::from("schema,order,defining_length,fitness\n");
            for text in schemata {
                let s = Schema::parse_padded(text, *bits)
                    .with_context(|| format!("schema {text:?}"))?;
                let fit = s.fitness(&f)?;
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    s.compact(),
                    s.order(),
                    s.defining_length(),
                    fmt_sig6(fit)
                ));
            }
            emit(c, "schema_fitness.csv", &out)
        }
        Command::Table2 {
            bits,
            max_order,
            max_defining_length,
            top,
        } => {
            let f = build_config(c)?.landscape()?;
            let csv = emit_table2(&f, *bits, *max_order, *max_defining_length, *top)?;
            emit(c, "table2.csv", &csv)
        }
        Command::SamplingDist { genes } => {
            let f = build_config(c)?.landscape()?;
            let q = parse_genes(genes)?;
            let csv = emit_fig7(&q, f.lo(), f.hi())?;
            emit(c, "fig7_sampling.csv", &csv)
        }
        Command::PropagationCheck {
            instances,
            max_population,
            tolerance,
        } => {
            if *max_population > ORACLE_POPULATION_CAP {
                bail!("--max-population {max_population} exceeds the oracle cap {ORACLE_POPULATION_CAP}");
            }
            let seed = c.seed.unwrap_or(1);
            let r = self_check(*instances, *max_population, seed)?;
            println!(
                "instances={} max_population={} seed={} max_expected_error={:e} max_variance_error={:e}",
                r.instances, max_population, seed, r.max_expected_error, r.max_variance_error
            );
            if r.max_error() > *tolerance {
                bail!(
                    "closed forms disagree with the oracle by {:e} (tolerance {tolerance:e})",
                    r.max_error()
                );
            }
            println!("ok");
            Ok(())
        }
    }
}

/// Config file first, then the command-line overrides on top.
fn build_config(c: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &c.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = c.seed {
        cfg.base_seed = s;
    }
    if let Some(r) = c.runs {
        cfg.replications = r;
    }
    if !c.schemata.is_empty() {
        cfg.schemata = c.schemata.clone();
    }
    if let Some(k) = &c.knots {
        cfg.fitness = FitnessSource::KnotFile(k.clone());
    }
    if let Some(b) = c.boundary {
        cfg.boundary = b;
    }
    if let Some(t) = &c.lookup_table {
        cfg.qiga.lookup_table = RotationLookupTable::read(t)?;
    }
    if let Some(a) = c.algorithm {
        cfg.algorithm = a;
    }
    if c.running_best {
        cfg.running_best = true;
    }
    if let Some(dir) = out_override(c) {
        cfg.out_dir = dir;
    }
    Ok(cfg)
}

fn out_override(c: &Common) -> Option<PathBuf> {
    c.out.clone().or_else(|| {
        std::env::var_os(OUT_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}

fn experiment(c: &Common, force: Option<Algorithm>) -> Result<()> {
    let mut cfg = build_config(c)?;
    if let Some(a) = force {
        if c.algorithm.is_some_and(|given| given != a) {
            bail!("--algorithm conflicts with the chosen subcommand");
        }
        cfg.algorithm = a;
    }
    let ExperimentOutput { data, files } = run_experiment(&cfg)?;
    for run in data.sga.iter().chain(&data.qiga) {
        println!(
            "{} run {:>2} seed {:>6}: best {} = {}",
            run.algorithm,
            run.run,
            run.seed,
            run.best_so_far,
            fmt_sig6(
                run.generations
                    .iter()
                    .map(|g| g.best_so_far)
                    .fold(f64::MIN, f64::max)
            ),
        );
    }
    println!("wrote {} files to {}", files.len(), cfg.out_dir.display());
    Ok(())
}

/// Writes `csv` to stdout, or to `<dir>/<name>` when an output directory was
/// given on the command line or through the environment.
fn emit(c: &Common, name: &str, csv: &str) -> Result<()> {
    match out_override(c) {
        Some(dir) => {
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = Path::new(&dir).join(name);
            fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn parse_genes(text: &str) -> Result<QuantumChromosome> {
    let items: Vec<String> = if text.contains(',') {
        text.split(',').map(|s| s.trim().to_string()).collect()
    } else {
        text.chars().map(String::from).collect()
    };
    if items.is_empty() || items.iter().any(String::is_empty) {
        bail!("empty gene in {text:?}");
    }
    let genes = items
        .iter()
        .map(|item| match item.as_str() {
            "0" => Ok(QubitGene::zero()),
            "1" => Ok(QubitGene::one()),
            "+" => Ok(QubitGene::superposition()),
            other => {
                let p: f64 = other
                    .parse()
                    .with_context(|| format!("gene {other:?} is not 0, 1, + or a probability"))?;
                if !(0.0..=1.0).contains(&p) {
                    bail!("gene probability {p} outside [0, 1]");
                }
                Ok(QubitGene::new((1.0 - p).sqrt(), p.sqrt())?)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuantumChromosome::new(genes))
}
