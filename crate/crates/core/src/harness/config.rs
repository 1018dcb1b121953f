use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lookup::RotationLookupTable;
use crate::qiga::QigaConfig;
use crate::schema::Schema;
use crate::sga::SgaConfig;
use crate::spline::{read_knots, Boundary, SplineFitness, REFERENCE_BOUNDARY, REFERENCE_KNOTS};

/// Building block tracked by default.
pub const DEFAULT_SCHEMA: &str = "01001";
pub const DEFAULT_BASE_SEED: u64 = 2010;
pub const DEFAULT_OUT_DIR: &str = "results";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Sga,
    Qiga,
    #[default]
    Both,
}

impl Algorithm {
    pub fn runs_sga(self) -> bool {
        matches!(self, Algorithm::Sga | Algorithm::Both)
    }

    pub fn runs_qiga(self) -> bool {
        matches!(self, Algorithm::Qiga | Algorithm::Both)
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sga" => Ok(Algorithm::Sga),
            "qiga" => Ok(Algorithm::Qiga),
            "both" => Ok(Algorithm::Both),
            other => Err(Error::InvalidArgument(format!(
                "unknown algorithm {other:?} (expected sga, qiga or both)"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Sga => "sga",
            Algorithm::Qiga => "qiga",
            Algorithm::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum FitnessSource {
    #[default]
    Reference,
    KnotFile(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub fitness: FitnessSource,
    pub boundary: Boundary,
    pub sga: SgaConfig,
    pub qiga: QigaConfig,
    /// Schema texts; padded with `*` to each algorithm's chromosome length.
    pub schemata: Vec<String>,
    pub replications: usize,
    pub base_seed: u64,
    pub out_dir: PathBuf,
    /// The fitness series uses the running best instead of the per-generation best.
    pub running_best: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Both,
            fitness: FitnessSource::Reference,
            boundary: REFERENCE_BOUNDARY,
            sga: SgaConfig::default(),
            qiga: QigaConfig::default(),
            schemata: vec![DEFAULT_SCHEMA.to_string()],
            replications: 10,
            base_seed: DEFAULT_BASE_SEED,
            out_dir: PathBuf::from(DEFAULT_OUT_DIR),
            running_best: false,
        }
    }
}

impl ExperimentConfig {
    /// Every violated constraint; empty when the configuration is usable.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.replications < 1 {
            v.push("replications must be at least 1".to_string());
        }
        if self.algorithm.runs_sga() {
            v.extend(self.sga.violations("sga."));
        }
        if self.algorithm.runs_qiga() {
            v.extend(self.qiga.violations("qiga."));
        }
        if self.schemata.is_empty() {
            v.push("at least one schema must be tracked".to_string());
        }
        let lengths: Vec<usize> = [
            self.algorithm
                .runs_sga()
                .then_some(self.sga.chromosome_length),
            self.algorithm
                .runs_qiga()
                .then_some(self.qiga.chromosome_length),
        ]
        .into_iter()
        .flatten()
        .collect();
        for text in &self.schemata {
            match text.parse::<Schema>() {
                Err(e) => v.push(format!("schema {text:?}: {e}")),
                Ok(s) => {
                    for &m in &lengths {
                        if s.len() > m {
                            v.push(format!(
                                "schema {text:?} is longer than the chromosome length {m}"
                            ));
                        }
                    }
                }
            }
        }
        if let FitnessSource::KnotFile(p) = &self.fitness {
            if !p.is_file() {
                v.push(format!("knot file {} does not exist", p.display()));
            }
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(v))
        }
    }

    pub fn landscape(&self) -> Result<SplineFitness> {
        match &self.fitness {
            FitnessSource::Reference => SplineFitness::new(&REFERENCE_KNOTS, self.boundary),
            FitnessSource::KnotFile(p) => SplineFitness::new(&read_knots(p)?, self.boundary),
        }
    }

    /// Schemata padded to chromosome length `m`.
    pub fn schemata_for(&self, m: usize) -> Result<Vec<Schema>> {
        self.schemata
            .iter()
            .map(|t| Schema::parse_padded(t, m))
            .collect()
    }

    /// Reads a TOML configuration file. Relative paths inside it are resolved
    /// against the file's directory; missing keys keep their defaults.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base, &path.display().to_string())
    }

    pub fn from_toml(text: &str, base: &Path, origin: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Format {
            path: origin.to_string(),
            line: e
                .span()
                .map(|s| text[..s.start].matches('\n').count() + 1)
                .unwrap_or(0),
            message: e.message().to_string(),
        })?;
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };

        let mut cfg = ExperimentConfig::default();
        let e = file.experiment;
        if let Some(a) = e.algorithm {
            cfg.algorithm = a;
        }
        if let Some(k) = e.knots {
            cfg.fitness = FitnessSource::KnotFile(resolve(k));
        }
        if let Some(b) = e.boundary {
            cfg.boundary = b;
        }
        if let Some(s) = e.schemata {
            cfg.schemata = s;
        }
        if let Some(r) = e.replications {
            cfg.replications = r;
        }
        if let Some(s) = e.base_seed {
            cfg.base_seed = s;
        }
        if let Some(o) = e.out {
            cfg.out_dir = resolve(o);
        }
        if let Some(r) = e.running_best {
            cfg.running_best = r;
        }
        cfg.sga = file.sga;
        let q = file.qiga;
        cfg.qiga = QigaConfig {
            population_size: q.population_size,
            chromosome_length: q.chromosome_length,
            max_generations: q.max_generations,
            lookup_table: match q.lookup_table {
                Some(p) => RotationLookupTable::read(resolve(p))?,
                None => RotationLookupTable::default(),
            },
            rng_seed: 0,
        };
        Ok(cfg)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    experiment: ExperimentSection,
    sga: SgaConfig,
    qiga: QigaSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ExperimentSection {
    algorithm: Option<Algorithm>,
    knots: Option<PathBuf>,
    boundary: Option<Boundary>,
    schemata: Option<Vec<String>>,
    replications: Option<usize>,
    base_seed: Option<u64>,
    out: Option<PathBuf>,
    running_best: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct QigaSection {
    population_size: usize,
    chromosome_length: usize,
    max_generations: usize,
    lookup_table: Option<PathBuf>,
}

impl Default for QigaSection {
    fn default() -> Self {
        let d = QigaConfig::default();
        Self {
            population_size: d.population_size,
            chromosome_length: d.chromosome_length,
            max_generations: d.max_generations,
            lookup_table: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c = ExperimentConfig::from_toml("", Path::new("."), "mem").unwrap();
        assert_eq!(c, ExperimentConfig::default());
        assert!(c.validate().is_ok());
    }

    #[test]
    fn sections_override_defaults() {
        let text = r#"
[experiment]
algorithm = "qiga"
replications = 3
base_seed = 7
schemata = ["01001", "010*1"]
out = "runs"
boundary = "natural"

[sga]
population_size = 12

[qiga]
max_generations = 40
"#;
        let c = ExperimentConfig::from_toml(text, Path::new("/tmp/x"), "mem").unwrap();
        assert_eq!(c.algorithm, Algorithm::Qiga);
        assert_eq!(c.replications, 3);
        assert_eq!(c.base_seed, 7);
        assert_eq!(c.schemata.len(), 2);
        assert_eq!(c.out_dir, PathBuf::from("/tmp/x/runs"));
        assert_eq!(c.boundary, Boundary::Natural);
        assert_eq!(c.sga.population_size, 12);
        assert_eq!(c.sga.crossover_prob, 0.9);
        assert_eq!(c.qiga.max_generations, 40);
        assert_eq!(c.qiga.population_size, 10);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::from_toml("[sga]\npopsize = 3\n", Path::new("."), "mem");
        assert!(matches!(err, Err(Error::Format { .. })));
    }

    #[test]
    fn validation_lists_every_violation() {
        let mut c = ExperimentConfig {
            replications: 0,
            schemata: vec!["01x".into(), "0".repeat(30)],
            ..ExperimentConfig::default()
        };
        c.sga.mutation_prob = 2.0;
        c.qiga.population_size = 0;
        let v = c.violations();
        // replications, sga.mutation_prob, qiga.population_size, bad char, too long for both
        assert_eq!(v.len(), 6, "{v:#?}");
        assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))));
    }
}
