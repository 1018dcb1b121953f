//! CSV renderings of experiment data. Comma separated, one header row, reals
//! with six significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::fmt_sig6;
use crate::qubit::QuantumChromosome;
use crate::schema::{count_schemata, enumerate_schemata, Schema};
use crate::spline::{SplineFitness, EXHAUSTIVE_BITS_CAP};

use super::experiment::{AlgorithmTag, ExperimentData, RunTrace};

/// Largest number of schemata a ranking enumeration may produce.
pub const TABLE2_SCHEMA_CAP: usize = 200_000;

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig6).unwrap_or_default()
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn generations(runs: &[RunTrace]) -> usize {
    runs.iter().map(|r| r.generations.len()).min().unwrap_or(0)
}

/// Per-generation mean across runs of the best fitness (or running best).
pub fn best_series(runs: &[RunTrace], running_best: bool) -> Vec<f64> {
    (0..generations(runs))
        .map(|g| {
            mean(runs.iter().map(|r| {
                let rec = &r.generations[g];
                if running_best {
                    rec.best_so_far
                } else {
                    rec.best_fitness
                }
            }))
            .unwrap_or(f64::NAN)
        })
        .collect()
}

/// Pointwise means across runs for one schema.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationSeries {
    pub observed: Vec<f64>,
    pub expected: Vec<Option<f64>>,
    pub variance: Vec<Option<f64>>,
}

pub fn propagation_series(runs: &[RunTrace], schema_index: usize) -> PropagationSeries {
    let n = generations(runs);
    let at = |g: usize| runs.iter().map(move |r| &r.propagation[schema_index][g]);
    PropagationSeries {
        observed: (0..n)
            .map(|g| mean(at(g).map(|r| r.observed as f64)).unwrap_or(f64::NAN))
            .collect(),
        expected: (0..n)
            .map(|g| mean(at(g).filter_map(|r| r.expected)))
            .collect(),
        variance: (0..n)
            .map(|g| mean(at(g).filter_map(|r| r.variance)))
            .collect(),
    }
}

/// `generation,sga_best_mean,qiga_best_mean`
pub fn emit_fig5(data: &ExperimentData) -> String {
    let sga = best_series(&data.sga, data.running_best);
    let qiga = best_series(&data.qiga, data.running_best);
    let rows = sga.len().max(qiga.len());
    let mut out = String::from("generation,sga_best_mean,qiga_best_mean\n");
    for g in 0..rows {
        let _ = writeln!(
            out,
            "{g},{},{}",
            opt(sga.get(g).copied()),
            opt(qiga.get(g).copied())
        );
    }
    out
}

/// `generation,sga_observed_mean,qiga_expected_mean,qiga_variance_mean,qiga_observed_mean,band_low,band_high`
pub fn emit_fig6(data: &ExperimentData, schema_index: usize) -> String {
    let sga = (!data.sga.is_empty()).then(|| propagation_series(&data.sga, schema_index));
    let qiga = (!data.qiga.is_empty()).then(|| propagation_series(&data.qiga, schema_index));
    let rows = sga
        .as_ref()
        .map_or(0, |s| s.observed.len())
        .max(qiga.as_ref().map_or(0, |s| s.observed.len()));
    let mut out = String::from(
        "generation,sga_observed_mean,qiga_expected_mean,qiga_variance_mean,qiga_observed_mean,band_low,band_high\n",
    );
    for g in 0..rows {
        let sga_obs = sga.as_ref().and_then(|s| s.observed.get(g).copied());
        let (e, v, o) = match &qiga {
            Some(q) if g < q.observed.len() => (q.expected[g], q.variance[g], Some(q.observed[g])),
            _ => (None, None, None),
        };
        let sd = v.map(|v| v.max(0.0).sqrt());
        let low = e.zip(sd).map(|(e, s)| e - s);
        let high = e.zip(sd).map(|(e, s)| e + s);
        let _ = writeln!(
            out,
            "{g},{},{},{},{},{},{}",
            opt(sga_obs),
            opt(e),
            opt(v),
            opt(o),
            opt(low),
            opt(high)
        );
    }
    out
}

/// `decoded_x,probability`, one row per bitstring in increasing value order.
pub fn emit_fig7(q: &QuantumChromosome, lo: f64, hi: f64) -> Result<String> {
    let dist = q.sampling_distribution()?;
    let m = q.len();
    let max = (m as f64).exp2() - 1.0;
    let mut out = String::from("decoded_x,probability\n");
    for (v, p) in dist.iter().enumerate() {
        let x = if m == 0 {
            lo
        } else {
            lo + (hi - lo) * v as f64 / max
        };
        let _ = writeln!(out, "{},{}", fmt_sig6(x), fmt_sig6(*p));
    }
    Ok(out)
}

/// Schemata of length `m` under the order and defining-length bounds, ranked
/// by static fitness (descending, ties broken by schema text).
pub fn table2_rows(
    f: &SplineFitness,
    m: usize,
    max_order: usize,
    max_defining_length: usize,
    top_k: usize,
) -> Result<Vec<(Schema, f64)>> {
    if m > EXHAUSTIVE_BITS_CAP {
        return Err(Error::TooLarge {
            what: "table bit length",
            size: m,
            cap: EXHAUSTIVE_BITS_CAP,
        });
    }
    let count = count_schemata(m, max_order, max_defining_length);
    if count > TABLE2_SCHEMA_CAP as u128 {
        return Err(Error::TooLarge {
            what: "schema enumeration",
            size: usize::try_from(count).unwrap_or(usize::MAX),
            cap: TABLE2_SCHEMA_CAP,
        });
    }
    let schemata = enumerate_schemata(m, max_order, max_defining_length);
    let values: Vec<f64> = (0..1u64 << m)
        .into_par_iter()
        .map(|v| f.value_fitness(v, m))
        .collect();
    let mut rows: Vec<(Schema, f64)> = schemata
        .into_par_iter()
        .map(|s| {
            let fit = s.mean_over_matches(|v| values[v as usize])?;
            Ok((s, fit))
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| a.0.to_string().cmp(&b.0.to_string()))
    });
    rows.truncate(top_k);
    Ok(rows)
}

/// `schema,order,defining_length,fitness`
pub fn emit_table2(
    f: &SplineFitness,
    m: usize,
    max_order: usize,
    max_defining_length: usize,
    top_k: usize,
) -> Result<String> {
    let rows = table2_rows(f, m, max_order, max_defining_length, top_k)?;
    let mut out = String::from("schema,order,defining_length,fitness\n");
    for (s, fit) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            s.compact(),
            s.order(),
            s.defining_length(),
            fmt_sig6(fit)
        );
    }
    Ok(out)
}

/// One run's per-generation log: fitness summary plus per-schema counts.
pub fn emit_run_log(run: &RunTrace, schemata: &[String]) -> String {
    let mut out = String::from("generation,best_fitness,mean_fitness,best_so_far,best_chromosome");
    for s in schemata {
        let _ = write!(out, ",observed[{s}]");
        if run.algorithm == AlgorithmTag::Qiga {
            let _ = write!(out, ",expected[{s}],variance[{s}]");
        }
    }
    out.push('\n');
    for (g, rec) in run.generations.iter().enumerate() {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            rec.generation,
            fmt_sig6(rec.best_fitness),
            fmt_sig6(rec.mean_fitness),
            fmt_sig6(rec.best_so_far),
            rec.best
        );
        for per_schema in &run.propagation {
            let p = &per_schema[g];
            let _ = write!(out, ",{}", p.observed);
            if run.algorithm == AlgorithmTag::Qiga {
                let _ = write!(out, ",{},{}", opt(p.expected), opt(p.variance));
            }
        }
        out.push('\n');
    }
    out
}

/// Long-format `PropagationRecord` table covering every run, schema and generation.
pub fn emit_propagation_records(data: &ExperimentData) -> String {
    let mut out = String::from("generation,run,algorithm,schema,expected,variance,observed\n");
    for run in data.sga.iter().chain(&data.qiga) {
        for per_schema in &run.propagation {
            for r in per_schema {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.generation,
                    r.run,
                    r.algorithm,
                    r.schema,
                    opt(r.expected),
                    opt(r.variance),
                    r.observed
                );
            }
        }
    }
    out
}

/// `algorithm,run,seed,best_fitness,best_chromosome,optimum_generation`
pub fn emit_summary(data: &ExperimentData, optimum: Option<&crate::BinaryChromosome>) -> String {
    let mut out =
        String::from("algorithm,run,seed,best_fitness,best_chromosome,optimum_generation\n");
    for run in data.sga.iter().chain(&data.qiga) {
        let best = run.generations.last().map_or(f64::NAN, |g| g.best_so_far);
        let hit = optimum
            .and_then(|o| run.first_hit(o))
            .map(|g| g.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            run.algorithm,
            run.run,
            run.seed,
            fmt_sig6(best),
            run.best_so_far,
            hit
        );
    }
    out
}

/// File name of the propagation table for the `k`-th tracked schema.
pub fn fig6_file_name(k: usize) -> String {
    if k == 0 {
        "fig6_propagation.csv".to_string()
    } else {
        format!("fig6_propagation_{k}.csv")
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<PathBuf> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}
