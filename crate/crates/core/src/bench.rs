//! Wall-clock scaling measurements for the two linear-time algorithms.

use std::fmt;
use std::hint::black_box;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest_domination::forest_domination;
use crate::steiner_domination::steiner_domination;
use crate::tree_corpus::{gen, Family, GeneratorSpec};
use crate::tree_model::ParentArray;

pub const MIN_REPETITIONS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BenchAlgorithm {
    #[serde(rename = "forest_dom")]
    ForestDom,
    #[serde(rename = "steiner_dom")]
    SteinerDom,
}

impl BenchAlgorithm {
    pub const ALL: [BenchAlgorithm; 2] = [BenchAlgorithm::ForestDom, BenchAlgorithm::SteinerDom];

    /// Runs the algorithm once and returns the size of its output set.
    pub fn run(self, parents: &ParentArray) -> usize {
        match self {
            BenchAlgorithm::ForestDom => forest_domination(parents).len(),
            BenchAlgorithm::SteinerDom => {
                steiner_domination(parents).expect("input is a tree").size
            }
        }
    }
}

impl fmt::Display for BenchAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchAlgorithm::ForestDom => "forest_dom",
            BenchAlgorithm::SteinerDom => "steiner_dom",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub algorithm: BenchAlgorithm,
    /// Median over the repetitions.
    pub wall_nanoseconds_total: u128,
    pub nanoseconds_per_vertex: f64,
    pub repetitions: usize,
    /// Sum of output sizes over all repetitions.
    pub checksum: u64,
}

fn median(mut samples: Vec<u128>) -> u128 {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

/// Times one algorithm on a prepared input.
pub fn time_algorithm(
    algorithm: BenchAlgorithm,
    parents: &ParentArray,
    reps: usize,
) -> Result<BenchRecord> {
    if reps < MIN_REPETITIONS {
        return Err(Error::TooFewRepetitions(reps));
    }
    let mut samples = Vec::with_capacity(reps);
    let mut checksum = 0u64;
    for _ in 0..reps {
        let start = Instant::now();
        let size = black_box(algorithm.run(black_box(parents)));
        samples.push(start.elapsed().as_nanos());
        checksum += size as u64;
    }
    let total = median(samples);
    Ok(BenchRecord {
        n: parents.len(),
        algorithm,
        wall_nanoseconds_total: total,
        nanoseconds_per_vertex: total as f64 / parents.len().max(1) as f64,
        repetitions: reps,
        checksum,
    })
}

/// Fails cleanly instead of aborting when `n` cannot be allocated.
fn probe_allocation(n: usize) -> Result<()> {
    // generation peaks at a few usize arrays of length n
    let words = n
        .checked_mul(8)
        .ok_or(Error::InvalidParams(format!("n = {n} is too large")))?;
    let mut probe: Vec<usize> = Vec::new();
    probe
        .try_reserve_exact(words)
        .map_err(|_| Error::InvalidParams(format!("cannot allocate a tree with n = {n}")))
}

/// Benchmarks both algorithms on one Prüfer tree per size. Generation is
/// outside the timed region.
pub fn bench(sizes: &[usize], reps: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    if reps < MIN_REPETITIONS {
        return Err(Error::TooFewRepetitions(reps));
    }
    if sizes.is_empty() || sizes.contains(&0) || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams(
            "sizes must be positive and strictly ascending".into(),
        ));
    }
    let mut records = Vec::with_capacity(sizes.len() * BenchAlgorithm::ALL.len());
    for &n in sizes {
        probe_allocation(n)?;
        let parents = gen(&GeneratorSpec::new(Family::Prufer, n, seed))?;
        for algorithm in BenchAlgorithm::ALL {
            records.push(time_algorithm(algorithm, &parents, reps)?);
        }
    }
    Ok(records)
}

pub const CSV_HEADER: &str = "n,algorithm,ns_total_median,ns_per_vertex,repetitions,checksum";

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{:.3},{},{}\n",
            r.n,
            r.algorithm,
            r.wall_nanoseconds_total,
            r.nanoseconds_per_vertex,
            r.repetitions,
            r.checksum
        ));
    }
    out
}

pub fn write_csv(records: &[BenchRecord], path: &Path) -> Result<()> {
    std::fs::write(path, to_csv(records)).map_err(|e| Error::io(path, e))
}

/// Ratio of median ns/vertex between each pair of consecutive sizes, per
/// algorithm.
pub fn per_vertex_ratios(records: &[BenchRecord]) -> Vec<(BenchAlgorithm, usize, usize, f64)> {
    let mut out = Vec::new();
    for algorithm in BenchAlgorithm::ALL {
        let rows: Vec<&BenchRecord> = records
            .iter()
            .filter(|r| r.algorithm == algorithm)
            .collect();
        for w in rows.windows(2) {
            out.push((
                algorithm,
                w[0].n,
                w[1].n,
                w[1].nanoseconds_per_vertex / w[0].nanoseconds_per_vertex.max(f64::MIN_POSITIVE),
            ));
        }
    }
    out
}
