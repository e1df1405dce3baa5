//! Differential audit of the linear-time construction against the exact
//! oracles, and the discrepancy certificates it emits.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_oracles::{
    exact_gamma_bruteforce, exact_gamma_dp, exact_gamma_st, is_dominating_set, is_steiner_set,
    OracleCaps,
};
use crate::forest_domination::forest_domination;
use crate::steiner_domination::{formula_gamma_st, steiner_domination};
use crate::tree_corpus::{
    enumerate_parent_arrays, fixtures, random_prufer_tree, rng, EnumerationMode, MAX_ENUMERATION_N,
};
use crate::tree_model::{
    build_adjacency, parse_parent_file, relabel_bfs, ParentArray, RootPolicy, VertexSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Exhaustive,
    Random,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub mode: VerifyMode,
    pub max_n: usize,
    /// Number of random instances (random mode only).
    pub count: usize,
    pub seed: u64,
    /// Restrict the γ_st oracle to supersets of the leaf set.
    pub prune: bool,
    /// Where certificates go; `None` keeps them in memory only.
    pub cert_dir: Option<PathBuf>,
}

impl VerifyConfig {
    fn oracle_cap(&self) -> usize {
        let caps = OracleCaps::default();
        if self.prune {
            caps.gamma_st_pruned
        } else {
            caps.gamma_st_unpruned
        }
    }

    pub fn check(&self) -> Result<()> {
        match self.mode {
            VerifyMode::Exhaustive if self.max_n > MAX_ENUMERATION_N => Err(Error::CapExceeded {
                what: "exhaustive verify",
                n: self.max_n,
                cap: MAX_ENUMERATION_N,
            }),
            VerifyMode::Random if self.max_n > self.oracle_cap() => Err(Error::CapExceeded {
                what: "random verify",
                n: self.max_n,
                cap: self.oracle_cap(),
            }),
            VerifyMode::Random if self.max_n < 2 => Err(Error::InvalidParams(
                "random verify needs max_n >= 2".into(),
            )),
            _ if self.max_n == 0 => Err(Error::InvalidParams("max_n must be positive".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessChecks {
    pub witness_is_steiner: bool,
    pub witness_is_dominating: bool,
}

/// A tree on which the exact optimum beats the linear-time construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyCertificate {
    pub n: usize,
    pub instance: Vec<usize>,
    pub algorithm_size: usize,
    pub algorithm_set: VertexSet,
    pub oracle_size: usize,
    pub oracle_witness: VertexSet,
    pub checks: WitnessChecks,
}

impl DiscrepancyCertificate {
    /// Recomputes both sides from the instance alone.
    pub fn revalidate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidCertificate(msg));
        let parents = ParentArray::new(self.instance.clone())?;
        if parents.len() != self.n {
            return invalid(format!(
                "n = {} but instance has {} vertices",
                self.n,
                parents.len()
            ));
        }
        let result = steiner_domination(&parents)?;
        if result.size != self.algorithm_size || result.sd != self.algorithm_set {
            return invalid(format!(
                "algorithm now yields {} of size {}, certificate records {} of size {}",
                result.sd, result.size, self.algorithm_set, self.algorithm_size
            ));
        }
        let t = build_adjacency(&parents);
        let checks = WitnessChecks {
            witness_is_steiner: is_steiner_set(&t, &self.oracle_witness)?,
            witness_is_dominating: is_dominating_set(&t, &self.oracle_witness)?,
        };
        if !checks.witness_is_steiner || !checks.witness_is_dominating {
            return invalid(format!("witness {} fails {checks:?}", self.oracle_witness));
        }
        if checks != self.checks {
            return invalid("recorded checks disagree with recomputed checks".into());
        }
        if self.oracle_witness.len() != self.oracle_size {
            return invalid("oracle size differs from witness size".into());
        }
        if self.oracle_size >= self.algorithm_size {
            return invalid("oracle size is not below algorithm size".into());
        }
        Ok(())
    }

    /// Writes `<stem>.par` and `<stem>.json` under `dir`, after revalidating.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
        self.revalidate()?;
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let par = dir.join(format!("{stem}.par"));
        let json = dir.join(format!("{stem}.json"));
        let parents = ParentArray::new(self.instance.clone())?;
        fs::write(&par, parents.to_par_string()).map_err(|e| Error::io(&par, e))?;
        let body = serde_json::to_string_pretty(self).expect("certificate serializes");
        fs::write(&json, body + "\n").map_err(|e| Error::io(&json, e))?;
        Ok((par, json))
    }

    /// Loads a certificate from its `.par` and sidecar JSON and revalidates
    /// it against the tree in the `.par` file.
    pub fn load(par: &Path, json: &Path) -> Result<Self> {
        let text = fs::read_to_string(par).map_err(|e| Error::io(par, e))?;
        let parents = parse_parent_file(&text)?;
        let body = fs::read_to_string(json).map_err(|e| Error::io(json, e))?;
        let cert: DiscrepancyCertificate =
            serde_json::from_str(&body).map_err(|e| Error::InvalidCertificate(e.to_string()))?;
        if cert.instance != parents.as_slice() {
            return Err(Error::InvalidCertificate(
                "sidecar instance differs from .par file".into(),
            ));
        }
        cert.revalidate()?;
        Ok(cert)
    }
}

/// Everything the audit learns about one tree.
#[derive(Clone, Debug)]
pub struct InstanceAudit {
    pub parents: ParentArray,
    pub size: usize,
    pub sd: VertexSet,
    /// Problems with the construction itself; empty when all checks pass.
    pub failures: Vec<String>,
    pub oracle: Option<(usize, VertexSet)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Match,
    /// The construction is larger than the optimum.
    Discrepancy,
    /// The construction is smaller than the optimum; only possible if it is invalid.
    BelowOracle,
    NotCompared,
}

impl InstanceAudit {
    pub fn comparison(&self) -> Comparison {
        match &self.oracle {
            None => Comparison::NotCompared,
            Some((k, _)) if *k == self.size => Comparison::Match,
            Some((k, _)) if *k < self.size => Comparison::Discrepancy,
            Some(_) => Comparison::BelowOracle,
        }
    }

    pub fn certificate(&self) -> Option<DiscrepancyCertificate> {
        let (k, witness) = self.oracle.as_ref()?;
        (self.comparison() == Comparison::Discrepancy).then(|| DiscrepancyCertificate {
            n: self.parents.len(),
            instance: self.parents.as_slice().to_vec(),
            algorithm_size: self.size,
            algorithm_set: self.sd.clone(),
            oracle_size: *k,
            oracle_witness: witness.clone(),
            checks: WitnessChecks {
                witness_is_steiner: true,
                witness_is_dominating: true,
            },
        })
    }
}

/// Runs every check on one tree. `oracle_cap` bounds the γ_st enumeration;
/// larger trees skip the comparison.
pub fn audit_instance(
    parents: &ParentArray,
    prune: bool,
    oracle_cap: usize,
) -> Result<InstanceAudit> {
    let caps = OracleCaps::default();
    let result = steiner_domination(parents)?;
    let t = build_adjacency(parents);
    let mut failures = Vec::new();

    if !result.leaves.is_subset(&result.sd) {
        failures.push("set misses a leaf".to_string());
    }
    if !is_steiner_set(&t, &result.sd)? {
        failures.push("set is not a Steiner set".to_string());
    }
    if !is_dominating_set(&t, &result.sd)? {
        failures.push("set is not dominating".to_string());
    }
    if t.len() >= 2 {
        let formula = formula_gamma_st(&t)?;
        if formula != result.size {
            failures.push(format!("formula {formula} != size {}", result.size));
        }
    }

    // forest domination on H and on the whole tree
    let forests = [("H", result.h.nparent.clone()), ("T", parents.clone())];
    for (name, forest) in forests {
        let f = build_adjacency(&forest);
        let d = forest_domination(&forest);
        let dp = exact_gamma_dp(&f);
        if d.len() != dp {
            failures.push(format!("γ({name}): linear {} vs dp {dp}", d.len()));
        }
        if !is_dominating_set(&f, &d)? {
            failures.push(format!("D({name}) does not dominate"));
        }
        if f.len() <= caps.gamma_bruteforce {
            let (bf, _) = exact_gamma_bruteforce(&f)?;
            if bf != dp {
                failures.push(format!("γ({name}): bruteforce {bf} vs dp {dp}"));
            }
        }
    }

    let oracle = if parents.len() <= oracle_cap {
        Some(exact_gamma_st(&t, prune)?)
    } else {
        None
    };
    let audit = InstanceAudit {
        parents: parents.clone(),
        size: result.size,
        sd: result.sd,
        failures,
        oracle,
    };
    Ok(audit)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SizeBucket {
    pub n: usize,
    pub instances: usize,
    pub matches: usize,
    pub discrepancies: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureRecord {
    pub instance: Vec<usize>,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub instance: Vec<usize>,
    pub algorithm_size: usize,
    pub oracle_size: Option<usize>,
    pub outcome: Comparison,
    pub certificate: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub mode: VerifyMode,
    pub max_n: usize,
    pub count: usize,
    pub seed: u64,
    pub oracle: &'static str,
    pub instances: usize,
    pub validity_failures: usize,
    pub matches: usize,
    pub discrepancies: usize,
    pub below_oracle: usize,
    pub not_compared: usize,
    pub by_n: Vec<SizeBucket>,
    pub fixtures: Vec<FixtureOutcome>,
    /// File stems of the certificates written, in instance order.
    pub certificates: Vec<String>,
    /// Up to the first 20 failing instances.
    pub failures: Vec<FailureRecord>,
}

impl VerifySummary {
    pub fn is_clean(&self) -> bool {
        self.validity_failures == 0 && self.below_oracle == 0
    }

    /// 0: no findings; 2: certificates written (fixtures included); 1:
    /// construction failures.
    pub fn exit_code(&self) -> i32 {
        if !self.is_clean() {
            1
        } else if self.discrepancies > 0 || self.fixtures.iter().any(|f| f.certificate.is_some()) {
            2
        } else {
            0
        }
    }
}

const MAX_FAILURE_RECORDS: usize = 20;

fn instances(config: &VerifyConfig) -> Result<Vec<ParentArray>> {
    match config.mode {
        VerifyMode::Exhaustive => {
            let mut all = Vec::new();
            for n in 1..=config.max_n {
                all.extend(enumerate_parent_arrays(n, EnumerationMode::Trees)?);
            }
            Ok(all)
        }
        VerifyMode::Random => {
            let mut rng = rng(config.seed);
            (0..config.count)
                .map(|_| {
                    use rand::RngExt;
                    let n = rng.random_range(2..=config.max_n);
                    let edges = random_prufer_tree(n, &mut rng);
                    Ok(relabel_bfs(&edges, RootPolicy::MaxDegree)?.0)
                })
                .collect()
        }
    }
}

/// Audits a corpus of trees plus every named fixture. Certificates are
/// written under `config.cert_dir` when set.
pub fn verify(config: &VerifyConfig) -> Result<VerifySummary> {
    config.check()?;
    let cap = config.oracle_cap();
    let corpus = instances(config)?;
    // rayon's collect keeps input order, so the summary does not depend on
    // the worker count
    let audits = corpus
        .par_iter()
        .map(|p| audit_instance(p, config.prune, cap))
        .collect::<Result<Vec<_>>>()?;

    let mut summary = VerifySummary {
        mode: config.mode,
        max_n: config.max_n,
        count: match config.mode {
            VerifyMode::Exhaustive => audits.len(),
            VerifyMode::Random => config.count,
        },
        seed: config.seed,
        oracle: if config.prune { "pruned" } else { "unpruned" },
        instances: audits.len(),
        validity_failures: 0,
        matches: 0,
        discrepancies: 0,
        below_oracle: 0,
        not_compared: 0,
        by_n: Vec::new(),
        fixtures: Vec::new(),
        certificates: Vec::new(),
        failures: Vec::new(),
    };
    let mut buckets = vec![SizeBucket::default(); config.max_n + 1];

    for (seq, audit) in audits.iter().enumerate() {
        let n = audit.parents.len();
        let bucket = &mut buckets[n];
        bucket.n = n;
        bucket.instances += 1;
        if !audit.failures.is_empty() {
            summary.validity_failures += 1;
            if summary.failures.len() < MAX_FAILURE_RECORDS {
                summary.failures.push(FailureRecord {
                    instance: audit.parents.as_slice().to_vec(),
                    reasons: audit.failures.clone(),
                });
            }
        }
        match audit.comparison() {
            Comparison::Match => {
                summary.matches += 1;
                bucket.matches += 1;
            }
            Comparison::Discrepancy => {
                summary.discrepancies += 1;
                bucket.discrepancies += 1;
                let stem = format!("cert-n{n:02}-{seq:06}");
                if let Some(dir) = &config.cert_dir {
                    audit.certificate().unwrap().write(dir, &stem)?;
                }
                summary.certificates.push(stem);
            }
            Comparison::BelowOracle => summary.below_oracle += 1,
            Comparison::NotCompared => summary.not_compared += 1,
        }
    }
    summary.by_n = buckets.into_iter().filter(|b| b.instances > 0).collect();

    for (name, parents) in fixtures() {
        let audit = audit_instance(
            &parents,
            config.prune,
            OracleCaps::default().gamma_st_unpruned,
        )?;
        let outcome = audit.comparison();
        let mut certificate = None;
        if let Some(cert) = audit.certificate() {
            let stem = format!("fixture-{name}");
            match &config.cert_dir {
                Some(dir) => {
                    cert.write(dir, &stem)?;
                }
                None => cert.revalidate()?,
            }
            certificate = Some(stem);
        }
        if !audit.failures.is_empty() {
            summary.validity_failures += 1;
        }
        summary.fixtures.push(FixtureOutcome {
            name: name.to_string(),
            instance: parents.as_slice().to_vec(),
            algorithm_size: audit.size,
            oracle_size: audit.oracle.as_ref().map(|(k, _)| *k),
            outcome,
            certificate,
        });
    }

    Ok(summary)
}
