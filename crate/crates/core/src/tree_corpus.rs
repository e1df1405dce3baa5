//! Instance generators: random labeled trees, structured families, the
//! audit fixture, and exhaustive streams of small parent arrays.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tree_model::{relabel_bfs, EdgeList, ParentArray, RootPolicy};

/// Largest `n` accepted by [`enumerate_parent_arrays`].
pub const MAX_ENUMERATION_N: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Uniform over labeled trees via a random Prüfer sequence.
    Prufer,
    /// `parent[i]` uniform over `1..i`; the root may end up a leaf.
    RandomParent,
    Path,
    Star,
    Spider {
        legs: usize,
        leg_len: usize,
    },
    /// `legs[j % legs.len()]` pendant vertices hang off spine vertex `j`.
    Caterpillar {
        spine: usize,
        legs: Vec<usize>,
    },
    /// Heap-ordered binary tree.
    Binary,
}

impl Family {
    /// Vertex count implied by the family parameters, if fixed by them.
    pub fn implied_size(&self) -> Option<usize> {
        match self {
            Family::Spider { legs, leg_len } => Some(1 + legs * leg_len),
            Family::Caterpillar { spine, legs } if !legs.is_empty() => {
                Some(spine + (0..*spine).map(|j| legs[j % legs.len()]).sum::<usize>())
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self { family, n, seed }
    }

    /// Spec for a family whose size is determined by its parameters.
    pub fn sized(family: Family, seed: u64) -> Result<Self> {
        let n = family
            .implied_size()
            .ok_or_else(|| Error::InvalidParams(format!("{family:?} needs an explicit n")))?;
        Ok(Self { family, n, seed })
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Decodes a Prüfer sequence over labels `1..=seq.len() + 2` into its tree.
pub fn prufer_decode(seq: &[usize]) -> Result<EdgeList> {
    let n = seq.len() + 2;
    if let Some(&bad) = seq.iter().find(|&&v| v == 0 || v > n) {
        return Err(Error::InvalidParams(format!(
            "Prüfer entry {bad} outside 1..={n}"
        )));
    }
    let mut degree = vec![1usize; n + 1];
    for &v in seq {
        degree[v] += 1;
    }
    // linear-time decoding: `leaf` is the smallest current leaf, and `ptr`
    // only moves forward
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = (1..=n).find(|&v| degree[v] == 1).unwrap();
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n));
    Ok(EdgeList { n, edges })
}

/// Edges of a uniformly random labeled tree on `n` vertices.
pub fn random_prufer_tree(n: usize, rng: &mut ChaCha8Rng) -> EdgeList {
    match n {
        0 | 1 => EdgeList {
            n,
            edges: Vec::new(),
        },
        2 => EdgeList {
            n,
            edges: vec![(1, 2)],
        },
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(1..=n)).collect();
            prufer_decode(&seq).expect("entries are in range")
        }
    }
}

fn rooted(edges: &EdgeList) -> Result<ParentArray> {
    Ok(relabel_bfs(edges, RootPolicy::MaxDegree)?.0)
}

/// Generates one tree. Deterministic in the spec.
pub fn gen(spec: &GeneratorSpec) -> Result<ParentArray> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    if let Some(implied) = spec.family.implied_size() {
        if implied != n {
            return Err(Error::InvalidParams(format!(
                "{:?} has {implied} vertices, not {n}",
                spec.family
            )));
        }
    }
    let mut rng = rng(spec.seed);
    match &spec.family {
        Family::Prufer => rooted(&random_prufer_tree(n, &mut rng)),
        Family::RandomParent => ParentArray::new(
            (1..=n)
                .map(|i| if i == 1 { 0 } else { rng.random_range(1..i) })
                .collect(),
        ),
        Family::Path => ParentArray::new((0..n).collect()),
        Family::Star => ParentArray::new((0..n).map(|i| usize::from(i > 0)).collect()),
        Family::Binary => ParentArray::new((1..=n).map(|i| i / 2).collect()),
        Family::Spider { legs, leg_len } => {
            if *legs < 2 || *leg_len == 0 {
                return Err(Error::InvalidParams(
                    "spider needs at least 2 legs of length >= 1".into(),
                ));
            }
            let mut edges = Vec::with_capacity(n - 1);
            let mut next = 2;
            for _ in 0..*legs {
                let mut prev = 1;
                for _ in 0..*leg_len {
                    edges.push((prev, next));
                    prev = next;
                    next += 1;
                }
            }
            rooted(&EdgeList { n, edges })
        }
        Family::Caterpillar { spine, legs } => {
            if *spine == 0 || legs.is_empty() {
                return Err(Error::InvalidParams(
                    "caterpillar needs a spine and a leg pattern".into(),
                ));
            }
            let mut edges: Vec<(usize, usize)> = (1..*spine).map(|j| (j, j + 1)).collect();
            let mut next = spine + 1;
            for j in 0..*spine {
                for _ in 0..legs[j % legs.len()] {
                    edges.push((j + 1, next));
                    next += 1;
                }
            }
            rooted(&EdgeList { n, edges })
        }
    }
}

/// The eight-vertex tree used as the standing audit case: a center with one
/// pendant leaf and two legs of length three.
pub fn theorem1_audit_8() -> ParentArray {
    crate::tree_model::parse_parent_file(include_str!("../fixtures/theorem1-audit-8.par"))
        .expect("fixture is well formed")
}

/// Named fixtures shipped with the crate.
pub fn fixtures() -> Vec<(&'static str, ParentArray)> {
    vec![("theorem1-audit-8", theorem1_audit_8())]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMode {
    Trees,
    Forests,
}

/// Every parent array on `n` vertices, in lexicographic order.
pub fn enumerate_parent_arrays(n: usize, mode: EnumerationMode) -> Result<ParentArrays> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::CapExceeded {
            what: "enumerate_parent_arrays",
            n,
            cap: MAX_ENUMERATION_N,
        });
    }
    let low = match mode {
        EnumerationMode::Trees => 1,
        EnumerationMode::Forests => 0,
    };
    let mut current = vec![low; n];
    current[0] = 0;
    Ok(ParentArrays {
        low,
        current: Some(current),
    })
}

/// Iterator returned by [`enumerate_parent_arrays`].
pub struct ParentArrays {
    low: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for ParentArrays {
    type Item = ParentArray;

    fn next(&mut self) -> Option<ParentArray> {
        let out = self.current.clone()?;
        // odometer on positions 1.., where position i ranges over low..=i
        let cur = self.current.as_mut().unwrap();
        let mut i = cur.len() - 1;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            if cur[i] < i {
                cur[i] += 1;
                break;
            }
            cur[i] = self.low;
            i -= 1;
        }
        Some(ParentArray::new(out).expect("odometer respects parent < label"))
    }
}
