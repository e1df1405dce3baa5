//! Rooted forests in parent-array form, their adjacency, and the neighborhood
//! primitives shared by every other module.
//!
//! Vertex labels are 1-based. A parent value of `0` means "no parent" and is
//! never dereferenced.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sorted, duplicate-free set of 1-based vertex labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    /// Builds a set from labels that are already strictly increasing.
    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self(members)
    }

    /// Collects the indices `v` (1-based) for which `flags[v]` is set.
    /// `flags[0]` is ignored.
    pub(crate) fn from_flags(flags: &[bool]) -> Self {
        let count = flags.iter().skip(1).filter(|&&on| on).count();
        let mut members = Vec::with_capacity(count);
        members.extend(
            flags
                .iter()
                .enumerate()
                .skip(1)
                .filter_map(|(v, &on)| on.then_some(v)),
        );
        Self(members)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut members: Vec<usize> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self(members)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(members: Vec<usize>) -> Self {
        members.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// A rooted forest where `parent(i) < i` for every vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParentArray {
    // parents[i - 1] is the parent of vertex i
    parents: Vec<usize>,
}

impl ParentArray {
    /// Checks the ordering invariant. The empty forest is accepted.
    pub fn new(parents: Vec<usize>) -> Result<Self> {
        for (idx, &p) in parents.iter().enumerate() {
            let vertex = idx + 1;
            if p >= vertex {
                return Err(Error::ParentNotLess { vertex, parent: p });
            }
        }
        Ok(Self { parents })
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    /// Parent of vertex `v`, or 0 for a root.
    #[inline]
    pub fn parent(&self, v: usize) -> usize {
        self.parents[v - 1]
    }

    /// The raw parent values for vertices `1..=n`.
    pub fn as_slice(&self) -> &[usize] {
        &self.parents
    }

    pub fn roots(&self) -> VertexSet {
        VertexSet::from_sorted((1..=self.len()).filter(|&v| self.parent(v) == 0).collect())
    }

    /// Unrooted edge list of the forest, one `(parent, child)` pair per non-root.
    pub fn edges(&self) -> EdgeList {
        EdgeList {
            n: self.len(),
            edges: (1..=self.len())
                .filter(|&v| self.parent(v) != 0)
                .map(|v| (self.parent(v), v))
                .collect(),
        }
    }

    /// Concatenates two forests, shifting the labels of `other` by `self.len()`.
    pub fn concat(&self, other: &ParentArray) -> ParentArray {
        let offset = self.len();
        let mut parents = self.parents.clone();
        parents.extend(
            other
                .parents
                .iter()
                .map(|&p| if p == 0 { 0 } else { p + offset }),
        );
        ParentArray { parents }
    }

    /// Serializes to the `.par` text format.
    pub fn to_par_string(&self) -> String {
        let body: Vec<String> = self.parents.iter().map(usize::to_string).collect();
        format!("{}\n{}\n", self.len(), body.join(" "))
    }
}

impl TryFrom<Vec<usize>> for ParentArray {
    type Error = Error;

    fn try_from(parents: Vec<usize>) -> Result<Self> {
        ParentArray::new(parents)
    }
}

/// An undirected edge list over labels `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootPolicy {
    /// Smallest label among the vertices of maximum degree.
    MaxDegree,
    Explicit(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Tree,
    Forest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeReport {
    pub root_labels: VertexSet,
}

/// Children lists (compressed) plus parent and unrooted degree per vertex.
#[derive(Clone, Debug)]
pub struct AdjacencyTree {
    parents: Vec<usize>,
    // children of v are child_list[child_start[v - 1]..child_start[v]]
    child_start: Vec<usize>,
    child_list: Vec<usize>,
    degree: Vec<usize>,
}

impl AdjacencyTree {
    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    #[inline]
    pub fn parent(&self, v: usize) -> usize {
        self.parents[v - 1]
    }

    #[inline]
    pub fn children(&self, v: usize) -> &[usize] {
        &self.child_list[self.child_start[v - 1]..self.child_start[v]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degree[v - 1]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    /// Open neighborhood N(v): the parent (if any) followed by the children.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let p = self.parent(v);
        (p != 0)
            .then_some(p)
            .into_iter()
            .chain(self.children(v).iter().copied())
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.len()).filter(|&v| self.parent(v) == 0)
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().filter(|&&p| p != 0).count()
    }

    pub fn to_parent_array(&self) -> ParentArray {
        ParentArray {
            parents: self.parents.clone(),
        }
    }

    fn check_label(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.len() {
            Err(Error::VertexOutOfRange {
                label: v,
                n: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Split<'a, char>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.split('\n').enumerate(),
        }
    }
}

impl<'a> Iterator for Lines<'a> {
    /// (1-based line number, content without CR)
    type Item = (usize, &'a str);

    fn next(&mut self) -> Option<Self::Item> {
        for (idx, raw) in self.inner.by_ref() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if !line.trim().is_empty() {
                return Some((idx + 1, line));
            }
        }
        None
    }
}

fn parse_usize(line: usize, token: usize, text: &str) -> Result<usize> {
    text.parse().map_err(|_| Error::MalformedInteger {
        line,
        token,
        text: text.to_string(),
    })
}

fn parse_header(lines: &mut Lines<'_>) -> Result<usize> {
    let (line, text) = lines.next().ok_or(Error::MissingLine {
        line: 1,
        what: "vertex count",
    })?;
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != 1 {
        return Err(Error::LengthMismatch {
            line,
            expected: 1,
            found: tokens.len(),
        });
    }
    parse_usize(line, 1, tokens[0])
}

/// Parses a `.par` file: the vertex count, then one line of `n` parent labels.
pub fn parse_parent_file(text: &str) -> Result<ParentArray> {
    let mut lines = Lines::new(text);
    let n = parse_header(&mut lines)?;
    if n == 0 {
        return Err(Error::NoRoot);
    }
    let (line, body) = lines.next().ok_or(Error::MissingLine {
        line: 2,
        what: "parent list",
    })?;
    let parents = body
        .split_whitespace()
        .enumerate()
        .map(|(i, tok)| parse_usize(line, i + 1, tok))
        .collect::<Result<Vec<_>>>()?;
    if parents.len() != n {
        return Err(Error::LengthMismatch {
            line,
            expected: n,
            found: parents.len(),
        });
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::TrailingContent { line });
    }
    ParentArray::new(parents)
}

/// Parses a `.edg` file: the vertex count, then one `u v` pair per line.
/// Connectivity and edge count are checked later by [`relabel_bfs`].
pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut lines = Lines::new(text);
    let n = parse_header(&mut lines)?;
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (line, text) in lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::MalformedPair { line });
        }
        let u = parse_usize(line, 1, tokens[0])?;
        let v = parse_usize(line, 2, tokens[1])?;
        for label in [u, v] {
            if label == 0 || label > n {
                return Err(Error::LabelOutOfRange { line, label, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { line, label: u });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge { line, u, v });
        }
        edges.push((u, v));
    }
    Ok(EdgeList { n, edges })
}

/// Roots an unrooted tree and renumbers it in breadth-first order, so that
/// every parent receives a smaller label than its children. Neighbors are
/// visited in increasing original label.
///
/// Returns the parent array and `label_map`, where `label_map[old - 1]` is
/// the new label of original vertex `old`.
pub fn relabel_bfs(edges: &EdgeList, root_policy: RootPolicy) -> Result<(ParentArray, Vec<usize>)> {
    let n = edges.n;
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if edges.edges.len() != n - 1 {
        return Err(Error::WrongEdgeCount {
            n,
            found: edges.edges.len(),
        });
    }
    let mut adj = vec![Vec::new(); n + 1];
    for &(u, v) in &edges.edges {
        for label in [u, v] {
            if label == 0 || label > n {
                return Err(Error::VertexOutOfRange { label, n });
            }
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let root = match root_policy {
        RootPolicy::Explicit(r) => {
            if r == 0 || r > n {
                return Err(Error::VertexOutOfRange { label: r, n });
            }
            r
        }
        // max_by_key keeps the last maximum, so scan in reverse for the smallest label
        RootPolicy::MaxDegree => (1..=n).rev().max_by_key(|&v| adj[v].len()).unwrap(),
    };

    let mut label_map = vec![0usize; n + 1];
    let mut parents = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);
    label_map[root] = 1;
    parents.push(0);
    queue.push_back(root);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if label_map[w] == 0 {
                parents.push(label_map[u]);
                label_map[w] = parents.len();
                queue.push_back(w);
            }
        }
    }
    if parents.len() != n {
        return Err(Error::Disconnected {
            n,
            reached: parents.len(),
        });
    }
    label_map.remove(0);
    Ok((ParentArray::new(parents)?, label_map))
}

/// Lists the roots; in tree mode exactly one is required.
pub fn validate(parents: &ParentArray, mode: Mode) -> Result<ShapeReport> {
    let roots = parents.roots();
    if roots.is_empty() {
        return Err(Error::NoRoot);
    }
    if mode == Mode::Tree && roots.len() != 1 {
        return Err(Error::MultipleRoots {
            roots: roots.as_slice().to_vec(),
        });
    }
    Ok(ShapeReport { root_labels: roots })
}

pub fn build_adjacency(parents: &ParentArray) -> AdjacencyTree {
    let n = parents.len();
    let mut child_start = vec![0usize; n + 1];
    let mut degree = vec![0usize; n];
    for v in 1..=n {
        let p = parents.parent(v);
        if p != 0 {
            child_start[p] += 1;
            degree[p - 1] += 1;
            degree[v - 1] += 1;
        }
    }
    // prefix sums: child_start[v] becomes the end of v's block
    for v in 1..=n {
        child_start[v] += child_start[v - 1];
    }
    let mut fill = child_start.clone();
    let mut child_list = vec![0usize; child_start[n]];
    // reverse pass so each block ends up in increasing label order
    for v in (1..=n).rev() {
        let p = parents.parent(v);
        if p != 0 {
            fill[p] -= 1;
            child_list[fill[p]] = v;
        }
    }
    AdjacencyTree {
        parents: parents.as_slice().to_vec(),
        child_start,
        child_list,
        degree,
    }
}

/// End-vertices of a tree: every vertex of unrooted degree 1, wherever the
/// root sits. The single vertex of a one-vertex tree counts as a leaf.
pub fn leaf_set(t: &AdjacencyTree) -> VertexSet {
    if t.len() == 1 {
        return VertexSet::from_sorted(vec![1]);
    }
    VertexSet::from_sorted((1..=t.len()).filter(|&v| t.degree(v) == 1).collect())
}

/// N[S], the union of the closed neighborhoods of the members of `s`.
pub fn closed_neighborhood(t: &AdjacencyTree, s: &VertexSet) -> Result<VertexSet> {
    let mut covered = vec![false; t.len() + 1];
    for v in s.iter() {
        t.check_label(v)?;
        covered[v] = true;
        for w in t.neighbors(v) {
            covered[w] = true;
        }
    }
    Ok(VertexSet::from_flags(&covered))
}
