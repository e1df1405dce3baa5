//! Exact, definition-driven reference computations.
//!
//! Nothing here calls into the linear-time algorithms. Small instances are
//! solved by subset enumeration over bitmasks; domination numbers of large
//! forests come from a textbook three-state dynamic program.

use crate::error::{Error, Result};
use crate::tree_model::{closed_neighborhood, AdjacencyTree, VertexSet};

/// Size limits for the enumerating oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCaps {
    pub gamma_bruteforce: usize,
    pub gamma_st_unpruned: usize,
    pub gamma_st_pruned: usize,
    pub steiner_number: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self {
            gamma_bruteforce: 20,
            gamma_st_unpruned: 18,
            gamma_st_pruned: 24,
            steiner_number: 18,
        }
    }
}

// bitmasks are u64
const MASK_LIMIT: usize = 63;

/// The vertex set and edge count of the minimal subtree spanning `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerTreeSpan {
    pub vertices: VertexSet,
    pub edge_count: usize,
}

fn check_members(t: &AdjacencyTree, w: &VertexSet) -> Result<()> {
    match w.max() {
        Some(v) if v > t.len() => Err(Error::VertexOutOfRange {
            label: v,
            n: t.len(),
        }),
        _ if w.as_slice().first() == Some(&0) => Err(Error::VertexOutOfRange {
            label: 0,
            n: t.len(),
        }),
        _ => Ok(()),
    }
}

/// The unique minimal subtree of `t` containing `w`, found by repeatedly
/// deleting degree-one vertices outside `w`.
pub fn steiner_subtree(t: &AdjacencyTree, w: &VertexSet) -> Result<SteinerTreeSpan> {
    if w.is_empty() {
        return Err(Error::EmptySet);
    }
    check_members(t, w)?;
    let n = t.len();
    let mut alive = vec![true; n + 1];
    alive[0] = false;
    let mut deg: Vec<usize> = std::iter::once(0)
        .chain(t.degrees().iter().copied())
        .collect();
    let mut in_w = vec![false; n + 1];
    for v in w.iter() {
        in_w[v] = true;
    }
    let mut stack: Vec<usize> = (1..=n).filter(|&v| !in_w[v] && deg[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for u in t.neighbors(v) {
            if alive[u] {
                deg[u] -= 1;
                if !in_w[u] && deg[u] <= 1 {
                    stack.push(u);
                }
            }
        }
    }
    let vertices = VertexSet::from_flags(&alive);
    let edge_count = (1..=n)
        .filter(|&v| alive[v] && t.parent(v) != 0 && alive[t.parent(v)])
        .count();
    Ok(SteinerTreeSpan {
        vertices,
        edge_count,
    })
}

/// d(W): the number of edges of the minimal subtree spanning `w`.
pub fn steiner_distance(t: &AdjacencyTree, w: &VertexSet) -> Result<usize> {
    Ok(steiner_subtree(t, w)?.edge_count)
}

/// True when the minimal subtree spanning `w` covers every vertex.
pub fn is_steiner_set(t: &AdjacencyTree, w: &VertexSet) -> Result<bool> {
    Ok(steiner_subtree(t, w)?.vertices.len() == t.len())
}

pub fn is_dominating_set(t: &AdjacencyTree, s: &VertexSet) -> Result<bool> {
    Ok(closed_neighborhood(t, s)?.len() == t.len())
}

/// Bit `v - 1` stands for vertex `v`.
struct Masks {
    n: usize,
    full: u64,
    /// closed[v - 1] = N[v]
    closed: Vec<u64>,
    /// open[v - 1] = N(v)
    open: Vec<u64>,
}

impl Masks {
    fn new(t: &AdjacencyTree) -> Self {
        let n = t.len();
        assert!(n <= MASK_LIMIT);
        let mut open = vec![0u64; n];
        for v in 1..=n {
            let p = t.parent(v);
            if p != 0 {
                open[v - 1] |= 1 << (p - 1);
                open[p - 1] |= 1 << (v - 1);
            }
        }
        let closed = open
            .iter()
            .enumerate()
            .map(|(i, &m)| m | (1 << i))
            .collect();
        Self {
            n,
            full: if n == 0 { 0 } else { u64::MAX >> (64 - n) },
            closed,
            open,
        }
    }

    #[cfg(test)]
    fn dominates(&self, w: u64) -> bool {
        let mut covered = 0;
        let mut rest = w;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            covered |= self.closed[i];
            rest &= rest - 1;
        }
        covered == self.full
    }

    /// Leaf-peels the vertices outside `w` and reports whether anything was
    /// removed.
    fn spans_all(&self, w: u64) -> bool {
        if w == 0 {
            return self.n == 0;
        }
        let mut remaining = self.full;
        loop {
            let mut changed = false;
            let mut outside = remaining & !w;
            while outside != 0 {
                let i = outside.trailing_zeros() as usize;
                outside &= outside - 1;
                if (self.open[i] & remaining).count_ones() <= 1 {
                    remaining &= !(1 << i);
                    changed = true;
                }
            }
            if !changed {
                return remaining == self.full;
            }
        }
    }

    fn to_set(&self, w: u64) -> VertexSet {
        VertexSet::from_sorted(
            (0..self.n)
                .filter(|i| w >> i & 1 == 1)
                .map(|i| i + 1)
                .collect(),
        )
    }
}

/// Visits size-`k` subsets of `candidates` in lexicographic order, each
/// joined with a fixed `base` set.
struct Combinations<'a> {
    masks: &'a Masks,
    candidates: Vec<usize>,
    /// suffix[i] = union of candidate bits from position i on
    suffix: Vec<u64>,
    /// Skip branches that can no longer dominate every vertex.
    require_domination: bool,
}

impl<'a> Combinations<'a> {
    fn new(masks: &'a Masks, candidates: Vec<usize>, require_domination: bool) -> Self {
        let mut suffix = vec![0u64; candidates.len() + 1];
        for i in (0..candidates.len()).rev() {
            suffix[i] = suffix[i + 1] | (1 << candidates[i]);
        }
        Self {
            masks,
            candidates,
            suffix,
            require_domination,
        }
    }

    /// Calls `visit` on every subset until it returns true; returns whether
    /// it did.
    fn search(&self, k: usize, base: u64, visit: &mut impl FnMut(u64) -> bool) -> bool {
        let mut dominated = 0;
        let mut rest = base;
        while rest != 0 {
            dominated |= self.masks.closed[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        self.recurse(0, k, base, dominated, visit)
    }

    fn recurse(
        &self,
        start: usize,
        left: usize,
        chosen: u64,
        dominated: u64,
        visit: &mut impl FnMut(u64) -> bool,
    ) -> bool {
        let full = self.masks.full;
        if left == 0 {
            if self.require_domination && dominated != full {
                return false;
            }
            return visit(chosen);
        }
        if self.require_domination && dominated != full {
            let u = (full & !dominated).trailing_zeros() as usize;
            if self.masks.closed[u] & self.suffix[start] == 0 {
                return false;
            }
        }
        if self.candidates.len() < start + left {
            return false;
        }
        for i in start..=self.candidates.len() - left {
            let c = self.candidates[i];
            if self.recurse(
                i + 1,
                left - 1,
                chosen | 1 << c,
                dominated | self.masks.closed[c],
                visit,
            ) {
                return true;
            }
        }
        false
    }
}

fn enforce_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap || n > MASK_LIMIT {
        Err(Error::CapExceeded {
            what,
            n,
            cap: cap.min(MASK_LIMIT),
        })
    } else {
        Ok(())
    }
}

/// γ of a forest and the lexicographically first minimum dominating set,
/// by enumeration in order of increasing size.
pub fn exact_gamma_bruteforce(f: &AdjacencyTree) -> Result<(usize, VertexSet)> {
    exact_gamma_bruteforce_capped(f, OracleCaps::default().gamma_bruteforce)
}

pub fn exact_gamma_bruteforce_capped(f: &AdjacencyTree, cap: usize) -> Result<(usize, VertexSet)> {
    enforce_cap("exact_gamma_bruteforce", f.len(), cap)?;
    let masks = Masks::new(f);
    let combos = Combinations::new(&masks, (0..masks.n).collect(), true);
    for k in 0..=masks.n {
        let mut found = None;
        if combos.search(k, 0, &mut |w| {
            found = Some(w);
            true
        }) {
            let w = found.unwrap();
            return Ok((k, masks.to_set(w)));
        }
    }
    unreachable!("the full vertex set dominates")
}

/// γ of a forest by dynamic programming over three states per vertex:
/// chosen, dominated by a child, or still waiting on its parent.
pub fn exact_gamma_dp(f: &AdjacencyTree) -> usize {
    const INF: usize = usize::MAX / 4;
    let n = f.len();
    // top-down order from every root; children come after parents
    let mut order = Vec::with_capacity(n);
    for r in f.roots() {
        let start = order.len();
        order.push(r);
        let mut i = start;
        while i < order.len() {
            let v = order[i];
            order.extend_from_slice(f.children(v));
            i += 1;
        }
    }
    debug_assert_eq!(order.len(), n);

    let mut chosen = vec![0usize; n + 1];
    let mut covered = vec![0usize; n + 1];
    let mut waiting = vec![0usize; n + 1];
    for &v in order.iter().rev() {
        let mut take = 1;
        let mut wait = 0;
        let mut cover = 0;
        let mut best_extra = INF;
        let kids = f.children(v);
        for &c in kids {
            take += chosen[c].min(covered[c]).min(waiting[c]);
            wait = (wait + covered[c]).min(INF);
            let best = chosen[c].min(covered[c]);
            cover += best;
            best_extra = best_extra.min(chosen[c] - best);
        }
        chosen[v] = take;
        waiting[v] = wait;
        covered[v] = if kids.is_empty() {
            INF
        } else {
            (cover + best_extra).min(INF)
        };
    }
    f.roots().map(|r| chosen[r].min(covered[r])).sum()
}

/// γ_st of a tree with the lexicographically first minimum witness.
///
/// With `prune`, only supersets of the leaf set are searched; every
/// end-vertex lies in every Steiner set, so this loses nothing, but callers
/// that want to test that fact must use `prune = false`.
pub fn exact_gamma_st(t: &AdjacencyTree, prune: bool) -> Result<(usize, VertexSet)> {
    let caps = OracleCaps::default();
    let cap = if prune {
        caps.gamma_st_pruned
    } else {
        caps.gamma_st_unpruned
    };
    exact_gamma_st_capped(t, prune, cap)
}

pub fn exact_gamma_st_capped(
    t: &AdjacencyTree,
    prune: bool,
    cap: usize,
) -> Result<(usize, VertexSet)> {
    enforce_cap("exact_gamma_st", t.len(), cap)?;
    if t.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let masks = Masks::new(t);
    let (base, candidates): (u64, Vec<usize>) = if prune {
        let is_end = |i: usize| masks.n == 1 || masks.open[i].count_ones() == 1;
        let base = (0..masks.n)
            .filter(|&i| is_end(i))
            .fold(0, |m, i| m | 1 << i);
        (base, (0..masks.n).filter(|&i| !is_end(i)).collect())
    } else {
        (0, (0..masks.n).collect())
    };
    let base_size = base.count_ones() as usize;
    let combos = Combinations::new(&masks, candidates, true);
    for extra in 0..=combos.candidates.len() {
        let mut found = None;
        if combos.search(extra, base, &mut |w| {
            if masks.spans_all(w) {
                found = Some(w);
                true
            } else {
                false
            }
        }) {
            return Ok((base_size + extra, masks.to_set(found.unwrap())));
        }
    }
    unreachable!("the full vertex set is Steiner and dominating")
}

/// s(T): the smallest size of a Steiner set.
pub fn exact_steiner_number(t: &AdjacencyTree) -> Result<usize> {
    Ok(minimum_steiner_sets_capped(t, OracleCaps::default().steiner_number, false)?.0)
}

/// Every minimum Steiner set, in lexicographic order.
pub fn minimum_steiner_sets(t: &AdjacencyTree) -> Result<(usize, Vec<VertexSet>)> {
    minimum_steiner_sets_capped(t, OracleCaps::default().steiner_number, true)
}

fn minimum_steiner_sets_capped(
    t: &AdjacencyTree,
    cap: usize,
    all: bool,
) -> Result<(usize, Vec<VertexSet>)> {
    enforce_cap("exact_steiner_number", t.len(), cap)?;
    if t.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let masks = Masks::new(t);
    let combos = Combinations::new(&masks, (0..masks.n).collect(), false);
    for k in 1..=masks.n {
        let mut found = Vec::new();
        combos.search(k, 0, &mut |w| {
            if masks.spans_all(w) {
                found.push(masks.to_set(w));
                !all
            } else {
                false
            }
        });
        if !found.is_empty() {
            return Ok((k, found));
        }
    }
    unreachable!("the full vertex set is a Steiner set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree_model::{build_adjacency, ParentArray};

    fn tree(p: &[usize]) -> AdjacencyTree {
        build_adjacency(&ParentArray::new(p.to_vec()).unwrap())
    }

    fn set(v: &[usize]) -> VertexSet {
        v.to_vec().into()
    }

    const P5: &[usize] = &[0, 1, 2, 3, 4];
    const STAR4: &[usize] = &[0, 1, 1, 1];
    const SPIDER: &[usize] = &[0, 1, 1, 1, 3, 4, 5, 6];

    #[test]
    fn subtrees() {
        let p5 = tree(P5);
        let s = steiner_subtree(&p5, &set(&[1, 5])).unwrap();
        assert_eq!((s.vertices, s.edge_count), (set(&[1, 2, 3, 4, 5]), 4));
        let s = steiner_subtree(&p5, &set(&[2, 4])).unwrap();
        assert_eq!((s.vertices, s.edge_count), (set(&[2, 3, 4]), 2));
        let s = steiner_subtree(&tree(STAR4), &set(&[2, 3])).unwrap();
        assert_eq!((s.vertices, s.edge_count), (set(&[1, 2, 3]), 2));
        assert_eq!(
            steiner_subtree(&p5, &VertexSet::new()),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn distances() {
        assert_eq!(steiner_distance(&tree(P5), &set(&[1, 5])), Ok(4));
        assert_eq!(steiner_distance(&tree(P5), &set(&[3])), Ok(0));
        assert_eq!(steiner_distance(&tree(STAR4), &set(&[2, 3, 4])), Ok(3));
    }

    #[test]
    fn steiner_and_domination_predicates() {
        let p5 = tree(P5);
        assert_eq!(is_steiner_set(&p5, &set(&[1, 5])), Ok(true));
        assert_eq!(is_steiner_set(&p5, &set(&[1, 4])), Ok(false));
        assert_eq!(is_dominating_set(&p5, &set(&[2, 4])), Ok(true));
        assert_eq!(is_dominating_set(&p5, &set(&[1, 5])), Ok(false));
        assert_eq!(is_dominating_set(&tree(STAR4), &set(&[1])), Ok(true));
    }

    #[test]
    fn mask_predicates_agree_with_set_predicates() {
        let t = tree(SPIDER);
        let masks = Masks::new(&t);
        for w in 1u64..(1 << 8) {
            let s = masks.to_set(w);
            assert_eq!(masks.spans_all(w), is_steiner_set(&t, &s).unwrap(), "{s}");
            assert_eq!(
                masks.dominates(w),
                is_dominating_set(&t, &s).unwrap(),
                "{s}"
            );
        }
    }

    #[test]
    fn gamma_bruteforce_examples() {
        // {1,4} precedes {2,4}
        assert_eq!(exact_gamma_bruteforce(&tree(P5)), Ok((2, set(&[1, 4]))));
        assert_eq!(exact_gamma_bruteforce(&tree(STAR4)), Ok((1, set(&[1]))));
        assert_eq!(
            exact_gamma_bruteforce(&tree(&[0, 0])),
            Ok((2, set(&[1, 2])))
        );
        assert_eq!(
            exact_gamma_bruteforce(&tree(&[])),
            Ok((0, VertexSet::new()))
        );
        let big: Vec<usize> = (0..21).collect();
        assert!(matches!(
            exact_gamma_bruteforce(&tree(&big)),
            Err(Error::CapExceeded { n: 21, cap: 20, .. })
        ));
    }

    #[test]
    fn gamma_dp_matches_path_formula() {
        for k in 1..=12usize {
            let path: Vec<usize> = (0..k).collect();
            let t = tree(&path);
            assert_eq!(exact_gamma_dp(&t), k.div_ceil(3), "P{k}");
            assert_eq!(exact_gamma_bruteforce(&t).unwrap().0, k.div_ceil(3), "P{k}");
        }
        assert_eq!(exact_gamma_dp(&tree(STAR4)), 1);
        assert_eq!(exact_gamma_dp(&tree(&[0, 0, 0])), 3);
        assert_eq!(exact_gamma_dp(&tree(&[])), 0);
    }

    #[test]
    fn gamma_st_examples() {
        assert_eq!(exact_gamma_st(&tree(P5), false), Ok((3, set(&[1, 2, 5]))));
        assert_eq!(
            exact_gamma_st(&tree(STAR4), false),
            Ok((3, set(&[2, 3, 4])))
        );
        assert_eq!(exact_gamma_st(&tree(&[0]), false), Ok((1, set(&[1]))));
        assert_eq!(exact_gamma_st(&tree(&[0, 1]), true), Ok((2, set(&[1, 2]))));
    }

    #[test]
    fn gamma_st_of_the_spider_fixture() {
        let t = tree(SPIDER);
        assert_eq!(exact_gamma_st(&t, false), Ok((4, set(&[1, 2, 7, 8]))));
        assert_eq!(exact_gamma_st(&t, true), Ok((4, set(&[1, 2, 7, 8]))));
    }

    #[test]
    fn steiner_numbers() {
        assert_eq!(exact_steiner_number(&tree(P5)), Ok(2));
        assert_eq!(exact_steiner_number(&tree(STAR4)), Ok(3));
        let (k, sets) = minimum_steiner_sets(&tree(STAR4)).unwrap();
        assert_eq!((k, sets), (3, vec![set(&[2, 3, 4])]));
        let (k, sets) = minimum_steiner_sets(&tree(&[0, 1])).unwrap();
        assert_eq!((k, sets), (2, vec![set(&[1, 2])]));
    }
}
