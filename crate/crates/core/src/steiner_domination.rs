//! Steiner dominating set of a tree: all end-vertices, plus a minimum
//! dominating set of the forest left after deleting the end-vertices and
//! their neighbors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest_domination::forest_domination;
use crate::tree_model::{
    build_adjacency, leaf_set, validate, AdjacencyTree, Mode, ParentArray, VertexSet,
};

/// The forest H induced by the vertices that are neither leaves nor adjacent
/// to a leaf, relabeled `1..=m` in increasing tree-label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSubgraph {
    /// `index[h - 1]` is the tree label of H-vertex `h`.
    pub index: Vec<usize>,
    /// `rindex[v]` is the H-label of tree vertex `v`, or 0 if `v` is not in H.
    pub rindex: Vec<usize>,
    /// Parent array of H over H-labels.
    pub nparent: ParentArray,
}

impl HSubgraph {
    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Tree label of H-vertex `h`.
    pub fn tree_label(&self, h: usize) -> usize {
        self.index[h - 1]
    }

    /// H-label of tree vertex `v`, if it lies in H.
    pub fn h_label(&self, v: usize) -> Option<usize> {
        match self.rindex.get(v) {
            Some(&h) if h != 0 => Some(h),
            _ => None,
        }
    }

    /// The members of H as tree labels.
    pub fn tree_vertices(&self) -> VertexSet {
        self.index.iter().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerDominationResult {
    pub leaves: VertexSet,
    pub h: HSubgraph,
    /// Minimum dominating set of H, in tree labels.
    pub d_h: VertexSet,
    pub sd: VertexSet,
    pub size: usize,
    /// |leaves| + |d_h|.
    pub formula_value: usize,
}

/// Flat report of a [`SteinerDominationResult`], all labels in tree space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub n: usize,
    pub leaves: VertexSet,
    pub h_vertices: VertexSet,
    pub gamma_h: usize,
    pub steiner_dominating_set: VertexSet,
    pub size: usize,
    pub formula_value: usize,
}

impl SteinerDominationResult {
    pub fn report(&self, n: usize) -> SolveReport {
        SolveReport {
            n,
            leaves: self.leaves.clone(),
            h_vertices: self.h.tree_vertices(),
            gamma_h: self.d_h.len(),
            steiner_dominating_set: self.sd.clone(),
            size: self.size,
            formula_value: self.formula_value,
        }
    }
}

/// Marks every vertex of N[leaves]. Both directions are marked, so a leaf
/// root also excludes its only child.
fn mark_leaf_neighborhood(t: &AdjacencyTree, leaves: &VertexSet) -> Result<Vec<bool>> {
    let n = t.len();
    let mut near_leaf = vec![false; n + 1];
    for v in leaves.iter() {
        if v == 0 || v > n || (n > 1 && t.degree(v) != 1) {
            return Err(Error::InconsistentLeaves);
        }
        near_leaf[v] = true;
        for w in t.neighbors(v) {
            near_leaf[w] = true;
        }
    }
    Ok(near_leaf)
}

/// Builds H = T[V - N[L]] from the tree and its leaf set.
pub fn build_h_subgraph(t: &AdjacencyTree, leaves: &VertexSet) -> Result<HSubgraph> {
    let n = t.len();
    let expected = (1..=n).filter(|&v| t.degree(v) == 1).count();
    let consistent = if n == 1 {
        leaves.as_slice() == [1]
    } else {
        leaves.len() == expected
    };
    if !consistent {
        return Err(Error::InconsistentLeaves);
    }
    let near_leaf = mark_leaf_neighborhood(t, leaves)?;

    let mut index = Vec::with_capacity(near_leaf.iter().skip(1).filter(|&&near| !near).count());
    let mut rindex = vec![0usize; n + 1];
    for v in 1..=n {
        if !near_leaf[v] {
            index.push(v);
            rindex[v] = index.len();
        }
    }

    let nparent = index
        .iter()
        .map(|&v| {
            let p = t.parent(v);
            if p == 0 || near_leaf[p] {
                0
            } else {
                // a leaf parent would put v in N[L]
                debug_assert!(!leaves.contains(p));
                rindex[p]
            }
        })
        .collect();
    // index is increasing, so every H-parent label is below its child's
    let nparent = ParentArray::new(nparent)?;

    Ok(HSubgraph {
        index,
        rindex,
        nparent,
    })
}

/// Builds the Steiner dominating set L(T) ∪ D(H) for a single tree.
pub fn steiner_domination(parents: &ParentArray) -> Result<SteinerDominationResult> {
    validate(parents, Mode::Tree)?;
    let t = build_adjacency(parents);
    let leaves = leaf_set(&t);
    let h = build_h_subgraph(&t, &leaves)?;

    let d_h: VertexSet = forest_domination(&h.nparent)
        .iter()
        .map(|hv| h.tree_label(hv))
        .collect();
    let sd = leaves.union(&d_h);
    debug_assert_eq!(sd.len(), leaves.len() + d_h.len());

    Ok(SteinerDominationResult {
        formula_value: leaves.len() + d_h.len(),
        size: sd.len(),
        leaves,
        h,
        d_h,
        sd,
    })
}

/// |L(T)| + γ(H) for a nontrivial tree, without assembling the set.
pub fn formula_gamma_st(t: &AdjacencyTree) -> Result<usize> {
    if t.len() < 2 {
        return Err(Error::TrivialTree);
    }
    let roots = t.roots().count();
    if roots != 1 {
        return Err(Error::MultipleRoots {
            roots: t.roots().collect(),
        });
    }
    let leaves = leaf_set(t);
    let h = build_h_subgraph(t, &leaves)?;
    Ok(leaves.len() + forest_domination(&h.nparent).len())
}
