//! Minimum dominating set of a rooted forest in one reverse pass over the
//! parent array, using the Bound / Required / Free labeling.

use serde::Serialize;

use crate::tree_model::{ParentArray, VertexSet};

/// Domination state of a vertex during the reverse pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum LabelState {
    /// Not yet dominated; some neighbor must still be chosen.
    Bound,
    /// Already dominated by a chosen child.
    Free,
    /// Must be in the dominating set.
    Required,
}

/// One label change observed during the reverse pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    /// The vertex being processed when the change happened.
    pub step: usize,
    pub vertex: usize,
    pub from: LabelState,
    pub to: LabelState,
}

/// Returns a minimum dominating set of the forest, in ascending label order.
/// The empty forest yields the empty set.
pub fn forest_domination(parents: &ParentArray) -> VertexSet {
    run(parents, |_| {})
}

/// Same as [`forest_domination`], also returning every label change made
/// during the reverse pass.
pub fn forest_domination_traced(parents: &ParentArray) -> (VertexSet, Vec<Transition>) {
    let mut trace = Vec::new();
    let d = run(parents, |t| trace.push(t));
    (d, trace)
}

#[inline]
fn run(parents: &ParentArray, mut observe: impl FnMut(Transition)) -> VertexSet {
    let n = parents.len();
    // index 0 is the "no parent" sentinel and is never read
    let mut label = vec![LabelState::Bound; n + 1];
    let mut in_d = vec![false; n + 1];

    let mut set = |label: &mut [LabelState], step: usize, vertex: usize, to: LabelState| {
        let from = label[vertex];
        if from != to {
            label[vertex] = to;
            observe(Transition {
                step,
                vertex,
                from,
                to,
            });
        }
    };

    for i in (1..=n).rev() {
        let p = parents.parent(i);
        match label[i] {
            LabelState::Bound if p != 0 => set(&mut label, i, p, LabelState::Required),
            LabelState::Required => {
                in_d[i] = true;
                if p != 0 && label[p] == LabelState::Bound {
                    set(&mut label, i, p, LabelState::Free);
                }
            }
            _ => {}
        }
    }

    // roots left Bound have no one to dominate them; Required roots are
    // already in D and re-inserting is a no-op
    for i in 1..=n {
        if parents.parent(i) == 0 && matches!(label[i], LabelState::Bound | LabelState::Required) {
            in_d[i] = true;
        }
    }

    VertexSet::from_flags(&in_d)
}
