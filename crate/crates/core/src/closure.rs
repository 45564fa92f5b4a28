//! The minimal tree and the finite presentation of the Arf closure.
//!
//! Each node of the multiplicity tree carries an actual ring element of
//! minimal valuation; multiplying the nodes of the subtree realizing a small
//! element and truncating at the conductor yields one K-basis representative
//! per small element.

use crate::algebra::{Order, Polynomial, SeriesFraction, Var};
use crate::curve::CurveElement;
use crate::error::{Error, Result};
use crate::lipman::LipmanSequence;
use crate::tree::{conductor, member_depths, small_elements, MultiplicityTree, SemigroupVector};

/// One node of the minimal tree: the block it covers and the minimal
/// element embedded into the full product with 1s off the block.
#[derive(Clone, Debug)]
pub struct MinimalNode {
    pub branches: Vec<usize>,
    pub element: CurveElement,
}

/// The multiplicity tree with a minimal-valuation element at every node.
#[derive(Clone, Debug)]
pub struct MinimalTree {
    branches: Vec<usize>,
    levels: Vec<Vec<MinimalNode>>,
}

impl MinimalTree {
    pub fn levels(&self) -> &[Vec<MinimalNode>] {
        &self.levels
    }

    pub fn depth(&self) -> u64 {
        self.levels.len() as u64
    }

    /// The node covering `branch` at a 1-based level.
    pub fn node_at(&self, level: u64, branch: usize) -> &MinimalNode {
        self.levels[(level - 1) as usize]
            .iter()
            .find(|n| n.branches.contains(&branch))
            .expect("every branch is covered at every level")
    }

    fn position(&self, branch: usize) -> usize {
        self.branches.iter().position(|&b| b == branch).expect("unknown branch")
    }
}

/// Reads the minimal tree off a completed blow-up sequence.
pub fn minimal_tree(seq: &LipmanSequence) -> MinimalTree {
    let levels = seq
        .records()
        .iter()
        .map(|r| {
            r.blocks
                .iter()
                .map(|b| MinimalNode { branches: b.branches.clone(), element: b.minimal.clone() })
                .collect()
        })
        .collect();
    MinimalTree { branches: seq.branches().to_vec(), levels }
}

/// One K-basis entry of the closure presentation.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisEntry {
    pub valuation: SemigroupVector,
    /// One polynomial per coordinate, truncated below the conductor.
    pub coords: Vec<Polynomial>,
}

/// Finite presentation of the Arf closure: the K-span of one representative
/// per small element below the conductor (the unit (1,...,1) is implicit),
/// plus the conductor ideal.
#[derive(Clone, Debug)]
pub struct ClosurePresentation {
    pub conductor: SemigroupVector,
    pub basis: Vec<BasisEntry>,
}

/// Builds the presentation: for every small element except the conductor,
/// multiply the minimal-tree nodes of the subtree realizing it and expand
/// each coordinate below the conductor. Every monomial dropped that way has
/// degree at least the conductor component, so it lies in the conductor
/// ideal and the K-span is unchanged. A coordinate whose valuation reaches
/// the conductor is dropped entirely, which yields the zero-coordinate
/// representatives.
pub fn presentation(mt: &MinimalTree, t: &MultiplicityTree) -> Result<ClosurePresentation> {
    let c = conductor(t);
    let mut basis = Vec::new();
    for v in small_elements(t) {
        if v == c {
            continue;
        }
        let depths = member_depths(t, &v)
            .ok_or_else(|| Error::InvalidTree("small element is not a member".into()))?;
        let coords = subtree_product(mt, &depths, &c);
        for (i, p) in coords.iter().enumerate() {
            let expected = if v[i] < c[i] { Order::Finite(v[i]) } else { Order::Infinite };
            if p.order() != expected {
                return Err(Error::InvalidTree(format!(
                    "representative for {v:?} has wrong order in coordinate {i}"
                )));
            }
        }
        basis.push(BasisEntry { valuation: v, coords });
    }
    Ok(ClosurePresentation { conductor: c, basis })
}

/// Coordinate-wise product of the nodes at levels 1..=d_i along each branch,
/// expanded below the conductor caps. Node elements carry the constant 1 off
/// their block, so only the nodes on the branch's own path contribute.
fn subtree_product(mt: &MinimalTree, depths: &[u64], caps: &[u64]) -> Vec<Polynomial> {
    let mut out = Vec::with_capacity(depths.len());
    for (pos, &depth) in depths.iter().enumerate() {
        let branch = mt.branches[pos];
        let mut acc = SeriesFraction::one(Var(branch));
        for level in 1..=depth {
            let node = mt.node_at(level, branch);
            acc = acc.mul(node.element.coord(mt.position(branch)));
        }
        out.push(acc.expand_to_cap(caps[pos]));
    }
    out
}
