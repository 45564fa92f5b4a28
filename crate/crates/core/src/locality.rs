//! Deciding whether a parametrized ring is local, and splitting a semilocal
//! ring into its local blocks.

use crate::curve::Parametrization;
use crate::error::{Error, Result};

/// A partition of the branch set into blocks. Each block keeps its branches
/// sorted and blocks are sorted by least element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        Partition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_single_block(&self) -> bool {
        self.blocks.len() == 1
    }

    /// The block containing the given branch.
    pub fn block_of(&self, branch: usize) -> Option<&[usize]> {
        self.blocks.iter().find(|b| b.contains(&branch)).map(|b| b.as_slice())
    }
}

/// Locality test for a two-branch parametrization. The ring splits as a
/// product exactly when some generator has a unit in exactly one coordinate,
/// or is a unit in both coordinates with two distinct constant terms.
pub fn is_local_pair(p: &Parametrization) -> bool {
    assert_eq!(p.n(), 2, "is_local_pair takes a two-branch parametrization");
    for g in p.generators() {
        let a = g.coord(0).order();
        let b = g.coord(1).order();
        if a.is_zero() != b.is_zero() {
            return false;
        }
        if a.is_zero() && b.is_zero() && g.coord(0).constant_term() != g.coord(1).constant_term() {
            return false;
        }
    }
    true
}

/// Decomposes the branch set into the local blocks of `p`: branches i and j
/// share a block exactly when the projection of `p` onto (i, j) is local.
/// The pairwise relation is verified to be transitive; a violation is
/// reported as `InconsistentLocality` rather than repaired.
pub fn partition(p: &Parametrization) -> Result<Partition> {
    let n = p.n();
    if n == 1 {
        return Ok(Partition::new(vec![vec![p.branches()[0]]]));
    }

    // Pairwise relation over coordinate positions.
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        rel[i][i] = true;
        for j in i + 1..n {
            let pair = p.project(&[i, j]).normalize()?;
            let local = is_local_pair(&pair);
            rel[i][j] = local;
            rel[j][i] = local;
        }
    }

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if rel[i][j] && rel[j][k] && !rel[i][k] {
                    return Err(Error::InconsistentLocality {
                        i: p.branches()[i],
                        j: p.branches()[j],
                        k: p.branches()[k],
                    });
                }
            }
        }
    }

    // Greedy sweep: each unassigned index opens a block and absorbs every
    // later index related to it.
    let mut assigned = vec![false; n];
    let mut blocks = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut block = vec![p.branches()[i]];
        assigned[i] = true;
        for j in i + 1..n {
            if !assigned[j] && rel[i][j] {
                block.push(p.branches()[j]);
                assigned[j] = true;
            }
        }
        blocks.push(block);
    }
    Ok(Partition::new(blocks))
}
