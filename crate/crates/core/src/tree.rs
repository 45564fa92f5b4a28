//! The multiplicity tree of the Arf closure: construction from a blow-up
//! sequence, the conductor, small elements, semigroup membership, structural
//! validation, and the Arf-closure check for the value semigroup.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lipman::LipmanSequence;

/// A multiplicity sequence, stored up to its length and implicitly extended
/// by 1s. The trailing-1 trim makes the representation canonical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiplicitySequence {
    entries: Vec<u64>,
}

impl MultiplicitySequence {
    pub fn new(entries: impl IntoIterator<Item = u64>) -> Self {
        let mut entries: Vec<u64> = entries.into_iter().collect();
        while entries.len() > 1 && *entries.last().unwrap() == 1 {
            entries.pop();
        }
        if entries.is_empty() {
            entries.push(1);
        }
        MultiplicitySequence { entries }
    }

    /// Stored entries, up to the length of the sequence.
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Length l: the last level with an entry other than 1 (1 if none).
    pub fn length(&self) -> u64 {
        self.entries.len() as u64
    }

    /// Entry at 1-based level m, extended by 1s.
    pub fn entry(&self, m: u64) -> u64 {
        assert!(m >= 1);
        self.entries.get((m - 1) as usize).copied().unwrap_or(1)
    }

    /// Sum of the first `d` entries of the 1-padded sequence.
    pub fn prefix(&self, d: u64) -> u64 {
        (1..=d).map(|m| self.entry(m)).sum()
    }

    /// Branch conductor: the prefix sum up to the length.
    pub fn conductor(&self) -> u64 {
        self.prefix(self.length())
    }

    /// The depth whose prefix sum equals `v`, if any. Prefix sums are
    /// strictly increasing, so the depth is unique.
    pub fn depth_of(&self, v: u64) -> Option<u64> {
        if v == 0 {
            return Some(0);
        }
        let mut acc = 0;
        let mut d = 0;
        while acc < v {
            d += 1;
            let e = self.entry(d);
            if e == 0 {
                return None;
            }
            acc += e;
        }
        (acc == v).then_some(d)
    }

    /// The unique s >= k+1 with entry(k) equal to the sum of entries k+1..=s,
    /// or `NotAMultiplicitySequence` when the partial sums skip the target.
    pub fn s_at(&self, k: u64) -> Result<u64> {
        let target = self.entry(k);
        let mut acc = 0;
        let mut s = k;
        while acc < target {
            s += 1;
            let e = self.entry(s);
            if e == 0 {
                return Err(Error::NotAMultiplicitySequence { index: k as usize });
            }
            acc += e;
        }
        if acc == target {
            Ok(s)
        } else {
            Err(Error::NotAMultiplicitySequence { index: k as usize })
        }
    }

    /// Checks entries >= 1 and the partial-sum property for every level up
    /// to the length.
    pub fn validate(&self) -> Result<()> {
        for (i, &e) in self.entries.iter().enumerate() {
            if e == 0 {
                return Err(Error::NotAMultiplicitySequence { index: i + 1 });
            }
        }
        for k in 1..=self.length() {
            self.s_at(k)?;
        }
        Ok(())
    }
}

/// An element of N^n.
pub type SemigroupVector = Vec<u64>;

/// The multiplicity tree of an Arf semigroup over n branches: one
/// multiplicity sequence per branch plus the ramification levels p(i,j),
/// the highest level at which branches i and j share a node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiplicityTree {
    sequences: Vec<MultiplicitySequence>,
    /// Full symmetric matrix; diagonal unused (0).
    ram: Vec<Vec<u64>>,
}

impl MultiplicityTree {
    /// Builds a tree from sequences and the pairwise gluing levels given as
    /// `(i, j, level)` with `i < j`. No validity check is performed here;
    /// see [`MultiplicityTree::validate`].
    pub fn new(
        sequences: Vec<MultiplicitySequence>,
        glue: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Self {
        let n = sequences.len();
        let mut ram = vec![vec![0; n]; n];
        for (i, j, p) in glue {
            assert!(i < j && j < n);
            ram[i][j] = p;
            ram[j][i] = p;
        }
        MultiplicityTree { sequences, ram }
    }

    pub fn n(&self) -> usize {
        self.sequences.len()
    }

    pub fn sequences(&self) -> &[MultiplicitySequence] {
        &self.sequences
    }

    pub fn sequence(&self, i: usize) -> &MultiplicitySequence {
        &self.sequences[i]
    }

    /// Highest level at which branches i and j are glued (0 when never).
    pub fn glue_level(&self, i: usize, j: usize) -> u64 {
        self.ram[i][j]
    }

    /// Highest level at which branch i is glued to any other branch.
    pub fn max_glue(&self, i: usize) -> u64 {
        (0..self.n()).filter(|&j| j != i).map(|j| self.ram[i][j]).max().unwrap_or(0)
    }

    /// Upper-triangular ramification matrix rows, as displayed.
    pub fn ram_rows(&self) -> Vec<Vec<u64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| if j > i { self.ram[i][j] } else { 0 }).collect())
            .collect()
    }

    /// Depth at which branch i reaches the conductor: max(l_i, p_i).
    fn conductor_depth(&self, i: usize) -> u64 {
        self.sequence(i).length().max(self.max_glue(i))
    }

    /// Blocks of glued branches at a 1-based level, assuming the ram matrix
    /// is tree-compatible.
    pub fn blocks_at_level(&self, m: u64) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut blocks = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut block = vec![i];
            seen[i] = true;
            for j in i + 1..n {
                if !seen[j] && self.ram[i][j] >= m {
                    block.push(j);
                    seen[j] = true;
                }
            }
            blocks.push(block);
        }
        blocks
    }
}

/// Extracts the multiplicity tree from a completed blow-up sequence:
/// sequence entry (i, m) is the i-th component of the level-m block
/// containing branch i, and p(i,j) is the last level where i and j share a
/// block.
pub fn build_tree(seq: &LipmanSequence) -> MultiplicityTree {
    let n = seq.n();
    let branches = seq.branches();
    let mut sequences = Vec::with_capacity(n);
    for i in 0..n {
        let entries: Vec<u64> =
            (1..=seq.levels()).map(|m| seq.block_at(m, branches[i]).mult.vec[i]).collect();
        sequences.push(MultiplicitySequence::new(entries));
    }
    let mut glue = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut p = 0;
            for m in 1..=seq.levels() {
                if seq.block_at(m, branches[i]).branches.contains(&branches[j]) {
                    p = m;
                }
            }
            glue.push((i, j, p));
        }
    }
    MultiplicityTree::new(sequences, glue)
}

/// Conductor of the tree's semigroup: along branch i, the sum of the
/// multiplicities down to the last level where the branch is either glued to
/// another branch or still above multiplicity 1.
pub fn conductor(t: &MultiplicityTree) -> SemigroupVector {
    (0..t.n()).map(|i| t.sequence(i).prefix(t.conductor_depth(i))).collect()
}

/// Depth vectors encode rooted finite subtrees: branch i takes the nodes of
/// levels 1..=d_i, and two glued branches must either leave the glued range
/// together (both depths >= p(i,j)) or stop at the same level.
fn depths_compatible(t: &MultiplicityTree, d: &[u64]) -> bool {
    for i in 0..t.n() {
        for j in i + 1..t.n() {
            let p = t.glue_level(i, j);
            if d[i] != d[j] && d[i].min(d[j]) < p {
                return false;
            }
        }
    }
    true
}

/// Membership in the value semigroup: v is 0 or the node-sum of a finite
/// subtree rooted at the root, i.e. every component is a prefix sum of its
/// branch sequence at pairwise-compatible depths.
pub fn semigroup_member(t: &MultiplicityTree, v: &[u64]) -> bool {
    assert_eq!(v.len(), t.n());
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    let mut depths = Vec::with_capacity(t.n());
    for i in 0..t.n() {
        match t.sequence(i).depth_of(v[i]) {
            Some(d) if d >= 1 => depths.push(d),
            _ => return false,
        }
    }
    depths_compatible(t, &depths)
}

/// The depth vector realizing a nonzero member, unique when it exists.
pub fn member_depths(t: &MultiplicityTree, v: &[u64]) -> Option<Vec<u64>> {
    let mut depths = Vec::with_capacity(t.n());
    for i in 0..t.n() {
        match t.sequence(i).depth_of(v[i]) {
            Some(d) if d >= 1 => depths.push(d),
            _ => return None,
        }
    }
    depths_compatible(t, &depths).then_some(depths)
}

/// All nonzero semigroup elements bounded by the conductor, sorted.
pub fn small_elements(t: &MultiplicityTree) -> Vec<SemigroupVector> {
    let caps: Vec<u64> = (0..t.n()).map(|i| t.conductor_depth(i)).collect();
    let mut out = BTreeSet::new();
    let mut depths = vec![1u64; t.n()];
    loop {
        if depths_compatible(t, &depths) {
            out.insert(
                (0..t.n()).map(|i| t.sequence(i).prefix(depths[i])).collect::<Vec<u64>>(),
            );
        }
        // odometer over [1, caps]
        let mut pos = 0;
        loop {
            if pos == t.n() {
                return out.into_iter().collect();
            }
            if depths[pos] < caps[pos] {
                depths[pos] += 1;
                break;
            }
            depths[pos] = 1;
            pos += 1;
        }
    }
}

/// First failed structural axiom of a multiplicity tree, if any: per-branch
/// multiplicity sequences, positive tree-compatible ramification levels, and
/// for every node the subtree-sum property (each node is the sum of the
/// nodes of a finite subtree rooted at it, the node itself excluded).
pub fn validate_tree(t: &MultiplicityTree) -> std::result::Result<(), String> {
    for (i, s) in t.sequences().iter().enumerate() {
        if let Err(e) = s.validate() {
            return Err(format!("branch {i}: {e}"));
        }
    }
    let n = t.n();
    for i in 0..n {
        for j in i + 1..n {
            if t.glue_level(i, j) < 1 {
                return Err(format!(
                    "branches {i} and {j} are never glued: not the tree of a local ring"
                ));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut ps = [t.glue_level(i, j), t.glue_level(i, k), t.glue_level(j, k)];
                ps.sort_unstable();
                if ps[0] != ps[1] {
                    return Err(format!(
                        "ramification levels for branches {i}, {j}, {k} are not tree-compatible"
                    ));
                }
            }
        }
    }
    let max_level = (0..n)
        .map(|i| t.conductor_depth(i))
        .max()
        .unwrap_or(1);
    for m in 1..=max_level {
        for block in t.blocks_at_level(m) {
            // The node at (m, block) must equal the sum of a subtree rooted
            // at it; the per-branch depths are forced to be the s-values,
            // which must then be pairwise compatible below the gluing levels.
            let mut s_vals = Vec::with_capacity(block.len());
            for &i in &block {
                match t.sequence(i).s_at(m) {
                    Ok(s) => s_vals.push(s),
                    Err(e) => return Err(format!("branch {i} at level {m}: {e}")),
                }
            }
            for a in 0..block.len() {
                for b in a + 1..block.len() {
                    let p = t.glue_level(block[a], block[b]);
                    let (sa, sb) = (s_vals[a], s_vals[b]);
                    if sa != sb && sa.min(sb) < p {
                        return Err(format!(
                            "node at level {m} on branches {:?} is not a subtree sum",
                            block
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Arf condition for an abstract value set: for every small element alpha,
/// the translated set S(alpha) - alpha is closed under addition. Membership
/// is answered by the supplied oracle and the pair search is truncated at
/// componentwise 2c; sums beyond that lie in the conductor ideal and are
/// members trivially.
pub fn arf_closed(
    small: &[SemigroupVector],
    conductor: &[u64],
    member: impl Fn(&[u64]) -> bool,
) -> bool {
    let n = conductor.len();
    let cap: Vec<u64> = conductor.iter().map(|&c| 2 * c).collect();
    for alpha in small {
        // Collect the members of [alpha, 2c].
        let mut pool: Vec<Vec<u64>> = Vec::new();
        let mut v = alpha.clone();
        'scan: loop {
            if member(&v) {
                pool.push(v.clone());
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    break 'scan;
                }
                if v[pos] < cap[pos] {
                    v[pos] += 1;
                    break;
                }
                v[pos] = alpha[pos];
                pos += 1;
            }
        }
        for (a, b1) in pool.iter().enumerate() {
            for b2 in &pool[a..] {
                let sum: Vec<u64> =
                    (0..n).map(|i| b1[i] + b2[i] - alpha[i]).collect();
                if !member(&sum) {
                    return false;
                }
            }
        }
    }
    true
}

/// Arf condition for the tree's own value semigroup. Equivalent to
/// [`arf_closed`] over the depth-vector membership test, decomposed for
/// speed: a sum escapes the semigroup either because one coordinate leaves
/// its branch value set, or because two coordinates land on incompatible
/// depths; conversely, any single-branch or branch-pair violation extends to
/// a violating pair of members by padding the other coordinates with their
/// largest in-range depths (which are compatible with everything).
pub fn check_arf(t: &MultiplicityTree) -> bool {
    let n = t.n();
    let c = conductor(t);
    let small = small_elements(t);
    // Largest depth with prefix sum at most 2c, per branch, and value->depth
    // tables covering every sum the pair search can produce.
    let mut depth_cap = vec![0u64; n];
    let mut value_depth: Vec<Vec<Option<u64>>> = Vec::with_capacity(n);
    for i in 0..n {
        let s = t.sequence(i);
        let mut d = 0;
        while s.prefix(d + 1) <= 2 * c[i] {
            d += 1;
        }
        depth_cap[i] = d;
        let top = 4 * c[i] as usize;
        let mut table = vec![None; top + 1];
        let mut depth = 0u64;
        loop {
            let v = s.prefix(depth);
            if v as usize > top {
                break;
            }
            table[v as usize] = Some(depth);
            depth += 1;
        }
        value_depth.push(table);
    }
    let depth_at = |i: usize, v: u64| -> Option<u64> {
        value_depth[i].get(v as usize).copied().flatten()
    };

    for alpha in &small {
        let a: Vec<u64> = (0..n)
            .map(|i| t.sequence(i).depth_of(alpha[i]).expect("small elements are members"))
            .collect();
        // per-branch closure of the translated value set
        for i in 0..n {
            let s = t.sequence(i);
            for e in a[i]..=depth_cap[i] {
                for f in e..=depth_cap[i] {
                    let w = s.prefix(e) + s.prefix(f) - alpha[i];
                    if depth_at(i, w).is_none() {
                        return false;
                    }
                }
            }
        }
        // pairwise depth compatibility of translated sums
        for i in 0..n {
            for j in i + 1..n {
                let p = t.glue_level(i, j);
                let compat = |x: u64, y: u64| x == y || x.min(y) >= p;
                let mut pairs = Vec::new();
                for e_i in a[i]..=depth_cap[i] {
                    for e_j in a[j]..=depth_cap[j] {
                        if compat(e_i, e_j) {
                            pairs.push((t.sequence(i).prefix(e_i), t.sequence(j).prefix(e_j)));
                        }
                    }
                }
                for (x, b1) in pairs.iter().enumerate() {
                    for b2 in &pairs[x..] {
                        let w_i = b1.0 + b2.0 - alpha[i];
                        let w_j = b1.1 + b2.1 - alpha[j];
                        match (depth_at(i, w_i), depth_at(j, w_j)) {
                            (Some(g_i), Some(g_j)) => {
                                if !compat(g_i, g_j) {
                                    return false;
                                }
                            }
                            _ => return false,
                        }
                    }
                }
            }
        }
    }
    true
}
