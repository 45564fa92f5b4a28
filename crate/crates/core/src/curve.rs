//! The ring model: multi-branch elements, parametrizations, the
//! normalization convention, valuations, multiplicity vectors, and
//! minimal-valuation element selection.

use num_traits::One;

use crate::algebra::{Order, Polynomial, Rational, SeriesFraction, Var};
use crate::error::{Error, Result};
use crate::locality::Partition;

/// One element of the product of power-series rings: an ordered tuple of
/// series fractions, coordinate `i` living in the branch variable carried by
/// that coordinate.
#[derive(Clone, PartialEq, Debug)]
pub struct CurveElement {
    coords: Vec<SeriesFraction>,
}

impl CurveElement {
    pub fn new(coords: Vec<SeriesFraction>) -> Self {
        CurveElement { coords }
    }

    pub fn from_polys(polys: Vec<Polynomial>) -> Self {
        CurveElement { coords: polys.into_iter().map(SeriesFraction::from_poly).collect() }
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, i: usize) -> &SeriesFraction {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[SeriesFraction] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Componentwise order of vanishing.
    pub fn valuation(&self) -> Vec<Order> {
        self.coords.iter().map(|c| c.order()).collect()
    }

    pub fn add(&self, rhs: &CurveElement) -> CurveElement {
        assert_eq!(self.arity(), rhs.arity());
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.add(b)).collect();
        CurveElement { coords }
    }

    pub fn mul(&self, rhs: &CurveElement) -> CurveElement {
        assert_eq!(self.arity(), rhs.arity());
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.mul(b)).collect();
        CurveElement { coords }
    }

    pub fn scaled(&self, c: &Rational) -> CurveElement {
        CurveElement { coords: self.coords.iter().map(|f| f.scaled(c)).collect() }
    }

    pub fn pow(&self, k: u64) -> CurveElement {
        CurveElement { coords: self.coords.iter().map(|f| f.pow(k)).collect() }
    }

    /// Coordinate-wise division; fails if any coordinate leaves K[[t]].
    pub fn div(&self, rhs: &CurveElement) -> Result<CurveElement> {
        assert_eq!(self.arity(), rhs.arity());
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a.div(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(CurveElement { coords })
    }

    /// All coordinates are units and their constant terms agree; such
    /// elements are the ones rewritten by the normalization convention.
    fn shared_unit_constant(&self) -> Option<Rational> {
        let mut shared: Option<Rational> = None;
        for c in &self.coords {
            if !c.order().is_zero() {
                return None;
            }
            let k = c.constant_term();
            match &shared {
                None => shared = Some(k),
                Some(s) if *s == k => {}
                Some(_) => return None,
            }
        }
        shared
    }
}

/// A parametrized (semi)local ring: a list of generators, each an n-tuple of
/// series fractions, together with the global branch indices the coordinates
/// refer to.
#[derive(Clone, PartialEq, Debug)]
pub struct Parametrization {
    branches: Vec<usize>,
    generators: Vec<CurveElement>,
}

impl Parametrization {
    pub fn new(branches: Vec<usize>, generators: Vec<CurveElement>) -> Self {
        for g in &generators {
            assert_eq!(g.arity(), branches.len(), "generator arity mismatch");
        }
        Parametrization { branches, generators }
    }

    /// Top-level parametrization on branches 0..n-1.
    pub fn over_branches(n: usize, generators: Vec<CurveElement>) -> Self {
        Parametrization::new((0..n).collect(), generators)
    }

    pub fn n(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[usize] {
        &self.branches
    }

    pub fn generators(&self) -> &[CurveElement] {
        &self.generators
    }

    /// Applies the running convention: a generator whose coordinates are all
    /// units with one shared constant term gamma is replaced by the generator
    /// minus gamma.(1,...,1); zero generators are dropped. Idempotent.
    pub fn normalize(&self) -> Result<Parametrization> {
        let mut generators = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let g = match g.shared_unit_constant() {
                Some(gamma) => {
                    let coords =
                        g.coords.iter().map(|c| c.sub_rational(&gamma)).collect::<Vec<_>>();
                    CurveElement { coords }
                }
                None => g.clone(),
            };
            if !g.is_zero() {
                generators.push(g);
            }
        }
        if generators.is_empty() {
            return Err(Error::EmptyRing);
        }
        Ok(Parametrization { branches: self.branches.clone(), generators })
    }

    /// Restricts every generator to the given positions (indices into this
    /// parametrization's coordinate list). The result is not normalized.
    pub fn project(&self, positions: &[usize]) -> Parametrization {
        let branches = positions.iter().map(|&p| self.branches[p]).collect();
        let generators = self
            .generators
            .iter()
            .map(|g| CurveElement {
                coords: positions.iter().map(|&p| g.coords[p].clone()).collect(),
            })
            .collect();
        Parametrization { branches, generators }
    }

    /// Componentwise minimum of the generator valuations. For a local block
    /// this is the multiplicity vector of the ring itself.
    pub fn multiplicity_vector(&self) -> Result<Vec<u64>> {
        let mut mult = Vec::with_capacity(self.n());
        for pos in 0..self.n() {
            let min = self
                .generators
                .iter()
                .map(|g| g.coords[pos].order())
                .min()
                .unwrap_or(Order::Infinite);
            match min.finite() {
                Some(k) => mult.push(k),
                None => return Err(Error::InfiniteComponent { branch: self.branches[pos] }),
            }
        }
        Ok(mult)
    }

    /// A deterministic element of the generated ring whose valuation equals
    /// the multiplicity vector. Selection order: a single generator; else a
    /// sum of two generators (no leading-term cancellation is possible in
    /// that case, but the valuation is recomputed and checked anyway); else a
    /// greedy combination over the generators achieving per-branch minima,
    /// with the smallest positive integer weights that avoid cancellation.
    pub fn minimal_element(&self) -> Result<CurveElement> {
        let mult = self.multiplicity_vector()?;
        let target: Vec<Order> = mult.iter().map(|&k| Order::Finite(k)).collect();

        for g in &self.generators {
            if g.valuation() == target {
                return Ok(g.clone());
            }
        }

        for (i, gi) in self.generators.iter().enumerate() {
            for gj in self.generators.iter().skip(i + 1) {
                let sum = gi.add(gj);
                if sum.valuation() == target {
                    return Ok(sum);
                }
            }
        }

        // Greedy combination over the generators that achieve some
        // per-branch minimum, accumulating with weights 1,2,3,... chosen so
        // that no branch's leading coefficients cancel.
        let mut candidates: Vec<usize> = Vec::new();
        for pos in 0..self.n() {
            let hit = self
                .generators
                .iter()
                .position(|g| g.coords[pos].order() == Order::Finite(mult[pos]));
            match hit {
                Some(i) if !candidates.contains(&i) => candidates.push(i),
                Some(_) => {}
                None => return Err(Error::SelectionFailed),
            }
        }
        candidates.sort_unstable();
        let mut acc = self.generators[candidates[0]].clone();
        for &i in &candidates[1..] {
            let g = &self.generators[i];
            let mut chosen = None;
            'lambda: for lambda in 1..=(self.n() as i64 + 1) {
                let trial = acc.add(&g.scaled(&crate::algebra::rational_int(lambda)));
                for pos in 0..self.n() {
                    let expect = acc.coords[pos].order().min(g.coords[pos].order());
                    if trial.coords[pos].order() != expect {
                        continue 'lambda;
                    }
                }
                chosen = Some(trial);
                break;
            }
            acc = chosen.ok_or(Error::SelectionFailed)?;
        }
        if acc.valuation() == target {
            Ok(acc)
        } else {
            Err(Error::SelectionFailed)
        }
    }
}

/// A multiplicity vector labeled with its supporting branch set, embedded in
/// the full N^n with zeros off the support.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabeledMult {
    pub support: Vec<usize>,
    pub vec: Vec<u64>,
}

impl LabeledMult {
    /// `all_branches` lists the global branch ids of the ambient ring; the
    /// embedded vector is indexed by position in that list.
    pub fn new(all_branches: &[usize], support: &[usize], block_mult: &[u64]) -> Self {
        assert_eq!(support.len(), block_mult.len());
        let mut vec = vec![0; all_branches.len()];
        for (&b, &m) in support.iter().zip(block_mult) {
            let pos = all_branches.iter().position(|&x| x == b).expect("support branch unknown");
            vec[pos] = m;
        }
        LabeledMult { support: support.to_vec(), vec }
    }

    pub fn is_unit_vector(&self) -> bool {
        self.support.len() == 1 && self.vec.iter().sum::<u64>() == 1
    }
}

/// One labeled multiplicity vector per block of the partition, each computed
/// on the normalized restriction of `p` to the block.
pub fn mult_star(p: &Parametrization, parts: &Partition) -> Result<Vec<LabeledMult>> {
    let mut out = Vec::with_capacity(parts.blocks().len());
    for block in parts.blocks() {
        let positions = positions_of(p, block);
        let restricted = p.project(&positions).normalize()?;
        let mult = restricted.multiplicity_vector()?;
        out.push(LabeledMult::new(p.branches(), block, &mult));
    }
    Ok(out)
}

/// Embeds a block element into the full product, with the constant 1 in
/// every off-block coordinate.
pub fn embed_off_block(x: &CurveElement, support: &[usize], all_branches: &[usize]) -> CurveElement {
    let mut coords = Vec::with_capacity(all_branches.len());
    for &b in all_branches {
        match support.iter().position(|&s| s == b) {
            Some(k) => coords.push(x.coord(k).clone()),
            None => coords.push(SeriesFraction::constant(Var(b), Rational::one())),
        }
    }
    CurveElement::new(coords)
}

pub(crate) fn positions_of(p: &Parametrization, block: &[usize]) -> Vec<usize> {
    block
        .iter()
        .map(|b| {
            p.branches().iter().position(|x| x == b).expect("block branch missing from parametrization")
        })
        .collect()
}
