//! The blow-up engine: one blow-up of a local block, and the full Lipman
//! sequence of a parametrized curve driven to its stop condition.

use crate::curve::{embed_off_block, CurveElement, LabeledMult, Parametrization};
use crate::error::{Error, Result};
use crate::locality::{partition, Partition};

pub const DEFAULT_MAX_STEPS: u64 = 512;

/// Everything recorded about one local block at one level.
#[derive(Clone, Debug)]
pub struct BlockRecord {
    /// Global branch indices of the block, sorted.
    pub branches: Vec<usize>,
    /// Multiplicity vector embedded into N^n with zeros off the block.
    pub mult: LabeledMult,
    /// Minimal-valuation element embedded with the constant 1 off the block.
    pub minimal: CurveElement,
    /// The same element restricted to the block.
    pub minimal_on_block: CurveElement,
    /// Normalized parametrization of the block at this level.
    pub generators: Parametrization,
}

impl BlockRecord {
    pub fn is_finished_singleton(&self) -> bool {
        self.branches.len() == 1 && self.mult.vec.iter().sum::<u64>() == 1
    }
}

/// One level of the Lipman sequence: the partition into local blocks and the
/// per-block data.
#[derive(Clone, Debug)]
pub struct BlowupRecord {
    pub level: u64,
    pub partition: Partition,
    pub blocks: Vec<BlockRecord>,
}

impl BlowupRecord {
    /// The stop condition: every block is a one-branch ring of multiplicity 1.
    pub fn is_terminal(&self) -> bool {
        self.blocks.iter().all(BlockRecord::is_finished_singleton)
    }

    pub fn mult_star(&self) -> Vec<LabeledMult> {
        self.blocks.iter().map(|b| b.mult.clone()).collect()
    }
}

/// The whole blow-up chain, one record per level including the terminal one.
#[derive(Clone, Debug)]
pub struct LipmanSequence {
    branches: Vec<usize>,
    records: Vec<BlowupRecord>,
}

impl LipmanSequence {
    pub fn n(&self) -> usize {
        self.branches.len()
    }

    /// Global branch ids, in coordinate order.
    pub fn branches(&self) -> &[usize] {
        &self.branches
    }

    pub fn records(&self) -> &[BlowupRecord] {
        &self.records
    }

    pub fn levels(&self) -> u64 {
        self.records.len() as u64
    }

    /// The block record covering `branch` at the given 1-based level.
    pub fn block_at(&self, level: u64, branch: usize) -> &BlockRecord {
        self.records[(level - 1) as usize]
            .blocks
            .iter()
            .find(|b| b.branches.contains(&branch))
            .expect("every branch is covered at every level")
    }
}

/// One blow-up of a local block: the new ring is generated by `x` together
/// with every generator divided by `x`, re-normalized.
pub fn blowup_local(p: &Parametrization, x: &CurveElement) -> Result<Parametrization> {
    let mut generators = Vec::with_capacity(p.generators().len() + 1);
    generators.push(x.clone());
    for g in p.generators() {
        generators.push(g.div(x)?);
    }
    Parametrization::new(p.branches().to_vec(), generators).normalize()
}

struct ActiveBlock {
    param: Parametrization,
    /// Data frozen at the level where the block became a full power-series
    /// ring; reused verbatim at every later level.
    frozen: Option<BlockRecord>,
}

/// If every generator restricted to some branch is a series in t^d with
/// d > 1 (numerator and denominator alike), the generated ring sits inside
/// K[[t^d]] on that branch: its multiplicity stays a multiple of d forever
/// and the sequence provably never stabilizes. Detecting this up front turns
/// a guaranteed cap timeout into an immediate error.
fn check_primitivity(p: &Parametrization) -> Result<()> {
    for pos in 0..p.n() {
        let mut d = 0u64;
        for g in p.generators() {
            let f = g.coord(pos);
            for (e, _) in f.num().terms() {
                d = gcd(d, e);
            }
            for (e, _) in f.den().terms() {
                if e > 0 {
                    d = gcd(d, e);
                }
            }
        }
        if d > 1 {
            return Err(Error::NonPrimitiveBranch { branch: p.branches()[pos], d });
        }
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Runs the blow-up loop until every branch has split off as a power-series
/// ring of multiplicity 1, recording every level on the way. Blocks evolve
/// independently once they split, so the sequence covers any number of
/// branches; a non-local input simply starts with several blocks.
pub fn lipman_sequence(p: &Parametrization, max_steps: u64) -> Result<LipmanSequence> {
    let p = p.normalize()?;
    let all_branches = p.branches().to_vec();
    let mut active = vec![ActiveBlock { param: p, frozen: None }];
    let mut records: Vec<BlowupRecord> = Vec::new();

    for level in 1..=max_steps {
        let mut level_blocks: Vec<BlockRecord> = Vec::new();
        let mut next_active: Vec<ActiveBlock> = Vec::new();

        for a in active {
            if let Some(frozen) = a.frozen {
                level_blocks.push(frozen.clone());
                next_active.push(ActiveBlock { param: a.param, frozen: Some(frozen) });
                continue;
            }
            check_primitivity(&a.param)?;
            let parts = partition(&a.param)?;
            for block in parts.blocks() {
                // Blocks only refine: every new block must sit inside the
                // parametrization it came from.
                assert!(block.iter().all(|b| a.param.branches().contains(b)));
                let positions = crate::curve::positions_of(&a.param, block);
                let bp = a.param.project(&positions).normalize()?;
                let mult = bp.multiplicity_vector()?;
                let x = bp.minimal_element()?;
                let record = BlockRecord {
                    branches: block.clone(),
                    mult: LabeledMult::new(&all_branches, block, &mult),
                    minimal: embed_off_block(&x, block, &all_branches),
                    minimal_on_block: x,
                    generators: bp.clone(),
                };
                let finished = record.is_finished_singleton();
                level_blocks.push(record.clone());
                next_active.push(ActiveBlock {
                    param: bp,
                    frozen: if finished { Some(record) } else { None },
                });
            }
        }

        level_blocks.sort_by_key(|b| b.branches[0]);
        next_active.sort_by_key(|a| a.param.branches()[0]);

        let record = BlowupRecord {
            level,
            partition: Partition::new(level_blocks.iter().map(|b| b.branches.clone()).collect()),
            blocks: level_blocks,
        };
        let terminal = record.is_terminal();
        records.push(record);
        if terminal {
            return Ok(LipmanSequence { branches: all_branches, records });
        }

        for a in &mut next_active {
            if a.frozen.is_none() {
                let rec = records
                    .last()
                    .unwrap()
                    .blocks
                    .iter()
                    .find(|b| b.branches == a.param.branches())
                    .expect("block recorded this level");
                a.param = blowup_local(&a.param, &rec.minimal_on_block)?;
            }
        }
        active = next_active;
    }
    Err(Error::MaxStepsExceeded { cap: max_steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Order, Polynomial, Rational, SeriesFraction, Var};

    fn poly(var: usize, terms: &[(u64, i64)]) -> Polynomial {
        Polynomial::from_terms(
            Var(var),
            terms.iter().map(|&(e, c)| (e, crate::algebra::rational_int(c))),
        )
    }

    fn gens(rows: &[&[&[(u64, i64)]]]) -> Parametrization {
        let n = rows[0].len();
        Parametrization::over_branches(
            n,
            rows.iter()
                .map(|row| {
                    CurveElement::from_polys(
                        row.iter().enumerate().map(|(i, t)| poly(i, t)).collect(),
                    )
                })
                .collect(),
        )
    }

    fn frac(num: Polynomial, den: Polynomial) -> SeriesFraction {
        SeriesFraction::new(num, den).unwrap()
    }

    #[test]
    fn blowup_of_the_two_branch_example() {
        // R_1 = [[(t^5+t^10, u^7), (t^8, u^11+u^13)]], x = first generator.
        let p = gens(&[
            &[&[(5, 1), (10, 1)], &[(7, 1)]],
            &[&[(8, 1)], &[(11, 1), (13, 1)]],
        ]);
        let x = p.generators()[0].clone();
        let bl = blowup_local(&p, &x).unwrap();
        // g1/x = (1,1) is normalized away; the quotient of g2 is
        // (t^3/(1+t^5), u^4+u^6).
        assert_eq!(bl.generators().len(), 2);
        assert_eq!(bl.generators()[0], x);
        let q = &bl.generators()[1];
        assert_eq!(q.coord(0), &frac(poly(0, &[(3, 1)]).clone(), poly(0, &[(0, 1), (5, 1)])));
        assert_eq!(q.coord(1), &SeriesFraction::from_poly(poly(1, &[(4, 1), (6, 1)])));
    }

    #[test]
    fn blowup_of_a_single_generator_is_the_generator() {
        let p = gens(&[&[&[(2, 1)], &[(3, 1)]]]);
        let x = p.generators()[0].clone();
        let bl = blowup_local(&p, &x).unwrap();
        assert_eq!(bl.generators(), std::slice::from_ref(&x));
    }

    #[test]
    fn blowup_of_the_four_branch_example_first_step() {
        let p = gens(&[
            &[&[(5, 1), (8, -1)], &[(2, 1), (6, 1)], &[(3, 1)], &[(2, 1), (9, 1)]],
            &[&[(6, 1)], &[(2, 1), (7, 1), (10, 1)], &[(7, 1), (9, -1)], &[(2, 1), (7, 1)]],
        ]);
        let x = p.generators()[0].clone();
        let bl = blowup_local(&p, &x).unwrap();
        let q = &bl.generators()[1];
        assert_eq!(q.coord(0), &frac(poly(0, &[(1, 1)]), poly(0, &[(0, 1), (3, -1)])));
        assert_eq!(q.coord(1), &frac(poly(1, &[(0, 1), (5, 1), (8, 1)]), poly(1, &[(0, 1), (4, 1)])));
        assert_eq!(q.coord(2), &SeriesFraction::from_poly(poly(2, &[(4, 1), (6, -1)])));
        assert_eq!(q.coord(3), &frac(poly(3, &[(0, 1), (5, 1)]), poly(3, &[(0, 1), (7, 1)])));
    }

    #[test]
    fn two_branch_chain_reaches_the_known_multiplicities() {
        let p = gens(&[
            &[&[(5, 1), (10, 1)], &[(7, 1)]],
            &[&[(8, 1)], &[(11, 1), (13, 1)]],
        ]);
        let seq = lipman_sequence(&p, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(seq.levels(), 6);
        let mults: Vec<Vec<u64>> = seq.records()[..5]
            .iter()
            .map(|r| r.blocks[0].mult.vec.clone())
            .collect();
        assert_eq!(mults, vec![vec![5, 7], vec![3, 4], vec![2, 3], vec![1, 1], vec![1, 1]]);
        let last = &seq.records()[5];
        assert!(last.is_terminal());
        assert_eq!(last.partition, Partition::new(vec![vec![0], vec![1]]));
    }

    #[test]
    fn product_input_terminates_immediately() {
        // K[[t]] x K[[u]] given by (t,1),(1,u): already at the stop condition.
        let p = gens(&[&[&[(1, 1)], &[(0, 1)]], &[&[(0, 1)], &[(1, 1)]]]);
        let seq = lipman_sequence(&p, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(seq.levels(), 1);
        assert!(seq.records()[0].is_terminal());
    }

    #[test]
    fn non_primitive_branches_are_rejected_up_front() {
        // every u-exponent is even: the ring lives in K[[u^2]] on that
        // branch and the loop could never stabilize
        let p = gens(&[&[&[(1, 1)], &[(4, 1)]], &[&[(3, 1)], &[(6, 1), (8, 1)]]]);
        assert!(matches!(
            lipman_sequence(&p, DEFAULT_MAX_STEPS),
            Err(Error::NonPrimitiveBranch { branch: 1, d: 2 })
        ));
        let single = gens(&[&[&[(4, 1)]], &[&[(6, 1)]]]);
        assert!(matches!(
            lipman_sequence(&single, DEFAULT_MAX_STEPS),
            Err(Error::NonPrimitiveBranch { branch: 0, d: 2 })
        ));
    }

    #[test]
    fn max_steps_cap_is_reported() {
        let p = gens(&[
            &[&[(5, 1), (10, 1)], &[(7, 1)]],
            &[&[(8, 1)], &[(11, 1), (13, 1)]],
        ]);
        assert!(matches!(lipman_sequence(&p, 1), Err(Error::MaxStepsExceeded { cap: 1 })));
    }

    #[test]
    fn four_branch_chain_matches_the_known_mult_star_sets() {
        let p = gens(&[
            &[&[(5, 1), (8, -1)], &[(2, 1), (6, 1)], &[(3, 1)], &[(2, 1), (9, 1)]],
            &[&[(6, 1)], &[(2, 1), (7, 1), (10, 1)], &[(7, 1), (9, -1)], &[(2, 1), (7, 1)]],
        ]);
        let seq = lipman_sequence(&p, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(seq.levels(), 4);
        let stars: Vec<Vec<Vec<u64>>> = seq
            .records()
            .iter()
            .map(|r| r.mult_star().iter().map(|m| m.vec.clone()).collect())
            .collect();
        assert_eq!(stars[0], vec![vec![5, 2, 3, 2]]);
        assert_eq!(stars[1], vec![vec![1, 0, 3, 0], vec![0, 2, 0, 2]]);
        assert_eq!(stars[2], vec![vec![1, 0, 0, 0], vec![0, 2, 0, 2], vec![0, 0, 1, 0]]);
        assert_eq!(
            stars[3],
            vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1]
            ]
        );
        // valuation(minimal) = mult holds at every recorded block
        for r in seq.records() {
            for b in &r.blocks {
                let vals = b.minimal_on_block.valuation();
                for (pos, &branch) in b.branches.iter().enumerate() {
                    assert_eq!(vals[pos], Order::Finite(b.mult.vec[branch]));
                }
                for (i, c) in b.minimal.coords().iter().enumerate() {
                    if !b.branches.contains(&i) {
                        assert_eq!(c, &SeriesFraction::constant(Var(i), Rational::from_integer(1.into())));
                    }
                }
            }
        }
    }
}
