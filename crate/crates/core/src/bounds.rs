//! Truncation bounds: per-branch multiplicity sequences, the numeric
//! compatibility level k_E of two sequences, discrepancies, and the
//! order-theoretic / discrepancy / generated-discrepancy bounds that are
//! combined into a degree bound for the whole curve. Truncating every
//! generator at the bound leaves the multiplicity tree unchanged.

use num_traits::One;

use crate::algebra::{Order, Polynomial, SeriesFraction};
use crate::curve::{CurveElement, Parametrization};
use crate::error::{Error, Result};
use crate::lipman::{lipman_sequence, DEFAULT_MAX_STEPS};
use crate::tree::{build_tree, MultiplicitySequence};

/// Cap on the total number of generator combinations tried while producing
/// a discrepancy. Termination of that process is guaranteed for genuine
/// curves but carries no explicit bound, so the cap turns a missing bound
/// into a diagnosable error.
pub const DEFAULT_FORCE_CAP: u64 = 64;

/// Generator combinations raise polynomial degrees multiplicatively, so the
/// optional refinement of an already-valid discrepancy bound stops once the
/// working curve grows past this degree.
const REFINE_DEGREE_CAP: u64 = 128;

/// On the mandatory path (no discrepancy available yet) the same growth is
/// a hard failure once it passes this degree.
const FORCE_DEGREE_CAP: u64 = 1024;

/// Which of the three bounds produced the reported value for a pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundPath {
    /// Distinct multiplicity sequences: purely numeric bound b_O.
    Order,
    /// Equal sequences with a discrepancy in the parametrization: b_D.
    Discrepancy,
    /// Equal sequences, no discrepancy: b_G via generated discrepancies.
    Generated,
}

/// Bound for one pair of branches, with the data that produced it.
#[derive(Clone, Debug)]
pub struct PairBound {
    pub bound: (u64, u64),
    pub path: BoundPath,
    /// k_E of the two branch sequences; `None` when the sequences are equal
    /// (k_E is infinite there).
    pub k_e: Option<u64>,
    /// The discrepancy order the computation landed on, when one was used.
    pub d: Option<u64>,
}

/// Bound for a whole curve: componentwise max over the pairwise bounds.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub bound: Vec<u64>,
    pub pairs: Vec<PairDetail>,
}

#[derive(Clone, Debug)]
pub struct PairDetail {
    pub i: usize,
    pub j: usize,
    pub pair: PairBound,
}

/// Multiplicity sequence of a single branch: the one-branch run of the
/// blow-up engine on the given generators.
pub fn branch_multiplicity_sequence(gens: &[Polynomial]) -> Result<MultiplicitySequence> {
    let elements = gens
        .iter()
        .map(|g| CurveElement::new(vec![SeriesFraction::from_poly(g.clone())]))
        .collect();
    branch_sequence(&Parametrization::new(vec![gens[0].var().0], elements))
}

fn branch_sequence(p: &Parametrization) -> Result<MultiplicitySequence> {
    debug_assert_eq!(p.n(), 1);
    let seq = lipman_sequence(p, DEFAULT_MAX_STEPS)?;
    Ok(build_tree(&seq).sequence(0).clone())
}

fn branch_of_pair(p: &Parametrization, pos: usize) -> Result<MultiplicitySequence> {
    let gens = p
        .generators()
        .iter()
        .map(|g| CurveElement::new(vec![g.coord(pos).clone()]))
        .collect();
    branch_sequence(&Parametrization::new(vec![p.branches()[pos]], gens))
}

/// The vector of s-values of a sequence: s_k is the unique index with
/// entry(k) = entry(k+1) + ... + entry(s_k), for k = 1..=len.
pub fn s_vector(m: &MultiplicitySequence, len: u64) -> Result<Vec<u64>> {
    (1..=len).map(|k| m.s_at(k)).collect()
}

/// Numeric compatibility level of two multiplicity sequences: `None` (read:
/// infinity) when the 1-padded sequences are identical, otherwise the least
/// min(s_{1,k}, s_{2,k}) over the positions where the s-vectors differ. Any
/// valid tree glues the two branches no deeper than this level.
pub fn k_e(m1: &MultiplicitySequence, m2: &MultiplicitySequence) -> Result<Option<u64>> {
    if m1 == m2 {
        return Ok(None);
    }
    let len = m1.length().max(m2.length());
    let s1 = s_vector(m1, len)?;
    let s2 = s_vector(m2, len)?;
    let ke = s1
        .iter()
        .zip(&s2)
        .filter(|(a, b)| a != b)
        .map(|(&a, &b)| a.min(b))
        .min()
        .expect("distinct sequences have distinct s-vectors");
    Ok(Some(ke))
}

/// Generator indices whose two coordinates have distinct orders, plus the
/// smallest order witnessing such a discrepancy.
pub fn discrepancy(p: &Parametrization) -> (Vec<usize>, Option<u64>) {
    debug_assert_eq!(p.n(), 2);
    let mut dis = Vec::new();
    let mut d: Option<u64> = None;
    for (idx, g) in p.generators().iter().enumerate() {
        let a = g.coord(0).order();
        let b = g.coord(1).order();
        if a != b {
            dis.push(idx);
            let w = match a.min(b) {
                Order::Finite(k) => k,
                Order::Infinite => unreachable!("zero generators are dropped by normalize"),
            };
            d = Some(d.map_or(w, |cur| cur.min(w)));
        }
    }
    (dis, d)
}

/// The two coordinate series of a generator, compared as abstract series.
fn coords_differ(g: &CurveElement) -> bool {
    let a = g.coord(0);
    let b = g.coord(1);
    let unify = |p: &Polynomial| {
        Polynomial::from_terms(crate::algebra::Var(0), p.terms().map(|(e, c)| (e, c.clone())))
    };
    &unify(a.num()) * &unify(b.den()) != &unify(b.num()) * &unify(a.den())
}

/// One discrepancy-producing step: sort the generators by valuation, pick
/// the first partner whose series differ from the first generator's (or make
/// the first generator itself the witness), and replace the first generator
/// by g_1^r + b.g_i^s with the branch-1 orders matched and b chosen to cancel
/// the branch-1 leading coefficient, strictly raising the branch-1 order.
pub fn force_discrepancy(p: &Parametrization) -> Result<Parametrization> {
    debug_assert_eq!(p.n(), 2);
    let mut gens: Vec<CurveElement> = p.generators().to_vec();
    gens.sort_by_key(CurveElement::valuation);
    let g1 = gens[0].clone();
    let o1 = match g1.coord(0).order() {
        Order::Finite(k) if k >= 1 => k,
        _ => return Err(Error::NoDiscrepancyPossible),
    };
    let g1_differs = coords_differ(&g1);

    for i in 1..gens.len() {
        if !(g1_differs || coords_differ(&gens[i])) {
            continue;
        }
        let oi = match gens[i].coord(0).order() {
            Order::Finite(k) if k >= 1 => k,
            _ => continue,
        };
        let g = gcd(o1, oi);
        let (r, s) = (oi / g, o1 / g);
        let lc1 = g1.coord(0).lowest_coeff().expect("nonzero coordinate");
        let lci = gens[i].coord(0).lowest_coeff().expect("nonzero coordinate");
        // b cancels the branch-1 leading term of g1^r + b*g_i^s.
        let b = -pow_rat(&lc1, r) / pow_rat(&lci, s);
        let candidate = g1.pow(r).add(&gens[i].pow(s).scaled(&b));
        if candidate.is_zero() {
            continue;
        }
        assert!(
            candidate.coord(0).order() > Order::Finite(r * o1),
            "branch-1 leading term must cancel"
        );
        let mut new_gens = vec![candidate];
        new_gens.extend(gens[1..].iter().cloned());
        return Parametrization::new(p.branches().to_vec(), new_gens).normalize();
    }
    Err(Error::NoDiscrepancyPossible)
}

fn pow_rat(r: &crate::algebra::Rational, k: u64) -> crate::algebra::Rational {
    let mut acc = crate::algebra::Rational::one();
    for _ in 0..k {
        acc *= r;
    }
    acc
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Truncation bound for a normalized two-branch curve.
pub fn bound_two_branch(p: &Parametrization) -> Result<PairBound> {
    let mut budget = DEFAULT_FORCE_CAP;
    bound_pair_rec(p, &mut budget)
}

fn bound_pair_rec(p: &Parametrization, budget: &mut u64) -> Result<PairBound> {
    let m1 = branch_of_pair(p, 0)?;
    let m2 = branch_of_pair(p, 1)?;

    if let Some(ke) = k_e(&m1, &m2)? {
        // Distinct sequences: the split level is at most k_E, so summing each
        // sequence down to max(l_i, k_E) dominates the conductor.
        let b1 = m1.prefix(m1.length().max(ke)) + 1;
        let b2 = m2.prefix(m2.length().max(ke)) + 1;
        return Ok(PairBound { bound: (b1, b2), path: BoundPath::Order, k_e: Some(ke), d: None });
    }

    let c_r = m1.conductor();
    debug_assert_eq!(c_r, m2.conductor());
    let (dis, d) = discrepancy(p);

    if let Some(d) = d {
        debug_assert!(!dis.is_empty());
        // The discrepancy bound needs D to be a value of the branch
        // semigroup; report a violation instead of proceeding on bad data.
        if d < c_r && m1.depth_of(d).is_none() {
            return Err(Error::DiscrepancyNotPartialSum { d });
        }
        let bd = c_r.max(d) + 1;
        let b_d =
            PairBound { bound: (bd, bd), path: BoundPath::Discrepancy, k_e: None, d: Some(d) };
        // A generated-discrepancy bound can be smaller, so compute both and
        // keep the componentwise min. The discrepancy bound is already valid,
        // so the refinement stops once the cap is spent or the combined
        // generators outgrow the degree cap.
        if *budget > 0 {
            *budget -= 1;
            match force_discrepancy(p) {
                Ok(q) if max_degree(&q) <= REFINE_DEGREE_CAP => {
                    // The combination can degenerate (a branch of the smaller
                    // ring may stop being primitively parametrized); the
                    // refinement is then abandoned, not the bound.
                    match bound_pair_rec(&q, budget) {
                        Ok(b_g) => return Ok(min_pair(b_d, b_g)),
                        Err(
                            Error::NonPrimitiveBranch { .. }
                            | Error::MaxStepsExceeded { .. }
                            | Error::BoundIterationExceeded { .. }
                            | Error::NoDiscrepancyPossible,
                        ) => return Ok(b_d),
                        Err(e) => return Err(e),
                    }
                }
                Ok(_) | Err(Error::NoDiscrepancyPossible) => return Ok(b_d),
                Err(e) => return Err(e),
            }
        }
        return Ok(b_d);
    }

    // Equal sequences and no discrepancy: combine generators until one
    // appears.
    if *budget == 0 {
        return Err(Error::BoundIterationExceeded { cap: DEFAULT_FORCE_CAP });
    }
    *budget -= 1;
    let q = force_discrepancy(p)?;
    if max_degree(&q) > FORCE_DEGREE_CAP {
        return Err(Error::BoundIterationExceeded { cap: DEFAULT_FORCE_CAP });
    }
    let inner = bound_pair_rec(&q, budget)?;
    Ok(PairBound { path: BoundPath::Generated, ..inner })
}

fn max_degree(p: &Parametrization) -> u64 {
    p.generators()
        .iter()
        .flat_map(|g| {
            g.coords()
                .iter()
                .map(|f| f.num().degree().unwrap_or(0).max(f.den().degree().unwrap_or(0)))
        })
        .max()
        .unwrap_or(0)
}

fn min_pair(a: PairBound, b: PairBound) -> PairBound {
    // Keep the detail of whichever side achieved the min, preferring the
    // direct discrepancy bound on ties.
    if a.bound.0 <= b.bound.0 && a.bound.1 <= b.bound.1 {
        a
    } else if b.bound.0 <= a.bound.0 && b.bound.1 <= a.bound.1 {
        b
    } else {
        PairBound { bound: (a.bound.0.min(b.bound.0), a.bound.1.min(b.bound.1)), ..a }
    }
}

/// Truncation bound for a whole normalized curve: componentwise max of the
/// pairwise bounds over all branch pairs (for one branch, the branch
/// conductor plus one).
pub fn bound_curve(p: &Parametrization) -> Result<BoundReport> {
    let n = p.n();
    if n == 1 {
        let m = branch_of_pair(p, 0)?;
        return Ok(BoundReport { bound: vec![m.conductor() + 1], pairs: Vec::new() });
    }
    let mut pairs = Vec::new();
    let mut bound = vec![0u64; n];
    for i in 0..n {
        for j in i + 1..n {
            let pair_param = p.project(&[i, j]).normalize()?;
            let pb = bound_two_branch(&pair_param)?;
            bound[i] = bound[i].max(pb.bound.0);
            bound[j] = bound[j].max(pb.bound.1);
            pairs.push(PairDetail { i: p.branches()[i], j: p.branches()[j], pair: pb });
        }
    }
    Ok(BoundReport { bound, pairs })
}

/// Keeps only the monomials of degree at most b[i] in every coordinate i
/// (fraction coordinates are expanded to that cap first), then re-normalizes.
pub fn truncate_curve(p: &Parametrization, b: &[u64]) -> Result<Parametrization> {
    assert_eq!(b.len(), p.n());
    let gens = p
        .generators()
        .iter()
        .map(|g| {
            CurveElement::from_polys(
                (0..p.n()).map(|i| g.coord(i).expand_to_cap(b[i] + 1)).collect(),
            )
        })
        .collect();
    Parametrization::new(p.branches().to_vec(), gens).normalize()
}
