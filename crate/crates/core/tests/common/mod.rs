//! Shared test support: fixture curves, independent oracles for the blow-up
//! loop and the value semigroup, and a seeded random curve generator.

#![allow(dead_code)]

use std::collections::BTreeSet;

use arfc_core::algebra::{Order, Polynomial, Rational, SeriesFraction, Var};
use arfc_core::curve::{CurveElement, Parametrization};
use arfc_core::tree::MultiplicityTree;
use rand::rngs::StdRng;
use rand::Rng;

pub const TWO_BRANCH: &str = r#"{
    "branches": 2,
    "vars": ["t", "u"],
    "generators": [["t^5 + t^10", "u^7"], ["t^8", "u^11 + u^13"]]
}"#;

pub const FOUR_BRANCH: &str = r#"{
    "branches": 4,
    "vars": ["t", "u", "v", "w"],
    "generators": [
        ["t^5 - t^8", "u^2 + u^6", "v^3", "w^2 + w^9"],
        ["t^6", "u^2 + u^7 + u^10", "v^7 - v^9", "w^2 + w^7"]
    ]
}"#;

pub const EQUAL_SEQUENCES: &str = r#"{
    "branches": 2,
    "vars": ["t", "u"],
    "generators": [
        ["t^3 + t^4", "u^3 + u^7"],
        ["t^8 + t^9", "u^8"],
        ["t^12 + t^15", "u^13 + u^14"],
        ["t^21", "u^17 + u^19"]
    ]
}"#;

pub fn curve(src: &str) -> Parametrization {
    arfc_core::parse::parse_curve_str(src).expect("fixture parses")
}

fn ord_val(f: &SeriesFraction) -> Option<u64> {
    f.order().finite()
}

fn normalize_pair(gens: Vec<(SeriesFraction, SeriesFraction)>) -> Vec<(SeriesFraction, SeriesFraction)> {
    let mut out = Vec::new();
    for (a, b) in gens {
        let (a, b) = if a.order().is_zero() && b.order().is_zero() && a.constant_term() == b.constant_term()
        {
            let c = a.constant_term();
            (a.sub_rational(&c), b.sub_rational(&c))
        } else {
            (a, b)
        };
        if !(a.is_zero() && b.is_zero()) {
            out.push((a, b));
        }
    }
    out
}

fn normalize_single(gens: Vec<SeriesFraction>) -> Vec<SeriesFraction> {
    let mut out = Vec::new();
    for g in gens {
        let g = if g.order().is_zero() { g.sub_rational(&g.constant_term()) } else { g };
        if !g.is_zero() {
            out.push(g);
        }
    }
    out
}

/// One level of the two-branch oracle run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OracleLevel {
    Local { mult: (u64, u64) },
    Split { m1: u64, m2: u64 },
}

/// Direct transliteration of the classical two-branch blow-up loop: while
/// the ring is local divide everything by a minimal element; once it splits
/// as a product, run the single-branch algorithm on each factor; stop at
/// mult* = {(1,0), (0,1)}.
pub fn algorithm_one(p: &Parametrization, cap: usize) -> Result<Vec<OracleLevel>, String> {
    assert_eq!(p.n(), 2);
    let mut gens: Vec<(SeriesFraction, SeriesFraction)> = p
        .generators()
        .iter()
        .map(|g| (g.coord(0).clone(), g.coord(1).clone()))
        .collect();
    gens = normalize_pair(gens);
    let mut levels = Vec::new();

    // local phase
    loop {
        if levels.len() > cap {
            return Err("oracle exceeded its level cap in the local phase".into());
        }
        if !pair_is_local(&gens) {
            break;
        }
        let m1 = gens.iter().filter_map(|g| ord_val(&g.0)).min().ok_or("dead branch 1")?;
        let m2 = gens.iter().filter_map(|g| ord_val(&g.1)).min().ok_or("dead branch 2")?;
        levels.push(OracleLevel::Local { mult: (m1, m2) });
        let x = choose_minimal(&gens, m1, m2)?;
        let mut next = vec![x.clone()];
        for g in &gens {
            let q0 = g.0.div(&x.0).map_err(|e| e.to_string())?;
            let q1 = g.1.div(&x.1).map_err(|e| e.to_string())?;
            next.push((q0, q1));
        }
        gens = normalize_pair(next);
    }

    // split phase: two independent single-branch algorithms
    let mut b1: Vec<SeriesFraction> =
        normalize_single(gens.iter().map(|g| g.0.clone()).collect());
    let mut b2: Vec<SeriesFraction> =
        normalize_single(gens.iter().map(|g| g.1.clone()).collect());
    loop {
        if levels.len() > cap {
            return Err("oracle exceeded its level cap in the split phase".into());
        }
        let m1 = b1.iter().filter_map(ord_val).min().ok_or("dead branch 1")?;
        let m2 = b2.iter().filter_map(ord_val).min().ok_or("dead branch 2")?;
        levels.push(OracleLevel::Split { m1, m2 });
        if m1 == 1 && m2 == 1 {
            return Ok(levels);
        }
        if m1 > 1 {
            b1 = single_branch_step(b1, m1)?;
        }
        if m2 > 1 {
            b2 = single_branch_step(b2, m2)?;
        }
    }
}

/// Locality test exactly as stated: the ring splits iff some generator has
/// ord(phi).ord(psi) = 0 with ord(phi)^2 + ord(psi)^2 != 0, or has valuation
/// (0,0) with distinct constant terms.
fn pair_is_local(gens: &[(SeriesFraction, SeriesFraction)]) -> bool {
    for (a, b) in gens {
        let za = a.order().is_zero();
        let zb = b.order().is_zero();
        if za != zb {
            return false;
        }
        if za && zb && a.constant_term() != b.constant_term() {
            return false;
        }
    }
    true
}

/// Classical minimal-element choice: a single generator with
/// the minimal valuation, otherwise y_i + y_j for the first i, j realizing
/// the two componentwise minima (order cancellation cannot happen there).
fn choose_minimal(
    gens: &[(SeriesFraction, SeriesFraction)],
    m1: u64,
    m2: u64,
) -> Result<(SeriesFraction, SeriesFraction), String> {
    for g in gens {
        if ord_val(&g.0) == Some(m1) && ord_val(&g.1) == Some(m2) {
            return Ok(g.clone());
        }
    }
    let yi = gens.iter().find(|g| ord_val(&g.0) == Some(m1)).ok_or("no branch-1 minimum")?;
    let yj = gens.iter().find(|g| ord_val(&g.1) == Some(m2)).ok_or("no branch-2 minimum")?;
    let sum = (yi.0.add(&yj.0), yi.1.add(&yj.1));
    if ord_val(&sum.0) == Some(m1) && ord_val(&sum.1) == Some(m2) {
        Ok(sum)
    } else {
        Err("order cancellation in the two-generator sum".into())
    }
}

fn single_branch_step(gens: Vec<SeriesFraction>, m: u64) -> Result<Vec<SeriesFraction>, String> {
    let x = gens
        .iter()
        .find(|g| ord_val(g) == Some(m))
        .cloned()
        .ok_or("no generator of minimal order")?;
    let mut next = vec![x.clone()];
    for g in &gens {
        next.push(g.div(&x).map_err(|e| e.to_string())?);
    }
    Ok(normalize_single(next))
}

/// Single-branch multiplicity sequence by the classical loop: record the
/// minimal order, divide everything by an element realizing it, repeat until
/// the order reaches 1.
pub fn single_branch_oracle(gens: &[Polynomial], cap: usize) -> Result<Vec<u64>, String> {
    let mut gens: Vec<SeriesFraction> =
        normalize_single(gens.iter().cloned().map(SeriesFraction::from_poly).collect());
    let mut seq = Vec::new();
    loop {
        if seq.len() > cap {
            return Err("single-branch oracle exceeded its cap".into());
        }
        let m = gens.iter().filter_map(ord_val).min().ok_or("dead branch")?;
        seq.push(m);
        if m == 1 {
            return Ok(seq);
        }
        gens = single_branch_step(gens, m)?;
    }
}

/// Exhaustive rooted-subtree enumeration: every node sum of a finite subtree
/// rooted at the root, bounded componentwise by `cap`. Independent of the
/// depth-vector membership formula.
pub fn subtree_sums(tree: &MultiplicityTree, cap: &[u64]) -> BTreeSet<Vec<u64>> {
    let n = tree.n();
    let root_blocks = tree.blocks_at_level(1);
    assert_eq!(root_blocks.len(), 1, "enumeration assumes a local tree");
    let mut out = BTreeSet::new();
    out.insert(vec![0; n]);
    for s in sums_below(tree, 1, &root_blocks[0], cap) {
        out.insert(s);
    }
    out
}

fn sums_below(tree: &MultiplicityTree, level: u64, block: &[usize], cap: &[u64]) -> Vec<Vec<u64>> {
    let n = tree.n();
    let mut node = vec![0u64; n];
    for &i in block {
        node[i] = tree.sequence(i).entry(level);
    }
    if block.iter().any(|&i| node[i] > cap[i]) {
        return Vec::new();
    }
    let remaining: Vec<u64> = (0..n).map(|i| cap[i] - node[i]).collect();
    let children: Vec<Vec<usize>> = tree
        .blocks_at_level(level + 1)
        .into_iter()
        .filter(|b| b.iter().all(|i| block.contains(i)))
        .collect();
    let mut sums = vec![node.clone()];
    for child in &children {
        let child_sums = sums_below(tree, level + 1, child, &remaining);
        let mut grown = Vec::new();
        for base in &sums {
            // excluding the child entirely is always allowed
            grown.push(base.clone());
            for cs in &child_sums {
                let total: Vec<u64> = (0..n).map(|i| base[i] + cs[i]).collect();
                if total.iter().zip(cap).all(|(v, c)| v <= c) {
                    grown.push(total);
                }
            }
        }
        sums = grown;
    }
    sums.sort();
    sums.dedup();
    sums
}

/// A random local curve: every coordinate has order at least 1, every branch
/// pair differs in at least one generator, every branch is primitively
/// parametrized (the exponents appearing on a branch are coprime, so the
/// branch is not a series ring in a power of its variable), degrees bounded
/// by `max_deg`.
pub fn random_curve(rng: &mut StdRng, n: usize, max_deg: u64) -> Parametrization {
    loop {
        let k = rng.gen_range(1..=3);
        let mut gens = Vec::with_capacity(k);
        for _ in 0..k {
            let mut coords = Vec::with_capacity(n);
            for i in 0..n {
                coords.push(random_poly(rng, i, max_deg));
            }
            gens.push(CurveElement::from_polys(coords));
        }
        let p = Parametrization::over_branches(n, gens);
        let primitive = (0..n).all(|i| {
            let mut g = 0u64;
            for gen in p.generators() {
                for (e, _) in gen.coord(i).num().terms() {
                    g = gcd(g, e);
                }
            }
            g == 1
        });
        if primitive && (0..n).all(|i| (i + 1..n).all(|j| branches_differ(&p, i, j))) {
            return p;
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn random_poly(rng: &mut StdRng, var: usize, max_deg: u64) -> Polynomial {
    let terms = rng.gen_range(1..=3);
    let mut pairs = Vec::with_capacity(terms);
    for _ in 0..terms {
        let e = rng.gen_range(1..=max_deg);
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-3..=3);
        }
        pairs.push((e, Rational::from_integer(c.into())));
    }
    let p = Polynomial::from_terms(Var(var), pairs);
    if p.is_zero() {
        Polynomial::monomial(Var(var), rng.gen_range(1..=max_deg), Rational::from_integer(1.into()))
    } else {
        p
    }
}

fn branches_differ(p: &Parametrization, i: usize, j: usize) -> bool {
    p.generators().iter().any(|g| {
        let a = g.coord(i);
        let b = g.coord(j);
        let unify = |q: &Polynomial| {
            Polynomial::from_terms(Var(0), q.terms().map(|(e, c)| (e, c.clone())))
        };
        unify(a.num()) != unify(b.num())
    })
}

/// Valuations of a two-branch oracle comparison target, for readability.
pub fn order_pair(e: &CurveElement) -> (Order, Order) {
    (e.coord(0).order(), e.coord(1).order())
}
