//! The two-branch running example followed level by level: the engine must
//! reproduce the known minimal elements and blow-up parametrizations as
//! exact fractions.

mod common;

use arfc_core::algebra::{Polynomial, SeriesFraction, Var};
use arfc_core::lipman::{lipman_sequence, DEFAULT_MAX_STEPS};
use arfc_core::parse::parse_poly;
use arfc_core::pipeline::{run_pipeline, PipelineOptions};
use common::{curve, EQUAL_SEQUENCES, FOUR_BRANCH, TWO_BRANCH};

fn frac(var: usize, names: &str, num: &str, den: &str) -> SeriesFraction {
    let name = &names[var..=var];
    let num = parse_poly(num, name, Var(var)).unwrap();
    let den = parse_poly(den, name, Var(var)).unwrap();
    SeriesFraction::new(num, den).unwrap()
}

fn poly(var: usize, names: &str, src: &str) -> Polynomial {
    let name = &names[var..=var];
    parse_poly(src, name, Var(var)).unwrap()
}

#[test]
fn two_branch_minimal_elements_match_the_reference_chain() {
    let seq = lipman_sequence(&curve(TWO_BRANCH), DEFAULT_MAX_STEPS).unwrap();
    let x = |level: u64| &seq.block_at(level, 0).minimal_on_block;

    // x_1 = (t^5 + t^10, u^7)
    assert_eq!(x(1).coord(0), &frac(0, "tu", "t^5 + t^10", "1"));
    assert_eq!(x(1).coord(1), &frac(1, "tu", "u^7", "1"));
    // x_2 = (t^3/(1+t^5), u^4 + u^6)
    assert_eq!(x(2).coord(0), &frac(0, "tu", "t^3", "1 + t^5"));
    assert_eq!(x(2).coord(1), &frac(1, "tu", "u^4 + u^6", "1"));
    // x_3 = (t^2 (1+t^5)^2, u^3/(1+u^2))
    let t5 = poly(0, "tu", "1 + t^5");
    let sq = &t5 * &t5;
    assert_eq!(
        x(3).coord(0),
        &SeriesFraction::from_poly(&poly(0, "tu", "t^2") * &sq)
    );
    assert_eq!(x(3).coord(1), &frac(1, "tu", "u^3", "1 + u^2"));
    // x_4 = x_5 = (t/(1+t^5)^3, u (1+u^2)^2)
    let cube = &sq * &t5;
    let u2 = poly(1, "tu", "1 + u^2");
    let u2sq = &u2 * &u2;
    for level in [4, 5] {
        assert_eq!(
            x(level).coord(0),
            &SeriesFraction::new(poly(0, "tu", "t"), cube.clone()).unwrap()
        );
        assert_eq!(
            x(level).coord(1),
            &SeriesFraction::from_poly(&poly(1, "tu", "u") * &u2sq)
        );
    }

    // level 6 splits; the branch rings carry ((1+t^5)^8, .) and (., u/(1+u^2)^5)
    let last = &seq.records()[5];
    assert_eq!(last.blocks.len(), 2);
    let b0 = &last.blocks[0].generators;
    let pow8 = cube.pow(2);
    let pow8 = &pow8 * &sq;
    // after normalization the unit generator loses its constant term
    let expected_unit_gen = SeriesFraction::from_poly(
        &pow8 - &Polynomial::one(Var(0)),
    );
    assert!(
        b0.generators().iter().any(|g| g.coord(0) == &expected_unit_gen),
        "branch-1 ring at the split level contains (1+t^5)^8 - 1"
    );
}

#[test]
fn four_branch_level_two_minimal_elements() {
    let seq = lipman_sequence(&curve(FOUR_BRANCH), DEFAULT_MAX_STEPS).unwrap();
    // block {t, v}: x = ((t + t^5 (1-t^3)^2)/(1-t^3), v^3 + v^4 - v^6)
    let b = seq.block_at(2, 0);
    assert_eq!(b.branches, vec![0, 2]);
    let one_minus = poly(0, "tuvw", "1 - t^3");
    let num = &poly(0, "tuvw", "t") + &(&poly(0, "tuvw", "t^5") * &(&one_minus * &one_minus));
    assert_eq!(b.minimal_on_block.coord(0), &SeriesFraction::new(num, one_minus).unwrap());
    assert_eq!(
        b.minimal_on_block.coord(1),
        &SeriesFraction::from_poly(poly(2, "tuvw", "v^3 + v^4 - v^6"))
    );
    // block {u, w}: x = (u^2 + u^6, w^2 + w^9), reused at level 3
    for level in [2, 3] {
        let b = seq.block_at(level, 1);
        assert_eq!(b.branches, vec![1, 3]);
        assert_eq!(
            b.minimal_on_block.coord(0),
            &SeriesFraction::from_poly(poly(1, "tuvw", "u^2 + u^6"))
        );
        assert_eq!(
            b.minimal_on_block.coord(1),
            &SeriesFraction::from_poly(poly(3, "tuvw", "w^2 + w^9"))
        );
    }

    // the level-3 ring of the {u, w} block carries the blown-up generator
    // ((-u^2 + u^3 + u^6)/(1+u^4)^2, (w^3 - w^5)/(1+w^7)^2)
    let level3 = &seq.block_at(3, 1).generators;
    let u_unit = poly(1, "tuvw", "1 + u^4");
    let w_unit = poly(3, "tuvw", "1 + w^7");
    let expected = (
        frac_poly(poly(1, "tuvw", "-u^2 + u^3 + u^6"), &u_unit * &u_unit),
        frac_poly(poly(3, "tuvw", "w^3 - w^5"), &w_unit * &w_unit),
    );
    assert!(level3
        .generators()
        .iter()
        .any(|g| g.coord(0) == &expected.0 && g.coord(1) == &expected.1));
}

fn frac_poly(num: Polynomial, den: Polynomial) -> SeriesFraction {
    SeriesFraction::new(num, den).unwrap()
}

#[test]
fn truncation_leaves_every_fixture_result_unchanged() {
    for src in [TWO_BRANCH, FOUR_BRANCH, EQUAL_SEQUENCES] {
        let p = curve(src);
        let with = run_pipeline(&p, &PipelineOptions::default()).unwrap();
        let without =
            run_pipeline(&p, &PipelineOptions { truncate: false, ..Default::default() }).unwrap();
        assert_eq!(with.tree, without.tree);
        assert_eq!(with.conductor, without.conductor);
        assert_eq!(with.small_elements, without.small_elements);
        assert_eq!(with.presentation.conductor, without.presentation.conductor);
        assert_eq!(with.presentation.basis.len(), without.presentation.basis.len());
        for (a, b) in with.presentation.basis.iter().zip(&without.presentation.basis) {
            assert_eq!(a, b);
        }
        assert!(with.arf_check && without.arf_check);
    }
}
