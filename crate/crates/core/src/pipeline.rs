//! End-to-end orchestration: bound, truncate, blow up, build the trees,
//! and assemble the closure data, with stage-labeled errors.

use crate::bounds::{bound_curve, truncate_curve, BoundReport};
use crate::closure::{minimal_tree, presentation, ClosurePresentation, MinimalTree};
use crate::curve::Parametrization;
use crate::error::Error;
use crate::lipman::{lipman_sequence, LipmanSequence, DEFAULT_MAX_STEPS};
use crate::locality::partition;
use crate::tree::{
    build_tree, check_arf, conductor, small_elements, validate_tree, MultiplicityTree,
    SemigroupVector,
};

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    /// Compute the degree bound and truncate the input before blowing up.
    pub truncate: bool,
    /// Safety cap on the number of blow-up levels.
    pub max_steps: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { truncate: true, max_steps: DEFAULT_MAX_STEPS }
    }
}

/// Everything the pipeline produces for one curve.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    /// Bound report and the truncated input, when truncation ran.
    pub bound: Option<BoundReport>,
    pub truncated_input: Option<Parametrization>,
    pub sequence: LipmanSequence,
    pub tree: MultiplicityTree,
    pub conductor: SemigroupVector,
    pub small_elements: Vec<SemigroupVector>,
    pub minimal_tree: MinimalTree,
    pub presentation: ClosurePresentation,
    pub arf_check: bool,
}

/// An error together with the pipeline stage that raised it.
#[derive(Debug, thiserror::Error)]
#[error("{stage}: {source}")]
pub struct PipelineError {
    pub stage: &'static str,
    #[source]
    pub source: Error,
}

fn at(stage: &'static str) -> impl Fn(Error) -> PipelineError {
    move |source| PipelineError { stage, source }
}

/// Runs the full pipeline on a parametrization. The input must be local:
/// the Arf closure of a product is the product of the closures of its local
/// components, and the tree machinery assumes a single root.
pub fn run_pipeline(
    p: &Parametrization,
    opts: &PipelineOptions,
) -> Result<PipelineResult, PipelineError> {
    let p = p.normalize().map_err(at("normalize"))?;

    let parts = partition(&p).map_err(at("locality"))?;
    if !parts.is_single_block() && p.n() > 1 {
        return Err(PipelineError {
            stage: "locality",
            source: Error::NotLocal { blocks: parts.blocks().to_vec() },
        });
    }

    let (bound, truncated_input, working) = if opts.truncate {
        let report = bound_curve(&p).map_err(at("bound"))?;
        let truncated = truncate_curve(&p, &report.bound).map_err(at("truncate"))?;
        (Some(report), Some(truncated.clone()), truncated)
    } else {
        (None, None, p)
    };

    let sequence = lipman_sequence(&working, opts.max_steps).map_err(at("lipman"))?;
    let tree = build_tree(&sequence);
    validate_tree(&tree)
        .map_err(|msg| PipelineError { stage: "tree", source: Error::InvalidTree(msg) })?;
    let conductor = conductor(&tree);
    let small = small_elements(&tree);
    let minimal = minimal_tree(&sequence);
    let pres = presentation(&minimal, &tree).map_err(at("presentation"))?;
    let arf = check_arf(&tree);

    Ok(PipelineResult {
        bound,
        truncated_input,
        sequence,
        tree,
        conductor,
        small_elements: small,
        minimal_tree: minimal,
        presentation: pres,
        arf_check: arf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_curve_str;

    const TWO_BRANCH: &str = r#"{
        "branches": 2,
        "vars": ["t", "u"],
        "generators": [["t^5 + t^10", "u^7"], ["t^8", "u^11 + u^13"]]
    }"#;

    #[test]
    fn pipeline_runs_with_and_without_truncation() {
        let p = parse_curve_str(TWO_BRANCH).unwrap();
        let with = run_pipeline(&p, &PipelineOptions::default()).unwrap();
        let without =
            run_pipeline(&p, &PipelineOptions { truncate: false, ..Default::default() }).unwrap();
        assert_eq!(with.tree, without.tree);
        assert_eq!(with.conductor, vec![12, 16]);
        assert_eq!(with.small_elements, without.small_elements);
        assert_eq!(with.presentation.basis.len(), without.presentation.basis.len());
        for (a, b) in with.presentation.basis.iter().zip(&without.presentation.basis) {
            assert_eq!(a, b);
        }
        assert!(with.arf_check && without.arf_check);
        assert!(with.bound.is_some() && without.bound.is_none());
    }

    #[test]
    fn max_steps_cap_surfaces_with_its_stage() {
        let p = parse_curve_str(TWO_BRANCH).unwrap();
        let err = run_pipeline(&p, &PipelineOptions { truncate: false, max_steps: 1 }).unwrap_err();
        assert_eq!(err.stage, "lipman");
        assert!(matches!(err.source, Error::MaxStepsExceeded { cap: 1 }));
    }

    #[test]
    fn single_branch_pipeline() {
        let src = r#"{
            "branches": 1,
            "vars": ["t"],
            "generators": [["t^5 - t^8"], ["t^6"]]
        }"#;
        let p = parse_curve_str(src).unwrap();
        let result = run_pipeline(&p, &PipelineOptions::default()).unwrap();
        assert_eq!(result.tree.sequences()[0].entries(), &[5]);
        assert_eq!(result.conductor, vec![5]);
        assert_eq!(result.small_elements, vec![vec![5]]);
        // the only small element is the conductor, so the K-basis is the
        // unit alone
        assert!(result.presentation.basis.is_empty());
        assert_eq!(result.bound.as_ref().unwrap().bound, vec![6]);
        assert!(result.arf_check);
    }

    #[test]
    fn non_local_input_is_rejected_up_front() {
        let src = r#"{
            "branches": 2,
            "vars": ["t", "u"],
            "generators": [["t", "1"], ["1", "u"]]
        }"#;
        let p = parse_curve_str(src).unwrap();
        let err = run_pipeline(&p, &PipelineOptions::default()).unwrap_err();
        assert_eq!(err.stage, "locality");
        assert!(matches!(err.source, Error::NotLocal { .. }));
    }
}
