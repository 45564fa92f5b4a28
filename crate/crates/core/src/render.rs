//! Output rendering: the JSON result schema, a human-readable text report,
//! DOT export of the multiplicity tree, and the canonical polynomial syntax
//! (which round-trips through the parser).

use serde::Serialize;

use crate::algebra::{Polynomial, SeriesFraction};
use crate::bounds::{BoundPath, BoundReport};
use crate::curve::CurveElement;
use crate::lipman::LipmanSequence;
use crate::pipeline::PipelineResult;
use crate::tree::MultiplicityTree;

/// Canonical textual form of a polynomial in the input grammar.
pub fn poly_text(p: &Polynomial, var: &str) -> String {
    crate::algebra::poly_string(p, var)
}

/// Fractions print as `num` or `(num)/(den)`.
pub fn fraction_text(f: &SeriesFraction, var: &str) -> String {
    if f.den().degree() == Some(0) || f.den().is_zero() {
        let scaled = f.num().scaled(&f.den().constant_term().recip());
        poly_text(&scaled, var)
    } else {
        format!("({})/({})", poly_text(f.num(), var), poly_text(f.den(), var))
    }
}

fn element_text(e: &CurveElement, vars: &[String]) -> String {
    let coords: Vec<String> = e
        .coords()
        .iter()
        .map(|f| fraction_text(f, &vars[f.var().0]))
        .collect();
    format!("({})", coords.join(", "))
}

#[derive(Serialize)]
struct JsonResult {
    sequences: Vec<Vec<u64>>,
    ram: Vec<Vec<u64>>,
    conductor: Vec<u64>,
    small_elements: Vec<Vec<u64>>,
    presentation: JsonPresentation,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<JsonBound>,
    arf_check: bool,
}

#[derive(Serialize)]
struct JsonPresentation {
    basis: Vec<JsonBasisEntry>,
    conductor_term: Vec<u64>,
}

#[derive(Serialize)]
struct JsonBasisEntry {
    valuation: Vec<u64>,
    coords: Vec<String>,
}

#[derive(Serialize)]
struct JsonBound {
    vector: Vec<u64>,
    pairs: Vec<JsonPairBound>,
}

#[derive(Serialize)]
struct JsonPairBound {
    /// 1-based branch numbers, as in the usual mathematical displays.
    i: usize,
    j: usize,
    case: &'static str,
    /// Numeric compatibility level; null encodes infinity.
    k_e: Option<u64>,
    /// Discrepancy order used, when one was.
    d: Option<u64>,
    bound: Vec<u64>,
}

fn json_bound(report: &BoundReport) -> JsonBound {
    JsonBound {
        vector: report.bound.clone(),
        pairs: report
            .pairs
            .iter()
            .map(|p| JsonPairBound {
                i: p.i + 1,
                j: p.j + 1,
                case: match p.pair.path {
                    BoundPath::Order => "order",
                    BoundPath::Discrepancy => "discrepancy",
                    BoundPath::Generated => "generated",
                },
                k_e: p.pair.k_e,
                d: p.pair.d,
                bound: vec![p.pair.bound.0, p.pair.bound.1],
            })
            .collect(),
    }
}

/// Full result bundle as JSON. Polynomials are serialized in the input
/// grammar; ordering is deterministic throughout.
pub fn result_json(result: &PipelineResult, vars: &[String]) -> String {
    let out = JsonResult {
        sequences: result.tree.sequences().iter().map(|s| s.entries().to_vec()).collect(),
        ram: result.tree.ram_rows(),
        conductor: result.conductor.clone(),
        small_elements: result.small_elements.clone(),
        presentation: JsonPresentation {
            basis: result
                .presentation
                .basis
                .iter()
                .map(|e| JsonBasisEntry {
                    valuation: e.valuation.clone(),
                    coords: e
                        .coords
                        .iter()
                        .enumerate()
                        .map(|(i, p)| poly_text(p, &vars[i]))
                        .collect(),
                })
                .collect(),
            conductor_term: result.presentation.conductor.clone(),
        },
        bound: result.bound.as_ref().map(json_bound),
        arf_check: result.arf_check,
    };
    serde_json::to_string_pretty(&out).expect("serializable")
}

/// Bound report alone, as JSON.
pub fn bound_json(report: &BoundReport) -> String {
    serde_json::to_string_pretty(&json_bound(report)).expect("serializable")
}

fn vec_text(v: &[u64]) -> String {
    format!("({})", v.iter().map(u64::to_string).collect::<Vec<_>>().join(", "))
}

/// Human-readable report of the full result.
pub fn result_text(result: &PipelineResult, vars: &[String]) -> String {
    let mut out = String::new();
    if let Some(bound) = &result.bound {
        out.push_str(&format!("truncation bound: {}\n", vec_text(&bound.bound)));
    }
    out.push_str("multiplicity sequences:\n");
    for (i, s) in result.tree.sequences().iter().enumerate() {
        out.push_str(&format!(
            "  {}: [{}]\n",
            vars[i],
            s.entries().iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
        ));
    }
    out.push_str("ramification matrix:\n");
    for row in result.tree.ram_rows() {
        out.push_str(&format!(
            "  {}\n",
            row.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
        ));
    }
    out.push_str(&format!("conductor: {}\n", vec_text(&result.conductor)));
    out.push_str("small elements:\n");
    for v in &result.small_elements {
        out.push_str(&format!("  {}\n", vec_text(v)));
    }
    out.push_str("closure presentation:\n  K*(1");
    for _ in 1..vars.len() {
        out.push_str(", 1");
    }
    out.push_str(")\n");
    for e in &result.presentation.basis {
        let coords: Vec<String> =
            e.coords.iter().enumerate().map(|(i, p)| poly_text(p, &vars[i])).collect();
        out.push_str(&format!("  + K*({})\n", coords.join(", ")));
    }
    let ideal: Vec<String> = result
        .presentation
        .conductor
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{}^{}", vars[i], c))
        .collect();
    out.push_str(&format!("  + ({}) * product of power-series rings\n", ideal.join(", ")));
    out.push_str(&format!(
        "value semigroup is Arf: {}\n",
        if result.arf_check { "yes" } else { "no" }
    ));
    out
}

/// Bound report alone, as text.
pub fn bound_text(report: &BoundReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("bound: {}\n", vec_text(&report.bound)));
    for p in &report.pairs {
        let case = match p.pair.path {
            BoundPath::Order => "order",
            BoundPath::Discrepancy => "discrepancy",
            BoundPath::Generated => "generated",
        };
        let ke = p.pair.k_e.map_or("inf".to_string(), |k| k.to_string());
        let d = p.pair.d.map_or("-".to_string(), |d| d.to_string());
        out.push_str(&format!(
            "  pair ({}, {}): bound ({}, {}), case {case}, k_E {ke}, D {d}\n",
            p.i + 1,
            p.j + 1,
            p.pair.bound.0,
            p.pair.bound.1,
        ));
    }
    out
}

/// DOT export of the multiplicity tree: one node per (level, block), labeled
/// with the embedded multiplicity vector.
pub fn tree_dot(tree: &MultiplicityTree, depth: u64) -> String {
    let n = tree.n();
    let mut out = String::from("digraph multiplicity_tree {\n  rankdir=BT;\n");
    let mut names: Vec<Vec<(Vec<usize>, String)>> = Vec::new();
    for m in 1..=depth {
        let blocks = tree.blocks_at_level(m);
        let mut level_names = Vec::new();
        for (bi, block) in blocks.iter().enumerate() {
            let mut label = vec![0u64; n];
            for &i in block {
                label[i] = tree.sequence(i).entry(m);
            }
            let name = format!("n{m}_{bi}");
            out.push_str(&format!("  {name} [label=\"{}\"];\n", vec_text(&label)));
            level_names.push((block.clone(), name));
        }
        names.push(level_names);
    }
    for m in 1..names.len() {
        for (child_block, child_name) in &names[m] {
            let parent = names[m - 1]
                .iter()
                .find(|(b, _)| child_block.iter().all(|i| b.contains(i)))
                .expect("blocks refine");
            out.push_str(&format!("  {} -> {};\n", parent.1, child_name));
        }
    }
    out.push_str("}\n");
    out
}

/// Text dump of every blow-up record, for tracing.
pub fn trace_text(seq: &LipmanSequence, vars: &[String]) -> String {
    let mut out = String::new();
    for r in seq.records() {
        out.push_str(&format!("level {}:\n", r.level));
        for b in &r.blocks {
            let branches: Vec<String> = b.branches.iter().map(|&i| vars[i].clone()).collect();
            out.push_str(&format!(
                "  block [{}]: mult {}\n    minimal {}\n",
                branches.join(", "),
                vec_text(&b.mult.vec),
                element_text(&b.minimal, vars),
            ));
            for g in b.generators.generators() {
                out.push_str(&format!("    gen {}\n", element_text(g, vars)));
            }
        }
    }
    out
}
