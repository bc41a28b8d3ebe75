//! Structural conditions: branch points, graph separation, the open set
//! condition and the hypotheses of the simplicity theorem.

mod branch;
mod osc;

pub use branch::{
    admissible_pairs, branch_index, branch_points, graph_separation, separation_from_report, solve_pair, BranchRecord,
    BranchReport, GraphSeparation, PairCertificate, PairSolution, SeparationWitness,
};
pub use osc::{open_set_condition, OscFailure, OscReport};

use crate::attractor::InvariantListApprox;
use crate::error::Result;
use crate::system::MwGraphSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    SimplePurelyInfinite,
    HypothesesNotMet,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub no_sinks_sources: bool,
    pub irreducible: bool,
    pub not_cyclic_permutation: bool,
    pub open_set_condition: Option<bool>,
    pub verdict: Verdict,
    /// `dim(A / I_X) = #B(M)`.
    pub quotient_dimension: usize,
    /// `Φ(A) ⊆ K(X)`, equivalent to `B(M) = ∅`.
    pub left_action_compact: bool,
    pub branch: BranchReport,
    pub osc: OscReport,
    pub details: Vec<String>,
}

/// Aggregates the graph hypotheses, the open set condition and the branch
/// report. The verdict is `SimplePurelyInfinite` only when all four
/// hypotheses pass.
pub fn simplicity_report(spec: &MwGraphSpec, approx: &InvariantListApprox, tol: f64) -> Result<HypothesisReport> {
    let g = spec.graph();
    let ss = g.sinks_and_sources();
    let no_sinks_sources = ss.is_empty();
    let irreducible = g.is_irreducible();
    let cyclic = g.is_cyclic_permutation();
    let not_cyclic_permutation = matches!(cyclic, Ok(false));
    let osc = open_set_condition(spec, tol)?;
    let branch = branch_points(spec, approx, tol)?;

    let mut details = Vec::new();
    details.push(format!("sinks: {}, sources: {}", ss.sinks.len(), ss.sources.len()));
    details.push(format!("irreducible: {irreducible}"));
    details.push(match cyclic {
        Ok(c) => format!("cyclic permutation: {c}"),
        Err(e) => format!("cyclic permutation: not evaluated ({e})"),
    });
    details.push(match osc.holds {
        None => "open set condition: no candidate open sets supplied".to_string(),
        Some(true) => "open set condition: candidate images nest and are pairwise disjoint".to_string(),
        Some(false) => format!("open set condition: {} failure(s)", osc.failures.len()),
    });
    details.push(format!("branch points: {} (dim A/I_X = {})", branch.branch_points.len(), branch.quotient_dimension()));

    let graph_ok = no_sinks_sources && irreducible && not_cyclic_permutation;
    let verdict = match (graph_ok, osc.holds) {
        (true, Some(true)) => Verdict::SimplePurelyInfinite,
        (false, _) | (_, Some(false)) => Verdict::HypothesesNotMet,
        (true, None) => Verdict::Unknown,
    };
    Ok(HypothesisReport {
        no_sinks_sources,
        irreducible,
        not_cyclic_permutation,
        open_set_condition: osc.holds,
        verdict,
        quotient_dimension: branch.quotient_dimension(),
        left_action_compact: branch.left_action_compact(),
        branch,
        osc,
        details,
    })
}
