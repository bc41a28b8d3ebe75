//! The combined analysis document and its text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use mwlab::conditions::{
    GraphSeparation, HypothesisReport, OscFailure, OscReport, PairSolution, Verdict,
};
use mwlab::geometry::LabeledPoint;
use mwlab::ktheory::GraphKTheory;
use mwlab::MwGraphSpec;
use serde::Serialize;

use crate::document::Reference;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointDoc {
    pub vertex: String,
    pub coords: Vec<f64>,
}

impl PointDoc {
    pub fn new(spec: &MwGraphSpec, p: &LabeledPoint) -> Self {
        let coords = if spec.dimension() == 2 { vec![p.coords.x, p.coords.y] } else { vec![p.coords.x] };
        Self { vertex: spec.graph().vertex_name(p.vertex).to_string(), coords }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sampling {
    pub depth: usize,
    pub points: usize,
    /// Certified Hausdorff bound between the sample and the invariant list.
    pub error_bound: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractorStats {
    pub depth: usize,
    pub paths: u128,
    pub points: usize,
    pub error_bound: f64,
    /// Per vertex, Hausdorff distance between the cloud and its image under
    /// one Hutchinson step.
    pub invariance_residual: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesesSection {
    pub no_sinks_sources: bool,
    pub irreducible: bool,
    pub not_cyclic_permutation: bool,
    pub open_set_condition: Option<bool>,
    pub verdict: String,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchRecordDoc {
    pub x: PointDoc,
    pub y: PointDoc,
    pub edges: Vec<String>,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDoc {
    pub edges: [String; 2],
    pub solution: String,
    pub gap_lower: f64,
    pub gap_upper: f64,
    pub sampled_gap: f64,
    pub agrees: bool,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchSection {
    pub tol: f64,
    pub sample_depth: usize,
    /// `null` when no pair of edges shares both source and range.
    pub min_cograph_gap: f64,
    pub min_gap_lower: f64,
    pub quotient_dimension: usize,
    pub left_action_compact: bool,
    pub records: Vec<BranchRecordDoc>,
    pub pairs: Vec<PairDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessDoc {
    pub edges: [String; 2],
    pub y: PointDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationSection {
    pub holds: bool,
    pub min_gap: f64,
    pub tol: f64,
    pub witness: Option<WitnessDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscSection {
    pub holds: Option<bool>,
    pub tol: f64,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KTheorySection {
    pub vertex_matrix: String,
    pub identity_minus_transpose: String,
    pub smith_diagonal: Vec<String>,
    pub k0: String,
    pub k1: String,
}

impl KTheorySection {
    pub fn new(vertex_matrix: &mwlab::ktheory::IntMatrix, k: &GraphKTheory) -> Self {
        Self {
            vertex_matrix: vertex_matrix.to_string(),
            identity_minus_transpose: k.map.to_string(),
            smith_diagonal: k.smith_diagonal.iter().map(ToString::to_string).collect(),
            k0: k.k0.to_string(),
            k1: k.k1.to_string(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "A_G          = {}", self.vertex_matrix).unwrap();
        writeln!(s, "1 - A_G^t    = {}", self.identity_minus_transpose).unwrap();
        writeln!(s, "SNF diagonal = [{}]", self.smith_diagonal.join(", ")).unwrap();
        writeln!(s, "K0(C*(G))    = {}", self.k0).unwrap();
        writeln!(s, "K1(C*(G))    = {}", self.k1).unwrap();
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub spec: String,
    pub dimension: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub contraction: f64,
    pub contraction_lower: f64,
    pub sampling: Sampling,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attractor: Option<AttractorStats>,
    pub hypotheses: HypothesesSection,
    pub branch_points: BranchSection,
    pub graph_separation: SeparationSection,
    pub open_set_condition: OscSection,
    pub ktheory: KTheorySection,
    pub reference: Option<Reference>,
    pub conclusions: Vec<String>,
    /// Wall-clock milliseconds per stage, only when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::SimplePurelyInfinite => "SimplePurelyInfinite",
        Verdict::HypothesesNotMet => "HypothesesNotMet",
        Verdict::Unknown => "Unknown",
    }
}

fn solution_name(s: &PairSolution) -> &'static str {
    match s {
        PairSolution::Point(_) => "point",
        PairSolution::Line { .. } => "line",
        PairSolution::Inconsistent => "inconsistent",
        PairSolution::Parallel { .. } => "parallel",
        PairSolution::Everywhere => "everywhere",
    }
}

impl AnalysisReport {
    pub fn hypotheses_section(h: &HypothesisReport) -> HypothesesSection {
        HypothesesSection {
            no_sinks_sources: h.no_sinks_sources,
            irreducible: h.irreducible,
            not_cyclic_permutation: h.not_cyclic_permutation,
            open_set_condition: h.open_set_condition,
            verdict: verdict_name(h.verdict).to_string(),
            details: h.details.clone(),
        }
    }

    pub fn branch_section(spec: &MwGraphSpec, h: &HypothesisReport) -> BranchSection {
        let g = spec.graph();
        let name = |e: mwlab::EdgeId| g.edge(e).name.clone();
        let b = &h.branch;
        BranchSection {
            tol: b.tol,
            sample_depth: b.sample_depth,
            min_cograph_gap: b.min_cograph_gap,
            min_gap_lower: b.min_gap_lower,
            quotient_dimension: h.quotient_dimension,
            left_action_compact: h.left_action_compact,
            records: b
                .branch_points
                .iter()
                .map(|r| BranchRecordDoc {
                    x: PointDoc::new(spec, &r.x),
                    y: PointDoc::new(spec, &r.y),
                    edges: r.edges.iter().map(|&e| name(e)).collect(),
                    index: r.index,
                })
                .collect(),
            pairs: b
                .pairs
                .iter()
                .map(|p| PairDoc {
                    edges: [name(p.first), name(p.second)],
                    solution: solution_name(&p.solution).to_string(),
                    gap_lower: p.gap_lower,
                    gap_upper: p.gap_upper,
                    sampled_gap: p.sampled_gap,
                    agrees: p.agrees,
                    converged: p.converged,
                })
                .collect(),
        }
    }

    pub fn separation_section(spec: &MwGraphSpec, s: &GraphSeparation, tol: f64) -> SeparationSection {
        let g = spec.graph();
        SeparationSection {
            holds: s.holds,
            min_gap: s.min_gap,
            tol,
            witness: s.witness.map(|w| WitnessDoc {
                edges: [g.edge(w.first).name.clone(), g.edge(w.second).name.clone()],
                y: PointDoc::new(spec, &w.y),
            }),
        }
    }

    pub fn osc_section(spec: &MwGraphSpec, o: &OscReport, tol: f64) -> OscSection {
        let g = spec.graph();
        let failures = o
            .failures
            .iter()
            .map(|f| match f {
                OscFailure::NotContained { edge, vertex, uncovered } => format!(
                    "image under `{}` leaves V_{} (uncovered measure {uncovered:e})",
                    g.edge(*edge).name,
                    g.vertex_name(*vertex)
                ),
                OscFailure::Overlap { first, second } => {
                    format!("images under `{}` and `{}` overlap", g.edge(*first).name, g.edge(*second).name)
                }
            })
            .collect();
        OscSection { holds: o.holds, tol, failures }
    }

    /// What the computed facts imply for the Cuntz-Pimsner algebra.
    pub fn conclusions(&self) -> Vec<String> {
        let mut out = Vec::new();
        let k = &self.ktheory;
        if self.graph_separation.holds {
            out.push(format!(
                "graph separation holds, so O_M(K) is isomorphic to C*(G): K0 = {}, K1 = {}",
                k.k0, k.k1
            ));
        } else if let Some(r) = &self.reference {
            let differs = |stated: &Option<String>, computed: &str| {
                stated.as_deref().is_some_and(|s| s.split_whitespace().collect::<String>() != computed.split_whitespace().collect::<String>())
            };
            if differs(&r.k0, &k.k0) || differs(&r.k1, &k.k1) {
                out.push(format!(
                    "stated K-groups of O_M(K) (K0 = {}, K1 = {}) differ from those of C*(G) (K0 = {}, K1 = {}), so O_M(K) is not isomorphic to C*(G)",
                    r.k0.as_deref().unwrap_or("?"),
                    r.k1.as_deref().unwrap_or("?"),
                    k.k0,
                    k.k1
                ));
            }
        }
        let b = &self.branch_points;
        if b.records.is_empty() {
            out.push("B(M) is empty, so the left action is by compact operators".to_string());
        } else {
            out.push(format!(
                "B(M) has {} point(s): dim(A/I_X) = {} and the left action is not by compact operators",
                b.quotient_dimension, b.quotient_dimension
            ));
        }
        if self.hypotheses.verdict == "SimplePurelyInfinite" {
            out.push("all hypotheses of the simplicity theorem hold: O_M(K) is simple and purely infinite".to_string());
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialise")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let gap = |g: f64| if g.is_finite() { format!("{g:.6e}") } else { "none (no admissible pair)".to_string() };
        let point = |p: &PointDoc| {
            // print tiny residues as zero rather than -0.000000000
            let c: Vec<String> = p.coords.iter().map(|&x| format!("{:.9}", if x.abs() < 5e-10 { 0.0 } else { x })).collect();
            format!("{}({})", p.vertex, c.join(", "))
        };
        writeln!(s, "spec: {} (dimension {}, {} vertices, {} edges)", self.spec, self.dimension, self.vertex_count, self.edge_count).unwrap();
        writeln!(s, "contraction: c = {:.6}, c' = {:.6}", self.contraction, self.contraction_lower).unwrap();
        let sm = &self.sampling;
        writeln!(s, "sampling: depth {}, {} points, error bound {:.3e}, tol {:e}", sm.depth, sm.points, sm.error_bound, sm.tol).unwrap();
        if let Some(a) = &self.attractor {
            writeln!(s, "\n[attractor]").unwrap();
            writeln!(s, "depth {}: {} paths, {} points, error bound {:.3e}", a.depth, a.paths, a.points, a.error_bound).unwrap();
            for (v, r) in &a.invariance_residual {
                writeln!(s, "invariance residual at {v}: {r:.3e}").unwrap();
            }
        }
        let h = &self.hypotheses;
        writeln!(s, "\n[hypotheses]").unwrap();
        writeln!(s, "no sinks or sources:     {}", h.no_sinks_sources).unwrap();
        writeln!(s, "irreducible:             {}", h.irreducible).unwrap();
        writeln!(s, "not a cyclic permutation: {}", h.not_cyclic_permutation).unwrap();
        let osc = match h.open_set_condition {
            Some(b) => b.to_string(),
            None => "unknown".to_string(),
        };
        writeln!(s, "open set condition:      {osc}").unwrap();
        writeln!(s, "verdict: {}", h.verdict).unwrap();

        let b = &self.branch_points;
        writeln!(s, "\n[branch points]").unwrap();
        if b.min_cograph_gap.is_finite() {
            writeln!(s, "min cograph gap: {} (certified lower bound {}), tol {:e}", gap(b.min_cograph_gap), gap(b.min_gap_lower), b.tol).unwrap();
        } else {
            writeln!(s, "min cograph gap: {}, tol {:e}", gap(b.min_cograph_gap), b.tol).unwrap();
        }
        for r in &b.records {
            writeln!(s, "x = {}  y = {}  edges {{{}}}  index {}", point(&r.x), point(&r.y), r.edges.join(", "), r.index).unwrap();
        }
        writeln!(s, "dim(A/I_X) = {}", b.quotient_dimension).unwrap();
        for p in &b.pairs {
            writeln!(
                s,
                "pair ({}, {}): {} solution, gap in [{:.3e}, {:.3e}], sampled {:.3e}, {}",
                p.edges[0],
                p.edges[1],
                p.solution,
                p.gap_lower,
                p.gap_upper,
                p.sampled_gap,
                if p.agrees { "agrees" } else { "DISAGREES" }
            )
            .unwrap();
        }

        let g = &self.graph_separation;
        writeln!(s, "\n[graph separation]").unwrap();
        writeln!(s, "holds: {} (min gap {})", g.holds, gap(g.min_gap)).unwrap();
        if let Some(w) = &g.witness {
            writeln!(s, "witness: edges ({}, {}) at y = {}", w.edges[0], w.edges[1], point(&w.y)).unwrap();
        }

        let o = &self.open_set_condition;
        writeln!(s, "\n[open set condition]").unwrap();
        writeln!(s, "holds: {osc} (tol {:e})", o.tol).unwrap();
        for f in &o.failures {
            writeln!(s, "failure: {f}").unwrap();
        }

        writeln!(s, "\n[k-theory of C*(G)]").unwrap();
        s.push_str(&self.ktheory.to_text());
        if let Some(r) = &self.reference {
            writeln!(s, "\n[reference, stated not computed]").unwrap();
            if let Some(k0) = &r.k0 {
                writeln!(s, "K0(O_M(K)) = {k0}").unwrap();
            }
            if let Some(k1) = &r.k1 {
                writeln!(s, "K1(O_M(K)) = {k1}").unwrap();
            }
            if let Some(n) = &r.note {
                writeln!(s, "note: {n}").unwrap();
            }
        }
        if !self.conclusions.is_empty() {
            writeln!(s, "\n[conclusions]").unwrap();
            for c in &self.conclusions {
                writeln!(s, "- {c}").unwrap();
            }
        }
        if let Some(t) = &self.timings {
            writeln!(s, "\n[timings, ms]").unwrap();
            for (k, v) in t {
                writeln!(s, "{k}: {v:.1}").unwrap();
            }
        }
        s
    }
}
