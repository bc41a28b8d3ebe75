//! Subcommand implementations. Each returns the text to print.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use mwlab::attractor::{invariance_residual, invariant_list, max_depth_within, AttractorOptions, DEFAULT_POINT_BUDGET};
use mwlab::conditions::{separation_from_report, simplicity_report};
use mwlab::ktheory::{graph_algebra_ktheory, IntMatrix};
use mwlab::MwGraphSpec;

use crate::datasets;
use crate::document::{Reference, SpecDocument};
use crate::error::{CliError, CliResult};
use crate::render::{cloud_csv, cloud_png};
use crate::report::{AnalysisReport, AttractorStats, KTheorySection, Sampling};

pub const POINT_BUDGET_ENV: &str = "MWLAB_POINT_BUDGET";
pub const DEFAULT_TOL: f64 = 1e-6;
/// Default sampling depth keeps the total path count at or below this.
pub const DEFAULT_SAMPLE_POINTS: u64 = 1 << 20;
const MAX_DEFAULT_DEPTH: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Point budget from the environment, or the default.
pub fn point_budget() -> CliResult<u64> {
    match std::env::var(POINT_BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|e| CliError::Env { name: POINT_BUDGET_ENV, message: format!("`{v}`: {e}") }),
        Err(_) => Ok(DEFAULT_POINT_BUDGET),
    }
}

/// Reads a spec from a file, falling back to a bundled dataset name.
pub fn load_document(arg: &str) -> CliResult<SpecDocument> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        return SpecDocument::from_json(&text);
    }
    match datasets::find(arg) {
        Some(d) => SpecDocument::from_json(d.source),
        None => Err(CliError::UnknownSpec(arg.to_string())),
    }
}

pub fn load_spec(arg: &str) -> CliResult<(MwGraphSpec, Option<Reference>)> {
    let doc = load_document(arg)?;
    let spec = doc.resolve()?;
    Ok((spec, doc.reference))
}

pub fn default_depth(spec: &MwGraphSpec, budget: u64) -> usize {
    max_depth_within(spec, DEFAULT_SAMPLE_POINTS.min(budget), MAX_DEFAULT_DEPTH)
}

pub fn validate(spec: &MwGraphSpec) -> String {
    let g = spec.graph();
    let mut s = String::new();
    writeln!(s, "{}: valid", spec.name).unwrap();
    writeln!(s, "dimension {}, {} vertices, {} edges", spec.dimension(), g.vertex_count(), g.edge_count()).unwrap();
    writeln!(s, "c = {:.12}, c' = {:.12}", spec.contraction(), spec.contraction_lower()).unwrap();
    writeln!(s, "seed boxes trap the invariant list after {} step(s)", spec.invariance_depth()).unwrap();
    writeln!(s, "vertex matrix {}", g.vertex_matrix()).unwrap();
    for e in g.edge_ids() {
        let m = spec.map(e);
        writeln!(
            s,
            "  {} : {} <- {}  c_lower {:.6}  c_upper {:.6}",
            g.edge(e).name,
            g.vertex_name(g.source(e)),
            g.vertex_name(g.range(e)),
            m.c_lower(),
            m.c_upper()
        )
        .unwrap();
    }
    s
}

#[derive(Debug, Clone, Default)]
pub struct AttractorArgs {
    pub depth: usize,
    pub csv: Option<PathBuf>,
    pub png: Option<PathBuf>,
    pub px: u32,
    pub dedup: bool,
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

pub fn attractor(spec: &MwGraphSpec, args: &AttractorArgs, budget: u64) -> CliResult<String> {
    let approx = invariant_list(spec, args.depth, &AttractorOptions { point_budget: budget, dedup: args.dedup })?;
    let mut s = String::new();
    writeln!(
        s,
        "{}: depth {}, {} paths, {} points, error bound {:.3e}",
        spec.name,
        approx.depth,
        approx.path_count,
        approx.point_count(),
        approx.error_bound
    )
    .unwrap();
    if let Some(path) = &args.csv {
        write_file(path, cloud_csv(spec, &approx).as_bytes())?;
        writeln!(s, "wrote {}", path.display()).unwrap();
    }
    if let Some(path) = &args.png {
        write_file(path, &cloud_png(spec, &approx, args.px)?)?;
        writeln!(s, "wrote {}", path.display()).unwrap();
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy)]
pub struct AnalysisArgs {
    pub depth: Option<usize>,
    pub tol: f64,
    pub with_attractor: bool,
    pub timings: bool,
}

/// Runs the conditions, K-theory and optionally attractor statistics.
pub fn analyze(spec: &MwGraphSpec, reference: Option<Reference>, args: &AnalysisArgs, budget: u64) -> CliResult<AnalysisReport> {
    if !(args.tol >= 0.0) {
        return Err(CliError::Invalid(format!("tolerance must be nonnegative, got {}", args.tol)));
    }
    let mut timings = BTreeMap::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str| {
        timings.insert(name.to_string(), clock.elapsed().as_secs_f64() * 1e3);
        clock = Instant::now();
    };
    let depth = args.depth.unwrap_or_else(|| default_depth(spec, budget));
    let approx = invariant_list(spec, depth, &AttractorOptions { point_budget: budget, dedup: true })?;
    lap("sampling");

    let attractor = if args.with_attractor {
        let residual = invariance_residual(spec, &approx)?;
        let g = spec.graph();
        let stats = AttractorStats {
            depth: approx.depth,
            paths: approx.path_count,
            points: approx.point_count(),
            error_bound: approx.error_bound,
            invariance_residual: g.vertices().map(|v| (g.vertex_name(v).to_string(), residual[v.0])).collect(),
        };
        lap("attractor");
        Some(stats)
    } else {
        None
    };

    let hyp = simplicity_report(spec, &approx, args.tol)?;
    let sep = separation_from_report(spec, &hyp.branch);
    lap("conditions");
    let vm = spec.graph().vertex_matrix();
    let k = graph_algebra_ktheory(&vm)?;
    lap("ktheory");

    let g = spec.graph();
    let mut report = AnalysisReport {
        spec: spec.name.clone(),
        dimension: spec.dimension(),
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        contraction: spec.contraction(),
        contraction_lower: spec.contraction_lower(),
        sampling: Sampling { depth: approx.depth, points: approx.point_count(), error_bound: approx.error_bound, tol: args.tol },
        attractor,
        hypotheses: AnalysisReport::hypotheses_section(&hyp),
        branch_points: AnalysisReport::branch_section(spec, &hyp),
        graph_separation: AnalysisReport::separation_section(spec, &sep, args.tol),
        open_set_condition: AnalysisReport::osc_section(spec, &hyp.osc, args.tol),
        ktheory: KTheorySection::new(&vm, &k),
        reference,
        conclusions: Vec::new(),
        timings: None,
    };
    report.conclusions = report.conclusions();
    if args.timings {
        report.timings = Some(timings);
    }
    Ok(report)
}

pub fn render(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    }
}

/// K-theory of `C*(G)` for a vertex matrix given as `"a,b;c,d"`.
pub fn ktheory_matrix(text: &str) -> CliResult<KTheorySection> {
    let m: IntMatrix = text.parse().map_err(|e: mwlab::Error| CliError::Invalid(format!("cannot parse matrix `{text}`: {e}")))?;
    if (0..m.rows()).any(|i| m.row(i).iter().any(|x| x < &0.into())) {
        return Err(CliError::Invalid("vertex matrices have nonnegative entries".into()));
    }
    let k = graph_algebra_ktheory(&m)?;
    Ok(KTheorySection::new(&m, &k))
}

pub fn ktheory_spec(spec: &MwGraphSpec, reference: Option<&Reference>) -> CliResult<String> {
    let vm = spec.graph().vertex_matrix();
    let k = graph_algebra_ktheory(&vm)?;
    let mut s = format!("{}\n", spec.name);
    s.push_str(&KTheorySection::new(&vm, &k).to_text());
    if let Some(r) = reference {
        if r.k0.is_some() || r.k1.is_some() {
            writeln!(
                s,
                "reference (stated, not computed): K0(O_M(K)) = {}, K1(O_M(K)) = {}",
                r.k0.as_deref().unwrap_or("?"),
                r.k1.as_deref().unwrap_or("?")
            )
            .unwrap();
        }
    }
    Ok(s)
}

pub fn examples_list() -> String {
    let mut s = String::new();
    for d in datasets::DATASETS {
        writeln!(s, "{:<16} {}", d.name, d.summary).unwrap();
    }
    s
}

pub fn examples_export(name: &str, out: Option<&Path>) -> CliResult<String> {
    let d = datasets::find(name).ok_or_else(|| CliError::UnknownSpec(name.to_string()))?;
    match out {
        Some(path) => {
            write_file(path, d.source.as_bytes())?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(d.source.to_string()),
    }
}
