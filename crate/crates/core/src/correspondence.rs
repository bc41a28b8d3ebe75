//! Pointwise formulas for the correspondence `X = C(G)` over `A = C(K)`.
//!
//! Functions are evaluators rather than tables. Membership `y ∈ K_{r(e)}`
//! is read off the vertex label of `y`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::attractor::{path_map, InvariantListApprox};
use crate::error::{Error, Result};
use crate::geometry::{LabeledPoint, Vec2};
use crate::graph::{EdgeId, Path, VertexId};
use crate::system::MwGraphSpec;

type CographFn = dyn Fn(&LabeledPoint, &LabeledPoint, EdgeId) -> Complex64 + Send + Sync;
type ObservableFn = dyn Fn(&LabeledPoint) -> Complex64 + Send + Sync;

/// An element `ξ(x, y, e)` of the correspondence, evaluated on the cograph
/// of `φ_e`.
#[derive(Clone)]
pub struct CographFunction {
    evaluator: Arc<CographFn>,
    pub description: String,
}

impl CographFunction {
    pub fn new<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(&LabeledPoint, &LabeledPoint, EdgeId) -> Complex64 + Send + Sync + 'static,
    {
        Self { evaluator: Arc::new(f), description: description.into() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(format!("constant {c}"), move |_, _, _| c)
    }

    pub fn eval(&self, x: &LabeledPoint, y: &LabeledPoint, e: EdgeId) -> Complex64 {
        (self.evaluator)(x, y, e)
    }

    /// `(a · ξ)(x, y) = a(x) ξ(x, y)`.
    pub fn left_action(&self, a: &SampledObservable) -> CographFunction {
        let (xi, a2) = (self.clone(), a.clone());
        Self::new(format!("({}) · ({})", a.description, self.description), move |x, y, e| {
            a2.eval(x) * xi.eval(x, y, e)
        })
    }
}

impl fmt::Debug for CographFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CographFunction({})", self.description)
    }
}

/// A continuous function on `K`, known through its values at points.
#[derive(Clone)]
pub struct SampledObservable {
    evaluator: Arc<ObservableFn>,
    pub description: String,
}

impl SampledObservable {
    pub fn new<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(&LabeledPoint) -> Complex64 + Send + Sync + 'static,
    {
        Self { evaluator: Arc::new(f), description: description.into() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(format!("constant {c}"), move |_| c)
    }

    pub fn eval(&self, x: &LabeledPoint) -> Complex64 {
        (self.evaluator)(x)
    }
}

impl fmt::Debug for SampledObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SampledObservable({})", self.description)
    }
}

fn cograph_point(spec: &MwGraphSpec, e: EdgeId, y: &LabeledPoint) -> LabeledPoint {
    LabeledPoint::new(spec.graph().source(e), spec.map(e).apply(&y.coords))
}

/// `⟨ξ, η⟩(y) = Σ_{r(e) = v(y)} conj ξ(φ_e y, y) · η(φ_e y, y)`.
pub fn inner_product(spec: &MwGraphSpec, xi: &CographFunction, eta: &CographFunction, y: &LabeledPoint) -> Complex64 {
    spec.graph()
        .in_edges(y.vertex)
        .iter()
        .map(|&e| {
            let x = cograph_point(spec, e, y);
            xi.eval(&x, y, e).conj() * eta.eval(&x, y, e)
        })
        .sum()
}

/// `ξ₀(x, y) = 1 / √#{e : r(e) = v(y)}`.
pub fn xi_zero(spec: &MwGraphSpec) -> CographFunction {
    let weights: Vec<f64> = spec.graph().vertices().map(|v| 1.0 / (spec.incoming_count(v) as f64).sqrt()).collect();
    CographFunction::new("xi_0", move |_, y, _| Complex64::new(weights[y.vertex.0], 0.0))
}

/// `E_M(a)(y)`, the average of `a(φ_e y)` over edges with `r(e) = v(y)`.
pub fn expectation(spec: &MwGraphSpec, a: &SampledObservable, y: &LabeledPoint) -> Complex64 {
    let incoming = spec.graph().in_edges(y.vertex);
    let total: Complex64 = incoming.iter().map(|&e| a.eval(&cograph_point(spec, e, y))).sum();
    total / incoming.len() as f64
}

/// Sampled `sup_y √⟨ξ, ξ⟩(y)`.
pub fn norm_two(spec: &MwGraphSpec, approx: &InvariantListApprox, xi: &CographFunction) -> f64 {
    approx
        .labeled_points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|y| inner_product(spec, xi, xi, y).re.max(0.0).sqrt())
        .reduce(|| 0.0, f64::max)
}

/// Sampled `sup |ξ|` over the cograph points `(φ_e y, y)`.
pub fn norm_inf(spec: &MwGraphSpec, approx: &InvariantListApprox, xi: &CographFunction) -> f64 {
    let g = spec.graph();
    g.edge_ids()
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|&e| {
            let r = g.range(e);
            approx.cloud(r).points.iter().map(move |&p| (e, LabeledPoint::new(r, p)))
        })
        .map(|(e, y)| xi.eval(&cograph_point(spec, e, &y), &y, e).norm())
        .reduce(|| 0.0, f64::max)
}

/// `ξ₁(φ_{w₁…w_n} y, φ_{w₂…w_n} y) ⋯ ξ_n(φ_{w_n} y, y)`.
pub fn tensor_eval(spec: &MwGraphSpec, xis: &[CographFunction], w: &Path, y: &Vec2) -> Result<Complex64> {
    let g = spec.graph();
    let w = Path::new(g, w.edges().to_vec())?;
    if xis.len() != w.len() {
        return Err(Error::ShapeMismatch(format!("{} factors for a path of length {}", xis.len(), w.len())));
    }
    let mut inner = LabeledPoint::new(w.range(g), *y);
    let mut value = Complex64::new(1.0, 0.0);
    for (xi, &e) in xis.iter().zip(w.edges()).rev() {
        let outer = cograph_point(spec, e, &inner);
        value *= xi.eval(&outer, &inner, e);
        inner = outer;
    }
    Ok(value)
}

/// `⟨ξ₁⊗…⊗ξ_n, η₁⊗…⊗η_n⟩(y)` as a sum over paths `w ∈ E^n` with `r(w) = v(y)`.
pub fn tensor_inner_product(
    spec: &MwGraphSpec,
    xis: &[CographFunction],
    etas: &[CographFunction],
    y: &LabeledPoint,
) -> Result<Complex64> {
    if xis.len() != etas.len() || xis.is_empty() {
        return Err(Error::ShapeMismatch("tensor factors must be nonempty and of equal length".into()));
    }
    let g = spec.graph();
    let mut total = Complex64::new(0.0, 0.0);
    for v in g.vertices() {
        for w in g.paths_from(v, xis.len())? {
            if w.range(g) == y.vertex {
                total += tensor_eval(spec, xis, &w, &y.coords)?.conj() * tensor_eval(spec, etas, &w, &y.coords)?;
            }
        }
    }
    Ok(total)
}

/// `(M, E^n)`-invariance on the samples: `a(φ_α y)` and `a(φ_β y)` agree
/// within `tol` whenever `α, β ∈ E^n` share source and range.
pub fn is_invariant(spec: &MwGraphSpec, a: &SampledObservable, n: usize, approx: &InvariantListApprox, tol: f64) -> Result<bool> {
    let g = spec.graph();
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut groups: Vec<((VertexId, VertexId), Vec<crate::geometry::AffineContraction>)> = Vec::new();
    for v in g.vertices() {
        for w in g.paths_from(v, n)? {
            let key = (v, w.range(g));
            let map = path_map(spec, &w);
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, maps)) => maps.push(map),
                None => groups.push((key, vec![map])),
            }
        }
    }
    Ok(groups.par_iter().filter(|(_, maps)| maps.len() > 1).all(|((s, r), maps)| {
        approx.cloud(*r).points.par_iter().all(|y| {
            let vals: Vec<Complex64> = maps.iter().map(|f| a.eval(&LabeledPoint::new(*s, f.apply(y)))).collect();
            vals.iter().enumerate().all(|(i, u)| vals[i + 1..].iter().all(|v| (u - v).norm() <= tol))
        })
    }))
}
