mod common;

use common::{edges, line_ifs, v};
use mwlab::attractor::{invariant_list, AttractorOptions};
use mwlab::conditions::{
    branch_index, branch_points, graph_separation, open_set_condition, separation_from_report, simplicity_report, Verdict,
};
use mwlab::geometry::{AffineContraction, Interval, SeedBox};
use mwlab::{EdgeId, Error, Graph, MwGraphSpec, OpenCell};
use proptest::prelude::*;

const TOL: f64 = 1e-6;

fn sample(spec: &MwGraphSpec, depth: usize) -> mwlab::attractor::InvariantListApprox {
    invariant_list(spec, depth, &AttractorOptions { dedup: true, ..AttractorOptions::default() }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// `a x` and `b x` share the fixed point 0; the third map fixes 1.
    #[test]
    fn shared_fixed_point_is_the_only_branch_point(a in 0.2f64..0.3, b in 0.32f64..0.45, c in 0.2f64..0.45) {
        let spec = line_ifs(&[(a, 0.0), (b, 0.0), (c, 1.0 - c)], (0.0, 1.0), None);
        let approx = sample(&spec, 8);
        let rep = branch_points(&spec, &approx, TOL).unwrap();
        prop_assert_eq!(rep.branch_points.len(), 1);
        let r = &rep.branch_points[0];
        prop_assert!(r.x.coords.norm() <= TOL && r.y.coords.norm() <= TOL);
        prop_assert_eq!(&r.edges, &vec![EdgeId(0), EdgeId(1)]);
        prop_assert_eq!(r.index, 2);
        prop_assert!(rep.certificates_agree());
        let sep = separation_from_report(&spec, &rep);
        prop_assert!(!sep.holds);
        prop_assert!(sep.witness.unwrap().y.coords.norm() <= TOL);
    }

    #[test]
    fn reports_are_self_consistent(spec in common::plane_ifs_strategy()) {
        let approx = sample(&spec, 5);
        let rep = match branch_points(&spec, &approx, TOL) {
            Err(Error::ResolutionInsufficient { .. }) => return Ok(()),
            other => other.unwrap(),
        };
        let sep = graph_separation(&spec, &approx, TOL).unwrap();
        prop_assert_eq!(sep.holds, !rep.pairs.iter().any(|p| p.is_branch_pair(TOL)));
        prop_assert_eq!(sep.holds, rep.min_cograph_gap > TOL);
        prop_assert!(rep.min_gap_lower <= rep.min_cograph_gap);
        for p in &rep.pairs {
            prop_assert!(p.gap_lower <= p.gap_upper);
        }
        for r in &rep.branch_points {
            prop_assert!(r.index >= 2);
            prop_assert_eq!(r.index, r.edges.len());
            prop_assert_eq!(branch_index(&spec, &r.x, &r.y, TOL), r.index);
        }
        prop_assert_eq!(rep.quotient_dimension(), rep.branch_points.len());
        prop_assert_eq!(rep.left_action_compact(), rep.branch_points.is_empty());
    }

    /// `(0, 1)` works for `a x` and `b x + 1 - b` exactly when the images
    /// `(0, a)` and `(1 - b, 1)` do not overlap.
    #[test]
    fn osc_on_the_line(a in 0.1f64..0.9, b in 0.1f64..0.9) {
        prop_assume!((a + b - 1.0).abs() > 1e-9);
        let spec = line_ifs(&[(a, 0.0), (b, 1.0 - b)], (0.0, 1.0), Some((0.0, 1.0)));
        let rep = open_set_condition(&spec, 0.0).unwrap();
        prop_assert_eq!(rep.holds, Some(a + b < 1.0));
    }
}

#[test]
fn osc_reference_cases() {
    let binary = line_ifs(&[(0.5, 0.0), (0.5, 0.5)], (0.0, 1.0), Some((0.0, 1.0)));
    assert_eq!(open_set_condition(&binary, 0.0).unwrap().holds, Some(true));
    let duplicate = line_ifs(&[(0.5, 0.25), (0.5, 0.25)], (0.0, 1.0), Some((0.0, 1.0)));
    assert_eq!(open_set_condition(&duplicate, 0.0).unwrap().holds, Some(false));
    assert_eq!(open_set_condition(&common::squares(), 0.0).unwrap().holds, Some(true));
    let bare = line_ifs(&[(0.5, 0.0), (0.5, 0.5)], (0.0, 1.0), None);
    assert_eq!(open_set_condition(&bare, 0.0).unwrap().holds, None);
}

#[test]
fn squares_branch_point_and_verdict() {
    let spec = common::squares();
    let h = simplicity_report(&spec, &sample(&spec, 8), TOL).unwrap();
    assert_eq!(h.branch.branch_points.len(), 1);
    let b = &h.branch.branch_points[0];
    assert!((b.x.coords - v(0.5, 0.5)).norm() <= TOL);
    assert!((b.y.coords - v(1.0, 1.0)).norm() <= TOL);
    assert_eq!(b.index, 2);
    assert_eq!(h.quotient_dimension, 1);
    assert!(!h.left_action_compact);
    assert_eq!(h.open_set_condition, Some(true));
    assert_eq!(h.verdict, Verdict::SimplePurelyInfinite);
}

#[test]
fn cyclic_permutation_fails_the_hypotheses() {
    let g = Graph::new(["v1", "v2"], edges(&[("e1", "v1", "v2"), ("e2", "v2", "v1")])).unwrap();
    let half = AffineContraction::line(0.5, 0.0).unwrap();
    let unit = SeedBox { lo: v(0.0, 0.0), hi: v(1.0, 0.0) };
    let open = vec![vec![OpenCell::Interval(Interval::new(0.0, 1.0).unwrap())]; 2];
    let spec = MwGraphSpec::new("cycle", g, 1, vec![unit; 2], vec![half; 2], Some(open)).unwrap();
    let h = simplicity_report(&spec, &sample(&spec, 4), TOL).unwrap();
    assert!(h.irreducible && h.no_sinks_sources && !h.not_cyclic_permutation);
    assert_eq!(h.verdict, Verdict::HypothesesNotMet);
}

#[test]
fn missing_open_sets_leave_the_verdict_open() {
    let spec = line_ifs(&[(0.3, 0.0), (0.3, 0.7)], (0.0, 1.0), None);
    let h = simplicity_report(&spec, &sample(&spec, 6), TOL).unwrap();
    assert_eq!(h.verdict, Verdict::Unknown);
    assert!(h.branch.branch_points.is_empty());
}

#[test]
fn coincident_maps_need_resolution() {
    let spec = line_ifs(&[(0.5, 0.25), (0.5, 0.25)], (0.0, 1.0), None);
    let coarse = sample(&spec, 4);
    assert!(matches!(branch_points(&spec, &coarse, TOL), Err(Error::ResolutionInsufficient { .. })));
    let rep = branch_points(&spec, &sample(&spec, 6), 1e-1).unwrap();
    assert!(!rep.branch_points.is_empty());
    assert!(rep.branch_points.iter().all(|r| r.index == 2));
}
