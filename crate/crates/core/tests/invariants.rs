use std::f64::consts::TAU;

use bv_relax::geometry::{integrate_1d, Mat2, PiecewiseConstantCircle, Point2};
use bv_relax::plateau::PlateauOptions;
use bv_relax::recovery::{gamma_k, straight_jump_recovery, RecoveryError};
use bv_relax::relaxed_area::{jump_term, jump_term_explicit, n_uple_point_area, regular_term, relaxed_area_bv, relaxed_tvj};
use bv_relax::scene::{
    circular_slice_tv, n_uple_scene, straight_jump_scene, straight_jump_scene_with, JumpCurve, RegionMapSpec, SourceCurve,
    Trace,
};
use bv_relax::PlanarMap;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point2> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

fn matrix() -> impl Strategy<Value = Mat2> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

/// Circle data with 2–6 arcs of at least 0.3 rad.
fn circle_data() -> impl Strategy<Value = PiecewiseConstantCircle> {
    (2usize..7)
        .prop_flat_map(|n| (prop::collection::vec(0.3..2.0f64, n), prop::collection::vec(point(), n), 0.0..TAU))
        .prop_filter_map("arcs do not fit", |(w, values, start)| {
            let n = w.len() as f64;
            let total: f64 = w.iter().sum();
            // rescale the free part so the arcs sum to 2π with each ≥ 0.3
            let free = TAU - 0.3 * n;
            let arcs: Vec<f64> = w.iter().map(|x| 0.3 + free * x / total).collect();
            PiecewiseConstantCircle::new(start, arcs, values).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn total_variation_is_additive_over_a_split(a in -2.0..0.0f64, c in 0.1..0.9f64, len in 0.5..3.0f64, up in point(), down in point()) {
        let (b, m) = (a + len, a + c * len);
        let tol = 1e-10;
        let whole = straight_jump_scene(a, b, up, down).total_variation(tol).unwrap();
        let left = straight_jump_scene(a, m, up, down).total_variation(tol).unwrap();
        let right = straight_jump_scene(m, b, up, down).total_variation(tol).unwrap();
        prop_assert!((whole - left - right).abs() <= 2.0 * tol);
    }

    #[test]
    fn junction_sectors_fill_the_circle(g in circle_data(), r in 0.2..3.0f64) {
        let s = n_uple_scene(&g, Point2::new(0.3, -0.1), r);
        for j in &s.junctions {
            prop_assert!((j.sector_angles.iter().sum::<f64>() - TAU).abs() < 1e-12);
        }
    }

    #[test]
    fn slice_variation_of_a_homogeneous_map_is_radius_free(g in circle_data(), r in 0.05..0.95f64) {
        let s = n_uple_scene(&g, Point2::ORIGIN, 1.0);
        let expect = g.merged().jump_length();
        prop_assert!((circular_slice_tv(&s, Point2::ORIGIN, r, 4096) - expect).abs() < 1e-9);
    }

    #[test]
    fn splitting_a_jump_curve_keeps_its_area(ma in matrix(), mb in matrix(), oa in point(), ob in point(), t in 0.05..0.95f64) {
        let tol = 1e-9;
        let s = straight_jump_scene_with(0.0, 2.0, RegionMapSpec::affine(ma, oa), RegionMapSpec::affine(mb, ob));
        let whole = jump_term(&s, 0, tol).unwrap();
        let (l, r) = s.jump_curves[0].split_at(2.0 * t).unwrap();
        let mut split = s.clone();
        split.jump_curves = vec![l, r];
        let parts = jump_term(&split, 0, tol).unwrap() + jump_term(&split, 1, tol).unwrap();
        prop_assert!((whole - parts).abs() <= 2.0 * tol, "{} vs {}", whole, parts);
    }

    #[test]
    fn regular_term_dominates_area_and_variation(ma in matrix(), mb in matrix(), oa in point(), ob in point()) {
        let tol = 1e-9;
        let s = straight_jump_scene_with(-1.0, 1.0, RegionMapSpec::affine(ma, oa), RegionMapSpec::affine(mb, ob));
        let reg = regular_term(&s, tol).unwrap();
        prop_assert!(reg >= s.region_area() - tol);
        prop_assert!(reg >= s.total_variation_parts(tol).unwrap().absolutely_continuous - tol);
    }

    #[test]
    fn jump_area_dominates_the_wall(p0 in point(), p1 in point(), m0 in point(), m1 in point()) {
        let tol = 1e-10;
        let curve = JumpCurve::with_traces(
            SourceCurve::segment(Point2::ORIGIN, Point2::new(1.5, 0.0)),
            Trace::Linear { start: p0, end: p1 },
            Trace::Linear { start: m0, end: m1 },
        );
        let area = jump_term_explicit(&curve, tol).unwrap();
        let wall = integrate_1d(|t| (p0.lerp(p1, t / 1.5) - m0.lerp(m1, t / 1.5)).norm(), 0.0, 1.5, tol).unwrap();
        prop_assert!(area >= wall - 2.0 * tol, "{} < {}", area, wall);
    }

    #[test]
    fn jump_area_obeys_the_interpolation_bound(p in prop::collection::vec(point(), 2..6), m in prop::collection::vec(point(), 2..6)) {
        // piecewise linear traces on [0, 1]: area ≤ ‖d‖∞(‖u̇⁺‖₁ + ‖u̇⁻‖₁) + ∫|d|
        let sampled = |v: &[Point2]| Trace::Sampled {
            samples: v.iter().enumerate().map(|(i, &x)| (i as f64 / (v.len() - 1) as f64, x)).collect(),
        };
        let curve = JumpCurve::with_traces(SourceCurve::segment(Point2::ORIGIN, Point2::new(1.0, 0.0)), sampled(&p), sampled(&m));
        let tol = 1e-10;
        let area = jump_term_explicit(&curve, tol).unwrap();
        let at = |v: &[Point2], t: f64| {
            let x = t * (v.len() - 1) as f64;
            let i = (x.floor() as usize).min(v.len() - 2);
            v[i].lerp(v[i + 1], x - i as f64)
        };
        let d = |t: f64| at(&p, t) - at(&m, t);
        let wall = integrate_1d(|t| d(t).norm(), 0.0, 1.0, tol).unwrap();
        // |d| is piecewise linear in each coordinate: its sup sits at a breakpoint
        let sup = p.iter().enumerate().map(|(i, _)| i as f64 / (p.len() - 1) as f64)
            .chain(m.iter().enumerate().map(|(i, _)| i as f64 / (m.len() - 1) as f64))
            .map(|t| d(t).norm())
            .fold(0.0, f64::max);
        let speed = |v: &[Point2]| v.windows(2).map(|w| w[0].dist(w[1])).sum::<f64>();
        prop_assert!(area <= sup * (speed(&p) + speed(&m)) + wall + 2.0 * tol, "{} > bound", area);
    }

    #[test]
    fn constant_traces_give_exactly_the_wall(p in point(), m in point(), len in 0.1..3.0f64) {
        let curve = JumpCurve::with_traces(
            SourceCurve::segment(Point2::ORIGIN, Point2::new(0.0, len)),
            Trace::Constant { value: p },
            Trace::Constant { value: m },
        );
        let area = jump_term_explicit(&curve, 1e-12).unwrap();
        prop_assert!((area - len * p.dist(m)).abs() <= 1e-12 * (1.0 + len * p.dist(m)));
    }

    #[test]
    fn gamma_k_keeps_the_total_variation(g in circle_data(), k in 1usize..400) {
        match gamma_k(&g, k) {
            Ok(gk) => prop_assert!((gk.total_variation() - g.merged().jump_length()).abs() <= 1e-12 * (1.0 + g.jump_length())),
            Err(RecoveryError::WindowOverlap { .. }) => prop_assert!(2.0 / k as f64 >= 0.3),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn strip_interpolation_leaves_the_outside_alone(eps in 1e-3..0.9f64, up in point(), down in point(), x in 0.0..1.0f64, y in -1.0..1.0f64) {
        prop_assume!(y.abs() >= eps);
        let s = straight_jump_scene(0.0, 1.0, up, down);
        let v = straight_jump_recovery(&s, eps).unwrap();
        let p = Point2::new(x, y);
        prop_assert_eq!(v.eval(p), s.eval(p));
    }
}

fn quick() -> PlateauOptions {
    PlateauOptions {
        n_rings: 8,
        n_angular: 48,
        ..PlateauOptions::default()
    }
}

#[test]
fn relaxed_tvj_does_not_depend_on_the_radius() {
    let g = PiecewiseConstantCircle::uniform(vec![
        Point2::new(0.0, 0.0),
        Point2::new(2.0, 0.0),
        Point2::new(0.0, 1.0),
        Point2::new(1.0, 1.0),
    ])
    .unwrap();
    let base = relaxed_tvj(&g, 1.0, &quick()).unwrap();
    for r in [0.5, 2.0] {
        assert_eq!(relaxed_tvj(&g, r, &quick()).unwrap(), base);
    }
}

#[test]
fn n_uple_formula_matches_the_generic_pipeline() {
    let g = PiecewiseConstantCircle::new(
        0.4,
        vec![1.0, 2.0, 1.5, TAU - 4.5],
        vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)],
    )
    .unwrap();
    let formula = n_uple_point_area(&g, 1.5, &quick()).unwrap();
    let scene = n_uple_scene(&g, Point2::ORIGIN, 1.5);
    let generic = relaxed_area_bv(&scene, 1e-9, &quick()).unwrap();
    for (a, b) in [(formula.total_lower, generic.total_lower), (formula.total_upper, generic.total_upper)] {
        assert!((a - b).abs() <= 1e-3 * a, "{a} vs {b}");
    }
}
