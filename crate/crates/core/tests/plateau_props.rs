use std::f64::consts::TAU;
use std::sync::Arc;

use bv_relax::geometry::{BoundaryLoop, PiecewiseConstantCircle, Point2, SampledCircleMap};
use bv_relax::plateau::{
    discrete_jacobian_mass, plateau_certify, plateau_closed_form, plateau_upper, DiscreteMap, DiskMesh, PlateauOptions,
};
use proptest::prelude::*;

fn small_opts() -> PlateauOptions {
    PlateauOptions {
        n_rings: 6,
        n_angular: 32,
        max_iters: 150,
        jitter_starts: 1,
        ..PlateauOptions::default()
    }
}

fn point() -> impl Strategy<Value = Point2> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

fn polygon() -> impl Strategy<Value = BoundaryLoop> {
    prop::collection::vec(point(), 3..7).prop_filter_map("degenerate", |v| {
        let lp = BoundaryLoop::new(v).ok()?;
        (!lp.is_degenerate() && lp.length() > 0.5).then_some(lp)
    })
}

/// Convex polygon: `n` sorted angles on an ellipse.
fn convex() -> impl Strategy<Value = BoundaryLoop> {
    (prop::collection::vec(0.0..TAU, 3..9), 0.3..2.0f64, 0.3..2.0f64, point()).prop_filter_map(
        "degenerate",
        |(mut t, a, b, c)| {
            t.sort_by(f64::total_cmp);
            t.dedup_by(|x, y| (*x - *y).abs() < 1e-3);
            let lp = BoundaryLoop::new(t.iter().map(|&t| c + Point2::new(a * t.cos(), b * t.sin())).collect()).ok()?;
            (lp.len() >= 3 && lp.signed_area().abs() > 1e-3).then_some(lp)
        },
    )
}

/// `sup_t |φ₁(t) − φ₂(t)|` for constant-speed parametrizations from the
/// first vertex: the difference is piecewise linear between the union of
/// both vertex fractions, so the sup sits at one of them.
fn sup_distance(p: &BoundaryLoop, q: &BoundaryLoop) -> f64 {
    let fractions = |lp: &BoundaryLoop| {
        let total = lp.length();
        let mut acc = 0.0;
        let mut f = vec![0.0];
        for (a, b) in lp.edges() {
            acc += a.dist(b);
            f.push(acc / total);
        }
        f
    };
    fractions(p)
        .into_iter()
        .chain(fractions(q))
        .map(|s| p.point_at_fraction(s.min(1.0)).dist(q.point_at_fraction(s.min(1.0))))
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn plateau_is_lipschitz_on_convex_pairs(p in convex(), q in convex()) {
        let (cp, cq) = (plateau_closed_form(&p).unwrap(), plateau_closed_form(&q).unwrap());
        prop_assert!((cp.value - p.signed_area().abs()).abs() < 1e-12);
        let bound = 2.0 * sup_distance(&p, &q) * (p.length() + q.length());
        prop_assert!((cp.value - cq.value).abs() <= bound + 1e-12, "{} > {}", (cp.value - cq.value).abs(), bound);
    }

    #[test]
    fn relaxed_value_is_continuous_for_triangles(
        v in prop::collection::vec(point(), 3),
        dv in prop::collection::vec(point(), 3),
        da in prop::collection::vec(-1.0..1.0f64, 3),
        delta in prop::sample::select(vec![1e-2, 1e-3]),
    ) {
        let g = PiecewiseConstantCircle::uniform(v.clone()).unwrap();
        let arcs: Vec<f64> = da.iter().map(|d| TAU / 3.0 + delta * d).collect();
        let fix = TAU - arcs[0] - arcs[1];
        let h = PiecewiseConstantCircle::new(delta * da[2], vec![arcs[0], arcs[1], fix], v.iter().zip(&dv).map(|(a, b)| *a + *b * delta).collect()).unwrap();
        let (Some(a), Some(b)) = (plateau_closed_form(&g.tilde_gamma()), plateau_closed_form(&h.tilde_gamma())) else {
            return Ok(());
        };
        // |T| moves by at most δ·√2 per vertex times the opposite side
        let l = g.tilde_gamma().length() + h.tilde_gamma().length();
        prop_assert!((a.value - b.value).abs() <= 2.0 * std::f64::consts::SQRT_2 * delta * l);
    }

    #[test]
    fn mass_of_a_map_onto_a_line_is_zero(ts in prop::collection::vec(-3.0..3.0f64, 1 + 4 * 12), scale in -4i32..4) {
        let mesh = Arc::new(DiskMesh::uniform(4, 12));
        let k = 2f64.powi(scale);
        let values = ts[..mesh.vertices.len()].iter().map(|&t| Point2::new(t * k, 2.0 * t * k)).collect();
        prop_assert_eq!(discrete_jacobian_mass(&DiscreteMap::new(mesh, values)).unwrap(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn certificate_bounds_are_ordered(lp in polygon()) {
        let c = plateau_certify(&lp, &small_opts()).unwrap();
        prop_assert!(c.lower <= c.upper + 1e-9, "{:?}", c);
        prop_assert!(c.gap() >= c.lower_error);
    }

    #[test]
    fn certificates_scale_with_the_square(lp in polygon(), r in 0.25..4.0f64) {
        let o = small_opts();
        let c = plateau_certify(&lp, &o).unwrap();
        let cr = plateau_certify(&lp.map(|p| p * r), &o).unwrap();
        let r2 = r * r;
        prop_assert!((cr.lower - r2 * c.lower).abs() <= 2.0 * o.tol * r2.max(1.0), "{} vs {}", cr.lower, r2 * c.lower);
        prop_assert!((cr.upper - r2 * c.upper).abs() <= 1e-2 * r2 * c.upper.max(1e-12), "{} vs {}", cr.upper, r2 * c.upper);
    }
}

#[test]
fn upper_bound_ignores_reparametrization() {
    // a non-Jordan loop, so only the optimizer is at work
    let lp = BoundaryLoop::new(vec![
        Point2::new(0.0, 0.0),
        Point2::new(2.0, 0.0),
        Point2::new(2.0, 2.0),
        Point2::new(1.0, -1.0),
        Point2::new(0.0, 2.0),
    ])
    .unwrap();
    let o = PlateauOptions {
        n_rings: 12,
        n_angular: 64,
        ..PlateauOptions::default()
    };
    let n = 200;
    let plain = SampledCircleMap::from_fn(n, |t| lp.point_at_fraction(t / TAU)).unwrap();
    let base = plateau_upper(plain, &o).unwrap().mass;
    // h(t) = t + a sin(t) with |a| ≤ 0.6 has h' ∈ [0.4, 1.6]
    for a in [-0.6, 0.35] {
        let samples = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                (t, lp.point_at_fraction((t + a * t.sin()) / TAU))
            })
            .collect();
        let m = plateau_upper(SampledCircleMap::new(samples).unwrap(), &o).unwrap().mass;
        assert!((m - base).abs() < 0.02 * base, "{m} vs {base}");
    }
}
