//! Programmatic constructions of the standard scenes.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI, TAU};

use crate::geometry::{PiecewiseConstantCircle, Point2, RegionSpec};

use super::{JumpCurve, Junction, PiecewiseMapScene, Region, RegionMapSpec, SourceCurve};

/// `R = [a, b] × [−1, 1]` with `u = u⁺` above the jump `[a, b] × {0}` and
/// `u = u⁻` below it.
pub fn straight_jump_scene(a: f64, b: f64, u_plus: Point2, u_minus: Point2) -> PiecewiseMapScene {
    straight_jump_scene_with(
        a,
        b,
        RegionMapSpec::constant(u_plus),
        RegionMapSpec::constant(u_minus),
    )
}

/// As [`straight_jump_scene`] with arbitrary maps on the two halves.
pub fn straight_jump_scene_with(a: f64, b: f64, upper: RegionMapSpec, lower: RegionMapSpec) -> PiecewiseMapScene {
    let mut s = PiecewiseMapScene::new(
        RegionSpec::rectangle(a, -1.0, b, 1.0),
        vec![
            Region::new(RegionSpec::rectangle(a, 0.0, b, 1.0), upper),
            Region::new(RegionSpec::rectangle(a, -1.0, b, 0.0), lower),
        ],
    );
    s.jump_curves.push(
        JumpCurve::new(SourceCurve::segment(Point2::new(a, 0.0), Point2::new(b, 0.0))).named("jump"),
    );
    s
}

/// The homogeneous map on `B_r(center)` equal to `γ(x/|x|)`: constant
/// sectors, one radius per jump, a junction at the centre when γ takes at
/// least three values.
pub fn n_uple_scene(gamma: &PiecewiseConstantCircle, center: Point2, r: f64) -> PiecewiseMapScene {
    let g = gamma.merged();
    let domain = RegionSpec::disk(center, r);
    let n = g.len();
    if n == 1 {
        return PiecewiseMapScene::new(
            domain.clone(),
            vec![Region::new(domain, RegionMapSpec::constant(g.values[0]))],
        );
    }
    let angles = g.jump_angles();
    let regions = (0..n)
        .map(|k| {
            Region::new(
                RegionSpec::sector(center, r, angles[k], g.arcs[k]),
                RegionMapSpec::constant(g.values[k]),
            )
        })
        .collect();
    let mut s = PiecewiseMapScene::new(domain, regions);
    let rim = |a: f64| center + Point2::polar(r, a);
    if n == 2 {
        s.jump_curves.push(
            JumpCurve::new(SourceCurve::Polyline {
                points: vec![rim(angles[1]), center, rim(angles[0])],
            })
            .named("diameter"),
        );
        return s;
    }
    for (k, &a) in angles.iter().enumerate() {
        s.jump_curves
            .push(JumpCurve::new(SourceCurve::segment(center, rim(a))).named(format!("radius{k}")));
    }
    s.junctions.push(Junction {
        point: center,
        sector_values: g.values.clone(),
        sector_angles: g.arcs.clone(),
        start_angle: g.start_angle,
    });
    s
}

/// Key points of the level-`N` truncation of the infinite triple point.
#[derive(Clone, Debug, PartialEq)]
pub struct InfiniteTripleLayout {
    /// `A_i`, `i = 0..=N`, on the upper side of the triangle.
    pub upper: Vec<Point2>,
    /// `B_i`, `i = 0..=N`, on the lower side.
    pub lower: Vec<Point2>,
    /// Value on trapezoid `i` (between `A_iB_i` and `A_{i+1}B_{i+1}`),
    /// `i = 0..N`, followed by the value of the innermost triangle.
    pub cell_values: Vec<Point2>,
}

/// Level-`levels` truncation of the map on `B_1(0)` built from the
/// equilateral triangle `O A_0 B_0` (vertices on the unit circle at ±30°):
/// `u = α` off the triangle, and the triangle is cut by the vertical segments
/// `A_iB_i` joining the midpoints, with values alternating `β, γ, β, …` from
/// the outside in. The innermost triangle `O A_N B_N` keeps the value the
/// next cell would have.
pub fn infinite_triple_point_scene(
    alpha: Point2,
    beta: Point2,
    gamma: Point2,
    levels: usize,
) -> (PiecewiseMapScene, InfiniteTripleLayout) {
    let n = levels.max(1);
    let o = Point2::ORIGIN;
    let a0 = Point2::polar(1.0, FRAC_PI_6);
    let b0 = Point2::polar(1.0, -FRAC_PI_6);
    let scale = |i: usize| 0.5f64.powi(i as i32);
    let upper: Vec<Point2> = (0..=n).map(|i| a0 * scale(i)).collect();
    let lower: Vec<Point2> = (0..=n).map(|i| b0 * scale(i)).collect();
    let value = |i: usize| if i.is_multiple_of(2) { beta } else { gamma };
    let cell_values: Vec<Point2> = (0..=n).map(value).collect();

    let mut regions = vec![
        Region::new(
            RegionSpec::sector(o, 1.0, FRAC_PI_6, TAU - FRAC_PI_3),
            RegionMapSpec::constant(alpha),
        ),
        Region::new(
            RegionSpec::CircularSegment {
                center: o,
                radius: 1.0,
                start_angle: -FRAC_PI_6,
                sweep: FRAC_PI_3,
            },
            RegionMapSpec::constant(alpha),
        ),
    ];
    for i in 0..n {
        regions.push(Region::new(
            RegionSpec::polygon(vec![lower[i + 1], lower[i], upper[i], upper[i + 1]]),
            RegionMapSpec::constant(cell_values[i]),
        ));
    }
    regions.push(Region::new(
        RegionSpec::polygon(vec![o, lower[n], upper[n]]),
        RegionMapSpec::constant(cell_values[n]),
    ));

    let mut s = PiecewiseMapScene::new(RegionSpec::disk(o, 1.0), regions);
    s.jump_curves
        .push(JumpCurve::new(SourceCurve::segment(lower[0], upper[0])).named("chord"));
    for i in 0..n {
        s.jump_curves.push(
            JumpCurve::new(SourceCurve::segment(upper[i], upper[i + 1])).named(format!("upper{i}")),
        );
        s.jump_curves.push(
            JumpCurve::new(SourceCurve::segment(lower[i], lower[i + 1])).named(format!("lower{i}")),
        );
    }
    s.jump_curves.push(
        JumpCurve::new(SourceCurve::Polyline {
            points: vec![upper[n], o, lower[n]],
        })
        .named("apex"),
    );
    for i in 1..=n {
        s.jump_curves.push(
            JumpCurve::new(SourceCurve::segment(lower[i], upper[i])).named(format!("cut{i}")),
        );
    }
    for i in 1..=n {
        s.junctions.push(Junction {
            point: upper[i],
            sector_values: vec![alpha, cell_values[i], cell_values[i - 1]],
            sector_angles: vec![PI, FRAC_PI_3, 2.0 * FRAC_PI_3],
            start_angle: FRAC_PI_6,
        });
        s.junctions.push(Junction {
            point: lower[i],
            sector_values: vec![cell_values[i - 1], cell_values[i], alpha],
            sector_angles: vec![2.0 * FRAC_PI_3, FRAC_PI_3, PI],
            start_angle: -FRAC_PI_6,
        });
    }
    (
        s,
        InfiniteTripleLayout {
            upper,
            lower,
            cell_values,
        },
    )
}
