//! Static SVG pictures: scene partitions, loops over their winding-number
//! heatmap, convergence curves.

use std::fmt::Write;

use bv_relax::geometry::{polygon_winding, BoundaryLoop, Point2};
use bv_relax::scene::{PiecewiseMapScene, RegionMapSpec};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f",
];

/// World-to-picture transform for a bounding box (y pointing up).
struct Frame {
    lo: Point2,
    scale: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = Point2>) -> Frame {
        let (mut lo, mut hi) = (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        Frame {
            lo,
            scale: (SIZE - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        (
            MARGIN + (p.x - self.lo.x) * self.scale,
            SIZE - MARGIN - (p.y - self.lo.y) * self.scale,
        )
    }

    fn path(&self, pts: &[Point2], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(*p);
            let _ = write!(d, "{}{x:.2},{y:.2} ", if i == 0 { "M" } else { "L" });
        }
        if closed {
            d.push('Z');
        }
        d
    }
}

fn open() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Regions filled by value, jump curves in black, junctions as dots.
pub fn scene_svg(scene: &PiecewiseMapScene) -> String {
    let outline = scene.domain.boundary_polygon(128);
    let frame = Frame::fit(outline.iter().copied());
    let mut s = open();
    // one colour per distinct constant value, grey for non-constant maps
    let mut seen: Vec<Point2> = Vec::new();
    for r in &scene.regions {
        let fill = match &r.map {
            RegionMapSpec::Constant { value } => {
                let k = seen.iter().position(|v| v == value).unwrap_or_else(|| {
                    seen.push(*value);
                    seen.len() - 1
                });
                PALETTE[k % PALETTE.len()]
            }
            _ => "#d0d0d0",
        };
        let _ = writeln!(
            s,
            "<path d=\"{}\" fill=\"{fill}\" fill-opacity=\"0.55\" stroke=\"#888\" stroke-width=\"0.5\"/>",
            frame.path(&r.shape.boundary_polygon(96), true)
        );
    }
    for c in &scene.jump_curves {
        let _ = writeln!(
            s,
            "<path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>",
            frame.path(&c.curve.polyline(64), false)
        );
    }
    for j in &scene.junctions {
        let (x, y) = frame.map(j.point);
        let _ = writeln!(s, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"red\"/>");
    }
    let _ = writeln!(
        s,
        "<path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
        frame.path(&outline, true)
    );
    s.push_str("</svg>\n");
    s
}

/// `|winding number|` on a `grid × grid` raster under the loop.
pub fn loop_svg(lp: &BoundaryLoop, grid: usize) -> String {
    let (lo, hi) = lp.bounding_box();
    let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let (lo, hi) = (lo - Point2::new(pad, pad), hi + Point2::new(pad, pad));
    let frame = Frame::fit([lo, hi].into_iter());
    let mut s = open();
    let (w, h) = ((hi.x - lo.x) / grid as f64, (hi.y - lo.y) / grid as f64);
    let mut max_w = 1;
    let mut cells = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        for j in 0..grid {
            let c = Point2::new(lo.x + (i as f64 + 0.5) * w, lo.y + (j as f64 + 0.5) * h);
            let wn = polygon_winding(lp, c).map(|v| v.unsigned_abs()).unwrap_or(0);
            max_w = max_w.max(wn);
            cells.push((i, j, wn));
        }
    }
    for (i, j, wn) in cells {
        if wn == 0 {
            continue;
        }
        let (x, y) = frame.map(Point2::new(lo.x + i as f64 * w, lo.y + (j + 1) as f64 * h));
        let op = 0.2 + 0.8 * wn as f64 / max_w as f64;
        let _ = writeln!(
            s,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#4e79a7\" fill-opacity=\"{op:.3}\"/>",
            w * frame.scale + 0.05,
            h * frame.scale + 0.05
        );
    }
    let _ = writeln!(
        s,
        "<path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
        frame.path(lp.vertices(), true)
    );
    s.push_str("</svg>\n");
    s
}

/// Log-log curves, one per series of `(parameter, gap)` points.
pub fn convergence_svg(series: &[(&str, Vec<(f64, f64)>)], x_label: &str) -> String {
    let logs: Vec<(&str, Vec<Point2>)> = series
        .iter()
        .map(|(name, pts)| {
            let p = pts
                .iter()
                .filter(|(x, y)| *x > 0.0 && *y > 0.0)
                .map(|(x, y)| Point2::new(x.log10(), y.log10()))
                .collect();
            (*name, p)
        })
        .collect();
    let all: Vec<Point2> = logs.iter().flat_map(|s| s.1.iter().copied()).collect();
    let mut s = open();
    if all.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let frame = Frame::fit(all.iter().copied());
    for (k, (name, pts)) in logs.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        if pts.len() > 1 {
            let _ = writeln!(
                s,
                "<path d=\"{}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"2\"/>",
                frame.path(pts, false)
            );
        }
        for p in pts {
            let (x, y) = frame.map(*p);
            let _ = writeln!(s, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"{colour}\"/>");
        }
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{colour}\">{name}</text>",
            MARGIN + 4.0,
            MARGIN + 14.0 * (k + 1) as f64
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">log10 {x_label} vs log10 gap</text>",
        SIZE - MARGIN,
        SIZE - 6.0
    );
    s.push_str("</svg>\n");
    s
}
