//! The subcommands. Human summaries go to standard output; CSV goes to the
//! `--csv` file, or to standard output after the summary when none is given.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use bv_relax::geometry::{BoundaryLoop, PiecewiseConstantCircle, Point2, RegionSpec};
use bv_relax::plateau::{plateau_certify, PlateauCertificate, PlateauOptions};
use bv_relax::recovery::{
    area_convergence_check, n_uple_recovery_with_plateau, straight_jump_recovery, strict_convergence_check,
    NUpleRecovery, RecoveryMap, RecoveryReport, StraightJumpRecovery,
};
use bv_relax::relaxed_area::{
    infinite_triple_point_report, n_uple_point_area, relaxed_area_bv, relaxed_tvj, triangle_area, AreaBreakdown,
};
use bv_relax::scene::{infinite_triple_point_scene, n_uple_scene, PiecewiseMapScene, SourceCurve};

use crate::error::CliError;
use crate::input::{load_loop, load_scene};
use crate::svg;

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Common {
    pub tol: f64,
    pub seed: u64,
    pub rings: Option<usize>,
    pub angular: Option<usize>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl Common {
    pub fn check(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Invalid(format!("--tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    pub fn plateau_options(&self) -> Result<PlateauOptions, CliError> {
        let d = PlateauOptions::default();
        let o = PlateauOptions {
            seed: self.seed,
            n_rings: self.rings.unwrap_or(d.n_rings),
            n_angular: self.angular.unwrap_or(d.n_angular),
            tol: self.tol,
            ..d
        };
        o.check()?;
        Ok(o)
    }
}

/// Collects output for one command run.
struct Report<'a> {
    common: &'a Common,
    summary: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    svg: Option<String>,
}

impl<'a> Report<'a> {
    fn new(common: &'a Common, header: &[&str]) -> Self {
        Report {
            common,
            summary: String::new(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            svg: None,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.summary.push_str(s.as_ref());
        self.summary.push('\n');
    }

    fn row(&mut self, r: Vec<String>) {
        self.rows.push(r);
    }

    fn finish(self) -> Result<(), CliError> {
        let csv = csv_text(&self.header, &self.rows);
        let mut out = std::io::stdout().lock();
        let io = |e| CliError::io("<stdout>", e);
        out.write_all(self.summary.as_bytes()).map_err(io)?;
        match &self.common.csv {
            Some(p) => write_file(p, &csv)?,
            None => out.write_all(csv.as_bytes()).map_err(io)?,
        }
        if let (Some(p), Some(s)) = (&self.common.svg, &self.svg) {
            write_file(p, s)?;
        }
        Ok(())
    }
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn num(x: f64) -> String {
    x.to_string()
}

fn certificate_line(name: &str, c: &PlateauCertificate) -> String {
    format!(
        "{name}: lower {:.9}  upper {:.9}  gap {:.3e}  ({}{})",
        c.lower,
        c.upper,
        c.gap(),
        c.upper_method,
        if c.converged { "" } else { ", optimizer not converged" }
    )
}

pub fn run_area(scene_path: &Path, common: &Common) -> Result<(), CliError> {
    common.check()?;
    let scene = load_scene(scene_path)?;
    let opts = common.plateau_options()?;
    let b = relaxed_area_bv(&scene, common.tol, &opts)?;
    let mut rep = Report::new(common, &[]);
    area_output(&mut rep, &b);
    rep.svg = Some(svg::scene_svg(&scene));
    rep.finish()
}

/// Fixed columns first (junction columns empty without junctions), then one
/// column per term.
fn area_output(rep: &mut Report, b: &AreaBreakdown) {
    let has_junctions = !b.junction_terms.is_empty();
    let opt = |x: f64| if has_junctions { num(x) } else { String::new() };
    let gap = b.junction_terms.iter().map(|(_, c)| c.gap()).sum::<f64>();
    let mut header: Vec<String> = ["regular", "jump", "junction_lower", "junction_upper", "junction_gap", "total_lower", "total_upper"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut row = vec![
        num(b.regular),
        num(b.jump_total()),
        opt(b.junction_lower()),
        opt(b.junction_upper()),
        opt(gap),
        num(b.total_lower),
        num(b.total_upper),
    ];
    let (h, v) = b.csv_record();
    // skip the leading regular and trailing totals already present
    let n = h.len();
    header.extend(h[1..n - 2].iter().cloned());
    row.extend(v[1..n - 2].iter().cloned());
    rep.header = header;
    rep.row(row);
    rep.line(b.summary().trim_end());
    for (id, c) in &b.junction_terms {
        rep.line(certificate_line(id, c));
    }
}

pub fn run_tvj(scene_path: Option<&Path>, loop_path: Option<&Path>, r: f64, common: &Common) -> Result<(), CliError> {
    common.check()?;
    let opts = common.plateau_options()?;
    let mut rep = Report::new(common, &["junction", "lower", "upper", "gap", "method"]);
    let mut certs = Vec::new();
    match (scene_path, loop_path) {
        (Some(p), None) => {
            let scene = load_scene(p)?;
            for i in 0..scene.junctions.len() {
                let g = scene.junction_limit(i, scene.junction_radius(i))?;
                certs.push((format!("junction{i}"), relaxed_tvj(&g, 1.0, &opts)?));
            }
            rep.svg = Some(svg::scene_svg(&scene));
        }
        (None, Some(p)) => {
            let g = load_loop(p)?.circle()?;
            certs.push(("loop".to_string(), relaxed_tvj(&g, r, &opts)?));
            rep.svg = Some(svg::loop_svg(&g.tilde_gamma(), 96));
        }
        _ => return Err(CliError::Invalid("tvj needs exactly one of --scene or --loop".into())),
    }
    let (mut lo, mut hi) = (0.0, 0.0);
    for (id, c) in &certs {
        rep.line(certificate_line(id, c));
        rep.row(vec![id.clone(), num(c.lower), num(c.upper), num(c.gap()), c.upper_method.to_string()]);
        lo += c.lower;
        hi += c.upper;
    }
    rep.line(format!("relaxed TVJ in [{lo:.9}, {hi:.9}]"));
    rep.finish()
}

pub fn run_plateau(loop_path: &Path, common: &Common) -> Result<(), CliError> {
    common.check()?;
    let opts = common.plateau_options()?;
    let lp = load_loop(loop_path)?.polygon();
    let c = plateau_certify(&lp, &opts)?;
    let mut rep = Report::new(common, &["lower", "upper", "method"]);
    rep.line(certificate_line("plateau", &c));
    if let Some(cf) = c.closed_form {
        rep.line(format!("closed form class: {cf:?}"));
    }
    rep.line(format!(
        "mesh: {} vertices, {} triangles; {} iterations",
        c.mesh_stats.vertices, c.mesh_stats.triangles, c.iterations
    ));
    rep.row(vec![num(c.lower), num(c.upper), c.upper_method.to_string()]);
    rep.svg = Some(svg::loop_svg(&lp, 96));
    rep.finish()
}

/// Parameters of the recovery sequences.
pub const EPS_SCHEDULE: [f64; 3] = [1e-1, 1e-2, 1e-3];
pub const K_SCHEDULE: [usize; 3] = [10, 40, 160];

enum Family {
    Straight(Vec<StraightJumpRecovery>),
    NUple(Vec<NUpleRecovery>),
}

fn is_straight_jump(scene: &PiecewiseMapScene) -> bool {
    scene.jump_curves.len() == 1 && matches!(scene.jump_curves[0].curve, SourceCurve::Segment { .. }) && scene.junctions.is_empty()
}

fn run_recovery(scene: &PiecewiseMapScene, common: &Common, rep: &mut Report) -> Result<(), CliError> {
    let opts = common.plateau_options()?;
    let formula = relaxed_area_bv(scene, common.tol, &opts)?.total_upper;
    let (family, slices, name) = if is_straight_jump(scene) {
        let seq = EPS_SCHEDULE
            .iter()
            .map(|&e| straight_jump_recovery(scene, e))
            .collect::<Result<Vec<_>, _>>()?;
        let (a, b) = (seq[0].a, seq[0].b);
        let half = (0.5 * (b - a)).min(1.0);
        let c = Point2::new(0.5 * (a + b), 0.0);
        (Family::Straight(seq), vec![(c, 0.5 * half), (c, 0.9 * half)], "epsilon")
    } else if let (RegionSpec::Disk { center, radius }, [j]) = (&scene.domain, scene.junctions.as_slice()) {
        if j.point.dist(*center) > 1e-12 {
            return Err(CliError::Invalid("the junction must sit at the centre of the disk".into()));
        }
        let gamma = scene.junction_limit(0, *radius)?;
        let seq = K_SCHEDULE
            .iter()
            .map(|&k| n_uple_recovery_with_plateau(&gamma, *center, *radius, k, &opts))
            .collect::<Result<Vec<_>, _>>()?;
        (Family::NUple(seq), vec![(*center, 0.5 * radius)], "k")
    } else {
        return Err(CliError::Invalid(
            "recovery-check needs a straight jump on [a, b] × [−1, 1] or an n-uple point on a disk".into(),
        ));
    };
    let seq: Vec<(f64, &dyn RecoveryMap)> = match &family {
        Family::Straight(v) => v.iter().map(|m| (m.eps, m as &dyn RecoveryMap)).collect(),
        Family::NUple(v) => v.iter().map(|m| (m.k as f64, m as &dyn RecoveryMap)).collect(),
    };
    let strict = strict_convergence_check(&seq, scene, &slices, common.tol)?;
    let area = area_convergence_check(&seq, formula, common.tol)?;
    let table = RecoveryReport::combine(&strict, &area);
    rep.line(format!("recovery sequence over {name}; relaxed area formula {formula:.9}"));
    for (r, a) in table.rows.iter().zip(&area.rows) {
        rep.line(format!(
            "  {name} = {:<6}  L1 gap {:.3e}  TV gap {:.3e}  area {:.9}  area gap {:.3e}",
            r.parameter, r.l1_gap, r.tv_gap, a.area, r.area_gap
        ));
    }
    if let Family::NUple(v) = &family {
        for m in v {
            let (_, jmax) = m.annulus_area(common.tol)?;
            rep.line(format!(
                "  k = {:<4} c_k {:.4}  ρ_k {:.4e}  max |J| on annulus {jmax:e}",
                m.k, m.c_k, m.rho
            ));
        }
    }
    rep.line(format!(
        "gaps non-increasing: {}; area rate: {}",
        strict.monotone,
        area.rate.map_or("n/a".to_string(), |r| format!("{r:.3}"))
    ));
    rep.header = RecoveryReport::CSV_HEADER.iter().map(|s| s.to_string()).collect();
    for r in &table.rows {
        rep.row(vec![num(r.parameter), num(r.l1_gap), num(r.tv_gap), num(r.area_gap)]);
    }
    let series = vec![
        ("L1 gap", table.rows.iter().map(|r| (r.parameter, r.l1_gap)).collect()),
        ("TV gap", table.rows.iter().map(|r| (r.parameter, r.tv_gap)).collect()),
        ("area gap", table.rows.iter().map(|r| (r.parameter, r.area_gap)).collect()),
    ];
    rep.svg = Some(svg::convergence_svg(&series, name));
    Ok(())
}

pub fn run_recovery_check(scene_path: &Path, common: &Common) -> Result<(), CliError> {
    common.check()?;
    let scene = load_scene(scene_path)?;
    let mut rep = Report::new(common, &[]);
    run_recovery(&scene, common, &mut rep)?;
    rep.finish()
}

/// Comparison table: computed value against the closed form.
fn compare(rep: &mut Report, quantity: &str, computed: f64, reference: f64) {
    let diff = computed - reference;
    rep.line(format!("{quantity:<22} {computed:>16.9} {reference:>16.9} {diff:>12.3e}"));
    rep.row(vec![quantity.to_string(), num(computed), num(reference), num(diff)]);
}

const COMPARE_HEADER: [&str; 4] = ["quantity", "computed", "reference", "difference"];

fn compare_header(rep: &mut Report) {
    rep.line(format!("{:<22} {:>16} {:>16} {:>12}", "quantity", "computed", "reference", "difference"));
}

fn n_uple_example(values: Vec<Point2>, p_bar: f64, r: f64, common: &Common, rep: &mut Report) -> Result<(), CliError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(CliError::Invalid(format!("--r must be positive, got {r}")));
    }
    let opts = common.plateau_options()?;
    let gamma = PiecewiseConstantCircle::uniform(values)?;
    let length = gamma.jump_length();
    let formula = PI * r * r + r * length + p_bar;
    let b = n_uple_point_area(&gamma, r, &opts)?;
    rep.line(format!("n-uple point, r = {r}: πr² + rL(γ) + P̄(γ) with L = {length:.9}, P̄ = {p_bar}"));
    compare_header(rep);
    compare(rep, "jump_total", b.jump_total(), r * length);
    compare(rep, "junction_lower", b.junction_lower(), p_bar);
    compare(rep, "junction_upper", b.junction_upper(), p_bar);
    compare(rep, "total_lower", b.total_lower, formula);
    compare(rep, "total_upper", b.total_upper, formula);
    for k in K_SCHEDULE {
        let u = n_uple_recovery_with_plateau(&gamma, Point2::ORIGIN, r, k, &opts)?;
        compare(rep, &format!("recovery_area_k{k}"), u.area(common.tol)?, formula);
    }
    for (id, c) in &b.junction_terms {
        rep.line(certificate_line(id, c));
    }
    rep.svg = Some(svg::scene_svg(&n_uple_scene(&gamma, Point2::ORIGIN, r)));
    Ok(())
}

/// `α₁ = 0`, `T₁₂₃` of area 1/2 and `T₁₄₅` of area 2, traversed as
/// `a b ā b̄`.
pub fn double_eight() -> BoundaryLoop {
    let p = |x: f64, y: f64| Point2::new(x, y);
    let (a1, a2, a3, a4, a5) = (p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(-2.0, 0.0), p(-2.0, -2.0));
    BoundaryLoop::new(vec![a1, a2, a3, a1, a4, a5, a1, a3, a2, a1, a5, a4]).expect("non-empty")
}

pub fn run_example(name: &str, r: f64, levels: usize, common: &Common) -> Result<(), CliError> {
    common.check()?;
    let mut rep = Report::new(common, &COMPARE_HEADER);
    let p = |x: f64, y: f64| Point2::new(x, y);
    match name {
        "triple" => n_uple_example(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)], 0.5, r, common, &mut rep)?,
        "nuple" => n_uple_example(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)],
            1.0,
            r,
            common,
            &mut rep,
        )?,
        "butterfly" => {
            let lp = double_eight();
            let c = plateau_certify(&lp, &common.plateau_options()?)?;
            let t123 = triangle_area(p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0));
            let t145 = triangle_area(p(0.0, 0.0), p(-2.0, 0.0), p(-2.0, -2.0));
            rep.line("double butterfly: P = 2 min{|T123|, |T145|}, winding integral 0");
            compare_header(&mut rep);
            compare(&mut rep, "lower", c.lower, 0.0);
            compare(&mut rep, "upper", c.upper, 2.0 * t123.min(t145));
            rep.line(certificate_line("butterfly", &c));
            rep.svg = Some(svg::loop_svg(&lp, 96));
        }
        "infinite-triple" => {
            if levels == 0 {
                return Err(CliError::Invalid("--levels must be at least 1".into()));
            }
            let (a, b, g) = (p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0));
            let t = infinite_triple_point_report(a, b, g, levels, common.tol)?;
            rep.line(format!("infinite triple point truncated at N = {levels}"));
            compare_header(&mut rep);
            compare(&mut rep, "tv_partial", t.tv_partial, t.tv_limit);
            compare(&mut rep, "tvj_lower", t.tvj_lower, levels as f64 * t.triangle_area);
            compare(
                &mut rep,
                "l1_upper",
                t.l1_upper,
                PI + 23.0 / 6.0 * b.dist(a) + 13.0 / 6.0 * a.dist(g),
            );
            rep.svg = Some(svg::scene_svg(&infinite_triple_point_scene(a, b, g, levels.min(8)).0));
        }
        other => return Err(CliError::UnknownExample(other.to_string())),
    }
    rep.finish()
}
