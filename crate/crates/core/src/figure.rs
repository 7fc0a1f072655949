//! Figures as SVG. A figure is first built as a [`Scene`] of construction
//! primitives in the model, then projected: hyperbolic scenes to the Poincaré
//! disk, spherical ones orthographically (front hemisphere), Euclidean ones
//! directly. Each primitive becomes exactly one element of `<g id="scene">`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::parallelism::{self, ChainCenter};
use crate::quad;
use crate::solve::SpaceSpec;
use crate::space::{Kind, Line, LinePairClass, Point, SpaceForm, TangentDir, Vec3};

const SIZE: f64 = 480.0;
const DISK: f64 = 210.0;
const MARK: f64 = 9.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig6,
    Fig7,
    Profile,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Profile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Profile => "profile",
        }
    }

    pub fn parse(s: &str) -> Result<FigureId> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown figure id `{s}`")))
    }
}

/// Construction primitives, in model terms.
#[derive(Clone, Debug)]
pub enum Prim {
    Segment { a: Point, b: Point, class: &'static str },
    /// A whole line (clipped to the view).
    Line { line: Line, class: &'static str },
    /// Geodesic circle.
    Circle { center: Point, radius: f64 },
    /// Points at distance `distance` from `axis`, over the stretch of the axis
    /// between the feet of `from` and `to`.
    Equidistant { axis: Line, distance: f64, from: Point, to: Point },
    Dot { p: Point },
    Label { p: Point, text: String },
    /// Right-angle mark at `vertex` between the directions towards `a` and `b`.
    RightMark { vertex: Point, a: Point, b: Point },
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub space: SpaceForm,
    pub title: String,
    pub prims: Vec<Prim>,
}

impl Scene {
    fn new(space: &SpaceForm, title: String) -> Self {
        Scene {
            space: *space,
            title,
            prims: Vec::new(),
        }
    }

    fn seg(&mut self, a: &Point, b: &Point, class: &'static str) {
        self.prims.push(Prim::Segment { a: *a, b: *b, class });
    }

    fn line(&mut self, line: &Line, class: &'static str) {
        self.prims.push(Prim::Line { line: *line, class });
    }

    fn point(&mut self, p: &Point, text: &str) {
        self.prims.push(Prim::Dot { p: *p });
        self.prims.push(Prim::Label { p: *p, text: text.to_string() });
    }

    fn right(&mut self, vertex: &Point, a: &Point, b: &Point) {
        self.prims.push(Prim::RightMark { vertex: *vertex, a: *a, b: *b });
    }
}

fn params<T: DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Schema(format!("params: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Fig1 {
    space: SpaceSpec,
    #[serde(default = "d08")]
    ab: f64,
    #[serde(default = "d07")]
    ac: f64,
    #[serde(default = "d05")]
    bd: f64,
    #[serde(default = "d05")]
    ce: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Fig2 {
    space: SpaceSpec,
    #[serde(default = "d1")]
    p: f64,
    /// Angles at `G` between `GF` and the drawn lines; by default fractions
    /// of the limiting angle.
    angles: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Fig3 {
    space: SpaceSpec,
    s: f64,
    theta: f64,
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Fig4 {
    space: SpaceSpec,
    #[serde(default = "d2")]
    bd: f64,
    #[serde(default = "d06")]
    cb: f64,
    #[serde(default = "d1")]
    de: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Fig6 {
    space: SpaceSpec,
    #[serde(default = "d1")]
    base: f64,
    #[serde(default = "d03")]
    leg: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Fig7 {
    space: SpaceSpec,
    #[serde(default = "d1")]
    h0: f64,
    t: Vec<f64>,
}

fn d1() -> f64 {
    1.0
}
fn d2() -> f64 {
    2.0
}
fn d08() -> f64 {
    0.8
}
fn d07() -> f64 {
    0.7
}
fn d06() -> f64 {
    0.6
}
fn d05() -> f64 {
    0.5
}
fn d03() -> f64 {
    0.3
}

fn build_space(spec: &SpaceSpec) -> Result<SpaceForm> {
    spec.build().map_err(|e| Error::Schema(e.to_string()))
}

const FEET: [&str; 8] = ["E", "F", "G", "I", "L", "M", "N", "O"];
const MEETS: [&str; 8] = ["H", "J", "K", "P", "Q", "R", "S", "T"];

fn nth_label(names: &[&str], k: usize) -> String {
    match names.get(k) {
        Some(s) => s.to_string(),
        None => format!("{}{}", names[k % names.len()], k / names.len()),
    }
}

fn vertex_label(k: usize) -> String {
    let letter = (b'A' + (k % 26) as u8) as char;
    format!("{letter}{}", "'".repeat(k / 26))
}

/// Builds the scene of a figure. `params` carries a `space` object plus the
/// figure's own parameters.
pub fn scene(id: FigureId, params_json: &Value) -> Result<Scene> {
    match id {
        FigureId::Fig1 => fig1(params(params_json)?),
        FigureId::Fig2 => fig2(params(params_json)?),
        FigureId::Fig3 => fig3(params(params_json)?),
        FigureId::Fig4 => fig4(params(params_json)?),
        FigureId::Fig6 => fig6(params(params_json)?),
        FigureId::Fig7 => fig7(params(params_json)?, "fig7"),
        FigureId::Profile => profile(params(params_json)?),
    }
}

/// Scene and SVG in one step.
pub fn render(id: FigureId, params_json: &Value) -> Result<String> {
    scene(id, params_json)?.to_svg()
}

fn fig1(p: Fig1) -> Result<Scene> {
    let sp = build_space(&p.space)?;
    let mut sc = Scene::new(&sp, format!("fig1 ({})", sp.kind()));
    let a = sp.origin();
    let along = sp.origin_dir();
    let b = sp.exp_map(&along, p.ab);
    let c = sp.exp_map(&sp.rotate(&along, FRAC_PI_2), p.ac);
    let d = sp.exp_map(&along, p.ab + p.bd);
    let e = sp.exp_map(&sp.direction(&c, &d)?.reversed(), p.ce);
    sc.seg(&a, &d, "seg");
    sc.seg(&a, &c, "seg");
    sc.seg(&b, &c, "seg");
    sc.seg(&d, &e, "seg");
    sc.right(&a, &b, &c);
    for (pt, name) in [(&a, "A"), (&b, "B"), (&c, "C"), (&d, "D"), (&e, "E")] {
        sc.point(pt, name);
    }
    Ok(sc)
}

fn fig2(p: Fig2) -> Result<Scene> {
    let sp = build_space(&p.space)?;
    if !(p.p.is_finite() && p.p > 0.0) {
        return Err(Error::Schema("params: p must be positive".into()));
    }
    let mut sc = Scene::new(&sp, format!("fig2 ({})", sp.kind()));
    let limit = match sp.kind() {
        Kind::Hyperbolic => Some(parallelism::angle_of_parallelism(&sp, p.p)?.angle),
        _ => None,
    };
    let angles = match p.angles {
        Some(a) => a,
        None => {
            let top = limit.unwrap_or(FRAC_PI_2);
            vec![0.45 * top, 0.75 * top, 0.92 * top]
        }
    };
    let base = sp.axis();
    let f = sp.origin();
    sc.line(&base, "line");
    let (g, _) = parallelism::slanted_line(&sp, p.p, 0.0)?;
    sc.seg(&f, &g, "seg");
    let mut hits = Vec::new();
    for (k, &theta) in angles.iter().enumerate() {
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::Schema(format!("params: angle {theta} must lie in (0, π)")));
        }
        let (_, line) = parallelism::slanted_line(&sp, p.p, theta)?;
        match sp.classify_line_pair(&line, &base) {
            LinePairClass::Intersecting { point, .. } => {
                sc.seg(&g, &point, "seg");
                hits.push((point, format!("A{}", k + 1)));
            }
            _ => sc.line(&line, "miss"),
        }
    }
    if let Some(pi) = limit {
        let (_, parallel) = parallelism::slanted_line(&sp, p.p, pi)?;
        sc.line(&parallel, "aux");
    }
    let b = sp.exp_map(&base.dir, -0.6 * sp.radius());
    sc.right(&f, &b, &g);
    sc.point(&b, "B");
    sc.point(&f, "F");
    sc.point(&g, "G");
    for (pt, name) in &hits {
        sc.point(pt, name);
    }
    let far = hits
        .iter()
        .map(|(q, _)| sp.distance(&f, q))
        .fold(0.6 * sp.radius(), f64::max);
    let d = sp.exp_map(&base.dir, far + 0.5 * sp.radius());
    if sp.kind() != Kind::Spherical || far + 0.5 < FRAC_PI_2 {
        sc.point(&d, "D");
    }
    Ok(sc)
}

fn fig3(p: Fig3) -> Result<Scene> {
    let sp = build_space(&p.space)?;
    if p.n > 400 {
        return Err(Error::Schema("params: n must be at most 400 for a figure".into()));
    }
    let chain = parallelism::build_chain(&sp, p.s, p.theta, p.n)?;
    let center = parallelism::classify_chain_center(&chain)?;
    let mut sc = Scene::new(&sp, format!("fig3 ({}, {})", sp.kind(), center.tag()));
    for w in chain.vertices.windows(2) {
        sc.seg(&w[0], &w[1], "seg");
    }
    match &center {
        ChainCenter::Circle { center, radius } => {
            sc.prims.push(Prim::Circle { center: *center, radius: *radius });
            sc.point(center, "O");
        }
        ChainCenter::Equidistant { axis, distance } => {
            sc.line(axis, "aux");
            let (first, last) = (chain.vertices[0], chain.vertices[chain.n]);
            sc.prims.push(Prim::Equidistant {
                axis: *axis,
                distance: *distance,
                from: first,
                to: last,
            });
        }
        ChainCenter::Horocycle => {}
    }
    for (k, v) in chain.vertices.iter().enumerate() {
        sc.point(v, &vertex_label(k));
    }
    Ok(sc)
}

fn fig4(p: Fig4) -> Result<Scene> {
    let sp = build_space(&p.space)?;
    let q = quad::birectangular(&sp, p.bd, p.cb, p.de)?;
    let mut sc = Scene::new(&sp, format!("fig4 ({})", sp.kind()));
    let [c, b, d, e] = q.vertices;
    sc.seg(&b, &d, "seg");
    sc.seg(&b, &c, "seg");
    sc.seg(&d, &e, "seg");
    sc.seg(&e, &c, "seg");
    // G may lie beyond C on the line EC.
    let (ec, eg, gc) = (sp.distance(&e, &c), sp.distance(&e, &q.g), sp.distance(&q.g, &c));
    if eg + gc > ec * (1.0 + 1e-9) + 1e-12 {
        sc.seg(&c, &q.g, "aux");
    }
    sc.seg(&q.f, &q.g, "aux");
    sc.right(&b, &d, &c);
    sc.right(&d, &b, &e);
    sc.right(&q.f, &d, &q.g);
    for (pt, name) in [(&c, "C"), (&b, "B"), (&d, "D"), (&e, "E"), (&q.f, "F"), (&q.g, "G")] {
        sc.point(pt, name);
    }
    Ok(sc)
}

fn reflect(space: &SpaceForm, p: &Point) -> Point {
    let u = p.unit(space);
    Point::from_unit(space, Vec3::new(u[0], u[1], -u[2]))
}

fn fig6(p: Fig6) -> Result<Scene> {
    let sp = build_space(&p.space)?;
    let fold = quad::fold_lambert(&sp, p.base, p.leg)?;
    let mut sc = Scene::new(&sp, format!("fig6 ({})", sp.kind()));
    let [a, b, c, d] = fold.lambert.vertices;
    // Folding along AB: c and d are the mirror images of C and D.
    let (c2, d2) = (reflect(&sp, &c), reflect(&sp, &d));
    sc.seg(&c2, &c, "seg");
    sc.seg(&c, &d, "seg");
    sc.seg(&d, &d2, "seg");
    sc.seg(&d2, &c2, "seg");
    sc.seg(&a, &b, "aux");
    sc.right(&a, &b, &d);
    sc.right(&b, &a, &c);
    sc.right(&c, &b, &d);
    sc.right(&c2, &b, &d2);
    for (pt, name) in [(&a, "A"), (&b, "B"), (&c, "C"), (&d, "D"), (&c2, "c"), (&d2, "d")] {
        sc.point(pt, name);
    }
    Ok(sc)
}

fn fig7(p: Fig7, title: &str) -> Result<Scene> {
    let sp = build_space(&p.space)?;
    if p.t.is_empty() || p.t.len() > 64 {
        return Err(Error::Schema("params: t must hold 1 to 64 values".into()));
    }
    let mut sc = Scene::new(&sp, format!("{title} ({})", sp.kind()));
    let first = quad::erected_perpendicular(&sp, p.h0, p.t[0])?;
    let a = *first.ae.base();
    let b = *first.bh.base();
    sc.line(&first.ae, "line");
    sc.line(&first.bh, "line");
    sc.seg(&a, &b, "seg");
    sc.right(&a, &b, &sp.exp_map(&first.ae.dir, 1.0));
    sc.right(&b, &a, &sp.exp_map(&first.bh.dir, 1.0));
    let mut labels = vec![(a, "A".to_string()), (b, "B".to_string())];
    for (k, &t) in p.t.iter().enumerate() {
        let e = quad::erected_perpendicular(&sp, p.h0, t)?;
        match &e.class {
            LinePairClass::Intersecting { point, .. } => {
                sc.seg(&e.foot, point, "seg");
                labels.push((*point, nth_label(&MEETS, k)));
            }
            _ => sc.line(&e.perpendicular, "miss"),
        }
        sc.right(&e.foot, &a, &sp.exp_map(&e.perpendicular.dir, 1.0));
        labels.push((e.foot, nth_label(&FEET, k)));
    }
    for (pt, name) in &labels {
        sc.point(pt, name);
    }
    Ok(sc)
}

fn profile(p: Fig7) -> Result<Scene> {
    let sp = build_space(&p.space)?;
    let prof = quad::perpendicular_profile(&sp, p.h0, &p.t)?;
    if p.t.len() > 64 {
        return Err(Error::Schema("params: t must hold at most 64 values".into()));
    }
    let mut sc = Scene::new(&sp, format!("profile ({})", sp.kind()));
    let (base, b, upper) = quad::profile_lines(&sp, p.h0);
    let a = *base.base();
    sc.line(&base, "line");
    sc.line(&Line::new(upper), "line");
    sc.seg(&a, &b, "seg");
    sc.right(&a, &b, &sp.exp_map(&base.dir, 1.0));
    sc.right(&b, &a, &sp.exp_map(&upper, 1.0));
    let feet = ["C", "E", "G", "I", "L", "N", "P", "R"];
    let tops = ["D", "F", "H", "K", "M", "O", "Q", "S"];
    let mut labels = vec![(a, "A".to_string()), (b, "B".to_string())];
    for (k, s) in prof.samples.iter().filter(|s| s.t > 0.0).enumerate() {
        sc.seg(&s.foot, &s.point, "seg");
        if s.h > 1e-9 * sp.radius() {
            sc.right(&s.foot, &a, &s.point);
        }
        labels.push((s.foot, nth_label(&feet, k)));
        labels.push((s.point, nth_label(&tops, k)));
    }
    for (pt, name) in &labels {
        sc.point(pt, name);
    }
    Ok(sc)
}

// ---------------------------------------------------------------- projection

type P2 = (f64, f64);

struct View {
    space: SpaceForm,
    scale: f64,
    center: P2,
}

impl View {
    fn new(scene: &Scene) -> Result<View> {
        let space = scene.space;
        if space.kind() != Kind::Euclidean {
            return Ok(View {
                space,
                scale: DISK,
                center: (0.0, 0.0),
            });
        }
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |p: &Point| {
            let (x, y) = p.xy();
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        };
        for prim in &scene.prims {
            match prim {
                Prim::Segment { a, b, .. } => {
                    grow(a);
                    grow(b);
                }
                Prim::Dot { p } => grow(p),
                Prim::Line { line, .. } => grow(line.base()),
                Prim::Circle { center, radius } => {
                    let (x, y) = center.xy();
                    grow(&space.planar(x - radius, y - radius));
                    grow(&space.planar(x + radius, y + radius));
                }
                _ => {}
            }
        }
        if !(lo.0.is_finite() && hi.0.is_finite() && lo.1.is_finite() && hi.1.is_finite()) {
            return Err(Error::RenderDomain("empty or non-finite scene".into()));
        }
        let extent = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        Ok(View {
            space,
            scale: 2.0 * DISK / extent,
            center: ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0),
        })
    }

    // Model point → projection plane (unit disk for curved spaces).
    fn plane(&self, p: &Point) -> Result<P2> {
        let u = p.unit(&self.space);
        let q = match self.space.kind() {
            Kind::Hyperbolic => (u[1] / (1.0 + u[0]), u[2] / (1.0 + u[0])),
            Kind::Spherical => {
                if u[0] < -1e-9 {
                    return Err(Error::RenderDomain("point on the hidden hemisphere".into()));
                }
                (u[1], u[2])
            }
            Kind::Euclidean => p.xy(),
        };
        if !(q.0.is_finite() && q.1.is_finite()) {
            return Err(Error::RenderDomain("non-finite projection".into()));
        }
        Ok(q)
    }

    fn px(&self, q: P2) -> P2 {
        (
            SIZE / 2.0 + self.scale * (q.0 - self.center.0),
            SIZE / 2.0 - self.scale * (q.1 - self.center.1),
        )
    }

    fn screen(&self, p: &Point) -> Result<P2> {
        Ok(self.px(self.plane(p)?))
    }

    fn reach(&self) -> f64 {
        match self.space.kind() {
            Kind::Hyperbolic => 14.0 * self.space.radius(),
            Kind::Spherical => PI * self.space.radius(),
            Kind::Euclidean => 4.0 * DISK / self.scale,
        }
    }
}

fn f2(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn points_attr(pts: &[P2]) -> String {
    pts.iter()
        .map(|(x, y)| format!("{},{}", f2(*x), f2(*y)))
        .collect::<Vec<_>>()
        .join(" ")
}

// Circle through three points of the plane, if they are not collinear.
fn circumcircle(a: P2, b: P2, c: P2) -> Option<(P2, f64)> {
    let d = 2.0 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
    let scale = [a, b, c].iter().map(|p| p.0.abs().max(p.1.abs())).fold(1.0, f64::max);
    if d.abs() < 1e-9 * scale * scale {
        return None;
    }
    let n = |p: P2| p.0 * p.0 + p.1 * p.1;
    let ux = (n(a) * (b.1 - c.1) + n(b) * (c.1 - a.1) + n(c) * (a.1 - b.1)) / d;
    let uy = (n(a) * (c.0 - b.0) + n(b) * (a.0 - c.0) + n(c) * (b.0 - a.0)) / d;
    Some(((ux, uy), ((a.0 - ux).powi(2) + (a.1 - uy).powi(2)).sqrt()))
}

impl View {
    // Hyperbolic geodesic segment in the disk: an arc orthogonal to the
    // boundary, or a diameter piece.
    fn disk_geodesic(&self, a: &Point, b: &Point, class: &str) -> Result<String> {
        let (pa, pb) = (self.plane(a)?, self.plane(b)?);
        let (sa, sb) = (self.px(pa), self.px(pb));
        // Inverse of the farther point in the unit circle lies on the same circle.
        let far = if pa.0.hypot(pa.1) >= pb.0.hypot(pb.1) { pa } else { pb };
        let r2 = far.0 * far.0 + far.1 * far.1;
        let arc = (r2 > 1e-12)
            .then(|| circumcircle(pa, pb, (far.0 / r2, far.1 / r2)))
            .flatten()
            .filter(|(_, r)| *r < 1e4);
        Ok(match arc {
            Some((c, r)) => {
                let sc = self.px(c);
                let cross = (sa.0 - sc.0) * (sb.1 - sc.1) - (sa.1 - sc.1) * (sb.0 - sc.0);
                format!(
                    r#"<path class="{class}" d="M {} {} A {} {} 0 0 {} {} {}"/>"#,
                    f2(sa.0),
                    f2(sa.1),
                    f2(r * self.scale),
                    f2(r * self.scale),
                    u8::from(cross > 0.0),
                    f2(sb.0),
                    f2(sb.1)
                )
            }
            None => format!(
                r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                f2(sa.0),
                f2(sa.1),
                f2(sb.0),
                f2(sb.1)
            ),
        })
    }

    fn sampled(&self, dir: &TangentDir, from: f64, to: f64, steps: usize) -> Result<Vec<P2>> {
        (0..=steps)
            .map(|k| {
                let t = from + (to - from) * k as f64 / steps as f64;
                self.screen(&self.space.exp_map(dir, t))
            })
            .collect()
    }

    fn segment(&self, a: &Point, b: &Point, class: &str) -> Result<String> {
        match self.space.kind() {
            Kind::Hyperbolic => self.disk_geodesic(a, b, class),
            Kind::Euclidean => {
                let (sa, sb) = (self.screen(a)?, self.screen(b)?);
                Ok(format!(
                    r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    f2(sa.0),
                    f2(sa.1),
                    f2(sb.0),
                    f2(sb.1)
                ))
            }
            Kind::Spherical => {
                let len = self.space.distance(a, b);
                let pts = if len < 1e-12 * self.space.radius() {
                    vec![self.screen(a)?; 2]
                } else {
                    self.sampled(&self.space.direction(a, b)?, 0.0, len, 48)?
                };
                Ok(format!(r#"<polyline class="{class}" points="{}"/>"#, points_attr(&pts)))
            }
        }
    }

    fn full_line(&self, line: &Line, class: &str) -> Result<String> {
        let sp = &self.space;
        match sp.kind() {
            Kind::Spherical => {
                // The visible half of the great circle starts where it
                // crosses the rim going to the front.
                let u = line.base().unit(sp);
                let v = line.dir.vec;
                let start = (-u[0]).atan2(v[0]) * sp.radius();
                let pts: Vec<P2> = (0..=96)
                    .map(|k| {
                        let t = start + PI * sp.radius() * k as f64 / 96.0;
                        let q = sp.exp_map(&line.dir, t).unit(sp);
                        self.px((q[1], q[2]))
                    })
                    .collect();
                Ok(format!(r#"<polyline class="{class}" points="{}"/>"#, points_attr(&pts)))
            }
            _ => {
                // Anchor at the point of the line nearest to the view center.
                let anchor = match sp.kind() {
                    Kind::Euclidean => sp.planar(self.center.0, self.center.1),
                    _ => sp.origin(),
                };
                let (foot, _) = sp.foot_of_perpendicular(&anchor, line)?;
                let dir = sp.line_direction_at(line, &foot)?;
                let r = self.reach();
                self.segment(&sp.exp_map(&dir, -r), &sp.exp_map(&dir, r), class)
            }
        }
    }

    fn circle(&self, center: &Point, radius: f64) -> Result<String> {
        let sp = &self.space;
        let start = sp
            .tangent(center, Vec3::new(0.0, 1.0, 0.0))
            .or_else(|_| sp.tangent(center, Vec3::new(0.0, 0.0, 1.0)))?;
        let dir = |angle: f64| -> Result<TangentDir> { Ok(sp.rotate(&start, angle)) };
        match sp.kind() {
            Kind::Spherical => {
                let pts: Vec<P2> = (0..96)
                    .map(|k| self.screen(&sp.exp_map(&dir(2.0 * PI * k as f64 / 96.0)?, radius)))
                    .collect::<Result<_>>()?;
                Ok(format!(r#"<polygon class="locus" points="{}"/>"#, points_attr(&pts)))
            }
            _ => {
                let at = |k: f64| -> Result<P2> { self.plane(&sp.exp_map(&dir(k)?, radius)) };
                let (c, r) = circumcircle(at(0.0)?, at(2.0 * PI / 3.0)?, at(4.0 * PI / 3.0)?)
                    .ok_or_else(|| Error::RenderDomain("degenerate circle".into()))?;
                let s = self.px(c);
                Ok(format!(
                    r#"<circle class="locus" cx="{}" cy="{}" r="{}"/>"#,
                    f2(s.0),
                    f2(s.1),
                    f2(r * self.scale)
                ))
            }
        }
    }

    fn equidistant(&self, axis: &Line, distance: f64, from: &Point, to: &Point) -> Result<String> {
        let sp = &self.space;
        let (f0, _) = sp.foot_of_perpendicular(from, axis)?;
        let (f1, _) = sp.foot_of_perpendicular(to, axis)?;
        let dir = sp.line_direction_at(axis, &f0)?;
        let len = sp.distance(&f0, &f1);
        // Orient the walk from the first foot to the second.
        let sign = if sp.distance(&sp.exp_map(&dir, len), &f1) < sp.distance(&sp.exp_map(&dir, -len), &f1) {
            1.0
        } else {
            -1.0
        };
        let side = if sp.signed_height(from, axis) >= 0.0 { 1.0 } else { -1.0 };
        let pts: Vec<P2> = (0..=64)
            .map(|k| {
                let t = sign * len * k as f64 / 64.0;
                let along = sp.transport(&dir, t);
                let up = sp.rotate(&along, side * FRAC_PI_2);
                self.screen(&sp.exp_map(&up, distance))
            })
            .collect::<Result<_>>()?;
        Ok(format!(r#"<polyline class="locus" points="{}"/>"#, points_attr(&pts)))
    }

    fn right_mark(&self, v: &Point, a: &Point, b: &Point) -> Result<String> {
        let sp = &self.space;
        let step = 1e-3 * sp.radius();
        let o = self.screen(v)?;
        let unit = |p: &Point| -> Result<P2> {
            let q = self.screen(&sp.exp_map(&sp.direction(v, p)?, step))?;
            let (dx, dy) = (q.0 - o.0, q.1 - o.1);
            let n = dx.hypot(dy);
            if !(n > 0.0) {
                return Err(Error::RenderDomain("right-angle mark collapses".into()));
            }
            Ok((dx / n, dy / n))
        };
        let (ua, ub) = (unit(a)?, unit(b)?);
        let pts = [
            (o.0 + MARK * ua.0, o.1 + MARK * ua.1),
            (o.0 + MARK * (ua.0 + ub.0), o.1 + MARK * (ua.1 + ub.1)),
            (o.0 + MARK * ub.0, o.1 + MARK * ub.1),
        ];
        Ok(format!(r#"<polyline class="mark" points="{}"/>"#, points_attr(&pts)))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Scene {
    pub fn to_svg(&self) -> Result<String> {
        let view = View::new(self)?;
        let mut body = Vec::with_capacity(self.prims.len());
        for prim in &self.prims {
            body.push(match prim {
                Prim::Segment { a, b, class } => view.segment(a, b, class)?,
                Prim::Line { line, class } => view.full_line(line, class)?,
                Prim::Circle { center, radius } => view.circle(center, *radius)?,
                Prim::Equidistant { axis, distance, from, to } => {
                    view.equidistant(axis, *distance, from, to)?
                }
                Prim::Dot { p } => {
                    let s = view.screen(p)?;
                    format!(r#"<circle class="pt" cx="{}" cy="{}" r="2.5"/>"#, f2(s.0), f2(s.1))
                }
                Prim::Label { p, text } => {
                    let s = view.screen(p)?;
                    format!(
                        r#"<text x="{}" y="{}">{}</text>"#,
                        f2(s.0 + 5.0),
                        f2(s.1 - 5.0),
                        escape(text)
                    )
                }
                Prim::RightMark { vertex, a, b } => view.right_mark(vertex, a, b)?,
            });
        }
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(out, "<title>{}</title>", escape(&self.title));
        out.push_str(
            "<style>path,line,polyline,polygon,circle{fill:none;stroke:#222;stroke-width:1.4}\
             .aux{stroke:#777;stroke-dasharray:5 4}.miss{stroke:#b33;stroke-dasharray:2 3}\
             .locus{stroke:#27a}.mark{stroke-width:1}circle.pt{fill:#222;stroke:none}\
             .rim{stroke:#bbb}text{font:13px serif;fill:#000}</style>\n",
        );
        if self.space.kind() != Kind::Euclidean {
            let _ = writeln!(
                out,
                r#"<circle class="rim" cx="{}" cy="{}" r="{}"/>"#,
                f2(SIZE / 2.0),
                f2(SIZE / 2.0),
                f2(DISK)
            );
        }
        out.push_str("<g id=\"scene\">\n");
        for el in body {
            out.push_str(&el);
            out.push('\n');
        }
        out.push_str("</g>\n</svg>\n");
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn hexagon_has_circumcircle() {
        let sc = scene(
            FigureId::Fig3,
            &json!({"space": {"kind": "euclidean"}, "s": 1, "theta": 2.0 * PI / 3.0, "n": 6}),
        )
        .unwrap();
        assert!(sc.prims.iter().any(|p| matches!(p, Prim::Circle { .. })));
        let svg = sc.to_svg().unwrap();
        assert!(svg.contains("<circle class=\"locus\""));
    }

    #[test]
    fn fig7_misses_past_threshold() {
        let sc = scene(
            FigureId::Fig7,
            &json!({"space": {"kind": "hyperbolic", "radius": 1}, "h0": 1, "t": [0.4, 0.7, 0.85, 1.2]}),
        )
        .unwrap();
        let misses = sc
            .prims
            .iter()
            .filter(|p| matches!(p, Prim::Line { class: "miss", .. }))
            .count();
        assert_eq!(misses, 2);
        sc.to_svg().unwrap();
    }

    #[test]
    fn hidden_hemisphere_is_refused() {
        let e = render(
            FigureId::Fig1,
            &json!({"space": {"kind": "spherical", "radius": 1}, "ab": 1.5, "bd": 1.2}),
        );
        assert!(matches!(e, Err(Error::RenderDomain(_))), "{e:?}");
    }
}
