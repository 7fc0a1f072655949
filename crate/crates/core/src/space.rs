//! Embedded models of the three constant-curvature planes.
//!
//! All three geometries live in R³ with the bilinear form
//!
//! ```text
//! B(x, y) = x0·y0 + e·(x1·y1 + x2·y2),   e ∈ {+1, 0, −1}
//! ```
//!
//! * sphere (`e = +1`): points with `B(x, x) = R²`;
//! * Euclidean plane (`e = 0`): homogeneous points `(1, x, y)`;
//! * hyperbolic plane (`e = −1`): the upper sheet of `B(x, x) = R²`.
//!
//! Lines are planes through the origin of R³ and are handled as covectors `ℓ`
//! (`x` lies on the line iff `ℓ·x = 0`). With that convention intersection is a
//! cross product and the signed height of a point above a line is `S(h/R) = ℓ·x̂`
//! in every model, where `(C, S)` is `(cos, sin)`, `(1, t)` or `(cosh, sinh)`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Default relative tolerance used by postcondition checks.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default horizon (in units of `R`) beyond which an intersection is treated
/// as lying at infinity.
pub const DEFAULT_HORIZON: f64 = 1e3;

// Threshold on B(m, m) for a Euclid-unit intersection vector m; below it the
// pair of hyperbolic lines is reported as asymptotic.
const NULL_TOL: f64 = 64.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Spherical, Kind::Euclidean, Kind::Hyperbolic];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Spherical => "spherical",
            Kind::Euclidean => "euclidean",
            Kind::Hyperbolic => "hyperbolic",
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Geometry selector: curvature sign and radius, plus numerical settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceForm {
    kind: Kind,
    radius: f64,
    tol: f64,
    horizon: f64,
}

impl SpaceForm {
    pub fn new(kind: Kind, radius: f64) -> Result<Self> {
        if kind != Kind::Euclidean && !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidSpace(format!(
                "radius must be finite and positive, got {radius}"
            )));
        }
        let radius = if kind == Kind::Euclidean { 1.0 } else { radius };
        Ok(SpaceForm {
            kind,
            radius,
            tol: DEFAULT_TOL,
            horizon: DEFAULT_HORIZON,
        })
    }

    /// Sphere of radius `r`. Panics if `r` is not finite and positive.
    pub fn spherical(r: f64) -> Self {
        Self::new(Kind::Spherical, r).expect("invalid sphere radius")
    }

    pub fn euclidean() -> Self {
        Self::new(Kind::Euclidean, 1.0).unwrap()
    }

    /// Hyperbolic plane of curvature `-1/r²`. Panics if `r` is not finite and positive.
    pub fn hyperbolic(r: f64) -> Self {
        Self::new(Kind::Hyperbolic, r).expect("invalid hyperbolic radius")
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Radius `R`; always 1 for the Euclidean plane, where it plays no role.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn curvature(&self) -> f64 {
        self.sign() / (self.radius * self.radius)
    }

    /// Sign of the curvature as a float: `+1`, `0` or `-1`.
    pub fn sign(&self) -> f64 {
        match self.kind {
            Kind::Spherical => 1.0,
            Kind::Euclidean => 0.0,
            Kind::Hyperbolic => -1.0,
        }
    }

    pub fn is_curved(&self) -> bool {
        self.kind != Kind::Euclidean
    }

    /// The model bilinear form on unit-scaled vectors.
    pub fn form(&self, x: &Vec3, y: &Vec3) -> f64 {
        x[0] * y[0] + self.sign() * (x[1] * y[1] + x[2] * y[2])
    }

    /// Inner product on tangent vectors (and on line covectors).
    pub fn tangent_dot(&self, a: &Vec3, b: &Vec3) -> f64 {
        self.sign() * a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn tangent_norm(&self, a: &Vec3) -> f64 {
        self.tangent_dot(a, a).max(0.0).sqrt()
    }

    /// `C(x)`: cos, 1 or cosh of a reduced length.
    pub fn cos_fn(&self, x: f64) -> f64 {
        match self.kind {
            Kind::Spherical => x.cos(),
            Kind::Euclidean => 1.0,
            Kind::Hyperbolic => x.cosh(),
        }
    }

    /// `S(x)`: sin, identity or sinh of a reduced length.
    pub fn sin_fn(&self, x: f64) -> f64 {
        match self.kind {
            Kind::Spherical => x.sin(),
            Kind::Euclidean => x,
            Kind::Hyperbolic => x.sinh(),
        }
    }

    /// Length divided by `R`.
    pub fn reduce(&self, len: f64) -> f64 {
        len / self.radius
    }

    // Applies `T = diag(e, 1, 1)`, turning a line covector into its unit normal.
    pub(crate) fn tangent_metric(&self, a: &Vec3) -> Vec3 {
        Vec3::new(self.sign() * a[0], a[1], a[2])
    }

    pub fn origin(&self) -> Point {
        Point::from_unit(self, Vec3::new(1.0, 0.0, 0.0))
    }

    /// Unit direction along the first axis at the origin.
    pub fn origin_dir(&self) -> TangentDir {
        TangentDir {
            base: self.origin(),
            vec: Vec3::new(0.0, 1.0, 0.0),
        }
    }

    /// The line through the origin along the first axis.
    pub fn axis(&self) -> Line {
        Line::new(self.origin_dir())
    }

    /// Point from model coordinates: 3 embedding coordinates for curved
    /// spaces, `(x, y)` for the Euclidean plane.
    pub fn point(&self, coords: &[f64]) -> Result<Point> {
        match (self.kind, coords.len()) {
            (Kind::Euclidean, 2) => Ok(self.planar(coords[0], coords[1])),
            (Kind::Euclidean, 3) if (coords[0] - 1.0).abs() < self.tol => {
                Ok(self.planar(coords[1], coords[2]))
            }
            (Kind::Spherical | Kind::Hyperbolic, 3) => {
                let raw = Vec3::new(coords[0], coords[1], coords[2]);
                let p = Point { raw };
                if !raw.iter().all(|c| c.is_finite()) {
                    return Err(Error::OffModel("non-finite coordinate".into()));
                }
                let u = p.unit(self);
                let q = self.form(&u, &u);
                if (q - 1.0).abs() > self.tol.max(1e-12) * u.norm_squared().max(1.0) {
                    return Err(Error::OffModel(format!("B(x,x)/R² = {q}")));
                }
                if self.kind == Kind::Hyperbolic && raw[0] <= 0.0 {
                    return Err(Error::OffModel("point on the lower sheet".into()));
                }
                Ok(Point::from_unit(self, self.renormalize(&u).unwrap_or(u)))
            }
            _ => Err(Error::OffModel(format!(
                "{} coordinates given for a {} point",
                coords.len(),
                self.kind
            ))),
        }
    }

    /// Euclidean point `(x, y)`. Only meaningful for the Euclidean plane.
    pub fn planar(&self, x: f64, y: f64) -> Point {
        Point {
            raw: Vec3::new(1.0, x, y),
        }
    }

    /// Presentation coordinates: 3 for curved spaces, `(x, y)` for the plane.
    pub fn coords(&self, p: &Point) -> Vec<f64> {
        match self.kind {
            Kind::Euclidean => vec![p.raw[1], p.raw[2]],
            _ => p.raw.iter().copied().collect(),
        }
    }

    /// Whether `p` satisfies the model invariant.
    pub fn contains(&self, p: &Point) -> bool {
        let u = p.unit(self);
        let q = self.form(&u, &u);
        let ok = (q - 1.0).abs() <= self.tol * u.norm_squared().max(1.0);
        match self.kind {
            Kind::Hyperbolic => ok && u[0] > 0.0,
            _ => ok,
        }
    }

    /// Projects a unit-scale vector back onto the model surface. For the
    /// sphere the sign of `x` is kept; elsewhere the representative with
    /// positive first coordinate is chosen.
    pub(crate) fn renormalize(&self, x: &Vec3) -> Option<Vec3> {
        let q = self.form(x, x);
        if self.kind == Kind::Hyperbolic {
            // Far from the origin B(x, x) is all cancellation; when x is unit
            // within that noise keep its spatial part and rebuild x0.
            let size = x.norm_squared();
            if !size.is_finite() {
                return None;
            }
            let mut y = if (q - 1.0).abs() <= NULL_TOL * size {
                *x
            } else if q > 0.0 {
                x / q.sqrt()
            } else {
                return None;
            };
            if y[0] < 0.0 {
                y = -y;
            }
            y[0] = (1.0 + y[1] * y[1] + y[2] * y[2]).sqrt();
            return Some(y);
        }
        if !(q > 0.0) || !q.is_finite() {
            return None;
        }
        let mut y = x / q.sqrt();
        if self.kind != Kind::Spherical && y[0] < 0.0 {
            y = -y;
        }
        Some(y)
    }

    // Distance between unit-scale points, in reduced units.
    fn reduced_distance(&self, u: &Vec3, w: &Vec3) -> f64 {
        match self.kind {
            Kind::Spherical => 2.0 * (u - w).norm().atan2((u + w).norm()),
            Kind::Euclidean => (u[1] - w[1]).hypot(u[2] - w[2]),
            Kind::Hyperbolic => {
                let b = self.form(u, w);
                if b < 1.5 {
                    let d = u - w;
                    let chord2 = (-self.form(&d, &d)).max(0.0);
                    2.0 * (chord2.sqrt() / 2.0).asinh()
                } else {
                    b.acosh()
                }
            }
        }
    }

    /// Model distance between two points.
    pub fn distance(&self, p: &Point, q: &Point) -> f64 {
        self.radius * self.reduced_distance(&p.unit(self), &q.unit(self))
    }

    /// Walks the geodesic from `dir.base` in direction `dir` for arc length
    /// `t` (negative `t` walks backwards). The result is renormalized onto the
    /// model surface.
    pub fn exp_map(&self, dir: &TangentDir, t: f64) -> Point {
        let u = dir.base.unit(self);
        let s = self.reduce(t);
        let x = u * self.cos_fn(s) + dir.vec * self.sin_fn(s);
        Point::from_unit(self, self.renormalize(&x).unwrap_or(x))
    }

    /// Direction of the geodesic at arc length `t` from `dir.base`.
    pub fn transport(&self, dir: &TangentDir, t: f64) -> TangentDir {
        let u = dir.base.unit(self);
        let s = self.reduce(t);
        let (c, sn) = (self.cos_fn(s), self.sin_fn(s));
        let base = self.exp_map(dir, t);
        let bu = base.unit(self);
        let v = u * (-self.sign() * sn) + dir.vec * c;
        TangentDir {
            base,
            vec: self.tangent_unit(&bu, &v).unwrap_or(v),
        }
    }

    // Projects `w` into the tangent space at unit point `u` and normalizes it.
    fn tangent_unit(&self, u: &Vec3, w: &Vec3) -> Option<Vec3> {
        let v = match self.kind {
            Kind::Euclidean => Vec3::new(0.0, w[1], w[2]),
            _ => w - u * self.form(u, w),
        };
        let n = self.tangent_norm(&v);
        (n > 0.0 && n.is_finite()).then(|| v / n)
    }

    /// Unit tangent at `p` pointing along the geodesic towards `q`.
    pub fn direction(&self, p: &Point, q: &Point) -> Result<TangentDir> {
        let u = p.unit(self);
        let w = q.unit(self);
        let v = match self.kind {
            Kind::Euclidean => w - u,
            _ => w - u * self.form(&u, &w),
        };
        let n = self.tangent_norm(&v);
        // Relative scale: coincident points and sphere antipodes have no direction.
        let scale = match self.kind {
            Kind::Spherical => (u + w).norm().min(1.0),
            _ => 1.0,
        };
        if !(n > self.tol * 1e-3) || scale < self.tol * 1e-3 {
            return Err(Error::DegenerateAngle);
        }
        Ok(TangentDir {
            base: *p,
            vec: v / n,
        })
    }

    /// Unit tangent at `base` from an arbitrary vector (projected onto the
    /// tangent plane first).
    pub fn tangent(&self, base: &Point, v: Vec3) -> Result<TangentDir> {
        let u = base.unit(self);
        self.tangent_unit(&u, &v)
            .map(|vec| TangentDir { base: *base, vec })
            .ok_or(Error::DegenerateAngle)
    }

    /// Unsigned angle in `[0, π]` between two tangent vectors at the same point.
    pub fn angle_between(&self, a: &TangentDir, b: &TangentDir) -> f64 {
        let d = a.vec - b.vec;
        let s = a.vec + b.vec;
        2.0 * self.tangent_norm(&d).atan2(self.tangent_norm(&s))
    }

    /// Angle at `vertex` between the geodesics towards `p` and `q`.
    pub fn angle_at(&self, vertex: &Point, p: &Point, q: &Point) -> Result<f64> {
        let a = self.direction(vertex, p)?;
        let b = self.direction(vertex, q)?;
        Ok(self.angle_between(&a, &b))
    }

    /// Rotates a tangent direction by `angle` towards its left normal.
    pub fn rotate(&self, dir: &TangentDir, angle: f64) -> TangentDir {
        let n = self.left_normal(dir);
        let v = dir.vec * angle.cos() + n * angle.sin();
        let u = dir.base.unit(self);
        TangentDir {
            base: dir.base,
            vec: self.tangent_unit(&u, &v).unwrap_or(v),
        }
    }

    /// Unit tangent obtained by turning `dir` a quarter turn to the left.
    pub fn left_normal(&self, dir: &TangentDir) -> Vec3 {
        let u = dir.base.unit(self);
        self.tangent_metric(&u.cross(&dir.vec))
    }

    /// Covector of a line, normalized so that `ℓ·x̂ = S(h/R)` for the signed
    /// height `h` of `x` (positive on the left of the line's direction).
    pub fn covector(&self, line: &Line) -> Vec3 {
        let u = line.base().unit(self);
        let l = u.cross(&line.dir.vec);
        self.normalize_covector(&l).unwrap_or(l)
    }

    /// Unit direction of `line` at a point `p` on it, oriented like the line.
    pub fn line_direction_at(&self, line: &Line, p: &Point) -> Result<TangentDir> {
        let l = self.covector(line);
        let u = p.unit(self);
        let gu = Vec3::new(u[0], self.sign() * u[1], self.sign() * u[2]);
        let d = self.tangent(p, l.cross(&gu))?;
        let same = self.covector(&Line::new(d)).dot(&l) > 0.0;
        Ok(if same { d } else { d.reversed() })
    }

    /// Angle at `p` between the oriented lines `a` and `b`, both through `p`.
    /// Only the covectors enter, so the result stays accurate at points far
    /// from the origin as long as the lines pass near it.
    pub fn line_angle_at(&self, p: &Point, a: &Line, b: &Line) -> f64 {
        let (la, lb) = (self.covector(a), self.covector(b));
        let cos = self.tangent_dot(&la, &lb);
        // la × lb = ±sin(angle)·p for unit covectors.
        let m = la.cross(&lb);
        let u = p.unit(self);
        let k = u.iamax();
        (m[k] / u[k]).abs().atan2(cos)
    }

    fn normalize_covector(&self, l: &Vec3) -> Option<Vec3> {
        let n = self.tangent_dot(l, l);
        (n > 0.0 && n.is_finite()).then(|| l / n.sqrt())
    }

    // Line from a covector, based at the point of the line nearest to `near`.
    fn line_from_covector(&self, l: &Vec3, near: &Point) -> Result<Line> {
        let l = self.normalize_covector(l).ok_or(Error::DegenerateAngle)?;
        let (foot, _) = self.foot_on_covector(near, &l)?;
        let f = foot.unit(self);
        // ℓ × (J f) is tangent at f with f × v = ℓ, preserving orientation.
        let jf = Vec3::new(f[0], self.sign() * f[1], self.sign() * f[2]);
        let vec = l.cross(&jf);
        let dir = self.tangent(&foot, vec)?;
        Ok(Line::new(dir))
    }

    /// Signed height of `p` above `line` (positive on the left).
    pub fn signed_height(&self, p: &Point, line: &Line) -> f64 {
        let s = self.covector(line).dot(&p.unit(self));
        self.radius
            * match self.kind {
                Kind::Spherical => s.clamp(-1.0, 1.0).asin(),
                Kind::Euclidean => s,
                Kind::Hyperbolic => s.asinh(),
            }
    }

    fn foot_on_covector(&self, p: &Point, l: &Vec3) -> Result<(Point, f64)> {
        let u = p.unit(self);
        let s = l.dot(&u);
        let n = self.tangent_metric(l);
        let f = u - n * s;
        let h = match self.kind {
            Kind::Spherical => {
                let c = f.norm();
                if c < self.tol {
                    return Err(Error::Pole);
                }
                s.abs().atan2(c)
            }
            Kind::Euclidean => s.abs(),
            Kind::Hyperbolic => s.abs().asinh(),
        };
        let f = self.renormalize(&f).ok_or(Error::Pole)?;
        Ok((Point::from_unit(self, f), self.radius * h))
    }

    /// Foot of the perpendicular from `p` to `line` and its length.
    pub fn foot_of_perpendicular(&self, p: &Point, line: &Line) -> Result<(Point, f64)> {
        self.foot_on_covector(p, &self.covector(line))
    }

    pub fn on_line(&self, p: &Point, line: &Line) -> bool {
        self.covector(line).dot(&p.unit(self)).abs() <= self.tol
    }

    /// The line through `q` perpendicular to `line` (direction: left normal).
    pub fn perpendicular_at(&self, line: &Line, q: &Point) -> Result<Line> {
        let l = self.covector(line);
        let res = l.dot(&q.unit(self));
        if res.abs() > self.tol {
            return Err(Error::OffLine(res));
        }
        let dir = self.tangent(q, self.tangent_metric(&l))?;
        Ok(Line::new(dir))
    }

    /// Geodesic midpoint of `p` and `q`.
    pub fn midpoint(&self, p: &Point, q: &Point) -> Result<Point> {
        let s = p.unit(self) + q.unit(self);
        if self.kind == Kind::Spherical && s.norm() < self.tol {
            return Err(Error::Antipodal);
        }
        let m = self.renormalize(&s).ok_or(Error::Antipodal)?;
        Ok(Point::from_unit(self, m))
    }

    pub fn line_through(&self, p: &Point, q: &Point) -> Result<Line> {
        Ok(Line::new(self.direction(p, q)?))
    }

    /// Perpendicular bisector of the segment `pq`, based at its midpoint.
    pub fn perpendicular_bisector(&self, p: &Point, q: &Point) -> Result<Line> {
        let m = self.midpoint(p, q)?;
        let towards = self.direction(&m, q)?;
        Ok(Line::new(self.rotate(&towards, std::f64::consts::FRAC_PI_2)))
    }

    /// Classifies a pair of lines as intersecting, ultraparallel (with their
    /// common perpendicular), asymptotic or coincident.
    pub fn classify_line_pair(&self, l1: &Line, l2: &Line) -> LinePairClass {
        let a = self.covector(l1);
        let b = self.covector(l2);
        let base2 = l2.base().unit(self);
        if a.dot(&base2).abs() <= self.tol && a.dot(&l2.dir.vec).abs() <= self.tol {
            return LinePairClass::Coincident;
        }
        let m = a.cross(&b);
        let mnorm = m.norm();
        if mnorm == 0.0 {
            return LinePairClass::Coincident;
        }
        let mh = m / mnorm;
        let q = self.form(&mh, &mh);
        let crossing = |x: Vec3| {
            let point = Point::from_unit(self, x);
            let angle = self.angle_between(
                &TangentDir {
                    base: point,
                    vec: self.tangent_metric(&a),
                },
                &TangentDir {
                    base: point,
                    vec: self.tangent_metric(&b),
                },
            );
            LinePairClass::Intersecting { point, angle }
        };
        match self.kind {
            Kind::Spherical => {
                let u1 = l1.base().unit(self);
                let x = if mh.dot(&u1) >= 0.0 { mh } else { -mh };
                crossing(x)
            }
            Kind::Euclidean => {
                // mh0 is the sine of the crossing angle.
                if mh[0].abs() <= self.tol {
                    let (foot1, gap) = self
                        .foot_on_covector(l2.base(), &a)
                        .expect("Euclidean feet always exist");
                    if gap <= self.tol {
                        return LinePairClass::Coincident;
                    }
                    return LinePairClass::CommonPerpendicular {
                        foot1,
                        foot2: *l2.base(),
                        gap,
                    };
                }
                crossing(mh / mh[0])
            }
            Kind::Hyperbolic => {
                if q > NULL_TOL {
                    let x = self.renormalize(&mh).expect("timelike");
                    let point = Point::from_unit(self, x);
                    if self.distance(l1.base(), &point) > self.horizon * self.radius {
                        return LinePairClass::Asymptotic;
                    }
                    crossing(x)
                } else if q < -NULL_TOL {
                    let perp = Vec3::new(mh[0], -mh[1], -mh[2]);
                    let f1 = self.renormalize(&a.cross(&perp));
                    let f2 = self.renormalize(&b.cross(&perp));
                    let (Some(f1), Some(f2)) = (f1, f2) else {
                        return LinePairClass::Asymptotic;
                    };
                    let foot1 = Point::from_unit(self, f1);
                    let foot2 = Point::from_unit(self, f2);
                    let gap = self.distance(&foot1, &foot2);
                    let far = self.distance(l1.base(), &foot1) > self.horizon * self.radius;
                    if gap < self.tol {
                        if far {
                            return LinePairClass::Asymptotic;
                        }
                        let point = self.midpoint(&foot1, &foot2).unwrap_or(foot1);
                        return crossing(point.unit(self));
                    }
                    LinePairClass::CommonPerpendicular { foot1, foot2, gap }
                } else {
                    LinePairClass::Asymptotic
                }
            }
        }
    }

    /// Intersection point of two lines, if they cross.
    pub fn intersect(&self, l1: &Line, l2: &Line) -> Option<Point> {
        match self.classify_line_pair(l1, l2) {
            LinePairClass::Intersecting { point, .. } => Some(point),
            _ => None,
        }
    }

    /// The common perpendicular of two ultraparallel lines, based at its foot
    /// on `l1`.
    pub fn common_perpendicular(&self, l1: &Line, l2: &Line) -> Option<Line> {
        match self.classify_line_pair(l1, l2) {
            LinePairClass::CommonPerpendicular { foot1, foot2, .. } => {
                self.line_through(&foot1, &foot2).ok()
            }
            _ => None,
        }
    }

    /// Line with the given covector, based near `near`.
    pub fn line_with_covector(&self, l: &Vec3, near: &Point) -> Result<Line> {
        self.line_from_covector(l, near)
    }
}

/// A point of the model, stored as its embedding (curved spaces) or
/// homogeneous `(1, x, y)` (Euclidean) coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    raw: Vec3,
}

impl Point {
    pub(crate) fn from_unit(space: &SpaceForm, u: Vec3) -> Self {
        match space.kind {
            Kind::Euclidean => Point {
                raw: Vec3::new(1.0, u[1] / u[0], u[2] / u[0]),
            },
            _ => Point {
                raw: u * space.radius,
            },
        }
    }

    /// Unit-scaled coordinates (`B(u, u) = 1`).
    pub fn unit(&self, space: &SpaceForm) -> Vec3 {
        match space.kind {
            Kind::Euclidean => self.raw,
            _ => self.raw / space.radius,
        }
    }

    pub fn raw(&self) -> [f64; 3] {
        [self.raw[0], self.raw[1], self.raw[2]]
    }

    /// Euclidean coordinates; only meaningful for planar points.
    pub fn xy(&self) -> (f64, f64) {
        (self.raw[1], self.raw[2])
    }
}

/// Unit tangent direction at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentDir {
    pub base: Point,
    pub vec: Vec3,
}

impl TangentDir {
    pub fn reversed(&self) -> TangentDir {
        TangentDir {
            base: self.base,
            vec: -self.vec,
        }
    }
}

/// A complete geodesic, given by a point on it and a unit direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub dir: TangentDir,
}

impl Line {
    pub fn new(dir: TangentDir) -> Self {
        Line { dir }
    }

    pub fn base(&self) -> &Point {
        &self.dir.base
    }

    pub fn reversed(&self) -> Line {
        Line::new(self.dir.reversed())
    }
}

/// Relative position of two lines.
#[derive(Clone, Debug, PartialEq)]
pub enum LinePairClass {
    /// The lines cross at `point` with unsigned angle `angle` between their
    /// directions.
    Intersecting { point: Point, angle: f64 },
    /// Disjoint lines; `gap` is the length of the common perpendicular
    /// `foot1`–`foot2` and the minimal distance between the lines.
    CommonPerpendicular { foot1: Point, foot2: Point, gap: f64 },
    /// Disjoint hyperbolic lines meeting at infinity.
    Asymptotic,
    Coincident,
}

impl LinePairClass {
    pub fn tag(&self) -> &'static str {
        match self {
            LinePairClass::Intersecting { .. } => "intersecting",
            LinePairClass::CommonPerpendicular { .. } => "common-perpendicular",
            LinePairClass::Asymptotic => "asymptotic",
            LinePairClass::Coincident => "coincident",
        }
    }

    pub fn is_intersecting(&self) -> bool {
        matches!(self, LinePairClass::Intersecting { .. })
    }
}

/// An orientation-preserving isometry of the model, as a 3×3 matrix acting on
/// unit-scaled coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Motion {
    m: Matrix3<f64>,
}

impl Motion {
    pub fn identity() -> Self {
        Motion {
            m: Matrix3::identity(),
        }
    }

    /// Rotation by `angle` about the origin.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Motion {
            m: Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
        }
    }

    /// Translation by `t` along the first axis.
    pub fn translation(space: &SpaceForm, t: f64) -> Self {
        let x = space.reduce(t);
        let (c, s) = (space.cos_fn(x), space.sin_fn(x));
        let e = space.sign();
        Motion {
            m: Matrix3::new(c, -e * s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
        }
    }

    /// The motion carrying the origin frame `(origin, first axis)` to `dir`.
    pub fn carrying(space: &SpaceForm, dir: &TangentDir) -> Self {
        let u = dir.base.unit(space);
        let n = space.left_normal(dir);
        Motion {
            m: Matrix3::from_columns(&[u, dir.vec, n]),
        }
    }

    pub fn then(&self, next: &Motion) -> Motion {
        Motion { m: next.m * self.m }
    }

    pub fn inverse(&self) -> Option<Motion> {
        self.m.try_inverse().map(|m| Motion { m })
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn apply(&self, space: &SpaceForm, p: &Point) -> Point {
        let x = self.m * p.unit(space);
        Point::from_unit(space, space.renormalize(&x).unwrap_or(x))
    }

    pub fn apply_dir(&self, space: &SpaceForm, d: &TangentDir) -> TangentDir {
        let base = self.apply(space, &d.base);
        let v = self.m * d.vec;
        let u = base.unit(space);
        TangentDir {
            base,
            vec: space.tangent_unit(&u, &v).unwrap_or(v),
        }
    }

    pub fn apply_line(&self, space: &SpaceForm, l: &Line) -> Line {
        Line::new(self.apply_dir(space, &l.dir))
    }
}
