//! Angle of parallelism and equilateral equiangular polygon chains.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::space::{Kind, Line, LinePairClass, Motion, Point, SpaceForm, TangentDir, Vec3};

/// Result of [`angle_of_parallelism`]. In the Euclidean plane every angle
/// short of a right angle meets the base line, so the value is `π/2` and
/// `euclidean` is set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParallelAngle {
    pub angle: f64,
    pub euclidean: bool,
}

/// The line through `G` (at height `p` above `F`, the origin) making angle
/// `theta` with `GF`, turned towards the positive side of the base line.
pub fn slanted_line(space: &SpaceForm, p: f64, theta: f64) -> Result<(Point, Line)> {
    let up = space.rotate(&space.origin_dir(), FRAC_PI_2);
    let g = space.exp_map(&up, p);
    let down = space.transport(&up, p).reversed();
    Ok((g, Line::new(space.rotate(&down, theta))))
}

/// Supremum of the angles `θ` at `G` for which the slanted line still meets
/// the base, found by 60 bisection steps on the intersection predicate.
pub fn angle_of_parallelism(space: &SpaceForm, p: f64) -> Result<ParallelAngle> {
    if !(p.is_finite() && p >= 0.0) {
        return Err(Error::Domain(format!("p = {p} must be non-negative")));
    }
    match space.kind() {
        Kind::Spherical => {
            return Err(Error::NotApplicable(
                "every line meets every other line on the sphere".into(),
            ))
        }
        Kind::Euclidean => {
            return Ok(ParallelAngle {
                angle: FRAC_PI_2,
                euclidean: true,
            })
        }
        Kind::Hyperbolic => {}
    }
    if p == 0.0 {
        return Ok(ParallelAngle {
            angle: FRAC_PI_2,
            euclidean: false,
        });
    }
    let base = space.axis();
    let meets = |theta: f64| -> Result<bool> {
        let (_, l) = slanted_line(space, p, theta)?;
        Ok(space.classify_line_pair(&l, &base).is_intersecting())
    };
    let (mut lo, mut hi) = (0.0, FRAC_PI_2);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if meets(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ParallelAngle {
        angle: 0.5 * (lo + hi),
        euclidean: false,
    })
}

/// `Π(p) = 2·atan(exp(−p/R))`.
pub fn parallelism_closed_form(space: &SpaceForm, p: f64) -> f64 {
    2.0 * (-space.reduce(p)).exp().atan()
}

/// Angle `AGF` with `A` on the base at distance `x` from `F`.
pub fn measured_angle(space: &SpaceForm, p: f64, x: f64) -> Result<f64> {
    let (g, _) = slanted_line(space, p, 0.0)?;
    let a = space.exp_map(&space.origin_dir(), x);
    space.angle_at(&g, &a, &space.origin())
}

/// A chain of `n` congruent segments of length `s` meeting at congruent
/// interior angles `theta`; `vertices` has `n + 1` entries, the middle one
/// (index `n / 2`) at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonChain {
    pub space: SpaceForm,
    pub s: f64,
    pub theta: f64,
    pub n: usize,
    pub vertices: Vec<Point>,
    /// Advance `s`, then turn left by `π − theta`.
    pub generator: Motion,
}

impl PolygonChain {
    /// Largest deviation of a segment length from `s` and of an interior
    /// angle from `theta`.
    pub fn residual(&self) -> Result<f64> {
        let sp = &self.space;
        let mut worst: f64 = 0.0;
        for w in self.vertices.windows(2) {
            worst = worst.max((sp.distance(&w[0], &w[1]) - self.s).abs());
        }
        for w in self.vertices.windows(3) {
            worst = worst.max((sp.angle_at(&w[1], &w[0], &w[2])? - self.theta).abs());
        }
        Ok(worst)
    }
}

pub fn build_chain(space: &SpaceForm, s: f64, theta: f64, n: usize) -> Result<PolygonChain> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!("s = {s} must be positive")));
    }
    if space.kind() == Kind::Spherical && s >= PI * space.radius() {
        return Err(Error::Domain(format!("s = {s} must be below πR")));
    }
    if !(theta > 0.0 && theta <= PI) {
        return Err(Error::Domain(format!("theta = {theta} must lie in (0, π]")));
    }
    if n < 3 {
        return Err(Error::Domain(format!("n = {n} must be at least 3")));
    }
    // Composed from exact rotations and translations at the origin. Building
    // them from transported frames loses digits at the far end of a side.
    let generator = Motion::rotation(PI - theta).then(&Motion::translation(space, s));
    // The same chain walked backwards turns right.
    let back = Motion::rotation(-PI)
        .then(&Motion::translation(space, s))
        .then(&Motion::rotation(theta));
    let mid = n / 2;
    // Centered on the origin: far vertices carry absolute coordinate error
    // growing like e^(2D) in the hyperbolic plane. The backward half is
    // iterated; the forward half is its mirror image in the bisector of the
    // angle at the origin, which costs no digits.
    let mut back_pts = vec![space.origin()];
    for _ in 0..n - mid {
        let last = back_pts.last().expect("nonempty");
        back_pts.push(back.apply(space, last));
    }
    let (c, s2) = (theta.cos(), theta.sin());
    let mirror = |p: &Point| {
        let u = p.unit(space);
        Point::from_unit(space, Vec3::new(u[0], c * u[1] + s2 * u[2], s2 * u[1] - c * u[2]))
    };
    let mut vertices = vec![space.origin(); n + 1];
    for k in 0..=mid {
        vertices[mid - k] = back_pts[k];
    }
    for k in 1..=n - mid {
        vertices[mid + k] = mirror(&back_pts[k]);
    }
    Ok(PolygonChain {
        space: *space,
        s,
        theta,
        n,
        vertices,
        generator,
    })
}

/// Locus of the chain's vertices.
#[derive(Clone, Debug, PartialEq)]
pub enum ChainCenter {
    Circle { center: Point, radius: f64 },
    Horocycle,
    Equidistant { axis: Line, distance: f64 },
}

impl ChainCenter {
    pub fn tag(&self) -> &'static str {
        match self {
            ChainCenter::Circle { .. } => "circle",
            ChainCenter::Horocycle => "horocycle",
            ChainCenter::Equidistant { .. } => "equidistant",
        }
    }

    /// Largest deviation of a vertex's distance to the center (or axis) from
    /// the common value. Zero for a horocycle.
    pub fn residual(&self, chain: &PolygonChain) -> f64 {
        let sp = &chain.space;
        match self {
            ChainCenter::Circle { center, radius } => chain
                .vertices
                .iter()
                .map(|v| (sp.distance(center, v) - radius).abs())
                .fold(0.0, f64::max),
            ChainCenter::Equidistant { axis, distance } => chain
                .vertices
                .iter()
                .map(|v| (sp.signed_height(v, axis).abs() - distance).abs())
                .fold(0.0, f64::max),
            ChainCenter::Horocycle => 0.0,
        }
    }
}

/// Classifies the vertex locus from the perpendicular bisectors of two
/// consecutive segments (those meeting at the middle vertex; all such pairs are
/// congruent under the generator).
pub fn classify_chain_center(chain: &PolygonChain) -> Result<ChainCenter> {
    let sp = &chain.space;
    if (chain.theta - PI).abs() <= sp.tol() {
        return Err(Error::DegenerateChain);
    }
    let v = &chain.vertices;
    let m_idx = (chain.n / 2).max(1);
    let b1 = sp.perpendicular_bisector(&v[m_idx - 1], &v[m_idx])?;
    let b2 = sp.perpendicular_bisector(&v[m_idx], &v[m_idx + 1])?;
    Ok(match sp.classify_line_pair(&b1, &b2) {
        LinePairClass::Intersecting { point, .. } => {
            let mut center = point;
            let mut radius = sp.distance(&center, &v[m_idx]);
            if sp.kind() == Kind::Spherical && radius > FRAC_PI_2 * sp.radius() {
                center = antipode(sp, &center);
                radius = sp.distance(&center, &v[m_idx]);
            }
            ChainCenter::Circle { center, radius }
        }
        LinePairClass::CommonPerpendicular { .. } => {
            // Covector of the common perpendicular: J(ℓ1 × ℓ2).
            let m = sp.covector(&b1).cross(&sp.covector(&b2));
            let j = crate::space::Vec3::new(m[0], -m[1], -m[2]);
            let axis = sp.line_with_covector(&j, &v[m_idx])?;
            let distance = sp.signed_height(&v[m_idx], &axis).abs();
            ChainCenter::Equidistant { axis, distance }
        }
        LinePairClass::Asymptotic => ChainCenter::Horocycle,
        LinePairClass::Coincident => return Err(Error::DegenerateChain),
    })
}

fn antipode(space: &SpaceForm, p: &Point) -> Point {
    Point::from_unit(space, -p.unit(space))
}

/// Side length separating concyclic chains from equidistant ones for a given
/// interior angle, located by bisection on the classification.
pub fn critical_side(space: &SpaceForm, theta: f64) -> Result<f64> {
    if space.kind() != Kind::Hyperbolic {
        return Ok(f64::INFINITY);
    }
    let circle = |s: f64| -> Result<bool> {
        let chain = build_chain(space, s, theta, 3)?;
        Ok(matches!(classify_chain_center(&chain)?, ChainCenter::Circle { .. }))
    };
    let (mut lo, mut hi) = (0.0, space.radius());
    while circle(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 700.0 * space.radius() {
            return Ok(f64::INFINITY);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if circle(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `s_crit = 2R·acosh(1 / sin(θ/2))`.
pub fn critical_side_closed_form(space: &SpaceForm, theta: f64) -> f64 {
    match space.kind() {
        Kind::Hyperbolic => 2.0 * space.radius() * (1.0 / (theta / 2.0).sin()).acosh(),
        _ => f64::INFINITY,
    }
}

/// Start frame of a chain, for drawing.
pub fn chain_start(space: &SpaceForm) -> TangentDir {
    space.origin_dir()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallelism_examples() {
        let h = SpaceForm::hyperbolic(1.0);
        assert_eq!(angle_of_parallelism(&h, 0.0).unwrap().angle, FRAC_PI_2);
        let a = angle_of_parallelism(&h, 1.0).unwrap().angle;
        assert!((a - 0.705_026_843_555).abs() < 1e-9);
        assert!((a - parallelism_closed_form(&h, 1.0)).abs() < 1e-7);
        assert!(angle_of_parallelism(&h, 30.0).unwrap().angle < 1e-12);
        let e = angle_of_parallelism(&SpaceForm::euclidean(), 1.0).unwrap();
        assert!(e.euclidean && e.angle == FRAC_PI_2);
        assert!(angle_of_parallelism(&SpaceForm::spherical(1.0), 1.0).is_err());
    }

    #[test]
    fn parallelism_scales_with_radius() {
        let h = SpaceForm::hyperbolic(2.0);
        let a = angle_of_parallelism(&h, 2.0).unwrap().angle;
        assert!((a - 2.0 * (-1f64).exp().atan()).abs() < 1e-7);
    }

    #[test]
    fn measured_angles_approach_the_limit() {
        let h = SpaceForm::hyperbolic(1.0);
        let pi1 = parallelism_closed_form(&h, 1.0);
        let mut prev = 0.0;
        for k in 0..7 {
            let x = 2f64.powi(k);
            let a = measured_angle(&h, 1.0, x).unwrap();
            assert!(a >= prev - 1e-15 && a <= pi1 + 1e-15);
            prev = a;
        }
        assert!(pi1 - prev < 1e-3);
    }

    #[test]
    fn euclidean_hexagon_closes() {
        let e = SpaceForm::euclidean();
        let chain = build_chain(&e, 1.0, 2.0 * PI / 3.0, 6).unwrap();
        assert!(e.distance(&chain.vertices[0], &chain.vertices[6]) < 1e-9);
        assert!(chain.residual().unwrap() < 1e-10);
        match classify_chain_center(&chain).unwrap() {
            c @ ChainCenter::Circle { radius, .. } => {
                assert!((radius - 1.0).abs() < 1e-12);
                assert!(c.residual(&chain) < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn curved_chains() {
        let h = SpaceForm::hyperbolic(1.0);
        let chain = build_chain(&h, 0.1, 2.0 * PI / 3.0, 12).unwrap();
        assert!(chain.residual().unwrap() < 1e-10);
        let c = classify_chain_center(&chain).unwrap();
        assert_eq!(c.tag(), "circle");
        assert!(c.residual(&chain) < 1e-9);

        let chain = build_chain(&h, 5.0, 2.0 * PI / 3.0, 3).unwrap();
        let c = classify_chain_center(&chain).unwrap();
        assert_eq!(c.tag(), "equidistant");
        assert!(c.residual(&chain) < 1e-9);

        let s = SpaceForm::spherical(1.0);
        let chain = build_chain(&s, 0.5, 2.0 * PI / 3.0, 12).unwrap();
        let c = classify_chain_center(&chain).unwrap();
        assert_eq!(c.tag(), "circle");
        assert!(c.residual(&chain) < 1e-9);
    }

    #[test]
    fn straight_chain_is_degenerate() {
        let e = SpaceForm::euclidean();
        let chain = build_chain(&e, 1.0, PI, 4).unwrap();
        assert!(matches!(classify_chain_center(&chain), Err(Error::DegenerateChain)));
    }

    #[test]
    fn critical_side_matches_closed_form() {
        let h = SpaceForm::hyperbolic(1.0);
        let theta = 2.0 * PI / 3.0;
        let s = critical_side(&h, theta).unwrap();
        assert!((s - 3f64.ln()).abs() < 1e-6, "{s}");
        assert!((s - critical_side_closed_form(&h, theta)).abs() < 1e-6);
    }
}
