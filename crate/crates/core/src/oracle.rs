//! Independent triangle-area oracle: integrate the area element over the
//! triangle in a chart where geodesics are straight (gnomonic for the sphere,
//! Klein for the hyperbolic plane).

use crate::error::{Error, Result};
use crate::space::{Kind, Motion, Point, SpaceForm, Vec3};

// Dunavant degree-5 rule: (barycentric a, b, weight), centroid first.
const RULE: [(f64, f64, f64); 3] = [
    (1.0 / 3.0, 1.0 / 3.0, 0.225),
    (0.059_715_871_789_770, 0.470_142_064_105_115, 0.132_394_152_788_506),
    (0.797_426_985_353_087, 0.101_286_507_323_456, 0.125_939_180_544_827),
];

type P2 = (f64, f64);

fn tri_rule(f: &impl Fn(f64, f64) -> f64, p: P2, q: P2, r: P2) -> f64 {
    let area = 0.5 * ((q.0 - p.0) * (r.1 - p.1) - (r.0 - p.0) * (q.1 - p.1)).abs();
    let at = |l0: f64, l1: f64, l2: f64| {
        f(
            l0 * p.0 + l1 * q.0 + l2 * r.0,
            l0 * p.1 + l1 * q.1 + l2 * r.1,
        )
    };
    let (a0, _, w0) = RULE[0];
    let mut sum = w0 * at(a0, a0, a0);
    for &(a, b, w) in &RULE[1..] {
        sum += w * (at(a, b, b) + at(b, a, b) + at(b, b, a));
    }
    area * sum
}

fn subdivided(f: &impl Fn(f64, f64) -> f64, p: P2, q: P2, r: P2, depth: u32) -> f64 {
    if depth == 0 {
        return tri_rule(f, p, q, r);
    }
    let mid = |a: P2, b: P2| ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
    let (pq, qr, rp) = (mid(p, q), mid(q, r), mid(r, p));
    subdivided(f, p, pq, rp, depth - 1)
        + subdivided(f, pq, q, qr, depth - 1)
        + subdivided(f, rp, qr, r, depth - 1)
        + subdivided(f, pq, qr, rp, depth - 1)
}

/// Area of the geodesic triangle `pqr` by numerical integration, refined until
/// two successive subdivision levels agree to `rel_tol`.
pub fn integrated_area(space: &SpaceForm, p: &Point, q: &Point, r: &Point, rel_tol: f64) -> Result<f64> {
    if space.kind() == Kind::Euclidean {
        let [a, b, c] = [p, q, r].map(|x| x.xy());
        return Ok(0.5 * ((b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1)).abs());
    }
    split_area(space, p, q, r, rel_tol, 4)
}

// Large spherical triangles do not fit one gnomonic chart; they are cut into
// four along geodesic midpoints until they do.
fn split_area(space: &SpaceForm, p: &Point, q: &Point, r: &Point, rel_tol: f64, budget: u32) -> Result<f64> {
    match chart_area(space, p, q, r, rel_tol) {
        Err(Error::Domain(_)) if budget > 0 => {
            let (pq, qr, rp) = (space.midpoint(p, q)?, space.midpoint(q, r)?, space.midpoint(r, p)?);
            Ok(split_area(space, p, &pq, &rp, rel_tol, budget - 1)?
                + split_area(space, &pq, q, &qr, rel_tol, budget - 1)?
                + split_area(space, &rp, &qr, r, rel_tol, budget - 1)?
                + split_area(space, &pq, &qr, &rp, rel_tol, budget - 1)?)
        }
        other => other,
    }
}

fn chart_area(space: &SpaceForm, p: &Point, q: &Point, r: &Point, rel_tol: f64) -> Result<f64> {
    let pts = [p, q, r];
    // Move the centroid to the origin so the chart is well conditioned.
    let sum: Vec3 = pts.iter().map(|x| x.unit(space)).sum();
    let centroid = space
        .renormalize(&sum)
        .ok_or_else(|| Error::Domain("triangle has no centroid in the chart".into()))?;
    let c = Point::from_unit(space, centroid);
    let frame = space
        .direction(&c, p)
        .or_else(|_| space.direction(&c, q))
        .map_err(|_| Error::Domain("degenerate triangle".into()))?;
    let to_origin = Motion::carrying(space, &frame)
        .inverse()
        .ok_or_else(|| Error::Domain("singular frame".into()))?;
    let mut chart = [(0.0, 0.0); 3];
    for (slot, x) in chart.iter_mut().zip(pts) {
        let u = to_origin.apply(space, x).unit(space);
        // Keep vertices well inside the chart (within ~72° on the sphere).
        if u[0] <= 0.3 {
            return Err(Error::Domain("vertex outside the chart".into()));
        }
        *slot = (u[1] / u[0], u[2] / u[0]);
    }
    let sign = space.sign();
    let density = move |x: f64, y: f64| {
        let w = 1.0 + sign * (x * x + y * y);
        w.powf(-1.5)
    };
    let r2 = space.radius() * space.radius();
    let [a, b, c] = chart;
    let mut prev = subdivided(&density, a, b, c, 1);
    for depth in 2..=8 {
        let next = subdivided(&density, a, b, c, depth);
        if (next - prev).abs() <= rel_tol * next.abs() {
            return Ok(r2 * next);
        }
        prev = next;
    }
    Ok(r2 * prev)
}
