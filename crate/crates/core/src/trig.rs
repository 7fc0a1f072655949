//! Triangle solvers, angle sums, defect/excess area and the canonical unit of
//! length carried by equilateral triangles in the curved planes.
//!
//! All identities are evaluated on reduced lengths (`x / R`), so the spherical
//! and hyperbolic branches differ only in the function family `(C, S)`.

use std::f64::consts::{FRAC_PI_3, PI};

use crate::error::{Error, Result};
use crate::space::{Kind, Point, SpaceForm};

/// A triangle with sides `a, b, c` and opposite angles `A, B, C` (radians).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangle {
    pub space: SpaceForm,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Triangle {
    pub fn from_sides(space: &SpaceForm, a: f64, b: f64, c: f64) -> Result<Self> {
        let (alpha, beta, gamma) = angles_from_sss(space, a, b, c)?;
        Ok(Triangle {
            space: *space,
            a,
            b,
            c,
            alpha,
            beta,
            gamma,
        })
    }

    /// Measures a triangle from its vertices: side `a` is opposite `p`, and so on.
    pub fn from_points(space: &SpaceForm, p: &Point, q: &Point, r: &Point) -> Result<Self> {
        Ok(Triangle {
            space: *space,
            a: space.distance(q, r),
            b: space.distance(p, r),
            c: space.distance(p, q),
            alpha: space.angle_at(p, q, r)?,
            beta: space.angle_at(q, p, r)?,
            gamma: space.angle_at(r, p, q)?,
        })
    }

    pub fn angle_sum(&self) -> f64 {
        self.alpha + self.beta + self.gamma
    }

    /// `A + B + C − π`: positive excess on the sphere, negative defect in the
    /// hyperbolic plane.
    pub fn excess(&self) -> f64 {
        self.angle_sum() - PI
    }

    pub fn area(&self) -> Result<f64> {
        area_from_angles(&self.space, self.alpha, self.beta, self.gamma)
    }
}

// Inverse of S on non-negative arguments.
fn inv_sin_fn(space: &SpaceForm, y: f64) -> f64 {
    match space.kind() {
        Kind::Spherical => y.clamp(-1.0, 1.0).asin(),
        Kind::Euclidean => y,
        Kind::Hyperbolic => y.asinh(),
    }
}

fn check_side(space: &SpaceForm, x: f64, name: &str) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("side {name} = {x} must be positive")));
    }
    if space.kind() == Kind::Spherical && x > PI * space.radius() {
        return Err(Error::Domain(format!("side {name} = {x} exceeds πR")));
    }
    Ok(())
}

/// Third side from two sides and the included angle (law of cosines).
///
/// Evaluated in half-chord form, `S(a/2)² = S((b−c)/2)² + S(b)·S(c)·sin²(A/2)`,
/// which is algebraically the cosine law and stays accurate for thin triangles.
pub fn side_from_sas(space: &SpaceForm, b: f64, c: f64, angle: f64) -> Result<f64> {
    check_side(space, b, "b")?;
    check_side(space, c, "c")?;
    if !(0.0..=PI).contains(&angle) {
        return Err(Error::Domain(format!("angle {angle} outside [0, π]")));
    }
    let (rb, rc) = (space.reduce(b), space.reduce(c));
    let half_diff = space.sin_fn((rb - rc) / 2.0);
    let half_angle = (angle / 2.0).sin();
    let h2 = half_diff * half_diff + space.sin_fn(rb) * space.sin_fn(rc) * half_angle * half_angle;
    Ok(2.0 * space.radius() * inv_sin_fn(space, h2.max(0.0).sqrt()))
}

/// The three angles `(A, B, C)` of the triangle with sides `a, b, c`, from the
/// half-angle form `tan(A/2) = √(S(s−b)S(s−c) / (S(s)S(s−a)))`.
pub fn angles_from_sss(space: &SpaceForm, a: f64, b: f64, c: f64) -> Result<(f64, f64, f64)> {
    for (x, n) in [(a, "a"), (b, "b"), (c, "c")] {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::NotATriangle);
        }
        if space.kind() == Kind::Spherical && x >= PI * space.radius() {
            return Err(Error::Domain(format!("side {n} = {x} must be below πR")));
        }
    }
    if a >= b + c || b >= a + c || c >= a + b {
        return Err(Error::NotATriangle);
    }
    if space.kind() == Kind::Spherical && a + b + c >= 2.0 * PI * space.radius() {
        return Err(Error::NotATriangle);
    }
    let (ra, rb, rc) = (space.reduce(a), space.reduce(b), space.reduce(c));
    let s = (ra + rb + rc) / 2.0;
    let ss = space.sin_fn(s);
    let (sa, sb, sc) = (
        space.sin_fn(s - ra),
        space.sin_fn(s - rb),
        space.sin_fn(s - rc),
    );
    let half = |num: f64, den: f64| 2.0 * num.max(0.0).sqrt().atan2(den.max(0.0).sqrt());
    Ok((
        half(sb * sc, ss * sa),
        half(sa * sc, ss * sb),
        half(sa * sb, ss * sc),
    ))
}

/// Relative residual of the cosine law for side `a` opposite angle `A`:
/// `cos a = cos b cos c + sin b sin c cos A` on the sphere,
/// `cosh a = cosh b cosh c − sinh b sinh c cos A` in the hyperbolic plane,
/// `a² = b² + c² − 2bc cos A` in the Euclidean plane.
pub fn cosine_law_residual(space: &SpaceForm, a: f64, b: f64, c: f64, angle: f64) -> f64 {
    let (ra, rb, rc) = (space.reduce(a), space.reduce(b), space.reduce(c));
    let (lhs, t1, t2) = match space.kind() {
        Kind::Euclidean => (ra * ra, rb * rb + rc * rc, -2.0 * rb * rc * angle.cos()),
        _ => (
            space.cos_fn(ra),
            space.cos_fn(rb) * space.cos_fn(rc),
            space.sign() * space.sin_fn(rb) * space.sin_fn(rc) * angle.cos(),
        ),
    };
    let scale = lhs.abs().max(t1.abs()).max(t2.abs()).max(f64::MIN_POSITIVE);
    (lhs - t1 - t2).abs() / scale
}

/// Triangle area from its angles: `R²·(A+B+C−π)` on the sphere and
/// `R²·(π−A−B−C)` in the hyperbolic plane. In the Euclidean plane the angles
/// do not determine the area and this fails.
pub fn area_from_angles(space: &SpaceForm, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    let sum = alpha + beta + gamma;
    let unrealizable = || Error::UnrealizableAngles(alpha, beta, gamma);
    let angles_ok = [alpha, beta, gamma]
        .iter()
        .all(|x| x.is_finite() && (0.0..PI).contains(x));
    if !angles_ok {
        return Err(unrealizable());
    }
    let r2 = space.radius() * space.radius();
    match space.kind() {
        Kind::Spherical => {
            if sum <= PI || sum >= 3.0 * PI || [alpha, beta, gamma].contains(&0.0) {
                return Err(unrealizable());
            }
            Ok(r2 * (sum - PI))
        }
        Kind::Hyperbolic => {
            if sum >= PI {
                return Err(unrealizable());
            }
            Ok(r2 * (PI - sum))
        }
        Kind::Euclidean => {
            if (sum - PI).abs() > space.tol() {
                Err(unrealizable())
            } else {
                Err(Error::NotDeterminedByAngles)
            }
        }
    }
}

fn equilateral_angle(space: &SpaceForm, s: f64) -> Result<f64> {
    Ok(angles_from_sss(space, s, s, s)?.0)
}

/// Side of the equilateral triangle whose angles all equal `angle`.
///
/// Found by bracketing bisection on the monotone map side → angle; the closed
/// form [`equilateral_side_closed_form`] is only a cross-check.
pub fn equilateral_side_for_angle(space: &SpaceForm, angle: f64) -> Result<f64> {
    let r = space.radius();
    let (mut lo, mut hi, increasing) = match space.kind() {
        Kind::Euclidean => return Err(Error::NoCanonicalUnit),
        Kind::Hyperbolic => {
            if !(angle > 0.0 && angle < FRAC_PI_3) {
                return Err(Error::OutOfRange(format!(
                    "hyperbolic equilateral angle must lie in (0, π/3), got {angle}"
                )));
            }
            let mut hi = r;
            while equilateral_angle(space, hi)? > angle {
                hi *= 2.0;
                if hi > 700.0 * r {
                    return Err(Error::OutOfRange(format!("angle {angle} is too small")));
                }
            }
            (0.0, hi, false)
        }
        Kind::Spherical => {
            if !(angle > FRAC_PI_3 && angle < PI) {
                return Err(Error::OutOfRange(format!(
                    "spherical equilateral angle must lie in (π/3, π), got {angle}"
                )));
            }
            (0.0, 2.0 * PI * r / 3.0, true)
        }
    };
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let too_big = equilateral_angle(space, mid)? > angle;
        if too_big == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed form `C(s/R) = cos α / (1 − cos α)` for the equilateral side.
pub fn equilateral_side_closed_form(space: &SpaceForm, angle: f64) -> Result<f64> {
    let k = angle.cos() / (1.0 - angle.cos());
    let x = match space.kind() {
        Kind::Euclidean => return Err(Error::NoCanonicalUnit),
        Kind::Spherical => k.clamp(-1.0, 1.0).acos(),
        Kind::Hyperbolic => {
            if k < 1.0 {
                return Err(Error::OutOfRange(format!("angle {angle}")));
            }
            k.acosh()
        }
    };
    Ok(space.radius() * x)
}

/// Lengths read off the median of an equilateral triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MedianSplit {
    /// Vertex `A` to the midpoint `F` of the opposite side.
    pub af: f64,
    /// Circumcenter `D` to `F`.
    pub df: f64,
    /// Common distance of `D` from the three vertices.
    pub circumradius: f64,
    pub vertices: [Point; 3],
    pub midpoint: Point,
    pub center: Point,
}

/// Builds the equilateral triangle `ABC` with side `s`, takes `F` the midpoint
/// of `BC` and `D` the meeting point of the perpendicular bisectors, and
/// returns `AF` and `DF`.
pub fn equilateral_median_split(space: &SpaceForm, s: f64) -> Result<MedianSplit> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!("side {s} must be positive")));
    }
    if space.kind() == Kind::Spherical && s >= 2.0 * PI * space.radius() / 3.0 {
        return Err(Error::Domain(format!("spherical side {s} must be below 2πR/3")));
    }
    let apex = equilateral_angle(space, s)?;
    let b = space.origin();
    let along = space.origin_dir();
    let c = space.exp_map(&along, s);
    let a = space.exp_map(&space.rotate(&along, apex), s);
    let ac = space.distance(&a, &c);
    if (ac - s).abs() > space.tol() * s.max(1.0) {
        return Err(Error::Domain(format!("equilateral closure failed: |AC| = {ac}")));
    }
    let f = space.midpoint(&b, &c)?;
    let bis_bc = space.perpendicular_bisector(&b, &c)?;
    let bis_ab = space.perpendicular_bisector(&a, &b)?;
    let d = space.intersect(&bis_bc, &bis_ab).ok_or(Error::NoCircumcenter)?;
    let ra = space.distance(&d, &a);
    let rb = space.distance(&d, &b);
    let rc = space.distance(&d, &c);
    let spread = ra.max(rb).max(rc) - ra.min(rb).min(rc);
    if spread > space.tol() * ra.max(1.0) {
        return Err(Error::NoCircumcenter);
    }
    Ok(MedianSplit {
        af: space.distance(&a, &f),
        df: space.distance(&d, &f),
        circumradius: (ra + rb + rc) / 3.0,
        vertices: [a, b, c],
        midpoint: f,
        center: d,
    })
}
