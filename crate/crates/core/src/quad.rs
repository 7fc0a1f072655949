//! Lambert (trirectangular) and Saccheri (isosceles birectangular)
//! quadrilaterals, the fold relating them, perpendicular-distance profiles and
//! the threshold past which erected perpendiculars stop meeting a line.
//!
//! Every quantity here is obtained by construction in the model; the closed
//! forms (`*_closed_form`) exist to cross-check the constructions.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::space::{Kind, Line, LinePairClass, Point, SpaceForm, TangentDir};

/// Quadrilateral `ABCD` with right angles at `A`, `B` and `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambertQuad {
    pub space: SpaceForm,
    /// `AB`
    pub a: f64,
    /// `BC`
    pub b: f64,
    /// `CD`
    pub c: f64,
    /// `AD`
    pub d: f64,
    /// Angle at `D`.
    pub phi: f64,
    pub vertices: [Point; 4],
}

impl LambertQuad {
    /// Largest deviation from a right angle at `A`, `B`, `C`.
    pub fn right_angle_residual(&self) -> Result<f64> {
        let s = &self.space;
        let [a, b, c, d] = &self.vertices;
        let angles = [s.angle_at(a, d, b)?, s.angle_at(b, a, c)?, s.angle_at(c, b, d)?];
        Ok(angles
            .iter()
            .map(|x| (x - FRAC_PI_2).abs())
            .fold(0.0, f64::max))
    }
}

/// Quadrilateral with equal legs erected perpendicularly at both ends of a base.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaccheriQuad {
    pub space: SpaceForm,
    pub base: f64,
    pub leg: f64,
    pub summit: f64,
    /// Mean of the two summit angles.
    pub summit_angle: f64,
    /// Summit angles at `D` (above `A`) and at `C` (above `B`).
    pub summit_angles: (f64, f64),
    /// `A`, `B` on the base; `C` above `B`, `D` above `A`.
    pub vertices: [Point; 4],
}

impl SaccheriQuad {
    /// Distance between the midpoints of base and summit.
    pub fn altitude(&self) -> Result<f64> {
        let s = &self.space;
        let [a, b, c, d] = &self.vertices;
        Ok(s.distance(&s.midpoint(a, b)?, &s.midpoint(c, d)?))
    }
}

fn check_len(space: &SpaceForm, x: f64, name: &str) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("{name} = {x} must be positive")));
    }
    if space.kind() == Kind::Spherical && x >= FRAC_PI_2 * space.radius() {
        return Err(Error::Domain(format!("{name} = {x} must be below πR/2 on the sphere")));
    }
    Ok(())
}

// Direction a quarter turn to the left of `dir`.
fn up(space: &SpaceForm, dir: &TangentDir) -> TangentDir {
    space.rotate(dir, FRAC_PI_2)
}

/// Constructs the Lambert quadrilateral with `AB = a` and `BC = b`: `A` at the
/// origin, `B` along the first axis, `C` on the perpendicular at `B`, and `D`
/// where the perpendicular to `AB` at `A` meets the perpendicular to `BC` at
/// `C`. In the hyperbolic plane these two may fail to meet, which is reported
/// as [`Error::NoFourthVertex`] with the classification of the pair.
pub fn lambert_quadrilateral(space: &SpaceForm, a: f64, b: f64) -> Result<LambertQuad> {
    check_len(space, a, "a")?;
    check_len(space, b, "b")?;
    let base = space.origin_dir();
    let pa = space.origin();
    let pb = space.exp_map(&base, a);
    let up_b = up(space, &space.transport(&base, a));
    let pc = space.exp_map(&up_b, b);
    let at_c = space.transport(&up_b, b);
    let closing_c = Line::new(up(space, &at_c));
    let closing_a = Line::new(up(space, &base));
    let pd = match space.classify_line_pair(&closing_a, &closing_c) {
        LinePairClass::Intersecting { point, .. } => point,
        other => return Err(Error::NoFourthVertex(other)),
    };
    Ok(LambertQuad {
        space: *space,
        a,
        b,
        c: space.distance(&pc, &pd),
        d: space.distance(&pa, &pd),
        phi: space.angle_at(&pd, &pa, &pc)?,
        vertices: [pa, pb, pc, pd],
    })
}

// tan, identity or tanh of a reduced length.
fn tan_fn(space: &SpaceForm, x: f64) -> f64 {
    space.sin_fn(x) / space.cos_fn(x)
}

fn inv_tan_fn(space: &SpaceForm, y: f64) -> Option<f64> {
    match space.kind() {
        Kind::Spherical => Some(y.atan()),
        Kind::Euclidean => Some(y),
        Kind::Hyperbolic => (y.abs() < 1.0).then(|| y.atanh()),
    }
}

/// Closed-form `(c, d, phi)` of the Lambert quadrilateral:
/// `T(d) = C(a)·T(b)`, `T(c) = C(b)·T(a)`, `cos φ = −e·S(a)·S(b)`.
/// `None` when the hyperbolic quadrilateral does not close.
pub fn lambert_closed_form(space: &SpaceForm, a: f64, b: f64) -> Option<(f64, f64, f64)> {
    let (ra, rb) = (space.reduce(a), space.reduce(b));
    let d = inv_tan_fn(space, space.cos_fn(ra) * tan_fn(space, rb))?;
    let c = inv_tan_fn(space, space.cos_fn(rb) * tan_fn(space, ra))?;
    let cos_phi = -space.sign() * space.sin_fn(ra) * space.sin_fn(rb);
    Some((
        c * space.radius(),
        d * space.radius(),
        cos_phi.clamp(-1.0, 1.0).acos(),
    ))
}

/// Erects legs of length `leg` perpendicularly at both ends of a base of
/// length `base` and closes the quadrilateral with the summit.
pub fn saccheri_quadrilateral(space: &SpaceForm, base: f64, leg: f64) -> Result<SaccheriQuad> {
    check_len(space, base, "base")?;
    check_len(space, leg, "leg")?;
    let along = space.origin_dir();
    let pa = space.origin();
    let pb = space.exp_map(&along, base);
    let pd = space.exp_map(&up(space, &along), leg);
    let pc = space.exp_map(&up(space, &space.transport(&along, base)), leg);
    let at_d = space.angle_at(&pd, &pa, &pc)?;
    let at_c = space.angle_at(&pc, &pb, &pd)?;
    Ok(SaccheriQuad {
        space: *space,
        base,
        leg,
        summit: space.distance(&pc, &pd),
        summit_angle: 0.5 * (at_d + at_c),
        summit_angles: (at_d, at_c),
        vertices: [pa, pb, pc, pd],
    })
}

/// A Saccheri quadrilateral together with the Lambert quadrilateral it folds
/// onto, and the residuals of the correspondence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fold {
    pub saccheri: SaccheriQuad,
    pub lambert: LambertQuad,
    /// `|summit − 2·AD|`
    pub summit_residual: f64,
    /// `|leg − CD|`
    pub leg_residual: f64,
    /// `|summit angle − φ|`
    pub angle_residual: f64,
}

impl Fold {
    pub fn max_residual(&self) -> f64 {
        self.summit_residual
            .max(self.leg_residual)
            .max(self.angle_residual)
    }
}

/// Folds the Saccheri quadrilateral along its axis of symmetry.
///
/// The half is a Lambert quadrilateral `ABCD` whose side `AB` is the axis
/// (summit midpoint to base midpoint), `BC` is half the base, `CD` is a leg and
/// `AD` half the summit. The Lambert quadrilateral is constructed
/// independently from `a = altitude`, `b = base/2` and compared.
pub fn fold_lambert(space: &SpaceForm, base: f64, leg: f64) -> Result<Fold> {
    let saccheri = saccheri_quadrilateral(space, base, leg)?;
    let lambert = lambert_quadrilateral(space, saccheri.altitude()?, base / 2.0)?;
    Ok(Fold {
        saccheri,
        lambert,
        summit_residual: (saccheri.summit - 2.0 * lambert.d).abs(),
        leg_residual: (saccheri.leg - lambert.c).abs(),
        angle_residual: (saccheri.summit_angle - lambert.phi).abs(),
    })
}

/// One sample of a perpendicular profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileSample {
    /// Arc length along the upper line from `B`.
    pub t: f64,
    /// Length of the perpendicular dropped to the base line.
    pub h: f64,
    /// Angle at the sampled point between the upper line (towards `B`) and
    /// the dropped perpendicular.
    pub phi: f64,
    pub point: Point,
    pub foot: Point,
}

/// Perpendiculars dropped from a line onto a base line, sampled at arc
/// lengths `t` from `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerpProfile {
    pub space: SpaceForm,
    pub h0: f64,
    pub samples: Vec<ProfileSample>,
    /// Largest deviation of `h` from `S(h) = S(h0)·C(t)`.
    pub closed_form_residual: f64,
}

impl PerpProfile {
    pub fn heights(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.h).collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.phi).collect()
    }
}

/// The profile configuration: base line through `A` (the first axis), `B` at
/// height `h0` above `A`, and the upper line through `B` perpendicular to `AB`.
pub fn profile_lines(space: &SpaceForm, h0: f64) -> (Line, Point, TangentDir) {
    let base = space.axis();
    let up_a = up(space, &base.dir);
    let b = space.exp_map(&up_a, h0);
    let upper = space.rotate(&space.transport(&up_a, h0), -FRAC_PI_2);
    (base, b, upper)
}

/// Closed-form perpendicular length `S(h/R) = S(h0/R)·C(t/R)`.
pub fn profile_closed_form(space: &SpaceForm, h0: f64, t: f64) -> f64 {
    let y = space.sin_fn(space.reduce(h0)) * space.cos_fn(space.reduce(t));
    space.radius()
        * match space.kind() {
            Kind::Spherical => y.clamp(-1.0, 1.0).asin(),
            Kind::Euclidean => y,
            Kind::Hyperbolic => y.asinh(),
        }
}

/// Samples the perpendicular profile at the given arc lengths (strictly
/// increasing, non-negative; on the sphere `h0 < πR/2` and `t ≤ πR/2`).
pub fn perpendicular_profile(space: &SpaceForm, h0: f64, ts: &[f64]) -> Result<PerpProfile> {
    if !(h0.is_finite() && h0 > 0.0) {
        return Err(Error::Domain(format!("h0 = {h0} must be positive")));
    }
    let quarter = FRAC_PI_2 * space.radius();
    if space.kind() == Kind::Spherical && h0 >= quarter {
        return Err(Error::Domain(format!("h0 = {h0} must be below πR/2")));
    }
    if ts.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("t values must be strictly increasing".into()));
    }
    for &t in ts {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain(format!("t = {t} must be non-negative")));
        }
        if space.kind() == Kind::Spherical && t > quarter * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("t = {t} exceeds πR/2")));
        }
    }
    let (base, _, upper) = profile_lines(space, h0);
    let mut samples = Vec::with_capacity(ts.len());
    let mut residual: f64 = 0.0;
    for &t in ts {
        let point = space.exp_map(&upper, t);
        let (foot, h) = space.foot_of_perpendicular(&point, &base)?;
        // The perpendicular dropped to the base, oriented downwards and
        // anchored at its foot; with `back` anchored on the upper line this
        // keeps both covectors small however far `point` is.
        let cov = space.covector(&base);
        let n = space.tangent(&foot, space.tangent_metric(&cov))?;
        let down = if cov.dot(&n.vec) * space.signed_height(&point, &base) > 0.0 {
            n.reversed()
        } else {
            n
        };
        // Towards B along the upper line, anchored at B.
        let back = Line::new(upper).reversed();
        let phi = space.line_angle_at(&point, &back, &Line::new(down));
        residual = residual.max((h - profile_closed_form(space, h0, t)).abs());
        samples.push(ProfileSample {
            t,
            h,
            phi,
            point,
            foot,
        });
    }
    Ok(PerpProfile {
        space: *space,
        h0,
        samples,
        closed_form_residual: residual,
    })
}

/// Geometric grid `t0·2^k`, `k = 0..count`, preceded by `t = 0`.
pub fn geometric_grid(t0: f64, count: usize) -> Vec<f64> {
    std::iter::once(0.0)
        .chain((0..count).map(|k| t0 * 2f64.powi(k as i32)))
        .collect()
}

/// The configuration of erected perpendiculars: lines `AE` (the first axis)
/// and `BH` with common perpendicular `AB` of length `h0`, and the
/// perpendicular to `AE` erected at distance `t` from `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErectedPerpendicular {
    pub ae: Line,
    pub bh: Line,
    pub foot: Point,
    pub perpendicular: Line,
    pub class: LinePairClass,
}

pub fn erected_perpendicular(space: &SpaceForm, h0: f64, t: f64) -> Result<ErectedPerpendicular> {
    let (ae, b, upper) = profile_lines(space, h0);
    let bh = Line::new(TangentDir {
        base: b,
        vec: upper.vec,
    });
    let foot = space.exp_map(&ae.dir, t);
    let perpendicular = space.perpendicular_at(&ae, &foot)?;
    let class = space.classify_line_pair(&perpendicular, &bh);
    Ok(ErectedPerpendicular {
        ae,
        bh,
        foot,
        perpendicular,
        class,
    })
}

/// Distance `t*` along `AE` past which the erected perpendicular no longer
/// meets `BH`, located by bisection on the intersection predicate. Infinite
/// for the sphere and the Euclidean plane, where the threshold does not exist.
pub fn intersection_threshold(space: &SpaceForm, h0: f64) -> Result<f64> {
    if !(h0.is_finite() && h0 > 0.0) {
        return Err(Error::Domain(format!("h0 = {h0} must be positive")));
    }
    if space.kind() != Kind::Hyperbolic {
        return Ok(f64::INFINITY);
    }
    let meets = |t: f64| -> Result<bool> {
        Ok(erected_perpendicular(space, h0, t)?.class.is_intersecting())
    };
    let (mut lo, mut hi) = (0.0, space.radius());
    while meets(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 700.0 * space.radius() {
            return Ok(f64::INFINITY);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo < 1e-13 * space.radius() {
            break;
        }
        if meets(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed form `t* = R·artanh(1 / cosh(h0/R))`.
pub fn threshold_closed_form(space: &SpaceForm, h0: f64) -> f64 {
    match space.kind() {
        Kind::Hyperbolic => space.radius() * (1.0 / space.reduce(h0).cosh()).atanh(),
        _ => f64::INFINITY,
    }
}

/// Quadrilateral `CBDE` with right angles at `B` and `D`, with `G` where `EC`
/// meets the perpendicular bisector of `BD` at `F`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Birectangular {
    pub cb: f64,
    pub de: f64,
    /// Angle `CGF`.
    pub angle_cgf: f64,
    pub vertices: [Point; 4],
    pub g: Point,
    pub f: Point,
}

/// Builds `CBDE` from base `BD` and the heights `CB`, `DE`.
pub fn birectangular(space: &SpaceForm, bd: f64, cb: f64, de: f64) -> Result<Birectangular> {
    check_len(space, bd, "BD")?;
    check_len(space, cb, "CB")?;
    check_len(space, de, "DE")?;
    let along = space.origin_dir();
    let b = space.origin();
    let d = space.exp_map(&along, bd);
    let c = space.exp_map(&up(space, &along), cb);
    let e = space.exp_map(&up(space, &space.transport(&along, bd)), de);
    let f = space.midpoint(&b, &d)?;
    let bisector = space.perpendicular_at(&space.axis(), &f)?;
    let ce = space.line_through(&c, &e)?;
    let g = space
        .intersect(&ce, &bisector)
        .ok_or_else(|| Error::Domain("EC misses the bisector".into()))?;
    Ok(Birectangular {
        cb,
        de,
        angle_cgf: space.angle_at(&g, &c, &f)?,
        vertices: [c, b, d, e],
        g,
        f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn euclidean_lambert_is_a_rectangle() {
        let e = SpaceForm::euclidean();
        let q = lambert_quadrilateral(&e, 2.0, 3.0).unwrap();
        assert!((q.phi - FRAC_PI_2).abs() < 1e-14);
        assert!((q.c - 2.0).abs() < 1e-14);
        assert!((q.d - 3.0).abs() < 1e-14);
    }

    #[test]
    fn hyperbolic_lambert_example() {
        let h = SpaceForm::hyperbolic(1.0);
        let q = lambert_quadrilateral(&h, 1.0, 0.3).unwrap();
        assert!((q.d - 0.4841).abs() < 1e-4);
        assert!((q.c - 1.0880).abs() < 1e-4);
        assert!((q.phi - 1.205).abs() < 1e-3);
        let (c, d, phi) = lambert_closed_form(&h, 1.0, 0.3).unwrap();
        assert!((q.c - c).abs() < 1e-12 && (q.d - d).abs() < 1e-12 && (q.phi - phi).abs() < 1e-12);
        assert!(q.right_angle_residual().unwrap() < 1e-9);
        assert!(q.d > q.b && q.c > q.a);
    }

    #[test]
    fn hyperbolic_lambert_fails_to_close() {
        let h = SpaceForm::hyperbolic(1.0);
        match lambert_quadrilateral(&h, 1.0, 1.0) {
            Err(Error::NoFourthVertex(class)) => {
                assert!(matches!(class, LinePairClass::CommonPerpendicular { .. }))
            }
            other => panic!("{other:?}"),
        }
        assert!(lambert_closed_form(&h, 1.0, 1.0).is_none());
    }

    #[test]
    fn spherical_lambert_is_obtuse() {
        let s = SpaceForm::spherical(1.0);
        let q = lambert_quadrilateral(&s, 0.7, 0.4).unwrap();
        assert!(q.phi > FRAC_PI_2);
        assert!(q.d < q.b && q.c < q.a);
        let (c, d, phi) = lambert_closed_form(&s, 0.7, 0.4).unwrap();
        assert!((q.c - c).abs() < 1e-12 && (q.d - d).abs() < 1e-12 && (q.phi - phi).abs() < 1e-12);
    }

    #[test]
    fn saccheri_examples() {
        let e = SpaceForm::euclidean();
        let q = saccheri_quadrilateral(&e, 2.0, 1.0).unwrap();
        assert!((q.summit - 2.0).abs() < 1e-14 && (q.summit_angle - FRAC_PI_2).abs() < 1e-14);

        let h = SpaceForm::hyperbolic(1.0);
        let q = saccheri_quadrilateral(&h, 1.0, 1.0).unwrap();
        assert!(q.summit > 1.0 && q.summit_angle < FRAC_PI_2);
        assert!((q.summit_angles.0 - q.summit_angles.1).abs() < 1e-9);

        let s = SpaceForm::spherical(1.0);
        let q = saccheri_quadrilateral(&s, 1.0, 0.5).unwrap();
        assert!(q.summit < 1.0 && q.summit_angle > FRAC_PI_2);
    }

    #[test]
    fn fold_examples() {
        let e = SpaceForm::euclidean();
        let f = fold_lambert(&e, 2.0, 1.0).unwrap();
        assert!((f.lambert.a - 1.0).abs() < 1e-14 && (f.lambert.b - 1.0).abs() < 1e-14);
        assert!((f.saccheri.summit - 2.0 * f.lambert.c).abs() < 1e-14);
        for space in [SpaceForm::hyperbolic(1.0), SpaceForm::spherical(1.0)] {
            let f = fold_lambert(&space, 1.0, 0.3).unwrap();
            assert!(f.max_residual() < 1e-10, "{space:?}: {f:?}");
        }
    }

    #[test]
    fn profile_examples() {
        let e = SpaceForm::euclidean();
        let p = perpendicular_profile(&e, 1.0, &[0.0, 1.0, 5.0]).unwrap();
        for s in &p.samples {
            assert!((s.h - 1.0).abs() < 1e-14 && (s.phi - FRAC_PI_2).abs() < 1e-14);
        }

        let s = SpaceForm::spherical(1.0);
        let p = perpendicular_profile(&s, PI / 4.0, &[PI / 3.0]).unwrap();
        assert!((p.samples[0].h - 0.36137).abs() < 1e-5);
        assert!(p.closed_form_residual < 1e-12);

        let h = SpaceForm::hyperbolic(1.0);
        let p = perpendicular_profile(&h, 0.5, &[1.0]).unwrap();
        assert!((p.samples[0].h - 0.735_860_441_362_95).abs() < 1e-12);
        assert!(p.closed_form_residual < 1e-12);
    }

    #[test]
    fn spherical_profile_reaches_the_base() {
        let s = SpaceForm::spherical(1.0);
        let p = perpendicular_profile(&s, 0.6, &[0.0, 0.5, 1.0, FRAC_PI_2]).unwrap();
        let last = p.samples.last().unwrap();
        assert!(last.h < 1e-9);
        assert!((last.phi - (FRAC_PI_2 + 0.6)).abs() < 1e-9);
        assert!(perpendicular_profile(&s, 0.6, &[2.0]).is_err());
        assert!(perpendicular_profile(&s, 0.6, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn threshold_examples() {
        let h = SpaceForm::hyperbolic(1.0);
        let t = intersection_threshold(&h, 1.0).unwrap();
        assert!((t - 0.77194).abs() < 1e-5);
        assert!((t - threshold_closed_form(&h, 1.0)).abs() < 1e-8);
        assert!(erected_perpendicular(&h, 1.0, 0.70).unwrap().class.is_intersecting());
        assert!(matches!(
            erected_perpendicular(&h, 1.0, 0.85).unwrap().class,
            LinePairClass::CommonPerpendicular { .. }
        ));
        assert!(intersection_threshold(&h, 1e-3).unwrap() > 7.0);
        assert_eq!(
            intersection_threshold(&SpaceForm::euclidean(), 1.0).unwrap(),
            f64::INFINITY
        );
        assert_eq!(
            intersection_threshold(&SpaceForm::spherical(1.0), 1.0).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn birectangular_angle_tracks_heights() {
        for space in [SpaceForm::euclidean(), SpaceForm::hyperbolic(1.0), SpaceForm::spherical(1.0)] {
            let q = birectangular(&space, 1.0, 0.4, 0.8).unwrap();
            assert!(q.angle_cgf < FRAC_PI_2, "{space:?}");
            let q = birectangular(&space, 1.0, 0.8, 0.4).unwrap();
            assert!(q.angle_cgf > FRAC_PI_2, "{space:?}");
        }
    }
}
