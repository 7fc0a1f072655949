use std::f64::consts::{FRAC_PI_2, PI};

use curvatura::duality::{self, IdentityId};
use curvatura::parallelism;
use curvatura::solve::round15;
use curvatura::{quad, trig, Kind, Motion, SpaceForm};
use proptest::prelude::*;

fn space(kind: usize, radius: f64) -> SpaceForm {
    match kind {
        0 => SpaceForm::spherical(radius),
        1 => SpaceForm::euclidean(),
        _ => SpaceForm::hyperbolic(radius),
    }
}

// Polar coordinates about the origin, kept within a hemisphere on the sphere.
fn polar(sp: &SpaceForm, angle: f64, frac: f64) -> curvatura::Point {
    let reach = match sp.kind() {
        Kind::Spherical => 1.4 * sp.radius(),
        _ => 2.5 * sp.radius(),
    };
    sp.exp_map(&sp.rotate(&sp.origin_dir(), angle), frac * reach)
}

proptest! {
    #[test]
    fn metric_axioms(kind in 0usize..3, radius in 0.5f64..3.0,
                     a in 0.0..2.0 * PI, b in 0.0..2.0 * PI, c in 0.0..2.0 * PI,
                     fa in 0.0f64..1.0, fb in 0.0f64..1.0, fc in 0.0f64..1.0) {
        let sp = space(kind, radius);
        let (p, q, r) = (polar(&sp, a, fa), polar(&sp, b, fb), polar(&sp, c, fc));
        let (pq, qp) = (sp.distance(&p, &q), sp.distance(&q, &p));
        prop_assert!((pq - qp).abs() <= 1e-12 * radius.max(pq));
        prop_assert!(sp.distance(&p, &r) <= pq + sp.distance(&q, &r) + 1e-12 * radius);
        prop_assert!(sp.distance(&p, &p) <= 1e-7 * radius);
    }

    #[test]
    fn motions_are_isometries(kind in 0usize..3, a in 0.0..2.0 * PI, b in 0.0..2.0 * PI,
                              fa in 0.0f64..1.0, fb in 0.0f64..1.0,
                              turn in 0.0..2.0 * PI, shift in 0.0f64..1.0) {
        let sp = space(kind, 1.0);
        let (p, q) = (polar(&sp, a, fa), polar(&sp, b, fb));
        let frame = sp.rotate(&sp.transport(&sp.origin_dir(), shift), turn);
        let m = Motion::carrying(&sp, &frame);
        let d = sp.distance(&p, &q);
        prop_assert!((sp.distance(&m.apply(&sp, &p), &m.apply(&sp, &q)) - d).abs() < 1e-11);
    }

    #[test]
    fn geodesics_reach_their_targets(kind in 0usize..3, a in 0.0..2.0 * PI, b in 0.0..2.0 * PI,
                                     fa in 0.0f64..1.0, fb in 0.05f64..1.0) {
        let sp = space(kind, 1.0);
        let (p, q) = (polar(&sp, a, fa), polar(&sp, b, fb));
        let d = sp.distance(&p, &q);
        prop_assume!(d > 1e-6);
        let reached = sp.exp_map(&sp.direction(&p, &q).unwrap(), d);
        prop_assert!(sp.distance(&reached, &q) < 1e-10);
        let mid = sp.midpoint(&p, &q).unwrap();
        prop_assert!((sp.distance(&mid, &p) - d / 2.0).abs() < 1e-10);
    }

    #[test]
    fn feet_of_perpendiculars(kind in 0usize..3, a in 0.0..2.0 * PI, fa in 0.05f64..1.0,
                              b in 0.0..2.0 * PI, fb in 0.05f64..1.0, c in 0.0..2.0 * PI, fc in 0.0f64..1.0) {
        let sp = space(kind, 1.0);
        let (p, q, r) = (polar(&sp, a, fa), polar(&sp, b, fb), polar(&sp, c, fc));
        prop_assume!(sp.distance(&p, &q) > 1e-3);
        let line = sp.line_through(&p, &q).unwrap();
        let (foot, h) = sp.foot_of_perpendicular(&r, &line).unwrap();
        prop_assert!(sp.on_line(&foot, &line));
        prop_assert!((sp.distance(&foot, &r) - h).abs() < 1e-10);
        // No point of the line is closer.
        let dir = sp.line_direction_at(&line, &foot).unwrap();
        for t in [-0.3, -0.01, 0.01, 0.3] {
            prop_assert!(sp.distance(&sp.exp_map(&dir, t), &r) >= h - 1e-12);
        }
    }

    #[test]
    fn solved_triangles_satisfy_the_cosine_law(kind in 0usize..3, radius in 0.5f64..3.0,
                                               b in 0.05f64..1.4, c in 0.05f64..1.4, angle in 0.05..PI - 0.05) {
        let sp = space(kind, radius);
        let (b, c) = (b * radius, c * radius);
        let a = trig::side_from_sas(&sp, b, c, angle).unwrap();
        prop_assume!(a > 1e-6 * radius);
        prop_assert!(trig::cosine_law_residual(&sp, a, b, c, angle) < 1e-9);
        let (alpha, _, _) = trig::angles_from_sss(&sp, a, b, c).unwrap();
        prop_assert!((alpha - angle).abs() < 1e-7);
    }

    #[test]
    fn angle_sum_follows_curvature(kind in 0usize..3, a in 0.0..2.0 * PI, b in 0.0..2.0 * PI, c in 0.0..2.0 * PI,
                                   fa in 0.1f64..1.0, fb in 0.1f64..1.0, fc in 0.1f64..1.0) {
        let sp = space(kind, 1.0);
        let t = trig::Triangle::from_points(&sp, &polar(&sp, a, fa), &polar(&sp, b, fb), &polar(&sp, c, fc));
        let Ok(t) = t else { return Ok(()) };
        prop_assume!(t.alpha.min(t.beta).min(t.gamma) > 1e-3);
        match sp.kind() {
            Kind::Spherical => prop_assert!(t.excess() > 0.0),
            Kind::Hyperbolic => prop_assert!(t.excess() < 0.0),
            Kind::Euclidean => prop_assert!(t.excess().abs() < 1e-12),
        }
    }

    #[test]
    fn lambert_fourth_angle(kind in 0usize..3, a in 0.05f64..1.4, u in 0.05f64..0.95) {
        let sp = space(kind, 1.0);
        let b = match sp.kind() {
            Kind::Hyperbolic => u * quad::threshold_closed_form(&sp, a),
            _ => u * 1.4,
        };
        let l = quad::lambert_quadrilateral(&sp, a, b).unwrap();
        prop_assert!(l.right_angle_residual().unwrap() < 1e-9);
        let (c, d, phi) = quad::lambert_closed_form(&sp, a, b).unwrap();
        prop_assert!((l.c - c).abs() < 1e-9 && (l.d - d).abs() < 1e-9 && (l.phi - phi).abs() < 1e-9);
        match sp.kind() {
            Kind::Spherical => prop_assert!(l.phi > FRAC_PI_2),
            Kind::Hyperbolic => prop_assert!(l.phi < FRAC_PI_2),
            Kind::Euclidean => prop_assert!((l.phi - FRAC_PI_2).abs() < 1e-12),
        }
    }

    #[test]
    fn saccheri_folds_onto_lambert(kind in 0usize..3, base in 0.1f64..1.4, leg in 0.05f64..1.4) {
        let sp = space(kind, 1.0);
        let f = quad::fold_lambert(&sp, base, leg).unwrap();
        prop_assert!(f.max_residual() < 1e-10);
        let (d, c) = f.saccheri.summit_angles;
        prop_assert!((d - c).abs() < 1e-10);
    }

    #[test]
    fn lambert_closes_before_the_threshold(a in 0.05f64..3.0, b in 0.05f64..3.0) {
        let sp = SpaceForm::hyperbolic(1.0);
        let t = quad::threshold_closed_form(&sp, a);
        prop_assume!((b - t).abs() > 1e-8);
        prop_assert_eq!(quad::lambert_quadrilateral(&sp, a, b).is_ok(), b < t);
    }

    #[test]
    fn parallelism_is_monotone(p in 0.0f64..6.0, dp in 0.01f64..1.0) {
        let sp = SpaceForm::hyperbolic(1.0);
        let a = parallelism::angle_of_parallelism(&sp, p).unwrap().angle;
        let b = parallelism::angle_of_parallelism(&sp, p + dp).unwrap().angle;
        prop_assert!(b < a && a <= FRAC_PI_2);
        prop_assert!((a - parallelism::parallelism_closed_form(&sp, p)).abs() < 1e-7);
    }

    #[test]
    fn chains_are_congruent_and_concyclic(kind in 0usize..2, s in 0.1f64..1.5, theta in 0.3..PI - 0.1, n in 3usize..12) {
        let sp = space(kind, 1.0);
        let chain = parallelism::build_chain(&sp, s, theta, n).unwrap();
        prop_assert_eq!(chain.vertices.len(), n + 1);
        prop_assert!(chain.residual().unwrap() < 1e-10);
        let c = parallelism::classify_chain_center(&chain).unwrap();
        prop_assert_eq!(c.tag(), "circle");
        prop_assert!(c.residual(&chain) < 1e-9);
    }

    #[test]
    fn hyperbolic_chains_switch_at_the_critical_side(theta in 1.5f64..3.0, u in 0.3f64..1.5) {
        prop_assume!((u - 1.0).abs() > 0.02);
        let sp = SpaceForm::hyperbolic(1.0);
        let s = u * parallelism::critical_side_closed_form(&sp, theta);
        let chain = parallelism::build_chain(&sp, s, theta, 6).unwrap();
        prop_assert!(chain.residual().unwrap() < 1e-10);
        let c = parallelism::classify_chain_center(&chain).unwrap();
        prop_assert_eq!(c.tag(), if u < 1.0 { "circle" } else { "equidistant" });
        prop_assert!(c.residual(&chain) < 1e-9);
    }

    #[test]
    fn transport_turns_spherical_into_hyperbolic(b in 0.01f64..3.0, c in 0.01f64..3.0, angle in 0.01..PI - 0.01) {
        let sp = SpaceForm::hyperbolic(1.0);
        let a = trig::side_from_sas(&sp, b, c, angle).unwrap();
        let r = duality::transport_check(IdentityId::LawOfCosines, &[a, b, c], &[angle], 1e-10).unwrap();
        prop_assert!(r.passed, "{:?}", r);
        let r = duality::transport_check(IdentityId::RightTrianglePythagoras, &[b, c], &[], 1e-10).unwrap();
        prop_assert!(r.passed, "{:?}", r);
        prop_assert!(duality::involution_check(IdentityId::LawOfCosines, &[a, b, c], &[angle]).unwrap() < 1e-13);
    }

    #[test]
    fn area_transport_matches_defect(r in 0.2f64..5.0, a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0) {
        let (x, y) = duality::area_transport(r, (a, b, c)).unwrap();
        prop_assert!((x - y).abs() <= 4.0 * f64::EPSILON * y.max(1.0));
    }

    #[test]
    fn rounding_is_idempotent(x in proptest::num::f64::NORMAL) {
        let once = round15(x);
        prop_assert_eq!(round15(once), once);
        prop_assert!((once - x).abs() <= 1e-14 * x.abs());
    }
}
