// One line per acceptance criterion; the process fails if any line is FAIL.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::path::{Path, PathBuf};
use std::process::Command;

use curvatura::duality::{self, IdentityId};
use curvatura::figure::{self, FigureId};
use curvatura::parallelism::{self, ChainCenter};
use curvatura::{oracle, quad, sample, trig, Error, Kind, SpaceForm};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn spaces() -> [SpaceForm; 3] {
    [
        SpaceForm::spherical(1.0),
        SpaceForm::euclidean(),
        SpaceForm::hyperbolic(1.0),
    ]
}

fn rng(label: &str, space: &SpaceForm) -> ChaCha8Rng {
    sample::stream(SEED, &format!("acceptance/{label}/{}", space.kind().name()))
}

fn u(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    sample::uniform(r, lo, hi)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn law_of_cosines() -> Outcome {
    let mut worst: f64 = 0.0;
    for space in spaces() {
        let mut r = rng("loc", &space);
        for i in 0..1000 {
            let (t, _) = sample::triangle(&space, &mut r);
            for (a, b, c, ang) in [
                (t.a, t.b, t.c, t.alpha),
                (t.b, t.c, t.a, t.beta),
                (t.c, t.a, t.b, t.gamma),
            ] {
                let res = trig::cosine_law_residual(&space, a, b, c, ang);
                worst = worst.max(res);
                ensure(res < 1e-9, || format!("{} #{i}: residual {res:e}", space.kind().name()))?;
            }
        }
    }
    Ok(format!("3000 triangles, worst relative residual {worst:.2e}"))
}

fn angle_sum() -> Outcome {
    for space in spaces() {
        let mut r = rng("angle-sum", &space);
        for i in 0..1000 {
            let (t, _) = sample::triangle(&space, &mut r);
            let ex = t.excess();
            let sign = if ex.abs() <= 1e-12 { 0.0 } else { ex.signum() };
            ensure(sign == space.sign(), || {
                format!("{} #{i}: excess {ex:e}", space.kind().name())
            })?;
        }
    }
    Ok("3000 triangles, 0 exceptions".into())
}

fn defect_area() -> Outcome {
    let mut worst: f64 = 0.0;
    for space in [SpaceForm::spherical(1.0), SpaceForm::hyperbolic(1.0)] {
        let mut r = rng("area", &space);
        for i in 0..50 {
            let (t, p) = sample::triangle(&space, &mut r);
            let by_angles = trig::area_from_angles(&space, t.alpha, t.beta, t.gamma)
                .map_err(|e| e.to_string())?;
            let integrated = oracle::integrated_area(&space, &p[0], &p[1], &p[2], 1e-9)
                .map_err(|e| e.to_string())?;
            let rel = (by_angles - integrated).abs() / by_angles;
            worst = worst.max(rel);
            ensure(rel < 1e-5, || format!("{} #{i}: relative error {rel:e}", space.kind().name()))?;
        }
    }
    Ok(format!("100 triangles, worst relative error {worst:.2e}"))
}

fn transport() -> Outcome {
    let space = SpaceForm::hyperbolic(1.0);
    let mut r = rng("transport", &space);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let (t, _) = sample::triangle(&space, &mut r);
        for (sides, ang) in [
            ([t.a, t.b, t.c], t.alpha),
            ([t.b, t.c, t.a], t.beta),
            ([t.c, t.a, t.b], t.gamma),
        ] {
            let rep = duality::transport_check(IdentityId::LawOfCosines, &sides, &[ang], 1e-10)
                .map_err(|e| e.to_string())?;
            worst = worst.max((rep.spherical_at_imaginary.0 - rep.hyperbolic_residual).abs());
            ensure(rep.passed, || format!("triangle #{i}: {rep:?}"))?;
        }
    }
    let mut area_gap: f64 = 0.0;
    for i in 0..1000 {
        let a = u(&mut r, 1e-3, PI / 3.0);
        let b = u(&mut r, 1e-3, PI / 3.0);
        let c = u(&mut r, 1e-3, PI - a - b - 1e-3);
        let (s, h) = duality::area_transport(1.0, (a, b, c)).map_err(|e| e.to_string())?;
        let gap = (s - h).abs();
        area_gap = area_gap.max(gap / h.max(1.0));
        ensure(gap <= 4.0 * f64::EPSILON * h.max(1.0), || {
            format!("angles #{i} ({a}, {b}, {c}): {s} vs {h}")
        })?;
    }
    Ok(format!(
        "1000 triangles, worst gap {worst:.2e}; 1000 area triples, worst {area_gap:.2e}"
    ))
}

fn median_ratio() -> Outcome {
    let mut euclid: f64 = 0.0;
    for space in spaces() {
        let mut r = rng("median", &space);
        let hi = if space.kind() == Kind::Spherical { 2.0 } else { 5.0 };
        for _ in 0..100 {
            let s = u(&mut r, 0.05, hi);
            let m = trig::equilateral_median_split(&space, s).map_err(|e| e.to_string())?;
            let d = m.df - m.af / 3.0;
            let ok = match space.kind() {
                Kind::Hyperbolic => d < 0.0,
                Kind::Spherical => d > 0.0,
                Kind::Euclidean => {
                    euclid = euclid.max(d.abs());
                    d.abs() < 1e-12
                }
            };
            ensure(ok, || format!("{} s={s}: DF−AF/3 = {d:e}", space.kind().name()))?;
        }
    }
    Ok(format!("300 sides, Euclidean |DF−AF/3| ≤ {euclid:.1e}"))
}

fn quad_trichotomy() -> Outcome {
    let mut fold: f64 = 0.0;
    for space in spaces() {
        let mut r = rng("quad", &space);
        let top = if space.kind() == Kind::Spherical { 1.45 } else { 2.5 };
        for i in 0..500 {
            let a = u(&mut r, 0.05, top);
            let b = match space.kind() {
                Kind::Hyperbolic => u(&mut r, 0.05, 0.95) * quad::threshold_closed_form(&space, a),
                _ => u(&mut r, 0.05, top),
            };
            let l = quad::lambert_quadrilateral(&space, a, b).map_err(|e| e.to_string())?;
            let d = l.phi - FRAC_PI_2;
            let sign = if d.abs() <= 1e-12 { 0.0 } else { d.signum() };
            ensure(sign == space.sign(), || {
                format!("{} #{i}: a={a} b={b} phi={}", space.kind().name(), l.phi)
            })?;
            let base = u(&mut r, 0.1, if space.kind() == Kind::Spherical { 1.45 } else { 3.0 });
            let leg = u(&mut r, 0.05, if space.kind() == Kind::Spherical { 1.45 } else { 2.0 });
            let f = quad::fold_lambert(&space, base, leg).map_err(|e| e.to_string())?;
            fold = fold.max(f.max_residual());
            ensure(f.max_residual() < 1e-10, || {
                format!("{} base={base} leg={leg}: fold {:e}", space.kind().name(), f.max_residual())
            })?;
        }
    }
    Ok(format!("1500 quadrilaterals, worst fold residual {fold:.2e}"))
}

fn strictly(xs: &[f64], cmp: impl Fn(f64, f64) -> bool) -> bool {
    xs.windows(2).all(|w| cmp(w[0], w[1]))
}

fn diffs(xs: &[f64]) -> Vec<f64> {
    xs.windows(2).map(|w| w[1] - w[0]).collect()
}

fn profiles() -> Outcome {
    // Sphere: 16 equal steps up to the quarter circle.
    let sphere = SpaceForm::spherical(1.0);
    let ts: Vec<f64> = (0..=16).map(|k| FRAC_PI_2 * k as f64 / 16.0).collect();
    let mut zero: f64 = 0.0;
    for h0 in [0.1, 0.5, 1.0, FRAC_PI_2 * 0.9] {
        let p = quad::perpendicular_profile(&sphere, h0, &ts).map_err(|e| e.to_string())?;
        let (h, phi) = (p.heights(), p.angles());
        zero = zero.max(h[16]);
        ensure(strictly(&h, |a, b| b < a), || format!("sphere h0={h0}: h not decreasing"))?;
        ensure(strictly(&diffs(&h), |a, b| b < a), || {
            format!("sphere h0={h0}: decrements not increasing")
        })?;
        ensure(h[16] <= 1e-9, || format!("sphere h0={h0}: h(πR/2) = {:e}", h[16]))?;
        ensure(strictly(&phi, |a, b| b > a) && phi[1..].iter().all(|x| *x > FRAC_PI_2), || {
            format!("sphere h0={h0}: foot angles {phi:?}")
        })?;
    }
    // Hyperbolic, h0 = 0.5 on t ≤ 20; second differences on t ≤ 10.
    let hyp = SpaceForm::hyperbolic(1.0);
    let ts: Vec<f64> = (0..=16).map(|k| 1.25 * k as f64).collect();
    let p = quad::perpendicular_profile(&hyp, 0.5, &ts).map_err(|e| e.to_string())?;
    let (h, phi) = (p.heights(), p.angles());
    ensure(strictly(&h, |a, b| b > a), || "hyperbolic: h not increasing".into())?;
    ensure(diffs(&diffs(&h[..9])).iter().all(|d| *d > 0.0), || {
        "hyperbolic: second differences".into()
    })?;
    let past = p.samples.iter().find(|s| s.h > 10.0).map(|s| s.t);
    ensure(past.is_some_and(|t| t <= 40.0), || format!("hyperbolic: h stays below 10 ({h:?})"))?;
    ensure(strictly(&phi, |a, b| b < a) && phi[1..].iter().all(|x| *x < FRAC_PI_2), || {
        format!("hyperbolic: foot angles {phi:?}")
    })?;
    // Euclidean plane.
    let flat = SpaceForm::euclidean();
    let ts: Vec<f64> = (0..=20).map(|k| k as f64).collect();
    let p = quad::perpendicular_profile(&flat, 1.0, &ts).map_err(|e| e.to_string())?;
    let dev = p
        .heights()
        .iter()
        .map(|x| (x - 1.0).abs())
        .chain(p.angles().iter().map(|x| (x - FRAC_PI_2).abs()))
        .fold(0.0, f64::max);
    ensure(dev <= 1e-12, || format!("euclidean deviation {dev:e}"))?;
    Ok(format!(
        "sphere h(πR/2) ≤ {zero:.1e}; hyperbolic h > 10 from t = {}; flat deviation {dev:.1e}",
        past.unwrap_or(f64::NAN)
    ))
}

fn threshold() -> Outcome {
    let space = SpaceForm::hyperbolic(1.0);
    let mut worst: f64 = 0.0;
    for h0 in [0.25, 0.5, 1.0, 2.0] {
        let t = quad::intersection_threshold(&space, h0).map_err(|e| e.to_string())?;
        let closed = (1.0 / h0.cosh()).atanh();
        worst = worst.max((t - closed).abs());
        ensure((t - closed).abs() <= 1e-8, || format!("h0={h0}: t*={t}, closed {closed}"))?;
        let meets = |x: f64| -> Result<bool, String> {
            Ok(quad::erected_perpendicular(&space, h0, x)
                .map_err(|e| e.to_string())?
                .class
                .is_intersecting())
        };
        ensure(meets(t - 5e-9)? && !meets(t + 5e-9)?, || format!("h0={h0}: no flip across t*"))?;
    }
    let mut r = rng("threshold", &space);
    let mut open = 0;
    for i in 0..200 {
        let a = u(&mut r, 0.05, 3.0);
        let b = u(&mut r, 0.05, 3.0);
        let ta = quad::intersection_threshold(&space, a).map_err(|e| e.to_string())?;
        if (b - ta).abs() < 1e-8 {
            continue;
        }
        let closes = match quad::lambert_quadrilateral(&space, a, b) {
            Ok(_) => true,
            Err(Error::NoFourthVertex(_)) => false,
            Err(e) => return Err(format!("#{i}: {e}")),
        };
        open += usize::from(!closes);
        ensure(closes == (b < ta), || format!("#{i}: a={a} b={b} t*={ta} closes={closes}"))?;
    }
    Ok(format!("worst |t* − closed form| {worst:.1e}; 200 Lambert samples ({open} open)"))
}

fn parallelism_angle() -> Outcome {
    let space = SpaceForm::hyperbolic(1.0);
    let at = |p: f64| -> Result<f64, String> {
        Ok(parallelism::angle_of_parallelism(&space, p).map_err(|e| e.to_string())?.angle)
    };
    let zero = at(0.0)?;
    ensure(zero == FRAC_PI_2, || format!("Π(0) = {zero}"))?;
    let grid: Vec<f64> = (0..50).map(|k| 0.1 * k as f64).collect::<Vec<_>>();
    let vals = grid.iter().map(|p| at(*p)).collect::<Result<Vec<_>, _>>()?;
    ensure(strictly(&vals, |a, b| b < a), || "Π not strictly decreasing".into())?;
    let mut worst: f64 = 0.0;
    for p in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let gap = (at(p)? - 2.0 * (-p).exp().atan()).abs();
        worst = worst.max(gap);
        ensure(gap <= 1e-7, || format!("p={p}: gap {gap:e}"))?;
    }
    Ok(format!("Π(0) = π/2, 50-point grid decreasing, worst gap {worst:.1e}"))
}

fn canonical_unit() -> Outcome {
    let mut trip: f64 = 0.0;
    for space in [SpaceForm::spherical(1.0), SpaceForm::hyperbolic(1.0)] {
        let mut r = rng("canonical", &space);
        for _ in 0..500 {
            let angle = match space.kind() {
                Kind::Hyperbolic => u(&mut r, 1e-3, FRAC_PI_3 - 1e-6),
                _ => u(&mut r, FRAC_PI_3 + 1e-6, PI - 1e-3),
            };
            let s = trig::equilateral_side_for_angle(&space, angle).map_err(|e| e.to_string())?;
            let back = trig::angles_from_sss(&space, s, s, s).map_err(|e| e.to_string())?.0;
            trip = trip.max((back - angle).abs());
            ensure((back - angle).abs() < 1e-10, || {
                format!("{} angle {angle}: round trip {:e}", space.kind().name(), back - angle)
            })?;
        }
    }
    let space = SpaceForm::hyperbolic(1.0);
    let gauss = (59.0 + 59.0 / 60.0 + 59.9999 / 3600.0f64).to_radians();
    let s = trig::equilateral_side_for_angle(&space, gauss).map_err(|e| e.to_string())?;
    let estimate = (4.0 * 1.4544e-9 / 3f64.sqrt()).sqrt();
    let rel = (s - estimate).abs() / estimate;
    ensure(rel < 0.01, || format!("Gauss's angle: s = {s:e}, estimate {estimate:e}"))?;
    Ok(format!("worst round trip {trip:.1e}; Gauss's angle s = {s:.4e} ({:.2}% off)", 100.0 * rel))
}

fn chains() -> Outcome {
    let flat = SpaceForm::euclidean();
    let mut r = rng("chains", &flat);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let s = u(&mut r, 0.1, 3.0);
        let theta = u(&mut r, 0.2, PI - 0.05);
        let n = 3 + (u(&mut r, 0.0, 10.0) as usize);
        let chain = parallelism::build_chain(&flat, s, theta, n).map_err(|e| e.to_string())?;
        let c = parallelism::classify_chain_center(&chain).map_err(|e| e.to_string())?;
        let res = c.residual(&chain);
        worst = worst.max(res);
        ensure(matches!(c, ChainCenter::Circle { .. }) && res <= 1e-9, || {
            format!("#{i} s={s} θ={theta} n={n}: {} residual {res:e}", c.tag())
        })?;
    }
    let hyp = SpaceForm::hyperbolic(1.0);
    let (mut circles, mut equid) = (0, 0);
    let mut eq_worst: f64 = 0.0;
    for theta in [1.6, 2.0, 2.0 * FRAC_PI_3, 2.5, 2.9] {
        let crit = parallelism::critical_side(&hyp, theta).map_err(|e| e.to_string())?;
        let closed = parallelism::critical_side_closed_form(&hyp, theta);
        ensure((crit - closed).abs() <= 1e-6, || format!("θ={theta}: s_crit {crit} vs {closed}"))?;
        for f in [0.5, 0.9, 1.1, 1.4] {
            let chain = parallelism::build_chain(&hyp, f * crit, theta, 8).map_err(|e| e.to_string())?;
            let c = parallelism::classify_chain_center(&chain).map_err(|e| e.to_string())?;
            match (&c, f < 1.0) {
                (ChainCenter::Circle { .. }, true) => circles += 1,
                (ChainCenter::Equidistant { .. }, false) => {
                    equid += 1;
                    eq_worst = eq_worst.max(c.residual(&chain));
                }
                _ => return Err(format!("θ={theta} s={}: {}", f * crit, c.tag())),
            }
            ensure(c.residual(&chain) <= 1e-9, || {
                format!("θ={theta} s={}: residual {:e}", f * crit, c.residual(&chain))
            })?;
        }
    }
    ensure(circles > 0 && equid > 0, || "both outcomes required".into())?;
    Ok(format!(
        "Euclidean worst {worst:.1e}; hyperbolic {circles} circles, {equid} equidistants (worst {eq_worst:.1e})"
    ))
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_curvatura")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn figure_cases() -> Vec<(FigureId, Value)> {
    let h = json!({"kind": "hyperbolic", "radius": 1});
    let s = json!({"kind": "spherical", "radius": 1});
    let e = json!({"kind": "euclidean"});
    let third = 2.0 * FRAC_PI_3;
    vec![
        (FigureId::Fig1, json!({"space": h})),
        (FigureId::Fig1, json!({"space": s})),
        (FigureId::Fig2, json!({"space": h, "p": 1})),
        (FigureId::Fig3, json!({"space": e, "s": 1, "theta": third, "n": 6})),
        (FigureId::Fig3, json!({"space": h, "s": 0.1, "theta": third, "n": 12})),
        (FigureId::Fig3, json!({"space": h, "s": 2.0, "theta": third, "n": 8})),
        (FigureId::Fig3, json!({"space": s, "s": 0.5, "theta": third, "n": 12})),
        (FigureId::Fig4, json!({"space": h})),
        (FigureId::Fig6, json!({"space": h, "base": 1, "leg": 0.3})),
        (FigureId::Fig6, json!({"space": s, "base": 1, "leg": 0.3})),
        (FigureId::Fig7, json!({"space": h, "h0": 1, "t": [0.3, 0.6, 0.75, 0.8, 1.0]})),
        (FigureId::Profile, json!({"space": s, "h0": 0.5, "t": [0.4, 0.8, 1.2, FRAC_PI_2]})),
        (FigureId::Profile, json!({"space": h, "h0": 0.5, "t": [0.5, 1.0, 1.5]})),
        (FigureId::Profile, json!({"space": e, "h0": 1, "t": [1, 2, 3]})),
    ]
}

fn cli() -> Outcome {
    let mut names: Vec<PathBuf> = std::fs::read_dir(golden_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    names.sort();
    ensure(names.len() == 12, || format!("corpus has {} requests", names.len()))?;
    for req in &names {
        let out = Command::new(bin()).arg("solve").arg(req).output().map_err(|e| e.to_string())?;
        let want = std::fs::read(req.with_extension("expected")).map_err(|e| e.to_string())?;
        ensure(out.status.success() && out.stdout == want, || {
            format!("{} differs from its golden file", req.display())
        })?;
    }
    let check = Command::new(bin())
        .args(["check", "--suite", "all"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(check.status.code() == Some(0), || {
        format!("check --suite all exited {:?}", check.status.code())
    })?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases = figure_cases();
    for (k, (id, params)) in cases.iter().enumerate() {
        let pfile = dir.path().join(format!("p{k}.json"));
        let svg = dir.path().join(format!("f{k}.svg"));
        std::fs::write(&pfile, params.to_string()).map_err(|e| e.to_string())?;
        let st = Command::new(bin())
            .args(["figure", "--id", id.name(), "--params"])
            .arg(&pfile)
            .arg("--out")
            .arg(&svg)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(st.success(), || format!("figure {} {params} exited {:?}", id.name(), st.code()))?;
        let text = std::fs::read_to_string(&svg).map_err(|e| e.to_string())?;
        let doc = roxmltree::Document::parse(&text)
            .map_err(|e| format!("{} {params}: {e}", id.name()))?;
        let group = doc
            .descendants()
            .find(|n| n.attribute("id") == Some("scene"))
            .ok_or_else(|| format!("{}: no scene group", id.name()))?;
        let prims = figure::scene(*id, params).map_err(|e| e.to_string())?.prims.len();
        let elems = group.children().filter(|n| n.is_element()).count();
        ensure(elems == prims, || format!("{} {params}: {elems} elements for {prims} primitives", id.name()))?;
    }
    Ok(format!("12 golden responses identical, check all exit 0, {} SVGs well-formed", cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("law of cosines", law_of_cosines),
        ("angle-sum trichotomy", angle_sum),
        ("defect/excess area", defect_area),
        ("imaginary-radius transport", transport),
        ("median ratio", median_ratio),
        ("quadrilateral trichotomy and fold", quad_trichotomy),
        ("perpendicular profiles", profiles),
        ("intersection threshold", threshold),
        ("angle of parallelism", parallelism_angle),
        ("canonical unit", canonical_unit),
        ("chains", chains),
        ("cli", cli),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("criterion {:2} PASS  {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name}: {msg}", k + 1);
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
