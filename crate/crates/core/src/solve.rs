//! JSON task interface: one request in, one response out.
//!
//! ```json
//! {"space": {"kind": "hyperbolic", "radius": 1}, "task": "lambert-quad", "params": {"a": 1, "b": 0.3}}
//! ```
//!
//! Module errors become `{"ok": false, "error": {"code", "detail"}}`; only a
//! malformed request is an `Err`.

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::space::{Kind, Point, SpaceForm};
use crate::{parallelism, quad, trig};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Request {
    space: SpaceSpec,
    task: Task,
    #[serde(default)]
    params: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub kind: Kind,
    pub radius: Option<f64>,
}

impl SpaceSpec {
    pub fn build(&self) -> Result<SpaceForm> {
        SpaceForm::new(self.kind, self.radius.unwrap_or(1.0))
    }
}

#[derive(Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum Task {
    TriangleSss,
    TriangleSas,
    LambertQuad,
    Saccheri,
    Profile,
    ParallelismAngle,
    CanonicalUnit,
    Chain,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Sss {
    a: f64,
    b: f64,
    c: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Sas {
    b: f64,
    c: f64,
    angle: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Lambert {
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Saccheri {
    base: f64,
    leg: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Profile {
    h0: f64,
    t: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Parallelism {
    p: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonicalUnit {
    angle: Option<f64>,
    angle_deg_min_sec: Option<(f64, f64, f64)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Chain {
    s: f64,
    theta: f64,
    n: usize,
}

fn params<T: DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Schema(format!("params: {e}")))
}

/// Rounds to 15 significant digits so that serialized numbers do not depend
/// on last-bit noise.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Applies [`round15`] to every number in a JSON tree; non-finite numbers
/// become `null`.
pub fn round_tree(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => serde_json::Number::from_f64(round15(x))
                .map(Value::Number)
                .unwrap_or(Value::Null),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_tree).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_tree(v))).collect()),
        other => other,
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn coords(space: &SpaceForm, p: &Point) -> Value {
    Value::Array(space.coords(p).into_iter().map(num).collect())
}

fn triangle_json(t: &trig::Triangle) -> Value {
    let mut m = Map::new();
    for (k, v) in [
        ("a", t.a),
        ("b", t.b),
        ("c", t.c),
        ("alpha", t.alpha),
        ("beta", t.beta),
        ("gamma", t.gamma),
        ("angle_sum", t.angle_sum()),
    ] {
        m.insert(k.into(), num(v));
    }
    m.insert("area".into(), t.area().map(num).unwrap_or(Value::Null));
    Value::Object(m)
}

fn run(space: &SpaceForm, task: Task, p: &Value) -> Result<std::result::Result<Value, Error>> {
    // Outer Err: schema problem. Inner Err: the geometry refused.
    Ok(match task {
        Task::TriangleSss => {
            let q: Sss = params(p)?;
            trig::Triangle::from_sides(space, q.a, q.b, q.c).map(|t| triangle_json(&t))
        }
        Task::TriangleSas => {
            let q: Sas = params(p)?;
            trig::side_from_sas(space, q.b, q.c, q.angle)
                .and_then(|a| trig::Triangle::from_sides(space, a, q.b, q.c))
                .map(|t| triangle_json(&t))
        }
        Task::LambertQuad => {
            let q: Lambert = params(p)?;
            quad::lambert_quadrilateral(space, q.a, q.b).map(|l| {
                json!({
                    "a": num(l.a), "b": num(l.b), "c": num(l.c), "d": num(l.d), "phi": num(l.phi),
                    "vertices": l.vertices.iter().map(|v| coords(space, v)).collect::<Vec<_>>(),
                })
            })
        }
        Task::Saccheri => {
            let q: Saccheri = params(p)?;
            quad::fold_lambert(space, q.base, q.leg).map(|f| {
                let s = f.saccheri;
                json!({
                    "base": num(s.base), "leg": num(s.leg), "summit": num(s.summit),
                    "summit_angle": num(s.summit_angle),
                    "altitude": num(f.lambert.a),
                    "fold_residual": num(f.max_residual()),
                    "vertices": s.vertices.iter().map(|v| coords(space, v)).collect::<Vec<_>>(),
                })
            })
        }
        Task::Profile => {
            let q: Profile = params(p)?;
            quad::perpendicular_profile(space, q.h0, &q.t).map(|pr| {
                let samples: Vec<Value> = pr
                    .samples
                    .iter()
                    .map(|s| json!({"t": num(s.t), "h": num(s.h), "phi": num(s.phi)}))
                    .collect();
                json!({
                    "h0": num(pr.h0),
                    "samples": samples,
                    "closed_form_residual": num(pr.closed_form_residual),
                })
            })
        }
        Task::ParallelismAngle => {
            let q: Parallelism = params(p)?;
            parallelism::angle_of_parallelism(space, q.p).map(|a| {
                json!({
                    "p": num(q.p),
                    "angle": num(a.angle),
                    "closed_form": num(if a.euclidean { std::f64::consts::FRAC_PI_2 } else {
                        parallelism::parallelism_closed_form(space, q.p)
                    }),
                    "euclidean": a.euclidean,
                })
            })
        }
        Task::CanonicalUnit => {
            let q: CanonicalUnit = params(p)?;
            let angle = match (q.angle, q.angle_deg_min_sec) {
                (Some(a), None) => a,
                (None, Some((d, m, s))) => (d + m / 60.0 + s / 3600.0).to_radians(),
                _ => {
                    return Err(Error::Schema(
                        "params: give exactly one of `angle` and `angle_deg_min_sec`".into(),
                    ))
                }
            };
            trig::equilateral_side_for_angle(space, angle)
                .map(|s| json!({"angle": num(angle), "side": num(s)}))
        }
        Task::Chain => {
            let q: Chain = params(p)?;
            if q.n > 10_000 {
                return Err(Error::Schema("params: n must be at most 10000".into()));
            }
            parallelism::build_chain(space, q.s, q.theta, q.n).and_then(|c| {
                let center = parallelism::classify_chain_center(&c)?;
                let mut out = json!({
                    "locus": center.tag(),
                    "residual": num(center.residual(&c)),
                    "vertices": c.vertices.iter().map(|v| coords(space, v)).collect::<Vec<_>>(),
                });
                match &center {
                    parallelism::ChainCenter::Circle { center, radius } => {
                        out["center"] = coords(space, center);
                        out["radius"] = num(*radius);
                    }
                    parallelism::ChainCenter::Equidistant { distance, .. } => {
                        out["distance"] = num(*distance);
                    }
                    parallelism::ChainCenter::Horocycle => {}
                }
                if space.kind() == Kind::Hyperbolic {
                    out["critical_side"] = num(parallelism::critical_side(space, q.theta)?);
                }
                Ok(out)
            })
        }
    })
}

/// Parses and answers a request document.
pub fn solve_str(text: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(format!("{e}")))?;
    solve(&v)
}

pub fn solve(request: &Value) -> Result<Value> {
    solve_with_tol(request, None)
}

/// As [`solve`], with the space's postcondition tolerance replaced by `tol`.
pub fn solve_with_tol(request: &Value, tol: Option<f64>) -> Result<Value> {
    let req: Request =
        serde_json::from_value(request.clone()).map_err(|e| Error::Schema(format!("{e}")))?;
    let mut space = req.space.build().map_err(|e| Error::Schema(e.to_string()))?;
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Schema(format!("tolerance must be positive, got {t}")));
        }
        space = space.with_tol(t);
    }
    let out = match run(&space, req.task, &req.params)? {
        Ok(result) => json!({"ok": true, "result": result}),
        Err(e) => json!({"ok": false, "error": {"code": e.code(), "detail": e.to_string()}}),
    };
    Ok(round_tree(out))
}

/// The error document for a malformed request.
pub fn schema_error(e: &Error) -> Value {
    json!({"ok": false, "error": {"code": e.code(), "detail": e.to_string()}})
}
