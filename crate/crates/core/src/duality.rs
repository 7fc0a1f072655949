//! Spherical identities evaluated at imaginary sides (`x → i·x`), compared
//! with their hyperbolic counterparts. Complex arithmetic stays in here.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::SpaceForm;
use crate::trig;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Registered identities, each with a spherical and a hyperbolic residual
/// form in reduced lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
#[non_exhaustive]
pub enum IdentityId {
    /// Lengths `[a, b, c]`, angles `[A]` (opposite `a`).
    LawOfCosines,
    /// Lengths `[a, b]` (legs; the hypotenuse is completed hyperbolically)
    /// or `[a, b, c]`; no angles.
    RightTrianglePythagoras,
    /// Lengths `[r, area]`, angles `[α, β, γ]`. The radius plays the role of
    /// the transported length.
    GirardArea,
}

impl IdentityId {
    pub const ALL: [IdentityId; 3] = [
        IdentityId::LawOfCosines,
        IdentityId::RightTrianglePythagoras,
        IdentityId::GirardArea,
    ];

    fn arity(self) -> (usize, usize) {
        match self {
            IdentityId::LawOfCosines => (3, 1),
            IdentityId::RightTrianglePythagoras => (3, 0),
            IdentityId::GirardArea => (2, 3),
        }
    }

    /// Spherical residual (left minus right) at complex lengths, together with
    /// the magnitude of its terms.
    fn spherical(self, x: &[Complex64], angles: &[f64]) -> (Complex64, f64) {
        match self {
            IdentityId::LawOfCosines => {
                let (a, b, c) = (x[0], x[1], x[2]);
                let lhs = a.cos();
                let t1 = b.cos() * c.cos();
                let t2 = b.sin() * c.sin() * angles[0].cos();
                (lhs - (t1 + t2), lhs.norm().max(t1.norm()).max(t2.norm()))
            }
            IdentityId::RightTrianglePythagoras => {
                let lhs = x[2].cos();
                let rhs = x[0].cos() * x[1].cos();
                (lhs - rhs, lhs.norm().max(rhs.norm()))
            }
            IdentityId::GirardArea => {
                let (r, area) = (x[0], x[1]);
                let rhs = r * r * (angles.iter().sum::<f64>() - PI);
                (area - rhs, area.norm().max(rhs.norm()))
            }
        }
    }

    fn hyperbolic(self, x: &[f64], angles: &[f64]) -> f64 {
        match self {
            IdentityId::LawOfCosines => {
                let (a, b, c) = (x[0], x[1], x[2]);
                a.cosh() - (b.cosh() * c.cosh() - b.sinh() * c.sinh() * angles[0].cos())
            }
            IdentityId::RightTrianglePythagoras => x[2].cosh() - x[0].cosh() * x[1].cosh(),
            IdentityId::GirardArea => {
                x[1] - x[0] * x[0] * (PI - angles.iter().sum::<f64>())
            }
        }
    }
}

/// Outcome of one transport check. Residuals are relative to the largest
/// term of the identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransportReport {
    pub identity: IdentityId,
    pub lengths: Vec<f64>,
    pub angles: Vec<f64>,
    /// Spherical residual at `i·x`, as `(re, im)`.
    pub spherical_at_imaginary: (f64, f64),
    pub hyperbolic_residual: f64,
    pub max_imag_part: f64,
    pub passed: bool,
}

fn complete(id: IdentityId, lengths: &[f64], angles: &[f64]) -> Result<Vec<f64>> {
    let (nl, na) = id.arity();
    let mut x = lengths.to_vec();
    if id == IdentityId::RightTrianglePythagoras && x.len() == 2 {
        x.push((x[0].cosh() * x[1].cosh()).acosh());
    }
    if x.len() != nl || angles.len() != na {
        return Err(Error::Domain(format!(
            "{id:?} takes {nl} lengths and {na} angles, got {} and {}",
            x.len(),
            angles.len()
        )));
    }
    if x.iter().chain(angles).any(|v| !v.is_finite()) {
        return Err(Error::Domain("inputs must be finite".into()));
    }
    Ok(x)
}

// x → i·x on the lengths; the area entry of Girard's identity is a result and
// stays put.
fn transport(id: IdentityId, x: &[Complex64]) -> Vec<Complex64> {
    x.iter()
        .enumerate()
        .map(|(k, &v)| match (id, k) {
            (IdentityId::GirardArea, 1) => v,
            _ => I * v,
        })
        .collect()
}

/// Evaluates the spherical form with every length replaced by `i·x` and the
/// hyperbolic form at `x`; they must agree within `tol` with an imaginary
/// part below `tol`.
pub fn transport_check(
    id: IdentityId,
    lengths: &[f64],
    angles: &[f64],
    tol: f64,
) -> Result<TransportReport> {
    let x = complete(id, lengths, angles)?;
    let real: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let ix = transport(id, &real);
    let (sph, scale) = id.spherical(&ix, angles);
    if !(sph.re.is_finite() && sph.im.is_finite()) {
        return Err(Error::Branch(format!("{id:?} evaluated to {sph}")));
    }
    let scale = scale.max(f64::MIN_POSITIVE);
    let sph = sph / scale;
    let hyp = id.hyperbolic(&x, angles) / scale;
    let imag = sph.im.abs();
    Ok(TransportReport {
        identity: id,
        lengths: x,
        angles: angles.to_vec(),
        spherical_at_imaginary: (sph.re, sph.im),
        hyperbolic_residual: hyp,
        max_imag_part: imag,
        passed: (sph.re - hyp).abs() <= tol && imag < tol,
    })
}

/// Applies `x → i·x` twice, which negates every length; the spherical
/// residual must be unchanged. Returns the relative difference.
pub fn involution_check(id: IdentityId, lengths: &[f64], angles: &[f64]) -> Result<f64> {
    let x = complete_spherical(id, lengths, angles)?;
    let once: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let twice = transport(id, &transport(id, &once));
    let (r0, scale) = id.spherical(&once, angles);
    let (r2, _) = id.spherical(&twice, angles);
    Ok((r2 - r0).norm() / scale.max(f64::MIN_POSITIVE))
}

fn complete_spherical(id: IdentityId, lengths: &[f64], angles: &[f64]) -> Result<Vec<f64>> {
    let mut x = lengths.to_vec();
    if id == IdentityId::RightTrianglePythagoras && x.len() == 2 {
        x.push((x[0].cos() * x[1].cos()).acos());
    }
    complete(id, &x, angles)
}

/// Girard's spherical area `r²(α+β+γ−π)` evaluated at radius `i·R`, and the
/// hyperbolic area of a triangle with the same angles.
pub fn area_transport(radius: f64, angles: (f64, f64, f64)) -> Result<(f64, f64)> {
    let (a, b, c) = angles;
    let r = I * radius;
    let at_imaginary = r * r * (a + b + c - PI);
    if at_imaginary.im.abs() > 0.0 {
        return Err(Error::Branch(format!("area {at_imaginary}")));
    }
    let space = SpaceForm::new(crate::Kind::Hyperbolic, radius)?;
    let hyperbolic = trig::area_from_angles(&space, a, b, c)?;
    Ok((at_imaginary.re, hyperbolic))
}

/// Angles of a hyperbolic triangle with reduced sides `(a, b, c)` obtained from
/// the spherical angle formula `cos A = (cos a − cos b cos c)/(sin b sin c)`
/// at imaginary sides.
pub fn transported_angles(a: f64, b: f64, c: f64) -> Result<(f64, f64, f64)> {
    let one = |a: f64, b: f64, c: f64| -> Result<f64> {
        let (a, b, c) = (I * a, I * b, I * c);
        let cos_a = (a.cos() - b.cos() * c.cos()) / (b.sin() * c.sin());
        if !(cos_a.im.abs() < 1e-12 && cos_a.re.abs() <= 1.0 + 1e-12) {
            return Err(Error::Branch(format!("cos A = {cos_a}")));
        }
        Ok(cos_a.re.clamp(-1.0, 1.0).acos())
    };
    Ok((one(a, b, c)?, one(b, c, a)?, one(c, a, b)?))
}
