//! Random points, triangles and parameters for property checks.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::space::{Kind, Point, SpaceForm};
use crate::trig::Triangle;

/// Deterministic stream for a `(seed, label)` pair (FNV-1a over both).
pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in seed.to_le_bytes().iter().chain(label.as_bytes()) {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Typical reduced scale of sampled configurations: the sphere keeps to a
/// hemisphere, the other spaces to a disk of radius `reach·R`.
pub fn reach(space: &SpaceForm) -> f64 {
    match space.kind() {
        Kind::Spherical => FRAC_PI_2 * 0.9 * space.radius(),
        _ => 2.5 * space.radius(),
    }
}

/// Random point at geodesic distance at most `max_r` from the origin.
pub fn point<R: Rng>(space: &SpaceForm, rng: &mut R, max_r: f64) -> Point {
    let dir = space.rotate(&space.origin_dir(), rng.gen_range(0.0..2.0 * PI));
    space.exp_map(&dir, max_r * rng.gen::<f64>().sqrt())
}

/// Random non-degenerate triangle with vertices within `reach` of the origin;
/// every side and angle exceeds `1e-2` (scaled by `R` for sides).
pub fn triangle<R: Rng>(space: &SpaceForm, rng: &mut R) -> (Triangle, [Point; 3]) {
    let r = reach(space);
    loop {
        let pts = [point(space, rng, r), point(space, rng, r), point(space, rng, r)];
        let Ok(t) = Triangle::from_points(space, &pts[0], &pts[1], &pts[2]) else {
            continue;
        };
        let min_side = t.a.min(t.b).min(t.c) / space.radius();
        let min_angle = t.alpha.min(t.beta).min(t.gamma);
        if min_side > 1e-2 && min_angle > 1e-2 {
            return (t, pts);
        }
    }
}

/// Uniform value in `[lo, hi)`.
pub fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}
