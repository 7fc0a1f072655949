//! Constant-curvature plane geometry: the sphere, the Euclidean plane and the
//! hyperbolic plane behind one API, with the classical constructions on
//! triangles, Lambert and Saccheri quadrilaterals, parallelism and polygon
//! chains, plus tools to check the classical propositions numerically.

pub mod check;
pub mod duality;
pub mod error;
pub mod figure;
pub mod sample;
pub mod solve;
pub mod space;
pub mod parallelism;
pub mod oracle;
pub mod quad;
pub mod trig;

pub use error::{Error, Result};
pub use space::{Kind, Line, LinePairClass, Motion, Point, SpaceForm, TangentDir, Vec3};
