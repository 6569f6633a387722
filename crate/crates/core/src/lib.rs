//! Refracting profiles built as envelopes of families of Cartesian ovals.
//!
//! Given a point source `F` at the origin and a wavefront `W` (a plane
//! curve), every point `x` of `W` defines a complete Cartesian oval with
//! foci `F` and `x`. The envelope of that family, for a fixed optical path
//! constant `2a`, is a refracting profile: rays leaving `F` are refracted
//! by it into the normal lines of `W`.
//!
//! The crate is `no_std` (it needs `alloc`) and is split as follows:
//!
//! * [`geom`]: plane vectors, wavefront curves, normals and curvature.
//! * [`oval`]: complete Cartesian ovals: residuals, membership, polar form.
//! * [`profile`]: envelope sheets as normal offsets of `W`, singularities.
//! * [`caustic`]: evolute of `W`, sweep parameters, reconstruction of the
//!   sheets from caustic data alone.
//! * [`optics`]: Snell refraction and the ray-tracing checks used to
//!   validate constructed sheets.
//!
//! Everything here works in the meridian plane; surfaces of revolution are
//! obtained by revolving the curves about the focal axis.

#![no_std]
#![warn(missing_debug_implementations)]
// `!(x > y)` is used on purpose so that NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod caustic;
pub mod geom;
pub mod optics;
pub mod oval;
pub mod profile;

pub use error::{Error, Result};
pub use geom::{Curve, Grid, Orientation, Placement, Vec2, WavefrontSample};
pub use oval::{Branch, Media, OvalSpec};
pub use profile::{Profile, Sheet, SheetKey, SheetPoint, Side, Tolerances};
