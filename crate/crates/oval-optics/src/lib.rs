//! Scene files, CSV and SVG output, and the `oval-optics` command-line tool
//! built on `oval-optics-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csvio;
pub mod error;
pub mod figures;
pub mod pipeline;
pub mod scene;
pub mod summary;
pub mod svg;

pub use error::{AppError, Result};
pub use pipeline::{run, RunReport};
pub use scene::{load_scene, parse_scene, Scene, Task};
pub use summary::{Check, Status, ValidationSummary};
