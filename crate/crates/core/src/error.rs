use core::fmt;

use crate::oval::Branch;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Curve parameter outside the curve's domain (or not finite).
    Domain {
        t: f64,
    },
    /// The curve derivative vanishes at `t`.
    DegenerateParametrization {
        t: f64,
    },
    /// `n1 == n2`: the oval quadratics lose their leading term.
    IndicesEqual,
    /// A construction produced no point at all.
    EmptyProfile,
    /// The requested oval branch has no real points.
    EmptyBranch(Branch),
    /// Residual gradient vanishes (point at a focus).
    ZeroGradient,
    /// Curvature below the flatness threshold; centre of curvature at infinity.
    FlatPoint {
        t: f64,
    },
    /// Two distinct wavefront points share one centre of curvature.
    DegenerateCaustic {
        first: usize,
        second: usize,
    },
    /// No transmitted ray exists.
    TotalInternalReflection,
    /// A traced ray misses the second sheet of a two-stage trace.
    GeometryMismatch {
        index: usize,
    },
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { t } => write!(f, "parameter t = {t} outside the curve domain"),
            Error::DegenerateParametrization { t } => {
                write!(f, "curve derivative vanishes at t = {t}")
            }
            Error::IndicesEqual => f.write_str("refractive indices n1 and n2 must differ"),
            Error::EmptyProfile => f.write_str("no sample produced a profile point"),
            Error::EmptyBranch(b) => write!(f, "{b:?} branch has no real points"),
            Error::ZeroGradient => f.write_str("oval residual gradient vanishes at this point"),
            Error::FlatPoint { t } => write!(f, "wavefront is flat at t = {t}"),
            Error::DegenerateCaustic { first, second } => write!(
                f,
                "samples {first} and {second} share a centre of curvature (degenerate caustic)"
            ),
            Error::TotalInternalReflection => f.write_str("total internal reflection"),
            Error::GeometryMismatch { index } => {
                write!(f, "ray from sample {index} misses the second sheet")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
