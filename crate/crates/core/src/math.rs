// Transcendental functions for `no_std` builds.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub(crate) fn asin(x: f64) -> f64 {
    libm::asin(x)
}

#[inline]
pub(crate) fn acos(x: f64) -> f64 {
    libm::acos(x)
}

/// Roots of `a r^2 - 2 b r + c = 0` with discriminant `d = b^2 - a c`
/// already known to be non-negative. The large-magnitude root is computed
/// first and the other one from the product of the roots.
pub(crate) fn half_quadratic_roots(a: f64, b: f64, c: f64, d: f64) -> [f64; 2] {
    let s = sqrt(d.max(0.0));
    let q = if b >= 0.0 { b + s } else { b - s };
    if q == 0.0 {
        // b = 0 and d = 0, hence c = 0: double root at zero.
        return [0.0, 0.0];
    }
    [q / a, c / q]
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}
