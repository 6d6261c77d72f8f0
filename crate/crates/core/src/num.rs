//! Float helpers that work without `std`.

/// Relative tolerance used by validators when comparing floating distances.
pub const REL_TOL: f64 = 1e-9;

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// `a <= b` up to [`REL_TOL`] relative slack.
#[inline]
pub fn approx_le(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a <= b;
    }
    a <= b + REL_TOL * fmax(a.abs(), b.abs())
}

/// `a == b` up to [`REL_TOL`] relative slack.
#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    approx_le(a, b) && approx_le(b, a)
}

#[inline]
pub fn fmax(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}

#[inline]
pub fn fmin(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}

/// Ceiling of a positive quantity, robust to values a few ulps above an integer.
pub fn ceil_tol(x: f64) -> f64 {
    let r = libm::round(x);
    if (x - r).abs() <= 1e-9 * fmax(1.0, x.abs()) {
        r
    } else {
        ceil(x)
    }
}

/// Floor, robust to values a few ulps below an integer.
pub fn floor_tol(x: f64) -> f64 {
    let r = libm::round(x);
    if (x - r).abs() <= 1e-9 * fmax(1.0, x.abs()) {
        r
    } else {
        floor(x)
    }
}
