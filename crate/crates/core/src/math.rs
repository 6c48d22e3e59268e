//! Thin wrappers over `libm` so the numeric code reads like `std` float code.

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Values below this are flushed to zero so that tails never feed denormals
/// into copula arguments.
pub const TAIL_FLOOR: f64 = 1e-300;

#[inline]
pub fn saturate(p: f64) -> f64 {
    if p < TAIL_FLOOR {
        0.0
    } else {
        p
    }
}
