// Thin wrappers so the crate builds without std.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
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
pub(crate) fn cbrt(x: f64) -> f64 {
    libm::cbrt(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

/// `x^n` by repeated squaring.
pub(crate) fn powi(x: f64, n: i32) -> f64 {
    let mut base = if n < 0 { 1.0 / x } else { x };
    let mut e = n.unsigned_abs();
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::powi;

    #[test]
    fn integer_powers() {
        assert_eq!(powi(2.0, 10), 1024.0);
        assert_eq!(powi(0.5, -3), 8.0);
        assert_eq!(powi(7.3, 0), 1.0);
        assert_eq!(powi(f64::INFINITY, -4), 0.0);
        assert!((powi(1.1, 7) - 1.1 * 1.1 * 1.1 * 1.1 * 1.1 * 1.1 * 1.1).abs() < 1e-15);
    }
}
