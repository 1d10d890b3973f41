//! Floating-point comparison helpers shared by every module.

/// Relative tolerance for comparing two derived quantities.
pub const REL: f64 = 1e-9;
/// Absolute fallback near zero.
pub const ABS: f64 = 1e-12;

#[inline]
fn slack(a: f64, b: f64) -> f64 {
    (REL * a.abs().max(b.abs())).max(ABS)
}

/// `a` and `b` agree to `REL` (or `ABS` near zero).
#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= slack(a, b)
}

/// `a < b` by more than the tolerance.
#[inline]
pub fn definitely_less(a: f64, b: f64) -> bool {
    a < b - slack(a, b)
}

/// `a <= b` up to the tolerance.
#[inline]
pub fn less_or_close(a: f64, b: f64) -> bool {
    !definitely_less(b, a)
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both are zero.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
