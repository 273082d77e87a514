/// Edge and tree costs. All benchmark data is integral.
pub type Cost = u64;

/// Sentinel for "no path" / "no label yet". Arithmetic involving it saturates.
pub const INFINITY: Cost = Cost::MAX;

#[inline]
pub fn add(a: Cost, b: Cost) -> Cost {
    a.saturating_add(b)
}

#[inline]
pub fn is_finite(c: Cost) -> bool {
    c != INFINITY
}
