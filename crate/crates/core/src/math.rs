//! Float helpers that `core` does not provide.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `r^p` given `r2 = r^2` and an integer exponent `p >= 0`.
#[inline]
pub(crate) fn dist_pow(r2: f64, p: usize) -> f64 {
    let half = powi(r2, p / 2);
    if p % 2 == 1 {
        half * sqrt(r2)
    } else {
        half
    }
}

#[inline]
pub(crate) fn powi(mut base: f64, mut exp: usize) -> f64 {
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

#[inline]
pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dist_pow_matches_direct() {
        for p in 0..7 {
            let r: f64 = 1.7;
            let want = r.powi(p as i32);
            assert!((dist_pow(r * r, p) - want).abs() < 1e-12 * want);
        }
    }
}
