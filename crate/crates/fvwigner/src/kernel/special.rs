//! Associated Laguerre polynomials by stable forward recurrence.

/// Associated Laguerre polynomial `L_n^{(alpha)}(x)`.
///
/// Forward recurrence in the degree; valid for `alpha >= -n` (integer offset).
pub fn laguerre(n: usize, alpha: i64, x: f64) -> f64 {
    assert!(alpha >= -(n as i64), "laguerre needs alpha >= -n");
    let a = alpha as f64;
    if n == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0;
    let mut l = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let lp1 = ((2.0 * kf + 1.0 + a - x) * l - (kf + a) * lm1) / (kf + 1.0);
        lm1 = l;
        l = lp1;
    }
    l
}

/// `L_n^{(alpha)}(x) * exp(-x/2)` for `n = 0..count`, written into `out`.
///
/// The scaled recurrence keeps every intermediate bounded for `x >= 0`.
pub fn scaled_laguerre_seq(alpha: i64, x: f64, out: &mut [f64]) {
    let count = out.len();
    if count == 0 {
        return;
    }
    let a = alpha as f64;
    let e = (-x / 2.0).exp();
    out[0] = e;
    if count == 1 {
        return;
    }
    out[1] = (1.0 + a - x) * e;
    for k in 1..count - 1 {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0 + a - x) * out[k] - (kf + a) * out[k - 1]) / (kf + 1.0);
    }
}

/// `sqrt(lo! / hi!)` for `lo <= hi`, computed as a running product to avoid
/// factorial overflow.
pub fn factorial_ratio_sqrt(lo: usize, hi: usize) -> f64 {
    debug_assert!(lo <= hi);
    let mut acc = 1.0f64;
    for k in lo + 1..=hi {
        acc /= k as f64;
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        for &(alpha, x) in &[(0i64, 0.3), (2, 1.7), (5, 0.9)] {
            assert!((laguerre(0, alpha, x) - 1.0).abs() < 1e-15);
            assert!((laguerre(1, alpha, x) - (1.0 + alpha as f64 - x)).abs() < 1e-15);
        }
        assert!((laguerre(1, -1, 0.9) - (-0.9)).abs() < 1e-15);
        // L_2^0(2) = 1 - 2x + x^2/2 at x=2 -> 1 - 4 + 2 = -1
        assert!((laguerre(2, 0, 2.0) - (-1.0)).abs() < 1e-15);
    }

    #[test]
    fn scaled_matches_plain() {
        let x = 7.3;
        let mut buf = vec![0.0; 12];
        scaled_laguerre_seq(3, x, &mut buf);
        for (n, v) in buf.iter().enumerate() {
            let want = laguerre(n, 3, x) * (-x / 2.0).exp();
            assert!((v - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn scaled_bounded_for_plain_laguerre() {
        // |L_n(x) e^{-x/2}| <= 1 for x >= 0
        let mut buf = vec![0.0; 400];
        for &x in &[0.0, 0.5, 4.0, 40.0, 160.0] {
            scaled_laguerre_seq(0, x, &mut buf);
            for v in &buf {
                assert!(v.abs() <= 1.0 + 1e-12, "x={x}: {v}");
            }
        }
    }
}
