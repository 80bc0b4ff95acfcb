//! Hermite functions and Gauss–Hermite quadrature for the oracle.
//!
//! Kept separate from the kernel's Laguerre machinery on purpose: oracle
//! routes must not share formulas with the code they validate.

/// Orthonormal Hermite functions `phi_0..=phi_nmax` at `x`
/// (`phi_n = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi))`), all bounded.
pub fn hermite_functions(nmax: usize, x: f64, out: &mut [f64]) {
    debug_assert!(out.len() > nmax);
    out[0] = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    if nmax == 0 {
        return;
    }
    out[1] = 2.0f64.sqrt() * x * out[0];
    for k in 1..nmax {
        out[k + 1] = (2.0 / (k as f64 + 1.0)).sqrt() * x * out[k]
            - (k as f64 / (k as f64 + 1.0)).sqrt() * out[k - 1];
    }
}

/// Gauss–Hermite rule of the given order, returned as nodes plus *modified*
/// weights `w~_i = w_i e^{x_i^2}`, so that
/// `integral F(x) dx ~= sum_i w~_i F(x_i)` is exact for
/// `F = polynomial(deg <= 2 order - 1) * e^{-x^2}`.
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut phi = vec![0.0; n + 1];
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        // initial guesses for roots in decreasing order (largest first)
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[n - 1],
            3 => 1.91 * z - 0.91 * nodes[n - 2],
            _ => 2.0 * z - nodes[n - i + 1],
        };
        // Newton iteration on the bounded Hermite functions
        for _ in 0..200 {
            hermite_functions(n, z, &mut phi);
            let deriv = (2.0 * n as f64).sqrt() * phi[n - 1] - z * phi[n];
            let dz = phi[n] / deriv;
            z -= dz;
            if dz.abs() < 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        hermite_functions(n, z, &mut phi);
        let w = 1.0 / (n as f64 * phi[n - 1] * phi[n - 1]);
        nodes[n - 1 - i] = z;
        nodes[i] = -z;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        // the central node is exactly zero
        nodes[n / 2] = 0.0;
        hermite_functions(n, 0.0, &mut phi);
        weights[n / 2] = 1.0 / (n as f64 * phi[n - 1] * phi[n - 1]);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functions_orthonormal() {
        let (x, w) = gauss_hermite(80);
        let mut phi = vec![0.0; 13];
        let mut gram = [[0.0f64; 6]; 6];
        for (xi, wi) in x.iter().zip(&w) {
            hermite_functions(12, *xi, &mut phi);
            for (a, row) in gram.iter_mut().enumerate() {
                for (b, g) in row.iter_mut().enumerate() {
                    *g += wi * phi[a] * phi[b];
                }
            }
        }
        for (a, row) in gram.iter().enumerate() {
            for (b, g) in row.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-13, "gram[{a}][{b}] = {g}");
            }
        }
    }

    #[test]
    fn integrates_gaussian_moments() {
        // integral x^2 e^{-x^2} dx = sqrt(pi)/2
        let (x, w) = gauss_hermite(24);
        let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi * xi * (-xi * xi).exp()).sum();
        assert!((got - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn high_order_is_finite() {
        let (x, w) = gauss_hermite(300);
        assert!(x.iter().all(|v| v.is_finite()));
        assert!(w.iter().all(|v| v.is_finite() && *v > 0.0));
    }
}
