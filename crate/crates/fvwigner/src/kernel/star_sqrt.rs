//! Star square root of oscillator-type symbols.
//!
//! For a symbol `A` diagonal in the oscillator Fock basis the star algebra
//! diagonalizes: `A = sum_n lambda_n Sym(|n><n|)` and the square root is the
//! resummation of `sqrt(lambda_n)` over the same eigen-symbols. Eigenvalues
//! are measured from the grid (`lambda_n = integral A T_nn dp dq`); the tail
//! beyond the measurable levels is extended by an affine model of the
//! measured sequence, which is exact on the supported domain
//! (`1 + (2/mc^2) H_osc`-type symbols have `lambda_n` affine in `n`).

use super::grid::{PhaseField, Representation};
use super::symbols::{fock_diagonal_from_symbol, resum_diagonal_law};
use crate::{FvError, PhysicalScales, Result};

#[derive(Debug, Clone)]
pub struct StarSqrtReport {
    /// Eigenvalues measured from the input symbol.
    pub eigenvalues: Vec<f64>,
    /// Largest imaginary part seen in the eigenvalue extraction.
    pub max_imag: f64,
    /// Residual of the affine tail model over the fitted segment.
    pub tail_model_residual: f64,
    /// Euler tail estimate of the square-root resummation.
    pub resum_tail: f64,
}

/// Number of Fock levels whose eigenvalues the grid can resolve: the level's
/// classical turning circle (with a decay margin) must fit inside the extent,
/// and its fastest radial oscillation must stay below both Nyquist limits.
fn resolvable_levels(field: &PhaseField, scales: &PhysicalScales) -> Result<usize> {
    let a = scales.osc_length()?;
    let hbar = scales.hbar;
    let g = field.grid();
    let ext = g.q_extent().min(g.p_extent() * a * a / hbar);
    let n_ext = ((ext / (1.5 * a)).powi(2) / 2.0).floor() as usize;
    // wavenumber of T_nn is at most 2 sqrt(2n+1) in the respective axis units
    let cap = |k_nyquist: f64| (((k_nyquist / 2.2).powi(2) - 1.0) / 2.0).floor().max(0.0) as usize;
    let n_q = cap(std::f64::consts::PI / g.dq() * a);
    let n_p = cap(std::f64::consts::PI / g.dp() * hbar / a);
    Ok(n_ext.min(n_q).min(n_p).clamp(2, 64))
}

/// `X` with `X * X = A` for positive Fock-diagonal `A`, plus a report.
pub fn star_sqrt_with_report(
    a: &PhaseField,
    scales: &PhysicalScales,
    tol: f64,
) -> Result<(PhaseField, StarSqrtReport)> {
    assert_eq!(a.representation(), Representation::Direct);
    let n_eig = resolvable_levels(a, scales)?;
    let lam_c = fock_diagonal_from_symbol(a, n_eig, scales)?;
    let max_imag = lam_c.iter().map(|l| l.im.abs()).fold(0.0, f64::max);
    let mut lam: Vec<f64> = lam_c.iter().map(|l| l.re).collect();
    let scale = lam.iter().fold(0.0f64, |m, &v| m.max(v.abs()));

    // Tail behavior: decayed sequences are truncated, growing ones extended
    // by an affine fit of the last measured quarter.
    let decayed = lam[n_eig - 1].abs() <= 1e-10 * scale;
    if decayed {
        // values at the measurement noise floor carry no sign information
        for l in lam.iter_mut() {
            if l.abs() <= 1e-13 * scale {
                *l = 0.0;
            }
        }
    }
    for (n, &l) in lam.iter().enumerate() {
        if l < 0.0 {
            return Err(FvError::Domain(format!(
                "star_sqrt needs a positive symbol; Fock eigenvalue lambda_{n} = {l:.6e}"
            )));
        }
    }
    let seg = (n_eig / 4).max(2);
    let ks: Vec<f64> = (n_eig - seg..n_eig).map(|k| k as f64).collect();
    let mean_k = ks.iter().sum::<f64>() / seg as f64;
    let mean_l = lam[n_eig - seg..].iter().sum::<f64>() / seg as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, l) in ks.iter().zip(&lam[n_eig - seg..]) {
        num += (k - mean_k) * (l - mean_l);
        den += (k - mean_k) * (k - mean_k);
    }
    let slope = num / den;
    let mut resid = 0.0f64;
    for (k, l) in ks.iter().zip(&lam[n_eig - seg..]) {
        resid = resid.max((mean_l + slope * (k - mean_k) - l).abs());
    }
    if !decayed {
        if resid > tol * scale {
            return Err(FvError::NonConvergent { tail: resid, tol: tol * scale });
        }
        // extended eigenvalues must stay positive
        if slope < 0.0 {
            return Err(FvError::Domain(
                "eigenvalue sequence decreases without decaying; tail sign uncertain".into(),
            ));
        }
    }

    let lam_local = lam.clone();
    let law = move |k: usize| -> f64 {
        if k < lam_local.len() {
            lam_local[k].sqrt()
        } else if decayed {
            0.0
        } else {
            (mean_l + slope * (k as f64 - mean_k)).max(0.0).sqrt()
        }
    };
    let (field, diag) = resum_diagonal_law(&law, a.grid(), scales)?;
    if diag.tail_estimate > tol * scale.sqrt().max(1.0) {
        return Err(FvError::NonConvergent { tail: diag.tail_estimate, tol });
    }
    Ok((
        field,
        StarSqrtReport {
            eigenvalues: lam,
            max_imag,
            tail_model_residual: resid,
            resum_tail: diag.tail_estimate,
        },
    ))
}

/// Star square root; see [`star_sqrt_with_report`].
pub fn star_sqrt(a: &PhaseField, scales: &PhysicalScales, tol: f64) -> Result<PhaseField> {
    Ok(star_sqrt_with_report(a, scales, tol)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::grid::PhaseGrid;
    use crate::kernel::star::star_product;
    use crate::kernel::symbols::fock_diagonal_to_symbol;
    use crate::kernel::symbols::TailMode;
    use num_complex::Complex64 as C64;

    fn scales() -> PhysicalScales {
        PhysicalScales::canonical(1.0).unwrap()
    }

    #[test]
    fn constant_symbol() {
        let s = scales();
        let g = PhaseGrid::dual_square(64, 8.0, &s).unwrap();
        let four = PhaseField::from_fn(g.clone(), |_, _| C64::from(4.0));
        let x = star_sqrt(&four, &s, 1e-7).unwrap();
        let mut worst = 0.0f64;
        for v in x.values() {
            worst = worst.max((v - C64::from(2.0)).norm());
        }
        assert!(worst <= 1e-7, "constant sqrt defect {worst}");
    }

    #[test]
    fn identity_symbol() {
        let s = scales();
        let g = PhaseGrid::dual_square(64, 8.0, &s).unwrap();
        let one = PhaseField::from_fn(g.clone(), |_, _| C64::from(1.0));
        let x = star_sqrt(&one, &s, 1e-7).unwrap();
        let mut worst = 0.0f64;
        for v in x.values() {
            worst = worst.max((v - C64::from(1.0)).norm());
        }
        assert!(worst <= 1e-7);
    }

    #[test]
    fn oscillator_family_eigenvalues() {
        // A = 1 + 2 b Hbar-symbol: X eigenvalues sqrt(1 + (2n+1) b), n <= 10, b = 0.1.
        // A dense plain grid: eigenvalue extraction needs resolution, not duality.
        let s = scales();
        let b = 0.1;
        let g = PhaseGrid::new(256, 256, 10.0, 10.0, &s).unwrap();
        let a_len = s.osc_length().unwrap();
        let sym = PhaseField::from_fn(g.clone(), |p, q| {
            let hbar_osc = 0.5 * (q * q / (a_len * a_len) + a_len * a_len * p * p / (s.hbar * s.hbar));
            C64::from(1.0 + 2.0 * b * hbar_osc)
        });
        let (x, report) = star_sqrt_with_report(&sym, &s, 1e-8).unwrap();
        assert!(report.max_imag < 1e-12);
        let got = fock_diagonal_from_symbol(&x, 11, &s).unwrap();
        for (n, g_) in got.iter().enumerate() {
            let want = (1.0 + (2.0 * n as f64 + 1.0) * b).sqrt();
            assert!(
                (g_.re - want).abs() / want <= 1e-9 && g_.im.abs() < 1e-12,
                "n={n}: {g_} vs {want}"
            );
        }
    }

    #[test]
    fn sqrt_of_square_recovers_decaying_symbol() {
        // X from geometric Fock eigenvalues mu_n = r^n; star_sqrt(X * X) = X
        let s = scales();
        let g = PhaseGrid::dual_square(128, 12.0, &s).unwrap();
        let mu: Vec<f64> = (0..48).map(|n| 0.25f64.powi(n as i32)).collect();
        let (x, _) = fock_diagonal_to_symbol(&mu, &g, &s, TailMode::Truncated).unwrap();
        let xx = star_product(&x, &x, &s).unwrap();
        // squaring halves the usable digits of the faint levels, so the
        // roundtrip is good to ~sqrt(grid noise) rather than grid noise
        let back = star_sqrt(&xx, &s, 1e-6).unwrap();
        assert!(back.max_abs_diff(&x) <= 1e-6 * x.peak(), "defect {}", back.max_abs_diff(&x));
    }

    #[test]
    fn negative_eigenvalue_rejected() {
        let s = scales();
        let g = PhaseGrid::dual_square(64, 8.0, &s).unwrap();
        let bad = PhaseField::from_fn(g, |_, _| C64::from(-1.0));
        assert!(matches!(star_sqrt(&bad, &s, 1e-8), Err(FvError::Domain(_))));
    }
}
