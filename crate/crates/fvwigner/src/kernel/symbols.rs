//! Weyl symbols of Fock-space operators on phase-space grids.
//!
//! The symbol of `|m><n|` is `2 pi hbar T_{m,n}(p,q)`; diagonal operators
//! `sum_n f_n |n><n|` therefore have radial symbols
//! `sum_n f_n 2 (-1)^n L_n(4 Hbar) exp(-2 Hbar)` with
//! `Hbar = (q^2/a^2 + a^2 p^2/hbar^2)/2`.
//!
//! For an infinite eigenvalue sequence that sum is only Abel-convergent:
//! the terms oscillate with slowly decaying amplitude. The extrapolated mode
//! resums it by iterated averaging of the partial-sum sequence (Euler
//! acceleration), which converges to machine precision for polynomially
//! bounded `f_n`; the truncated mode returns the exact symbol of the
//! truncated operator, which is what star-product evolution needs.

use super::grid::{PhaseField, PhaseGrid, Representation};
use super::special::{factorial_ratio_sqrt, scaled_laguerre_seq};
use crate::{FvError, PhysicalScales, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Tail handling for [`fock_diagonal_to_symbol`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMode {
    /// Symbol of the truncated operator `sum_{n<N} f_n |n><n|`, exactly.
    Truncated,
    /// Euler-accelerated limit of the full series, extending `f_n` beyond the
    /// supplied entries by an affine fit of its last segment.
    Extrapolated,
}

#[derive(Debug, Clone, Copy)]
pub struct SymbolDiagnostics {
    /// Estimated magnitude of the neglected tail (max over the grid).
    pub tail_estimate: f64,
    /// Number of series terms consumed.
    pub terms_used: usize,
}

/// `x = 4 Hbar` at a grid point.
fn x_of(p: f64, q: f64, a: f64, hbar: f64) -> f64 {
    2.0 * (q * q / (a * a) + a * a * p * p / (hbar * hbar))
}

/// Euler resummation window. 64 averaging levels gain roughly a factor
/// `sqrt(x / m_sum)` each, which is machine precision for `m_sum >= 4 x`.
const EULER_WINDOW: usize = 64;

/// Resum `sum_k f(k) * 2 (-1)^k L_k(x) e^{-x/2}` over the grid.
fn resum_radial(
    f: &dyn Fn(usize) -> f64,
    m_sum: usize,
    window: usize,
    grid: &PhaseGrid,
    scales: &PhysicalScales,
) -> Result<(Array2<C64>, SymbolDiagnostics)> {
    let a = scales.osc_length()?;
    let hbar = scales.hbar;
    let (np, nq) = (grid.n_p(), grid.n_q());
    let mut out = Array2::zeros((np, nq));
    let w = window.min(m_sum);
    let mut ring = vec![0.0f64; w];
    let mut tail_worst = 0.0f64;
    for i in 0..np {
        let p = grid.p(i);
        for j in 0..nq {
            let x = x_of(p, grid.q(j), a, hbar);
            // partial sums with the scaled Laguerre recurrence inlined
            let e = (-x / 2.0).exp();
            let mut lm1 = e;
            let mut l = (1.0 - x) * e;
            let mut s = 0.0f64;
            for k in 0..m_sum {
                let lk = match k {
                    0 => lm1,
                    1 => l,
                    _ => {
                        let kf = (k - 1) as f64;
                        let lp = ((2.0 * kf + 1.0 - x) * l - kf * lm1) / (kf + 1.0);
                        lm1 = l;
                        l = lp;
                        lp
                    }
                };
                let sign = if k % 2 == 0 { 2.0 } else { -2.0 };
                s += f(k) * sign * lk;
                if k + w >= m_sum {
                    ring[k + w - m_sum] = s;
                }
            }
            if w == 1 {
                out[(i, j)] = C64::from(ring[0]);
                continue;
            }
            // iterated averaging of the tail of the partial-sum sequence
            let mut len = w;
            let mut prev_last = ring[len - 1];
            while len > 1 {
                for t in 0..len - 1 {
                    ring[t] = 0.5 * (ring[t] + ring[t + 1]);
                }
                len -= 1;
                prev_last = if len > 1 { ring[len - 1] } else { prev_last };
            }
            let est = ring[0];
            tail_worst = tail_worst.max((est - prev_last).abs());
            out[(i, j)] = C64::from(est);
        }
    }
    Ok((out, SymbolDiagnostics { tail_estimate: tail_worst, terms_used: m_sum }))
}

fn corner_x(grid: &PhaseGrid, scales: &PhysicalScales) -> Result<f64> {
    let a = scales.osc_length()?;
    Ok(x_of(grid.p_extent(), grid.q_extent(), a, scales.hbar))
}

/// Weyl symbol of the diagonal operator `sum_n f[n] |n><n|`.
pub fn fock_diagonal_to_symbol(
    f: &[f64],
    grid: &Arc<PhaseGrid>,
    scales: &PhysicalScales,
    tail: TailMode,
) -> Result<(PhaseField, SymbolDiagnostics)> {
    if f.is_empty() {
        return Err(FvError::Domain("empty eigenvalue sequence".into()));
    }
    let (values, diag) = match tail {
        TailMode::Truncated => {
            let fv = f.to_vec();
            resum_radial(&move |k| fv[k], f.len(), 1, grid, scales)?
        }
        TailMode::Extrapolated => {
            // affine extension of the last segment
            let n = f.len();
            let seg = n.min(8).max(2);
            let ks: Vec<f64> = (n - seg..n).map(|k| k as f64).collect();
            let mean_k = ks.iter().sum::<f64>() / seg as f64;
            let mean_f = f[n - seg..].iter().sum::<f64>() / seg as f64;
            let mut num = 0.0;
            let mut den = 0.0;
            for (k, fv) in ks.iter().zip(&f[n - seg..]) {
                num += (k - mean_k) * (fv - mean_f);
                den += (k - mean_k) * (k - mean_k);
            }
            let slope = if den > 0.0 { num / den } else { 0.0 };
            let fv = f.to_vec();
            let ext = move |k: usize| {
                if k < fv.len() {
                    fv[k]
                } else {
                    mean_f + slope * (k as f64 - mean_k)
                }
            };
            let x_max = corner_x(grid, scales)?;
            let m_sum = (4.0 * x_max).ceil() as usize + 2048;
            resum_radial(&ext, m_sum, EULER_WINDOW, grid, scales)?
        }
    };
    Ok((
        PhaseField::from_values(grid.clone(), values, Representation::Direct)?,
        diag,
    ))
}

/// Resum with a caller-supplied eigenvalue law (used by the star square root).
pub(crate) fn resum_diagonal_law(
    f: &dyn Fn(usize) -> f64,
    grid: &Arc<PhaseGrid>,
    scales: &PhysicalScales,
) -> Result<(PhaseField, SymbolDiagnostics)> {
    let x_max = corner_x(grid, scales)?;
    let m_sum = (4.0 * x_max).ceil() as usize + 2048;
    let (values, diag) = resum_radial(f, m_sum, EULER_WINDOW, grid, scales)?;
    Ok((
        PhaseField::from_values(grid.clone(), values, Representation::Direct)?,
        diag,
    ))
}

/// Fock eigenvalues of a (diagonal-in-Fock) symbol:
/// `lambda_n = integral A T_{n,n} dp dq` for `n < count`.
pub fn fock_diagonal_from_symbol(
    field: &PhaseField,
    count: usize,
    scales: &PhysicalScales,
) -> Result<Vec<C64>> {
    assert_eq!(field.representation(), Representation::Direct);
    let grid = field.grid();
    let a = scales.osc_length()?;
    let hbar = scales.hbar;
    let cell = grid.cell();
    let mut lam = vec![C64::new(0.0, 0.0); count];
    let mut lag = vec![0.0f64; count];
    for i in 0..grid.n_p() {
        let p = grid.p(i);
        for j in 0..grid.n_q() {
            let x = x_of(p, grid.q(j), a, hbar);
            scaled_laguerre_seq(0, x, &mut lag);
            let v = field.values()[(i, j)];
            for (n, ln) in lag.iter().enumerate() {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                lam[n] += v * (sign * ln / (PI * hbar) * cell);
            }
        }
    }
    Ok(lam)
}

/// Accumulate `sum_{m,n} coeff[(m,n)] T_{m,n}(p,q)` over the grid.
///
/// Cost is `O(N^2)` per grid point through per-diagonal Laguerre recurrences.
pub fn accumulate_quasiprob(
    coeff: &Array2<C64>,
    grid: &Arc<PhaseGrid>,
    scales: &PhysicalScales,
) -> Result<PhaseField> {
    let n = coeff.nrows();
    if coeff.ncols() != n {
        return Err(FvError::Domain("coefficient matrix must be square".into()));
    }
    let a = scales.osc_length()?;
    let hbar = scales.hbar;
    let mut values = Array2::zeros((grid.n_p(), grid.n_q()));
    let rt2 = 2.0f64.sqrt();
    // prefactors sqrt(lo!/hi!) per (alpha, lo)
    let mut pref = vec![vec![0.0f64; 0]; n];
    for (alpha, row) in pref.iter_mut().enumerate() {
        *row = (0..n - alpha).map(|lo| factorial_ratio_sqrt(lo, lo + alpha)).collect();
    }
    let mut lag = vec![0.0f64; n];
    for i in 0..grid.n_p() {
        let p = grid.p(i);
        for j in 0..grid.n_q() {
            let q = grid.q(j);
            let z = C64::new(q / a, a * p / hbar) / rt2;
            let two_z = z * 2.0;
            let x = 4.0 * z.norm_sqr();
            let mut zs_pow = C64::new(1.0, 0.0);
            let mut acc = C64::new(0.0, 0.0);
            for alpha in 0..n {
                scaled_laguerre_seq(alpha as i64, x, &mut lag[..n - alpha]);
                for m in 0..n - alpha {
                    // T_{m, m+alpha} = (-1)^m/(pi hbar) sqrt(m!/(m+alpha)!) (2z)^alpha l_m^(alpha)(x)
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    let t = zs_pow * (sign * pref[alpha][m] * lag[m] / (PI * hbar));
                    acc += coeff[(m, m + alpha)] * t;
                    if alpha > 0 {
                        acc += coeff[(m + alpha, m)] * t.conj();
                    }
                }
                zs_pow *= two_z;
            }
            values[(i, j)] = acc;
        }
    }
    PhaseField::from_values(grid.clone(), values, Representation::Direct)
}

/// Minimum `q` half-width resolving oscillator levels below `n_levels`.
pub fn required_extent_for_levels(n_levels: usize, scales: &PhysicalScales) -> Result<f64> {
    let a = scales.osc_length()?;
    Ok(1.5 * a * (2.0 * n_levels as f64).sqrt())
}
