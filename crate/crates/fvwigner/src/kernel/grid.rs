//! Uniform periodic phase-space grids and complex fields sampled on them.
//!
//! A [`PhaseGrid`] is index-centered: `p_i = (i - n_p/2) dp`,
//! `q_j = (j - n_q/2) dq`, so the phase-space origin sits at index
//! `(n_p/2, n_q/2)`. The wavenumber axis dual to `q` has spacing
//! `dk = 2 pi / (n_q dq)` and the same centering.

use super::fft::CenteredFft;
use crate::{FvError, PhysicalScales, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Which functional representation a [`PhaseField`] is stored in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// Samples `W(p_i, q_j)`.
    Direct,
    /// Coefficients `Wt(p_i, k_t)` with `W(p, q) = sum_t Wt(p, k_t) exp(+i k_t q)`.
    Mixed,
}

/// Uniform periodic (p, q) grid with Fourier-dual bookkeeping (d = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    n_p: usize,
    n_q: usize,
    p_extent: f64,
    q_extent: f64,
    dp: f64,
    dq: f64,
    hbar: f64,
}

fn check_size(n: usize, name: &str) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(FvError::InvalidGrid(format!(
            "{name} must be a power of two >= 8, got {n}"
        )));
    }
    Ok(())
}

impl PhaseGrid {
    /// General rectangular grid with half-widths `p_extent`, `q_extent`.
    pub fn new(
        n_p: usize,
        n_q: usize,
        p_extent: f64,
        q_extent: f64,
        scales: &PhysicalScales,
    ) -> Result<Arc<Self>> {
        check_size(n_p, "n_p")?;
        check_size(n_q, "n_q")?;
        if !(p_extent > 0.0 && p_extent.is_finite()) || !(q_extent > 0.0 && q_extent.is_finite()) {
            return Err(FvError::InvalidGrid(format!(
                "extents must be positive, got p_extent={p_extent}, q_extent={q_extent}"
            )));
        }
        Ok(Arc::new(Self {
            n_p,
            n_q,
            p_extent,
            q_extent,
            dp: 2.0 * p_extent / n_p as f64,
            dq: 2.0 * q_extent / n_q as f64,
            hbar: scales.hbar,
        }))
    }

    /// Square star-capable grid: `n_p = n_q = n` and the momentum spacing is
    /// the exact Fourier dual of the position spacing, `dp dq = 2 pi hbar / n`.
    pub fn dual_square(n: usize, q_extent: f64, scales: &PhysicalScales) -> Result<Arc<Self>> {
        check_size(n, "n")?;
        if !(q_extent > 0.0 && q_extent.is_finite()) {
            return Err(FvError::InvalidGrid(format!("q_extent must be positive, got {q_extent}")));
        }
        let dq = 2.0 * q_extent / n as f64;
        let dp = 2.0 * PI * scales.hbar / (n as f64 * dq);
        Ok(Arc::new(Self {
            n_p: n,
            n_q: n,
            p_extent: 0.5 * n as f64 * dp,
            q_extent,
            dp,
            dq,
            hbar: scales.hbar,
        }))
    }

    /// Star-capable grid covering `+-extent_in_a` oscillator lengths in `q`
    /// and the dual range in `p` (which covers the same range in `a` units
    /// whenever `extent_in_a <= sqrt(pi n / 2)`).
    pub fn dual_for_oscillator(
        n: usize,
        extent_in_a: f64,
        scales: &PhysicalScales,
    ) -> Result<Arc<Self>> {
        let a = scales.osc_length()?;
        Self::dual_square(n, extent_in_a * a, scales)
    }

    pub fn n_p(&self) -> usize { self.n_p }
    pub fn n_q(&self) -> usize { self.n_q }
    pub fn p_extent(&self) -> f64 { self.p_extent }
    pub fn q_extent(&self) -> f64 { self.q_extent }
    pub fn dp(&self) -> f64 { self.dp }
    pub fn dq(&self) -> f64 { self.dq }
    pub fn hbar(&self) -> f64 { self.hbar }

    /// Wavenumber spacing dual to the `q` axis.
    pub fn dk(&self) -> f64 {
        2.0 * PI / (self.n_q as f64 * self.dq)
    }

    pub fn p(&self, i: usize) -> f64 {
        (i as f64 - self.n_p as f64 / 2.0) * self.dp
    }

    pub fn q(&self, j: usize) -> f64 {
        (j as f64 - self.n_q as f64 / 2.0) * self.dq
    }

    pub fn k(&self, t: usize) -> f64 {
        (t as f64 - self.n_q as f64 / 2.0) * self.dk()
    }

    /// Area element `dp dq`.
    pub fn cell(&self) -> f64 {
        self.dp * self.dq
    }

    /// True when the star-product engine can run on this grid.
    pub fn is_star_capable(&self) -> bool {
        self.n_p == self.n_q
            && (self.dp * self.dq * self.n_p as f64 / (2.0 * PI * self.hbar) - 1.0).abs() < 1e-12
    }

    pub fn require_star_capable(&self) -> Result<()> {
        if self.is_star_capable() {
            Ok(())
        } else {
            Err(FvError::GridNotStarCapable(format!(
                "n_p={}, n_q={}, dp*dq*n/(2 pi hbar)={:.6}",
                self.n_p,
                self.n_q,
                self.dp * self.dq * self.n_p as f64 / (2.0 * PI * self.hbar)
            )))
        }
    }
}

/// Complex-valued function sampled on a [`PhaseGrid`]; rows index `p`,
/// columns index `q` (or the dual wavenumber `k` in the mixed representation).
#[derive(Debug, Clone)]
pub struct PhaseField {
    grid: Arc<PhaseGrid>,
    values: Array2<C64>,
    rep: Representation,
}

impl PhaseField {
    pub fn zeros(grid: Arc<PhaseGrid>) -> Self {
        let values = Array2::zeros((grid.n_p(), grid.n_q()));
        Self { grid, values, rep: Representation::Direct }
    }

    /// Sample `f(p, q)` on the grid (direct representation).
    pub fn from_fn(grid: Arc<PhaseGrid>, f: impl Fn(f64, f64) -> C64) -> Self {
        let mut values = Array2::zeros((grid.n_p(), grid.n_q()));
        for i in 0..grid.n_p() {
            let p = grid.p(i);
            for j in 0..grid.n_q() {
                values[(i, j)] = f(p, grid.q(j));
            }
        }
        Self { grid, values, rep: Representation::Direct }
    }

    pub fn from_values(grid: Arc<PhaseGrid>, values: Array2<C64>, rep: Representation) -> Result<Self> {
        if values.dim() != (grid.n_p(), grid.n_q()) {
            return Err(FvError::InvalidGrid(format!(
                "value shape {:?} does not match grid ({}, {})",
                values.dim(),
                grid.n_p(),
                grid.n_q()
            )));
        }
        Ok(Self { grid, values, rep })
    }

    pub fn grid(&self) -> &Arc<PhaseGrid> { &self.grid }
    pub fn values(&self) -> &Array2<C64> { &self.values }
    pub fn values_mut(&mut self) -> &mut Array2<C64> { &mut self.values }
    pub fn representation(&self) -> Representation { self.rep }

    pub fn same_grid(&self, other: &PhaseField) -> bool {
        self.grid == other.grid
    }

    /// Transform `q -> k` (direct to mixed), reusing the supplied FFT cache.
    pub fn to_mixed_with(&self, fft: &mut CenteredFft) -> PhaseField {
        assert_eq!(self.rep, Representation::Direct, "field already mixed");
        let n_q = self.grid.n_q();
        let mut values = self.values.clone();
        for mut row in values.rows_mut() {
            let buf = row.as_slice_mut().expect("row-major layout");
            fft.forward(buf);
            for v in buf.iter_mut() {
                *v /= n_q as f64;
            }
        }
        PhaseField { grid: self.grid.clone(), values, rep: Representation::Mixed }
    }

    /// Transform `k -> q` (mixed to direct).
    pub fn to_direct_with(&self, fft: &mut CenteredFft) -> PhaseField {
        assert_eq!(self.rep, Representation::Mixed, "field already direct");
        let mut values = self.values.clone();
        for mut row in values.rows_mut() {
            let buf = row.as_slice_mut().expect("row-major layout");
            fft.inverse(buf);
        }
        PhaseField { grid: self.grid.clone(), values, rep: Representation::Direct }
    }

    pub fn to_mixed(&self) -> PhaseField {
        self.to_mixed_with(&mut CenteredFft::new())
    }

    pub fn to_direct(&self) -> PhaseField {
        self.to_direct_with(&mut CenteredFft::new())
    }

    /// Largest magnitude on the grid.
    pub fn peak(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest edge magnitude relative to the peak; the boundary-decay
    /// contract for spectral operations is `boundary_ratio() <= 1e-10`.
    pub fn boundary_ratio(&self) -> f64 {
        let (np, nq) = self.values.dim();
        let mut edge = 0.0f64;
        for j in 0..nq {
            edge = edge.max(self.values[(0, j)].norm()).max(self.values[(np - 1, j)].norm());
        }
        for i in 0..np {
            edge = edge.max(self.values[(i, 0)].norm()).max(self.values[(i, nq - 1)].norm());
        }
        let peak = self.peak();
        if peak == 0.0 { 0.0 } else { edge / peak }
    }

    /// `sum W dp dq` (direct representation).
    pub fn integrate(&self) -> C64 {
        assert_eq!(self.rep, Representation::Direct);
        self.values.iter().sum::<C64>() * C64::from(self.grid.cell())
    }

    /// `sum p^kp q^kq W dp dq`.
    pub fn weighted_integral(&self, k_p: u32, k_q: u32) -> C64 {
        assert_eq!(self.rep, Representation::Direct);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.grid.n_p() {
            let pw = self.grid.p(i).powi(k_p as i32);
            for j in 0..self.grid.n_q() {
                acc += self.values[(i, j)] * (pw * self.grid.q(j).powi(k_q as i32));
            }
        }
        acc * C64::from(self.grid.cell())
    }

    /// Max pointwise |self - other|.
    pub fn max_abs_diff(&self, other: &PhaseField) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&mut self, s: C64) {
        self.values.mapv_inplace(|v| v * s);
    }
}
